import itertools
import json
import logging
from concurrent.futures import ThreadPoolExecutor

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from relgas import eos
from relgas.conf import relgas_settings
from relgas.exceptions import RelgasError
from relgas.formatting import write_csv, write_json
from relgas.serializers import QUANTITY_CHOICES, TableRequestSerializer, ThermoRecordSerializer

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Tabulate the equation of state over a (T, mu) grid at fixed mass, rows ordered T-major."

    def add_arguments(self, parser):
        parser.add_argument("--mass", type=float, required=True)
        parser.add_argument("--stat", default="fermion")
        parser.add_argument("--t-min", dest="t_min", type=float, required=True)
        parser.add_argument("--t-max", dest="t_max", type=float, required=True)
        parser.add_argument("--t-count", dest="t_count", type=int, required=True)
        parser.add_argument("--t-spacing", dest="t_spacing", default="linear", help="linear or log")
        parser.add_argument("--mu-min", dest="mu_min", type=float, default=0.0)
        parser.add_argument("--mu-max", dest="mu_max", type=float, default=0.0)
        parser.add_argument("--mu-count", dest="mu_count", type=int, default=1)
        parser.add_argument("--method", default="auto")
        parser.add_argument("--format", dest="format", default="csv", help="csv or json")
        parser.add_argument(
            "--quantities", default=",".join(QUANTITY_CHOICES), help="Comma-separated subset of P,n,sc,s,eps"
        )
        parser.add_argument("--rtol", type=float, default=None)
        parser.add_argument("--workers", type=int, default=None, help="Worker threads (default: RELGAS['WORKERS'])")
        parser.add_argument("--output", default=None, help="Write to this file instead of stdout")

    def handle(self, *args, **options):
        fields = (
            "mass", "stat", "t_min", "t_max", "t_count", "t_spacing",
            "mu_min", "mu_max", "mu_count", "method", "format", "rtol",
        )
        data = {name: options[name] for name in fields if options.get(name) is not None}
        data["quantities"] = [q.strip() for q in options["quantities"].split(",") if q.strip()]
        request = TableRequestSerializer(data=data)
        try:
            request.is_valid(raise_exception=True)
        except ValidationError as exc:
            raise CommandError(json.dumps(exc.detail), returncode=2)

        params = request.validated_data
        cfg = request.series_config()
        grid = list(itertools.product(request.temperatures(), request.chemical_potentials()))
        context = {"quantities": params["quantities"]}

        def row(point):
            T, mu = point
            try:
                state = eos.PhysicalState(T, mu, params["mass"], params["stat"])
                thermo = eos.evaluate(state, params["method"], cfg)
            except RelgasError as exc:
                logger.info("Row T=%g mu=%g failed: %s", T, mu, exc)
                return ThermoRecordSerializer.error_record(T, mu, params["mass"], params["stat"], params["method"], str(exc))
            return ThermoRecordSerializer(thermo, context=context).data

        workers = options["workers"] or relgas_settings.WORKERS
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            records = list(pool.map(row, grid))

        writer = write_csv if params["format"] == "csv" else write_json
        if options["output"]:
            try:
                with open(options["output"], "w", newline="") as stream:
                    writer(stream, records)
            except OSError as exc:
                raise CommandError(f"Cannot write {options['output']}: {exc}", returncode=1)
            failed = sum(1 for r in records if r["error"])
            self.stdout.write(self.style.SUCCESS(f"Wrote {len(records)} rows ({failed} failed) to {options['output']}"))
        else:
            writer(self.stdout, records)
