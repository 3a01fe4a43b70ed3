import json

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from relgas import eos
from relgas.exceptions import RelgasError
from relgas.formatting import write_csv
from relgas.serializers import EvalRequestSerializer, ThermoRecordSerializer

# reduced integrals P/T^4, n/T^3, rho_sc/T^3, s/T^3 added to the JSON record
REDUCED_KEYS = {"P": "P_over_T4", "n": "n_over_T3", "sc": "rho_sc_over_T3", "s": "s_over_T3"}


class Command(BaseCommand):
    help = "Evaluate P, n, rho_sc, s and eps of an ideal relativistic gas at one (T, mu, mass)."

    def add_arguments(self, parser):
        parser.add_argument("--T", dest="T", type=float, required=True, help="Temperature")
        parser.add_argument("--mu", type=float, default=0.0, help="Chemical potential")
        parser.add_argument("--mass", type=float, default=0.0, help="Particle mass")
        parser.add_argument("--stat", default="fermion", help="fermion or boson")
        parser.add_argument("--method", default="auto", help=", ".join(eos.METHODS))
        parser.add_argument("--rtol", type=float, default=None, help="Series stopping tolerance")
        parser.add_argument("--format", dest="format", default="json", help="json or csv")

    def handle(self, *args, **options):
        fields = ("T", "mu", "mass", "stat", "method", "rtol", "format")
        data = {name: options[name] for name in fields if options.get(name) is not None}
        request = EvalRequestSerializer(data=data)
        try:
            request.is_valid(raise_exception=True)
            thermo = eos.evaluate(request.to_state(), request.validated_data["method"], request.series_config())
        except ValidationError as exc:
            self._fail(json.dumps(exc.detail))
        except RelgasError as exc:
            self._fail(str(exc))

        record = ThermoRecordSerializer(thermo).data
        if request.validated_data["format"] == "csv":
            write_csv(self.stdout, [record])
            return
        for key, name in REDUCED_KEYS.items():
            record[name] = thermo.outcomes[key].value
        self.stdout.write(json.dumps(record, indent=2))

    def _fail(self, message: str):
        self.stdout.write(json.dumps({"error": message}))
        raise CommandError(message, returncode=2)
