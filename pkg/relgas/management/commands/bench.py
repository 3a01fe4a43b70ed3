import json
import time

from django.core.management.base import BaseCommand

from relgas import eos
from relgas.exceptions import RelgasError
from relgas.series import SeriesConfig

# (lambda, nu, statistics); T = 1 so that m = lambda and mu = nu
SAMPLE_POINTS = (
    (0.3, 0.1, "fermion"),
    (1.0, 0.5, "fermion"),
    (2.0, -1.0, "fermion"),
    (10.0, 2.0, "fermion"),
    (0.0, -1.0, "boson"),
    (0.5, 0.2, "boson"),
    (10.0, 0.0, "boson"),
)
BENCH_METHODS = ("high_t", "polylog", "bessel", "quadrature")


class Command(BaseCommand):
    help = "Time each evaluation method over a fixed (lambda, nu) sample and compare it with quadrature."

    def add_arguments(self, parser):
        parser.add_argument("--repeat", type=int, default=20, help="Evaluations per point and method")
        parser.add_argument("--rtol", type=float, default=1e-9)
        parser.add_argument("--format", dest="format", default="text", help="text or json")

    def handle(self, *args, **options):
        cfg = SeriesConfig.from_settings(rtol=options["rtol"])
        repeat = max(1, options["repeat"])
        rows = []
        for lam, nu, stat in SAMPLE_POINTS:
            state = eos.PhysicalState(1.0, nu, lam, stat)
            reference = eos.evaluate(state, "quadrature").pressure
            for method in BENCH_METHODS:
                rows.append(self._measure(state, method, cfg, repeat, reference))

        if options["format"] == "json":
            self.stdout.write(json.dumps({"repeat": repeat, "rtol": options["rtol"], "results": rows}, indent=2))
            return
        self.stdout.write(f"{'stat':8} {'lambda':>7} {'nu':>7} {'method':11} {'ns/eval':>12} {'rel err':>10} terms")
        for row in rows:
            if row["error"]:
                self.stdout.write(
                    f"{row['stat']:8} {row['lambda']:7.3g} {row['nu']:7.3g} {row['method']:11} n/a ({row['error']})"
                )
                continue
            self.stdout.write(
                f"{row['stat']:8} {row['lambda']:7.3g} {row['nu']:7.3g} {row['method']:11} "
                f"{row['ns_per_eval']:12.0f} {row['relative_error']:10.2e} {row['terms_used']}"
            )
        self.stdout.write(self.style.SUCCESS(f"Benchmarked {len(SAMPLE_POINTS)} points x {len(BENCH_METHODS)} methods"))

    @staticmethod
    def _measure(state, method, cfg, repeat, reference) -> dict:
        row = {"stat": state.statistics.value, "lambda": state.lam, "nu": state.nu, "method": method, "error": None}
        try:
            thermo = eos.evaluate(state, method, cfg)
        except RelgasError as exc:
            row["error"] = str(exc)
            return row
        start = time.perf_counter_ns()
        for _ in range(repeat):
            eos.evaluate(state, method, cfg)
        elapsed = time.perf_counter_ns() - start
        row.update(
            ns_per_eval=elapsed / repeat,
            relative_error=abs(thermo.pressure - reference) / abs(reference),
            terms_used=thermo.terms_used,
            flags=sorted(thermo.flags),
        )
        return row
