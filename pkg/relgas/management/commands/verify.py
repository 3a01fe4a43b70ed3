import json

from django.core.management.base import BaseCommand, CommandError

from relgas.verification import SUITES, run_suites


class Command(BaseCommand):
    help = "Run the numerical self-checks and print a per-suite summary followed by a JSON report."

    def add_arguments(self, parser):
        parser.add_argument(
            "--suite", action="append", choices=sorted(SUITES), help="Suite to run; repeat for several (default: all)"
        )
        parser.add_argument("--seed", type=int, default=0, help="Seed for the randomised suites")

    def handle(self, *args, **options):
        results = run_suites(options["suite"], options["seed"])
        for result in results:
            line = f"{result.name}: {result.checks} checks, max residual {result.max_residual:.3e} (tol {result.tolerance:.0e})"
            if result.passed:
                self.stdout.write(self.style.SUCCESS(f"PASS {line}"))
            else:
                self.stdout.write(self.style.ERROR(f"FAIL {line}"))
                for failure in result.failures:
                    self.stdout.write(f"    {failure}")

        self.stdout.write(json.dumps({"suites": [r.as_dict() for r in results]}, indent=2))
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise CommandError(f"Failed suites: {', '.join(failed)}", returncode=1)
