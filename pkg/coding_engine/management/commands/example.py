from django.core.management.base import BaseCommand, CommandError

from coding_engine.optimization.performance_monitor import performance_monitor
from coding_engine.worked_examples import EXAMPLES, run_example

from ._common import EXIT_NEGATIVE, translated_errors


class Command(BaseCommand):
    help = "Recompute a worked example and compare it with its reference values"

    def add_arguments(self, parser):
        parser.add_argument('name', choices=sorted(EXAMPLES) + ['all'])

    def handle(self, *args, **options):
        names = sorted(EXAMPLES) if options['name'] == 'all' else [options['name']]
        failures = 0
        for name in names:
            with translated_errors('example'), performance_monitor.track(f"example {name}"):
                checks = run_example(name)
            self.stdout.write(f"== {name}")
            for check in checks:
                line = check.describe()
                self.stdout.write(self.style.SUCCESS(line) if check.passed else self.style.ERROR(line))
            failures += sum(not c.passed for c in checks)

        if options['verbosity'] >= 2:
            self.stderr.write(performance_monitor.summary())
        if failures:
            raise CommandError(f"{failures} check(s) failed", returncode=EXIT_NEGATIVE)
