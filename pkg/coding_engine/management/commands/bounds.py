from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from coding_engine.bounds.rate_bounds import bound_sweep
from coding_engine.optimization.performance_monitor import performance_monitor
from coding_engine.serializers import SweepRequestSerializer

from ._common import EXIT_IO, invalid_request, translated_errors


class Command(BaseCommand):
    help = "Sweep the Hamming PBE rate bounds over W (fix-T) or T (fix-W) and emit CSV"

    def add_arguments(self, parser):
        parser.add_argument('--q', type=int, default=2)
        parser.add_argument('--mode', choices=['fix-T', 'fix-W'], required=True)
        parser.add_argument('--value', type=float, required=True, help="The fixed T or W")
        parser.add_argument('--steps', type=int, default=51)
        parser.add_argument('--x-max', type=float, default=1.0, help="Last grid point")
        parser.add_argument('--out', default=None, help="CSV path; standard output when omitted")

    def handle(self, *args, **options):
        serializer = SweepRequestSerializer(data={
            'q': options['q'],
            'mode': options['mode'],
            'value': options['value'],
            'steps': options['steps'],
            'x_max': options['x_max'],
            'out': options['out'],
        })
        if not serializer.is_valid():
            raise invalid_request(serializer)
        request = serializer.validated_data

        with translated_errors('bounds'), performance_monitor.track('bounds'):
            frame = bound_sweep(request['q'], request['mode'], request['value'],
                                request['steps'], request['x_max'])
        text = frame.to_csv(index=False, float_format='%.12g', lineterminator='\n')

        if request.get('out'):
            try:
                Path(request['out']).write_text(text)
            except OSError as exc:
                raise CommandError(f"Cannot write {request['out']}: {exc}", returncode=EXIT_IO) from exc
            self.stdout.write(self.style.SUCCESS(f"Wrote {len(frame)} rows to {request['out']}"))
        else:
            self.stdout.write(text, ending='')

        if options['verbosity'] >= 2:
            self.stderr.write(performance_monitor.summary())
