import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from coding_engine.channels.error_model import PbeChannel, hamming_pbe_channel
from coding_engine.codefiles import read_channel_file, write_code_file, write_structure_file
from coding_engine.conf import pbec_setting
from coding_engine.constructions.gcc_construction import construct, formula_rate
from coding_engine.exceptions import BudgetExceeded, CodeFileError, PbecError
from coding_engine.optimization.performance_monitor import performance_monitor
from coding_engine.serializers import ConstructParametersSerializer, ConstructionRunSerializer
from coding_engine.verification.exhaustive_oracle import is_pbecc_linear

from ._common import EXIT_NEGATIVE, invalid_request, record_run, translated_errors

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Build a certified 2- or 3-level GCC for a PBE channel and write it as a code file"

    def add_arguments(self, parser):
        parser.add_argument('--q', type=int)
        parser.add_argument('--n', type=int)
        parser.add_argument('--m', type=int)
        parser.add_argument('--t', type=int, help="Hamming radius of E2 (E1 = {0})")
        parser.add_argument('--channel', help="Channel file instead of --q/--n/--m/--t")
        parser.add_argument('--w', type=int, help="Burst count; overrides the channel file")
        parser.add_argument('--levels', type=int, default=3)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--out', required=True)
        parser.add_argument('--report', help="Also write the certificate report here")
        parser.add_argument('--oracle-check', action='store_true',
                            help="Cross-check the result with the exhaustive oracle")

    def handle(self, *args, **options):
        names = ('q', 'n', 'm', 't', 'channel', 'w', 'levels', 'seed', 'out')
        serializer = ConstructParametersSerializer(
            data={name: options[name] for name in names if options.get(name) is not None}
        )
        if not serializer.is_valid():
            raise invalid_request(serializer)
        params = serializer.validated_data

        seed = params.get('seed')
        if seed is None:
            seed = pbec_setting('DEFAULT_SEED')
        mark = performance_monitor.mark()
        with translated_errors('construct'):
            ch = self._channel(params)
            with performance_monitor.track('construct'):
                code, certificate = construct(ch, params['levels'], seed)
            linear = code.as_linear_code()
            fingerprint = write_code_file(params['out'], linear, shape=(ch.n, ch.m))
            write_structure_file(params['out'], code)

        try:
            target = formula_rate(ch, params['levels'])
        except PbecError as e:
            logger.warning(f"No formula rate for {ch}: {str(e)}")
            target = None

        lines = [
            certificate.report(),
            f"dimension: {code.dimension} of {ch.n * ch.m}",
            f"rate: {code.rate:.6f}",
            f"formula rate: {target:.6f}" if target is not None else "formula rate: unavailable",
        ]

        oracle_verdict = None
        if options['oracle_check']:
            with performance_monitor.track('oracle'):
                try:
                    oracle_verdict = is_pbecc_linear(linear, ch)
                    lines.append(f"oracle: {'TRUE' if oracle_verdict else 'FALSE'}")
                except BudgetExceeded as e:
                    lines.append(f"oracle: UNKNOWN(budget) - {str(e)}")

        report = "\n".join(lines)
        self.stdout.write(report)
        if options.get('report'):
            try:
                Path(options['report']).write_text(report + "\n")
            except OSError as exc:
                raise CommandError(str(CodeFileError(f"Cannot write {options['report']}: {exc}")),
                                   returncode=CodeFileError.exit_code) from exc

        record_run(
            ConstructionRunSerializer,
            q=ch.spec.q, n=ch.n, m=ch.m, w=ch.w,
            channel=ch.describe(),
            levels=params['levels'],
            seed=seed,
            dimension=code.dimension,
            rate=code.rate,
            formula_rate=target,
            certified=bool(certificate.valid),
            certificate=certificate.as_dict(),
            code_fingerprint=fingerprint,
            processing_time_ms=performance_monitor.total_ms(mark),
        )

        if options['verbosity'] >= 2:
            self.stderr.write(performance_monitor.summary())
        if oracle_verdict is False:
            raise CommandError("Oracle found an uncorrectable PBE pair", returncode=EXIT_NEGATIVE)

    def _channel(self, params):
        if params.get('channel'):
            ch = read_channel_file(params['channel'])
            if params.get('w') is not None and params['w'] != ch.w:
                ch = PbeChannel(ch.spec, ch.n, ch.m, ch.E1, ch.E2, params['w'])
            return ch
        return hamming_pbe_channel(params['q'], params['n'], params['m'], params['t'], params['w'])
