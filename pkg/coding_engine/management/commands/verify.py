import logging

from django.core.management.base import BaseCommand, CommandError

from coding_engine.codefiles import read_channel_file, read_code_file, read_structure_file
from coding_engine.constructions.gcc_construction import certify_property1, gcc_build
from coding_engine.exceptions import BudgetExceeded, ParameterError, PbecError
from coding_engine.optimization.performance_monitor import performance_monitor
from coding_engine.serializers import VerificationRunSerializer
from coding_engine.verification.exhaustive_oracle import OracleBudget, is_pbecc_linear

from ._common import EXIT_BUDGET, EXIT_NEGATIVE, record_run, translated_errors

logger = logging.getLogger(__name__)

CERTIFIED = 'CERTIFIED'
ORACLE_TRUE = 'ORACLE-TRUE'
ORACLE_FALSE = 'ORACLE-FALSE'
UNKNOWN = 'UNKNOWN(budget)'


class Command(BaseCommand):
    help = "Decide whether a code file corrects every PBE of a channel file"

    def add_arguments(self, parser):
        parser.add_argument('code_file')
        parser.add_argument('channel_file')
        parser.add_argument('--oracle', action='store_true',
                            help="Skip the certificate and run the exhaustive oracle")
        parser.add_argument('--budget', type=int, help="Cap for every oracle counter")
        parser.add_argument('--force', action='store_true', help="Run the oracle without caps")

    def handle(self, *args, **options):
        mark = performance_monitor.mark()
        with translated_errors('verify'):
            ch = read_channel_file(options['channel_file'])
            code, shape, fingerprint = read_code_file(options['code_file'], ch.spec)
            if shape is not None and shape != (ch.n, ch.m):
                raise ParameterError(f"Code arrays are {shape[0]}x{shape[1]}, channel expects {ch.n}x{ch.m}")
            if code.n != ch.n * ch.m:
                raise ParameterError(f"Code length {code.n} differs from n*m = {ch.n * ch.m}")

            mode, verdict = 'oracle', None
            if not options['oracle']:
                verdict = self._certificate_verdict(options['code_file'], code, ch)
                if verdict is not None:
                    mode = 'certificate'
            if verdict is None:
                verdict = self._oracle_verdict(code, ch, options)

        self.stdout.write(verdict)
        record_run(
            VerificationRunSerializer,
            code_fingerprint=fingerprint,
            channel=ch.describe(),
            mode=mode,
            verdict=verdict,
            processing_time_ms=performance_monitor.total_ms(mark),
        )
        if options['verbosity'] >= 2:
            self.stderr.write(performance_monitor.summary())

        if verdict == ORACLE_FALSE:
            raise CommandError("Code does not correct every PBE of the channel", returncode=EXIT_NEGATIVE)
        if verdict == UNKNOWN:
            raise CommandError("Oracle budget exceeded; rerun with --budget or --force", returncode=EXIT_BUDGET)

    def _certificate_verdict(self, code_path, code, ch):
        """CERTIFIED, or None when no certificate applies"""
        try:
            gcc_spec = read_structure_file(code_path)
        except PbecError as e:
            logger.warning(f"Unusable GCC structure next to {code_path}: {str(e)}; using the oracle")
            return None
        if gcc_spec is None:
            logger.info(f"No GCC structure next to {code_path}; using the oracle")
            return None
        if gcc_spec.base != ch.spec or (gcc_spec.n, gcc_spec.m) != (ch.n, ch.m):
            logger.warning(f"GCC structure of {code_path} does not match the channel; using the oracle")
            return None

        with performance_monitor.track('certify'):
            try:
                gcc = gcc_build(gcc_spec)
            except PbecError as e:
                logger.warning(f"GCC structure of {code_path} does not build: {str(e)}; using the oracle")
                return None
            if gcc.as_linear_code() != code:
                logger.warning(f"GCC structure of {code_path} does not rebuild the code file; using the oracle")
                return None
            try:
                certificate = certify_property1(gcc, ch.E1, ch.E2, ch.w)
            except BudgetExceeded as e:
                logger.warning(f"Certificate needs too much enumeration: {str(e)}")
                return None

        if certificate.valid:
            return CERTIFIED
        logger.info(f"Certificate does not apply:\n{certificate.report()}")
        return None

    def _oracle_verdict(self, code, ch, options):
        if options['force']:
            budget = OracleBudget.unbounded()
        elif options.get('budget'):
            budget = OracleBudget.capped(options['budget'])
        else:
            budget = OracleBudget.from_settings()
        try:
            with performance_monitor.track('oracle'):
                return ORACLE_TRUE if is_pbecc_linear(code, ch, budget) else ORACLE_FALSE
        except BudgetExceeded as e:
            logger.warning(f"Oracle gave up: {str(e)}")
            return UNKNOWN
