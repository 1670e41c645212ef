import logging
from contextlib import contextmanager

from django.core.management.base import CommandError
from django.db import DatabaseError

from coding_engine.conf import pbec_setting
from coding_engine.exceptions import PbecError

logger = logging.getLogger(__name__)

EXIT_NEGATIVE = 1
EXIT_PARAMETER = 2
EXIT_BUDGET = 3
EXIT_IO = 4


@contextmanager
def translated_errors(command_name):
    """Re-raise toolkit errors as CommandError with the matching exit code"""
    try:
        yield
    except PbecError as exc:
        logger.error(f"{command_name} failed: {exc}")
        raise CommandError(str(exc), returncode=exc.exit_code) from exc


def invalid_request(serializer):
    fields = "; ".join(f"{name}: {' '.join(str(e) for e in errors)}" for name, errors in serializer.errors.items())
    return CommandError(f"Invalid parameters - {fields}", returncode=EXIT_PARAMETER)


def record_run(serializer_class, **fields):
    """Store a run record; storage problems never change a command's result"""
    if not pbec_setting('RECORD_RUNS'):
        return None
    serializer = serializer_class(data=fields)
    if not serializer.is_valid():
        logger.warning(f"Could not record {serializer_class.Meta.model.__name__}: {serializer.errors}")
        return None
    try:
        return serializer.save()
    except DatabaseError as e:
        logger.warning(f"Could not record {serializer_class.Meta.model.__name__}: {str(e)}")
        return None
