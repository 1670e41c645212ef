"""
Exception hierarchy for the PBEC toolkit.

Library code raises these; management commands translate them to exit codes.
"""


class PbecError(Exception):
    """Base class for every toolkit error"""
    exit_code = 2


class FieldSpecError(PbecError, ValueError):
    """Invalid field parameters or mixing elements of different fields"""


class ParameterError(PbecError, ValueError):
    """Invalid lengths, shapes or channel parameters"""


class InfeasibleParameters(PbecError):
    """No construction exists for the requested parameters"""


class SearchExhausted(PbecError):
    """Greedy code search ran out of candidates before reaching its target"""


class BudgetExceeded(PbecError):
    """An enumeration would exceed its configured cap"""
    exit_code = 3

    def __init__(self, what, needed, budget):
        self.what = what
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: {needed} exceeds budget {budget}")


class CodeFileError(PbecError):
    """A code, structure or channel file could not be read or written"""
    exit_code = 4
