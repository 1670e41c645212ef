"""
Named, reproducible worked examples with their reference values.

Each example recomputes its quantities from the library and returns a list
of Check records; `python manage.py example <name>` prints them.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .algebra.finite_field import field_make
from .algebra.linear_codes import chain_make, code_from_generators, rs_code
from .bounds.rate_bounds import (
    ChannelShape,
    bound_sweep,
    comparison_identities,
    rate_2lvl,
    rate_3lvl,
    rate_classical,
    rate_hpbe_closed,
    rate_pbe_gv,
)
from .channels.error_model import CoordinateProduct, hamming_pbe_channel, profile_empirical, profile_hamming
from .constructions.gcc_construction import GccSpec, OuterCode, certify_hamming, gcc_build
from .verification.exhaustive_oracle import is_pbecc_linear

logger = logging.getLogger(__name__)

# Columns of the four 4x2 generator arrays of the two-level example code
TWO_LEVEL_ARRAYS = [
    ((1, 1, 1, 1), (0, 0, 0, 0)),
    ((0, 0, 0, 0), (1, 1, 1, 1)),
    ((0, 1, 0, 1), (0, 1, 0, 1)),
    ((0, 0, 1, 1), (0, 0, 1, 1)),
]


@dataclass(frozen=True)
class Check:
    label: str
    computed: object
    expected: object
    passed: bool

    def describe(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.label}: computed {self.computed}, expected {self.expected}"


def _close(label, computed, expected, tolerance) -> Check:
    return Check(label, round(float(computed), 6), expected, abs(computed - expected) <= tolerance)


def _exact(label, computed, expected) -> Check:
    return Check(label, computed, expected, computed == expected)


def two_level_code():
    """Two-level GCC: even-weight [4,3] over repetition [4,1], outer [2,1,2] over GF(4) and F_2^2"""
    gf2 = field_make(2)
    even = code_from_generators(gf2, 4, [[1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]])
    repetition = code_from_generators(gf2, 4, [[1, 1, 1, 1]])
    inner = chain_make([even, repetition])
    outer = (
        OuterCode.from_code(rs_code(field_make(2, 2), 2, 1), 2),
        OuterCode.full(2, 1),
    )
    return gcc_build(GccSpec(inner, outer))


def two_level_reference():
    """The four printed generator arrays, flattened column-major"""
    gf2 = field_make(2)
    rows = [np.concatenate(columns) for columns in TWO_LEVEL_ARRAYS]
    return code_from_generators(gf2, 8, rows)


def run_e2():
    code = two_level_code()
    built = code.as_linear_code()
    reference = two_level_reference()
    channel = hamming_pbe_channel(2, 4, 2, 1, 1)
    return [
        _exact("dimension", code.dimension, 4),
        _exact("codewords", built.size(), 16),
        _exact("span equals printed arrays", built == reference, True),
        _exact("(t, w) = (1, 1) certified", certify_hamming(code, 1, 1).valid, True),
        _exact("(t, w) = (2, 1) certified", certify_hamming(code, 2, 1).valid, False),
        _exact("oracle on Hamming PBE (t, w) = (1, 1)", is_pbecc_linear(built, channel), True),
    ]


def run_e4():
    classical, _ = rate_classical(2, 1 / 60)
    _, pbe_gv = rate_hpbe_closed(2, 0.2, 1 / 12)
    return [
        _close("classical Hamming rate, 1/60 symbol errors", classical, 0.878, 1e-3),
        _close("PBE GV rate, T=0.2, W=1/12", pbe_gv, 0.880, 1e-3),
        _exact("PBE GV beats classical", pbe_gv > classical, True),
    ]


def _hamming_shape(T, W):
    return ChannelShape(2, W, profile_hamming(2, T))


def run_e5():
    shape = _hamming_shape(0.1, 0.2)
    return [
        _close("R_GV, T=0.1, W=0.2", rate_pbe_gv(shape), 0.81, 5e-3),
        _close("R_2lvl, T=0.1, W=0.2", rate_2lvl(shape), 0.71, 5e-3),
    ]


def run_e6():
    shape = _hamming_shape(0.1, 0.2)
    report = comparison_identities(shape, T=0.1)
    return [
        _close("R_3lvl, T=0.1, W=0.2", rate_3lvl(shape), 0.76, 5e-3),
        _close("R_GV - R_3lvl", report.gv_minus_three, 0.0506, 5e-4),
        _exact("rate identities hold", report.ok, True),
    ]


def coordinate_product_sets():
    gf31 = field_make(31)
    E1 = CoordinateProduct.from_integers(gf31, 1, [0, 3, 7])
    E2 = CoordinateProduct.from_integers(gf31, 1, [-4, 0, 3, 7, 10])
    return E1, E2


def run_remark1():
    E1, E2 = coordinate_product_sets()
    e11, e12, e22 = E1.minus(E1).size(), E1.minus(E2).size(), E2.minus(E2).size()
    profile = profile_empirical(E1, E2)
    shape = ChannelShape(31, 0.3, profile)
    report = comparison_identities(shape)
    return [
        _exact("|E1|, |E2|", (E1.size(), E2.size()), (3, 5)),
        _exact("|Delta(E1,E1)|, |Delta(E1,E2)|, |Delta(E2,E2)|", (e11, e12, e22), (7, 9, 13)),
        _exact("7 * 13 > 9^2", e11 * e22 > e12**2, True),
        _exact("GV bound takes the bad-with-bad branch", profile.standard_case, False),
        _close("R_GV - R_3lvl at W=0.3", report.gv_minus_three,
               0.3 * (math.log(9, 31) - math.log(7, 31)), 1e-12),
    ]


def _sweep_checks(frame, label, expected):
    checks = []
    for x, column, value in expected:
        row = frame[np.isclose(frame['x'], x)]
        computed = float(row[column].iloc[0]) if len(row) else float('nan')
        checks.append(_close(f"{label} {column} at x={x}", computed, value, 1e-3))
    return checks


def run_fig2a():
    frame = bound_sweep(2, 'fix-T', 0.25, 51)
    expected = [
        (0.1, 'gv', 0.83774), (0.1, 'h', 0.9189), (0.1, 'r2lvl', 0.8), (0.1, 'r3lvl', 0.81887),
        (0.4, 'gv', 0.35098), (0.4, 'h', 0.67549), (0.4, 'r2lvl', 0.2), (0.4, 'r3lvl', 0.27549),
        (0.5, 'gv', 0.18872), (0.5, 'h', 0.59436), (0.5, 'r2lvl', 0.0), (0.5, 'r3lvl', 0.09436),
        (1.0, 'h', 0.18872), (1.0, 'gv', 0.0), (1.0, 'r2lvl', 0.0), (1.0, 'r3lvl', 0.0),
    ]
    return _sweep_checks(frame, "T=0.25", expected)


def run_fig2b():
    frame = bound_sweep(2, 'fix-W', 0.3, 101)
    expected = [
        (0.24, 'r2lvl', 0.40069), (0.24, 'r3lvl', 0.46183),
        (0.25, 'gv', 0.51323),
        (0.5, 'gv', 0.4), (0.5, 'h', 0.7), (0.5, 'r2lvl', 0.4), (0.5, 'r3lvl', 0.4),
    ]
    return _sweep_checks(frame, "W=0.3", expected)


EXAMPLES = {
    'e2': run_e2,
    'e4': run_e4,
    'e5': run_e5,
    'e6': run_e6,
    'remark1': run_remark1,
    'fig2a': run_fig2a,
    'fig2b': run_fig2b,
}


def run_example(name):
    try:
        runner = EXAMPLES[name]
    except KeyError:
        raise KeyError(f"Unknown example '{name}'; choose from {sorted(EXAMPLES)}") from None
    checks = runner()
    failed = [c for c in checks if not c.passed]
    if failed:
        logger.error(f"Example {name}: {len(failed)} of {len(checks)} checks failed")
    else:
        logger.info(f"Example {name}: all {len(checks)} checks passed")
    return checks
