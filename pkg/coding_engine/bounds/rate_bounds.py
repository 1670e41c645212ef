"""
Closed-form rate expressions for phased-burst channels.

All rates are normalized by the aggregate block length n*m. Raw formula
values may go negative; RatePoint.clamped() gives the reported view.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np
import pandas as pd

from coding_engine.bounds.entropy import entropy_q, f_q, log_q
from coding_engine.channels.error_model import AdmissibilityProfile, profile_hamming
from coding_engine.conf import pbec_setting
from coding_engine.exceptions import ParameterError

logger = logging.getLogger(__name__)

__all__ = [
    'ChannelShape', 'RatePoint', 'ComparisonReport', 'entropy_q', 'f_q', 'log_q',
    'rate_pbe_hamming', 'rate_pbe_gv', 'rate_hpbe_closed', 'rate_classical',
    'rate_2lvl', 'rate_3lvl', 'rate_point', 'rate_point_hamming',
    'comparison_identities', 'bound_sweep', 'SWEEP_COLUMNS',
]

IDENTITY_TOLERANCE = 1e-12
SWEEP_COLUMNS = ['x', 'classical_gv', 'classical_h', 'gv', 'h', 'r2lvl', 'r3lvl']


@dataclass(frozen=True)
class ChannelShape:
    """Alphabet size, burst fraction W = w/m and the admissibility profile"""

    q: int
    W: float
    profile: AdmissibilityProfile

    def __post_init__(self):
        if self.q < 2:
            raise ParameterError(f"Alphabet size must be at least 2, got {self.q}")
        if not 0.0 <= self.W <= 1.0:
            raise ParameterError(f"Burst fraction W={self.W} outside [0, 1]")


@dataclass(frozen=True)
class RatePoint:
    r_classical_h: float
    r_classical_gv: float
    r_h: float
    r_gv: float
    r_2lvl: float
    r_3lvl: float

    def clamped(self) -> RatePoint:
        return replace(self, **{f.name: max(getattr(self, f.name), 0.0) for f in fields(self)})


def rate_pbe_hamming(shape: ChannelShape) -> float:
    """Upper bound R_H = 1 - (1 - W) c1 - W c2"""
    c = shape.profile
    return 1.0 - (1.0 - shape.W) * c.c1 - shape.W * c.c2


def rate_pbe_gv(shape: ChannelShape) -> float:
    """
    Achievable rate R_GV = 1 - alpha.

    When c11 + c22 <= 2 c12 the worst difference pairs bad columns with good
    ones, otherwise it pairs bad columns with bad ones.
    """
    c, W = shape.profile, shape.W
    if c.standard_case:
        if 2 * W <= 1:
            alpha = (1 - 2 * W) * c.c11 + 2 * W * c.c12
        else:
            alpha = 2 * (1 - W) * c.c12 + (2 * W - 1) * c.c22
    else:
        alpha = (1 - W) * c.c11 + W * c.c22
    return 1.0 - alpha


def rate_hpbe_closed(q, T, W) -> tuple[float, float]:
    """(R_H, R_GV) for the Hamming PBE channel, in closed form"""
    if not 0.0 <= W <= 1.0:
        raise ParameterError(f"Burst fraction W={W} outside [0, 1]")
    r_h = 1.0 - W * f_q(q, T)
    if 2 * W <= 1:
        r_gv = 1.0 - 2 * W * f_q(q, T)
    else:
        r_gv = 1.0 - 2 * (1 - W) * f_q(q, T) - (2 * W - 1) * f_q(q, 2 * T)
    return r_h, r_gv


def rate_classical(q, fraction) -> tuple[float, float]:
    """Classical (Hamming, GV) rates for correcting a fraction of symbol errors"""
    if not 0.0 <= fraction <= 1.0:
        raise ParameterError(f"Error fraction {fraction} outside [0, 1]")
    return 1.0 - f_q(q, fraction), 1.0 - f_q(q, 2 * fraction)


def rate_2lvl(shape: ChannelShape) -> float:
    c = shape.profile
    return 1.0 - c.c22 + (c.c22 - c.c11) * max(1.0 - 2 * shape.W, 0.0)


def rate_3lvl(shape: ChannelShape) -> float:
    c, W = shape.profile, shape.W
    if 2 * W <= 1:
        return 1.0 - W * (c.c12 + c.c22) - c.c11 * (1 - 2 * W)
    return 1.0 - c.c12 * (1 - W) - c.c22 * W


def rate_point(shape: ChannelShape, classical_fraction=None) -> RatePoint:
    """Every bound at one shape; classical columns need the per-symbol error fraction"""
    classical_h, classical_gv = (
        rate_classical(shape.q, classical_fraction) if classical_fraction is not None else (np.nan, np.nan)
    )
    return RatePoint(
        r_classical_h=classical_h,
        r_classical_gv=classical_gv,
        r_h=rate_pbe_hamming(shape),
        r_gv=rate_pbe_gv(shape),
        r_2lvl=rate_2lvl(shape),
        r_3lvl=rate_3lvl(shape),
    )


def rate_point_hamming(q, T, W) -> RatePoint:
    """Hamming PBE channel: compare with a classical code correcting W*T of all symbols"""
    return rate_point(ChannelShape(q, W, profile_hamming(q, T)), classical_fraction=W * T)


@dataclass(frozen=True)
class ComparisonReport:
    three_minus_two: float
    three_minus_two_expected: float
    gv_minus_three: float
    gv_minus_three_expected: float
    hamming_slack: float | None = None
    gv_slack: float | None = None

    @property
    def residuals(self) -> dict:
        return {
            'three_minus_two': abs(self.three_minus_two - self.three_minus_two_expected),
            'gv_minus_three': abs(self.gv_minus_three - self.gv_minus_three_expected),
        }

    @property
    def ok(self) -> bool:
        if any(r > IDENTITY_TOLERANCE for r in self.residuals.values()):
            return False
        slacks = [s for s in (self.hamming_slack, self.gv_slack) if s is not None]
        return all(s >= -IDENTITY_TOLERANCE for s in slacks)


def comparison_identities(shape: ChannelShape, T=None) -> ComparisonReport:
    """
    Evaluate both sides of the rate identities at one shape.

    R_3lvl - R_2lvl = min(W, 1-W)(c22 - c12) always; R_GV - R_3lvl is
    min(W, 1-W)(c22 - c12) when c11 + c22 <= 2 c12 and min(W, 1-W)(c12 - c11)
    otherwise. With a Hamming radius T the PBE bounds are also compared
    against classical codes correcting W*T of all symbols.
    """
    c, W = shape.profile, shape.W
    spread = min(W, 1 - W)
    r2, r3, gv = rate_2lvl(shape), rate_3lvl(shape), rate_pbe_gv(shape)
    gap = (c.c22 - c.c12) if c.standard_case else (c.c12 - c.c11)

    hamming_slack = gv_slack = None
    if T is not None:
        classical_h, classical_gv = rate_classical(shape.q, W * T)
        hamming_slack = rate_pbe_hamming(shape) - classical_h
        gv_slack = gv - classical_gv

    return ComparisonReport(
        three_minus_two=r3 - r2,
        three_minus_two_expected=spread * (c.c22 - c.c12),
        gv_minus_three=gv - r3,
        gv_minus_three_expected=spread * gap,
        hamming_slack=hamming_slack,
        gv_slack=gv_slack,
    )


def bound_sweep(q, mode, value, steps, x_max=1.0, workers=None) -> pd.DataFrame:
    """
    Hamming PBE bounds along a grid of W (mode 'fix-T') or T (mode 'fix-W').

    Columns follow SWEEP_COLUMNS; rates are clamped at zero.
    """
    if mode not in ('fix-T', 'fix-W'):
        raise ParameterError(f"Unknown sweep mode '{mode}'")
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"Fixed value {value} outside [0, 1]")
    if steps < 2:
        raise ParameterError(f"A sweep needs at least 2 grid points, got {steps}")
    if not 0.0 < x_max <= 1.0:
        raise ParameterError(f"Grid end {x_max} outside (0, 1]")

    grid = np.linspace(0.0, x_max, steps)

    def evaluate(x):
        T, W = (value, x) if mode == 'fix-T' else (x, value)
        point = rate_point_hamming(q, float(T), float(W)).clamped()
        return [float(x), point.r_classical_gv, point.r_classical_h,
                point.r_gv, point.r_h, point.r_2lvl, point.r_3lvl]

    with ThreadPoolExecutor(max_workers=workers or pbec_setting('SWEEP_WORKERS')) as executor:
        rows = list(executor.map(evaluate, grid))

    logger.info(f"Swept {steps} points, q={q}, {mode}={value}")
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
