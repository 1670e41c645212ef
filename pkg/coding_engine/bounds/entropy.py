import math

from coding_engine.exceptions import ParameterError


def log_q(q, x):
    return math.log(x) / math.log(q)


def entropy_q(q, x):
    """q-ary entropy H_q(x) for 0 <= x <= 1"""
    if q < 2:
        raise ParameterError(f"Alphabet size must be at least 2, got {q}")
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"Entropy argument {x} outside [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return log_q(q, q - 1) if q > 2 else 0.0
    return x * log_q(q, q - 1) - x * log_q(q, x) - (1.0 - x) * log_q(q, 1.0 - x)


def f_q(q, T):
    """Ball-volume exponent F_q(T) = H_q(min(T, (q-1)/q))"""
    if T < 0.0:
        raise ParameterError(f"Relative radius {T} is negative")
    return entropy_q(q, min(T, (q - 1) / q))
