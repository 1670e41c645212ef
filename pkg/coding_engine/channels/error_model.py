"""
Error sets, difference sets and the phased-burst error (PBE) channel.

An error set is a membership-testable, enumerable subset of F_q^n. A PBE is
an n x m array whose columns all lie in E2 with at most w columns outside E1.
Arrays handled in bulk are numpy blocks of shape (count, m, n): one row of
length n per column of the array.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from coding_engine.algebra.finite_field import (
    FieldSpec,
    FqMatrix,
    decode_vectors,
    encode_vectors,
    field_for_order,
    field_make,
    kernel_array,
    rref_array,
)
from coding_engine.bounds.entropy import f_q, log_q
from coding_engine.conf import pbec_setting
from coding_engine.exceptions import BudgetExceeded, ParameterError

logger = logging.getLogger(__name__)

CHUNK_SIZE = 2**16


def _lex_sorted(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] <= 1:
        return rows
    return rows[np.lexsort(rows.T[::-1])]


class ErrorSet:
    """Base class: subclasses provide size, contains_many and iter_elements"""

    def __init__(self, spec: FieldSpec, n: int):
        if n < 1:
            raise ParameterError(f"Error set length must be positive, got {n}")
        self.spec = spec
        self.n = n

    def size(self) -> int:
        raise NotImplementedError

    def contains_many(self, rows) -> np.ndarray:
        raise NotImplementedError

    def iter_elements(self, chunk=CHUNK_SIZE):
        raise NotImplementedError

    def negate(self) -> ErrorSet:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def contains(self, vector) -> bool:
        entries = np.asarray(getattr(vector, 'entries', vector), dtype=np.int64)
        return bool(self.contains_many(entries.reshape(1, self.n))[0])

    def contains_zero(self) -> bool:
        return self.contains(np.zeros(self.n, dtype=np.int64))

    def is_zero_set(self) -> bool:
        return self.size() == 1 and self.contains_zero()

    def weight_limit(self) -> int | None:
        """t when the set is exactly the vectors of weight at most t"""
        return None

    def elements(self, budget=None) -> np.ndarray:
        """All elements, lexicographically sorted"""
        budget = budget or pbec_setting('ORACLE_MAX_ENUMERATION')
        if self.size() > budget:
            raise BudgetExceeded(f"elements of {self}", self.size(), budget)
        blocks = list(self.iter_elements())
        if not blocks:
            return np.zeros((0, self.n), dtype=np.int64)
        return _lex_sorted(np.concatenate(blocks, axis=0))

    def _check_compatible(self, other):
        if other.spec != self.spec or other.n != self.n:
            raise ParameterError(f"{self} and {other} differ in field or length")

    def minus(self, other: ErrorSet) -> ErrorSet:
        """Delta(self, other), kept structured whenever the family allows it"""
        self._check_compatible(other)
        if other.is_zero_set():
            return self
        if self.is_zero_set():
            return other.negate()
        return self._structured_minus(other) or difference_set(self, other)

    def _structured_minus(self, other):
        return None


class HammingBall(ErrorSet):
    """Vectors of Hamming weight at most t"""

    def __init__(self, spec, n, t):
        super().__init__(spec, n)
        if not 0 <= t <= n:
            raise ParameterError(f"Ball radius {t} outside [0, {n}]")
        self.t = int(t)

    def __repr__(self):
        return f"HammingBall(t={self.t}, n={self.n}, {self.spec})"

    def size(self):
        return hamming_ball_size(self.spec.q, self.n, self.t)

    def weight_limit(self):
        return self.t

    def contains_many(self, rows):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.n)
        return np.count_nonzero(rows, axis=1) <= self.t

    def iter_elements(self, chunk=CHUNK_SIZE):
        q, n = self.spec.q, self.n
        buffer, count = [], 0
        for weight in range(self.t + 1):
            values = decode_vectors(q - 1, weight, np.arange((q - 1) ** weight)) + 1
            for support in itertools.combinations(range(n), weight):
                rows = np.zeros((values.shape[0], n), dtype=np.int64)
                rows[:, list(support)] = values
                buffer.append(rows)
                count += rows.shape[0]
                if count >= chunk:
                    yield np.concatenate(buffer, axis=0)
                    buffer, count = [], 0
        if buffer:
            yield np.concatenate(buffer, axis=0)

    def negate(self):
        return self

    def describe(self):
        return {'ball': self.t}

    def _structured_minus(self, other):
        if isinstance(other, HammingBall):
            return HammingBall(self.spec, self.n, min(self.t + other.t, self.n))
        return None


class CoordinateProduct(ErrorSet):
    """Product set S^n for a symbol set S in GF(q)"""

    def __init__(self, spec, n, symbols):
        super().__init__(spec, n)
        symbols = sorted({int(s) for s in symbols})
        if not symbols:
            raise ParameterError("Symbol set must not be empty")
        if symbols[0] < 0 or symbols[-1] >= spec.q:
            raise ParameterError(f"Symbols {symbols} outside {spec}")
        self.symbols = np.array(symbols, dtype=np.int64)
        self._mask = np.zeros(spec.q, dtype=bool)
        self._mask[self.symbols] = True

    @classmethod
    def from_integers(cls, spec, n, integers):
        """Embed integers canonically into a prime field"""
        if spec.e != 1:
            raise ParameterError("Integer symbols need a prime field")
        return cls(spec, n, [int(x) % spec.p for x in integers])

    def __repr__(self):
        return f"CoordinateProduct({self.symbols.tolist()}^{self.n}, {self.spec})"

    def size(self):
        return int(self.symbols.size) ** self.n

    def contains_many(self, rows):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.n)
        return np.all(self._mask[rows], axis=1)

    def iter_elements(self, chunk=CHUNK_SIZE):
        total = self.size()
        for start in range(0, total, chunk):
            idx = decode_vectors(self.symbols.size, self.n, np.arange(start, min(total, start + chunk)))
            yield self.symbols[idx]

    def negate(self):
        return CoordinateProduct(self.spec, self.n, self.spec.neg(self.symbols))

    def describe(self):
        return {'symbols': self.symbols.tolist()}

    def _structured_minus(self, other):
        if isinstance(other, CoordinateProduct):
            diffs = self.spec.sub(self.symbols[:, None], other.symbols[None, :])
            return CoordinateProduct(self.spec, self.n, np.unique(diffs))
        return None


class MaxNormBox(CoordinateProduct):
    """Integers {-a..a} embedded in a prime field, in every coordinate"""

    def __init__(self, spec, n, a):
        if spec.e != 1:
            raise ParameterError("Max-norm boxes need a prime field")
        if a < 0 or 2 * a + 1 > spec.p:
            raise ParameterError(f"Box {{-{a}..{a}}} does not fit GF({spec.p})")
        super().__init__(spec, n, [x % spec.p for x in range(-a, a + 1)])
        self.a = int(a)

    def __repr__(self):
        return f"MaxNormBox(a={self.a}, n={self.n}, {self.spec})"

    def negate(self):
        return self

    def describe(self):
        return {'box': self.a}


class Subspace(ErrorSet):
    """A linear subspace given by a full-row-rank basis"""

    def __init__(self, spec, n, basis):
        super().__init__(spec, n)
        entries = np.asarray(getattr(basis, 'entries', basis), dtype=np.int64).reshape(-1, n)
        reduced, pivots = rref_array(spec, entries)
        if len(pivots) != entries.shape[0]:
            raise ParameterError("Subspace basis is not of full row rank")
        self.basis = FqMatrix(spec, reduced, cols=n)
        self._checks = kernel_array(spec, reduced, n)

    def __repr__(self):
        return f"Subspace(dim={self.basis.rows}, n={self.n}, {self.spec})"

    def size(self):
        return self.spec.q ** self.basis.rows

    def contains_many(self, rows):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.n)
        if self._checks.shape[0] == 0:
            return np.ones(rows.shape[0], dtype=bool)
        return ~np.any(self.spec.matmul(rows, self._checks.T), axis=1)

    def iter_elements(self, chunk=CHUNK_SIZE):
        q, r = self.spec.q, self.basis.rows
        total = self.size()
        for start in range(0, total, chunk):
            messages = decode_vectors(q, r, np.arange(start, min(total, start + chunk)))
            if r == 0:
                yield np.zeros((messages.shape[0], self.n), dtype=np.int64)
            else:
                yield self.spec.matmul(messages, self.basis.entries)

    def negate(self):
        return self

    def describe(self):
        return {'subspace': self.basis.entries.tolist()}

    def _structured_minus(self, other):
        if isinstance(other, Subspace):
            stacked = np.concatenate([self.basis.entries, other.basis.entries], axis=0)
            reduced, pivots = rref_array(self.spec, stacked)
            return Subspace(self.spec, self.n, reduced[: len(pivots)])
        return None


class Explicit(ErrorSet):
    """A finite list of vectors, kept sorted and deduplicated"""

    def __init__(self, spec, n, vectors):
        super().__init__(spec, n)
        rows = np.asarray(vectors, dtype=np.int64)
        rows = rows.reshape(-1, n) if rows.size else np.zeros((0, n), dtype=np.int64)
        if rows.size and (rows.min() < 0 or rows.max() >= spec.q):
            raise ParameterError(f"Explicit vectors outside {spec}")
        self.codes = np.unique(encode_vectors(spec.q, rows))
        self.rows = decode_vectors(spec.q, n, self.codes)

    @classmethod
    def from_codes(cls, spec, n, codes):
        return cls(spec, n, decode_vectors(spec.q, n, np.unique(np.asarray(codes, dtype=np.int64))))

    def __repr__(self):
        return f"Explicit(size={self.size()}, n={self.n}, {self.spec})"

    def size(self):
        return int(self.codes.size)

    def contains_many(self, rows):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.n)
        return np.isin(encode_vectors(self.spec.q, rows), self.codes)

    def iter_elements(self, chunk=CHUNK_SIZE):
        for start in range(0, self.rows.shape[0], chunk):
            yield self.rows[start:start + chunk]

    def negate(self):
        return Explicit(self.spec, self.n, self.spec.neg(self.rows))

    def describe(self):
        return {'explicit': self.rows.tolist()}


def zero_set(spec: FieldSpec, n: int) -> HammingBall:
    return HammingBall(spec, n, 0)


def hamming_ball_size(q: int, n: int, t: int) -> int:
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(min(t, n) + 1))


def difference_set(A: ErrorSet, B: ErrorSet, budget=None) -> Explicit:
    """Delta(A, B) = {a - b}, materialized"""
    A._check_compatible(B)
    budget = budget or pbec_setting('ORACLE_MAX_ENUMERATION')
    pairs = A.size() * B.size()
    if pairs > budget:
        raise BudgetExceeded(f"difference set of {A} and {B}", pairs, budget)

    spec, n = A.spec, A.n
    right = B.elements(budget)
    step = max(1, CHUNK_SIZE // max(1, right.shape[0]))
    codes = []
    for block in A.iter_elements():
        for start in range(0, block.shape[0], step):
            left = block[start:start + step]
            diffs = spec.sub(left[:, None, :], right[None, :, :]).reshape(-1, n)
            codes.append(np.unique(encode_vectors(spec.q, diffs)))
    return Explicit.from_codes(spec, n, np.concatenate(codes))


def error_set_from_descriptor(spec: FieldSpec, n: int, descriptor) -> ErrorSet:
    """Build an error set from its channel-file descriptor, e.g. {'ball': 1}"""
    if not isinstance(descriptor, dict) or len(descriptor) != 1:
        raise ParameterError(f"Error-set descriptor must have exactly one key: {descriptor}")
    kind, value = next(iter(descriptor.items()))
    if kind == 'ball':
        return HammingBall(spec, n, int(value))
    if kind == 'box':
        return MaxNormBox(spec, n, int(value))
    if kind == 'symbols':
        if spec.e == 1:
            return CoordinateProduct.from_integers(spec, n, value)
        return CoordinateProduct(spec, n, value)
    if kind == 'subspace':
        return Subspace(spec, n, value)
    if kind == 'explicit':
        return Explicit(spec, n, value)
    raise ParameterError(f"Unknown error-set kind '{kind}'")


# ---------------------------------------------------------------------------
# PBE channel
# ---------------------------------------------------------------------------

def _is_subset(small: ErrorSet, large: ErrorSet) -> bool | None:
    if isinstance(small, HammingBall) and isinstance(large, HammingBall):
        return small.t <= large.t
    if isinstance(small, CoordinateProduct) and isinstance(large, CoordinateProduct):
        return bool(np.all(np.isin(small.symbols, large.symbols)))
    if isinstance(small, Subspace) and isinstance(large, Subspace):
        return bool(np.all(large.contains_many(small.basis.entries)))
    if small.size() > pbec_setting('ORACLE_MAX_ENUMERATION'):
        return None
    return all(bool(np.all(large.contains_many(block))) for block in small.iter_elements())


@dataclass(frozen=True, eq=False)
class PbeChannel:
    """PBC(n, m, E1, E2, w)"""

    spec: FieldSpec
    n: int
    m: int
    E1: ErrorSet
    E2: ErrorSet
    w: int

    def __post_init__(self):
        for name, es in (('E1', self.E1), ('E2', self.E2)):
            if es.spec != self.spec or es.n != self.n:
                raise ParameterError(f"{name} is not a subset of {self.spec}^{self.n}")
        if self.m < 1:
            raise ParameterError(f"Burst count m must be positive, got {self.m}")
        if not 0 <= self.w <= self.m:
            raise ParameterError(f"Need 0 <= w <= m, got w={self.w}, m={self.m}")
        if not self.E1.contains_zero():
            raise ParameterError("E1 must contain the zero vector")
        subset = _is_subset(self.E1, self.E2)
        if subset is False:
            raise ParameterError("E1 must be a subset of E2")
        if subset is None:
            logger.warning(f"Skipped E1 <= E2 check: {self.E1} too large to enumerate")

    def __repr__(self):
        return f"PBC(n={self.n}, m={self.m}, E1={self.E1}, E2={self.E2}, w={self.w})"

    @property
    def length(self) -> int:
        return self.n * self.m

    def describe(self) -> dict:
        return {
            'q': self.spec.q,
            'n': self.n,
            'm': self.m,
            'w': self.w,
            'E1': self.E1.describe(),
            'E2': self.E2.describe(),
        }

    def bad_column_elements(self) -> np.ndarray:
        """E2 minus E1"""
        elements = self.E2.elements()
        return elements[~self.E1.contains_many(elements)]


def hamming_pbe_channel(q: int, n: int, m: int, t: int, w: int) -> PbeChannel:
    """The Hamming PBE channel: E1 = {0}, E2 = radius-t ball"""
    spec = field_for_order(q)
    return PbeChannel(spec, n, m, zero_set(spec, n), HammingBall(spec, n, t), w)


def hamming_channel(q: int, n: int, t: int) -> PbeChannel:
    """Classical Hamming channel HC(n, t) as a one-column PBE channel"""
    return hamming_pbe_channel(q, n, 1, t, 1)


def channel_from_descriptor(data: dict) -> PbeChannel:
    spec = field_for_order(int(data['q']))
    if data.get('modulus') is not None:
        spec = field_make(spec.p, spec.e, data['modulus'])
    n, m = int(data['n']), int(data['m'])
    E1 = error_set_from_descriptor(spec, n, data['E1'])
    E2 = error_set_from_descriptor(spec, n, data['E2'])
    return PbeChannel(spec, n, m, E1, E2, int(data['w']))


def pbe_size(ch: PbeChannel) -> int:
    """|E(n, m, E1, E2, w)| = sum_j C(m, j) |E2 \\ E1|^j |E1|^(m-j)"""
    good = ch.E1.size()
    bad = ch.E2.size() - good
    return sum(math.comb(ch.m, j) * bad**j * good ** (ch.m - j) for j in range(ch.w + 1))


def pbe_contains_many(ch: PbeChannel, arrays) -> np.ndarray:
    """PBE membership for a block of arrays shaped (count, m, n)"""
    arrays = np.asarray(arrays, dtype=np.int64).reshape(-1, ch.m, ch.n)
    columns = arrays.reshape(-1, ch.n)
    in_e2 = ch.E2.contains_many(columns).reshape(-1, ch.m)
    outside_e1 = ~ch.E1.contains_many(columns).reshape(-1, ch.m)
    return np.all(in_e2, axis=1) & (np.count_nonzero(outside_e1, axis=1) <= ch.w)


def pbe_contains(ch: PbeChannel, X: FqMatrix) -> bool:
    if X.shape != (ch.n, ch.m) or X.spec != ch.spec:
        raise ParameterError(f"Expected a {ch.n}x{ch.m} array over {ch.spec}")
    return bool(pbe_contains_many(ch, X.entries.T[None, :, :])[0])


def pbe_blocks(ch: PbeChannel, budget=None, chunk=CHUNK_SIZE):
    """
    Stream every PBE exactly once as blocks shaped (count, m, n).

    The stream is partitioned by the exact set of bad positions: bad columns
    range over E2 minus E1 and the others over E1.
    """
    budget = budget or pbec_setting('ORACLE_MAX_ENUMERATION')
    total = pbe_size(ch)
    if total > budget:
        raise BudgetExceeded(f"PBE enumeration of {ch}", total, budget)

    good = ch.E1.elements(budget)
    bad = ch.bad_column_elements() if ch.w > 0 else np.zeros((0, ch.n), dtype=np.int64)
    for j in range(ch.w + 1):
        if j > 0 and bad.shape[0] == 0:
            break
        for positions in itertools.combinations(range(ch.m), j):
            pools = [bad if c in positions else good for c in range(ch.m)]
            dims = [pool.shape[0] for pool in pools]
            count = math.prod(dims)
            for start in range(0, count, chunk):
                idx = np.unravel_index(np.arange(start, min(count, start + chunk)), dims)
                yield np.stack([pools[c][idx[c]] for c in range(ch.m)], axis=1)


def pbe_enumerate(ch: PbeChannel, budget=None):
    """Stream every PBE as an n x m FqMatrix"""
    for block in pbe_blocks(ch, budget):
        for array in block:
            yield FqMatrix(ch.spec, array.T)


# ---------------------------------------------------------------------------
# Admissibility profiles
# ---------------------------------------------------------------------------

PROFILE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class AdmissibilityProfile:
    """Growth exponents (c1, c2, c11, c12, c22) of E1, E2 and their difference sets"""

    c1: float
    c2: float
    c11: float
    c12: float
    c22: float

    def __post_init__(self):
        values = (self.c1, self.c2, self.c11, self.c12, self.c22)
        if any(c < -PROFILE_TOLERANCE or c > 1 + PROFILE_TOLERANCE for c in values):
            raise ParameterError(f"Profile exponents must lie in [0, 1]: {values}")
        if self.c1 > self.c2 + PROFILE_TOLERANCE:
            raise ParameterError(f"Need c1 <= c2, got {self.c1} > {self.c2}")
        if not self.c11 <= self.c12 + PROFILE_TOLERANCE <= self.c22 + 2 * PROFILE_TOLERANCE:
            raise ParameterError(f"Need c11 <= c12 <= c22, got {values[2:]}")

    def as_tuple(self):
        return (self.c1, self.c2, self.c11, self.c12, self.c22)

    @property
    def standard_case(self) -> bool:
        """c11 + c22 <= 2 c12"""
        return self.c11 + self.c22 <= 2 * self.c12 + PROFILE_TOLERANCE


def profile_hamming(q, T) -> AdmissibilityProfile:
    if not 0.0 <= T <= 1.0:
        raise ParameterError(f"Relative radius {T} outside [0, 1]")
    return AdmissibilityProfile(0.0, f_q(q, T), 0.0, f_q(q, T), f_q(q, 2 * T))


def profile_hamming2(q, T1, T2) -> AdmissibilityProfile:
    """E1 = Ball(T1 n), E2 = Ball(T2 n)"""
    if not 0.0 <= T1 <= T2 <= 1.0:
        raise ParameterError(f"Need 0 <= T1 <= T2 <= 1, got {T1}, {T2}")
    return AdmissibilityProfile(f_q(q, T1), f_q(q, T2), f_q(q, 2 * T1), f_q(q, T1 + T2), f_q(q, 2 * T2))


def profile_maxnorm(q, a, b) -> AdmissibilityProfile:
    if not field_make(q).e == 1:
        raise ParameterError("Max-norm profiles need a prime field")
    if not 0 <= a <= b or 2 * b + 1 > q:
        raise ParameterError(f"Box sizes a={a}, b={b} do not fit GF({q})")
    return AdmissibilityProfile(
        log_q(q, 2 * a + 1),
        log_q(q, 2 * b + 1),
        log_q(q, min(q, 4 * a + 1)),
        log_q(q, min(q, 2 * a + 2 * b + 1)),
        log_q(q, min(q, 4 * b + 1)),
    )


def profile_subspace(S, T) -> AdmissibilityProfile:
    if not 0.0 <= S <= T <= 1.0:
        raise ParameterError(f"Need 0 <= S <= T <= 1, got {S}, {T}")
    return AdmissibilityProfile(S, T, S, T, T)


def profile_empirical(E1: ErrorSet, E2: ErrorSet) -> AdmissibilityProfile:
    """Finite-n exponents log_q|set| / n from exact cardinalities"""
    E1._check_compatible(E2)
    q, n = E1.spec.q, E1.n
    sizes = (E1.size(), E2.size(), E1.minus(E1).size(), E1.minus(E2).size(), E2.minus(E2).size())
    logger.debug(f"Empirical set sizes at n={n}: {sizes}")
    return AdmissibilityProfile(*(log_q(q, s) / n for s in sizes))
