"""
Linear block codes over GF(q): canonical generators, distance, subcode
chains with quotient representatives, Reed-Solomon outer codes and a seeded
greedy search for codes avoiding a forbidden set.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass

import numpy as np

from coding_engine.algebra.finite_field import (
    FieldSpec,
    FqMatrix,
    FqVector,
    decode_vectors,
    kernel_array,
    rref_array,
)
from coding_engine.conf import pbec_setting
from coding_engine.exceptions import (
    BudgetExceeded,
    InfeasibleParameters,
    ParameterError,
    SearchExhausted,
)

logger = logging.getLogger(__name__)

CHUNK_SIZE = 2**16
PACKED_LOW_BITS = 16
PACKED_MAX_LENGTH = 63


@dataclass(frozen=True, eq=False)
class LinearCode:
    """
    [n, k]_q code given by its RREF generator (no zero rows).

    Two codes are equal iff their generators are identical, which for RREF
    generators means they have the same codewords.
    """

    spec: FieldSpec
    n: int
    G: FqMatrix
    designed_distance: int | None = None

    def __post_init__(self):
        if self.G.cols != self.n:
            raise ParameterError(f"Generator has {self.G.cols} columns, expected {self.n}")

    @property
    def k(self) -> int:
        return self.G.rows

    @property
    def q(self) -> int:
        return self.spec.q

    @functools.cached_property
    def H(self) -> FqMatrix:
        """Parity-check matrix, (n-k) x n"""
        return FqMatrix(self.spec, kernel_array(self.spec, self.G.entries, self.n), cols=self.n)

    @functools.cached_property
    def pivots(self) -> list[int]:
        return rref_array(self.spec, self.G.entries)[1]

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.spec == other.spec
            and self.n == other.n
            and self.G == other.G
        )

    def __hash__(self):
        return hash((self.spec, self.n, self.G))

    def __repr__(self):
        return f"[{self.n},{self.k}]_{self.q}"

    def syndromes(self, words) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64).reshape(-1, self.n)
        if self.H.rows == 0:
            return np.zeros((words.shape[0], 0), dtype=np.int64)
        return self.spec.matmul(words, self.H.entries.T)

    def contains_many(self, words) -> np.ndarray:
        """Membership of each row, via H x^T = 0"""
        return ~np.any(self.syndromes(words), axis=1)

    def __contains__(self, vector) -> bool:
        entries = getattr(vector, 'entries', vector)
        return bool(self.contains_many(np.asarray(entries).reshape(1, -1))[0])

    def encode(self, messages) -> np.ndarray:
        messages = np.asarray(messages, dtype=np.int64).reshape(-1, self.k)
        if self.k == 0:
            return np.zeros((messages.shape[0], self.n), dtype=np.int64)
        return self.spec.matmul(messages, self.G.entries)

    def size(self) -> int:
        return self.q**self.k

    def iter_codewords(self, chunk=CHUNK_SIZE):
        """All codewords in message order, in blocks"""
        total = self.size()
        for start in range(0, total, chunk):
            stop = min(total, start + chunk)
            messages = decode_vectors(self.q, self.k, np.arange(start, stop, dtype=np.int64))
            yield self.encode(messages)

    def codewords(self, budget=None) -> np.ndarray:
        budget = budget or pbec_setting('DISTANCE_BUDGET')
        if self.size() > budget:
            raise BudgetExceeded(f"codewords of {self}", self.size(), budget)
        return np.concatenate(list(self.iter_codewords()), axis=0)

    def is_subcode_of(self, other: LinearCode) -> bool:
        return (
            self.spec == other.spec
            and self.n == other.n
            and bool(np.all(other.contains_many(self.G.entries)))
        )

    def dual(self) -> LinearCode:
        return code_from_generators(self.spec, self.n, self.H.entries)


def code_from_generators(spec: FieldSpec, n: int, rows, designed_distance=None) -> LinearCode:
    """Code spanned by the given rows (RREF, zero rows dropped)"""
    if isinstance(rows, FqMatrix):
        rows = rows.entries
    rows = [getattr(r, 'entries', r) for r in rows] if not isinstance(rows, np.ndarray) else rows
    array = np.array(rows, dtype=np.int64)
    if array.size == 0:
        array = array.reshape(0, n)
    if array.ndim != 2 or array.shape[1] != n:
        raise ParameterError(f"Generator rows must have length {n}")
    reduced, pivots = rref_array(spec, array)
    G = FqMatrix(spec, reduced[: len(pivots)], cols=n)
    return LinearCode(spec, n, G, designed_distance)


def zero_code(spec: FieldSpec, n: int) -> LinearCode:
    return code_from_generators(spec, n, [])


def full_space(spec: FieldSpec, n: int) -> LinearCode:
    return LinearCode(spec, n, FqMatrix.identity(spec, n), designed_distance=1)


def min_distance(C: LinearCode, budget=None) -> int:
    """
    Minimum Hamming weight of a nonzero codeword, by message enumeration.

    The zero code returns the sentinel n + 1.
    """
    if C.k == 0:
        return C.n + 1
    packed = _packs_into_words(C)
    budget = budget or pbec_setting('PACKED_DISTANCE_BUDGET' if packed else 'DISTANCE_BUDGET')
    if C.size() > budget:
        raise BudgetExceeded(f"distance of {C}", C.size(), budget)
    if packed:
        return _packed_min_weight(C)

    best = C.n
    for words in C.iter_codewords():
        weights = np.count_nonzero(words, axis=1)
        weights = weights[weights > 0]
        if weights.size:
            best = min(best, int(weights.min()))
        if best == 1:
            break
    return best


def _packs_into_words(C: LinearCode) -> bool:
    """Binary codes whose codewords fit one 64-bit word each"""
    return C.q == 2 and C.n <= PACKED_MAX_LENGTH


def pack_binary(rows) -> np.ndarray:
    """Binary vectors as uint64 words, first coordinate most significant"""
    rows = np.asarray(rows, dtype=np.uint64)
    n = rows.shape[-1]
    if n > PACKED_MAX_LENGTH:
        raise ParameterError(f"Binary vectors of length {n} do not fit a 64-bit word")
    return rows @ (np.uint64(1) << np.arange(n - 1, -1, -1, dtype=np.uint64))


def _packed_min_weight(C: LinearCode) -> int:
    """Minimum nonzero weight of a binary code, XOR-ing a low span against every high combination"""
    rows = pack_binary(C.G.entries)
    split = min(C.k, PACKED_LOW_BITS)
    low = np.zeros(1, dtype=np.uint64)
    for word in rows[:split]:
        low = np.concatenate([low, low ^ word])
    high = np.zeros(1, dtype=np.uint64)
    for word in rows[split:]:
        high = np.concatenate([high, high ^ word])

    best = C.n
    for offset in high:
        weights = np.bitwise_count(low ^ offset)
        weights = weights[weights > 0]
        if weights.size:
            best = min(best, int(weights.min()))
        if best == 1:
            break
    return best


def intersects_only_zero(C: LinearCode, S, budget=None) -> bool:
    """True iff C and the error set S share no nonzero vector"""
    if S.spec != C.spec or S.n != C.n:
        raise ParameterError("Code and error set differ in field or length")

    basis = getattr(S, 'basis', None)
    if basis is not None:
        # Subspaces: dim(C + S) = dim C + dim S
        stacked = np.concatenate([C.G.entries, basis.entries], axis=0)
        return len(rref_array(C.spec, stacked)[1]) == C.k + basis.rows

    code_cost = C.size()
    set_cost = S.size()

    # Weight balls: C meets the ball only in 0 iff d(C) exceeds its radius
    radius = getattr(S, 'weight_limit', lambda: None)()
    if radius is not None and _packs_into_words(C):
        scannable = code_cost <= (budget or pbec_setting('PACKED_DISTANCE_BUDGET'))
        enumerable = set_cost <= (budget or pbec_setting('DISTANCE_BUDGET'))
        if scannable and (code_cost <= set_cost or not enumerable):
            return min_distance(C, budget) > radius

    budget = budget or pbec_setting('DISTANCE_BUDGET')
    if min(code_cost, set_cost) > budget:
        raise BudgetExceeded(f"intersection of {C} with {S}", min(code_cost, set_cost), budget)

    if set_cost <= code_cost:
        for block in S.iter_elements():
            block = block[np.any(block, axis=1)]
            if block.size and np.any(C.contains_many(block)):
                return False
        return True

    for words in C.iter_codewords():
        words = words[np.any(words, axis=1)]
        if words.size and np.any(S.contains_many(words)):
            return False
    return True


@dataclass(frozen=True)
class CodeChain:
    """Nested inner codes B_1 > B_2 > ... > B_s with quotient representatives"""

    codes: tuple[LinearCode, ...]
    quotient_reps: tuple[FqMatrix, ...]

    @property
    def spec(self) -> FieldSpec:
        return self.codes[0].spec

    @property
    def n(self) -> int:
        return self.codes[0].n

    @property
    def levels(self) -> int:
        return len(self.codes)

    @property
    def dims(self) -> list[int]:
        return [code.k for code in self.codes]

    def level_basis(self, j: int) -> FqMatrix:
        """Inner alphabet basis of level j (0-based): B_j / B_{j+1}, or G_s at the last level"""
        if j < self.levels - 1:
            return self.quotient_reps[j]
        return self.codes[-1].G

    def degree(self, j: int) -> int:
        return self.level_basis(j).rows


def chain_make(codes) -> CodeChain:
    """Validate a subcode chain and extend each B_{j+1} basis to B_j"""
    codes = tuple(codes)
    if not codes:
        raise ParameterError("A code chain needs at least one code")
    if codes[-1].k == 0:
        raise ParameterError("The last code of a chain must have dimension at least 1")

    reps = []
    for outer, inner in zip(codes, codes[1:]):
        if inner.spec != outer.spec or inner.n != outer.n:
            raise ParameterError("Chain codes differ in field or length")
        if inner.k >= outer.k:
            raise ParameterError(f"Chain dimensions must strictly descend: {outer} then {inner}")
        if not inner.is_subcode_of(outer):
            raise ParameterError(f"{inner} is not a subcode of {outer}")

        # Clear the inner pivot columns from the outer basis, then reduce
        spec = outer.spec
        G_outer, G_inner = outer.G.entries, inner.G.entries
        residual = spec.sub(G_outer, spec.matmul(G_outer[:, inner.pivots], G_inner))
        reduced, pivots = rref_array(spec, residual)
        if len(pivots) != outer.k - inner.k:
            raise ParameterError(f"Could not extend {inner} to {outer}")
        reps.append(FqMatrix(spec, reduced[: len(pivots)]))

    return CodeChain(codes, tuple(reps))


def rs_code(spec_ext: FieldSpec, m: int, K: int) -> LinearCode:
    """[m, K, m-K+1] Reed-Solomon code on the first m field elements"""
    if m > spec_ext.q:
        raise InfeasibleParameters(f"Reed-Solomon length {m} exceeds field order {spec_ext.q}")
    if not 1 <= K <= m:
        raise ParameterError(f"Reed-Solomon dimension must satisfy 1 <= K <= {m}, got {K}")

    points = spec_ext.array(np.arange(m))
    rows = [np.ones(m, dtype=np.int64)]
    rows += [spec_ext.ints(points**i) for i in range(1, K)]
    return code_from_generators(spec_ext, m, np.vstack(rows), designed_distance=m - K + 1)


def _candidates(ambient: LinearCode, seed, exhaustive):
    """Nonzero ambient codewords in seeded order; sampled with replacement when the space is large"""
    rng = np.random.default_rng(seed)
    q, k = ambient.q, ambient.k
    if exhaustive:
        order = rng.permutation(np.arange(1, ambient.size(), dtype=np.int64))
        for start in range(0, order.size, CHUNK_SIZE):
            yield from ambient.encode(decode_vectors(q, k, order[start:start + CHUNK_SIZE]))
    else:
        while True:
            yield from ambient.encode(rng.integers(0, q, size=(CHUNK_SIZE, k)))


class _PackedBinarySpan:
    """span(basis) over GF(2) as 64-bit words, for forbidden sets that are weight balls"""

    SCAN_CHUNK = 2**20

    def __init__(self, n: int, radius: int):
        self.n = n
        self.radius = radius
        self.words = np.zeros(1, dtype=np.uint64)

    @property
    def rows(self) -> int:
        return self.words.size

    @property
    def row_bytes(self) -> int:
        return self.words.itemsize

    def _pack(self, candidate) -> np.uint64:
        return pack_binary(np.asarray(candidate).reshape(1, self.n))[0]

    def admits(self, candidate) -> bool:
        word = self._pack(candidate)
        for start in range(0, self.rows, self.SCAN_CHUNK):
            weights = np.bitwise_count(self.words[start:start + self.SCAN_CHUNK] ^ word)
            # weight 0 means the candidate is already in the span
            if weights.min() <= self.radius:
                return False
        return True

    def extend(self, candidate):
        self.words = np.concatenate([self.words, self.words ^ self._pack(candidate)])


class _DenseSpan:
    """span(basis) as compact rows, scanned in chunks against any forbidden set"""

    def __init__(self, spec: FieldSpec, n: int, forbidden):
        self.spec = spec
        self.n = n
        self.forbidden = forbidden
        self.vectors = np.zeros((1, n), dtype=np.uint8 if spec.q <= 256 else np.uint16)
        self.scalars = np.arange(1, spec.q, dtype=np.int64)
        self.chunk = max(1, CHUNK_SIZE // self.scalars.size)

    @property
    def rows(self) -> int:
        return self.vectors.shape[0]

    @property
    def row_bytes(self) -> int:
        return self.n * self.vectors.itemsize

    def _shifted_blocks(self, candidate):
        """Every vector of span(basis + candidate) outside span(basis), block by block"""
        multiples = self.spec.mul(self.scalars[:, None], np.asarray(candidate)[None, :])
        for start in range(0, self.rows, self.chunk):
            block = self.vectors[start:start + self.chunk].astype(np.int64)
            yield self.spec.add(block[None, :, :], multiples[:, None, :]).reshape(-1, self.n)

    def admits(self, candidate) -> bool:
        for shifted in self._shifted_blocks(candidate):
            if not np.all(np.any(shifted, axis=1)) or np.any(self.forbidden.contains_many(shifted)):
                return False
        return True

    def extend(self, candidate):
        blocks = [self.vectors] + [b.astype(self.vectors.dtype) for b in self._shifted_blocks(candidate)]
        self.vectors = np.concatenate(blocks, axis=0)


def _span_for(spec: FieldSpec, n: int, forbidden):
    radius = getattr(forbidden, 'weight_limit', lambda: None)()
    if spec.q == 2 and n <= PACKED_MAX_LENGTH and radius is not None:
        return _PackedBinarySpan(n, radius)
    return _DenseSpan(spec, n, forbidden)


def gv_search(spec: FieldSpec, n: int, forbidden, target_k=None, seed=0,
              ambient: LinearCode | None = None, max_k=None) -> LinearCode:
    """
    Seeded greedy search for a code C with C and `forbidden` meeting only in 0.

    Candidates are codewords of `ambient` (default F_q^n) in a seeded random
    order; a candidate is kept when every nonzero vector of the enlarged span
    avoids the forbidden set. Stops at target_k (or max_k) when given,
    otherwise when the candidates run out.
    """
    ambient = ambient or full_space(spec, n)
    if forbidden.spec != spec or forbidden.n != n or ambient.n != n:
        raise ParameterError("Forbidden set, ambient code and search parameters disagree")

    limit = ambient.k
    if max_k is not None:
        limit = min(limit, max_k)
    if target_k is not None:
        if target_k > limit:
            raise SearchExhausted(f"Target dimension {target_k} exceeds available {limit}")
        limit = target_k
    if limit <= 0:
        return zero_code(spec, n)

    # Nothing to avoid inside the ambient code
    try:
        if intersects_only_zero(ambient, forbidden):
            logger.debug(f"Ambient {ambient} already avoids {forbidden}")
            return code_from_generators(spec, n, ambient.G.entries[:limit])
    except BudgetExceeded:
        pass

    span_budget = pbec_setting('GV_SPAN_BYTES')
    stall_limit = pbec_setting('GV_STALL_LIMIT')
    exhaustive = ambient.size() <= pbec_setting('GV_CANDIDATE_POOL')

    span = _span_for(spec, n, forbidden)
    basis = []
    stalls = 0
    for candidate in _candidates(ambient, seed, exhaustive):
        if len(basis) >= limit or (not exhaustive and stalls >= stall_limit):
            break
        grown = span.rows * spec.q * span.row_bytes
        if grown > span_budget:
            logger.warning(
                f"gv_search stopped at dimension {len(basis)}: the next span needs {grown} bytes "
                f"(GV_SPAN_BYTES={span_budget})"
            )
            break
        if not span.admits(candidate):
            stalls += 1
            continue
        basis.append(candidate)
        span.extend(candidate)
        stalls = 0

    code = code_from_generators(spec, n, basis)
    if target_k is not None and code.k < target_k:
        raise SearchExhausted(f"Greedy search reached dimension {code.k} < {target_k} (seed {seed})")
    logger.info(f"gv_search found {code} avoiding {forbidden} (seed {seed})")
    return code
