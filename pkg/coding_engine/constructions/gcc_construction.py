"""
Generalized concatenated codes (GCC) in F_q^{n x m}.

Level j pairs an outer code A_j of length m over GF(q^{r_j}) with the
quotient B_j / B_{j+1} of a nested inner chain; the code is the direct sum
of the levels. Arrays are flattened column-major, so column i of an array
occupies positions i*n .. i*n + n - 1 of its vector.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from coding_engine.algebra.finite_field import (
    MAX_FIELD_ORDER,
    FieldSpec,
    FqMatrix,
    field_extend,
    field_tower,
    rref_array,
)
from coding_engine.algebra.linear_codes import (
    CodeChain,
    LinearCode,
    chain_make,
    code_from_generators,
    full_space,
    gv_search,
    intersects_only_zero,
    min_distance,
    rs_code,
)
from coding_engine.bounds.rate_bounds import ChannelShape, rate_2lvl, rate_3lvl
from coding_engine.channels.error_model import (
    ErrorSet,
    HammingBall,
    PbeChannel,
    profile_empirical,
    profile_hamming,
)
from coding_engine.conf import pbec_setting
from coding_engine.exceptions import (
    InfeasibleParameters,
    ParameterError,
    SearchExhausted,
)

logger = logging.getLogger(__name__)

FULL, ZERO, CODE = 'full', 'zero', 'code'


@dataclass(frozen=True)
class OuterCode:
    """
    Outer code of one level: the full space, the zero code, or an explicit
    linear code over the degree-r extension. Full and zero outer codes never
    build the extension field.
    """

    length: int
    degree: int
    kind: str
    code: LinearCode | None = None

    def __post_init__(self):
        if self.kind not in (FULL, ZERO, CODE):
            raise ParameterError(f"Unknown outer code kind '{self.kind}'")
        if self.kind == CODE:
            if self.code is None or self.code.n != self.length:
                raise ParameterError(f"Outer code must have length {self.length}")

    @classmethod
    def full(cls, m, r):
        return cls(m, r, FULL)

    @classmethod
    def zero(cls, m, r):
        return cls(m, r, ZERO)

    @classmethod
    def from_code(cls, code: LinearCode, r: int):
        return cls(code.n, r, CODE, code)

    @property
    def dimension(self) -> int:
        if self.kind == FULL:
            return self.length
        if self.kind == ZERO:
            return 0
        return self.code.k

    @property
    def distance(self) -> int:
        if self.kind == FULL:
            return 1
        if self.kind == ZERO:
            return self.length + 1
        if self.code.designed_distance is not None:
            return self.code.designed_distance
        return min_distance(self.code)

    def __repr__(self):
        if self.kind == CODE:
            return f"OuterCode({self.code}, degree={self.degree})"
        return f"OuterCode({self.kind}, m={self.length}, degree={self.degree})"


@dataclass(frozen=True)
class GccSpec:
    inner: CodeChain
    outer: tuple[OuterCode, ...]

    def __post_init__(self):
        object.__setattr__(self, 'outer', tuple(self.outer))
        base = self.inner.spec
        if len(self.outer) != self.inner.levels:
            raise ParameterError(f"{self.inner.levels} inner levels but {len(self.outer)} outer codes")
        if len({A.length for A in self.outer}) != 1:
            raise ParameterError("Outer codes must share one length")
        for j, A in enumerate(self.outer):
            r = self.inner.degree(j)
            if A.degree != r:
                raise ParameterError(f"Level {j + 1} outer degree {A.degree} does not match quotient dimension {r}")
            if A.kind == CODE and (A.code.spec.p != base.p or A.code.spec.e != base.e * r):
                raise ParameterError(f"Level {j + 1} outer code is not over GF({base.q}^{r})")
        if self.outer[-1].kind == ZERO:
            raise ParameterError("The last level must have a nonzero outer code")

    @property
    def base(self) -> FieldSpec:
        return self.inner.spec

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def m(self) -> int:
        return self.outer[0].length

    @property
    def levels(self) -> int:
        return self.inner.levels

    @property
    def expected_dimension(self) -> int:
        return sum(A.dimension * self.inner.degree(j) for j, A in enumerate(self.outer))


def _level_generators(spec: GccSpec, j: int) -> np.ndarray:
    """Flattened base-field generators of level j, shape (K_j * r_j, n * m)"""
    base, n, m = spec.base, spec.n, spec.m
    Q = spec.inner.level_basis(j).entries
    A = spec.outer[j]
    r = Q.shape[0]

    if A.kind == ZERO:
        return np.zeros((0, n * m), dtype=np.int64)

    if A.kind == FULL:
        rows = np.zeros((m, r, m, n), dtype=np.int64)
        for i in range(m):
            rows[i, :, i, :] = Q
        return rows.reshape(m * r, m * n)

    ext = A.code.spec
    tower = field_tower(base, ext)
    beta = tower.join(np.eye(r, dtype=np.int64))
    outer_rows = A.code.G.entries
    products = ext.mul(outer_rows[:, None, :], beta[None, :, None])
    coords = tower.split(products)
    arrays = base.matmul(coords.reshape(-1, r), Q).reshape(-1, m * n)
    return arrays


@dataclass(frozen=True, eq=False)
class GccCode:
    spec: GccSpec
    basis: np.ndarray
    dimension: int

    @property
    def base(self) -> FieldSpec:
        return self.spec.base

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def rate(self) -> float:
        return self.dimension / (self.n * self.m)

    @property
    def generators(self) -> list[FqMatrix]:
        """Basis arrays, each n x m"""
        return [FqMatrix(self.base, row.reshape(self.m, self.n).T) for row in self.basis]

    def __repr__(self):
        return f"GccCode(n={self.n}, m={self.m}, levels={self.spec.levels}, dim={self.dimension})"

    def as_linear_code(self) -> LinearCode:
        """The code as a linear code of length n*m"""
        return code_from_generators(self.base, self.n * self.m, self.basis)

    def contains(self, X: FqMatrix) -> bool:
        return X.flatten() in self.as_linear_code()

    def sample(self, count: int, seed=0) -> np.ndarray:
        """Random codewords as flattened rows"""
        rng = np.random.default_rng(seed)
        messages = rng.integers(0, self.base.q, size=(count, self.dimension))
        return self.as_linear_code().encode(messages)

    def decompose(self, X: FqMatrix) -> list[np.ndarray]:
        """
        Per-level coordinates of every column of X.

        Returns one (m, r_j) array per level. Raises ParameterError when a
        column of X lies outside B_1.
        """
        if X.shape != (self.n, self.m) or X.spec != self.base:
            raise ParameterError(f"Expected a {self.n}x{self.m} array over {self.base}")
        chain = self.spec.inner
        stacked = np.concatenate([chain.level_basis(j).entries for j in range(chain.levels)], axis=0)
        _, pivots = rref_array(self.base, stacked)
        square = self.base.array(stacked[:, pivots])
        columns = X.entries.T
        coords = self.base.ints(self.base.array(columns[:, pivots]) @ np.linalg.inv(square))
        if not np.array_equal(self.base.matmul(coords, stacked), columns):
            raise ParameterError("Array has a column outside the outermost inner code")

        degrees = [chain.degree(j) for j in range(chain.levels)]
        return np.split(coords, np.cumsum(degrees)[:-1], axis=1)

    def outer_words(self, X: FqMatrix) -> list[np.ndarray | None]:
        """Outer words over GF(q^{r_j}); None where the extension field exceeds the supported order"""
        words = []
        for j, coords in enumerate(self.decompose(X)):
            r = coords.shape[1]
            if self.base.q**r > MAX_FIELD_ORDER:
                words.append(None)
                continue
            A = self.spec.outer[j]
            ext = A.code.spec if A.kind == CODE else field_extend(self.base, r)
            words.append(field_tower(self.base, ext).join(coords))
        return words

    def levels_consistent(self, X: FqMatrix) -> bool:
        """Every level of X is a codeword of its outer code"""
        for j, coords in enumerate(self.decompose(X)):
            A = self.spec.outer[j]
            if A.kind == ZERO and np.any(coords):
                return False
            if A.kind == CODE:
                word = field_tower(self.base, A.code.spec).join(coords)
                if word not in A.code:
                    return False
        return True


def gcc_build(spec: GccSpec) -> GccCode:
    blocks = [_level_generators(spec, j) for j in range(spec.levels)]
    stacked = np.concatenate(blocks, axis=0)
    reduced, pivots = rref_array(spec.base, stacked)
    if len(pivots) != spec.expected_dimension:
        raise ParameterError(
            f"Level generators span dimension {len(pivots)}, expected {spec.expected_dimension}"
        )
    code = GccCode(spec, reduced[: len(pivots)], len(pivots))
    logger.debug(f"Built {code}")
    return code


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

EMPTY_LEVEL = 0
CONDITION_TEXT = {
    EMPTY_LEVEL: "outer code is zero",
    1: "D_j > 2w and B_j meets Delta(E1, E1) only in 0",
    2: "D_j > w and B_j meets Delta(E1, E2) only in 0",
    3: "B_j meets Delta(E2, E2) only in 0",
}


@dataclass(frozen=True)
class LevelVerdict:
    level: int
    condition: int | None
    outer_distance: int
    inner_dimension: int

    @property
    def passed(self) -> bool:
        return self.condition is not None

    def describe(self) -> str:
        reason = CONDITION_TEXT[self.condition] if self.passed else "no condition holds"
        return f"level {self.level}: D={self.outer_distance}, k={self.inner_dimension}: {reason}"


@dataclass(frozen=True)
class PbecCertificate:
    w: int
    levels: tuple[LevelVerdict, ...]

    @property
    def valid(self) -> bool:
        return all(v.passed for v in self.levels)

    def as_dict(self) -> dict:
        return {
            'valid': bool(self.valid),
            'w': int(self.w),
            'levels': [
                {'level': int(v.level), 'condition': None if v.condition is None else int(v.condition),
                 'outer_distance': int(v.outer_distance), 'inner_dimension': int(v.inner_dimension)}
                for v in self.levels
            ],
        }

    def report(self) -> str:
        status = "CERTIFIED" if self.valid else "NOT CERTIFIED"
        return "\n".join([status] + [f"  {v.describe()}" for v in self.levels])


def _certify(code: GccCode, w: int, tests) -> PbecCertificate:
    """tests[c](B) says whether B meets the condition-c difference set only in 0"""
    verdicts = []
    for j, A in enumerate(code.spec.outer):
        B = code.spec.inner.codes[j]
        D = A.distance
        if A.kind == ZERO:
            condition = EMPTY_LEVEL
        elif D > 2 * w and tests[1](B):
            condition = 1
        elif D > w and tests[2](B):
            condition = 2
        elif tests[3](B):
            condition = 3
        else:
            condition = None
        verdicts.append(LevelVerdict(j + 1, condition, D, B.k))
    certificate = PbecCertificate(w, tuple(verdicts))
    logger.info(f"Certificate for {code}: {'valid' if certificate.valid else 'invalid'}")
    return certificate


def certify_property1(code: GccCode, E1: ErrorSet, E2: ErrorSet, w: int) -> PbecCertificate:
    """Per-level sufficient conditions for correcting every PBE"""
    if E1.spec != code.base or E1.n != code.n:
        raise ParameterError("Error sets do not match the inner code length")
    if not 0 <= w <= code.m:
        raise ParameterError(f"Need 0 <= w <= m, got w={w}, m={code.m}")
    deltas = {}

    def avoids(index, first, second):
        def test(B):
            if index not in deltas:
                deltas[index] = first.minus(second)
            return intersects_only_zero(B, deltas[index])
        return test

    return _certify(code, w, {1: avoids(1, E1, E1), 2: avoids(2, E1, E2), 3: avoids(3, E2, E2)})


def certify_hamming(code: GccCode, t: int, w: int) -> PbecCertificate:
    """Hamming specialization: E1 = {0}, E2 = radius-t ball, via inner distances"""
    if not 0 <= w <= code.m:
        raise ParameterError(f"Need 0 <= w <= m, got w={w}, m={code.m}")
    return _certify(code, w, {
        1: lambda B: True,
        2: lambda B: min_distance(B) > t,
        3: lambda B: min_distance(B) > 2 * t,
    })


# ---------------------------------------------------------------------------
# Two- and three-level recipes
# ---------------------------------------------------------------------------

def symbols_for_length(q: int, m: int) -> int:
    """Smallest r with q^r >= m"""
    r = 0
    while q**r < m:
        r += 1
    return r


def _outer_for(base: FieldSpec, m: int, r: int, D: int) -> OuterCode:
    """MDS outer code of length m and distance at least D over GF(q^r)"""
    K = m - D + 1
    if K <= 0:
        return OuterCode.zero(m, r)
    if K >= m:
        return OuterCode.full(m, r)
    if K == 1:
        # Repetition codes are MDS over any field
        ext = field_extend(base, r)
        return OuterCode.from_code(code_from_generators(ext, m, [np.ones(m, dtype=np.int64)], designed_distance=m), r)
    if base.q**r < m:
        raise InfeasibleParameters(f"Reed-Solomon length {m} needs more than GF({base.q}^{r})")
    return OuterCode.from_code(rs_code(field_extend(base, r), m, K), r)


def _needs_mds(m: int, D: int) -> bool:
    return 1 < D <= m


def _widest_degree(q: int) -> int:
    """Largest r with q^r <= MAX_FIELD_ORDER"""
    r = 0
    while q ** (r + 1) <= MAX_FIELD_ORDER:
        r += 1
    return r


def _split_wide_levels(chain: CodeChain, m: int, distances) -> tuple[list[LinearCode], list[int]]:
    """
    Refine every MDS level whose extension field would exceed MAX_FIELD_ORDER
    into sub-levels of smaller degree with the same outer distance.

    Sub-level i is spanned by the level's quotient rows from chunk i on plus
    the next inner code, so it lies inside the original level code and the
    sub-levels together keep the level's dimension.
    """
    spec, n = chain.spec, chain.n
    widest = _widest_degree(spec.q)
    symbols = symbols_for_length(spec.q, m)
    codes, refined = [], []
    for j, D in enumerate(distances):
        r = chain.degree(j)
        if not _needs_mds(m, D) or spec.q**r <= MAX_FIELD_ORDER:
            codes.append(chain.codes[j])
            refined.append(D)
            continue

        pieces = -(-r // widest)
        if pieces * symbols > r:
            raise InfeasibleParameters(
                f"Level {j + 1} of degree {r} cannot be split into outer fields of length {m} "
                f"within GF({MAX_FIELD_ORDER})"
            )
        sizes = [r // pieces + (i < r % pieces) for i in range(pieces)]
        Q = chain.level_basis(j).entries
        below = chain.codes[j + 1].G.entries if j + 1 < chain.levels else np.zeros((0, n), dtype=np.int64)
        offset = 0
        for size in sizes:
            codes.append(code_from_generators(spec, n, np.concatenate([Q[offset:], below], axis=0)))
            refined.append(D)
            offset += size
        logger.debug(f"Split level {j + 1} of degree {r} into degrees {sizes}")
    return codes, refined


def _search_chain(ch: PbeChannel, roles, seed) -> list[tuple[LinearCode, int]]:
    """
    Nested greedy search: each code avoids its role's forbidden set inside
    the previous one. Returns (code, role index) pairs with strictly
    descending dimensions.
    """
    spec, n, m = ch.spec, ch.n, ch.m
    symbols = symbols_for_length(spec.q, m)

    first = gv_search(spec, n, roles[0][0], seed=seed, ambient=full_space(spec, n))
    if first.k == 0:
        raise InfeasibleParameters(f"No nonzero inner code avoids {roles[0][0]}")
    chain = [(first, 0)]

    for index in range(1, len(roles)):
        forbidden = roles[index][0]
        prev, prev_role = chain[-1]
        code = gv_search(spec, n, forbidden, seed=seed, ambient=prev)
        if code.k == prev.k:
            chain[-1] = (code, index)
            continue
        if _needs_mds(m, roles[prev_role][1]) and prev.k - code.k < symbols:
            limit = prev.k - symbols
            if limit <= 0:
                break
            code = gv_search(spec, n, forbidden, seed=seed, ambient=prev, max_k=limit)
        if code.k == 0:
            break
        chain.append((code, index))
    return chain


def _construct(ch: PbeChannel, roles, seed) -> tuple[GccCode, PbecCertificate]:
    base, m = ch.spec, ch.m
    if any(_needs_mds(m, D) for _, D in roles) and m > MAX_FIELD_ORDER:
        raise InfeasibleParameters(f"No Reed-Solomon code of length {m} within GF({MAX_FIELD_ORDER})")

    seed = pbec_setting('DEFAULT_SEED') if seed is None else seed
    retries = max(1, pbec_setting('CONSTRUCTION_RETRIES'))
    last_error = None
    for attempt in range(retries):
        attempt_seed = seed + attempt
        try:
            chain = _search_chain(ch, roles, attempt_seed)
            inner = chain_make([code for code, _ in chain])
            codes, distances = _split_wide_levels(inner, m, [roles[role][1] for _, role in chain])
            if len(codes) > inner.levels:
                inner = chain_make(codes)
            outer = [_outer_for(base, m, inner.degree(j), D) for j, D in enumerate(distances)]
            if outer[-1].kind == ZERO:
                raise InfeasibleParameters("Every outer code is zero; the construction has dimension 0")
            code = gcc_build(GccSpec(inner, tuple(outer)))
        except (SearchExhausted, InfeasibleParameters) as exc:
            last_error = exc
            logger.warning(f"Construction attempt with seed {attempt_seed} failed: {exc}")
            continue

        certificate = certify_property1(code, ch.E1, ch.E2, ch.w)
        if not certificate.valid:
            raise ParameterError(f"Constructed code failed its own certificate:\n{certificate.report()}")
        logger.info(f"Constructed {code} for {ch} (seed {attempt_seed}), rate {code.rate:.4f}")
        return code, certificate

    raise last_error


def _channel(q, n, m, E1, E2, w) -> PbeChannel:
    ch = PbeChannel(E1.spec, n, m, E1, E2, w)
    if ch.spec.q != q:
        raise ParameterError(f"Error sets are over {ch.spec}, not GF({q})")
    return ch


def construct_2level(q, n, m, E1: ErrorSet, E2: ErrorSet, w, seed=None):
    """
    B_1 avoids Delta(E1, E1) with an MDS outer code of distance 2w+1;
    B_2 inside B_1 avoids Delta(E2, E2) with a full outer code.
    """
    ch = _channel(q, n, m, E1, E2, w)
    roles = [(E1.minus(E1), 2 * w + 1), (E2.minus(E2), 1)]
    return _construct(ch, roles, seed)


def construct_3level(q, n, m, E1: ErrorSet, E2: ErrorSet, w, seed=None):
    """As construct_2level with a middle level avoiding Delta(E1, E2) under distance w+1"""
    ch = _channel(q, n, m, E1, E2, w)
    roles = [(E1.minus(E1), 2 * w + 1), (E1.minus(E2), w + 1), (E2.minus(E2), 1)]
    return _construct(ch, roles, seed)


def construct(ch: PbeChannel, levels: int, seed=None):
    recipe = {2: construct_2level, 3: construct_3level}.get(levels)
    if recipe is None:
        raise ParameterError(f"Only 2- and 3-level constructions are automated, got {levels}")
    return recipe(ch.spec.q, ch.n, ch.m, ch.E1, ch.E2, ch.w, seed)


def formula_rate(ch: PbeChannel, levels: int) -> float:
    """Asymptotic rate of the recipe at this channel's burst fraction and profile"""
    if (
        isinstance(ch.E1, HammingBall) and ch.E1.t == 0
        and isinstance(ch.E2, HammingBall)
    ):
        profile = profile_hamming(ch.spec.q, ch.E2.t / ch.n)
    else:
        profile = profile_empirical(ch.E1, ch.E2)
    shape = ChannelShape(ch.spec.q, ch.w / ch.m, profile)
    return rate_3lvl(shape) if levels == 3 else rate_2lvl(shape)
