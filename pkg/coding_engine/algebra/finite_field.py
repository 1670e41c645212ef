"""
Exact arithmetic over GF(q), q = p^e <= 2^16.

Field elements are stored as integers in [0, q) whose base-p digits are the
polynomial coefficients (lowest degree first). Arithmetic is delegated to
galois lookup-table fields built once per FieldSpec.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass

import galois
import numpy as np

from coding_engine.exceptions import FieldSpecError, ParameterError

logger = logging.getLogger(__name__)

MAX_FIELD_ORDER = 2**16
MAX_ENCODABLE = 2**62


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^e) defined by a monic irreducible modulus (coefficients low-to-high)"""

    p: int
    e: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def gf(self) -> type[galois.FieldArray]:
        return _galois_field(self)

    def __str__(self):
        return f"GF({self.q})"

    def array(self, values) -> galois.FieldArray:
        """Lift integer reprs into a galois array"""
        values = np.asarray(values, dtype=np.int64)
        if values.size and (values.min() < 0 or values.max() >= self.q):
            raise FieldSpecError(f"Values outside [0, {self.q}) for {self}")
        return self.gf(values)

    @staticmethod
    def ints(values) -> np.ndarray:
        """Drop a galois array back to plain int64 reprs"""
        if isinstance(values, galois.FieldArray):
            return values.view(np.ndarray).astype(np.int64)
        return np.asarray(values, dtype=np.int64)

    # Vectorized helpers over integer repr arrays
    def add(self, a, b) -> np.ndarray:
        return self.ints(self.array(a) + self.array(b))

    def sub(self, a, b) -> np.ndarray:
        return self.ints(self.array(a) - self.array(b))

    def neg(self, a) -> np.ndarray:
        return self.ints(-self.array(a))

    def mul(self, a, b) -> np.ndarray:
        return self.ints(self.array(a) * self.array(b))

    def matmul(self, a, b) -> np.ndarray:
        return self.ints(self.array(a) @ self.array(b))


@functools.lru_cache(maxsize=None)
def _galois_field(spec: FieldSpec) -> type[galois.FieldArray]:
    # GF(2) has no lookup mode; "auto" uses tables for every other order up to MAX_FIELD_ORDER
    if spec.e == 1:
        field = galois.GF(spec.p, compile="auto")
    else:
        poly = galois.Poly(list(spec.modulus), field=galois.GF(spec.p), order="asc")
        field = galois.GF(spec.q, irreducible_poly=poly, compile="auto")
    logger.debug(f"Built {spec} in {field.ufunc_mode} mode")
    return field


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Conway polynomial for (p, e), falling back to the lexicographically minimal irreducible"""
    if e == 1:
        return (0, 1)
    try:
        poly = galois.conway_poly(p, e)
    except LookupError:
        logger.warning(f"No Conway polynomial on record for ({p}, {e}); using minimal irreducible")
        poly = galois.irreducible_poly(p, e, method="min")
    return tuple(int(c) for c in poly.coeffs[::-1])


def field_make(p: int, e: int = 1, modulus=None) -> FieldSpec:
    """
    Build a FieldSpec for GF(p^e).

    Args:
        p: prime characteristic
        e: extension degree
        modulus: optional monic irreducible polynomial, coefficients low-to-high

    Returns:
        FieldSpec; the default modulus for a given (p, e) never changes
    """
    if not isinstance(p, (int, np.integer)) or p < 2 or not galois.is_prime(int(p)):
        raise FieldSpecError(f"Characteristic {p} is not prime")
    if e < 1:
        raise FieldSpecError(f"Extension degree must be at least 1, got {e}")
    p, e = int(p), int(e)
    if p**e > MAX_FIELD_ORDER:
        raise FieldSpecError(f"Field order {p}^{e} exceeds {MAX_FIELD_ORDER}")

    if modulus is None:
        return FieldSpec(p, e, default_modulus(p, e))

    coeffs = tuple(int(c) for c in modulus)
    if len(coeffs) != e + 1 or coeffs[-1] != 1:
        raise FieldSpecError(f"Modulus {coeffs} is not monic of degree {e}")
    if any(c < 0 or c >= p for c in coeffs):
        raise FieldSpecError(f"Modulus coefficients must lie in [0, {p})")
    if e > 1:
        poly = galois.Poly(list(coeffs), field=galois.GF(p), order="asc")
        if not poly.is_irreducible():
            raise FieldSpecError(f"Modulus {poly} is reducible over GF({p})")
    return FieldSpec(p, e, coeffs)


def field_for_order(q: int) -> FieldSpec:
    """Default field of order q (q must be a prime power)"""
    if q < 2 or not galois.is_prime_power(int(q)):
        raise FieldSpecError(f"Field order {q} is not a prime power")
    primes, exponents = galois.factors(int(q))
    return field_make(int(primes[0]), int(exponents[0]))


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise FieldSpecError(f"Element {self.value} outside {self.spec}")

    def __int__(self):
        return self.value

    __index__ = __int__

    def __repr__(self):
        return f"{self.spec}({self.value})"

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldSpecError("Field elements belong to different fields")

    def _lift(self):
        return self.spec.gf(self.value)

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.spec, int(self._lift() + other._lift()))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.spec, int(self._lift() - other._lift()))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.spec, int(self._lift() * other._lift()))

    def __neg__(self):
        return FieldElement(self.spec, int(-self._lift()))

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError(f"Zero has no inverse in {self.spec}")
        return FieldElement(self.spec, int(self._lift() ** -1))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()


def elem_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def elem_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def elem_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def elem_neg(a: FieldElement) -> FieldElement:
    return -a


def elem_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


# ---------------------------------------------------------------------------
# Vectors and matrices
# ---------------------------------------------------------------------------

class FqVector:
    """Immutable length-n vector over GF(q)"""

    __slots__ = ('spec', 'entries')

    def __init__(self, spec: FieldSpec, entries):
        entries = np.array(entries, dtype=np.int64).reshape(-1)
        if entries.size and (entries.min() < 0 or entries.max() >= spec.q):
            raise FieldSpecError(f"Vector entries outside {spec}")
        entries.setflags(write=False)
        object.__setattr__(self, 'spec', spec)
        object.__setattr__(self, 'entries', entries)

    def __setattr__(self, name, value):
        raise AttributeError("FqVector is immutable")

    def __len__(self):
        return self.entries.size

    def __getitem__(self, i):
        return FieldElement(self.spec, int(self.entries[i]))

    def __iter__(self):
        return (FieldElement(self.spec, int(v)) for v in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, FqVector)
            and self.spec == other.spec
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.spec, self.entries.tobytes()))

    def __repr__(self):
        return f"FqVector({self.spec}, {self.entries.tolist()})"

    def __add__(self, other):
        self._check(other)
        return FqVector(self.spec, self.spec.add(self.entries, other.entries))

    def __sub__(self, other):
        self._check(other)
        return FqVector(self.spec, self.spec.sub(self.entries, other.entries))

    def __neg__(self):
        return FqVector(self.spec, self.spec.neg(self.entries))

    def scale(self, c: FieldElement):
        if c.spec != self.spec:
            raise FieldSpecError("Scalar belongs to a different field")
        return FqVector(self.spec, self.spec.mul(self.entries, c.value))

    def _check(self, other):
        if not isinstance(other, FqVector) or other.spec != self.spec or len(other) != len(self):
            raise FieldSpecError("Vectors differ in field or length")

    @property
    def weight(self) -> int:
        """Hamming weight"""
        return int(np.count_nonzero(self.entries))

    def to_int(self) -> int:
        return int(encode_vectors(self.spec.q, self.entries[None, :])[0])


class FqMatrix:
    """Immutable r x c matrix over GF(q), row-major"""

    __slots__ = ('spec', 'entries')

    def __init__(self, spec: FieldSpec, entries, cols=None):
        entries = np.array(entries, dtype=np.int64)
        if entries.ndim == 1 and entries.size == 0:
            entries = entries.reshape(0, cols or 0)
        if entries.ndim != 2:
            raise ParameterError(f"Matrix entries must be two-dimensional, got shape {entries.shape}")
        if entries.size and (entries.min() < 0 or entries.max() >= spec.q):
            raise FieldSpecError(f"Matrix entries outside {spec}")
        entries.setflags(write=False)
        object.__setattr__(self, 'spec', spec)
        object.__setattr__(self, 'entries', entries)

    def __setattr__(self, name, value):
        raise AttributeError("FqMatrix is immutable")

    @classmethod
    def zeros(cls, spec, rows, cols):
        return cls(spec, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, spec, size):
        return cls(spec, np.eye(size, dtype=np.int64))

    @classmethod
    def from_columns(cls, spec, columns, rows=None):
        columns = [np.asarray(getattr(c, 'entries', c), dtype=np.int64) for c in columns]
        if not columns:
            return cls(spec, np.zeros((rows or 0, 0), dtype=np.int64))
        return cls(spec, np.stack(columns, axis=1))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.spec == other.spec
            and self.entries.shape == other.entries.shape
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.spec, self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"FqMatrix({self.spec}, {self.entries.tolist()})"

    def __matmul__(self, other):
        if not isinstance(other, FqMatrix) or other.spec != self.spec:
            raise FieldSpecError("Matrices belong to different fields")
        if self.cols != other.rows:
            raise ParameterError(f"Cannot multiply {self.shape} by {other.shape}")
        return FqMatrix(self.spec, self.spec.matmul(self.entries, other.entries))

    def __add__(self, other):
        if not isinstance(other, FqMatrix) or other.spec != self.spec or other.shape != self.shape:
            raise ParameterError("Matrices differ in field or shape")
        return FqMatrix(self.spec, self.spec.add(self.entries, other.entries))

    def __sub__(self, other):
        if not isinstance(other, FqMatrix) or other.spec != self.spec or other.shape != self.shape:
            raise ParameterError("Matrices differ in field or shape")
        return FqMatrix(self.spec, self.spec.sub(self.entries, other.entries))

    def row(self, i) -> FqVector:
        return FqVector(self.spec, self.entries[i])

    def column(self, j) -> FqVector:
        return FqVector(self.spec, self.entries[:, j])

    def columns(self) -> list[FqVector]:
        """Column multiset col(X), in column order"""
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return FqMatrix(self.spec, self.entries.T)

    def flatten(self) -> FqVector:
        """Column-major flattening: column 0 first"""
        return FqVector(self.spec, self.entries.reshape(-1, order='F'))

    @classmethod
    def unflatten(cls, vector, rows, cols):
        entries = np.asarray(getattr(vector, 'entries', vector), dtype=np.int64)
        if entries.size != rows * cols:
            raise ParameterError(f"Cannot reshape length {entries.size} to {rows}x{cols}")
        return cls(vector.spec, entries.reshape(rows, cols, order='F'))


def rref_array(spec: FieldSpec, entries) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an int repr array; same shape, zero rows last"""
    entries = np.asarray(entries, dtype=np.int64)
    if entries.shape[0] == 0 or entries.shape[1] == 0:
        return entries.copy(), []
    reduced = spec.ints(spec.array(entries).row_reduce())
    pivots = []
    for row in reduced:
        nonzero = np.flatnonzero(row)
        if nonzero.size == 0:
            break
        pivots.append(int(nonzero[0]))
    return reduced, pivots


def mat_rref(M: FqMatrix) -> tuple[FqMatrix, int, list[int]]:
    reduced, pivots = rref_array(M.spec, M.entries)
    return FqMatrix(M.spec, reduced), len(pivots), pivots


def mat_rank(M: FqMatrix) -> int:
    return len(rref_array(M.spec, M.entries)[1])


def kernel_array(spec: FieldSpec, entries, cols=None) -> np.ndarray:
    """Basis rows of the right null space of an int repr array"""
    entries = np.asarray(entries, dtype=np.int64)
    cols = entries.shape[1] if entries.ndim == 2 else cols
    if entries.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    rank = len(rref_array(spec, entries)[1])
    if rank == cols:
        return np.zeros((0, cols), dtype=np.int64)
    basis = spec.ints(spec.array(entries).null_space())
    return basis.reshape(-1, cols)


def mat_kernel(M: FqMatrix) -> FqMatrix:
    return FqMatrix(M.spec, kernel_array(M.spec, M.entries, M.cols), cols=M.cols)


# ---------------------------------------------------------------------------
# Canonical integer encoding of vectors
# ---------------------------------------------------------------------------

def vector_weights(q: int, n: int) -> np.ndarray:
    if q**n > MAX_ENCODABLE:
        raise ParameterError(f"{q}^{n} vectors do not fit the canonical integer encoding")
    return q ** np.arange(n - 1, -1, -1, dtype=np.int64)


def encode_vectors(q: int, rows) -> np.ndarray:
    """Canonical integers of vectors (first coordinate most significant)"""
    rows = np.asarray(rows, dtype=np.int64)
    return rows @ vector_weights(q, rows.shape[-1])


def decode_vectors(q: int, n: int, codes) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    return (codes[..., None] // vector_weights(q, n)) % q


def all_vectors(q: int, n: int) -> np.ndarray:
    """Every vector of F_q^n in canonical order"""
    return decode_vectors(q, n, np.arange(q**n, dtype=np.int64))


def digits(values, base: int, count: int) -> np.ndarray:
    """Base-`base` digits of integer reprs, lowest first, along a new last axis"""
    values = np.asarray(values, dtype=np.int64)
    return (values[..., None] // base ** np.arange(count, dtype=np.int64)) % base


# ---------------------------------------------------------------------------
# Extension towers
# ---------------------------------------------------------------------------

class FieldTower:
    """
    GF(q^r) viewed as an r-dimensional space over GF(q).

    Coordinates are taken in the polynomial basis {1, a, ..., a^(r-1)} where
    a is the element x of the extension's defining polynomial. The base field
    is embedded through the smallest root of its own modulus.
    """

    def __init__(self, base: FieldSpec, ext: FieldSpec):
        if ext.p != base.p or ext.e % base.e:
            raise FieldSpecError(f"{ext} is not an extension of {base}")
        self.base = base
        self.ext = ext
        self.degree = ext.e // base.e

        p, e, r = base.p, base.e, self.degree
        Ext = ext.gf
        if e == 1:
            gamma = Ext(1)
        else:
            roots = galois.Poly(list(base.modulus), field=Ext, order="asc").roots()
            gamma = Ext(min(int(x) for x in roots))
        alpha = Ext(p) if ext.e > 1 else Ext(1)

        basis = [int(gamma**i * alpha**j) for j in range(r) for i in range(e)]
        prime = galois.GF(p)
        from_base = prime(digits(basis, p, e * r).T)
        self._from_base = from_base
        self._to_base = np.linalg.inv(from_base)

    def split(self, values) -> np.ndarray:
        """Extension reprs (any shape) to base-field coordinates along a new last axis"""
        p, e, r = self.base.p, self.base.e, self.degree
        values = np.asarray(values, dtype=np.int64)
        ext_digits = galois.GF(p)(digits(values.reshape(-1), p, e * r))
        coords = (ext_digits @ self._to_base.T).view(np.ndarray).astype(np.int64)
        coords = coords.reshape(values.shape + (r, e))
        return coords @ (p ** np.arange(e, dtype=np.int64))

    def join(self, coords) -> np.ndarray:
        """Base-field coordinates (last axis of length r) back to extension reprs"""
        p, e, r = self.base.p, self.base.e, self.degree
        coords = np.asarray(coords, dtype=np.int64)
        if coords.shape[-1] != r:
            raise ParameterError(f"Expected {r} coordinates, got {coords.shape[-1]}")
        flat = digits(coords, p, e).reshape(-1, e * r)
        ext_digits = (galois.GF(p)(flat) @ self._from_base.T).view(np.ndarray).astype(np.int64)
        values = ext_digits @ (p ** np.arange(e * r, dtype=np.int64))
        return values.reshape(coords.shape[:-1])


@functools.lru_cache(maxsize=None)
def field_tower(base: FieldSpec, ext: FieldSpec) -> FieldTower:
    return FieldTower(base, ext)


def field_extend(base: FieldSpec, r: int) -> FieldSpec:
    """Default GF(q^r) above a base field"""
    return field_make(base.p, base.e * r)


def ext_to_base(x: FieldElement, base: FieldSpec) -> FqVector:
    """Coordinates of an extension element over the base field"""
    tower = field_tower(base, x.spec)
    return FqVector(base, tower.split(x.value))


def base_to_ext(v: FqVector, ext: FieldSpec) -> FieldElement:
    tower = field_tower(v.spec, ext)
    return FieldElement(ext, int(tower.join(v.entries)))
