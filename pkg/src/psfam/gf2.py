"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python integers. Component ``j`` of an
``m``-dimensional vector is bit ``m - 1 - j`` of the integer, so the integer
``i`` read in binary (most significant digit first) is exactly the vector
``v_i``. With this layout ``v_i + v_j == v_{i ^ j}`` and every row operation is
a single integer XOR.

The second half of the module builds the symmetric generator ``A`` from a
companion matrix through the chain C -> D -> Lambda -> M -> L -> B.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class GF2Error(ArithmeticError):
    """Base class for GF(2) linear algebra failures."""


class DimensionMismatch(GF2Error, ValueError):
    pass


class SingularMatrix(GF2Error):
    pass


class NoUnitDiagonal(GF2Error):
    pass


class DecompositionFailure(GF2Error):
    pass


def parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class BitVector:
    """An ``dim``-component vector over GF(2), packed into ``bits``."""

    bits: int
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.bits < 0 or self.bits >> self.dim:
            raise ValueError(f"bits {self.bits:#b} do not fit in dim {self.dim}")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> BitVector:
        bits = 0
        for e in entries:
            bits = (bits << 1) | (int(e) & 1)
        return cls(bits, len(entries))

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.dim:
            raise IndexError(j)
        return (self.bits >> (self.dim - 1 - j)) & 1

    def __add__(self, other: BitVector) -> BitVector:
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} != {other.dim}")
        return BitVector(self.bits ^ other.bits, self.dim)

    __sub__ = __add__

    def dot(self, other: BitVector) -> int:
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} != {other.dim}")
        return parity(self.bits & other.bits)

    def to_list(self) -> list[int]:
        return [self[j] for j in range(self.dim)]


@dataclass(frozen=True)
class BitMatrix:
    """Square ``dim x dim`` matrix over GF(2); ``rows[r]`` is a packed row.

    Entry ``(r, c)`` is bit ``dim - 1 - c`` of ``rows[r]``. Over GF(2)
    subtraction and addition coincide, so ``A - B`` is ``A + B``.
    """

    rows: tuple[int, ...]
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if len(self.rows) != self.dim:
            raise ValueError(f"expected {self.dim} rows, got {len(self.rows)}")
        for r in self.rows:
            if r < 0 or r >> self.dim:
                raise ValueError(f"row {r:#b} does not fit in dim {self.dim}")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> BitMatrix:
        dim = len(entries)
        rows = []
        for row in entries:
            if len(row) != dim:
                raise ValueError("matrix must be square")
            rows.append(BitVector.from_list(row).bits)
        return cls(tuple(rows), dim)

    @classmethod
    def identity(cls, dim: int) -> BitMatrix:
        return cls(tuple(1 << (dim - 1 - r) for r in range(dim)), dim)

    @classmethod
    def zeros(cls, dim: int) -> BitMatrix:
        return cls((0,) * dim, dim)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return (self.rows[r] >> (self.dim - 1 - c)) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self[r, c] for c in range(self.dim)] for r in range(self.dim)]

    def column(self, c: int) -> int:
        shift = self.dim - 1 - c
        col = 0
        for row in self.rows:
            col = (col << 1) | ((row >> shift) & 1)
        return col

    @property
    def T(self) -> BitMatrix:
        return BitMatrix(tuple(self.column(c) for c in range(self.dim)), self.dim)

    def apply(self, v: int) -> int:
        """Matrix-vector product ``M v`` on a packed vector."""
        out = 0
        for row in self.rows:
            out = (out << 1) | parity(row & v)
        return out

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mat_mul(self, other)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        _check_dims(self, other)
        return BitMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.dim)

    __sub__ = __add__

    def __pow__(self, k: int) -> BitMatrix:
        if k < 0:
            return mat_inverse(self) ** (-k)
        result = BitMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_symmetric(self) -> bool:
        return self == self.T

    def is_identity(self) -> bool:
        return self == BitMatrix.identity(self.dim)

    def rank(self) -> int:
        return _rank(list(self.rows), self.dim)

    def is_invertible(self) -> bool:
        return self.rank() == self.dim

    def __str__(self) -> str:
        return "\n".join(str(row) for row in self.to_lists())


def _check_dims(a: BitMatrix, b: BitMatrix) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.dim} != {b.dim}")


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    _check_dims(a, b)
    m = a.dim
    rows = []
    for row in a.rows:
        acc = 0
        for c in range(m):
            if (row >> (m - 1 - c)) & 1:
                acc ^= b.rows[c]
        rows.append(acc)
    return BitMatrix(tuple(rows), m)


def _rank(rows: list[int], ncols: int) -> int:
    rows = list(rows)
    rank = 0
    for bit in reversed(range(ncols)):
        pivot = next((i for i in range(rank, len(rows)) if (rows[i] >> bit) & 1), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and (rows[i] >> bit) & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def mat_inverse(a: BitMatrix) -> BitMatrix:
    """Gauss-Jordan elimination mod 2 on the augmented matrix ``[a | I]``."""
    m = a.dim
    aug = [(row << m) | (1 << (m - 1 - r)) for r, row in enumerate(a.rows)]
    for c in range(m):
        bit = 2 * m - 1 - c
        pivot = next((i for i in range(c, m) if (aug[i] >> bit) & 1), None)
        if pivot is None:
            raise SingularMatrix(f"matrix of dim {m} has rank < {m}")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        for i in range(m):
            if i != c and (aug[i] >> bit) & 1:
                aug[i] ^= aug[c]
    mask = (1 << m) - 1
    return BitMatrix(tuple(row & mask for row in aug), m)


def multiplicative_order(a: BitMatrix, bound: int | None = None) -> int:
    """Smallest ``k >= 1`` with ``a**k == I``; ``bound`` defaults to ``2**dim``."""
    if bound is None:
        bound = 1 << a.dim
    ident = BitMatrix.identity(a.dim)
    p = a
    for k in range(1, bound + 1):
        if p == ident:
            return k
        p = p @ a
    raise SingularMatrix("matrix has no finite order within bound")


# -- polynomials -------------------------------------------------------------


@dataclass(frozen=True)
class PolyGF2:
    """Monic polynomial ``sum a_i x^i`` over GF(2); ``coeffs = (a_0, ..., a_m)``."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) < 2 or self.coeffs[-1] != 1:
            raise ValueError("polynomial must be monic of degree >= 1")
        if any(c not in (0, 1) for c in self.coeffs):
            raise ValueError("coefficients must be 0 or 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_int(cls, value: int) -> PolyGF2:
        """Bit ``i`` of ``value`` is ``a_i``."""
        return cls(tuple((value >> i) & 1 for i in range(value.bit_length())))

    def to_int(self) -> int:
        return sum(c << i for i, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        terms = []
        for i in reversed(range(len(self.coeffs))):
            if self.coeffs[i]:
                terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
        return " + ".join(terms)


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(p: PolyGF2) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2.

    A zero constant term is rejected for every degree (``x`` itself is
    excluded so that the companion matrix is invertible).
    """
    if p.coeffs[0] == 0:
        return False
    value = p.to_int()
    for d in range(1, p.degree // 2 + 1):
        for low in range(1 << d):
            if _poly_mod(value, (1 << d) | low) == 0:
                return False
    return True


def _poly_mulmod(a: int, b: int, mod: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a = _poly_mod(a << 1, mod)
    return out


def _poly_powmod(base: int, e: int, mod: int) -> int:
    out = 1
    base = _poly_mod(base, mod)
    while e:
        if e & 1:
            out = _poly_mulmod(out, base, mod)
        base = _poly_mulmod(base, base, mod)
        e >>= 1
    return out


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_primitive(p: PolyGF2) -> bool:
    """Irreducible, and ``x`` has multiplicative order ``2^m - 1`` modulo ``p``.

    Only then does the companion matrix cycle through every nonzero vector.
    """
    if not is_irreducible(p):
        return False
    order = (1 << p.degree) - 1
    mod = p.to_int()
    if _poly_powmod(0b10, order, mod) != 1:
        return False
    return all(_poly_powmod(0b10, order // q, mod) != 1 for q in _prime_factors(order))


def irreducible_poly(m: int) -> PolyGF2:
    """Smallest primitive (hence irreducible) monic polynomial of degree ``m``.

    Candidates are ordered by their integer encoding ``sum a_i 2^i``, i.e.
    lexicographically on ``(a_{m-1}, ..., a_0)``. This gives ``x^2+x+1`` for
    ``m=2`` and ``x^3+x+1`` for ``m=3``. Primitivity is required: for
    ``m = 8`` the smallest irreducible ``x^8+x^4+x^3+x+1`` has order 51 and its
    companion matrix splits the nonzero vectors into several cycles.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    for low in range(1, 1 << m, 2):
        p = PolyGF2.from_int((1 << m) | low)
        if is_primitive(p):
            return p
    raise AssertionError(f"no primitive polynomial of degree {m}")


# -- symmetrization chain ----------------------------------------------------


def companion_matrix(p: PolyGF2) -> BitMatrix:
    """Shift rows ``e_{i+1}`` on top, ``(a_0, ..., a_{m-1})`` on the bottom."""
    m = p.degree
    rows = [1 << (m - 2 - r) for r in range(m - 1)]
    rows.append(BitVector.from_list(p.coeffs[:m]).bits)
    return BitMatrix(tuple(rows), m)


def d_sequence(p: PolyGF2) -> list[int]:
    """``b_0 = 1``, ``b_i = sum_{k<i} a_{m-i+k} b_k`` for ``i < m``."""
    a, m = p.coeffs, p.degree
    b = [1]
    for i in range(1, m):
        b.append(sum(a[m - i + k] * b[k] for k in range(i)) & 1)
    return b


def build_D(p: PolyGF2) -> BitMatrix:
    """Symmetric Hankel matrix with ``D[r][c] = b_{r+c-(m-1)}`` (zero above the anti-diagonal).

    Satisfies ``C D = D C^T`` for the companion matrix ``C`` of ``p``.
    """
    m = p.degree
    b = d_sequence(p)
    entries = [[b[r + c - (m - 1)] if r + c >= m - 1 else 0 for c in range(m)] for r in range(m)]
    return BitMatrix.from_lists(entries)


def unit_diagonal_pivot(d: BitMatrix) -> int:
    for a in range(d.dim):
        if d[a, a]:
            return a
    raise NoUnitDiagonal("D has no unit diagonal entry")


def build_Lambda(d: BitMatrix) -> BitMatrix:
    """``Lambda = I + e_a v^T`` with ``v_i = 1 + D_ii`` and ``a`` the first unit diagonal index.

    ``Lambda^T D Lambda`` then has an all-ones diagonal.
    """
    a = unit_diagonal_pivot(d)
    m = d.dim
    v = 0
    for i in range(m):
        v = (v << 1) | (1 ^ d[i, i])
    rows = list(BitMatrix.identity(m).rows)
    rows[a] ^= v
    return BitMatrix(tuple(rows), m)


def _delete_index(rows: Sequence[int], dim: int, i: int) -> list[int]:
    """Drop row ``i`` and column ``i`` from a packed matrix."""
    shift = dim - 1 - i
    high_mask = ~((1 << (shift + 1)) - 1)
    low_mask = (1 << shift) - 1
    out = []
    for r, row in enumerate(rows):
        if r == i:
            continue
        out.append(((row & high_mask) >> 1) | (row & low_mask))
    return out


def cholesky_gf2(mat: BitMatrix) -> BitMatrix:
    """Return invertible ``L`` with ``L L^T = mat``.

    ``mat`` must be symmetric, invertible and have every diagonal entry 1.
    Indices are peeled from the back; when the trailing minor is singular the
    smallest index whose principal minor is invertible is moved to the back
    instead, and that permutation is folded into the rows of ``L``.
    """
    if not mat.is_symmetric():
        raise ValueError("matrix must be symmetric")
    if any(mat[i, i] == 0 for i in range(mat.dim)):
        raise ValueError("matrix must have an all-ones diagonal")
    if not mat.is_invertible():
        raise SingularMatrix("matrix must be invertible")
    return BitMatrix(tuple(_cholesky_rows(list(mat.rows), mat.dim)), mat.dim)


def _cholesky_rows(rows: list[int], m: int) -> list[int]:
    if m == 1:
        return [1]
    candidates = [m - 1] + list(range(m - 1))
    for i in candidates:
        minor = _delete_index(rows, m, i)
        if _rank(minor, m - 1) == m - 1:
            break
    else:
        raise DecompositionFailure("no invertible principal minor")

    order = [r for r in range(m) if r != i] + [i]
    l_minor = BitMatrix(tuple(_cholesky_rows(minor, m - 1)), m - 1)

    # border column of the permuted matrix, restricted to the minor's indices
    eta = 0
    shift = m - 1 - i
    for r in order[:-1]:
        eta = (eta << 1) | ((rows[r] >> shift) & 1)
    w = mat_inverse(l_minor).apply(eta)
    if parity(w):
        # d_0^2 = 1 + |w| would vanish and L would be singular
        raise DecompositionFailure("border vector has odd weight")

    permuted = [row << 1 for row in l_minor.rows] + [(w << 1) | 1]
    out = [0] * m
    for r, row in zip(order, permuted):
        out[r] = row
    return out


@dataclass(frozen=True)
class GeneratorChain:
    """Every intermediate of the symmetric-generator construction."""

    poly: PolyGF2
    C: BitMatrix
    D: BitMatrix
    Lambda: BitMatrix
    M: BitMatrix
    L: BitMatrix
    B: BitMatrix
    A: BitMatrix


def generator_chain(m: int) -> GeneratorChain:
    poly = irreducible_poly(m)
    C = companion_matrix(poly)
    D = build_D(poly)
    Lam = build_Lambda(D)
    M = Lam.T @ D @ Lam
    L = cholesky_gf2(M)
    B = mat_inverse(Lam.T) @ L
    A = mat_inverse(B) @ C @ B
    return GeneratorChain(poly, C, D, Lam, M, L, B, A)


def build_symmetric_generator(m: int) -> BitMatrix:
    """Symmetric ``A`` similar to the companion matrix; its powers form a perfect solution."""
    return generator_chain(m).A


def random_invertible(m: int, rng) -> BitMatrix:
    """Uniformly random invertible matrix by rejection; ``rng`` is a numpy Generator."""
    while True:
        rows = tuple(int(r) for r in rng.integers(0, 1 << m, size=m))
        mat = BitMatrix(rows, m)
        if mat.is_invertible():
            return mat


def matrices_to_json(mats: Iterable[BitMatrix]) -> list[list[list[int]]]:
    return [mat.to_lists() for mat in mats]
