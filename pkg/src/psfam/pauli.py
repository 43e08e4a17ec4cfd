"""Symplectic bit-mask Pauli strings.

A string on ``m`` qubits is a pair of ``m``-bit masks. The leftmost character
is qubit 0 and maps to the most significant bit, so ``IIZZ`` has
``z == 0b0011 == 3`` and is the string ``z_3``. Per position,
``(x, z) = (0,0) -> I, (1,0) -> X, (0,1) -> Z, (1,1) -> Y``.

Phases follow the zx convention: a :class:`PhasedPauli` with exponent ``k``
is the operator ``(-i)^k z_{z} x_{x}``. Because ``Y = -i Z X``, a plain
character string with ``y`` Y's has exponent ``y``.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, NamedTuple

_CHARS = "IXZY"  # index = x | (z << 1)


class PauliError(ValueError):
    pass


class BadCharacter(PauliError):
    pass


class BadLength(PauliError):
    pass


class DimensionMismatch(PauliError):
    pass


class PauliString(NamedTuple):
    x: int
    z: int
    m: int

    @classmethod
    def from_xz(cls, x: int, z: int, m: int) -> PauliString:
        full = (1 << m) - 1
        if m < 1 or x & ~full or z & ~full:
            raise BadLength(f"masks do not fit in {m} qubits")
        return cls(x, z, m)

    @classmethod
    def identity(cls, m: int) -> PauliString:
        return cls(0, 0, m)

    def char(self, pos: int) -> str:
        bit = self.m - 1 - pos
        return _CHARS[((self.x >> bit) & 1) | (((self.z >> bit) & 1) << 1)]

    def __str__(self) -> str:
        return "".join(self.char(p) for p in range(self.m))

    @property
    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def label(self) -> int:
        """Integer ordering key ``x * 2^m + z``."""
        return (self.x << self.m) | self.z

    def is_identity(self) -> bool:
        return not (self.x or self.z)


def parse(text: str, m: int | None = None) -> PauliString:
    """Parse ``[IXYZ]{m}``; leftmost character is qubit 0 (most significant bit)."""
    if m is not None and len(text) != m:
        raise BadLength(f"expected {m} characters, got {len(text)}: {text!r}")
    if not text:
        raise BadLength("empty Pauli string")
    x = z = 0
    for ch in text:
        try:
            code = _CHARS.index(ch)
        except ValueError:
            raise BadCharacter(f"invalid character {ch!r} in {text!r}") from None
        x = (x << 1) | (code & 1)
        z = (z << 1) | (code >> 1)
    return PauliString(x, z, len(text))


def _same_m(p: PauliString, q: PauliString) -> None:
    if p.m != q.m:
        raise DimensionMismatch(f"{p.m} != {q.m} qubits")


def commutes(p: PauliString, q: PauliString) -> bool:
    """Symplectic product is zero."""
    _same_m(p, q)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1 == 0


def qwc_commutes(p: PauliString, q: PauliString) -> bool:
    """Every position is equal or has an identity on at least one side."""
    _same_m(p, q)
    both = (p.x | p.z) & (q.x | q.z)
    return not (both & ((p.x ^ q.x) | (p.z ^ q.z)))


def xz_decompose(p: PauliString) -> tuple[int, int, int]:
    """Return ``(i, j, y)`` with ``p == (-i)^y z_i x_j``."""
    return p.z, p.x, p.y_count


class PhasedPauli(NamedTuple):
    pauli: PauliString
    phase_exp: int = 0

    @classmethod
    def hermitian(cls, p: PauliString) -> PhasedPauli:
        """The character string itself, i.e. exponent equal to its Y count."""
        return cls(p, p.y_count % 4)

    @property
    def char_phase(self) -> int:
        """Exponent ``k`` such that the operator is ``(-i)^k`` times the character string."""
        return (self.phase_exp - self.pauli.y_count) % 4

    def __str__(self) -> str:
        prefix = ("", "-i", "-", "i")[self.char_phase]
        return f"{prefix}{self.pauli}"


def multiply(p: PhasedPauli, q: PhasedPauli) -> PhasedPauli:
    """Operator product ``p q`` in zx normal order.

    ``z_a x_b z_c x_d = (-1)^{|b & c|} z_{a^c} x_{b^d}``; each sign is two
    powers of ``-i``.
    """
    a, b = p.pauli, q.pauli
    _same_m(a, b)
    k = p.phase_exp + q.phase_exp + 2 * (a.x & b.z).bit_count()
    return PhasedPauli(PauliString(a.x ^ b.x, a.z ^ b.z, a.m), k % 4)


def all_paulis(m: int, include_identity: bool = False) -> Iterator[PauliString]:
    """Every string on ``m`` qubits in ``(x, z)`` label order."""
    for x, z in product(range(1 << m), repeat=2):
        if x or z or include_identity:
            yield PauliString(x, z, m)


class WeightedPauliSum:
    """Hermitian operator ``identity * I + sum coeff * P`` with real coefficients.

    Strings are unique and never the identity; zero coefficients are dropped.
    """

    __slots__ = ("m", "terms", "identity")

    def __init__(
        self,
        m: int,
        terms: Iterable[tuple[float, PauliString]] = (),
        identity: float = 0.0,
    ) -> None:
        self.m = m
        self.identity = float(identity)
        merged: dict[PauliString, float] = {}
        for coeff, p in terms:
            if p.m != m:
                raise DimensionMismatch(f"term {p} has {p.m} qubits, expected {m}")
            if p.is_identity():
                self.identity += float(coeff)
                continue
            if p in merged:
                raise ValueError(f"duplicate string {p}")
            merged[p] = float(coeff)
        self.terms: tuple[tuple[float, PauliString], ...] = tuple(
            (c, p) for p, c in merged.items() if c != 0.0
        )

    @classmethod
    def from_dict(cls, m: int, coeffs: dict[str, float], identity: float = 0.0) -> WeightedPauliSum:
        return cls(m, [(c, parse(s, m)) for s, c in coeffs.items()], identity)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def strings(self) -> list[PauliString]:
        return [p for _, p in self.terms]

    def to_dict(self) -> dict[str, float]:
        return {str(p): c for c, p in self.terms}

    def __repr__(self) -> str:
        return f"WeightedPauliSum(m={self.m}, n_terms={len(self.terms)}, identity={self.identity})"
