"""Perfect partition of all Pauli strings into ``2^m + 1`` commuting families.

Family ids run over ``0..N`` with ``N = 2^m``: family 0 is the diagonal
``z`` family, family ``N`` the ``x`` family, and family ``1 <= f < N`` holds
the strings ``z_i x_{A^f v_i}`` for the symmetric generator ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .gf2 import BitMatrix, build_symmetric_generator, mat_inverse
from .pauli import PauliString, PhasedPauli, WeightedPauliSum

MAX_QUBITS = 16


class BadFamilyId(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Solution:
    m: int
    A: BitMatrix
    a_powers: tuple[BitMatrix, ...]  # a_powers[k] == A**k, k = 0..N-2; A**(N-1) == I
    q: tuple[int, ...]  # q[k] = A^k v_1 for k = 1..N-1
    q_inv: tuple[int, ...]  # q_inv[q[k]] = k
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def N(self) -> int:
        return 1 << self.m

    @property
    def n_families(self) -> int:
        return self.N + 1

    @property
    def z_family(self) -> int:
        return 0

    @property
    def x_family(self) -> int:
        return self.N

    def power(self, k: int) -> BitMatrix:
        return self.a_powers[k % (self.N - 1)]

    def check_family(self, f: int) -> None:
        if not 0 <= f <= self.N:
            raise BadFamilyId(f"family id {f} outside [0, {self.N}]")

    def family_members(self, f: int) -> list[PhasedPauli]:
        """Members of family ``f`` ordered by their z label; identity never included."""
        self.check_family(f)
        m, N = self.m, self.N
        if f == 0:
            strings = [PauliString(0, i, m) for i in range(1, N)]
        elif f == N:
            strings = [PauliString(j, 0, m) for j in range(1, N)]
        else:
            af = self.power(f)
            strings = [PauliString(af.apply(i), i, m) for i in range(1, N)]
        return [PhasedPauli.hermitian(p) for p in strings]

    def family_strings(self, f: int) -> list[str]:
        return [str(p.pauli) for p in self.family_members(f)]

    def lookup_family(self, p: PauliString) -> int:
        """Family id of ``p`` in O(1); the identity belongs to the z family by convention."""
        if p.m != self.m:
            raise ValueError(f"string has {p.m} qubits, solution has {self.m}")
        i, j = p.z, p.x
        if j == 0:
            return 0
        if i == 0:
            return self.N
        k = (self.q_inv[j] - self.q_inv[i]) % (self.N - 1)
        return k or self.N - 1

    def properties(self) -> str:
        """Text report: qubit count, generator rows, blank line, one family per line.

        Families ``1..N-1`` come first, then the x family, then the z family
        prefixed with the identity string.
        """
        lines = [f"Qubits: {self.m}", "Generating Matrix:"]
        lines += ["[" + ", ".join(str(v) for v in row) + "]" for row in self.A.to_lists()]
        lines.append("")
        for f in list(range(1, self.N)) + [self.N]:
            lines.append(",".join(self.family_strings(f)))
        lines.append(",".join(["I" * self.m] + self.family_strings(0)))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "generating_matrix": self.A.to_lists(),
            "families": [
                {"id": f, "members": self.family_strings(f)} for f in range(self.N + 1)
            ],
        }

    @cached_property
    def _q_array(self) -> np.ndarray:
        return np.asarray(self.q, dtype=np.int64)

    @cached_property
    def _q_inv_array(self) -> np.ndarray:
        return np.asarray(self.q_inv, dtype=np.int64)

    def table_nbytes(self) -> int:
        """Bytes held by the cached power and permutation tables."""
        row_bytes = (self.m + 7) // 8
        return len(self.a_powers) * self.m * row_bytes + 2 * 8 * self.N


def build_solution(m: int) -> Solution:
    if not 1 <= m <= MAX_QUBITS:
        raise ValueError(f"m must be in [1, {MAX_QUBITS}]")
    A = build_symmetric_generator(m)
    N = 1 << m
    powers = [BitMatrix.identity(m)]
    for _ in range(N - 2):
        powers.append(powers[-1] @ A)
    q = [0] * N
    q_inv = [0] * N
    v = 1
    for k in range(1, N):
        v = A.apply(v)
        q[k] = v
        q_inv[v] = k
    if sorted(q[1:]) != list(range(1, N)):
        raise AssertionError("generator does not act as a single cycle")
    return Solution(m, A, tuple(powers), tuple(q), tuple(q_inv))


def family_table(sol: Solution) -> tuple[np.ndarray, np.ndarray]:
    """All families at once as ``(x, z)`` mask arrays of shape ``(N+1, N-1)``.

    Row ``f`` lists family ``f`` in the same order as :meth:`Solution.family_members`.
    Uses ``A^f v_i = Q(Q^{-1}(i) + f)`` so no matrix products are needed.
    """
    N = sol.N
    dtype = np.uint16 if sol.m <= 16 else np.uint32
    i = np.arange(1, N, dtype=np.int64)
    f = np.arange(0, N + 1, dtype=np.int64)
    steps = (sol._q_inv_array[i][None, :] + f[:, None]) % (N - 1)
    steps[steps == 0] = N - 1
    x = sol._q_array[steps]
    z = np.broadcast_to(i, x.shape).copy()
    x[0] = 0
    x[N] = i
    z[N] = 0
    return x.astype(dtype), z.astype(dtype)


def lookup_families(sol: Solution, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Vectorized :meth:`Solution.lookup_family` over mask arrays."""
    x = np.asarray(x, dtype=np.int64)
    z = np.asarray(z, dtype=np.int64)
    N = sol.N
    qi = sol._q_inv_array
    k = (qi[x] - qi[z]) % (N - 1)
    k[k == 0] = N - 1
    out = np.where(x == 0, 0, np.where(z == 0, N, k))
    return out


def group_operator(
    sol: Solution, H: WeightedPauliSum
) -> dict[int, list[tuple[float, PauliString]]]:
    """Assign every term of ``H`` to its family; empty families are omitted.

    Identity terms, if present among the terms, go to the z family.
    """
    if H.m != sol.m:
        raise ValueError(f"operator has {H.m} qubits, solution has {sol.m}")
    terms = H.terms
    if not terms:
        return {}
    n = len(terms)
    x = np.fromiter((p.x for _, p in terms), dtype=np.int64, count=n)
    z = np.fromiter((p.z for _, p in terms), dtype=np.int64, count=n)
    fam = lookup_families(sol, x, z)
    order = np.argsort(fam, kind="stable")
    labels, starts = np.unique(fam[order], return_index=True)
    bounds = np.append(starts, n)
    return {
        int(f): [terms[i] for i in order[bounds[k] : bounds[k + 1]].tolist()]
        for k, f in enumerate(labels.tolist())
    }


@dataclass(frozen=True)
class ConjugatedSolution:
    """The family set ``{Delta A^k Delta^T}``; no longer cyclic, so lookup is a table."""

    m: int
    matrices: tuple[BitMatrix, ...]  # matrices[k-1] = Delta A^k Delta^T

    @cached_property
    def _lookup(self) -> dict[tuple[int, int], int]:
        table = {}
        for f, mat in enumerate(self.matrices, start=1):
            for i in range(1, 1 << self.m):
                table[(mat.apply(i), i)] = f
        return table

    def family_members(self, f: int) -> list[PhasedPauli]:
        N = 1 << self.m
        if f == 0:
            return [PhasedPauli.hermitian(PauliString(0, i, self.m)) for i in range(1, N)]
        if f == N:
            return [PhasedPauli.hermitian(PauliString(j, 0, self.m)) for j in range(1, N)]
        if not 1 <= f < N:
            raise BadFamilyId(f)
        mat = self.matrices[f - 1]
        return [PhasedPauli.hermitian(PauliString(mat.apply(i), i, self.m)) for i in range(1, N)]

    def lookup_family(self, p: PauliString) -> int:
        if p.x == 0:
            return 0
        if p.z == 0:
            return 1 << self.m
        return self._lookup[(p.x, p.z)]


def conjugate_solution(sol: Solution, delta: BitMatrix) -> ConjugatedSolution:
    """Non-canonical perfect solution from an invertible ``delta``."""
    mat_inverse(delta)  # raises SingularMatrix
    dt = delta.T
    mats = tuple(delta @ sol.power(k) @ dt for k in range(1, sol.N))
    return ConjugatedSolution(sol.m, mats)
