"""Clifford post-state rotations that map each family onto the z family.

For family ``f`` with ``1 <= f < N`` the rotation is
``U = prod_k exp(-i pi/4 x_k)`` over the rows ``k`` of ``B = (A^f)^{N/2}``;
because ``B`` is symmetric with ``B^2 = A^f``, the x part of every member
cancels and ``U z_a x_b U^dag = phase * z_a``. The circuit realizes ``U`` as
``UY`` on every qubit, one CX-ladder/S/CX-ladder block per row, then ``UYdg``
on every qubit. ``S = e^{i pi/4} exp(-i pi/4 Z)``, so each anticommuting
row right-multiplies a member by ``+i x_k`` and the phase exponent (powers of
``-i``) is ``Y(a, b) - N_H``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Gate
from .partition import Solution
from .pauli import PauliString, PhasedPauli
from .walsh import fwht

UY_ONLY = "UY-only"


class PhaseNotReal(ArithmeticError):
    pass


class TermNotInFamily(ValueError):
    pass


def diag_power(sol: Solution, f: int) -> int:
    """Exponent ``e`` with ``A^e = (A^f)^{N/2}``, in ``1..N-1``."""
    sol.check_family(f)
    if not 1 <= f < sol.N:
        raise ValueError("only families 1..N-1 have a generating power")
    N = sol.N
    e = f // 2 if f % 2 == 0 else (N + f - 1) // 2
    return e or N - 1


def diag_generators(sol: Solution, f: int) -> list[int] | str:
    """x-string labels ``K`` whose rotations diagonalize family ``f``.

    Empty for the z family and the ``UY_ONLY`` sentinel for the x family.
    """
    sol.check_family(f)
    if f == 0:
        return []
    if f == sol.N:
        return UY_ONLY
    rows = list(sol.power(diag_power(sol, f)).rows)
    assert all(rows), "invertible power cannot have a zero row"
    return rows


def _qubits(mask: int, m: int) -> list[int]:
    return [q for q in range(m) if (mask >> (m - 1 - q)) & 1]


def z_rotation_block(k: int, m: int) -> list[Gate]:
    """``exp(-i pi/4 z_k)`` up to global phase: CX star onto the first qubit, S, undo."""
    qubits = _qubits(k, m)
    pivot, rest = qubits[0], qubits[1:]
    ladder = [Gate("cx", (q, pivot)) for q in rest]
    return ladder + [Gate("s", (pivot,))] + ladder[::-1]


def build_circuit(sol: Solution, f: int) -> Circuit:
    K = diag_generators(sol, f)
    m = sol.m
    if K == UY_ONLY:
        return Circuit(m, tuple(Gate("uy", (q,)) for q in range(m)))
    if not K:
        return Circuit(m)
    gates = [Gate("uy", (q,)) for q in range(m)]
    for k in K:
        gates += z_rotation_block(k, m)
    gates += [Gate("uydg", (q,)) for q in range(m)]
    return Circuit(m, tuple(gates))


def member_phase(sol: Solution, f: int, member: PhasedPauli | PauliString) -> tuple[int, int]:
    """Return ``(phase, a)`` with ``U member U^dag = phase * z_a`` and ``phase = +-1``."""
    if isinstance(member, PauliString):
        member = PhasedPauli.hermitian(member)
    p = member.pauli
    if sol.lookup_family(p) != f and not p.is_identity():
        raise TermNotInFamily(f"{p} is not in family {f}")
    K = diag_generators(sol, f)
    if K == UY_ONLY:
        exponent, target = member.phase_exp, p.x
    else:
        n_h = sum((k & p.z).bit_count() & 1 for k in K)
        exponent, target = member.phase_exp - n_h, p.z
    exponent %= 4
    if exponent & 1:
        raise PhaseNotReal(f"{member} maps to an imaginary multiple of z_{target}")
    return (1 if exponent == 0 else -1), target


def eigenvalue(a: int, k: int, phase: int) -> int:
    """Eigenvalue of ``phase * z_a`` on computational basis state ``k``."""
    return -phase if (a & k).bit_count() & 1 else phase


@dataclass(frozen=True)
class MeasurementPlan:
    """One circuit plus the weights turning its outcome distribution into an expectation value."""

    family: int
    circuit: Circuit
    coeffs: np.ndarray  # length N; <H_family> = sum_k coeffs[k] * P(k)


def measurement_coeffs(
    sol: Solution,
    f: int,
    terms: list[tuple[float, PauliString]],
    identity_coeff: float = 0.0,
) -> np.ndarray:
    """``c_k = sum_terms alpha * phase * (-1)^{a . k}`` plus the identity coefficient."""
    weights = np.zeros(sol.N)
    for alpha, p in terms:
        if p.is_identity():
            identity_coeff += alpha
            continue
        phase, a = member_phase(sol, f, p)
        weights[a] += alpha * phase
    return fwht(weights) + identity_coeff


def build_plans(
    sol: Solution, groups: dict[int, list[tuple[float, PauliString]]], identity: float = 0.0
) -> tuple[list[MeasurementPlan], float]:
    """One plan per non-empty family.

    The identity coefficient rides on the z-family plan when there is one and
    is otherwise returned as a constant offset.
    """
    plans = []
    offset = identity
    for f, terms in groups.items():
        extra = 0.0
        if f == 0:
            extra, offset = offset, 0.0
        plans.append(MeasurementPlan(f, build_circuit(sol, f), measurement_coeffs(sol, f, terms, extra)))
    return plans, offset


def nominal_gate_counts(sol: Solution) -> list[int]:
    """Gate count of every family's circuit, indexed by family id."""
    return [len(build_circuit(sol, f)) for f in range(sol.N + 1)]


def nominal_depths(sol: Solution) -> list[int]:
    """Depth of every family's circuit, indexed by family id."""
    return [build_circuit(sol, f).depth() for f in range(sol.N + 1)]


def nominal_scale(sol: Solution) -> float:
    """Average post-rotation depth over all families divided by ``m^2``."""
    depths = nominal_depths(sol)
    return sum(depths) / len(depths) / sol.m**2
