"""Statevector simulation and grouped expectation values.

Basis state ``k`` is the integer whose binary digits (most significant first)
are the qubit values, qubit 0 first. An expectation value is assembled from
measurement plans: each plan is a circuit ``U`` and a coefficient vector
``c`` with ``<H_group> = sum_k c_k |<k|U|psi>|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuits import Circuit, Gate, UnknownGate
from .diagonalize import MeasurementPlan, build_plans
from .partition import Solution, build_solution, group_operator
from .pauli import PauliString, WeightedPauliSum
from .walsh import fwht

SIMULATION_CAP = 12
DECOMPOSE_CAP = 8


class TooManyQubits(ValueError):
    pass


class NotHermitian(ValueError):
    pass


class AngleCountMismatch(ValueError):
    pass


_SQRT_HALF = 1 / math.sqrt(2)
_FIXED = {
    "h": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "uy": np.array([[1, 1], [-1, 1]], dtype=complex) * _SQRT_HALF,
    "uydg": np.array([[1, -1], [1, 1]], dtype=complex) * _SQRT_HALF,
}


def _single_qubit_matrix(g: Gate) -> np.ndarray:
    if g.name in _FIXED:
        return _FIXED[g.name]
    if g.name not in ("ry", "rz"):
        raise UnknownGate(g.name)
    t = g.param / 2
    if g.name == "ry":
        return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]], dtype=complex)
    return np.array([[np.exp(-1j * t), 0], [0, np.exp(1j * t)]])


def basis_state(m: int, k: int = 0) -> np.ndarray:
    psi = np.zeros(1 << m, dtype=complex)
    psi[k] = 1.0
    return psi


def simulate(circuit: Circuit, psi: np.ndarray, max_qubits: int = SIMULATION_CAP) -> np.ndarray:
    """Apply the gates of ``circuit`` in order and return the new state."""
    m = circuit.m
    if m > max_qubits:
        raise TooManyQubits(f"{m} qubits exceeds simulation cap {max_qubits}")
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (1 << m,):
        raise ValueError(f"state has shape {psi.shape}, expected ({1 << m},)")
    state = psi.reshape((2,) * m).copy()
    for g in circuit.gates:
        if g.name == "cx":
            c, t = g.qubits
            idx: list = [slice(None)] * m
            idx[c] = 1
            sub = state[tuple(idx)]
            state[tuple(idx)] = np.flip(sub, axis=t if t < c else t - 1)
        elif g.name == "cz":
            a, b = g.qubits
            idx = [slice(None)] * m
            idx[a] = 1
            idx[b] = 1
            state[tuple(idx)] *= -1
        else:
            (q,) = g.qubits
            u = _single_qubit_matrix(g)
            state = np.moveaxis(np.tensordot(u, state, axes=([1], [q])), 0, q)
    return state.reshape(-1)


def exact_probabilities(circuit: Circuit, psi: np.ndarray) -> np.ndarray:
    return np.abs(simulate(circuit, psi)) ** 2


def sample_counts(probabilities: np.ndarray, shots: int, seed) -> np.ndarray:
    """Multinomial outcome counts; identical for identical ``seed``."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    p = p / p.sum()
    return np.random.default_rng(seed).multinomial(shots, p)


def evaluate_plans(
    plans: Sequence[MeasurementPlan],
    psi: np.ndarray,
    offset: float = 0.0,
    shots: int | None = None,
    seed=None,
) -> float:
    """``offset + sum_j sum_k c_{j,k} M_{j,k}``; exact probabilities unless ``shots`` is given."""
    total = offset
    if shots is None:
        for plan in plans:
            total += float(plan.coeffs @ exact_probabilities(plan.circuit, psi))
        return total
    if seed is None:
        raise ValueError("shot sampling needs an explicit seed")
    seeds = np.random.SeedSequence(seed).spawn(len(plans))
    for plan, ss in zip(plans, seeds):
        counts = sample_counts(exact_probabilities(plan.circuit, psi), shots, ss)
        total += float(plan.coeffs @ counts) / shots
    return total


def _run(plans, psi, offset: float, mode: str, shots: int | None, seed) -> float:
    if mode == "exact":
        return evaluate_plans(plans, psi, offset)
    if mode == "shots":
        if shots is None:
            raise ValueError("shots mode needs a shot count")
        return evaluate_plans(plans, psi, offset, shots=shots, seed=seed)
    raise ValueError(f"unknown mode {mode!r}")


def dense_plans(sol: Solution, H: WeightedPauliSum) -> tuple[list[MeasurementPlan], float]:
    return build_plans(sol, group_operator(sol, H), H.identity)


def grouped_expectation(
    sol: Solution,
    H: WeightedPauliSum,
    psi: np.ndarray,
    mode: str = "exact",
    shots: int | None = None,
    seed=None,
) -> float:
    """Expectation of ``H`` measured with one circuit per non-empty dense family."""
    if H.m != sol.m:
        raise ValueError(f"operator has {H.m} qubits, solution has {sol.m}")
    plans, offset = dense_plans(sol, H)
    return _run(plans, psi, offset, mode, shots, seed)


def qwc_basis_circuit(m: int, strings: Sequence[PauliString]) -> Circuit:
    """Single-qubit rotations sending every qubit-wise commuting string to +z."""
    gates = []
    for q in range(m):
        chars = {p.char(q) for p in strings} - {"I"}
        if len(chars) > 1:
            raise ValueError(f"strings are not qubit-wise commuting on qubit {q}")
        if chars == {"X"}:
            gates.append(Gate("h", (q,)))
        elif chars == {"Y"}:
            gates += [Gate("rz", (q,), -math.pi / 2), Gate("h", (q,))]
    return Circuit(m, tuple(gates))


def qwc_plans(
    m: int, families: Sequence[Sequence[tuple[float, PauliString]]], identity: float = 0.0
) -> tuple[list[MeasurementPlan], float]:
    """Plans for qubit-wise commuting families (a naive grouping is one string per family)."""
    plans = []
    for f, terms in enumerate(families):
        weights = np.zeros(1 << m)
        for alpha, p in terms:
            weights[p.x | p.z] += alpha
        circuit = qwc_basis_circuit(m, [p for _, p in terms])
        plans.append(MeasurementPlan(f, circuit, fwht(weights)))
    return plans, identity


def expectation(
    H: WeightedPauliSum,
    psi: np.ndarray,
    method: str = "dense",
    mode: str = "exact",
    shots: int | None = None,
    seed=None,
    sol: Solution | None = None,
) -> float:
    """Estimate ``<psi|H|psi>`` with the dense, qwc or naive grouping."""
    if method == "dense":
        sol = sol or build_solution(H.m)
        plans, offset = dense_plans(sol, H)
    elif method == "qwc":
        from .baselines import greedy_color

        coeff = {p: c for c, p in H.terms}
        families = greedy_color(H.strings(), "qwc").families if H.terms else []
        plans, offset = qwc_plans(H.m, [[(coeff[p], p) for p in fam] for fam in families], H.identity)
    elif method == "naive":
        plans, offset = qwc_plans(H.m, [[t] for t in H.terms], H.identity)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _run(plans, psi, offset, mode, shots, seed)


# -- operators ---------------------------------------------------------------


def pauli_decompose(
    M: np.ndarray, max_qubits: int = DECOMPOSE_CAP, atol: float = 1e-10
) -> WeightedPauliSum:
    """Coefficients ``tr(P M) / 2^m`` for every string ``P``.

    For each x mask ``j`` the vector ``r -> M[r ^ j, r]`` is Walsh-transformed,
    giving all z masks at once; total cost ``O(4^m m)``.
    """
    M = np.asarray(M, dtype=complex)
    N = M.shape[0]
    if M.shape != (N, N) or N & (N - 1) or N < 2:
        raise ValueError(f"matrix shape {M.shape} is not 2^m x 2^m")
    m = N.bit_length() - 1
    if m > max_qubits:
        raise TooManyQubits(f"{m} qubits exceeds decomposition cap {max_qubits}")
    if not np.allclose(M, M.conj().T, atol=atol, rtol=0):
        raise NotHermitian("matrix is not Hermitian")
    r = np.arange(N)
    walsh = fwht(M[r[None, :] ^ r[:, None], r[None, :]], axis=1)  # [x, z]
    y = np.bitwise_count(r[:, None] & r[None, :]) % 4
    coeffs = (np.array([1, -1j, -1, 1j])[y] * walsh).real / N
    identity = float(coeffs[0, 0])
    coeffs[0, 0] = 0.0
    xs, zs = np.nonzero(coeffs)
    terms = [(float(coeffs[x, z]), PauliString(int(x), int(z), m)) for x, z in zip(xs, zs)]
    return WeightedPauliSum(m, terms, identity)


def apply_cut(H: WeightedPauliSum, tol: float, keep_identity: bool = True) -> WeightedPauliSum:
    """Drop every term with ``|coeff| < tol``."""
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    terms = [(c, p) for c, p in H.terms if abs(c) >= tol]
    identity = H.identity if keep_identity or abs(H.identity) >= tol else 0.0
    return WeightedPauliSum(H.m, terms, identity)


def to_matrix(H: WeightedPauliSum) -> np.ndarray:
    """Dense matrix of ``H``; inverse of :func:`pauli_decompose`."""
    N = 1 << H.m
    r = np.arange(N)
    out = np.eye(N, dtype=complex) * H.identity
    for c, p in H.terms:
        signs = 1 - 2 * (np.bitwise_count(r & p.z).astype(np.int64) & 1)  # rows index r
        phase = (1, -1j, -1, 1j)[p.y_count % 4]
        out[r, r ^ p.x] += c * phase * signs
    return out


def random_hermitian(m: int, seed) -> np.ndarray:
    """``(G + G^dag) / 2`` with ``G`` seeded standard complex normal."""
    rng = np.random.default_rng(seed)
    N = 1 << m
    G = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) * _SQRT_HALF
    return (G + G.conj().T) / 2


def random_state(m: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(1 << m) + 1j * rng.standard_normal(1 << m)
    return psi / np.linalg.norm(psi)


def dense_expectation(H: WeightedPauliSum, psi: np.ndarray) -> float:
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(np.vdot(psi, to_matrix(H) @ psi)))


# -- ansatz ------------------------------------------------------------------


@dataclass(frozen=True)
class AnsatzSpec:
    """``reps`` blocks of (RY layer, CZ chain) followed by a final RY layer."""

    reps: int
    angles: tuple[float, ...]

    def circuit(self, m: int) -> Circuit:
        if self.reps < 0:
            raise ValueError("reps must be >= 0")
        if len(self.angles) != m * (self.reps + 1):
            raise AngleCountMismatch(
                f"{len(self.angles)} angles given, {m * (self.reps + 1)} needed for m={m}, reps={self.reps}"
            )
        gates = []
        it = iter(self.angles)
        for _ in range(self.reps):
            gates += [Gate("ry", (q,), float(next(it))) for q in range(m)]
            gates += [Gate("cz", (q, q + 1)) for q in range(m - 1)]
        gates += [Gate("ry", (q,), float(next(it))) for q in range(m)]
        return Circuit(m, tuple(gates))


def build_ansatz_state(spec: AnsatzSpec, m: int) -> np.ndarray:
    return simulate(spec.circuit(m), basis_state(m))
