import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from psfam.circuits import Circuit, Gate, UnknownGate
from psfam.diagonalize import build_circuit
from psfam.measure import (
    AngleCountMismatch,
    AnsatzSpec,
    NotHermitian,
    TooManyQubits,
    apply_cut,
    basis_state,
    build_ansatz_state,
    dense_expectation,
    exact_probabilities,
    expectation,
    grouped_expectation,
    pauli_decompose,
    qwc_basis_circuit,
    random_hermitian,
    random_state,
    sample_counts,
    simulate,
    to_matrix,
)
from psfam.partition import build_solution
from psfam.pauli import WeightedPauliSum, parse

SOLS = {m: build_solution(m) for m in range(1, 6)}
GATES = ["cx", "cz", "s", "h", "uy", "uydg", "ry", "rz"]


def random_circuit(m: int, n: int, rng) -> Circuit:
    gates = []
    for _ in range(n):
        name = GATES[rng.integers(len(GATES))]
        if name in ("cx", "cz"):
            if m < 2:
                continue
            qubits = tuple(int(q) for q in rng.choice(m, 2, replace=False))
        else:
            qubits = (int(rng.integers(m)),)
        param = float(rng.uniform(-4, 4)) if name in ("ry", "rz") else None
        gates.append(Gate(name, qubits, param))
    return Circuit(m, tuple(gates))


class TestSimulate:
    def test_empty(self):
        psi = random_state(3, 0)
        assert np.array_equal(simulate(Circuit(3), psi), psi)

    def test_uy_on_zero(self):
        out = simulate(Circuit(1, (Gate("uy", (0,)),)), basis_state(1))
        assert np.allclose(out, oracles.UY @ [1, 0])
        assert np.allclose(np.abs(out) ** 2, [0.5, 0.5])

    def test_cx_parity(self):
        c = Circuit(2, (Gate("cx", (1, 0)),))
        assert np.allclose(simulate(c, basis_state(2, 0b11)), basis_state(2, 0b01))

    def test_cx_star_parity(self):
        # parity of qubits 0, 1, 3 collected on pivot 1
        c = Circuit(4, (Gate("cx", (0, 1)), Gate("cx", (3, 1))))
        for k in range(16):
            bits = [(k >> (3 - q)) & 1 for q in range(4)]
            out = np.flatnonzero(np.abs(simulate(c, basis_state(4, k))) > 0.5)[0]
            assert (out >> 2) & 1 == (bits[0] + bits[1] + bits[3]) % 2

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 2**32))
    def test_matches_dense_unitary(self, m, seed):
        rng = np.random.default_rng(seed)
        c = random_circuit(m, 12, rng)
        psi = oracles.random_state(m, rng)
        out = simulate(c, psi)
        assert np.allclose(out, oracles.circuit_unitary(c) @ psi, atol=1e-12)
        assert abs(np.linalg.norm(out) - 1) < 1e-10

    def test_cap(self):
        with pytest.raises(TooManyQubits):
            simulate(Circuit(13), basis_state(13))

    def test_unknown_gate(self):
        c = Circuit(1)
        object.__setattr__(c, "gates", (Gate("t", (0,)),))
        with pytest.raises(UnknownGate):
            simulate(c, basis_state(1))

    def test_shape_check(self):
        with pytest.raises(ValueError):
            simulate(Circuit(2), basis_state(3))


class TestProbabilities:
    def test_identity(self):
        assert np.array_equal(exact_probabilities(Circuit(2), basis_state(2)), [1, 0, 0, 0])

    def test_bell_family_one(self):
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        c = build_circuit(SOLS[2], 1)
        expected = np.abs(oracles.circuit_unitary(c) @ bell) ** 2
        got = exact_probabilities(c, bell)
        assert np.allclose(got, expected) and abs(got.sum() - 1) < 1e-10


class TestSampling:
    def test_point_mass(self):
        assert sample_counts([1, 0, 0, 0], 50, 1).tolist() == [50, 0, 0, 0]

    def test_deterministic(self):
        p = [0.1, 0.2, 0.3, 0.4]
        assert np.array_equal(sample_counts(p, 1000, 7), sample_counts(p, 1000, 7))

    def test_binomial_bound(self):
        counts = sample_counts([0.5, 0.5], 10**6, 3)
        assert counts.sum() == 10**6
        assert abs(counts[0] - 5e5) < 5 * math.sqrt(10**6 * 0.25)

    def test_shots_positive(self):
        with pytest.raises(ValueError):
            sample_counts([1.0], 0, 1)


class TestExpectation:
    def test_zz_on_zero(self):
        H = WeightedPauliSum.from_dict(2, {"ZZ": 1.0})
        assert grouped_expectation(SOLS[2], H, basis_state(2)) == pytest.approx(1.0)

    def test_xx_on_bell(self):
        H = WeightedPauliSum.from_dict(2, {"XX": 1.0})
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        assert grouped_expectation(SOLS[2], H, bell) == pytest.approx(1.0)

    @pytest.mark.parametrize("m", range(1, 6))
    def test_dense_oracle(self, m):
        rng = np.random.default_rng(100 + m)
        for _ in range(10):
            M = oracles.random_hermitian(m, rng)
            psi = oracles.random_state(m, rng)
            H = pauli_decompose(M)
            expected = np.vdot(psi, M @ psi).real
            assert grouped_expectation(SOLS[m], H, psi) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("method", ["dense", "qwc", "naive"])
    def test_methods_agree(self, method):
        M = random_hermitian(3, 5)
        psi = random_state(3, 6)
        H = pauli_decompose(M)
        assert expectation(H, psi, method=method) == pytest.approx(np.vdot(psi, M @ psi).real, abs=1e-9)

    def test_shot_mode_reproducible(self):
        H = pauli_decompose(random_hermitian(2, 1))
        psi = random_state(2, 2)
        a = grouped_expectation(SOLS[2], H, psi, mode="shots", shots=1000, seed=9)
        b = grouped_expectation(SOLS[2], H, psi, mode="shots", shots=1000, seed=9)
        assert a == b

    def test_shot_mode_needs_seed(self):
        H = WeightedPauliSum.from_dict(1, {"Z": 1.0})
        with pytest.raises(ValueError):
            grouped_expectation(SOLS[1], H, basis_state(1), mode="shots", shots=10)

    def test_qwc_basis_circuit(self):
        c = qwc_basis_circuit(3, [parse("XIY"), parse("XZI")])
        U = oracles.circuit_unitary(c)
        for s, target in [("XIY", "ZIZ"), ("XZI", "ZZI")]:
            assert np.allclose(U @ oracles.pauli_matrix(s) @ U.conj().T, oracles.pauli_matrix(target))

    def test_mismatched_m(self):
        with pytest.raises(ValueError):
            grouped_expectation(SOLS[2], WeightedPauliSum.from_dict(1, {"Z": 1.0}), basis_state(1))


class TestDecompose:
    def test_z(self):
        H = pauli_decompose(np.diag([1.0, -1.0]))
        assert H.to_dict() == {"Z": 1.0} and H.identity == 0

    def test_identity(self):
        H = pauli_decompose(np.eye(4))
        assert H.identity == 1.0 and len(H) == 0

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_trace_formula(self, m):
        M = oracles.random_hermitian(m, np.random.default_rng(m))
        H = pauli_decompose(M)
        brute = oracles.decompose(M)
        assert H.identity == pytest.approx(brute.pop("I" * m), abs=1e-12)
        got = H.to_dict()
        for s, c in brute.items():
            assert got.get(s, 0.0) == pytest.approx(c, abs=1e-12)

    @pytest.mark.parametrize("m", [1, 3, 5])
    def test_round_trip(self, m):
        M = random_hermitian(m, m)
        H = pauli_decompose(M)
        assert np.allclose(to_matrix(H), M, atol=1e-9)
        assert np.allclose(oracles.operator_matrix(H), M, atol=1e-9)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            pauli_decompose(np.array([[0, 1], [0, 0]]))

    def test_too_large(self):
        with pytest.raises(TooManyQubits):
            pauli_decompose(np.eye(2**9))

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            pauli_decompose(np.eye(3))


class TestCut:
    def test_zero(self):
        H = pauli_decompose(random_hermitian(2, 0))
        assert apply_cut(H, 0).terms == H.terms

    def test_infinite(self):
        H = pauli_decompose(random_hermitian(2, 0))
        cut = apply_cut(H, math.inf)
        assert len(cut) == 0 and cut.identity == H.identity
        assert apply_cut(H, math.inf, keep_identity=False).identity == 0.0

    def test_monotone(self):
        H = pauli_decompose(random_hermitian(3, 0))
        sizes = [len(apply_cut(H, t)) for t in (0, 1e-4, 0.05, 0.1, 0.2)]
        assert sizes == sorted(sizes, reverse=True)
        assert all(abs(c) >= 0.1 for c, _ in apply_cut(H, 0.1).terms)

    def test_negative(self):
        with pytest.raises(ValueError):
            apply_cut(WeightedPauliSum(1), -1)


class TestAnsatz:
    def test_zero_angles(self):
        for reps in range(3):
            psi = build_ansatz_state(AnsatzSpec(reps, (0.0,) * 3 * (reps + 1)), 3)
            assert np.allclose(psi, basis_state(3))

    @pytest.mark.parametrize("reps,angles", [(0, (math.pi,)), (1, (math.pi, 0.0))])
    def test_pi_flips(self, reps, angles):
        psi = build_ansatz_state(AnsatzSpec(reps, angles), 1)
        assert np.allclose(np.abs(psi), [0, 1])

    def test_angle_count(self):
        with pytest.raises(AngleCountMismatch):
            build_ansatz_state(AnsatzSpec(1, (0.0,) * 3), 2)

    def test_matches_dense(self):
        rng = np.random.default_rng(11)
        spec = AnsatzSpec(2, tuple(rng.uniform(0, 2 * np.pi, 9)))
        expected = oracles.circuit_unitary(spec.circuit(3))[:, 0]
        assert np.allclose(build_ansatz_state(spec, 3), expected)

    def test_deterministic(self):
        spec = AnsatzSpec(1, tuple(np.random.default_rng(3).uniform(0, 1, 4)))
        assert np.array_equal(build_ansatz_state(spec, 2), build_ansatz_state(spec, 2))


def test_random_generators_seeded():
    assert np.array_equal(random_hermitian(2, 4), random_hermitian(2, 4))
    M = random_hermitian(2, 4)
    assert np.allclose(M, M.conj().T)
    assert np.linalg.norm(random_state(3, 1)) == pytest.approx(1.0)
    H = WeightedPauliSum.from_dict(1, {"X": 1.0})
    assert dense_expectation(H, np.array([1, 1]) / np.sqrt(2)) == pytest.approx(1.0)
