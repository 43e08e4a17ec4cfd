import numpy as np
import pytest

from oracles import circuit_unitary, pauli_matrix, random_state
from psfam.diagonalize import (
    UY_ONLY,
    PhaseNotReal,
    TermNotInFamily,
    build_circuit,
    build_plans,
    diag_generators,
    diag_power,
    eigenvalue,
    measurement_coeffs,
    member_phase,
    nominal_scale,
    z_rotation_block,
)
from psfam.gf2 import BitMatrix
from psfam.partition import build_solution, group_operator
from psfam.pauli import PauliString, PhasedPauli, WeightedPauliSum, parse

SOLS = {m: build_solution(m) for m in range(1, 7)}


def z_matrix(a: int, m: int) -> np.ndarray:
    return pauli_matrix(str(PauliString(0, a, m)))


class TestGenerators:
    def test_m2_f1(self):
        assert diag_generators(SOLS[2], 1) == [0b01, 0b11]
        assert [str(PauliString(k, 0, 2)) for k in diag_generators(SOLS[2], 1)] == ["IX", "XX"]

    def test_m2_f2_uses_first_power(self):
        sol = SOLS[2]
        assert diag_power(sol, 2) == 1
        assert diag_generators(sol, 2) == list(sol.A.rows)

    def test_special_families(self):
        assert diag_generators(SOLS[3], 0) == []
        assert diag_generators(SOLS[3], 8) == UY_ONLY

    @pytest.mark.parametrize("m", range(1, 7))
    def test_square_is_family_power(self, m):
        sol = SOLS[m]
        for f in range(1, sol.N):
            B = BitMatrix(tuple(diag_generators(sol, f)), m)
            assert B.is_symmetric()
            assert B @ B == sol.power(f)

    @pytest.mark.parametrize("m", range(1, 11))
    def test_condition_symbolic(self, m):
        # x part cancels: A^f v_i + sum_k (k . v_i) k = 0 for every i
        sol = build_solution(m) if m > 6 else SOLS[m]
        for f in range(1, sol.N, max(1, sol.N // 64)):
            K = diag_generators(sol, f)
            af = sol.power(f)
            for i in range(1, sol.N):
                acc = af.apply(i)
                for k in K:
                    if (k & i).bit_count() & 1:
                        acc ^= k
                assert acc == 0


class TestCircuit:
    def test_z_family_empty(self):
        assert len(build_circuit(SOLS[3], 0)) == 0

    def test_x_family(self):
        c = build_circuit(SOLS[2], 4)
        assert [(g.name, g.qubits) for g in c.gates] == [("uy", (0,)), ("uy", (1,))]

    def test_m2_f1_layout(self):
        c = build_circuit(SOLS[2], 1)
        names = [g.name for g in c.gates]
        assert names == ["uy", "uy", "s", "cx", "s", "cx", "uydg", "uydg"]

    def test_block_shape_weight_three(self):
        block = z_rotation_block(0b01011, 5)  # IXIXX
        assert [g.name for g in block] == ["cx", "cx", "s", "cx", "cx"]
        assert all(g.qubits[1] == 1 for g in block if g.name == "cx")
        assert [g.qubits for g in block if g.name == "s"] == [(1,)]

    @pytest.mark.parametrize("w", range(1, 7))
    def test_block_gate_count(self, w):
        assert len(z_rotation_block((1 << w) - 1, 6)) == 2 * (w - 1) + 1

    def test_block_unitary(self):
        # CX star / S / undo equals exp(-i pi/4 z_k) up to global phase
        m, k = 3, 0b101
        U = circuit_unitary(type(build_circuit(SOLS[3], 0))(m, tuple(z_rotation_block(k, m))))
        Zk = z_matrix(k, m)
        target = (np.eye(8) - 1j * Zk) / np.sqrt(2)
        phase = U[0, 0] / target[0, 0]
        assert np.allclose(U, phase * target)

    @pytest.mark.parametrize("m", range(1, 7))
    def test_exactly_m_blocks(self, m):
        sol = SOLS[m]
        for f in range(1, sol.N):
            assert build_circuit(sol, f).count("s") == m


class TestPhase:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_dense_conjugation(self, m):
        sol = SOLS[m]
        for f in range(sol.N + 1):
            U = circuit_unitary(build_circuit(sol, f))
            for pp in sol.family_members(f):
                phase, a = member_phase(sol, f, pp)
                got = U @ pauli_matrix(str(pp.pauli)) @ U.conj().T
                assert np.allclose(got, np.diag(np.diag(got)), atol=1e-10)
                assert np.allclose(got, phase * z_matrix(a, m), atol=1e-10)

    @pytest.mark.parametrize("m", range(1, 7))
    def test_exponent_parity(self, m):
        sol = SOLS[m]
        for f in range(1, sol.N):
            K = diag_generators(sol, f)
            for pp in sol.family_members(f):
                n_h = sum((k & pp.pauli.z).bit_count() & 1 for k in K)
                assert (n_h + pp.pauli.y_count) % 2 == 0

    def test_z_member(self):
        assert member_phase(SOLS[2], 0, parse("ZI")) == (1, 0b10)

    def test_not_in_family(self):
        with pytest.raises(TermNotInFamily):
            member_phase(SOLS[2], 1, parse("ZZ"))

    def test_imaginary_phase_rejected(self):
        with pytest.raises(PhaseNotReal):
            member_phase(SOLS[2], 1, PhasedPauli(parse("XZ"), 1))


class TestCoefficients:
    def test_eigenvalue(self):
        assert [eigenvalue(0, k, -1) for k in range(4)] == [-1] * 4
        assert eigenvalue(3, 3, 1) == 1
        assert eigenvalue(1, 3, 1) == -1

    def test_zz(self):
        c = measurement_coeffs(SOLS[2], 0, [(1.0, parse("ZZ"))])
        assert c.tolist() == [1, -1, -1, 1]

    def test_identity_only(self):
        assert measurement_coeffs(SOLS[2], 0, [], identity_coeff=0.5).tolist() == [0.5] * 4

    def test_wrong_family(self):
        with pytest.raises(TermNotInFamily):
            measurement_coeffs(SOLS[2], 1, [(1.0, parse("ZZ"))])

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_against_statevector(self, m):
        rng = np.random.default_rng(m)
        sol = SOLS[m]
        for f in range(sol.N + 1):
            members = [pp.pauli for pp in sol.family_members(f)]
            alphas = rng.standard_normal(len(members))
            terms = list(zip(alphas.tolist(), members))
            psi = random_state(m, rng)
            U = circuit_unitary(build_circuit(sol, f))
            probs = np.abs(U @ psi) ** 2
            dense = sum(a * pauli_matrix(str(p)) for a, p in terms)
            expected = np.vdot(psi, dense @ psi).real
            assert measurement_coeffs(sol, f, terms) @ probs == pytest.approx(expected, abs=1e-10)

    def test_identity_offset_without_z_family(self):
        H = WeightedPauliSum.from_dict(2, {"XX": 1.0}, identity=2.0)
        plans, offset = build_plans(SOLS[2], group_operator(SOLS[2], H), H.identity)
        assert offset == 2.0 and [p.family for p in plans] == [4]

    def test_identity_rides_on_z_family(self):
        H = WeightedPauliSum.from_dict(2, {"ZZ": 1.0}, identity=2.0)
        plans, offset = build_plans(SOLS[2], group_operator(SOLS[2], H), H.identity)
        assert offset == 0.0 and plans[0].coeffs.tolist() == [3, 1, 1, 3]


@pytest.mark.parametrize("m,expected", [(2, 0.8), (3, 0.75), (4, 0.77), (5, 0.77)])
def test_nominal_scale_near_reference(m, expected):
    assert nominal_scale(SOLS[m]) == pytest.approx(expected, abs=0.03)
