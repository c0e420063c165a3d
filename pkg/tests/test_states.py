import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmteleport.states import (
    PAULI,
    InputState,
    InvalidStateError,
    bell_overlap,
    bell_overlaps,
    bell_projector,
    bell_state,
    combine_index,
    is_density_matrix,
    pauli_conjugate,
    pure_state_fidelity,
    validate_density_matrix,
)

from conftest import density_matrices

S = 1 / np.sqrt(2)
KET_E = np.diag([1, 0]).astype(complex)
KET_G = np.diag([0, 1]).astype(complex)


class TestBellStates:
    def test_phi_plus(self):
        np.testing.assert_allclose(bell_state(0), [S, 0, 0, S], atol=1e-15)

    def test_psi_plus(self):
        np.testing.assert_allclose(bell_state(1), [0, S, S, 0], atol=1e-15)

    def test_minus_states(self):
        np.testing.assert_allclose(bell_state(2), [0, S, -S, 0], atol=1e-15)
        np.testing.assert_allclose(bell_state(3), [S, 0, 0, -S], atol=1e-15)

    def test_phi_plus_phi_minus_orthogonal(self):
        assert abs(np.vdot(bell_state(0), bell_state(3))) < 1e-15

    def test_gram_is_identity(self):
        basis = np.array([bell_state(m) for m in range(4)])
        np.testing.assert_allclose(basis.conj() @ basis.T, np.eye(4), atol=1e-14)

    def test_pauli_labels_match_bell_labels(self):
        # (I x sigma_m)|Psi^(0)> is |Psi^(m)> up to a global phase
        for m in range(4):
            v = np.kron(np.eye(2), PAULI[m]) @ bell_state(0)
            assert abs(abs(np.vdot(bell_state(m), v)) - 1) < 1e-14

    @pytest.mark.parametrize("bad", [-1, 4, 1.5])
    def test_invalid_index(self, bad):
        with pytest.raises(ValueError):
            bell_state(bad)

    def test_returns_copy(self):
        v = bell_state(0)
        v[0] = 7
        assert bell_state(0)[0] == pytest.approx(S)


class TestCombineIndex:
    def test_group_table(self):
        # X.Y ~ Z, X.Z ~ Y, Y.Z ~ X
        assert combine_index(1, 2) == 3
        assert combine_index(1, 3) == 2
        assert combine_index(2, 3) == 1

    def test_identity_and_inverse(self):
        for m in range(4):
            assert combine_index(0, m) == m
            assert combine_index(m, m) == 0


class TestBellOverlap:
    def test_projector_on_itself(self):
        assert bell_overlap(bell_projector(0), 0) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("m", range(4))
    def test_maximally_mixed(self, m):
        assert bell_overlap(np.eye(4) / 4, m) == pytest.approx(0.25, abs=1e-15)

    def test_ground_state(self):
        gg = np.zeros((4, 4))
        gg[3, 3] = 1
        assert bell_overlap(gg, 0) == pytest.approx(0.5, abs=1e-15)

    def test_rejects_invalid(self):
        with pytest.raises(InvalidStateError):
            bell_overlap(np.eye(4), 0)

    @settings(max_examples=200, deadline=None)
    @given(density_matrices())
    def test_completeness(self, rho):
        p = bell_overlaps(rho)
        assert abs(p.sum() - 1) < 1e-12
        assert np.all(p >= -1e-12) and np.all(p <= 1 + 1e-12)
        for m in range(4):
            assert bell_overlap(rho, m) == pytest.approx(p[m], abs=1e-14)


class TestValidation:
    def test_accepts_pure_state(self):
        validate_density_matrix(bell_projector(2))

    def test_rejects_non_hermitian(self):
        rho = np.eye(4, dtype=complex) / 4
        rho[0, 1] = 1e-6
        with pytest.raises(InvalidStateError, match="Hermitian"):
            validate_density_matrix(rho)

    def test_rejects_trace(self):
        with pytest.raises(InvalidStateError, match="trace"):
            validate_density_matrix(np.eye(4) / 3.9)

    def test_rejects_negative(self):
        with pytest.raises(InvalidStateError, match="semidefinite"):
            validate_density_matrix(np.diag([1.1, -0.1, 0, 0]))

    def test_tolerates_roundoff(self):
        assert is_density_matrix(np.diag([1.0, -1e-11, 0, 1e-11]))

    def test_rejects_shape(self):
        with pytest.raises(InvalidStateError):
            validate_density_matrix(np.eye(2) / 2)


class TestPauliConjugate:
    def test_identity(self):
        rho = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
        np.testing.assert_array_equal(pauli_conjugate(rho, 0), rho)

    def test_bit_flip(self):
        np.testing.assert_allclose(pauli_conjugate(KET_E, 1), KET_G, atol=1e-15)

    def test_phase_flip_coherence(self):
        eg = np.array([[0, 1], [0, 0]], dtype=complex)
        np.testing.assert_allclose(pauli_conjugate(eg, 3), -eg, atol=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(density_matrices(dim=2), st.integers(0, 3))
    def test_trace_hermiticity_involution(self, rho, j):
        out = pauli_conjugate(rho, j)
        assert abs(np.trace(out) - np.trace(rho)) < 1e-14
        assert np.max(np.abs(out - out.conj().T)) < 1e-14
        np.testing.assert_allclose(pauli_conjugate(out, j), rho, atol=1e-14)


class TestPureStateFidelity:
    def test_same_state(self):
        assert pure_state_fidelity(InputState(0.0), KET_E) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert pure_state_fidelity(InputState(0.0), KET_G) == pytest.approx(0.0, abs=1e-15)

    def test_maximally_mixed(self):
        assert pure_state_fidelity(InputState(np.pi / 2, 0.0), np.eye(2) / 2) == pytest.approx(0.5)

    def test_equals_one_on_own_projector(self):
        psi = InputState(1.1, 4.0)
        assert pure_state_fidelity(psi, psi.density_matrix) == pytest.approx(1.0, abs=1e-14)

    def test_rejects_invalid(self):
        with pytest.raises(InvalidStateError):
            pure_state_fidelity(InputState(0.3), np.eye(2))

    @settings(max_examples=100, deadline=None)
    @given(
        density_matrices(dim=2),
        density_matrices(dim=2),
        st.floats(0, 1),
        st.floats(0, np.pi),
        st.floats(0, 2 * np.pi),
    )
    def test_linear_in_rho(self, r1, r2, a, theta, phi):
        psi = InputState(theta, phi)
        mixed = a * r1 + (1 - a) * r2
        lhs = pure_state_fidelity(psi, mixed)
        rhs = a * pure_state_fidelity(psi, r1) + (1 - a) * pure_state_fidelity(psi, r2)
        assert abs(lhs - rhs) < 1e-12
        assert -1e-12 <= lhs <= 1 + 1e-12

    @pytest.mark.parametrize("theta,phi", [(-0.1, 0), (3.2, 0), (1, -0.5), (1, 6.3)])
    def test_angle_ranges(self, theta, phi):
        with pytest.raises(ValueError):
            InputState(theta, phi)

    def test_bloch_vector(self):
        np.testing.assert_allclose(InputState(np.pi / 2, np.pi / 2).bloch, [0, 1, 0], atol=1e-15)
