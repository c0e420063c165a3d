"""
Two-qubit and single-qubit state primitives.

Basis ordering is fixed everywhere as ``|ee>, |eg>, |ge>, |gg>`` for two qubits
and ``|e>, |g>`` for one qubit, with ``e`` the excited level at index 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10

_S = 1.0 / np.sqrt(2.0)

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
"""sigma_0 = I, sigma_1 = X, sigma_2 = Y, sigma_3 = Z in the (|e>, |g>) basis."""

_BELL = np.array(
    [
        [_S, 0, 0, _S],  # (|ee> + |gg>)/sqrt2
        [0, _S, _S, 0],  # (|eg> + |ge>)/sqrt2
        [0, _S, -_S, 0],  # (|eg> - |ge>)/sqrt2
        [_S, 0, 0, -_S],  # (|ee> - |gg>)/sqrt2
    ],
    dtype=complex,
)


class InvalidStateError(ValueError):
    """Raised when a matrix fails the density-matrix invariants."""


def check_bell_index(m: int) -> int:
    if int(m) != m or not 0 <= m <= 3:
        raise ValueError(f"Bell index must be in {{0,1,2,3}}, got {m!r}")
    return int(m)


def combine_index(j: int, m: int) -> int:
    """
    Compose two Bell/Pauli labels.

    Labels 1, 2, 3 stand for X, Y, Z and the composition is the Klein
    four-group product (bitwise XOR), which is what makes the Pauli
    correction of outcome ``k`` against reference ``m`` a fixed error.
    """
    return check_bell_index(j) ^ check_bell_index(m)


def bell_state(m: int) -> np.ndarray:
    """Return the Bell vector with index ``m`` (copy, safe to mutate)."""
    return _BELL[check_bell_index(m)].copy()


def bell_projector(m: int) -> np.ndarray:
    v = _BELL[check_bell_index(m)]
    return np.outer(v, v.conj())


def validate_density_matrix(rho, dim: int = 4) -> np.ndarray:
    """
    Return ``rho`` as a complex array after checking shape, hermiticity,
    unit trace and positive semidefiniteness.

    Raises:
        InvalidStateError: if any invariant is violated beyond tolerance.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise InvalidStateError(f"expected a {dim}x{dim} matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("matrix contains non-finite entries")
    herm_err = np.max(np.abs(rho - rho.conj().T))
    if herm_err > HERMITIAN_TOL:
        raise InvalidStateError(f"matrix is not Hermitian (max deviation {herm_err:.3e})")
    trace_err = abs(np.trace(rho) - 1.0)
    if trace_err > TRACE_TOL:
        raise InvalidStateError(f"trace differs from 1 by {trace_err:.3e}")
    min_eig = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if min_eig < PSD_TOL:
        raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")
    return rho


def is_density_matrix(rho, dim: int = 4) -> bool:
    try:
        validate_density_matrix(rho, dim)
    except InvalidStateError:
        return False
    return True


def bell_overlap(rho, m: int) -> float:
    """Probability <Psi^(m)| rho |Psi^(m)> of Bell component ``m``."""
    rho = validate_density_matrix(rho)
    v = _BELL[check_bell_index(m)]
    return float(np.real(v.conj() @ rho @ v))


def bell_overlaps(rho) -> np.ndarray:
    """All four Bell-component weights, indexed by ``m``."""
    rho = validate_density_matrix(rho)
    return np.real(np.einsum("mi,ij,mj->m", _BELL.conj(), rho, _BELL))


def pauli_conjugate(rho_in, j: int) -> np.ndarray:
    s = PAULI[check_bell_index(j)]
    return s @ np.asarray(rho_in, dtype=complex) @ s


@dataclass(frozen=True)
class InputState:
    """Pure qubit state cos(theta/2)|e> + sin(theta/2) e^{i phi} |g>."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi <= 2.0 * np.pi:
            raise ValueError(f"phi must lie in [0, 2pi], got {self.phi}")

    @property
    def vector(self) -> np.ndarray:
        return np.array(
            [np.cos(self.theta / 2), np.sin(self.theta / 2) * np.exp(1j * self.phi)],
            dtype=complex,
        )

    @property
    def density_matrix(self) -> np.ndarray:
        v = self.vector
        return np.outer(v, v.conj())

    @property
    def bloch(self) -> np.ndarray:
        """Bloch vector (x, y, z) with z = +1 on |e>."""
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])


def pure_state_fidelity(psi: InputState, rho) -> float:
    """<psi| rho |psi> for a single-qubit density matrix ``rho``."""
    rho = validate_density_matrix(rho, dim=2)
    v = psi.vector
    return float(np.real(v.conj() @ rho @ v))
