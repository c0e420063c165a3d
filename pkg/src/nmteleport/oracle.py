"""
Brute-force validators that share no shortcuts with the teleport layer.

Fidelities here come from simulating the full three-qubit protocol (Bell
measurement on the input and qubit A, Pauli correction on qubit B), never
from the Pauli-weight formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .states import PAULI, InputState, bell_projector, check_bell_index, combine_index

RULES = ("gauss-legendre", "midpoint")


@dataclass(frozen=True)
class QuadratureSpec:
    """Product rule on the sphere: ``rule`` in cos(theta), uniform in phi."""

    n_theta: int = 64
    n_phi: int = 128
    rule: str = "gauss-legendre"

    def __post_init__(self):
        if self.n_theta < 64 or self.n_phi < 128:
            raise ValueError(f"resolution must be at least (64, 128), got ({self.n_theta}, {self.n_phi})")
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}, got {self.rule!r}")

    def nodes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flattened (theta, phi, weight); weights sum to 4 pi."""
        if self.rule == "gauss-legendre":
            u, wu = np.polynomial.legendre.leggauss(self.n_theta)
        else:
            u = -1.0 + (np.arange(self.n_theta) + 0.5) * (2.0 / self.n_theta)
            wu = np.full(self.n_theta, 2.0 / self.n_theta)
        phi = np.arange(self.n_phi) * (2.0 * np.pi / self.n_phi)
        wphi = np.full(self.n_phi, 2.0 * np.pi / self.n_phi)
        th, ph = np.meshgrid(np.arccos(u), phi, indexing="ij")
        w = np.outer(wu, wphi)
        return th.ravel(), ph.ravel(), w.ravel()


def _teleport(rho_c: np.ndarray, rho_in: np.ndarray, m: int) -> np.ndarray:
    """Run the protocol on any 2x2 operator ``rho_in`` (the map is linear)."""
    total = np.kron(rho_in, rho_c)  # qubit order: input, A, B
    out = np.zeros((2, 2), dtype=complex)
    for k in range(4):
        proj = np.kron(bell_projector(k), np.eye(2))
        branch = (proj @ total @ proj).reshape(4, 2, 4, 2)
        rho_b = np.einsum("iaib->ab", branch)
        c = PAULI[combine_index(k, m)]
        out += c @ rho_b @ c.conj().T
    return out


def protocol_simulate(rho_c, psi: InputState, m: int) -> np.ndarray:
    """
    Output state of qubit B after Bell measurement of (input, A) and the
    Pauli correction for reference index ``m``, averaged over outcomes.
    """
    return _teleport(np.asarray(rho_c, dtype=complex), psi.density_matrix, check_bell_index(m))


def process_matrix(rho_c, m: int) -> np.ndarray:
    """
    4x4 matrix S with vec(rho_out) = S vec(rho_in) (row-major vec), built by
    teleporting the operator basis |a><b|.
    """
    rho_c = np.asarray(rho_c, dtype=complex)
    m = check_bell_index(m)
    cols = []
    for idx in range(4):
        basis = np.zeros(4, dtype=complex)
        basis[idx] = 1.0
        cols.append(_teleport(rho_c, basis.reshape(2, 2), m).ravel())
    return np.array(cols).T


def _fidelities(proc: np.ndarray, theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    v = np.stack([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)], axis=-1)
    rin = np.einsum("...a,...b->...ab", v, v.conj()).reshape(theta.shape + (4,))
    rout = (rin @ proc.T).reshape(theta.shape + (2, 2))
    return np.real(np.einsum("...a,...ab,...b->...", v.conj(), rout, v))


def average_fidelity_quadrature(rho_c, m: int, spec: QuadratureSpec = QuadratureSpec()) -> float:
    proc = process_matrix(rho_c, m)
    th, ph, w = spec.nodes()
    return float(np.sum(w * _fidelities(proc, th, ph)) / (4.0 * np.pi))


def minimal_fidelity_bruteforce(rho_c, m: int, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """
    Minimum over the quadrature nodes, then a Nelder-Mead polish from the best
    node. The nodes avoid the poles, so the polish is what reaches minima
    sitting exactly on |e> or |g>.
    """
    proc = process_matrix(rho_c, m)
    th, ph, _ = spec.nodes()
    vals = _fidelities(proc, th, ph)
    i = int(np.argmin(vals))

    def objective(x):
        return float(_fidelities(proc, x[0], x[1]))

    res = minimize(
        objective,
        x0=np.array([th[i], ph[i]]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000},
    )
    return float(min(vals[i], res.fun))
