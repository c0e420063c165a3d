"""
Standard one-qubit teleportation through a mixed two-qubit channel.

Averaged over the four Bell-measurement outcomes, the protocol acts on the
input as a generalized depolarizing channel

    rho_out = sum_j p_j sigma_j rho_in sigma_j,   p_j = <Psi^(j (+) m)| rho_c |Psi^(j (+) m)>,

where ``m`` is the Bell component the parties treat as their reference and
``(+)`` is the Pauli-label composition (bitwise XOR). Choosing ``m`` with
the largest Bell weight maximizes the average fidelity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .states import PAULI, InputState, bell_overlaps, check_bell_index, combine_index

ARGMAX_TIE_TOL = 1e-14
MIN_GRID = (181, 361)


@dataclass(frozen=True)
class TeleportProbabilities:
    """Reference Bell index ``m`` and Pauli weights ``p[j]`` of the output channel."""

    m: int
    p: np.ndarray

    def __post_init__(self):
        check_bell_index(self.m)
        p = np.asarray(self.p, dtype=float)
        if p.shape != (4,):
            raise ValueError("need exactly four probabilities")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12) or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"invalid probability vector {p}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class FidelityTrace:
    t: np.ndarray
    value: np.ndarray
    m: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.value, dtype=float)
        if t.shape != v.shape or t.shape != np.shape(self.m):
            raise ValueError("t, value and m must have the same length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("t must be strictly increasing")
        if np.any(v < -1e-12) or np.any(v > 1 + 1e-12):
            raise ValueError("fidelity values must lie in [0, 1]")


def optimal_index(overlaps) -> int:
    """Index of the largest Bell weight; near-ties go to the smallest index."""
    overlaps = np.asarray(overlaps, dtype=float)
    return int(np.flatnonzero(overlaps >= overlaps.max() - ARGMAX_TIE_TOL)[0])


def probabilities(rho, m: int | None = None) -> TeleportProbabilities:
    """
    Output-channel weights for channel state ``rho``.

    With ``m=None`` the reference index is the optimal one; pass ``m`` to force
    a particular reference.
    """
    overlaps = bell_overlaps(rho)
    m = optimal_index(overlaps) if m is None else check_bell_index(m)
    p = np.array([overlaps[combine_index(j, m)] for j in range(4)])
    return TeleportProbabilities(m=m, p=np.clip(p, 0.0, 1.0))


def mu_values(rho) -> tuple[float, float]:
    """
    Twice the largest weight within each Bell pair:

        mu1 = rho11 + rho44 + 2|Re rho14|     (|ee> +/- |gg> pair)
        mu2 = rho22 + rho33 + 2|Re rho23|     (|eg> +/- |ge> pair)

    For channels with rho11 = 0, mu2 also equals 1 - rho44 + 2|Re rho23|.
    """
    rho = np.asarray(rho, dtype=complex)
    mu1 = float(np.real(rho[0, 0] + rho[3, 3]) + 2 * abs(rho[0, 3].real))
    mu2 = float(np.real(rho[1, 1] + rho[2, 2]) + 2 * abs(rho[1, 2].real))
    return mu1, mu2


def output_state(probs: TeleportProbabilities, psi: InputState) -> np.ndarray:
    rho_in = psi.density_matrix
    return sum(pj * s @ rho_in @ s for pj, s in zip(probs.p, PAULI))


def pointwise_fidelity(probs: TeleportProbabilities, theta, phi):
    """
    Input-output fidelity at Bloch angles (vectorized).

    Uses <psi|sigma_j rho_in sigma_j|psi> = n_j^2 with n the Bloch vector,
    i.e. F = p0 + p1 nx^2 + p2 ny^2 + p3 nz^2.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    nx = st * np.cos(phi)
    ny = st * np.sin(phi)
    nz = np.cos(theta)
    p = probs.p
    return p[0] + p[1] * nx**2 + p[2] * ny**2 + p[3] * nz**2


def average_fidelity(probs: TeleportProbabilities) -> float:
    return 1.0 / 3.0 + 2.0 / 3.0 * float(probs.p[0])


def average_fidelity_optimized(rho) -> float:
    """Average fidelity for the best reference index, ``1/3 + 2/3 max_m p_0^(m)``."""
    return average_fidelity(probabilities(rho))


def average_fidelity_closed_phi(g) -> float:
    """
    ``(2 + |g|^4) / 3`` for an initial |ee> +/- |gg> channel.

    Exact when g^2 is real (e.g. zero detuning). For complex g the full
    pipeline gives ``(2 - |g|^2 + |g|^4 + |Re g^2|) / 3`` instead, which is
    smaller; :func:`average_fidelity_optimized` is authoritative.
    """
    a2 = abs(complex(g)) ** 2
    return (2.0 + a2 * a2) / 3.0


def average_fidelity_closed_psi(g) -> float:
    """``1/3 + max(1 - |g|^2, 2|g|^2) / 3`` for an initial |eg> +/- |ge> channel."""
    a2 = abs(complex(g)) ** 2
    return 1.0 / 3.0 + max(1.0 - a2, 2.0 * a2) / 3.0


def minimal_fidelity_closed_phi(g) -> float:
    """
    ``1/2 + Re[g^2]/2`` for an initial |ee> +/- |gg> channel.

    This is the fidelity of equatorial inputs. It is the true minimum only
    while the Z-error weight exceeds the X/Y weight; for real g that means
    |g|^2 <= 1/2. Above that, |e> and |g> inputs do worse
    (fidelity 1 - |g|^2 + |g|^4). Use :func:`minimal_fidelity` for the
    minimum itself.
    """
    g = complex(g)
    return 0.5 + 0.5 * (g * g).real


def minimal_fidelity_phi_exact(g) -> float:
    """
    Minimum over inputs for an initial |ee> +/- |gg> channel with reference
    index 0: the smaller of the equatorial value ``(1 + Re g^2)/2`` and the
    polar value ``1 - |g|^2 + |g|^4``.
    """
    g = complex(g)
    a2 = abs(g) ** 2
    return min(0.5 + 0.5 * (g * g).real, 1.0 - a2 + a2 * a2)


def minimal_fidelity_closed_psi(g) -> float:
    """``|g|^2`` for an initial |eg> +/- |ge> channel."""
    return abs(complex(g)) ** 2


def fidelity_grid(n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray]:
    """Closed uniform grid on [0, pi] x [0, 2pi]; contains the three Bloch axes."""
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi)
    return np.meshgrid(theta, phi, indexing="ij")


@lru_cache(maxsize=8)
def _squared_bloch_grid(n_theta: int, n_phi: int) -> np.ndarray:
    theta, phi = fidelity_grid(n_theta, n_phi)
    st = np.sin(theta)
    sq = np.stack([(st * np.cos(phi)) ** 2, (st * np.sin(phi)) ** 2, np.cos(theta) ** 2])
    sq.setflags(write=False)
    return sq


def minimal_fidelity(rho, grid: tuple[int, int] = MIN_GRID, m: int | None = None) -> float:
    """
    Worst-case input fidelity by exhaustive search over a (theta, phi) grid.

    ``m`` is the reference Bell index; ``None`` picks the one maximizing the
    average fidelity. For a channel prepared in Bell state ``m0`` the
    closed forms above hold with ``m=m0``: the average-optimal index can
    switch (e.g. for |eg> + |ge> once |g|^2 < 1/3), which changes the Pauli
    weights that the minimum depends on.
    """
    n_theta, n_phi = grid
    if n_theta < MIN_GRID[0] or n_phi < MIN_GRID[1]:
        raise ValueError(f"grid must be at least {MIN_GRID}, got {grid}")
    probs = probabilities(rho, m)
    nx2, ny2, nz2 = _squared_bloch_grid(int(n_theta), int(n_phi))
    p = probs.p
    return float(p[0] + np.min(p[1] * nx2 + p[2] * ny2 + p[3] * nz2))
