"""
Two-qubit channel state under local amplitude-damping reservoirs.

Each qubit sees the map
    |e><e| -> |G|^2 |e><e| + (1 - |G|^2) |g><g|,   |e><g| -> G |e><g|,
    |g><e| -> G* |g><e|,                            |g><g| -> |g><g|.
Evolution is always a single application of this map from t = 0: the map
family is not divisible in the non-Markovian regime, so there is
deliberately no way to chain increments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .states import bell_projector, check_bell_index, validate_density_matrix

G_TOL = 1e-9

CLOSED_FORM_ELEMENTS = ("rho11", "rho22", "rho33", "rho44", "rho14", "rho23")


def _check_amplitude(g) -> complex:
    g = complex(g)
    if not np.isfinite(g.real) or not np.isfinite(g.imag):
        raise ValueError("decoherence amplitude must be finite")
    if abs(g) > 1.0 + G_TOL:
        raise ValueError(f"|g| must not exceed 1, got {abs(g):.12g}")
    return g


@dataclass(frozen=True)
class InitialChannel:
    """
    Initial channel state: a Bell state (``kind`` "phi" for m = 0, 3 or "psi"
    for m = 1, 2) or a custom density matrix.
    """

    kind: str
    m: int = 0
    matrix: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind in ("phi", "psi"):
            check_bell_index(self.m)
            expected = "phi" if self.m in (0, 3) else "psi"
            if self.kind != expected:
                raise ValueError(f"Bell index {self.m} is not a {self.kind} state")
        elif self.kind == "custom":
            if self.matrix is None:
                raise ValueError("custom channel requires a matrix")
            object.__setattr__(self, "matrix", validate_density_matrix(self.matrix).copy())
        else:
            raise ValueError(f"unknown initial channel kind {self.kind!r}")

    @classmethod
    def bell(cls, m: int) -> "InitialChannel":
        m = check_bell_index(m)
        return cls("phi" if m in (0, 3) else "psi", m)

    @classmethod
    def custom(cls, rho) -> "InitialChannel":
        return cls("custom", 0, np.asarray(rho, dtype=complex))

    @property
    def rho(self) -> np.ndarray:
        if self.kind == "custom":
            return self.matrix.copy()
        return bell_projector(self.m)


@dataclass(frozen=True)
class ChannelState:
    rho: np.ndarray
    t: float


def single_qubit_kraus(g) -> tuple[np.ndarray, np.ndarray]:
    """
    Kraus pair of the amplitude-damping map with coherence factor ``g``:

        K0 = [[g, 0], [0, 1]],   K1 = [[0, 0], [sqrt(1 - |g|^2), 0]].
    """
    g = _check_amplitude(g)
    decay = np.sqrt(max(0.0, 1.0 - abs(g) ** 2))
    k0 = np.array([[g, 0], [0, 1]], dtype=complex)
    k1 = np.array([[0, 0], [decay, 0]], dtype=complex)
    return k0, k1


def _apply_local_maps(rho: np.ndarray, g_a: complex, g_b: complex) -> np.ndarray:
    # per-qubit amplitudes are supported here; public API uses one shared G
    ka = single_qubit_kraus(g_a)
    kb = single_qubit_kraus(g_b)
    out = np.zeros((4, 4), dtype=complex)
    for a in ka:
        for b in kb:
            k = np.kron(a, b)
            out += k @ rho @ k.conj().T
    return out


def evolve(init: InitialChannel, g) -> np.ndarray:
    """Channel density matrix after both qubits decohere with amplitude ``g``."""
    g = _check_amplitude(g)
    return _apply_local_maps(init.rho, g, g)


def evolve_state(init: InitialChannel, g, t: float) -> ChannelState:
    return ChannelState(rho=evolve(init, g), t=float(t))


def evolve_closed_form(init: InitialChannel, g) -> dict[str, complex]:
    """
    Element-wise update of the diagonal and anti-diagonal entries:

        rho11 = rho11(0) |G|^4
        rho22 = rho11(0) |G|^2 (1 - |G|^2) + rho22(0) |G|^2
        rho33 = rho11(0) |G|^2 (1 - |G|^2) + rho33(0) |G|^2
        rho44 = 1 - rho11 - rho22 - rho33
        rho14 = rho14(0) G^2
        rho23 = rho23(0) |G|^2

    Independent of the Kraus route; used to cross-check :func:`evolve`.
    """
    g = _check_amplitude(g)
    r0 = init.rho
    a2 = abs(g) ** 2
    r11 = r0[0, 0] * a2 * a2
    r22 = r0[0, 0] * a2 * (1 - a2) + r0[1, 1] * a2
    r33 = r0[0, 0] * a2 * (1 - a2) + r0[2, 2] * a2
    return {
        "rho11": complex(r11),
        "rho22": complex(r22),
        "rho33": complex(r33),
        "rho44": complex(1.0 - r11 - r22 - r33),
        "rho14": complex(r0[0, 3] * g * g),
        "rho23": complex(r0[1, 2] * a2),
    }


def closed_form_elements(rho: np.ndarray) -> dict[str, complex]:
    """Pick the six closed-form elements out of a full matrix."""
    return {
        "rho11": complex(rho[0, 0]),
        "rho22": complex(rho[1, 1]),
        "rho33": complex(rho[2, 2]),
        "rho44": complex(rho[3, 3]),
        "rho14": complex(rho[0, 3]),
        "rho23": complex(rho[1, 2]),
    }
