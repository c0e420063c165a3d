"""
Decoherence amplitude G(t) of a qubit damped by a Lorentzian reservoir.

All rates are in units of the Markovian decay rate ``gamma0`` and times are
the scaled time ``gamma0 * t``. The reservoir correlation function is the
single exponential ``W^2 exp(-(lambda - i delta) tau)`` with
``W^2 = gamma0 * lambda / 2``, so the memory equation
``G' = -int_0^t f(t - s) G(s) ds`` is equivalent to the local system
``G' = -K, K' = W^2 G - (lambda - i delta) K`` with ``K(0) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rk import SolverError, dopri5

__all__ = [
    "ReservoirParams",
    "DecoherenceValue",
    "DecoherenceTrace",
    "SolverConfig",
    "SolverError",
    "correlation_kernel",
    "g_analytic",
    "g_numeric",
    "g_markovian",
]

DEGENERATE_D_TOL = 1e-10


@dataclass(frozen=True)
class ReservoirParams:
    """Lorentzian reservoir: spectral width ``lam`` and detuning ``delta``."""

    lam: float
    delta: float = 0.0
    gamma0: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if not np.isfinite(self.delta):
            raise ValueError("delta must be finite")

    @property
    def coupling_sq(self) -> float:
        """W^2 = gamma0 * lambda / 2."""
        return 0.5 * self.gamma0 * self.lam

    @property
    def rate(self) -> complex:
        """Complex kernel decay rate lambda - i delta."""
        return complex(self.lam, -self.delta)

    @property
    def d(self) -> complex:
        """Principal root sqrt((lambda - i delta)^2 - 2 gamma0 lambda)."""
        return complex(np.sqrt(complex(self.rate**2 - 2.0 * self.gamma0 * self.lam)))


@dataclass(frozen=True)
class DecoherenceValue:
    t: float
    g: complex


@dataclass(frozen=True)
class DecoherenceTrace:
    """Samples of G on a time grid."""

    t: np.ndarray
    g: np.ndarray

    def __len__(self):
        return len(self.t)

    def __iter__(self):
        for t, g in zip(self.t, self.g):
            yield DecoherenceValue(float(t), complex(g))


@dataclass(frozen=True)
class SolverConfig:
    step: float = 1e-3
    tol: float = 1e-10
    t_max: float = 30.0

    def __post_init__(self):
        for name in ("step", "tol", "t_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"SolverConfig.{name} must be positive")


def correlation_kernel(params: ReservoirParams, tau):
    """Reservoir correlation ``W^2 exp(-(lambda - i delta) tau)`` for ``tau >= 0``."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    val = params.coupling_sq * np.exp(-params.rate * tau)
    return complex(val) if val.ndim == 0 else val


def _sinhc(z):
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-3
    safe = np.where(small, 1.0, z)
    z2 = z * z
    return np.where(small, 1.0 + z2 / 6.0 + z2 * z2 / 120.0, np.sinh(safe) / safe)


def _g_from_root(rate: complex, d: complex, t):
    """
    Evaluate exp(-rate t/2) (cosh(d t/2) + rate/d sinh(d t/2)).

    Even in ``d``, so either square-root branch gives the same value. Small
    ``|d t|`` uses the sinh(x)/x form (which also covers ``d = 0``); large
    ``|d t|`` uses the two-exponential form so cosh never overflows.
    """
    t = np.asarray(t, dtype=float)
    half = 0.5 * t
    z = d * half
    near = np.abs(z) <= 0.5
    out = np.empty(t.shape, dtype=complex)

    if np.any(near):
        zn, hn = z[near], half[near]
        out[near] = np.exp(-rate * hn) * (np.cosh(zn) + rate * hn * _sinhc(zn))
    if np.any(~near):
        # pick the root with Re >= 0 so the growing exponent is the damped one
        dd = d if d.real >= 0 else -d
        hf = half[~near]
        r = rate / dd
        out[~near] = 0.5 * (
            (1.0 + r) * np.exp((-rate + dd) * hf) + (1.0 - r) * np.exp((-rate - dd) * hf)
        )
    return out


def g_analytic(params: ReservoirParams, t):
    """
    Closed-form decoherence amplitude

        G(t) = exp(-(lambda - i delta) t / 2) (cosh(d t/2) + (lambda - i delta)/d sinh(d t/2)),
        d = sqrt((lambda - i delta)^2 - 2 gamma0 lambda).

    Accepts a scalar or an array of non-negative times; returns ``complex``
    or a complex array accordingly. When ``|d|`` is below
    ``1e-10 * (lambda + gamma0)`` the critically damped limit
    ``exp(-(lambda - i delta) t/2) (1 + (lambda - i delta) t/2)`` is used.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be non-negative")
    d = params.d
    if abs(d) < DEGENERATE_D_TOL * (params.lam + params.gamma0):
        d = 0j
    g = _g_from_root(params.rate, d, np.atleast_1d(t_arr)).reshape(t_arr.shape)
    return complex(g) if g.ndim == 0 else g


def g_numeric(params: ReservoirParams, cfg: SolverConfig = SolverConfig(), times=None) -> DecoherenceTrace:
    """
    Solve the memory-kernel equation for G numerically.

    The exponential kernel lets the Volterra equation be rewritten exactly as
    a two-component linear ODE, integrated here with an adaptive
    Dormand-Prince 5(4) scheme. ``times`` defaults to a uniform grid of
    spacing ``cfg.step`` on ``[0, cfg.t_max]`` and must start at 0.

    Raises:
        SolverError: if the step size underflows before reaching the end.
    """
    if times is None:
        n = max(2, int(round(cfg.t_max / cfg.step)) + 1)
        times = np.linspace(0.0, cfg.t_max, n)
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise ValueError("times must start at 0")

    w2 = params.coupling_sq
    rate = params.rate

    def rhs(_t, y):
        return np.array([-y[1], w2 * y[0] - rate * y[1]])

    ys = dopri5(rhs, np.array([1.0 + 0j, 0j]), times, h0=cfg.step, tol=cfg.tol)
    return DecoherenceTrace(t=times, g=ys[:, 0])


def g_markovian(params: ReservoirParams, t):
    """Markovian reference |G(t)| = exp(-gamma0 t / 2)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be non-negative")
    val = np.exp(-0.5 * params.gamma0 * t_arr)
    return float(val) if val.ndim == 0 else val
