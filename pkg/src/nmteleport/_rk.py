"""Dormand-Prince 5(4) explicit adaptive integrator for complex ODE systems."""

from __future__ import annotations

import numpy as np

# Butcher tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


class SolverError(RuntimeError):
    """Adaptive integration could not meet the tolerance.

    Attributes:
        t: time at which the step size underflowed.
    """

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (at t={t:.6g})")
        self.t = t


def dopri5(f, y0, t_eval, h0: float, tol: float, max_steps: int = 10_000_000):
    """
    Integrate ``y' = f(t, y)`` from ``t_eval[0]`` and return ``y`` at every
    time in ``t_eval`` (which must be increasing).

    Steps are clipped to land on each requested time, so no interpolation is
    involved. Local error is controlled per component against
    ``tol * (1 + |y|)``.
    """
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval.ndim != 1 or t_eval.size == 0:
        raise ValueError("t_eval must be a non-empty 1-D array")
    if np.any(np.diff(t_eval) <= 0):
        raise ValueError("t_eval must be strictly increasing")
    if h0 <= 0 or tol <= 0:
        raise ValueError("h0 and tol must be positive")

    y = np.array(y0, dtype=complex)
    out = np.empty((t_eval.size, y.size), dtype=complex)
    out[0] = y
    t = float(t_eval[0])
    h = float(h0)
    k1 = f(t, y)
    steps = 0

    for i in range(1, t_eval.size):
        target = float(t_eval[i])
        while t < target:
            hmin = 16 * np.finfo(float).eps * max(1.0, abs(t))
            if h < hmin:
                raise SolverError("step size underflow", t)
            steps += 1
            if steps > max_steps:
                raise SolverError("maximum number of steps exceeded", t)

            last = t + h >= target
            step = target - t if last else h

            k = [k1]
            for s in range(1, 6):
                ys = y + step * sum(a * kk for a, kk in zip(_A[s], k))
                k.append(f(t + _C[s] * step, ys))
            y_new = y + step * sum(b * kk for b, kk in zip(_B5, k))
            k7 = f(t + step, y_new)
            k.append(k7)
            err_vec = step * sum(e * kk for e, kk in zip(_E, k))

            scale = tol * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
            err = float(np.max(np.abs(err_vec) / scale))

            if err <= 1.0:
                t = target if last else t + step
                y = y_new
                k1 = k7
                factor = _MAX_FACTOR if err == 0 else min(_MAX_FACTOR, _SAFETY * err ** -0.2)
                # a short clipped step says nothing about how large h may grow
                if not last or step >= h:
                    h = step * factor
            else:
                h = step * max(_MIN_FACTOR, _SAFETY * err ** -0.2)
        out[i] = y
    return out
