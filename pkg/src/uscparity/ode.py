"""Adaptive embedded Runge-Kutta integration for scalar complex ODEs.

Dormand-Prince 5(4) pair with a PI step controller and an optional hard step
cap.  The cap is what makes the two-photon-modulated pointer equation
tractable: its e^{2i*omega_m*t} coefficient must be resolved, and a plain
library call spends most of its time in per-step bookkeeping once the cap
forces ~1e6 steps.  A tight scalar loop keeps that run in seconds.

The right-hand side is a callable f(t, y) -> complex.  Accepted steps are
recorded; `hermite_eval` interpolates between them (cubic, using the stored
derivatives), which is adequate for resampling and plotting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import IntegrationError

__all__ = ["OdeSolution", "integrate_complex", "hermite_eval", "resample"]

# Dormand-Prince coefficients (RK45, FSAL)
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# error weights: 5th-order minus embedded 4th-order solution
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)


@dataclass
class OdeSolution:
    """Accepted-step record of one integration."""

    t: np.ndarray      # accepted times, t[0] = 0
    y: np.ndarray      # complex solution values at t
    f: np.ndarray      # derivative values at t (for Hermite interpolation)
    n_steps: int
    n_rejected: int


def integrate_complex(
    rhs: Callable[[float, complex], complex],
    y0: complex,
    t_end: float,
    rtol: float = 1e-8,
    atol: float = 1e-11,
    max_step: float = math.inf,
) -> OdeSolution:
    """Integrate y' = rhs(t, y) from t=0 to t_end, recording accepted steps."""
    t = 0.0
    y = complex(y0)
    f = rhs(t, y)

    ts = [t]
    ys = [y]
    fs = [f]

    # initial step from the usual scale heuristic
    scale = atol + rtol * abs(y)
    d0 = abs(y) / scale if scale > 0 else 0.0
    d1 = abs(f) / scale if scale > 0 else 0.0
    h = 1e-6 * t_end if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h = min(h, max_step, t_end)

    safety = 0.9
    min_factor, max_factor = 0.2, 5.0
    err_prev = 1.0
    n_rejected = 0

    while t < t_end:
        h = min(h, t_end - t, max_step)
        if h < 1e-14 * max(t, 1.0):
            raise IntegrationError(
                f"step size underflow at t={t:.6g} (h={h:.3g})", t_fail=t
            )

        k1 = f
        k2 = rhs(t + _C2 * h, y + h * (_A21 * k1))
        k3 = rhs(t + _C3 * h, y + h * (_A31 * k1 + _A32 * k2))
        k4 = rhs(t + _C4 * h, y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = rhs(t + _C5 * h, y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        k6 = rhs(
            t + h,
            y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5),
        )
        y_new = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = rhs(t + h, y_new)

        err_est = h * (
            _E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7
        )
        tol = atol + rtol * max(abs(y), abs(y_new))
        err = abs(err_est) / tol if tol > 0 else 0.0

        if err <= 1.0:
            t += h
            y = y_new
            f = k7  # FSAL
            ts.append(t)
            ys.append(y)
            fs.append(f)
            # PI controller (0.7/0.4 exponents over order 5)
            if err == 0.0:
                factor = max_factor
            else:
                factor = safety * err ** -0.14 * err_prev ** 0.08
                factor = min(max_factor, max(min_factor, factor))
            err_prev = max(err, 1e-10)
            h *= factor
        else:
            n_rejected += 1
            h *= max(min_factor, safety * err ** -0.2)

    return OdeSolution(
        t=np.asarray(ts),
        y=np.asarray(ys, dtype=complex),
        f=np.asarray(fs, dtype=complex),
        n_steps=len(ts) - 1,
        n_rejected=n_rejected,
    )


def hermite_eval(sol: OdeSolution, t_query: np.ndarray) -> np.ndarray:
    """Cubic Hermite interpolation of the solution at the query times."""
    t_query = np.asarray(t_query, dtype=float)
    idx = np.clip(np.searchsorted(sol.t, t_query, side="right") - 1, 0, len(sol.t) - 2)
    t0 = sol.t[idx]
    h = sol.t[idx + 1] - t0
    s = (t_query - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return (
        h00 * sol.y[idx]
        + h10 * h * sol.f[idx]
        + h01 * sol.y[idx + 1]
        + h11 * h * sol.f[idx + 1]
    )


def resample(sol: OdeSolution, n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform-grid view of the solution over its full span."""
    tq = np.linspace(sol.t[0], sol.t[-1], n_points)
    return tq, hermite_eval(sol, tq)
