"""Qubit-state-conditioned pointer amplitudes.

The resonator field conditioned on a two-qubit label evolves as a coherent
amplitude alpha_xy(t).  Two models are integrated from vacuum:

exact:  alpha' = -i*eps - i*[Delta_r*alpha + chi_xy*(alpha
                 + conj(alpha)*e^{2i*omega_m*t})] - (kappa/2)*alpha
rwa:    alpha' = -i*eps - i*(Delta_r + chi_rwa_xy)*alpha - (kappa/2)*alpha

The conj(alpha)*e^{2i*omega_m*t} term is the two-photon modulation the
rotating-wave approximation discards; it leaves a persistent micro-oscillation
on top of the steady state.  Its limit cycle has the closed form

    alpha_ss(t) = A + B*e^{2i*omega_m*t},
    [i*(Delta_r+chi_xy) + kappa/2
       - chi_xy^2/(kappa/2 - i*(Delta_r+chi_xy+2*omega_m))] * A = -i*eps,
    B = -i*chi_xy*conj(A) / (i*(Delta_r+chi_xy+2*omega_m) + kappa/2),

obtained by harmonic balance (the linear system couples only the DC and
first-harmonic coefficients, so the ansatz closes exactly).  `steady_state`
extracts (mean, residual) from an integrated trajectory; `exact_steady_cycle`
evaluates the closed form.  The two routes are cross-checked in the tests and
against the Fock-space master-equation oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import IO

import numpy as np

from . import ode
from .errors import InsufficientHorizonError, InvalidArgumentError
from .model import DerivedParams, ParityLabel, SystemParams, chi_for_label

__all__ = [
    "PointerTrajectory",
    "SteadyAmplitude",
    "integrate_exact",
    "integrate_rwa",
    "rwa_fixed_point",
    "rwa_solution",
    "exact_steady_cycle",
    "steady_state",
    "verify_ode_residual",
    "write_trajectory_csv",
]

TOL_RANGE = (1e-12, 1e-4)
# points per 2*omega_m period resolved by the exact integrator's step cap
_CAP_POINTS_PER_PERIOD = 20


@dataclass
class PointerTrajectory:
    label: ParityLabel
    times: np.ndarray          # units 1/kappa, strictly increasing, t[0] = 0
    amplitudes: np.ndarray     # complex alpha(t)
    model_kind: str            # "exact" | "rwa"
    kappa: float
    rtol: float
    atol: float
    derivatives: np.ndarray | None = None  # rhs values at the stored times

    def interpolate(self, t_query: np.ndarray) -> np.ndarray:
        sol = ode.OdeSolution(
            t=self.times, y=self.amplitudes,
            f=self.derivatives if self.derivatives is not None else np.gradient(
                self.amplitudes, self.times),
            n_steps=len(self.times) - 1, n_rejected=0,
        )
        return ode.hermite_eval(sol, np.asarray(t_query))


@dataclass(frozen=True)
class SteadyAmplitude:
    mean: complex
    residual_oscillation: float   # max |alpha(t) - mean| over the window
    window: tuple[float, float]


def _check_tol(tol: float) -> None:
    if not (TOL_RANGE[0] <= tol <= TOL_RANGE[1]):
        raise InvalidArgumentError(
            f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}], got {tol:g}"
        )


def _tolerances(params: SystemParams, tol: float) -> tuple[float, float]:
    amp_scale = max(2.0 * params.epsilon_m / params.kappa, 1e-6)
    return tol, max(1e-2 * tol * amp_scale, 1e-16)


def _exact_rhs(params: SystemParams, derived: DerivedParams, label: ParityLabel):
    eps = params.epsilon_m
    chixy = chi_for_label(derived, label)
    coef = -1j * (derived.delta_r + chixy) - 0.5 * params.kappa
    osc = -1j * chixy
    two_wm = 2.0 * params.omega_m
    cexp = cmath.exp

    def rhs(t: float, a: complex) -> complex:
        return -1j * eps + coef * a + osc * a.conjugate() * cexp(1j * two_wm * t)

    return rhs


def _rwa_rhs(params: SystemParams, derived: DerivedParams, label: ParityLabel):
    eps = params.epsilon_m
    coef = -1j * (derived.delta_r + chi_for_label(derived, label, rwa=True)) \
        - 0.5 * params.kappa

    def rhs(t: float, a: complex) -> complex:
        return -1j * eps + coef * a

    return rhs


def integrate_exact(
    params: SystemParams,
    derived: DerivedParams,
    label: ParityLabel,
    t_end: float = 10.0,
    tol: float = 1e-8,
) -> PointerTrajectory:
    """Integrate the exact pointer equation from vacuum.

    The adaptive step is capped at (2*pi/2*omega_m)/20 so the two-photon
    modulation is always resolved.
    """
    if t_end <= 0:
        raise InvalidArgumentError("t_end must be positive")
    _check_tol(tol)
    rtol, atol = _tolerances(params, tol)
    if chi_for_label(derived, label) != 0.0:
        cap = (2.0 * math.pi / (2.0 * params.omega_m)) / _CAP_POINTS_PER_PERIOD
    else:
        # no modulation term to resolve for the odd labels
        cap = t_end / 16.0
    sol = ode.integrate_complex(
        _exact_rhs(params, derived, label), 0.0 + 0.0j, t_end,
        rtol=rtol, atol=atol, max_step=cap,
    )
    return PointerTrajectory(
        label=label, times=sol.t, amplitudes=sol.y, model_kind="exact",
        kappa=params.kappa, rtol=rtol, atol=atol, derivatives=sol.f,
    )


def integrate_rwa(
    params: SystemParams,
    derived: DerivedParams,
    label: ParityLabel,
    t_end: float = 10.0,
    tol: float = 1e-8,
) -> PointerTrajectory:
    """Integrate the rotating-wave pointer equation from vacuum."""
    if t_end <= 0:
        raise InvalidArgumentError("t_end must be positive")
    _check_tol(tol)
    rtol, atol = _tolerances(params, tol)
    sol = ode.integrate_complex(
        _rwa_rhs(params, derived, label), 0.0 + 0.0j, t_end,
        rtol=rtol, atol=atol, max_step=t_end / 16.0,
    )
    return PointerTrajectory(
        label=label, times=sol.t, amplitudes=sol.y, model_kind="rwa",
        kappa=params.kappa, rtol=rtol, atol=atol, derivatives=sol.f,
    )


def rwa_fixed_point(
    params: SystemParams, derived: DerivedParams, label: ParityLabel
) -> complex:
    """Steady amplitude of the RWA equation, -i*eps/(i*(Delta_r+chi_xy)+kappa/2)."""
    chixy = chi_for_label(derived, label, rwa=True)
    return -1j * params.epsilon_m / (
        1j * (derived.delta_r + chixy) + 0.5 * params.kappa
    )


def rwa_solution(
    params: SystemParams, derived: DerivedParams, label: ParityLabel, t: float
) -> complex:
    """Analytic RWA trajectory from vacuum: alpha_fp * (1 - e^{-s t})."""
    chixy = chi_for_label(derived, label, rwa=True)
    s = 1j * (derived.delta_r + chixy) + 0.5 * params.kappa
    return rwa_fixed_point(params, derived, label) * (1.0 - cmath.exp(-s * t))


def exact_steady_cycle(
    params: SystemParams, derived: DerivedParams, label: ParityLabel
) -> tuple[complex, complex]:
    """Closed-form limit cycle (A, B) of the exact equation (see module doc)."""
    chixy = chi_for_label(derived, label)
    eps, kappa = params.epsilon_m, params.kappa
    shifted = derived.delta_r + chixy + 2.0 * params.omega_m
    denom = (
        1j * (derived.delta_r + chixy) + 0.5 * kappa
        - chixy**2 / (0.5 * kappa - 1j * shifted)
    )
    mean = -1j * eps / denom
    ripple = -1j * chixy * mean.conjugate() / (1j * shifted + 0.5 * kappa)
    return mean, ripple


def steady_state(traj: PointerTrajectory, derived: DerivedParams) -> SteadyAmplitude:
    """Time-average the late-time trajectory over whole two-photon periods.

    Window: the last 2/kappa of the trajectory (clipped to start no earlier
    than 8/kappa), trimmed to an integer number of pi/omega_m periods.
    """
    kappa = traj.kappa
    t_end = traj.times[-1]
    if traj.times[0] > 8.0 / kappa + 1e-12 or t_end < 10.0 / kappa - 1e-9:
        raise InsufficientHorizonError(
            f"trajectory must cover [8/kappa, 10/kappa]; got "
            f"[{traj.times[0]:.3g}, {t_end:.3g}] with kappa={kappa:g}"
        )
    w_start = max(8.0 / kappa, t_end - 2.0 / kappa)
    period = math.pi / derived.omega_m
    n_periods = int(math.floor((t_end - w_start) / period))
    if n_periods >= 1:
        w_start = t_end - n_periods * period
        n_grid = min(max(24 * n_periods + 1, 1001), 500_001)
    else:
        n_grid = 1001
    tq = np.linspace(w_start, t_end, n_grid)
    vals = traj.interpolate(tq)
    mean = complex(np.trapezoid(vals, tq) / (t_end - w_start))
    residual = float(np.max(np.abs(vals - mean)))
    return SteadyAmplitude(
        mean=mean, residual_oscillation=residual, window=(w_start, t_end)
    )


def verify_ode_residual(
    traj: PointerTrajectory,
    params: SystemParams,
    derived: DerivedParams,
    n_samples: int = 50,
    substeps: int = 10,
) -> float:
    """Re-integrate sampled accepted steps with fine fixed substeps.

    Returns the worst endpoint deviation normalized by (atol + rtol*max|alpha|).
    Values O(1) mean each accepted step solves the ODE within its local error
    budget; the integration contract is residual <= ~10 in this norm.
    """
    rhs = (_exact_rhs if traj.model_kind == "exact" else _rwa_rhs)(
        params, derived, traj.label
    )
    n_steps = len(traj.times) - 1
    idx = np.unique(np.linspace(0, n_steps - 1, min(n_samples, n_steps)).astype(int))
    budget = traj.atol + traj.rtol * float(np.max(np.abs(traj.amplitudes)))
    worst = 0.0
    for i in idx:
        t0, t1 = traj.times[i], traj.times[i + 1]
        h = (t1 - t0) / substeps
        y = traj.amplitudes[i]
        t = t0
        for _ in range(substeps):
            k1 = rhs(t, y)
            k2 = rhs(t + h / 2, y + h / 2 * k1)
            k3 = rhs(t + h / 2, y + h / 2 * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        worst = max(worst, abs(y - traj.amplitudes[i + 1]) / budget)
    return worst


def write_trajectory_csv(
    fh: IO[str],
    traj: PointerTrajectory,
    model: str | None = None,
    max_rows: int | None = 4001,
    header: bool = True,
) -> None:
    """Emit `t,re_alpha,im_alpha,label,model` rows (12 significant digits)."""
    if header:
        fh.write("t,re_alpha,im_alpha,label,model\n")
    name = model if model is not None else traj.model_kind
    if max_rows is not None and len(traj.times) > max_rows:
        tq = np.linspace(traj.times[0], traj.times[-1], max_rows)
        vals = traj.interpolate(tq)
    else:
        tq, vals = traj.times, traj.amplitudes
    for t, a in zip(tq, vals):
        fh.write(
            f"{t:.12g},{a.real:.12g},{a.imag:.12g},{traj.label.value},{name}\n"
        )
