"""Pointer-amplitude integration, steady states, and the limit-cycle algebra."""

import numpy as np
import pytest

from uscparity import (
    ParityLabel,
    SystemParams,
    derive,
    exact_steady_cycle,
    integrate_exact,
    integrate_rwa,
    rwa_fixed_point,
    rwa_solution,
    steady_state,
)
from uscparity.errors import InsufficientHorizonError, InvalidArgumentError
from uscparity.pointer import verify_ode_residual, write_trajectory_csv

LABELS = (ParityLabel.GG, ParityLabel.GE, ParityLabel.EG, ParityLabel.EE)


# ----------------------------------------------------------- fixed points

def test_rwa_fixed_point_odd_label(operating_params, operating_derived):
    # Delta_r = 0, chi_xy = 0: -i*eps/(kappa/2) = -2i*eps/kappa = -i
    fp = rwa_fixed_point(operating_params, operating_derived, ParityLabel.GE)
    assert fp == pytest.approx(-1j, rel=1e-14)


def test_rwa_fixed_point_even_label(operating_params, operating_derived):
    # chi_rwa_ee = 3 kappa: -0.5i/(3i + 0.5) = (-6 - 1j)/37
    fp = rwa_fixed_point(operating_params, operating_derived, ParityLabel.EE)
    assert fp == pytest.approx((-6 - 1j) / 37, rel=1e-14)


def test_rwa_fixed_point_limits(operating_params, operating_derived):
    p0 = SystemParams(omega_r=30.0, omega_a=180.0, g=15.0, epsilon_m=0.0,
                      omega_m=30.0)
    assert rwa_fixed_point(p0, derive(p0), ParityLabel.EE) == 0.0
    # enormous pull detunes the resonator out of drive resonance
    far = SystemParams(omega_r=10.0, omega_a=10.0 + 1e-4, g=1.0,
                       epsilon_m=0.5, omega_m=10.0)
    assert abs(rwa_fixed_point(far, derive(far), ParityLabel.EE)) < 1e-4


# ----------------------------------------------------------- integration

def test_rwa_integration_reaches_fixed_point(operating_params, operating_derived):
    traj = integrate_rwa(operating_params, operating_derived, ParityLabel.GE,
                         t_end=10.0)
    final = traj.amplitudes[-1]
    fp = rwa_fixed_point(operating_params, operating_derived, ParityLabel.GE)
    analytic = rwa_solution(operating_params, operating_derived, ParityLabel.GE, 10.0)
    # integrator accuracy against the analytic transient solution
    assert abs(final - analytic) <= 1e-8
    # physical convergence bound: the e^{-kappa t/2} transient remains
    assert abs(final - fp) <= abs(fp) * (np.exp(-5.0) + 1e-4)


def test_undriven_trajectory_is_zero(operating_derived):
    p = SystemParams(omega_r=30.0, omega_a=180.0, g=15.0, epsilon_m=0.0,
                     omega_m=30.0)
    d = derive(p)
    for integrate in (integrate_rwa, integrate_exact):
        traj = integrate(p, d, ParityLabel.EE, t_end=10.0)
        assert np.max(np.abs(traj.amplitudes)) == 0.0


def test_odd_labels_identical_both_models(operating_params, operating_derived):
    te = integrate_exact(operating_params, operating_derived, ParityLabel.GE,
                         t_end=10.0)
    te2 = integrate_exact(operating_params, operating_derived, ParityLabel.EG,
                          t_end=10.0)
    assert np.array_equal(te.amplitudes, te2.amplitudes)
    # chi_xy = 0 and Delta_r = 0: the exact and RWA equations coincide
    tr = integrate_rwa(operating_params, operating_derived, ParityLabel.GE,
                       t_end=10.0)
    grid = np.linspace(0, 10, 501)
    dev = np.abs(te.interpolate(grid) - tr.interpolate(grid))
    assert dev.max() <= 1e-10


def test_exact_steady_mean_matches_harmonic_balance(
    operating_params, operating_derived
):
    # long horizon so the transient remnant is below the comparison level
    traj = integrate_exact(operating_params, operating_derived, ParityLabel.EE,
                           t_end=16.0, tol=1e-9)
    ss = steady_state(traj, operating_derived)
    mean, ripple = exact_steady_cycle(operating_params, operating_derived,
                                      ParityLabel.EE)
    assert abs(ss.mean - mean) <= 5e-5
    assert ss.residual_oscillation == pytest.approx(abs(ripple), rel=0.3)
    assert ss.residual_oscillation > 0.005  # persistent micro-oscillation


def test_exact_matches_scipy_cross_check(operating_params, operating_derived):
    from scipy.integrate import solve_ivp

    p, d = operating_params, operating_derived
    chi_e = 2 * d.chi
    wm = p.omega_m

    def rhs(t, y):
        a = y[0] + 1j * y[1]
        val = -1j * p.epsilon_m - 1j * chi_e * (a + np.conj(a) * np.exp(2j * wm * t)) \
            - 0.5 * a
        return [val.real, val.imag]

    ref = solve_ivp(rhs, (0, 4.0), [0.0, 0.0], max_step=np.pi / (20 * wm),
                    rtol=1e-10, atol=1e-12, dense_output=True)
    traj = integrate_exact(p, d, ParityLabel.EE, t_end=4.0, tol=1e-9)
    grid = np.linspace(0.1, 4.0, 301)
    ours = traj.interpolate(grid)
    theirs = ref.sol(grid)[0] + 1j * ref.sol(grid)[1]
    assert np.max(np.abs(ours - theirs)) <= 2e-6


def test_exact_re_smaller_im_larger_than_rwa(operating_params, operating_derived):
    # ultrastrong point: |Re| shrinks toward zero, the even-odd separation grows
    mean, _ = exact_steady_cycle(operating_params, operating_derived, ParityLabel.EE)
    fp = rwa_fixed_point(operating_params, operating_derived, ParityLabel.EE)
    assert abs(mean.real) < abs(fp.real)
    assert mean.imag > fp.imag  # closer to zero, further from Im alpha_eg = -1


def test_amplitude_bound_and_monotone_times(operating_params, operating_derived):
    bound = 2 * operating_params.epsilon_m / operating_params.kappa
    for integrate in (integrate_exact, integrate_rwa):
        for label in LABELS:
            traj = integrate(operating_params, operating_derived, label, t_end=10.0)
            assert np.all(np.diff(traj.times) > 0)
            assert traj.amplitudes[0] == 0.0
            assert np.max(np.abs(traj.amplitudes)) <= bound * (1 + 1e-9)


def _rk4_fixed(rhs, t_end, n_steps):
    h = t_end / n_steps
    y, t = 0.0 + 0.0j, 0.0
    out = [y]
    for _ in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        out.append(y)
    return np.array(out)


def test_drive_linearity(operating_params, operating_derived):
    # both equations are linear in alpha with inhomogeneity ~ eps; on a
    # shared step grid the trajectories are proportional to rounding
    from uscparity.pointer import _exact_rhs

    base = operating_params
    scaled = SystemParams(
        omega_r=base.omega_r, omega_a=base.omega_a, g=base.g,
        epsilon_m=3.0 * base.epsilon_m, omega_m=base.omega_m, kappa=base.kappa,
    )
    y1 = _rk4_fixed(_exact_rhs(base, operating_derived, ParityLabel.EE), 5.0, 20000)
    y2 = _rk4_fixed(_exact_rhs(scaled, operating_derived, ParityLabel.EE), 5.0, 20000)
    scale = np.max(np.abs(y2))
    assert np.max(np.abs(y2 - 3.0 * y1)) <= 1e-10 * scale
    # adaptive runs agree to the integration-error level (controller noise)
    t1 = integrate_exact(base, operating_derived, ParityLabel.EE, t_end=5.0)
    t2 = integrate_exact(scaled, operating_derived, ParityLabel.EE, t_end=5.0)
    grid = np.linspace(0.5, 5.0, 400)
    dev = np.abs(t2.interpolate(grid) - 3.0 * t1.interpolate(grid))
    assert dev.max() <= 1e-6 * np.max(np.abs(t2.amplitudes))


def test_rwa_limit_deviation_shrinks_with_coupling_ratio():
    # the trajectory-level deviation from the RWA solution is dominated by
    # the transient phase mismatch ~ (2g^2/Sigma) t e^{-kappa t/2} |alpha|,
    # peaking near t = 2/kappa and scaling linearly with g/omega_r
    devs = []
    for gwr in (0.03, 0.01):
        p = SystemParams.from_ratios(15.0, gwr, 0.5)
        d = derive(p)
        te = integrate_exact(p, d, ParityLabel.EE, t_end=10.0)
        tr = integrate_rwa(p, d, ParityLabel.EE, t_end=10.0)
        grid = np.linspace(0.0, 10.0, 801)
        dev = np.max(np.abs(te.interpolate(grid) - tr.interpolate(grid)))
        devs.append(dev / (2 * p.epsilon_m / p.kappa))
    assert devs[1] < 0.5 * devs[0]  # ~linear in g/omega_r
    assert devs[1] < 0.03


# ----------------------------------------------------------- steady state

def test_steady_state_requires_window(operating_params, operating_derived):
    traj = integrate_exact(operating_params, operating_derived, ParityLabel.EE,
                           t_end=6.0)
    with pytest.raises(InsufficientHorizonError):
        steady_state(traj, operating_derived)


def test_steady_state_rwa_converged_residual_vanishes(
    operating_params, operating_derived
):
    traj = integrate_rwa(operating_params, operating_derived, ParityLabel.EE,
                         t_end=40.0, tol=1e-10)
    ss = steady_state(traj, operating_derived)
    fp = rwa_fixed_point(operating_params, operating_derived, ParityLabel.EE)
    assert abs(ss.mean - fp) <= 1e-8
    assert ss.residual_oscillation <= 1e-7
    assert abs(ss.mean - traj.amplitudes[-1]) <= 1e-8


def test_reflection_symmetry_rwa_exact_identity(operating_params, operating_derived):
    fp_ee = rwa_fixed_point(operating_params, operating_derived, ParityLabel.EE)
    fp_gg = rwa_fixed_point(operating_params, operating_derived, ParityLabel.GG)
    assert fp_gg == pytest.approx(-np.conj(fp_ee), abs=1e-15)


def test_reflection_symmetry_exact_model_asymmetry_decays():
    # the time-averaged means are mirror-symmetric only up to O(chi^2/omega_m);
    # the asymmetry must match the harmonic-balance prediction and die off
    # as the resonator frequency grows
    asyms = []
    for gwr in (0.5, 0.05, 0.005):
        p = SystemParams.from_ratios(15.0, gwr, 0.5)
        d = derive(p)
        a_ee, _ = exact_steady_cycle(p, d, ParityLabel.EE)
        a_gg, _ = exact_steady_cycle(p, d, ParityLabel.GG)
        asyms.append(abs(a_gg + np.conj(a_ee)))
    assert asyms[0] > asyms[1] > asyms[2]
    assert asyms[2] < 1e-3
    # integrated means reproduce the asymmetric closed-form values, not the
    # mirror of each other (checked at the ultrastrong point)
    p = SystemParams.from_ratios(15.0, 0.5, 0.5)
    d = derive(p)
    ss_gg = steady_state(integrate_exact(p, d, ParityLabel.GG, t_end=16.0,
                                         tol=1e-9), d)
    a_gg, _ = exact_steady_cycle(p, d, ParityLabel.GG)
    assert abs(ss_gg.mean - a_gg) <= 5e-5


def test_tol_contract(operating_params, operating_derived):
    with pytest.raises(InvalidArgumentError):
        integrate_exact(operating_params, operating_derived, ParityLabel.EE,
                        t_end=10.0, tol=1e-3)
    with pytest.raises(InvalidArgumentError):
        integrate_rwa(operating_params, operating_derived, ParityLabel.EE,
                      t_end=-1.0)


def test_ode_residual_check(operating_params, operating_derived):
    traj = integrate_exact(operating_params, operating_derived, ParityLabel.EE,
                           t_end=10.0)
    assert verify_ode_residual(traj, operating_params, operating_derived) <= 10.0
    trw = integrate_rwa(operating_params, operating_derived, ParityLabel.GG,
                        t_end=10.0)
    assert verify_ode_residual(trw, operating_params, operating_derived) <= 10.0


def test_trajectory_csv_schema(tmp_path, operating_params, operating_derived):
    traj = integrate_rwa(operating_params, operating_derived, ParityLabel.EE,
                         t_end=10.0)
    path = tmp_path / "traj.csv"
    with open(path, "w", newline="") as fh:
        write_trajectory_csv(fh, traj, max_rows=101)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,re_alpha,im_alpha,label,model"
    assert len(lines) == 102
    assert lines[1].endswith(",ee,rwa")
