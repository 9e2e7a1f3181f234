"""Homodyne fidelity: closed forms against the measurement-outcome quadrature."""

import math

import numpy as np
import pytest

from uscparity import (
    ConditionalAmplitudes,
    ParityLabel,
    PointerSet,
    QuadSpec,
    average_fidelity,
    fidelity_closed_form,
    fidelity_even,
    fidelity_numeric,
    fidelity_odd,
    fidelity_sensitivity,
    midpoint,
    subspace_probabilities,
)
from uscparity.errors import InvalidArgumentError, QuadratureResolutionError

from conftest import random_symmetric_sets


# ----------------------------------------------------------- midpoint

def test_midpoint_example():
    ps = PointerSet.symmetric(complex(-0.1622, -0.027), -1j)
    assert midpoint(ps) == pytest.approx(-0.5135)


def test_midpoint_degenerate_and_symmetric():
    ps = PointerSet.symmetric(complex(0.3, -0.4), complex(0, -0.4))
    assert midpoint(ps) == pytest.approx(-0.4)
    ps2 = PointerSet.symmetric(complex(0, 0.7), complex(0, -0.7))
    assert midpoint(ps2) == 0.0


# ----------------------------------------------------------- probabilities

def test_midpoint_probabilities_are_half():
    for ps in random_symmetric_sets(20, seed=7):
        pe, po = subspace_probabilities(ps, midpoint(ps))
        assert pe == pytest.approx(0.5, abs=1e-12)
        assert pe + po == pytest.approx(1.0, abs=1e-12)


def test_threshold_at_minus_infinity_captures_everything():
    ps = PointerSet.symmetric(complex(0.2, -0.1), -1j)
    pe, po = subspace_probabilities(ps, -40.0)
    assert pe == pytest.approx(1.0, abs=1e-14)
    assert po == pytest.approx(0.0, abs=1e-14)


def test_degenerate_pointers_against_gaussian_tail_quadrature():
    from scipy.integrate import quad

    alpha = complex(0.4, -0.6)
    ps = PointerSet(alpha_gg=alpha, alpha_ge=alpha, alpha_eg=alpha, alpha_ee=alpha)
    for threshold in (-1.5, -0.6, 0.3):
        pe, _ = subspace_probabilities(ps, threshold)
        tail, _ = quad(
            lambda x: math.sqrt(2 / math.pi) * math.exp(-2 * (x - alpha.imag) ** 2),
            threshold, 30.0,
        )
        assert pe == pytest.approx(tail, abs=1e-10)


# ----------------------------------------------------------- closed forms

def test_even_fidelity_trivial_limits():
    # zero separation, b = c = 0: erfc(0) = 1 everywhere -> 1/4 + 1/8 + 1/8
    ps = PointerSet.symmetric(0j, 0j)
    assert fidelity_even(ps, midpoint(ps)) == pytest.approx(0.5, abs=1e-14)
    # b = 0 and well-separated even pointers: every erfc -> 2
    ps2 = PointerSet.symmetric(0j, -25j)
    assert fidelity_even(ps2, midpoint(ps2)) == pytest.approx(1.0, abs=1e-12)


def test_odd_fidelity_values():
    ps = PointerSet.symmetric(0j, 0j)
    assert fidelity_odd(ps, midpoint(ps)) == pytest.approx(0.5, abs=1e-14)
    # s = -0.973: frozen half-erfc value from the high-precision reference
    ps2 = PointerSet.symmetric(0j, -0.973j)
    assert fidelity_odd(ps2, midpoint(ps2)) == pytest.approx(
        0.83472334895061355, rel=1e-12
    )
    ps3 = PointerSet.symmetric(0j, -25j)
    assert fidelity_odd(ps3, midpoint(ps3)) == pytest.approx(1.0, abs=1e-12)


def test_average_fidelity_convexity():
    assert average_fidelity(0.5, 0.5, 0.84, 0.84) == pytest.approx(0.84)
    assert average_fidelity(0.3, 0.7, 1.0, 0.5) == pytest.approx(0.65)
    with pytest.raises(InvalidArgumentError):
        average_fidelity(0.6, 0.6, 0.5, 0.5)


def test_report_reduces_to_mean_of_fidelities_at_midpoint():
    for ps in random_symmetric_sets(10, seed=21):
        rep = fidelity_closed_form(ps)
        assert rep.f_avg == pytest.approx(0.5 * (rep.f_even + rep.f_odd), abs=1e-12)
        assert 0.0 <= rep.f_even <= 1.0 and 0.0 <= rep.f_odd <= 1.0


# ----------------------------------------------------------- quadrature oracle

def test_closed_forms_match_quadrature_on_random_sets():
    worst = 0.0
    for ps in random_symmetric_sets(100, seed=1234):
        closed = fidelity_closed_form(ps)
        numeric = fidelity_numeric(ps)
        worst = max(
            worst,
            abs(closed.f_even - numeric.f_even),
            abs(closed.f_odd - numeric.f_odd),
            abs(numeric.prob_even - 0.5),
        )
    assert worst <= 1e-8, f"worst closed-vs-numeric deviation {worst:.3e}"


def test_rwa_example_point_certified():
    aee = -0.5j / (3j + 0.5)   # separation s = -36/37
    ps = PointerSet.symmetric(aee, -1j)
    closed = fidelity_closed_form(ps)
    numeric = fidelity_numeric(ps)
    assert closed.f_even == pytest.approx(numeric.f_even, abs=1e-8)
    assert closed.f_odd == pytest.approx(
        0.5 * (1 + math.erf((36 / 37) / math.sqrt(2))), abs=1e-12
    )


def test_numeric_handles_asymmetric_sets():
    ps = PointerSet(
        alpha_gg=complex(0.088, -0.0078),
        alpha_ge=-0.99j,
        alpha_eg=-0.99j,
        alpha_ee=complex(-0.104, -0.011),
    )
    rep = fidelity_numeric(ps)
    assert 0.0 <= rep.f_even <= 1.0
    assert rep.prob_even + rep.prob_odd == pytest.approx(1.0, abs=1e-10)
    assert ps.symmetry_defect() > 0.0


def test_global_phase_invariance():
    ps = PointerSet.symmetric(complex(-0.3, 0.4), complex(1.0, -2.0))
    base = fidelity_numeric(ConditionalAmplitudes(ps))
    for phase in (0.7, 2.9):
        rot = fidelity_numeric(ConditionalAmplitudes(ps, extra_phase=phase))
        assert rot.f_even == pytest.approx(base.f_even, abs=1e-12)
        assert rot.f_odd == pytest.approx(base.f_odd, abs=1e-12)
        assert rot.prob_even == pytest.approx(base.prob_even, abs=1e-12)


def test_translation_covariance():
    # Q-translation is a symmetry of the measurement statistics: assignment
    # probabilities and the odd (envelope-only) fidelity are invariant.  The
    # even fidelity is NOT: displacing both even pointers rotates the
    # measurement-induced gg/ee relative phase by e^{-2i b d} (displacement
    # operators do not commute), so it is invariant only for b = Re a_ee = 0;
    # the general transformation law is checked against the quadrature oracle.
    ps = PointerSet.symmetric(complex(0.25, -0.5), complex(-0.4, -1.5))
    shift = 0.83
    shifted = PointerSet.symmetric(
        ps.alpha_ee + 1j * shift, ps.alpha_eg + 1j * shift
    )
    a = fidelity_closed_form(ps)
    b_rep = fidelity_closed_form(shifted)
    assert b_rep.p_m == pytest.approx(a.p_m + shift, abs=1e-12)
    assert b_rep.prob_even == pytest.approx(a.prob_even, abs=1e-10)
    assert b_rep.f_odd == pytest.approx(a.f_odd, abs=1e-10)

    # transformation law of the even interference term, via the oracle
    b_val, c_val = ps.alpha_ee.real, ps.alpha_ee.imag
    u = a.p_m - c_val
    base = 0.25 * math.erfc(math.sqrt(2) * u)
    from uscparity.special import erfc_complex

    term = np.exp(-2 * b_val * (b_val + 1j * c_val)) * erfc_complex(
        math.sqrt(2) * complex(u, b_val)
    )
    predicted = base + 0.25 * (np.exp(-2j * b_val * shift) * term).real
    assert fidelity_numeric(shifted).f_even == pytest.approx(predicted, abs=1e-8)

    # with no I-quadrature component the whole report is invariant
    ps0 = PointerSet.symmetric(complex(0.0, -0.4), complex(0.0, -1.7))
    sh0 = PointerSet.symmetric(ps0.alpha_ee + 1j * shift, ps0.alpha_eg + 1j * shift)
    r0, r1 = fidelity_closed_form(ps0), fidelity_closed_form(sh0)
    for name in ("prob_even", "f_even", "f_odd", "f_avg"):
        assert getattr(r1, name) == pytest.approx(getattr(r0, name), abs=1e-10)


def test_even_fidelity_decreases_with_which_state_information():
    # growing |Re alpha_ee| dephases the even superposition
    values = []
    for b in np.arange(0.0, 0.501, 0.05):
        ps = PointerSet.symmetric(complex(b, -0.027), -1j)
        values.append(fidelity_numeric(ps).f_even)
    assert all(x2 <= x1 + 1e-12 for x1, x2 in zip(values, values[1:]))


# ----------------------------------------------------------- contracts

def test_conditional_amplitude_invariants():
    ps = PointerSet.symmetric(complex(0.9, -1.1), complex(-0.2, -2.3))
    camps = ConditionalAmplitudes(ps)
    p = np.linspace(-9, 6, 4001)
    for label in ParityLabel:
        assert np.allclose(np.abs(camps.phase(label, p)), 1.0, atol=1e-14)
        norm = np.trapezoid(camps.envelope(label, p) ** 2, p)
        assert norm == pytest.approx(1.0, abs=1e-9)


def test_quad_spec_contracts():
    with pytest.raises(InvalidArgumentError):
        QuadSpec(points_per_side=1001)
    with pytest.raises(InvalidArgumentError):
        QuadSpec(points_per_side=4096)  # even
    with pytest.raises(InvalidArgumentError):
        QuadSpec(pad=4.0)


def test_quadrature_refinement_guard():
    ps = PointerSet.symmetric(complex(2.9, -1.0), complex(0.1, 2.0))
    with pytest.raises(QuadratureResolutionError):
        fidelity_numeric(ps, quad=QuadSpec(points_per_side=2001, refine_tol=1e-16))


def test_pointer_set_contracts():
    with pytest.raises(InvalidArgumentError):
        PointerSet(alpha_gg=complex(math.nan, 0), alpha_ge=0j, alpha_eg=0j,
                   alpha_ee=0j)
    ps = PointerSet.symmetric(complex(0.3, -0.2), -1j)
    assert ps.symmetry_defect() == 0.0
    assert ps.alpha(ParityLabel.EE) == ps.alpha_ee


def test_sensitivity_band_contains_nominal():
    ps = PointerSet.symmetric(complex(-0.104, -0.011), -0.99j)
    lo, hi = fidelity_sensitivity(ps, residual_ee=0.0083)
    nominal = fidelity_closed_form(ps).f_avg
    assert lo <= nominal <= hi
    assert hi - lo < 0.05


def test_csv_row_format():
    ps = PointerSet.symmetric(complex(-0.104, -0.011), -0.99j)
    rep = fidelity_closed_form(ps)
    row = rep.csv_row(0.5, 15.0, 0.5, "exact")
    fields = row.split(",")
    assert len(fields) == 9
    assert fields[3] == "exact"
    assert float(fields[4]) == pytest.approx(rep.prob_even)
