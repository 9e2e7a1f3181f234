"""Physical parameters and dispersive-regime derived quantities.

All rates and angular frequencies are expressed in units of the photon loss
rate (kappa = 1 internally); the CLI accepts the ratio parametrization
(g/kappa, g/omega_r, g/delta, eps/kappa, delta_r/kappa) and a GHz anchor for
report labeling only -- the dynamics depend on ratios alone.

Sign convention: the qubits sit above the resonator, delta = omega_a -
omega_r > 0, and delta, sigma enter the dispersive shifts as positive
magnitudes.  The even-parity labels then carry chi_ee = +2*chi and
chi_gg = -2*chi; odd labels carry zero shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateDetuningError, InvalidArgumentError

__all__ = [
    "ParityLabel",
    "SystemParams",
    "DerivedParams",
    "ValidityReport",
    "derive",
    "chi_for_label",
    "validate_dispersive",
]


class ParityLabel(str, Enum):
    """Two-qubit basis label; gg/ee are even parity, ge/eg odd."""

    GG = "gg"
    GE = "ge"
    EG = "eg"
    EE = "ee"

    @property
    def is_even(self) -> bool:
        return self in (ParityLabel.GG, ParityLabel.EE)


LABELS = (ParityLabel.GG, ParityLabel.GE, ParityLabel.EG, ParityLabel.EE)


@dataclass(frozen=True)
class SystemParams:
    """Rates and frequencies of the driven two-qubit/resonator setup.

    Identical qubits (same frequency and coupling) are assumed throughout;
    that symmetry is what makes the odd-parity shift vanish.
    """

    omega_r: float
    omega_a: float
    g: float
    epsilon_m: float
    omega_m: float
    kappa: float = 1.0
    gamma_1: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self):
        values = [
            self.omega_r, self.omega_a, self.g, self.epsilon_m,
            self.omega_m, self.kappa, self.gamma_1, self.gamma_phi,
        ]
        if not all(math.isfinite(v) for v in values):
            raise InvalidArgumentError("SystemParams fields must be finite")
        if self.omega_r <= 0 or self.g <= 0 or self.kappa <= 0:
            raise InvalidArgumentError("omega_r, g, kappa must be positive")
        if min(self.omega_a, self.epsilon_m, self.omega_m,
               self.gamma_1, self.gamma_phi) < 0:
            raise InvalidArgumentError("rates and frequencies must be >= 0")

    @classmethod
    def from_ratios(
        cls,
        g_over_kappa: float,
        g_over_omega_r: float,
        eps_over_kappa: float,
        g_over_delta: float = 0.1,
        delta_r_over_kappa: float = 0.0,
        kappa: float = 1.0,
    ) -> "SystemParams":
        """Build parameters from the ratio parametrization (kappa units)."""
        if g_over_kappa <= 0 or g_over_omega_r <= 0 or g_over_delta <= 0:
            raise InvalidArgumentError("ratio parameters must be positive")
        g = g_over_kappa * kappa
        omega_r = g / g_over_omega_r
        delta = g / g_over_delta
        return cls(
            omega_r=omega_r,
            omega_a=omega_r + delta,
            g=g,
            epsilon_m=eps_over_kappa * kappa,
            omega_m=omega_r - delta_r_over_kappa * kappa,
            kappa=kappa,
        )


@dataclass(frozen=True)
class DerivedParams:
    """Detunings and dispersive shifts computed from SystemParams."""

    delta: float                 # |omega_a - omega_r|
    sigma: float                 # omega_a + omega_r
    delta_r: float               # omega_r - omega_m (drive detuning)
    chi: float                   # g^2 (1/delta + 1/sigma)
    chi_rwa: float               # g^2 / delta
    lamb_shifted_omega_a: float  # omega_a + chi
    j_coupling: float            # g^2 (1/delta - 1/sigma)
    n_crit: float                # (delta / 2g)^2

    @property
    def omega_r(self) -> float:
        return 0.5 * (self.sigma - self.delta)

    @property
    def omega_m(self) -> float:
        return self.omega_r - self.delta_r


def derive(params: SystemParams) -> DerivedParams:
    """Compute dispersive-regime derived quantities."""
    delta = abs(params.omega_a - params.omega_r)
    if delta == 0.0:
        raise DegenerateDetuningError(
            "omega_a == omega_r: dispersive expansion invalid at zero detuning"
        )
    sigma = params.omega_a + params.omega_r
    g2 = params.g * params.g
    chi = g2 * (1.0 / delta + 1.0 / sigma)
    return DerivedParams(
        delta=delta,
        sigma=sigma,
        delta_r=params.omega_r - params.omega_m,
        chi=chi,
        chi_rwa=g2 / delta,
        lamb_shifted_omega_a=params.omega_a + chi,
        j_coupling=g2 * (1.0 / delta - 1.0 / sigma),
        n_crit=(delta / (2.0 * params.g)) ** 2,
    )


def chi_for_label(derived: DerivedParams, label: ParityLabel, rwa: bool = False) -> float:
    """Qubit-state-conditioned resonator pull: +2chi (ee), -2chi (gg), 0 (odd)."""
    chi = derived.chi_rwa if rwa else derived.chi
    if label == ParityLabel.EE:
        return 2.0 * chi
    if label == ParityLabel.GG:
        return -2.0 * chi
    return 0.0


@dataclass(frozen=True)
class ValidityReport:
    """Dispersive-validity diagnostics for one parameter point."""

    g_over_delta: float
    g_over_sigma: float
    photon_fraction: float  # mean photons / n_crit
    dispersive_ok: bool     # g/delta <= 0.15
    photon_ok: bool         # mean photons <= 0.1 * n_crit

    @property
    def passed(self) -> bool:
        return self.dispersive_ok and self.photon_ok

    def summary(self) -> str:
        if self.passed:
            return "pass"
        flags = []
        if not self.dispersive_ok:
            flags.append(f"g/delta={self.g_over_delta:.3g}>0.15")
        if not self.photon_ok:
            flags.append(f"n/n_crit={self.photon_fraction:.3g}>0.1")
        return "warn:" + ";".join(flags)


def validate_dispersive(
    params: SystemParams, derived: DerivedParams, mean_photons: float
) -> ValidityReport:
    """Check the dispersive small parameters and the photon budget."""
    g_over_delta = params.g / derived.delta
    fraction = mean_photons / derived.n_crit
    return ValidityReport(
        g_over_delta=g_over_delta,
        g_over_sigma=params.g / derived.sigma,
        photon_fraction=fraction,
        dispersive_ok=g_over_delta <= 0.15,
        photon_ok=fraction <= 0.1,
    )
