"""Dispersive two-qubit parity readout: pointer dynamics and homodyne fidelity.

Simulates the qubit-state-conditioned resonator amplitudes of a driven
two-qubit circuit-QED parity measurement, both within the rotating-wave
approximation and with the counter-rotating two-photon term retained, and
evaluates the average Bell-state fidelity of the homodyne parity
measurement.  Brute-force master-equation and quadrature oracles certify
every closed form used.
"""

from .config import RunConfig, SweepSpec, load_config
from .fidelity import (
    ConditionalAmplitudes,
    FidelityReport,
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
from .lindblad import (
    BranchTrajectory,
    DensityState,
    FockConfig,
    OracleReport,
    RabiBranchResult,
    compare_with_ansatz,
    evolve_dispersive_branch,
    evolve_full_rabi,
)
from .model import (
    DerivedParams,
    ParityLabel,
    SystemParams,
    ValidityReport,
    chi_for_label,
    derive,
    validate_dispersive,
)
from .pointer import (
    PointerTrajectory,
    SteadyAmplitude,
    exact_steady_cycle,
    integrate_exact,
    integrate_rwa,
    rwa_fixed_point,
    rwa_solution,
    steady_state,
)
from .special import erfc_complex, erfc_real

__version__ = "0.1.0"
