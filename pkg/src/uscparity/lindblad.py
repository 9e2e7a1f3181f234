"""Truncated-Fock-space master-equation oracles.

Brute-force validation of the coherent-pointer description:

* `evolve_dispersive_branch` -- the retained effective-Hamiltonian terms
  commute with both sigma_z's, so each two-qubit label evolves as a
  field-only problem of dimension N+1 with frequency pull chi_xy and the
  two-photon modulation term.  Its <a>(t) obeys the exact pointer equation
  identically; comparing the two certifies the ODE integration, and the
  reduced state quantifies how coherent the pointer actually stays (the
  modulation term admixes a little squeezing, purity ~ 1 - 2(chi_xy/Omega)^2
  with Omega = 2*omega_m + 2*chi_xy + 2*Delta_r).

* `evolve_full_rabi` -- the lab-frame two-qubit Rabi model with drive, in a
  frame where the drive is static (field rotating at omega_m; the photon
  dissipator is invariant under that rotation).  Used for a qualitative
  check of the dispersive pipeline: branch pointers conditioned on the
  initial qubit label, tail-averaged.  Runs one density matrix of dimension
  4(N+1) per label.

Propagation is fixed-step RK4 on the density matrix, step chosen to resolve
the fastest retained modulation; trace/Hermiticity/positivity are monitored
at the sampling cadence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionGuardError,
    GridAlignmentError,
    InvalidArgumentError,
    StateInvariantError,
    TruncationLeakError,
)
from .model import DerivedParams, ParityLabel, SystemParams, chi_for_label
from .pointer import PointerTrajectory

__all__ = [
    "FockConfig",
    "DensityState",
    "BranchTrajectory",
    "RabiBranchResult",
    "OracleReport",
    "evolve_dispersive_branch",
    "evolve_full_rabi",
    "closed_system_drift",
    "compare_with_ansatz",
]


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1).astype(complex)


def coherent_vector(alpha: complex, dim: int) -> np.ndarray:
    """Normalized coherent-state amplitudes in the truncated number basis."""
    n = np.arange(dim)
    if abs(alpha) < 1e-300:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    log_mag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * _log_fact(n)
    vec = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    return vec / np.linalg.norm(vec)


def _log_fact(n: np.ndarray) -> np.ndarray:
    out = np.zeros(n.size)
    out[1:] = np.cumsum(np.log(np.arange(1.0, n.size)))
    return out


@dataclass(frozen=True)
class FockConfig:
    """Truncation and propagation settings for the oracle runs."""

    cutoff: int = 30
    include_qubits: bool = False
    t_end: float = 10.0
    dt: float | None = None          # None: resolve the fastest modulation /40
    samples: int = 801               # diagnostic sampling cadence
    leak_tol: float = 1e-6           # population allowed in the top 3 levels
    trace_tol: float = 1e-9
    herm_tol: float = 1e-10
    eig_tol: float = 1e-8
    dimension_guard: int = 400
    allow_large: bool = False
    disable_dissipation: bool = False   # closed-system sanity runs only

    def __post_init__(self):
        if self.cutoff < 10:
            raise InvalidArgumentError("Fock cutoff must be >= 10")
        if self.t_end <= 0:
            raise InvalidArgumentError("t_end must be positive")


@dataclass
class DensityState:
    """Density matrix with its invariant checks."""

    matrix: np.ndarray

    def check(self, trace_tol: float, herm_tol: float, eig_tol: float) -> None:
        rho = self.matrix
        trace_drift = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
        if trace_drift > trace_tol:
            raise StateInvariantError(f"trace drift {trace_drift:.3e} > {trace_tol:g}")
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > herm_tol:
            raise StateInvariantError(f"hermiticity residual {herm:.3e} > {herm_tol:g}")
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        if min_eig < -eig_tol:
            raise StateInvariantError(f"min eigenvalue {min_eig:.3e} < -{eig_tol:g}")

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass
class BranchTrajectory:
    """Field-only oracle record for one label."""

    label: ParityLabel
    times: np.ndarray
    a_mean: np.ndarray             # <a>(t) at the sample times
    purity: np.ndarray
    coherent_fidelity: np.ndarray  # <alpha(t)|rho(t)|alpha(t)>, alpha = <a>
    leak: np.ndarray               # population of the top 3 Fock levels
    final_state: DensityState
    model: str = "oracle_dispersive"

    def write_csv(self, fh, header: bool = True) -> None:
        if header:
            fh.write("t,re_alpha,im_alpha,label,model\n")
        for t, a in zip(self.times, self.a_mean):
            fh.write(
                f"{t:.12g},{a.real:.12g},{a.imag:.12g},"
                f"{self.label.value},{self.model}\n"
            )


@dataclass
class RabiBranchResult:
    """Full-Rabi conditional pointer record for one initial label."""

    label: ParityLabel
    times: np.ndarray
    a_conditional: np.ndarray     # Tr(a P rho P)/Tr(P rho P)
    branch_population: np.ndarray
    tail_mean: complex            # time average over t > 0.8 * t_end
    final_state: DensityState
    model: str = "oracle_rabi"


@dataclass(frozen=True)
class OracleReport:
    """Deviation metrics between an oracle run and a pointer trajectory."""

    max_amplitude_deviation: float
    max_deviation_rel: float            # normalized by max |alpha_pointer|
    min_coherent_fidelity: float        # over the whole run
    min_coherent_fidelity_steady: float  # over t >= steady_from
    max_leak: float
    steady_from: float

    def __post_init__(self):
        for f in (self.min_coherent_fidelity, self.min_coherent_fidelity_steady):
            if not 0.0 <= f <= 1.0 + 1e-12:
                raise InvalidArgumentError(f"coherent fidelity {f} outside [0, 1]")


def _rk4_run(liouv, rho, t_end, dt, sample_times, observe):
    """Fixed-step RK4 over [0, t_end], calling observe(t, rho) at samples."""
    steps = int(math.ceil(t_end / dt))
    dt = t_end / steps
    next_sample = 0
    t = 0.0
    sample_times = list(sample_times)
    for _ in range(steps):
        while next_sample < len(sample_times) and sample_times[next_sample] <= t + 1e-12:
            observe(t, rho)
            next_sample += 1
        k1 = liouv(t, rho)
        k2 = liouv(t + dt / 2, rho + (dt / 2) * k1)
        k3 = liouv(t + dt / 2, rho + (dt / 2) * k2)
        k4 = liouv(t + dt, rho + dt * k3)
        rho = rho + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    observe(t, rho)
    return rho


def evolve_dispersive_branch(
    params: SystemParams,
    derived: DerivedParams,
    label: ParityLabel,
    fock: FockConfig = FockConfig(),
) -> BranchTrajectory:
    """Evolve the field-only dispersive branch for one label from vacuum.

    Requires gamma_1 = 0 (qubit relaxation breaks the branch factorization;
    pure dephasing acts trivially on sigma_z eigenstates and is allowed).
    """
    if params.gamma_1 != 0.0:
        raise InvalidArgumentError(
            "dispersive branch factorization requires gamma_1 = 0"
        )
    dim = fock.cutoff + 1
    a = annihilation(dim)
    ad = a.conj().T
    n_op = ad @ a
    a2 = a @ a
    ad2 = ad @ ad
    chixy = chi_for_label(derived, label)
    pull = derived.delta_r + chixy
    h_static = pull * n_op + params.epsilon_m * (a + ad)
    two_wm = 2.0 * params.omega_m
    kappa = params.kappa

    if fock.dt is None:
        # resolve the two-photon modulation; guard RK4 stability at large N
        dt = (2.0 * math.pi / two_wm) / 40.0
        spectral = (abs(pull) + abs(chixy)) * fock.cutoff \
            + 4.0 * params.epsilon_m * math.sqrt(dim) + kappa * fock.cutoff
        dt = min(dt, 2.0 / spectral)
    else:
        dt = fock.dt

    def liouv(t, rho):
        h = h_static + (0.5 * chixy) * (
            a2 * np.exp(-1j * two_wm * t) + ad2 * np.exp(1j * two_wm * t)
        )
        out = -1j * (h @ rho - rho @ h)
        out += kappa * (a @ rho @ ad - 0.5 * (n_op @ rho + rho @ n_op))
        return out

    rho0 = np.zeros((dim, dim), dtype=complex)
    rho0[0, 0] = 1.0
    sample_times = np.linspace(0.0, fock.t_end, fock.samples)

    times, means, purs, fids, leaks = [], [], [], [], []

    def observe(t, rho):
        alpha = complex(np.trace(a @ rho))
        leak = float(np.real(np.diag(rho)[-3:].sum()))
        if leak > fock.leak_tol:
            raise TruncationLeakError(
                f"top-level population {leak:.3e} > {fock.leak_tol:g} at t={t:.3g}; "
                f"increase the cutoff (N={fock.cutoff})"
            )
        cvec = coherent_vector(alpha, dim)
        times.append(t)
        means.append(alpha)
        purs.append(float(np.real(np.trace(rho @ rho))))
        fids.append(float(np.real(cvec.conj() @ rho @ cvec)))
        leaks.append(leak)

    rho = _rk4_run(liouv, rho0, fock.t_end, dt, sample_times, observe)
    state = DensityState(rho)
    state.check(fock.trace_tol, fock.herm_tol, fock.eig_tol)
    return BranchTrajectory(
        label=label,
        times=np.asarray(times),
        a_mean=np.asarray(means, dtype=complex),
        purity=np.asarray(purs),
        coherent_fidelity=np.asarray(fids),
        leak=np.asarray(leaks),
        final_state=state,
    )


def _rabi_operators(params: SystemParams, dim: int):
    a = annihilation(dim)
    i2 = np.eye(2, dtype=complex)
    i_f = np.eye(dim, dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)   # index 0 = excited
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    sm = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)

    def kron3(q1, q2, f):
        return np.kron(np.kron(q1, q2), f)

    ops = {
        "a": kron3(i2, i2, a),
        "sz1": kron3(sz, i2, i_f),
        "sz2": kron3(i2, sz, i_f),
        "sx_sum": kron3(sx, i2, i_f) + kron3(i2, sx, i_f),
        "sm1": kron3(sm, i2, i_f),
        "sm2": kron3(i2, sm, i_f),
    }
    ops["ad"] = ops["a"].conj().T
    ops["n"] = ops["ad"] @ ops["a"]
    ops["sxa"] = ops["sx_sum"] @ ops["a"]     # sx factors commute with a
    ops["sxad"] = ops["sx_sum"] @ ops["ad"]
    projectors = {}
    for i, s1 in enumerate("eg"):
        for j, s2 in enumerate("eg"):
            p1 = np.zeros((2, 2), dtype=complex); p1[i, i] = 1.0
            p2 = np.zeros((2, 2), dtype=complex); p2[j, j] = 1.0
            projectors[ParityLabel(s1 + s2)] = kron3(p1, p2, i_f)
    ops["proj"] = projectors
    return ops


def _guard_dimension(fock: FockConfig) -> int:
    dim = 4 * (fock.cutoff + 1)
    if dim > fock.dimension_guard and not fock.allow_large:
        raise DimensionGuardError(
            f"two-qubit+field dimension {dim} exceeds guard "
            f"{fock.dimension_guard}; set allow_large to override"
        )
    return fock.cutoff + 1


def evolve_full_rabi(
    params: SystemParams,
    fock: FockConfig,
    labels: tuple[ParityLabel, ...] = (ParityLabel.EE, ParityLabel.EG),
) -> dict[ParityLabel, RabiBranchResult]:
    """Evolve the driven two-qubit Rabi model, one run per initial label.

    Initial state |label> (x) vacuum; reports the conditional pointer
    Tr(a P rho P)/Tr(P rho P) with P the initial label's projector, which
    stays clean of the kappa-induced branch leakage (population that decays
    to other labels carries its own pointer and would contaminate the bare
    Tr(a rho)).
    """
    if fock.include_qubits is False:
        raise InvalidArgumentError("evolve_full_rabi requires include_qubits=True")
    if fock.cutoff < 20:
        raise InvalidArgumentError("full-Rabi oracle requires cutoff >= 20")
    dim = _guard_dimension(fock)
    ops = _rabi_operators(params, dim)
    wm = params.omega_m
    g = params.g
    kappa = 0.0 if fock.disable_dissipation else params.kappa
    h_static = (
        (params.omega_r - wm) * ops["n"]
        + 0.5 * params.omega_a * (ops["sz1"] + ops["sz2"])
        + params.epsilon_m * (ops["a"] + ops["ad"])
    )
    w_fast = params.omega_a + wm
    dt = fock.dt if fock.dt is not None else (2.0 * math.pi / w_fast) / 24.0

    gamma_1 = 0.0 if fock.disable_dissipation else params.gamma_1
    gamma_phi = 0.0 if fock.disable_dissipation else params.gamma_phi

    def liouv(t, rho):
        phase = np.exp(-1j * wm * t)
        h = h_static + g * (ops["sxa"] * phase + ops["sxad"] * np.conj(phase))
        out = -1j * (h @ rho - rho @ h)
        if kappa:
            out += kappa * (
                ops["a"] @ rho @ ops["ad"]
                - 0.5 * (ops["n"] @ rho + rho @ ops["n"])
            )
        if gamma_1:
            for sm in (ops["sm1"], ops["sm2"]):
                smd = sm.conj().T
                out += gamma_1 * (sm @ rho @ smd - 0.5 * (smd @ sm @ rho + rho @ smd @ sm))
        if gamma_phi:
            for sz in (ops["sz1"], ops["sz2"]):
                out += 0.5 * gamma_phi * (sz @ rho @ sz - rho)
        return out

    sample_times = np.linspace(0.0, fock.t_end, fock.samples)
    results: dict[ParityLabel, RabiBranchResult] = {}
    idx = {"e": 0, "g": 1}
    for label in labels:
        qubit = np.zeros(4, dtype=complex)
        qubit[2 * idx[label.value[0]] + idx[label.value[1]]] = 1.0
        fvec = np.zeros(dim, dtype=complex)
        fvec[0] = 1.0
        psi0 = np.kron(qubit, fvec)
        rho0 = np.outer(psi0, psi0.conj())
        proj = ops["proj"][label]

        times, conds, pops = [], [], []

        def observe(t, rho, _proj=proj):
            block = _proj @ rho @ _proj
            pop = float(np.trace(block).real)
            diag = np.real(np.diag(rho))
            leak = float(sum(
                diag[k * dim + dim - 3: k * dim + dim].sum() for k in range(4)
            ))
            if leak > fock.leak_tol:
                raise TruncationLeakError(
                    f"top-level population {leak:.3e} > {fock.leak_tol:g} "
                    f"at t={t:.3g}; increase the cutoff (N={fock.cutoff})"
                )
            times.append(t)
            pops.append(pop)
            conds.append(complex(np.trace(ops["a"] @ block)) / pop)

        rho = _rk4_run(liouv, rho0, fock.t_end, dt, sample_times, observe)
        state = DensityState(rho)
        state.check(fock.trace_tol, fock.herm_tol, fock.eig_tol)
        times_arr = np.asarray(times)
        conds_arr = np.asarray(conds, dtype=complex)
        tail = times_arr >= 0.8 * fock.t_end
        results[label] = RabiBranchResult(
            label=label,
            times=times_arr,
            a_conditional=conds_arr,
            branch_population=np.asarray(pops),
            tail_mean=complex(np.mean(conds_arr[tail])),
            final_state=state,
        )
    return results


def closed_system_drift(
    params: SystemParams, fock: FockConfig, t_end: float = 2.0
) -> tuple[float, float]:
    """Unitary sanity check of the RK4 propagator (lab frame, no drive/loss).

    Evolves |ee,0> under the static Rabi Hamiltonian and returns the drift
    per unit time of the conserved excitation parity sz1*sz2*(-1)^n and of
    the energy.
    """
    dim = _guard_dimension(fock)
    ops = _rabi_operators(params, dim)
    h = (
        params.omega_r * ops["n"]
        + 0.5 * params.omega_a * (ops["sz1"] + ops["sz2"])
        + params.g * (ops["sxa"] + ops["sxad"])
    )
    parity = ops["sz1"] @ ops["sz2"] @ np.kron(
        np.eye(4, dtype=complex), np.diag((-1.0) ** np.arange(dim)).astype(complex)
    )
    qubit = np.zeros(4, dtype=complex)
    qubit[0] = 1.0
    fvec = np.zeros(dim, dtype=complex)
    fvec[0] = 1.0
    psi0 = np.kron(qubit, fvec)
    rho0 = np.outer(psi0, psi0.conj())

    def liouv(t, rho):
        return -1j * (h @ rho - rho @ h)

    w_fast = params.omega_a + params.omega_r
    dt = fock.dt if fock.dt is not None else (2.0 * math.pi / w_fast) / 24.0
    record = []

    def observe(t, rho):
        record.append((
            t,
            float(np.real(np.trace(parity @ rho))),
            float(np.real(np.trace(h @ rho))),
        ))

    _rk4_run(liouv, rho0, t_end, dt, [0.0], observe)
    t0, p0, e0 = record[0]
    t1, p1, e1 = record[-1]
    span = max(t1 - t0, 1e-12)
    energy_scale = max(abs(e0), 1.0)
    return abs(p1 - p0) / span, abs(e1 - e0) / (span * energy_scale)


def compare_with_ansatz(
    oracle: BranchTrajectory,
    traj: PointerTrajectory,
    steady_from: float = 6.0,
) -> OracleReport:
    """Deviation metrics between oracle <a>(t) and the pointer trajectory."""
    if oracle.times[-1] > traj.times[-1] + 1e-9 or oracle.times[0] < traj.times[0] - 1e-9:
        raise GridAlignmentError(
            f"oracle span [{oracle.times[0]:.3g}, {oracle.times[-1]:.3g}] not "
            f"covered by trajectory [{traj.times[0]:.3g}, {traj.times[-1]:.3g}]"
        )
    pointer_vals = traj.interpolate(oracle.times)
    dev = np.abs(oracle.a_mean - pointer_vals)
    scale = float(np.max(np.abs(pointer_vals)))
    steady = oracle.times >= steady_from
    if not steady.any():
        steady = oracle.times >= oracle.times[-1] / 2
    return OracleReport(
        max_amplitude_deviation=float(dev.max()),
        max_deviation_rel=float(dev.max() / scale) if scale > 0 else 0.0,
        min_coherent_fidelity=float(oracle.coherent_fidelity.min()),
        min_coherent_fidelity_steady=float(oracle.coherent_fidelity[steady].min()),
        max_leak=float(oracle.leak.max()),
        steady_from=steady_from,
    )
