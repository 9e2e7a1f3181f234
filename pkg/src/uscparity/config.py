"""Run configuration: defaults, JSON config files, environment overrides.

Precedence (lowest to highest): built-in defaults, config file, environment
variables prefixed USCPARITY_, explicit CLI flags.  The defaults are the
standard operating point delta_r = 0, eps = 0.5 kappa, g = 15 kappa,
g/delta = 0.1, g/omega_r = 0.5, with omega_r/2pi = 2 GHz as a labeling
anchor only.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, fields, replace

from .errors import InvalidArgumentError
from .model import SystemParams

__all__ = ["RunConfig", "SweepSpec", "ENV_PREFIX", "load_config"]

ENV_PREFIX = "USCPARITY_"


@dataclass(frozen=True)
class RunConfig:
    g_over_kappa: float = 15.0
    g_over_omega_r: float = 0.5
    g_over_delta: float = 0.1
    eps_over_kappa: float = 0.5
    delta_r_over_kappa: float = 0.0
    omega_r_ghz: float = 2.0          # report label only; dynamics use ratios
    model: str = "both"               # exact | rwa | both
    t_end: float = 10.0
    tol: float = 1e-8
    workers: int = 1                  # 0: use available parallelism

    def __post_init__(self):
        if self.g_over_kappa <= 0 or self.g_over_omega_r <= 0:
            raise InvalidArgumentError("coupling ratios must be positive")
        if not 0 < self.g_over_delta <= 0.2:
            raise InvalidArgumentError(
                f"g_over_delta must lie in (0, 0.2] (dispersive validity), "
                f"got {self.g_over_delta}"
            )
        if self.eps_over_kappa <= 0:
            raise InvalidArgumentError("eps_over_kappa must be positive")
        if not math.isfinite(self.delta_r_over_kappa):
            raise InvalidArgumentError("delta_r_over_kappa must be finite")
        if self.model not in ("exact", "rwa", "both"):
            raise InvalidArgumentError(f"unknown model selection {self.model!r}")
        if self.t_end <= 0:
            raise InvalidArgumentError("t_end must be positive")

    def models(self) -> tuple[str, ...]:
        return ("exact", "rwa") if self.model == "both" else (self.model,)

    def system_params(
        self,
        g_over_kappa: float | None = None,
        g_over_omega_r: float | None = None,
        eps_over_kappa: float | None = None,
    ) -> SystemParams:
        return SystemParams.from_ratios(
            g_over_kappa=self.g_over_kappa if g_over_kappa is None else g_over_kappa,
            g_over_omega_r=(
                self.g_over_omega_r if g_over_omega_r is None else g_over_omega_r
            ),
            eps_over_kappa=(
                self.eps_over_kappa if eps_over_kappa is None else eps_over_kappa
            ),
            g_over_delta=self.g_over_delta,
            delta_r_over_kappa=self.delta_r_over_kappa,
        )


@dataclass(frozen=True)
class SweepSpec:
    """Grid axes for the fidelity heatmap (row-major: g_over_kappa outer)."""

    gk_min: float = 5.0
    gk_max: float = 50.0
    gk_points: int = 40
    gk_log: bool = False
    gw_min: float = 0.01
    gw_max: float = 0.5
    gw_points: int = 40
    gw_log: bool = False

    def __post_init__(self):
        if self.gk_points < 2 or self.gw_points < 2:
            raise InvalidArgumentError("each swept axis needs >= 2 points")
        if not (0 < self.gk_min < self.gk_max):
            raise InvalidArgumentError("need 0 < gk_min < gk_max")
        if not (0 < self.gw_min < self.gw_max):
            raise InvalidArgumentError("need 0 < gw_min < gw_max")

    @staticmethod
    def _axis(lo: float, hi: float, n: int, log: bool) -> list[float]:
        if log:
            step = (math.log(hi) - math.log(lo)) / (n - 1)
            return [math.exp(math.log(lo) + k * step) for k in range(n)]
        return [lo + k * (hi - lo) / (n - 1) for k in range(n)]

    def gk_values(self) -> list[float]:
        return self._axis(self.gk_min, self.gk_max, self.gk_points, self.gk_log)

    def gw_values(self) -> list[float]:
        return self._axis(self.gw_min, self.gw_max, self.gw_points, self.gw_log)


_FLOAT_FIELDS = {
    f.name for f in fields(RunConfig) if f.type in ("float", float)
}


def _coerce(name: str, raw: str):
    if name == "model":
        return raw
    if name == "workers":
        return int(raw)
    return float(raw)


def load_config(
    path: str | None = None,
    env: dict[str, str] | None = None,
    overrides: dict | None = None,
) -> RunConfig:
    """Resolve a RunConfig from file, environment, and explicit overrides."""
    values: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidArgumentError(f"config file {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise InvalidArgumentError(f"config file {path}: expected an object")
        unknown = set(raw) - {f.name for f in fields(RunConfig)}
        if unknown:
            raise InvalidArgumentError(
                f"config file {path}: unknown keys {sorted(unknown)}"
            )
        values.update(raw)
    env = os.environ if env is None else env
    for f in fields(RunConfig):
        key = ENV_PREFIX + f.name.upper()
        if key in env:
            values[f.name] = _coerce(f.name, env[key])
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)
