"""Experiment configuration: strict JSON parsing, validation, round-tripping.

Unknown keys are rejected with their full key path; value violations name the
offending key. ``parse_config(emit_config(cfg)) == cfg`` holds for every valid
configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import ConfigError

__all__ = [
    "GridConfig",
    "ModeSpec",
    "InitialDataConfig",
    "ProbeConfig",
    "ExperimentConfig",
    "parse_config",
    "emit_config",
    "config_to_dict",
    "load_config",
]

PRESETS = ("reference", "zero", "random")
DT_RULES = ("fixed", "proportional_to_epsilon")


@dataclass(frozen=True)
class GridConfig:
    n: int = 128
    L: float = 2.0 * math.pi


@dataclass(frozen=True)
class ModeSpec:
    """One cosine mode amp * cos(2*pi*(kx*x + ky*y)/L + phase)."""

    kx: int
    ky: int
    amp: float
    phase: float = 0.0


@dataclass(frozen=True)
class InitialDataConfig:
    """Named preset, or explicit mode lists for the three data components."""

    preset: str | None = "reference"
    s0_modes: tuple[ModeSpec, ...] = ()
    q_modes: tuple[ModeSpec, ...] = ()
    phi_modes: tuple[ModeSpec, ...] = ()


@dataclass(frozen=True)
class ProbeConfig:
    """Decay-probe setup: bump shape and fast-time sample points."""

    taus: tuple[float, ...] = (0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0)
    bump_width: float = 1.0
    bump_amplitude: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig:
    gamma: float = 2.0
    grid: GridConfig = field(default_factory=GridConfig)
    epsilons: tuple[float, ...] = (0.2, 0.1, 0.05)
    horizon: float = 1.0
    dt_rule: str = "proportional_to_epsilon"
    dt_value: float = 0.05
    qg_dt: float = 1e-3
    cadence: float = 50.0
    initial_data: InitialDataConfig = field(default_factory=InitialDataConfig)
    hyperdiffusion: float = 0.0
    out_dir: str = "runs"
    seed: int = 0
    snapshots_per_unit_time: float = 0.0
    probe: ProbeConfig = field(default_factory=ProbeConfig)

    def dt_for(self, epsilon: float) -> float:
        if self.dt_rule == "fixed":
            return self.dt_value
        return self.dt_value * epsilon


def _reject_unknown(obj: dict, allowed, path: str):
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{path}{key}: unknown key")


def _get_number(obj, key, path, default=None, positive=False, nonnegative=False):
    if key not in obj:
        if default is None:
            raise ConfigError(f"{path}{key}: required key missing")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}{key}: expected a number, got {val!r}")
    val = float(val)
    if not math.isfinite(val):
        raise ConfigError(f"{path}{key}: must be finite")
    if positive and not val > 0.0:
        raise ConfigError(f"{path}{key}: must be positive, got {val}")
    if nonnegative and val < 0.0:
        raise ConfigError(f"{path}{key}: must be nonnegative, got {val}")
    return val


def _get_int(obj, key, path, default=None, minimum=None):
    if key not in obj:
        if default is None:
            raise ConfigError(f"{path}{key}: required key missing")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{path}{key}: expected an integer, got {val!r}")
    if minimum is not None and val < minimum:
        raise ConfigError(f"{path}{key}: must be >= {minimum}, got {val}")
    return val


def _parse_modes(raw, path) -> tuple[ModeSpec, ...]:
    if not isinstance(raw, list):
        raise ConfigError(f"{path}: expected a list of modes")
    modes = []
    for i, entry in enumerate(raw):
        epath = f"{path}[{i}]."
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}[{i}]: expected a mode object")
        _reject_unknown(entry, {"kx", "ky", "amp", "phase"}, epath)
        kx = _get_int(entry, "kx", epath)
        ky = _get_int(entry, "ky", epath)
        if kx == 0 and ky == 0:
            raise ConfigError(f"{path}[{i}]: mode (0, 0) breaks the mean-zero requirement")
        amp = _get_number(entry, "amp", epath)
        phase = _get_number(entry, "phase", epath, default=0.0)
        modes.append(ModeSpec(kx=kx, ky=ky, amp=amp, phase=phase))
    return tuple(modes)


def _parse_initial_data(raw, path) -> InitialDataConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected an object")
    _reject_unknown(raw, {"preset", "s0_modes", "q_modes", "phi_modes"}, path)
    preset = raw.get("preset")
    has_modes = any(k in raw for k in ("s0_modes", "q_modes", "phi_modes"))
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"{path}preset: unknown preset {preset!r}; choose from {PRESETS}")
        if has_modes:
            raise ConfigError(f"{path}: give either a preset or explicit mode lists, not both")
        return InitialDataConfig(preset=preset)
    if not has_modes:
        raise ConfigError(f"{path}: need a preset or at least one mode list")
    return InitialDataConfig(
        preset=None,
        s0_modes=_parse_modes(raw.get("s0_modes", []), f"{path}s0_modes"),
        q_modes=_parse_modes(raw.get("q_modes", []), f"{path}q_modes"),
        phi_modes=_parse_modes(raw.get("phi_modes", []), f"{path}phi_modes"),
    )


def _parse_probe(raw, path) -> ProbeConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected an object")
    _reject_unknown(raw, {"taus", "bump_width", "bump_amplitude"}, path)
    default = ProbeConfig()
    taus = raw.get("taus")
    if taus is None:
        taus_t = default.taus
    else:
        if not isinstance(taus, list) or not taus:
            raise ConfigError(f"{path}taus: expected a nonempty list of numbers")
        vals = []
        for i, t in enumerate(taus):
            if isinstance(t, bool) or not isinstance(t, (int, float)) or float(t) < 0.0:
                raise ConfigError(f"{path}taus[{i}]: must be a nonnegative number")
            vals.append(float(t))
        taus_t = tuple(vals)
    return ProbeConfig(
        taus=taus_t,
        bump_width=_get_number(raw, "bump_width", path, default.bump_width, positive=True),
        bump_amplitude=_get_number(raw, "bump_amplitude", path, default.bump_amplitude),
    )


_TOP_KEYS = {
    "gamma",
    "grid",
    "epsilons",
    "horizon",
    "dt_rule",
    "dt_value",
    "qg_dt",
    "cadence",
    "initial_data",
    "hyperdiffusion",
    "out_dir",
    "seed",
    "snapshots_per_unit_time",
    "probe",
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON configuration (strict: unknown keys rejected)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(raw, dict):
        raise ConfigError("top level: expected a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "")
    defaults = ExperimentConfig()

    gamma = _get_number(raw, "gamma", "", defaults.gamma)
    if not (1.0 < gamma <= 3.0):
        raise ConfigError(f"gamma: must lie in (1, 3], got {gamma}")

    grid_raw = raw.get("grid", {})
    if not isinstance(grid_raw, dict):
        raise ConfigError("grid: expected an object")
    _reject_unknown(grid_raw, {"n", "L"}, "grid.")
    n = _get_int(grid_raw, "n", "grid.", defaults.grid.n, minimum=16)
    if n & (n - 1):
        raise ConfigError(f"grid.n: must be a power of two, got {n}")
    L = _get_number(grid_raw, "L", "grid.", defaults.grid.L, positive=True)

    eps_raw = raw.get("epsilons", list(defaults.epsilons))
    if not isinstance(eps_raw, list) or not eps_raw:
        raise ConfigError("epsilons: expected a nonempty list")
    epsilons = []
    for i, e in enumerate(eps_raw):
        if isinstance(e, bool) or not isinstance(e, (int, float)) or not float(e) > 0.0:
            raise ConfigError(f"epsilons[{i}]: must be a positive number, got {e!r}")
        epsilons.append(float(e))
    for i in range(1, len(epsilons)):
        if epsilons[i] >= epsilons[i - 1]:
            raise ConfigError(
                f"epsilons[{i}]: must be strictly decreasing "
                f"({epsilons[i]} follows {epsilons[i - 1]})"
            )

    dt_rule = raw.get("dt_rule", defaults.dt_rule)
    if dt_rule not in DT_RULES:
        raise ConfigError(f"dt_rule: expected one of {DT_RULES}, got {dt_rule!r}")

    out_dir = raw.get("out_dir", defaults.out_dir)
    if not isinstance(out_dir, str):
        raise ConfigError(f"out_dir: expected a string, got {out_dir!r}")

    cfg = ExperimentConfig(
        gamma=gamma,
        grid=GridConfig(n=n, L=L),
        epsilons=tuple(epsilons),
        horizon=_get_number(raw, "horizon", "", defaults.horizon, positive=True),
        dt_rule=dt_rule,
        dt_value=_get_number(raw, "dt_value", "", defaults.dt_value, positive=True),
        qg_dt=_get_number(raw, "qg_dt", "", defaults.qg_dt, positive=True),
        cadence=_get_number(raw, "cadence", "", defaults.cadence, positive=True),
        initial_data=_parse_initial_data(
            raw.get("initial_data", {"preset": defaults.initial_data.preset}),
            "initial_data.",
        ),
        hyperdiffusion=_get_number(
            raw, "hyperdiffusion", "", defaults.hyperdiffusion, nonnegative=True
        ),
        out_dir=out_dir,
        seed=_get_int(raw, "seed", "", defaults.seed, minimum=0),
        snapshots_per_unit_time=_get_number(
            raw, "snapshots_per_unit_time", "", defaults.snapshots_per_unit_time, nonnegative=True
        ),
        probe=_parse_probe(raw.get("probe", {}), "probe."),
    )
    return cfg


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Plain-JSON dictionary with every field explicit."""
    data = {
        "gamma": cfg.gamma,
        "grid": {"n": cfg.grid.n, "L": cfg.grid.L},
        "epsilons": list(cfg.epsilons),
        "horizon": cfg.horizon,
        "dt_rule": cfg.dt_rule,
        "dt_value": cfg.dt_value,
        "qg_dt": cfg.qg_dt,
        "cadence": cfg.cadence,
        "hyperdiffusion": cfg.hyperdiffusion,
        "out_dir": cfg.out_dir,
        "seed": cfg.seed,
        "snapshots_per_unit_time": cfg.snapshots_per_unit_time,
        "probe": {
            "taus": list(cfg.probe.taus),
            "bump_width": cfg.probe.bump_width,
            "bump_amplitude": cfg.probe.bump_amplitude,
        },
    }
    ini = cfg.initial_data
    if ini.preset is not None:
        data["initial_data"] = {"preset": ini.preset}
    else:
        data["initial_data"] = {
            "s0_modes": [vars(m) for m in ini.s0_modes],
            "q_modes": [vars(m) for m in ini.q_modes],
            "phi_modes": [vars(m) for m in ini.phi_modes],
        }
    return data


def emit_config(cfg: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
