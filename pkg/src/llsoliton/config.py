"""Flat key-value experiment configuration.

Files are plain text, one ``dotted.key = value`` per line, ``#`` comments.
Every key must appear in the schema below; unknown keys are rejected so a
typo cannot silently fall back to a default.  The canonical rendering
(sorted, fully resolved) is what gets hashed for reproducibility checks.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field


class ConfigError(ValueError):
    """Malformed, unknown, or invalid configuration entry."""


def _parse_bool(s: str) -> bool:
    t = s.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"not a boolean: {s!r}")


def _parse_float_list(s: str):
    s = s.strip()
    if not s:
        return []
    return [float(tok) for tok in s.split(",")]


_PARSERS = {
    "int": int,
    "float": float,
    "str": str.strip,
    "bool": _parse_bool,
    "float_list": _parse_float_list,
}

# key -> (type, default)
SCHEMA: dict[str, tuple[str, object]] = {
    "experiment": ("str", "simulate"),
    "grid.half_length": ("float", 40.0),
    "grid.points": ("int", 1024),
    "physics.c": ("float", 0.8),
    "physics.formulation": ("str", "hll"),          # hll | spin | psi | all
    "physics.perturbation.kind": ("str", "none"),   # none | bump | random
    "physics.perturbation.amplitude": ("float", 0.0),
    "physics.perturbation.width": ("float", 0.0),   # 0 -> kind default
    "physics.perturbation.seed": ("int", -1),       # mandatory for random
    "integrator.dt": ("float", 1e-3),
    "integrator.t_final": ("float", 10.0),
    "integrator.snapshot_stride": ("int", 50),
    "integrator.sigma_guard": ("float", 0.05),
    "diagnostics.r_grid": ("float_list", [5.0, 10.0, 15.0]),
    "diagnostics.sigma_grid": ("float_list", [0.0]),
    "diagnostics.nu": ("float", 0.0),               # 0 -> sqrt(1-c^2)/8
    "diagnostics.k_max": ("int", 3),
    "modulation.entry_radius": ("float", 0.3),
    "modulation.interp_width": ("float", 0.08),
    "spectrum.auto_grid": ("bool", True),
    "spectrum.run_edge": ("bool", False),
    "spectrum.edge_half_length": ("float", 80.0),
    "spectrum.edge_points": ("int", 1024),
    "spectrum.n_random_fields": ("int", 5),
    "virial.a_star": ("float", 1.0),
    "virial.b_star": ("float", 1.0),
    "virial.r_star": ("float", 1.0),
    "sweep.c_list": ("float_list", [0.3, 0.6, 0.9]),
    "sweep.experiment": ("str", "spectrum"),
}

_EXPERIMENTS = ("simulate", "spectrum", "modulate", "monotonicity", "virial",
                "phase", "sweep")


@dataclass
class ExperimentConfig:
    values: dict = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[key]

    def get(self, key: str):
        return self.values[key]

    @property
    def experiment(self) -> str:
        return self.values["experiment"]

    def canonical(self) -> str:
        lines = []
        for key in sorted(self.values):
            val = self.values[key]
            if isinstance(val, list):
                rendered = ",".join(repr(float(x)) for x in val)
            elif isinstance(val, bool):
                rendered = "true" if val else "false"
            elif isinstance(val, float):
                rendered = repr(val)
            else:
                rendered = str(val)
            lines.append(f"{key} = {rendered}")
        return "\n".join(lines) + "\n"

    def hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    def replace(self, **entries) -> "ExperimentConfig":
        vals = dict(self.values)
        for key, val in entries.items():
            if key not in SCHEMA:
                raise ConfigError(f"unknown configuration key: {key}")
            vals[key] = val
        return ExperimentConfig(vals)


def _coerce(key: str, raw: str):
    if key not in SCHEMA:
        raise ConfigError(f"unknown configuration key: {key}")
    kind, _ = SCHEMA[key]
    try:
        return _PARSERS[kind](raw)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        key = key.strip()
        out[key] = _coerce(key, raw)
    return out


def load_config(path: str | None = None, overrides: list[str] | None = None,
                seed: int | None = None, experiment: str | None = None) -> ExperimentConfig:
    """Defaults, then the file, then --override entries, then the CLI seed."""
    values = {key: default for key, (_, default) in SCHEMA.items()}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}")
        key, raw = item.split("=", 1)
        values[key.strip()] = _coerce(key.strip(), raw)
    if seed is not None:
        values["physics.perturbation.seed"] = int(seed)
    if experiment is not None:
        values["experiment"] = experiment
    cfg = ExperimentConfig(values)
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig):
    v = cfg.values
    if v["experiment"] not in _EXPERIMENTS:
        raise ConfigError(f"experiment: unknown name {v['experiment']!r}")
    if v["grid.points"] <= 0 or v["grid.points"] % 2 != 0:
        raise ConfigError("grid.points: must be a positive even integer")
    if v["grid.half_length"] <= 0:
        raise ConfigError("grid.half_length: must be positive")
    c = v["physics.c"]
    if v["experiment"] != "sweep" and not (0.0 < abs(c) < 1.0):
        raise ConfigError(f"physics.c: must satisfy 0 < |c| < 1, got {c}")
    if v["physics.formulation"] not in ("hll", "spin", "psi", "all"):
        raise ConfigError(f"physics.formulation: unknown {v['physics.formulation']!r}")
    kind = v["physics.perturbation.kind"]
    if kind not in ("none", "bump", "random"):
        raise ConfigError(f"physics.perturbation.kind: unknown {kind!r}")
    if kind == "random" and v["physics.perturbation.seed"] < 0:
        raise ConfigError("physics.perturbation.seed: a seed is mandatory for random perturbations")
    if v["integrator.dt"] == 0.0:
        raise ConfigError("integrator.dt: must be non-zero")
    if not (0.0 < v["integrator.sigma_guard"] < 1.0):
        raise ConfigError("integrator.sigma_guard: must lie in (0, 1)")
    if v["integrator.snapshot_stride"] <= 0:
        raise ConfigError("integrator.snapshot_stride: must be positive")
    if v["experiment"] == "sweep" and v["sweep.experiment"] == "sweep":
        raise ConfigError("sweep.experiment: nested sweeps are not supported")
