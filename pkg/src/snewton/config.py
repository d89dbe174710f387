"""Scenario configuration: defaults, schema validation and hashing.

Configs are YAML (plain JSON is valid YAML too). Unknown keys are rejected.
The fully resolved config, defaults included, is what gets echoed into each
run directory and hashed.
"""

import copy
import hashlib
import json
from pathlib import Path

import jsonschema
import yaml

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_posint = {"type": "integer", "minimum": 1}
_vec3 = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}
_grid = {
    "type": "object",
    "additionalProperties": False,
    "required": ["n", "h"],
    "properties": {"n": {"type": "integer", "minimum": 8}, "h": _pos},
}


def _obj(props, required=()):
    return {"type": "object", "additionalProperties": False, "properties": props, "required": list(required)}


SCHEMA = _obj(
    {
        "dimensionless": {"type": "boolean"},
        "physical": {
            "oneOf": [
                {"type": "null"},
                _obj({"hbar": _pos, "G": _pos, "M": _pos, "R": _pos, "rho": _pos}, ["M"]),
            ]
        },
        "grid": _grid,
        "kernel": _obj(
            {
                "variant": {"enum": ["newtonian", "sphere", "harmonic_sphere", "none"]},
                "R": {"oneOf": [{"type": "null"}, _pos]},
                "strength": _num,
            },
            ["variant"],
        ),
        "solver": _obj(
            {
                "tol": _pos,
                "max_iter": _posint,
                "dtau": {"oneOf": [{"type": "null"}, _pos]},
                "init_scale": _pos,
                "check_oracle": {"type": "boolean"},
            }
        ),
        "oracle": _obj({"rmax": _pos, "npoints": _posint}),
        "evolve": _obj(
            {
                "dt": _pos,
                "steps": {"type": "integer", "minimum": 0},
                "snapshot_stride": {"type": "integer", "minimum": 0},
                "monitor_stride": _posint,
                "init": {"enum": ["ground_state", "gaussian"]},
                "sigma": {"oneOf": [{"type": "null"}, _pos]},
                "v_quanta": _vec3,
                "max_norm_drift": _pos,
                "max_energy_drift": _pos,
                "max_momentum_drift": _pos,
            }
        ),
        "sweep_mass": _obj({"masses": {"type": "array", "items": _pos, "minItems": 1}}),
        "sweep_radius": _obj(
            {
                "radii": {"type": "array", "items": _pos, "minItems": 1},
                "n": {"type": "integer", "minimum": 8},
                "h_over_sigma": _pos,
                "init_scale": _pos,
                "max_width_over_R": _pos,
            }
        ),
        "critical_size": _obj({"rho": _pos}),
        "two_soliton": _obj(
            {
                "separations_widths": {"type": "array", "items": _pos, "minItems": 1},
                "axis": {"enum": [0, 1, 2]},
                "ground_grid": _grid,
                "n": {"type": "integer", "minimum": 8},
                "dt": _pos,
                "t_end": _pos,
                "monitor_stride": _posint,
                "tolerance": _pos,
                "trend_tolerance": _pos,
            }
        ),
        "boost_check": _obj(
            {
                "v_quanta": _vec3,
                "r": _vec3,
                "dt": _pos,
                "steps": _posint,
                "tolerance": _pos,
            }
        ),
        "separability": _obj(
            {
                "separations_widths": {"type": "array", "items": _pos, "minItems": 1},
                "mA": {"type": "number", "minimum": 0},
                "mB": {"type": "number", "minimum": 0},
                "tolerance_const": _pos,
                "tolerance_point": _pos,
            }
        ),
    }
)

DEFAULTS = {
    "dimensionless": True,
    "physical": None,
    "grid": {"n": 64, "h": 1.0},
    "kernel": {"variant": "newtonian", "R": None, "strength": 1.0},
    "solver": {"tol": 1e-8, "max_iter": 50_000, "dtau": None, "init_scale": 1.0, "check_oracle": True},
    "oracle": {"rmax": 60.0, "npoints": 12_000},
    "evolve": {
        "dt": 0.01,
        "steps": 1000,
        "snapshot_stride": 0,
        "monitor_stride": 10,
        "init": "ground_state",
        "sigma": None,
        "v_quanta": [0, 0, 0],
        "max_norm_drift": 1e-10,
        "max_energy_drift": 1e-6,
        "max_momentum_drift": 1e-8,
    },
    "sweep_mass": {"masses": [1e-3, 1e-2, 1e-1, 1.0, 10.0]},
    "sweep_radius": {
        "radii": [1e4, 1e5, 1e6, 1e7, 1e8],
        "n": 32,
        "h_over_sigma": 0.6,
        "init_scale": 1.3,
        "max_width_over_R": 0.2,
    },
    "critical_size": {"rho": 1.0},
    "two_soliton": {
        "separations_widths": [10, 20],
        "axis": 0,
        "ground_grid": {"n": 64, "h": 1.0},
        "n": 128,
        "dt": 0.1,
        "t_end": 20.0,
        "monitor_stride": 10,
        "tolerance": 0.2,
        "trend_tolerance": 0.25,
    },
    "boost_check": {"v_quanta": [1, 0, 0], "r": [0.0, 0.0, 0.0], "dt": 0.01, "steps": 100, "tolerance": 1e-6},
    "separability": {
        "separations_widths": [20, 40, 80],
        "mA": 0.5,
        "mB": 0.5,
        "tolerance_const": 0.05,
        "tolerance_point": 0.01,
    },
}


class ConfigError(ValueError):
    """The scenario document failed validation."""


def _merge(base, override):
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def validate(cfg: dict) -> dict:
    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    n = cfg["grid"]["n"]
    if n & (n - 1):
        raise ConfigError(f"grid/n: {n} is not a power of two")
    if cfg["kernel"]["variant"] in ("sphere", "harmonic_sphere") and not cfg["kernel"].get("R"):
        raise ConfigError(f"kernel/R: required for variant {cfg['kernel']['variant']}")
    if cfg["physical"] is not None and cfg["dimensionless"]:
        raise ConfigError("physical block given but dimensionless is true")
    return cfg


def resolve(user: dict = None) -> dict:
    """Merge ``user`` over the defaults and validate the result."""
    user = user or {}
    if not isinstance(user, dict):
        raise ConfigError("config document must be a mapping")
    # catch unknown keys before defaults mask them
    try:
        jsonschema.validate(user, {**SCHEMA, "required": []})
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    cfg = _merge(DEFAULTS, user)
    if user.get("physical") and "dimensionless" not in user:
        cfg["dimensionless"] = False
    return validate(cfg)


def load(path) -> dict:
    text = Path(path).read_text()
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return resolve(doc or {})


def canonical_json(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True, indent=2, allow_nan=False)


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(canonical_json(cfg).encode()).hexdigest()
