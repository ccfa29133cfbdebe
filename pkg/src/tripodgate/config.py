"""Loading run configurations from JSON files and environment overrides.

Keys beginning with an underscore are comments and are ignored.  Any
config value can be overridden with an environment variable named
``TRIPODGATE_<SECTION>__<KEY>`` (``TRIPODGATE_<KEY>`` for top-level keys);
values are parsed as JSON when possible and as strings otherwise.
"""

from __future__ import annotations

import copy
import json
import os
from dataclasses import fields as dc_fields
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .params import AtomParams, Convention, FieldParams, MediumParams, SystemParams

ENV_PREFIX = "TRIPODGATE_"

SECTIONS = {
    "atom": ("delta1", "delta2", "delta3", "gamma_d"),
    "fields": tuple(f.name for f in dc_fields(FieldParams)),
    "medium": tuple(f.name for f in dc_fields(MediumParams)),
    "pulses": ("tau_p", "tau_t"),
}
TOP_LEVEL = ("convention", "seed", "gamma_si_rad_per_s")


def bundled_config_path(name: str = "paperV.json") -> Path:
    return Path(str(resources.files("tripodgate") / "data" / name))


def _strip_comments(d):
    if isinstance(d, dict):
        return {k: _strip_comments(v) for k, v in d.items() if not str(k).startswith("_")}
    return d


def validate_path(path: str) -> tuple[str, ...]:
    """Check a dotted parameter path such as ``atom.delta1`` against the schema."""
    parts = tuple(path.split("."))
    if len(parts) == 1 and parts[0] in TOP_LEVEL:
        return parts
    if len(parts) == 2 and parts[0] in SECTIONS and parts[1] in SECTIONS[parts[0]]:
        return parts
    raise ConfigError(f"unknown parameter path {path!r}")


def _validate(raw: dict) -> None:
    for key, val in raw.items():
        if key in SECTIONS:
            if not isinstance(val, dict):
                raise ConfigError(f"section {key!r} must be an object")
            for sub in val:
                validate_path(f"{key}.{sub}")
        elif key not in TOP_LEVEL:
            raise ConfigError(f"unknown config key {key!r}")


def _parse_env_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_env(raw: dict, environ=None) -> dict:
    environ = os.environ if environ is None else environ
    out = copy.deepcopy(raw)
    for name in sorted(environ):
        if not name.startswith(ENV_PREFIX):
            continue
        key = name[len(ENV_PREFIX):].lower()
        path = validate_path(key.replace("__", "."))
        value = _parse_env_value(environ[name])
        if len(path) == 1:
            out[path[0]] = value
        else:
            out.setdefault(path[0], {})[path[1]] = value
    return out


def set_value(raw: dict, path: str, value) -> dict:
    parts = validate_path(path)
    out = copy.deepcopy(raw)
    if len(parts) == 1:
        out[parts[0]] = value
    else:
        out.setdefault(parts[0], {})[parts[1]] = value
    return out


def build(raw: dict) -> SystemParams:
    """Turn a validated raw dictionary into :class:`SystemParams`."""
    _validate(raw)
    try:
        atom_kw = dict(raw.get("atom", {}))
        if "gamma_si_rad_per_s" in raw:
            atom_kw["gamma"] = float(raw["gamma_si_rad_per_s"])
        pulses = raw.get("pulses", {})
        seed = int(raw.get("seed", 0))
        if seed < 0:
            raise ConfigError("seed must be nonnegative")
        return SystemParams(
            atom=AtomParams(**{k: float(v) for k, v in atom_kw.items()}),
            fields=FieldParams(**raw.get("fields", {})),
            medium=MediumParams(**{k: (None if v is None else float(v))
                                   for k, v in raw.get("medium", {}).items()}),
            tau_p=float(pulses.get("tau_p", 5.0e-7)),
            tau_t=float(pulses.get("tau_t", 5.0e-7)),
            convention=Convention.parse(raw.get("convention", "gaussian")),
            seed=seed,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def read_raw(path: str | os.PathLike | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    return _strip_comments(raw)


def load_config(path=None, environ=None) -> tuple[SystemParams, dict]:
    raw = apply_env(read_raw(path), environ)
    return build(raw), raw
