"""Run configuration: a flat sectioned key = value format with strict
validation (unknown sections/keys are rejected by name, parse errors carry
line numbers). Defaults reproduce the helium cavity configuration; choosing
kind = two-site switches the model defaults to the dimer parameters.

Grammar (one statement per line):
    [section]
    key = value        # end-of-line comments with '#'
Values: numbers, true/false, or bare strings. Sections and keys are listed in
SCHEMA below.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import (HELIUM_1D, InteractionFlags, ModelSystem, TWO_SITE,
                     make_helium_model, make_two_site_model)

SOLVERS = ("exact", "dressed-ks", "standard-ks", "dressed-exact")
VARIANTS = ("mx", "smx", "sqrt-smx", "none", "mean-field")
SCHEMES = ("crank-nicolson", "strang", "krylov")


class ConfigError(ValueError):
    pass


def _boolean(s: str) -> bool:
    if s.lower() in ("true", "yes", "on", "1"):
        return True
    if s.lower() in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"expected a boolean, got {s!r}")


SCHEMA = {
    "model": {
        "kind": str, "omega": float, "lambda": float, "hopping": float,
        "include_w": _boolean, "include_quadratic": _boolean,
        "bilinear_scale": float, "tilde": _boolean,
    },
    "grids": {
        "x_min": float, "x_max": float, "x_n": int,
        "q_n": int, "q_half_width_factor": float,
        "p_n": int, "p_half_width_factor": float,
    },
    "propagation": {"scheme": str, "dt": float, "steps": int, "stride": int},
    "approximation": {"solver": str, "variant": str},
    "output": {"directory": str, "densities": _boolean, "currents": _boolean,
               "fluctuations": _boolean},
}

# helium cavity reproduction configuration is the default
DEFAULTS = {
    "model": {"kind": HELIUM_1D, "omega": 0.58037, "lambda": 0.1, "hopping": 0.5,
              "include_w": True, "include_quadratic": True,
              "bilinear_scale": 1.0, "tilde": False},
    "grids": {"x_min": -5.0, "x_max": 5.0, "x_n": 201,
              "q_n": 64, "q_half_width_factor": 8.0,
              "p_n": 64, "p_half_width_factor": 8.0},
    "propagation": {"scheme": "strang", "dt": 0.01, "steps": 12000, "stride": 20},
    "approximation": {"solver": "exact", "variant": "mx"},
    "output": {"directory": "runs/out", "densities": True, "currents": False,
               "fluctuations": True},
}

TWO_SITE_MODEL_DEFAULTS = {"omega": 1.0, "lambda": 0.01, "hopping": 0.5}


@dataclass
class RunConfig:
    sections: dict = field(default_factory=dict)

    def __getitem__(self, key):
        sec, _, name = key.partition(".")
        return self.sections[sec][name]

    def model(self) -> ModelSystem:
        m = self.sections["model"]
        flags = InteractionFlags(include_w=m["include_w"],
                                 include_quadratic=m["include_quadratic"],
                                 bilinear_scale=m["bilinear_scale"], tilde=m["tilde"])
        if m["kind"] == TWO_SITE:
            return make_two_site_model(m["hopping"], m["omega"], m["lambda"], flags)
        return make_helium_model(m["omega"], m["lambda"], flags)

    def as_flat_dict(self) -> dict:
        return {f"{s}.{k}": v for s, sec in self.sections.items() for k, v in sec.items()}


def _parse_lines(text: str):
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            yield lineno, "section", line[1:-1].strip(), None
        elif "=" in line:
            key, _, val = line.partition("=")
            yield lineno, "pair", key.strip(), val.strip()
        else:
            raise ConfigError(f"line {lineno}: expected '[section]' or 'key = value', got {raw!r}")


def parse_config(text: str, overrides: list[str] | None = None) -> RunConfig:
    """Parse and validate; overrides are 'section.key=value' strings."""
    raw: dict[str, dict[str, str]] = {}
    section = None
    for lineno, kind, a, b in _parse_lines(text):
        if kind == "section":
            if a not in SCHEMA:
                raise ConfigError(f"line {lineno}: unknown section [{a}]")
            section = a
            raw.setdefault(a, {})
        else:
            if section is None:
                raise ConfigError(f"line {lineno}: key {a!r} outside any section")
            if a not in SCHEMA[section]:
                raise ConfigError(f"line {lineno}: unknown key {a!r} in [{section}]")
            raw[section][a] = b

    for ov in overrides or []:
        key, _, val = ov.partition("=")
        if not _:
            raise ConfigError(f"override {ov!r} must look like section.key=value")
        sec, _, name = key.strip().partition(".")
        if sec not in SCHEMA or name not in SCHEMA[sec]:
            raise ConfigError(f"override names unknown key {key.strip()!r}")
        raw.setdefault(sec, {})[name] = val.strip()

    sections = {s: dict(vals) for s, vals in DEFAULTS.items()}
    if raw.get("model", {}).get("kind", "").strip() == TWO_SITE:
        sections["model"].update(TWO_SITE_MODEL_DEFAULTS)
    for sec, pairs in raw.items():
        for key, sval in pairs.items():
            conv = SCHEMA[sec][key]
            try:
                sections[sec][key] = conv(sval)
            except ConfigError:
                raise
            except ValueError:
                raise ConfigError(f"key {sec}.{key}: cannot parse {sval!r} as {conv.__name__}")

    _validate(sections)
    return RunConfig(sections)


def _validate(sections: dict):
    m = sections["model"]
    if m["kind"] not in (TWO_SITE, HELIUM_1D):
        raise ConfigError(f"key model.kind: unknown model kind {m['kind']!r}")
    if m["omega"] <= 0:
        raise ConfigError(f"key model.omega: must be positive, got {m['omega']}")
    g = sections["grids"]
    if g["x_n"] < 3 or g["q_n"] < 3 or g["p_n"] < 3:
        raise ConfigError("key grids.*_n: grids need at least 3 points")
    if g["x_max"] <= g["x_min"]:
        raise ConfigError("key grids.x_max: must exceed grids.x_min")
    if g["q_half_width_factor"] <= 0 or g["p_half_width_factor"] <= 0:
        raise ConfigError("key grids.*_half_width_factor: must be positive")
    p = sections["propagation"]
    if p["scheme"] not in SCHEMES:
        raise ConfigError(f"key propagation.scheme: unknown scheme {p['scheme']!r}")
    if p["dt"] <= 0 or p["steps"] < 0 or p["stride"] < 1:
        raise ConfigError("key propagation.*: dt>0, steps>=0, stride>=1 required")
    a = sections["approximation"]
    if a["solver"] not in SOLVERS:
        raise ConfigError(f"key approximation.solver: unknown solver {a['solver']!r}")
    if a["variant"] not in VARIANTS:
        raise ConfigError(f"key approximation.variant: unknown variant {a['variant']!r}")
    if a["solver"] == "standard-ks" and a["variant"] not in ("mx", "mean-field"):
        raise ConfigError("key approximation.variant: standard-ks supports mx or mean-field")
