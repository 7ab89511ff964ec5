"""Flat ``key = value`` configuration files.

Model keys select a preset and its parameters; scenario keys describe a
simulation run. Any other key is rejected.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, RDStabError
from .model import ModelSpec, preset_fitzhugh_nagumo, preset_lengyel_epstein

PRESET_KEYS = {
    "lengyel_epstein": ("a", "mu", "lambda", "sigma", "d1", "d2"),
    "fitzhugh_nagumo": ("beta", "eps", "gamma", "stim", "d1", "d2"),
}
MODEL_KEYS = {"preset"} | {k for keys in PRESET_KEYS.values() for k in keys}

# key -> (type, default)
SCENARIO_KEYS = {
    "mode": (str, "pde"),
    "L": (float, 100.0),
    "n": (int, 256),
    "t_end": (float, 400.0),
    "dt_out": (float, 1.0),
    "init": (str, "sine"),
    "u0": (float, None),
    "v0": (float, None),
    "amp": (float, 0.2),
    "wavelen": (float, 5.0),
    "modes": (int, 200),
    "seed": (int, 0),
}

# starting points of the reference runs
DEFAULT_START = {"lengyel_epstein": (4.0, 3.0), "fitzhugh_nagumo": (0.5, 1.2)}


def parse_kv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _number(key: str, value: str, kind=float):
    try:
        x = kind(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as {kind.__name__}") from None
    if kind is float and not math.isfinite(x):
        raise ConfigError(f"{key}: value must be finite")
    return x


def model_from_items(items: dict[str, str]) -> ModelSpec:
    """Build a ModelSpec from parsed model keys (scenario keys must already be removed)."""
    if "preset" not in items:
        raise ConfigError("missing required key 'preset'")
    preset = items["preset"]
    if preset not in PRESET_KEYS:
        raise ConfigError(f"unknown preset {preset!r}; expected one of {sorted(PRESET_KEYS)}")
    allowed = set(PRESET_KEYS[preset]) | {"preset"}
    unknown = sorted(set(items) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) for preset {preset!r}: {', '.join(unknown)}")
    kw = {k: _number(k, v) for k, v in items.items() if k != "preset"}
    if "lambda" in kw:
        kw["lam"] = kw.pop("lambda")
    try:
        if preset == "lengyel_epstein":
            if "a" not in kw:
                raise ConfigError("lengyel_epstein needs key 'a'")
            return preset_lengyel_epstein(**kw)
        missing = [k for k in ("beta", "eps", "gamma", "stim") if k not in kw]
        if missing:
            raise ConfigError(f"fitzhugh_nagumo needs key(s) {', '.join(missing)}")
        return preset_fitzhugh_nagumo(**kw)
    except ConfigError:
        raise
    except RDStabError as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from exc


def load_model(path) -> ModelSpec:
    """Load a model-only config file; scenario keys count as unknown here."""
    return model_from_items(parse_kv(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class RunConfig:
    model: ModelSpec
    model_items: dict
    scenario: dict
    text: str = ""
    path: str | None = None

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()

    def start(self) -> tuple[float, float]:
        u0, v0 = self.scenario["u0"], self.scenario["v0"]
        du, dv = DEFAULT_START.get(self.model_items["preset"], (None, None))
        return (du if u0 is None else u0), (dv if v0 is None else v0)

    def with_model(self, **params) -> "RunConfig":
        items = dict(self.model_items)
        items.update({k: repr(float(v)) for k, v in params.items()})
        return RunConfig(model_from_items(items), items, self.scenario, self.text, self.path)


def run_config_from_text(text: str, path: str | None = None) -> RunConfig:
    items = parse_kv(text)
    model_items = {k: v for k, v in items.items() if k in MODEL_KEYS}
    scen_items = {k: v for k, v in items.items() if k in SCENARIO_KEYS}
    unknown = sorted(set(items) - set(model_items) - set(scen_items))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    scenario = {}
    for key, (kind, default) in SCENARIO_KEYS.items():
        if key in scen_items:
            scenario[key] = scen_items[key] if kind is str else _number(key, scen_items[key], kind)
        else:
            scenario[key] = default
    if scenario["mode"] not in ("ode", "pde"):
        raise ConfigError("mode must be 'ode' or 'pde'")
    if scenario["init"] not in ("sine", "constant"):
        raise ConfigError("init must be 'sine' or 'constant'")
    return RunConfig(model_from_items(model_items), model_items, scenario, text, path)


def load_run_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return run_config_from_text(text, str(p))
