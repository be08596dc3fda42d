"""
Run configuration: an INI file with sections, plus ``section.key=value``
overrides from the command line.

Example::

    [grid]
    n = 512
    length = 80.0

    [tolerances]
    exact = 1e-12

    [run]
    seed = 7
    suites = weyl, holonomy
"""
from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

from .lattice import GridSpec, PhysicalParams, SpinSpec, make_grid

DEFAULT_TOLERANCES = {
    "exact": 1e-12,     # pure phase identities, exact in the discretization
    "tight": 1e-10,     # compositions of several spectral transforms
    "spectral": 1e-8,   # spectrally approximated identities
    "fd": 1e-9,         # analytic oracle vs central finite differences
    "curve": 1e-7,      # finite-difference curve independence
    "fit": 1e-6,        # fitted slopes, variance laws, 3D angular momentum
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridConfig:
    dims: int
    n: int
    length: float

    def spec(self, hbar: float) -> GridSpec:
        return make_grid(self.dims, self.n, self.length, hbar)


@dataclass(frozen=True)
class RunConfig:
    grid: GridConfig = GridConfig(1, 512, 80.0)
    grid3d: GridConfig = GridConfig(3, 32, 12.0)
    spin: float = 0.5
    hbar: float = 1.0
    mass: float = 1.0
    e0: float = 0.0
    tolerances: Tuple[Tuple[str, float], ...] = tuple(sorted(DEFAULT_TOLERANCES.items()))
    seed: int = 0
    suites: Tuple[str, ...] = ("all",)
    n_states: int = 20
    # holonomy
    loop_dv: float = 0.1
    loop_da: float = 0.1
    mass_states: int = 10
    # localization
    focus_radius: float = 2.0
    focus_eps: Tuple[float, ...] = (1e-2, 1e-4, 1e-6)
    n_boxes: int = 10
    atom_separation_steps: int = 40
    # duality toy
    duality_dim: int = 8
    duality_directions: int = 10
    duality_seed: int = 0
    duality_step: float = 1e-5
    # dynamics
    t_max: float = 4.0
    n_steps: int = 16
    # output
    report: str = "report.json"
    csv_dir: Optional[str] = None

    def __post_init__(self):
        tol = dict(self.tolerances)
        for k, v in tol.items():
            if v < 0:
                raise ConfigError(f"tolerance {k} must be nonnegative")
        if self.n_states < 2 or self.mass_states < 2:
            raise ConfigError("need at least two random states")

    @property
    def tol(self) -> Dict[str, float]:
        return dict(self.tolerances)

    @property
    def params(self) -> PhysicalParams:
        return PhysicalParams(self.hbar, self.mass, self.e0)

    @property
    def spin_spec(self) -> SpinSpec:
        return SpinSpec(self.spin)

    def line_grid(self) -> GridSpec:
        return self.grid.spec(self.hbar)

    def cube_grid(self) -> GridSpec:
        return self.grid3d.spec(self.hbar)

    def echo(self) -> dict:
        """Plain-data view for the report header (output paths excluded)."""
        out = {}
        for f in dataclasses.fields(self):
            if f.name in ("report", "csv_dir"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, GridConfig):
                v = dataclasses.asdict(v)
            elif f.name == "tolerances":
                v = dict(v)
            elif isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out


# INI section.key -> RunConfig field
_KEYMAP = {
    ("grid", "n"): "grid.n",
    ("grid", "length"): "grid.length",
    ("grid3d", "n"): "grid3d.n",
    ("grid3d", "length"): "grid3d.length",
    ("spin", "s"): "spin",
    ("physics", "hbar"): "hbar",
    ("physics", "mass"): "mass",
    ("physics", "e0"): "e0",
    ("run", "seed"): "seed",
    ("run", "suites"): "suites",
    ("run", "states"): "n_states",
    ("holonomy", "dv"): "loop_dv",
    ("holonomy", "da"): "loop_da",
    ("holonomy", "states"): "mass_states",
    ("localization", "focus_radius"): "focus_radius",
    ("localization", "eps"): "focus_eps",
    ("localization", "boxes"): "n_boxes",
    ("localization", "atom_separation_steps"): "atom_separation_steps",
    ("duality", "dim"): "duality_dim",
    ("duality", "directions"): "duality_directions",
    ("duality", "seed"): "duality_seed",
    ("duality", "step"): "duality_step",
    ("dynamics", "t_max"): "t_max",
    ("dynamics", "steps"): "n_steps",
    ("output", "report"): "report",
    ("output", "csv_dir"): "csv_dir",
}


def _split_list(value: str) -> list:
    return [v.strip() for v in value.replace(";", ",").split(",") if v.strip()]


def _apply(values: dict, section: str, key: str, raw: str) -> None:
    section, key = section.strip().lower(), key.strip().lower()
    if section == "tolerances":
        tol = dict(values.get("tolerances", DEFAULT_TOLERANCES))
        if key == "all":
            tol = {k: float(raw) for k in tol}
        elif key not in tol:
            raise ConfigError(f"unknown tolerance {key!r}; known: {sorted(tol)}")
        else:
            tol[key] = float(raw)
        values["tolerances"] = tol
        return
    target = _KEYMAP.get((section, key))
    if target is None:
        raise ConfigError(f"unknown config key {section}.{key}")
    if target.startswith(("grid.", "grid3d.")):
        gname, attr = target.split(".")
        base = values.get(gname, getattr(RunConfig, gname))
        conv = int if attr == "n" else float
        values[gname] = dataclasses.replace(base, **{attr: conv(raw)})
        return
    ftype = {f.name: f.type for f in dataclasses.fields(RunConfig)}[target]
    if target == "suites":
        values[target] = tuple(_split_list(raw)) or ("all",)
    elif target == "focus_eps":
        values[target] = tuple(float(v) for v in _split_list(raw))
    elif target in ("report", "csv_dir"):
        values[target] = raw.strip() or None
    elif "int" in str(ftype):
        values[target] = int(raw)
    else:
        values[target] = float(raw)


def load_config(path=None, overrides: Sequence[str] = (), **direct) -> RunConfig:
    """Read an INI file (optional), then apply ``section.key=value`` overrides."""
    values: dict = {}
    if path is not None:
        parser = configparser.ConfigParser()
        text = Path(path).read_text()
        try:
            parser.read_string(text, source=str(path))
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        for section in parser.sections():
            for key, raw in parser.items(section):
                _apply(values, section, key, raw)
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        lhs, raw = item.split("=", 1)
        section, key = lhs.split(".", 1)
        _apply(values, section, key, raw)
    values.update({k: v for k, v in direct.items() if v is not None})
    if "tolerances" in values and isinstance(values["tolerances"], dict):
        values["tolerances"] = tuple(sorted(values["tolerances"].items()))
    try:
        cfg = RunConfig(**values)
        cfg.line_grid(), cfg.cube_grid(), cfg.params, cfg.spin_spec
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.line_grid().dims != 1 or cfg.cube_grid().dims != 3:
        raise ConfigError("grid must be 1D and grid3d must be 3D")
    return cfg


def default_config_text() -> str:
    """The shipped default profile as INI text."""
    cfg = RunConfig()
    tol = "\n".join(f"{k} = {v!r}" for k, v in sorted(DEFAULT_TOLERANCES.items()))
    return f"""[grid]
n = {cfg.grid.n}
length = {cfg.grid.length}

[grid3d]
n = {cfg.grid3d.n}
length = {cfg.grid3d.length}

[spin]
s = {cfg.spin}

[physics]
hbar = {cfg.hbar}
mass = {cfg.mass}
e0 = {cfg.e0}

[tolerances]
{tol}

[run]
seed = {cfg.seed}
suites = all
states = {cfg.n_states}

[holonomy]
dv = {cfg.loop_dv}
da = {cfg.loop_da}
states = {cfg.mass_states}

[localization]
focus_radius = {cfg.focus_radius}
eps = {", ".join(repr(e) for e in cfg.focus_eps)}
boxes = {cfg.n_boxes}
atom_separation_steps = {cfg.atom_separation_steps}

[duality]
dim = {cfg.duality_dim}
directions = {cfg.duality_directions}
seed = {cfg.duality_seed}
step = {cfg.duality_step}

[dynamics]
t_max = {cfg.t_max}
steps = {cfg.n_steps}

[output]
report = {cfg.report}
csv_dir =
"""
