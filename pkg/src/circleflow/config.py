"""Run configuration: TOML file schema, validation, defaults.

Schema (all sections optional unless noted):

    [grid]
    n = 256                      # even, >= 8

    [symbol]                     # required
    kind = "bessel"              # bessel | helmholtz_power | clm | identity
    s = 2.0                      # bessel exponent (kind = bessel)
    k = 2                        # integer power (kind = helmholtz_power)

    [solver]                     # dt and t_end required
    dt = 1e-3
    t_end = 5.0
    scheme = "rk4"
    dealias = "two_thirds"       # or "none"
    record_every = 10
    frame = "eulerian"           # eulerian | lagrangian | both

    [solver.stop_rules]
    min_slope_floor = -50.0
    norm_ceiling = 1e6
    jacobian_floor = 0.05

    [initial_condition]          # required
    modes = [[1, 1.0, 0.0]]      # rows of (mode k, cos amplitude, sin amplitude)

    [output]
    directory = "runs"
    label = "run"

The CIRCLEFLOW_OUTPUT_ROOT environment variable, when set, is prepended to
relative output directories.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .euler import SolverConfig, StopRules
from .spectral import Grid, PeriodicField, SymbolSpec, field_from_modes


class ConfigError(ValueError):
    """Invalid or missing configuration field; maps to exit code 2."""


@dataclass
class RunConfig:
    grid_n: int
    symbol: SymbolSpec
    dt: float
    t_end: float
    scheme: str
    dealias: str
    record_every: int
    stop_rules: StopRules
    frame: str
    initial_condition: List[Tuple[int, float, float]]
    output_dir: Path
    label: str

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            symbol=self.symbol,
            dt=self.dt,
            t_end=self.t_end,
            scheme=self.scheme,
            dealias=self.dealias,
            record_every=self.record_every,
            stop_rules=self.stop_rules,
        )

    def grid(self) -> Grid:
        return Grid(self.grid_n)

    def initial_field(self) -> PeriodicField:
        return field_from_modes(self.grid(), self.initial_condition)


def _require(table: dict, section: str, key: str):
    if key not in table:
        raise ConfigError(f"missing field [{section}] {key}")
    return table[key]


def _number(table: dict, section: str, key: str, default=None):
    if key not in table:
        if default is None:
            raise ConfigError(f"missing field [{section}] {key}")
        return default
    val = table[key]
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"field [{section}] {key} must be a number")
    return val


def _symbol_from_table(tbl: dict) -> SymbolSpec:
    kind = _require(tbl, "symbol", "kind")
    try:
        if kind == "bessel":
            return SymbolSpec.bessel(_number(tbl, "symbol", "s"))
        if kind == "helmholtz_power":
            return SymbolSpec.helmholtz_power(int(_number(tbl, "symbol", "k")))
        if kind == "clm":
            return SymbolSpec.clm()
        if kind == "identity":
            return SymbolSpec.identity()
    except ValueError as exc:
        raise ConfigError(f"field [symbol]: {exc}") from exc
    raise ConfigError(f"field [symbol] kind must be one of "
                      f"bessel, helmholtz_power, clm, identity (got {kind!r})")


def parse_config(path) -> RunConfig:
    """Load, validate, and default a run configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config syntax error: {exc}") from exc

    grid_tbl = raw.get("grid", {})
    n = int(_number(grid_tbl, "grid", "n", default=256))
    if n < 8 or n % 2 != 0:
        raise ConfigError("field [grid] n must be even and >= 8")

    symbol = _symbol_from_table(raw.get("symbol", {}))

    solver_tbl = raw.get("solver", {})
    dt = float(_number(solver_tbl, "solver", "dt"))
    t_end = float(_number(solver_tbl, "solver", "t_end"))
    scheme = solver_tbl.get("scheme", "rk4")
    dealias_rule = solver_tbl.get("dealias", "two_thirds")
    record_every = int(_number(solver_tbl, "solver", "record_every", default=1))
    frame = solver_tbl.get("frame", "eulerian")
    if frame not in ("eulerian", "lagrangian", "both"):
        raise ConfigError("field [solver] frame must be eulerian, lagrangian, or both")

    rules_tbl = solver_tbl.get("stop_rules", {})
    try:
        rules = StopRules(
            min_slope_floor=float(_number(rules_tbl, "solver.stop_rules",
                                          "min_slope_floor", default=-50.0)),
            norm_ceiling=float(_number(rules_tbl, "solver.stop_rules",
                                       "norm_ceiling", default=1e6)),
            jacobian_floor=float(_number(rules_tbl, "solver.stop_rules",
                                         "jacobian_floor", default=0.05)),
        )
    except ValueError as exc:
        raise ConfigError(f"field [solver.stop_rules]: {exc}") from exc

    ic_tbl = raw.get("initial_condition", {})
    rows = _require(ic_tbl, "initial_condition", "modes")
    if not isinstance(rows, list) or not rows:
        raise ConfigError("field [initial_condition] modes must be a nonempty list")
    modes: List[Tuple[int, float, float]] = []
    for row in rows:
        if not isinstance(row, list) or len(row) != 3:
            raise ConfigError(
                "field [initial_condition] modes rows must be [mode, cos_amp, sin_amp]")
        k, ca, sa = int(row[0]), float(row[1]), float(row[2])
        if k < 0:
            raise ConfigError("field [initial_condition] modes: mode must be >= 0")
        if k > n // 3:
            raise ConfigError("mode exceeds dealias band")
        if not (abs(ca) < float("inf") and abs(sa) < float("inf")):
            raise ConfigError("field [initial_condition] modes: amplitudes must be finite")
        modes.append((k, ca, sa))

    if symbol.invertible_on == "mean_zero_only":
        mean_amp = sum(ca for k, ca, sa in modes if k == 0)
        if mean_amp != 0.0:
            raise ConfigError("zero mode not invertible")

    out_tbl = raw.get("output", {})
    out_dir = Path(out_tbl.get("directory", "runs"))
    root = os.environ.get("CIRCLEFLOW_OUTPUT_ROOT")
    if root and not out_dir.is_absolute():
        out_dir = Path(root) / out_dir
    label = str(out_tbl.get("label", path.stem))

    try:
        cfg = RunConfig(
            grid_n=n,
            symbol=symbol,
            dt=dt,
            t_end=t_end,
            scheme=scheme,
            dealias=dealias_rule,
            record_every=record_every,
            stop_rules=rules,
            frame=frame,
            initial_condition=modes,
            output_dir=out_dir,
            label=label,
        )
        cfg.solver_config()  # validates dt/t_end/scheme/dealias consistency
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"field [solver]: {exc}") from exc
    return cfg
