"""Command-line driver: simulate, sweep, verify, info.

Exit codes: 0 success, 2 configuration error, 3 run stopped by a blow-up
rule (still a successful measurement), 4 verify-suite failure, 1 internal
error.  Diagnostics CSVs carry the fixed column set in a fixed order with
17-significant-digit floats, so identical configs produce byte-identical
files.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import __version__, kernels
from .config import ConfigError, RunConfig, parse_config
from .diagnostics import CSV_COLUMNS
from .euler import SolverConfig, Trajectory, integrate_euler
from .lagrangian import DiffeoMap, integrate_geodesic
from .spectral import PeriodicField, SymbolSpec, l2_norm

_BUILTIN_SYMBOLS = (
    ("bessel(s)", "(1+k^2)^s", "2s", "all modes"),
    ("helmholtz_power(k)", "(1+k^2)^k", "2k", "all modes"),
    ("clm", "|k|", "1", "mean-zero only"),
    ("derivative", "ik", "1", "mean-zero only"),
    ("hilbert", "-i sign(k)", "0", "mean-zero only"),
    ("identity", "1", "0", "all modes"),
)


def _fmt(x: float) -> str:
    if math.isnan(x):
        return ""
    return format(x, ".17g")


def write_diag_csv(path: Path, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(getattr(row, col)) for col in CSV_COLUMNS) + "\n")


def _symbol_echo(sym: SymbolSpec) -> dict:
    out = {"kind": sym.kind, "order": sym.order, "invertible_on": sym.invertible_on}
    if sym.param is not None:
        out["param"] = sym.param
    return out


def _traj_summary(traj: Trajectory) -> dict:
    return {
        "status": traj.status,
        "stop_time": traj.stop_time,
        "final_t": traj.rows[-1].t if traj.rows else None,
        "rows": len(traj.rows),
    }


def run_simulation(cfg: RunConfig):
    """Run the configured frames; returns (exit_code, file paths, summary)."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    u0 = cfg.initial_field()
    solver_cfg = cfg.solver_config()
    files = []
    summary = {
        "label": cfg.label,
        "grid_n": cfg.grid_n,
        "symbol": _symbol_echo(cfg.symbol),
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "dealias": cfg.dealias,
        "record_every": cfg.record_every,
        "frame": cfg.frame,
        "q_work": solver_cfg.q_work,
        "stop_rules": {
            "min_slope_floor": cfg.stop_rules.min_slope_floor,
            "norm_ceiling": cfg.stop_rules.norm_ceiling,
            "jacobian_floor": cfg.stop_rules.jacobian_floor,
        },
        "kernel_backend": kernels.BACKEND,
    }
    statuses = []

    if cfg.frame in ("eulerian", "both"):
        traj = integrate_euler(u0, solver_cfg)
        csv_path = cfg.output_dir / f"{cfg.label}_eulerian.csv"
        write_diag_csv(csv_path, traj.rows)
        files.append(csv_path)
        summary["eulerian"] = _traj_summary(traj)
        summary["eulerian"]["final_u"] = [float(v) for v in traj.states[-1].u.values]
        statuses.append(traj.status)
        euler_final = traj.states[-1]

    if cfg.frame in ("lagrangian", "both"):
        traj = integrate_geodesic(DiffeoMap.identity(cfg.grid()), u0, solver_cfg)
        csv_path = cfg.output_dir / f"{cfg.label}_lagrangian.csv"
        write_diag_csv(csv_path, traj.rows)
        files.append(csv_path)
        summary["lagrangian"] = _traj_summary(traj)
        last = traj.states[-1]
        summary["lagrangian"]["final_displacement"] = [float(v) for v in
                                                       last.phi.displacement.values]
        summary["lagrangian"]["final_v"] = [float(v) for v in last.v.values]
        statuses.append(traj.status)
        if cfg.frame == "both" and summary["eulerian"]["status"] == "completed" \
                and traj.status == "completed":
            from .lagrangian import compose, invert_diffeo
            u_lag = compose(last.v, invert_diffeo(last.phi))
            gap = l2_norm(PeriodicField(cfg.grid(),
                                        u_lag.values - euler_final.u.values))
            summary["frame_consistency_l2"] = gap

    json_path = cfg.output_dir / f"{cfg.label}_final.json"
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")
    files.append(json_path)
    return (0 if all(s == "completed" for s in statuses) else 3), files, summary


def cmd_simulate(args) -> int:
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        code, files, summary = run_simulation(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in files:
        print(f"wrote {path}")
    for frame in ("eulerian", "lagrangian"):
        if frame in summary:
            s = summary[frame]
            stop = "" if s["stop_time"] is None else f" at t={s['stop_time']:.6g}"
            print(f"{frame}: {s['status']}{stop}")
    if "frame_consistency_l2" in summary:
        print(f"frame consistency |u_euler - v o phi^-1|_L2 = "
              f"{summary['frame_consistency_l2']:.6e}")
    return code


def cmd_sweep(args) -> int:
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    name, _, values = args.param.partition("=")
    if name.strip() != "s":
        print("error: only --param s=<list> sweeps are supported", file=sys.stderr)
        return 2
    try:
        s_values = [float(v) for v in values.split(",") if v.strip()]
    except ValueError:
        print(f"error: cannot parse sweep values {values!r}", file=sys.stderr)
        return 2
    if not s_values:
        print("error: empty sweep list", file=sys.stderr)
        return 2

    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for s in s_values:
        try:
            child_cfg = SolverConfig(
                symbol=SymbolSpec.bessel(s),
                dt=cfg.dt,
                t_end=cfg.t_end,
                scheme=cfg.scheme,
                dealias=cfg.dealias,
                record_every=cfg.record_every,
                stop_rules=cfg.stop_rules,
            )
            traj = integrate_euler(cfg.initial_field(), child_cfg)
            drift = abs(traj.rows[-1].energy_A - traj.rows[0].energy_A) \
                / max(traj.rows[0].energy_A, 1e-300)
            rows.append((s, traj.status,
                         "" if traj.stop_time is None else _fmt(traj.stop_time),
                         _fmt(max(abs(r.min_ux) for r in traj.rows)),
                         _fmt(drift)))
        except Exception as exc:  # child failures are per-row data, not fatal
            rows.append((s, f"error:{exc}", "", "", ""))
    out_path = cfg.output_dir / f"{cfg.label}_sweep.csv"
    with open(out_path, "w", newline="") as fh:
        fh.write("s,status,stop_time,max_abs_min_ux,energy_drift\n")
        for s, status, stop, peak, drift in rows:
            fh.write(f"{_fmt(s)},{status},{stop},{peak},{drift}\n")
    print(f"wrote {out_path}")
    for s, status, stop, _, _ in rows:
        marker = f" stop_time={stop}" if stop else ""
        print(f"s={s:g}: {status}{marker}")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_verification

    fault = args.inject_fault or os.environ.get("CIRCLEFLOW_VERIFY_FAULT")
    results = run_verification(fault=fault)
    failed = [name for name, ok, _ in results if not ok]
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    if failed:
        print(f"{len(failed)} properties failed: {', '.join(failed)}", file=sys.stderr)
        return 4
    print(f"all {len(results)} properties passed")
    return 0


def cmd_info(args) -> int:
    print(f"circleflow {__version__}")
    print(f"kernel backend: {kernels.BACKEND}")
    print("builtin symbols:")
    for name, formula, order, dom in _BUILTIN_SYMBOLS:
        print(f"  {name:22s} a(k) = {formula:12s} order {order:3s} invertible on {dom}")
    print("defaults: scheme=rk4, dealias=two_thirds (cutoff n/3), record_every=1")
    print("stop rules: min_slope_floor=-50, norm_ceiling=1e6, jacobian_floor=0.05")
    print("working regularity: q_work = symbol order + 1")
    root = os.environ.get("CIRCLEFLOW_OUTPUT_ROOT")
    print(f"output root override: {root if root else '(not set)'}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="circleflow",
        description="Pseudospectral geodesic flow on circle diffeomorphisms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one configuration")
    p_sim.add_argument("config", help="path to a TOML run configuration")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="sweep the metric exponent s")
    p_sweep.add_argument("config", help="base configuration file")
    p_sweep.add_argument("--param", required=True, metavar="s=V1,V2,...",
                         help="sweep values, e.g. s=1,1.5,2,2.5")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("--inject-fault", choices=["symbol_table"],
                          help=argparse.SUPPRESS)
    p_verify.set_defaults(func=cmd_verify)

    p_info = sub.add_parser("info", help="print build, symbol table, defaults")
    p_info.set_defaults(func=cmd_info)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # pragma: no cover - internal error path
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
