"""Command-line front end.

Subcommands: test, ci, oracle, grid, simulate. Exit codes: 0 success
(regardless of statistical decision), 2 data or parameter errors, 3 method
statistically inapplicable (degenerate split, separation, singularity).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from ._kernels import set_threads
from .bootstrap import (
    ci_bonf_normal,
    ci_bonf_quantile,
    ci_gkl,
    ci_mandel_betensky,
    ci_mvn,
    range_preserve,
    resample_effects,
)
from .distributions import RngStream, parse_dist
from .effects import point_estimates
from .errors import (
    DataError,
    JointEffectError,
    MethodInapplicableError,
    ParameterError,
)
from .inference import adjusted_joint_test, cvm_test, ks_test, new_joint_test, wmw_test
from .oracle import asymptotic_cov, exact_functionals, functional_grid, grid_axis
from .simlab import SETTINGS, ExperimentConfig, run_coverage, run_power, run_type1

_TESTS = {
    "new": new_joint_test,
    "adjusted": adjusted_joint_test,
    "wmw": wmw_test,
    "ks": ks_test,
    "cvm": cvm_test,
}

_CI_METHODS = {
    "mvn": ci_mvn,
    "bonf-quantile": ci_bonf_quantile,
    "bonf-normal": ci_bonf_normal,
    "mb": ci_mandel_betensky,
    "gkl": ci_gkl,
}


def _sig6(v: float) -> str:
    return format(v, ".6g")


def read_values(path: str) -> np.ndarray:
    """One numeric value per line; blank lines and '#' comments allowed."""
    values = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise DataError(f"{path}:{lineno}: not a number: {line!r}") from None
    if not values:
        raise DataError(f"{path}: no numeric values found")
    return np.asarray(values)


def read_grouped_csv(path: str, group_col: str, value_col: str) -> tuple[np.ndarray, np.ndarray]:
    """Two-column CSV; the two group labels sort to (x, y)."""
    groups: dict[str, list[float]] = {}
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or group_col not in reader.fieldnames or value_col not in reader.fieldnames:
            raise DataError(f"{path}: need columns {group_col!r} and {value_col!r}")
        for lineno, row in enumerate(reader, start=2):
            g = (row[group_col] or "").strip()
            v = (row[value_col] or "").strip()
            if not g:
                raise DataError(f"{path}:{lineno}: empty group label")
            try:
                groups.setdefault(g, []).append(float(v))
            except ValueError:
                raise DataError(f"{path}:{lineno}: not a number: {v!r}") from None
    if len(groups) != 2:
        raise DataError(f"{path}: expected exactly 2 groups, found {sorted(groups)}")
    (gx, vx), (gy, vy) = sorted(groups.items())
    return np.asarray(vx), np.asarray(vy)


def _load_xy(args) -> tuple[np.ndarray, np.ndarray]:
    if getattr(args, "data", None):
        return read_grouped_csv(args.data, args.group_col, args.value_col)
    if not args.x or not args.y:
        raise DataError("provide --x and --y files, or --data with --group-col/--value-col")
    return read_values(args.x), read_values(args.y)


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
        return
    for key, value in payload.items():
        if isinstance(value, float):
            print(f"{key}: {_sig6(value)}")
        elif isinstance(value, (list, tuple)) and all(isinstance(v, float) for v in value):
            print(f"{key}: [" + ", ".join(_sig6(v) for v in value) + "]")
        elif isinstance(value, dict):
            inner = ", ".join(
                f"{k}={_sig6(v)}" if isinstance(v, float) else f"{k}={v}" for k, v in value.items()
            )
            print(f"{key}: {inner}")
        else:
            print(f"{key}: {value}")


def cmd_test(args) -> int:
    x, y = _load_xy(args)
    report = _TESTS[args.method](x, y, args.alpha)
    est = point_estimates(x, y)
    _emit(
        {
            "method": report.method,
            "stats": list(report.stats),
            "p_value": report.p_value,
            "alpha": report.alpha,
            "reject": bool(report.reject),
            "estimates": {"theta": est.theta, "i1": est.i1, "i2": est.i2},
            "n": est.n,
            "m": est.m,
        },
        args.format,
    )
    return 0


def _region_payload(region) -> dict:
    r = region.rectangle
    payload = {
        "method": region.method,
        "kind": region.kind,
        "level": region.level,
        "rectangle": {
            "theta_lo": r.theta_lo,
            "theta_hi": r.theta_hi,
            "i2_lo": r.i2_lo,
            "i2_hi": r.i2_hi,
        },
        "clipped": bool(region.clipped),
    }
    if region.kind == "ellipse":
        payload["ellipse"] = {
            "center": list(region.center),
            "covariance": [list(map(float, row)) for row in region.covariance],
            "radius": float(region.radius),
        }
    if region.mb_fallback:
        payload["mb_fallback"] = True
    return payload


def cmd_ci(args) -> int:
    x, y = _load_xy(args)
    rng = RngStream(args.seed)
    draws = resample_effects(x, y, args.B, rng)
    region = _CI_METHODS[args.method](draws, args.alpha)
    if args.range_preserve:
        region = range_preserve(region)
    est = draws.origin
    payload = _region_payload(region)
    payload["estimates"] = {"theta": est.theta, "i1": est.i1, "i2": est.i2}
    payload["n"] = est.n
    payload["m"] = est.m
    payload["B"] = args.B
    payload["seed"] = args.seed
    _emit(payload, args.format)
    return 0


def cmd_oracle(args) -> int:
    f = parse_dist(args.dist_x)
    g = parse_dist(args.dist_y)
    fx = exact_functionals(f, g)
    payload = {
        "dist_x": args.dist_x,
        "dist_y": args.dist_y,
        "theta": fx.theta,
        "i1": fx.i1,
        "i2": fx.i2,
        "quadrature_error": {"theta": fx.theta_err, "i1": fx.i1_err, "i2": fx.i2_err},
    }
    if args.nu is not None:
        cov = asymptotic_cov(f, g, args.nu)
        payload["asymptotic_cov"] = {
            "var_theta": cov.var_theta,
            "var_i2": cov.var_i2,
            "cov": cov.cov,
            "nu": cov.nu,
        }
    _emit(payload, args.format)
    return 0


def _parse_axis(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError(f"bad axis {text!r}: expected LO:HI:STEPS")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ParameterError(f"bad axis {text!r}: expected numbers LO:HI:STEPS") from None


def cmd_grid(args) -> int:
    mu = grid_axis(_parse_axis(args.mu))
    sigma = grid_axis(_parse_axis(args.sigma))
    rows = functional_grid(mu, sigma)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        out.write("mu,sigma,theta,i1,i2\n")
        for mu_v, sd_v, th, i1, i2 in rows:
            out.write(
                f"{mu_v:.10g},{sd_v:.10g},{th:.10g},{i1:.10g},{i2:.10g}\n"
            )
    finally:
        if args.out:
            out.close()
    return 0


def cmd_simulate(args) -> int:
    if args.setting:
        dist_x, dist_y = SETTINGS[args.setting]
    elif args.dist_x and args.dist_y:
        dist_x, dist_y = parse_dist(args.dist_x), parse_dist(args.dist_y)
    else:
        raise ParameterError("provide --setting or both --dist-x and --dist-y")
    sizes = []
    for tok in args.n.split(","):
        tok = tok.strip()
        try:
            n = int(tok)
        except ValueError:
            raise ParameterError(f"bad sample size {tok!r}") from None
        sizes.append((n, args.m if args.m else n))
    if args.methods:
        methods = tuple(t.strip() for t in args.methods.split(","))
    else:
        methods = ("new-joint", "adjusted-joint", "wmw", "ks", "cvm") if args.experiment != "coverage" else tuple(_CI_METHODS)
    config = ExperimentConfig(
        kind=args.experiment,
        dist_x=dist_x,
        dist_y=dist_y,
        n_grid=tuple(sizes),
        reps=args.reps,
        alpha=args.alpha,
        methods=methods,
        B=args.B,
        master_seed=args.seed,
    )
    runner = {"type1": run_type1, "power": run_power, "coverage": run_coverage}[args.experiment]
    table = runner(config)
    print(table.to_json() if args.format == "json" else table.to_csv(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="joint-effect",
        description="Joint nonparametric inference for the relative effect and the overlap index.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="cap kernel worker threads (default: JOINT_EFFECT_THREADS or all cores)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_args(p):
        p.add_argument("--x", help="file with one numeric value per line (x sample)")
        p.add_argument("--y", help="file with one numeric value per line (y sample)")
        p.add_argument("--data", help="two-column CSV with group and value columns")
        p.add_argument("--group-col", default="group")
        p.add_argument("--value-col", default="value")

    p_test = sub.add_parser("test", help="run a two-sample test")
    add_data_args(p_test)
    p_test.add_argument("--method", required=True, choices=sorted(_TESTS))
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--format", choices=["json", "text"], default="text")
    p_test.set_defaults(fn=cmd_test)

    p_ci = sub.add_parser("ci", help="simultaneous confidence region")
    add_data_args(p_ci)
    p_ci.add_argument("--method", required=True, choices=sorted(_CI_METHODS))
    p_ci.add_argument("-B", "--B", dest="B", type=int, default=1000)
    p_ci.add_argument("--seed", type=int, default=1)
    p_ci.add_argument("--alpha", type=float, default=0.05)
    p_ci.add_argument("--range-preserve", action="store_true")
    p_ci.add_argument("--format", choices=["json", "text"], default="text")
    p_ci.set_defaults(fn=cmd_ci)

    p_or = sub.add_parser("oracle", help="exact functionals by numerical integration")
    p_or.add_argument("--dist-x", required=True, help="e.g. normal:0,1 (normal uses sd)")
    p_or.add_argument("--dist-y", required=True, help="e.g. exp:1")
    p_or.add_argument("--nu", type=float, default=None, help="limit n/m for the asymptotic covariance")
    p_or.add_argument("--format", choices=["json", "text"], default="text")
    p_or.set_defaults(fn=cmd_oracle)

    p_gr = sub.add_parser("grid", help="normal-vs-normal functional grid as CSV")
    p_gr.add_argument("--mu", required=True, help="LO:HI:STEPS")
    p_gr.add_argument("--sigma", required=True, help="LO:HI:STEPS (positive)")
    p_gr.add_argument("--out", help="output file (default: stdout)")
    p_gr.set_defaults(fn=cmd_grid)

    p_sim = sub.add_parser("simulate", help="Monte Carlo experiments")
    p_sim.add_argument("--experiment", required=True, choices=["type1", "power", "coverage"])
    p_sim.add_argument("--setting", choices=sorted(SETTINGS), help="predefined distribution pair")
    p_sim.add_argument("--dist-x")
    p_sim.add_argument("--dist-y")
    p_sim.add_argument("--n", required=True, help="comma-separated sample sizes, e.g. 10,50")
    p_sim.add_argument("--m", type=int, default=None, help="second sample size (default: = n)")
    p_sim.add_argument("--reps", type=int, default=1000)
    p_sim.add_argument("--B", type=int, default=1000)
    p_sim.add_argument("--alpha", type=float, default=0.05)
    p_sim.add_argument("--seed", type=int, default=1)
    p_sim.add_argument("--methods", help="comma-separated method tags")
    p_sim.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sim.set_defaults(fn=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = args.threads
    if threads is None:
        env = os.environ.get("JOINT_EFFECT_THREADS", "").strip()
        threads = int(env) if env else None
    set_threads(threads)
    try:
        return args.fn(args)
    except MethodInapplicableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except JointEffectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
