"""Command-line front end: ``trilattice <command> [config.json] [flags]``.

Exit codes: 0 ok, 2 invalid config, 3 optimizer failure, 4 capacity,
5 tolerance failure.
"""

import argparse
import csv
import hashlib
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import expansion, heat, kernel as kern
from .errors import (
    CapacityExceeded,
    InsufficientGrid,
    InvalidWalk,
    NonConvergence,
    PeriodicityViolated,
)
from .fixtures import FIXTURES, get_fixture
from .realization import minimize_energy, standard_basis
from .svg import LinePlot
from .walk import PARAM_NAMES, Realization, covariance, max_modulus_off_origin, period, unimodular_points, validate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_OPTIMIZER = 3
EXIT_CAPACITY = 4
EXIT_TOLERANCE = 5

DEFAULT_N_GRID = (64, 128, 256, 512)
PERIODIC_N_GRID = (96, 192, 384)


class ConfigError(Exception):
    pass


def fmt(v):
    """17 significant digits for floats, exact strings for rationals."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.17g}"


def tool_version():
    try:
        from importlib.metadata import version

        return version("artifact")
    except Exception:
        return "0.0.0"


# -- configuration -------------------------------------------------------------


def load_config(path=None, fixture=None):
    """Read a JSON walk config (or a named fixture) into a plain dict.

    Accepted probability layouts: ``"probabilities": [six strings]`` in the
    order alpha, alpha', beta, beta', gamma, gamma', or
    ``"probabilities": {"alpha": ..., "alpha_p": ..., ...}``.
    """
    if (path is None) == (fixture is None):
        raise ConfigError("give exactly one of a config path or --fixture")
    if fixture is not None:
        try:
            p = get_fixture(fixture)
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
        return {"probabilities": [p.as_strings()[k] for k in PARAM_NAMES]}
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict) or "probabilities" not in raw:
        raise ConfigError("config needs a 'probabilities' entry")
    return raw


def walk_from_config(cfg):
    probs = cfg["probabilities"]
    if isinstance(probs, dict):
        missing = [k for k in PARAM_NAMES if k not in probs]
        if missing:
            raise ConfigError(f"missing probabilities {missing}")
        values = [probs[k] for k in PARAM_NAMES]
    else:
        values = list(probs)
    if len(values) != 6:
        raise ConfigError("exactly six probabilities are required")
    for v in values:
        if not isinstance(v, str):
            raise ConfigError("probabilities must be 'p/q' strings")
    try:
        parsed = [Fraction(v.strip()) for v in values]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad probability string: {exc}") from None
    return validate(*parsed)


def realization_from_config(cfg):
    r = cfg.get("realization")
    if r is None:
        return None
    if len(r) != 4:
        raise ConfigError("realization takes four numbers h1x, h1y, h2x, h2y")
    return Realization((float(r[0]), float(r[1])), (float(r[2]), float(r[3])))


def input_digest(cfg):
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def parse_int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def parse_float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


# -- output helpers ----------------------------------------------------------------


def out_dir(args, cfg):
    d = Path(args.out or cfg.get("out") or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])


def write_json(path, data):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def report(command, cfg, tables):
    """Deterministic part of a run report (timing is kept separately)."""
    return {
        "command": command,
        "input_digest": input_digest(cfg),
        "tool_version": tool_version(),
        "results": tables,
    }


def finish(args, cfg, command, tables, start):
    d = out_dir(args, cfg)
    write_json(d / f"{command}.json", report(command, cfg, tables))
    write_json(d / f"{command}_timing.json", {"duration_s": round(time.perf_counter() - start, 3)})
    return d


# -- commands ----------------------------------------------------------------


def cmd_validate(args, cfg, p):
    start = time.perf_counter()
    m = max_modulus_off_origin(p)
    # 360 nodes per axis contain the multiples of 2 pi / 3
    unimodular = unimodular_points(p, grid=360, tol=1e-12)
    # the unimodular set is the dual group of order d
    d = len(unimodular)
    if d != period(p):
        raise RuntimeError(f"grid check found {d} unimodular points, expected {period(p)}")
    verdict = "aperiodic, d=1" if d == 1 else f"periodic, d={d}"
    tables = {
        "probabilities": p.as_strings(),
        "kappa": str(p.kappa),
        "Gamma": str(p.gamma_fun),
        "hats": {"alpha_hat": str(p.alpha_hat), "beta_hat": str(p.beta_hat), "gamma_hat": str(p.gamma_hat)},
        "max_modulus_off_origin": fmt(m),
        "unimodular_points": [[fmt(a), fmt(b)] for a, b in unimodular],
        "period": d,
        "verdict": verdict,
    }
    print(f"kappa = {p.kappa}")
    print(f"Gamma = {p.gamma_fun}")
    print(f"hats  = {p.alpha_hat}, {p.beta_hat}, {p.gamma_hat}")
    print(f"max |phi| off origin (401-point grid) = {fmt(m)}")
    print(f"points of [-pi, pi)^2 with |phi| = 1: {len(unimodular)}")
    print(verdict)
    finish(args, cfg, "validate", tables, start)
    return EXIT_OK


def cmd_realize(args, cfg, p):
    start = time.perf_counter()
    std = standard_basis(p)
    u, v1, v2 = minimize_energy(p, std.A_G)
    residual = max(abs(u - std.h1[0]), abs(v1 - std.h2[0]), abs(v2 - std.h2[1]))
    cov = covariance(p, std.realization)
    tables = {
        "A_G": fmt(std.A_G),
        "l": fmt(std.l),
        "h1": [fmt(v) for v in std.h1],
        "h2": [fmt(v) for v in std.h2],
        "h3": [fmt(v) for v in std.h3],
        "optimizer": {"h1": [fmt(u), fmt(0.0)], "h2": [fmt(v1), fmt(v2)]},
        "optimizer_residual": fmt(residual),
        "Q": [[fmt(v) for v in row] for row in cov.Q],
    }
    override = realization_from_config(cfg)
    if override is not None:
        q = covariance(p, override).Q
        tables["override_Q"] = [[fmt(v) for v in row] for row in q]
    print(json.dumps({k: tables[k] for k in ("A_G", "h1", "h2", "optimizer_residual")}, indent=2))
    finish(args, cfg, "realize", tables, start)
    return EXIT_OK


def cmd_kernel(args, cfg, p):
    start = time.perf_counter()
    mode = args.mode or cfg.get("mode", kern.EXACT)
    n = args.n
    table = kern.kernel(p, n, mode, args.capacity)
    d = out_dir(args, cfg)
    # exact tables carry the fraction string and its decimal value
    rows = [(x1, x2, x2 - x1, v, fmt(float(v))) for (x1, x2), v in table.items()]
    write_csv(d / f"kernel_n{n}.csv", ["x1", "x2", "x3", "probability", "decimal"], rows)
    total = table.total_mass()
    tables = {
        "n": n,
        "mode": mode,
        "support_points": len(rows),
        "total_mass": fmt(total),
        "csv": f"kernel_n{n}.csv",
    }
    print(f"n = {n}, mode = {mode}, support points = {len(rows)}, total mass = {fmt(total)}")
    finish(args, cfg, "kernel", tables, start)
    return EXIT_OK


def cmd_expand(args, cfg, p):
    start = time.perf_counter()
    N = args.order
    series = expansion.expand(p, N)
    a0, (c1, c2), a2 = expansion.a1_coefficients(p, expansion.GRAM)
    tables = {
        "order": N,
        "b": [str(b) for b in series.b],
        "P": [str(P) for P in series.P],
        "a1": {
            "constant": str(a0),
            "linear": [str(c1), str(c2)],
            "quadratic": str(a2),
            "kappa": str(p.kappa),
            "a1_at_origin": str(expansion.a1_closed_form(p, 0, 0, expansion.GRAM)),
        },
    }
    for j, P in enumerate(series.P, 1):
        print(f"P_{j} = {P}")
    finish(args, cfg, "expand", tables, start)
    return EXIT_OK


def cmd_compare(args, cfg, p):
    start = time.perf_counter()
    y = tuple(parse_int_list(args.y))
    if len(y) != 2:
        raise ConfigError("--y takes two integers")
    if args.n_grid:
        grid = parse_int_list(args.n_grid)
    else:
        grid = list(PERIODIC_N_GRID if p.is_periodic else DEFAULT_N_GRID)
    mode = args.mode or cfg.get("mode", kern.FLOAT)
    grid = sorted(grid)
    if len(grid) < 3:
        raise InsufficientGrid("need at least three step counts")
    res = expansion.a1_residuals(p, y, grid, mode=mode, capacity=args.capacity)
    extrap = expansion.richardson_limit([1.0 / n for n in grid], res)
    closed = expansion.a1_closed_form(p, y[0], y[1], expansion.GRAM)
    err = abs(extrap - float(closed))
    ok = err <= args.tol
    d = out_dir(args, cfg)
    write_csv(d / "compare.csv", ["n", "residual"], zip(grid, res))
    (
        LinePlot(title=f"r(n) at y={y}", xlabel="1/n", ylabel="r(n)")
        .add_series([1.0 / n for n in grid], res, label="r(n)")
        .add_hline(float(closed), label="closed-form a1")
        .save(d / "compare.svg")
    )
    tables = {
        "y": list(y),
        "n_grid": grid,
        "mode": mode,
        "residuals": [fmt(v) for v in res],
        "extrapolant": fmt(extrap),
        "closed_form": str(closed),
        "closed_form_float": fmt(closed),
        "abs_error": fmt(err),
        "tol": fmt(args.tol),
        "pass": ok,
    }
    print(f"extrapolant = {fmt(extrap)}")
    print(f"closed form = {closed} = {float(closed):.17g}")
    print(f"|diff| = {fmt(err)}  ({'PASS' if ok else 'FAIL'} at tol {args.tol})")
    finish(args, cfg, "compare", tables, start)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_clt(args, cfg, p):
    start = time.perf_counter()
    std = standard_basis(p)
    f = heat.GaussianBump(sigma=1.0)
    deltas = parse_float_list(args.deltas)
    ns = parse_int_list(args.n_grid) if args.n_grid else [25, 100, 400]
    ggaps = [heat.generator_gap(p, std, f, dl) for dl in deltas]
    sgaps = heat.semigroup_gaps(p, std, f, args.t, ns)
    d = out_dir(args, cfg)
    write_csv(d / "clt_generator.csv", ["delta", "generator_gap"], zip(deltas, ggaps))
    write_csv(d / "clt_semigroup.csv", ["n", "semigroup_gap"], [(n, sgaps[n]) for n in ns])
    slope = float(np.polyfit(np.log(deltas), np.log(ggaps), 1)[0]) if len(deltas) > 1 else math.nan
    (
        LinePlot(title="generator gap", xlabel="delta", ylabel="gap", logx=True, logy=True)
        .add_series(deltas, ggaps, label=f"slope {slope:.3f}")
        .save(d / "clt_generator.svg")
    )
    (
        LinePlot(title=f"semigroup gap, t={args.t}", xlabel="n", ylabel="gap", logx=True, logy=True)
        .add_series(ns, [sgaps[n] for n in ns], label="gap")
        .save(d / "clt_semigroup.svg")
    )
    tables = {
        "t": fmt(args.t),
        "test_function": "gaussian sigma=1",
        "generator": {"delta": [fmt(v) for v in deltas], "gap": [fmt(v) for v in ggaps]},
        "generator_slope": fmt(slope),
        "semigroup": {"n": ns, "gap": [fmt(sgaps[n]) for n in ns]},
    }
    print(f"generator gap slope = {slope:.4f}")
    for n in ns:
        print(f"n = {n}: semigroup gap = {fmt(sgaps[n])}")
    finish(args, cfg, "clt", tables, start)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "realize": cmd_realize,
    "kernel": cmd_kernel,
    "expand": cmd_expand,
    "compare": cmd_compare,
    "clt": cmd_clt,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="trilattice", description="Local limit theorem tools for triangular-lattice walks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("config", nargs="?", help="JSON walk configuration")
        sp.add_argument("--fixture", choices=sorted(FIXTURES), help="use a built-in walk")
        sp.add_argument("--out", help="output directory (default: config 'out' or .)")
        sp.add_argument("--mode", choices=[kern.EXACT, kern.FLOAT])
        sp.add_argument("--capacity", type=int, default=kern.DEFAULT_CAPACITY, help="max kernel radius")
        return sp

    common(sub.add_parser("validate", help="check a walk and report kappa, Gamma, period"))
    common(sub.add_parser("realize", help="standard realization and optimizer cross-check"))
    sp = common(sub.add_parser("kernel", help="n-step transition table"))
    sp.add_argument("--n", type=int, default=10)
    sp = common(sub.add_parser("expand", help="symbolic correction polynomials"))
    sp.add_argument("--order", type=int, default=2)
    sp = common(sub.add_parser("compare", help="numeric vs closed-form a1"))
    sp.add_argument("--y", default="0,0")
    sp.add_argument("--n-grid", dest="n_grid")
    sp.add_argument("--order", type=int, default=2)
    sp.add_argument("--tol", type=float, default=0.02)
    sp = common(sub.add_parser("clt", help="generator and semigroup gaps"))
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--deltas", default="0.2,0.1,0.05,0.025")
    sp.add_argument("--n-grid", dest="n_grid")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.fixture)
        p = walk_from_config(cfg)
        realization_from_config(cfg)
    except (ConfigError, InvalidWalk, TypeError, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args, cfg, p)
    except (ConfigError, PeriodicityViolated, InsufficientGrid) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergence as exc:
        print(f"optimizer failure: {exc}", file=sys.stderr)
        return EXIT_OPTIMIZER
    except CapacityExceeded as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
