"""Command-line interface.

Subcommands:

* ``info``            group and weight summary with the embedding constants;
* ``transform``       forward/inverse transforms on CSV/JSON signal files,
                      with an ``--oracle`` cross-check against the naive path;
* ``constants``       the full table of constants for a configuration;
* ``check``           the seeded verification suites (machine-readable JSON);
* ``solve-linear``    the exact inverse of the string operator;
* ``solve-nonlinear`` the damped Picard solver;
* ``sweep``           one-parameter grids of nonlinear solves, CSV output.

Exit codes: 0 success, 1 property/convergence failure, 2 usage or parse
errors.  All machine output is deterministic given (configuration, seed,
version): keys are sorted and no timestamps are embedded.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .checks import run_checks, suite_names
from .group import FiniteAbelianGroup, parse_group
from .nonlinear import (
    SolverConfig,
    lowfreq_forcing,
    parse_nonlinearity,
    solve_nonlinear,
    verify_solution,
)
from .sobolev import (
    Weight,
    algebra_constant,
    check_subadditivity,
    embedding_constant_lalpha,
    embedding_constant_sup,
    lp_norm,
    make_weight,
    sobolev_norm,
    weight_from_table,
)
from .spectral import (
    Signal,
    Spectrum,
    dft_fast,
    dft_naive,
    idft,
    read_signal_csv,
    read_signal_json,
    read_spectrum_csv,
    read_spectrum_json,
    write_signal_csv,
    write_signal_json,
    write_spectrum_csv,
    write_spectrum_json,
)
from .stringop import apply_operator, build_multiplier, domain_norm, solve_linear

__all__ = ["main"]

_FMT = ".17g"


def _fmt(x: float) -> str:
    return format(float(x), _FMT)


def _print_json(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _load_weight(group: FiniteAbelianGroup, args) -> Weight:
    if getattr(args, "weight_table", None):
        gamma = []
        with open(args.weight_table, "r", encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines or lines[0].replace(" ", "") != "index,gamma":
            raise ValueError(f"{args.weight_table}: expected header 'index,gamma'")
        for expected, row in enumerate(lines[1:]):
            idx_s, val_s = row.split(",")
            if int(idx_s) != expected:
                raise ValueError(f"{args.weight_table}: row {idx_s} out of order")
            gamma.append(float(val_s))
        c_gamma = args.c_gamma if args.c_gamma is not None else 1.0
        return weight_from_table(group, gamma, c_gamma, name="custom")
    return make_weight(group, args.weight)


def _read_field(path: str, group: FiniteAbelianGroup, spectral: bool = False):
    if path.endswith(".json"):
        return (read_spectrum_json if spectral else read_signal_json)(path, group)
    if path.endswith(".csv"):
        return (read_spectrum_csv if spectral else read_signal_csv)(path, group)
    raise ValueError(f"cannot infer file format of {path!r} (use .csv or .json)")


def _write_field(path: str, obj) -> None:
    spectral = isinstance(obj, Spectrum)
    if path.endswith(".json"):
        (write_spectrum_json if spectral else write_signal_json)(path, obj)
    elif path.endswith(".csv"):
        (write_spectrum_csv if spectral else write_signal_csv)(path, obj)
    else:
        raise ValueError(f"cannot infer file format of {path!r} (use .csv or .json)")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_info(args) -> int:
    group = parse_group(args.group)
    w = _load_weight(group, args)
    sub = check_subadditivity(group, w)
    doc = {
        "group": group.descriptor,
        "order": group.order,
        "factors": list(group.factors),
        "weight": {
            "name": w.name,
            "c_gamma": w.c_gamma,
            "gamma_min": float(w.values.min()),
            "gamma_max": float(w.values.max()),
            "subadditive": sub["ok"],
            "worst_ratio": sub["worst_ratio"] if math.isfinite(sub["worst_ratio"]) else "inf",
        },
        "s": args.s,
        "embedding_constant_sup": embedding_constant_sup(group, w, args.s),
        "algebra_constant": algebra_constant(group, w, args.s),
    }
    if args.json:
        _print_json(doc)
    else:
        print(f"group {group.descriptor}: order {group.order}, factors {list(group.factors)}")
        print(
            f"weight {w.name}: c_gamma={_fmt(w.c_gamma)}, "
            f"gamma range [{_fmt(w.values.min())}, {_fmt(w.values.max())}], "
            f"subadditive={sub['ok']} (worst ratio {sub['worst_ratio']:.6g})"
        )
        print(f"s = {_fmt(args.s)}")
        print(f"sup-embedding constant C = {_fmt(doc['embedding_constant_sup'])}")
        print(f"algebra constant        D = {_fmt(doc['algebra_constant'])}")
    return 0


def _cmd_transform(args) -> int:
    group = parse_group(args.group)
    if args.inverse:
        spec = _read_field(args.input, group, spectral=True)
        out = idft(spec)
    else:
        sig = _read_field(args.input, group, spectral=False)
        fast = dft_fast(sig)
        if args.oracle or args.naive:
            naive = dft_naive(sig)
            if args.oracle:
                dev = float(
                    np.linalg.norm(fast.values - naive.values)
                    / max(np.linalg.norm(naive.values), 1e-30)
                )
                print(f"oracle deviation (relative l2): {_fmt(dev)}")
                if dev > 1e-10:
                    print("FAIL: fast transform disagrees with the naive oracle", file=sys.stderr)
                    return 1
            out = naive if args.naive else fast
        else:
            out = fast
    if args.output:
        _write_field(args.output, out)
    else:
        for i, v in enumerate(out.values):
            print(f"{i},{_fmt(v.real)},{_fmt(v.imag)}")
    return 0


def _cmd_constants(args) -> int:
    group = parse_group(args.group)
    w = _load_weight(group, args)
    s = args.s
    alphas = args.alpha if args.alpha else sorted(
        {a for a in (s + 0.5, 2 * s + 1.0, 4.0) if a >= 1.0 and a > s}
    )
    per_alpha = []
    for alpha in alphas:
        emb = embedding_constant_lalpha(group, w, s, alpha)
        per_alpha.append({"alpha": alpha, **emb})
    doc = {
        "group": group.descriptor,
        "weight": w.name,
        "s": s,
        "embedding_constant_sup": embedding_constant_sup(group, w, s),
        "algebra_constant": algebra_constant(group, w, s),
        "lebesgue_embeddings": per_alpha,
    }
    if args.json:
        _print_json(doc)
    else:
        print(f"group {group.descriptor}, weight {w.name}, s={_fmt(s)}")
        print(f"C(gamma,s) = {_fmt(doc['embedding_constant_sup'])}")
        print(f"D(gamma,s) = {_fmt(doc['algebra_constant'])}")
        for row in per_alpha:
            print(
                f"alpha={_fmt(row['alpha'])}: alpha*={_fmt(row['alpha_star'])}, "
                f"constant={_fmt(row['constant'])}"
            )
    return 0


def _cmd_check(args) -> int:
    doc = run_checks(seed=args.seed, inject_bug=args.inject_bug, only=args.only or None)
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    if args.json or not args.output:
        if args.json:
            sys.stdout.write(text)
        else:
            for suite in doc["suites"]:
                status = "PASS" if suite["passed"] else "FAIL"
                print(f"{status} {suite['name']}: worst slack {suite['worst_slack']:.3e} "
                      f"({suite['trials']} trials)")
            print("all passed" if doc["all_passed"] else "FAILURES present")
    if not doc["all_passed"]:
        failing = [s["name"] for s in doc["suites"] if not s["passed"]]
        print(f"failing suites: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


def _cmd_solve_linear(args) -> int:
    group = parse_group(args.group)
    w = _load_weight(group, args)
    g = _read_field(args.input, group)
    u = solve_linear(g, w, args.c)
    profile = build_multiplier(group, w, args.c)
    dom = domain_norm(u, w, args.c)
    l2g = lp_norm(g, 2)
    rel_dev = abs(dom - l2g) / l2g if l2g > 0 else 0.0
    c_sup = embedding_constant_sup(group, w, args.s)
    sup_u = lp_norm(u, math.inf)
    report = {
        "version": __version__,
        "group": group.descriptor,
        "weight": w.name,
        "c": args.c,
        "s": args.s,
        "isometry": {
            "domain_norm_solution": dom,
            "l2_norm_data": l2g,
            "relative_deviation": rel_dev,
            "ok": rel_dev <= 1e-10,
        },
        "sup_bound": {
            "sup_norm": sup_u,
            "constant": c_sup,
            "bound": c_sup * l2g,
            "ok": sup_u <= c_sup * l2g + 1e-10,
        },
        "multiplier_overflow_frequencies": profile.overflow_count,
    }
    if args.output:
        _write_field(args.output, u)
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    if not args.output and not args.report:
        _print_json(report)
    if not report["isometry"]["ok"] or not report["sup_bound"]["ok"]:
        print("solve-linear: a guarantee failed (see report)", file=sys.stderr)
        return 1
    return 0


def _make_nonlinearity(args, group: FiniteAbelianGroup):
    forcing = None
    if args.forcing and args.forcing_scale is not None:
        raise ValueError("give either --forcing FILE or --forcing-scale X, not both")
    if args.forcing:
        forcing = _read_field(args.forcing, group)
    elif args.forcing_scale is not None:
        forcing = lowfreq_forcing(group, args.forcing_scale)
    return parse_nonlinearity(args.nonlinearity, group, forcing)


def _solver_config(args, group: FiniteAbelianGroup) -> SolverConfig:
    initial = None
    if args.initial:
        initial = _read_field(args.initial, group)
    return SolverConfig(
        theta=args.theta,
        tol=args.tol,
        max_iter=args.max_iter,
        epsilon_ball=args.epsilon_ball,
        initial=initial,
        s=args.s,
    )


def _cmd_solve_nonlinear(args) -> int:
    group = parse_group(args.group)
    w = _load_weight(group, args)
    nl = _make_nonlinearity(args, group)
    cfg = _solver_config(args, group)
    phi, rep = solve_nonlinear(nl, w, args.c, cfg)
    record = verify_solution(phi, nl, w, args.c, s=args.s, residual_tol=10 * args.tol)
    report = {
        "version": __version__,
        "config": {
            "group": group.descriptor,
            "weight": w.name,
            "c": args.c,
            "s": args.s,
            "nonlinearity": nl.name,
            "theta": args.theta,
            "tol": args.tol,
            "max_iter": args.max_iter,
            "forcing_l2": lp_norm(nl.h, 2),
        },
        "result": rep.as_dict(),
        "verification": record,
    }
    if args.output:
        _write_field(args.output, phi)
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    if not args.output and not args.report:
        _print_json(report)
    else:
        print(f"status: {rep.status} after {rep.iterations} iterations; "
              f"equation residual {rep.final_residual_eq:.3e}")
    return 0 if rep.converged else 1


_SWEEP_PARAMS = ("c", "theta", "forcing-scale", "lam")


def _sweep_one(args, value: float):
    group = parse_group(args.group)
    w = _load_weight(group, args)
    local = argparse.Namespace(**vars(args))
    if args.param == "c":
        c = value
    else:
        c = args.c
    if args.param == "theta":
        local.theta = value
    if args.param == "forcing-scale":
        local.forcing_scale = value
    if args.param == "lam":
        base = args.nonlinearity.split(":", 1)
        if len(base) != 2 or "," not in base[1]:
            raise ValueError("sweeping lam needs a power:p,lam style nonlinearity")
        p = base[1].split(",")[0]
        local.nonlinearity = f"{base[0]}:{p},{value:g}"
    nl = _make_nonlinearity(local, group)
    cfg = _solver_config(local, group)
    phi, rep = solve_nonlinear(nl, w, c, cfg)
    return rep


def _cmd_sweep(args) -> int:
    try:
        grid = [float(tok) for tok in args.grid.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"bad sweep grid {args.grid!r}") from exc
    if not grid:
        raise ValueError("sweep grid is empty")
    workers = int(os.environ.get("GROUPSOBOLEV_WORKERS", "4"))
    rows = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for value, rep in zip(grid, pool.map(lambda v: _sweep_one(args, v), grid)):
            rows.append((value, rep))
    header = (
        "param,value,status,converged,iterations,final_residual_eq,"
        "norm_l2,norm_l2alpha,norm_domain,norm_sup,ball_respected,ball_radius"
    )
    lines = [header]
    for value, rep in rows:
        lines.append(
            ",".join(
                [
                    args.param,
                    _fmt(value),
                    rep.status,
                    str(rep.converged).lower(),
                    str(rep.iterations),
                    _fmt(rep.final_residual_eq),
                    _fmt(rep.norms["l2"]),
                    _fmt(rep.norms["l2alpha"]),
                    _fmt(rep.norms["domain"]) if math.isfinite(rep.norms["domain"]) else "inf",
                    _fmt(rep.norms["sup"]),
                    str(rep.ball_respected).lower(),
                    _fmt(rep.ball_radius) if math.isfinite(rep.ball_radius) else "inf",
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_weight_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weight", default="sym-euclid",
                   help="zero | sym-euclid | hamming | pruefer:<p> (default sym-euclid)")
    p.add_argument("--weight-table", default=None,
                   help="CSV 'index,gamma' table overriding --weight")
    p.add_argument("--c-gamma", type=float, default=None,
                   help="subadditivity constant for --weight-table (default 1)")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nonlinearity", required=True,
                   help="affine | power:p,lam | forced-power:p,lam")
    p.add_argument("--forcing", default=None, help="forcing signal file (.csv/.json)")
    p.add_argument("--forcing-scale", type=float, default=None,
                   help="use the built-in low-frequency profile at this L2 norm")
    p.add_argument("--theta", type=float, default=1.0, help="damping in (0,1], default 1")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--epsilon-ball", type=float, default=None,
                   help="override the automatic ball radius")
    p.add_argument("--initial", default=None, help="initial iterate file")
    p.add_argument("--output", default=None, help="solution output file (.csv/.json)")
    p.add_argument("--report", default=None, help="JSON report path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupsobolev",
        description="Sobolev spaces, spectral multipliers, and the nonlocal "
                    "string-equation solver on finite abelian groups",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None,
                        help="JSON file with default values for any long flag")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="group/weight summary and constants")
    p.add_argument("--group", required=True)
    _add_weight_flags(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("transform", help="forward/inverse transform of a file")
    p.add_argument("--group", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--naive", action="store_true", help="use the quadratic-time path")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check fast vs naive; exit 1 if they disagree")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("constants", help="embedding/algebra constants table")
    p.add_argument("--group", required=True)
    _add_weight_flags(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--alpha", type=float, action="append", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("check", help="run the seeded verification suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--json", action="store_true")
    p.add_argument("--output", default=None, help="write the JSON result here")
    p.add_argument("--only", action="append", default=None,
                   help=f"restrict to a suite ({', '.join(suite_names())})")
    p.add_argument("--inject-bug", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("solve-linear", help="exact inverse of the string operator")
    p.add_argument("--group", required=True)
    _add_weight_flags(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--input", required=True, help="data signal g (.csv/.json)")
    p.add_argument("--output", default=None)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_solve_linear)

    p = sub.add_parser("solve-nonlinear", help="damped Picard solver")
    p.add_argument("--group", required=True)
    _add_weight_flags(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--c", type=float, required=True)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_solve_nonlinear)

    p = sub.add_parser("sweep", help="vary one parameter over a grid, CSV out")
    p.add_argument("--group", required=True)
    _add_weight_flags(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--c", type=float, required=True)
    _add_solver_flags(p)
    p.add_argument("--param", required=True, choices=_SWEEP_PARAMS)
    p.add_argument("--grid", required=True, help="comma-separated values")
    p.set_defaults(func=_cmd_sweep)

    return parser


def _apply_config_defaults(parser: argparse.ArgumentParser, path: str) -> None:
    with open(path, "r", encoding="ascii") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: config must be a JSON object of flag defaults")
    defaults = {key.replace("-", "_"): val for key, val in cfg.items()}
    for action in parser._subparsers._group_actions:  # noqa: SLF001 - argparse surface
        if isinstance(action, argparse._SubParsersAction):
            for sp in action.choices.values():
                known = {a.dest for a in sp._actions}
                sp.set_defaults(**{k: v for k, v in defaults.items() if k in known})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if "--config" in argv:
        cfg_path = argv[argv.index("--config") + 1] if argv.index("--config") + 1 < len(argv) else None
        if cfg_path is None:
            parser.error("--config needs a path")
        try:
            _apply_config_defaults(parser, cfg_path)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
