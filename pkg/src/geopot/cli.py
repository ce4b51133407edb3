"""Command-line front door for the package.

Three subcommands:

    geopot eval      pointwise kernels, comparators and special functions
    geopot simulate  exit-time batches by gamma-subordinated stepping
    geopot verify    the empirical verification suites

Exit codes: 0 success, 1 usage error, 2 numeric non-convergence,
3 verification failure.  Grid arguments use the syntax ``log:lo:hi:n`` or
``lin:lo:hi:n``; multi-coordinate points are comma pairs such as ``1,2``.
A ``--config`` file holds ``key=value`` lines (``#`` comments allowed) that
fill in any flag not given on the command line; explicit flags win.  The
environment variable GEOPOT_THREADS caps worker processes everywhere.

Every output *file* carries the hash of the manifest that produced it, and
the manifest records the full configuration, library versions and wall
clock.  Data sections depend only on (config, seed), never on worker count
or timing, so fixed-seed runs are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import platform
import sys
import time
import warnings
from dataclasses import asdict

import numpy as np
import scipy

from . import __version__
from .domains import HALFLINE, Interval
from .halfline import Method, get_halfline
from .harness import (
    ALL_ESTIMATE_IDS,
    check_bhp,
    check_harnack,
    inequality_suite,
    parse_grid,
    ratio_sweep,
    _jsonable,
)
from .interval import get_interval
from .levy import get_levy_density, levy_comparator
from .montecarlo import SimConfig, run_exit
from .quadrature import QuadratureError
from .renewal import (
    get_renewal,
    renewal_comparator,
    renewal_derivative_comparator,
)
from .spectral import Mode

OK, USAGE, NUMERIC, VERIFY_FAIL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


class _UsageError(Exception):
    pass


class _Quantity:
    """One evaluable quantity: arity, point constraints, evaluator."""

    def __init__(self, arity, signature, doc, build, geometric_only=False):
        self.arity = arity
        self.signature = signature
        self.doc = doc
        self.build = build
        self.geometric_only = geometric_only


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise _UsageError(msg)


# --------------------------------------------------------------------------
# quantity registry


def _q_renewal(alpha, mode):
    ren = get_renewal(alpha, mode)

    def ev(pt):
        (x,) = pt
        _require(x > 0.0, "V requires x > 0")
        v, e = ren.value_err(x)
        return v, e, Method.QUADRATURE.value

    return ev


def _q_renewal_derivative(alpha, mode):
    ren = get_renewal(alpha, mode)

    def ev(pt):
        (x,) = pt
        _require(x > 0.0, "Vprime requires x > 0")
        v, e = ren.derivative_err(x)
        return v, e, Method.QUADRATURE.value

    return ev


def _q_renewal_comparator(alpha, mode):
    def ev(pt):
        (x,) = pt
        _require(x > 0.0, "V-comparator requires x > 0")
        return float(renewal_comparator(alpha, x)), 0.0, Method.COMPARATOR.value

    return ev


def _q_renewal_derivative_comparator(alpha, mode):
    def ev(pt):
        (x,) = pt
        _require(x > 0.0, "Vprime-comparator requires x > 0")
        return (float(renewal_derivative_comparator(alpha, x)), 0.0,
                Method.COMPARATOR.value)

    return ev


def _q_ladder(alpha, mode):
    ren = get_renewal(alpha, mode)

    def ev(pt):
        (x,) = pt
        _require(x > 0.0, "ladder requires xi > 0")
        v = float(ren.ladder(x))
        return v, v * ren.ladder.table_rel_err, Method.QUADRATURE.value

    return ev


def _q_ladder_comparator(alpha, mode):
    def ev(pt):
        (x,) = pt
        _require(x > 0.0, "ladder-comparator requires xi > 0")
        return (math.sqrt(math.log1p(x ** alpha)), 0.0,
                Method.COMPARATOR.value)

    return ev


def _q_nu(alpha, mode):
    nu = get_levy_density(alpha)
    closed = alpha == 2.0

    def ev(pt):
        (x,) = pt
        _require(x > 0.0, "nu requires |x| > 0")
        v = float(nu(x))
        e = v * (nu.cache_rel_err + nu.tail_rel_err)
        meth = Method.CLOSED_FORM if closed else Method.QUADRATURE
        return v, e, meth.value

    return ev


def _q_nu_comparator(alpha, mode):
    def ev(pt):
        (x,) = pt
        _require(x > 0.0, "nu-comparator requires |x| > 0")
        return float(levy_comparator(alpha, x)), 0.0, Method.COMPARATOR.value

    return ev


def _q_green_halfline(alpha, mode):
    hp = get_halfline(alpha, mode)

    def ev(pt):
        x, y = pt
        _require(x > 0.0 and y > 0.0, "green-halfline requires x, y > 0")
        kv = hp.green(x, y)
        return kv.value, kv.abs_error, kv.method.value

    return ev


def _q_green_halfline_comparator(alpha, mode):
    hp = get_halfline(alpha, mode)

    def ev(pt):
        x, y = pt
        _require(x > 0.0 and y > 0.0,
                 "green-halfline-comparator requires x, y > 0")
        if x == y:
            return math.inf, math.inf, Method.COMPARATOR.value
        return hp.green_comparator(x, y), 0.0, Method.COMPARATOR.value

    return ev


def _q_poisson_halfline(alpha, mode):
    hp = get_halfline(alpha, mode)

    def ev(pt):
        x, z = pt
        _require(x > 0.0 and z < 0.0, "poisson-halfline requires x > 0 > z")
        kv = hp.poisson(x, z)
        return kv.value, kv.abs_error, kv.method.value

    return ev


def _q_poisson_halfline_comparator(alpha, mode):
    hp = get_halfline(alpha, mode)

    def ev(pt):
        x, z = pt
        _require(x > 0.0 and z < 0.0,
                 "poisson-halfline-comparator requires x > 0 > z")
        return hp.poisson_comparator(x, z), 0.0, Method.COMPARATOR.value

    return ev


def _q_occupation_halfline(alpha, mode):
    hp = get_halfline(alpha, mode)

    def ev(pt):
        x, r = pt
        _require(x > 0.0 and r > 0.0,
                 "occupation-halfline requires x > 0 and R > 0")
        kv = hp.occupation(x, r)
        return kv.value, kv.abs_error, kv.method.value

    return ev


def _q_green_interval_comparator(alpha, mode):
    ip = get_interval(alpha, mode)

    def ev(pt):
        r, x, y = pt
        _require(r > 0.0 and 0.0 < x < r and 0.0 < y < r,
                 "green-interval-comparator requires 0 < x, y < R")
        if x == y:
            return math.inf, math.inf, Method.COMPARATOR.value
        return ip.green_comparator(r, x, y), 0.0, Method.COMPARATOR.value

    return ev


def _q_poisson_interval_comparator(alpha, mode):
    ip = get_interval(alpha, mode)

    def ev(pt):
        r, x, z = pt
        _require(r > 0.0 and 0.0 < x < r and (z < 0.0 or z > r),
                 "poisson-interval-comparator requires 0 < x < R and z "
                 "outside [0, R]")
        return ip.poisson_comparator(r, x, z), 0.0, Method.COMPARATOR.value

    return ev


QUANTITIES: dict[str, _Quantity] = {
    "V": _Quantity(1, "x", "renewal function of the ascending ladder height",
                   _q_renewal),
    "Vprime": _Quantity(1, "x", "derivative of the renewal function",
                        _q_renewal_derivative),
    "V-comparator": _Quantity(
        1, "x", "closed-form two-sided comparator for V",
        _q_renewal_comparator, geometric_only=True),
    "Vprime-comparator": _Quantity(
        1, "x", "closed-form two-sided comparator for V'",
        _q_renewal_derivative_comparator, geometric_only=True),
    "ladder": _Quantity(1, "xi", "ladder-height Laplace exponent", _q_ladder),
    "ladder-comparator": _Quantity(
        1, "xi", "sqrt(log(1 + xi^alpha)) comparator for the ladder exponent",
        _q_ladder_comparator, geometric_only=True),
    "nu": _Quantity(1, "x", "Levy jump density (exact |x|^-1 e^-|x| at "
                    "alpha = 2)", _q_nu, geometric_only=True),
    "nu-comparator": _Quantity(
        1, "x", "1/(|x|(1 + |x|^alpha)) comparator for nu",
        _q_nu_comparator, geometric_only=True),
    "green-halfline": _Quantity(2, "x,y", "Green function of (0, oo)",
                                _q_green_halfline),
    "green-halfline-comparator": _Quantity(
        2, "x,y", "two-sided comparator for the half-line Green function",
        _q_green_halfline_comparator, geometric_only=True),
    "poisson-halfline": _Quantity(
        2, "x,z", "exit density of (0, oo) at z < 0 from x > 0",
        _q_poisson_halfline),
    "poisson-halfline-comparator": _Quantity(
        2, "x,z", "two-sided comparator for the half-line Poisson kernel",
        _q_poisson_halfline_comparator, geometric_only=True),
    "occupation-halfline": _Quantity(
        2, "x,R", "expected time in [0, R] before leaving (0, oo)",
        _q_occupation_halfline),
    "green-interval-comparator": _Quantity(
        3, "R,x,y", "two-sided comparator for the Green function of (0, R)",
        _q_green_interval_comparator, geometric_only=True),
    "poisson-interval-comparator": _Quantity(
        3, "R,x,z", "two-sided comparator for the exit density of (0, R)",
        _q_poisson_interval_comparator, geometric_only=True),
}

# Short aliases used in the usage line of the eval subcommand.
ALIASES = {
    "green-comparator": "green-halfline-comparator",
    "poisson-comparator": "poisson-halfline-comparator",
}


def _quantity_lines() -> str:
    lines = ["quantities (name  point  description):"]
    for name, q in QUANTITIES.items():
        geo = "  [geometric mode only]" if q.geometric_only else ""
        lines.append(f"  {name:<28}{q.signature:<8}{q.doc}{geo}")
    for alias, target in ALIASES.items():
        lines.append(f"  {alias:<28}alias of {target}")
    return "\n".join(lines)


def _estimate_lines() -> str:
    lines = ["estimate ids (verify --suite ratios):"]
    lines.extend(f"  {eid}" for eid in ALL_ESTIMATE_IDS)
    return "\n".join(lines)


# --------------------------------------------------------------------------
# config file and manifests


def _read_config(path: str) -> dict[str, str]:
    vals: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise _UsageError(f"bad config line {line!r}; expected "
                                  "key=value")
            key, val = line.split("=", 1)
            vals[key.strip().replace("-", "_")] = val.strip()
    return vals


def _resolve(args, schema: dict) -> None:
    """Fill unset flags from the config file, then from hard defaults.

    schema maps dest -> (converter, default); a default of ... marks the
    key as required.
    """
    conf = _read_config(args.config) if args.config else {}
    for dest, (conv, default) in schema.items():
        if getattr(args, dest, None) is not None:
            continue
        if dest in conf:
            try:
                setattr(args, dest, conv(conf[dest]))
            except (TypeError, ValueError) as exc:
                raise _UsageError(f"config key {dest}: {exc}") from exc
        elif default is ...:
            raise _UsageError(f"missing required argument --{dest.replace('_', '-')}")
        else:
            setattr(args, dest, default)


def _hash_config(cfg: dict) -> str:
    blob = json.dumps(_jsonable(cfg), sort_keys=True,
                      separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def _write_manifest(path: str, subcommand: str, config: dict, seed,
                    outputs: list, started: float, manifest_hash: str) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": config,
        "seed": seed,
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "geopot": __version__,
        },
        "wall_clock_s": round(time.perf_counter() - started, 3),
        "outputs": outputs,
        "manifest_hash": manifest_hash,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(manifest), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_report_json(path: str, report, manifest_hash: str) -> None:
    if isinstance(report, list):
        data = [asdict(r) for r in report]
    elif hasattr(report, "__dataclass_fields__"):
        data = asdict(report)
    else:
        data = dict(report)
    payload = {"manifest": manifest_hash, "report": data}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(_jsonable(payload), sort_keys=True,
                            separators=(",", ":")) + "\n")


# --------------------------------------------------------------------------
# eval


def _parse_mode(text: str) -> Mode:
    try:
        return Mode[text.upper()]
    except KeyError:
        raise _UsageError(f"unknown mode {text!r}; use geometric or stable")


def _parse_points(tokens: list[str], arity: int) -> list[tuple]:
    pts = []
    for tok in tokens:
        if tok.startswith(("log:", "lin:")):
            _require(arity == 1,
                     f"grid specs apply to single-coordinate quantities, "
                     f"not arity {arity}")
            try:
                xs = parse_grid(tok)
            except ValueError as exc:
                raise _UsageError(str(exc)) from exc
            pts.extend((float(v),) for v in xs)
            continue
        parts = tok.split(",")
        _require(len(parts) == arity,
                 f"point {tok!r} has {len(parts)} coordinates, expected "
                 f"{arity}")
        try:
            pts.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise _UsageError(f"bad point {tok!r}: {exc}") from exc
    _require(bool(pts), "no evaluation points given")
    return pts


def _point_cell(pt: tuple) -> str:
    return ",".join(_fmt(c) for c in pt)


def _csv_cell(text: str) -> str:
    if "," in text or '"' in text:
        return '"' + text.replace('"', '""') + '"'
    return text


def cmd_eval(args) -> int:
    started = time.perf_counter()
    _resolve(args, {
        "alpha": (float, ...),
        "quantity": (str, ...),
        "at": (str.split, ...),
        "mode": (str, "geometric"),
        "out": (str, None),
    })
    name = ALIASES.get(args.quantity, args.quantity)
    if name not in QUANTITIES:
        raise _UsageError(f"unknown quantity {args.quantity!r}; choices: "
                          + ", ".join(QUANTITIES))
    quantity = QUANTITIES[name]
    mode = _parse_mode(args.mode)
    if quantity.geometric_only and mode is not Mode.GEOMETRIC:
        raise _UsageError(f"{name} is defined for geometric mode only")
    points = _parse_points(args.at, quantity.arity)
    try:
        evaluator = quantity.build(args.alpha, mode)
        rows = []
        for pt in points:
            val, err, meth = evaluator(pt)
            rows.append((_point_cell(pt), _fmt(val), _fmt(err), meth))
    except QuadratureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return NUMERIC
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc

    config = {"subcommand": "eval", "alpha": args.alpha, "mode": mode.name,
              "quantity": name, "at": list(args.at)}
    mhash = _hash_config(config)
    lines = ["point,value,abs_error,method"]
    lines += [",".join(_csv_cell(c) for c in row) for row in rows]
    body = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(f"# manifest={mhash}\n")
            fh.write(body)
        _write_manifest(args.out + ".manifest.json", "eval", config, None,
                        [args.out], started, mhash)
    else:
        sys.stdout.write(body)
    return OK


# --------------------------------------------------------------------------
# simulate


def _parse_domain(text: str):
    if text == "halfline":
        return HALFLINE, text
    if text.startswith("interval:"):
        parts = text[len("interval:"):].split(",")
        if len(parts) != 2:
            raise _UsageError("interval domain syntax is interval:0,R")
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise _UsageError(f"bad interval bounds {text!r}") from exc
        _require(lo == 0.0, "interval domains are anchored at 0; "
                 "use interval:0,R")
        _require(hi > 0.0, "interval length must be positive")
        return Interval(hi), f"interval:0,{_fmt(hi)}"
    raise _UsageError(f"unknown domain {text!r}; use halfline or "
                      "interval:0,R")


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    _resolve(args, {
        "alpha": (float, ...),
        "domain": (str, ...),
        "start": (float, ...),
        "paths": (int, 10_000),
        "seed": (int, 0),
        "h": (float, None),
        "max_time": (float, None),
        "workers": (int, 1),
        "mode": (str, "geometric"),
        "out": (str, "batch.csv"),
    })
    mode = _parse_mode(args.mode)
    domain, domain_tag = _parse_domain(args.domain)
    try:
        config = SimConfig(alpha=args.alpha, mode=mode, n_paths=args.paths,
                           seed=args.seed, step_h=args.h,
                           workers=args.workers, max_time=args.max_time)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            batch = run_exit(config, domain, args.start)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc

    hashed = {"subcommand": "simulate", "alpha": args.alpha,
              "mode": mode.name, "domain": domain_tag, "start": args.start,
              "paths": args.paths, "seed": args.seed, "h": batch.h,
              "max_time": batch.max_time}
    mhash = _hash_config(hashed)
    batch.to_csv(args.out, extra={"manifest": mhash})
    config_echo = dict(hashed)
    config_echo.update({"workers": args.workers, "out": args.out,
                        "n_censored": batch.n_censored,
                        "high_censoring": batch.high_censoring})
    _write_manifest(args.out + ".manifest.json", "simulate", config_echo,
                    args.seed, [args.out], started, mhash)
    return OK


# --------------------------------------------------------------------------
# verify


def _alpha_tag(alpha: float) -> str:
    return format(alpha, "g")


def _harnack_r_list(alpha: float) -> list[float]:
    return [0.5, 8.0] if alpha == 2.0 else [0.1, 1.0, 10.0]


def _spread_ok(report) -> bool:
    cross = (report.scaled_cross_spread if report.alpha == 2.0
             else report.cross_scale_spread)
    return (not report.inconclusive and math.isfinite(cross)
            and cross < 4.0)


def cmd_verify(args) -> int:
    started = time.perf_counter()
    _resolve(args, {
        "suite": (str, ...),
        "alpha_list": (str, "0.5,1,1.5,2"),
        "paths": (int, 20_000),
        "seed": (int, 0),
        "workers": (int, 1),
        "out_dir": (str, "."),
    })
    suites = ("inequalities", "ratios", "harnack", "bhp")
    if args.suite not in suites + ("all",):
        raise _UsageError(f"unknown suite {args.suite!r}; choices: "
                          + ", ".join(suites + ("all",)))
    run = suites if args.suite == "all" else (args.suite,)
    try:
        alphas = [float(a) for a in args.alpha_list.split(",") if a]
    except ValueError as exc:
        raise _UsageError(f"bad --alpha-list: {exc}") from exc
    _require(bool(alphas), "empty --alpha-list")

    config = {"subcommand": "verify", "suite": args.suite,
              "alpha_list": alphas, "paths": args.paths, "seed": args.seed}
    mhash = _hash_config(config)
    outdir = args.out_dir.rstrip("/") or "."
    os.makedirs(outdir, exist_ok=True)
    outputs: list[str] = []
    failures: list[str] = []

    def out(name: str) -> str:
        path = f"{outdir}/{name}"
        outputs.append(path)
        return path

    try:
        for alpha in alphas:
            tag = _alpha_tag(alpha)
            if "inequalities" in run:
                results = inequality_suite(alpha, seed=args.seed,
                                           n_paths=args.paths,
                                           workers=args.workers)
                _write_report_json(out(f"inequalities-alpha{tag}.json"),
                                   results, mhash)
                failures += [f"inequalities:{r.name}:alpha={tag}"
                             for r in results if r.status == "fail"]
            if "ratios" in run:
                for eid in ALL_ESTIMATE_IDS:
                    rep = ratio_sweep(eid, alpha, seed=args.seed,
                                      n_paths=args.paths,
                                      workers=args.workers)
                    _write_report_json(out(f"ratio-{eid}-alpha{tag}.json"),
                                       rep, mhash)
                    if not rep.passed:
                        failures.append(f"ratios:{eid}:alpha={tag}")
            if "harnack" in run:
                rep = check_harnack(_harnack_r_list(alpha), alpha,
                                    seed=args.seed, n_paths=args.paths,
                                    workers=args.workers)
                _write_report_json(out(f"harnack-alpha{tag}.json"), rep,
                                   mhash)
                if not _spread_ok(rep):
                    failures.append(f"harnack:alpha={tag}")
            if "bhp" in run:
                rep = check_bhp([1.0], alpha, seed=args.seed,
                                n_paths=args.paths, workers=args.workers)
                _write_report_json(out(f"bhp-alpha{tag}.json"), rep, mhash)
                if rep.inconclusive or not rep.spread < 10.0:
                    failures.append(f"bhp:alpha={tag}")
    except QuadratureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return NUMERIC

    _write_manifest(f"{outdir}/verify-manifest.json", "verify", config,
                    args.seed, outputs, started, mhash)
    if failures:
        print("failing checks:", file=sys.stderr)
        for item in failures:
            print(f"  {item}", file=sys.stderr)
        return VERIFY_FAIL
    return OK


# --------------------------------------------------------------------------
# parser assembly


def build_parser() -> _Parser:
    epilog = _quantity_lines() + "\n\n" + _estimate_lines()
    parser = _Parser(
        prog="geopot",
        description=__doc__.split("\n\n")[0],
        epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version",
                        version=f"geopot {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="subcommand")

    pe = sub.add_parser(
        "eval", help="evaluate a quantity on points or a grid",
        epilog=_quantity_lines(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    pe.add_argument("--alpha", type=float, help="stability index in (0, 2]")
    pe.add_argument("--quantity", help="what to evaluate (see list below)")
    pe.add_argument("--at", nargs="+", metavar="POINT",
                    help="points (comma pairs for multi-coordinate "
                         "quantities) or grid specs log:lo:hi:n, lin:lo:hi:n")
    pe.add_argument("--mode", help="geometric (default) or stable")
    pe.add_argument("--out", help="write CSV here instead of stdout "
                                  "(also writes OUT.manifest.json)")
    pe.add_argument("--config", help="key=value file with fallback values")
    pe.set_defaults(func=cmd_eval)

    ps = sub.add_parser(
        "simulate", help="simulate exit-time batches",
        description="Simulate first-exit batches on halfline or "
                    "interval:0,R and write an ExitBatch CSV plus manifest.")
    ps.add_argument("--alpha", type=float)
    ps.add_argument("--domain", help="halfline or interval:0,R")
    ps.add_argument("--start", type=float, help="starting point inside "
                                                "the domain")
    ps.add_argument("--paths", type=int, help="number of paths "
                                              "(default 10000)")
    ps.add_argument("--seed", type=int, help="stream seed (default 0)")
    ps.add_argument("--h", type=float, help="time step (default: an "
                    "exit-scale heuristic)")
    ps.add_argument("--max-time", type=float, dest="max_time",
                    help="censoring horizon")
    ps.add_argument("--workers", type=int,
                    help="worker processes (capped by GEOPOT_THREADS)")
    ps.add_argument("--mode", help="geometric (default) or stable")
    ps.add_argument("--out", help="output CSV path (default batch.csv)")
    ps.add_argument("--config", help="key=value file with fallback values")
    ps.set_defaults(func=cmd_simulate)

    pv = sub.add_parser(
        "verify", help="run empirical verification suites",
        epilog=_estimate_lines(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    pv.add_argument("--suite",
                    help="inequalities, ratios, harnack, bhp, or all")
    pv.add_argument("--alpha-list", dest="alpha_list",
                    help="comma-separated alphas (default 0.5,1,1.5,2)")
    pv.add_argument("--paths", type=int,
                    help="Monte Carlo paths per batch (default 20000)")
    pv.add_argument("--seed", type=int, help="base seed (default 0)")
    pv.add_argument("--workers", type=int,
                    help="worker processes (capped by GEOPOT_THREADS)")
    pv.add_argument("--out-dir", dest="out_dir",
                    help="directory for report files (default .)")
    pv.add_argument("--config", help="key=value file with fallback values")
    pv.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"geopot {args.command}: error: {exc}", file=sys.stderr)
        return USAGE
    except FileNotFoundError as exc:
        print(f"geopot {args.command}: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
