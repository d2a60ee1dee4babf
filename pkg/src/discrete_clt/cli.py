"""Command-line front end: ``discrete-clt <command> [options]``.

Commands: psi, zero-bias, stein-check, bound, sweep, simulate.  Results go to
stdout or ``--output`` as JSON (default) or CSV.  Invalid input exits with
status 2; instances too large for exact computation exit with status 3.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys

import numpy as np

from .bounds import CSV_COLUMNS, bound_report
from .dist_core import IntDist, SupportCapExceeded, tv_distance
from .psi_family import PsiParams, metadata, psi_pmf, psi_zero_bias
from .stein_bdp import (
    BDPSimConfig,
    StateCapExceeded,
    TargetSet,
    bdp_simulate,
    occupation_time,
    stein_factor_check,
)
from .zero_bias import ComponentSet, sum_zero_bias, zero_bias

EXIT_INVALID = 2
EXIT_INFEASIBLE = 3

GRID_TOL = 1e-12


class SpecError(ValueError):
    """The requested experiment is malformed."""


def parse_grid(text: str, cast=float) -> list:
    """``a,b,c`` or inclusive ``start:end:step``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SpecError(f"grid {text!r} must look like start:end:step")
        start, end, step = (float(x) for x in parts)
        if step <= 0 or end < start:
            raise SpecError(f"grid {text!r} needs step > 0 and end >= start")
        count = math.floor((end - start) / step + GRID_TOL) + 1
        values = [round(start + k * step, 12) for k in range(count)]
    else:
        values = [x for x in text.split(",") if x.strip()]
    if not values:
        raise SpecError(f"grid {text!r} is empty")
    return [cast(v) if cast is not int else int(float(v)) for v in values]


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_finite(v) for v in x]
    if isinstance(x, np.generic):
        return _finite(x.item())
    return x


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r} in CSV output")
        return "%.17g" % x
    return str(x)


def write_csv(rows: list[dict], columns, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])


def _emit(args, payload=None, rows=None, columns=None) -> None:
    buf = io.StringIO()
    if args.format == "csv":
        if rows is None:
            raise SpecError(f"command {args.command!r} has no CSV form")
        write_csv(rows, columns, buf)
    else:
        json.dump(_finite(payload), buf, indent=2, allow_nan=False)
        buf.write("\n")
    text = buf.getvalue()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_components(path: str) -> ComponentSet:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("components", [data])
    try:
        return ComponentSet(tuple(IntDist.from_dict(d) for d in data))
    except (KeyError, TypeError) as exc:
        raise SpecError(f"{path}: not a list of distributions ({exc})") from exc


def component_hash(cs: ComponentSet) -> str:
    """Short content hash labelling a component set in CSV rows."""
    blob = json.dumps([c.to_dict() for c in cs.components], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _params(args) -> PsiParams:
    if args.mu is None or args.sigma2 is None:
        raise SpecError("--mu and --sigma2 are required")
    return PsiParams(args.mu, args.sigma2, args.kappa, args.eps)


def _components_from_args(args) -> tuple[ComponentSet, str]:
    if args.components:
        cs = load_components(args.components)
        return cs, component_hash(cs)
    if args.bernoulli:
        if args.n is None or args.p is None:
            raise SpecError("--bernoulli needs --n and --p")
        n = parse_grid(args.n, int)
        p = parse_grid(args.p)
        if len(n) != 1 or len(p) != 1:
            raise SpecError("use the sweep command for grids")
        return ComponentSet.bernoulli([p[0]] * n[0]), p[0]
    raise SpecError("give --components FILE or --bernoulli --n N --p P")


def cmd_psi(args) -> None:
    p = _params(args)
    d = psi_pmf(p)
    rows = [{"j": int(j), "pmf": float(w)} for j, w in zip(d.support, d.weights)]
    _emit(args, {"pmf": d.to_dict(), "metadata": metadata(p)}, rows, ("j", "pmf"))


def cmd_zero_bias(args) -> None:
    if args.components:
        cs = load_components(args.components)
        replaced = sum_zero_bias(cs)
        direct = zero_bias(cs.total())
        payload = {
            "zero_bias": replaced.to_dict(),
            "direct": direct.to_dict(),
            "tv_between": tv_distance(replaced, direct),
        }
        d = replaced
    else:
        p = _params(args)
        d = psi_zero_bias(p)
        direct = zero_bias(psi_pmf(p))
        payload = {
            "zero_bias": d.to_dict(),
            "direct": direct.to_dict(),
            "tv_between": tv_distance(d, direct),
            "metadata": metadata(p),
        }
    rows = [{"j": int(j), "pmf": float(w)} for j, w in zip(d.support, d.weights)]
    _emit(args, payload, rows, ("j", "pmf"))


def cmd_stein_check(args) -> None:
    p = _params(args)
    d = psi_pmf(p)
    window = (d.lo, d.hi)
    if args.set is not None:
        sets = [TargetSet.of(parse_grid(args.set, int))]
    else:
        rng = np.random.default_rng(args.seed)
        pts = np.arange(d.lo, d.hi + 1)
        sets = [TargetSet.of(pts[rng.random(pts.size) < 0.5]) for _ in range(args.random_sets)]
    worst, worst_set, holds, holds_weak = None, None, True, True
    for target in sets:
        res = stein_factor_check(p, target, window)
        holds &= res.holds
        holds_weak &= res.holds_weak
        if worst is None or res.max_ratio > worst.max_ratio:
            worst, worst_set = res, target
    payload = {
        "params": {"mu": p.mu, "sigma2": p.sigma2, "kappa": p.kappa},
        "A": worst_set.to_dict(),
        "sets_checked": len(sets),
        "seed": args.seed,
        "max_delta_f": worst.max_abs_delta_f,
        "bound": worst.bound_at_worst,
        "ratio": worst.max_ratio,
        "ratio_weak": worst.max_ratio_weak,
        "holds": bool(holds),
        "holds_weak": bool(holds_weak),
    }
    _emit(args, payload)


def cmd_bound(args) -> None:
    cs, label = _components_from_args(args)
    report = bound_report(cs, args.K)
    _emit(args, report.to_dict(), [report.csv_row(label)], CSV_COLUMNS)


def cmd_sweep(args) -> None:
    if not args.bernoulli:
        raise SpecError("sweep currently supports --bernoulli grids")
    if args.n is None or args.p is None:
        raise SpecError("sweep needs --n and --p grids")
    ns = parse_grid(args.n, int)
    ps = parse_grid(args.p)
    if any(not 0 < p < 1 for p in ps) or any(n < 1 for n in ns):
        raise SpecError("need n >= 1 and every p in (0, 1)")
    rows = []
    for n in ns:
        for p in ps:
            rows.append(bound_report(ComponentSet.bernoulli([p] * n), args.K).csv_row(p))
    if args.format == "json":
        _emit(args, {"columns": list(CSV_COLUMNS), "rows": rows})
    else:
        _emit(args, rows=rows, columns=CSV_COLUMNS)


def cmd_simulate(args) -> None:
    p = _params(args)
    window = None if args.k1 is None and args.k2 is None else (args.k1, args.k2)
    cfg = BDPSimConfig(
        seed=args.seed,
        replicas=args.replicas,
        start_state=args.start,
        stop=args.stop,
        horizon=args.horizon,
        window=window,
    )
    res = bdp_simulate(p, cfg)
    payload = {"params": {"mu": p.mu, "sigma2": p.sigma2, "kappa": p.kappa}, **res.to_dict()}
    payload["stop"] = args.stop
    payload["start"] = args.start
    payload["window"] = [args.k1, args.k2]
    if args.stop in ("up", "down"):
        exact = occupation_time(p, args.start, args.stop, args.k1, args.k2)
        payload["closed_form"] = exact
        payload["z_score"] = (res.estimate - exact) / res.std_error if res.std_error > 0 else 0.0
    _emit(args, payload)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discrete-clt", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", type=float)
    common.add_argument("--sigma2", type=float)
    common.add_argument("--kappa", type=int)
    common.add_argument("--eps", type=float, default=1e-15)
    common.add_argument("--K", type=float, default=math.inf)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--replicas", type=int, default=100_000)
    common.add_argument("--components", metavar="FILE")
    common.add_argument("--output", metavar="PATH")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("psi", parents=[common], help="pmf of the approximating law")
    sub.add_parser("zero-bias", parents=[common], help="zero-biased law of a sum or of Psi")

    sc = sub.add_parser("stein-check", parents=[common], help="check Stein factor bounds")
    sc.add_argument("--random-sets", type=int, default=100)
    sc.add_argument("--set", help="explicit target set, e.g. 0,1,5")

    for name, helptext in (("bound", "bounds for one sum"), ("sweep", "bounds over a grid")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--bernoulli", action="store_true")
        sp.add_argument("--n")
        sp.add_argument("--p")

    sim = sub.add_parser("simulate", parents=[common], help="Monte Carlo passage/occupation times")
    sim.add_argument("--start", type=int)
    sim.add_argument("--stop", choices=("down", "up", "horizon"), default="down")
    sim.add_argument("--horizon", type=float)
    sim.add_argument("--k1", type=int)
    sim.add_argument("--k2", type=int)
    return parser


COMMANDS = {
    "psi": cmd_psi,
    "zero-bias": cmd_zero_bias,
    "stein-check": cmd_stein_check,
    "bound": cmd_bound,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "json"
    try:
        COMMANDS[args.command](args)
    except (SupportCapExceeded, StateCapExceeded) as exc:
        print(f"discrete-clt: infeasible instance: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as exc:
        print(f"discrete-clt: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
