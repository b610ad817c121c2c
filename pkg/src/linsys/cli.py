"""Command-line front end.

Exit codes: 0 success, 1 bad input (parse/validation), 2 a requested
verification failed.  All subcommands print either JSON (--format json)
or plain text with the same numbers; nothing is written anywhere except
stdout/stderr and an optional --out file.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from . import bounds, structure
from .acceptance import run_all
from .dominance import (
    lower_bound_strong,
    lower_bound_weak,
    reduction_sequence,
)
from .eqsys import FpSystem, ZSystem, parse_system, reduce_mod_p, render_system
from .errors import GuardExceeded, ParseError
from .lattice import best_sphere_set, embed_mod_p, norm_class_counts, pigeonhole_bound, verify_construction
from .oracle import (
    Matching,
    PointSet,
    is_multicolored_free,
    is_strongly_free,
    is_weakly_free,
    max_strongly_free,
    max_weakly_free,
)
from .systems import builtin, builtin_names


class VerificationFailure(Exception):
    """A requested check came out false; the CLI exits with code 2."""


@dataclasses.dataclass
class RunConfig:
    subcommand: str
    system_path: Optional[str] = None
    p: Optional[int] = None
    n: Optional[int] = None
    format: str = "text"
    seed: int = 20260815
    workers: int = 1
    out: Optional[str] = None


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("LINSYS_THREADS", "1")))
    except ValueError:
        return 1


def _load_system(name_or_path: str) -> ZSystem:
    path = Path(name_or_path)
    if path.exists():
        return parse_system(path.read_text())
    try:
        return builtin(name_or_path)
    except KeyError:
        raise ParseError(f"{name_or_path!r} is neither a readable file nor a built-in "
                         f"({', '.join(builtin_names())})")


def _jsonable(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator, "value": float(obj)}
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj
    return str(obj)


def _emit(report: dict, cfg: RunConfig) -> None:
    data = _jsonable(report)
    if cfg.format == "json":
        text = json.dumps(data, indent=2)
    else:
        lines = []
        for key, value in data.items():
            if isinstance(value, str) and "\n" in value:
                lines.append(f"{key}:")
                lines.extend("  " + ln for ln in value.splitlines())
            elif isinstance(value, (dict, list)):
                lines.append(f"{key}: {json.dumps(value)}")
            else:
                lines.append(f"{key}: {value}")
        text = "\n".join(lines)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    print(text)


def _read_points(path: str, n: Optional[int] = None) -> list[tuple[int, ...]]:
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            entries = tuple(int(tok) for tok in line.replace(",", " ").split())
        except ValueError:
            raise ParseError(f"line {lineno}: not a row of integers")
        if n is not None and len(entries) != n:
            raise ParseError(f"line {lineno}: expected {n} columns, got {len(entries)}")
        rows.append(entries)
    if not rows:
        raise ParseError(f"{path}: no point rows found")
    return rows


# ---------------------------------------------------------------------------
# subcommands

def cmd_analyze(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _load_system(args.system)
    if not all(eq.is_balanced for eq in s.equations):
        raise ParseError("system is not balanced (every row must sum to zero)")
    report: dict[str, Any] = {"system": render_system(s)}
    report.update(structure.hypergraph_report(s))
    params = structure.parameters(structure.build_hypergraph(s))
    holds, margin = bounds.star_inequality(params)
    report["star"] = holds
    report["star_margin"] = margin
    if cfg.p is not None:
        t = reduce_mod_p(s, cfg.p)
        report["p"] = cfg.p
        if t.support_changed:
            report["support_changed"] = True
            print(f"warning: some coefficients vanish mod {cfg.p}; "
                  f"the mod-p hypergraph differs from the integer one", file=sys.stderr)
        if holds and report["irreducible"]:
            base = bounds.c_tilde(params.r1, params.r2, params.L, params.m_max, cfg.p)
            report["ctilde"] = base.value
            report["ctilde_tolerance"] = base.tolerance
            report["ctilde_over_p"] = base.value / cfg.p
    _emit(report, cfg)
    return 0


def cmd_lambda(args: argparse.Namespace, cfg: RunConfig) -> int:
    alpha = Fraction(args.alpha) if args.rational else float(args.alpha)
    rep = bounds.lambda_min(args.m, float(alpha), args.h)
    _emit({"value": rep.value, "optimizer": rep.optimizer,
           "tolerance": rep.tolerance, "method": rep.method}, cfg)
    return 0


def cmd_ctilde(args: argparse.Namespace, cfg: RunConfig) -> int:
    rep = bounds.c_tilde(args.r1, args.r2, args.L, args.m, args.d)
    _emit({"value": rep.value, "optimizer": rep.optimizer,
           "tolerance": rep.tolerance, "method": rep.method,
           "over_d": rep.value / args.d}, cfg)
    return 0


def cmd_star(args: argparse.Namespace, cfg: RunConfig) -> int:
    holds, margin = bounds.star_inequality((args.r1, args.r2, args.L))
    _emit({"holds": holds, "margin": margin}, cfg)
    return 0


def cmd_upper(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _load_system(args.system)
    t = reduce_mod_p(s, cfg.p)
    params = structure.parameters(structure.build_hypergraph(t))
    holds, margin = bounds.star_inequality(params)
    report: dict[str, Any] = {"p": cfg.p, "n": cfg.n, "star": holds, "star_margin": margin}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        alloc = bounds.optimize_allocation(t)
        report["base"] = alloc.value
        report["base_over_p"] = alloc.value / cfg.p
        report["allocation"] = alloc.optimizer
        report["upper"] = bounds.upper_bound_strong(t, cfg.n)
    for w in caught:
        report.setdefault("warnings", []).append(str(w.message))
    _emit(report, cfg)
    return 0


def _trace_report(trace) -> dict[str, Any]:
    steps = []
    for step in trace.steps:
        steps.append({
            "subsystem": [i + 1 for i in step.subsystem],
            "coefficient": step.coefficient,
            "merged": {name: list(atoms) for name, atoms in step.merge_map},
            "result": render_system(step.result) if step.result.L else "(no equations)",
            "variables": list(step.result.names),
        })
    return {
        "initial": render_system(trace.initial),
        "steps": steps,
        "terminated": trace.terminated,
        "b_tilde": trace.b_tilde if trace.terminated else None,
    }


def cmd_reduce(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _load_system(args.system)
    trace = reduction_sequence(s, args.strategy, workers=cfg.workers)
    if trace is None:
        _emit({"initial": render_system(s), "terminated": False,
               "note": "no reduction sequence reaches the one-variable empty system"}, cfg)
        return 0
    if cfg.format == "json":
        _emit(_trace_report(trace), cfg)
        return 0
    print(render_system(trace.initial))
    for i, step in enumerate(trace.steps, start=1):
        eqs = ", ".join(str(j + 1) for j in step.subsystem)
        print(f"\n-- step {i}: contract equation(s) {eqs} (coefficient {step.coefficient}) -->")
        if step.result.L:
            print(render_system(step.result))
        else:
            names = ", ".join(step.result.names)
            print(f"(no equations left; variables {names})")
    print(f"\nterminal: empty system in one variable; b~ = {trace.b_tilde}")
    return 0


def cmd_lower_bound(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _load_system(args.system)
    report: dict[str, Any] = {"p": cfg.p}
    trace = reduction_sequence(s, args.strategy, workers=cfg.workers)
    if trace is not None and trace.terminated:
        strong = lower_bound_strong(trace, cfg.p, epsilon=Fraction(args.epsilon))
        report["strong"] = dataclasses.asdict(strong)
    else:
        report["strong"] = None
        report["strong_note"] = "no terminating dominant reduction; no strong lower bound derived"
    weak = lower_bound_weak(s, cfg.p)
    if weak is not None:
        report["weak"] = dataclasses.asdict(weak)
    else:
        report["weak"] = None
        report["weak_note"] = "no dominant equation with coefficient in [2, p); no weak lower bound derived"
    _emit(report, cfg)
    return 0


def cmd_behrend(args: argparse.Namespace, cfg: RunConfig) -> int:
    table = norm_class_counts(args.n, args.k)
    radius_sq, count = table.best()
    report: dict[str, Any] = {
        "n": args.n, "k": args.k,
        "classes": {str(q): c for q, c in table.counts.items()},
        "best_norm_sq": radius_sq,
        "best_count": count,
        "pigeonhole_bound": float(pigeonhole_bound(args.n, args.k)),
    }
    if args.materialize:
        sphere = best_sphere_set(args.n, args.k)
        pts = sphere.points
        if cfg.p is not None:
            pts = embed_mod_p(sphere, cfg.p).points
            report["p"] = cfg.p
        report["points"] = [",".join(map(str, pt)) for pt in pts]
    _emit(report, cfg)
    return 0


def cmd_search(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _load_system(args.system)
    t = reduce_mod_p(s, cfg.p)
    fn = max_strongly_free if args.kind == "strong" else max_weakly_free
    res = fn(t, cfg.n, workers=cfg.workers, node_budget=args.node_budget)
    _emit({"kind": args.kind, "p": cfg.p, "n": cfg.n, "value": res.value,
           "witness": [",".join(map(str, pt)) for pt in res.witness],
           "nodes_explored": res.nodes_explored, "exhaustive": res.exhaustive}, cfg)
    return 0


def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _load_system(args.system)
    t = reduce_mod_p(s, cfg.p)
    if args.kind == "multicolor":
        flat = _read_points(args.set)
        width = len(flat[0])
        if width % t.r:
            raise ParseError(f"matching rows need r*n = {t.r}*n columns, got {width}")
        n = width // t.r
        rows = tuple(tuple(row[i * n:(i + 1) * n] for i in range(t.r)) for row in flat)
        holds = is_multicolored_free(t, Matching(rows))
    else:
        pts = _read_points(args.set)
        a = PointSet(cfg.p, len(pts[0]), tuple(pts))
        holds = is_strongly_free(t, a) if args.kind == "strong" else is_weakly_free(t, a)
    _emit({"kind": args.kind, "holds": holds}, cfg)
    if not holds:
        raise VerificationFailure(f"{args.kind} freeness does not hold")
    return 0


def cmd_certify(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _load_system(args.system)
    p = cfg.p
    t = reduce_mod_p(s, p)
    graph = structure.build_hypergraph(t)
    params = structure.parameters(graph)
    irreducible, _ = structure.is_irreducible(graph)
    holds, margin = bounds.star_inequality(params)
    report: dict[str, Any] = {
        "system": render_system(s), "p": p, "n": cfg.n,
        "parameters": params.as_tuple(), "star": holds, "star_margin": margin,
        "irreducible": irreducible,
    }
    checks: list[tuple[str, bool]] = []

    trace = reduction_sequence(s, "greedy", workers=cfg.workers)
    if trace is not None and trace.terminated:
        report["reduction_steps"] = len(trace.steps)
        report["b_tilde"] = trace.b_tilde
        strong_low = lower_bound_strong(trace, p, epsilon=Fraction(args.epsilon))
        report["lower_strong"] = dataclasses.asdict(strong_low)
        k = (p - 1) // trace.b_tilde
        if cfg.n is not None and cfg.n >= 2 and k >= 1 and (k + 1) ** cfg.n <= 2**24:
            sphere = best_sphere_set(cfg.n, k)
            report["sphere"] = {"k": k, "radius_sq": sphere.radius_sq, "size": len(sphere)}
            ok_sphere = verify_construction(s, sphere)
            checks.append(("sphere set has only constant solutions", ok_sphere))
            embedded = embed_mod_p(sphere, p)
            ok_embed = is_strongly_free(t, embedded)
            checks.append(("embedded sphere set is strongly free mod p", ok_embed))
    else:
        report["reduction_note"] = "no dominant subsystem chain reaches the one-variable empty system; no strong lower bound derived"

    weak_low = lower_bound_weak(s, p)
    if weak_low is not None:
        report["lower_weak"] = dataclasses.asdict(weak_low)
    else:
        report["lower_weak"] = None
        report["weak_note"] = "no dominant equation; no weak lower bound derived"

    if cfg.n is not None:
        if holds and irreducible:
            upper = bounds.upper_bound_strong(t, cfg.n)
            report["upper_strong"] = upper
            if p ** cfg.n <= 81:
                exact = max_strongly_free(t, cfg.n, workers=cfg.workers)
                report["exact_strong"] = exact.value
                checks.append(("exact strong maximum within upper bound",
                               exact.value <= upper * (1 + 1e-9)))
                if report.get("lower_strong"):
                    report["lower_strong_note"] = (
                        "lower bound is asymptotic (holds for all large n); "
                        "not gated at this n")
        if t.rows == reduce_mod_p(builtin("SW"), p).rows:
            wupper = bounds.wshape_upper(p, cfg.n)
            report["upper_weak"] = wupper
            if p ** cfg.n <= 81:
                exact_w = max_weakly_free(t, cfg.n, workers=cfg.workers)
                report["exact_weak"] = exact_w.value
                checks.append(("exact weak maximum within W-shape upper bound",
                               exact_w.value <= wupper * (1 + 1e-9)))

    report["checks"] = [{"name": name, "ok": ok} for name, ok in checks]
    failed = [name for name, ok in checks if not ok]
    report["verified"] = not failed
    _emit(report, cfg)
    if failed:
        raise VerificationFailure("; ".join(failed))
    return 0


def cmd_selftest(args: argparse.Namespace, cfg: RunConfig) -> int:
    results = run_all(seed=cfg.seed, workers=cfg.workers)
    bad = [r for r in results if not r.ok]
    print(f"{len(results) - len(bad)}/{len(results)} criteria passed")
    if bad:
        raise VerificationFailure(", ".join(f"criterion {r.number:02d}" for r in bad))
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="linsys",
        description="Bounds, reductions, constructions and brute-force checks "
                    "for solution-free sets of balanced linear systems over F_p^n.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(sp, p=False, n=False, system=False, workers=False):
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--out", help="also write the report to this file")
        if system:
            sp.add_argument("--system", required=True,
                            help="path to a .lineq file or a built-in name "
                                 f"({', '.join(builtin_names())})")
        if p:
            sp.add_argument("--p", type=int, required=True, help="prime modulus")
        if n:
            sp.add_argument("--n", type=int, required=True, help="dimension")
        if workers:
            sp.add_argument("--workers", type=int, default=None,
                            help="worker threads (default: LINSYS_THREADS or 1)")

    sp = sub.add_parser("analyze", help="hypergraph, parameters, star inequality")
    common(sp, system=True)
    sp.add_argument("--p", type=int, help="optionally reduce mod p and report the base constant")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("lambda", help="per-variable growth constant")
    common(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--rational", action="store_true", help="parse --alpha as an exact fraction like 1/3")
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("ctilde", help="balanced-allocation base constant")
    common(sp)
    sp.add_argument("--r1", type=int, required=True)
    sp.add_argument("--r2", type=int, required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.set_defaults(func=cmd_ctilde)

    sp = sub.add_parser("star", help="check r1/2 + r2/e > L")
    common(sp)
    sp.add_argument("--r1", type=int, required=True)
    sp.add_argument("--r2", type=int, required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.set_defaults(func=cmd_star)

    sp = sub.add_parser("upper", help="strong-freeness upper bound at (p, n)")
    common(sp, p=True, n=True, system=True)
    sp.set_defaults(func=cmd_upper)

    sp = sub.add_parser("reduce", help="dominant reduction trace")
    common(sp, system=True, workers=True)
    sp.add_argument("--strategy", choices=("greedy", "exhaustive"), default="greedy")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("lower-bound", help="dominant lower-bound reports")
    common(sp, p=True, system=True, workers=True)
    sp.add_argument("--epsilon", default="1/16", help="slack in the strong bound, a fraction in (0,1)")
    sp.add_argument("--strategy", choices=("greedy", "exhaustive"), default="greedy")
    sp.set_defaults(func=cmd_lower_bound)

    sp = sub.add_parser("behrend", help="norm-class census and sphere sets in {0..k}^n")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--materialize", action="store_true")
    sp.add_argument("--p", type=int, help="embed the materialized points into F_p^n")
    sp.set_defaults(func=cmd_behrend)

    sp = sub.add_parser("search", help="exact maximum free-set search at desk scale")
    common(sp, p=True, n=True, workers=True)
    sp.add_argument("--system", default="SW",
                    help="path or built-in name (default SW)")
    sp.add_argument("--kind", choices=("strong", "weak"), required=True)
    sp.add_argument("--node-budget", type=int, default=None)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("verify", help="check a point set or matching file")
    common(sp, p=True, system=True)
    sp.add_argument("--kind", choices=("strong", "weak", "multicolor"), required=True)
    sp.add_argument("--set", required=True, help="CSV file: one point (or matching row) per line")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("certify", help="run the full chain and gate on verifications")
    common(sp, p=True, system=True, workers=True)
    sp.add_argument("--n", type=int, help="dimension for bounds, searches and sphere sets")
    sp.add_argument("--epsilon", default="1/16")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("selftest", help="run the acceptance criteria")
    common(sp, workers=True)
    sp.add_argument("--seed", type=int, default=20260815)
    sp.set_defaults(func=cmd_selftest)

    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(
        subcommand=args.subcommand,
        system_path=getattr(args, "system", None),
        p=getattr(args, "p", None),
        n=getattr(args, "n", None),
        format=getattr(args, "format", "text"),
        seed=getattr(args, "seed", 20260815),
        workers=getattr(args, "workers", None) or _default_workers(),
        out=getattr(args, "out", None),
    )
    try:
        return args.func(args, cfg)
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 2
    except (ParseError, GuardExceeded, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
