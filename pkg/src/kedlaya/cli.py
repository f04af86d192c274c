"""Command-line front end.

Subcommands: ``check``, ``sweep``, ``refute``, ``concavity``, ``axioms``,
``proof-fn`` (alias ``dump-proof-fn``), ``proportional``.

Exit codes: 0 when every finding passes, 1 on a violated or inconsistent
finding (so CI can gate on it), 2 on usage errors.  Reports carry
``"schema": 1`` and contain no timestamps, so a fixed seed reproduces a
byte-identical report.  ``KEDLAYA_THREADS`` caps sweep parallelism;
per-trial seeds make the result independent of scheduling.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import concavity as conc
from . import inequality as ineq
from . import means as mn
from . import sampling
from . import stepfn
from .errors import KedlayaError, WeightsInV
from .weights import scalar_from_string, weights_from_strings

SCHEMA = 1


def _parse_floats(text: str) -> list:
    return [float(scalar_from_string(s, exact=False)) for s in text.split(",")]


def _parse_weights(text: str, exact: bool):
    return weights_from_strings(text.split(","), cls="W0", exact=exact)


def _emit(report: dict, fmt: str, out: str | None, text_lines=None) -> None:
    if fmt == "json":
        payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["trial", "n", "gap", "verdict"])
        for row in report["trials"]:
            writer.writerow([row["trial"], row["n"], repr(row["gap"]), row["verdict"]])
        payload = buf.getvalue()
    else:
        payload = "\n".join(text_lines or [_format_text(report)]) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _format_text(report: dict) -> str:
    return json.dumps(report, sort_keys=True)


def _gap_line(lhs: float, rhs: float, gap: float, verdict: str) -> str:
    sign = "+" if gap >= 0 else "-"
    rel = "<=" if gap >= 0 else ">"
    return (f"lhs = {lhs:.12g}  {rel}  rhs = {rhs:.12g}   "
            f"gap = {sign}{abs(gap):.6e}  [{verdict}]")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_check(args) -> int:
    mean = mn.mean_from_id(args.mean)
    x = _parse_floats(args.x)
    w = _parse_weights(args.w, exact=args.exact_weights)
    report = ineq.check_kedlaya(mean, x, w, tol=args.tol, expect=args.expect)
    doc = {"schema": SCHEMA, "command": "check", **report.to_dict()}
    _emit(doc, args.format, args.out,
          text_lines=[_gap_line(report.lhs, report.rhs, report.gap, report.verdict),
                      "step gaps: " + ", ".join(f"{g:+.3e}" for g in report.step_gaps)])
    return 1 if report.verdict == ineq.VIOLATED else 0


def _sweep_trial(mean, n, seed, trial, tol, expect, max_den):
    rng = np.random.default_rng([seed, trial])
    w = sampling.rational_v_weights(rng, n, max_den=max_den)
    x = sampling.entries_log_uniform(rng, n)
    report = ineq.check_kedlaya(mean, x, w, tol=tol, expect=expect)
    return {"trial": trial, "n": n, "gap": report.gap, "verdict": report.verdict}


def _cmd_sweep(args) -> int:
    mean = mn.mean_from_id(args.mean)
    threads = int(os.environ.get("KEDLAYA_THREADS", "1"))
    trials = range(args.trials)
    run = lambda t: _sweep_trial(mean, args.n, args.seed, t, args.tol,
                                 args.expect, args.max_den)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, trials))
    else:
        rows = [run(t) for t in trials]
    counts: dict = {}
    for row in rows:
        counts[row["verdict"]] = counts.get(row["verdict"], 0) + 1
    min_gap = min((r["gap"] for r in rows), default=0.0)
    doc = {
        "schema": SCHEMA,
        "command": "sweep",
        "mean": str(mean),
        "n": args.n,
        "trials": rows,
        "seed": args.seed,
        "summary": {"counts": counts, "min_gap": min_gap},
    }
    bad = counts.get(ineq.VIOLATED, 0)
    lines = [f"sweep {str(mean)} n={args.n} trials={args.trials} seed={args.seed}",
             f"verdicts: {counts}", f"min gap: {min_gap:.6e}"]
    _emit(doc, args.format, args.out, text_lines=lines)
    return 1 if bad else 0


def _cmd_refute(args) -> int:
    mean = mn.mean_from_id(args.mean)
    w = _parse_weights(args.w, exact=args.exact_weights)
    witness = ineq.search_violation(mean, w, budget=args.budget,
                                    seed=args.seed, tol=args.tol)
    if witness is None:
        doc = {"schema": SCHEMA, "command": "refute", "mean": str(mean),
               "witness": None, "budget": args.budget}
        _emit(doc, args.format, args.out,
              text_lines=[f"no violation found within budget {args.budget} "
                          "(inconsistent with the necessity condition)"])
        return 1
    doc = {"schema": SCHEMA, "command": "refute", "mean": str(mean),
           "witness": {"x": list(witness.x), **witness.report.to_dict()},
           "budget": args.budget}
    _emit(doc, args.format, args.out,
          text_lines=[f"witness x = {list(witness.x)}",
                      _gap_line(witness.report.lhs, witness.report.rhs,
                                witness.report.gap, witness.report.verdict)])
    return 0


def _cmd_concavity(args) -> int:
    mean = mn.mean_from_id(args.mean)
    verdict = conc.sample_jensen_concavity(mean, args.n, args.trials,
                                           tol=args.tol, seed=args.seed)
    doc = {"schema": SCHEMA, "command": "concavity", "mean": str(mean),
           "n": args.n, "seed": args.seed, **verdict.to_dict()}
    _emit(doc, args.format, args.out,
          text_lines=[f"{str(mean)} on {args.trials} trials: {verdict.verdict} "
                      f"(worst violation {verdict.worst_violation:.3e})"])
    return 0


def _cmd_axioms(args) -> int:
    mean = mn.mean_from_id(args.mean)
    rng = np.random.default_rng(args.seed)
    lo, hi, _ = conc.sampling_window(mean.domain)
    lo, hi = max(lo, 1e-2), min(hi, 1e2)
    worst: dict = {"nullhomogeneity": 0.0, "reduction": 0.0, "mean-value": 0.0,
                   "elimination": 0.0, "symmetry": 0.0}
    for _ in range(args.trials):
        n = int(rng.integers(2, args.n + 1))
        x = sampling.entries_log_uniform(rng, n, lo, hi)
        w = sampling.weights_positive(rng, n)
        t = float(rng.uniform(0.25, 4.0))
        split = [float(rng.uniform(0, wi)) for wi in w]
        rest = [wi - s for wi, s in zip(w, split)]
        perm = list(rng.permutation(n))
        wz = list(w)
        jz = int(rng.integers(0, n))
        wz[jz] = 0.0
        checks = [
            mn.check_nullhomogeneity(mean, x, w, t),
            mn.check_reduction(mean, x, split, rest),
            mn.mean_value_residual(mean, x, w),
            mn.check_elimination(mean, x, wz, jz),
            mn.check_symmetry(mean, x, w, perm),
        ]
        for c in checks:
            worst[c.axiom] = max(worst[c.axiom], c.residual)
    doc = {"schema": SCHEMA, "command": "axioms", "mean": str(mean),
           "trials": args.trials, "seed": args.seed, "tol": args.tol,
           "worst_residuals": worst}
    lines = [f"axiom residuals for {str(mean)} over {args.trials} trials:"]
    ok = True
    for axiom, r in worst.items():
        mark = "ok" if r <= args.tol else "FAIL"
        ok = ok and r <= args.tol
        lines.append(f"  {axiom:18s} {r:.3e}  [{mark}]")
    _emit(doc, args.format, args.out, text_lines=lines)
    return 0 if ok else 1


def _cmd_proof_fn(args) -> int:
    mean = mn.mean_from_id(args.mean)
    x = _parse_floats(args.x)
    w = weights_from_strings(args.w.split(","), cls="W0", exact=True)
    f = stepfn.build_proof_function(x, w, args.j)
    ok = stepfn.verify_proof_construction(mean, x, w, args.j, tol=args.tol)
    jf = stepfn.jensen_fubini_sides(mean, f)
    doc = {"schema": SCHEMA, "command": "proof-fn", "mean": str(mean),
           "j": args.j, "match": ok,
           "swap_sides": {"lhs": jf[0], "rhs": jf[1]},
           "function": stepfn.function_to_json(f)}
    _emit(doc, "json" if args.format == "text" else args.format, args.out)
    return 0 if ok else 1


def _cmd_proportional(args) -> int:
    theta = Fraction(args.theta)
    vals = [Fraction(s) for s in args.host.split(",")]
    if len(vals) != 4:
        raise KedlayaError("--host needs four comma-separated rationals a,b,c,d")
    host = stepfn.rect(vals[0], vals[1], vals[2], vals[3])
    ps = stepfn.proportional_set(host, theta)
    ok, failures = stepfn.verify_proportionality(ps, explain=True)
    doc = {"schema": SCHEMA, "command": "proportional", "theta": str(theta),
           "host": {"x": [str(vals[0]), str(vals[1])],
                    "y": [str(vals[2]), str(vals[3])]},
           "rectangles": [
               {"x": [str(r.dx.lower), str(r.dx.upper)],
                "y": [str(r.dy.lower), str(r.dy.upper)]}
               for r in ps.rectangles],
           "verified": ok, "failures": failures}
    _emit(doc, args.format, args.out,
          text_lines=[f"theta={theta} host rectangles={len(ps.rectangles)} "
                      f"verify={ok}"])
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-9, help="verdict tolerance")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--json", dest="format", action="store_const", const="json",
                   help="shorthand for --format json")
    p.add_argument("--out", default=None, help="write the report to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kedlaya",
        description="Weighted means and prefix-mean inequality checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate the inequality on one input")
    p.add_argument("--mean", required=True)
    p.add_argument("--x", required=True, help="comma-separated entries")
    p.add_argument("--w", required=True, help="comma-separated weights")
    p.add_argument("--expect", choices=[ineq.HOLDS, ineq.REVERSED], default=None)
    p.add_argument("--exact-weights", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("sweep", help="randomized sweep over admissible weights")
    p.add_argument("--mean", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-den", type=int, default=9)
    p.add_argument("--expect", choices=[ineq.HOLDS, ineq.REVERSED], default=None)
    _add_common(p)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("refute", help="search for a reversed-inequality violation")
    p.add_argument("--mean", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact-weights", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_refute)

    p = sub.add_parser("concavity", help="randomized midpoint concavity probe")
    p.add_argument("--mean", required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=_cmd_concavity)

    p = sub.add_parser("axioms", help="randomized axiom conformance residuals")
    p.add_argument("--mean", required=True)
    p.add_argument("--n", type=int, default=5, help="max entries per instance")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=_cmd_axioms)

    for name in ("proof-fn", "dump-proof-fn"):
        p = sub.add_parser(name, help="emit the block construction as JSON")
        p.add_argument("--mean", required=True)
        p.add_argument("--x", required=True)
        p.add_argument("--w", required=True, help="rational weights")
        p.add_argument("--j", type=int, required=True)
        _add_common(p)
        p.set_defaults(fn=_cmd_proof_fn)

    p = sub.add_parser("proportional", help="build and verify a proportional set")
    p.add_argument("--theta", required=True, help="rational in [0,1], e.g. 1/2")
    p.add_argument("--host", required=True, help="a,b,c,d for [a,b) x [c,d)")
    _add_common(p)
    p.set_defaults(fn=_cmd_proportional)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", 1.0) <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except WeightsInV as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KedlayaError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
