"""Command-line front end.

Measures are given as paths to measure-spec JSON files or as ``builtin:<rule>``.
Exit status: 0 ordered (either direction), 1 not ordered, 2 inconclusive,
3 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import measure as M
from . import oracle, ordering, quadrature
from .errors import CxOrderError
from .ordering import Verdict

EXIT = {
    Verdict.HOLDS: 0,
    Verdict.HOLDS_REVERSED: 0,
    Verdict.NOT_ORDERED: 1,
    Verdict.INCONCLUSIVE: 2,
}
EXIT_INPUT = 3


def format_json(obj) -> str:
    """Deterministic JSON with every float written to 17 significant digits."""
    return _encode(obj) + "\n"


def _encode(obj) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(str(obj))
        return "%.17g" % obj
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return _encode(obj.item())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def load_measure(ref: str, interval=None) -> M.SignedMeasure:
    """Resolve ``builtin:<name>`` or a JSON file path into a measure."""
    if ref.startswith("builtin:"):
        rule = quadrature.builtin(ref.split(":", 1)[1])
        if interval is None:
            return rule.measure
        return quadrature.rescale(rule, *interval)
    try:
        text = Path(ref).read_text()
    except OSError as exc:
        raise CxOrderError(f"cannot read {ref}: {exc.strerror}") from exc
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise M.ParseError(f"{ref}: invalid JSON ({exc.msg})") from exc
    return M.from_spec(spec)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cxorder", description="Higher-order convex ordering of signed measures.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=ordering.DEFAULT_TOL, help="relative tolerance (default 1e-9)")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"), help="rescale builtin rules to [A, B]")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide mu1 <= mu2 in the (n+1)-convex order")
    p.add_argument("mu1")
    p.add_argument("mu2")
    p.add_argument("--order", type=int, default=1, help="n: test against n-convex functions")

    p = sub.add_parser("compare", parents=[common], help="compare two quadrature rules with both engines")
    p.add_argument("rule_a")
    p.add_argument("rule_b")
    p.add_argument("--order", type=int, default=1)

    p = sub.add_parser("moments", parents=[common], help="print moments 0..K")
    p.add_argument("mu")
    p.add_argument("--upto", type=int, default=3)

    p = sub.add_parser("hfunction", parents=[common], help="dump H_k as a piecewise polynomial")
    p.add_argument("mu1")
    p.add_argument("mu2")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--k", type=int, default=None, help="which H_k to dump (default: the order)")

    p = sub.add_parser("oracle", parents=[common], help="grid and random-sampling cross-checks")
    p.add_argument("mu1")
    p.add_argument("mu2")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--grid", type=int, default=2001)
    return parser


def _validate(args) -> None:
    if getattr(args, "order", 1) < 1:
        raise CxOrderError("--order must be >= 1")
    if args.tol <= 0:
        raise CxOrderError("--tol must be positive")


def _verdict_text(v: ordering.OrderingVerdict) -> List[str]:
    lines = [f"verdict: {v.verdict.value} (n = {v.n})"]
    if v.crossings:
        lines.append("crossings: " + ", ".join(f"{x:.12g}" for x in v.crossings))
    for x, val in v.checkpoints:
        lines.append(f"checkpoint G({x:.12g}) = {val:.12g}")
    if v.endpoint_residuals:
        lines.append("endpoint residuals: " + ", ".join(f"{r:.3g}" for r in v.endpoint_residuals))
    if v.witness is not None:
        w = v.witness
        lines.append(f"witness: {w.kind} {w.param!r}" + (f" sign {w.sign:+d}" if w.kind == "monomial" else ""))
    if v.reason:
        lines.append(f"reason: {v.reason}")
    return lines


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        return _dispatch(args, out)
    except CxOrderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _emit(args, out, payload, text_lines) -> None:
    if args.format == "json":
        out.write(format_json(payload))
    else:
        out.write("\n".join(text_lines) + "\n")


def _dispatch(args, out) -> int:
    iv = tuple(args.interval) if args.interval else None
    if args.command == "check":
        mu1, mu2 = load_measure(args.mu1, iv), load_measure(args.mu2, iv)
        v = ordering.global_check(mu1, mu2, args.order, args.tol)
        _emit(args, out, v.to_dict(), _verdict_text(v))
        return EXIT[v.verdict]

    if args.command == "compare":
        names = [r.split(":", 1)[1] if r.startswith("builtin:") else r for r in (args.rule_a, args.rule_b)]
        c = quadrature.compare(names[0], names[1], args.order, args.tol, interval=iv)
        text = [f"{c.rule_a} vs {c.rule_b} on [{c.interval[0]:g}, {c.interval[1]:g}]", "[global]"]
        text += _verdict_text(c.verdict) + ["[crossing]"] + _verdict_text(c.crossing)
        _emit(args, out, c.to_dict(), text)
        return EXIT[c.verdict.verdict]

    if args.command == "moments":
        mu = load_measure(args.mu, iv)
        vals = [M.moment(mu, k) for k in range(args.upto + 1)]
        _emit(args, out, vals, [f"m{k} = {v:.17g}" for k, v in enumerate(vals)])
        return 0

    if args.command == "hfunction":
        mu1, mu2 = load_measure(args.mu1, iv), load_measure(args.mu2, iv)
        prof = ordering.h_sequence(mu1, mu2, args.order, args.tol)
        k = args.order if args.k is None else args.k
        if not 0 <= k <= args.order:
            raise CxOrderError("--k must lie in 0..order")
        dump = prof.h[k].to_dict()
        text = [f"H_{k}: {len(dump['pieces'])} pieces on [{dump['breakpoints'][0]:g}, {dump['breakpoints'][-1]:g}]"]
        text += [f"[{lo:.12g}, {hi:.12g}): {row}" for lo, hi, row in zip(dump["breakpoints"], dump["breakpoints"][1:], dump["pieces"])]
        _emit(args, out, dump, text)
        return 0

    # oracle
    mu1, mu2 = load_measure(args.mu1, iv), load_measure(args.mu2, iv)
    grid_ok = oracle.grid_condition_check(mu1, mu2, args.order, args.grid, args.tol)
    violations = oracle.random_nconvex_suite(mu1, mu2, args.order, args.trials, args.seed, args.tol)
    payload = {
        "order_n": args.order,
        "grid": args.grid,
        "grid_condition": grid_ok,
        "trials": args.trials,
        "seed": args.seed,
        "violations": violations,
    }
    text = [f"grid condition ({args.grid} points): {'pass' if grid_ok else 'fail'}", f"random n-convex trials: {violations}/{args.trials} violations"]
    _emit(args, out, payload, text)
    return 0 if grid_ok and violations == 0 else 1


def main() -> None:
    sys.exit(run())
