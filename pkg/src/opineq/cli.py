"""Command-line front end: ``opineq check|trace|campaign|search|list-claims``.

Exit codes: 0 when the claim held on everything evaluated, 1 when a
violation was found, 2 for usage, file or parse errors, 3 when the
instance does not satisfy the claim's hypotheses.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .claims import Instance, get_claim, list_claims, trace_popoviciu, violation_threshold
from .errors import HypothesisViolation, OpIneqError
from .harness import CampaignConfig, refine_counterexample, run_campaign
from .hermitian import Interval

OK, VIOLATION, USAGE, HYPOTHESIS = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _write_json(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load_instance(path: str, claim_id=None) -> tuple:
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: expected a JSON object")
    try:
        inst = Instance.from_json(obj)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"{path}: malformed instance ({exc})") from None
    claim_id = claim_id or inst.claim
    if not claim_id:
        raise UsageError("no claim given (use --claim or a \"claim\" key in the instance)")
    return get_claim(claim_id), inst


def _breakdown_text(br) -> str:
    rows = [("side", "term", "value")]
    rows += [("lhs", n, repr(v)) for n, v in br.lhs_terms]
    rows += [("rhs", n, repr(v)) for n, v in br.rhs_terms]
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.append(f"claim={br.claim_id} lhs={br.lhs!r} rhs={br.rhs!r} gap={br.gap!r}")
    lines.append("verdict: " + ("VIOLATED" if br.violated() else "holds"))
    return "\n".join(lines)


def cmd_check(args) -> int:
    claim, inst = _load_instance(args.instance, args.claim)
    br = claim.evaluator(inst)
    if args.json:
        print(json.dumps(br.to_json(), indent=2, sort_keys=True))
    else:
        print(_breakdown_text(br))
    return VIOLATION if br.violated() else OK


def cmd_trace(args) -> int:
    claim, inst = _load_instance(args.instance, args.claim)
    tr = trace_popoviciu(inst, claim.claim_id if claim.claim_id == "COR5-POP" else "THM2.1")
    if args.json:
        print(json.dumps(tr.to_json(), indent=2, sort_keys=True))
    else:
        print(tr.table())
        h, s = tr.t_sums
        print(f"C_s={list(tr.C_s)} C={tr.C!r} t_sums=({h:.3g}, {s:.3g})")
    final = tr.step("combine-2.3")
    return VIOLATION if final.slack < violation_threshold(final.lhs, final.rhs) else OK


def _parse_list(text: str, cast=str) -> tuple:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise UsageError(f"empty list {text!r}")
    try:
        return tuple(cast(t) for t in items)
    except ValueError:
        raise UsageError(f"cannot parse list {text!r}") from None


def _parse_interval(text: str) -> Interval:
    parts = _parse_list(text, float)
    if len(parts) != 2 or parts[0] > parts[1]:
        raise UsageError(f"--interval needs LO,HI with LO <= HI (got {text!r})")
    return Interval(*parts)


def _split_kinds(text: str) -> tuple:
    # commas separate kinds; "random_kraus(3)" style arguments contain none
    return _parse_list(text)


def cmd_campaign(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    cfg = CampaignConfig(
        claim_id=args.claim,
        trials=args.trials,
        dims=_parse_list(args.dims, int),
        map_kinds=_split_kinds(args.map),
        functions=None if args.f is None else _parse_list(args.f),
        interval=None if args.interval is None else _parse_interval(args.interval),
        master_seed=args.seed,
    )
    report = run_campaign(cfg)
    if args.out:
        Path(args.out).write_text(report.dumps() + "\n", encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    if args.witness and report.witness is not None:
        _write_json(args.witness, report.witness["instance"])
    print(report.summary() + f" skipped={report.skipped} wall_time={report.wall_time:.2f}s")
    return OK if report.passed else VIOLATION


def cmd_search(args) -> int:
    if args.budget < 0:
        raise UsageError("--budget must be nonnegative")
    claim, start = _load_instance(args.start, args.claim)
    start_gap = claim.evaluator(start).gap
    best = refine_counterexample(claim.claim_id, start.replace(claim=claim.claim_id), args.budget, seed=args.seed)
    br = claim.evaluator(best)
    if args.out:
        _write_json(args.out, best.to_json())
    print(f"claim={claim.claim_id} start_gap={start_gap!r} gap={br.gap!r} budget={args.budget}")
    return VIOLATION if br.violated() else OK


def cmd_list_claims(args) -> int:
    claims = list_claims()
    if args.json:
        print(json.dumps([c.describe() for c in claims], indent=2))
        return OK
    rows = [("claim", "shape", "anchor", "hypothesis")]
    rows += [(c.claim_id, c.shape, c.anchor, c.hypothesis) for c in claims]
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r[:3], widths)) + "  " + r[3])
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opineq", description="Numerical checks of operator inequalities.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="evaluate a claim on an instance file")
    c.add_argument("--claim", help="claim id (defaults to the instance's own)")
    c.add_argument("--instance", required=True)
    fmt = c.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="print the breakdown as JSON")
    fmt.add_argument("--pretty", action="store_true", help="print an aligned table (the default)")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("trace", help="step-by-step trace of the superquadratic Popoviciu argument")
    t.add_argument("--instance", required=True)
    t.add_argument("--claim", help="THM2.1 (default) or COR5-POP")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_trace)

    k = sub.add_parser("campaign", help="random verification campaign")
    k.add_argument("--claim", required=True)
    k.add_argument("--trials", type=int, required=True)
    k.add_argument("--dims", default="1,2,4", help="comma-separated dimensions")
    k.add_argument("--map", default="random_kraus:3", help="comma-separated map kinds")
    k.add_argument("--f", help="comma-separated function specs (default: the claim's)")
    k.add_argument("--interval", help="LO,HI spectrum window (default: the claim's)")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--out", help="write the JSON report here")
    k.add_argument("--csv", help="write per-trial CSV rows here")
    k.add_argument("--witness", help="write the worst violating instance here")
    k.set_defaults(func=cmd_campaign)

    s = sub.add_parser("search", help="locally refine a (counter)example")
    s.add_argument("--claim")
    s.add_argument("--start", required=True)
    s.add_argument("--budget", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    lc = sub.add_parser("list-claims", help="print the claim registry")
    lc.add_argument("--json", action="store_true")
    lc.set_defaults(func=cmd_list_claims)
    return p


def _glue_negative_values(argv: list) -> list:
    """Let ``--interval -3,3`` through argparse, which would read -3,3 as a flag."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--interval" and i + 1 < len(argv):
            out.append(f"--interval={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return HYPOTHESIS
    except (UsageError, OpIneqError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
