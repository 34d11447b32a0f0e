"""Command-line entry point: ``weilbounds <subcommand> ...``.

Exit codes: 0 success (for ``analyze``: Impossible proven), 1 Undecided or a
failed check, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import hermitian
from .eliminate import KNOWN_LOWER_BOUNDS, PRIOR_BOUNDS, RULESETS, KnownBounds, RuleSet, analyze, general_bound, table_bound
from .enumeration import deficiency_table
from .exact import DomainError
from .isogeny import defect0, exceptional_scan
from .report import to_json, to_text
from .verify import verify_report
from .weil import context

WORKERS_ENV = "WEILBOUNDS_WORKERS"

EXIT_OK, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2

# (q, g, N) whose surviving candidates an exhaustive cover search addresses
COVER_SEARCH_HINTS = {(27, 4, 66): "q27g4", (32, 4, 75): "q32g4", (3, 6, 15): "q3g6"}


@dataclass
class RunConfig:
    subcommand: str
    ruleset: str = "paper"
    bounds: Optional[str] = None
    fmt: str = "text"
    workers: int = 1
    work_limit: Optional[int] = None
    seed: int = 0

    def rules(self) -> RuleSet:
        kb = KnownBounds.from_csv(self.bounds) if self.bounds else KnownBounds.default()
        return RuleSet(self.ruleset, kb)


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _emit(cfg: RunConfig, text: str, payload) -> None:
    if cfg.fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_analyze(cfg: RunConfig, args) -> int:
    rep = analyze(context(args.q), args.g, args.N, cfg.rules(), work_limit=cfg.work_limit,
                  workers=cfg.workers)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(to_json(rep))
    if cfg.fmt == "json":
        sys.stdout.write(to_json(rep))
    else:
        sys.stdout.write(to_text(rep))
    return EXIT_OK if rep.impossible else EXIT_UNDECIDED


def _table_row(cfg: RunConfig, q: int, g: int, floor, start) -> tuple[str, dict, bool]:
    ctx = context(q)
    if floor is None and (q, g) in KNOWN_LOWER_BOUNDS:
        floor = KNOWN_LOWER_BOUNDS[(q, g)] + 1  # a curve with the known value exists
    t0 = time.time()
    row = table_bound(ctx, g, cfg.rules(), floor=floor, work_limit=cfg.work_limit,
                      workers=cfg.workers, start=start)
    closed_form, _ = general_bound(ctx, g)
    lines = [f"q = {q}, g = {g}: Weil-Serre bound {row.ws_bound}, closed-form bound without prior tables {closed_form}, "
             f"descent from {row.start}"]
    for N, why in row.steps:
        lines.append(f"  N = {N}: {why}")
        if (q, g, N) in COVER_SEARCH_HINTS and why.startswith("undecided"):
            lines.append(f"    survivors are the subject of: coversearch --preset {COVER_SEARCH_HINTS[(q, g, N)]}")
    status = "" if row.complete else ("  (floor reached)" if floor is not None and row.bound < floor
                                      else "  (partial: work limit exceeded)")
    lines.append(f"  best upper bound: {row.bound}{status}")
    lines.append(f"  elapsed: {time.time() - t0:.1f} s")
    payload = {"q": q, "g": g, "ws_bound": row.ws_bound, "start": row.start, "bound": row.bound,
               "closed_form_bound": closed_form, "complete": row.complete,
               "steps": [list(s) for s in row.steps]}
    partial = not row.complete and not (floor is not None and row.bound < floor)
    return "\n".join(lines), payload, partial


def cmd_table(cfg: RunConfig, args) -> int:
    if args.full_tables:
        rows = sorted(PRIOR_BOUNDS)
    else:
        if args.q is None or args.g is None:
            raise DomainError("table needs q and g (or --full-tables)")
        rows = [(args.q, args.g)]
    texts, payloads, partial = [], [], False
    for q, g in rows:
        text, payload, part = _table_row(cfg, q, g, args.floor, args.start)
        partial |= part
        texts.append(text)
        payloads.append(payload)
        if args.full_tables and cfg.fmt == "text":
            print(text, flush=True)
    if not (args.full_tables and cfg.fmt == "text"):
        _emit(cfg, "\n".join(texts), payloads if args.full_tables else payloads[0])
    return EXIT_UNDECIDED if partial else EXIT_OK


def cmd_smyth(cfg: RunConfig, args) -> int:
    tab = deficiency_table(args.deficiency, use_cache=not args.no_cache)
    lines = [f"irreducible totally positive polynomials with deficiency <= {args.deficiency}: {len(tab)}"]
    for d, H in tab.all():
        lines.append(f"  {d}  {H}")
    _emit(cfg, "\n".join(lines),
          {"max_deficiency": tab.max_deficiency,
           "entries": [{"deficiency": d, "coeffs": list(H.coeffs)} for d, H in tab.all()]})
    return EXIT_OK


def cmd_defect0(cfg: RunConfig, args) -> int:
    d = defect0(context(args.q))
    _emit(cfg, str(d), {"q": args.q, "defect0": d})
    return EXIT_OK


def cmd_exceptional(cfg: RunConfig, args) -> int:
    rows = exceptional_scan(args.max_exp)
    text = "\n".join(f"q = {q}: defect-0 dimension {d}" for q, d in rows) or "none"
    _emit(cfg, text, [{"q": q, "defect0": d} for q, d in rows])
    return EXIT_OK


def cmd_coversearch(cfg: RunConfig, args) -> int:
    from .ffsearch import PRESETS
    from .ffsearch.fields import set_default_seed

    set_default_seed(cfg.seed)
    if args.preset == "q27g4":
        res = PRESETS["q27g4"](workers=cfg.workers, exact=args.exact)
    elif args.preset == "q3g6":
        res = PRESETS["q3g6"](constrained=not args.unconstrained)
    else:
        res = PRESETS[args.preset]()
    _emit(cfg, res.summary(), res.to_dict())
    return EXIT_OK if not res.target_reached else EXIT_UNDECIDED


def _format_matrix(M) -> str:
    return "[" + "; ".join(", ".join(repr(e) for e in row) for row in M.rows()) + "]"


def cmd_hermitian(cfg: RunConfig, args) -> int:
    if args.demo:
        A = hermitian.example_matrix()
        red = hermitian.reduce(A)
        replay = A.congruent(red.U)
        lines = [f"A = {_format_matrix(A.matrix())}"]
        lines += [f"  {label}: Norm(alpha) = {n}" for label, n in red.steps]
        lines.append(f"U = {_format_matrix(red.U)}")
        lines.append(f"U* A U = {_format_matrix(replay.matrix())}")
        ok = replay.is_identity()
        lines.append("identity reached" if ok else "REDUCTION FAILED")
        _emit(cfg, "\n".join(lines), {"steps": red.steps, "identity": ok})
        return EXIT_OK if ok else EXIT_UNDECIDED
    rng = random.Random(cfg.seed)
    failures = 0
    longest = 0
    for _ in range(args.random):
        C = hermitian.random_unimodular(rng, length=rng.randint(2, 10), size=3)
        A = hermitian.HermMat2.from_matrix(C.star() * C)
        red = hermitian.reduce(A)
        longest = max(longest, len(red.steps))
        if not A.congruent(red.U).is_identity():
            failures += 1
    text = (f"{args.random} random C*C instances (seed {cfg.seed}): {args.random - failures} reduced "
            f"to the identity, longest reduction {longest} steps")
    _emit(cfg, text, {"instances": args.random, "failures": failures, "seed": cfg.seed,
                      "longest": longest})
    return EXIT_OK if failures == 0 else EXIT_UNDECIDED


def cmd_verify(cfg: RunConfig, args) -> int:
    try:
        with open(args.report) as fh:
            rep = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read report: {exc}")
    kb = cfg.rules().known_bounds.table
    problems = verify_report(rep, known_bounds=kb, recount=args.recount)
    text = "report verified" if not problems else "\n".join(["verification FAILED:"] + problems)
    _emit(cfg, text, {"ok": not problems, "problems": problems})
    return EXIT_OK if not problems else EXIT_UNDECIDED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ruleset", choices=RULESETS, default="paper")
    common.add_argument("--bounds", help="CSV of q,g,upper overriding the built-in known bounds")
    common.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (default ${WORKERS_ENV} or 1)")
    common.add_argument("--work-limit", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="weilbounds",
                                description="Upper bounds on point counts of curves over finite fields.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    a = sub.add_parser("analyze", parents=[common], help="decide whether N points are possible")
    a.add_argument("q", type=int)
    a.add_argument("g", type=int)
    a.add_argument("N", type=int)
    a.add_argument("-o", "--output", help="also write the JSON report here")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("table", parents=[common], help="descend N to the best provable bound")
    t.add_argument("q", type=int, nargs="?")
    t.add_argument("g", type=int, nargs="?")
    t.add_argument("--floor", type=int, default=None,
                   help="stop once N drops below this value (default: one above a known "
                        "lower bound when there is one; 0 descends until undecided)")
    t.add_argument("--start", type=int, default=None, help="first N to try")
    t.add_argument("--full-tables", action="store_true", help="every tabulated (q, g) row, no time bound")
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("smyth", parents=[common], help="totally positive polynomials by deficiency")
    s.add_argument("--deficiency", type=int, required=True)
    s.add_argument("--no-cache", action="store_true")
    s.set_defaults(func=cmd_smyth)

    d = sub.add_parser("defect0", parents=[common], help="defect-0 dimension of F_q")
    d.add_argument("q", type=int)
    d.set_defaults(func=cmd_defect0)

    e = sub.add_parser("exceptional", parents=[common], help="exceptional q = 2^k")
    e.add_argument("--max-exp", type=int, required=True)
    e.set_defaults(func=cmd_exceptional)

    c = sub.add_parser("coversearch", parents=[common], help="exhaustive double-cover searches")
    c.add_argument("--preset", choices=("q27g4", "q32g4", "q3g6"), required=True)
    c.add_argument("--exact", action="store_true", help="q27g4: count every survivor exactly")
    c.add_argument("--unconstrained", action="store_true",
                   help="q3g6: divisor-check and count every function, not only those passing the value filter")
    c.set_defaults(func=cmd_coversearch)

    h = sub.add_parser("hermitian", parents=[common], help="Hermitian matrix reduction over O_K")
    mode = h.add_mutually_exclusive_group(required=True)
    mode.add_argument("--demo", action="store_true")
    mode.add_argument("--random", type=int, metavar="N")
    h.set_defaults(func=cmd_hermitian)

    v = sub.add_parser("verify", parents=[common], help="replay the certificates in a JSON report")
    v.add_argument("report")
    v.add_argument("--recount", action="store_true", help="also re-enumerate the candidate list")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = RunConfig(args.subcommand, args.ruleset, args.bounds, args.fmt,
                    args.workers if args.workers is not None else _default_workers(),
                    args.work_limit, args.seed)
    try:
        return args.func(cfg, args)
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
