"""Command-line entry point.

Exit codes: 0 pass, 1 violation, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from prefixdomain.analysis import b_sequence, counting_lemma_audit, density_check
from prefixdomain.bobs import AdversarialBob, GreedyKCBob, RandomBob, ReplayBob
from prefixdomain.dyadic import BasicSet, check_bits
from prefixdomain.errors import KraftExceeded, NotFired, ParseError
from prefixdomain.game import AliceConfig, check_win, run_game
from prefixdomain.kraft_chaitin import Allocator
from prefixdomain.trace import load_trace, read_trace, replay_verify, write_trace
from prefixdomain.universal import UniversalSet

OK, VIOLATION, USAGE = 0, 1, 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def _level_range(text: str) -> tuple[int, int]:
    lo, hi = _int_list(text)
    return lo, hi


def _basic_set(text: str) -> BasicSet:
    try:
        return BasicSet.parse(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def _universe(args) -> UniversalSet:
    return UniversalSet(Fraction(args.threshold), args.granularity)


def cmd_simulate(args) -> int:
    universe = _universe(args)
    if args.bob == "random":
        bob = RandomBob(args.seed)
    elif args.bob == "greedy_kc":
        bob = GreedyKCBob.from_seed(args.seed, args.requests, args.depth)
    elif args.bob == "adversarial":
        bob = AdversarialBob(args.seed, levels=args.levels, mode=args.mode)
    else:
        if not args.replay_from:
            print("--bob replay needs --replay-from", file=sys.stderr)
            return USAGE
        try:
            parsed = read_trace(args.replay_from)
        except ParseError as err:
            print(f"parse error: {err}", file=sys.stderr)
            return USAGE
        events = list(parsed.events)
        if parsed.violation is not None:
            events.append(parsed.violation[0])
        bob = ReplayBob(events)
    trace = run_game(
        bob,
        args.c,
        args.depth,
        args.steps,
        universe=universe,
        halt_on_fire=not args.keep_going,
    )
    if args.out:
        write_trace(trace, args.out)
    print(f"status={trace.status} events={len(trace.events)}")
    for fire in trace.fires:
        w = fire.window
        witness = check_win(trace, fire.c)
        print(
            f"fire c={fire.c} window=[{w.l},{w.L}] clock={fire.clock} N={fire.n_targets} "
            f"fraction={fire.fraction} witness={witness}"
        )
    for c in trace.cs:
        if trace.ledgers[c].fired is None:
            cfg = AliceConfig(c)
            print(f"no fire c={c} (eps={cfg.epsilon})")
    if trace.violation is not None:
        ev, kind = trace.violation
        print(f"violation {kind} at clock {ev.clock}: {ev.p or 'eps'} -> {ev.x or 'eps'}")
        return VIOLATION
    return OK


def cmd_schedule(args) -> int:
    for block in _universe(args).schedule_prefix(args.blocks):
        print(block.format())
    return OK


def cmd_kc_demo(args) -> int:
    alloc = Allocator()
    for n in args.requests:
        try:
            print(alloc.allocate(n) or "eps")
        except KraftExceeded as err:
            print(f"refused {n}: {err}", file=sys.stderr)
            return VIOLATION
    return OK


def cmd_member(args) -> int:
    try:
        x = "" if args.string == "eps" else check_bits(args.string)
    except ValueError as err:
        print(err, file=sys.stderr)
        return USAGE
    print("true" if _universe(args).contains(x) else "false")
    return OK


def cmd_verify(args) -> int:
    diffs = replay_verify(args.trace)
    for line in diffs:
        print(line)
    print("pass" if not diffs else f"mismatch ({len(diffs)} lines)")
    return OK if not diffs else VIOLATION


def cmd_audit(args) -> int:
    trace = load_trace(args.trace)
    cs = [args.c] if args.c else [c for c in trace.cs if trace.ledgers[c].fired]
    if not cs:
        raise NotFired("trace has no fire record")
    status = OK
    for c in cs:
        report = counting_lemma_audit(trace, c)
        print(report.summary())
        if not report.passed:
            status = VIOLATION
    return status


def cmd_density(args) -> int:
    trace = load_trace(args.trace)
    for b, hit in density_check(trace, args.set):
        print(f"{b.serialize()} measure={b.measure()} {'intersect' if hit else 'miss'}")
    return OK


def cmd_bseq(args) -> int:
    trace = load_trace(args.trace)
    cfg = AliceConfig(args.c)
    report = b_sequence(trace, cfg, Fraction(args.threshold))
    for line in report.lines():
        print(line)
    ok = report.pairwise_disjoint() and all(s.measure >= cfg.epsilon for s in report.steps)
    return OK if ok else VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prefixdomain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def universe_opts(p):
        p.add_argument("--threshold", default="1/3")
        p.add_argument("--granularity", type=int, default=4)

    p = sub.add_parser("simulate", help="play one game and write its trace")
    p.add_argument("--bob", choices=["random", "greedy_kc", "adversarial", "replay"], default="greedy_kc")
    p.add_argument("--c", type=_int_list, default=[1], help="comma-separated c values")
    p.add_argument("--depth", type=int, default=14)
    p.add_argument("--steps", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--levels", type=_level_range, help="adversarial fill range lo,hi")
    p.add_argument("--mode", choices=AdversarialBob.modes, default="shortest")
    p.add_argument("--requests", type=int, default=4096, help="greedy_kc request count")
    p.add_argument("--replay-from")
    p.add_argument("--keep-going", action="store_true", help="do not stop once every Alice fired")
    universe_opts(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("schedule", help="print the first blocks of the allowed set")
    p.add_argument("--blocks", type=int, default=10)
    universe_opts(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("kc-demo", help="run the Kraft-Chaitin allocator")
    p.add_argument("--requests", type=_int_list, required=True)
    p.set_defaults(func=cmd_kc_demo)

    p = sub.add_parser("member", help="membership in the allowed set")
    p.add_argument("--string", required=True)
    universe_opts(p)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("verify-trace", help="re-simulate and compare a trace")
    p.add_argument("trace")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit-counting", help="counting-lemma audit of a fired trace")
    p.add_argument("trace")
    p.add_argument("--c", type=int)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("density", help="does the covered region meet each set")
    p.add_argument("trace")
    p.add_argument("--set", type=_basic_set, action="append", required=True)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("b-seq", help="disjoint free-allowed sets at block bottoms")
    p.add_argument("trace")
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--threshold", default="1/3")
    p.set_defaults(func=cmd_bseq)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, NotFired, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
