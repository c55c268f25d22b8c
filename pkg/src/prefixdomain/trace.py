"""Line-oriented trace files and bit-exact replay.

Format, one record per line::

    # prefixdomain-trace 1
    # depth 14
    # cs 1,2
    # step-limit 100000
    # halt-on-fire 0
    # universe 1/3 4
    t p x                      enumeration event
    t FIRE c l L N             Alice(c) fired after event t
    t SNAP c L num exp         free allowed fraction at L when she fired
    VIOLATION t kind p x       rejected event that ended the run
    Q c x num exp              final weight q_c(x)
    END status clock digest

Strings use the basic-set token syntax (``eps`` for the empty string).
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from pathlib import Path

from prefixdomain.bobs import ReplayBob
from prefixdomain.dyadic import Dyadic, format_bits, parse_bits
from prefixdomain.errors import GameRuleError, ParseError
from prefixdomain.game import (
    AllocationLedger,
    EnumerationEvent,
    FireRecord,
    GameState,
    GameTrace,
    TriggerWindow,
    run_game,
)
from prefixdomain.universal import UniversalSet

MAGIC = "# prefixdomain-trace 1"


def state_digest(trace: GameTrace) -> str:
    h = hashlib.sha256()
    for p, x in trace.state.dbar.items():
        h.update(f"{format_bits(p)} {format_bits(x)}\n".encode())
    for c in sorted(trace.ledgers):
        for x, v in trace.ledgers[c].grants.items():
            h.update(f"{c} {format_bits(x)} {v.numerator} {v.exponent}\n".encode())
    h.update(trace.status.encode())
    return h.hexdigest()[:16]


def format_trace(trace: GameTrace) -> list[str]:
    u = trace.universe
    lines = [
        MAGIC,
        f"# depth {trace.depth_max}",
        f"# cs {','.join(map(str, trace.cs))}",
        f"# step-limit {trace.step_limit}",
        f"# halt-on-fire {int(trace.halt_on_fire)}",
        f"# universe {u.threshold} {u.granularity}",
    ]
    fires_at: dict[int, list[FireRecord]] = {}
    for fire in trace.fires:
        fires_at.setdefault(fire.clock, []).append(fire)
    for ev in trace.events:
        lines.append(f"{ev.clock} {format_bits(ev.p)} {format_bits(ev.x)}")
        for fire in fires_at.get(ev.clock, ()):
            w = fire.window
            lines.append(f"{fire.clock} FIRE {fire.c} {w.l} {w.L} {fire.n_targets}")
            f = fire.fraction
            lines.append(f"{fire.clock} SNAP {fire.c} {w.L} {f.numerator} {f.exponent}")
    if trace.violation is not None:
        ev, kind = trace.violation
        lines.append(
            f"VIOLATION {ev.clock} {kind} {format_bits(ev.p)} {format_bits(ev.x)}"
        )
    for c in sorted(trace.ledgers):
        for x, v in trace.ledgers[c].grants.items():
            lines.append(f"Q {c} {format_bits(x)} {v.numerator} {v.exponent}")
    lines.append(f"END {trace.status} {trace.state.clock} {state_digest(trace)}")
    return lines


def write_trace(trace: GameTrace, path) -> None:
    Path(path).write_text("\n".join(format_trace(trace)) + "\n")


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"line {lineno}: expected an integer, got {token!r}") from None


def _bits(token: str, lineno: int) -> str:
    try:
        return parse_bits(token)
    except ValueError:
        raise ParseError(f"line {lineno}: bad string token {token!r}") from None


class ParsedTrace:
    """Raw contents of a trace file, before any re-simulation."""

    def __init__(self):
        self.header: dict[str, str] = {}
        self.events: list[EnumerationEvent] = []
        self.fires: list[tuple[int, int, int, int, int]] = []  # clock, c, l, L, N
        self.snaps: dict[int, tuple[int, Dyadic]] = {}  # c -> (L, fraction)
        self.violation: tuple[EnumerationEvent, str] | None = None
        self.grants: dict[int, list[tuple[str, Dyadic]]] = {}
        self.end: tuple[str, int, str] | None = None

    @property
    def depth(self) -> int:
        return int(self.header["depth"])

    @property
    def cs(self) -> tuple[int, ...]:
        raw = self.header.get("cs", "")
        return tuple(int(c) for c in raw.split(",") if c)

    def universe(self) -> UniversalSet:
        threshold, granularity = self.header["universe"].split()
        return UniversalSet(Fraction(threshold), int(granularity), max(24, self.depth))


REQUIRED = ("depth", "cs", "step-limit", "halt-on-fire", "universe")


def parse_lines(lines) -> ParsedTrace:
    lines = [line.rstrip("\n") for line in lines]
    if not lines or lines[0] != MAGIC:
        raise ParseError("missing trace header")
    out = ParsedTrace()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if out.end is not None:
            raise ParseError(f"line {lineno}: content after END")
        if line.startswith("# "):
            key, _, value = line[2:].partition(" ")
            out.header[key] = value
            continue
        parts = line.split()
        try:
            if parts[0] == "END":
                status, clock, digest = parts[1], _int(parts[2], lineno), parts[3]
                out.end = (status, clock, digest)
            elif parts[0] == "Q":
                c, x = _int(parts[1], lineno), _bits(parts[2], lineno)
                v = Dyadic(_int(parts[3], lineno), _int(parts[4], lineno))
                out.grants.setdefault(c, []).append((x, v))
            elif parts[0] == "VIOLATION":
                t = _int(parts[1], lineno)
                ev = EnumerationEvent(_bits(parts[3], lineno), _bits(parts[4], lineno), t)
                out.violation = (ev, parts[2])
            elif len(parts) >= 2 and parts[1] == "FIRE":
                t, c, l, L, n = (_int(tok, lineno) for tok in (parts[0], *parts[2:6]))
                out.fires.append((t, c, l, L, n))
            elif len(parts) >= 2 and parts[1] == "SNAP":
                c, L = _int(parts[2], lineno), _int(parts[3], lineno)
                out.snaps[c] = (L, Dyadic(_int(parts[4], lineno), _int(parts[5], lineno)))
            else:
                if len(parts) != 3:
                    raise ParseError(f"line {lineno}: malformed event {line!r}")
                t = _int(parts[0], lineno)
                out.events.append(
                    EnumerationEvent(_bits(parts[1], lineno), _bits(parts[2], lineno), t)
                )
        except IndexError:
            raise ParseError(f"line {lineno}: truncated record {line!r}") from None
        except ValueError as err:
            raise ParseError(f"line {lineno}: {err}") from None
    if out.end is None:
        raise ParseError("trace is truncated (no END record)")
    missing = [k for k in REQUIRED if k not in out.header]
    if missing:
        raise ParseError(f"header fields missing: {', '.join(missing)}")
    return out


def read_trace(path) -> ParsedTrace:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ParseError(str(err)) from None
    return parse_lines(text.splitlines())


def frozen_trace(parsed: ParsedTrace) -> GameTrace:
    """Rebuild a trace as recorded: events are re-applied to a fresh state,
    fire records and weights are taken from the file as they stand."""
    universe = parsed.universe()
    state = GameState(universe, parsed.depth)
    for ev in parsed.events:
        state.apply_event(ev)
    ledgers = {c: AllocationLedger(c) for c in parsed.cs}
    for c, grants in parsed.grants.items():
        ledger = ledgers.setdefault(c, AllocationLedger(c))
        for x, v in grants:
            ledger.grants[x] = ledger.grants.get(x, Dyadic(0)) + v
    fires = []
    for clock, c, l, L, n in parsed.fires:
        targets = [x for x, _ in parsed.grants.get(c, [])]
        snap = parsed.snaps.get(c, (L, Dyadic(0)))[1]
        record = FireRecord(c, TriggerWindow(l, L, _block_index(universe, l)), clock, n, targets, snap)
        ledgers.setdefault(c, AllocationLedger(c)).fired = record
        fires.append(record)
    status = parsed.end[0] if parsed.end else "unknown"
    trace = GameTrace(
        parsed.depth,
        parsed.cs,
        int(parsed.header["step-limit"]),
        parsed.header["halt-on-fire"] == "1",
        universe,
        events=list(parsed.events),
        fires=fires,
        ledgers=ledgers,
        state=state,
        status=status,
        violation=parsed.violation,
    )
    return trace


def _block_index(universe: UniversalSet, level: int) -> int:
    block = universe.block_at_level(level)
    return 0 if block is None else block.index


def load_trace(path) -> GameTrace:
    parsed = read_trace(path)
    try:
        return frozen_trace(parsed)
    except GameRuleError as err:
        raise ParseError(f"recorded event breaks the game rules: {err}") from None


def resimulate(parsed: ParsedTrace) -> GameTrace:
    events = list(parsed.events)
    if parsed.violation is not None:
        events.append(parsed.violation[0])
    return run_game(
        ReplayBob(events),
        parsed.cs,
        parsed.depth,
        int(parsed.header["step-limit"]),
        universe=parsed.universe(),
        halt_on_fire=parsed.header["halt-on-fire"] == "1",
    )


def replay_verify(path_or_lines) -> list[str]:
    """Re-simulate a trace and diff it against the recorded text.

    Returns the mismatching lines (empty list on a bit-exact round trip).
    Raises :class:`ParseError` for unreadable or truncated files.
    """
    if isinstance(path_or_lines, (str, Path)):
        try:
            lines = Path(path_or_lines).read_text().splitlines()
        except OSError as err:
            raise ParseError(str(err)) from None
    else:
        lines = list(path_or_lines)
    parsed = parse_lines(lines)
    replayed = format_trace(resimulate(parsed))
    recorded = [line for line in lines if line.strip()]
    diffs = []
    for i in range(max(len(recorded), len(replayed))):
        a = recorded[i] if i < len(recorded) else "<missing>"
        b = replayed[i] if i < len(replayed) else "<missing>"
        if a != b:
            diffs.append(f"line {i + 1}: recorded {a!r} replayed {b!r}")
    return diffs
