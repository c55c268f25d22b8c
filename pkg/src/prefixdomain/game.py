"""The restricted description game.

Bob enumerates the graph of a prefix-free partial decompressor whose domain
must stay inside the allowed set.  For each ``c`` Alice watches the
enumeration; once the free allowed strings at the bottom of a thick block
have become rare she spends her budget ``2**-c`` on fresh objects, and Bob
can no longer give all of them short descriptions.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Protocol

from prefixdomain.dyadic import BasicSet, BitString, Dyadic
from prefixdomain.errors import (
    AlreadyFired,
    BudgetExceeded,
    DepthExceeded,
    DescriptionTooLong,
    GameRuleError,
    NotAllowed,
    PrefixConflict,
    Redefined,
)
from prefixdomain.universal import UniversalSet

INFINITY = math.inf


@dataclass(frozen=True)
class EnumerationEvent:
    p: BitString
    x: BitString
    clock: int


class FreeIndex:
    """Maximal free vertices of the tree, i.e. the complement of the region
    covered by the enumerated descriptions, as a canonical antichain.

    Counts are bucketed by length and by the first ``granularity`` bits so
    that the number of free strings inside a coarse basic set can be read
    off without touching individual strings.
    """

    def __init__(self, depth: int, granularity: int):
        self.granularity = granularity
        self.items: list[BitString] = []
        self.pos: dict[BitString, int] = {}
        self.by_len: list[dict[BitString, None]] = [{} for _ in range(depth + 1)]
        self.len_counts = [0] * (depth + 1)
        self.cell_counts: list[dict[str, int]] = [
            defaultdict(int) for _ in range(depth + 1)
        ]
        self._cells_in: dict[BasicSet, frozenset[str]] = {}
        self._add("")

    def _add(self, f: BitString) -> None:
        self.pos[f] = len(self.items)
        self.items.append(f)
        k = len(f)
        self.by_len[k][f] = None
        self.len_counts[k] += 1
        if k >= self.granularity:
            self.cell_counts[k][f[: self.granularity]] += 1

    def _remove(self, f: BitString) -> None:
        i = self.pos.pop(f)
        last = self.items.pop()
        if last != f:
            self.items[i] = last
            self.pos[last] = i
        k = len(f)
        del self.by_len[k][f]
        self.len_counts[k] -= 1
        if k >= self.granularity:
            cell = f[: self.granularity]
            self.cell_counts[k][cell] -= 1
            if not self.cell_counts[k][cell]:
                del self.cell_counts[k][cell]

    def __len__(self) -> int:
        return len(self.items)

    def container(self, p: BitString) -> BitString | None:
        """The free vertex that is a prefix of ``p``, if any."""
        pos = self.pos
        for k in range(len(p) + 1):
            if p[:k] in pos:
                return p[:k]
        return None

    def carve(self, p: BitString) -> None:
        f = self.container(p)
        if f is None:
            raise ValueError(f"{p!r} is not free")
        self._remove(f)
        for j in range(len(f) + 1, len(p) + 1):
            self._add(p[: j - 1] + ("1" if p[j - 1] == "0" else "0"))

    def _cells(self, allowed: BasicSet) -> frozenset[str]:
        cells = self._cells_in.get(allowed)
        if cells is None:
            if allowed.min_level() > self.granularity:
                raise ValueError("allowed set finer than the index granularity")
            cells = frozenset(allowed.represent_at(self.granularity))
            self._cells_in[allowed] = cells
        return cells

    def count_at(self, n: int, allowed: BasicSet) -> int:
        """Number of free ``n``-bit strings whose interval lies in ``allowed``."""
        g = self.granularity
        total = 0
        if allowed == BasicSet.full():
            for k in range(min(n, len(self.len_counts) - 1) + 1):
                total += self.len_counts[k] << (n - k)
            return total
        cells = self._cells(allowed)
        for k in range(min(n, len(self.len_counts) - 1) + 1):
            if not self.len_counts[k]:
                continue
            if k >= g:
                for cell, cnt in self.cell_counts[k].items():
                    if cell in cells:
                        total += cnt << (n - k)
            else:
                for f in self.by_len[k]:
                    total += _overlap_count(f, allowed, n)
        return total

    def free_set(self, n: int | None = None) -> BasicSet:
        """Union of free vertices (of length at most ``n``) as a basic set."""
        if n is None:
            return BasicSet._trusted(sorted(self.items))
        return BasicSet._trusted(
            sorted(f for k in range(min(n, len(self.by_len) - 1) + 1) for f in self.by_len[k])
        )


def _overlap_count(f: BitString, allowed: BasicSet, n: int) -> int:
    # n-bit strings inside I_f and inside ``allowed``
    if allowed.contains_interval(f):
        return 1 << (n - len(f))
    return sum(1 << (n - len(v)) for v in allowed.extensions_of(f))


class GameState:
    """The enumerated part of the decompressor plus bookkeeping.

    ``dbar`` maps descriptions to objects in enumeration order.
    """

    def __init__(self, universe: UniversalSet, depth_max: int):
        if depth_max > universe.depth_limit:
            raise DepthExceeded(
                f"depth {depth_max} beyond universe limit {universe.depth_limit}"
            )
        self.universe = universe
        self.depth_max = depth_max
        self.clock = 0
        self.dbar: dict[BitString, BitString] = {}
        self.inner: set[BitString] = set()
        self.best: dict[BitString, int] = {}
        self.free = FreeIndex(depth_max, universe.granularity)

    def apply_event(self, event: EnumerationEvent) -> None:
        if event.clock != self.clock + 1:
            raise ValueError(f"event clock {event.clock} after {self.clock}")
        p, x = event.p, event.x
        if len(p) > self.depth_max:
            raise DescriptionTooLong(f"{p!r} longer than depth {self.depth_max}")
        if p in self.dbar:
            raise Redefined(f"{p!r} already describes {self.dbar[p]!r}")
        if p in self.inner or any(p[:k] in self.dbar for k in range(len(p))):
            raise PrefixConflict(f"{p!r} is comparable with an existing description")
        if not self.universe.contains(p):
            raise NotAllowed(f"{p!r} is outside the allowed set")
        self.dbar[p] = x
        for k in range(len(p)):
            self.inner.add(p[:k])
        if len(p) < self.best.get(x, INFINITY):
            self.best[x] = len(p)
        self.free.carve(p)
        self.clock = event.clock

    def is_free(self, u: BitString) -> bool:
        if u in self.inner:
            return False
        return not any(u[:k] in self.dbar for k in range(len(u) + 1))

    def c_of(self, x: BitString) -> float | int:
        """Shortest description length of ``x`` so far, or ``INFINITY``."""
        return self.best.get(x, INFINITY)

    def image(self) -> set[BitString]:
        return set(self.best)

    def allowed_set(self, n: int) -> BasicSet:
        return self.universe.allowed_set(n)

    def free_allowed_count(self, n: int) -> int:
        if n > self.depth_max:
            raise DepthExceeded(f"level {n} beyond depth {self.depth_max}")
        return self.free.count_at(n, self.allowed_set(n))

    def free_allowed_fraction(self, n: int) -> Dyadic:
        return Dyadic(self.free_allowed_count(n), n)

    def free_allowed_set(self, n: int) -> BasicSet:
        """Basic set represented by the free allowed ``n``-bit strings."""
        if n > self.depth_max:
            raise DepthExceeded(f"level {n} beyond depth {self.depth_max}")
        return self.free.free_set(n).intersection(self.allowed_set(n))

    def covered_set(self) -> BasicSet:
        return BasicSet(self.dbar)

    def free_allowed_at(self, m: int) -> BitString | None:
        """Some free allowed ``m``-bit string, or None.

        Scans free vertices from the longest fitting length down, so the
        smallest free interval that can hold an allowed ``m``-bit string is
        used, and returns its leftmost allowed extension.
        """
        allowed = self.allowed_set(m)
        full = allowed == BasicSet.full()
        for k in range(min(m, self.depth_max), -1, -1):
            for f in self.free.by_len[k]:
                if full or allowed.contains_interval(f):
                    return f + "0" * (m - k)
                inside = allowed.extensions_of(f)
                if inside:
                    v = inside[0]
                    return v + "0" * (m - len(v))
        return None


@dataclass(frozen=True)
class AliceConfig:
    c: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("c must be a positive integer")

    @property
    def epsilon(self) -> Dyadic:
        return Dyadic(1, 3 * self.c)

    @property
    def min_thickness(self) -> int:
        return 3 * self.c

    @property
    def budget(self) -> Dyadic:
        return Dyadic(1, self.c)


@dataclass(frozen=True)
class TriggerWindow:
    l: int  # noqa: E741
    L: int
    block_index: int


@dataclass
class FireRecord:
    c: int
    window: TriggerWindow
    clock: int
    n_targets: int
    targets: list[BitString]
    fraction: Dyadic


@dataclass
class AllocationLedger:
    """Alice's weight function for one ``c``; weights only ever grow."""

    c: int
    grants: dict[BitString, Dyadic] = field(default_factory=dict)
    fired: Optional[FireRecord] = None
    _total: Dyadic = field(default_factory=lambda: Dyadic(0), repr=False)

    @property
    def budget(self) -> Dyadic:
        return Dyadic(1, self.c)

    def total(self) -> Dyadic:
        return self._total

    def grant(self, x: BitString, amount: Dyadic) -> None:
        if self._total + amount > self.budget:
            raise BudgetExceeded(
                f"granting {amount} to {x!r} exceeds budget 2^-{self.c}"
            )
        self.grants[x] = self.grants.get(x, Dyadic(0)) + amount
        self._total = self._total + amount

    def q(self, x: BitString) -> Dyadic:
        return self.grants.get(x, Dyadic(0))


def scan_trigger(state: GameState, cfg: AliceConfig) -> TriggerWindow | None:
    """First block bottom where free allowed strings have become rare.

    Each block ``[lo, hi]`` is looked at through the window
    ``(lo, min(hi, depth_max))``; blocks are tried in level order and the
    window must be at least ``3c`` thick.
    """
    for block in state.universe.blocks_until(state.depth_max):
        top = block.lo
        bottom = min(block.hi, state.depth_max)
        if bottom - top < cfg.min_thickness:
            continue
        if state.free_allowed_fraction(bottom) < cfg.epsilon:
            return TriggerWindow(top, bottom, block.index)
    return None


def fresh_targets(state: GameState, length: int, count: int) -> list[BitString]:
    """The ``count`` lexicographically first ``length``-bit strings without a
    description."""
    out = []
    taken = state.best
    for i in range(1 << length):
        x = format(i, f"0{length}b") if length else ""
        if x not in taken:
            out.append(x)
            if len(out) == count:
                return out
    raise ValueError(f"fewer than {count} fresh strings of length {length}")


def fire_allocation(
    state: GameState,
    cfg: AliceConfig,
    window: TriggerWindow,
    ledger: AllocationLedger,
) -> AllocationLedger:
    if ledger.fired is not None:
        raise AlreadyFired(f"c={cfg.c} already fired at clock {ledger.fired.clock}")
    l, L = window.l, window.L
    if L - l < cfg.min_thickness:
        raise ValueError(f"window [{l}, {L}] thinner than {cfg.min_thickness}")
    block = state.universe.block_at_level(l)
    if block is None or L not in block:
        raise ValueError(f"window [{l}, {L}] is not inside one block")
    fraction = state.free_allowed_fraction(L)
    if not fraction < cfg.epsilon:
        raise ValueError(f"free allowed fraction {fraction} at {L} is not below epsilon")

    # L >= 3c, so eps * 2^L = 2^(L - 3c) is an integer.
    n_targets = (1 << (L - 3 * cfg.c)) + (1 << l)
    each = Dyadic.pow2(cfg.c - L)
    if each * n_targets > cfg.budget:
        raise BudgetExceeded(f"{n_targets} grants of {each} exceed 2^-{cfg.c}")
    targets = fresh_targets(state, L + 1, n_targets)
    for x in targets:
        ledger.grant(x, each)
    ledger.fired = FireRecord(cfg.c, window, state.clock, n_targets, targets, fraction)
    return ledger


class Bob(Protocol):
    def __call__(
        self, state: GameState, ledgers: dict[int, AllocationLedger]
    ) -> EnumerationEvent | None: ...


@dataclass
class GameTrace:
    depth_max: int
    cs: tuple[int, ...]
    step_limit: int
    halt_on_fire: bool
    universe: UniversalSet
    events: list[EnumerationEvent] = field(default_factory=list)
    fires: list[FireRecord] = field(default_factory=list)
    ledgers: dict[int, AllocationLedger] = field(default_factory=dict)
    state: Optional[GameState] = None
    status: str = "running"
    violation: Optional[tuple[EnumerationEvent, str]] = None

    @property
    def flagged(self) -> bool:
        return self.violation is not None

    def fire_for(self, c: int) -> FireRecord | None:
        ledger = self.ledgers.get(c)
        return None if ledger is None else ledger.fired


Observer = Callable[[GameState, dict[int, AllocationLedger]], None]


def run_game(
    bob: Bob,
    alice_cs: Iterable[int],
    depth_max: int,
    step_limit: int,
    universe: UniversalSet | None = None,
    halt_on_fire: bool = True,
    observer: Observer | None = None,
) -> GameTrace:
    """Play Bob against one Alice per ``c`` until something stops the run.

    A run stops at ``step_limit`` events, when Bob returns None, on a rule
    violation (the trace is then flagged) or, if ``halt_on_fire``, once every
    Alice has fired.
    """
    universe = universe or UniversalSet()
    cs = tuple(sorted(set(alice_cs)))
    configs = {c: AliceConfig(c) for c in cs}
    state = GameState(universe, depth_max)
    ledgers = {c: AllocationLedger(c) for c in cs}
    trace = GameTrace(depth_max, cs, step_limit, halt_on_fire, universe, ledgers=ledgers)
    trace.state = state
    if observer:
        observer(state, ledgers)

    while True:
        if cs and halt_on_fire and all(ledgers[c].fired for c in cs):
            trace.status = "all-fired"
            break
        if state.clock >= step_limit:
            trace.status = "step-limit"
            break
        event = bob(state, ledgers)
        if event is None:
            trace.status = "exhausted"
            break
        try:
            state.apply_event(event)
        except GameRuleError as err:
            trace.violation = (event, err.kind)
            trace.status = "flagged"
            break
        trace.events.append(event)
        for c in cs:
            if ledgers[c].fired:
                continue
            window = scan_trigger(state, configs[c])
            if window is not None:
                fire_allocation(state, configs[c], window, ledgers[c])
                trace.fires.append(ledgers[c].fired)
        if observer:
            observer(state, ledgers)
    return trace


def apply_event(state: GameState, event: EnumerationEvent) -> GameState:
    state.apply_event(event)
    return state


def is_free(state: GameState, u: BitString) -> bool:
    return state.is_free(u)


def free_allowed_fraction(state: GameState, n: int) -> Dyadic:
    return state.free_allowed_fraction(n)


def q_total(ledgers: Iterable[AllocationLedger]) -> dict[BitString, Dyadic]:
    total: dict[BitString, Dyadic] = {}
    for ledger in ledgers:
        for x, v in ledger.grants.items():
            total[x] = total.get(x, Dyadic(0)) + v
    return total


def wins_on(q: Dyadic, c: int, description_length: float | int) -> bool:
    """``q >= 2**c * 2**-C`` with ``C`` possibly infinite."""
    if description_length == INFINITY:
        return bool(q)
    return q.scaled(int(description_length)) >= Dyadic.pow2(c)


def check_win(trace: GameTrace, c: int) -> BitString | None:
    ledger = trace.ledgers.get(c)
    if ledger is None or ledger.fired is None:
        return None
    for x in ledger.fired.targets:
        if wins_on(ledger.q(x), c, trace.state.c_of(x)):
            return x
    return None
