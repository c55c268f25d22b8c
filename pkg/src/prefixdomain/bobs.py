"""Enumeration strategies for Bob.

A Bob is any callable ``bob(state, ledgers)`` returning the next
:class:`EnumerationEvent` or None when it has nothing left to enumerate.
All randomized Bobs draw from their own seeded ``random.Random``.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from prefixdomain.dyadic import BitString
from prefixdomain.game import AllocationLedger, EnumerationEvent, GameState


def _random_bits(rng: random.Random, n: int) -> str:
    if n == 0:
        return ""
    return format(rng.getrandbits(n), f"0{n}b")


def random_free_allowed(
    state: GameState,
    rng: random.Random,
    lo: int = 0,
    hi: int | None = None,
    tries: int = 64,
) -> BitString | None:
    """A random free allowed string with length in ``[lo, hi]``.

    Rejection-samples a free vertex and a level; after ``tries`` misses it
    falls back to a deterministic scan so that None really means exhausted.
    """
    hi = state.depth_max if hi is None else min(hi, state.depth_max)
    items = state.free.items
    for _ in range(tries):
        if not items:
            return None
        f = rng.choice(items)
        if len(f) > hi:
            continue
        m = rng.randint(max(len(f), lo), hi)
        allowed = state.allowed_set(m)
        if allowed.contains_interval(f):
            return f + _random_bits(rng, m - len(f))
        inside = allowed.extensions_of(f)
        if inside:
            v = rng.choice(inside)
            return v + _random_bits(rng, m - len(v))
    for m in range(lo, hi + 1):
        p = state.free_allowed_at(m)
        if p is not None:
            return p
    return None


class ReplayBob:
    """Re-emits a recorded event list, violations included."""

    def __init__(self, events: Iterable[EnumerationEvent]):
        self.events = list(events)
        self.cursor = 0

    def __call__(self, state, ledgers):
        if self.cursor >= len(self.events):
            return None
        event = self.events[self.cursor]
        self.cursor += 1
        return event


class RandomBob:
    def __init__(self, seed: int, object_bits: int = 10):
        self.rng = random.Random(seed)
        self.object_bits = object_bits

    def __call__(self, state, ledgers):
        p = random_free_allowed(state, self.rng)
        if p is None:
            return None
        x = _random_bits(self.rng, self.object_bits)
        return EnumerationEvent(p, x, state.clock + 1)


class GreedyKCBob:
    """Serves ``(length, object)`` requests Kraft-Chaitin style.

    Each request gets the leftmost allowed extension of the smallest free
    vertex that can hold it; requests with no free allowed string of the
    requested length are skipped.
    """

    def __init__(self, requests: Sequence[tuple[int, BitString]]):
        self.requests = list(requests)
        self.cursor = 0
        self.skipped: list[tuple[int, BitString]] = []

    @classmethod
    def from_seed(
        cls, seed: int, count: int, depth: int, object_bits: int = 10
    ) -> "GreedyKCBob":
        rng = random.Random(seed)
        return cls(
            [(rng.randint(1, depth), _random_bits(rng, object_bits)) for _ in range(count)]
        )

    def __call__(self, state, ledgers):
        while self.cursor < len(self.requests):
            n, x = self.requests[self.cursor]
            self.cursor += 1
            if n > state.depth_max:
                self.skipped.append((n, x))
                continue
            p = state.free_allowed_at(n)
            if p is None:
                self.skipped.append((n, x))
                continue
            return EnumerationEvent(p, x, state.clock + 1)
        return None


class AdversarialBob:
    """Drains free space, then races to describe Alice's targets.

    Before any Alice fires, Bob enumerates random free allowed descriptions
    with lengths in ``levels`` for fresh random objects.  Once targets exist
    he describes them one by one.  With ``mode="shortest"`` each target gets
    the shortest free allowed string; with ``mode="packing"`` Bob uses the
    longest lengths not exceeding the trigger level first, which maximizes
    the number of targets he can serve within that level.
    """

    modes = ("shortest", "packing")

    def __init__(
        self,
        seed: int,
        levels: tuple[int, int] | None = None,
        mode: str = "shortest",
        object_bits: int = 12,
    ):
        if mode not in self.modes:
            raise ValueError(f"unknown mode {mode!r}")
        self.rng = random.Random(seed)
        self.levels = levels
        self.mode = mode
        self.object_bits = object_bits
        self._cursor: dict[int, int] = {}

    def _next_target(self, state: GameState, ledgers: dict[int, AllocationLedger]):
        for c in sorted(ledgers):
            fired = ledgers[c].fired
            if fired is None:
                continue
            i = self._cursor.get(c, 0)
            while i < len(fired.targets) and fired.targets[i] in state.best:
                i += 1
            self._cursor[c] = i
            if i < len(fired.targets):
                return fired.targets[i], fired.window.L
        return None

    def _serve(self, state: GameState, bottom: int) -> BitString | None:
        depth = state.depth_max
        if self.mode == "shortest":
            order = range(depth + 1)
        else:
            order = [*range(min(bottom, depth), -1, -1), *range(bottom + 1, depth + 1)]
        for m in order:
            p = state.free_allowed_at(m)
            if p is not None:
                return p
        return None

    def __call__(self, state, ledgers):
        pending = self._next_target(state, ledgers)
        if pending is not None:
            x, bottom = pending
            p = self._serve(state, bottom)
            return None if p is None else EnumerationEvent(p, x, state.clock + 1)
        if ledgers and all(ledger.fired for ledger in ledgers.values()):
            return None
        lo, hi = self.levels or (0, state.depth_max)
        p = random_free_allowed(state, self.rng, lo, hi)
        if p is None:
            return None
        return EnumerationEvent(p, _random_bits(self.rng, self.object_bits), state.clock + 1)


BOBS = ("random", "greedy_kc", "adversarial", "replay")
