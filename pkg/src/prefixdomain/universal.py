"""The layered allowed set.

Levels are grouped into blocks ``[n, 2n]``.  Every level of a block is the
representation of one basic set of measure at least the threshold, and the
block schedule cycles through the enumeration of such sets along the Cantor
diagonal so that each set comes back infinitely often.  Levels between blocks
allow everything.
"""

from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass
from fractions import Fraction

from prefixdomain.dyadic import BasicSet, BitString, Dyadic, enumerate_basic_sets
from prefixdomain.errors import DepthExceeded


@dataclass(frozen=True)
class Block:
    index: int
    lo: int
    hi: int
    basic_set: BasicSet
    set_index: int

    def __contains__(self, level: int) -> bool:
        return self.lo <= level <= self.hi

    @property
    def thickness(self) -> int:
        return self.hi - self.lo

    def format(self) -> str:
        return f"{self.index} {self.lo} {self.hi} {self.basic_set.serialize()}"


def diagonal_pair(k: int) -> tuple[int, int]:
    """The ``k``-th pair (1-based) of the diagonal walk (1,1), (1,2), (2,1), ..."""
    if k < 1:
        raise ValueError("k must be >= 1")
    d = 1
    while d * (d + 1) // 2 < k:
        d += 1
    pos = k - d * (d - 1) // 2
    return pos, d + 1 - pos


class UniversalSet:
    """Decidable allowed set with a lazily generated block schedule.

    Parameters
    ----------
    threshold:
        Minimum measure of every scheduled basic set, in (0, 1/2].
    granularity:
        Largest ``min_level`` of the scheduled basic sets.
    depth_limit:
        Deepest level for which :meth:`allowed_count` answers.
    sets:
        Explicit list of basic sets to cycle through instead of the full
        enumeration (handy for small hand-built scenarios).
    """

    def __init__(
        self,
        threshold: Fraction = Fraction(1, 3),
        granularity: int = 4,
        depth_limit: int = 24,
        sets: list[BasicSet] | None = None,
    ):
        self.threshold = Fraction(threshold)
        if not 0 < self.threshold <= Fraction(1, 2):
            raise ValueError(f"threshold must lie in (0, 1/2], got {threshold}")
        self.granularity = granularity
        self.depth_limit = depth_limit
        if sets is None:
            self.sets = enumerate_basic_sets(self.threshold, granularity)
        else:
            for b in sets:
                if b.measure() < self.threshold or b.min_level() > granularity:
                    raise ValueError(f"{b} is too small or too fine for this universe")
            self.sets = list(sets)
        if not self.sets:
            raise ValueError("no basic sets to schedule")
        self._blocks: list[Block] = []
        self._los: list[int] = []
        self._lock = threading.Lock()

    def basic_set(self, i: int) -> BasicSet:
        """The ``i``-th enumerated set (1-based, cycling if the list is finite)."""
        return self.sets[(i - 1) % len(self.sets)]

    def _extend(self, count: int) -> None:
        with self._lock:
            while len(self._blocks) < count:
                k = len(self._blocks) + 1
                i, _ = diagonal_pair(k)
                v = self.basic_set(i)
                prev_hi = self._blocks[-1].hi if self._blocks else 0
                lo = max(prev_hi + 1, v.min_level(), 1)
                self._blocks.append(Block(k, lo, 2 * lo, v, i))
                self._los.append(lo)

    def schedule_prefix(self, count: int) -> list[Block]:
        if count < 1:
            raise ValueError("count must be >= 1")
        self._extend(count)
        return self._blocks[:count]

    def blocks_until(self, level: int) -> list[Block]:
        """Blocks whose first level is at most ``level``."""
        while not self._blocks or self._blocks[-1].lo <= level:
            self._extend(len(self._blocks) + 1)
        return [b for b in self._blocks if b.lo <= level]

    def block_at_level(self, m: int) -> Block | None:
        if m < 0:
            raise ValueError("level must be >= 0")
        while not self._blocks or self._blocks[-1].lo <= m:
            self._extend(len(self._blocks) + 1)
        i = bisect.bisect_right(self._los, m) - 1
        if i < 0:
            return None
        block = self._blocks[i]
        return block if m <= block.hi else None

    def allowed_set(self, m: int) -> BasicSet:
        """The basic set represented by the level-``m`` layer."""
        block = self.block_at_level(m)
        return BasicSet.full() if block is None else block.basic_set

    def contains(self, x: BitString) -> bool:
        block = self.block_at_level(len(x))
        if block is None:
            return True
        return block.basic_set.contains_interval(x)

    __contains__ = contains

    def allowed_count(self, m: int) -> int:
        if m > self.depth_limit:
            raise DepthExceeded(f"level {m} beyond depth limit {self.depth_limit}")
        return self.allowed_set(m).count_at(m)

    def allowed_fraction(self, m: int) -> Dyadic:
        return Dyadic(self.allowed_count(m), m)

    def layer(self, m: int) -> list[BitString]:
        """Materialized level-``m`` layer, sorted; meant for small ``m``."""
        if m > self.depth_limit:
            raise DepthExceeded(f"level {m} beyond depth limit {self.depth_limit}")
        return self.allowed_set(m).represent_at(m)

    def nth_allowed(self, m: int, rank: int) -> BitString:
        """The ``rank``-th allowed ``m``-bit string in lexicographic order."""
        return self.allowed_set(m).nth_at(m, rank)

    def describe(self) -> str:
        return f"{self.threshold} {self.granularity}"
