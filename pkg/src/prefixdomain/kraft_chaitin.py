"""Online Kraft-Chaitin allocation.

Requests arrive one at a time as lengths ``n``; each is answered immediately
with an ``n``-bit string so that no answer is a prefix of another.  As long
as the requested ``2**-n`` add up to at most 1, every request is served.

The free space is kept as at most one free interval per length, like the
binary expansion of the remaining measure (a buddy allocator that never
frees).
"""

from __future__ import annotations

from prefixdomain.dyadic import BitString, Dyadic
from prefixdomain.errors import KraftExceeded


class Allocator:
    def __init__(self):
        self.free: dict[int, BitString] = {0: ""}
        self.spent = Dyadic(0)
        self.emitted: list[BitString] = []

    def remaining(self) -> Dyadic:
        return Dyadic(1) - self.spent

    def free_intervals(self) -> list[BitString]:
        return [self.free[k] for k in sorted(self.free)]

    def allocate(self, n: int) -> BitString:
        """Serve a request for an ``n``-bit string.

        The smallest free interval that can hold ``n`` bits is used: its
        leftmost depth-``n`` extension is returned and the right siblings
        along the way go back to the free pool.  Raises
        :class:`KraftExceeded` (leaving the state untouched) when
        ``2**-n`` exceeds the remaining measure.
        """
        if n < 0:
            raise ValueError("requested length must be >= 0")
        fitting = [k for k in self.free if k <= n]
        if not fitting:
            raise KraftExceeded(
                f"2^-{n} exceeds remaining measure {self.remaining()}"
            )
        k = max(fitting)
        base = self.free.pop(k)
        # k is the longest free length <= n, so lengths k+1..n are vacant.
        for j in range(k + 1, n + 1):
            self.free[j] = base + "0" * (j - k - 1) + "1"
        out = base + "0" * (n - k)
        self.spent = self.spent + Dyadic(1, n)
        self.emitted.append(out)
        return out

    def allocate_many(self, lengths) -> list[BitString]:
        return [self.allocate(n) for n in lengths]


def new_allocator() -> Allocator:
    return Allocator()


def allocate(state: Allocator, n: int) -> BitString:
    return state.allocate(n)


def remaining(state: Allocator) -> Dyadic:
    return state.remaining()
