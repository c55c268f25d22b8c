"""Binary strings, dyadic intervals and basic subsets of Cantor space.

A binary string ``x`` stands for the interval ``I_x`` of infinite sequences
that start with ``x``.  A *basic set* is a finite union of such intervals; it
is stored as its minimal antichain (no element is a prefix of another and no
two siblings are both present), which makes equality structural.

Strings are plain ``str`` objects over ``"0"``/``"1"``.  All measures are
exact dyadic rationals.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Iterator

from prefixdomain.errors import LevelTooLow

BitString = str

EMPTY_TOKEN = "eps"


def check_bits(x: str) -> str:
    if x.strip("01"):
        raise ValueError(f"not a binary string: {x!r}")
    return x


def format_bits(x: BitString) -> str:
    return x if x else EMPTY_TOKEN


def parse_bits(token: str) -> BitString:
    if token == EMPTY_TOKEN:
        return ""
    return check_bits(token)


def level_key(x: BitString) -> tuple[int, str]:
    """Sort key: shorter strings first, then lexicographic."""
    return (len(x), x)


def is_prefix(u: BitString, v: BitString) -> bool:
    return v.startswith(u)


def comparable(u: BitString, v: BitString) -> bool:
    return u.startswith(v) or v.startswith(u)


def strings_of_length(n: int) -> Iterator[BitString]:
    if n == 0:
        yield ""
        return
    for i in range(1 << n):
        yield format(i, f"0{n}b")


@total_ordering
class Dyadic:
    """Exact non-negative number ``numerator / 2**exponent`` in lowest terms."""

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        if numerator < 0 or exponent < 0:
            raise ValueError("dyadic measures are non-negative with exponent >= 0")
        if numerator == 0:
            exponent = 0
        else:
            shift = min((numerator & -numerator).bit_length() - 1, exponent)
            numerator >>= shift
            exponent -= shift
        self.numerator = numerator
        self.exponent = exponent

    @classmethod
    def pow2(cls, k: int) -> "Dyadic":
        """``2**k`` for any integer ``k``."""
        if k >= 0:
            return cls(1 << k, 0)
        return cls(1, -k)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Dyadic":
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not dyadic")
        return cls(value.numerator, den.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def scaled(self, k: int) -> "Dyadic":
        """Multiply by ``2**k``."""
        if k >= 0:
            return Dyadic(self.numerator << k, self.exponent)
        return Dyadic(self.numerator, self.exponent - k)

    def _coerce(self, other) -> Fraction:
        if isinstance(other, Dyadic):
            return other.as_fraction()
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        e = max(self.exponent, other.exponent)
        return Dyadic(
            (self.numerator << (e - self.exponent))
            + (other.numerator << (e - other.exponent)),
            e,
        )

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        e = max(self.exponent, other.exponent)
        return Dyadic(
            (self.numerator << (e - self.exponent))
            - (other.numerator << (e - other.exponent)),
            e,
        )

    def __rsub__(self, other):
        if isinstance(other, int):
            return Dyadic(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return Dyadic(self.numerator * other, self.exponent)
        if isinstance(other, Dyadic):
            return Dyadic(
                self.numerator * other.numerator, self.exponent + other.exponent
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return (self.numerator, self.exponent) == (other.numerator, other.exponent)
        theirs = self._coerce(other)
        if theirs is NotImplemented:
            return NotImplemented
        return self.as_fraction() == theirs

    def __lt__(self, other):
        theirs = self._coerce(other)
        if theirs is NotImplemented:
            return NotImplemented
        # Fraction comparison cross-multiplies integers; no rounding.
        return self.as_fraction() < theirs

    def __hash__(self):
        return hash(self.as_fraction())

    def __bool__(self):
        return self.numerator != 0

    def __repr__(self):
        return f"Dyadic({self.numerator}, {self.exponent})"

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


def _drop_extensions(sorted_strings: Iterable[BitString]) -> list[BitString]:
    # In lexicographic order every extension of x directly follows x.
    kept: list[BitString] = []
    for x in sorted_strings:
        if kept and x.startswith(kept[-1]):
            continue
        kept.append(x)
    return kept


def _merge_siblings(antichain: list[BitString]) -> list[BitString]:
    stack: list[BitString] = []
    for x in antichain:
        stack.append(x)
        while len(stack) >= 2:
            a, b = stack[-2], stack[-1]
            if a and len(a) == len(b) and a[:-1] == b[:-1] and a[-1] == "0" and b[-1] == "1":
                stack[-2:] = [a[:-1]]
            else:
                break
    return stack


class BasicSet:
    """Finite union of dyadic intervals, kept as its canonical antichain.

    ``elements`` is the sorted minimal antichain; two basic sets are equal
    exactly when they cover the same subset of Cantor space.
    """

    __slots__ = ("elements", "_index")

    def __init__(self, strings: Iterable[BitString] = ()):
        ordered = sorted(set(strings))
        for x in ordered:
            check_bits(x)
        self.elements: tuple[BitString, ...] = tuple(
            _merge_siblings(_drop_extensions(ordered))
        )
        self._index = frozenset(self.elements)

    @classmethod
    def _trusted(cls, canonical: Iterable[BitString]) -> "BasicSet":
        obj = cls.__new__(cls)
        obj.elements = tuple(canonical)
        obj._index = frozenset(obj.elements)
        return obj

    @classmethod
    def full(cls) -> "BasicSet":
        return cls._trusted([""])

    @classmethod
    def empty(cls) -> "BasicSet":
        return cls._trusted([])

    # -- serialization -----------------------------------------------------

    def serialize(self) -> str:
        if not self.elements:
            return "{}"
        return ",".join(format_bits(x) for x in self.elements)

    @classmethod
    def parse(cls, text: str) -> "BasicSet":
        text = text.strip()
        if not text or text == "{}":
            return cls.empty()
        return cls(parse_bits(tok.strip()) for tok in text.split(","))

    # -- scalar queries ----------------------------------------------------

    def measure(self) -> Dyadic:
        total = Dyadic(0)
        for x in self.elements:
            total = total + Dyadic(1, len(x))
        return total

    def min_level(self) -> int:
        return max((len(x) for x in self.elements), default=0)

    def count_at(self, n: int) -> int:
        """Number of ``n``-bit strings whose interval lies inside the set."""
        if n < self.min_level():
            raise LevelTooLow(f"level {n} < min_level {self.min_level()}")
        return sum(1 << (n - len(x)) for x in self.elements)

    def is_empty(self) -> bool:
        return not self.elements

    def contains_interval(self, x: BitString) -> bool:
        """True iff ``I_x`` lies inside the set."""
        index = self._index
        return any(x[:k] in index for k in range(len(x) + 1))

    def meets_interval(self, x: BitString) -> bool:
        """True iff ``I_x`` and the set share positive measure."""
        if self.contains_interval(x):
            return True
        i = bisect.bisect_left(self.elements, x)
        return i < len(self.elements) and self.elements[i].startswith(x)

    def extensions_of(self, x: BitString) -> list[BitString]:
        """Elements lying strictly inside ``I_x``."""
        lo = bisect.bisect_left(self.elements, x)
        out = []
        for y in self.elements[lo:]:
            if not y.startswith(x):
                break
            out.append(y)
        return out

    def represent_at(self, n: int) -> list[BitString]:
        """All ``n``-bit strings whose intervals tile the set, sorted."""
        if n < self.min_level():
            raise LevelTooLow(f"level {n} < min_level {self.min_level()}")
        out = []
        for x in self.elements:
            out.extend(x + tail for tail in strings_of_length(n - len(x)))
        return out

    def nth_at(self, n: int, rank: int) -> BitString:
        """The ``rank``-th (0-based, lexicographic) string of ``represent_at(n)``."""
        if n < self.min_level():
            raise LevelTooLow(f"level {n} < min_level {self.min_level()}")
        for x in self.elements:
            size = 1 << (n - len(x))
            if rank < size:
                if n == len(x):
                    return x
                return x + format(rank, f"0{n - len(x)}b")
            rank -= size
        raise IndexError("rank beyond the layer")

    # -- algebra -----------------------------------------------------------

    def union(self, other: "BasicSet") -> "BasicSet":
        return BasicSet(self.elements + other.elements)

    def intersection(self, other: "BasicSet") -> "BasicSet":
        if len(self.elements) > len(other.elements):
            self, other = other, self
        out = []
        for a in self.elements:
            if other.contains_interval(a):
                out.append(a)
            else:
                out.extend(other.extensions_of(a))
        return BasicSet(out)

    def complement(self) -> "BasicSet":
        out: list[BitString] = []

        def walk(prefix: str, lo: int, hi: int) -> None:
            if lo == hi:
                out.append(prefix)
                return
            if self.elements[lo] == prefix:
                return
            mid = bisect.bisect_left(self.elements, prefix + "1", lo, hi)
            walk(prefix + "0", lo, mid)
            walk(prefix + "1", mid, hi)

        walk("", 0, len(self.elements))
        return BasicSet._trusted(out)

    def difference(self, other: "BasicSet") -> "BasicSet":
        return self.intersection(other.complement())

    def disjoint(self, other: "BasicSet") -> bool:
        if len(self.elements) > len(other.elements):
            self, other = other, self
        return not any(other.meets_interval(a) for a in self.elements)

    def issubset(self, other: "BasicSet") -> bool:
        return all(other.contains_interval(a) for a in self.elements)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def __invert__(self) -> "BasicSet":
        return self.complement()

    def __eq__(self, other):
        if not isinstance(other, BasicSet):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"BasicSet({{{self.serialize()}}})"


def measure(b: BasicSet) -> Dyadic:
    return b.measure()


def min_level(b: BasicSet) -> int:
    return b.min_level()


def represent_at(b: BasicSet, n: int) -> list[BitString]:
    return b.represent_at(n)


def union(a: BasicSet, b: BasicSet) -> BasicSet:
    return a.union(b)


def complement(b: BasicSet) -> BasicSet:
    return b.complement()


def disjoint(a: BasicSet, b: BasicSet) -> bool:
    return a.disjoint(b)


def interval_contained(b: BasicSet, x: BitString) -> bool:
    return b.contains_interval(x)


def _check_threshold(threshold: Fraction) -> Fraction:
    threshold = Fraction(threshold)
    if not 0 < threshold <= Fraction(1, 2):
        raise ValueError(f"threshold must lie in (0, 1/2], got {threshold}")
    return threshold


@lru_cache(maxsize=None)
def _enumerate(threshold: Fraction, granularity_limit: int) -> tuple[BasicSet, ...]:
    found: list[BasicSet] = []
    for level in range(granularity_limit + 1):
        layer = list(strings_of_length(level))
        need = threshold * (1 << level)
        batch = []
        for mask in range(1, 1 << len(layer)):
            chosen = [layer[i] for i in range(len(layer)) if mask >> i & 1]
            if len(chosen) < need:
                continue
            b = BasicSet(chosen)
            if b.min_level() != level:
                continue
            batch.append((chosen, b))
        batch.sort(key=lambda item: item[0])
        found.extend(b for _, b in batch)
    return tuple(found)


def enumerate_basic_sets(
    threshold: Fraction = Fraction(1, 3), granularity_limit: int = 4
) -> list[BasicSet]:
    """All canonical basic sets with measure >= ``threshold`` and
    ``min_level <= granularity_limit``.

    Ordered by ``min_level``, then lexicographically by the sorted list of
    strings representing the set at its own ``min_level``.  The cost is
    ``2**(2**granularity_limit)`` subset checks, so limits above 4 are not
    practical.
    """
    threshold = _check_threshold(threshold)
    if granularity_limit < 0:
        raise ValueError("granularity_limit must be >= 0")
    return list(_enumerate(threshold, granularity_limit))

