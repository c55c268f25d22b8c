"""Finite decompressor tables: complexity lookups and the two-bit rebase.

A table maps descriptions to objects.  ``rebase`` moves every description
``p`` to a string ``a(p)`` of length ``len(p) + 2`` inside the allowed set:
the ``r``-th allowed string of that length, where ``r`` is the rank of ``p``
among strings of its own length.  Since at least a third of every layer is
allowed, there is always room.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping

from prefixdomain.dyadic import BitString, check_bits, format_bits, parse_bits
from prefixdomain.errors import DepthExceeded, ParseError
from prefixdomain.universal import UniversalSet

INFINITY = math.inf

DescriptionTable = dict[BitString, BitString]


def c_of(table: Mapping[BitString, BitString], x: BitString) -> float | int:
    return min((len(p) for p, y in table.items() if y == x), default=INFINITY)


def complexities(table: Mapping[BitString, BitString]) -> dict[BitString, int]:
    out: dict[BitString, int] = {}
    for p, x in table.items():
        if len(p) < out.get(x, INFINITY):
            out[x] = len(p)
    return out


def validate_prefix_free(table: Mapping[BitString, BitString]) -> bool:
    keys = set(table)
    return not any(p[:k] in keys for p in keys for k in range(len(p)))


def embed(p: BitString, universe: UniversalSet) -> BitString:
    """The allowed string two bits longer than ``p`` with the same rank."""
    rank = int(p, 2) if p else 0
    return universe.nth_allowed(len(p) + 2, rank)


def rebase(
    table: Mapping[BitString, BitString],
    universe: UniversalSet,
    depth_max: int | None = None,
) -> DescriptionTable:
    """Shift every description two bits down into the allowed set.

    Complexities grow by exactly 2 and the new domain lies inside the
    allowed set.  A prefix-free table may well lose prefix-freeness here.
    """
    depth_max = universe.depth_limit if depth_max is None else depth_max
    out: DescriptionTable = {}
    for p, x in table.items():
        check_bits(p)
        if len(p) > depth_max - 2:
            raise DepthExceeded(f"{p!r} needs level {len(p) + 2} > {depth_max}")
        out[embed(p, universe)] = x
    return out


def read_table(path) -> DescriptionTable:
    table: DescriptionTable = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'p x', got {line!r}")
        try:
            p, x = parse_bits(parts[0]), parse_bits(parts[1])
        except ValueError as err:
            raise ParseError(f"line {lineno}: {err}") from None
        if p in table:
            raise ParseError(f"line {lineno}: description {parts[0]} repeated")
        table[p] = x
    return table


def write_table(table: Mapping[BitString, BitString], path) -> None:
    lines = [f"{format_bits(p)} {format_bits(x)}" for p, x in table.items()]
    Path(path).write_text("".join(line + "\n" for line in lines))
