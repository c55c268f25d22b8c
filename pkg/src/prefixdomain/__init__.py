"""Restricted prefix-free description games over a layered allowed set."""

from prefixdomain.dyadic import BasicSet, Dyadic, enumerate_basic_sets
from prefixdomain.kraft_chaitin import Allocator
from prefixdomain.universal import Block, UniversalSet

__all__ = [
    "Allocator",
    "BasicSet",
    "Block",
    "Dyadic",
    "UniversalSet",
    "enumerate_basic_sets",
]
