import math
import random

import pytest

from oracles import layer
from prefixdomain.decompressor import (
    c_of,
    complexities,
    embed,
    read_table,
    rebase,
    validate_prefix_free,
    write_table,
)
from prefixdomain.dyadic import BasicSet
from prefixdomain.errors import DepthExceeded, ParseError
from prefixdomain.universal import UniversalSet


def test_c_of():
    assert c_of({}, "1") == math.inf
    assert c_of({"01": "x"}, "x") == 2
    assert c_of({"01": "x", "1": "x"}, "x") == 1


def test_validate_prefix_free():
    assert validate_prefix_free({})
    assert validate_prefix_free({"0": "a", "10": "b"})
    assert not validate_prefix_free({"0": "a", "01": "b"})


def test_rebase_empty(universe):
    assert rebase({}, universe) == {}


def test_rebase_into_full_layer(universe):
    # level 3 allows every string, so a(p) is the rank of p written in 3 bits
    assert universe.allowed_count(3) == 8
    assert sorted(layer(3))[1] == "001"
    assert embed("1", universe) == "001"
    assert rebase({"1": "x"}, universe) == {"001": "x"}


def test_rebase_into_restricted_layer():
    u = UniversalSet(sets=[BasicSet(["1"])])
    allowed = [x for x in layer(4) if u.contains(x)]
    for rank, p in enumerate(layer(2)):
        assert embed(p, u) == allowed[rank]


def test_rebase_depth_guard(universe):
    with pytest.raises(DepthExceeded):
        rebase({"0" * 23: "x"}, universe)


def test_rebase_not_claimed_prefix_free(universe):
    # full layers only relabel, so prefix structure survives there
    table = {"0": "a", "10": "b"}
    assert rebase(table, universe) == {"000": "a", "0010": "b"}
    assert validate_prefix_free(rebase(table, universe))
    # a layer change between levels 6 and 7 breaks it
    u = UniversalSet(sets=[BasicSet(["0"]), BasicSet(["0001", "001", "01", "1"])])
    table = {"1000": "a", "01000": "b"}
    assert validate_prefix_free(table)
    v = rebase(table, u)
    assert v == {"001000": "a", "0010000": "b"}
    assert not validate_prefix_free(v)


def _random_table(rng, max_len=10, size=40):
    table = {}
    for _ in range(size):
        n = rng.randint(0, max_len)
        p = "".join(rng.choice("01") for _ in range(n))
        table[p] = "".join(rng.choice("01") for _ in range(rng.randint(0, 4)))
    return table


@pytest.mark.parametrize("seed", range(10))
def test_rebase_properties(universe, seed):
    rng = random.Random(seed)
    u_table = _random_table(rng)
    v_table = rebase(u_table, universe)
    assert len(v_table) == len(u_table)
    assert all(universe.contains(q) for q in v_table)
    before = complexities(u_table)
    after = complexities(v_table)
    assert after.keys() == before.keys()
    for x in before:
        assert after[x] == before[x] + 2


def test_table_io(tmp_path):
    table = {"": "1", "01": "", "110": "0"}
    path = tmp_path / "table.txt"
    write_table(table, path)
    assert path.read_text().splitlines()[0] == "eps 1"
    assert read_table(path) == table
    path.write_text("01 1\n01 0\n")
    with pytest.raises(ParseError):
        read_table(path)
