from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_basic_sets, expanded_measure, leaves, pairwise_prefix_free
from prefixdomain.dyadic import (
    BasicSet,
    Dyadic,
    complement,
    disjoint,
    enumerate_basic_sets,
    interval_contained,
    measure,
    min_level,
    represent_at,
    union,
)
from prefixdomain.errors import LevelTooLow

bits = st.text(alphabet="01", max_size=8)
basic_sets = st.lists(bits, max_size=12).map(BasicSet)


class TestDyadic:
    def test_canonical_form(self):
        d = Dyadic(12, 5)
        assert (d.numerator, d.exponent) == (3, 3)
        assert Dyadic(0, 9) == Dyadic(0)
        assert Dyadic(8, 3) == 1

    def test_arithmetic_is_exact(self):
        assert Dyadic(1, 1) + Dyadic(1, 2) == Dyadic(3, 2)
        assert Dyadic(1) - Dyadic(1, 3) == Fraction(7, 8)
        assert Dyadic(3, 2) * 4 == 3
        assert Dyadic.pow2(-13) * 2176 == Fraction(17, 64)

    def test_compare_with_one_third(self):
        third = Fraction(1, 3)
        assert Dyadic(3, 3) > third
        assert Dyadic(5, 4) < third
        # 1/3 sits strictly between consecutive dyadics at every scale
        for e in range(1, 40):
            k = (1 << e) // 3
            assert Dyadic(k, e) < third < Dyadic(k + 1, e)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Dyadic(1) - Dyadic(2)

    @given(st.integers(0, 2**40), st.integers(0, 40), st.integers(0, 2**40), st.integers(0, 40))
    def test_matches_fraction(self, a, e, b, f):
        x, y = Dyadic(a, e), Dyadic(b, f)
        fx, fy = Fraction(a, 2**e), Fraction(b, 2**f)
        assert (x + y).as_fraction() == fx + fy
        assert (x < y) == (fx < fy)
        assert (x == y) == (fx == fy)
        assert x.as_fraction() == fx
        assert x.numerator % 2 == 1 or x.exponent == 0


class TestBasicSetExamples:
    def test_measure(self):
        assert measure(BasicSet()) == 0
        assert measure(BasicSet([""])) == 1
        assert measure(BasicSet(["0", "10"])) == Fraction(3, 4)
        # oracle: leaves {00, 01, 10} out of 4
        assert expanded_measure(["0", "10"], 2) == Fraction(3, 4)

    def test_represent_at(self):
        assert set(represent_at(BasicSet([""]), 2)) == {"00", "01", "10", "11"}
        assert set(represent_at(BasicSet(["0"]), 3)) == {"000", "001", "010", "011"}
        with pytest.raises(LevelTooLow):
            represent_at(BasicSet(["0", "10"]), 1)

    def test_min_level(self):
        assert min_level(BasicSet([""])) == 0
        assert min_level(BasicSet(["0", "10"])) == 2
        assert min_level(BasicSet()) == 0
        assert represent_at(BasicSet(), 5) == []

    def test_union_complement_disjoint(self):
        assert union(BasicSet(["0"]), BasicSet(["1"])) == BasicSet([""])
        assert complement(BasicSet(["0"])) == BasicSet(["1"])
        assert disjoint(BasicSet(["00"]), BasicSet(["01"]))
        assert not disjoint(BasicSet(["0"]), BasicSet(["01"]))

    def test_interval_contained(self):
        assert interval_contained(BasicSet(["0"]), "011")
        assert not interval_contained(BasicSet(["0"]), "1")
        assert BasicSet(["00", "01"]).elements == ("0",)
        assert interval_contained(BasicSet(["00", "01"]), "0")

    def test_serialization(self):
        b = BasicSet(["0", "10", "110"])
        assert b.serialize() == "0,10,110"
        assert BasicSet.parse("0,10,110") == b
        assert BasicSet.parse("eps") == BasicSet.full()
        assert BasicSet.full().serialize() == "eps"
        assert BasicSet.parse(BasicSet().serialize()) == BasicSet()

    def test_nth_at_matches_layer(self):
        b = BasicSet(["00", "1", "011"])
        layer = b.represent_at(5)
        assert [b.nth_at(5, r) for r in range(len(layer))] == layer
        with pytest.raises(IndexError):
            b.nth_at(5, len(layer))


class TestEnumeration:
    def test_limit_one(self):
        assert enumerate_basic_sets(Fraction(1, 3), 1) == [
            BasicSet([""]),
            BasicSet(["0"]),
            BasicSet(["1"]),
        ]

    def test_limit_zero(self):
        assert enumerate_basic_sets(Fraction(1, 3), 0) == [BasicSet([""])]

    @pytest.mark.parametrize("threshold", [Fraction(1, 3), Fraction(1, 2), Fraction(1, 5)])
    def test_matches_brute_force(self, threshold):
        expected = [BasicSet(cells) for _, cells in brute_basic_sets(threshold, 3)]
        assert enumerate_basic_sets(threshold, 3) == expected

    def test_postconditions_at_granularity_four(self):
        sets = enumerate_basic_sets(Fraction(1, 3), 4)
        assert len(set(sets)) == len(sets)
        assert all(b.measure() >= Fraction(1, 3) for b in sets)
        keys = [(b.min_level(), b.represent_at(b.min_level())) for b in sets]
        assert keys == sorted(keys)

    @pytest.mark.parametrize("bad", [Fraction(0), Fraction(2, 3)])
    def test_threshold_range(self, bad):
        with pytest.raises(ValueError):
            enumerate_basic_sets(bad, 2)


class TestBasicSetProperties:
    @given(basic_sets)
    def test_canonical_antichain(self, b):
        assert pairwise_prefix_free(b.elements)
        present = set(b.elements)
        assert not any(x and x[:-1] + "1" in present and x.endswith("0") for x in present)

    @given(st.lists(bits, max_size=12))
    def test_canonicalization_preserves_region(self, strings):
        b = BasicSet(strings)
        assert leaves(b.elements, 8) == leaves(strings, 8)
        assert b.measure() == expanded_measure(strings, 8)

    @settings(deadline=None)
    @given(basic_sets, st.integers(0, 16))
    def test_representation_measure(self, b, level):
        n = max(b.min_level(), level)
        rep = b.represent_at(n)
        assert BasicSet(rep) == b
        assert Fraction(len(rep), 2**n) == b.measure()

    @given(basic_sets)
    def test_double_complement(self, b):
        assert b.complement().complement() == b
        assert b.complement().measure() == 1 - b.measure()
        assert b.disjoint(b.complement())

    @given(basic_sets, basic_sets, basic_sets)
    def test_union_laws(self, a, b, c):
        assert a | b == b | a
        assert (a | b) | c == a | (b | c)
        assert a | a == a
        assert (a | b).measure() + (a & b).measure() == a.measure() + b.measure()
        assert (a | b).measure() >= a.measure()

    @given(basic_sets, basic_sets)
    def test_intersection_and_disjointness(self, a, b):
        depth = 8
        assert leaves((a & b).elements, depth) == leaves(a.elements, depth) & leaves(b.elements, depth)
        assert a.disjoint(b) == (not leaves(a.elements, depth) & leaves(b.elements, depth))
        assert leaves((a - b).elements, depth) == leaves(a.elements, depth) - leaves(b.elements, depth)
        if a.disjoint(b):
            assert (a | b).measure() == a.measure() + b.measure()

    @settings(max_examples=5, deadline=None)
    @given(st.lists(st.text(alphabet="01", min_size=12, max_size=12), min_size=1, max_size=4096))
    def test_large_antichain_prefix_free(self, strings):
        b = BasicSet(strings)
        assert pairwise_prefix_free(b.elements)
