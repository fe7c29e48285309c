"""Brute-force reference implementations."""

import random

import pytest

from conftest import random_instance
from wcfg.grammar import (Restriction, WeightedGrammar, binary, epsilon,
                          terminal)
from wcfg.oracle import (INF, OracleGuardError, _edit_distance, dc_closure,
                         enumerate_by_expansion, enumerate_min_weights,
                         exhaustive_min_cost, language_of_length, min_edit,
                         min_hamming, parse_min_weight)
from wcfg.propagator import DomainStore


def test_parse_min_weight_g0(g0):
    assert parse_min_weight(g0, "ab") == 3
    assert parse_min_weight(g0, "aa") == 5
    assert parse_min_weight(g0, "bb") == 5
    assert parse_min_weight(g0, "ba") == 7
    assert parse_min_weight(g0, "a") == INF
    assert parse_min_weight(g0, "aba") == INF


def test_parse_min_weight_respects_restrictions():
    r = Restriction(mask_name="m", mask=(False, True))
    g = WeightedGrammar.create(
        ["a", "b"], ["S", "A", "B"], "S",
        [binary("S", "A", "B"), terminal("A", "a"),
         terminal("B", "a", restriction=r), terminal("B", "b")])
    assert parse_min_weight(g, "aa") == 0        # position 2 allows B -> a
    assert parse_min_weight(g, "aa", start_pos=2) == INF


def test_parse_min_weight_with_epsilon():
    g = WeightedGrammar.create(
        ["a", "b"], ["S", "A", "B"], "S",
        [binary("S", "A", "B"), terminal("A", "a"), epsilon("A", 2),
         terminal("B", "b")])
    assert parse_min_weight(g, "ab") == 0
    assert parse_min_weight(g, "b") == 2
    assert parse_min_weight(g, "") == INF


def test_enumerators_agree(g0):
    table = enumerate_min_weights(g0, 3)
    assert table == {"aa": 5, "ab": 3, "ba": 7, "bb": 5}
    assert enumerate_by_expansion(g0, 3, weight_cap=50) == table


def test_enumerators_agree_on_random_grammars():
    rng = random.Random(31)
    for _ in range(40):
        grammar, _, _ = random_instance(rng)
        a = enumerate_min_weights(grammar, 4)
        b = enumerate_by_expansion(grammar, 4, weight_cap=40)
        # the expansion enumerator only sees strings within the weight cap
        assert {s: w for s, w in a.items() if w <= 40} == b


def test_guards_raise():
    g = WeightedGrammar.create(["a"], ["S"], "S", [terminal("S", "a")])
    with pytest.raises(OracleGuardError):
        enumerate_min_weights(g, 9)
    with pytest.raises(OracleGuardError):
        enumerate_by_expansion(g, 9, weight_cap=1)
    restricted = WeightedGrammar.create(
        ["a"], ["S"], "S",
        [terminal("S", "a", restriction=Restriction(j_lo=1))])
    with pytest.raises(OracleGuardError):
        enumerate_by_expansion(restricted, 2, weight_cap=1)
    huge = DomainStore.full(30, "ab")
    with pytest.raises(OracleGuardError):
        dc_closure(g, 1, huge)


def test_dc_closure_g0(g0):
    full = DomainStore.full(2, g0.terminals)
    assert dc_closure(g0, 3, full) == DomainStore([{"a"}, {"b"}])
    assert dc_closure(g0, 2, full).failed
    assert dc_closure(g0, 7, full) == full


def test_distances():
    assert _edit_distance("kitten", "sitting") == 3
    assert _edit_distance("", "abc") == 3
    table = {"ab": 0, "bb": 0}
    assert min_hamming("aa", table) == 1
    assert min_hamming("aaa", table) == INF
    assert min_edit("a", table) == 1
    assert min_edit("ab", table) == 0
    assert min_hamming("x", {}) == INF


def test_language_of_length(g0):
    assert language_of_length(g0, 2) == {"aa": 5, "ab": 3, "ba": 7, "bb": 5}
    assert language_of_length(g0, 2, budget=5) == {"aa": 5, "ab": 3, "bb": 5}
    assert language_of_length(g0, 3) == {}


def test_language_of_length_matches_enumeration():
    rng = random.Random(32)
    for _ in range(30):
        grammar, _, _ = random_instance(rng)
        table = enumerate_min_weights(grammar, 4)
        for n in range(1, 5):
            expect = {s: w for s, w in table.items() if len(s) == n}
            assert language_of_length(grammar, n) == expect


def test_exhaustive_min_cost(g0):
    # no demands: twice the cheapest string
    assert exhaustive_min_cost(g0, 2, 2) == 6
    # both employees must start with b: 2 * bb
    assert exhaustive_min_cost(g0, 2, 2, {(1, "b"): 1}) == 10
    # more employees demanded than exist
    assert exhaustive_min_cost(g0, 2, 2, {(1, "b"): 2}) is None
    # empty language
    assert exhaustive_min_cost(g0, 3, 1) is None
