"""Soft grammar constraints: Hamming and edit encodings."""

import random

import pytest

from conftest import random_soft_triple, soft_oracle_domains
from wcfg.grammar import WeightedGrammar, binary, ext_left, terminal
from wcfg.propagator import INFEASIBLE, DomainStore, propagate
from wcfg.soft import (SOFT_TAG, edit_encoding, hamming_encoding,
                       propagate_epsilon)


def tiny_base():
    # L = {ab} at weight 0
    return WeightedGrammar.create(
        ["a", "b"], ["S", "A", "B"], "S",
        [binary("S", "A", "B"), terminal("A", "a"), terminal("B", "b")])


def test_hamming_encoding_production_set():
    enc = hamming_encoding(tiny_base())
    got = {(p.lhs, p.terminal, p.weight) for p in enc.productions
           if p.kind == "terminal"}
    assert got == {("A", "a", 0), ("A", "b", 1), ("B", "b", 0), ("B", "a", 1)}
    assert any(name == SOFT_TAG for name, _ in enc.masks)
    assert not enc.has_epsilon


def test_hamming_semantics_on_tiny_base():
    enc = hamming_encoding(tiny_base())
    full = DomainStore.full(2, "ab")
    assert propagate(enc, 0, full).domains == DomainStore([{"a"}, {"b"}])
    # one substitution allowed: everything within Hamming distance 1
    assert propagate(enc, 1, full).domains == full


def test_edit_encoding_golden_shape():
    enc = edit_encoding(tiny_base())
    assert enc.has_epsilon
    assert not enc.strict_cnf
    eps = {(p.lhs, p.weight) for p in enc.productions if p.kind == "epsilon"}
    assert eps == {("A", 1), ("B", 1)}
    # insertions were normalized into binary productions via preterminals
    assert all(p.kind in ("binary", "terminal", "epsilon")
               for p in enc.productions)
    pre = {nt for nt in enc.nonterminals if nt.startswith("T_")}
    assert pre == {"T_a", "T_b"}


def test_edit_semantics_on_tiny_base():
    enc = edit_encoding(tiny_base())
    # "b" is one deletion away from "ab"
    assert propagate_epsilon(enc, 1, DomainStore([{"b"}])).root_min == 1
    assert propagate_epsilon(enc, 0, DomainStore([{"b"}])) is INFEASIBLE
    # "aab" is one insertion away
    res = propagate_epsilon(enc, 1, DomainStore([{"a"}, {"a"}, {"b"}]))
    assert res.root_min == 1
    # "ba" needs two edits
    assert propagate_epsilon(enc, 1, DomainStore([{"b"}, {"a"}])) is INFEASIBLE


def test_encoding_rejects_reencoding_and_bad_bases():
    enc = hamming_encoding(tiny_base())
    with pytest.raises(ValueError):
        hamming_encoding(enc)
    with pytest.raises(ValueError):
        edit_encoding(enc)
    noncnf = WeightedGrammar.create(
        ["a"], ["S"], "S", [terminal("S", "a"), ext_left("S", "S", "a", 1)])
    with pytest.raises(ValueError):
        hamming_encoding(noncnf)


def test_sigma_extension_adds_substitutions():
    enc = hamming_encoding(tiny_base(), sigma=["a", "b", "c"])
    assert "c" in enc.terminals
    # "cb" is distance 1 from "ab"
    res = propagate(enc, 1, DomainStore([{"c"}, {"b"}]))
    assert res.root_min == 1


def test_hamming_matches_oracle_on_random_triples():
    rng = random.Random(6001)
    for _ in range(60):
        base, z, domains = random_soft_triple(rng)
        supported = soft_oracle_domains(base, z, domains, "hamming")
        res = propagate(hamming_encoding(base), z, domains)
        if res is INFEASIBLE:
            assert all(not s for s in supported)
        else:
            assert [res.domains.domain(i + 1) for i in range(len(domains))] \
                == supported


def test_edit_matches_oracle_on_random_triples():
    rng = random.Random(6002)
    for _ in range(60):
        base, z, domains = random_soft_triple(rng)
        supported = soft_oracle_domains(base, z, domains, "edit")
        res = propagate_epsilon(edit_encoding(base), z, domains)
        if res is INFEASIBLE:
            assert all(not s for s in supported)
        else:
            assert [res.domains.domain(i + 1) for i in range(len(domains))] \
                == supported


def test_distance_zero_degenerates_to_hard_constraint():
    rng = random.Random(6003)
    for _ in range(40):
        base, _, domains = random_soft_triple(rng)
        hard = propagate(base, 0, domains)
        ham = propagate(hamming_encoding(base), 0, domains)
        if hard is INFEASIBLE:
            assert ham is INFEASIBLE
        else:
            assert ham.domains == hard.domains
