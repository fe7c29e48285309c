"""Shared fixtures and random-instance generators for the test suite."""

from __future__ import annotations

import itertools
import os

import pytest

from wcfg import oracle
from wcfg.grammar import WeightedGrammar, binary, terminal
from wcfg.propagator import DomainStore

SIGMA = ["a", "b", "c"]

INSTANCE_DIR = os.path.join(os.path.dirname(__file__), "instances")


def g0_grammar() -> WeightedGrammar:
    """Two-letter running example: L(G0) = {aa, ab, ba, bb} with
    min weights aa=5, ab=3, ba=7, bb=5."""
    return WeightedGrammar.create(
        ["a", "b"], ["S", "A", "B"], "S",
        [binary("S", "A", "B"),
         terminal("A", "a", 1), terminal("A", "b", 3),
         terminal("B", "b", 2), terminal("B", "a", 4)])


@pytest.fixture
def g0() -> WeightedGrammar:
    return g0_grammar()


def random_domains(rng, n: int, alphabet) -> DomainStore:
    alphabet = list(alphabet)
    return DomainStore([set(rng.sample(alphabet, rng.randint(1, len(alphabet))))
                        for _ in range(n)])


def random_instance(rng):
    """One random (grammar, z, domains) triple within the sweep limits:
    n <= 6, |sigma| <= 3, |G| <= 12, weights <= 5, z <= 12.

    Every nonterminal can reach a terminal and the start symbol has a
    binary production, so a healthy share of instances is feasible.
    """
    nts = ["S"] + [f"N{k}" for k in range(rng.randint(1, 3))]
    sigma = SIGMA[:rng.randint(1, 3)]
    prods = [terminal(nt, rng.choice(sigma), rng.randint(0, 3)) for nt in nts]
    prods.append(binary("S", rng.choice(nts), rng.choice(nts), rng.randint(0, 2)))
    while len(prods) < rng.randint(4, 12):
        if rng.random() < 0.35:
            prods.append(terminal(rng.choice(nts), rng.choice(sigma),
                                  rng.randint(0, 5)))
        else:
            prods.append(binary(rng.choice(nts), rng.choice(nts),
                                rng.choice(nts), rng.randint(0, 3)))
    grammar = WeightedGrammar.create(sigma, nts, "S", prods)
    n = rng.randint(2, 6)
    z = rng.randint(0, 12)
    return grammar, z, random_domains(rng, n, grammar.terminals)


def random_soft_base(rng) -> WeightedGrammar:
    """Zero-weight strict CNF base grammar for the soft-encoding sweeps,
    so an encoded derivation weight is exactly the distance."""
    nts = ["S"] + [f"N{k}" for k in range(rng.randint(1, 2))]
    sigma = SIGMA[:rng.randint(1, 2)]
    prods = [terminal(nt, rng.choice(sigma)) for nt in nts]
    prods.append(binary("S", rng.choice(nts), rng.choice(nts)))
    while len(prods) < rng.randint(4, 8):
        if rng.random() < 0.4:
            prods.append(terminal(rng.choice(nts), rng.choice(sigma)))
        else:
            prods.append(binary(rng.choice(nts), rng.choice(nts),
                                rng.choice(nts)))
    return WeightedGrammar.create(sigma, nts, "S", prods)


def random_soft_triple(rng):
    base = random_soft_base(rng)
    n = rng.randint(2, 5)
    z = rng.randint(0, 2)
    return base, z, random_domains(rng, n, base.terminals)


def soft_oracle_domains(base: WeightedGrammar, z: int, domains: DomainStore,
                        metric: str):
    """Per-position supported value sets by brute force: a value survives
    iff some domain tuple through it is within distance z of the base
    language (zero-weight base, so distance == encoded weight)."""
    n = len(domains)
    max_len = n if metric == "hamming" else min(oracle.MAX_ENUM_LEN, n + z)
    table = oracle.enumerate_min_weights(base, max_len)
    dist = oracle.min_hamming if metric == "hamming" else oracle.min_edit
    supported = [set() for _ in range(n)]
    rows = [sorted(domains.domain(i)) for i in range(1, n + 1)]
    for combo in itertools.product(*rows):
        if dist(combo, table) <= z:
            for i, a in enumerate(combo):
                supported[i].add(a)
    return supported


def desk_instance_paths():
    return sorted(os.path.join(INSTANCE_DIR, f)
                  for f in os.listdir(INSTANCE_DIR) if f.endswith(".inst"))
