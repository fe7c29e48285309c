"""Weighted context-free grammars in Chomsky normal form.

Grammars carry non-negative integer weights per production and optional
span restrictions (an interval on the span length plus an optional 0/1
mask over start positions).  Extended recursive forms A -> A a and
A -> a A are accepted as input and rewritten to binary form by
:func:`normalize`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

# production kinds
BINARY = "binary"
TERMINAL = "terminal"
EPSILON = "epsilon"
EXT_LEFT = "ext_left"    # A -> A a
EXT_RIGHT = "ext_right"  # A -> a A

_EXT_KINDS = (EXT_LEFT, EXT_RIGHT)
_ALL_KINDS = (BINARY, TERMINAL, EPSILON, EXT_LEFT, EXT_RIGHT)


@dataclass(frozen=True)
class Restriction:
    """Span filter for a production: applies at (i, j) only if it allows it.

    ``j_lo``/``j_hi`` bound the span length (inclusive, None = unbounded);
    ``mask`` is an optional per-position bit vector over start positions
    (1-based, so position i reads mask[i - 1]).
    """

    j_lo: int | None = None
    j_hi: int | None = None
    mask_name: str | None = None
    mask: tuple[bool, ...] | None = None

    def allows(self, i: int, j: int) -> bool:
        if self.j_lo is not None and j < self.j_lo:
            return False
        if self.j_hi is not None and j > self.j_hi:
            return False
        if self.mask is not None:
            if i < 1 or i > len(self.mask):
                return False
            if not self.mask[i - 1]:
                return False
        return True

    def describe(self) -> str:
        parts = []
        if self.j_lo is not None or self.j_hi is not None:
            lo = "" if self.j_lo is None else str(self.j_lo)
            hi = "" if self.j_hi is None else str(self.j_hi)
            parts.append(f"j in [{lo},{hi}]")
        if self.mask is not None:
            parts.append(f"i in mask:{self.mask_name or '?'}")
        return " and ".join(parts)


@dataclass(frozen=True)
class Production:
    """One weighted production.

    ``left``/``right`` name the nonterminal children of binary forms;
    ``terminal`` carries the terminal of terminal/extended forms.
    """

    lhs: str
    kind: str
    left: str | None = None
    right: str | None = None
    terminal: str | None = None
    weight: int = 0
    restriction: Restriction | None = None

    def rhs_key(self):
        return (self.kind, self.left, self.right, self.terminal)

    def allows(self, i: int, j: int) -> bool:
        return self.restriction is None or self.restriction.allows(i, j)

    def rhs_text(self) -> str:
        if self.kind == BINARY:
            return f"{self.left} {self.right}"
        if self.kind == TERMINAL:
            return f"'{self.terminal}'"
        if self.kind == EPSILON:
            return "eps"
        if self.kind == EXT_LEFT:
            return f"{self.left} '{self.terminal}'"
        return f"'{self.terminal}' {self.right}"

    def __str__(self) -> str:
        s = f"{self.lhs} -> {self.rhs_text()} @ {self.weight}"
        if self.restriction is not None:
            s += f" | {self.restriction.describe()}"
        return s


def binary(lhs, left, right, weight=0, restriction=None):
    return Production(lhs, BINARY, left=left, right=right, weight=weight,
                      restriction=restriction)


def terminal(lhs, a, weight=0, restriction=None):
    return Production(lhs, TERMINAL, terminal=a, weight=weight,
                      restriction=restriction)


def epsilon(lhs, weight=0):
    return Production(lhs, EPSILON, weight=weight)


def ext_left(lhs, nt, a, weight=0):
    return Production(lhs, EXT_LEFT, left=nt, terminal=a, weight=weight)


def ext_right(lhs, a, nt, weight=0):
    return Production(lhs, EXT_RIGHT, right=nt, terminal=a, weight=weight)


@dataclass(frozen=True)
class SymbolTable:
    terminals: tuple[str, ...]
    nonterminals: tuple[str, ...]
    start: str


@dataclass(frozen=True)
class WeightedGrammar:
    symbols: SymbolTable
    productions: tuple[Production, ...]
    strict_cnf: bool = True
    has_epsilon: bool = False
    masks: tuple[tuple[str, tuple[bool, ...]], ...] = ()

    @classmethod
    def create(cls, terminals, nonterminals, start, productions,
               strict_cnf=None, masks=()):
        """Build a grammar, merging duplicate (lhs, rhs) pairs at min weight."""
        merged: dict = {}
        for p in productions:
            key = (p.lhs, p.rhs_key(), p.restriction)
            if key in merged and merged[key].weight <= p.weight:
                continue
            merged[key] = p
        prods = tuple(merged.values())
        has_eps = any(p.kind == EPSILON for p in prods)
        if strict_cnf is None:
            strict_cnf = all(p.kind in (BINARY, TERMINAL) for p in prods)
        return cls(SymbolTable(tuple(terminals), tuple(nonterminals), start),
                   prods, strict_cnf=strict_cnf, has_epsilon=has_eps,
                   masks=tuple(masks))

    @property
    def terminals(self):
        return self.symbols.terminals

    @property
    def nonterminals(self):
        return self.symbols.nonterminals

    @property
    def start(self):
        return self.symbols.start


def _zero_weight_epsilon_derivers(grammar: WeightedGrammar) -> set[str]:
    """Nonterminals that derive the empty string at total weight 0."""
    derivers: set[str] = set()
    direct = {p.lhs for p in grammar.productions
              if p.kind == EPSILON and p.weight == 0}
    derivers |= direct
    changed = True
    while changed:
        changed = False
        for p in grammar.productions:
            if (p.kind == BINARY and p.weight == 0 and p.lhs not in derivers
                    and p.left in derivers and p.right in derivers):
                derivers.add(p.lhs)
                changed = True
    return derivers


def validate(grammar: WeightedGrammar) -> list[str]:
    """Check grammar invariants.  Returns a list of diagnostics, empty if OK."""
    diags = []
    sym = grammar.symbols
    terminals = set(sym.terminals)
    nonterminals = set(sym.nonterminals)
    if not terminals:
        diags.append("empty terminal alphabet")
    if not nonterminals:
        diags.append("empty nonterminal set")
    overlap = terminals & nonterminals
    if overlap:
        diags.append(f"symbols both terminal and nonterminal: {sorted(overlap)}")
    if len(set(sym.terminals)) != len(sym.terminals):
        diags.append("duplicate terminal symbols")
    if len(set(sym.nonterminals)) != len(sym.nonterminals):
        diags.append("duplicate nonterminal symbols")
    if sym.start not in nonterminals:
        diags.append(f"unknown start symbol '{sym.start}'")

    seen_rhs = set()
    for p in grammar.productions:
        where = f"in '{p}'"
        if p.kind not in _ALL_KINDS:
            diags.append(f"unknown production kind '{p.kind}' {where}")
            continue
        if p.weight < 0 or not isinstance(p.weight, int):
            diags.append(f"weight must be a non-negative integer {where}")
        if p.lhs not in nonterminals:
            diags.append(f"unknown lhs nonterminal '{p.lhs}' {where}")
        for nt in (p.left, p.right):
            if nt is not None and nt not in nonterminals:
                diags.append(f"unknown nonterminal '{nt}' {where}")
        if p.terminal is not None and p.terminal not in terminals:
            diags.append(f"unknown terminal '{p.terminal}' {where}")
        if grammar.strict_cnf and p.kind == EPSILON:
            diags.append(f"Epsilon production in strict CNF {where}")
        if grammar.strict_cnf and p.kind in _EXT_KINDS:
            diags.append(f"extended production in strict CNF {where}")
        if not grammar.has_epsilon and p.kind == EPSILON:
            diags.append(f"Epsilon production but has_epsilon flag unset {where}")
        key = (p.lhs, p.rhs_key())
        if key in seen_rhs:
            diags.append(f"duplicate production {where}")
        seen_rhs.add(key)

    direct_zero_eps = {p.lhs for p in grammar.productions
                       if p.kind == EPSILON and p.weight == 0}
    for nt in sorted(_zero_weight_epsilon_derivers(grammar)):
        if nt not in direct_zero_eps:
            diags.append(
                f"nonterminal '{nt}' derives the empty string at weight 0 "
                "through a production cycle")
    return diags


def _fresh_preterminal(a: str, taken: set[str]) -> str:
    base = f"T_{a}"
    name = base
    for k in itertools.count(2):
        if name not in taken:
            return name
        name = f"{base}_{k}"
    raise AssertionError


def normalize(grammar: WeightedGrammar) -> WeightedGrammar:
    """Rewrite extended recursions to binary form via fresh preterminals.

    A -> A a becomes A -> A T_a (same weight) with T_a -> a at weight 0,
    symmetrically for A -> a A.  Minimum derivation weights are unchanged
    for every string.  Grammars with no extended productions come back as
    they are.
    """
    for p in grammar.productions:
        if p.kind not in _ALL_KINDS:
            raise ValueError(f"unsupported production form in '{p}'")
    if not any(p.kind in _EXT_KINDS for p in grammar.productions):
        return grammar

    taken = set(grammar.nonterminals) | set(grammar.terminals)
    preterminals: dict[str, str] = {}
    new_nts = list(grammar.nonterminals)
    out = []

    def preterminal_for(a: str) -> str:
        if a not in preterminals:
            name = _fresh_preterminal(a, taken)
            taken.add(name)
            preterminals[a] = name
            new_nts.append(name)
            out.append(terminal(name, a, 0))
        return preterminals[a]

    for p in grammar.productions:
        if p.kind == EXT_LEFT:
            t = preterminal_for(p.terminal)
            out.append(binary(p.lhs, p.left, t, p.weight, p.restriction))
        elif p.kind == EXT_RIGHT:
            t = preterminal_for(p.terminal)
            out.append(binary(p.lhs, t, p.right, p.weight, p.restriction))
        else:
            out.append(p)

    return WeightedGrammar.create(
        grammar.terminals, new_nts, grammar.start, out, masks=grammar.masks)
