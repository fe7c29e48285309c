"""Soft grammar constraints under Hamming and edit distance.

Both encodings turn "the assignment is within distance z of a grammar
string" into a weighted grammar constraint: unit-weight substitution
productions for Hamming distance, plus unit-weight deletion (A -> eps)
and insertion (A -> A a, A -> a A) productions for edit distance.

Direction convention: A -> eps at weight 1 means the grammar string
carries a symbol the assignment lacks; the insertion recursions mean the
assignment carries an extra symbol.
"""

from __future__ import annotations

from .grammar import (BINARY, TERMINAL, WeightedGrammar, epsilon, ext_left,
                      ext_right, normalize, terminal, validate)
from .propagator import propagate

SOFT_TAG = "soft-encoded"


def _check_base(base: WeightedGrammar) -> None:
    diags = validate(base)
    if diags:
        raise ValueError("invalid base grammar: " + "; ".join(diags))
    if not base.strict_cnf:
        raise ValueError("soft encodings require a strict CNF base grammar")
    for p in base.productions:
        if p.kind not in (BINARY, TERMINAL):
            raise ValueError(f"non-CNF production in base grammar: '{p}'")
    if any(name == SOFT_TAG for name, _ in base.masks):
        raise ValueError("grammar is already soft-encoded")


def _substitutions(base: WeightedGrammar, sigma):
    existing = {(p.lhs, p.terminal) for p in base.productions
                if p.kind == TERMINAL}
    lhs_with_terminal = sorted({p.lhs for p in base.productions
                                if p.kind == TERMINAL})
    subs = []
    for lhs in lhs_with_terminal:
        for b in sigma:
            if (lhs, b) not in existing:
                subs.append(terminal(lhs, b, 1))
    return lhs_with_terminal, subs


def _tagged_masks(base: WeightedGrammar):
    # marker so an encoded grammar cannot be encoded a second time
    return tuple(base.masks) + ((SOFT_TAG, ()),)


def hamming_encoding(base: WeightedGrammar, sigma=None) -> WeightedGrammar:
    """Add weight-1 substitution productions for every missing (A, b) pair."""
    _check_base(base)
    sigma = _alphabet(base, sigma)
    _, subs = _substitutions(base, sigma)
    return WeightedGrammar.create(
        sigma, base.nonterminals, base.start,
        list(base.productions) + subs, masks=_tagged_masks(base))


def _alphabet(base: WeightedGrammar, sigma):
    if sigma is None:
        return base.terminals
    return tuple(dict.fromkeys(list(base.terminals) + list(sigma)))


def edit_encoding(base: WeightedGrammar, sigma=None) -> WeightedGrammar:
    """Add substitution, deletion and insertion productions, then normalize.

    One A -> eps per nonterminal with a terminal production, and
    A -> A a / A -> a A for every such A and every a in the alphabet,
    all at weight 1.
    """
    _check_base(base)
    sigma = _alphabet(base, sigma)
    lhs_with_terminal, extra = _substitutions(base, sigma)
    for lhs in lhs_with_terminal:
        extra.append(epsilon(lhs, 1))
        for a in sigma:
            extra.append(ext_left(lhs, lhs, a, 1))
            extra.append(ext_right(lhs, a, lhs, 1))
    encoded = WeightedGrammar.create(
        sigma, base.nonterminals, base.start,
        list(base.productions) + extra, masks=_tagged_masks(base))
    return normalize(encoded)


def propagate_epsilon(grammar: WeightedGrammar, z: int, domains):
    """Propagation on the epsilon-extended chart (span-0 row, splits 0..j)."""
    if not isinstance(grammar, WeightedGrammar):
        raise TypeError("propagate_epsilon expects a WeightedGrammar")
    diags = validate(grammar)
    if diags:
        raise ValueError("invalid grammar: " + "; ".join(diags))
    return propagate(grammar, z, domains, epsilon=True, precompiled=True)
