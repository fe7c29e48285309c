"""Monolithic weighted CYK propagator.

Enforces domain consistency on WCFG(G, W, z, [X_1..X_n]) in O(n^3 |G|):
an upward pass computes per-cell lower bounds l on the cheapest
derivation, a downward pass computes upper budget allowances u and marks
cells, and the prune step keeps a value only if some marked terminal
production supports it within budget.

Cells are addressed by (i, j, A) with i the 1-based start position and j
the span length.  Grammars with epsilon productions use the extended
chart with a span-0 row and split points running from 0 to j.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import (BINARY, EPSILON, TERMINAL, WeightedGrammar, validate)


class DomainStore:
    """Per-position terminal domains for a sequence of n variables."""

    def __init__(self, domains):
        self._domains = [set(d) for d in domains]

    @classmethod
    def full(cls, n: int, alphabet) -> "DomainStore":
        return cls([set(alphabet) for _ in range(n)])

    @property
    def n(self) -> int:
        return len(self._domains)

    def __len__(self) -> int:
        return len(self._domains)

    def domain(self, i: int) -> set:
        """Domain of position i (1-based)."""
        return self._domains[i - 1]

    def set_domain(self, i: int, values) -> None:
        self._domains[i - 1] = set(values)

    def remove(self, i: int, value) -> None:
        self._domains[i - 1].discard(value)

    @property
    def failed(self) -> bool:
        return any(not d for d in self._domains)

    def copy(self) -> "DomainStore":
        return DomainStore(self._domains)

    def as_tuple(self):
        return tuple(frozenset(d) for d in self._domains)

    def __eq__(self, other):
        return isinstance(other, DomainStore) and self._domains == other._domains

    def __repr__(self):
        parts = [f"X{i}={{{','.join(sorted(d))}}}"
                 for i, d in enumerate(self._domains, start=1)]
        return "DomainStore(" + " ".join(parts) + ")"


@dataclass
class Pruned:
    domains: DomainStore
    root_min: int


class Infeasible:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infeasible"


INFEASIBLE = Infeasible()


class CompiledGrammar:
    """Grammar unpacked into integer-indexed production lists."""

    def __init__(self, grammar: WeightedGrammar):
        self.grammar = grammar
        self.nts = list(grammar.nonterminals)
        self.index = {nt: k for k, nt in enumerate(self.nts)}
        self.start = self.index[grammar.start]
        self.term_prods = []   # (lhs, a, w, restriction)
        self.bin_prods = []    # (lhs, B, C, w, restriction)
        self.eps_prods = []    # (lhs, w)
        for p in grammar.productions:
            if p.kind == TERMINAL:
                self.term_prods.append(
                    (self.index[p.lhs], p.terminal, p.weight, p.restriction))
            elif p.kind == BINARY:
                self.bin_prods.append(
                    (self.index[p.lhs], self.index[p.left],
                     self.index[p.right], p.weight, p.restriction))
            elif p.kind == EPSILON:
                self.eps_prods.append((self.index[p.lhs], p.weight))
            else:
                raise ValueError(f"grammar not normalized: '{p}'")

    def epsilon_closure(self, cap: int):
        """Min weight (capped) and derivability of A =>* eps per nonterminal.

        Position-independent: restricted productions take no part in
        epsilon derivations.
        """
        weight = [cap] * len(self.nts)
        member = [False] * len(self.nts)
        for lhs, w in self.eps_prods:
            member[lhs] = True
            weight[lhs] = min(weight[lhs], min(w, cap))
        changed = True
        while changed:
            changed = False
            for lhs, b, c, w, restr in self.bin_prods:
                if restr is not None:
                    continue
                if member[b] and member[c]:
                    cand = min(w + weight[b] + weight[c], cap)
                    if not member[lhs] or cand < weight[lhs]:
                        if not member[lhs]:
                            member[lhs] = True
                            changed = True
                        if cand < weight[lhs]:
                            weight[lhs] = cand
                            changed = True
        return weight, member


def compile_grammar(grammar) -> CompiledGrammar:
    if isinstance(grammar, CompiledGrammar):
        return grammar
    return CompiledGrammar(grammar)


class Chart:
    """Triangular chart of (membership, l, u, marked) per (i, j, A).

    Sentinels follow the propagation algorithm exactly: l defaults to
    z + 1 and u to -1 for untouched cells.  Span-0 entries (epsilon mode)
    are shared across positions.
    """

    def __init__(self, cg: CompiledGrammar, n: int, z: int, epsilon: bool):
        self.cg = cg
        self.n = n
        self.z = z
        self.epsilon = epsilon
        # cells[(i, j)] -> dict nt_index -> l value; membership == presence
        self.lcell = {}
        self.ucell = {}
        self.marks = {}
        if epsilon:
            self.eps_weight, self.eps_member = cg.epsilon_closure(z + 1)
        else:
            self.eps_weight = [z + 1] * len(cg.nts)
            self.eps_member = [False] * len(cg.nts)

    def _idx(self, a) -> int:
        return a if isinstance(a, int) else self.cg.index[a]

    def member(self, i: int, j: int, a) -> bool:
        k = self._idx(a)
        if j == 0:
            return self.eps_member[k]
        return k in self.lcell.get((i, j), ())

    def l(self, i: int, j: int, a) -> int:
        k = self._idx(a)
        if j == 0:
            return self.eps_weight[k]
        return self.lcell.get((i, j), {}).get(k, self.z + 1)

    def u(self, i: int, j: int, a) -> int:
        return self.ucell.get((i, j), {}).get(self._idx(a), -1)

    def marked(self, i: int, j: int, a) -> bool:
        return self._idx(a) in self.marks.get((i, j), ())

    def members(self, i: int, j: int):
        return self.lcell.get((i, j), {})

    def dump(self) -> str:
        """Text dump, one line per cell, ordered by span then position."""
        lines = []
        names = self.cg.nts
        for j in range(1, self.n + 1):
            for i in range(1, self.n - j + 2):
                cell = self.lcell.get((i, j), {})
                ucell = self.ucell.get((i, j), {})
                marks = self.marks.get((i, j), set())
                entries = []
                for k in sorted(cell, key=lambda k: names[k]):
                    tag = "marked" if k in marks else "unmarked"
                    entries.append(
                        f"{names[k]}: l={cell[k]}, u={ucell.get(k, -1)}, {tag}")
                lines.append(f"V[{i}][{j}] = {{{'; '.join(entries)}}}")
        return "\n".join(lines)


def upward_pass(grammar, z: int, domains: DomainStore, *,
                epsilon: bool = False) -> Chart:
    """First stage: compute V membership and lower bounds l bottom-up."""
    cg = compile_grammar(grammar)
    n = len(domains)
    chart = Chart(cg, n, z, epsilon)
    cap = z + 1
    eps_w = chart.eps_weight
    eps_m = chart.eps_member

    for i in range(1, n + 1):
        cell: dict[int, int] = {}
        dom = domains.domain(i)
        for lhs, a, w, restr in cg.term_prods:
            if a in dom and (restr is None or restr.allows(i, 1)):
                old = cell.get(lhs, cap)
                cell[lhs] = min(old, min(w, cap))
        chart.lcell[(i, 1)] = cell

    for j in range(1, n + 1):
        for i in range(1, n - j + 2):
            cell = chart.lcell.setdefault((i, j), {})
            if j >= 2:
                for k in range(1, j):
                    left = chart.lcell[(i, k)]
                    right = chart.lcell[(i + k, j - k)]
                    for lhs, b, c, w, restr in cg.bin_prods:
                        lb = left.get(b)
                        if lb is None:
                            continue
                        lc = right.get(c)
                        if lc is None:
                            continue
                        if restr is not None and not restr.allows(i, j):
                            continue
                        cand = min(w + lb + lc, cap)
                        if cand < cell.get(lhs, cap + 1):
                            cell[lhs] = cand
            if epsilon:
                # splits k = 0 and k = j: one child covers the empty span,
                # the other the whole cell; iterate to a within-cell fixpoint
                changed = True
                while changed:
                    changed = False
                    for lhs, b, c, w, restr in cg.bin_prods:
                        if restr is not None and not restr.allows(i, j):
                            continue
                        if eps_m[b] and c in cell:
                            cand = min(w + eps_w[b] + cell[c], cap)
                            if cand < cell.get(lhs, cap + 1):
                                cell[lhs] = cand
                                changed = True
                        if eps_m[c] and b in cell:
                            cand = min(w + cell[b] + eps_w[c], cap)
                            if cand < cell.get(lhs, cap + 1):
                                cell[lhs] = cand
                                changed = True
    return chart


def downward_pass(chart: Chart, z: int, grammar=None) -> Chart:
    """Second stage: mark supported cells top-down and compute u bounds."""
    cg = chart.cg
    n = chart.n
    epsilon = chart.epsilon
    eps_w = chart.eps_weight
    eps_m = chart.eps_member

    root = chart.lcell.get((1, n), {})
    if cg.start not in root or root[cg.start] > z:
        return chart
    chart.marks[(1, n)] = {cg.start}
    chart.ucell[(1, n)] = {cg.start: z}

    min_span = 1 if epsilon else 2
    for j in range(n, min_span - 1, -1):
        for i in range(1, n - j + 2):
            cell_marks = chart.marks.get((i, j))
            if not cell_marks:
                continue
            lcell = chart.lcell[(i, j)]
            ucell = chart.ucell.setdefault((i, j), {})
            # within-cell u updates (epsilon splits) can cascade, so loop
            pending = True
            while pending:
                pending = False
                for lhs, b, c, w, restr in cg.bin_prods:
                    if lhs not in cell_marks:
                        continue
                    if restr is not None and not restr.allows(i, j):
                        continue
                    ua = ucell.get(lhs, -1)
                    lo_k = 0 if epsilon else 1
                    for k in range(lo_k, j + 1 if epsilon else j):
                        if k == 0:
                            if not eps_m[b]:
                                continue
                            lb, lc = eps_w[b], lcell.get(c)
                            if lc is None:
                                continue
                            if w + lb + lc > ua:
                                continue
                            nu = ua - lb - w
                            if nu > ucell.get(c, -1):
                                ucell[c] = nu
                                pending = True
                            if c not in cell_marks:
                                cell_marks.add(c)
                                pending = True
                        elif k == j:
                            if not eps_m[c]:
                                continue
                            lb, lc = lcell.get(b), eps_w[c]
                            if lb is None:
                                continue
                            if w + lb + lc > ua:
                                continue
                            nu = ua - lc - w
                            if nu > ucell.get(b, -1):
                                ucell[b] = nu
                                pending = True
                            if b not in cell_marks:
                                cell_marks.add(b)
                                pending = True
                        else:
                            lb = chart.lcell[(i, k)].get(b)
                            if lb is None:
                                continue
                            lc = chart.lcell[(i + k, j - k)].get(c)
                            if lc is None:
                                continue
                            if w + lb + lc > ua:
                                continue
                            bmarks = chart.marks.setdefault((i, k), set())
                            cmarks = chart.marks.setdefault((i + k, j - k), set())
                            bmarks.add(b)
                            cmarks.add(c)
                            bu = chart.ucell.setdefault((i, k), {})
                            cu = chart.ucell.setdefault((i + k, j - k), {})
                            nb = ua - lc - w
                            if nb > bu.get(b, -1):
                                bu[b] = nb
                            nc = ua - lb - w
                            if nc > cu.get(c, -1):
                                cu[c] = nc
    return chart


def prune_domains(chart: Chart, domains: DomainStore, grammar=None) -> DomainStore:
    """Keep a at i iff some A -> a has (i,1,A) marked and weight within u."""
    cg = chart.cg
    out = []
    for i in range(1, chart.n + 1):
        marks = chart.marks.get((i, 1), set())
        ucell = chart.ucell.get((i, 1), {})
        keep = set()
        for lhs, a, w, restr in cg.term_prods:
            if a not in domains.domain(i):
                continue
            if restr is not None and not restr.allows(i, 1):
                continue
            if lhs in marks and w <= ucell.get(lhs, -1):
                keep.add(a)
        out.append(keep)
    return DomainStore(out)


def propagate(grammar, z: int, domains: DomainStore, *,
              epsilon: bool = False, precompiled: bool = False):
    """Full propagation: returns Pruned(domains', root_min) or INFEASIBLE."""
    if z < 0:
        raise ValueError("budget z must be non-negative")
    if not precompiled and not isinstance(grammar, CompiledGrammar):
        diags = validate(grammar)
        if diags:
            raise ValueError("invalid grammar: " + "; ".join(diags))
        if not epsilon and not grammar.strict_cnf:
            raise ValueError("propagate requires a strict CNF grammar")
    if domains.failed:
        return INFEASIBLE
    chart = upward_pass(grammar, z, domains, epsilon=epsilon)
    root = chart.lcell.get((1, len(domains)), {})
    start = chart.cg.start
    if start not in root or root[start] > z:
        return INFEASIBLE
    downward_pass(chart, z)
    pruned = prune_domains(chart, domains)
    if pruned.failed:
        return INFEASIBLE
    return Pruned(pruned, root[start])
