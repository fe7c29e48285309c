"""Brute-force reference implementations.

Everything here is deliberately independent of the propagator and the
decomposition: per-string dynamic programs and exhaustive enumeration
only, guarded by hard size limits that raise instead of truncating.
"""

from __future__ import annotations

import heapq
import itertools

from .grammar import BINARY, EPSILON, TERMINAL, WeightedGrammar

INF = float("inf")

MAX_ENUM_LEN = 8
MAX_TUPLE_SPACE = 10 ** 6
MAX_ASSIGNMENT_SPACE = 10 ** 7


class OracleGuardError(ValueError):
    """A brute-force call exceeded its size guard."""


def parse_min_weight(grammar: WeightedGrammar, string, start_pos: int = 1):
    """Exact min derivation weight of a concrete string from the start symbol.

    Bottom-up per-string table over (nonterminal, start, span), honoring
    restrictions (positions are absolute, the string starts at start_pos)
    and epsilon productions.  Returns INF if the string is not derivable.
    """
    s = tuple(string)
    n = len(s)
    eps = _epsilon_weights(grammar)
    best: dict = {}
    for j in range(1, n + 1):
        for off in range(n - j + 1):
            i = start_pos + off
            cell = {}
            if j == 1:
                for p in grammar.productions:
                    if p.kind == TERMINAL and p.terminal == s[off] \
                            and p.allows(i, 1):
                        cell[p.lhs] = min(cell.get(p.lhs, INF), p.weight)
            for k in range(1, j):
                for p in grammar.productions:
                    if p.kind != BINARY or not p.allows(i, j):
                        continue
                    wl = best.get((p.left, off, k), INF)
                    wr = best.get((p.right, off + k, j - k), INF)
                    if wl + wr + p.weight < cell.get(p.lhs, INF):
                        cell[p.lhs] = wl + wr + p.weight
            # empty-span splits (epsilon children); relax to a fixpoint
            if eps:
                changed = True
                while changed:
                    changed = False
                    for p in grammar.productions:
                        if p.kind != BINARY or not p.allows(i, j):
                            continue
                        cand = min(
                            eps.get(p.left, INF) + cell.get(p.right, INF),
                            cell.get(p.left, INF) + eps.get(p.right, INF),
                        ) + p.weight
                        if cand < cell.get(p.lhs, INF):
                            cell[p.lhs] = cand
                            changed = True
            for nt, w in cell.items():
                best[(nt, off, j)] = w
    if n == 0:
        return eps.get(grammar.start, INF)
    return best.get((grammar.start, 0, n), INF)


def _epsilon_weights(grammar: WeightedGrammar) -> dict:
    """Least fixpoint of min weights for A =>* empty string."""
    eps: dict = {}
    for p in grammar.productions:
        if p.kind == EPSILON:
            eps[p.lhs] = min(eps.get(p.lhs, INF), p.weight)
    if not eps:
        return {}
    changed = True
    while changed:
        changed = False
        for p in grammar.productions:
            if p.kind != BINARY or p.restriction is not None:
                continue
            if p.left in eps and p.right in eps:
                cand = eps[p.left] + eps[p.right] + p.weight
                if cand < eps.get(p.lhs, INF):
                    eps[p.lhs] = cand
                    changed = True
    return eps


def enumerate_min_weights(grammar: WeightedGrammar, max_len: int) -> dict:
    """LanguageTable: min derivation weight per derivable string, |s| <= max_len."""
    if max_len > MAX_ENUM_LEN:
        raise OracleGuardError(
            f"max_len {max_len} exceeds the enumeration guard {MAX_ENUM_LEN}")
    table = {}
    sigma = grammar.terminals
    for length in range(1, max_len + 1):
        for chars in itertools.product(sigma, repeat=length):
            w = parse_min_weight(grammar, chars)
            if w < INF:
                table["".join(chars)] = w
    return table


def enumerate_by_expansion(grammar: WeightedGrammar, max_len: int,
                           weight_cap: int) -> dict:
    """Second, independent enumerator: best-first sentential-form expansion.

    Expands the leftmost nonterminal of each sentential form in order of
    accumulated weight.  Used purely as a cross-check for
    enumerate_min_weights.
    """
    if max_len > MAX_ENUM_LEN:
        raise OracleGuardError(
            f"max_len {max_len} exceeds the enumeration guard {MAX_ENUM_LEN}")
    terminals = set(grammar.terminals)
    by_lhs: dict = {}
    for p in grammar.productions:
        if p.restriction is not None:
            raise OracleGuardError(
                "expansion enumerator does not support restricted productions")
        by_lhs.setdefault(p.lhs, []).append(p)
    form_cap = max_len + 2 * len(grammar.nonterminals) + 2
    table: dict = {}
    seen: set = set()
    counter = itertools.count()
    heap = [(0, next(counter), (grammar.start,))]
    while heap:
        w, _, form = heapq.heappop(heap)
        if (w, form) in seen:
            continue
        seen.add((w, form))
        nt_pos = next((k for k, sym in enumerate(form)
                       if sym not in terminals), None)
        if nt_pos is None:
            if 1 <= len(form) <= max_len:
                s = "".join(form)
                if s not in table:
                    table[s] = w
            continue
        n_terms = sum(1 for sym in form if sym in terminals)
        if n_terms > max_len or len(form) > form_cap:
            continue
        for p in by_lhs.get(form[nt_pos], ()):
            if p.kind == BINARY:
                repl = (p.left, p.right)
            elif p.kind == TERMINAL:
                repl = (p.terminal,)
            elif p.kind == EPSILON:
                repl = ()
            else:
                raise OracleGuardError(
                    "expansion enumerator requires a normalized grammar")
            nw = w + p.weight
            if nw > weight_cap:
                continue
            heapq.heappush(
                heap, (nw, next(counter),
                       form[:nt_pos] + repl + form[nt_pos + 1:]))
    return table


def dc_closure(grammar: WeightedGrammar, z: int, domains) -> "DomainStore":
    """Domain-consistency closure by tuple enumeration.

    Keeps value a at position i iff some tuple through (i, a) has min
    derivation weight <= z.
    """
    from .propagator import DomainStore

    doms = [sorted(domains.domain(i)) for i in range(1, len(domains) + 1)]
    space = 1
    for d in doms:
        space *= max(len(d), 1)
    if space > MAX_TUPLE_SPACE:
        raise OracleGuardError(
            f"domain product {space} exceeds the guard {MAX_TUPLE_SPACE}")
    supported = [set() for _ in doms]
    for combo in itertools.product(*doms):
        if parse_min_weight(grammar, combo) <= z:
            for i, a in enumerate(combo):
                supported[i].add(a)
    return DomainStore(supported)


def min_hamming(t, language_table: dict):
    """Min positional-mismatch count of t against equal-length table strings."""
    t = "".join(t)
    best = INF
    for s in language_table:
        if len(s) != len(t):
            continue
        best = min(best, sum(1 for a, b in zip(t, s) if a != b))
    return best


def min_edit(t, language_table: dict):
    """Min Levenshtein distance of t against every table string."""
    t = "".join(t)
    best = INF
    for s in language_table:
        best = min(best, _edit_distance(t, s))
    return best


def _edit_distance(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def language_of_length(grammar: WeightedGrammar, n: int,
                       budget: int | None = None) -> dict:
    """All derivable strings of exactly length n with min weights.

    Recursive span-wise generation honoring restrictions; used for
    exhaustive scheduling optimization where per-character enumeration
    is too large.  Raises when the explored state count exceeds the
    assignment-space guard.
    """
    memo: dict = {}
    counter = [0]

    term_by_lhs: dict = {}
    bin_by_lhs: dict = {}
    for p in grammar.productions:
        if p.kind == TERMINAL:
            term_by_lhs.setdefault(p.lhs, []).append(p)
        elif p.kind == BINARY:
            bin_by_lhs.setdefault(p.lhs, []).append(p)
        elif p.kind == EPSILON:
            raise OracleGuardError(
                "length-n language generation requires a strict CNF grammar")

    def gen(nt: str, i: int, j: int) -> dict:
        key = (nt, i, j)
        if key in memo:
            return memo[key]
        out: dict = {}
        if j == 1:
            for p in term_by_lhs.get(nt, ()):
                if p.allows(i, 1):
                    w = out.get(p.terminal)
                    if w is None or p.weight < w:
                        out[p.terminal] = p.weight
        for p in bin_by_lhs.get(nt, ()):
            if not p.allows(i, j):
                continue
            for k in range(1, j):
                left = gen(p.left, i, k)
                if not left:
                    continue
                right = gen(p.right, i + k, j - k)
                for sl, wl in left.items():
                    for sr, wr in right.items():
                        cand = wl + wr + p.weight
                        s = sl + sr
                        if cand < out.get(s, INF):
                            out[s] = cand
        counter[0] += len(out)
        if counter[0] > MAX_ASSIGNMENT_SPACE:
            raise OracleGuardError(
                "language generation exceeded the assignment-space guard")
        memo[key] = out
        return out

    table = gen(grammar.start, 1, n)
    if budget is not None:
        table = {s: w for s, w in table.items() if w <= budget}
    return table


def exhaustive_min_cost(grammar: WeightedGrammar, n: int, m: int,
                        demands: dict | None = None):
    """Exact optimum of the summed per-employee derivation weights.

    Enumerates every combination of m grammar strings of length n and
    keeps the cheapest one meeting all demands.  demands maps
    (slot i, activity a) -> d, requiring strictly more than d employees
    on a at i.  Returns None when infeasible.
    """
    table = language_of_length(grammar, n)
    if not table:
        return None
    strings = sorted(table)
    if len(strings) ** m > MAX_ASSIGNMENT_SPACE:
        raise OracleGuardError(
            "assignment space exceeds the exhaustive-search guard")
    demands = demands or {}
    best = None
    for combo in itertools.product(strings, repeat=m):
        ok = True
        for (i, a), d in demands.items():
            count = sum(1 for s in combo if s[i - 1] == a)
            if count < d + 1:
                ok = False
                break
        if not ok:
            continue
        cost = sum(table[s] for s in combo)
        if best is None or cost < best:
            best = cost
    return best
