"""Minimal constraint-solving kernel with branch-and-bound minimization.

Finite-domain sequence variables, integer interval variables and
tri-state Booleans, a FIFO propagation queue with event filtering, the
weighted grammar constraint as a propagator tied to a cost variable, a
strict counting (demand) constraint, channeling, and depth-first branch
and bound over a sum objective.

The grammar constraint's internal bound variables never appear here;
branching only ever touches sequence variables.
"""

from __future__ import annotations

import time as _time
from collections import deque
from dataclasses import dataclass, field

from . import decomposition
from . import propagator
from .propagator import INFEASIBLE, DomainStore, compile_grammar

MONOLITHIC = "monolithic"
DECOMPOSITION = "decomposition"
DECOMPOSITION_ENTAILMENT = "decomposition-entailment"

BACKENDS = (MONOLITHIC, DECOMPOSITION, DECOMPOSITION_ENTAILMENT)

BACKEND_CODES = {"m": MONOLITHIC, "d": DECOMPOSITION,
                 "de": DECOMPOSITION_ENTAILMENT}


class Fail(Exception):
    """Raised by a propagator when a domain or interval wipes out."""


class Model:
    def __init__(self):
        self.rows: list[list[set]] = []
        self.row_alphabets: list[list] = []
        self.int_lo: list[int] = []
        self.int_hi: list[int] = []
        self.int_names: list[str] = []
        self.bools: list = []          # None / True / False
        self.bool_names: list[str] = []
        self.constraints: list = []
        self.watchers: dict = {}       # var key -> set of constraint indices
        self.objective: list[int] = []
        self.obj_bound: int | None = None
        self._changed: list = []

    # --- variable declaration -------------------------------------------

    def add_sequence(self, n: int, alphabet) -> int:
        self.rows.append([set(alphabet) for _ in range(n)])
        self.row_alphabets.append(list(alphabet))
        return len(self.rows) - 1

    def add_int(self, lo: int, hi: int, name: str = "") -> int:
        self.int_lo.append(lo)
        self.int_hi.append(hi)
        self.int_names.append(name or f"v{len(self.int_lo) - 1}")
        return len(self.int_lo) - 1

    def add_bool(self, name: str = "") -> int:
        self.bools.append(None)
        self.bool_names.append(name or f"b{len(self.bools) - 1}")
        return len(self.bools) - 1

    # --- state access / mutation (constraints call these) -----------------

    def domain(self, row: int, i: int) -> set:
        """Domain of position i (1-based) of a sequence row."""
        return self.rows[row][i - 1]

    def domain_store(self, row: int) -> DomainStore:
        return DomainStore(self.rows[row])

    def set_row_domain(self, row: int, i: int, values) -> None:
        values = set(values)
        if values == self.rows[row][i - 1]:
            return
        if not values:
            raise Fail()
        self.rows[row][i - 1] = values
        self._changed.append(("row", row, i))

    def remove_value(self, row: int, i: int, a) -> None:
        dom = self.rows[row][i - 1]
        if a in dom:
            if len(dom) == 1:
                raise Fail()
            dom.discard(a)
            self._changed.append(("row", row, i))

    def set_int_lo(self, v: int, lo: int) -> None:
        if lo > self.int_lo[v]:
            if lo > self.int_hi[v]:
                raise Fail()
            self.int_lo[v] = lo
            self._changed.append(("int", v))

    def set_int_hi(self, v: int, hi: int) -> None:
        if hi < self.int_hi[v]:
            if hi < self.int_lo[v]:
                raise Fail()
            self.int_hi[v] = hi
            self._changed.append(("int", v))

    def set_bool(self, b: int, value: bool) -> None:
        cur = self.bools[b]
        if cur is None:
            self.bools[b] = value
            self._changed.append(("bool", b))
        elif cur != value:
            raise Fail()

    # --- posting -----------------------------------------------------------

    def _post(self, constraint) -> object:
        idx = len(self.constraints)
        self.constraints.append(constraint)
        for key in constraint.watched:
            self.watchers.setdefault(key, set()).add(idx)
        return constraint

    def set_objective(self, int_vars) -> None:
        """Minimize the sum of the given (non-negatively bounded) ints."""
        for v in int_vars:
            if self.int_lo[v] < 0:
                raise ValueError("objective terms must be non-negative")
        self.objective = list(int_vars)
        self._post(ObjectiveBound(self, int_vars))

    # --- snapshots -----------------------------------------------------------

    def snapshot(self):
        return ([[set(d) for d in row] for row in self.rows],
                list(self.int_lo), list(self.int_hi), list(self.bools))

    def restore(self, snap) -> None:
        rows, lo, hi, bools = snap
        self.rows = [[set(d) for d in row] for row in rows]
        self.int_lo = list(lo)
        self.int_hi = list(hi)
        self.bools = list(bools)

    # --- propagation -----------------------------------------------------

    def propagate(self, seeds=None) -> bool:
        """Run the FIFO queue to a fixpoint.  Returns False on failure."""
        if seeds is None:
            queue = deque(range(len(self.constraints)))
            in_queue = set(queue)
        else:
            queue = deque()
            in_queue = set()
            for key in seeds:
                for idx in self.watchers.get(key, ()):
                    if idx not in in_queue:
                        in_queue.add(idx)
                        queue.append(idx)
        try:
            while queue:
                idx = queue.popleft()
                in_queue.discard(idx)
                self._changed = []
                self.constraints[idx].propagate(self)
                for key in self._changed:
                    for widx in self.watchers.get(key, ()):
                        if widx != idx and widx not in in_queue:
                            in_queue.add(widx)
                            queue.append(widx)
        except Fail:
            return False
        return True


# --- constraints ------------------------------------------------------------


class WcfgConstraint:
    """Ties a sequence row to a cost variable through grammar propagation."""

    def __init__(self, model: Model, grammar, z_var: int, row: int,
                 backend: str = MONOLITHIC):
        backend = BACKEND_CODES.get(backend, backend)
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend '{backend}'")
        self.grammar = grammar
        self.compiled = compile_grammar(grammar)
        self.z_var = z_var
        self.row = row
        self.backend = backend
        n = len(model.rows[row])
        self.watched = [("row", row, i) for i in range(1, n + 1)]
        self.watched.append(("int", z_var))

    def _run(self, budget: int, store: DomainStore):
        if self.backend == MONOLITHIC:
            return propagator.propagate(self.compiled, budget, store,
                                        precompiled=True)
        entailment = self.backend == DECOMPOSITION_ENTAILMENT
        return decomposition.propagate(self.compiled, budget, store,
                                       entailment=entailment)

    def propagate(self, model: Model) -> None:
        budget = model.int_hi[self.z_var]
        if budget < 0:
            raise Fail()
        result = self._run(budget, model.domain_store(self.row))
        if result is INFEASIBLE:
            raise Fail()
        for i in range(1, len(model.rows[self.row]) + 1):
            model.set_row_domain(self.row, i, result.domains.domain(i))
        model.set_int_lo(self.z_var, result.root_min)


class DemandConstraint:
    """Strictly more than d of the Booleans are true (sum >= d + 1)."""

    def __init__(self, bools, d: int):
        if d < 0:
            raise ValueError("demand must be non-negative")
        self.bools = list(bools)
        self.d = d
        self.watched = [("bool", b) for b in self.bools]

    def propagate(self, model: Model) -> None:
        need = self.d + 1
        true = sum(1 for b in self.bools if model.bools[b] is True)
        undecided = [b for b in self.bools if model.bools[b] is None]
        if true + len(undecided) < need:
            raise Fail()
        if true + len(undecided) == need:
            for b in undecided:
                model.set_bool(b, True)


class ChannelConstraint:
    """b is true iff the position is assigned exactly the given value."""

    def __init__(self, row: int, i: int, value, bool_var: int):
        self.row = row
        self.i = i
        self.value = value
        self.bool_var = bool_var
        self.watched = [("row", row, i), ("bool", bool_var)]

    def propagate(self, model: Model) -> None:
        dom = model.domain(self.row, self.i)
        b = model.bools[self.bool_var]
        if b is True:
            model.set_row_domain(self.row, self.i, {self.value})
        elif b is False:
            model.remove_value(self.row, self.i, self.value)
        if self.value not in dom:
            model.set_bool(self.bool_var, False)
        elif dom == {self.value}:
            model.set_bool(self.bool_var, True)


class ObjectiveBound:
    """Sum of the objective variables stays within the incumbent bound."""

    def __init__(self, model: Model, int_vars):
        self.int_vars = list(int_vars)
        self.watched = [("int", v) for v in self.int_vars]

    def propagate(self, model: Model) -> None:
        if model.obj_bound is None:
            return
        total_lo = sum(model.int_lo[v] for v in self.int_vars)
        if total_lo > model.obj_bound:
            raise Fail()
        for v in self.int_vars:
            slack = model.obj_bound - (total_lo - model.int_lo[v])
            model.set_int_hi(v, slack)


def post_wcfg(model: Model, grammar, z_var: int, row: int,
              backend: str = MONOLITHIC) -> WcfgConstraint:
    return model._post(WcfgConstraint(model, grammar, z_var, row, backend))


def post_demand(model: Model, bools, d: int) -> DemandConstraint:
    return model._post(DemandConstraint(bools, d))


def channel(model: Model, row: int, i: int, value, bool_var: int) -> ChannelConstraint:
    return model._post(ChannelConstraint(row, i, value, bool_var))


# --- search -------------------------------------------------------------------


@dataclass
class Solution:
    cost: int
    time: float
    backtracks: int
    rows: list[str] = field(default_factory=list)


@dataclass
class SolveResult:
    status: str                      # Optimal | TimeLimit | Unsat
    solutions: list[Solution]
    total_backtracks: int

    @property
    def best(self):
        return self.solutions[-1] if self.solutions else None


class _TimeUp(Exception):
    pass


def default_branching(model: Model):
    """Smallest domain first over sequence positions, ties by (row, i)."""
    best = None
    for r, row in enumerate(model.rows):
        for i0, dom in enumerate(row):
            if len(dom) > 1 and (best is None or len(dom) < best[0]):
                best = (len(dom), r, i0 + 1)
    if best is None:
        return None
    _, r, i = best
    order = {a: k for k, a in enumerate(model.row_alphabets[r])}
    values = sorted(model.domain(r, i), key=lambda a: order.get(a, len(order)))
    return r, i, values


def solve_min(model: Model, branching=None, time_limit: float | None = None,
              on_solution=None) -> SolveResult:
    """Depth-first branch and bound minimizing the model objective.

    Each improving solution of cost c posts sum <= c - 1 and search
    continues; deterministic branching keeps backtrack counts
    reproducible.
    """
    if branching is None:
        branching = default_branching
    start = _time.monotonic()
    stats = {"bt": 0}
    solutions: list[Solution] = []

    if not model.propagate():
        return SolveResult("Unsat", [], 0)

    def record_solution():
        cost = sum(model.int_lo[v] for v in model.objective)
        if model.obj_bound is not None and cost > model.obj_bound:
            # event filtering can leave the incumbent bound unchecked on
            # paths with no cost-variable activity; reject here instead
            stats["bt"] += 1
            return
        sol = Solution(cost=cost, time=_time.monotonic() - start,
                       backtracks=stats["bt"],
                       rows=["".join(sorted(d)[0] for d in row)
                             for row in model.rows])
        solutions.append(sol)
        if on_solution is not None:
            on_solution(sol)
        model.obj_bound = cost - 1

    def dfs():
        if time_limit is not None and _time.monotonic() - start > time_limit:
            raise _TimeUp()
        choice = branching(model)
        if choice is None:
            record_solution()
            return
        r, i, values = choice
        v = values[0]
        for left in (True, False):
            snap = model.snapshot()
            try:
                if left:
                    model.set_row_domain(r, i, {v})
                else:
                    model.remove_value(r, i, v)
                ok = model.propagate(seeds=[("row", r, i)])
            except Fail:
                ok = False
            if ok:
                dfs()
            else:
                stats["bt"] += 1
            model.restore(snap)

    status = "Optimal"
    try:
        dfs()
    except _TimeUp:
        status = "TimeLimit"
    if status == "Optimal" and not solutions:
        status = "Unsat"
    return SolveResult(status, solutions, stats["bt"])
