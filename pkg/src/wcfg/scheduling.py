"""Shift-scheduling benchmark model.

An employee's day is one string over {activities, b(reak), l(unch),
r(est)}: rest, then either a part-time shift (work, break, work) or a
full-time shift (part, lunch, part), then rest.  Span restrictions pin
shift, lunch and work-stretch lengths, and an open-hours mask gates the
activity terminals.  Activity terminals carry weight 1, so an employee's
derivation weight counts worked slots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import solver
from .grammar import Restriction, WeightedGrammar, binary, terminal
from .oracle import exhaustive_min_cost

BREAK, LUNCH, REST = "b", "l", "r"

#: span bounds for a 96-slot (15-minute granularity) day:
#: part-time shift length, full-time shift length, lunch length, and the
#: minimum work-stretch length
DEFAULT_RESTRICTIONS = {"P": (13, 24), "F": (30, 38), "L": (4, 4),
                        "W": (4, None)}


def scaled_restrictions(n: int) -> dict:
    """Proportionally rescale the 96-slot span bounds to n slots (min 1).

    Convenience only: instances store their bounds explicitly.
    """
    out = {}
    for name, (lo, hi) in DEFAULT_RESTRICTIONS.items():
        slo = max(1, round(lo * n / 96))
        shi = None if hi is None else max(slo, round(hi * n / 96))
        out[name] = (slo, shi)
    return out


@dataclass
class ScheduleInstance:
    n: int = 96
    m: int = 1
    activities: list = field(default_factory=lambda: ["a"])
    open: list = field(default_factory=list)       # bool per slot
    demand: dict = field(default_factory=dict)     # activity -> n ints
    restrictions: dict = field(default_factory=dict)
    time_limit: float | None = None

    def __post_init__(self):
        if not self.open:
            self.open = [True] * self.n
        if not self.restrictions:
            self.restrictions = dict(DEFAULT_RESTRICTIONS)

    def demand_map(self) -> dict:
        """(slot i, activity) -> minimum head-count r, for every positive
        entry.  A requirement of r employees is posted as the strict
        demand constraint "more than r - 1"."""
        out = {}
        for a, row in self.demand.items():
            for i, r in enumerate(row, start=1):
                if r > 0:
                    out[(i, a)] = r
        return out


def validate_instance(inst: ScheduleInstance) -> list[str]:
    diags = []
    if inst.n < 1:
        diags.append("n must be at least 1")
    if inst.m < 1:
        diags.append("m must be at least 1")
    if not inst.activities:
        diags.append("at least one activity is required")
    reserved = {BREAK, LUNCH, REST}
    for a in inst.activities:
        if a in reserved:
            diags.append(f"activity name '{a}' collides with a reserved symbol")
    if len(set(inst.activities)) != len(inst.activities):
        diags.append("duplicate activity names")
    if len(inst.open) != inst.n:
        diags.append(f"open mask has length {len(inst.open)}, expected {inst.n}")
    for a, row in inst.demand.items():
        if a not in inst.activities:
            diags.append(f"demand for unknown activity '{a}'")
            continue
        if len(row) != inst.n:
            diags.append(f"demand row for '{a}' has length {len(row)}, "
                         f"expected {inst.n}")
            continue
        for i, d in enumerate(row, start=1):
            if d < 0:
                diags.append(f"negative demand d({i},{a})")
            if d > 0 and i <= len(inst.open) and not inst.open[i - 1]:
                diags.append(f"demand d({i},{a}) > 0 but slot {i} is closed")
    for name in inst.restrictions:
        if name not in ("P", "F", "L", "W"):
            diags.append(f"unknown restriction '{name}'")
    return diags


def build_schedule_grammar(inst: ScheduleInstance) -> WeightedGrammar:
    """The scheduling grammar, binarized, with restrictions attached to the
    outermost production of each chain."""
    acts = list(inst.activities)
    terminals = acts + [BREAK, LUNCH, REST]
    open_mask = tuple(bool(v) for v in inst.open)

    def span(name):
        lo, hi = inst.restrictions.get(name, DEFAULT_RESTRICTIONS[name])
        return Restriction(j_lo=lo, j_hi=hi, mask_name=None, mask=None)

    open_restr = Restriction(mask_name="open", mask=open_mask)

    def open_span(name):
        lo, hi = inst.restrictions.get(name, DEFAULT_RESTRICTIONS[name])
        return Restriction(j_lo=lo, j_hi=hi, mask_name="open", mask=open_mask)

    prods = [
        binary("S", "R", "S1"), binary("S1", "P", "R"),
        binary("S", "R", "S2"), binary("S2", "F", "R"),
        binary("P", "W", "P1", restriction=span("P")),
        binary("P1", "Tbrk", "W"),
        binary("F", "P", "F1", restriction=span("F")),
        binary("F1", "L", "P"),
        binary("L", "Tlun", "Lrun", restriction=span("L")),
        terminal("L", LUNCH, restriction=span("L")),
        binary("Lrun", "Tlun", "Lrun"), terminal("Lrun", LUNCH),
        binary("R", "Trst", "R"), terminal("R", REST),
        terminal("Tbrk", BREAK), terminal("Tlun", LUNCH),
        terminal("Trst", REST),
    ]
    nts = ["S", "S1", "S2", "P", "P1", "F", "F1", "L", "Lrun", "R", "W",
           "Tbrk", "Tlun", "Trst"]
    for a in acts:
        run, pre = f"Run_{a}", f"T_{a}"
        nts += [run, pre]
        prods += [
            binary("W", pre, run, restriction=span("W")),
            terminal("W", a, weight=1, restriction=open_span("W")),
            binary(run, pre, run),
            terminal(run, a, weight=1, restriction=open_restr),
            terminal(pre, a, weight=1, restriction=open_restr),
        ]
    return WeightedGrammar.create(terminals, nts, "S", prods,
                                  masks=(("open", open_mask),))


@dataclass
class ScheduleModel:
    model: solver.Model
    grammar: WeightedGrammar
    rows: list
    z_vars: list
    bool_vars: dict     # (i, employee row index, activity) -> bool var id


def build_schedule_model(inst: ScheduleInstance,
                         backend: str = solver.MONOLITHIC) -> ScheduleModel:
    """Post one grammar constraint per employee, channeling Booleans per
    (slot, employee, activity), demand constraints and the cost objective."""
    diags = validate_instance(inst)
    if diags:
        raise ValueError("invalid instance: " + "; ".join(diags))
    grammar = build_schedule_grammar(inst)
    model = solver.Model()
    rows, z_vars = [], []
    for j in range(inst.m):
        row = model.add_sequence(inst.n, grammar.terminals)
        z = model.add_int(0, inst.n, name=f"z{j + 1}")
        solver.post_wcfg(model, grammar, z, row, backend)
        rows.append(row)
        z_vars.append(z)
    bool_vars = {}
    for i in range(1, inst.n + 1):
        for j, row in enumerate(rows):
            for a in inst.activities:
                b = model.add_bool(name=f"b({i},{j + 1},{a})")
                solver.channel(model, row, i, a, b)
                bool_vars[(i, j, a)] = b
    for (i, a), r in sorted(inst.demand_map().items()):
        solver.post_demand(model, [bool_vars[(i, j, a)] for j in range(inst.m)],
                           r - 1)
    model.set_objective(z_vars)
    return ScheduleModel(model, grammar, rows, z_vars, bool_vars)


def solve_instance(inst: ScheduleInstance, backend: str = solver.MONOLITHIC,
                   time_limit: float | None = None,
                   on_solution=None) -> solver.SolveResult:
    sm = build_schedule_model(inst, backend)
    limit = time_limit if time_limit is not None else inst.time_limit
    return solver.solve_min(sm.model, time_limit=limit,
                            on_solution=on_solution)


def oracle_min_cost(inst: ScheduleInstance):
    """Exhaustive optimum via the oracle; None when infeasible."""
    grammar = build_schedule_grammar(inst)
    demands = {key: r - 1 for key, r in inst.demand_map().items()}
    return exhaustive_min_cost(grammar, inst.n, inst.m, demands)
