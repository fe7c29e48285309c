"""Line-oriented text formats: grammar files, domains files, instances.

Grammar file:

    # comment
    terminals: a b
    nonterminals: S A B
    start: S
    mask open: 110011
    S -> A B @ 2 | j in [4,4] | i in mask:open
    A -> 'a' @ 1
    A -> eps @ 1
    A -> A 'a' @ 1

Weights default to 0 when the ``@ w`` suffix is omitted.  Domains files
hold one line per variable: ``X1: a b c``.  Instance files use the
sections [meta], [open], [demand] and [restrictions].
"""

from __future__ import annotations

import re

from .grammar import (Production, Restriction, WeightedGrammar, binary,
                      epsilon, ext_left, ext_right, terminal)
from .propagator import DomainStore
from .scheduling import ScheduleInstance


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


_QUOTED = re.compile(r"^'([^']+)'$")


def _strip_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_restriction(parts, masks, lineno) -> Restriction | None:
    j_lo = j_hi = None
    mask_name = mask = None
    for part in parts:
        part = part.strip()
        m = re.match(r"^j\s+in\s+\[\s*(\d*)\s*,\s*(\d*)\s*\]$", part)
        if m:
            j_lo = int(m.group(1)) if m.group(1) else None
            j_hi = int(m.group(2)) if m.group(2) else None
            continue
        m = re.match(r"^i\s+in\s+mask:(\S+)$", part)
        if m:
            mask_name = m.group(1)
            if mask_name not in masks:
                raise ParseError(lineno, f"undefined mask '{mask_name}'")
            mask = masks[mask_name]
            continue
        raise ParseError(lineno, f"bad restriction clause '{part}'")
    if j_lo is None and j_hi is None and mask is None:
        return None
    return Restriction(j_lo=j_lo, j_hi=j_hi, mask_name=mask_name, mask=mask)


def _parse_production(lhs: str, rhs: str, lineno: int, masks) -> Production:
    pieces = rhs.split("|")
    body = pieces[0].strip()
    weight = 0
    if "@" in body:
        body, w = body.rsplit("@", 1)
        body = body.strip()
        try:
            weight = int(w.strip())
        except ValueError:
            raise ParseError(lineno, f"bad weight '{w.strip()}'")
        if weight < 0:
            raise ParseError(lineno, f"negative weight {weight}")
    restriction = _parse_restriction(pieces[1:], masks, lineno)
    toks = body.split()
    if len(toks) == 1:
        tok = toks[0]
        if tok == "eps":
            if restriction is not None:
                raise ParseError(lineno, "epsilon productions cannot be restricted")
            return epsilon(lhs, weight)
        m = _QUOTED.match(tok)
        if m:
            return terminal(lhs, m.group(1), weight, restriction)
        raise ParseError(lineno, f"bad right-hand side '{body}' "
                         "(terminals must be quoted)")
    if len(toks) == 2:
        lm, rm = _QUOTED.match(toks[0]), _QUOTED.match(toks[1])
        if lm and rm:
            raise ParseError(lineno, "two terminals on a right-hand side")
        if lm:
            return ext_right(lhs, lm.group(1), toks[1], weight)
        if rm:
            return ext_left(lhs, toks[0], rm.group(1), weight)
        return binary(lhs, toks[0], toks[1], weight, restriction)
    raise ParseError(lineno, f"bad right-hand side '{body}'")


def parse_grammar(text: str) -> WeightedGrammar:
    terminals = nonterminals = None
    start = None
    masks: dict[str, tuple] = {}
    productions = []
    for lineno, line in _strip_lines(text):
        if line.startswith("terminals:"):
            terminals = line.split(":", 1)[1].split()
            continue
        if line.startswith("nonterminals:"):
            nonterminals = line.split(":", 1)[1].split()
            continue
        if line.startswith("start:"):
            start = line.split(":", 1)[1].strip()
            continue
        m = re.match(r"^mask\s+(\S+)\s*:\s*([01]*)$", line)
        if m:
            masks[m.group(1)] = tuple(c == "1" for c in m.group(2))
            continue
        if "->" in line:
            lhs, rhs = line.split("->", 1)
            lhs = lhs.strip()
            if not lhs:
                raise ParseError(lineno, "missing left-hand side")
            productions.append(_parse_production(lhs, rhs.strip(), lineno, masks))
            continue
        raise ParseError(lineno, f"unrecognized line '{line}'")
    if terminals is None:
        raise ParseError(0, "missing 'terminals:' header")
    if nonterminals is None:
        raise ParseError(0, "missing 'nonterminals:' header")
    if start is None:
        raise ParseError(0, "missing 'start:' header")
    return WeightedGrammar.create(terminals, nonterminals, start, productions,
                                  masks=tuple(masks.items()))


def format_grammar(grammar: WeightedGrammar) -> str:
    lines = [
        "terminals: " + " ".join(grammar.terminals),
        "nonterminals: " + " ".join(grammar.nonterminals),
        "start: " + grammar.start,
    ]
    for name, mask in grammar.masks:
        lines.append(f"mask {name}: " + "".join("1" if b else "0" for b in mask))
    for p in grammar.productions:
        line = f"{p.lhs} -> {p.rhs_text()} @ {p.weight}"
        r = p.restriction
        if r is not None:
            if r.j_lo is not None or r.j_hi is not None:
                lo = "" if r.j_lo is None else str(r.j_lo)
                hi = "" if r.j_hi is None else str(r.j_hi)
                line += f" | j in [{lo},{hi}]"
            if r.mask is not None:
                line += f" | i in mask:{r.mask_name}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def parse_domains(text: str) -> DomainStore:
    rows = {}
    for lineno, line in _strip_lines(text):
        m = re.match(r"^X(\d+)\s*:\s*(.*)$", line)
        if not m:
            raise ParseError(lineno, f"expected 'X<i>: a b c', got '{line}'")
        idx = int(m.group(1))
        if idx in rows:
            raise ParseError(lineno, f"duplicate variable X{idx}")
        rows[idx] = set(m.group(2).split())
    if not rows:
        raise ParseError(0, "empty domains file")
    if sorted(rows) != list(range(1, len(rows) + 1)):
        raise ParseError(0, "variable indices must be contiguous from 1")
    return DomainStore([rows[i] for i in range(1, len(rows) + 1)])


def format_domains(domains: DomainStore) -> str:
    lines = [f"X{i}: " + " ".join(sorted(domains.domain(i)))
             for i in range(1, len(domains) + 1)]
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> ScheduleInstance:
    section = None
    meta: dict = {}
    open_bits = None
    demand: dict = {}
    restrictions: dict = {}
    for lineno, line in _strip_lines(text):
        m = re.match(r"^\[(\w+)\]$", line)
        if m:
            section = m.group(1)
            if section not in ("meta", "open", "demand", "restrictions"):
                raise ParseError(lineno, f"unknown section [{section}]")
            continue
        if section == "meta":
            for item in line.split():
                if "=" not in item:
                    raise ParseError(lineno, f"bad meta entry '{item}'")
                key, val = item.split("=", 1)
                meta[key] = val
        elif section == "open":
            if not re.fullmatch(r"[01]+", line):
                raise ParseError(lineno, "open mask must be a 0/1 string")
            open_bits = [c == "1" for c in line]
        elif section == "demand":
            if ":" not in line:
                raise ParseError(lineno, "expected '<activity>: d1,d2,...'")
            a, vals = line.split(":", 1)
            try:
                demand[a.strip()] = [int(v) for v in vals.split(",")]
            except ValueError:
                raise ParseError(lineno, f"bad demand row '{vals.strip()}'")
        elif section == "restrictions":
            m = re.match(r"^(\w+)\s*:\s*(\d+)\s*,\s*(\d+|none)$", line)
            if not m:
                raise ParseError(lineno, "expected '<name>: lo,hi'")
            hi = None if m.group(3) == "none" else int(m.group(3))
            restrictions[m.group(1)] = (int(m.group(2)), hi)
        else:
            raise ParseError(lineno, f"content outside any section: '{line}'")
    try:
        n = int(meta["n"])
        mm = int(meta["m"])
    except KeyError as e:
        raise ParseError(0, f"missing meta key {e}")
    except ValueError:
        raise ParseError(0, "meta n and m must be integers")
    activities = meta.get("activities", "a").split(",")
    time_limit = float(meta["time_limit"]) if "time_limit" in meta else None
    inst = ScheduleInstance(
        n=n, m=mm, activities=activities,
        open=open_bits if open_bits is not None else [],
        demand=demand, restrictions=restrictions, time_limit=time_limit)
    return inst


def format_instance(inst: ScheduleInstance) -> str:
    lines = ["[meta]"]
    meta = f"n={inst.n} m={inst.m} activities={','.join(inst.activities)}"
    if inst.time_limit is not None:
        meta += f" time_limit={inst.time_limit}"
    lines.append(meta)
    lines.append("[open]")
    lines.append("".join("1" if v else "0" for v in inst.open))
    if inst.demand:
        lines.append("[demand]")
        for a in sorted(inst.demand):
            lines.append(f"{a}: " + ",".join(str(v) for v in inst.demand[a]))
    lines.append("[restrictions]")
    for name in ("P", "F", "L", "W"):
        if name in inst.restrictions:
            lo, hi = inst.restrictions[name]
            lines.append(f"{name}: {lo},{'none' if hi is None else hi}")
    return "\n".join(lines) + "\n"
