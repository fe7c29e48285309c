"""AND/OR DAG decomposition of the weighted grammar constraint.

The chart is turned into a DAG with an OR node per (i, j, A) membership
entry plus leaf OR nodes per (position, terminal), and an AND node per
applicable (production, split).  Primitive arithmetic constraints over
per-node integer intervals (l and u bound variables) are then revised to
a fixpoint; the resulting pruning matches the monolithic propagator.

Bound variables are internal network state and are never exposed to any
search layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .propagator import (INFEASIBLE, CompiledGrammar, DomainStore, Pruned,
                         compile_grammar, upward_pass)

# constraint kinds
AND_SUM = "AndSum"
OR_MIN = "OrMin"
UPPER_LINK = "UpperLink"
PARENT_MAX = "ParentMax"
LEAF_CHANNEL = "LeafChannel"
ROOT_CAP = "RootCap"


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: int, hi: int):
        self.lo = lo
        self.hi = hi

    def tighten_lo(self, v: int) -> bool:
        if v > self.lo:
            self.lo = v
            return True
        return False

    def tighten_hi(self, v: int) -> bool:
        if v < self.hi:
            self.hi = v
            return True
        return False

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def __repr__(self):
        return f"[{self.lo},{self.hi}]"


@dataclass
class OrNode:
    """OR node n(i,j,A), or a leaf n(i,1,a) for terminal a at position i."""

    key: tuple
    l: Interval
    u: Interval
    children: list = field(default_factory=list)   # AND nodes
    parents: list = field(default_factory=list)    # (AndNode, child slot)

    @property
    def is_leaf(self) -> bool:
        return self.key[0] == "leaf"

    def name(self) -> str:
        if self.is_leaf:
            _, i, a = self.key
            return f"n({i},1,{a})"
        _, i, j, a = self.key
        return f"n({i},{j},{a})"


@dataclass
class AndNode:
    """AND node n(i,j,k,A->BC) or n(i,1,.,A->a)."""

    key: tuple
    weight: int
    l: Interval
    u: Interval
    parent: OrNode = None
    children: list = field(default_factory=list)   # OR nodes, in rhs order

    def name(self) -> str:
        if self.key[0] == "bin":
            _, i, j, k, label = self.key
        else:
            _, i, _, label = self.key
            j, k = 1, "."
        return f"n({i},{j},{k},{label})"


class AndOrDag:
    def __init__(self, n: int, root: OrNode, or_nodes: dict, and_nodes: dict,
                 leaves: dict):
        self.n = n
        self.root = root
        self.or_nodes = or_nodes
        self.and_nodes = and_nodes
        self.leaves = leaves  # (i, a) -> OrNode


class NoRootError(ValueError):
    """The chart has no start-symbol entry spanning the whole sequence."""


def build_dag(grammar, domains: DomainStore, chart) -> AndOrDag:
    """Construct the AND/OR DAG over the chart's membership table."""
    cg = compile_grammar(grammar)
    n = chart.n
    z = chart.z
    if cg.start not in chart.lcell.get((1, n), {}):
        raise NoRootError("start symbol does not span the sequence")

    or_nodes: dict = {}
    and_nodes: dict = {}
    leaves: dict = {}

    def new_interval_l():
        return Interval(0, z + 1)

    def new_interval_u():
        return Interval(-1, z)

    for (i, j), cell in chart.lcell.items():
        for nt in cell:
            key = ("nt", i, j, cg.nts[nt])
            or_nodes[key] = OrNode(key, new_interval_l(), new_interval_u())

    rhs_terminals = {a for _, a, _, _ in cg.term_prods}
    for i in range(1, n + 1):
        for a in cg.grammar.terminals:
            if a in rhs_terminals:
                key = ("leaf", i, a)
                node = OrNode(key, new_interval_l(), new_interval_u())
                or_nodes[key] = node
                leaves[(i, a)] = node

    for (i, j), cell in chart.lcell.items():
        if j < 2:
            continue
        for idx, (lhs, b, c, w, restr) in enumerate(cg.bin_prods):
            if lhs not in cell:
                continue
            if restr is not None and not restr.allows(i, j):
                continue
            parent = or_nodes[("nt", i, j, cg.nts[lhs])]
            for k in range(1, j):
                if b not in chart.lcell.get((i, k), ()):
                    continue
                if c not in chart.lcell.get((i + k, j - k), ()):
                    continue
                label = f"{cg.nts[lhs]}->{cg.nts[b]} {cg.nts[c]}"
                key = ("bin", i, j, k, label)
                left = or_nodes[("nt", i, k, cg.nts[b])]
                right = or_nodes[("nt", i + k, j - k, cg.nts[c])]
                node = AndNode(key, w, new_interval_l(), new_interval_u(),
                               parent=parent, children=[left, right])
                and_nodes[key] = node
                parent.children.append(node)
                left.parents.append((node, 0))
                right.parents.append((node, 1))

    for i in range(1, n + 1):
        cell = chart.lcell.get((i, 1), {})
        for lhs, a, w, restr in cg.term_prods:
            if lhs not in cell:
                continue
            if restr is not None and not restr.allows(i, 1):
                continue
            parent = or_nodes[("nt", i, 1, cg.nts[lhs])]
            leaf = leaves[(i, a)]
            label = f"{cg.nts[lhs]}->{a}"
            key = ("term", i, a, label)
            node = AndNode(key, w, new_interval_l(), new_interval_u(),
                           parent=parent, children=[leaf])
            and_nodes[key] = node
            parent.children.append(node)
            leaf.parents.append((node, 0))

    root = or_nodes[("nt", 1, n, cg.nts[cg.start])]
    return AndOrDag(n, root, or_nodes, and_nodes, leaves)


@dataclass
class Constraint:
    kind: str
    anchor: object          # OrNode or AndNode owning the entailment check
    order_key: tuple = ()

    def revise(self, net: "ConstraintNetwork") -> bool:
        raise NotImplementedError

    def describe(self) -> str:
        return f"{self.kind} @ {self.anchor.name()}"


class AndSumConstraint(Constraint):
    """l_A = sum of children l_O plus the production weight."""

    def revise(self, net):
        nd = self.anchor
        cap = net.z + 1
        lo = min(sum(ch.l.lo for ch in nd.children) + nd.weight, cap)
        hi = sum(ch.l.hi for ch in nd.children) + nd.weight
        changed = nd.l.tighten_lo(lo)
        changed |= nd.l.tighten_hi(hi)
        return changed


class OrMinConstraint(Constraint):
    """l_O = min over AND children of l_A."""

    def revise(self, net):
        nd = self.anchor
        lo = min(ch.l.lo for ch in nd.children)
        hi = min(ch.l.hi for ch in nd.children)
        changed = nd.l.tighten_lo(lo)
        changed |= nd.l.tighten_hi(hi)
        for ch in nd.children:
            changed |= ch.l.tighten_lo(nd.l.lo)
        return changed


class UpperLinkConstraint(Constraint):
    """u_A of an AND node never exceeds the u_O of its OR parent."""

    def revise(self, net):
        nd = self.anchor
        changed = nd.u.tighten_hi(nd.parent.u.hi)
        changed |= nd.parent.u.tighten_lo(nd.u.lo)
        return changed


class ParentMaxConstraint(Constraint):
    """u_O = max over AND parents of (u_A - l_O(sibling) - weight)."""

    def revise(self, net):
        nd = self.anchor
        hi = -1
        lo = -1
        for and_node, slot in nd.parents:
            sibs = [ch for s, ch in enumerate(and_node.children) if s != slot]
            hi_term = and_node.u.hi - and_node.weight \
                - sum(ch.l.lo for ch in sibs)
            lo_term = and_node.u.lo - and_node.weight \
                - sum(ch.l.hi for ch in sibs)
            hi = max(hi, hi_term)
            lo = max(lo, lo_term)
        changed = nd.u.tighten_hi(hi)
        changed |= nd.u.tighten_lo(min(lo, net.z))
        return changed


class LeafChannelConstraint(Constraint):
    """Channel a leaf to the domain of its position.

    Seeds l_O from domain membership (in-domain values get [0, z],
    removed values are forced above z) and records the pruning verdict:
    a value is dropped when its leaf's lower l bound exceeds either z or
    the upper u bound.
    """

    def revise(self, net):
        leaf = self.anchor
        _, i, a = leaf.key
        changed = False
        if a in net.domains.domain(i):
            changed |= leaf.l.tighten_hi(net.z)
        else:
            changed |= leaf.l.tighten_lo(net.z + 1)
        net.prune_flags[(i, a)] = (leaf.l.lo > leaf.u.hi
                                   or leaf.l.lo > net.z)
        return changed


class RootCapConstraint(Constraint):
    """u_O at the root is at most the budget z."""

    def revise(self, net):
        return self.anchor.u.tighten_hi(net.z)


class ConstraintNetwork:
    def __init__(self, dag: AndOrDag, z: int):
        self.dag = dag
        self.z = z
        self.constraints: list[Constraint] = []
        self.domains: DomainStore = None
        self.prune_flags: dict = {}
        self.stats = {"invoked": 0, "skipped": 0}

    def dump(self) -> str:
        lines = []
        for c in sorted(self.constraints, key=lambda c: c.order_key):
            a = c.anchor
            lines.append(f"{c.describe()}: l={a.l} u={a.u}")
        return "\n".join(lines)


def post_network(dag: AndOrDag, z: int) -> ConstraintNetwork:
    """Instantiate the primitive constraints over the DAG's bound variables."""
    net = ConstraintNetwork(dag, z)
    n = dag.n
    for node in dag.and_nodes.values():
        j = node.parent.key[2] if node.parent.key[0] == "nt" else 1
        net.constraints.append(
            AndSumConstraint(AND_SUM, node, (0, j, 0)))
        net.constraints.append(
            UpperLinkConstraint(UPPER_LINK, node, (2, n - j, 1)))
    for node in dag.or_nodes.values():
        if node.is_leaf:
            net.constraints.append(
                ParentMaxConstraint(PARENT_MAX, node, (2, n, 0)))
            _, i, a = node.key
            net.constraints.append(
                LeafChannelConstraint(LEAF_CHANNEL, node, (3, i, a)))
            continue
        j = node.key[2]
        if node.children:
            net.constraints.append(
                OrMinConstraint(OR_MIN, node, (0, j, 1)))
        if node is dag.root:
            net.constraints.append(
                RootCapConstraint(ROOT_CAP, node, (1, 0, 0)))
        else:
            # posted even with no AND parents: the empty max pins u to -1,
            # matching the chart's untouched sentinel for unreachable cells
            net.constraints.append(
                ParentMaxConstraint(PARENT_MAX, node, (2, n - j, 0)))
    return net


def schedule_order(network: ConstraintNetwork) -> list[Constraint]:
    """Ordering mirroring the chart passes: l bounds by increasing span,
    the root cap, u bounds by decreasing span, then the leaf channels.
    One pass from a fresh post reaches the fixpoint."""
    return sorted(network.constraints, key=lambda c: c.order_key)


def entailment_skip(network: ConstraintNetwork, node) -> bool:
    """True when the node's bound constraints can no longer prune."""
    return node.l.lo > node.u.hi


_SKIPPABLE = {AND_SUM, OR_MIN, UPPER_LINK, PARENT_MAX}


def fixpoint(network: ConstraintNetwork, domains: DomainStore, *,
             entailment: bool = True, order: list | None = None):
    """Revise constraints to a fixpoint; returns Pruned or INFEASIBLE.

    The pruning verdicts of the leaf channels are published to the
    returned store once the bounds are stable, mirroring the monolithic
    propagator's final prune step.
    """
    network.domains = domains
    for (i, a), leaf in network.dag.leaves.items():
        if a in domains.domain(i):
            leaf.l.tighten_hi(network.z)
        else:
            leaf.l.tighten_lo(network.z + 1)
    if order is None:
        order = schedule_order(network)
    changed = True
    while changed:
        changed = False
        for c in order:
            if entailment and c.kind in _SKIPPABLE \
                    and entailment_skip(network, c.anchor):
                network.stats["skipped"] += 1
                continue
            network.stats["invoked"] += 1
            changed |= c.revise(network)
    root = network.dag.root
    if root.l.lo > network.z:
        return INFEASIBLE
    out = []
    for i in range(1, len(domains) + 1):
        keep = set()
        for a in domains.domain(i):
            leaf = network.dag.leaves.get((i, a))
            if leaf is None:
                continue
            if not network.prune_flags.get((i, a), False):
                keep.add(a)
        if not keep:
            return INFEASIBLE
        out.append(keep)
    return Pruned(DomainStore(out), root.l.lo)


def propagate(grammar, z: int, domains: DomainStore, *,
              entailment: bool = True, order: list | None = None):
    """Convenience: build the DAG, post the network, run the fixpoint."""
    result, _ = propagate_with_network(grammar, z, domains,
                                       entailment=entailment, order=order)
    return result


def propagate_with_network(grammar, z: int, domains: DomainStore, *,
                           entailment: bool = True, order: list | None = None):
    """Like propagate, but also returns the network (for stats and dumps)."""
    if z < 0:
        raise ValueError("budget z must be non-negative")
    if domains.failed:
        return INFEASIBLE, None
    cg = compile_grammar(grammar)
    chart = upward_pass(cg, z, domains)
    try:
        dag = build_dag(cg, domains, chart)
    except NoRootError:
        return INFEASIBLE, None
    network = post_network(dag, z)
    result = fixpoint(network, domains, entailment=entailment, order=order)
    return result, network
