"""Nondeterministic binary decision diagrams.

An :class:`NBdd` is a labeled DAG whose internal nodes test variables through
0- and 1-edges and whose sinks are labeled true or false.  An assignment is
accepted when some run that follows it ends in a true sink.  Diagrams may
contain or-nodes (unlabeled nondeterministic choice, ``EPS`` edges) and may be
read under the zero-suppressed semantics, where every variable not tested on
a run must be 0.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .core import (Assignment, VarUniverse, assignment_matrix, check_limit,
                   enumerate_assignments, TruthTable)
from .errors import (CyclicGraph, InvalidDiagram, MissingBranch, PreconditionViolated,
                     SemanticsMismatch, SinkWithOutEdge, StrayEpsilon, UniverseTooLarge)

EPS = "e"


class Node(NamedTuple):
    kind: str  # "var", "sink" or "or"
    var: str | None = None
    value: bool | None = None

    @property
    def label(self):
        if self.kind == "var":
            return self.var
        if self.kind == "sink":
            return "t" if self.value else "f"
        return "or"


def decision(var: str) -> Node:
    return Node("var", var=var)


def sink(value: bool) -> Node:
    return Node("sink", value=bool(value))


OR = Node("or")


class Edge(NamedTuple):
    src: str
    label: object  # 0, 1 or EPS
    dst: str


def _norm_label(label):
    if label in (0, 1, EPS):
        return label
    if label in ("0", "1"):
        return int(label)
    if label == "ε":
        return EPS
    raise InvalidDiagram(f"bad edge label {label!r}")


class NBdd:
    """Nondeterministic BDD over ``universe``.

    ``nodes`` maps ids to :class:`Node`; ``edges`` is a sequence of
    ``(src, label, dst)``.  The object is immutable; transformations return
    new diagrams.  Construction validates unless ``check=False``.
    """

    def __init__(self, universe, nodes, edges, zero_suppressed=False, check=True):
        if not isinstance(universe, VarUniverse):
            universe = VarUniverse(universe)
        self.universe = universe
        self.nodes: dict[str, Node] = dict(nodes)
        self.edges: tuple[Edge, ...] = tuple(
            Edge(s, _norm_label(b), d) for s, b, d in edges)
        self.zero_suppressed = bool(zero_suppressed)
        if check:
            validate(self)

    # -- structure ------------------------------------------------------

    @cached_property
    def out(self) -> dict[str, list[tuple[object, str]]]:
        out = {u: [] for u in self.nodes}
        for s, b, d in self.edges:
            out[s].append((b, d))
        return out

    @cached_property
    def preds(self) -> dict[str, list[tuple[str, object]]]:
        preds = {u: [] for u in self.nodes}
        for s, b, d in self.edges:
            preds[d].append((s, b))
        return preds

    @cached_property
    def sources(self) -> list[str]:
        return [u for u in self.nodes if not self.preds[u]]

    @property
    def sinks(self) -> list[str]:
        return [u for u, n in self.nodes.items() if n.kind == "sink"]

    @property
    def has_or_nodes(self) -> bool:
        return any(n.kind == "or" for n in self.nodes.values())

    @cached_property
    def topo(self) -> list[str]:
        """Node ids, every node before its successors."""
        indeg = {u: len(p) for u, p in self.preds.items()}
        queue = deque(u for u in self.nodes if indeg[u] == 0)
        order = []
        while queue:
            u = queue.popleft()
            order.append(u)
            for _, v in self.out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        if len(order) != len(self.nodes):
            raise CyclicGraph("diagram has a cycle")
        return order

    def label(self, u: str):
        return self.nodes[u].label

    def size(self) -> int:
        """Nodes + edges + edge-label alphabet."""
        labels = {b for _, b, _ in self.edges}
        return len(self.nodes) + len(self.edges) + len(labels)

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        flag = ", zdd" if self.zero_suppressed else ""
        return f"NBdd({len(self.nodes)} nodes, {len(self.edges)} edges{flag})"

    def replace(self, **kw) -> "NBdd":
        args = dict(universe=self.universe, nodes=self.nodes, edges=self.edges,
                    zero_suppressed=self.zero_suppressed)
        args.update(kw)
        return NBdd(**args)


def validate(d: NBdd) -> None:
    """Raise an :class:`InvalidDiagram` subclass unless ``d`` is well formed."""
    for u, n in d.nodes.items():
        if n.kind not in ("var", "sink", "or"):
            raise InvalidDiagram(f"node {u!r} has unknown kind {n.kind!r}")
        if n.kind == "var" and n.var not in d.universe:
            raise InvalidDiagram(f"node {u!r} tests unknown variable {n.var!r}")
    seen = set()
    for e in d.edges:
        if e.src not in d.nodes or e.dst not in d.nodes:
            raise InvalidDiagram(f"edge {e} references an unknown node")
        if e in seen:
            raise InvalidDiagram(f"duplicate edge {e}")
        seen.add(e)
    if not d.nodes:
        raise InvalidDiagram("diagram has no node")
    d.topo  # raises CyclicGraph
    for u, n in d.nodes.items():
        labels = [b for b, _ in d.out[u]]
        if n.kind == "sink":
            if labels:
                raise SinkWithOutEdge(f"sink {u!r} has outgoing edges")
        elif n.kind == "var":
            if EPS in labels:
                raise StrayEpsilon(f"epsilon edge out of decision node {u!r}")
            if 0 not in labels or 1 not in labels:
                raise MissingBranch(f"node {u!r} lacks an outgoing "
                                    f"{'0' if 0 not in labels else '1'}-edge")
        else:
            if d.zero_suppressed:
                raise InvalidDiagram("zero-suppressed diagrams cannot have or-nodes")
            if not labels:
                raise InvalidDiagram(f"or-node {u!r} has no outgoing edge")
            if any(b != EPS for b in labels):
                raise InvalidDiagram(f"labeled edge out of or-node {u!r}")
    if not d.sources:
        raise InvalidDiagram("diagram has no source")


# -- semantics ------------------------------------------------------------


def _follows(d: NBdd, u: str, a: Assignment):
    """Successors of ``u`` along edges consistent with ``a``."""
    n = d.nodes[u]
    if n.kind == "or":
        return [v for _, v in d.out[u]]
    val = 1 if a[n.var] else 0
    return [v for b, v in d.out[u] if b == val]


def evaluate(d: NBdd, a: Assignment) -> int:
    """1 iff some accepting run of ``d`` follows ``a`` (forward reachability)."""
    if d.zero_suppressed:
        return _evaluate_zdd(d, a)
    seen = set(d.sources)
    stack = list(seen)
    while stack:
        u = stack.pop()
        n = d.nodes[u]
        if n.kind == "sink":
            if n.value:
                return 1
            continue
        for v in _follows(d, u, a):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return 0


def _evaluate_zdd(d: NBdd, a: Assignment) -> int:
    # State: (node, bitmask of 1-valued variables tested so far).
    ones = [v for v in d.universe if a[v]]
    bit = {v: 1 << i for i, v in enumerate(ones)}
    full = (1 << len(ones)) - 1
    seen = {(s, 0) for s in d.sources}
    stack = list(seen)
    while stack:
        u, mask = stack.pop()
        n = d.nodes[u]
        if n.kind == "sink":
            if n.value and mask == full:
                return 1
            continue
        m2 = mask | bit.get(n.var, 0)
        for v in _follows(d, u, a):
            if (v, m2) not in seen:
                seen.add((v, m2))
                stack.append((v, m2))
    return 0


def count_accepting_runs(d: NBdd, a: Assignment) -> int:
    """Number of accepting runs following ``a`` (dynamic programming, exact)."""
    if d.zero_suppressed:
        return _count_runs_zdd(d, a)
    runs = {}
    for u in reversed(d.topo):
        n = d.nodes[u]
        if n.kind == "sink":
            runs[u] = 1 if n.value else 0
        else:
            runs[u] = sum(runs[v] for v in _follows(d, u, a))
    return sum(runs[s] for s in d.sources)


def _count_runs_zdd(d, a):
    ones = [v for v in d.universe if a[v]]
    bit = {v: 1 << i for i, v in enumerate(ones)}
    full = (1 << len(ones)) - 1
    memo = {}

    def runs(u, mask):
        key = (u, mask)
        if key not in memo:
            n = d.nodes[u]
            if n.kind == "sink":
                memo[key] = 1 if n.value and mask == full else 0
            else:
                m2 = mask | bit.get(n.var, 0)
                memo[key] = sum(runs(v, m2) for v in _follows(d, u, a))
        return memo[key]

    return sum(runs(s, 0) for s in d.sources)


def node_tables(d: NBdd, limit: int | None = None) -> dict[str, np.ndarray]:
    """For every node ``u``, the truth table of the sub-diagram rooted at ``u``.

    Standard semantics only; vectorized over all assignments.
    """
    if d.zero_suppressed:
        raise SemanticsMismatch("node tables are defined for the standard semantics")
    cols = assignment_matrix(d.universe, limit)
    rows = cols.shape[0]
    acc = {}
    for u in reversed(d.topo):
        n = d.nodes[u]
        if n.kind == "sink":
            acc[u] = np.full(rows, bool(n.value))
            continue
        t = np.zeros(rows, dtype=bool)
        if n.kind == "or":
            for _, v in d.out[u]:
                t |= acc[v]
        else:
            col = cols[:, d.universe.index(n.var)]
            for b, v in d.out[u]:
                t |= acc[v] & (col if b == 1 else ~col)
        acc[u] = t
    return acc


def truth_table(d: NBdd, limit: int | None = None) -> TruthTable:
    if d.zero_suppressed:
        bits = [evaluate(d, a) for a in enumerate_assignments(d.universe, limit)]
        return TruthTable(d.universe, np.array(bits, dtype=bool))
    acc = node_tables(d, limit)
    bits = np.zeros(1 << len(d.universe), dtype=bool)
    for s in d.sources:
        bits |= acc[s]
    return TruthTable(d.universe, bits)


def run_count_table(d: NBdd, limit: int | None = None, cap: int | None = None) -> np.ndarray:
    """Accepting-run counts for every assignment, optionally clipped at ``cap``."""
    if d.zero_suppressed:
        return np.array([count_accepting_runs(d, a)
                         for a in enumerate_assignments(d.universe, limit)], dtype=object)
    cols = assignment_matrix(d.universe, limit)
    rows = cols.shape[0]
    dtype = np.int64 if cap is not None else object
    runs = {}
    for u in reversed(d.topo):
        n = d.nodes[u]
        if n.kind == "sink":
            runs[u] = np.full(rows, 1 if n.value else 0, dtype=dtype)
            continue
        t = np.zeros(rows, dtype=dtype)
        if n.kind == "or":
            for _, v in d.out[u]:
                t = t + runs[v]
        else:
            col = cols[:, d.universe.index(n.var)]
            for b, v in d.out[u]:
                t = t + np.where(col if b == 1 else ~col, runs[v], 0)
        if cap is not None:
            t = np.minimum(t, cap)
        runs[u] = t
    total = np.zeros(rows, dtype=dtype)
    for s in d.sources:
        total = total + runs[s]
    if cap is not None:
        total = np.minimum(total, cap)
    return total


# -- classification -------------------------------------------------------


@dataclass
class DiagramClassReport:
    free: bool
    ordered: bool
    order: list[str] | None
    unambiguous: bool | None  # None when the universe exceeds the oracle limit
    deterministic: bool
    complete: bool
    forest: bool
    tree: bool
    witnesses: dict = field(default_factory=dict)

    kinds = {
        "free": "syntactic", "ordered": "syntactic", "unambiguous": "semantic",
        "deterministic": "syntactic", "complete": "syntactic",
        "forest": "syntactic", "tree": "syntactic",
    }

    def table_class(self) -> str:
        """Most specific class name, e.g. ``"uFBDD"``."""
        if self.deterministic:
            amb = ""
        elif self.unambiguous:
            amb = "u"
        else:
            amb = "n"
        struct = "O" if self.ordered else "F" if self.free else ""
        return f"{amb}{struct}BDD"

    def flags(self) -> dict:
        return {k: getattr(self, k) for k in self.kinds}


def _labels_below(d: NBdd) -> dict[str, frozenset]:
    """Variables labeling nodes reachable from ``u`` by at least one edge."""
    below = {}
    for u in reversed(d.topo):
        acc = set()
        for _, v in d.out[u]:
            acc |= below[v]
            if d.nodes[v].kind == "var":
                acc.add(d.nodes[v].var)
        below[u] = frozenset(acc)
    return below


def _path(d: NBdd, start: str, goal) -> list[str]:
    """Shortest path from ``start`` to a node satisfying ``goal`` (BFS, edge order)."""
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for _, v in d.out[u]:
            if v in prev:
                continue
            prev[v] = u
            if goal(v):
                path = [v]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            queue.append(v)
    return []


def is_free(d: NBdd) -> tuple[bool, list[str] | None]:
    """Free iff no directed path joins two nodes testing the same variable."""
    below = _labels_below(d)
    for u, n in d.nodes.items():
        if n.kind == "var" and n.var in below[u]:
            path = _path(d, u, lambda v, x=n.var: d.nodes[v].var == x)
            return False, path
    return True, None


def variable_order(d: NBdd) -> tuple[list[str] | None, list[str] | None]:
    """Witness total order if ``d`` is ordered, else ``(None, cycle_hint)``.

    Ties in the topological sort are broken by universe declaration order.
    """
    below = _labels_below(d)
    succ = defaultdict(set)
    for u, n in d.nodes.items():
        if n.kind != "var":
            continue
        if n.var in below[u]:
            return None, [n.var, n.var]
        succ[n.var] |= below[u]
    indeg = {v: 0 for v in d.universe}
    for x, ys in succ.items():
        for y in ys:
            indeg[y] += 1
    heap = [(d.universe.index(v), v) for v in d.universe if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, x = heapq.heappop(heap)
        order.append(x)
        for y in succ.get(x, ()):
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(heap, (d.universe.index(y), y))
    if len(order) != len(d.universe):
        stuck = [v for v in d.universe if indeg[v] > 0]
        return None, stuck
    return order, None


def is_deterministic(d: NBdd) -> bool:
    """Syntactic determinism: one source, exactly one 0-edge and one 1-edge per node."""
    if d.has_or_nodes or len(d.sources) != 1:
        return False
    for u, n in d.nodes.items():
        if n.kind == "var":
            labels = sorted(b for b, _ in d.out[u])
            if labels != [0, 1]:
                return False
    return True


def missed_variable(d: NBdd) -> str | None:
    """A variable avoided by some source-to-sink path, or None if ``d`` is complete."""
    for x in d.universe:
        seen = {s for s in d.sources if d.nodes[s].var != x}
        stack = list(seen)
        while stack:
            u = stack.pop()
            if d.nodes[u].kind == "sink":
                return x
            for _, v in d.out[u]:
                if v not in seen and d.nodes[v].var != x:
                    seen.add(v)
                    stack.append(v)
    return None


def is_complete(d: NBdd) -> bool:
    return missed_variable(d) is None


def forest_shape(d: NBdd) -> tuple[bool, bool]:
    """(forest, tree): ignoring sinks, is the graph a forest / a single tree?"""
    indeg = defaultdict(int)
    for s, _, t in d.edges:
        if d.nodes[t].kind != "sink":
            indeg[t] += 1
    forest = all(c <= 1 for c in indeg.values())
    return forest, forest and len(d.sources) == 1


def ambiguity_witness(d: NBdd, limit: int | None = None) -> dict | None:
    """An assignment with two or more accepting runs, or None if unambiguous."""
    counts = run_count_table(d, limit, cap=2)
    bad = np.flatnonzero(np.asarray(counts) >= 2)
    if not len(bad):
        return None
    n = len(d.universe)
    i = int(bad[0])
    return {v: (i >> (n - 1 - j)) & 1 for j, v in enumerate(d.universe.vars)}


def is_unambiguous(d: NBdd, limit: int | None = None) -> bool:
    return ambiguity_witness(d, limit) is None


def classify(d: NBdd, limit: int | None = None) -> DiagramClassReport:
    witnesses = {}
    free, path = is_free(d)
    if path:
        witnesses["free"] = path
    order = None
    if free:
        order, _ = variable_order(d)
    if order:
        witnesses["order"] = order
    try:
        amb = ambiguity_witness(d, limit)
        unambiguous = amb is None
        if amb is not None:
            witnesses["unambiguous"] = amb
    except UniverseTooLarge:
        unambiguous = None
    missed = missed_variable(d)
    if missed is not None:
        witnesses["complete"] = missed
    forest, tree = forest_shape(d)
    return DiagramClassReport(
        free=free, ordered=order is not None, order=order,
        unambiguous=unambiguous, deterministic=is_deterministic(d),
        complete=missed is None, forest=forest, tree=tree, witnesses=witnesses)


# -- construction helpers -------------------------------------------------


class _Builder:
    """Accumulates nodes/edges with collision-free fresh ids."""

    def __init__(self, taken=()):
        self.nodes: dict[str, Node] = {}
        self.edges: list[Edge] = []
        self._edge_set = set()
        self._taken = set(taken)
        self._counter = itertools.count()

    def fresh(self, prefix: str) -> str:
        while True:
            name = f"{prefix}{next(self._counter)}"
            if name not in self._taken and name not in self.nodes:
                self._taken.add(name)
                return name

    def node(self, u: str, n: Node) -> str:
        self.nodes[u] = n
        self._taken.add(u)
        return u

    def edge(self, s, b, t):
        e = Edge(s, b, t)
        if e not in self._edge_set:
            self._edge_set.add(e)
            self.edges.append(e)

    def chain(self, variables, target, prefix="c", zero_check=None):
        """Nodes testing ``variables`` in sequence, then ``target``; returns the head.

        With ``zero_check`` (a false-sink id) each node sends its 1-edge there.
        """
        head = target
        for x in reversed(list(variables)):
            u = self.fresh(prefix)
            self.node(u, decision(x))
            self.edge(u, 0, head)
            self.edge(u, 1, zero_check if zero_check is not None else head)
            head = u
        return head


def _prune(d: NBdd, roots: Iterable[str]) -> NBdd:
    """Drop nodes unreachable from ``roots``."""
    keep = set(roots)
    stack = list(keep)
    while stack:
        u = stack.pop()
        for _, v in d.out[u]:
            if v not in keep:
                keep.add(v)
                stack.append(v)
    nodes = {u: n for u, n in d.nodes.items() if u in keep}
    edges = [e for e in d.edges if e.src in keep]
    return NBdd(d.universe, nodes, edges, zero_suppressed=d.zero_suppressed)


# -- or-nodes -------------------------------------------------------------


def to_or_bdd(d: NBdd) -> NBdd:
    """Route every nondeterministic choice through a fresh or-node."""
    if d.has_or_nodes:
        raise PreconditionViolated("diagram already has or-nodes")
    b = _Builder(d.nodes)
    for u, n in d.nodes.items():
        b.node(u, n)
    for u in d.nodes:
        by_label = defaultdict(list)
        for lab, v in d.out[u]:
            by_label[lab].append(v)
        for lab in (0, 1):
            targets = by_label.get(lab, [])
            if len(targets) == 1:
                b.edge(u, lab, targets[0])
            elif targets:
                o = b.node(b.fresh("or"), OR)
                b.edge(u, lab, o)
                for v in targets:
                    b.edge(o, EPS, v)
    if len(d.sources) > 1:
        root = b.node(b.fresh("or"), OR)
        for s in d.sources:
            b.edge(root, EPS, s)
    return NBdd(d.universe, b.nodes, b.edges, zero_suppressed=d.zero_suppressed)


def _or_closure(d: NBdd, start: str) -> list[str]:
    """Non-or nodes reachable from ``start`` through or-nodes only (``start`` included)."""
    out = []
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        if d.nodes[u].kind != "or":
            out.append(u)
            continue
        for _, v in reversed(d.out[u]):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return out


def from_or_bdd(d: NBdd) -> NBdd:
    """Eliminate or-nodes by adding b-edges along every b-or-path.

    Or-paths may end at sinks.  A source or-node turns the nodes of its
    closure into sources; a closure node that also has other incoming edges
    is duplicated so that its copy can serve as a source.
    """
    if not d.has_or_nodes:
        return d
    b = _Builder(d.nodes)
    for u, n in d.nodes.items():
        if n.kind != "or":
            b.node(u, n)
    closures = {}

    def closure(v):
        if v not in closures:
            closures[v] = _or_closure(d, v)
        return closures[v]

    for u, n in d.nodes.items():
        if n.kind != "var":
            continue
        for lab, v in d.out[u]:
            for w in closure(v):
                b.edge(u, lab, w)
    has_pred = {e.dst for e in b.edges}
    for s in d.sources:
        if d.nodes[s].kind != "or":
            continue
        for w in closure(s):
            if w in has_pred:
                copy = b.node(b.fresh(f"{w}_src"), d.nodes[w])
                for e in list(b.edges):
                    if e.src == w:
                        b.edge(copy, e.label, e.dst)
    # Nodes left without predecessors and not reachable as sources are fine:
    # they were reachable only through a source or-node, so they are sources now.
    return NBdd(d.universe, b.nodes, b.edges, zero_suppressed=d.zero_suppressed)


# -- completion -----------------------------------------------------------


def _require(cond, msg):
    if not cond:
        raise PreconditionViolated(msg)


def complete(d: NBdd, mode: str = "generic") -> NBdd:
    """Make every source-to-sink path test every variable.

    ``generic`` replaces each sink by a chain over all variables; ``free``
    keeps a free diagram free; ``ordered`` keeps an ordered diagram ordered
    along its witness order.
    """
    _require(not d.has_or_nodes, "completion needs a diagram without or-nodes")
    if mode == "generic":
        return _complete_generic(d)
    if mode == "free":
        _require(is_free(d)[0], "mode=free requires a free diagram")
        return _complete_free(d)
    if mode == "ordered":
        order, _ = variable_order(d)
        _require(order is not None, "mode=ordered requires an ordered diagram")
        return _complete_ordered(d, order)
    raise ValueError(f"unknown completion mode {mode!r}")


def _complete_generic(d: NBdd) -> NBdd:
    b = _Builder(d.nodes)
    heads = {}
    for u, n in d.nodes.items():
        b.node(u, n)
    for u, n in d.nodes.items():
        if n.kind == "sink":
            heads[u] = b.chain(d.universe.vars, u)
    for s, lab, t in d.edges:
        b.edge(s, lab, heads.get(t, t))
    return NBdd(d.universe, b.nodes, b.edges, zero_suppressed=d.zero_suppressed)


def _complete_free(d: NBdd, zero_check: bool = False) -> NBdd:
    b = _Builder(d.nodes)
    for u, n in d.nodes.items():
        b.node(u, n)
    false_sink = b.node(b.fresh("zf"), sink(False)) if zero_check else None
    tested_before = {}
    universe = d.universe.vars
    chains = {}

    def chain_to(missing, target):
        key = (missing, target)
        if key not in chains:
            ordered = [x for x in universe if x in missing]
            chains[key] = b.chain(ordered, target, zero_check=false_sink)
        return chains[key]

    def after(p):
        return tested_before[p] | {d.nodes[p].var}

    for u in d.topo:
        n = d.nodes[u]
        preds = d.preds[u]
        if not preds:
            tested_before[u] = frozenset()
            if n.kind == "sink":
                # An isolated sink source gets a chain over everything.
                chain_to(frozenset(universe), u)
            continue
        if n.kind == "sink":
            target_set = frozenset(universe)
        else:
            target_set = frozenset().union(*(after(p) for p, _ in preds))
        tested_before[u] = target_set
        for p, lab in preds:
            missing = target_set - after(p)
            b.edge(p, lab, chain_to(missing, u) if missing else u)
    return NBdd(d.universe, b.nodes, b.edges, zero_suppressed=d.zero_suppressed)


def _complete_ordered(d: NBdd, order: list[str], zero_check: bool = False) -> NBdd:
    b = _Builder(d.nodes)
    for u, n in d.nodes.items():
        b.node(u, n)
    false_sink = b.node(b.fresh("zf"), sink(False)) if zero_check else None
    pos = {x: i for i, x in enumerate(order)}
    k = len(order)
    chains = {}

    def level(u):
        n = d.nodes[u]
        return pos[n.var] if n.kind == "var" else k

    def chain_from(start, target):
        key = (start, target)
        if key not in chains:
            chains[key] = b.chain(order[start:level(target)], target, zero_check=false_sink)
        return chains[key]

    for s in d.sources:
        if level(s) > 0:
            chain_from(0, s)
    for s, lab, t in d.edges:
        start = level(s) + 1
        b.edge(s, lab, chain_from(start, t) if level(t) > start else t)
    return NBdd(d.universe, b.nodes, b.edges, zero_suppressed=d.zero_suppressed)


def count_models_complete_free(d: NBdd) -> int:
    """Model count of a complete FBDD by bottom-up annotation."""
    if d.zero_suppressed or d.has_or_nodes:
        raise PreconditionViolated("counting needs a standard diagram without or-nodes")
    if not is_complete(d):
        raise PreconditionViolated("diagram is not complete")
    if not is_free(d)[0]:
        raise PreconditionViolated("diagram is not free")
    if not is_deterministic(d):
        raise PreconditionViolated("diagram is not deterministic")
    ann = {}
    for u in reversed(d.topo):
        n = d.nodes[u]
        if n.kind == "sink":
            ann[u] = 1 if n.value else 0
        else:
            ann[u] = sum(ann[v] for _, v in d.out[u])
    return sum(ann[s] for s in d.sources)


# -- zero-suppressed semantics ---------------------------------------------


def convert_semantics(d: NBdd, direction: str) -> NBdd:
    """Convert between the standard and the zero-suppressed semantics.

    ``direction`` is ``"zdd-to-standard"`` or ``"standard-to-zdd"``.  Both
    directions pick the completion that keeps the diagram ordered (or free)
    when it already is.
    """
    _require(not d.has_or_nodes, "semantics conversion needs a diagram without or-nodes")
    if direction == "standard-to-zdd":
        if d.zero_suppressed:
            raise SemanticsMismatch("diagram already uses the zero-suppressed semantics")
        order, _ = variable_order(d)
        if order is not None:
            c = _complete_ordered(d, order)
        elif is_free(d)[0]:
            c = _complete_free(d)
        else:
            c = _complete_generic(d)
        return c.replace(zero_suppressed=True)
    if direction == "zdd-to-standard":
        if not d.zero_suppressed:
            raise SemanticsMismatch("diagram uses the standard semantics")
        order, _ = variable_order(d)
        if order is not None:
            c = _complete_ordered(d, order, zero_check=True)
        elif is_free(d)[0]:
            c = _complete_free(d, zero_check=True)
        else:
            c = _zdd_split(d)
        return c.replace(zero_suppressed=False)
    raise ValueError(f"unknown direction {direction!r}")


def _zdd_split(d: NBdd) -> NBdd:
    """Zero-suppressed to standard for non-free diagrams.

    Nodes are split by the set of variables tested before them, which makes
    the untested variables at each sink known.  Exact but exponential in the
    worst case.
    """
    b = _Builder(d.nodes)
    false_sink = b.node(b.fresh("zf"), sink(False))
    names = {}
    universe = d.universe.vars

    def name(u, tested):
        key = (u, tested)
        if key in names:
            return names[key]
        n = d.nodes[u]
        if n.kind == "sink":
            target = b.node(b.fresh(f"{u}_"), n)
            missing = [x for x in universe if x not in tested]
            names[key] = b.chain(missing, target, zero_check=false_sink)
            return names[key]
        new = b.node(u if not tested else b.fresh(f"{u}_"), n)
        names[key] = new
        after = tested | {n.var}
        for lab, v in d.out[u]:
            b.edge(new, lab, name(v, after))
        return new

    for s in d.sources:
        name(s, frozenset())
    nodes = dict(b.nodes)
    used = {e.dst for e in b.edges} | {e.src for e in b.edges}
    if false_sink not in used:
        del nodes[false_sink]
    return NBdd(d.universe, nodes, b.edges)


# -- decision forests -----------------------------------------------------


def freeify_forest(d: NBdd) -> NBdd:
    """Make a decision forest free by removing re-tests of known variables."""
    _require(not d.has_or_nodes, "freeify needs a diagram without or-nodes")
    _require(forest_shape(d)[0], "diagram is not a forest")
    b = _Builder(d.nodes)

    def resolve(v, path):
        n = d.nodes[v]
        if n.kind == "sink":
            b.node(v, n)
            return [v]
        if n.var in path:
            forced = path[n.var]
            res = []
            for lab, w in d.out[v]:
                if lab == forced:
                    res.extend(resolve(w, path))
            return res
        visit(v, path)
        return [v]

    def visit(u, path):
        n = b.node(u, d.nodes[u])
        for lab, v in d.out[u]:
            for w in resolve(v, {**path, d.nodes[u].var: lab}):
                b.edge(u, lab, w)

    for s in d.sources:
        if d.nodes[s].kind == "sink":
            b.node(s, d.nodes[s])
        else:
            visit(s, {})
    return NBdd(d.universe, b.nodes, b.edges, zero_suppressed=d.zero_suppressed)
