"""Compilers: decision diagrams to circuits, automata to provenance representations."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import bdd as B
from . import circuit as C
from .automata import BINARY, Nfa, Nfta, nfa_complete, nfta_trim
from .circuit import Circuit, Gate
from .core import VarUniverse
from .errors import InvalidAutomaton, PreconditionViolated, SemanticsMismatch
from .vtree import TreeSkeleton, VTree, leaf_push, right_linear

# Diagram flag -> circuit property it guarantees.
CLAUSES = {
    "free": "decomposable",
    "ordered": "structured",
    "unambiguous": "deterministic",
    "deterministic": "decision",
    "tree": "formula",
    "complete": "smooth",
}


@dataclass
class PreservationReport:
    input_flags: dict
    claims: dict = field(default_factory=dict)  # circuit property -> claimed?

    def claimed(self) -> list[str]:
        return [p for p, on in self.claims.items() if on]


def bdd_to_circuit(d: B.NBdd, report: B.DiagramClassReport | None = None):
    """Translate a diagram into an equivalent NNF circuit in linear time.

    Returns ``(circuit, vtree, report)``; ``vtree`` is the right-linear v-tree
    of the witness order when the diagram is ordered, else None.
    """
    if d.has_or_nodes:
        raise PreconditionViolated("eliminate or-nodes before translating")
    if d.zero_suppressed:
        raise SemanticsMismatch("translation expects the standard semantics")
    gates: dict[str, Gate] = {}
    fresh = C._Fresh(d.nodes)

    def ref(v):
        # Sinks and literals get a fresh gate per use so trees stay formulas.
        n = d.nodes[v]
        if n.kind == "sink":
            g = fresh("k")
            gates[g] = C.const(n.value)
            return g
        return v

    for u in reversed(d.topo):
        n = d.nodes[u]
        if n.kind != "var":
            continue
        branch = {}
        for b in (1, 0):
            targets = [ref(v) for lab, v in d.out[u] if lab == b]
            if len(targets) == 1:
                branch[b] = targets[0]
            else:
                g = fresh("o")
                gates[g] = C.or_(*targets)
                branch[b] = g
        parts = []
        for b in (1, 0):
            lit = fresh("l")
            gates[lit] = C.lit(n.var, positive=bool(b))
            a = fresh("a")
            gates[a] = C.and_(lit, branch[b])
            parts.append(a)
        gates[u] = C.or_(*parts)
    tops = [ref(s) for s in d.sources]
    if len(tops) == 1:
        out = tops[0]
    else:
        out = fresh("top")
        gates[out] = C.or_(*tops)
    circuit = Circuit(d.universe, gates, out)

    if report is None:
        report = B.classify(d)
    flags = report.flags()
    vtree = None
    if report.ordered and len(d.universe):
        vtree = right_linear(report.order)
    claims = {prop: bool(flags.get(src)) for src, prop in CLAUSES.items()}
    return circuit, vtree, PreservationReport(flags, claims)


def verify_preservation(c: Circuit, vtree: VTree | None, rep: PreservationReport,
                        limit: int | None = None) -> dict[str, bool]:
    """Run the circuit check behind every claimed property; property -> passed."""
    syn = C.classify_syntactic(c)
    out = {}
    for prop in rep.claimed():
        if prop == "structured":
            out[prop] = vtree is not None and C.is_structured(c, vtree)
        elif prop == "deterministic":
            out[prop] = C.check_deterministic(c, limit)
        else:
            out[prop] = getattr(syn, prop)
    return out


# -- word automata --------------------------------------------------------


def position_vars(n: int) -> list[str]:
    return [f"X{i}" for i in range(1, n + 1)]


def nfa_provenance(a: Nfa, n: int) -> B.NBdd:
    """Complete nOBDD over X1..Xn accepting exactly the length-n words of ``a``.

    Node ``g{i}_{q}`` tests ``Xi`` in state ``q``; level ``n+1`` holds the
    sinks.  The automaton is completed first and only nodes reachable from a
    source are kept.
    """
    if set(a.alphabet) != set(BINARY):
        raise InvalidAutomaton("provenance needs the alphabet {0,1}; binarize first")
    if n < 0:
        raise ValueError("length must be nonnegative")
    universe = VarUniverse(position_vars(n))
    if n == 0 or not a.initial:
        accept = n == 0 and bool(a.initial & a.final)
        return B.NBdd(universe, {"g": B.sink(accept)}, [])
    a = nfa_complete(a)
    delta = a.delta()
    order = {q: k for k, q in enumerate(a.states)}
    nodes = {}
    edges = []
    level = sorted(a.initial, key=order.get)
    for i in range(1, n + 2):
        nxt = set()
        for q in level:
            u = f"g{i}_{q}"
            if i == n + 1:
                nodes[u] = B.sink(q in a.final)
                continue
            nodes[u] = B.decision(f"X{i}")
            for b in BINARY:
                for q2 in delta.get((q, b), ()):
                    edges.append((u, int(b), f"g{i + 1}_{q2}"))
                    nxt.add(q2)
        level = sorted(nxt, key=order.get)
    return B.NBdd(universe, nodes, edges)


def word_assignment(w, n: int | None = None) -> dict[str, int]:
    w = [int(x) for x in w]
    return {f"X{i}": b for i, b in enumerate(w, 1)}


# -- tree automata --------------------------------------------------------


def nfta_provenance(a: Nfta, t: TreeSkeleton) -> tuple[Circuit, VTree]:
    """Smooth structured DNNF over the nodes of ``t`` for the automaton ``a``.

    Gate ``g.n.q`` is true when some run on the subtree at ``n`` ends in
    ``q``.  The automaton is trimmed first, which makes the circuit
    deterministic whenever the automaton is unambiguous.
    """
    a = nfta_trim(a)
    universe = VarUniverse(t.nodes)
    init = a.init_map()
    by_letter = {x: sorted((p, q, r) for p, q, x2, r in a.transitions if x2 == x)
                 for x in BINARY}
    gates: dict[str, Gate] = {}
    have: dict[tuple, str] = {}

    def literal(n, b):
        g = f"x.{n}.{b}"
        if g not in gates:
            gates[g] = C.lit(n, positive=b == "1")
        return g

    for n in t.postorder():
        inputs = {}
        if t.is_leaf(n):
            for b in BINARY:
                for q in init.get(b, ()):
                    inputs.setdefault(q, []).append(literal(n, b))
        else:
            n1, n2 = t.children[n]
            for b in BINARY:
                for q1, q2, q in by_letter[b]:
                    if (n1, q1) not in have or (n2, q2) not in have:
                        continue
                    inner = f"i.{n}.{q1}.{q2}"
                    if inner not in gates:
                        gates[inner] = C.and_(have[n1, q1], have[n2, q2])
                    g = f"a.{n}.{q1}.{q2}.{b}.{q}"
                    gates[g] = C.and_(literal(n, b), inner)
                    inputs.setdefault(q, []).append(g)
        for q in a.states:
            if q in inputs:
                g = f"g.{n}.{q}"
                gates[g] = C.or_(*inputs[q])
                have[n, q] = g
    roots = [have[t.root, q] for q in a.states if q in a.final and (t.root, q) in have]
    if roots:
        gates["out"] = C.or_(*roots)
    else:
        gates["out"] = C.const(False)
    circuit = C._prune(Circuit(universe, gates, "out", check=False))
    return circuit, leaf_push(t)


def labeling_assignment(labels) -> dict[str, int]:
    return {n: int(x) for n, x in labels.items()}
