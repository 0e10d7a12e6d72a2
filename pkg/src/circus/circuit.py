"""NNF Boolean circuits.

A :class:`Circuit` is a DAG of gates with a single output.  Negation is only
ever applied to variables, so ``neg`` gates carry the variable they negate
instead of an input wire.  Class checks split into syntactic ones
(:func:`classify_syntactic`) and semantic ones that consult the truth-table
oracle (:func:`check_deterministic`, :func:`check_strong_det_and_sdd`).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, NamedTuple

import numpy as np

from .core import Assignment, TruthTable, VarUniverse, assignment_matrix, check_limit
from .errors import (InvalidCircuit, NotStructured, PreconditionViolated,
                     UniverseTooLarge, UnknownVariable)
from .vtree import VTree, validate_vtree

KINDS = ("true", "false", "var", "neg", "and", "or")


class Gate(NamedTuple):
    kind: str
    var: str | None = None
    inputs: tuple = ()


def const(value: bool) -> Gate:
    return Gate("true" if value else "false")


def lit(var: str, positive: bool = True) -> Gate:
    return Gate("var" if positive else "neg", var=var)


def and_(*inputs) -> Gate:
    return Gate("and", inputs=tuple(inputs))


def or_(*inputs) -> Gate:
    return Gate("or", inputs=tuple(inputs))


class Circuit:
    def __init__(self, universe, gates: Mapping[str, Gate], output: str, check=True):
        if not isinstance(universe, VarUniverse):
            universe = VarUniverse(universe)
        self.universe = universe
        self.gates: dict[str, Gate] = {
            g: Gate(k.kind, k.var, tuple(k.inputs)) for g, k in gates.items()}
        self.output = output
        if check:
            validate_circuit(self)

    @cached_property
    def topo(self) -> list[str]:
        """Gate ids, inputs before the gates that use them."""
        indeg = {g: 0 for g in self.gates}
        users = {g: [] for g in self.gates}
        for g, gate in self.gates.items():
            for i in set(gate.inputs):
                indeg[g] += 1
                users[i].append(g)
        queue = deque(g for g, d in indeg.items() if d == 0)
        order = []
        while queue:
            g = queue.popleft()
            order.append(g)
            for u in users[g]:
                indeg[u] -= 1
                if indeg[u] == 0:
                    queue.append(u)
        if len(order) != len(self.gates):
            raise InvalidCircuit("circuit has a cycle")
        return order

    @cached_property
    def fanout(self) -> dict[str, int]:
        out = {g: 0 for g in self.gates}
        for gate in self.gates.values():
            for i in gate.inputs:
                out[i] += 1
        return out

    @property
    def wires(self) -> int:
        """Size in wires; a negation gate counts one wire from its variable."""
        return sum(len(g.inputs) + (g.kind == "neg") for g in self.gates.values())

    def sizes(self) -> dict:
        return {"gates": len(self.gates), "wires": self.wires}

    def __repr__(self):
        return f"Circuit({len(self.gates)} gates, {self.wires} wires, output={self.output!r})"


def validate_circuit(c: Circuit) -> None:
    if c.output not in c.gates:
        raise InvalidCircuit(f"output gate {c.output!r} does not exist")
    for g, gate in c.gates.items():
        if gate.kind not in KINDS:
            raise InvalidCircuit(f"gate {g!r} has unknown kind {gate.kind!r}")
        if gate.kind in ("var", "neg"):
            if gate.var not in c.universe:
                raise UnknownVariable(f"gate {g!r} uses unknown variable {gate.var!r}")
        if gate.kind in ("and", "or"):
            if not gate.inputs:
                raise InvalidCircuit(f"{gate.kind}-gate {g!r} has no input")
            for i in gate.inputs:
                if i not in c.gates:
                    raise InvalidCircuit(f"gate {g!r} has unknown input {i!r}")
        elif gate.inputs:
            raise InvalidCircuit(f"{gate.kind} gate {g!r} cannot have inputs")
    c.topo  # raises on cycles


# -- semantics ------------------------------------------------------------


def evaluate_circuit(c: Circuit, a: Assignment) -> int:
    val = {}
    for g in c.topo:
        gate = c.gates[g]
        k = gate.kind
        if k == "true":
            val[g] = 1
        elif k == "false":
            val[g] = 0
        elif k == "var":
            val[g] = 1 if a[gate.var] else 0
        elif k == "neg":
            val[g] = 0 if a[gate.var] else 1
        elif k == "and":
            val[g] = int(all(val[i] for i in gate.inputs))
        else:
            val[g] = int(any(val[i] for i in gate.inputs))
    return val[c.output]


def gate_tables(c: Circuit, limit: int | None = None) -> dict[str, np.ndarray]:
    """Truth table (over the whole universe) of every gate."""
    cols = assignment_matrix(c.universe, limit)
    rows = cols.shape[0]
    val = {}
    for g in c.topo:
        gate = c.gates[g]
        k = gate.kind
        if k in ("true", "false"):
            val[g] = np.full(rows, k == "true")
        elif k == "var":
            val[g] = cols[:, c.universe.index(gate.var)]
        elif k == "neg":
            val[g] = ~cols[:, c.universe.index(gate.var)]
        elif k == "and":
            t = np.ones(rows, dtype=bool)
            for i in gate.inputs:
                t &= val[i]
            val[g] = t
        else:
            t = np.zeros(rows, dtype=bool)
            for i in gate.inputs:
                t |= val[i]
            val[g] = t
    return val


def truth_table(c: Circuit, limit: int | None = None) -> TruthTable:
    return TruthTable(c.universe, gate_tables(c, limit)[c.output])


def gate_vars(c: Circuit) -> dict[str, frozenset]:
    """vars(g) for every gate, via integer bitsets in one topological pass."""
    names = c.universe.vars
    bits = {}
    for g in c.topo:
        gate = c.gates[g]
        if gate.kind in ("var", "neg"):
            bits[g] = 1 << c.universe.index(gate.var)
        else:
            m = 0
            for i in gate.inputs:
                m |= bits[i]
            bits[g] = m
    cache = {}

    def to_set(m):
        if m not in cache:
            cache[m] = frozenset(v for j, v in enumerate(names) if m >> j & 1)
        return cache[m]

    return {g: to_set(m) for g, m in bits.items()}


# -- syntactic classes ----------------------------------------------------


@dataclass
class CircuitClassReport:
    decomposable: bool
    decision: bool
    smooth: bool
    formula: bool
    read_once: bool
    deterministic: bool | None = None
    strongly_deterministic: bool | None = None
    sdd: bool | None = None
    witnesses: dict = field(default_factory=dict)

    kinds = {
        "decomposable": "syntactic", "decision": "syntactic", "smooth": "syntactic",
        "formula": "syntactic", "read_once": "syntactic", "deterministic": "semantic",
        "strongly_deterministic": "semantic", "sdd": "semantic",
    }

    def flags(self) -> dict:
        return {k: getattr(self, k) for k in self.kinds}


def _decision_var(c: Circuit, g: str) -> str | None:
    """The variable X if ``g`` is a decision gate on X, else None."""
    gate = c.gates[g]
    if gate.kind != "or" or len(gate.inputs) != 2:
        return None
    lits = []
    for i in gate.inputs:
        child = c.gates[i]
        if child.kind != "and":
            return None
        lits.append({(c.gates[j].kind, c.gates[j].var) for j in child.inputs
                     if c.gates[j].kind in ("var", "neg")})
    for kind_a, kind_b in (("var", "neg"), ("neg", "var")):
        for k, x in lits[0]:
            if k == kind_a and (kind_b, x) in lits[1]:
                return x
    return None


def classify_syntactic(c: Circuit) -> CircuitClassReport:
    vs = gate_vars(c)
    witnesses = {}
    decomposable = True
    for g, gate in c.gates.items():
        if gate.kind != "and":
            continue
        ins = gate.inputs
        if len(ins) != 2 or ins[0] == ins[1] or vs[ins[0]] & vs[ins[1]]:
            decomposable = False
            witnesses["decomposable"] = g
            break
    decision = True
    for g, gate in c.gates.items():
        if gate.kind == "or" and _decision_var(c, g) is None:
            decision = False
            witnesses["decision"] = g
            break
    smooth = True
    for g, gate in c.gates.items():
        if gate.kind == "or" and any(vs[i] != vs[g] for i in gate.inputs):
            smooth = False
            witnesses["smooth"] = g
            break
    formula = all(n == 1 for g, n in c.fanout.items() if g != c.output) \
        and c.fanout[c.output] == 0
    lit_gates = [gate.var for gate in c.gates.values() if gate.kind in ("var", "neg")]
    read_once = formula and len(lit_gates) == len(set(lit_gates))
    return CircuitClassReport(decomposable, decision, smooth, formula, read_once,
                              witnesses=witnesses)


def _require_decomposable(c: Circuit):
    rep = classify_syntactic(c)
    if not rep.decomposable:
        raise PreconditionViolated(
            f"circuit is not decomposable (gate {rep.witnesses['decomposable']!r})")


# -- structuredness -------------------------------------------------------


def _split(t: VTree, n: str, v1: frozenset, v2: frozenset):
    """(first, second) order of the inputs if node ``n`` splits them, else None."""
    left, right = (t.var_sets[k] for k in t.children(n))
    if v1 <= left and v2 <= right:
        return 0
    if v2 <= left and v1 <= right:
        return 1
    return None


def check_structured(c: Circuit, t: VTree) -> dict[str, str]:
    """Return a structure map (and-gate -> v-tree node) or raise NotStructured.

    Each and-gate is mapped to the lowest node admitting a split of its two
    inputs between the node's children, in either order.
    """
    _require_decomposable(c)
    validate_vtree(t, c.universe)
    vs = gate_vars(c)
    rho = {}
    for g, gate in c.gates.items():
        if gate.kind != "and":
            continue
        v1, v2 = (vs[i] for i in gate.inputs)
        n = t.lca(vs[g]) if vs[g] else t.root
        if t.is_leaf(n):
            n = t.parent(n)
        while n is not None and _split(t, n, v1, v2) is None:
            n = t.parent(n)
        if n is None:
            raise NotStructured(f"and-gate {g!r} fits no v-tree node", gate=g)
        rho[g] = n
    return rho


def is_structured(c: Circuit, t: VTree) -> bool:
    try:
        check_structured(c, t)
    except NotStructured:
        return False
    return True


# -- determinism ----------------------------------------------------------


def _overlap(tables) -> bool:
    total = np.zeros(len(tables[0]), dtype=np.int8)
    for tb in tables:
        total += tb
        if total.max() > 1:
            return True
    return False


def determinism_witness(c: Circuit, limit: int | None = None) -> str | None:
    """An or-gate with two distinct inputs that are jointly satisfiable."""
    tables = gate_tables(c, limit)
    for g, gate in c.gates.items():
        if gate.kind != "or":
            continue
        ins = list(dict.fromkeys(gate.inputs))
        if len(ins) > 1 and _overlap([tables[i] for i in ins]):
            return g
    return None


def check_deterministic(c: Circuit, limit: int | None = None) -> bool:
    return determinism_witness(c, limit) is None


def check_strong_det_and_sdd(c: Circuit, t: VTree, limit: int | None = None):
    """(strongly deterministic, SDD) with respect to ``t``.

    Every or-gate must take and-gates that one common v-tree node splits with
    the prime under its first child; primes must be pairwise exclusive, and
    for an SDD also exhaustive.
    """
    check_structured(c, t)
    check_limit(len(c.universe), limit)
    vs = gate_vars(c)
    internal = [n for n in t.preorder() if not t.is_leaf(n)]
    # Candidate nodes for each and-gate that feeds an or-gate.
    cand = {}
    for g, gate in c.gates.items():
        if gate.kind != "or":
            continue
        for i in gate.inputs:
            child = c.gates[i]
            if child.kind != "and":
                return False, False
            if i not in cand:
                v1, v2 = (vs[j] for j in child.inputs)
                cand[i] = {n for n in internal if _split(t, n, v1, v2) is not None}
    ors = [g for g, gate in c.gates.items() if gate.kind == "or"]
    changed = True
    while changed:
        changed = False
        for g in ors:
            common = set.intersection(*(cand[i] for i in c.gates[g].inputs))
            if not common:
                return False, False
            for i in c.gates[g].inputs:
                if cand[i] != common:
                    cand[i] &= common
                    changed = True
    depth = t.depth
    order = {n: k for k, n in enumerate(internal)}
    tables = gate_tables(c, limit)
    exhaustive = True
    for g in ors:
        ins = list(dict.fromkeys(c.gates[g].inputs))
        node = max(cand[ins[0]], key=lambda n: (depth[n], -order[n]))
        primes = []
        for i in ins:
            a, b = c.gates[i].inputs
            swap = _split(t, node, vs[a], vs[b])
            primes.append(b if swap == 1 else a)
        if _overlap([tables[p] for p in primes]):
            return False, False
        cover = np.zeros(len(tables[g]), dtype=bool)
        for p in primes:
            cover |= tables[p]
        if not cover.all():
            exhaustive = False
    return True, exhaustive


def classify(c: Circuit, t: VTree | None = None, limit: int | None = None) -> CircuitClassReport:
    rep = classify_syntactic(c)
    try:
        w = determinism_witness(c, limit)
        rep.deterministic = w is None
        if w is not None:
            rep.witnesses["deterministic"] = w
    except UniverseTooLarge:
        rep.deterministic = None
    if t is not None and rep.decomposable:
        try:
            rep.strongly_deterministic, rep.sdd = check_strong_det_and_sdd(c, t, limit)
        except NotStructured as e:
            rep.strongly_deterministic = rep.sdd = False
            rep.witnesses["structured"] = e.gate
        except UniverseTooLarge:
            pass
    return rep


# -- transformations ------------------------------------------------------


class _Fresh:
    def __init__(self, taken):
        self.taken = set(taken)
        self.counter = itertools.count()

    def __call__(self, prefix):
        while True:
            name = f"{prefix}{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def smooth_circuit(c: Circuit) -> Circuit:
    """Patch every or-gate input with tautologies (X or not X) for its missing variables."""
    vs = gate_vars(c)
    gates = dict(c.gates)
    fresh = _Fresh(gates)
    taut = {}
    chains = {}

    def tautology(x):
        if x not in taut:
            p = fresh("sp")
            n = fresh("sn")
            o = fresh("so")
            gates[p] = lit(x)
            gates[n] = lit(x, False)
            gates[o] = or_(p, n)
            taut[x] = o
        return taut[x]

    def chain(missing):
        key = tuple(missing)
        if key not in chains:
            head = tautology(key[-1])
            for x in reversed(key[:-1]):
                g = fresh("sc")
                gates[g] = and_(tautology(x), head)
                head = g
            chains[key] = head
        return chains[key]

    patched = {}
    order = c.universe.vars
    for g, gate in c.gates.items():
        if gate.kind != "or":
            continue
        new_inputs = []
        for i in gate.inputs:
            missing = [x for x in order if x in vs[g] and x not in vs[i]]
            if not missing:
                new_inputs.append(i)
                continue
            key = (i, tuple(missing))
            if key not in patched:
                p = fresh("sa")
                gates[p] = and_(i, chain(missing))
                patched[key] = p
            new_inputs.append(patched[key])
        gates[g] = Gate("or", inputs=tuple(new_inputs))
    return Circuit(c.universe, gates, c.output)


def condition(c: Circuit, partial: Mapping[str, int]) -> Circuit:
    """Fix some variables and simplify.

    Literal gates on fixed variables become constants; constants are then
    propagated and single-input gates bypassed, so the result mentions no
    fixed variable and its and-gates stay binary.
    """
    for x in partial:
        if x not in c.universe:
            raise UnknownVariable(f"unknown variable {x!r}")
    if not partial:
        return c
    universe = c.universe.without(partial)
    # Simplified form of each gate: ("const", bool) or ("gate", id).
    form = {}
    gates = {}
    for g in c.topo:
        gate = c.gates[g]
        k = gate.kind
        if k in ("true", "false"):
            form[g] = ("const", k == "true")
        elif k in ("var", "neg"):
            if gate.var in partial:
                val = bool(partial[gate.var])
                form[g] = ("const", val if k == "var" else not val)
            else:
                gates[g] = gate
                form[g] = ("gate", g)
        else:
            absorbing = k == "or"
            ins = []
            result = None
            neutral = None
            for i in gate.inputs:
                f = form[i]
                if f[0] == "const":
                    if f[1] == absorbing:
                        result = ("const", absorbing)
                        break
                    neutral = i
                else:
                    ins.append(f[1])
            if result is None:
                if not ins:
                    result = ("const", not absorbing)
                elif len(ins) == 1 and k == "and" and neutral is not None \
                        and gates[ins[0]].kind in ("var", "neg"):
                    # Keep literal-and-true so decision gates keep their shape.
                    gates[neutral] = const(True)
                    gates[g] = Gate("and", inputs=(ins[0], neutral))
                    result = ("gate", g)
                elif len(ins) == 1:
                    result = ("gate", ins[0])
                else:
                    gates[g] = Gate(k, inputs=tuple(ins))
                    result = ("gate", g)
            form[g] = result
    f = form[c.output]
    if f[0] == "const":
        return Circuit(universe, {c.output: const(f[1])}, c.output)
    return _prune(Circuit(universe, gates, f[1], check=False))


def _prune(c: Circuit) -> Circuit:
    keep = {c.output}
    stack = [c.output]
    while stack:
        g = stack.pop()
        for i in c.gates[g].inputs:
            if i not in keep:
                keep.add(i)
                stack.append(i)
    return Circuit(c.universe, {g: c.gates[g] for g in c.gates if g in keep}, c.output)


def count_models_smooth_ddnnf(c: Circuit, assume_deterministic: bool = False) -> int:
    """Exact model count of a smooth d-DNNF (sum at or-gates, product at and-gates).

    Determinism is verified with the oracle unless ``assume_deterministic``.
    Variables absent from the output gate double the count.
    """
    rep = classify_syntactic(c)
    if not rep.smooth:
        raise PreconditionViolated("circuit is not smooth")
    if not rep.decomposable:
        raise PreconditionViolated("circuit is not decomposable")
    if not assume_deterministic and not check_deterministic(c):
        raise PreconditionViolated("circuit is not deterministic")
    count = {}
    for g in c.topo:
        gate = c.gates[g]
        k = gate.kind
        if k == "false":
            count[g] = 0
        elif k in ("true", "var", "neg"):
            count[g] = 1
        elif k == "and":
            p = 1
            for i in gate.inputs:
                p *= count[i]
            count[g] = p
        else:
            count[g] = sum(count[i] for i in dict.fromkeys(gate.inputs))
    free = len(c.universe) - len(gate_vars(c)[c.output])
    return count[c.output] << free
