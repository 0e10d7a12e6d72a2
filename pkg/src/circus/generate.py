"""Random diagrams, circuits and automata for property tests and demos.

Every generator takes a :class:`random.Random` so runs are reproducible.
"""

from __future__ import annotations

import random
from itertools import count

from . import bdd as B
from . import circuit as C
from .automata import Nfa, Nfta
from .core import VarUniverse

DIAGRAM_CLASSES = ["nBDD", "uBDD", "BDD", "nFBDD", "uFBDD", "FBDD", "nOBDD", "uOBDD", "OBDD"]


def var_names(n: int) -> list[str]:
    return [f"V{i}" for i in range(n)]


# -- diagrams -------------------------------------------------------------


def random_deterministic(rng: random.Random, universe, structure="ordered",
                         n_nodes=8) -> B.NBdd:
    """Single-source deterministic diagram built bottom-up.

    ``structure`` is ``ordered`` (one shuffled order), ``free`` (no variable
    below a node that tests it) or ``any``.
    """
    universe = VarUniverse(universe)
    names = list(universe)
    order = names[:]
    rng.shuffle(order)
    pos = {x: i for i, x in enumerate(order)}
    nodes = {"t": B.sink(True), "f": B.sink(False)}
    below = {"t": frozenset(), "f": frozenset()}
    edges = []
    made = []
    for k in range(n_nodes if names else 0):
        x = rng.choice(names)
        pool = list(below)
        if structure == "ordered":
            pool = [v for v in pool if nodes[v].kind == "sink" or pos[nodes[v].var] > pos[x]]
        elif structure == "free":
            pool = [v for v in pool if x not in below[v] and nodes[v].var != x]
        u = f"n{k}"
        kids = [rng.choice(pool), rng.choice(pool)]
        if kids[0] == kids[1] and len(pool) > 1 and rng.random() < 0.7:
            kids[1] = rng.choice([v for v in pool if v != kids[0]])
        nodes[u] = B.decision(x)
        acc = set()
        for b, v in enumerate(kids):
            edges.append((u, b, v))
            acc |= below[v] | ({nodes[v].var} if nodes[v].kind == "var" else set())
        below[u] = frozenset(acc)
        made.append(u)
    root = made[-1] if made else rng.choice(["t", "f"])
    d = B.NBdd(universe, nodes, edges, check=False)
    return B._prune(d, [root])


def random_free_fork(rng: random.Random, universe, n_nodes=8) -> B.NBdd:
    """Free diagram whose two branches follow independently shuffled orders.

    The root tests one variable; each branch is an ordered diagram over the
    remaining variables, so the result is free but usually not ordered.
    """
    universe = VarUniverse(universe)
    names = list(universe)
    if len(names) < 3:
        return random_deterministic(rng, universe, "free", n_nodes)
    x = rng.choice(names)
    rest = [v for v in names if v != x]
    nodes = {"r": B.decision(x)}
    edges = []
    for b in (0, 1):
        part = random_deterministic(rng, rest, "ordered", max(2, n_nodes // 2))
        ren = {u: f"b{b}_{u}" for u in part.nodes}
        nodes.update({ren[u]: n for u, n in part.nodes.items()})
        edges += [(ren[s], lab, ren[t]) for s, lab, t in part.edges]
        edges.append(("r", b, ren[part.sources[0]]))
    return B.NBdd(universe, nodes, edges)


def _copy_with(d: B.NBdd, extra_nodes, extra_edges, drop_edges=()) -> B.NBdd:
    nodes = dict(d.nodes)
    nodes.update(extra_nodes)
    drop = set(drop_edges)
    edges = [e for e in d.edges if e not in drop] + list(extra_edges)
    edges = list(dict.fromkeys(B.Edge(*e) for e in edges))
    return B.NBdd(d.universe, nodes, edges, zero_suppressed=d.zero_suppressed)


def split_unambiguous(rng: random.Random, d: B.NBdd, times=1) -> B.NBdd:
    """Add nondeterminism that keeps runs disjoint.

    A target ``v`` of some edge (or a source) is replaced by two copies, one
    whose 1-edges lead to a false sink and one whose 0-edges do; the copies
    are guarded by complementary values of ``v``'s variable.
    """
    fresh = count()
    for _ in range(times):
        var_nodes = [u for u, n in d.nodes.items() if n.kind == "var"]
        if not var_nodes:
            return d
        v = rng.choice(var_nodes)
        falses = [u for u, n in d.nodes.items() if n.kind == "sink" and not n.value]
        extra = {}
        if falses:
            fs = falses[0]
        else:
            fs = f"zf{next(fresh)}"
            while fs in d.nodes:
                fs = f"zf{next(fresh)}"
            extra[fs] = B.sink(False)
        c0, c1 = (f"{v}_g{next(fresh)}" for _ in range(2))
        while c0 in d.nodes or c1 in d.nodes:
            c0, c1 = (f"{v}_g{next(fresh)}" for _ in range(2))
        extra[c0] = extra[c1] = d.nodes[v]
        new = []
        for b, w in d.out[v]:
            new.append((c0, b, w if b == 0 else fs))
            new.append((c1, b, w if b == 1 else fs))
        new += [(c0, 1, fs), (c1, 0, fs)]
        drop = []
        preds = d.preds[v]
        if preds:
            s, b = rng.choice(preds)
            drop.append(B.Edge(s, b, v))
            new += [(s, b, c0), (s, b, c1)]
        d2 = _copy_with(d, extra, new, drop)
        d = B._prune(d2, [u for u in d2.sources if u != v])
    return d


def add_nondeterminism(rng: random.Random, d: B.NBdd, k=2, keep="any") -> B.NBdd:
    """Add up to ``k`` random edges or sources while staying ``keep`` (free/ordered/any)."""
    for _ in range(k):
        var_nodes = [u for u, n in d.nodes.items() if n.kind == "var"]
        if not var_nodes:
            return d
        if rng.random() < 0.25:
            # A second source: an extra node pointing into the diagram.
            x = rng.choice(list(d.universe))
            u = f"s{len(d.nodes)}"
            while u in d.nodes:
                u += "_"
            cand = _copy_with(d, {u: B.decision(x)},
                              [(u, 0, rng.choice(list(d.nodes))), (u, 1, rng.choice(list(d.nodes)))])
        else:
            u = rng.choice(var_nodes)
            w = rng.choice(list(d.nodes))
            try:
                cand = _copy_with(d, {}, [(u, rng.randint(0, 1), w)])
            except B.InvalidDiagram:
                continue
        if keep == "ordered" and B.variable_order(cand)[0] is None:
            continue
        if keep == "free" and not B.is_free(cand)[0]:
            continue
        d = cand
    return d


def random_diagram(rng: random.Random, nvars=None, structure=None, ambiguity=None,
                   n_nodes=None) -> B.NBdd:
    nvars = rng.randint(1, 6) if nvars is None else nvars
    structure = structure or rng.choice(["ordered", "free", "any"])
    ambiguity = ambiguity or rng.choice(["d", "u", "n"])
    n_nodes = n_nodes or rng.randint(2, 10)
    if structure == "free" and rng.random() < 0.6:
        d = random_free_fork(rng, var_names(nvars), n_nodes)
    else:
        d = random_deterministic(rng, var_names(nvars), structure, n_nodes)
    if ambiguity == "u":
        d = split_unambiguous(rng, d, rng.randint(1, 3))
    elif ambiguity == "n":
        d = add_nondeterminism(rng, d, rng.randint(1, 4), keep=structure)
    return d


def diagram_of_class(rng: random.Random, cls: str, nvars=None, tries=500) -> B.NBdd:
    """Rejection-sample a diagram whose most specific class is ``cls``."""
    amb = cls[0] if cls[0] in "nu" else "d"
    core = cls[1:] if amb != "d" else cls
    structure = {"OBDD": "ordered", "FBDD": "free", "BDD": "any"}[core]
    for _ in range(tries):
        n = nvars if nvars is not None else rng.randint(2, 8)
        d = random_diagram(rng, n, structure, amb, n_nodes=rng.randint(3, 12))
        if B.classify(d).table_class() == cls:
            return d
    raise RuntimeError(f"no {cls} found in {tries} tries")


def random_decision_tree(rng: random.Random, nvars=3, depth=4, free=False) -> B.NBdd:
    """Decision tree (fresh sink per leaf); variables may repeat unless ``free``."""
    names = var_names(nvars)
    nodes, edges = {}, []
    ids = count()

    def grow(dep, used):
        u = f"t{next(ids)}"
        options = [x for x in names if not (free and x in used)]
        if dep == 0 or not options or rng.random() < 0.2:
            nodes[u] = B.sink(rng.random() < 0.5)
            return u
        x = rng.choice(options)
        nodes[u] = B.decision(x)
        for b in (0, 1):
            edges.append((u, b, grow(dep - 1, used | {x})))
        return u

    grow(depth, frozenset())
    return B.NBdd(names, nodes, edges)


# -- circuits -------------------------------------------------------------


def random_dnnf(rng: random.Random, nvars=4, deterministic=False, max_depth=4) -> C.Circuit:
    """Decomposable circuit with some gate sharing.

    With ``deterministic`` every or-gate has pairwise exclusive inputs:
    either a decision gate or a gate guarded by a small literal pattern.
    """
    names = var_names(nvars)
    gates = {}
    ids = count()
    built = {}  # frozenset(vars) -> list of gate ids, for sharing

    def add(gate):
        g = f"g{next(ids)}"
        gates[g] = gate
        return g

    def literal(x, pos):
        return add(C.lit(x, pos))

    def chain_and(parts):
        head = parts[-1]
        for p in reversed(parts[:-1]):
            head = add(C.and_(p, head))
        return head

    def rec(vs, depth):
        vs = list(vs)
        key = frozenset(vs)
        if built.get(key) and rng.random() < 0.25:
            return rng.choice(built[key])
        if not vs or depth == 0 or rng.random() < 0.15:
            if vs and rng.random() < 0.8:
                g = literal(rng.choice(vs), rng.random() < 0.5)
            else:
                g = add(C.const(rng.random() < 0.8))
        else:
            choice = rng.random()
            if choice < 0.4 and len(vs) >= 2:
                rng.shuffle(vs)
                cut = rng.randint(1, len(vs) - 1)
                g = add(C.and_(rec(vs[:cut], depth - 1), rec(vs[cut:], depth - 1)))
            elif deterministic and choice < 0.75:
                x = rng.choice(vs)
                rest = [v for v in vs if v != x]
                g = add(C.or_(add(C.and_(literal(x, True), rec(rest, depth - 1))),
                              add(C.and_(literal(x, False), rec(rest, depth - 1)))))
            elif deterministic and len(vs) >= 2:
                # Three exclusive guards x&y, x&~y, ~x over the rest.
                x, y = rng.sample(vs, 2)
                rest = [v for v in vs if v not in (x, y)]
                branches = []
                for guard in ([(x, True), (y, True)], [(x, True), (y, False)], [(x, False)]):
                    if rng.random() < 0.8:
                        lits = [literal(v, p) for v, p in guard]
                        branches.append(add(C.and_(chain_and(lits), rec(rest, depth - 1))))
                if not branches:
                    branches.append(add(C.const(False)))
                g = add(C.or_(*branches))
            elif not deterministic:
                k = rng.randint(1, 3)
                g = add(C.or_(*[rec(rng.sample(vs, rng.randint(1, len(vs))), depth - 1)
                                for _ in range(k)]))
            else:
                g = literal(vs[0], rng.random() < 0.5)
        built.setdefault(key, []).append(g)
        return g

    out = rec(names, max_depth)
    return C._prune(C.Circuit(names, gates, out, check=False))


# -- automata -------------------------------------------------------------


def random_nfa(rng: random.Random, n_states=3, density=0.3, alphabet=("0", "1"),
               deterministic=False) -> Nfa:
    qs = [f"q{i}" for i in range(n_states)]
    trans = set()
    for p in qs:
        for x in alphabet:
            if deterministic:
                if rng.random() < 0.85:
                    trans.add((p, x, rng.choice(qs)))
            else:
                for q in qs:
                    if rng.random() < density:
                        trans.add((p, x, q))
    if deterministic:
        initial = {qs[0]}
    else:
        initial = {q for q in qs if rng.random() < 0.4} or {qs[0]}
    final = {q for q in qs if rng.random() < 0.4}
    return Nfa(alphabet, qs, initial, final, trans)


def random_nfta(rng: random.Random, n_states=2, density=0.2, deterministic=False) -> Nfta:
    qs = [f"q{i}" for i in range(n_states)]
    iota, trans = set(), set()
    for x in "01":
        if deterministic:
            iota.add((x, rng.choice(qs)))
        else:
            iota |= {(x, q) for q in qs if rng.random() < 0.5}
    for p in qs:
        for q in qs:
            for x in "01":
                if deterministic:
                    if rng.random() < 0.9:
                        trans.add((p, q, x, rng.choice(qs)))
                else:
                    trans |= {(p, q, x, r) for r in qs if rng.random() < density}
    final = {q for q in qs if rng.random() < 0.5}
    return Nfta(qs, final, iota, trans)
