"""Independent brute-force oracles used by the tests.

They deliberately avoid the package's own evaluators: diagrams are checked by
enumerating explicit paths, circuits by naive recursion, automata by
enumerating whole state sequences.
"""

import itertools


def all_assignments(names):
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, bits))


def diagram_runs(d, a):
    """Every accepting run (list of node ids) of diagram ``d`` following ``a``."""
    out_edges = {}
    for s, b, t in d.edges:
        out_edges.setdefault(s, []).append((b, t))
    has_pred = {t for _, _, t in d.edges}
    runs = []

    def walk(path):
        u = path[-1]
        node = d.nodes[u]
        if node.kind == "sink":
            if node.value:
                runs.append(list(path))
            return
        for b, v in out_edges.get(u, []):
            if node.kind == "or" or b == a[node.var]:
                walk(path + [v])

    for s in d.nodes:
        if s not in has_pred:
            walk([s])
    if d.zero_suppressed:
        names = set(d.universe.vars)
        keep = []
        for run in runs:
            tested = {d.nodes[u].var for u in run if d.nodes[u].kind == "var"}
            if all(a[x] == 0 for x in names - tested):
                keep.append(run)
        runs = keep
    return runs


def diagram_count(d):
    return sum(1 for a in all_assignments(d.universe.vars) if diagram_runs(d, a))


def circuit_value(c, a, g=None):
    g = c.output if g is None else g
    gate = c.gates[g]
    if gate.kind == "true":
        return 1
    if gate.kind == "false":
        return 0
    if gate.kind == "var":
        return a[gate.var]
    if gate.kind == "neg":
        return 1 - a[gate.var]
    vals = [circuit_value(c, a, i) for i in gate.inputs]
    return int(all(vals)) if gate.kind == "and" else int(any(vals))


def circuit_count(c):
    return sum(circuit_value(c, a) for a in all_assignments(c.universe.vars))


def nfa_runs(a, w):
    """Number of accepting state sequences of NFA ``a`` on word ``w``."""
    w = [str(x) for x in w]
    n = 0
    for seq in itertools.product(a.states, repeat=len(w) + 1):
        if seq[0] in a.initial and seq[-1] in a.final and all(
                (seq[i], w[i], seq[i + 1]) in a.transitions for i in range(len(w))):
            n += 1
    return n


def nfta_runs(a, tree):
    """Number of accepting state labelings of NFTA ``a`` on a labeled tree."""
    sk = tree.skeleton
    nodes = list(sk.nodes)
    n = 0
    for states in itertools.product(a.states, repeat=len(nodes)):
        st = dict(zip(nodes, states))
        if st[sk.root] not in a.final:
            continue
        ok = True
        for v in nodes:
            x = tree.labels[v]
            kids = sk.children[v]
            if kids is None:
                ok = (x, st[v]) in a.iota
            else:
                ok = (st[kids[0]], st[kids[1]], x, st[v]) in a.transitions
            if not ok:
                break
        n += ok
    return n
