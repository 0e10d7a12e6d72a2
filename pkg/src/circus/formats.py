"""Line-oriented text formats for every document kind.

One directive per line, whitespace-separated tokens, ``#`` starts a comment.
The first directive is a header naming the kind.  :func:`serialize` writes a
canonical form that :func:`parse` reads back to an identical document.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import bdd as B
from . import circuit as C
from .automata import Nfa, Nfta
from .errors import ParseError
from .vtree import TreeSkeleton, VTree

KINDS = ("nbdd", "nnf", "vtree", "nfa", "nfta", "tree")


@dataclass
class Document:
    kind: str
    payload: object
    metadata: dict = field(default_factory=dict)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            yield no, toks


def _need(toks, no, n, exact=True):
    ok = len(toks) == n if exact else len(toks) >= n
    if not ok:
        raise ParseError(f"'{toks[0]}' expects {'exactly' if exact else 'at least'} "
                         f"{n - 1} argument(s)", no)


def parse(text: str, kind: str | None = None, source: str | None = None) -> Document:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("missing header", 1)
    no, head = lines[0]
    if head[0] not in KINDS:
        raise ParseError(f"unknown header {head[0]!r}", no)
    if kind is not None and head[0] != kind:
        raise ParseError(f"expected a {kind} document, found {head[0]!r}", no)
    payload = _PARSERS[head[0]](head, no, lines[1:])
    return Document(head[0], payload, {"source": source})


def parse_file(path, kind: str | None = None) -> Document:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), kind, source=str(path))


def _unique(seen, ident, no, what="id"):
    if ident in seen:
        raise ParseError(f"duplicate {what} {ident!r}", no)
    if isinstance(seen, set):
        seen.add(ident)


def _parse_nbdd(head, no, lines):
    if head[1:] not in ([], ["zdd"]):
        raise ParseError("header must be 'nbdd' or 'nbdd zdd'", no)
    zdd = head[1:] == ["zdd"]
    universe = None
    nodes = {}
    edges = []
    for no, toks in lines:
        d = toks[0]
        if d == "vars":
            if universe is not None:
                raise ParseError("repeated 'vars'", no)
            universe = toks[1:]
        elif d == "node":
            _need(toks, no, 3)
            _unique(nodes, toks[1], no)
            nodes[toks[1]] = B.decision(toks[2])
        elif d == "ornode":
            _need(toks, no, 2)
            _unique(nodes, toks[1], no)
            nodes[toks[1]] = B.OR
        elif d == "sink":
            _need(toks, no, 3)
            if toks[2] not in ("t", "f"):
                raise ParseError("sink value must be t or f", no)
            _unique(nodes, toks[1], no)
            nodes[toks[1]] = B.sink(toks[2] == "t")
        elif d == "edge":
            _need(toks, no, 4)
            if toks[2] not in ("0", "1", "e"):
                raise ParseError(f"edge label must be 0, 1 or e, not {toks[2]!r}", no)
            edges.append((toks[1], B.EPS if toks[2] == "e" else int(toks[2]), toks[3]))
        else:
            raise ParseError(f"unknown directive {d!r}", no)
    try:
        universe = B.VarUniverse(universe or [])
    except ValueError as e:
        raise ParseError(str(e)) from None
    return B.NBdd(universe, nodes, edges, zero_suppressed=zdd)


def _parse_nnf(head, no, lines):
    _need(head, no, 1)
    universe = None
    gates = {}
    output = None
    for no, toks in lines:
        d = toks[0]
        if d == "vars":
            if universe is not None:
                raise ParseError("repeated 'vars'", no)
            universe = toks[1:]
        elif d == "gate":
            _need(toks, no, 3, exact=False)
            g, k, args = toks[1], toks[2], toks[3:]
            _unique(gates, g, no)
            if k in ("true", "false"):
                _need(toks, no, 3)
                gates[g] = C.const(k == "true")
            elif k in ("var", "neg"):
                _need(toks, no, 4)
                gates[g] = C.lit(args[0], k == "var")
            elif k in ("and", "or"):
                _need(toks, no, 4, exact=False)
                gates[g] = C.Gate(k, inputs=tuple(args))
            else:
                raise ParseError(f"unknown gate kind {k!r}", no)
        elif d == "output":
            _need(toks, no, 2)
            if output is not None:
                raise ParseError("repeated 'output'", no)
            output = toks[1]
        else:
            raise ParseError(f"unknown directive {d!r}", no)
    if output is None:
        raise ParseError("missing 'output'")
    try:
        universe = C.VarUniverse(universe or [])
    except ValueError as e:
        raise ParseError(str(e)) from None
    return C.Circuit(universe, gates, output)


def _parse_tree_lines(lines, leaf_arity):
    leaves, internal, root = {}, {}, None
    seen = set()
    for no, toks in lines:
        d = toks[0]
        if d == "leaf":
            _need(toks, no, leaf_arity)
            _unique(seen, toks[1], no)
            leaves[toks[1]] = toks[2] if leaf_arity == 3 else None
        elif d == "node":
            _need(toks, no, 4)
            _unique(seen, toks[1], no)
            internal[toks[1]] = (toks[2], toks[3])
        elif d == "root":
            _need(toks, no, 2)
            if root is not None:
                raise ParseError("repeated 'root'", no)
            root = toks[1]
        else:
            raise ParseError(f"unknown directive {d!r}", no)
    if root is None:
        raise ParseError("missing 'root'")
    return leaves, internal, root


def _parse_vtree(head, no, lines):
    _need(head, no, 1)
    leaves, internal, root = _parse_tree_lines(lines, 3)
    return VTree(leaves, internal, root)


def _parse_tree(head, no, lines):
    _need(head, no, 1)
    leaves, internal, root = _parse_tree_lines(lines, 2)
    children = dict(leaves)
    children.update(internal)
    return TreeSkeleton(children, root)


def _parse_nfa(head, no, lines):
    _need(head, no, 1)
    fields = {"alphabet": None, "states": None, "initial": None, "final": None}
    trans = []
    for no, toks in lines:
        d = toks[0]
        if d in fields:
            if fields[d] is not None:
                raise ParseError(f"repeated {d!r}", no)
            fields[d] = toks[1:]
        elif d == "trans":
            _need(toks, no, 4)
            trans.append(tuple(toks[1:]))
        else:
            raise ParseError(f"unknown directive {d!r}", no)
    for k in ("alphabet", "states", "initial"):
        if not fields[k]:
            raise ParseError(f"missing or empty {k!r}")
    return Nfa(fields["alphabet"], fields["states"], fields["initial"],
               fields["final"] or [], trans)


def _parse_nfta(head, no, lines):
    _need(head, no, 1)
    fields = {"alphabet": None, "states": None, "final": None}
    iota, trans = [], []
    for no, toks in lines:
        d = toks[0]
        if d in fields:
            if fields[d] is not None:
                raise ParseError(f"repeated {d!r}", no)
            fields[d] = toks[1:]
        elif d == "iota":
            _need(toks, no, 3)
            iota.append(tuple(toks[1:]))
        elif d == "trans":
            _need(toks, no, 5)
            trans.append(tuple(toks[1:]))
        else:
            raise ParseError(f"unknown directive {d!r}", no)
    if fields["alphabet"] != ["0", "1"]:
        raise ParseError("tree automata need 'alphabet 0 1'")
    if not fields["states"]:
        raise ParseError("missing or empty 'states'")
    return Nfta(fields["states"], fields["final"] or [], iota, trans)


_PARSERS = {"nbdd": _parse_nbdd, "nnf": _parse_nnf, "vtree": _parse_vtree,
            "tree": _parse_tree, "nfa": _parse_nfa, "nfta": _parse_nfta}


# -- serialization --------------------------------------------------------


def kind_of(obj) -> str:
    for cls, k in ((B.NBdd, "nbdd"), (C.Circuit, "nnf"), (VTree, "vtree"),
                   (TreeSkeleton, "tree"), (Nfa, "nfa"), (Nfta, "nfta")):
        if isinstance(obj, cls):
            return k
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _join(*parts):
    return " ".join(str(p) for p in parts)


def serialize(obj) -> str:
    if isinstance(obj, Document):
        obj = obj.payload
    kind = kind_of(obj)
    out = []
    if kind == "nbdd":
        out.append("nbdd zdd" if obj.zero_suppressed else "nbdd")
        out.append(_join("vars", *obj.universe))
        for u, n in obj.nodes.items():
            if n.kind == "var":
                out.append(_join("node", u, n.var))
            elif n.kind == "or":
                out.append(_join("ornode", u))
            else:
                out.append(_join("sink", u, "t" if n.value else "f"))
        for s, b, t in obj.edges:
            out.append(_join("edge", s, b, t))
    elif kind == "nnf":
        out += ["nnf", _join("vars", *obj.universe)]
        for g, gate in obj.gates.items():
            if gate.kind in ("true", "false"):
                out.append(_join("gate", g, gate.kind))
            elif gate.kind in ("var", "neg"):
                out.append(_join("gate", g, gate.kind, gate.var))
            else:
                out.append(_join("gate", g, gate.kind, *gate.inputs))
        out.append(_join("output", obj.output))
    elif kind == "vtree":
        out.append("vtree")
        for n in reversed(obj.preorder()):
            if obj.is_leaf(n):
                out.append(_join("leaf", n, obj.leaves[n]))
            else:
                out.append(_join("node", n, *obj.internal[n]))
        out.append(_join("root", obj.root))
    elif kind == "tree":
        out.append("tree")
        for n in reversed(obj.nodes):
            kids = obj.children[n]
            out.append(_join("leaf", n) if kids is None else _join("node", n, *kids))
        out.append(_join("root", obj.root))
    elif kind == "nfa":
        out += ["nfa", _join("alphabet", *obj.alphabet), _join("states", *obj.states)]
        out.append(_join("initial", *[q for q in obj.states if q in obj.initial]))
        out.append(_join("final", *[q for q in obj.states if q in obj.final]))
        for p, x, q in sorted(obj.transitions):
            out.append(_join("trans", p, x, q))
    else:
        out += ["nfta", "alphabet 0 1", _join("states", *obj.states)]
        out.append(_join("final", *[q for q in obj.states if q in obj.final]))
        for x, q in sorted(obj.iota):
            out.append(_join("iota", x, q))
        for t in sorted(obj.transitions):
            out.append(_join("trans", *t))
    return "\n".join(out) + "\n"


def write_file(path, obj) -> None:
    Path(path).write_text(serialize(obj), encoding="utf-8")
