"""Command-line interface: ``circus <command> ...``.

Exit codes: 0 success, 1 domain error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import automata as A
from . import bdd as B
from . import circuit as C
from . import compile as K
from .core import VarUniverse, oracle_count
from .errors import CircusError, ParseError
from .formats import parse_file, serialize, write_file


class UsageError(Exception):
    pass


def _assignment(text: str) -> dict[str, int]:
    out = {}
    for part in filter(None, (p.strip() for p in (text or "").split(","))):
        name, sep, value = part.partition("=")
        if not sep or value not in ("0", "1"):
            raise UsageError(f"bad assignment {part!r}; expected NAME=0 or NAME=1")
        out[name] = int(value)
    return out


def _emit(text: str, out):
    out.write(text if text.endswith("\n") else text + "\n")


def _yn(v):
    return "unknown" if v is None else "yes" if v else "no"


def _fmt_witness(w):
    if isinstance(w, dict):
        return " ".join(f"{k}={v}" for k, v in w.items())
    if isinstance(w, (list, tuple)):
        return " ".join(str(x) for x in w)
    return str(w)


def _report(kind, payload, args):
    flags, witnesses, sizes, extra = {}, {}, {}, {}
    if kind == "nbdd":
        if payload.has_or_nodes:
            rep = B.classify(B.from_or_bdd(payload))
            extra["note"] = "classified after or-node elimination"
        else:
            rep = B.classify(payload)
        flags = rep.flags()
        witnesses = dict(rep.witnesses)
        extra["class"] = rep.table_class()
        extra["semantics"] = "zero-suppressed" if payload.zero_suppressed else "standard"
        sizes = {"nodes": len(payload.nodes), "edges": len(payload.edges),
                 "sources": len(payload.sources)}
    elif kind == "nnf":
        vt = parse_file(args.vtree, "vtree").payload if args.vtree else None
        rep = C.classify(payload, vt)
        flags = rep.flags()
        if vt is None:
            flags.pop("strongly_deterministic")
            flags.pop("sdd")
        else:
            flags["structured"] = C.is_structured(payload, vt) if rep.decomposable else False
        witnesses = dict(rep.witnesses)
        sizes = payload.sizes()
    elif kind == "nfa":
        flags = A.nfa_classify(payload)
        w = A.nfa_ambiguous_word(payload)
        if w is not None:
            witnesses["unambiguous"] = "".join(w) if all(len(x) == 1 for x in w) else list(w)
        sizes = {"alphabet": len(payload.alphabet), "states": len(payload.states),
                 "transitions": len(payload.transitions), "size": payload.size}
    elif kind == "nfta":
        flags = A.nfta_classify(payload)
        w = A.nfta_ambiguity_witness(payload)
        if w is not None:
            witnesses["unambiguous"] = list(w)
        sizes = {"states": len(payload.states), "iota": len(payload.iota),
                 "transitions": len(payload.transitions), "size": payload.size}
    elif kind == "vtree":
        sizes = {"leaves": len(payload.leaves), "internal": len(payload.internal)}
        extra["variables"] = payload.variables
    else:
        sizes = {"nodes": len(payload)}
    return flags, witnesses, sizes, extra


def cmd_check(args, out):
    doc = parse_file(args.file)
    flags, witnesses, sizes, extra = _report(doc.kind, doc.payload, args)
    if args.json:
        data = {"kind": doc.kind, "flags": flags, "witnesses": witnesses, "sizes": sizes}
        data.update(extra)
        _emit(json.dumps(data, sort_keys=True), out)
        return 0
    lines = [f"kind: {doc.kind}"]
    for k, v in extra.items():
        lines.append(f"{k}: {_fmt_witness(v)}")
    for k, v in flags.items():
        line = f"{k}: {_yn(v)}"
        if k in witnesses:
            line += f" (witness: {_fmt_witness(witnesses[k])})"
        lines.append(line)
    if "order" in witnesses:
        lines.append(f"order: {' < '.join(witnesses['order'])}")
    for k, v in sizes.items():
        lines.append(f"size.{k}: {v}")
    _emit("\n".join(lines), out)
    return 0


def cmd_eval(args, out):
    doc = parse_file(args.file)
    if doc.kind == "nbdd":
        a = _total(doc.payload.universe, _assignment(args.assign))
        _emit(str(B.evaluate(doc.payload, a)), out)
    elif doc.kind == "nnf":
        a = _total(doc.payload.universe, _assignment(args.assign))
        _emit(str(C.evaluate_circuit(doc.payload, a)), out)
    elif doc.kind == "nfa":
        if args.word is None:
            raise UsageError("eval on an automaton needs --word")
        word = args.word.split(",") if "," in args.word else list(args.word)
        _emit(str(int(A.nfa_accepts(doc.payload, word))), out)
    elif doc.kind == "nfta":
        if args.tree is None:
            raise UsageError("eval on a tree automaton needs --tree and --assign labels")
        sk = parse_file(args.tree, "tree").payload
        labels = _assignment(args.assign)
        t = A.SigmaTree(sk, {n: str(labels.get(n, "")) for n in sk.nodes})
        _emit(str(int(A.nfta_accepts(doc.payload, t))), out)
    else:
        raise UsageError(f"cannot evaluate a {doc.kind} document")
    return 0


def _total(u: VarUniverse, a: dict) -> dict:
    extra = sorted(set(a) - set(u))
    if extra:
        raise CircusError(f"unknown variable(s) {extra}")
    missing = [v for v in u if v not in a]
    if missing:
        raise UsageError(f"assignment misses variable(s) {missing}")
    return a


TRANSFORMS = {
    "complete:generic": ("nbdd", lambda d: B.complete(d, "generic")),
    "complete:free": ("nbdd", lambda d: B.complete(d, "free")),
    "complete:ordered": ("nbdd", lambda d: B.complete(d, "ordered")),
    "freeify": ("nbdd", B.freeify_forest),
    "or-elim": ("nbdd", B.from_or_bdd),
    "or-intro": ("nbdd", B.to_or_bdd),
    "zdd2std": ("nbdd", lambda d: B.convert_semantics(d, "zdd-to-standard")),
    "std2zdd": ("nbdd", lambda d: B.convert_semantics(d, "standard-to-zdd")),
    "smooth": ("nnf", C.smooth_circuit),
}


def _write_or_print(obj, path, out):
    if path:
        write_file(path, obj)
    else:
        out.write(serialize(obj))


def cmd_transform(args, out):
    doc = parse_file(args.file)
    op = args.op
    if op.startswith("condition:"):
        if doc.kind != "nnf":
            raise UsageError("condition applies to circuits")
        result = C.condition(doc.payload, _assignment(op.split(":", 1)[1]))
    elif op == "trim":
        if doc.kind == "nfa":
            result = A.nfa_trim(doc.payload)
        elif doc.kind == "nfta":
            result = A.nfta_trim(doc.payload)
        else:
            raise UsageError("trim applies to automata")
    elif op in TRANSFORMS:
        kind, fn = TRANSFORMS[op]
        if doc.kind != kind:
            raise UsageError(f"{op} applies to {kind} documents, not {doc.kind}")
        result = fn(doc.payload)
    else:
        raise UsageError(f"unknown operation {op!r}")
    _write_or_print(result, args.output, out)
    return 0


def cmd_compile(args, out):
    doc = parse_file(args.file)
    vtree = None
    if args.op == "bdd2nnf":
        if doc.kind != "nbdd":
            raise UsageError("bdd2nnf reads a .nbdd file")
        result, vtree, _ = K.bdd_to_circuit(doc.payload)
    elif args.op == "nfa2obdd":
        if doc.kind != "nfa" or args.length is None:
            raise UsageError("nfa2obdd reads a .nfa file and needs --length")
        result = K.nfa_provenance(doc.payload, args.length)
    elif args.op == "nfta2sdnnf":
        if doc.kind != "nfta" or args.tree is None:
            raise UsageError("nfta2sdnnf reads a .nfta file and needs --tree")
        sk = parse_file(args.tree, "tree").payload
        result, vtree = K.nfta_provenance(doc.payload, sk)
    elif args.op == "binarize":
        if doc.kind != "nfa":
            raise UsageError("binarize reads a .nfa file")
        result, code = A.binarize_alphabet(doc.payload)
        if args.output:
            _emit("\n".join(f"{x} {c}" for x, c in code.items()), out)
    else:
        raise UsageError(f"unknown operation {args.op!r}")
    _write_or_print(result, args.output, out)
    if args.vtree_out:
        if vtree is None:
            raise CircusError("this compilation produces no v-tree")
        write_file(args.vtree_out, vtree)
    return 0


def _table(payload, kind):
    if kind == "nbdd":
        return B.truth_table(payload)
    if kind == "nnf":
        return C.truth_table(payload)
    raise UsageError(f"{kind} documents denote no Boolean function")


def structural_count(payload, kind):
    """Count with a class-specific algorithm, or None when none applies."""
    if kind == "nbdd":
        d = payload
        if d.zero_suppressed or d.has_or_nodes:
            return None
        if B.is_deterministic(d) and B.is_free(d)[0]:
            return B.count_models_complete_free(B.complete(d, "free"))
        return None
    if kind == "nnf":
        rep = C.classify_syntactic(payload)
        if not rep.decomposable:
            return None
        if not C.check_deterministic(payload):
            return None
        s = payload if rep.smooth else C.smooth_circuit(payload)
        return C.count_models_smooth_ddnnf(s, assume_deterministic=True)
    raise UsageError(f"cannot count a {kind} document")


def cmd_count(args, out):
    doc = parse_file(args.file)
    n = structural_count(doc.payload, doc.kind)
    if n is None or args.oracle:
        m = oracle_count(_table(doc.payload, doc.kind))
        if n is not None and n != m:
            raise CircusError(f"structural count {n} disagrees with the oracle count {m}")
        n = m
    _emit(str(n), out)
    return 0


def cmd_equiv(args, out):
    limit = args.max_vars
    docs = [parse_file(p) for p in (args.a, args.b)]
    tables = []
    for d in docs:
        if d.kind == "nbdd":
            tables.append(B.truth_table(d.payload, limit))
        elif d.kind == "nnf":
            tables.append(C.truth_table(d.payload, limit))
        else:
            raise UsageError(f"{d.kind} documents denote no Boolean function")
    t1, t2 = tables
    diff = t1.first_difference(t2)
    if diff is None:
        _emit("equivalent", out)
        return 0
    _emit("not equivalent", out)
    _emit("witness: " + _fmt_witness(diff), out)
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circus", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="classification report")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.add_argument("--vtree", help="v-tree for structuredness / SDD checks of a circuit")
    c.set_defaults(fn=cmd_check)

    e = sub.add_parser("eval", help="evaluate on one assignment")
    e.add_argument("file")
    e.add_argument("--assign", default="")
    e.add_argument("--word")
    e.add_argument("--tree")
    e.set_defaults(fn=cmd_eval)

    t = sub.add_parser("transform", help="apply a transformation")
    t.add_argument("--op", required=True)
    t.add_argument("file")
    t.add_argument("-o", "--output")
    t.set_defaults(fn=cmd_transform)

    k = sub.add_parser("compile", help="diagram/automaton compilers")
    k.add_argument("--op", required=True,
                   choices=["bdd2nnf", "nfa2obdd", "nfta2sdnnf", "binarize"])
    k.add_argument("file")
    k.add_argument("--length", type=int)
    k.add_argument("--tree")
    k.add_argument("-o", "--output")
    k.add_argument("--vtree-out")
    k.set_defaults(fn=cmd_compile)

    n = sub.add_parser("count", help="model count")
    n.add_argument("file")
    n.add_argument("--oracle", action="store_true", help="cross-check with the truth table")
    n.set_defaults(fn=cmd_count)

    q = sub.add_parser("equiv", help="truth-table equivalence")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--max-vars", type=int)
    q.set_defaults(fn=cmd_equiv)
    return p


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args, out)
    except (ParseError, UsageError) as e:
        err.write(f"error: {e}\n")
        return 2
    except OSError as e:
        err.write(f"error: {e.strerror or e}: {getattr(e, 'filename', '')}\n")
        return 2
    except CircusError as e:
        err.write(f"error: {e}\n")
        return 1


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
