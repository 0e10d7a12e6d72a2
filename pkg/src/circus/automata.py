"""Word automata (NFA) and bottom-up binary tree automata (NFTA).

Both kinds come with acceptance, trimming, a syntactic determinism test and
an exact unambiguity test based on the self-product of the automaton.  Words
are sequences of letters; a plain string is read one character per letter.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InvalidAutomaton
from .vtree import TreeSkeleton

BINARY = ("0", "1")


class UnknownLetter(InvalidAutomaton):
    pass


def _letters(w) -> tuple:
    return tuple(str(x) for x in w)


@dataclass(frozen=True)
class Nfa:
    alphabet: tuple
    states: tuple
    initial: frozenset
    final: frozenset
    transitions: frozenset  # of (q, letter, q')

    def __init__(self, alphabet, states, initial, final, transitions):
        set_ = object.__setattr__
        set_(self, "alphabet", tuple(dict.fromkeys(str(x) for x in alphabet)))
        set_(self, "states", tuple(dict.fromkeys(states)))
        set_(self, "initial", frozenset(initial))
        set_(self, "final", frozenset(final))
        set_(self, "transitions", frozenset((p, str(x), q) for p, x, q in transitions))
        qs = set(self.states)
        sigma = set(self.alphabet)
        if not self.initial <= qs or not self.final <= qs:
            raise InvalidAutomaton("initial/final states must be declared")
        for p, x, q in self.transitions:
            if p not in qs or q not in qs:
                raise InvalidAutomaton(f"transition {(p, x, q)} uses an undeclared state")
            if x not in sigma:
                raise InvalidAutomaton(f"transition {(p, x, q)} uses letter outside the alphabet")

    @property
    def size(self) -> int:
        return len(self.alphabet) + len(self.states) + len(self.transitions)

    def delta(self) -> dict:
        """(q, letter) -> sorted list of successor states."""
        out = defaultdict(list)
        for p, x, q in sorted(self.transitions):
            out[p, x].append(q)
        return out


def nfa_accepts(a: Nfa, w) -> bool:
    w = _letters(w)
    sigma = set(a.alphabet)
    delta = a.delta()
    cur = set(a.initial)
    for x in w:
        if x not in sigma:
            raise UnknownLetter(f"letter {x!r} is not in the alphabet")
        cur = {q for p in cur for q in delta.get((p, x), ())}
    return bool(cur & a.final)


def nfa_run_counts(a: Nfa, w) -> dict:
    """Number of runs on ``w`` ending in each state (brute-force oracle)."""
    delta = a.delta()
    counts = {q: 1 for q in a.initial}
    for x in _letters(w):
        nxt = defaultdict(int)
        for p, k in counts.items():
            for q in delta.get((p, x), ()):
                nxt[q] += k
        counts = dict(nxt)
    return counts


def nfa_accepting_runs(a: Nfa, w) -> int:
    counts = nfa_run_counts(a, w)
    return sum(k for q, k in counts.items() if q in a.final)


def _closure(start, succ):
    seen = set(start)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in succ.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def nfa_trim(a: Nfa) -> Nfa:
    fwd = defaultdict(set)
    bwd = defaultdict(set)
    for p, _, q in a.transitions:
        fwd[p].add(q)
        bwd[q].add(p)
    keep = _closure(a.initial, fwd) & _closure(a.final, bwd)
    return Nfa(a.alphabet, [q for q in a.states if q in keep],
               a.initial & keep, a.final & keep,
               [t for t in a.transitions if t[0] in keep and t[2] in keep])


def _fresh_state(states, base):
    name, k = base, 0
    while name in states:
        k += 1
        name = f"{base}{k}"
    return name


def nfa_complete(a: Nfa) -> Nfa:
    """Add one rejecting sink so every (state, letter) has a transition."""
    delta = a.delta()
    missing = [(q, x) for q in a.states for x in a.alphabet if (q, x) not in delta]
    if not missing:
        return a
    s = _fresh_state(set(a.states), "sink")
    extra = [(q, x, s) for q, x in missing] + [(s, x, s) for x in a.alphabet]
    return Nfa(a.alphabet, list(a.states) + [s], a.initial, a.final,
               set(a.transitions) | set(extra))


def nfa_is_deterministic(a: Nfa) -> bool:
    return len(a.initial) == 1 and all(len(v) <= 1 for v in a.delta().values())


def nfa_ambiguity_witness(a: Nfa):
    """A pair of distinct states that two accepting runs visit at the same
    position, or None when the automaton is unambiguous."""
    t = nfa_trim(a)
    delta = t.delta()
    start = {(p, q) for p in t.initial for q in t.initial}
    succ = defaultdict(set)
    seen = set(start)
    stack = list(start)
    while stack:
        p, q = stack.pop()
        for x in t.alphabet:
            for p2 in delta.get((p, x), ()):
                for q2 in delta.get((q, x), ()):
                    succ[p, q].add((p2, q2))
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        stack.append((p2, q2))
    pred = defaultdict(set)
    for u, vs in succ.items():
        for v in vs:
            pred[v].add(u)
    goal = {(p, q) for p, q in seen if p in t.final and q in t.final}
    useful = _closure(goal, pred) & seen
    off = sorted(pq for pq in useful if pq[0] != pq[1])
    return off[0] if off else None


def nfa_ambiguous_word(a: Nfa) -> tuple | None:
    """A shortest word with two accepting runs, or None.

    Breadth-first search over pairs of states plus a flag recording whether
    the two runs have already diverged.
    """
    delta = a.delta()
    start = [((p, q), p != q) for p in sorted(a.initial) for q in sorted(a.initial)]
    prev = {s: None for s in start}
    queue = list(start)
    for state in queue:
        (p, q), split = state
        if split and p in a.final and q in a.final:
            word = []
            while prev[state] is not None:
                state, x = prev[state]
                word.append(x)
            return tuple(reversed(word))
        for x in a.alphabet:
            for p2 in delta.get((p, x), ()):
                for q2 in delta.get((q, x), ()):
                    nxt = ((p2, q2), split or p2 != q2)
                    if nxt not in prev:
                        prev[nxt] = (state, x)
                        queue.append(nxt)
    return None


def nfa_classify(a: Nfa) -> dict:
    return {"deterministic": nfa_is_deterministic(a),
            "unambiguous": nfa_ambiguity_witness(a) is None}


# -- alphabet binarization ------------------------------------------------


def binary_code(alphabet: Iterable[str]) -> dict[str, str]:
    """Sorted letters get big-endian codes of width ceil(log2 |alphabet|), at least 1."""
    letters = sorted(set(str(x) for x in alphabet))
    if not letters:
        raise InvalidAutomaton("empty alphabet")
    width = max(1, math.ceil(math.log2(len(letters))))
    return {x: format(i, f"0{width}b") for i, x in enumerate(letters)}


def encode_word(w, code: Mapping[str, str]) -> str:
    try:
        return "".join(code[x] for x in _letters(w))
    except KeyError as e:
        raise UnknownLetter(f"letter {e.args[0]!r} is not in the code table") from None


def binarize_alphabet(a: Nfa) -> tuple[Nfa, dict[str, str]]:
    """Equivalent automaton over {0,1} reading each letter's code.

    Intermediate states are shared per (state, code prefix), so determinism
    and unambiguity carry over.
    """
    code = binary_code(a.alphabet)
    states = list(a.states)
    taken = set(states)
    mid = {}

    def middle(q, prefix):
        if (q, prefix) not in mid:
            name = _fresh_state(taken, f"{q}_{prefix}")
            taken.add(name)
            states.append(name)
            mid[q, prefix] = name
        return mid[q, prefix]

    trans = set()
    for p, x, q in sorted(a.transitions):
        bits = code[x]
        cur = p
        for k in range(len(bits) - 1):
            nxt = middle(p, bits[:k + 1])
            trans.add((cur, bits[k], nxt))
            cur = nxt
        trans.add((cur, bits[-1], q))
    return Nfa(BINARY, states, a.initial, a.final, trans), code


# -- tree automata --------------------------------------------------------


@dataclass(frozen=True)
class SigmaTree:
    skeleton: TreeSkeleton
    labels: Mapping[str, str]

    def __post_init__(self):
        labels = {n: str(x) for n, x in self.labels.items()}
        missing = set(self.skeleton.children) - set(labels)
        if missing:
            raise InvalidAutomaton(f"unlabeled tree nodes {sorted(missing)}")
        object.__setattr__(self, "labels", labels)


@dataclass(frozen=True)
class Nfta:
    alphabet: tuple
    states: tuple
    final: frozenset
    iota: frozenset  # of (letter, q)
    transitions: frozenset  # of (q1, q2, letter, q)

    def __init__(self, states, final, iota, transitions, alphabet=BINARY):
        set_ = object.__setattr__
        set_(self, "alphabet", tuple(str(x) for x in alphabet))
        set_(self, "states", tuple(dict.fromkeys(states)))
        set_(self, "final", frozenset(final))
        set_(self, "iota", frozenset((str(x), q) for x, q in iota))
        set_(self, "transitions", frozenset((p, q, str(x), r) for p, q, x, r in transitions))
        if set(self.alphabet) != set(BINARY) or len(self.alphabet) != 2:
            raise InvalidAutomaton("tree automata use the alphabet {0,1}")
        qs = set(self.states)
        if not self.final <= qs:
            raise InvalidAutomaton("final states must be declared")
        for x, q in self.iota:
            if x not in BINARY or q not in qs:
                raise InvalidAutomaton(f"bad initialization pair {(x, q)}")
        for t in self.transitions:
            if t[2] not in BINARY or not {t[0], t[1], t[3]} <= qs:
                raise InvalidAutomaton(f"bad transition {t}")

    @property
    def size(self) -> int:
        return len(self.alphabet) + len(self.states) + len(self.transitions) + len(self.iota)

    def init_map(self) -> dict:
        out = defaultdict(list)
        for x, q in sorted(self.iota):
            out[x].append(q)
        return out

    def delta(self) -> dict:
        """(q1, q2, letter) -> sorted list of states."""
        out = defaultdict(list)
        for p, q, x, r in sorted(self.transitions):
            out[p, q, x].append(r)
        return out


def _bottom_up(a: Nfta, t: SigmaTree):
    """Run counts per node and state: node -> {state: count}."""
    init = a.init_map()
    by_letter = defaultdict(list)
    for p, q, x, r in a.transitions:
        by_letter[x].append((p, q, r))
    runs = {}
    sk = t.skeleton
    for n in sk.postorder():
        x = t.labels[n]
        if sk.is_leaf(n):
            runs[n] = {q: 1 for q in init.get(x, ())}
            continue
        left, right = (runs[k] for k in sk.children[n])
        cur = defaultdict(int)
        for p, q, r in by_letter[x]:
            if p in left and q in right:
                cur[r] += left[p] * right[q]
        runs[n] = dict(cur)
    return runs


def nfta_accepts(a: Nfta, t: SigmaTree) -> bool:
    root = _bottom_up(a, t)[t.skeleton.root]
    return any(q in a.final for q in root)


def nfta_accepting_runs(a: Nfta, t: SigmaTree) -> int:
    root = _bottom_up(a, t)[t.skeleton.root]
    return sum(k for q, k in root.items() if q in a.final)


def nfta_run_counts(a: Nfta, t: SigmaTree) -> dict:
    """Run counts at the root, per state."""
    return _bottom_up(a, t)[t.skeleton.root]


def _buildable(a: Nfta) -> set:
    built = {q for _, q in a.iota}
    by_child = defaultdict(list)
    for tr in a.transitions:
        by_child[tr[0]].append(tr)
        by_child[tr[1]].append(tr)
    stack = list(built)
    while stack:
        s = stack.pop()
        for p, q, _, r in by_child[s]:
            if p in built and q in built and r not in built:
                built.add(r)
                stack.append(r)
    return built


def nfta_trim(a: Nfta) -> Nfta:
    built = _buildable(a)
    by_parent = defaultdict(list)
    for p, q, _, r in a.transitions:
        if p in built and q in built:
            by_parent[r].append((p, q))
    useful = set(a.final & built)
    stack = list(useful)
    while stack:
        r = stack.pop()
        for p, q in by_parent[r]:
            for s in (p, q):
                if s not in useful:
                    useful.add(s)
                    stack.append(s)
    keep = built & useful
    return Nfta([q for q in a.states if q in keep], a.final & keep,
                [(x, q) for x, q in a.iota if q in keep],
                [t for t in a.transitions if {t[0], t[1], t[3]} <= keep])


def nfta_is_deterministic(a: Nfta) -> bool:
    return all(len(v) <= 1 for v in a.init_map().values()) and \
        all(len(v) <= 1 for v in a.delta().values())


def nfta_ambiguity_witness(a: Nfta):
    """Off-diagonal state pair used by two accepting runs on one tree, or None."""
    t = nfta_trim(a)
    init = t.init_map()
    pairs = {(p, q) for x in BINARY for p in init.get(x, ()) for q in init.get(x, ())}
    by_letter = defaultdict(list)
    for p, q, x, r in t.transitions:
        by_letter[x].append((p, q, r))
    # Pair transitions: ((p1,q1), (p2,q2)) -> (r1, r2) on a common letter.
    produced = defaultdict(set)
    changed = True
    while changed:
        changed = False
        for x, trs in by_letter.items():
            for p1, p2, r in trs:
                for q1, q2, s in trs:
                    if (p1, q1) in pairs and (p2, q2) in pairs:
                        produced[r, s].add(((p1, q1), (p2, q2)))
                        if (r, s) not in pairs:
                            pairs.add((r, s))
                            changed = True
    useful = {(p, q) for p, q in pairs if p in t.final and q in t.final}
    stack = list(useful)
    while stack:
        rs = stack.pop()
        for left, right in produced.get(rs, ()):
            for pq in (left, right):
                if pq not in useful:
                    useful.add(pq)
                    stack.append(pq)
    off = sorted(pq for pq in useful if pq[0] != pq[1])
    return off[0] if off else None


def nfta_classify(a: Nfta) -> dict:
    return {"deterministic": nfta_is_deterministic(a),
            "unambiguous": nfta_ambiguity_witness(a) is None}


def all_labelings(sk: TreeSkeleton) -> Iterable[SigmaTree]:
    nodes = sk.nodes
    for i in range(1 << len(nodes)):
        yield SigmaTree(sk, {n: str(i >> (len(nodes) - 1 - j) & 1) for j, n in enumerate(nodes)})
