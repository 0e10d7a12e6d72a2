import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from circus import automata as A
from circus import generate as G
from circus.vtree import TreeSkeleton, all_skeletons

from conftest import load
from oracles import nfa_runs, nfta_runs

seeds = st.integers(0, 2**32 - 1)


def words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def single(label):
    return A.SigmaTree(TreeSkeleton({"r": None}, "r"), {"r": label})


def trees(max_nodes):
    for sk in all_skeletons(max_nodes):
        yield from A.all_labelings(sk)


def a2_plus_dup():
    a = load("a2.nfa")
    return A.Nfa(a.alphabet, a.states + ("q2",), a.initial, a.final | {"q2"},
                 a.transitions | {("q0", "1", "q2")})


# -- NFA --------------------------------------------------------------------

def test_a1_acceptance():
    a = load("a1.nfa")
    assert not A.nfa_accepts(a, "00") and A.nfa_accepts(a, "01")


def test_empty_word_and_empty_final():
    a = A.Nfa("01", ["q"], ["q"], ["q"], [])
    assert A.nfa_accepts(a, "")
    b = A.Nfa("01", ["q"], ["q"], [], [("q", "0", "q"), ("q", "1", "q")])
    assert not any(A.nfa_accepts(b, w) for w in words("01", 4))


def test_unknown_letter():
    with pytest.raises(A.UnknownLetter):
        A.nfa_accepts(load("a1.nfa"), "02")


def test_trim():
    a = load("a1.nfa")
    assert A.nfa_trim(a) == a
    extra = A.Nfa(a.alphabet, a.states + ("q2",), a.initial, a.final,
                  a.transitions | {("q2", "0", "q1")})
    assert A.nfa_trim(extra).states == ("q0", "q1")
    none = A.Nfa("01", ["q"], ["q"], [], [("q", "0", "q")])
    assert A.nfa_trim(none).states == ()


def test_complete():
    a = load("a1.nfa")
    assert A.nfa_complete(a) == a
    c = A.nfa_complete(load("a2.nfa"))
    assert len(c.states) == 3
    assert {("q1", "0", "sink"), ("q1", "1", "sink")} <= c.transitions
    e = A.nfa_complete(A.Nfa("01", ["q"], ["q"], [], []))
    assert len(e.states) == 2 and len(e.transitions) == 4


def test_classify_fixtures():
    assert A.nfa_classify(load("a1.nfa")) == {"deterministic": True, "unambiguous": True}
    assert A.nfa_classify(load("a2.nfa")) == {"deterministic": False, "unambiguous": True}
    d = a2_plus_dup()
    assert not A.nfa_classify(d)["unambiguous"]
    assert A.nfa_accepting_runs(d, "1") == 2 == nfa_runs(d, "1")
    assert A.nfa_ambiguous_word(d) == ("1",)


def test_binarize_binary_identity():
    a = load("a1.nfa")
    b, code = A.binarize_alphabet(a)
    assert code == {"0": "0", "1": "1"}
    assert b == a


def test_binarize_three_letters():
    a = load("abc.nfa")
    b, code = A.binarize_alphabet(a)
    assert code == {"a": "00", "b": "01", "c": "10"}
    assert A.encode_word("ab", code) == "0001"
    for w in words("abc", 4):
        assert A.nfa_accepts(a, w) == A.nfa_accepts(b, A.encode_word(w, code))
        assert A.nfa_accepting_runs(a, w) == A.nfa_accepting_runs(b, A.encode_word(w, code))


def test_binary_code_single_letter():
    assert A.binary_code(["z"]) == {"z": "0"}


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_random_nfa_runs_and_trim(seed):
    rng = random.Random(seed)
    a = G.random_nfa(rng, rng.randint(1, 4), rng.uniform(0.1, 0.6))
    t = A.nfa_trim(a)
    for w in words("01", 6):
        assert A.nfa_accepting_runs(a, w) == nfa_runs(a, w)
        assert A.nfa_accepts(a, w) == A.nfa_accepts(t, w)
    c = A.nfa_complete(a)
    assert all(c.delta().get((q, x)) for q in c.states for x in c.alphabet)
    assert all(A.nfa_accepts(c, w) == A.nfa_accepts(a, w) for w in words("01", 6))
    if A.nfa_is_deterministic(a):
        assert A.nfa_classify(a)["unambiguous"]
    cls = A.nfa_classify(a)
    assert A.nfa_classify(t) == {"deterministic": A.nfa_is_deterministic(t),
                                 "unambiguous": cls["unambiguous"]}
    # An empty trimmed automaton has no initial state, so it is never deterministic.
    if A.nfa_is_deterministic(a) and t.states:
        assert A.nfa_is_deterministic(t)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_random_binarize(seed):
    rng = random.Random(seed)
    a = G.random_nfa(rng, rng.randint(1, 3), 0.3, alphabet=("a", "b", "c"),
                     deterministic=rng.random() < 0.3)
    b, code = A.binarize_alphabet(a)
    for w in words("abc", 4):
        assert A.nfa_accepts(a, w) == A.nfa_accepts(b, A.encode_word(w, code))
    if A.nfa_is_deterministic(a):
        assert A.nfa_is_deterministic(b)
    assert A.nfa_classify(b)["unambiguous"] == A.nfa_classify(a)["unambiguous"]


# -- NFTA -------------------------------------------------------------------

def test_b1_single_node():
    b = load("b1.nfta")
    assert A.nfta_accepts(b, single("1")) and not A.nfta_accepts(b, single("0"))


def test_b1_three_nodes():
    b = load("b1.nfta")
    sk = load("t3.tree")
    for t in A.all_labelings(sk):
        assert A.nfta_accepts(b, t) == (t.labels["r"] == "1")


def test_empty_iota():
    a = A.Nfta(["q"], ["q"], [], [("q", "q", "0", "q")])
    assert not any(A.nfta_accepts(a, t) for t in trees(5))


def test_nfta_trim():
    b = load("b1.nfta")
    assert A.nfta_trim(b) == b
    extra = A.Nfta(b.states + ("q2",), b.final, b.iota, b.transitions | {("q2", "q0", "1", "q1")})
    assert A.nfta_trim(extra).states == ("q0", "q1")
    dead = A.Nfta(b.states, [], b.iota, b.transitions)
    assert A.nfta_trim(dead).states == ()


def test_nfta_classify_fixtures():
    b = load("b1.nfta")
    assert A.nfta_classify(b) == {"deterministic": True, "unambiguous": True}
    amb = A.Nfta(b.states, ["q0", "q1"], b.iota | {("1", "q0")}, b.transitions)
    assert A.nfta_accepting_runs(amb, single("1")) == 2
    assert not A.nfta_classify(amb)["unambiguous"]
    empty = A.Nfta(["q"], [], [("0", "q")], [])
    assert A.nfta_classify(empty)["unambiguous"]


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_random_nfta(seed):
    rng = random.Random(seed)
    a = G.random_nfta(rng, rng.randint(1, 3), rng.uniform(0.05, 0.4))
    t = A.nfta_trim(a)
    for tree in trees(5):
        runs = A.nfta_accepting_runs(a, tree)
        assert runs == nfta_runs(a, tree)
        assert A.nfta_accepts(a, tree) == (runs > 0) == A.nfta_accepts(t, tree)
    if A.nfta_is_deterministic(a):
        assert A.nfta_classify(a)["unambiguous"]
