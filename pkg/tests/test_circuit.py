import random

import pytest
from hypothesis import given, settings, strategies as st

from circus import circuit as C
from circus import generate as G
from circus.core import enumerate_assignments
from circus.errors import InvalidCircuit, NotStructured, PreconditionViolated, UnknownVariable
from circus.vtree import right_linear

from conftest import load
from oracles import all_assignments, circuit_count, circuit_value

seeds = st.integers(0, 2**32 - 1)


def dnnfs(det=None, max_vars=8):
    def build(args):
        seed, n, d = args
        rng = random.Random(seed)
        return G.random_dnnf(rng, n, deterministic=d if det is None else det)
    return st.tuples(seeds, st.integers(1, max_vars), st.booleans()).map(build)


# -- construction -----------------------------------------------------------

def test_invalid_circuits():
    with pytest.raises(InvalidCircuit):
        C.Circuit(["X"], {"g": C.lit("X")}, "missing")
    with pytest.raises(InvalidCircuit):
        C.Circuit(["X"], {"a": C.and_("b"), "b": C.or_("a")}, "a")
    with pytest.raises(UnknownVariable):
        C.Circuit(["X"], {"g": C.lit("Y")}, "g")
    with pytest.raises(InvalidCircuit):
        C.Circuit(["X"], {"g": C.and_("nope")}, "g")


def test_sizes_report_wires_and_gates():
    c = load("alarm.nnf")
    s = c.sizes()
    # Negation gates carry one wire from their variable.
    assert s["gates"] == 9 and s["wires"] == 11


# -- evaluation -------------------------------------------------------------

def test_alarm_evaluation():
    c = load("alarm.nnf")
    assert C.evaluate_circuit(c, {"fg": 1, "dtr": 1, "nf": 0, "na": 0}) == 1
    assert C.evaluate_circuit(c, {"fg": 0, "dtr": 1, "nf": 0, "na": 0}) == 0
    assert C.truth_table(c).count() == 5


def test_constant_true():
    c = C.Circuit(["X", "Y"], {"t": C.const(True)}, "t")
    assert all(C.evaluate_circuit(c, a) for a in enumerate_assignments(c.universe))


def test_negxy_circuit():
    c = load("negxy.nnf")
    assert C.evaluate_circuit(c, {"x": 0, "y": 0}) == 1
    assert C.evaluate_circuit(c, {"x": 1, "y": 0}) == 0
    assert C.truth_table(c).count() == 1


@settings(max_examples=100, deadline=None)
@given(dnnfs())
def test_evaluation_matches_recursive_oracle(c):
    table = C.truth_table(c)
    for i, a in enumerate(all_assignments(c.universe.vars)):
        assert C.evaluate_circuit(c, a) == circuit_value(c, a) == table.bits[i]


# -- vars and syntactic classes ---------------------------------------------

def test_gate_vars():
    c = load("alarm.nnf")
    vs = C.gate_vars(c)
    assert vs["top"] == {"fg", "dtr", "nf", "na"}
    assert vs["fg"] == {"fg"}
    assert C.gate_vars(C.Circuit([], {"t": C.const(True)}, "t"))["t"] == frozenset()


def test_alarm_syntactic():
    r = C.classify_syntactic(load("alarm.nnf"))
    assert r.decomposable and not r.decision
    assert C.classify_syntactic(load("alarm.nnf")).witnesses["decision"] == "o1"


def test_negxy_syntactic():
    r = C.classify_syntactic(load("negxy.nnf"))
    assert r.decomposable and r.decision


def test_shared_input_not_formula():
    c = C.Circuit(["X"], {"x": C.lit("X"), "o": C.or_("x", "x")}, "o")
    r = C.classify_syntactic(c)
    assert not r.formula and not r.read_once


def test_read_once_formula():
    c = C.Circuit(["X", "Y"], {"x": C.lit("X"), "y": C.lit("Y", False), "a": C.and_("x", "y")}, "a")
    r = C.classify_syntactic(c)
    assert r.formula and r.read_once and r.decomposable and r.smooth


def test_non_decomposable_and():
    c = C.Circuit(["X"], {"x": C.lit("X"), "n": C.lit("X", False), "a": C.and_("x", "n")}, "a")
    assert not C.classify_syntactic(c).decomposable
    with pytest.raises(PreconditionViolated):
        C.check_structured(c, right_linear(["X"]))


# -- structure --------------------------------------------------------------

def test_alarm_structured():
    rho = C.check_structured(load("alarm.nnf"), load("alarm.vtree"))
    assert rho == {"a1": "v3", "a2": "v2", "top": "v1"}


def test_sdd4_structured():
    assert C.is_structured(load("sdd4.nnf"), load("sdd4.vtree"))


def test_negxy_structured_both_linear_orders():
    c = load("negxy.nnf")
    assert C.is_structured(c, right_linear(["x", "y"]))
    # Two leaves admit every split, so the other order works as well.
    assert C.is_structured(c, right_linear(["y", "x"]))


def test_not_structured_witness():
    c = C.Circuit("XYZ", {"x": C.lit("X"), "y": C.lit("Y"), "z": C.lit("Z"),
                          "a": C.and_("x", "z"), "b": C.and_("a", "y")}, "b")
    with pytest.raises(NotStructured) as e:
        C.check_structured(c, right_linear(["X", "Y", "Z"]))
    # and(X, Z) sits at the root; its parent cannot split X,Z against Y.
    assert e.value.gate == "b"


def test_constant_and_maps_to_root():
    c = C.Circuit("XY", {"t": C.const(True), "f": C.const(False), "a": C.and_("t", "f")}, "a")
    t = right_linear(["X", "Y"])
    assert C.check_structured(c, t) == {"a": t.root}


# -- determinism ------------------------------------------------------------

def test_alarm_deterministic():
    assert C.check_deterministic(load("alarm.nnf"))


def test_or_with_true_not_deterministic():
    c = C.Circuit(["X"], {"x": C.lit("X"), "t": C.const(True), "o": C.or_("x", "t")}, "o")
    assert not C.check_deterministic(c)
    assert C.determinism_witness(c) == "o"


@settings(max_examples=100, deadline=None)
@given(dnnfs())
def test_decision_implies_deterministic(c):
    if C.classify_syntactic(c).decision:
        assert C.check_deterministic(c)


@settings(max_examples=100, deadline=None)
@given(dnnfs())
def test_determinism_matches_pairwise_oracle(c):
    expected = True
    rows = list(all_assignments(c.universe.vars))
    for g, gate in c.gates.items():
        if gate.kind != "or":
            continue
        ins = list(dict.fromkeys(gate.inputs))
        for i in range(len(ins)):
            for j in range(i + 1, len(ins)):
                if any(circuit_value(c, a, ins[i]) and circuit_value(c, a, ins[j]) for a in rows):
                    expected = False
    assert C.check_deterministic(c) == expected


def test_sdd4_sdd():
    assert C.check_strong_det_and_sdd(load("sdd4.nnf"), load("sdd4.vtree")) == (True, True)
    r = C.classify(load("sdd4.nnf"), load("sdd4.vtree"))
    assert r.strongly_deterministic and r.sdd


def _single_prime(primes):
    gates = {"x": C.lit("X"), "y": C.lit("Y")}
    ins = []
    for k, p in enumerate(primes):
        gates[f"a{k}"] = C.and_(p, "y")
        ins.append(f"a{k}")
    gates["o"] = C.or_(*ins)
    return C.Circuit("XY", gates, "o")


def test_single_prime_not_exhaustive():
    assert C.check_strong_det_and_sdd(_single_prime(["x"]), right_linear(["X", "Y"])) == (True, False)


def test_identical_primes_overlap():
    sd, _ = C.check_strong_det_and_sdd(_single_prime(["x", "x"]), right_linear(["X", "Y"]))
    assert not sd


def test_alarm_not_strongly_deterministic():
    r = C.classify(load("alarm.nnf"), load("alarm.vtree"))
    assert r.deterministic and not r.strongly_deterministic


# -- smoothing --------------------------------------------------------------

def test_smooth_unchanged_when_smooth():
    c = load("sdd4.nnf")
    s = C.smooth_circuit(load("negxy.nnf"))
    assert C.classify_syntactic(s).smooth
    already = C.smooth_circuit(s)
    assert already.gates == s.gates and already.output == s.output


def test_smooth_wraps_missing_variable():
    c = C.Circuit("XY", {"x": C.lit("X"), "y": C.lit("Y"), "t": C.const(True),
                         "a": C.and_("y", "t"), "o": C.or_("x", "a")}, "o")
    s = C.smooth_circuit(c)
    assert C.classify_syntactic(s).smooth
    assert C.truth_table(s) == C.truth_table(c)
    x_branch = [i for i in s.gates[s.output].inputs if C.gate_vars(s)[i] >= {"X"} and "x" != i]
    assert x_branch
    assert C.gate_vars(s)[x_branch[0]] == {"X", "Y"}


@settings(max_examples=100, deadline=None)
@given(dnnfs(max_vars=12))
def test_smoothing_properties(c):
    s = C.smooth_circuit(c)
    r = C.classify_syntactic(s)
    assert r.smooth and r.decomposable
    assert C.truth_table(s) == C.truth_table(c)
    n = len(c.universe)
    assert s.wires - c.wires <= 4 * (c.wires + len(c.gates)) * max(n, 1)


# -- conditioning -----------------------------------------------------------

def test_condition_empty_partial():
    c = load("alarm.nnf")
    assert C.condition(c, {}) is c


def test_condition_negxy_x0():
    c = C.condition(load("negxy.nnf"), {"x": 0})
    assert list(c.universe) == ["y"]
    assert [C.evaluate_circuit(c, {"y": b}) for b in (0, 1)] == [1, 0]
    assert C.classify_syntactic(c).decision


def test_condition_all_variables():
    c = load("alarm.nnf")
    a = {"fg": 1, "dtr": 0, "nf": 0, "na": 0}
    k = C.condition(c, a)
    assert len(k.universe) == 0
    assert C.evaluate_circuit(k, {}) == C.evaluate_circuit(c, a)


def test_condition_unknown_variable():
    with pytest.raises(UnknownVariable):
        C.condition(load("alarm.nnf"), {"zz": 1})


@settings(max_examples=100, deadline=None)
@given(dnnfs(), seeds)
def test_condition_commutes_with_evaluation(c, seed):
    rng = random.Random(seed)
    names = list(c.universe)
    fixed = {x: rng.randint(0, 1) for x in rng.sample(names, rng.randint(0, len(names)))}
    k = C.condition(c, fixed)
    assert set(k.universe) == set(names) - set(fixed)
    for g_vars in C.gate_vars(k).values():
        assert not g_vars & set(fixed)
    for a in all_assignments(list(k.universe)):
        full = dict(a, **fixed)
        assert C.evaluate_circuit(k, a) == C.evaluate_circuit(c, full)
    r, rk = C.classify_syntactic(c), C.classify_syntactic(k)
    for flag in ("decomposable", "decision"):
        if getattr(r, flag):
            assert getattr(rk, flag)
    if C.check_deterministic(c):
        assert C.check_deterministic(k)
    t = right_linear(names)
    # A single-leaf v-tree has no internal node to host an and-gate.
    if C.is_structured(c, t) and len(k.universe) > 1:
        assert C.is_structured(k, t.restrict(k.universe))


# -- counting ---------------------------------------------------------------

def test_count_smoothed_negxy():
    assert C.count_models_smooth_ddnnf(C.smooth_circuit(load("negxy.nnf"))) == 1


def test_count_tautology():
    g = {"x": C.lit("X"), "nx": C.lit("X", False), "y": C.lit("Y"), "ny": C.lit("Y", False),
         "ox": C.or_("x", "nx"), "oy": C.or_("y", "ny"), "a": C.and_("ox", "oy")}
    assert C.count_models_smooth_ddnnf(C.Circuit("XY", g, "a")) == 4


def test_count_smoothed_alarm_golden():
    # Frozen from exhaustive enumeration over 16 assignments.
    assert C.count_models_smooth_ddnnf(C.smooth_circuit(load("alarm.nnf"))) == 5


def test_count_guards():
    with pytest.raises(PreconditionViolated, match="smooth"):
        C.count_models_smooth_ddnnf(load("alarm.nnf"))
    c = C.Circuit(["X"], {"x": C.lit("X"), "nx": C.lit("X", False), "o": C.or_("x", "nx"),
                          "p": C.or_("o", "x")}, "p")
    with pytest.raises(PreconditionViolated, match="deterministic"):
        C.count_models_smooth_ddnnf(c)


@settings(max_examples=100, deadline=None)
@given(dnnfs(det=True, max_vars=12))
def test_count_matches_oracle(c):
    s = C.smooth_circuit(c)
    assert C.count_models_smooth_ddnnf(s) == circuit_count(s) if len(c.universe) <= 8 \
        else C.count_models_smooth_ddnnf(s) == C.truth_table(s).count()
