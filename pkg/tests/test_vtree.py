import pytest
from hypothesis import given, strategies as st

from circus.core import VarUniverse
from circus.errors import InvalidVTree, LeafSetMismatch, NotFullBinary
from circus.vtree import TreeSkeleton, VTree, all_skeletons, leaf_push, right_linear, validate_vtree

from conftest import load


def leaf_sequence(v):
    return [v.leaves[n] for n in v.preorder() if v.is_leaf(n)]


def test_right_linear_single():
    v = right_linear(["X"])
    assert v.is_leaf(v.root) and v.variables == ["X"]


def test_right_linear_two():
    v = right_linear(["X", "Y"])
    a, b = v.children(v.root)
    assert v.leaves[a] == "X" and v.leaves[b] == "Y"


def test_right_linear_four():
    v = right_linear(list("XYZW"))
    assert leaf_sequence(v) == list("XYZW")
    assert max(v.depth.values()) == 3
    node = v.root
    for x in "XYZ":
        left, node = v.children(node)
        assert v.leaves[left] == x


def test_right_linear_errors():
    with pytest.raises(InvalidVTree):
        right_linear([])
    with pytest.raises(InvalidVTree):
        right_linear(["X", "X"])


@given(st.lists(st.text("abcdefgh", min_size=1, max_size=3), min_size=1, max_size=12, unique=True))
def test_right_linear_leaf_order(order):
    v = right_linear(order)
    assert leaf_sequence(v) == order and len(v.leaves) == len(order)


def test_leaf_push_single():
    v = leaf_push(TreeSkeleton({"r": None}, "r"))
    assert v.is_leaf(v.root) and v.variables == ["r"]


def test_leaf_push_three():
    v = leaf_push(load("t3.tree"))
    first, second = v.children(v.root)
    assert v.leaves[first] == "r"
    assert [v.leaves[k] for k in v.children(second)] == ["a", "b"]
    assert len(v.leaves) == 3


def test_leaf_push_complete_seven():
    sk = TreeSkeleton({"r": ("a", "b"), "a": ("c", "d"), "b": ("e", "f"),
                       "c": None, "d": None, "e": None, "f": None}, "r")
    v = leaf_push(sk)
    assert len(v.leaves) == 7 and len(v.internal) == 6


def test_leaf_push_all_small_skeletons():
    for sk in all_skeletons(9):
        v = leaf_push(sk)
        assert len(v.leaves) == len(sk)
        validate_vtree(v, VarUniverse(list(sk.nodes)))


def test_skeleton_counts():
    # Catalan numbers for full binary trees with 1, 3, 5, 7 nodes.
    sizes = [len(sk) for sk in all_skeletons(7)]
    assert [sizes.count(k) for k in (1, 3, 5, 7)] == [1, 1, 2, 5]


def test_validate_alarm():
    validate_vtree(load("alarm.vtree"), VarUniverse(["fg", "dtr", "nf", "na"]))


def test_validate_missing_variable():
    with pytest.raises(LeafSetMismatch):
        validate_vtree(right_linear(list("XYZ")), VarUniverse(list("XYZW")))


def test_one_child_not_full_binary():
    with pytest.raises(NotFullBinary):
        VTree({"a": "X"}, {"r": ("a",)}, "r")


def test_lca_and_restrict():
    v = right_linear(list("XYZW"))
    assert v.lca(["Z", "W"]) == "s2"
    assert v.lca(["X", "W"]) == v.root
    r = v.restrict(["X", "Z"])
    assert sorted(r.variables) == ["X", "Z"] and len(r.internal) == 1
