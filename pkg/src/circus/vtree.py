"""V-trees and unlabeled binary tree skeletons.

A v-tree is a rooted full binary tree whose leaves carry distinct variables.
Two constructions are provided: :func:`right_linear` turns a variable order
into a right-spine v-tree, and :func:`leaf_push` turns a tree skeleton into a
v-tree over the skeleton's node ids (used for tree-automaton provenance).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .core import VarUniverse
from .errors import InvalidVTree, LeafSetMismatch, NotFullBinary


def _check_binary_tree(children: Mapping[str, tuple[str, str] | None], root: str, what: str):
    """Check that ``children`` describes a single rooted full binary tree."""
    if root not in children:
        raise InvalidVTree(f"{what} root {root!r} is not a node")
    seen = set()
    stack = [root]
    while stack:
        n = stack.pop()
        if n in seen:
            raise InvalidVTree(f"{what} node {n!r} has several parents")
        seen.add(n)
        kids = children[n]
        if kids is None:
            continue
        if len(kids) != 2:
            raise NotFullBinary(f"{what} node {n!r} does not have exactly two children")
        for k in kids:
            if k not in children:
                raise InvalidVTree(f"{what} node {n!r} has unknown child {k!r}")
            stack.append(k)
    if seen != set(children):
        extra = sorted(set(children) - seen)
        raise InvalidVTree(f"{what} nodes not below the root: {extra}")


@dataclass(frozen=True, eq=False)
class TreeSkeleton:
    """Rooted ordered full binary tree; ``children[n]`` is ``None`` for leaves."""

    children: Mapping[str, tuple[str, str] | None]
    root: str

    def __post_init__(self):
        object.__setattr__(self, "children", dict(self.children))
        _check_binary_tree(self.children, self.root, "tree")

    @cached_property
    def nodes(self) -> tuple[str, ...]:
        """Node ids in pre-order (root first, then first child's subtree)."""
        out = []
        stack = [self.root]
        while stack:
            n = stack.pop()
            out.append(n)
            kids = self.children[n]
            if kids:
                stack.extend(reversed(kids))
        return tuple(out)

    def postorder(self) -> list[str]:
        out = []
        stack = [(self.root, False)]
        while stack:
            n, done = stack.pop()
            kids = self.children[n]
            if done or kids is None:
                out.append(n)
            else:
                stack.append((n, True))
                stack.append((kids[1], False))
                stack.append((kids[0], False))
        return out

    def is_leaf(self, n: str) -> bool:
        return self.children[n] is None

    def __len__(self):
        return len(self.children)


def all_skeletons(max_nodes: int, prefix: str = "n") -> list[TreeSkeleton]:
    """Every full binary tree shape with at most ``max_nodes`` nodes.

    Nodes are named ``prefix0, prefix1, ...`` in pre-order.
    """
    def shapes(size):
        if size == 1:
            return [None]
        out = []
        for left in range(1, size - 1, 2):
            for ls in shapes(left):
                for rs in shapes(size - 1 - left):
                    out.append((ls, rs))
        return out

    result = []
    for size in range(1, max_nodes + 1, 2):
        for shape in shapes(size):
            children = {}
            counter = [0]

            def build(s):
                name = f"{prefix}{counter[0]}"
                counter[0] += 1
                if s is None:
                    children[name] = None
                else:
                    left = build(s[0])
                    right = build(s[1])
                    children[name] = (left, right)
                return name

            root = build(shape)
            result.append(TreeSkeleton(children, root))
    return result


@dataclass(frozen=True, eq=False)
class VTree:
    """V-tree: ``leaves`` maps leaf ids to variables, ``internal`` maps ids to children."""

    leaves: Mapping[str, str]
    internal: Mapping[str, tuple[str, str]]
    root: str
    _parent: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "leaves", dict(self.leaves))
        object.__setattr__(self, "internal", dict(self.internal))
        both = set(self.leaves) & set(self.internal)
        if both:
            raise InvalidVTree(f"ids used as both leaf and node: {sorted(both)}")
        children = {n: None for n in self.leaves}
        children.update(self.internal)
        _check_binary_tree(children, self.root, "v-tree")
        seen = {}
        for leaf, var in self.leaves.items():
            if var in seen:
                raise InvalidVTree(f"variable {var!r} on leaves {seen[var]!r} and {leaf!r}")
            seen[var] = leaf
        parent = {}
        for n, (a, b) in self.internal.items():
            parent[a] = n
            parent[b] = n
        object.__setattr__(self, "_parent", parent)

    @property
    def variables(self) -> list[str]:
        """Leaf variables, left to right."""
        return [self.leaves[n] for n in self.preorder() if n in self.leaves]

    def preorder(self) -> list[str]:
        out = []
        stack = [self.root]
        while stack:
            n = stack.pop()
            out.append(n)
            if n in self.internal:
                stack.extend(reversed(self.internal[n]))
        return out

    def parent(self, n: str) -> str | None:
        return self._parent.get(n)

    def is_leaf(self, n: str) -> bool:
        return n in self.leaves

    def children(self, n: str) -> tuple[str, str]:
        return self.internal[n]

    @cached_property
    def depth(self) -> dict[str, int]:
        d = {self.root: 0}
        for n in self.preorder():
            if n in self.internal:
                for k in self.internal[n]:
                    d[k] = d[n] + 1
        return d

    @cached_property
    def leaf_of(self) -> dict[str, str]:
        """Variable -> leaf id."""
        return {var: leaf for leaf, var in self.leaves.items()}

    @cached_property
    def var_sets(self) -> dict[str, frozenset[str]]:
        """Node id -> variables of its subtree."""
        out = {}
        for n in reversed(self.preorder()):
            if n in self.leaves:
                out[n] = frozenset([self.leaves[n]])
            else:
                a, b = self.internal[n]
                out[n] = out[a] | out[b]
        return out

    def lca(self, variables: Iterable[str]) -> str | None:
        """Lowest node whose subtree holds all ``variables`` (None for no variables)."""
        nodes = [self.leaf_of[v] for v in variables]
        if not nodes:
            return None
        anc = nodes[0]
        for n in nodes[1:]:
            anc = self._lca2(anc, n)
        return anc

    def _lca2(self, a, b):
        depth = self.depth
        while depth[a] > depth[b]:
            a = self._parent[a]
        while depth[b] > depth[a]:
            b = self._parent[b]
        while a != b:
            a = self._parent[a]
            b = self._parent[b]
        return a

    def restrict(self, keep: Iterable[str]) -> "VTree":
        """V-tree over the variables in ``keep``; unary nodes are spliced out."""
        keep = set(keep)

        def walk(n):
            if n in self.leaves:
                return n if self.leaves[n] in keep else None
            a, b = (walk(k) for k in self.internal[n])
            if a is None:
                return b
            if b is None:
                return a
            internal[n] = (a, b)
            return n

        internal = {}
        root = walk(self.root)
        if root is None:
            raise InvalidVTree("restriction leaves no variable")
        reachable = set()
        stack = [root]
        while stack:
            n = stack.pop()
            reachable.add(n)
            if n in internal:
                stack.extend(internal[n])
        leaves = {n: v for n, v in self.leaves.items() if n in reachable}
        return VTree(leaves, internal, root)

    def __len__(self):
        return len(self.leaves) + len(self.internal)


def right_linear(order: list[str]) -> VTree:
    """Right-linear v-tree: first variable on the left, the rest recursively on the right."""
    if not order:
        raise InvalidVTree("empty variable order")
    if len(set(order)) != len(order):
        raise InvalidVTree("duplicate variable in order")
    leaves = {f"l{i}": v for i, v in enumerate(order)}
    internal = {}
    # Spine node s{i} has leaf l{i} on the left.
    right = f"l{len(order) - 1}"
    for i in range(len(order) - 2, -1, -1):
        internal[f"s{i}"] = (f"l{i}", right)
        right = f"s{i}"
    return VTree(leaves, internal, right)


def leaf_push(t: TreeSkeleton) -> VTree:
    """Move every internal node of ``t`` down to a leaf of its own.

    Internal node ``n`` with children ``n1, n2`` becomes ``top_n`` whose first
    child is the leaf for ``n`` and whose second child ``sub_n`` joins the
    pushed subtrees of ``n1`` and ``n2``.
    """
    leaves = {}
    internal = {}

    def push(n):
        leaves[f"leaf_{n}"] = n
        kids = t.children[n]
        if kids is None:
            return f"leaf_{n}"
        a, b = (push(k) for k in kids)
        internal[f"sub_{n}"] = (a, b)
        internal[f"top_{n}"] = (f"leaf_{n}", f"sub_{n}")
        return f"top_{n}"

    root = push(t.root)
    return VTree(leaves, internal, root)


def validate_vtree(v: VTree, u: VarUniverse) -> None:
    """Check that the leaves of ``v`` carry exactly the variables of ``u``."""
    # Full-binary shape and distinct leaf variables are enforced at construction.
    got = set(v.leaves.values())
    want = set(u.vars)
    if got != want:
        missing = sorted(want - got)
        extra = sorted(got - want)
        raise LeafSetMismatch(f"leaf-set mismatch: missing {missing}, extra {extra}")
