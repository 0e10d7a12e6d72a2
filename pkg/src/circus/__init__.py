"""Decision diagrams, NNF circuits, automata and the compilers between them."""

from .core import (VarUniverse, TruthTable, enumerate_assignments, oracle_table,
                   oracle_equivalent, oracle_count)
from .bdd import NBdd
from .circuit import Circuit
from .vtree import VTree, TreeSkeleton, right_linear, leaf_push
from .errors import CircusError, ParseError

__all__ = [
    "VarUniverse", "TruthTable", "enumerate_assignments", "oracle_table",
    "oracle_equivalent", "oracle_count", "NBdd", "Circuit", "VTree",
    "TreeSkeleton", "right_linear", "leaf_push", "CircusError", "ParseError",
]
