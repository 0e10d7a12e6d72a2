"""Variable universes, assignments and the exhaustive truth-table oracle.

Every semantic check in the package bottoms out here: a Boolean function over
at most ``oracle_limit()`` variables is tabulated row by row, and two
representations are equivalent exactly when their tables agree.

Row ``i`` of a table corresponds to the assignment obtained by reading ``i`` as
a binary number whose most significant bit is the first variable of the
universe.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .errors import UniverseMismatch, UniverseTooLarge, UnknownVariable

DEFAULT_ORACLE_LIMIT = 20

_NAME = re.compile(r"^[A-Za-z0-9_]+$")

Assignment = Mapping[str, int]


def oracle_limit() -> int:
    """Current oracle variable limit; ``CIRCUS_MAX_VARS`` overrides the default."""
    value = os.environ.get("CIRCUS_MAX_VARS")
    if value:
        return int(value)
    return DEFAULT_ORACLE_LIMIT


def check_limit(n: int, limit: int | None = None) -> None:
    limit = oracle_limit() if limit is None else limit
    if n > limit:
        raise UniverseTooLarge(
            f"{n} variables exceed the oracle limit of {limit}")


def valid_name(name: str) -> bool:
    return bool(_NAME.match(name))


@dataclass(frozen=True)
class VarUniverse:
    """Ordered, duplicate-free collection of variable names."""

    vars: tuple[str, ...]

    def __init__(self, names: Iterable[str] = ()):
        names = tuple(names)
        seen = set()
        for name in names:
            if not isinstance(name, str) or not valid_name(name):
                raise ValueError(f"invalid variable name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate variable {name!r}")
            seen.add(name)
        object.__setattr__(self, "vars", names)

    def __len__(self):
        return len(self.vars)

    def __iter__(self):
        return iter(self.vars)

    def __contains__(self, name):
        return name in self._index

    @property
    def _index(self) -> dict[str, int]:
        # Cached on first access; the dataclass is frozen.
        try:
            return self.__dict__["_index_cache"]
        except KeyError:
            idx = {v: i for i, v in enumerate(self.vars)}
            object.__setattr__(self, "_index_cache", idx)
            return idx

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name!r}") from None

    def without(self, names: Iterable[str]) -> "VarUniverse":
        drop = set(names)
        return VarUniverse(v for v in self.vars if v not in drop)

    def same_set(self, other: "VarUniverse") -> bool:
        return set(self.vars) == set(other.vars)

    def __repr__(self):
        return f"VarUniverse({list(self.vars)!r})"


def enumerate_assignments(u: VarUniverse, limit: int | None = None) -> Iterator[dict[str, int]]:
    """Yield all ``2**len(u)`` assignments in binary-counter order."""
    check_limit(len(u), limit)
    n = len(u)
    for i in range(1 << n):
        yield {v: (i >> (n - 1 - j)) & 1 for j, v in enumerate(u.vars)}


def assignment_matrix(u: VarUniverse, limit: int | None = None) -> np.ndarray:
    """Boolean matrix of shape ``(2**n, n)``; row ``i`` is the ``i``-th assignment."""
    check_limit(len(u), limit)
    n = len(u)
    rows = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((rows[:, None] >> shifts[None, :]) & 1).astype(bool)


def row_index(u: VarUniverse, a: Assignment) -> int:
    i = 0
    for v in u.vars:
        i = (i << 1) | (1 if a[v] else 0)
    return i


@dataclass(frozen=True, eq=False)
class TruthTable:
    universe: VarUniverse
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != (1 << len(self.universe),):
            raise ValueError("truth table length must be 2**|universe|")
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, a: Assignment) -> bool:
        return bool(self.bits[row_index(self.universe, a)])

    def count(self) -> int:
        return oracle_count(self)

    def reindex(self, u: VarUniverse) -> "TruthTable":
        """Same function, rows laid out for the variable order of ``u``."""
        if not self.universe.same_set(u):
            raise UniverseMismatch(
                f"cannot align {list(self.universe)} with {list(u)}")
        if self.universe.vars == u.vars:
            return self
        n = len(u)
        cols = assignment_matrix(u, limit=n)
        weights = np.array([1 << (n - 1 - self.universe.index(v)) for v in u.vars],
                           dtype=np.int64)
        old_rows = cols.astype(np.int64) @ weights if n else np.zeros(1, np.int64)
        return TruthTable(u, self.bits[old_rows])

    def first_difference(self, other: "TruthTable") -> dict[str, int] | None:
        other = other.reindex(self.universe)
        diff = np.flatnonzero(self.bits != other.bits)
        if not len(diff):
            return None
        n = len(self.universe)
        i = int(diff[0])
        return {v: (i >> (n - 1 - j)) & 1 for j, v in enumerate(self.universe.vars)}

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return oracle_equivalent(self, other)

    def __repr__(self):
        s = "".join("1" if b else "0" for b in self.bits[:64])
        return f"TruthTable({list(self.universe)}, {s}{'...' if len(self) > 64 else ''})"


def oracle_table(fn: Callable[[dict[str, int]], int], u: VarUniverse,
                 limit: int | None = None) -> TruthTable:
    """Tabulate ``fn`` by calling it on every assignment of ``u``."""
    bits = np.fromiter((bool(fn(a)) for a in enumerate_assignments(u, limit)),
                       dtype=bool, count=1 << len(u))
    return TruthTable(u, bits)


def oracle_equivalent(t1: TruthTable, t2: TruthTable) -> bool:
    return bool(np.array_equal(t1.bits, t2.reindex(t1.universe).bits))


def oracle_count(t: TruthTable) -> int:
    return int(np.count_nonzero(t.bits))
