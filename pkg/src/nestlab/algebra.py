"""Finite dimensional nest algebras as ordered lists of atom ranks.

A nest algebra ``T(r_1, ..., r_l)`` is the block upper triangular subalgebra of
``M_n`` with diagonal blocks of sizes ``r_1, ..., r_l``.  Positions and atoms are
1-based everywhere.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterable, Iterator

from .errors import EmptyComposition, NonPositiveRank, PositionOutOfRange

Cell = tuple[int, int]


@dataclass(frozen=True)
class NestAlgebra:
    atom_ranks: tuple[int, ...]
    # cumulative block ends: atom i occupies positions ends[i-1]+1 .. ends[i]
    _ends: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranks = tuple(self.atom_ranks)
        if not ranks:
            raise EmptyComposition("a nest algebra needs at least one atom")
        for r in ranks:
            if not isinstance(r, int) or isinstance(r, bool) or r < 1:
                raise NonPositiveRank(f"atom rank {r!r} is not a positive integer")
        object.__setattr__(self, "atom_ranks", ranks)
        object.__setattr__(self, "_ends", tuple(accumulate(ranks)))

    def __repr__(self):
        return "T(%s)" % ",".join(map(str, self.atom_ranks))

    @property
    def num_atoms(self) -> int:
        return len(self.atom_ranks)

    @property
    def total_rank(self) -> int:
        return self._ends[-1]

    @property
    def is_triangular(self) -> bool:
        return all(r == 1 for r in self.atom_ranks)

    def rank(self, atom: int) -> int:
        self._check_atom(atom)
        return self.atom_ranks[atom - 1]

    def atoms(self) -> range:
        return range(1, self.num_atoms + 1)

    def positions(self) -> range:
        return range(1, self.total_rank + 1)

    def block_of(self, p: int) -> int:
        if not 1 <= p <= self.total_rank:
            raise PositionOutOfRange(f"position {p} outside 1..{self.total_rank}")
        return bisect_left(self._ends, p) + 1

    def atom_positions(self, atom: int) -> range:
        """Positions lying in the interval of ``atom``."""
        self._check_atom(atom)
        start = self._ends[atom - 2] if atom > 1 else 0
        return range(start + 1, self._ends[atom - 1] + 1)

    def cells(self) -> list[Cell]:
        l = self.num_atoms
        return [(i, j) for i in range(1, l + 1) for j in range(i, l + 1)]

    def is_cell(self, cell: Cell) -> bool:
        i, j = cell
        return 1 <= i <= j <= self.num_atoms

    def _check_atom(self, atom: int):
        if not 1 <= atom <= self.num_atoms:
            raise PositionOutOfRange(f"atom {atom} outside 1..{self.num_atoms}")


def make_nest(atom_ranks: Iterable[int]) -> NestAlgebra:
    return NestAlgebra(tuple(atom_ranks))


def T(*ranks: int) -> NestAlgebra:
    """Shorthand: ``T(2, 2, 2)``."""
    return NestAlgebra(tuple(ranks))


def triangular(n: int) -> NestAlgebra:
    """The full upper triangular algebra ``T_n``."""
    return NestAlgebra((1,) * n)


def compositions(total: int, max_parts: int | None = None) -> Iterator[tuple[int, ...]]:
    """All ordered compositions of ``total`` (at most ``max_parts`` parts)."""
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(1, total + 1):
        rest_parts = None if max_parts is None else max_parts - 1
        for rest in compositions(total - first, rest_parts):
            yield (first,) + rest


def all_algebras(max_total: int, max_atoms: int | None = None, min_rank: int = 1) -> Iterator[NestAlgebra]:
    """Every nest algebra with total rank ``1..max_total``, in a fixed order."""
    for total in range(1, max_total + 1):
        for comp in compositions(total, max_atoms):
            if min(comp) >= min_rank:
                yield NestAlgebra(comp)
