"""Standard partial isometries, block supports and rank distributions.

A *standard* partial isometry is a sum of matrix units, i.e. a partial
permutation matrix, stored as a set of ``(row, col)`` position pairs.  Every
such matrix is regular for any block structure, and every regular partial
isometry is equivalent to one of them, so all order predicates here are stated
on block supports.

Two cells conflict for order conservation when one is *strictly northeast* of
the other: ``(s, t)`` is strictly northeast of ``(i, j)`` iff ``s < i`` and
``t > j``.  A cell set with no such pair has *staircase* form.
"""
from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import accumulate, combinations
from typing import Iterable, Mapping

from .algebra import Cell, NestAlgebra
from .errors import CellOutOfRange, NotInAlgebra, NotPartialPermutation, PositionOutOfRange

CellSet = frozenset  # frozenset[Cell]


def strictly_northeast(a: Cell, b: Cell) -> bool:
    """True iff cell ``a`` lies strictly northeast of cell ``b``."""
    return a[0] < b[0] and a[1] > b[1]


def is_staircase(cells: Iterable[Cell]) -> bool:
    """No cell of the set is strictly northeast of another."""
    by_row: dict[int, list[int]] = {}
    for i, j in cells:
        by_row.setdefault(i, []).append(j)
    running = None
    for i in sorted(by_row):
        cols = by_row[i]
        if running is not None and running > min(cols):
            return False
        hi = max(cols)
        running = hi if running is None else max(running, hi)
    return True


def is_strictly_monotone(cells: Iterable[Cell]) -> bool:
    """Distinct rows, distinct columns, and columns increase with rows."""
    cells = sorted(set(cells))
    rows = [i for i, _ in cells]
    if len(set(rows)) != len(rows):
        return False
    return all(c1 < c2 for (_, c1), (_, c2) in zip(cells, cells[1:]))


def _check_cells(A: NestAlgebra, cells: Iterable[Cell]):
    for c in cells:
        if not A.is_cell(c):
            raise CellOutOfRange(f"{c} is not an upper cell of {A}")


@dataclass(frozen=True)
class StandardPisom:
    ambient: NestAlgebra
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(r), int(c)) for r, c in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        A = self.ambient
        rows = [r for r, _ in pairs]
        cols = [c for _, c in pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise NotPartialPermutation("rows and columns of a standard partial isometry must be distinct")
        for r, c in pairs:
            try:
                br, bc = A.block_of(r), A.block_of(c)
            except PositionOutOfRange as exc:
                raise NotInAlgebra(str(exc)) from None
            if br > bc:
                raise NotInAlgebra(f"pair {(r, c)} lies below the block diagonal of {A}")

    def __repr__(self):
        return f"StandardPisom({self.ambient!r}, {sorted(self.pairs)})"

    @classmethod
    def identity(cls, A: NestAlgebra) -> "StandardPisom":
        return cls(A, frozenset((p, p) for p in A.positions()))

    @classmethod
    def empty(cls, A: NestAlgebra) -> "StandardPisom":
        return cls(A, frozenset())

    @property
    def rank(self) -> int:
        return len(self.pairs)

    @property
    def final(self) -> frozenset:
        """Row positions (the final projection as a diagonal set)."""
        return frozenset(r for r, _ in self.pairs)

    @property
    def initial(self) -> frozenset:
        return frozenset(c for _, c in self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


def block_support(v: StandardPisom) -> CellSet:
    A = v.ambient
    return frozenset((A.block_of(r), A.block_of(c)) for r, c in v.pairs)


def pisom_is_oc(v: StandardPisom) -> bool:
    return is_staircase(block_support(v))


def pisom_is_op(v: StandardPisom) -> bool:
    return is_strictly_monotone(block_support(v))


def product(u: StandardPisom, v: StandardPisom) -> frozenset:
    """Pairs of the matrix product ``u v`` (a partial permutation)."""
    col_to_row = {c: r for r, c in u.pairs}
    return frozenset((col_to_row[r], c) for r, c in v.pairs if r in col_to_row)


@dataclass(frozen=True)
class GElement:
    """Integer matrix on the cells of a nest algebra: an element of ``T_l(Z)``.

    ``entries`` accepts any mapping ``cell -> int``; zero entries are dropped.
    """
    ambient: NestAlgebra
    entries: tuple = ()
    _lookup: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        raw = self.entries
        items = raw.items() if isinstance(raw, Mapping) else raw
        acc: Counter = Counter()
        for cell, value in items:
            cell = (int(cell[0]), int(cell[1]))
            acc[cell] += int(value)
        _check_cells(self.ambient, acc)
        norm = tuple(sorted((c, v) for c, v in acc.items() if v != 0))
        object.__setattr__(self, "entries", norm)
        object.__setattr__(self, "_lookup", dict(norm))

    def __repr__(self):
        body = ", ".join(f"{c}: {v}" for c, v in self.entries)
        return f"GElement({self.ambient!r}, {{{body}}})"

    @classmethod
    def unit(cls, A: NestAlgebra, cell: Cell, value: int = 1) -> "GElement":
        return cls(A, {cell: value})

    @classmethod
    def zero(cls, A: NestAlgebra) -> "GElement":
        return cls(A, {})

    @classmethod
    def diagonal(cls, A: NestAlgebra, vector: Iterable[int]) -> "GElement":
        return cls(A, {(a, a): x for a, x in enumerate(vector, start=1)})

    def __getitem__(self, cell: Cell) -> int:
        return self._lookup.get(cell, 0)

    def items(self):
        return self.entries

    def as_dict(self) -> dict:
        return dict(self.entries)

    @property
    def support(self) -> CellSet:
        return frozenset(self._lookup)

    def __add__(self, other: "GElement") -> "GElement":
        acc = Counter(self._lookup)
        acc.update(other._lookup)
        return GElement(self.ambient, acc)

    def __sub__(self, other: "GElement") -> "GElement":
        acc = Counter(self._lookup)
        acc.subtract(other._lookup)
        return GElement(self.ambient, acc)

    def __mul__(self, k: int) -> "GElement":
        return GElement(self.ambient, {c: k * v for c, v in self.entries})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.entries)

    def is_nonnegative(self) -> bool:
        return all(v > 0 for _, v in self.entries)

    def is_diagonal(self) -> bool:
        return all(i == j for (i, j), _ in self.entries)

    def pi_f(self) -> tuple[int, ...]:
        """Row sums per row atom (final projection class)."""
        out = [0] * self.ambient.num_atoms
        for (i, _), v in self.entries:
            out[i - 1] += v
        return tuple(out)

    def pi_i(self) -> tuple[int, ...]:
        """Column sums per column atom (initial projection class)."""
        out = [0] * self.ambient.num_atoms
        for (_, j), v in self.entries:
            out[j - 1] += v
        return tuple(out)

    def as_matrix(self) -> list[list[int]]:
        l = self.ambient.num_atoms
        return [[self[(i, j)] for j in range(1, l + 1)] for i in range(1, l + 1)]

    def in_scale(self) -> bool:
        """Nonnegative with both margins inside the atom ranks."""
        ranks = self.ambient.atom_ranks
        return (self.is_nonnegative()
                and all(x <= r for x, r in zip(self.pi_f(), ranks))
                and all(x <= r for x, r in zip(self.pi_i(), ranks)))


def rank_distribution(v: StandardPisom) -> GElement:
    """Entry at cell ``(i, j)`` is the rank of the ``(i, j)`` block of ``v``."""
    A = v.ambient
    return GElement(A, Counter((A.block_of(r), A.block_of(c)) for r, c in v.pairs))


def realize(g: GElement) -> StandardPisom:
    """A standard partial isometry with rank distribution ``g``.

    Cells are filled in lexicographic order, each taking the lowest unused row
    positions of its row atom and column positions of its column atom.
    """
    A = g.ambient
    if not g.in_scale():
        raise NotInAlgebra(f"{g} is not the rank distribution of a partial isometry")
    next_row = {a: iter(A.atom_positions(a)) for a in A.atoms()}
    next_col = {a: iter(A.atom_positions(a)) for a in A.atoms()}
    pairs = []
    for (i, j), m in g.entries:
        for _ in range(m):
            pairs.append((next(next_row[i]), next(next_col[j])))
    return StandardPisom(A, frozenset(pairs))


def _staircase_rows(A: NestAlgebra, row: int, lo: int, row_used, col_used, acc, out):
    l = A.num_atoms
    if row > l:
        if acc:
            out.append(tuple(acc))
        return
    # empty choice for this row
    _staircase_rows(A, row + 1, lo, row_used, col_used, acc, out)
    candidates = [c for c in range(max(row, lo), l + 1)]
    cap = A.atom_ranks[row - 1]
    for k in range(1, min(cap, len(candidates)) + 1):
        for chosen in combinations(candidates, k):
            if any(col_used[c] + 1 > A.atom_ranks[c - 1] for c in chosen):
                continue
            for c in chosen:
                col_used[c] += 1
            acc.extend((row, c) for c in chosen)
            _staircase_rows(A, row + 1, chosen[-1], row_used, col_used, acc, out)
            del acc[-k:]
            for c in chosen:
                col_used[c] -= 1


@lru_cache(maxsize=256)
def enumerate_feasible_staircase_supports(A: NestAlgebra) -> tuple:
    """Every nonempty staircase cell set realizable by a partial isometry of ``A``.

    Realizable means at most ``r_a`` cells in block row ``a`` and at most ``r_a``
    cells in block column ``a`` (one unit of rank per cell suffices).  Returned
    as a tuple of frozensets in lexicographic order of their sorted cells.
    """
    out: list[tuple] = []
    col_used = [0] * (A.num_atoms + 1)
    _staircase_rows(A, 1, 1, None, col_used, [], out)
    out.sort()
    return tuple(frozenset(s) for s in out)


@lru_cache(maxsize=256)
def enumerate_strict_supports(A: NestAlgebra) -> tuple:
    """Every nonempty strictly monotone cell set of ``A`` (always realizable)."""
    return tuple(s for s in enumerate_feasible_staircase_supports(A) if is_strictly_monotone(s))


@dataclass(frozen=True)
class BlockPartialIsometry:
    """Partial permutation between two block-partitioned coordinate spaces.

    Rows are partitioned by ``row_blocks`` sizes and columns by ``col_blocks``;
    the blocks need not form an algebra, so rectangular rank distributions
    (``p x q`` matrices) can be represented.
    """
    row_blocks: tuple
    col_blocks: tuple
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "row_blocks", tuple(self.row_blocks))
        object.__setattr__(self, "col_blocks", tuple(self.col_blocks))
        pairs = frozenset((int(r), int(c)) for r, c in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        rows = [r for r, _ in pairs]
        cols = [c for _, c in pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise NotPartialPermutation("rows and columns must be distinct")
        nr, nc = sum(self.row_blocks), sum(self.col_blocks)
        for r, c in pairs:
            if not (1 <= r <= nr and 1 <= c <= nc):
                raise PositionOutOfRange(f"pair {(r, c)} outside {nr}x{nc}")

    @classmethod
    def from_standard(cls, v: StandardPisom) -> "BlockPartialIsometry":
        ranks = v.ambient.atom_ranks
        return cls(ranks, ranks, v.pairs)

    @staticmethod
    def _block(sizes, p):
        return bisect_left(list(accumulate(sizes)), p) + 1

    def row_block(self, r: int) -> int:
        return self._block(self.row_blocks, r)

    def col_block(self, c: int) -> int:
        return self._block(self.col_blocks, c)

    @property
    def final(self) -> frozenset:
        return frozenset(r for r, _ in self.pairs)

    @property
    def initial(self) -> frozenset:
        return frozenset(c for _, c in self.pairs)

    def rank_distribution(self) -> list[list[int]]:
        out = [[0] * len(self.col_blocks) for _ in self.row_blocks]
        for r, c in self.pairs:
            out[self.row_block(r) - 1][self.col_block(c) - 1] += 1
        return out

    def __matmul__(self, other: "BlockPartialIsometry") -> "BlockPartialIsometry":
        col_to_row = {c: r for r, c in self.pairs}
        pairs = frozenset((col_to_row[r], c) for r, c in other.pairs if r in col_to_row)
        return BlockPartialIsometry(self.row_blocks, other.col_blocks, pairs)
