"""Regular star-extendible embeddings between nest algebras.

An embedding is stored as a multiset of weakly monotone atom maps, one per
multiplicity-one summand: summand ``f`` sends every position of domain atom
``a`` into codomain atom ``f(a)``.  A concrete standard form is fixed by a slot
assignment, i.e. for every summand the codomain position receiving each
domain position.  The canonical assignment fills the positions of each
codomain atom in order of (sorted summand index, domain position).

Order properties are decided on block supports.  A standard partial isometry
``v`` with staircase support is sent by summand ``f`` to a partial isometry
supported on ``{(f(i), f(j))}``, and higher per-cell ranks never change which
cells appear, so it suffices to scan every feasible staircase support of the
domain.  ``enumeration.oc_by_pisoms`` brute-forces the same flag over every
standard partial isometry and is used as the cross-check.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .algebra import Cell, NestAlgebra
from .errors import (CapacityExceeded, DomainMismatch, EmptySummandList, InvariantViolation,
                     MarginMismatch, NotInCodomainAlgebra, NotInDomain, NotMonotone,
                     NotNonnegative, PositionOutOfRange, RelationViolation, ScaleViolation,
                     SlotError)
from .pisom import (GElement, StandardPisom, enumerate_feasible_staircase_supports,
                    enumerate_strict_supports, is_staircase, is_strictly_monotone)

AtomMap = tuple  # tuple[int, ...]; entry a-1 is the image of atom a


@dataclass(frozen=True)
class SummandMap:
    """One multiplicity-one summand as a weakly monotone atom map."""
    domain: NestAlgebra
    codomain: NestAlgebra
    f: AtomMap

    def __post_init__(self):
        f = tuple(int(x) for x in self.f)
        object.__setattr__(self, "f", f)
        _check_atom_map(self.domain, self.codomain, f)

    def __call__(self, a: int) -> int:
        return self.f[a - 1]


def _check_atom_map(domain: NestAlgebra, codomain: NestAlgebra, f: AtomMap):
    if len(f) != domain.num_atoms:
        raise InvariantViolation(f"atom map {f} has {len(f)} entries, domain {domain} has {domain.num_atoms} atoms")
    for x in f:
        if not 1 <= x <= codomain.num_atoms:
            raise PositionOutOfRange(f"atom map {f} leaves the atoms of {codomain}")
    if any(x > y for x, y in zip(f, f[1:])):
        raise NotMonotone(f"atom map {f} is not weakly increasing")


def canonical_slots(domain: NestAlgebra, codomain: NestAlgebra, summands) -> tuple:
    nxt = {A: codomain.atom_positions(A).start for A in codomain.atoms()}
    out = []
    for f in summands:
        row = []
        for p in domain.positions():
            A = f[domain.block_of(p) - 1]
            row.append(nxt[A])
            nxt[A] += 1
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class Embedding:
    """A regular embedding ``domain -> codomain``.

    ``summands`` is kept sorted.  ``slots`` is ``None`` for the canonical
    standard form; otherwise ``slots[s][p-1]`` is the codomain position that
    receives domain position ``p`` under summand ``s``.  Equality and hashing
    ignore ``slots``: two embeddings compare equal exactly when they are inner
    conjugate.
    """
    domain: NestAlgebra
    codomain: NestAlgebra
    summands: tuple
    slots: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        summands = [tuple(int(x) for x in (f.f if isinstance(f, SummandMap) else f)) for f in self.summands]
        if not summands:
            raise EmptySummandList("an embedding needs at least one summand")
        for f in summands:
            _check_atom_map(self.domain, self.codomain, f)
        load = Counter()
        for f in summands:
            for a, A in enumerate(f, start=1):
                load[A] += self.domain.rank(a)
        for A, used in sorted(load.items()):
            if used > self.codomain.rank(A):
                raise CapacityExceeded(f"codomain atom {A} needs rank {used} > {self.codomain.rank(A)}")
        if self.slots is None:
            order = sorted(range(len(summands)), key=lambda s: summands[s])
            object.__setattr__(self, "summands", tuple(summands[s] for s in order))
        else:
            slots = [tuple(int(x) for x in row) for row in self.slots]
            if len(slots) != len(summands):
                raise SlotError("need one slot row per summand")
            order = sorted(range(len(summands)), key=lambda s: (summands[s], slots[s]))
            object.__setattr__(self, "summands", tuple(summands[s] for s in order))
            object.__setattr__(self, "slots", tuple(slots[s] for s in order))
            self._check_slots()

    def _check_slots(self):
        seen = set()
        n = self.domain.total_rank
        for f, row in zip(self.summands, self.slots):
            if len(row) != n:
                raise SlotError(f"slot row {row} should have {n} entries")
            for p, x in enumerate(row, start=1):
                try:
                    blk = self.codomain.block_of(x)
                except PositionOutOfRange:
                    raise SlotError(f"slot {x} outside {self.codomain}") from None
                if blk != f[self.domain.block_of(p) - 1]:
                    raise SlotError(f"slot {x} of position {p} is not in atom {f[self.domain.block_of(p) - 1]}")
                if x in seen:
                    raise SlotError(f"slot {x} used twice")
                seen.add(x)

    def __repr__(self):
        body = ", ".join("(" + ",".join(map(str, f)) + ")" for f in self.summands)
        return f"Embedding({self.domain!r} -> {self.codomain!r}, {{{body}}})"

    @property
    def multiplicity(self) -> int:
        return len(self.summands)

    mu = multiplicity

    @property
    def summand_maps(self) -> list[SummandMap]:
        return [SummandMap(self.domain, self.codomain, f) for f in self.summands]

    def slot_table(self) -> tuple:
        if self.slots is not None:
            return self.slots
        return _canonical_slots_cached(self.domain, self.codomain, self.summands)

    def canonical(self) -> "Embedding":
        """The same summands in canonical standard form."""
        if self.slots is None:
            return self
        return Embedding(self.domain, self.codomain, self.summands)

    def is_unital(self) -> bool:
        load = Counter()
        for f in self.summands:
            for a, A in enumerate(f, start=1):
                load[A] += self.domain.rank(a)
        return all(load[A] == self.codomain.rank(A) for A in self.codomain.atoms())

    def unit_image(self, p: int, q: int) -> frozenset:
        """Position pairs of the image of the matrix unit ``e_pq``."""
        return frozenset((row[p - 1], row[q - 1]) for row in self.slot_table())

    def matrix_unit_images(self) -> dict:
        """Images of every matrix unit ``e_pq`` lying in the domain algebra."""
        D = self.domain
        return {(p, q): self.unit_image(p, q)
                for p in D.positions() for q in D.positions()
                if D.block_of(p) <= D.block_of(q)}

    def cell_image(self, cell: Cell) -> frozenset:
        """Codomain cells met by the image of a rank-one element at ``cell``."""
        a, b = cell
        return frozenset((f[a - 1], f[b - 1]) for f in self.summands)


@lru_cache(maxsize=4096)
def _canonical_slots_cached(domain, codomain, summands):
    return canonical_slots(domain, codomain, summands)


def make_embedding(domain: NestAlgebra, codomain: NestAlgebra, summands: Iterable) -> Embedding:
    return Embedding(domain, codomain, tuple(summands))


def identity_embedding(A: NestAlgebra) -> Embedding:
    return Embedding(A, A, (tuple(A.atoms()),))


def apply(phi: Embedding, v: StandardPisom) -> StandardPisom:
    if v.ambient != phi.domain:
        raise NotInDomain(f"{v} does not live in {phi.domain}")
    rows = phi.slot_table()
    pairs = frozenset((row[r - 1], row[c - 1]) for row in rows for r, c in v.pairs)
    return StandardPisom(phi.codomain, pairs)


def compose(psi: Embedding, phi: Embedding) -> Embedding:
    """``psi o phi``: first ``phi``, then ``psi``."""
    if phi.codomain != psi.domain:
        raise DomainMismatch(f"cannot compose {psi} after {phi}")
    summands, slots = [], []
    phi_slots, psi_slots = phi.slot_table(), psi.slot_table()
    for g, grow in zip(psi.summands, psi_slots):
        for f, frow in zip(phi.summands, phi_slots):
            summands.append(tuple(g[x - 1] for x in f))
            slots.append(tuple(grow[x - 1] for x in frow))
    return Embedding(phi.domain, psi.codomain, tuple(summands), tuple(slots))


def bimodule_cells(phi: Embedding) -> frozenset:
    """Codomain cells where the image of the domain has a nonzero entry."""
    return frozenset(c for cell in phi.domain.cells() for c in phi.cell_image(cell))


@dataclass(frozen=True)
class K0Matrix:
    """``entries[A-1][a-1]`` counts summands sending atom ``a`` to atom ``A``."""
    domain: NestAlgebra
    codomain: NestAlgebra
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in row) for row in self.entries))
        if len(self.entries) != self.codomain.num_atoms or any(
                len(row) != self.domain.num_atoms for row in self.entries):
            raise InvariantViolation("K0 matrix shape does not match its algebras")

    def column(self, a: int) -> tuple:
        return tuple(row[a - 1] for row in self.entries)

    def display(self) -> list[list[int]]:
        """Ranks of the images of the atoms, ``r_a * n_{A,a}``."""
        r = self.domain.atom_ranks
        return [[x * r[a] for a, x in enumerate(row)] for row in self.entries]

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def __matmul__(self, other: "K0Matrix") -> "K0Matrix":
        if other.codomain != self.domain:
            raise DomainMismatch("K0 matrices do not chain")
        prod = np.array(self.entries, dtype=np.int64) @ np.array(other.entries, dtype=np.int64)
        return K0Matrix(other.domain, self.codomain, prod.tolist())


def k0_matrix(phi: Embedding) -> K0Matrix:
    rows = [[0] * phi.domain.num_atoms for _ in phi.codomain.atoms()]
    for f in phi.summands:
        for a, A in enumerate(f):
            rows[A - 1][a] += 1
    return K0Matrix(phi.domain, phi.codomain, rows)


@dataclass(frozen=True)
class GHom:
    """Group map ``G(domain) -> G(codomain)`` given on generators.

    ``X`` maps every domain cell ``(a, b)`` to a codomain :class:`GElement`.
    Missing cells are treated as zero (and then fail margin checks unless
    the whole map vanishes there consistently).
    """
    domain: NestAlgebra
    codomain: NestAlgebra
    X: tuple = ()
    _lookup: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        raw = self.X.items() if isinstance(self.X, Mapping) else self.X
        table = {}
        for cell, g in raw:
            cell = (int(cell[0]), int(cell[1]))
            if not self.domain.is_cell(cell):
                raise InvariantViolation(f"{cell} is not a cell of {self.domain}")
            if not isinstance(g, GElement):
                g = GElement(self.codomain, g)
            elif g.ambient != self.codomain:
                raise DomainMismatch(f"value at {cell} lives in {g.ambient}, not {self.codomain}")
            table[cell] = g
        for cell in self.domain.cells():
            table.setdefault(cell, GElement.zero(self.codomain))
        object.__setattr__(self, "X", tuple(sorted(table.items())))
        object.__setattr__(self, "_lookup", table)
        self._validate()

    def _validate(self):
        D, C = self.domain, self.codomain
        for cell, g in self.X:
            if not g.is_nonnegative():
                raise NotNonnegative(f"X{cell} has a negative entry")
        y = {a: self[(a, a)].pi_f() for a in D.atoms()}
        for (a, b), g in self.X:
            if g.pi_f() != y[a]:
                raise MarginMismatch(f"row sums of X{(a, b)} differ from those of X{(a, a)}")
            if g.pi_i() != y[b]:
                raise MarginMismatch(f"column sums of X{(a, b)} differ from the row sums of X{(b, b)}")
        for a in D.atoms():
            if not self[(a, a)].is_diagonal():
                raise MarginMismatch(f"X{(a, a)} is not diagonal")
        total = [sum(D.rank(a) * y[a][A] for a in D.atoms()) for A in range(C.num_atoms)]
        for A, (used, cap) in enumerate(zip(total, C.atom_ranks), start=1):
            if used > cap:
                raise ScaleViolation(f"codomain atom {A} receives rank {used} > {cap}")

    def __getitem__(self, cell: Cell) -> GElement:
        return self._lookup[cell]

    def y(self, a: int) -> tuple:
        """Image of the class of a rank-one projection in atom ``a``."""
        return self[(a, a)].pi_f()

    def mu(self) -> int:
        return sum(self.y(1))

    def k0(self) -> K0Matrix:
        cols = [self.y(a) for a in self.domain.atoms()]
        return K0Matrix(self.domain, self.codomain,
                        [[cols[a][A] for a in range(self.domain.num_atoms)] for A in range(self.codomain.num_atoms)])

    def apply(self, g: GElement) -> GElement:
        if g.ambient != self.domain:
            raise NotInDomain(f"{g} does not live in {self.domain}")
        acc = Counter()
        for cell, k in g.items():
            for c, v in self[cell].items():
                acc[c] += k * v
        return GElement(self.codomain, acc)

    def as_dict(self) -> dict:
        return {cell: g.as_dict() for cell, g in self.X}


def compose_ghom(second: GHom, first: GHom) -> GHom:
    if first.codomain != second.domain:
        raise DomainMismatch("group maps do not chain")
    return GHom(first.domain, second.codomain, {cell: second.apply(g) for cell, g in first.X})


def g_map(phi: Embedding) -> GHom:
    X = {}
    for a, b in phi.domain.cells():
        X[(a, b)] = GElement(phi.codomain, Counter((f[a - 1], f[b - 1]) for f in phi.summands))
    return GHom(phi.domain, phi.codomain, X)


@dataclass(frozen=True)
class OrderFlags:
    regular: bool
    loc: bool
    lop: bool
    oc: bool
    op: bool

    def as_dict(self) -> dict:
        return {"regular": self.regular, "loc": self.loc, "lop": self.lop, "oc": self.oc, "op": self.op}


@lru_cache(maxsize=256)
def _encoded(A: NestAlgebra, strict: bool):
    supports = enumerate_strict_supports(A) if strict else enumerate_feasible_staircase_supports(A)
    rows, cols, offsets = [], [], [0]
    for S in supports:
        for i, j in sorted(S):
            rows.append(i)
            cols.append(j)
        offsets.append(len(rows))
    as32 = lambda xs: np.ascontiguousarray(xs, dtype=np.int32)
    return supports, as32(rows), as32(cols), as32(offsets)


def _fmap(phi: Embedding):
    return np.ascontiguousarray([(0,) + f for f in phi.summands], dtype=np.int32)


def _scan(phi: Embedding, strict: bool):
    supports, rows, cols, offsets = _encoded(phi.domain, strict)
    mode = kernels.STRICT if strict else kernels.STAIRCASE
    k = kernels.scan_images(rows, cols, offsets, _fmap(phi), phi.codomain.num_atoms, mode)
    return None if k < 0 else supports[k]


def support_image(phi: Embedding, support: Iterable[Cell]) -> frozenset:
    return frozenset(c for cell in support for c in phi.cell_image(cell))


def loc_witness(phi: Embedding):
    """First domain cell whose rank-one image is not staircase, else ``None``."""
    for cell in phi.domain.cells():
        if not is_staircase(phi.cell_image(cell)):
            return cell
    return None


def loc_failures_on(psi: Embedding, cells: Iterable[Cell]) -> list:
    """Cells among ``cells`` whose rank-one image under ``psi`` is not staircase.

    With ``cells = bimodule_cells(phi)`` this is empty whenever ``psi o phi``
    is locally order conserving, even if ``psi`` itself is not.
    """
    return sorted(c for c in cells if not is_staircase(psi.cell_image(c)))


def lop_witness(phi: Embedding):
    for cell in phi.domain.cells():
        if not is_strictly_monotone(phi.cell_image(cell)):
            return cell
    return None


def oc_witness(phi: Embedding):
    """First feasible staircase support whose image is not staircase, else ``None``."""
    return _scan(phi, strict=False)


def op_witness(phi: Embedding):
    return _scan(phi, strict=True)


def is_loc(phi: Embedding) -> bool:
    return loc_witness(phi) is None


def is_lop(phi: Embedding) -> bool:
    return lop_witness(phi) is None


def is_oc(phi: Embedding) -> bool:
    return oc_witness(phi) is None


def is_op(phi: Embedding) -> bool:
    return op_witness(phi) is None


def classify_order_properties(phi: Embedding) -> OrderFlags:
    loc, lop, oc, op = is_loc(phi), is_lop(phi), is_oc(phi), is_op(phi)
    # singletons are feasible supports, so these implications are structural
    assert (not op or lop) and (not lop or loc) and (not oc or loc), phi
    return OrderFlags(regular=True, loc=loc, lop=lop, oc=oc, op=op)


def _as_pairs(codomain: NestAlgebra, image) -> frozenset:
    if isinstance(image, StandardPisom):
        if image.ambient != codomain:
            raise NotInCodomainAlgebra(f"image lives in {image.ambient}, not {codomain}")
        return image.pairs
    pairs = set()
    for x in image:
        if isinstance(x, (int, np.integer)):
            pairs.add((int(x), int(x)))
        else:
            pairs.add((int(x[0]), int(x[1])))
    for r, c in pairs:
        if not (1 <= r <= codomain.total_rank and 1 <= c <= codomain.total_rank):
            raise NotInCodomainAlgebra(f"pair {(r, c)} outside {codomain}")
    return frozenset(pairs)


def from_matrix_unit_images(domain: NestAlgebra, codomain: NestAlgebra, images: Mapping) -> Embedding:
    """Rebuild an embedding from the images of the generating matrix units.

    ``images`` maps ``(p, p)`` to the image of ``e_pp`` (a diagonal position set
    or pisom) and ``(p, p+1)`` to the image of ``e_{p,p+1}``; any further units
    supplied are checked against the products the generators force.  Each
    rank-one subprojection of the image of ``e_11`` is followed along the
    chain to one multiplicity-one summand, and the returned embedding carries
    those tracks as explicit slots, so its matrix-unit images equal the input.
    """
    n = domain.total_rank
    table = {}
    for key, image in images.items():
        p, q = int(key[0]), int(key[1])
        if not (1 <= p <= n and 1 <= q <= n and domain.block_of(p) <= domain.block_of(q)):
            raise RelationViolation(f"e_{p},{q} is not a matrix unit of {domain}")
        table[(p, q)] = _as_pairs(codomain, image)
    D = []
    for p in domain.positions():
        if (p, p) not in table:
            raise RelationViolation(f"missing image of e_{p},{p}")
        pairs = table[(p, p)]
        if any(r != c for r, c in pairs):
            raise RelationViolation(f"image of e_{p},{p} is not a diagonal projection")
        if not pairs:
            raise RelationViolation(f"image of e_{p},{p} is zero; the map is not injective")
        D.append(frozenset(r for r, _ in pairs))
    if len({len(d) for d in D}) != 1:
        raise RelationViolation("diagonal matrix units have images of different ranks")
    used = set()
    for d in D:
        if used & d:
            raise RelationViolation("images of distinct diagonal matrix units overlap")
        used |= d
    step = []
    for p in range(1, n):
        if (p, p + 1) not in table:
            raise RelationViolation(f"missing image of e_{p},{p + 1}")
        pairs = table[(p, p + 1)]
        rows = [r for r, _ in pairs]
        cols = [c for _, c in pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise RelationViolation(f"image of e_{p},{p + 1} is not a partial isometry")
        if frozenset(rows) != D[p - 1] or frozenset(cols) != D[p]:
            raise RelationViolation(f"image of e_{p},{p + 1} has the wrong initial or final projection")
        step.append({r: c for r, c in pairs})
    tracks = []
    for x in sorted(D[0]):
        track = [x]
        for p in range(1, n):
            track.append(step[p - 1][track[-1]])
        tracks.append(tuple(track))
    summands = []
    for track in tracks:
        f = []
        for a in domain.atoms():
            blocks = {codomain.block_of(track[p - 1]) for p in domain.atom_positions(a)}
            if len(blocks) != 1:
                raise NotInCodomainAlgebra(f"atom {a} is spread over codomain atoms {sorted(blocks)}")
            f.append(blocks.pop())
        if any(x > y for x, y in zip(f, f[1:])):
            raise NotInCodomainAlgebra(f"a generated matrix unit falls below the diagonal of {codomain}")
        summands.append(tuple(f))
    phi = Embedding(domain, codomain, tuple(summands), tuple(tracks))
    for (p, q), pairs in table.items():
        if phi.unit_image(p, q) != pairs:
            raise RelationViolation(f"image of e_{p},{q} is not the product of the generator images")
    return phi
