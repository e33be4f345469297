"""Lifting group-level data back to embeddings.

``lift_ghom`` peels one summand at a time.  For a nonnegative staircase
matrix the first nonzero row and the first nonzero column meet in a nonzero
entry: every other nonzero entry lies in a later row, and a later row can
only use columns at or beyond the last column of that first row.  The first
nonzero row of ``X(a, b)`` is the first atom of the row margin ``y_a`` and
its first nonzero column is the first atom of ``y_b``.  Setting ``f(a)`` to
the first atom of ``y_a`` and removing one unit at ``(f(a), f(b))`` from every
``X(a, b)`` therefore keeps all margins consistent, keeps every support
staircase, and lowers the multiplicity by one.

``lemma_lift`` builds a concrete partial permutation ``u`` whose products
with given partial permutations ``v_k`` have prescribed rank distributions.
Peeling only at the common corner of ``X`` and all ``Y^k`` is enough for a
single ``v``, but with two or more it can get stuck on data that has a
solution, and some margin-consistent staircase data has none at all; the
peel therefore falls back to a memoized search.
"""
from __future__ import annotations

from collections import Counter

import numpy as np

from .algebra import NestAlgebra
from .embedding import Embedding, GHom, from_matrix_unit_images, g_map, is_loc, is_lop
from .errors import (CornerMissing, DegenerateInput, MarginMismatch, NoCommonCorner,
                     NotOrderPreserving, NotStaircase, NotStrictlyMonotone, NotTriangularDomain)
from .pisom import BlockPartialIsometry, StandardPisom, is_staircase, is_strictly_monotone

LOC = "LOC"
OP = "OP"


def lift_ghom(gamma: GHom, mode: str = LOC) -> Embedding:
    mode = mode.upper()
    if mode not in (LOC, OP):
        raise ValueError(f"unknown lifting mode {mode!r}")
    for cell, g in gamma.X:
        if mode == LOC and not is_staircase(g.support):
            raise NotStaircase(f"X{cell} = {g} is not staircase")
        if mode == OP and not is_strictly_monotone(g.support):
            raise NotStrictlyMonotone(f"X{cell} = {g} is not strictly monotone")
    D = gamma.domain
    mu = gamma.mu()
    if mu == 0:
        raise CornerMissing("the zero map has no lifting to an embedding")
    left = {cell: Counter(g.as_dict()) for cell, g in gamma.X}
    summands = []
    for _ in range(mu):
        f = []
        for a in D.atoms():
            diag = left[(a, a)]
            firsts = [A for (A, _), m in diag.items() if m > 0]
            if not firsts:
                raise CornerMissing(f"row margin of atom {a} ran out early")
            f.append(min(firsts))
        for a, b in D.cells():
            corner = (f[a - 1], f[b - 1])
            if left[(a, b)][corner] <= 0:
                raise CornerMissing(f"X{(a, b)} has no entry at {corner}")
            left[(a, b)][corner] -= 1
        summands.append(tuple(f))
    if any(m for c in left.values() for m in c.values()):
        raise CornerMissing("data remains after peeling the full multiplicity")
    phi = Embedding(D, gamma.codomain, tuple(summands))
    assert g_map(phi) == gamma
    assert is_lop(phi) if mode == OP else is_loc(phi)
    return phi


def _matrix(M) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim != 2:
        raise DegenerateInput("expected a two-dimensional matrix")
    if (A < 0).any():
        raise MarginMismatch("matrices must be nonnegative")
    return A


def _staircase(M: np.ndarray) -> bool:
    return is_staircase((i + 1, j + 1) for i, j in zip(*np.nonzero(M)))


def _blocks(sizes) -> list[range]:
    out, start = [], 1
    for s in sizes:
        out.append(range(start, start + s))
        start += s
    return out


def _peel(X, Ys, Zs, col_pool, targets, col_block_of, corner_only=False):
    """Peel ``X`` one unit at a time, searching over which position to use.

    The unit sits at the first nonzero row ``i0`` and column ``j0`` of ``X``.
    A position ``x`` of column block ``j0`` may carry it when every remaining
    ``Z^k`` is positive at ``(i0, block of v_k(x))``; the corresponding ``Y^k``
    entry is then positive automatically.  Positions whose images sit in the
    corner blocks (first nonzero column of each ``Y^k`` in row ``j0``) are
    tried first, which is the plain corner recursion; the others are the
    fallback it needs once there are two or more ``v_k``.  Failed states are
    memoized.  Returns ``(row block index, position)`` pairs or ``None``.
    """
    t = len(Ys)
    dead = set()

    def go(X, Ys, Zs, pool):
        if not X.any():
            return [] if not any(Y.any() for Y in Ys) and not any(Z.any() for Z in Zs) else None
        key = (X.tobytes(), tuple(Y.tobytes() for Y in Ys), tuple(Z.tobytes() for Z in Zs), pool)
        if key in dead:
            return None
        i0 = int(np.nonzero(X.any(1))[0][0])
        j0 = int(np.nonzero(X.any(0))[0][0])
        corners = tuple(int(np.nonzero(Y[j0])[0][0]) if Y[j0].any() else -1 for Y in Ys)
        options = {}
        for j, x in sorted(pool):
            if j != j0:
                continue
            images = tuple(col_block_of[k](targets[k][x]) - 1 for k in range(t))
            if corner_only and images != corners:
                continue
            if all(Z[i0, b] > 0 for Z, b in zip(Zs, images)):
                options.setdefault(images, x)  # equal images are interchangeable
        for images in sorted(options, key=lambda b: b != corners):
            x = options[images]
            X2, Ys2, Zs2 = X.copy(), [Y.copy() for Y in Ys], [Z.copy() for Z in Zs]
            X2[i0, j0] -= 1
            for Y, Z, b in zip(Ys2, Zs2, images):
                Y[j0, b] -= 1
                Z[i0, b] -= 1
            rest = go(X2, Ys2, Zs2, pool - {(j0, x)})
            if rest is not None:
                return [(i0, x)] + rest
        dead.add(key)
        return None

    pool = frozenset((j, x) for j, xs in enumerate(col_pool) for x in xs)
    return go(X, Ys, Zs, pool)


def lemma_lift(X, Ys=(), Zs=(), vs=(), *, row_blocks=None, col_blocks=None,
               ambient: NestAlgebra | None = None, corner_only: bool = False):
    """Build ``u`` with rank distribution ``X`` and prescribed products ``u v_k``.

    ``X`` is ``p x q``, each ``Ys[k]`` is ``q x r_k`` and each ``Zs[k]`` is
    ``p x r_k``.  ``vs`` are :class:`BlockPartialIsometry` (or
    :class:`StandardPisom`) values with distributions ``Ys`` and a common
    final projection, which becomes the initial projection of ``u``.
    Row blocks of ``u`` default to the row sums of ``X``; with ``ambient``
    both sides use its atoms and a :class:`StandardPisom` is returned.

    Units are peeled from the top-left corner of ``X`` as in
    :func:`_peel`.  The search is exhaustive, so ``NoCommonCorner`` means no
    partial isometry ``u`` with these products exists at all.  With
    ``corner_only=True`` only corner positions are tried, and the error can
    also mean the plain corner recursion got stuck.
    """
    X = _matrix(X)
    Ys = [_matrix(Y) for Y in Ys]
    Zs = [_matrix(Z) for Z in Zs]
    vs = [BlockPartialIsometry.from_standard(v) if isinstance(v, StandardPisom) else v for v in vs]
    if not X.any():
        raise DegenerateInput("X is zero")
    if not (len(Ys) == len(Zs) == len(vs)):
        raise MarginMismatch("need one Y, one Z and one v per product")
    p, q = X.shape
    for k, (Y, Z) in enumerate(zip(Ys, Zs)):
        if Y.shape[0] != q or Z.shape[0] != p or Y.shape[1] != Z.shape[1]:
            raise MarginMismatch(f"shapes of Y{k + 1}, Z{k + 1} do not fit X")
        if not (np.array_equal(X.sum(1), Z.sum(1)) and np.array_equal(X.sum(0), Y.sum(1))
                and np.array_equal(Y.sum(0), Z.sum(0))):
            raise MarginMismatch(f"margins of X, Y{k + 1}, Z{k + 1} disagree")
    for name, M in [("X", X)] + [(f"Y{k + 1}", Y) for k, Y in enumerate(Ys)] + [(f"Z{k + 1}", Z) for k, Z in enumerate(Zs)]:
        if not _staircase(M):
            raise NotStaircase(f"{name} is not staircase")
    if ambient is not None:
        row_blocks = col_blocks = ambient.atom_ranks
        if p != ambient.num_atoms or q != ambient.num_atoms:
            raise MarginMismatch(f"X must be {ambient.num_atoms} x {ambient.num_atoms} for {ambient}")
    if vs:
        col_blocks = vs[0].row_blocks
        finals = {v.final for v in vs}
        if len(finals) != 1:
            raise MarginMismatch("the v_k must share their final projection")
        for k, (v, Y) in enumerate(zip(vs, Ys)):
            if v.row_blocks != col_blocks or np.array(v.rank_distribution()).tolist() != Y.tolist():
                raise MarginMismatch(f"v{k + 1} does not have rank distribution Y{k + 1}")
    row_blocks = tuple(row_blocks) if row_blocks is not None else tuple(int(x) for x in X.sum(1))
    col_blocks = tuple(col_blocks) if col_blocks is not None else tuple(int(x) for x in X.sum(0))
    if len(row_blocks) != p or len(col_blocks) != q:
        raise MarginMismatch("block counts do not match the shape of X")
    if any(int(x) > r for x, r in zip(X.sum(1), row_blocks)) or any(int(x) > r for x, r in zip(X.sum(0), col_blocks)):
        raise MarginMismatch("X exceeds the available block ranks")

    if vs:
        start = sorted(vs[0].final)
        col_pool = [[x for x in start if x in b] for b in _blocks(col_blocks)]
    else:
        col_pool = [list(b)[:int(n)] for b, n in zip(_blocks(col_blocks), X.sum(0))]
    targets = [{r: c for r, c in v.pairs} for v in vs]
    col_block_of = [v.col_block for v in vs]

    X0, Z0 = X, Zs
    pairs = _peel(X, Ys, Zs, col_pool, targets, col_block_of, corner_only)
    if pairs is None:
        raise NoCommonCorner("no partial isometry u realizes these products")
    rows = [list(b) for b in _blocks(row_blocks)]
    pairs = [(rows[i].pop(0), x) for i, x in pairs]
    u = BlockPartialIsometry(row_blocks, col_blocks, frozenset(pairs))
    # self-check by direct multiplication
    assert u.rank_distribution() == X0.tolist()
    for v, Z in zip(vs, Z0):
        assert u.initial == v.final
        prod = u @ v
        assert len(prod.pairs) == len(u.pairs) and prod.rank_distribution() == Z.tolist()
    if ambient is not None:
        return StandardPisom(ambient, u.pairs)
    return u


def lift_op_chain(gamma: GHom) -> Embedding:
    """Order preserving lift over a triangular domain, built from the superdiagonal.

    The images of the diagonal units get disjoint position sets, lowest
    positions first in codomain atom order; each ``X(i, i+1)`` is strictly
    monotone, so it pairs those sets block by block in increasing order.
    All other unit images are products of these, and the resulting table is
    decoded into summands.
    """
    D, C = gamma.domain, gamma.codomain
    if not D.is_triangular:
        raise NotTriangularDomain(f"{D} has an atom of rank greater than one")
    for cell, g in gamma.X:
        if not is_strictly_monotone(g.support):
            raise NotOrderPreserving(f"X{cell} = {g} is not strictly monotone")
    n = D.num_atoms
    nxt = {A: C.atom_positions(A).start for A in C.atoms()}
    diag = {}
    for A in C.atoms():
        for i in D.atoms():
            m = gamma.y(i)[A - 1]
            diag.setdefault(i, {})[A] = list(range(nxt[A], nxt[A] + m))
            nxt[A] += m
    images = {(i, i): [x for A in C.atoms() for x in diag[i][A]] for i in D.atoms()}
    for i in range(1, n):
        pairs = []
        for (A, B), m in gamma[(i, i + 1)].items():
            rows, cols = diag[i][A], diag[i + 1][B]
            if not (len(rows) == len(cols) == m):
                raise NotOrderPreserving(f"X{(i, i + 1)} does not match the diagonal margins")
            pairs.extend(zip(rows, cols))
        images[(i, i + 1)] = pairs
    phi = from_matrix_unit_images(D, C, images)
    if g_map(phi) != gamma:
        raise NotOrderPreserving("products of the superdiagonal lifts do not reproduce the data")
    return phi
