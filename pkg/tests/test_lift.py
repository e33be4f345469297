import random
from itertools import permutations, product as product_

import pytest
from hypothesis import given, strategies as st

from nestlab.algebra import NestAlgebra, T, all_algebras, triangular
from nestlab.corpus import phi1, phi2, phi4
from nestlab.embedding import Embedding, GHom, g_map, is_loc, is_op
from nestlab.enumeration import embeddings, random_algebra, random_embedding, random_lemma_data
from nestlab.errors import (CornerMissing, DegenerateInput, MarginMismatch, NoCommonCorner,
                            NotStaircase, NotStrictlyMonotone, NotTriangularDomain)
from nestlab.lift import lemma_lift, lift_ghom, lift_op_chain
from nestlab.pisom import BlockPartialIsometry, StandardPisom, is_staircase, product, rank_distribution


def test_lift_examples():
    assert lift_ghom(g_map(phi1())) == phi1()
    assert lift_ghom(g_map(phi2())) == phi2()
    op = lift_ghom(g_map(phi4()), mode="op")
    assert g_map(op) == g_map(phi4())


def test_lift_rejects_bad_data():
    crossed = g_map(Embedding(T(1, 1), T(1, 1, 1, 1), ((1, 4), (2, 3))))
    with pytest.raises(NotStaircase):
        lift_ghom(crossed)
    with pytest.raises(ValueError):
        lift_ghom(g_map(phi1()), mode="nope")


def test_lift_op_mode_needs_strict_support():
    # phi1 pushes the rank one unit at (1,2) onto a staircase but not strict cell set
    with pytest.raises(NotStrictlyMonotone):
        lift_ghom(g_map(phi1()), mode="op")


def test_lift_round_trip_exhaustive():
    n = 0
    for D in all_algebras(6, max_atoms=3):
        for C in all_algebras(6, max_atoms=3):
            for phi in embeddings(D, C, 3):
                if is_loc(phi):
                    gamma = g_map(phi)
                    assert lift_ghom(gamma) == phi
                    n += 1
    assert n == 1576


@given(st.integers(0, 10 ** 6))
def test_lift_round_trip_random(seed):
    rng = random.Random(seed)
    phi = random_embedding(rng, random_algebra(rng, 4, 3), max_mu=4, codomain_atoms=5)
    if is_loc(phi):
        assert g_map(lift_ghom(g_map(phi))) == g_map(phi)


def test_lift_op_chain():
    n = 0
    for k in range(1, 4):
        for m in range(1, 6):
            for phi in embeddings(triangular(k), triangular(m), 2):
                if is_op(phi):
                    assert lift_op_chain(g_map(phi)) == phi
                    n += 1
    assert n > 20
    with pytest.raises(NotTriangularDomain):
        lift_op_chain(g_map(phi1()))


# the product lemma

def test_lemma_single_v():
    A = T(2, 1)
    v = StandardPisom(A, {(1, 1), (2, 3)})
    u = StandardPisom(A, {(1, 2), (2, 1)})
    X = rank_distribution(u).as_matrix()
    Z = rank_distribution(StandardPisom(A, product(u, v))).as_matrix()
    got = lemma_lift(X, [rank_distribution(v).as_matrix()], [Z], [v], ambient=A)
    assert rank_distribution(got).as_matrix() == X
    assert rank_distribution(StandardPisom(A, product(got, v))).as_matrix() == Z


def test_lemma_without_products():
    u = lemma_lift([[1, 1], [0, 2]])
    assert u.rank_distribution() == [[1, 1], [0, 2]]
    with pytest.raises(DegenerateInput):
        lemma_lift([[0]])
    with pytest.raises(NotStaircase):
        lemma_lift([[0, 1], [1, 0]])


def test_lemma_margin_checks():
    v = BlockPartialIsometry((2,), (1, 1), {(1, 1), (2, 2)})
    with pytest.raises(MarginMismatch):
        lemma_lift([[1], [1]], [[[1, 1]]], [[[1, 1], [0, 1]]], [v])


def unsolvable():
    v1 = BlockPartialIsometry((2,), (1, 1), {(1, 1), (2, 2)})
    v2 = BlockPartialIsometry((2,), (1, 1), {(2, 1), (1, 2)})
    X, Y, Z = [[1], [1]], [[1, 1]], [[1, 0], [0, 1]]
    return X, [Y, Y], [Z, Z], [v1, v2]


def test_lemma_data_without_solution():
    X, Ys, Zs, vs = unsolvable()
    # every u with the right shape, by brute force
    found = []
    for rows in permutations([1, 2]):
        u = BlockPartialIsometry((1, 1), (2,), {(r, c) for r, c in zip(rows, (1, 2))})
        if u.rank_distribution() == X and all((u @ v).rank_distribution() == Z for v, Z in zip(vs, Zs)):
            found.append(u)
    assert found == []
    with pytest.raises(NoCommonCorner):
        lemma_lift(X, Ys, Zs, vs)


def test_corner_only_gets_stuck_on_solvable_data():
    A = T(2, 1)
    u = StandardPisom(A, {(1, 2), (2, 1)})
    vs = [StandardPisom(A, {(1, 1), (2, 3)}), StandardPisom(A, {(1, 3), (2, 1)})]
    X = rank_distribution(u).as_matrix()
    assert X == [[2, 0], [0, 0]]
    Ys = [rank_distribution(v).as_matrix() for v in vs]
    Zs = [rank_distribution(StandardPisom(A, product(u, v))).as_matrix() for v in vs]
    with pytest.raises(NoCommonCorner):
        lemma_lift(X, Ys, Zs, vs, ambient=A, corner_only=True)
    got = lemma_lift(X, Ys, Zs, vs, ambient=A)
    assert [rank_distribution(StandardPisom(A, product(got, v))).as_matrix() for v in vs] == Zs


@given(st.integers(0, 10 ** 6))
def test_lemma_realizable_instances(seed):
    A, X, Ys, Zs, vs = random_lemma_data(random.Random(seed))
    u = lemma_lift(X, Ys, Zs, vs, ambient=A)
    assert rank_distribution(u).as_matrix() == X
    for v, Z in zip(vs, Zs):
        assert rank_distribution(StandardPisom(A, product(u, v))).as_matrix() == Z


@given(st.integers(0, 10 ** 6))
def test_corner_only_suffices_for_one_product(seed):
    rng = random.Random(seed)
    while True:
        A, X, Ys, Zs, vs = random_lemma_data(rng, max_t=1)
        if vs:
            break
    lemma_lift(X, Ys, Zs, vs, ambient=A, corner_only=True)


def test_zero_ghom_has_no_lift():
    A = T(1)
    with pytest.raises((CornerMissing, MarginMismatch, ValueError)):
        lift_ghom(GHom(A, A, {(1, 1): {}}))


def staircase_tables(rows, cols, m):
    """Nonnegative upper triangular m x m tables with the given margins and staircase support."""
    cells = [(A, B) for A in range(1, m + 1) for B in range(A, m + 1)]

    def rec(i, rows, cols, acc):
        if i == len(cells):
            if not any(rows) and not any(cols) and is_staircase({c for c, v in acc.items() if v}):
                yield dict(acc)
            return
        A, B = cells[i]
        for v in range(min(rows[A - 1], cols[B - 1]) + 1):
            rows[A - 1] -= v
            cols[B - 1] -= v
            acc[(A, B)] = v
            yield from rec(i + 1, rows, cols, acc)
            rows[A - 1] += v
            cols[B - 1] += v
        acc.pop((A, B), None)

    yield from rec(0, list(rows), list(cols), {})


def test_every_staircase_ghom_lifts():
    """Margin-consistent staircase data never leaves the corner peel without a corner."""
    n = 0
    for p in (2, 3):
        D = triangular(p)
        for m in (2, 3):
            C = NestAlgebra((9,) * m)
            for mu in (1, 2, 3):
                margins = [c for c in product_(range(mu + 1), repeat=m) if sum(c) == mu]
                for ys in product_(margins, repeat=p):
                    options = []
                    for a, b in D.cells():
                        if a == b:
                            options.append([{(A, A): ys[a - 1][A - 1] for A in range(1, m + 1)}])
                        else:
                            options.append(list(staircase_tables(ys[a - 1], ys[b - 1], m)))
                    for pick in product_(*options):
                        gamma = GHom(D, C, dict(zip(D.cells(), pick)))
                        assert g_map(lift_ghom(gamma)) == gamma
                        n += 1
    assert n == 364
