import random

import pytest
from hypothesis import given, strategies as st

from nestlab.algebra import T, all_algebras, triangular
from nestlab.corpus import phi1, phi2, phi3, phi5
from nestlab.embedding import Embedding, compose, is_loc, is_oc, k0_matrix
from nestlab.enumeration import embeddings, random_algebra, random_embedding
from nestlab.errors import NotT2Degenerate
from nestlab.structure import (classify_summand, is_order_irreducible, is_refinement_type, is_t2_degenerate,
                               k0_from_signature, multiplicity_signature, ordered_decomposition,
                               structure_verdict, verify_refinement_witness)


def test_phi1_decomposition():
    dec = ordered_decomposition(phi1())
    assert dec.sizes() == [2, 1, 1]
    assert dec.hulls == ((1, 2), (2, 3), (3, 3))
    assert [classify_summand(g).label for g in dec.groups] == ["T2Degenerate"] * 3


def test_phi2_signature_and_irreducibility():
    phi = phi2()
    assert is_order_irreducible(phi)
    sig = multiplicity_signature(phi)
    assert sig == [0, 1, 0, 1, 0]
    assert k0_from_signature(sig) == k0_matrix(phi).display()
    assert is_refinement_type(phi) == (False, None)
    assert classify_summand(phi).kind == "T2Degenerate"


def test_phi3_is_neither():
    phi = phi3()
    assert is_oc(phi) and is_order_irreducible(phi)
    assert classify_summand(phi).kind == "Neither"
    assert structure_verdict(phi).rule == "none"


def test_signature_needs_two_atoms():
    with pytest.raises(NotT2Degenerate):
        multiplicity_signature(Embedding(T(1, 1), T(1, 2, 1), ((1, 2), (2, 3))))


def test_refinement_examples():
    # splitting every atom into two neighbours
    phi = Embedding(T(1, 1), T(1, 1, 1, 1), ((1, 3), (2, 4)))
    ok, w = is_refinement_type(phi)
    assert ok and verify_refinement_witness(phi, w)
    assert classify_summand(phi).kind == "RefinementType"
    both = Embedding(T(1), T(1, 1), ((1,), (2,)))
    assert classify_summand(both).kind == "Both" and classify_summand(both).label == "T2Degenerate"


def test_decomposition_orders_hulls():
    phi = Embedding(T(1, 1), T(1, 1, 1, 1), ((1, 2), (3, 4)))
    dec = ordered_decomposition(phi)
    assert dec.hulls == ((1, 2), (3, 4))
    assert not is_order_irreducible(phi)


def test_phi5_verdict_holds():
    assert structure_verdict(phi5()).holds


def test_prop_triangular_sweep():
    """Triangular domain T_3: OC exactly when every ordered piece is of refinement type."""
    n = 0
    for m in range(1, 7):
        for phi in embeddings(triangular(3), triangular(m), 2):
            rep = structure_verdict(phi)
            all_ref = all(v.kind in ("RefinementType", "Both") for v in rep.verdicts)
            assert is_oc(phi) == all_ref, phi
            assert rep.holds
            n += 1
    assert n == 45


def test_t5_oc_maps_are_refinement():
    for phi in embeddings(triangular(3), triangular(5), 2):
        if is_oc(phi):
            assert all(v.kind in ("RefinementType", "Both") for v in structure_verdict(phi).verdicts)


def test_no_rank_one_sweep_small():
    for D in (T(2, 2), T(2, 3), T(3, 2)):
        for C in all_algebras(8):
            for phi in embeddings(D, C, 8):
                if is_oc(phi):
                    rep = structure_verdict(phi)
                    assert rep.rule == "no-rank-one-oc" and rep.holds, phi


@given(st.integers(0, 10 ** 6))
def test_decomposition_is_idempotent(seed):
    rng = random.Random(seed)
    phi = random_embedding(rng, random_algebra(rng, 3, 2), max_mu=3)
    dec = ordered_decomposition(phi)
    assert sum(dec.sizes()) == phi.multiplicity
    assert sorted(f for g in dec.groups for f in g.summands) == sorted(phi.summands)
    for g in dec.groups:
        assert is_order_irreducible(g)
        assert ordered_decomposition(g).groups == (g,)
    for (a, b), (c, d) in zip(dec.hulls, dec.hulls[1:]):
        assert b <= c


@given(st.integers(0, 10 ** 6))
def test_refinement_closed_under_composition(seed):
    rng = random.Random(seed)
    for _ in range(40):
        phi = random_embedding(rng, random_algebra(rng, 2, 2), max_mu=2)
        psi = random_embedding(rng, phi.codomain, max_mu=2)
        if is_refinement_type(phi)[0] and is_refinement_type(psi)[0]:
            assert is_refinement_type(compose(psi, phi))[0]


@given(st.integers(0, 10 ** 6))
def test_refinement_type_is_loc_and_witness_checks(seed):
    rng = random.Random(seed)
    phi = random_embedding(rng, random_algebra(rng, 3, 2), max_mu=3)
    ok, w = is_refinement_type(phi)
    if ok:
        assert is_loc(phi) and verify_refinement_witness(phi, w)
    if is_t2_degenerate(phi):
        sig = multiplicity_signature(phi)
        assert sum(sig) == phi.multiplicity
