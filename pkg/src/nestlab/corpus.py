"""Named worked examples and the checks that pin down their known outcomes.

Each check returns ``(name, passed, detail)``; ``run_corpus`` runs them all.
The ``examples`` CLI command and the acceptance suite both go through here.
"""
from __future__ import annotations

from .algebra import T
from .conjugacy import recover_summands_from_k0
from .embedding import (Embedding, bimodule_cells, classify_order_properties, compose, k0_matrix,
                        loc_failures_on, loc_witness, oc_witness)
from .structure import (is_order_irreducible, is_refinement_type, k0_from_signature,
                        multiplicity_signature, structure_verdict)
from .system import (classify_system, inv_compare, refinement_system, standard_system,
                     system_invariant, telescope)


def phi1() -> Embedding:
    """Unital ``T(2,2,2) -> T(6,8,10)`` splitting into ordered pieces of sizes 2, 1, 1."""
    return Embedding(T(2, 2, 2), T(6, 8, 10), ((1, 1, 2), (1, 2, 2), (2, 3, 3), (3, 3, 3)))


def phi2() -> Embedding:
    """Two-atom degenerate ``T_4 -> T(4,4)`` that is order irreducible."""
    return Embedding(T(1, 1, 1, 1), T(4, 4), ((1, 2, 2, 2), (1, 1, 1, 2)))


def phi3() -> Embedding:
    """Order conserving, irreducible, and of neither basic type."""
    return Embedding(T(2, 2, 1), T(6, 3, 1), ((1, 1, 2), (1, 2, 3)))


def phi4() -> Embedding:
    """Order preserving but not order conserving."""
    return Embedding(T(2, 2), T(2, 2, 2, 2), ((1, 3), (2, 4)))


def phi5() -> Embedding:
    """Order conserving but not locally order preserving."""
    return Embedding(T(1, 1), T(3, 3), ((1, 1), (1, 2), (2, 2)))


def phi6a() -> Embedding:
    return Embedding(T(1, 1), T(1, 2, 1), ((1, 2), (2, 3)))


def phi6b() -> Embedding:
    """Not locally order conserving, yet its composite with :func:`phi6a` is."""
    return Embedding(T(1, 2, 1), T(1, 1, 4, 1, 1), ((1, 3, 5), (2, 3, 4)))


EMBEDDINGS = {"phi1": phi1, "phi2": phi2, "phi3": phi3, "phi4": phi4, "phi5": phi5,
              "phi6a": phi6a, "phi6b": phi6b}
SYSTEMS = {"standard": standard_system, "refinement": refinement_system}

# what each worked example is known to show
DESCRIPTIONS = {
    "phi1": "unital, order conserving, ordered pieces of sizes 2, 1, 1, all two-atom degenerate",
    "phi2": "order irreducible two-atom degenerate map, multiplicity signature (0,1,0,1,0), not of refinement type",
    "phi3": "order conserving and order irreducible, of neither basic type",
    "phi4": "order preserving but not order conserving",
    "phi5": "order conserving but not locally order preserving",
    "phi6a": "inner map of a locally order conserving composite",
    "phi6b": "not locally order conserving, failing only at cell (1,3)",
}


def known_example(phi) -> str | None:
    """Name of the built-in example equal to ``phi``, if any."""
    for name, make in EMBEDDINGS.items():
        if make() == phi:
            return name
    return None


def _check_phi1():
    phi = phi1()
    dec = structure_verdict(phi)
    sizes = dec.decomposition.sizes()
    labels = [v.label for v in dec.verdicts]
    ok = sizes == [2, 1, 1] and labels == ["T2Degenerate"] * 3 and dec.oc and phi.is_unital()
    return ok, f"sizes={sizes} labels={labels} oc={dec.oc}"


def _check_phi2():
    phi = phi2()
    display = k0_matrix(phi).display()
    sig = multiplicity_signature(phi)
    ref, _ = is_refinement_type(phi)
    ok = (display == [[2, 1, 1, 0], [0, 1, 1, 2]] and sig == [0, 1, 0, 1, 0]
          and k0_from_signature(sig) == display and not ref and is_order_irreducible(phi))
    return ok, f"k0={display} signature={sig} refinement={ref}"


def _check_phi3():
    rep = structure_verdict(phi3())
    kinds = [v.kind for v in rep.verdicts]
    ok = rep.oc and kinds == ["Neither"] and rep.admissible_neither == (0,) and rep.holds
    return ok, f"oc={rep.oc} kinds={kinds} rule={rep.rule}"


def _check_phi4():
    f = classify_order_properties(phi4())
    w = oc_witness(phi4())
    ok = f.op and not f.oc and w == frozenset({(1, 1), (1, 2)})
    return ok, f"op={f.op} oc={f.oc} witness={sorted(w) if w else None}"


def _check_phi5():
    f = classify_order_properties(phi5())
    return f.oc and not f.lop, f"oc={f.oc} lop={f.lop}"


def _check_phi6():
    a, b = phi6a(), phi6b()
    comp = compose(b, a)
    bad = loc_witness(b)
    ok = (classify_order_properties(comp).loc and bad == (1, 3) and bad not in bimodule_cells(a)
          and loc_failures_on(b, bimodule_cells(a)) == [])
    return ok, f"composite summands={sorted(comp.summands)} failing cell={bad}"


def _check_recover():
    phi = phi1()
    got = sorted(s.f for s in recover_summands_from_k0(phi.domain, phi.codomain, k0_matrix(phi)))
    return got == sorted(phi.summands), f"recovered={got}"


def _check_systems():
    A, B = standard_system(), refinement_system()
    member = all(classify_system(S).membership["oc"] for S in (A, B))
    commute = all(system_invariant(S).pi_commutes() for S in (A, B))
    self_a = inv_compare(A, telescope(A, [0, 2, 3])) is not None
    self_b = inv_compare(B, telescope(B, [0, 1, 3])) is not None
    cross = inv_compare(A, B) is None and inv_compare(B, A) is None
    ok = member and commute and self_a and self_b and cross
    return ok, f"oc systems={member} pi commutes={commute} telescopes={self_a and self_b} separated={cross}"


CHECKS = [
    ("phi1 ordered pieces", _check_phi1),
    ("phi2 degenerate signature", _check_phi2),
    ("phi3 neither type", _check_phi3),
    ("phi4 op not oc", _check_phi4),
    ("phi5 oc not lop", _check_phi5),
    ("phi6 composite loc", _check_phi6),
    ("phi1 recovered from k0", _check_recover),
    ("standard and refinement systems", _check_systems),
]


def run_corpus() -> list[tuple[str, bool, str]]:
    return [(name, *check()) for name, check in CHECKS]
