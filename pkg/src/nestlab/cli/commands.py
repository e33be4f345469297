"""Command implementations.  Each returns ``(result, witnesses, notes)``."""
from __future__ import annotations

from ..conjugacy import inner_conjugate, recover_summands_from_k0
from ..corpus import DESCRIPTIONS, known_example, run_corpus
from ..embedding import (classify_order_properties, compose, g_map, k0_matrix, loc_witness, lop_witness,
                         oc_witness, op_witness, support_image)
from ..errors import MissingArgument, UnknownCommand, UsageError
from ..lift import lift_ghom
from ..pisom import GElement
from ..structure import (is_order_irreducible, k0_from_signature, multiplicity_signature,
                         structure_verdict)
from ..system import (LimitElement, classify_system, inv_compare, scale_membership, system_invariant,
                      verify_intertwining)
from .parser import Workspace

DEFAULTS = {"horizon": 8, "depth": 2, "bound": 2, "mode": None, "telescoping": False}


def _cells(g: GElement) -> list:
    return [[A, B, v] for (A, B), v in sorted(g.items())]


def _need(names, count: int, usage: str):
    if len(names) < count:
        raise MissingArgument(f"usage: {usage}")
    if len(names) > count:
        raise UsageError(f"too many names; usage: {usage}")


def _embedding_or_ghom(ws: Workspace, name: str):
    if name in ws.ghoms:
        return ws.ghom(name)
    return g_map(ws.embedding(name))


def cmd_classify(ws, names, opts):
    _need(names, 1, "classify EMBEDDING")
    phi = ws.embedding(names[0])
    flags = classify_order_properties(phi)
    oc_s, op_s = oc_witness(phi), op_witness(phi)
    witnesses = {
        "loc_cell": loc_witness(phi), "lop_cell": lop_witness(phi),
        "oc_support": oc_s, "oc_image": support_image(phi, oc_s) if oc_s else None,
        "op_support": op_s, "op_image": support_image(phi, op_s) if op_s else None,
    }
    return flags.as_dict(), witnesses, []


def _signature_round_trip(group, sig, touched) -> bool:
    """The two-row K0 rebuilt from the signature equals the touched rows of the K0 matrix."""
    rows = k0_matrix(group).to_list()
    picked = [rows[t - 1] for t in touched]
    while len(picked) < 2:
        picked.append([0] * group.domain.num_atoms)
    return k0_from_signature(sig) == picked


def cmd_decompose(ws, names, opts):
    _need(names, 1, "decompose EMBEDDING")
    phi = ws.embedding(names[0])
    rep = structure_verdict(phi)
    pieces, witnesses = [], []
    for group, hull, v in zip(rep.decomposition.groups, rep.decomposition.hulls, rep.verdicts):
        t2 = v.kind in ("T2Degenerate", "Both")
        sig = multiplicity_signature(group) if t2 else None
        pieces.append({
            "summands": sorted(group.summands), "hull": hull, "kind": v.kind, "label": v.label,
            "refinement_type": v.kind in ("RefinementType", "Both"), "t2_degenerate": t2,
            "signature": sig,
            "signature_round_trip": _signature_round_trip(group, sig, v.touched) if t2 else None,
        })
        witnesses.append({
            "touched_atoms": v.touched,
            "domain_order": v.refinement.domain_order if v.refinement else None,
            "codomain_order": v.refinement.codomain_order if v.refinement else None,
        })
    result = {
        "groups": rep.decomposition.sizes(), "types": [v.label for v in rep.verdicts],
        "order_irreducible": is_order_irreducible(phi), "oc": rep.oc, "rule": rep.rule,
        "holds": rep.holds, "pieces": pieces,
    }
    notes = []
    if rep.admissible_neither:
        notes.append(f"pieces {list(rep.admissible_neither)} are of neither basic type; no structure rule applies")
    if rep.violations:
        notes.append(f"pieces {list(rep.violations)} violate rule {rep.rule}")
    return result, {"pieces": witnesses, "violations": rep.violations}, notes


def cmd_k0(ws, names, opts):
    _need(names, 1, "k0 EMBEDDING")
    phi = ws.embedding(names[0])
    K = k0_matrix(phi)
    return {"n_form": K.to_list(), "display": K.display(), "multiplicity": phi.multiplicity,
            "unital": phi.is_unital()}, {}, ["display entries are atom rank times summand count"]


def cmd_gmap(ws, names, opts):
    _need(names, 1, "gmap EMBEDDING")
    gamma = g_map(ws.embedding(names[0]))
    cells = [{"cell": cell, "value": _cells(g)} for cell, g in gamma.X]
    return {"cells": cells, "multiplicity": gamma.mu()}, {}, []


def cmd_conjugate(ws, names, opts):
    _need(names, 2, "conjugate EMBEDDING EMBEDDING")
    phi, psi = ws.embedding(names[0]), ws.embedding(names[1])
    sigma = inner_conjugate(phi, psi)
    k0_equal = k0_matrix(phi) == k0_matrix(psi)
    notes = []
    if k0_equal and sigma is None:
        notes.append("equal K0 without conjugacy; at least one map is not locally order conserving")
    return ({"inner_conjugate": sigma is not None, "k0_equal": k0_equal},
            {"permutation": sigma.perm if sigma else None}, notes)


def cmd_recover(ws, names, opts):
    _need(names, 1, "recover EMBEDDING")
    phi = ws.embedding(names[0])
    got = sorted(s.f for s in recover_summands_from_k0(phi.domain, phi.codomain, k0_matrix(phi)))
    return {"summands": got, "matches_input": got == sorted(phi.summands)}, {}, []


def cmd_lift(ws, names, opts):
    _need(names, 1, "lift GHOM|EMBEDDING")
    mode = (opts.get("mode") or "loc").upper()
    phi = lift_ghom(_embedding_or_ghom(ws, names[0]), mode)
    return {"mode": mode, "summands": sorted(phi.summands),
            "flags": classify_order_properties(phi).as_dict()}, {}, []


def cmd_compose(ws, names, opts):
    _need(names, 2, "compose OUTER INNER")
    psi, phi = ws.embedding(names[0]), ws.embedding(names[1])
    comp = compose(psi, phi)
    return {"summands": sorted(comp.summands), "flags": classify_order_properties(comp).as_dict()}, \
        {"outer_loc_cell": loc_witness(psi), "composite_loc_cell": loc_witness(comp)}, []


def cmd_system_classify(ws, names, opts):
    _need(names, 1, "system-classify SYSTEM")
    S = ws.system(names[0])
    rep = classify_system(S)
    return {**rep.as_dict(), "pi_commutes": system_invariant(S).pi_commutes()}, {}, []


def _parse_cell(text: str) -> tuple:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected a cell like 1,2, got {text!r}") from None
    return a, b


def cmd_scale(ws, names, opts):
    _need(names, 3, "scale SYSTEM STAGE A,B")
    S = ws.system(names[0])
    try:
        stage = int(names[1])
    except ValueError:
        raise UsageError(f"stage must be an integer, got {names[1]!r}") from None
    if not 0 <= stage < len(S):
        raise UsageError(f"stage {stage} outside 0..{len(S) - 1}")
    e = LimitElement(stage, GElement.unit(S.stages[stage], _parse_cell(names[2])))
    horizon = opts.get("horizon", 8)
    result = {w: scale_membership(S, e, w, horizon) for w in ("sigma", "sigma0", "oc", "op")}
    return result, {}, [f"horizon {horizon}"]


def cmd_compare(ws, names, opts):
    _need(names, 2, "compare SYSTEM SYSTEM")
    A, B = ws.system(names[0]), ws.system(names[1])
    depth, bound = opts.get("depth", 2), opts.get("bound", 2)
    mode = (opts.get("mode") or "oc").lower()
    tele = bool(opts.get("telescoping"))
    inter = inv_compare(A, B, depth, bound, mode, telescoping=tele)
    result = {"found": inter is not None, "depth": depth, "bound": bound, "mode": mode,
              "telescoping": tele}
    witnesses = {"crossovers": inter.as_list() if inter else None,
                 "verified": verify_intertwining(A, B, inter) if inter else None}
    notes = [] if inter else ["search exhausted within the bounds; this does not rule out an isomorphism"]
    return result, witnesses, notes


def cmd_examples(ws, names, opts):
    checks = [{"name": n, "passed": ok, "detail": d} for n, ok, d in run_corpus()]
    return {"checks": checks, "passed": all(c["passed"] for c in checks)}, {}, []


COMMANDS = {
    "classify": cmd_classify, "decompose": cmd_decompose, "k0": cmd_k0, "gmap": cmd_gmap,
    "conjugate": cmd_conjugate, "recover": cmd_recover, "lift": cmd_lift, "compose": cmd_compose,
    "system-classify": cmd_system_classify, "scale": cmd_scale, "compare": cmd_compare,
    "examples": cmd_examples,
}


def run(command: str, ws: Workspace, names=(), opts: dict | None = None):
    if command not in COMMANDS:
        raise UnknownCommand(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    opts = {**DEFAULTS, **(opts or {})}
    result, witnesses, notes = COMMANDS[command](ws, list(names), opts)
    return result, witnesses, notes + _example_notes(ws, names)


def _example_notes(ws: Workspace, names) -> list[str]:
    notes = []
    for name in names:
        if name in ws.embeddings:
            match = known_example(ws.embedding(name))
            if match:
                notes.append(f"{name} is built-in example {match}: {DESCRIPTIONS[match]}")
    return notes
