"""Ordered sum decompositions and the structure of order conserving embeddings.

The hull of a summand ``f`` is the atom interval ``[f(1), f(l)]`` covering the
diagonal of its image.  Two summands must sit in the same ordered summand
when their hulls overlap in more than one endpoint, i.e. when neither
``b <= a'`` nor ``b' <= a``; connected components of that conflict graph are
exactly the order irreducible pieces.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .embedding import Embedding, is_loc, is_oc
from .errors import NotT2Degenerate


@dataclass(frozen=True)
class OrderedDecomposition:
    groups: tuple
    hulls: tuple

    def sizes(self) -> list[int]:
        return [g.multiplicity for g in self.groups]


def _hull(f) -> tuple[int, int]:
    return f[0], f[-1]


def _conflict(h1, h2) -> bool:
    (a, b), (a2, b2) = h1, h2
    return not (b <= a2 or b2 <= a)


def ordered_decomposition(phi: Embedding) -> OrderedDecomposition:
    summands = phi.summands
    parent = list(range(len(summands)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    hulls = [_hull(f) for f in summands]
    for s in range(len(summands)):
        for t in range(s):
            if _conflict(hulls[s], hulls[t]):
                parent[find(s)] = find(t)
    members: dict[int, list[int]] = {}
    for s in range(len(summands)):
        members.setdefault(find(s), []).append(s)
    pieces = []
    for idx in members.values():
        lo = min(hulls[s][0] for s in idx)
        hi = max(hulls[s][1] for s in idx)
        fs = tuple(sorted(summands[s] for s in idx))
        pieces.append(((lo, hi), fs))
    # equal single-atom hulls are ordered by their atom maps
    pieces.sort()
    for (h1, _), (h2, _) in zip(pieces, pieces[1:]):
        assert h1[1] <= h2[0], "ordered summands must be totally ordered"
    groups = tuple(Embedding(phi.domain, phi.codomain, fs) for _, fs in pieces)
    return OrderedDecomposition(groups, tuple(h for h, _ in pieces))


def is_order_irreducible(phi: Embedding) -> bool:
    return len(ordered_decomposition(phi).groups) == 1


def touched_atoms(phi: Embedding) -> list[int]:
    """Codomain atoms met by the image of the unit."""
    return sorted({A for f in phi.summands for A in f})


def is_t2_degenerate(phi: Embedding) -> bool:
    return len(touched_atoms(phi)) <= 2


def multiplicity_signature(phi: Embedding) -> list[int]:
    """Counts ``r_1 .. r_{p+1}``; class ``k`` sends the last ``k-1`` atoms to the upper touched atom."""
    touched = touched_atoms(phi)
    if len(touched) > 2:
        raise NotT2Degenerate(f"{phi} meets codomain atoms {touched}")
    p = phi.domain.num_atoms
    second = touched[1] if len(touched) == 2 else None
    sig = [0] * (p + 1)
    for f in phi.summands:
        sig[sum(1 for A in f if A == second)] += 1
    return sig


def k0_from_signature(sig: list[int]) -> list[list[int]]:
    """Two-row K0 matrix of a degenerate embedding with multiplicity signature ``sig``."""
    p = len(sig) - 1
    top = [sum(sig[:p + 1 - a]) for a in range(1, p + 1)]
    bottom = [sum(sig[p + 1 - a:]) for a in range(1, p + 1)]
    return [top, bottom]


@dataclass(frozen=True)
class RefinementWitness:
    domain_order: tuple
    codomain_order: tuple


def _position_images(phi: Embedding):
    """For each domain position, the codomain positions of its images, one per summand."""
    rows = phi.slot_table()
    return {p: tuple(row[p - 1] for row in rows) for p in phi.domain.positions()}


def _search_domain_order(phi: Embedding):
    """Backtracking over within-atom orders of domain positions.

    The frontier is the highest codomain atom reached so far; a position can
    come next only if all of its images lie at or above the frontier.
    Failed states are memoized on (placed positions, frontier).
    """
    D, C = phi.domain, phi.codomain
    images = _position_images(phi)
    atoms_of = {p: sorted({C.block_of(x) for x in images[p]}) for p in D.positions()}
    dead = set()
    order = []

    def go(placed: frozenset, frontier: int) -> bool:
        if len(placed) == D.total_rank:
            return True
        if (placed, frontier) in dead:
            return False
        atom = next(a for a in D.atoms() if any(p not in placed for p in D.atom_positions(a)))
        for p in D.atom_positions(atom):
            if p in placed or atoms_of[p][0] < frontier:
                continue
            order.append(p)
            if go(placed | {p}, atoms_of[p][-1]):
                return True
            order.pop()
        dead.add((placed, frontier))
        return False

    return tuple(order) if go(frozenset(), 0) else None


def _codomain_order(phi: Embedding, domain_order) -> tuple:
    C = phi.codomain
    rows = phi.slot_table()
    index = {p: k for k, p in enumerate(domain_order)}
    key = {}
    for s, row in enumerate(rows):
        for p, x in enumerate(row, start=1):
            key[x] = (C.block_of(x), index[p], s)
    big = len(domain_order) + 1
    for x in C.positions():
        key.setdefault(x, (C.block_of(x), big, x))
    return tuple(sorted(C.positions(), key=key.__getitem__))


def verify_refinement_witness(phi: Embedding, w: RefinementWitness) -> bool:
    """Check the refinement conditions directly at position level."""
    D, C = phi.domain, phi.codomain
    cod_rank = {x: k for k, x in enumerate(w.codomain_order)}
    # both orders refine the atom orders
    for order, A in ((w.domain_order, D), (w.codomain_order, C)):
        blocks = [A.block_of(p) for p in order]
        if blocks != sorted(blocks) or sorted(order) != list(A.positions()):
            return False
    images = _position_images(phi)
    ps = list(w.domain_order)
    for i, p in enumerate(ps):
        for q in ps[i + 1:]:
            if max(cod_rank[x] for x in images[p]) >= min(cod_rank[x] for x in images[q]):
                return False
    rows = phi.slot_table()
    for i, p in enumerate(ps):
        for q in ps[i:]:
            pairs = sorted((cod_rank[row[p - 1]], cod_rank[row[q - 1]]) for row in rows)
            if any(c1 >= c2 for (_, c1), (_, c2) in zip(pairs, pairs[1:])):
                return False
    return True


def is_refinement_type(phi: Embedding):
    """``(True, witness)`` or ``(False, None)``."""
    if not is_loc(phi):
        return False, None
    dom = _search_domain_order(phi)
    if dom is None:
        return False, None
    w = RefinementWitness(dom, _codomain_order(phi, dom))
    if not verify_refinement_witness(phi, w):
        return False, None
    return True, w


@dataclass(frozen=True)
class SummandVerdict:
    kind: str  # RefinementType | T2Degenerate | Both | Neither
    refinement: RefinementWitness | None = None
    touched: tuple = ()

    @property
    def label(self) -> str:
        """Single label with the degenerate reading taking precedence over ``Both``."""
        return "T2Degenerate" if self.kind == "Both" else self.kind


def classify_summand(phi: Embedding) -> SummandVerdict:
    ref, w = is_refinement_type(phi)
    t2 = is_t2_degenerate(phi)
    kind = {(True, True): "Both", (True, False): "RefinementType",
            (False, True): "T2Degenerate", (False, False): "Neither"}[(ref, t2)]
    return SummandVerdict(kind, w, tuple(touched_atoms(phi)) if t2 else ())


@dataclass(frozen=True)
class StructureReport:
    decomposition: OrderedDecomposition
    verdicts: tuple
    oc: bool
    rule: str  # triangular-oc | no-rank-one-oc | none
    violations: tuple = field(default=())
    admissible_neither: tuple = field(default=())

    @property
    def holds(self) -> bool:
        return not self.violations


def structure_verdict(phi: Embedding) -> StructureReport:
    dec = ordered_decomposition(phi)
    verdicts = tuple(classify_summand(g) for g in dec.groups)
    oc = is_oc(phi)
    ranks = phi.domain.atom_ranks
    if oc and phi.domain.is_triangular and phi.codomain.is_triangular and len(ranks) >= 3:
        rule, allowed = "triangular-oc", {"RefinementType", "Both"}
    elif oc and min(ranks) >= 2:
        rule, allowed = "no-rank-one-oc", {"RefinementType", "T2Degenerate", "Both"}
    else:
        rule, allowed = "none", None
    violations, neither = [], []
    for i, v in enumerate(verdicts):
        if allowed is not None and v.kind not in allowed:
            violations.append(i)
        elif allowed is None and v.kind == "Neither":
            neither.append(i)
    return StructureReport(dec, verdicts, oc, rule, tuple(violations), tuple(neither))
