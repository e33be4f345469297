"""Direct systems of nest algebras and their dimension distribution data.

Only finite presentations are handled.  Limit questions (equality of
classes, membership in the order conserving subscales) are answered by
pushing forward through the given stages up to a horizon and return
``"unknown"`` when the presentation does not settle them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import NestAlgebra
from .embedding import (Embedding, GHom, K0Matrix, OrderFlags, classify_order_properties, compose,
                        g_map, identity_embedding, is_lop, is_loc, is_oc, is_op, k0_matrix)
from .errors import ChainMismatch, InvariantViolation, StageOutOfRange
from .lift import lift_ghom
from .pisom import GElement, is_staircase, is_strictly_monotone

YES, NO, UNKNOWN = "yes", "no", "unknown"
EQUAL, UNEQUAL = "equal", "unequal"

_FLAG = {"loc": is_loc, "lop": is_lop, "oc": is_oc, "op": is_op}


@dataclass(frozen=True)
class DirectSystem:
    stages: tuple
    maps: tuple
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.stages:
            raise ChainMismatch("a system needs at least one stage")
        if len(self.maps) != len(self.stages) - 1:
            raise ChainMismatch(f"{len(self.stages)} stages need {len(self.stages) - 1} maps")
        for k, phi in enumerate(self.maps):
            if phi.domain != self.stages[k] or phi.codomain != self.stages[k + 1]:
                raise ChainMismatch(f"map {k} does not run from stage {k} to stage {k + 1}")

    def __len__(self):
        return len(self.stages)

    def _check(self, k: int):
        if not 0 <= k < len(self.stages):
            raise StageOutOfRange(f"stage {k} outside 0..{len(self.stages) - 1}")

    def composite(self, k: int, l: int) -> Embedding:
        """The system map from stage ``k`` to stage ``l >= k``."""
        self._check(k)
        self._check(l)
        if l < k:
            raise StageOutOfRange(f"no system map from stage {k} back to stage {l}")
        key = ("map", k, l)
        if key not in self._cache:
            if k == l:
                self._cache[key] = identity_embedding(self.stages[k])
            else:
                self._cache[key] = compose(self.maps[l - 1], self.composite(k, l - 1)).canonical()
        return self._cache[key]

    def transition(self, k: int) -> GHom:
        key = ("g", k)
        if key not in self._cache:
            self._cache[key] = g_map(self.maps[k])
        return self._cache[key]

    def flags(self, k: int, l: int) -> OrderFlags:
        key = ("flags", k, l)
        if key not in self._cache:
            self._cache[key] = classify_order_properties(self.composite(k, l))
        return self._cache[key]


def telescope(system: DirectSystem, indices) -> DirectSystem:
    """Subsystem on the given increasing stage indices, with composite maps."""
    indices = list(indices)
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ChainMismatch("telescope indices must increase")
    return DirectSystem(tuple(system.stages[i] for i in indices),
                        tuple(system.composite(a, b) for a, b in zip(indices, indices[1:])))


@dataclass(frozen=True)
class SystemReport:
    flags: dict  # (k, l) -> OrderFlags for k < l
    membership: dict  # family name -> bool

    def as_dict(self) -> dict:
        return {"composites": [{"from": k, "to": l, **f.as_dict()} for (k, l), f in sorted(self.flags.items())],
                "membership": dict(self.membership)}


def classify_system(system: DirectSystem) -> SystemReport:
    flags = {(k, l): system.flags(k, l) for k in range(len(system)) for l in range(k + 1, len(system))}
    membership = {name: all(getattr(f, name) for f in flags.values()) for name in ("loc", "oc", "lop", "op")}
    return SystemReport(flags, membership)


def make_system(stages, maps) -> tuple[DirectSystem, SystemReport]:
    system = DirectSystem(tuple(stages), tuple(maps))
    return system, classify_system(system)


@dataclass(frozen=True)
class LimitElement:
    stage: int
    value: GElement


def push(system: DirectSystem, e: LimitElement, to_stage: int) -> LimitElement:
    system._check(e.stage)
    system._check(to_stage)
    if to_stage < e.stage:
        raise StageOutOfRange(f"cannot push from stage {e.stage} back to {to_stage}")
    if e.value.ambient != system.stages[e.stage]:
        raise InvariantViolation(f"element does not live in stage {e.stage}")
    g = e.value
    for k in range(e.stage, to_stage):
        g = system.transition(k).apply(g)
    return LimitElement(to_stage, g)


def transition_matrix(gamma: GHom) -> list[list[int]]:
    """Integer matrix of ``gamma`` on cell coordinates (rows: codomain cells)."""
    dom, cod = gamma.domain.cells(), gamma.codomain.cells()
    return [[gamma[c][C] for c in dom] for C in cod]


def integer_rank(M: list[list[int]]) -> int:
    """Exact rank by fraction-valued Gaussian elimination."""
    rows = [[Fraction(x) for x in row] for row in M]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def is_injective(gamma: GHom) -> bool:
    return integer_rank(transition_matrix(gamma)) == len(gamma.domain.cells())


def limit_equal(system: DirectSystem, e1: LimitElement, e2: LimitElement, horizon: int = 8) -> str:
    """Compare two classes in the limit group.

    ``"equal"`` once the pushforwards agree at some stage within the horizon;
    ``"unequal"`` when they differ at a stage after which every transition of
    the presentation is injective; otherwise ``"unknown"``.
    """
    start = max(e1.stage, e2.stage)
    last = min(len(system) - 1, start + horizon)
    injective_tail = [False] * (len(system))
    injective_tail[-1] = True
    for k in range(len(system) - 2, -1, -1):
        injective_tail[k] = injective_tail[k + 1] and is_injective(system.transition(k))
    for k in range(start, last + 1):
        a, b = push(system, e1, k).value, push(system, e2, k).value
        if a == b:
            return EQUAL
        if injective_tail[k]:
            return UNEQUAL
    return UNKNOWN


def _in_sigma(g: GElement) -> bool:
    return g.in_scale()


def _in_sigma0(g: GElement) -> bool:
    ranks = g.ambient.atom_ranks
    return g.is_nonnegative() and g.is_diagonal() and all(g[(a, a)] <= r for a, r in enumerate(ranks, start=1))


def scale_membership(system: DirectSystem, e: LimitElement, which: str, horizon: int = 8) -> str:
    """Three-valued membership in one of the scales ``sigma``, ``sigma0``, ``oc``, ``op``."""
    which = which.lower().replace("σ", "sigma").replace("_", "")
    aliases = {"sigma": "sigma", "sigma0": "sigma0", "sigmaoc": "oc", "oc": "oc", "sigmaop": "op", "op": "op"}
    if which not in aliases:
        raise ValueError(f"unknown scale {which!r}")
    which = aliases[which]
    g = e.value
    if which == "sigma":
        return YES if _in_sigma(g) else NO
    if which == "sigma0":
        return YES if _in_sigma0(g) else NO
    if not _in_sigma(g):
        return NO
    shape_ok = is_staircase if which == "oc" else is_strictly_monotone
    last = len(system) - 1
    for k in range(e.stage, min(last, e.stage + horizon) + 1):
        pushed = push(system, e, k).value
        if not shape_ok(pushed.support):
            return NO
        if k == last:
            return YES
        # the rest of the presentation conserves the shape on its own
        if all(getattr(system.flags(k, l), which) for l in range(k + 1, last + 1)):
            return YES
    return UNKNOWN


@dataclass(frozen=True)
class SystemInvariant:
    """Stage-wise presentation of ``((G, Sigma), (K0, Sigma0), pi_f, pi_i)``."""
    stages: tuple
    transitions: tuple
    k0: tuple

    def pi_commutes(self) -> bool:
        """Every transition commutes with the row and column sum maps."""
        for k, (gamma, K) in enumerate(zip(self.transitions, self.k0)):
            for cell in self.stages[k].cells():
                g = GElement.unit(self.stages[k], cell)
                img = gamma.apply(g)
                if tuple(_k0_apply(K, g.pi_f())) != img.pi_f():
                    return False
                if tuple(_k0_apply(K, g.pi_i())) != img.pi_i():
                    return False
        return True


def _k0_apply(K: K0Matrix, vec) -> list[int]:
    return [sum(x * v for x, v in zip(row, vec)) for row in K.entries]


def system_invariant(system: DirectSystem) -> SystemInvariant:
    return SystemInvariant(system.stages,
                           tuple(system.transition(k) for k in range(len(system) - 1)),
                           tuple(k0_matrix(phi) for phi in system.maps))


# intertwining search

@dataclass(frozen=True)
class Crossover:
    direction: str  # "A->B" or "B->A"
    source: int
    target: int
    embedding: Embedding


@dataclass(frozen=True)
class Intertwining:
    crossovers: tuple

    def as_list(self) -> list[dict]:
        return [{"direction": c.direction, "from": c.source, "to": c.target,
                 "summands": [list(f) for f in c.embedding.summands]} for c in self.crossovers]


def _dominates(prefix_a, prefix_b) -> bool:
    return all(x >= y for x, y in zip(prefix_a, prefix_b))


def nw_corner(rows, cols) -> dict:
    """The unique staircase matrix with the given margins, as ``{(i, j): m}``."""
    rows, cols = list(rows), list(cols)
    out = {}
    i = j = 0
    while i < len(rows) and j < len(cols):
        if rows[i] == 0:
            i += 1
            continue
        if cols[j] == 0:
            j += 1
            continue
        m = min(rows[i], cols[j])
        out[(i + 1, j + 1)] = m
        rows[i] -= m
        cols[j] -= m
    return out


def ghom_from_k0(domain: NestAlgebra, codomain: NestAlgebra, K) -> GHom | None:
    """The locally order conserving group map with K0 matrix ``K``, if any."""
    cols = [[row[a] for row in K] for a in range(domain.num_atoms)]
    X = {}
    for a, b in domain.cells():
        cells = nw_corner(cols[a - 1], cols[b - 1])
        if any(i > j for i, j in cells):
            return None
        X[(a, b)] = GElement(codomain, cells)
    try:
        return GHom(domain, codomain, X)
    except InvariantViolation:
        return None


def k0_candidates(domain: NestAlgebra, codomain: NestAlgebra, bound: int, constraint=None):
    """K0 matrices (row lists) of candidate locally order conserving maps.

    Entries lie in ``0..bound``, columns share a positive sum, the scale of
    the codomain is respected, and the columns decrease in prefix-sum
    dominance so the staircase matrices between them are upper triangular.
    ``constraint = (M, T)`` additionally demands ``K @ M == T``.
    """
    p, q = domain.num_atoms, codomain.num_atoms
    r, R = domain.atom_ranks, codomain.atom_ranks
    options = []
    for A in range(q):
        opts = []
        for row in product(range(bound + 1), repeat=p):
            if sum(x * ra for x, ra in zip(row, r)) > R[A]:
                continue
            if constraint is not None:
                M, T = constraint
                if any(sum(row[a] * M[a][c] for a in range(p)) != T[A][c] for c in range(len(T[A]))):
                    continue
            opts.append(row)
        if not opts:
            return
        options.append(opts)

    def rec(A, prefix, acc):
        if A == q:
            if len(set(prefix)) == 1 and prefix[0] > 0:
                yield [list(row) for row in acc]
            return
        slack = (q - A - 1) * bound
        for row in options[A]:
            new = tuple(x + y for x, y in zip(prefix, row))
            if all(new[a] >= new[a + 1] for a in range(p - 1)) and new[0] - new[-1] <= slack:
                acc.append(row)
                yield from rec(A + 1, new, acc)
                acc.pop()

    yield from rec(0, (0,) * p, [])


def _lifts(domain, codomain, bound, mode, constraint):
    for K in k0_candidates(domain, codomain, bound, constraint):
        gamma = ghom_from_k0(domain, codomain, K)
        if gamma is None:
            continue
        phi = lift_ghom(gamma)
        if _FLAG[mode](phi):
            yield phi


def inv_compare(sysA: DirectSystem, sysB: DirectSystem, depth: int = 2, entry_bound: int = 2,
                mode: str = "oc", telescoping: bool = False) -> Intertwining | None:
    """Bounded search for a commuting zigzag ``A_n1 -> B_m1 -> A_n2 -> ...``.

    Each crossover is the lift of a staircase group map with K0 entries at
    most ``entry_bound`` and must carry the ``mode`` flag.  Every triangle
    must commute up to inner conjugacy with the system maps.  A zigzag of
    ``2 * depth + 1`` crossovers closes ``depth`` triangles in each system,
    which is what a successful result provides.  ``None`` means the bounded
    search is exhausted, which refutes nothing beyond these bounds.

    By default the zigzag is a ladder: each crossover lands exactly one stage
    past the previous one in its target system, so passing to subsequences
    has to be requested by comparing against a :func:`telescope`.  With
    ``telescoping=True`` any increasing stage indices are allowed.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    mode = mode.lower()
    systems = {"A": sysA, "B": sysB}
    other = {"A": "B", "B": "A"}

    def commutes(new: Embedding, prev: Crossover, side: str, src: int, dst: int) -> bool:
        # prev runs other -> side ending at src; new runs side -> other ending at dst
        target = systems[other[side]].composite(prev.source, dst)
        comp = compose(new, prev.embedding)
        return comp == target

    def constraint_for(prev: Crossover, side: str, dst: int):
        K_prev = k0_matrix(prev.embedding).to_list()
        target = k0_matrix(systems[other[side]].composite(prev.source, dst)).to_list()
        return K_prev, target

    length = 2 * depth + 1

    def dfs(chain):
        if len(chain) == length:
            return chain
        prev = chain[-1]
        side = other[prev.direction[0]]  # systems the previous crossover landed in
        src = prev.target
        dest = other[side]
        start = prev.source + 1
        stop = len(systems[dest]) if telescoping else min(start + 1, len(systems[dest]))
        for dst in range(start, stop):
            con = constraint_for(prev, side, dst)
            for phi in _lifts(systems[side].stages[src], systems[dest].stages[dst], entry_bound, mode, con):
                if not commutes(phi, prev, side, src, dst):
                    continue
                step = Crossover(f"{side}->{dest}", src, dst, phi)
                found = dfs(chain + [step])
                if found:
                    return found
        return None

    # A sources n_1 < ... < n_{depth+1}, B targets m_1 < ... < m_{depth+1}
    for n1 in range(len(sysA) - depth):
        for m1 in range(len(sysB) - depth):
            for phi in _lifts(sysA.stages[n1], sysB.stages[m1], entry_bound, mode, None):
                first = Crossover("A->B", n1, m1, phi)
                found = dfs([first])
                if found:
                    return Intertwining(tuple(found))
    return None


def verify_intertwining(sysA: DirectSystem, sysB: DirectSystem, inter: Intertwining) -> bool:
    """Every triangle of the zigzag commutes on matrix units up to a block permutation."""
    from .conjugacy import conjugates, inner_conjugate

    systems = {"A": sysA, "B": sysB}
    for prev, new in zip(inter.crossovers, inter.crossovers[1:]):
        home = systems[prev.direction[0]]
        comp = compose(new.embedding, prev.embedding)
        target = home.composite(prev.source, new.target)
        sigma = inner_conjugate(comp, target)
        if sigma is None or not conjugates(sigma, comp, target):
            return False
    return True


def check_autooc(phi: Embedding, psi: Embedding, eta: Embedding, mode: str = "oc") -> tuple[bool, str]:
    """Triple composition harness: flagged pairwise composites give a flagged triple composite."""
    if phi.codomain != psi.domain or psi.codomain != eta.domain:
        raise ChainMismatch("maps do not form a chain")
    flag = _FLAG[mode.lower()]
    if not (flag(compose(psi, phi)) and flag(compose(eta, psi))):
        return True, "hypothesis unmet"
    return flag(compose(eta, compose(psi, phi))), "checked"


def standard_system(levels: int = 4) -> DirectSystem:
    """``T_1 -> T_2 -> T_4 -> ...`` with ``x -> x (+) x`` block diagonal maps."""
    stages = [NestAlgebra((1,) * 2 ** k) for k in range(levels)]
    maps = []
    for k in range(levels - 1):
        n = 2 ** k
        maps.append(Embedding(stages[k], stages[k + 1],
                              (tuple(range(1, n + 1)), tuple(range(n + 1, 2 * n + 1)))))
    return DirectSystem(tuple(stages), tuple(maps))


def refinement_system(levels: int = 4) -> DirectSystem:
    """``T_1 -> T_2 -> T_4 -> ...`` with each atom split into two neighbours."""
    stages = [NestAlgebra((1,) * 2 ** k) for k in range(levels)]
    maps = []
    for k in range(levels - 1):
        n = 2 ** k
        maps.append(Embedding(stages[k], stages[k + 1],
                              (tuple(2 * i - 1 for i in range(1, n + 1)), tuple(2 * i for i in range(1, n + 1)))))
    return DirectSystem(tuple(stages), tuple(maps))
