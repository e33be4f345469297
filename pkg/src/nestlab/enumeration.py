"""Exhaustive generators for small algebras, maps and partial isometries."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations
from typing import Iterator

from .algebra import NestAlgebra
from .embedding import Embedding, apply
from .pisom import StandardPisom, block_support, is_staircase, product, rank_distribution


@lru_cache(maxsize=1024)
def monotone_maps(domain: NestAlgebra, codomain: NestAlgebra) -> tuple:
    """Every weakly increasing atom map, in lexicographic order."""
    l, m = domain.num_atoms, codomain.num_atoms
    return tuple(combinations_with_replacement(range(1, m + 1), l))


def embeddings(domain: NestAlgebra, codomain: NestAlgebra, max_mu: int, min_mu: int = 1) -> Iterator[Embedding]:
    """Every embedding with multiplicity in ``min_mu..max_mu`` that fits the capacities."""
    maps = monotone_maps(domain, codomain)
    caps = codomain.atom_ranks
    loads = [tuple(sum(domain.rank(a + 1) for a, A in enumerate(f) if A == B) for B in codomain.atoms())
             for f in maps]

    def grow(start, chosen, load):
        if chosen and len(chosen) >= min_mu:
            yield Embedding(domain, codomain, tuple(maps[i] for i in chosen))
        if len(chosen) == max_mu:
            return
        for i in range(start, len(maps)):
            new = tuple(x + y for x, y in zip(load, loads[i]))
            if all(x <= c for x, c in zip(new, caps)):
                yield from grow(i, chosen + [i], new)

    yield from grow(0, [], (0,) * codomain.num_atoms)


def standard_pisoms(A: NestAlgebra) -> Iterator[StandardPisom]:
    """Every partial permutation lying in ``A`` (including the empty one)."""
    n = A.total_rank
    blocks = [A.block_of(p) for p in A.positions()]
    for k in range(n + 1):
        for rows in combinations(range(1, n + 1), k):
            for cols in permutations(range(1, n + 1), k):
                if all(blocks[r - 1] <= blocks[c - 1] for r, c in zip(rows, cols)):
                    yield StandardPisom(A, frozenset(zip(rows, cols)))


def _pairwise_staircase(cells) -> bool:
    cells = list(cells)
    return not any(s < i and t > j for (s, t) in cells for (i, j) in cells)


def _pairwise_strict(cells) -> bool:
    cells = set(cells)
    return all((s < i) == (t < j) and (s == i) == (t == j) for (s, t) in cells for (i, j) in cells)


def oc_by_pisoms(phi: Embedding) -> bool:
    """Order conservation checked on every standard partial isometry of the domain."""
    return all(_pairwise_staircase(block_support(apply(phi, v)))
               for v in standard_pisoms(phi.domain) if _pairwise_staircase(block_support(v)))


def op_by_pisoms(phi: Embedding) -> bool:
    return all(_pairwise_strict(block_support(apply(phi, v)))
               for v in standard_pisoms(phi.domain) if _pairwise_strict(block_support(v)))


def star_hom_tracks(domain: NestAlgebra, codomain: NestAlgebra, max_mu: int | None = None,
                    prune: bool = True) -> Iterator[tuple]:
    """Every matrix-unit table of a star homomorphism ``domain -> codomain``.

    A table is given by its tracks: ``mu`` disjoint position sequences, where
    track ``t`` lists the image slot of each domain position.  The image of
    ``e_pq`` is then ``{(t[p], t[q])}``; it lies in the codomain exactly when
    each track is constant on domain atoms and weakly increasing across them
    at block level.  Yielded as sorted tuples of tracks, each table once.
    With ``prune=False`` the block conditions are skipped and every table of
    a star homomorphism of the full matrix algebras is produced.
    """
    n, N = domain.total_rank, codomain.total_rank
    blk = codomain.block_of
    dom_blk = [domain.block_of(p) for p in domain.positions()]
    top = N // n if max_mu is None else min(max_mu, N // n)

    def tracks_from(used: frozenset):
        def rec(prefix):
            if len(prefix) == n:
                yield tuple(prefix)
                return
            p = len(prefix)
            for x in range(1, N + 1):
                if x in used or x in prefix:
                    continue
                if not prune:
                    pass
                elif p and dom_blk[p] == dom_blk[p - 1] and blk(x) != blk(prefix[-1]):
                    continue
                elif p and dom_blk[p] != dom_blk[p - 1] and blk(x) < blk(prefix[-1]):
                    continue
                prefix.append(x)
                yield from rec(prefix)
                prefix.pop()
        yield from rec([])

    def grow(chosen, used):
        if chosen:
            yield tuple(chosen)
        if len(chosen) == top:
            return
        for t in tracks_from(used):
            if chosen and t <= chosen[-1]:
                continue
            yield from grow(chosen + [t], used | set(t))

    yield from grow([], frozenset())


def tables_from_tracks(tracks) -> dict:
    """Generator images (``e_pp`` and ``e_{p,p+1}``) of the table with these tracks."""
    n = len(tracks[0])
    images = {(p, p): {t[p - 1] for t in tracks} for p in range(1, n + 1)}
    for p in range(1, n):
        images[(p, p + 1)] = {(t[p - 1], t[p]) for t in tracks}
    return images



# seeded random generators for property suites

def random_algebra(rng, max_atoms: int = 3, max_rank: int = 3) -> NestAlgebra:
    return NestAlgebra(tuple(rng.randint(1, max_rank) for _ in range(rng.randint(1, max_atoms))))


def random_embedding(rng, domain: NestAlgebra, max_mu: int = 3, codomain_atoms: int = 4,
                     slack: int = 1) -> Embedding:
    """Random summands into a codomain sized to hold them, plus up to ``slack`` spare rank per atom."""
    mu = rng.randint(1, max_mu)
    m = rng.randint(1, codomain_atoms)
    summands = [tuple(sorted(rng.randint(1, m) for _ in domain.atoms())) for _ in range(mu)]
    load = [0] * m
    for f in summands:
        for a, A in enumerate(f, start=1):
            load[A - 1] += domain.rank(a)
    codomain = NestAlgebra(tuple(max(1, x) + rng.randint(0, slack) for x in load))
    return Embedding(domain, codomain, tuple(summands))


def random_embedding_from(rng, domain: NestAlgebra, codomain: NestAlgebra, max_mu: int = 3,
                          tries: int = 200) -> Embedding | None:
    """Random embedding between fixed algebras, or ``None`` if none was hit."""
    m = codomain.num_atoms
    for _ in range(tries):
        mu = rng.randint(1, max_mu)
        summands = tuple(tuple(sorted(rng.randint(1, m) for _ in domain.atoms())) for _ in range(mu))
        load = [0] * m
        for f in summands:
            for a, A in enumerate(f, start=1):
                load[A - 1] += domain.rank(a)
        if all(x <= r for x, r in zip(load, codomain.atom_ranks)):
            return Embedding(domain, codomain, summands)
    return None


def random_lift_instance(rng, A: NestAlgebra, t: int):
    """Partial permutations ``u, v_1..v_t`` of ``A`` with ``initial(u) = final(v_k)``.

    Returns ``(u, vs)``; the common projection is a random set of positions.
    """
    n = A.total_rank
    blk = A.block_of
    P = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))

    def attach(source_side: bool):
        pairs, used = [], set()
        for x in P:
            if source_side:
                options = [r for r in range(1, n + 1) if r not in used and blk(r) <= blk(x)]
            else:
                options = [c for c in range(1, n + 1) if c not in used and blk(x) <= blk(c)]
            if not options:
                return None
            y = rng.choice(options)
            used.add(y)
            pairs.append((y, x) if source_side else (x, y))
        return StandardPisom(A, frozenset(pairs))

    u = attach(True)
    vs = [attach(False) for _ in range(t)]
    if u is None or any(v is None for v in vs):
        return None
    return u, vs


def random_lemma_data(rng, max_atoms: int = 3, max_rank: int = 3, max_t: int = 3):
    """A realizable staircase instance ``(A, X, Ys, Zs, vs)`` for the lifting lemma.

    Drawn by rejection: a random ``u`` and ``v_k`` sharing a projection, kept
    when ``X``, every ``Y^k`` and every ``Z^k`` are staircase.
    """
    while True:
        A = random_algebra(rng, max_atoms, max_rank)
        inst = random_lift_instance(rng, A, rng.randint(0, max_t))
        if inst is None:
            continue
        u, vs = inst
        prods = [StandardPisom(A, product(u, v)) for v in vs]
        X = rank_distribution(u)
        Ys = [rank_distribution(v) for v in vs]
        Zs = [rank_distribution(w) for w in prods]
        if all(is_staircase(g.support) for g in [X, *Ys, *Zs]):
            return A, X.as_matrix(), [y.as_matrix() for y in Ys], [z.as_matrix() for z in Zs], vs
