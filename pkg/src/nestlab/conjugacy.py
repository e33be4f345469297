"""Inner conjugacy of embeddings and recovery of summands from K0 data.

Two embeddings are inner conjugate, via a permutation of codomain positions
that keeps every atom interval in place, exactly when their summand
multisets agree: a block-preserving permutation cannot move a slot to a
different codomain atom, and equal summands can be matched slot for slot.

Recovering the multiset from a K0 matrix uses a greedy peel: take the
componentwise minimum atom vector ``f(a) = min{A : n_{A,a} > 0}``, remove one
copy, repeat.  For a locally order conserving multiset ``M`` the vector is
always the map of some summand.  Let ``S_a`` be the set of summands attaining
the minimum at atom ``a``.  If ``S_a`` and ``S_b`` (``a < b``) were
incomparable there would be ``s`` in ``S_a`` outside ``S_b`` and ``t`` in
``S_b`` outside ``S_a``; then ``f_t(a) > f_s(a)`` and ``f_t(b) < f_s(b)`` put
the image cell of ``t`` strictly southwest of that of ``s`` at cell
``(a, b)``, contradicting local order conservation.  The ``S_a`` therefore
form a chain, their intersection is the smallest of them and is nonempty,
and any summand in it realizes the minimum vector.  The remaining multiset
is again locally order conserving, so the peel continues.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import NestAlgebra
from .embedding import Embedding, K0Matrix, SummandMap, is_loc, k0_matrix
from .errors import DomainMismatch, InconsistentColumns, InvariantViolation, NoLocRealization


@dataclass(frozen=True)
class BlockPermutation:
    """Permutation of positions keeping each atom interval invariant.

    ``perm[p-1]`` is the image of position ``p``.
    """
    ambient: NestAlgebra
    perm: tuple

    def __post_init__(self):
        perm = tuple(int(x) for x in self.perm)
        object.__setattr__(self, "perm", perm)
        A = self.ambient
        if sorted(perm) != list(A.positions()):
            raise InvariantViolation("not a permutation of the positions")
        for p, x in enumerate(perm, start=1):
            if A.block_of(p) != A.block_of(x):
                raise InvariantViolation(f"position {p} is moved out of its atom")

    @classmethod
    def identity(cls, A: NestAlgebra) -> "BlockPermutation":
        return cls(A, tuple(A.positions()))

    def __call__(self, p: int) -> int:
        return self.perm[p - 1]

    def inverse(self) -> "BlockPermutation":
        inv = [0] * len(self.perm)
        for p, x in enumerate(self.perm, start=1):
            inv[x - 1] = p
        return BlockPermutation(self.ambient, tuple(inv))

    def is_identity(self) -> bool:
        return all(p == x for p, x in enumerate(self.perm, start=1))

    def conjugate(self, pairs) -> frozenset:
        """Pairs of ``P w P^-1`` where ``P`` sends ``e_p`` to ``e_sigma(p)``."""
        return frozenset((self(r), self(c)) for r, c in pairs)


def conjugates(sigma: BlockPermutation, phi: Embedding, psi: Embedding) -> bool:
    """True iff ``sigma`` carries every matrix-unit image of ``phi`` onto that of ``psi``."""
    psi_images = psi.matrix_unit_images()
    return all(sigma.conjugate(pairs) == psi_images[unit]
               for unit, pairs in phi.matrix_unit_images().items())


def inner_conjugate(phi: Embedding, psi: Embedding) -> BlockPermutation | None:
    if phi.domain != psi.domain or phi.codomain != psi.codomain:
        raise DomainMismatch("inner conjugacy needs a common domain and codomain")
    if phi.summands != psi.summands:
        return None
    C = phi.codomain
    image = {}
    for frow, grow in zip(phi.slot_table(), psi.slot_table()):
        for x, y in zip(frow, grow):
            image[x] = y
    for A in C.atoms():
        spare_src = [x for x in C.atom_positions(A) if x not in image]
        taken = set(image.values())
        spare_dst = [y for y in C.atom_positions(A) if y not in taken]
        image.update(zip(spare_src, spare_dst))
    sigma = BlockPermutation(C, tuple(image[x] for x in C.positions()))
    assert conjugates(sigma, phi, psi)
    return sigma


def _as_rows(domain: NestAlgebra, codomain: NestAlgebra, K) -> list[list[int]]:
    if isinstance(K, K0Matrix):
        if K.domain != domain or K.codomain != codomain:
            raise DomainMismatch("K0 matrix belongs to other algebras")
        return K.to_list()
    rows = [[int(x) for x in row] for row in K]
    if len(rows) != codomain.num_atoms or any(len(r) != domain.num_atoms for r in rows):
        raise InconsistentColumns("K0 matrix has the wrong shape")
    return rows


def recover_summands_from_k0(domain: NestAlgebra, codomain: NestAlgebra, K) -> list[SummandMap]:
    rows = _as_rows(domain, codomain, K)
    if any(x < 0 for row in rows for x in row):
        raise InconsistentColumns("K0 matrix has a negative entry")
    sums = {sum(row[a] for row in rows) for a in range(domain.num_atoms)}
    if len(sums) != 1 or 0 in sums:
        raise InconsistentColumns(f"column sums {sorted(sums)} are not one positive multiplicity")
    mu = sums.pop()
    left = [row[:] for row in rows]
    peeled = []
    for _ in range(mu):
        f = []
        for a in range(domain.num_atoms):
            A = next(A for A in range(codomain.num_atoms) if left[A][a] > 0)
            left[A][a] -= 1
            f.append(A + 1)
        if any(x > y for x, y in zip(f, f[1:])):
            raise NoLocRealization(f"peeled vector {tuple(f)} is not monotone")
        peeled.append(tuple(f))
    try:
        phi = Embedding(domain, codomain, tuple(peeled))
    except InvariantViolation as exc:
        raise NoLocRealization(str(exc)) from None
    if k0_matrix(phi).to_list() != rows or not is_loc(phi):
        raise NoLocRealization("no locally order conserving embedding has this K0 matrix")
    return phi.summand_maps


def recover_embedding(domain: NestAlgebra, codomain: NestAlgebra, K) -> Embedding:
    return Embedding(domain, codomain, tuple(recover_summands_from_k0(domain, codomain, K)))
