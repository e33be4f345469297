"""Exact combinatorics of order conserving embeddings between nest algebras."""
from .algebra import NestAlgebra, T, make_nest, triangular
from .conjugacy import BlockPermutation, inner_conjugate, recover_embedding, recover_summands_from_k0
from .embedding import (Embedding, GHom, K0Matrix, OrderFlags, SummandMap, apply, bimodule_cells,
                        classify_order_properties, compose, from_matrix_unit_images, g_map,
                        identity_embedding, is_loc, is_lop, is_oc, is_op, k0_matrix, loc_failures_on,
                        make_embedding)
from .errors import NestlabError
from .kernels import BACKEND
from .lift import lemma_lift, lift_ghom, lift_op_chain
from .pisom import (BlockPartialIsometry, GElement, StandardPisom, block_support, is_staircase,
                    is_strictly_monotone, pisom_is_oc, pisom_is_op, rank_distribution)
from .structure import (classify_summand, is_order_irreducible, is_refinement_type, is_t2_degenerate,
                        multiplicity_signature, ordered_decomposition, structure_verdict)
from .system import (DirectSystem, LimitElement, check_autooc, classify_system, inv_compare, limit_equal,
                     make_system, push, refinement_system, scale_membership, standard_system,
                     system_invariant, telescope)

__version__ = "0.1.0"
