"""Exact-arithmetic matroid classification and secret-sharing bounds.

The package computes, over exact rationals: Ingleton and Zhang-Yeung
compliance of matroids and polymatroids, common-information and
AK-information extension feasibility, folded-linear and skew-field
representation verification, and certified lower bounds on secret-sharing
information ratios for matroid ports.
"""

from .algebra import (GF, Quaternion, Rat, RING_H, RING_Q, RingMatrix,
                      field_make, mat_rank, rat_add, rat_cmp, rat_div,
                      rat_mul)
from .inequalities import (BundleWitness, QuadrupleWitness, SpicWitness,
                           bundle_violation, ingleton_deficit,
                           ingleton_minor_witness, ingleton_scan,
                           spic_witness, zy_deficit, zy_scan)
from .lpmodel import (AkQuery, CiQuery, LinearProgram, build_ak_feasibility,
                      build_ci_feasibility, build_kappa, build_lambda,
                      build_sigma, candidate_queries, ci_candidate_pairs,
                      shannon_block)
from .matroid import (Matroid, MatroidError, Polymatroid, SparsePavingSpec,
                      catalog, catalog_names, contract, delete, dual, flats,
                      from_sparse_paving, load_matroid, mask_of, points_of,
                      relax, uniform_matroid)
from .repcheck import (FoldedRepresentation, block_pattern_check,
                       builtin_representation, load_representation,
                       polymatroid_from_representation, verify_representation,
                       verify_skew_representation)
from .secretsharing import (AccessStructure, BoundReport, Decomposition,
                            DecompositionPart, bound, is_matroid_port, port,
                            tictactoe_decomposition, verify_decomposition)
from .simplex import (CertificationError, ResourceExhausted, SolveOutcome,
                      exact_simplex, export_certificate, float_presolve,
                      solve, verify_certificate)

__version__ = "0.1.0"
