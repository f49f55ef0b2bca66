"""Exact tropical and algebraic geometry of restricted Boltzmann machines.

Everything is computed over the rationals: slicings of the cube and
their counts, the tropicalized parameterization and its image dimension,
binary packing/covering codes, the mixture identities on the probability
side, initial forms of flattening minors, and the secondary-fan
combinatorics of the three-dimensional case.
"""

from .linalg import Matrix, nullspace, rank, rank_bareiss, solve
from .lp import LinearSystem, solve_feasibility
from .cube import (Slicing, count_zonotope_facets, cube_symmetries,
                   enumerate_slicings, is_slicing, slicing_count,
                   vertex_coords, vertex_index)
from .codes import (BinaryCode, covering_radius, covering_upper,
                    code_to_slicings, exact_small_values, hamming_code,
                    min_distance, table_known_bounds, varshamov_lower)
from .tropical import (AmbiguousArgmax, DimensionResult, MembershipResult,
                       TropParams, TropicalPoint, count_inference_functions,
                       inference_function, slicing_matrix,
                       tropical_dimension, tropical_membership,
                       tropical_morphism)
from .rbmstats import (Distribution, ExpParams, MixtureParams,
                       check_membership_necessary, covariance_matrix,
                       flattening, hadamard_product, joint_distribution,
                       max_flattening_rank, mixture_distribution,
                       reparameterize)
from .polynomials import (SparsePolynomial, WeightVector, flattening_minors,
                          initial_form, prevariety_member,
                          quartic_witness_check)
from .fan import (RegularSubdivision, SimplicialComplexData, Triangulation,
                  enumerate_triangulations_3cube, reduced_homology_ranks,
                  regular_subdivision_from_lift, secondary_sphere_fvector,
                  tm13_subcomplex)

__version__ = "0.1.0"
