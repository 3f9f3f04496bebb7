"""Exact computations of mod-p reductions of two-dimensional crystalline
representations of unramified local Galois groups."""
from .characters import CrystallineCharacter, EllSData, ell_s_vectors, frobenius_conjugate, from_rank_one
from .families import AnalysisReport, FamilySpec, analyze, fixture_25, fixture_28
from .filtered_modules import (
    FilteredPhiModule,
    FiltrationStep,
    base_change,
    check_weak_admissibility,
    normalize_rank_one,
    restrict,
    split_rank_one,
)
from .product_ring import ProductMatrix, frobenius_shift, matrix_tensor_n, semilinear_conjugate, theta_embed
from .reduction import (
    InertiaCharacter,
    SemisimpleReduction,
    det_reduction,
    induce_reduction,
    irreducibility_oracle,
    is_irreducible_closed_form,
    reduce_character,
    star_identity_check,
)
from .scalars import Monomial, Scalar, p_valuation, parse_scalar, scalar_inv, scalar_mul
from .wach_series import TruncSeries, WachData, check_gamma_trivial_mod_pi, check_qk_condition, q_series

__version__ = "0.1.0"
