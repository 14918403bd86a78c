"""Counting primitive points on hypersurfaces over finite fields."""

__version__ = "0.1.0"

from .arith import (
    euler_phi,
    factorize,
    moebius,
    squarefree_divisor_count,
    w_upper_bound,
)
from .budget import BudgetExceeded
from .charsum import (
    MulCharacter,
    gauss_sum,
    jacobi_sum_direct,
    jacobi_sum_fast,
    mixed_char_sum,
)
from .count import (
    count_points,
    count_points_nonzero,
    count_primitive_brute,
    primitive_via_moebius,
)
from .fermat import (
    dwork_bound_check,
    primitive_count_fermat_charsum,
    primitive_count_fermat_exact,
    superelliptic_bound,
    theorem2_bound,
    theorem2_bound_corrected,
    theorem2_check,
)
from .field import CapExceeded, FieldCtx, FieldError, build_field, field_for_q
from .hyperplane import (
    QuadExt,
    corollary_count,
    primitive_count_hyperplane_exact,
    quad_solution_count,
)
from .poly import (
    FermatShape,
    MultiPoly,
    PolyParseError,
    Regularity,
    dwork_regularity_check,
    parse_poly,
)
from .report import CountReport, emit_report
from .sieve import SieveConfig, sieve_criterion, sieve_delta
from .sphere import sphere_has_primitive, sphere_scan, sufficiency_threshold

__all__ = [
    "BudgetExceeded",
    "CapExceeded",
    "CountReport",
    "FermatShape",
    "FieldCtx",
    "FieldError",
    "MulCharacter",
    "MultiPoly",
    "PolyParseError",
    "QuadExt",
    "Regularity",
    "SieveConfig",
    "build_field",
    "corollary_count",
    "count_points",
    "count_points_nonzero",
    "count_primitive_brute",
    "dwork_bound_check",
    "dwork_regularity_check",
    "emit_report",
    "euler_phi",
    "factorize",
    "field_for_q",
    "gauss_sum",
    "jacobi_sum_direct",
    "jacobi_sum_fast",
    "mixed_char_sum",
    "moebius",
    "parse_poly",
    "primitive_count_fermat_charsum",
    "primitive_count_fermat_exact",
    "primitive_count_hyperplane_exact",
    "primitive_via_moebius",
    "quad_solution_count",
    "sieve_criterion",
    "sieve_delta",
    "sphere_has_primitive",
    "sphere_scan",
    "squarefree_divisor_count",
    "sufficiency_threshold",
    "superelliptic_bound",
    "theorem2_bound",
    "theorem2_bound_corrected",
    "theorem2_check",
    "w_upper_bound",
]
