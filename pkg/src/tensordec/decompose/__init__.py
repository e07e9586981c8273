"""Decomposition and identifiability algorithms."""
from .catalecticant import catalecticant_decompose, mixed_catalecticant_decompose
from .core import (
    Decomposition,
    IdentifiabilityCertificate,
    VerificationReport,
    B_nd,
    bound_ok,
    cubic_bound,
    extract_linear_form,
    factor_rank_one,
    mixed_bound_ok,
    recover_hyperplanes,
    solve_coefficients,
    verify_decomposition,
)
from .generalized import certify_identifiability, generalized_decompose, mixed_decompose
from .hilbert import hilbert_projection_decompose
from .lift import derivative_lift_decompose
from .vsp import vsp_reduce_decompose
