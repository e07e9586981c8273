"""Exact decomposition and identifiability of symmetric and mixed tensors
via catalecticants, secant varieties and Groebner bases."""
from .decompose import (
    Decomposition,
    IdentifiabilityCertificate,
    catalecticant_decompose,
    certify_identifiability,
    derivative_lift_decompose,
    generalized_decompose,
    hilbert_projection_decompose,
    mixed_catalecticant_decompose,
    mixed_decompose,
    solve_coefficients,
    verify_decomposition,
    vsp_reduce_decompose,
)
from .fields import GF, QQ, extension_field, field_from_spec
from .flattenings import FlatteningSpec, MixedTensor, SymTensor
from .generators import gen_polynomial_of_rank, gen_tensor_of_rank
from .poly import Poly, parse_poly

__version__ = "0.1.0"
