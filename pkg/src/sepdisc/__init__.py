"""Perfect discrimination of product pure states with block-positive effects."""

from .cone import (
    ConeMembership,
    NecessityReport,
    TParams,
    block_positivity_min,
    extract_T_params,
    is_in_dual_cone,
    necessity_bound,
    symmetrize,
    verify_certificate,
    verify_eqH2,
)
from .discrimination import (
    DiscriminationReport,
    NotDistinguishableError,
    Verdict,
    capacity_family,
    construct_measurement,
    decide_sep,
    extend_to_full,
    measurement_for,
    min_copies,
    multicopy_measurement,
    verify_family,
    verify_perfect,
)
from .effects import Effect, Measurement
from .linalg import HermitianMatrix, eig_hermitian, is_psd, minor_psd_check, partial_transpose, tensor, trace_product
from .states import (
    CanonicalPair,
    ProductMixedState,
    PureProductState,
    PureState,
    canonicalize,
    density,
    from_bloch,
    mixed_density,
    random_pure_product,
)

__version__ = "0.1.0"
