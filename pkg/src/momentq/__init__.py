"""Moment-map ideals, Gram relations, and Hilbert series for particle quotients."""

from .poly import (
    ParseError,
    Polynomial,
    Rat,
    Ring,
    RingError,
    format_poly,
    make_ring,
    parse_poly,
)
from . import orders
from .groebner import (
    GroebnerResult,
    IdealBasis,
    ResourceCap,
    buchberger,
    elimination_ideal,
    groebner_basis,
    ideal_contains,
    ideal_equal,
    normal_form,
    s_polynomial,
)
from .hilbert import (
    HilbertSeries,
    complete_intersection_series,
    dimension_and_a_invariant,
    gorenstein_check,
    hilbert_numerator_monomial,
    hilbert_series_quotient,
    laurent_at_one,
    leading_term_ideal,
)
from .model import (
    GeneratorSet,
    GramRing,
    PhaseRing,
    build_ideals,
    d_difference,
    gram_polynomial,
    minor_generators,
    moment_component,
    poisson_bracket,
    q_generator,
    sample_shell_points,
    so_determinant_generators,
    verify_bracket_table,
    verify_difference_identity,
    verify_localization_identity,
    verify_norm_identity,
)
from .exterior import (
    ExteriorElement,
    MinorCertificate,
    build_q_wedge,
    column_vector,
    format_certificate,
    minor_certificate,
    parse_certificate,
    sigma_case2,
    verify_certificate,
    wedge_mul,
)
from .pipeline import (
    CaseError,
    CaseReport,
    CaseSpec,
    benchmark_orders,
    cache_load,
    cache_store,
    compare_ideals,
    run_elimination_workflow,
    verify_suite,
)

__version__ = "0.1.0"
