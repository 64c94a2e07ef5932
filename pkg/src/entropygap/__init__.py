"""Matrix-function calculus on Hermitian matrices with seeded randomized
certification of entropy-gap convexity and monotonicity."""

from .errors import DomainError, NumericError
from .linalg import (
    MAX_DIM,
    RngStream,
    SpectralDecomposition,
    check_hermitian,
    eigh,
    hermitize,
    is_stored_hermitian,
    kron,
    random_hermitian,
    random_pd,
    random_unitary,
)
from .calculus import (
    BUILTIN_NAMES,
    CONFLUENT_THRESHOLD,
    CUBE,
    IDENTITY,
    LOG,
    SQUARE,
    T_LOG_T,
    LoewnerMatrix,
    ScalarFunction,
    by_name,
    divided_difference,
    frechet_derivative,
    loewner,
    matrix_function,
    power,
    quad_form,
    spectral_apply,
)
from .oracles import (
    dd_log_quadrature,
    frechet_central_difference,
    gauss_legendre_unit,
    log_quad_form_quadrature,
)
from .bipartite import (
    MAX_PINCHING_BLOCKS,
    BipartiteSpace,
    MixedUnitaryChannel,
    apply_channel,
    conditional_expectation_1,
    conditional_expectation_1_channel,
    embed_1,
    partial_trace_1,
    partial_trace_2,
    pinching,
    random_mixed_unitary,
    random_pinching,
)
from .entropy import (
    EntropyGapSpec,
    entropy_gap,
    second_differential_fd,
    second_differential_fd_auto,
    second_differential_spectral,
    von_neumann_entropy,
)
from .campaigns import (
    CAMPAIGN_IDS,
    CHANNEL_FAMILIES,
    CampaignConfig,
    CampaignReport,
    run_campaign,
)
from .report import (
    emit_report,
    load_report,
    matrix_from_json,
    matrix_to_json,
    render_report,
    report_from_dict,
    report_to_dict,
)

__version__ = "0.1.0"
