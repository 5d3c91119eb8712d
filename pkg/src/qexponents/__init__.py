"""Error exponents for asymmetric quantum hypothesis testing and cq channel coding."""

from .channel import (
    CQChannel,
    block_operators,
    channel_exponent,
    finite_blocklength_check,
    holevo_quantity,
    make_channel,
    optimize_input,
    phi_p,
    sigma_p,
)
from .exceptions import (
    DegenerateSupportError,
    DimensionGuardError,
    InputFormatError,
    NotHermitianError,
    NotPSDError,
    QExponentsError,
    ValidationError,
)
from .exponents import (
    ExponentCurve,
    chernoff_bound,
    critical_s,
    hoeffding_bound,
    hoeffding_curve,
    legendre_residuals,
    oh_bound,
    oh_curve,
    stein_exponent,
)
from .finite_n import (
    ErrorPair,
    TestOperator,
    audenaert_gap,
    build_test,
    error_pair,
    hoeffding_test,
    lemma1_gap,
    np_tradeoff,
    run_lemma_suite,
    stein_convergence,
    verify_exponential_bounds,
)
from .operators import (
    EigenDecomposition,
    eigendecompose,
    fractional_power,
    negative_part_projector,
    positive_part_projector,
    tensor_power,
)
from .states import (
    HypothesisPair,
    make_pair,
    phi,
    phi_prime,
    phi_tilde,
    relative_entropy,
)

__version__ = "0.1.0"
