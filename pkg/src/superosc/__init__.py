"""Taylor-matched superoscillating and supershift sequences.

Given distinct frequencies h_0..h_n and a target a, the coefficients
X_j = prod_{k != j} (h_k - a)/(h_k - h_j) make sum_j X_j exp(i h_j x)
agree with exp(i a x) to order n at the origin.  All algebraic identities
are checked in exact rational arithmetic; exponentials are evaluated in
configurable-precision binary floating point.
"""

from .arith import ComplexScalar, Mode, PrecisionPolicy, Scalar, complex_exp, exact, to_float
from .coefficients import (
    CoefficientSet,
    Method,
    coeffs_binomial,
    coeffs_closed_form,
    coeffs_l1_norm,
    coeffs_vandermonde_solve,
)
from .grids import (
    Family,
    FrequencyGrid,
    grid_custom,
    grid_power_denominator,
    grid_power_numerator,
    grid_uniform_linear,
)
from .signals import (
    Kind,
    SignalSpec,
    TaylorReport,
    classic_fn,
    classic_product_form,
    classic_yn,
    error_vs_limit,
    eval_derivative,
    local_frequency,
    new_method,
    taylor_check,
)
from .signals import eval as evaluate
from .supershift import (
    GeneratorSpec,
    SupershiftSignal,
    cexp_generator,
    exp_generator,
    series_generator,
    supershift_coeffs,
    supershift_eval,
    supershift_signal,
    supershift_taylor_check,
)
from .analysis import ComparisonRow, SweepConfig, required_bits_estimate, run_sweep

__version__ = "0.1.0"
