"""Finite exponential sums f(x) = sum_j c_j exp(i g(h_j) x).

Three kinds share one evaluator:

* ``NEW`` -- Taylor-matched coefficients from :func:`coeffs_closed_form`
  on any grid; limit e^{iax}.
* ``CLASSIC_FN`` -- binomial weights on 1 - 2j/n; limit e^{iax}.
* ``CLASSIC_YN`` -- binomial weights with frequencies (1 - 2j/n)**m;
  limit e^{i a^m x}.

Superoscillatory sums cancel heavily, so evaluation runs at
``policy.working_bits(l1, bits)`` and is rounded to ``bits`` at the end.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp

from .arith import (
    DEFAULT_POLICY,
    ComplexScalar,
    Mode,
    PrecisionPolicy,
    Scalar,
    as_scalar,
    cos_sin,
    i_power,
)
from .coefficients import (
    CoefficientSet,
    coeffs_binomial,
    coeffs_closed_form,
    coeffs_l1_norm,
    moment,
)
from .errors import InvalidParameter, InvalidPrecision, InvalidSignal, NearZeroSignal, PrecisionInsufficient
from .grids import Family, FrequencyGrid


class Kind(enum.Enum):
    NEW = "new"
    CLASSIC_FN = "classic-fn"
    CLASSIC_YN = "classic-yn"


@dataclass(frozen=True)
class SignalSpec:
    coeffs: CoefficientSet
    kind: Kind = Kind.NEW
    m: int = 1

    def __post_init__(self):
        if self.kind is not Kind.NEW and self.coeffs.grid.family is not Family.UNIFORM:
            raise InvalidSignal(f"{self.kind.value} signals need the uniform grid 1 - 2j/n")
        if self.kind is Kind.CLASSIC_YN and self.m < 1:
            raise InvalidParameter(f"frequency exponent m must be >= 1, got {self.m}")

    @property
    def n(self) -> int:
        return self.coeffs.n

    @property
    def frequencies(self) -> tuple:
        """Effective frequencies after the power map (exact if the grid is)."""
        nodes = self.coeffs.grid.nodes
        if self.kind is Kind.CLASSIC_YN:
            return tuple(h**self.m for h in nodes)
        return tuple(nodes)

    @property
    def limit_exponent(self) -> Scalar:
        a = self.coeffs.target_a
        return a**self.m if self.kind is Kind.CLASSIC_YN else a


def new_method(grid: FrequencyGrid, a) -> SignalSpec:
    return SignalSpec(coeffs_closed_form(grid, a), Kind.NEW)


def classic_fn(n: int, a) -> SignalSpec:
    return SignalSpec(coeffs_binomial(n, a), Kind.CLASSIC_FN)


def classic_yn(n: int, a, m: int) -> SignalSpec:
    return SignalSpec(coeffs_binomial(n, a), Kind.CLASSIC_YN, m)


@dataclass(frozen=True)
class TaylorReport:
    n: int
    residuals: tuple
    max_abs: Scalar
    exact: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "exact": self.exact,
            "max_abs": str(self.max_abs),
            "residuals": [{"re": str(r.re), "im": str(r.im)} for r in self.residuals],
        }


def working_bits_for(sig: SignalSpec, bits=None, policy: PrecisionPolicy = DEFAULT_POLICY, working_bits=None) -> int:
    """Working precision for evaluating ``sig``; checks explicit overrides."""
    if bits is not None and bits < 8:
        raise InvalidPrecision(f"need at least 8 bits, got {bits}")
    l1 = coeffs_l1_norm(sig.coeffs)
    if working_bits is not None:
        need = policy.minimum_bits(l1)
        if working_bits < need:
            raise PrecisionInsufficient(
                f"{working_bits} working bits is below the {need} needed for coefficient mass {l1}",
                working_bits=working_bits,
                required=need,
            )
        return working_bits
    return policy.working_bits(l1, bits)


def eval_error_bound(sig: SignalSpec, work: int) -> Scalar:
    """(n + 1) * sum|c_j| * 2**(4 - work), an absolute bound at ``work`` bits."""
    l1 = coeffs_l1_norm(sig.coeffs).to_fraction()
    return Scalar((sig.n + 1) * l1 * 2 ** (4 - work) if work >= 4 else (sig.n + 1) * l1 * 2**4)


def _exact_zero(sig, x) -> bool:
    return isinstance(x, Scalar) and x.is_exact and x.is_zero() and sig.coeffs.mode is Mode.EXACT


def _raw_sum(sig: SignalSpec, x: Scalar, p: int, work: int) -> ComplexScalar:
    """sum_j c_j (i h_j)**p exp(i h_j x) at ``work`` bits, unrounded."""
    xw = x.round(work)
    re = im = libmp.fzero
    rnd = libmp.round_nearest
    for c, h in zip(sig.coeffs.values, sig.frequencies):
        hw = h.round(work)
        weight = (c.round(work) * hw**p).raw
        theta = libmp.mpf_mul(hw.raw, xw.raw, work, rnd)
        cos, sin = libmp.mpf_cos_sin(theta, work, rnd)
        re = libmp.mpf_add(re, libmp.mpf_mul(weight, cos, work, rnd), work, rnd)
        im = libmp.mpf_add(im, libmp.mpf_mul(weight, sin, work, rnd), work, rnd)
    total = ComplexScalar(Scalar._raw(re, work), Scalar._raw(im, work))
    return total * i_power(p).round(work)


def _exact_derivative_at_zero(sig: SignalSpec, p: int) -> ComplexScalar:
    return i_power(p) * moment(sig.coeffs.values, sig.frequencies, p)


def eval_derivative(sig: SignalSpec, p: int, x, bits=None, *, policy=DEFAULT_POLICY, working_bits=None) -> ComplexScalar:
    """f^(p)(x) = sum_j c_j (i h_j)**p exp(i h_j x).

    Exact when ``x`` is an exact zero and the coefficients are exact.
    """
    if p < 0:
        raise InvalidParameter(f"derivative order must be >= 0, got {p}")
    x = as_scalar(x)
    if _exact_zero(sig, x):
        return _exact_derivative_at_zero(sig, p)
    bits = policy.base_bits if bits is None else bits
    work = working_bits_for(sig, bits, policy, working_bits)
    return _raw_sum(sig, x, p, work).round(bits)


def eval(sig: SignalSpec, x, bits=None, *, policy=DEFAULT_POLICY, working_bits=None) -> ComplexScalar:
    """f(x); see :func:`eval_derivative`."""
    return eval_derivative(sig, 0, x, bits, policy=policy, working_bits=working_bits)


def taylor_check(sig: SignalSpec) -> TaylorReport:
    """Residuals r_p = f^(p)(0) - (i t)**p for p = 0..n, t the limit exponent.

    Exact for exact coefficients: new-method signals report all zeros,
    classic ones generally do not for p >= 2.
    """
    t = sig.limit_exponent
    freqs = sig.frequencies
    diffs = [moment(sig.coeffs.values, freqs, p) - t**p for p in range(sig.n + 1)]
    residuals = tuple(i_power(p) * d for p, d in enumerate(diffs))
    max_abs = max(abs(d) for d in diffs)
    exact = sig.coeffs.mode is Mode.EXACT and all(d.is_zero() for d in diffs)
    return TaylorReport(sig.n, residuals, max_abs, exact)


def error_vs_limit(sig: SignalSpec, x, limit_exponent=None, bits=None, *, policy=DEFAULT_POLICY, working_bits=None) -> Scalar:
    """|f(x) - exp(i L x)|, L defaulting to the signal's own limit exponent.

    The difference is taken at working precision before rounding, so tiny
    errors keep their significant digits.
    """
    x = as_scalar(x)
    L = sig.limit_exponent if limit_exponent is None else as_scalar(limit_exponent)
    if _exact_zero(sig, x):
        return abs(moment(sig.coeffs.values, sig.frequencies, 0) - 1)
    bits = policy.base_bits if bits is None else bits
    work = working_bits_for(sig, bits, policy, working_bits)
    f = _raw_sum(sig, x, 0, work)
    lw = L.round(work)
    cos, sin = cos_sin(lw * x.round(work), work)
    return abs(f - ComplexScalar(cos, sin)).round(bits)


def local_frequency(sig: SignalSpec, x, bits=None, *, policy=DEFAULT_POLICY, working_bits=None) -> Scalar:
    """Instantaneous frequency Im(f'(x) / f(x)).

    Raises NearZeroSignal when |f(x)| < 2**(-work/2).
    """
    x = as_scalar(x)
    if _exact_zero(sig, x):
        m0 = moment(sig.coeffs.values, sig.frequencies, 0)
        if m0.is_zero():
            raise NearZeroSignal("f(0) = 0 exactly")
        # f'(0)/f(0) = i * m1 / m0 with real moments
        return moment(sig.coeffs.values, sig.frequencies, 1) / m0
    bits = policy.base_bits if bits is None else bits
    work = working_bits_for(sig, bits, policy, working_bits)
    f = _raw_sum(sig, x, 0, work)
    d = _raw_sum(sig, x, 1, work)
    mag2 = f.abs2()
    if mag2 < Scalar(Fraction(1, 2**work), work):
        raise NearZeroSignal(f"|f({x})| is below 2^-{work // 2}", x=x)
    return ((d.im * f.re - d.re * f.im) / mag2).round(bits)


def classic_product_form(n: int, a, x, bits=None, *, policy=DEFAULT_POLICY) -> ComplexScalar:
    """(cos(x/n) + i a sin(x/n))**n."""
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    x = as_scalar(x)
    a = as_scalar(a)
    if x.is_exact and x.is_zero() and a.is_exact:
        return ComplexScalar(Scalar(1), Scalar(0))
    bits = policy.base_bits if bits is None else bits
    if bits < 8:
        raise InvalidPrecision(f"need at least 8 bits, got {bits}")
    work = policy.working_bits(bits=bits) + n.bit_length()
    cos, sin = cos_sin(x.round(work) / n, work)
    z = ComplexScalar(cos, a.round(work) * sin)
    return (z**n).round(bits)
