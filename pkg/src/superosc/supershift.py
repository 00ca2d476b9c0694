"""Supershift sums psi_n(x) = sum_j Y_j G(h_j x) for an entire generator G.

G is given by its Maclaurin coefficients g_p = G^(p)(0) / p! together
with a tail rule |g_p| <= M r**p / p! beyond the stored coefficients, which
is enough to bound the truncation error of the series on any disc.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp

from .arith import DEFAULT_POLICY, ComplexScalar, Mode, Scalar, as_scalar, i_power, parse_rational
from .coefficients import CoefficientSet, coeffs_closed_form, coeffs_l1_norm, moment
from .errors import GeneratorHypothesisViolated, InvalidGenerator, InvalidPrecision, TailBoundUnavailable, UnsupportedMode
from .grids import FrequencyGrid
from .signals import TaylorReport

BUILTINS = ("exp", "cexp")


def _as_complex(v) -> ComplexScalar:
    if isinstance(v, ComplexScalar):
        return v
    if isinstance(v, (list, tuple)):
        re, im = v
        return ComplexScalar(Scalar(parse_rational(re)), Scalar(parse_rational(im)))
    return ComplexScalar.from_real(Scalar(parse_rational(v)) if not isinstance(v, Scalar) else v)


@dataclass(frozen=True)
class GeneratorSpec:
    """Power series of G at 0.

    ``series[p]`` holds g_p for p <= truncation_order.  ``tail_m`` and
    ``tail_r`` bound the rest; ``tail_m == 0`` means G is the polynomial
    given by ``series``.  Builtins generate coefficients on demand.
    """

    series: tuple = ()
    truncation_order: int | None = None
    tail_m: Fraction = Fraction(0)
    tail_r: Fraction = Fraction(0)
    builtin: str | None = None
    radius_of_use: Fraction | None = None

    def __post_init__(self):
        if self.builtin is not None:
            if self.builtin not in BUILTINS:
                raise InvalidGenerator(f"unknown builtin generator {self.builtin!r}")
            return
        if not self.series:
            raise InvalidGenerator("a series generator needs at least one coefficient")
        object.__setattr__(self, "series", tuple(_as_complex(v) for v in self.series))
        if self.truncation_order is None:
            object.__setattr__(self, "truncation_order", len(self.series) - 1)
        if self.truncation_order > len(self.series) - 1:
            raise InvalidGenerator("truncation_order exceeds the number of stored coefficients")
        if self.tail_m < 0 or self.tail_r < 0:
            raise InvalidGenerator("tail bound constants must be non-negative")

    @property
    def is_polynomial(self) -> bool:
        return self.builtin is None and self.tail_m == 0

    @property
    def bound(self):
        """(M, r) with |g_p| <= M r**p / p! past the stored coefficients."""
        if self.builtin is not None:
            return Fraction(1), Fraction(1)
        return Fraction(self.tail_m), Fraction(self.tail_r)

    def max_order(self):
        """Highest index with a known coefficient (None if unbounded)."""
        if self.builtin is not None or self.is_polynomial:
            return None
        return self.truncation_order

    def coefficient(self, p: int) -> ComplexScalar:
        """Exact g_p."""
        if self.builtin == "exp":
            return ComplexScalar.from_real(Scalar(Fraction(1, math.factorial(p))))
        if self.builtin == "cexp":
            return i_power(p) * Scalar(Fraction(1, math.factorial(p)))
        if p <= self.truncation_order:
            return self.series[p]
        if self.is_polynomial:
            return ComplexScalar(Scalar(0), Scalar(0))
        raise InvalidGenerator(f"coefficient g_{p} is beyond the truncation order {self.truncation_order}")

    def derivative_at_zero(self, p: int) -> ComplexScalar:
        return self.coefficient(p) * math.factorial(p)

    def degree(self):
        if not self.is_polynomial:
            return None
        return self.truncation_order

    def tail_bound(self, order: int, rho: Fraction):
        """Bound on sum_{p > order} |g_p| rho**p, or None if unavailable."""
        if self.is_polynomial and order >= self.truncation_order:
            return Fraction(0)
        m, r = self.bound
        t = r * rho
        if t >= order + 2:
            return None
        first = m * t ** (order + 1) / math.factorial(order + 1)
        return first / (1 - t / (order + 2))

    def to_dict(self) -> dict:
        if self.builtin is not None:
            return {"builtin": self.builtin}
        out = {
            "series": [
                str(c.re) if c.im.is_zero() else [str(c.re), str(c.im)] for c in self.series
            ],
            "truncation_order": self.truncation_order,
            "tail": {"M": str(self.tail_m), "r": str(self.tail_r)},
        }
        if self.radius_of_use is not None:
            out["radius_of_use"] = str(self.radius_of_use)
        return out


def exp_generator() -> GeneratorSpec:
    """G(z) = e^z, g_p = 1/p!."""
    return GeneratorSpec(builtin="exp")


def cexp_generator() -> GeneratorSpec:
    """G(z) = e^{iz}, g_p = i^p/p!; recovers plain superoscillations."""
    return GeneratorSpec(builtin="cexp")


def series_generator(coeffs, *, tail_m=0, tail_r=0, truncation_order=None, radius_of_use=None) -> GeneratorSpec:
    return GeneratorSpec(
        tuple(coeffs),
        truncation_order,
        parse_rational(tail_m),
        parse_rational(tail_r),
        None,
        None if radius_of_use is None else parse_rational(radius_of_use),
    )


_GENERATOR_KEYS = {"builtin", "series", "truncation_order", "tail", "radius_of_use"}


def generator_from_dict(doc: dict) -> GeneratorSpec:
    unknown = set(doc) - _GENERATOR_KEYS
    if unknown:
        raise InvalidGenerator(f"unknown generator fields: {sorted(unknown)}")
    if "builtin" in doc:
        return GeneratorSpec(builtin=doc["builtin"])
    tail = doc.get("tail", {})
    return series_generator(
        doc["series"],
        tail_m=tail.get("M", 0),
        tail_r=tail.get("r", 0),
        truncation_order=doc.get("truncation_order"),
        radius_of_use=doc.get("radius_of_use"),
    )


@dataclass(frozen=True)
class SupershiftSignal:
    grid: FrequencyGrid
    target_a: Scalar
    coeffs: CoefficientSet
    generator: GeneratorSpec

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def radius_of_use(self) -> Fraction:
        if self.generator.radius_of_use is not None:
            return self.generator.radius_of_use
        return 4 * max(abs(self.target_a.to_fraction()), Fraction(1))


@dataclass(frozen=True)
class BoundedValue:
    value: ComplexScalar
    error_bound: Scalar


def supershift_coeffs(grid: FrequencyGrid, a, gen: GeneratorSpec, *, certify=False) -> CoefficientSet:
    """Y_j = prod_{k != j} (h_k - a)/(h_k - h_j); does not depend on G.

    With ``certify`` the uniqueness hypothesis G^(p)(0) != 0 for p <= n is
    checked; a violation only warns.
    """
    coeffs = coeffs_closed_form(grid, a)
    if not certify:
        return coeffs
    vanishing = [p for p in range(grid.n + 1) if gen.coefficient(p).is_zero()]
    if not vanishing:
        return coeffs
    msg = f"G^(p)(0) = 0 for p in {vanishing}; the coefficients are not certified unique"
    warnings.warn(msg, GeneratorHypothesisViolated, stacklevel=2)
    return CoefficientSet(coeffs.grid, coeffs.target_a, coeffs.values, coeffs.method, coeffs.warnings + (msg,))


def supershift_signal(grid: FrequencyGrid, a, gen: GeneratorSpec, *, certify=False) -> SupershiftSignal:
    order = gen.max_order()
    if order is not None and order < grid.n:
        raise InvalidGenerator(f"generator known to order {order} cannot serve an order-{grid.n} grid")
    coeffs = supershift_coeffs(grid, a, gen, certify=certify)
    return SupershiftSignal(grid, coeffs.target_a, coeffs, gen)


def _round_up(q: Fraction, bits=64) -> Scalar:
    return Scalar._raw(libmp.from_rational(q.numerator, q.denominator, bits, libmp.round_up), bits)


def _upper(q: Fraction, bits=32) -> Fraction:
    # coarse rational upper bound, keeps tail arithmetic cheap
    return Fraction(math.ceil(q * 2**bits), 2**bits)


def _horner(gen, order, z, work):
    acc = gen.coefficient(order).round(work)
    for p in range(order - 1, -1, -1):
        acc = acc * z + gen.coefficient(p).round(work)
    return acc


def _horner_exact(gen, order, z):
    acc = gen.coefficient(order)
    for p in range(order - 1, -1, -1):
        acc = acc * z + gen.coefficient(p)
    return acc


def supershift_eval(sig: SupershiftSignal, x, bits=None, *, policy=DEFAULT_POLICY) -> BoundedValue:
    """sum_j Y_j G(h_j x) with a certified total error bound.

    G is summed from its truncated series; the truncation order is raised
    until the tail drops below 2**-work (builtins) or capped at the stored
    order (user series, whose tail is then folded into the bound).
    """
    x = as_scalar(x)
    gen = sig.generator
    hmax = max(abs(h.to_fraction()) for h in sig.grid.nodes)
    rho = hmax * abs(x.to_fraction())
    if not gen.is_polynomial and rho > sig.radius_of_use:
        raise TailBoundUnavailable(
            f"|h_j x| reaches {float(rho):.6g}, beyond the radius of use {sig.radius_of_use}",
            radius=sig.radius_of_use,
        )
    values = sig.coeffs.values

    if gen.is_polynomial and x.is_exact and sig.coeffs.mode is Mode.EXACT:
        total = ComplexScalar(Scalar(0), Scalar(0))
        for y, h in zip(values, sig.grid.nodes):
            total = total + y * _horner_exact(gen, gen.truncation_order, h * x)
        return BoundedValue(total, Scalar(0))

    bits = policy.base_bits if bits is None else bits
    if bits < 8:
        raise InvalidPrecision(f"need at least 8 bits, got {bits}")
    rho = _upper(rho)
    l1 = coeffs_l1_norm(sig.coeffs).to_fraction()
    m, r = gen.bound
    g_mag = m * Fraction(math.ceil(math.exp(float(r * rho)) + 1)) if not gen.is_polynomial else Fraction(0)
    if gen.is_polynomial:
        g_mag = sum((abs(gen.coefficient(p).re.to_fraction()) + abs(gen.coefficient(p).im.to_fraction())) * rho**p
                    for p in range(gen.truncation_order + 1))
    work = policy.working_bits(l1 * max(g_mag, Fraction(1)), bits)

    if gen.is_polynomial:
        order = gen.truncation_order
    elif gen.builtin is not None:
        order = max(sig.n, 1)
        target = Fraction(1, 2**work)
        while True:
            tail = gen.tail_bound(order, rho)
            if tail is not None and tail <= target:
                break
            order += 1
    else:
        order = gen.truncation_order
    tail = gen.tail_bound(order, rho)
    if tail is None:
        raise TailBoundUnavailable(f"tail bound fails to converge at order {order} for |z| <= {float(rho):.6g}")

    xw = x.round(work)
    total = ComplexScalar(Scalar(0, work), Scalar(0, work))
    for y, h in zip(values, sig.grid.nodes):
        z = h.round(work) * xw
        total = total + y.round(work) * _horner(gen, order, z, work)

    rounding = (order + 2) * (sig.n + 1) * l1 * max(g_mag, Fraction(1)) * Fraction(16, 2**work)
    bound = l1 * tail + rounding + Fraction(1, 2**bits)
    return BoundedValue(total.round(bits), _round_up(bound))


def supershift_taylor_check(sig: SupershiftSignal) -> TaylorReport:
    """r_p = sum_j Y_j h_j**p G^(p)(0) - a**p G^(p)(0), p = 0..n."""
    a = sig.target_a
    residuals = []
    for p in range(sig.n + 1):
        d = moment(sig.coeffs.values, sig.grid.nodes, p) - a**p
        residuals.append(sig.generator.derivative_at_zero(p) * d)
    residuals = tuple(residuals)
    exact = sig.coeffs.mode is Mode.EXACT and all(r.is_zero() for r in residuals)
    if all(r.is_zero() for r in residuals):
        max_abs = residuals[0].re * 0
    else:
        try:
            max_abs = max(abs(r) for r in residuals)
        except UnsupportedMode:
            max_abs = max(abs(r.round(DEFAULT_POLICY.base_bits)) for r in residuals)
    return TaylorReport(sig.n, residuals, max_abs, exact)
