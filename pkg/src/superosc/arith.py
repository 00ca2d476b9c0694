"""Dual-backend scalars: exact rationals and fixed-precision binary floats.

Exact values wrap :class:`fractions.Fraction`.  Float values hold a raw
mpmath ``mpf`` tuple plus a precision in bits; every float operation goes
through ``mpmath.libmp`` with an explicit precision and round-to-nearest,
so results are correctly rounded and nothing depends on mpmath's global
context.

Mixing an exact Scalar with a float Scalar raises :class:`ModeMismatch`.
Plain ``int`` and ``Fraction`` literals are lifted into the mode of the
other operand.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from mpmath import libmp

from .errors import InvalidPrecision, ModeMismatch, UnsupportedMode

RND = libmp.round_nearest


class Mode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, integer or finite decimal text as an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, (int, float)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def ceil_log2(q) -> int:
    """Smallest k >= 0 with 2**k >= q (0 for q <= 1), computed exactly."""
    if isinstance(q, Scalar):
        q = q.to_fraction()
    q = Fraction(q)
    if q <= 1:
        return 0
    num, den = q.numerator, q.denominator
    k = max(num.bit_length() - den.bit_length() - 1, 0)
    while (den << k) < num:
        k += 1
    return k


def ceil_digits_to_bits(digits: int) -> int:
    """Smallest k with 2**k >= 10**digits."""
    if digits <= 0:
        return 0
    return ceil_log2(10 ** digits)


class Scalar:
    """A real number in exact or float mode; immutable."""

    __slots__ = ("_value", "_bits")

    def __init__(self, value, bits=None):
        if bits is None:
            if isinstance(value, tuple):
                raise UnsupportedMode("raw float value requires a precision")
            value = parse_rational(value)
        else:
            if bits < 2:
                raise InvalidPrecision(f"precision must be >= 2 bits, got {bits}")
            if not isinstance(value, tuple):
                q = parse_rational(value)
                value = libmp.from_rational(q.numerator, q.denominator, bits, RND)
        object.__setattr__(self, "_value", value)
        object.__setattr__(self, "_bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _raw(cls, value, bits):
        obj = object.__new__(cls)
        object.__setattr__(obj, "_value", value)
        object.__setattr__(obj, "_bits", bits)
        return obj

    def __reduce__(self):
        return (Scalar._raw, (self._value, self._bits))

    # -- introspection -------------------------------------------------

    @property
    def mode(self) -> Mode:
        return Mode.EXACT if self._bits is None else Mode.FLOAT

    @property
    def is_exact(self) -> bool:
        return self._bits is None

    @property
    def bits(self):
        return self._bits

    @property
    def raw(self):
        """The underlying Fraction (exact) or mpf tuple (float)."""
        return self._value

    def to_fraction(self) -> Fraction:
        """Exact rational value; for floats, the dyadic value actually stored."""
        if self._bits is None:
            return self._value
        p, q = libmp.to_rational(self._value)
        return Fraction(int(p), int(q))

    def round(self, bits: int) -> "Scalar":
        """Correctly rounded float copy at ``bits`` precision."""
        if bits < 2:
            raise InvalidPrecision(f"precision must be >= 2 bits, got {bits}")
        if self._bits is None:
            q = self._value
            return Scalar._raw(libmp.from_rational(q.numerator, q.denominator, bits, RND), bits)
        return Scalar._raw(libmp.mpf_pos(self._value, bits, RND), bits)

    def is_zero(self) -> bool:
        if self._bits is None:
            return self._value == 0
        return self._value == libmp.fzero

    def sign(self) -> int:
        if self._bits is None:
            return (self._value > 0) - (self._value < 0)
        return libmp.mpf_sign(self._value)

    def __float__(self):
        if self._bits is None:
            return float(self._value)
        return libmp.to_float(self._value)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        if self._bits is None:
            return str(self._value)
        return libmp.to_str(self._value, libmp.repr_dps(self._bits))

    def to_decimal_string(self, digits: int) -> str:
        """Decimal text with ``digits`` significant digits."""
        raw = self._value
        if self._bits is None:
            q = self._value
            raw = libmp.from_rational(q.numerator, q.denominator, ceil_digits_to_bits(digits) + 8, RND)
        return libmp.to_str(raw, digits)

    def __repr__(self):
        if self._bits is None:
            return f"Scalar({str(self._value)!r})"
        return f"Scalar({str(self)!r}, bits={self._bits})"

    # -- coercion ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if (self._bits is None) != (other._bits is None):
                raise ModeMismatch(f"cannot combine {self.mode.value} and {other.mode.value} scalars")
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            if self._bits is None:
                return Scalar._raw(Fraction(other), None)
            return Scalar(Fraction(other), self._bits)
        return None

    def _binop(self, other, exact_op, float_op, reflected=False):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = (other, self) if reflected else (self, other)
        if self._bits is None:
            return Scalar._raw(exact_op(a._value, b._value), None)
        bits = max(a._bits, b._bits)
        return Scalar._raw(float_op(a._value, b._value, bits, RND), bits)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        return self._binop(other, Fraction.__add__, libmp.mpf_add)

    def __radd__(self, other):
        return self._binop(other, Fraction.__add__, libmp.mpf_add, reflected=True)

    def __sub__(self, other):
        return self._binop(other, Fraction.__sub__, libmp.mpf_sub)

    def __rsub__(self, other):
        return self._binop(other, Fraction.__sub__, libmp.mpf_sub, reflected=True)

    def __mul__(self, other):
        return self._binop(other, Fraction.__mul__, libmp.mpf_mul)

    def __rmul__(self, other):
        return self._binop(other, Fraction.__mul__, libmp.mpf_mul, reflected=True)

    def __truediv__(self, other):
        other_s = self._coerce(other)
        if other_s is not None and other_s.is_zero():
            raise ZeroDivisionError("Scalar division by zero")
        return self._binop(other, Fraction.__truediv__, libmp.mpf_div)

    def __rtruediv__(self, other):
        if self.is_zero():
            raise ZeroDivisionError("Scalar division by zero")
        return self._binop(other, Fraction.__truediv__, libmp.mpf_div, reflected=True)

    def __neg__(self):
        if self._bits is None:
            return Scalar._raw(-self._value, None)
        return Scalar._raw(libmp.mpf_neg(self._value), self._bits)

    def __pos__(self):
        return self

    def __abs__(self):
        if self._bits is None:
            return Scalar._raw(abs(self._value), None)
        return Scalar._raw(libmp.mpf_abs(self._value), self._bits)

    def __pow__(self, k):
        # 0**0 == 1 in both modes
        if not isinstance(k, int):
            return NotImplemented
        if k < 0 and self.is_zero():
            raise ZeroDivisionError("zero to a negative power")
        if self._bits is None:
            return Scalar._raw(self._value ** k, None)
        if k < 0:
            return Scalar._raw(
                libmp.mpf_div(libmp.fone, libmp.mpf_pow_int(self._value, -k, self._bits + 10, RND), self._bits, RND),
                self._bits,
            )
        return Scalar._raw(libmp.mpf_pow_int(self._value, k, self._bits, RND), self._bits)

    def sqrt(self) -> "Scalar":
        if self._bits is None:
            raise UnsupportedMode("square roots are not rational in general")
        return Scalar._raw(libmp.mpf_sqrt(self._value, self._bits, RND), self._bits)

    # -- comparison ----------------------------------------------------

    def _cmp(self, other):
        other = self._coerce(other)
        if other is None:
            return None
        if self._bits is None:
            return (self._value > other._value) - (self._value < other._value)
        return libmp.mpf_cmp(self._value, other._value)

    def __eq__(self, other):
        if isinstance(other, Scalar) and (self._bits is None) != (other._bits is None):
            return False
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __hash__(self):
        if self._bits is None:
            return hash(self._value)
        return libmp.mpf_hash(self._value)

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0


def exact(value) -> Scalar:
    """Exact Scalar from an int, Fraction, float (its binary value) or text."""
    if isinstance(value, Scalar):
        if not value.is_exact:
            raise ModeMismatch("expected an exact scalar")
        return value
    return Scalar(value)


def as_scalar(value, bits=None) -> Scalar:
    """Coerce to a Scalar; exact unless ``bits`` is given."""
    if isinstance(value, Scalar):
        if bits is None or value.bits == bits:
            return value
        return value.round(bits)
    return Scalar(value, bits)


def to_float(s: Scalar, bits: int) -> Scalar:
    """Correctly rounded float of ``s`` at ``bits`` precision."""
    if bits < 2:
        raise InvalidPrecision(f"precision must be >= 2 bits, got {bits}")
    return as_scalar(s).round(bits)


def pi(bits: int) -> Scalar:
    return Scalar._raw(libmp.mpf_pi(bits, RND), bits)


def cos_sin(x: Scalar, bits: int):
    if x.is_exact:
        x = x.round(bits + 16)
    c, s = libmp.mpf_cos_sin(x.raw, bits, RND)
    return Scalar._raw(c, bits), Scalar._raw(s, bits)


def check_uniform_mode(values) -> Mode | None:
    """Return the shared mode of ``values``; raise ModeMismatch if mixed."""
    mode = None
    for v in values:
        if not isinstance(v, Scalar):
            continue
        if mode is None:
            mode = v.mode
        elif v.mode is not mode:
            raise ModeMismatch("values mix exact and float scalars")
    return mode


@dataclass(frozen=True)
class ComplexScalar:
    re: Scalar
    im: Scalar

    def __post_init__(self):
        re, im = self.re, self.im
        if not isinstance(re, Scalar):
            re = Scalar(re, im.bits if isinstance(im, Scalar) else None)
        if not isinstance(im, Scalar):
            im = Scalar(im, re.bits)
        if re.is_exact != im.is_exact:
            raise ModeMismatch("real and imaginary parts must share a mode")
        if not re.is_exact and re.bits != im.bits:
            bits = max(re.bits, im.bits)
            re, im = re.round(bits), im.round(bits)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def from_real(cls, x) -> "ComplexScalar":
        x = as_scalar(x)
        return cls(x, x * 0)

    @property
    def is_exact(self) -> bool:
        return self.re.is_exact

    @property
    def mode(self) -> Mode:
        return self.re.mode

    @property
    def bits(self):
        return self.re.bits

    def _lift(self, other):
        if isinstance(other, ComplexScalar):
            if other.is_exact != self.is_exact:
                raise ModeMismatch("cannot combine exact and float complex values")
            return other
        if isinstance(other, Scalar) or (isinstance(other, (int, Rational)) and not isinstance(other, bool)):
            re = self.re._coerce(other)
            return ComplexScalar(re, re * 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ComplexScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ComplexScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.is_exact:
            return ComplexScalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        bits = max(self.bits, o.bits)
        re, im = libmp.mpc_mul((self.re.raw, self.im.raw), (o.re.raw, o.im.raw), bits, RND)
        return ComplexScalar(Scalar._raw(re, bits), Scalar._raw(im, bits))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("complex division by zero")
        if self.is_exact:
            d = o.abs2()
            return ComplexScalar((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)
        bits = max(self.bits, o.bits)
        re, im = libmp.mpc_div((self.re.raw, self.im.raw), (o.re.raw, o.im.raw), bits, RND)
        return ComplexScalar(Scalar._raw(re, bits), Scalar._raw(im, bits))

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ComplexScalar(-self.re, -self.im)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        if self.is_exact:
            out = ComplexScalar(Scalar(1), Scalar(0))
            base = self
            while k:
                if k & 1:
                    out = out * base
                base = base * base
                k >>= 1
            return out
        re, im = libmp.mpc_pow_int((self.re.raw, self.im.raw), k, self.bits, RND)
        return ComplexScalar(Scalar._raw(re, self.bits), Scalar._raw(im, self.bits))

    def conjugate(self) -> "ComplexScalar":
        return ComplexScalar(self.re, -self.im)

    def abs2(self) -> Scalar:
        """|z|**2, exact in exact mode."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> Scalar:
        if self.is_exact:
            if self.im.is_zero():
                return abs(self.re)
            if self.re.is_zero():
                return abs(self.im)
            raise UnsupportedMode("|z| of an exact complex value is not rational in general; use abs2()")
        return Scalar._raw(libmp.mpc_abs((self.re.raw, self.im.raw), self.bits, RND), self.bits)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def round(self, bits: int) -> "ComplexScalar":
        return ComplexScalar(self.re.round(bits), self.im.round(bits))

    def __str__(self):
        sign = "-" if self.im.sign() < 0 else "+"
        return f"{self.re} {sign} {abs(self.im)}i"


def imag_unit() -> ComplexScalar:
    return ComplexScalar(Scalar(0), Scalar(1))


def i_power(p: int) -> ComplexScalar:
    """Exact i**p."""
    return [
        ComplexScalar(Scalar(1), Scalar(0)),
        ComplexScalar(Scalar(0), Scalar(1)),
        ComplexScalar(Scalar(-1), Scalar(0)),
        ComplexScalar(Scalar(0), Scalar(-1)),
    ][p % 4]


def complex_exp(z: ComplexScalar, bits: int) -> ComplexScalar:
    """e**z at ``bits`` precision."""
    if z.is_exact:
        raise UnsupportedMode("exponentials of exact values are not rational")
    if bits < 8:
        raise InvalidPrecision(f"complex_exp needs at least 8 bits, got {bits}")
    re, im = libmp.mpc_exp((z.re.raw, z.im.raw), bits, RND)
    return ComplexScalar(Scalar._raw(re, bits), Scalar._raw(im, bits))


def expi(theta: Scalar, bits: int) -> ComplexScalar:
    """e**(i*theta) for real theta."""
    c, s = cos_sin(theta, bits)
    return ComplexScalar(c, s)


@dataclass(frozen=True)
class PrecisionPolicy:
    """How working precision is chosen for evaluating cancelling sums.

    ``working_bits = max(bits, base_bits) + guard_bits + ceil(log2(l1))``
    where ``l1`` bounds the sum of coefficient magnitudes.
    """

    base_bits: int = 128
    guard_bits: int = 32
    min_significant_bits: int = 16

    def __post_init__(self):
        if self.base_bits < 8:
            raise InvalidPrecision(f"base_bits must be >= 8, got {self.base_bits}")
        if self.guard_bits < 0:
            raise InvalidPrecision("guard_bits must be non-negative")

    @classmethod
    def from_env(cls, var="SUPEROSC_BITS", **kwargs) -> "PrecisionPolicy":
        text = os.environ.get(var)
        if text:
            try:
                kwargs["base_bits"] = int(text)
            except ValueError as exc:
                raise InvalidPrecision(f"{var} must be an integer, got {text!r}") from exc
        return cls(**kwargs)

    def working_bits(self, l1=1, bits=None) -> int:
        target = self.base_bits if bits is None else max(bits, self.base_bits)
        return target + self.guard_bits + ceil_log2(l1)

    def minimum_bits(self, l1=1) -> int:
        # below this, cancellation leaves fewer than min_significant_bits
        return ceil_log2(l1) + self.min_significant_bits


DEFAULT_POLICY = PrecisionPolicy()
