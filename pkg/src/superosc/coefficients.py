"""Coefficient sets for band-limited exponential sums.

Three constructions:

* ``coeffs_closed_form`` -- the Lagrange-type product
  ``X_j = prod_{k != j} (h_k - a) / (h_k - h_j)``.
* ``coeffs_vandermonde_solve`` -- solves ``sum_j X_j h_j**p = a**p``
  (p = 0..n) by fraction-free elimination; an independent oracle for the
  product formula.
* ``coeffs_binomial`` -- the classical ``C_j(n, a)`` weights of
  ``(cos(x/n) + i a sin(x/n))**n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp

from .arith import Mode, Scalar, as_scalar, ceil_log2, parse_rational
from .errors import ModeMismatch, SingularSystem, UnsupportedMode
from .grids import FrequencyGrid, grid_from_dict, grid_uniform_linear


class Method(enum.Enum):
    CLOSED_FORM = "closed-form"
    VANDERMONDE = "vandermonde-solve"
    BINOMIAL = "binomial"


@dataclass(frozen=True)
class CoefficientSet:
    grid: FrequencyGrid
    target_a: Scalar
    values: tuple
    method: Method
    warnings: tuple = ()

    def __post_init__(self):
        if len(self.values) != len(self.grid.nodes):
            raise ValueError(f"expected {len(self.grid.nodes)} coefficients, got {len(self.values)}")

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def mode(self) -> Mode:
        return self.values[0].mode

    @property
    def superoscillatory(self) -> bool:
        """True when |a| > 1 and every node lies in [-1, 1]."""
        return abs(self.target_a) > 1 and self.grid.band_limited

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)

    def to_dict(self) -> dict:
        out = {
            "grid": self.grid.to_dict(),
            "a": str(self.target_a),
            "method": self.method.value,
            "values": [str(v) for v in self.values],
        }
        if self.mode is Mode.FLOAT:
            out["bits"] = self.values[0].bits
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def coeffs_from_dict(doc: dict) -> CoefficientSet:
    grid = grid_from_dict(doc["grid"])
    bits = doc.get("bits")
    if bits is None:
        values = tuple(Scalar(parse_rational(v)) for v in doc["values"])
        a = Scalar(parse_rational(doc["a"]))
    else:
        values = tuple(Scalar._raw(libmp.from_str(v, bits, libmp.round_nearest), bits) for v in doc["values"])
        a = Scalar._raw(libmp.from_str(doc["a"], bits, libmp.round_nearest), bits)
    return CoefficientSet(grid, a, values, Method(doc["method"]), tuple(doc.get("warnings", ())))


def _target(grid: FrequencyGrid, a) -> Scalar:
    # numeric literals are lifted into the grid's mode; Scalars must match it
    if isinstance(a, Scalar):
        if a.mode is not grid.mode:
            raise ModeMismatch(f"target a is {a.mode.value} but grid is {grid.mode.value}")
        return a
    a = parse_rational(a)
    return Scalar(a) if grid.mode is Mode.EXACT else Scalar(a, grid.bits)


def coeffs_closed_form(grid: FrequencyGrid, a) -> CoefficientSet:
    """X_j(n, a) = prod_{k != j} (h_k - a) / (h_k - h_j).

    Works for any finite ``a``; ``a = h_m`` gives the unit vector e_m.
    In float mode numerator and denominator are accumulated separately at
    a few extra bits and divided once.
    """
    a = _target(grid, a)
    nodes = grid.nodes
    if grid.mode is Mode.EXACT:
        hs = [h.raw for h in nodes]
        av = a.raw
        values = []
        for j, hj in enumerate(hs):
            num = Fraction(1)
            den = Fraction(1)
            for k, hk in enumerate(hs):
                if k != j:
                    num *= hk - av
                    den *= hk - hj
            values.append(Scalar(num / den))
        return CoefficientSet(grid, a, tuple(values), Method.CLOSED_FORM)

    bits = grid.bits
    work = bits + 8 + ceil_log2(2 * len(nodes))
    hs = [h.round(work) for h in nodes]
    aw = a.round(work)
    one = Scalar(1, work)
    values = []
    for j, hj in enumerate(hs):
        num, den = one, one
        for k, hk in enumerate(hs):
            if k != j:
                num = num * (hk - aw)
                den = den * (hk - hj)
        values.append((num / den).round(bits))
    return CoefficientSet(grid, a, tuple(values), Method.CLOSED_FORM)


def _bareiss_solve(matrix):
    """Solve an integer augmented system [A | b] by Bareiss elimination.

    Returns the exact Fraction solution; raises SingularSystem.
    """
    m = [row[:] for row in matrix]
    size = len(m)
    prev = 1
    for k in range(size):
        if m[k][k] == 0:
            for r in range(k + 1, size):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    break
            else:
                raise SingularSystem(f"zero pivot in column {k}")
        pivot = m[k][k]
        for i in range(k + 1, size):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, size + 1):
                # exact division is guaranteed by Sylvester's identity
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    x = [Fraction(0)] * size
    for i in range(size - 1, -1, -1):
        acc = Fraction(m[i][size])
        for j in range(i + 1, size):
            acc -= m[i][j] * x[j]
        x[i] = acc / m[i][i]
    return x


def _float_solve(matrix, rhs, bits):
    # partial pivoting Gaussian elimination on float Scalars
    size = len(matrix)
    m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for k in range(size):
        piv = max(range(k, size), key=lambda r: abs(m[r][k]))
        if m[piv][k].is_zero():
            raise SingularSystem(f"numerically singular Vandermonde matrix at column {k}")
        m[k], m[piv] = m[piv], m[k]
        for i in range(k + 1, size):
            f = m[i][k] / m[k][k]
            for j in range(k, size + 1):
                m[i][j] = m[i][j] - f * m[k][j]
    x = [None] * size
    for i in range(size - 1, -1, -1):
        acc = m[i][size]
        for j in range(i + 1, size):
            acc = acc - m[i][j] * x[j]
        x[i] = (acc / m[i][i]).round(bits)
    return x


def coeffs_vandermonde_solve(grid: FrequencyGrid, a, *, allow_float=False) -> CoefficientSet:
    """Solve H(n) X = B(a) with rows (h_0**p, ..., h_n**p), p = 0..n.

    Exact grids are scaled to an integer system and solved fraction-free.
    Float grids are refused unless ``allow_float`` is set, since
    Vandermonde matrices on these nodes are badly conditioned; this is a
    verification path, not the production one.
    """
    a = _target(grid, a)
    size = len(grid.nodes)
    if grid.mode is Mode.FLOAT:
        if not allow_float:
            raise UnsupportedMode("the Vandermonde solve is exact by default; pass allow_float=True")
        matrix = [[h**p for h in grid.nodes] for p in range(size)]
        rhs = [a**p for p in range(size)]
        values = _float_solve(matrix, rhs, grid.bits)
        return CoefficientSet(grid, a, tuple(values), Method.VANDERMONDE)

    hs = [h.raw for h in grid.nodes]
    av = a.raw
    scale = math.lcm(*(q.denominator for q in hs), av.denominator)
    us = [int(h * scale) for h in hs]
    alpha = int(av * scale)
    # row p multiplied by scale**p
    matrix = [[u**p for u in us] + [alpha**p] for p in range(size)]
    values = _bareiss_solve(matrix)
    return CoefficientSet(grid, a, tuple(Scalar(v) for v in values), Method.VANDERMONDE)


def coeffs_binomial(n: int, a) -> CoefficientSet:
    """C_j(n, a) = binom(n, j) ((1 + a)/2)**(n - j) ((1 - a)/2)**j on 1 - 2j/n."""
    grid = grid_uniform_linear(n)
    if isinstance(a, Scalar) and not a.is_exact:
        grid = grid.to_float(a.bits)
    a = _target(grid, a)
    up = (1 + a) / 2
    down = (1 - a) / 2
    values = tuple(math.comb(n, j) * up ** (n - j) * down**j for j in range(n + 1))
    return CoefficientSet(grid, a, values, Method.BINOMIAL)


def tuned_binomial(n: int, a, m: int) -> CoefficientSet:
    """C~_j(n, a) := C_j(n, a**m): uniform frequencies, limit e^{i a^m x}."""
    a = as_scalar(a)
    return coeffs_binomial(n, a**m)


def coeffs_l1_norm(c: CoefficientSet) -> Scalar:
    """sum_j |c_j|; exact for exact coefficients."""
    total = c.values[0] * 0
    for v in c.values:
        total = total + abs(v)
    return total


def moment(values, freqs, p: int):
    """sum_j c_j h_j**p (0**0 == 1)."""
    total = values[0] * 0
    for c, h in zip(values, freqs):
        total = total + c * h**p
    return total
