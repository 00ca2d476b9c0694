"""Independent high-precision reference values.

Built on ``decimal`` and ``fractions`` only, so nothing here shares code
with the mpmath-backed evaluation path under test.
"""

from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb

DIGITS = 90  # ~299 bits


def to_dec(q):
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = DIGITS + 20
        return Decimal(q.numerator) / Decimal(q.denominator)


def _cos_sin(t):
    # plain Taylor series; callers keep |t| small
    c, s = Decimal(0), Decimal(0)
    term = Decimal(1)
    k = 0
    eps = Decimal(10) ** -(DIGITS + 5)
    while True:
        if k % 4 == 0:
            c += term
        elif k % 4 == 1:
            s += term
        elif k % 4 == 2:
            c -= term
        else:
            s -= term
        k += 1
        term = term * t / k
        if abs(term) < eps and k > 4:
            return c, s


def exp_real(t):
    total, term, k = Decimal(0), Decimal(1), 0
    eps = Decimal(10) ** -(DIGITS + 5)
    while abs(term) > eps or k < 4:
        total += term
        k += 1
        term = term * t / k
    return total


def lagrange_weights(nodes, a):
    nodes = [Fraction(h) for h in nodes]
    a = Fraction(a)
    out = []
    for j, hj in enumerate(nodes):
        w = Fraction(1)
        for k, hk in enumerate(nodes):
            if k != j:
                w *= (hk - a) / (hk - hj)
        out.append(w)
    return out


def binomial_weights(n, a):
    a = Fraction(a)
    return [comb(n, j) * ((1 + a) / 2) ** (n - j) * ((1 - a) / 2) ** j for j in range(n + 1)]


def uniform_nodes(n):
    return [1 - Fraction(2 * j, n) for j in range(n + 1)]


def fourier_sum(coeffs, freqs, x, p=0):
    """Return (re, im) of sum c_j (i h_j)^p exp(i h_j x) as Decimals."""
    with localcontext() as ctx:
        ctx.prec = DIGITS + 20
        x = to_dec(x)
        re, im = Decimal(0), Decimal(0)
        for c, h in zip(coeffs, freqs):
            hd = to_dec(h)
            cr = to_dec(c) * (hd ** p if p else 1)
            cos, sin = _cos_sin(hd * x)
            # multiply by i^p
            r, i = cr * cos, cr * sin
            for _ in range(p % 4):
                r, i = -i, r
            re += r
            im += i
        return +re, +im


def abs_err_vs_exp(coeffs, freqs, x, target):
    with localcontext() as ctx:
        ctx.prec = DIGITS + 20
        re, im = fourier_sum(coeffs, freqs, x)
        cos, sin = _cos_sin(to_dec(target) * to_dec(x))
        return ((re - cos) ** 2 + (im - sin) ** 2).sqrt()


def local_frequency(coeffs, freqs, x):
    with localcontext() as ctx:
        ctx.prec = DIGITS + 20
        fr, fi = fourier_sum(coeffs, freqs, x)
        dr, di = fourier_sum(coeffs, freqs, x, p=1)
        # Im(d/f) = (di*fr - dr*fi) / |f|^2
        return (di * fr - dr * fi) / (fr * fr + fi * fi)
