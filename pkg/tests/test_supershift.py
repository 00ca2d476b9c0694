import math
import random
import warnings
from decimal import Decimal, localcontext
from fractions import Fraction as F

import pytest

from superosc.arith import ComplexScalar, Scalar
from superosc.coefficients import coeffs_closed_form
from superosc.errors import GeneratorHypothesisViolated, InvalidGenerator, TailBoundUnavailable
from superosc.grids import grid_custom, grid_power_numerator, grid_uniform_linear
from superosc.signals import eval, new_method
from superosc.supershift import (
    cexp_generator,
    exp_generator,
    generator_from_dict,
    series_generator,
    supershift_coeffs,
    supershift_eval,
    supershift_signal,
    supershift_taylor_check,
)

import oracle


def vals(c):
    return [v.raw for v in c.values]


def test_exp_series_coefficients():
    gen = exp_generator()
    assert [gen.coefficient(p).re.raw for p in range(5)] == [1, 1, F(1, 2), F(1, 6), F(1, 24)]
    assert gen.coefficient(3).im.is_zero()
    assert cexp_generator().coefficient(3) == ComplexScalar(Scalar(0), Scalar(F(-1, 6)))


@pytest.mark.parametrize(
    "nodes, a, expected",
    [([1, -1], 2, [F(3, 2), F(-1, 2)]), ([1, 0, -1], 1, [1, 0, 0])],
)
def test_supershift_coeffs_examples(nodes, a, expected):
    assert vals(supershift_coeffs(grid_custom(nodes), a, exp_generator())) == expected


def test_hypothesis_violation_warns_but_builds():
    gen = series_generator([1, 1, 0, 1])
    with pytest.warns(GeneratorHypothesisViolated):
        c = supershift_coeffs(grid_custom([1, 0, -1]), 2, gen, certify=True)
    assert vals(c) == [3, -3, 1] and c.warnings
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        supershift_coeffs(grid_custom([1, 0, -1]), 2, gen)


def test_generator_independence():
    g = grid_power_numerator(5, 2)
    gens = [exp_generator(), cexp_generator(), series_generator([1, 2, 3, 4, 5, 6]),
            series_generator([F(1, 2)] * 8, tail_m=1, tail_r=3)]
    ref = vals(coeffs_closed_form(g, F(7, 3)))
    for gen in gens:
        assert vals(supershift_coeffs(g, F(7, 3), gen)) == ref


def test_eval_at_zero():
    sig = supershift_signal(grid_custom([1, -1]), 2, exp_generator())
    assert supershift_eval(sig, 0, 128).value == ComplexScalar(Scalar(1, 128), Scalar(0, 128))


def test_real_exponential_matches_oracle():
    sig = supershift_signal(grid_custom([1, 0, -1]), 2, exp_generator())
    r = supershift_eval(sig, F(1, 4), 128)
    with localcontext() as ctx:
        ctx.prec = 90
        ref = 3 * oracle.exp_real(Decimal("0.25")) - 3 + oracle.exp_real(Decimal("-0.25"))
        assert abs(oracle.to_dec(r.value.re.to_fraction()) - ref) < Decimal(2) ** -120
    assert r.value.im.is_zero()
    assert r.error_bound.to_fraction() < F(1, 2**120)


def test_linear_generator_reproduces_exactly():
    gen = series_generator([1, 1])
    for nodes, a in (([1, -1], 2), ([1, F(1, 3), F(-1, 2)], F(-5, 2))):
        sig = supershift_signal(grid_custom(nodes), a, gen)
        for x in (F(1, 3), F(-7, 2)):
            r = supershift_eval(sig, x)
            assert r.value == ComplexScalar(Scalar(1 + F(a) * x), Scalar(0)) and r.error_bound == 0


def test_tail_bound_unavailable():
    sig = supershift_signal(grid_uniform_linear(3), 2, exp_generator())
    with pytest.raises(TailBoundUnavailable):
        supershift_eval(sig, 100, 128)


def test_user_series_tail_is_reported():
    # truncated e^z with its exact tail constants
    gen = series_generator([F(1, math.factorial(p)) for p in range(12)], tail_m=1, tail_r=1)
    sig = supershift_signal(grid_custom([1, 0, -1]), 2, gen)
    r = supershift_eval(sig, F(1, 4), 128)
    exact = supershift_eval(supershift_signal(grid_custom([1, 0, -1]), 2, exp_generator()), F(1, 4), 128)
    assert abs(r.value - exact.value).to_fraction() <= r.error_bound.to_fraction()
    assert r.error_bound.to_fraction() > F(1, 2**100)


def test_short_series_rejected_for_high_order_grid():
    with pytest.raises(InvalidGenerator):
        supershift_signal(grid_uniform_linear(5), 2, series_generator([1, 1, 1], tail_m=1, tail_r=1))


def test_reduction_to_superoscillation():
    rng = random.Random(5)
    g = grid_uniform_linear(9)
    sig = supershift_signal(g, F(5, 2), cexp_generator())
    plain = new_method(g, F(5, 2))
    for _ in range(5):
        x = F(rng.uniform(-1, 1))
        assert abs(supershift_eval(sig, x, 128).value - eval(plain, x, 128)).to_fraction() <= F(1, 2**100)


@pytest.mark.parametrize("gen", [exp_generator(), cexp_generator(), series_generator([1, 0, 2, 0, 3])])
def test_taylor_check_exact(gen):
    sig = supershift_signal(grid_custom([1, 0, -1]), 2, gen)
    r = supershift_taylor_check(sig)
    assert r.exact and r.max_abs == 0


def test_taylor_check_hand_case():
    sig = supershift_signal(grid_custom([1, -1]), 3, exp_generator())
    assert vals(sig.coeffs) == [2, -1]
    assert supershift_taylor_check(sig).exact


def test_generator_json_round_trip():
    for gen in (exp_generator(), cexp_generator(), series_generator([1, ["0", "1/2"], "3/4"], tail_m=2, tail_r=1)):
        assert generator_from_dict(gen.to_dict()) == gen


def test_generator_unknown_fields_rejected():
    with pytest.raises(InvalidGenerator):
        generator_from_dict({"series": ["1"], "tail_m": "1"})
