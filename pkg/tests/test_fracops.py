import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import magnitude, power_sums
from fracleib.errors import DomainError
from fracleib.fracops import caputo_derivative, frac_diffint, gl_derivative, rl_derivative, rl_integral
from fracleib.funclass import ONE, X, ZERO, PowerSum, add, classical_derivative, monomial, sample, scale

SQRT_PI = math.sqrt(math.pi)
PTS = np.linspace(0.2, 5, 20)


def _mp_eval(f: PowerSum, t):
    return sum(mpmath.mpf(c) * t ** mpmath.mpf(b) for c, b in f.terms)


def _kernel_quad(func, mu, x):
    # int_0^x (x - t)^(mu - 1) func(t) dt with s = (x - t)^mu, which removes the kernel
    # singularity: (1/mu) int_0^(x^mu) func(x - s^(1/mu)) ds
    def integrand(s):
        t = x - s ** (1 / mu)
        # t <= 0 only through rounding at the endpoint; a single point of an integrable integrand
        return func(t) if t > 0 else 0

    return mpmath.quad(integrand, [0, x**mu]) / mu


def rl_integral_quad(f: PowerSum, mu: float, x: float) -> float:
    """(1/Gamma(mu)) int_0^x (x - t)^(mu - 1) f(t) dt by tanh-sinh quadrature."""
    with mpmath.workdps(30):
        mu, x = mpmath.mpf(mu), mpmath.mpf(x)
        return float(_kernel_quad(lambda t: _mp_eval(f, t), mu, x) / mpmath.gamma(mu))


def rl_derivative_quad(f: PowerSum, alpha: float, x: float) -> float:
    """f(0) x^-alpha / Gamma(1 - alpha) + I^(1 - alpha) f', for alpha in (0, 1) and f(0) finite."""
    df = classical_derivative(f)
    with mpmath.workdps(30):
        a, x = mpmath.mpf(alpha), mpmath.mpf(x)
        boundary = mpmath.mpf(f.value_at_zero()) * x ** (-a) / mpmath.gamma(1 - a)
        return float(boundary + _kernel_quad(lambda t: _mp_eval(df, t), 1 - a, x) / mpmath.gamma(1 - a))


def test_rl_derivative_examples():
    d1 = rl_derivative(ONE, 0.5)
    assert d1.terms[0].exponent == -0.5
    assert d1(1.0) == pytest.approx(0.5641895835477563, rel=1e-15)
    assert d1(1.0) == pytest.approx(1 / SQRT_PI, rel=1e-15)
    dx = rl_derivative(X, 0.5)
    assert dx(1.0) == pytest.approx(1.1283791670955126, rel=1e-15)
    assert rl_derivative(monomial(1, 2), 1) == monomial(2, 1)


@pytest.mark.parametrize("f", [ONE, X, monomial(1, 2.5), PowerSum([(1, 0), (-2, 0.5), (3, 1.7)])])
@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_rl_derivative_against_quadrature(f, alpha):
    for x in (0.7, 1.9):
        assert rl_derivative(f, alpha)(x) == pytest.approx(rl_derivative_quad(f, alpha, x), rel=1e-12)


@pytest.mark.parametrize("mu", [0.3, 0.5, 1.0, 1.7])
def test_rl_integral_against_quadrature(mu):
    f = PowerSum([(1, 0), (-2, 0.5), (3, 2)])
    for x in (0.5, 2.0):
        assert rl_integral(f, mu)(x) == pytest.approx(rl_integral_quad(f, mu, x), rel=1e-12)


def test_rl_integral_examples():
    assert rl_integral(ONE, 1)(2.0) == pytest.approx(2.0, rel=1e-15)
    assert rl_integral(ONE, 1) == X
    half = rl_integral(X, 1)
    assert half.terms == ((0.5, 2.0),)
    i_half = rl_integral(ONE, 0.5)
    assert i_half.terms[0].exponent == 0.5
    assert i_half.terms[0].coeff == pytest.approx(1 / math.gamma(1.5), rel=1e-15)
    # two half-integrals make one full integral
    assert rl_integral(i_half, 0.5)(PTS) == pytest.approx(X(PTS), rel=1e-14)


def test_rl_integral_rejects_bad_order():
    for mu in (0.0, -1.0, math.inf):
        with pytest.raises(DomainError):
            rl_integral(ONE, mu)


def test_domain_errors_name_the_term():
    with pytest.raises(DomainError, match=r"x\^-1"):
        rl_derivative(PowerSum([(1, 0), (2.0, -1.0)]), 0.5)
    with pytest.raises(DomainError):
        rl_integral(monomial(1, -1.5), 0.5)


@pytest.mark.parametrize("alpha", [0.0, 2.0, -0.5, 2.5])
def test_rl_derivative_order_range(alpha):
    with pytest.raises(DomainError):
        rl_derivative(X, alpha)


def test_frac_diffint():
    f = PowerSum([(1, 0.5), (2, 3)])
    assert frac_diffint(f, 0) == f
    assert frac_diffint(ONE, -0.5) == rl_integral(ONE, 0.5)
    assert frac_diffint(X, 0.5) == rl_derivative(X, 0.5)
    assert frac_diffint(X, 0.5)(1.0) == pytest.approx(1 / math.gamma(1.5), rel=1e-15)


def test_caputo_examples():
    assert caputo_derivative(ONE, 0.5) == ZERO
    assert caputo_derivative(X, 0.5) == rl_derivative(X, 0.5)
    for c in (-3.0, 0.0, 7.5):
        f = PowerSum([(c, 0), (1, 2)])
        assert caputo_derivative(f, 0.5) == rl_derivative(monomial(1, 2), 0.5)


def test_caputo_domain():
    with pytest.raises(DomainError, match="Caputo"):
        caputo_derivative(monomial(1, -0.5), 0.5)
    with pytest.raises(DomainError):
        caputo_derivative(X, 1.5)
    assert caputo_derivative(monomial(1, 2), 1.0) == monomial(2, 1)


def test_kernel_of_rl_derivative():
    # x^(alpha - 1) is annihilated; exact zero through the reciprocal Gamma
    assert rl_derivative(monomial(1, 0.5), 1.5) == ZERO
    assert rl_derivative(monomial(1, 0.3), 1.3) == ZERO


@given(power_sums(lo=-0.9), st.sampled_from([0.3, 0.5, 1.0]), st.sampled_from([0.3, 0.5, 1.0]))
@settings(max_examples=150, deadline=None)
def test_integral_semigroup(f, a, b):
    lhs = rl_integral(rl_integral(f, a), b)
    rhs = rl_integral(f, a + b)
    scale_ = magnitude(rl_integral(PowerSum([(abs(c), e) for c, e in f.terms]), a + b), PTS)
    assert np.all(np.abs(lhs(PTS) - rhs(PTS)) <= 1e-11 * scale_)


@given(power_sums(lo=-0.9), st.sampled_from([0.3, 0.5, 1.5]))
@settings(max_examples=150, deadline=None)
def test_left_inverse(f, alpha):
    back = rl_derivative(rl_integral(f, alpha), alpha)
    assert np.all(np.abs(back(PTS) - f(PTS)) <= 1e-11 * magnitude(f, PTS))


@given(power_sums(lo=-0.9))
@settings(max_examples=200, deadline=None)
def test_integer_consistency(f):
    lhs = rl_derivative(f, 1.0)
    rhs = classical_derivative(f)
    assert np.all(np.abs(lhs(PTS) - rhs(PTS)) <= 1e-13 * magnitude(rhs, PTS) + 1e-300)
    assert lhs.exponents == rhs.exponents


OPS = [
    lambda f: rl_derivative(f, 0.5),
    lambda f: rl_derivative(f, 1.5),
    lambda f: rl_integral(f, 0.7),
    lambda f: caputo_derivative(f, 0.5),
]


@pytest.mark.parametrize("op", OPS)
@given(f=power_sums(lo=0.0), g=power_sums(lo=0.0), c1=st.floats(-3, 3), c2=st.floats(-3, 3))
@settings(max_examples=60, deadline=None)
def test_linearity(op, f, g, c1, c2):
    lhs = op(add(scale(c1, f), scale(c2, g)))(PTS)
    rhs = c1 * op(f)(PTS) + c2 * op(g)(PTS)
    bound = abs(c1) * magnitude(op(f), PTS) + abs(c2) * magnitude(op(g), PTS)
    # constants dropped by Caputo make magnitude(op(f)) a valid scale for both sides
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * (bound + 1.0))


def test_gl_examples():
    h, n = 0.01, 200
    d = gl_derivative(sample(ONE, h, n), 1.0)
    assert d.values[0] == pytest.approx(1 / h)
    np.testing.assert_allclose(d.values[1:], 0.0, atol=1e-12)
    e = gl_derivative(sample(X, h, n), 1.0)
    np.testing.assert_allclose(e.values[1:], 1.0, rtol=1e-11)
    g = gl_derivative(sample(ONE, 1e-3, 1000), 0.5)
    assert g.at(1.0) == pytest.approx(0.5641895835, abs=1e-3)


def test_gl_matches_direct_sum():
    rng = np.random.default_rng(7)
    vals = rng.normal(size=40)
    from fracleib.funclass import GridFunction
    from fracleib.specfun import gen_binom

    h, alpha = 0.05, 0.6
    out = gl_derivative(GridFunction(h, vals), alpha).values
    for n in range(40):
        direct = sum((-1) ** k * gen_binom(alpha, k) * vals[n - k] for k in range(n + 1)) * h**-alpha
        assert out[n] == pytest.approx(direct, rel=1e-12, abs=1e-12)


def test_gl_fft_path_matches_direct():
    f = PowerSum([(1, 0), (1, 1.5)])
    from fracleib import fracops

    h = 1e-4
    long = gl_derivative(sample(f, h, 20000), 0.5)  # FFT branch
    short = gl_derivative(sample(f, h, 10000), 0.5)  # direct branch
    np.testing.assert_allclose(long.values[:10001], short.values, rtol=1e-9, atol=1e-9)
    assert 20001 > fracops._DIRECT_GL_LIMIT >= 10001


@pytest.mark.parametrize("f", [ONE, X, monomial(1, 2)])
def test_gl_converges_to_rl(f):
    exact = rl_derivative(f, 0.5)(1.0)
    errs = []
    hs = [1e-2, 5e-3, 2.5e-3, 1.25e-3, 1e-3, 5e-4, 2.5e-4, 1e-4]
    for h in hs:
        n = round(1 / h)
        errs.append(abs(gl_derivative(sample(f, h, n), 0.5).at(1.0) - exact))
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    order = math.log(errs[0] / errs[-1]) / math.log(hs[0] / hs[-1])
    assert order >= 0.8
