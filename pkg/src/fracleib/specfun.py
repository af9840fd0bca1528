"""Gamma function, reciprocal Gamma and generalized binomial coefficients.

The Gamma function uses the Lanczos rational approximation with
``g = 6.024680040776729583740234375`` and 13 terms (the coefficient set
used by CPython's ``math.gamma``), combined with the reflection formula
for negative arguments. Positive integers up to 23 are read from an
exact factorial table. Relative accuracy is a few ulps on [-50, 50].
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, PoleError

__all__ = ["gamma", "rgamma", "rgamma_shifted", "gen_binom", "gen_binom_recurrence", "gl_weights", "sinpi"]

_LANCZOS_G = 6.024680040776729583740234375
_LANCZOS_G_MINUS_HALF = 5.524680040776729583740234375

_LANCZOS_NUM = (
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408,
)

# Coefficients of x(x+1)...(x+11), lowest degree first.
_LANCZOS_DEN = (
    0.0, 39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0,
    13339535.0, 2637558.0, 357423.0, 32670.0, 1925.0, 66.0, 1.0,
)

_FACTORIALS = tuple(float(math.factorial(n)) for n in range(23))


def _lanczos_sum(x: float) -> float:
    # Horner in x for small x, in 1/x for large x to avoid overflow.
    num = 0.0
    den = 0.0
    if x < 5.0:
        for a, b in zip(reversed(_LANCZOS_NUM), reversed(_LANCZOS_DEN)):
            num = num * x + a
            den = den * x + b
    else:
        for a, b in zip(_LANCZOS_NUM, _LANCZOS_DEN):
            num = num / x + a
            den = den / x + b
    return num / den


def sinpi(x: float) -> float:
    """sin(pi*x) with exact argument reduction modulo 2."""
    y = math.fmod(abs(x), 2.0)
    n = round(2.0 * y)
    if n == 0:
        r = math.sin(math.pi * y)
    elif n == 1:
        r = math.cos(math.pi * (y - 0.5))
    elif n == 2:
        r = math.sin(math.pi * (1.0 - y))
    elif n == 3:
        r = -math.cos(math.pi * (y - 1.5))
    else:
        r = math.sin(math.pi * (y - 2.0))
    return math.copysign(1.0, x) * r


def _is_pole(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Raises :class:`PoleError` at 0, -1, -2, ...  Returns ``inf`` when the
    result overflows and a signed zero when it underflows.
    """
    x = float(x)
    if math.isnan(x):
        return math.nan
    if math.isinf(x):
        if x > 0:
            return math.inf
        raise DomainError("gamma(-inf) is undefined")
    if _is_pole(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    if x == math.floor(x) and x <= len(_FACTORIALS):
        return _FACTORIALS[int(x) - 1]

    absx = abs(x)
    if absx < 1e-20:
        return 1.0 / x
    if absx > 200.0:
        if x > 0:
            return math.inf
        # |Gamma| underflows; its sign is that of sin(pi x).
        return math.copysign(0.0, sinpi(x))

    y = absx + _LANCZOS_G_MINUS_HALF
    # Correction for the rounding error made when forming y.
    if absx > _LANCZOS_G_MINUS_HALF:
        q = y - absx
        z = q - _LANCZOS_G_MINUS_HALF
    else:
        q = y - _LANCZOS_G_MINUS_HALF
        z = q - absx
    z = z * _LANCZOS_G / y

    if x < 0.0:
        r = -math.pi / sinpi(absx) / absx * math.exp(y) / _lanczos_sum(absx)
        r -= z * r
        if absx < 140.0:
            r /= y ** (absx - 0.5)
        else:
            half = y ** (absx / 2.0 - 0.25)
            r /= half
            r /= half
    else:
        r = _lanczos_sum(absx) / math.exp(y)
        r += z * r
        if absx < 140.0:
            r *= y ** (absx - 0.5)
        else:
            half = y ** (absx / 2.0 - 0.25)
            r *= half
            r *= half
    return r


def rgamma(x: float) -> float:
    """Reciprocal Gamma, 1/Gamma(x).

    Entire: exactly ``0.0`` at the non-positive integers, so integer-order
    limits of the power rules come out as exact zeros.
    """
    x = float(x)
    if _is_pole(x):
        return 0.0
    g = gamma(x)
    if g == 0.0:
        # Only reachable for x < -200; 1/Gamma overflows there.
        return math.copysign(math.inf, g)
    return 1.0 / g


def rgamma_shifted(x: float, m: int) -> float:
    """1/Gamma(x + m) for an integer shift ``m``.

    Forming ``x + m`` in floating point discards the low digits of a small
    ``x``, which matters next to the poles. Left of 1/2 the reflection
    formula is used with sin(pi (x + m)) = (-1)^m sin(pi x) taken from ``x``
    itself, so the zeros at non-positive integers stay exact and the value
    near them keeps full relative accuracy.
    """
    x = float(x)
    if int(m) != m:
        raise DomainError(f"shift must be an integer, got {m!r}")
    m = int(m)
    z = x + m
    if z >= 0.5:
        return rgamma(z)
    s = sinpi(x)
    if s == 0.0:
        return 0.0
    if m % 2:
        s = -s
    # 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi, with 1 - z > 1/2
    return s * gamma(1.0 - x - m) / math.pi


def _check_order(alpha: float, k: int) -> None:
    if not alpha > -1.0:
        raise DomainError(f"binomial order must exceed -1, got {alpha!r}")
    if int(k) != k or k < 0:
        raise DomainError(f"binomial index must be a non-negative integer, got {k!r}")


def gen_binom(alpha: float, k: int) -> float:
    """Generalized binomial coefficient Gamma(a+1) / (Gamma(k+1) Gamma(a-k+1))."""
    _check_order(alpha, k)
    return gamma(alpha + 1.0) * rgamma(k + 1.0) * rgamma_shifted(alpha, 1 - int(k))


def gen_binom_recurrence(alpha: float, k: int) -> float:
    """Same coefficient via C(a, k) = C(a, k-1) (a - k + 1) / k.

    Pole-free; kept as an independent check on :func:`gen_binom`.
    """
    _check_order(alpha, k)
    c = 1.0
    for j in range(1, int(k) + 1):
        c *= (alpha - (j - 1)) / j
    return c


def gl_weights(alpha: float, n: int) -> np.ndarray:
    """Grünwald-Letnikov weights ``(-1)^k C(alpha, k)`` for k = 0..n-1.

    Uses the recurrence ``w_k = w_{k-1} (1 - (alpha + 1) / k)``, which stays
    finite for long grids where the Gamma-product form over/underflows.
    """
    k = np.arange(1, n, dtype=float)
    w = np.empty(n)
    w[0] = 1.0
    if n > 1:
        w[1:] = np.cumprod(1.0 - (alpha + 1.0) / k)
    return w
