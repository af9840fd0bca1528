"""Fractional operators with lower terminal 0.

Exact operators act term-wise on :class:`PowerSum` through the power rule

    D^a x^b = Gamma(b + 1) / Gamma(b - a + 1) * x^(b - a),      b > -1,

where the reciprocal Gamma makes the integer-order cases exact: at a = 1
the constant term is sent to ``rgamma(0) = 0``. Negative orders give the
Riemann-Liouville integral. The Grünwald-Letnikov operator acts on
uniformly sampled data.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import fftconvolve

from .errors import DomainError
from .funclass import EXPONENT_TOL, GridFunction, PowerSum
from .specfun import gamma, gl_weights, rgamma, rgamma_shifted

__all__ = [
    "MAX_DERIVATIVE_ORDER",
    "rl_derivative",
    "rl_integral",
    "frac_diffint",
    "caputo_derivative",
    "gl_derivative",
]

#: Derivative orders are restricted to the open interval (0, MAX_DERIVATIVE_ORDER).
MAX_DERIVATIVE_ORDER = 2.0

# Grids longer than this use FFT convolution for the GL sum.
_DIRECT_GL_LIMIT = 1 << 14


def _rgamma_snapped(arg: float) -> float:
    # b - a + 1 can miss a pole by one ulp (0.3 - 1.3 + 1 != 0.0).
    r = round(arg)
    if r <= 0 and abs(arg - r) <= EXPONENT_TOL:
        return 0.0
    return rgamma(arg)


def _gamma_ratio(b: float, nu: float) -> float:
    """Gamma(b + 1) * rgamma(b - nu + 1)."""
    if nu == int(nu):
        # integer order: keep b out of the sum so tiny exponents lose no digits
        return gamma(b + 1.0) * rgamma_shifted(b, 1 - int(nu))
    return gamma(b + 1.0) * _rgamma_snapped(b - nu + 1.0)


def _power_rule(f: PowerSum, nu: float, what: str) -> PowerSum:
    # D^nu for nu > 0, I^(-nu) for nu < 0.
    terms = []
    for c, b in f.terms:
        if not b > -1.0:
            raise DomainError(
                f"{what} needs every exponent > -1; offending term {c!r}*x^{b!r}"
            )
        terms.append((c * _gamma_ratio(b, nu), b - nu))
    return PowerSum(terms)


def _check_derivative_order(alpha: float, hi: float = MAX_DERIVATIVE_ORDER) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha < hi):
        raise DomainError(f"derivative order must lie in (0, {hi:g}), got {alpha!r}")
    return alpha


def rl_derivative(f: PowerSum, alpha: float) -> PowerSum:
    """Riemann-Liouville derivative of order ``alpha`` in (0, 2).

    >>> str(rl_derivative(PowerSum([(1.0, 2.0)]), 1.0))
    '2.0*x'
    """
    alpha = _check_derivative_order(alpha)
    return _power_rule(f, alpha, f"RL derivative of order {alpha!r}")


def rl_integral(f: PowerSum, mu: float) -> PowerSum:
    """Riemann-Liouville integral of order ``mu > 0``."""
    mu = float(mu)
    if not (mu > 0 and math.isfinite(mu)):
        raise DomainError(f"integral order must be positive, got {mu!r}")
    return _power_rule(f, -mu, f"RL integral of order {mu!r}")


def frac_diffint(f: PowerSum, nu: float) -> PowerSum:
    """Differintegral: derivative for ``nu > 0``, integral of order ``-nu`` for ``nu < 0``."""
    if nu > 0:
        return rl_derivative(f, nu)
    if nu < 0:
        return rl_integral(f, -nu)
    return f


def caputo_derivative(f: PowerSum, alpha: float) -> PowerSum:
    """Caputo derivative of order ``alpha`` in (0, 1].

    Constants are annihilated; positive powers follow the RL power rule.
    Exponents in (-1, 0) are refused.
    """
    alpha = float(alpha)
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"Caputo order must lie in (0, 1], got {alpha!r}")
    bad = [t for t in f.terms if t.exponent < 0]
    if bad:
        c, b = bad[0]
        raise DomainError(
            f"Caputo derivative is unsupported for exponents below 0; offending term {c!r}*x^{b!r}"
        )
    varying = PowerSum(tuple(t for t in f.terms if t.exponent != 0.0))
    return _power_rule(varying, alpha, f"Caputo derivative of order {alpha!r}")


def gl_derivative(f: GridFunction, alpha: float) -> GridFunction:
    """Grünwald-Letnikov derivative on the grid of ``f``.

    ``out[n] = h^-alpha * sum_{k=0}^{n} (-1)^k C(alpha, k) f[n-k]``, the full
    backward sum from the origin.
    """
    alpha = _check_derivative_order(alpha)
    n = f.values.size
    w = gl_weights(alpha, n)
    if n <= _DIRECT_GL_LIMIT:
        acc = np.convolve(w, f.values)[:n]
    else:
        acc = fftconvolve(w, f.values)[:n]
    return GridFunction(f.h, acc * f.h**-alpha, origin_flagged=f.origin_flagged)
