"""Constructive Hadamard decompositions.

First order:   f(x) = f(x0) + (x - x0) g(x),   g(x) = int_0^1 f'(x0 + (x - x0) t) dt
Second order:  the same construction applied once more to g, giving
               f(x) = f(x0) + (x - x0) f'(x0) + (x - x0)^2 g2(x).

Polynomials are divided exactly (synthetic division); everything else goes
through adaptive quadrature of the integral above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, ToleranceError
from .funclass import Domain, PowerSum, classical_derivative

__all__ = [
    "Smooth",
    "QuadRemainder",
    "HadamardDecomposition",
    "hadamard_first",
    "hadamard_second",
    "QUAD_TOL",
]

QUAD_TOL = 1e-10
QUAD_LIMIT = 2**15


def _scalar_map(fn, x):
    if np.ndim(x) == 0:
        return fn(float(x))
    xa = np.asarray(x, dtype=float)
    return np.array([fn(v) for v in xa.ravel()]).reshape(xa.shape)


def _scalar_eval(f: PowerSum):
    # quadrature calls one point at a time; plain floats beat numpy here
    terms = f.terms

    def value(x: float) -> float:
        if not x > 0:
            raise DomainError("power sums are evaluated only at x > 0")
        return sum(c * x**b for c, b in terms)

    return value


@dataclass(frozen=True)
class Smooth:
    """A function given by callables for its value and first two derivatives."""

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Optional[Callable[[float], float]] = None

    @classmethod
    def from_power_sum(cls, f: PowerSum) -> "Smooth":
        return cls(_scalar_eval(f), _scalar_eval(classical_derivative(f)), _scalar_eval(classical_derivative(f, 2)))

    def __call__(self, x):
        return _scalar_map(self.value, x)


def _integrate(func, what: str) -> float:
    val, err, info, *msg = quad(
        func, 0.0, 1.0, epsabs=QUAD_TOL, epsrel=1e-13, limit=QUAD_LIMIT, full_output=1
    )
    if not math.isfinite(val) or err > max(QUAD_TOL, 1e-13 * abs(val)):
        raise ToleranceError(f"quadrature for {what} reached only {err:.3g} (target {QUAD_TOL:g})")
    return val


@dataclass(frozen=True)
class QuadRemainder:
    """g(x) = int_0^1 f'(x0 + (x - x0) t) dt, evaluated by quadrature.

    At ``x == x0`` the integrand is constant and ``f'(x0)`` is returned
    directly.
    """

    d1: Callable[[float], float]
    x0: float
    d2: Optional[Callable[[float], float]] = None

    def _value(self, x: float) -> float:
        x0 = self.x0
        if x == x0:
            return float(self.d1(x0))
        return _integrate(lambda t: self.d1(x0 + (x - x0) * t), f"g({x!r})")

    def _derivative(self, x: float) -> float:
        if self.d2 is None:
            raise DomainError("second derivative of f is needed for g'")
        x0 = self.x0
        if x == x0:
            return 0.5 * float(self.d2(x0))
        return _integrate(lambda t: t * self.d2(x0 + (x - x0) * t), f"g'({x!r})")

    def __call__(self, x):
        return _scalar_map(self._value, x)

    def derivative(self, x):
        """g'(x) = int_0^1 t f''(x0 + (x - x0) t) dt."""
        return _scalar_map(self._derivative, x)


Remainder = Union[PowerSum, QuadRemainder]


@dataclass(frozen=True)
class HadamardDecomposition:
    x0: float
    f_at_x0: float
    order: int
    remainder: Remainder
    f: Union[PowerSum, Smooth]
    deriv_at_x0: Optional[float] = None
    domain: Optional[Domain] = None

    @property
    def exact(self) -> bool:
        return isinstance(self.remainder, PowerSum)

    def _check(self, x):
        if self.domain is not None:
            xa = np.asarray(x, dtype=float)
            if np.any(xa < self.domain.lo) or np.any(xa > self.domain.hi):
                raise DomainError(
                    f"evaluation outside the domain [{self.domain.lo!r}, {self.domain.hi!r}]"
                )

    def remainder_at(self, x):
        self._check(x)
        return self.remainder(x)

    def reconstruct(self, x):
        self._check(x)
        dx = np.asarray(x, dtype=float) - self.x0
        r = self.remainder(x)
        if self.order == 1:
            out = self.f_at_x0 + dx * r
        else:
            out = self.f_at_x0 + dx * self.deriv_at_x0 + dx * dx * r
        return float(out) if np.ndim(x) == 0 else out

    def residual(self, x):
        """|f(x) - reconstruct(x)|."""
        out = np.abs(np.asarray(self.f(x), dtype=float) - self.reconstruct(x))
        return float(out) if np.ndim(x) == 0 else out


def _synthetic_division(f: PowerSum, x0: float) -> tuple[float, PowerSum]:
    # (f(x) - f(x0)) / (x - x0) by Horner's scheme.
    deg = f.degree
    if deg < 1:
        return (f.coefficient(0.0) if deg == 0 else 0.0), PowerSum()
    a = [f.coefficient(float(k)) for k in range(deg + 1)]
    b = [0.0] * deg
    b[deg - 1] = a[deg]
    for k in range(deg - 1, 0, -1):
        b[k - 1] = a[k] + x0 * b[k]
    value = a[0] + x0 * b[0]
    return value, PowerSum([(c, float(k)) for k, c in enumerate(b)])


def _resolve(f, x0, domain, method):
    if method not in ("auto", "exact", "quad"):
        raise ValueError(f"unknown method {method!r}")
    if not math.isfinite(x0):
        raise DomainError(f"anchor must be finite, got {x0!r}")
    if domain is not None and not domain.interior(x0):
        raise DomainError(f"anchor {x0!r} is not interior to [{domain.lo!r}, {domain.hi!r}]")
    poly = isinstance(f, PowerSum) and f.is_polynomial
    if method == "exact" and not poly:
        raise DomainError("exact decomposition needs a polynomial")
    use_exact = poly and method != "quad"
    # Off the exact path the segment [x0, x] has to stay on x > 0.
    if not use_exact and not x0 > 0:
        raise DomainError(f"anchor must be positive, got {x0!r}")
    if x0 < 0:
        raise DomainError(f"anchor must be non-negative, got {x0!r}")
    return use_exact


def hadamard_first(f, x0: float, domain: Domain | None = None, method: str = "auto"):
    """Decompose f(x) = f(x0) + (x - x0) g(x).

    ``f`` is a :class:`PowerSum` or a :class:`Smooth`. ``method`` selects
    synthetic division (``"exact"``, polynomials only), quadrature
    (``"quad"``) or the exact path whenever possible (``"auto"``).
    """
    x0 = float(x0)
    if _resolve(f, x0, domain, method):
        value, g = _synthetic_division(f, x0)
        return HadamardDecomposition(x0, value, 1, g, f, domain=domain)

    smooth = Smooth.from_power_sum(f) if isinstance(f, PowerSum) else f
    value = float(smooth.value(x0))
    rem = QuadRemainder(smooth.d1, x0, smooth.d2)
    return HadamardDecomposition(x0, value, 1, rem, f, domain=domain)


def hadamard_second(f, x0: float, domain: Domain | None = None, method: str = "auto"):
    """Decompose f(x) = f(x0) + (x - x0) f'(x0) + (x - x0)^2 g2(x).

    g2 is the first-order remainder of the first-order remainder g.
    """
    first = hadamard_first(f, x0, domain, method)
    g = first.remainder
    if isinstance(g, PowerSum):
        second = hadamard_first(g, x0, domain, "exact" if g.is_polynomial else method)
    else:
        second = hadamard_first(Smooth(g, g.derivative), x0, domain, "quad")
    return HadamardDecomposition(
        x0,
        first.f_at_x0,
        2,
        second.remainder,
        f,
        deriv_at_x0=second.f_at_x0,
        domain=domain,
    )
