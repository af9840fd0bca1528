"""Generalized power sums ``sum_j c_j x^b_j`` and uniformly sampled grid functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Union

import numpy as np

from .errors import DomainError

__all__ = [
    "PowerTerm",
    "PowerSum",
    "GridFunction",
    "Domain",
    "canonicalize",
    "constant",
    "monomial",
    "ZERO",
    "ONE",
    "X",
    "eval_sum",
    "add",
    "scale",
    "multiply",
    "classical_derivative",
    "sample",
]

#: Exponents closer than this are merged; exponents this close to an integer snap to it.
EXPONENT_TOL = 1e-12


class PowerTerm(NamedTuple):
    coeff: float
    exponent: float


def _snap(beta: float) -> float:
    r = round(beta)
    if abs(beta - r) <= EXPONENT_TOL:
        return float(r)
    return beta


def canonicalize(terms: Iterable[tuple[float, float]]) -> tuple[PowerTerm, ...]:
    """Sort by exponent, merge near-equal exponents, drop zero coefficients."""
    raw = []
    for c, b in terms:
        c, b = float(c), float(b)
        if not (math.isfinite(c) and math.isfinite(b)):
            raise DomainError(f"non-finite power term {c!r}*x^{b!r}")
        raw.append((_snap(b), c))
    raw.sort()

    merged: list[list[float]] = []
    for b, c in raw:
        if merged and b - merged[-1][0] <= EXPONENT_TOL:
            merged[-1][1] += c
        else:
            merged.append([b, c])
    out = []
    for b, c in merged:
        if not math.isfinite(c):
            raise DomainError(f"coefficient of x^{b!r} overflowed")
        if c != 0.0:
            out.append(PowerTerm(c, b))
    return tuple(out)


def fmt_number(v: float) -> str:
    """Shortest text that parses back to exactly ``v``."""
    v = float(v)
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


@dataclass(frozen=True)
class PowerSum:
    """Finite sum of real powers of ``x``, always held in canonical form.

    >>> PowerSum([(1.0, 2.0), (2.0, 0.0)])(3.0)
    11.0
    """

    terms: tuple[PowerTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", canonicalize(self.terms))

    # --- structure -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(t.exponent for t in self.terms)

    @property
    def is_polynomial(self) -> bool:
        return all(b >= 0 and b == math.floor(b) for b in self.exponents)

    @property
    def degree(self) -> int | None:
        """Polynomial degree; ``None`` for non-polynomials, ``-1`` for zero."""
        if not self.is_polynomial:
            return None
        return int(self.terms[-1].exponent) if self.terms else -1

    @property
    def is_constant(self) -> bool:
        return all(b == 0.0 for b in self.exponents)

    def coefficient(self, exponent: float) -> float:
        for c, b in self.terms:
            if abs(b - exponent) <= EXPONENT_TOL:
                return c
        return 0.0

    def value_at_zero(self) -> float:
        """f(0) for sums with non-negative exponents (0^0 = 1)."""
        if any(b < 0 for b in self.exponents):
            raise DomainError(f"{self} is unbounded at x = 0")
        return self.coefficient(0.0)

    # --- evaluation ------------------------------------------------------
    def __call__(self, x):
        return eval_sum(self, x)

    # --- algebra ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = constant(other)
        if not isinstance(other, PowerSum):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return scale(-1.0, self)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = constant(other)
        if not isinstance(other, PowerSum):
            return NotImplemented
        return add(self, scale(-1.0, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return scale(other, self)
        if not isinstance(other, PowerSum):
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (c, b) in enumerate(self.terms):
            neg = math.copysign(1.0, c) < 0
            mag = fmt_number(abs(c))
            if b == 0.0:
                body = mag
            else:
                power = "x" if b == 1.0 else (f"x^({fmt_number(b)})" if b < 0 else f"x^{fmt_number(b)}")
                body = power if mag == "1" else f"{mag}*{power}"
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"PowerSum({str(self)!r})"


def constant(c: float) -> PowerSum:
    return PowerSum(((c, 0.0),))


def monomial(c: float, exponent: float) -> PowerSum:
    return PowerSum(((c, exponent),))


ZERO = PowerSum()
ONE = constant(1.0)
X = monomial(1.0, 1.0)


def eval_sum(f: PowerSum, x):
    """Evaluate ``f`` at ``x > 0``; accepts scalars or arrays."""
    xa = np.asarray(x, dtype=float)
    if xa.size and not np.all(xa > 0):
        raise DomainError("power sums are evaluated only at x > 0")
    total = np.zeros_like(xa)
    for c, b in f.terms:
        if b == 0.0:
            total = total + c
        else:
            total = total + c * xa**b
    if np.ndim(x) == 0:
        return float(total)
    return total


def add(f: PowerSum, g: PowerSum) -> PowerSum:
    return PowerSum(f.terms + g.terms)


def scale(c: float, f: PowerSum) -> PowerSum:
    return PowerSum(tuple((c * t.coeff, t.exponent) for t in f.terms))


def multiply(f: PowerSum, g: PowerSum) -> PowerSum:
    return PowerSum(
        tuple((a.coeff * b.coeff, a.exponent + b.exponent) for a in f.terms for b in g.terms)
    )


def classical_derivative(f: PowerSum, n: int = 1) -> PowerSum:
    """n-th ordinary derivative by the power rule; constants vanish."""
    if int(n) != n or n < 0:
        raise DomainError(f"derivative order must be a non-negative integer, got {n!r}")
    for _ in range(int(n)):
        f = PowerSum(tuple((c * b, b - 1.0) for c, b in f.terms if b != 0.0))
    return f


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples ``values[n]`` of a function at ``x_n = n*h``, n = 0..N.

    ``origin_flagged`` marks a sample at x = 0 that was set to 0 by
    convention because the sampled function is unbounded there.
    """

    h: float
    values: np.ndarray
    origin_flagged: bool = False
    _nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if not self.h > 0:
            raise DomainError(f"grid step must be positive, got {self.h!r}")
        if values.ndim != 1 or values.size < 3:
            raise DomainError("a grid function needs N >= 2 (at least three samples)")
        if not np.all(np.isfinite(values)):
            raise DomainError("grid values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "values", values)
        nodes = np.arange(values.size) * self.h
        nodes.setflags(write=False)
        object.__setattr__(self, "_nodes", nodes)

    @property
    def N(self) -> int:
        return self.values.size - 1

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    def at(self, x):
        """Linear interpolation between grid nodes."""
        xa = np.asarray(x, dtype=float)
        if xa.size and (np.min(xa) < 0 or np.max(xa) > self._nodes[-1] * (1 + 1e-12)):
            raise DomainError(f"points outside the grid [0, {self._nodes[-1]!r}]")
        out = np.interp(xa, self._nodes, self.values)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return (
            self.h == other.h
            and self.origin_flagged == other.origin_flagged
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


def sample(f: PowerSum, h: float, N: int) -> GridFunction:
    """Sample ``f`` at x_n = n*h for n = 0..N."""
    if not h > 0:
        raise DomainError(f"grid step must be positive, got {h!r}")
    if int(N) != N or N < 2:
        raise DomainError(f"grid needs N >= 2, got {N!r}")
    N = int(N)
    values = np.empty(N + 1)
    values[1:] = eval_sum(f, np.arange(1, N + 1) * h)
    flagged = any(b < 0 for b in f.exponents)
    values[0] = 0.0 if flagged else f.value_at_zero()
    return GridFunction(h, values, origin_flagged=flagged)


@dataclass(frozen=True)
class Domain:
    """Evaluation interval [lo, hi] on the positive half-line."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo > 0 and self.hi > self.lo):
            raise DomainError(f"domain needs 0 < lo < hi, got [{self.lo!r}, {self.hi!r}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def interior(self, x) -> bool:
        return self.lo < x < self.hi


Evaluable = Union[PowerSum, GridFunction]
