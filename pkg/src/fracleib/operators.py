"""Declarative linear operators and their application to power sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .fracops import caputo_derivative, gl_derivative, rl_derivative
from .funclass import ZERO, GridFunction, fmt_number, PowerSum, classical_derivative, multiply, sample, scale, X

__all__ = [
    "RL",
    "Caputo",
    "GL",
    "Classical",
    "LocalForm",
    "LinearCombo",
    "OperatorSpec",
    "apply_operator",
    "values_at",
    "grid_steps",
    "is_exact",
    "spec_order",
    "DEFAULT_EXTENT",
]

#: Right end of the sampling grid for GL operators when no points are given.
DEFAULT_EXTENT = 5.0


_num = fmt_number


@dataclass(frozen=True)
class RL:
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"RL order must lie in (0, 2), got {self.alpha!r}")

    def __str__(self):
        return f"RL({_num(self.alpha)})"


@dataclass(frozen=True)
class Caputo:
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"Caputo order must lie in (0, 1], got {self.alpha!r}")

    def __str__(self):
        return f"caputo({_num(self.alpha)})"


@dataclass(frozen=True)
class GL:
    alpha: float
    h: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "h", float(self.h))
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"GL order must lie in (0, 2), got {self.alpha!r}")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise DomainError(f"GL step must be positive, got {self.h!r}")

    def __str__(self):
        return f"GL({_num(self.alpha)}, h={_num(self.h)})"


@dataclass(frozen=True)
class Classical:
    n: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"classical order must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    def __str__(self):
        return "D" if self.n == 1 else f"D^{self.n}"


@dataclass(frozen=True)
class LocalForm:
    """The operator ``f -> a*f' + b*f``."""

    a: PowerSum
    b: PowerSum = ZERO

    def __str__(self):
        return f"local(a={self.a}, b={self.b})"


@dataclass(frozen=True)
class LinearCombo:
    terms: tuple

    def __post_init__(self):
        terms = tuple((float(c), op) for c, op in self.terms)
        if not terms:
            raise DomainError("a linear combination needs at least one term")
        for c, _ in terms:
            if not math.isfinite(c):
                raise DomainError(f"non-finite coefficient {c!r} in linear combination")
        object.__setattr__(self, "terms", terms)

    def __str__(self):
        parts = []
        for i, (c, op) in enumerate(self.terms):
            inner = f"({op})" if isinstance(op, LinearCombo) else str(op)
            neg = math.copysign(1.0, c) < 0
            body = f"{_num(abs(c))}*{inner}"
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)


OperatorSpec = Union[RL, Caputo, GL, Classical, LocalForm, LinearCombo]


def grid_steps(spec: OperatorSpec) -> set[float]:
    """Grid steps of every GL constituent."""
    if isinstance(spec, GL):
        return {spec.h}
    if isinstance(spec, LinearCombo):
        out: set[float] = set()
        for _, op in spec.terms:
            out |= grid_steps(op)
        return out
    return set()


def is_exact(spec: OperatorSpec) -> bool:
    return not grid_steps(spec)


def spec_order(spec: OperatorSpec) -> float | None:
    """Nominal order of a single operator; ``None`` for linear combinations."""
    if isinstance(spec, (RL, Caputo, GL)):
        return spec.alpha
    if isinstance(spec, Classical):
        return float(spec.n)
    if isinstance(spec, LocalForm):
        return 1.0
    return None


def _grid_size(h: float, extent: float) -> int:
    return max(2, math.ceil(extent / h - 1e-9))


def _apply_leaf(spec, f: PowerSum, extent: float):
    try:
        if isinstance(spec, RL):
            return rl_derivative(f, spec.alpha)
        if isinstance(spec, Caputo):
            return caputo_derivative(f, spec.alpha)
        if isinstance(spec, Classical):
            return classical_derivative(f, spec.n)
        if isinstance(spec, LocalForm):
            return multiply(spec.a, classical_derivative(f)) + multiply(spec.b, f)
        if isinstance(spec, GL):
            grid = sample(f, spec.h, _grid_size(spec.h, extent))
            return gl_derivative(grid, spec.alpha)
    except DomainError as exc:
        raise DomainError(f"{spec}: {exc}") from exc
    raise TypeError(f"not an operator spec: {spec!r}")


def apply_operator(spec: OperatorSpec, f: PowerSum, extent: float = DEFAULT_EXTENT):
    """Apply ``spec`` to ``f``.

    Exact operators return a :class:`PowerSum`. Anything involving a GL
    constituent returns a :class:`GridFunction` covering ``[0, extent]``;
    exact constituents of such a combination are sampled on the same grid.
    All GL constituents of one combination must share the grid step.
    """
    steps = grid_steps(spec)
    if len(steps) > 1:
        raise DomainError(f"{spec}: GL constituents use different grid steps {sorted(steps)}")
    if not isinstance(spec, LinearCombo):
        return _apply_leaf(spec, f, extent)

    parts = [(c, apply_operator(op, f, extent)) for c, op in spec.terms]
    if not steps:
        total = ZERO
        for c, r in parts:
            total = total + scale(c, r)
        return total

    (h,) = steps
    n = _grid_size(h, extent)
    values = np.zeros(n + 1)
    flagged = False
    for c, r in parts:
        if isinstance(r, PowerSum):
            r = sample(r, h, n)
        values = values + c * r.values
        flagged = flagged or r.origin_flagged
    return GridFunction(h, values, origin_flagged=flagged)


def values_at(result, points) -> np.ndarray:
    """Values of an operator result (exact or gridded) at ``points``."""
    if isinstance(result, PowerSum):
        return np.asarray(result(np.asarray(points, dtype=float)), dtype=float)
    return np.asarray(result.at(np.asarray(points, dtype=float)), dtype=float)


def times_x(result):
    """Multiply an operator result by x."""
    if isinstance(result, PowerSum):
        return multiply(X, result)
    return GridFunction(result.h, result.values * result.nodes, origin_flagged=False)
