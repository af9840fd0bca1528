"""Generalized Leibniz series and the pointwise Leibniz defect."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fracops import frac_diffint
from .funclass import ZERO, PowerSum, classical_derivative, multiply, scale
from .operators import OperatorSpec, apply_operator, spec_order, values_at
from .specfun import gen_binom

__all__ = [
    "SeriesEvaluation",
    "DefectReport",
    "default_points",
    "default_truncation",
    "leibniz_series",
    "leibniz_defect",
]

#: Truncation used when ``g`` is not a polynomial.
NON_POLYNOMIAL_K = 16


def default_points() -> np.ndarray:
    """20 geometrically spaced points in [0.2, 5]."""
    return np.geomspace(0.2, 5.0, 20)


def default_truncation(g: PowerSum, alpha: float) -> int:
    if g.is_polynomial:
        return max(g.degree, math.ceil(alpha) + 2)
    return NON_POLYNOMIAL_K


@dataclass(frozen=True)
class SeriesEvaluation:
    """Partial sum of the generalized Leibniz series up to index ``K``.

    ``terminated`` is set when ``D^(K+1) g`` vanishes, i.e. the partial sum
    is the whole series. ``tail`` is max |terms[K]| over ``points``; no
    convergence claim is attached to it.
    """

    alpha: float
    K: int
    f: PowerSum
    g: PowerSum
    terms: tuple[PowerSum, ...]
    partial: PowerSum
    terminated: bool
    points: tuple[float, ...]
    tail: float

    def partial_sums(self) -> list[PowerSum]:
        out, acc = [], ZERO
        for t in self.terms:
            acc = acc + t
            out.append(acc)
        return out


def leibniz_series(
    f: PowerSum, g: PowerSum, alpha: float, K: int | None = None, points=None
) -> SeriesEvaluation:
    """Sum ``C(alpha, k) (D^(alpha-k) f) (D^k g)`` for k = 0..K.

    ``D^(alpha-k)`` is an RL integral of order ``k - alpha`` once
    ``k > alpha``.
    """
    if K is None:
        K = default_truncation(g, alpha)
    if int(K) != K or K < 0:
        raise DomainError(f"truncation index must be a non-negative integer, got {K!r}")
    K = int(K)
    pts = default_points() if points is None else np.asarray(points, dtype=float)

    terms = []
    dg = g
    for k in range(K + 1):
        try:
            fk = frac_diffint(f, alpha - k)
        except DomainError as exc:
            raise DomainError(f"series term k={k}: {exc}") from exc
        terms.append(scale(gen_binom(alpha, k), multiply(fk, dg)))
        dg = classical_derivative(dg)

    partial = ZERO
    for t in terms:
        partial = partial + t
    tail = float(np.max(np.abs(terms[-1](pts)))) if pts.size else 0.0
    terminated = g.is_polynomial and g.degree <= K
    return SeriesEvaluation(
        alpha=float(alpha),
        K=K,
        f=f,
        g=g,
        terms=tuple(terms),
        partial=partial,
        terminated=terminated,
        points=tuple(float(p) for p in pts),
        tail=tail,
    )


@dataclass(frozen=True)
class DefectReport:
    op: OperatorSpec
    f: PowerSum
    g: PowerSum
    points: tuple[float, ...]
    delta: tuple[float, ...]
    max_abs: float

    @property
    def alpha(self) -> float | None:
        return spec_order(self.op)


def defect_values(op: OperatorSpec, f: PowerSum, g: PowerSum, points) -> np.ndarray:
    """``op(fg) - op(f) g - f op(g)`` at ``points``."""
    pts = np.asarray(points, dtype=float)
    extent = float(np.max(pts)) if pts.size else 1.0
    fg = multiply(f, g)
    op_fg = values_at(apply_operator(op, fg, extent), pts)
    op_f = values_at(apply_operator(op, f, extent), pts)
    op_g = values_at(apply_operator(op, g, extent), pts)
    return op_fg - op_f * g(pts) - f(pts) * op_g


def leibniz_defect(op: OperatorSpec, f: PowerSum, g: PowerSum, points=None) -> DefectReport:
    pts = default_points() if points is None else np.asarray(points, dtype=float)
    delta = defect_values(op, f, g, pts)
    return DefectReport(
        op=op,
        f=f,
        g=g,
        points=tuple(float(p) for p in pts),
        delta=tuple(float(d) for d in delta),
        max_abs=float(np.max(np.abs(delta))) if delta.size else 0.0,
    )
