"""Leibniz-rule audit of linear operators.

For an operator ``op`` the audit extracts

    b(x) = op(1)                 (action on the unit)
    a(x) = op(x) - x * op(1)

and measures how far ``op`` is from the first-order local form ``a(x) D``
on a set of probe functions, alongside the Leibniz defect on probe pairs.
An operator is classified ``FIRST_ORDER_LOCAL`` when ``op(f) = a f'`` holds
on every probe, otherwise ``NON_LEIBNIZ``. All claims are scoped to the
probe set and evaluation points recorded in the report.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .funclass import ONE, X, GridFunction, PowerSum, classical_derivative, monomial
from .leibniz import default_points, defect_values
from .operators import (
    OperatorSpec,
    apply_operator,
    grid_steps,
    times_x,
    values_at,
)

__all__ = [
    "Classification",
    "Witness",
    "AuditReport",
    "DEFAULT_TOL",
    "default_probes",
    "default_pairs",
    "default_audit_points",
    "default_tolerance",
    "check_linearity",
    "extract_local_form",
    "classify",
]

DEFAULT_TOL = 1e-8

#: Coefficients used for the linearity probe inside :func:`classify`.
LINEARITY_COEFFS = (1.5, -0.75)


class Classification(str, enum.Enum):
    FIRST_ORDER_LOCAL = "FIRST_ORDER_LOCAL"
    NON_LEIBNIZ = "NON_LEIBNIZ"


def default_probes() -> list[PowerSum]:
    return [ONE, X, monomial(1.0, 2.0), monomial(1.0, 3.0), monomial(1.0, 0.5), monomial(1.0, 1.5)]


def default_pairs() -> list[tuple[PowerSum, PowerSum]]:
    base = [ONE, X, monomial(1.0, 2.0), monomial(1.0, 0.5)]
    return list(itertools.combinations_with_replacement(base, 2))


def default_audit_points() -> np.ndarray:
    """The 20-point geometric grid on [0.2, 5] with x = 1 added."""
    return np.union1d(default_points(), [1.0])


def default_tolerance(spec: OperatorSpec) -> float:
    steps = grid_steps(spec)
    if steps:
        return max(DEFAULT_TOL, 10.0 * max(steps))
    return DEFAULT_TOL


@dataclass(frozen=True)
class Witness:
    kind: str  # "defect" or "local_form"
    detail: dict
    value: float


@dataclass(frozen=True)
class AuditReport:
    spec: OperatorSpec
    probes: tuple[PowerSum, ...]
    pairs: tuple[tuple[PowerSum, PowerSum], ...]
    points: tuple[float, ...]
    a_extract: object
    b_extract: object
    b_max: float
    linearity_residual: float
    local_form_residual: float
    defect_max: float
    classification: Classification
    witness: Witness
    tolerance: float
    probe_residuals: dict = field(default_factory=dict)
    pair_defects: dict = field(default_factory=dict)
    skipped: tuple[tuple[str, str], ...] = ()

    def pair_defect(self, f: PowerSum, g: PowerSum, x: float) -> float:
        """Recorded defect of the pair (f, g) at one of the audit points."""
        key = _pair_label(f, g)
        if key not in self.pair_defects:
            key = _pair_label(g, f)
        i = self.points.index(float(x))
        return self.pair_defects[key][i]


def _pair_label(f, g) -> str:
    return f"({f}, {g})"


def _extent(points) -> float:
    return float(np.max(points))


def check_linearity(spec: OperatorSpec, f: PowerSum, g: PowerSum, c1: float, c2: float, points) -> float:
    """max |op(c1 f + c2 g) - c1 op(f) - c2 op(g)| over ``points``."""
    pts = np.asarray(points, dtype=float)
    ext = _extent(pts)
    lhs = values_at(apply_operator(spec, c1 * f + c2 * g, ext), pts)
    rhs = c1 * values_at(apply_operator(spec, f, ext), pts) + c2 * values_at(
        apply_operator(spec, g, ext), pts
    )
    return float(np.max(np.abs(lhs - rhs)))


def extract_local_form(spec: OperatorSpec, points=None):
    """Return ``(a, b)`` with b = op(1) and a = op(x) - x op(1).

    Both are :class:`PowerSum` for exact operators and
    :class:`GridFunction` when a GL constituent is present. ``points``
    only sets the grid extent for the latter.
    """
    ext = _extent(default_audit_points() if points is None else np.asarray(points, dtype=float))
    b = apply_operator(spec, ONE, ext)
    op_x = apply_operator(spec, X, ext)
    xb = times_x(b)
    if isinstance(op_x, PowerSum):
        a = op_x - xb
    else:
        a = GridFunction(op_x.h, op_x.values - xb.values, origin_flagged=op_x.origin_flagged)
    return a, b


def classify(
    spec: OperatorSpec,
    probes=None,
    pairs=None,
    points=None,
    tol: float | None = None,
) -> AuditReport:
    probes = tuple(default_probes() if probes is None else probes)
    pairs = tuple(default_pairs() if pairs is None else pairs)
    pts = default_audit_points() if points is None else np.asarray(points, dtype=float)
    if pts.size == 0 or np.any(pts <= 0):
        raise DomainError("audit points must be a non-empty set of x > 0")
    tol = default_tolerance(spec) if tol is None else float(tol)
    ext = _extent(pts)

    a, b = extract_local_form(spec, pts)
    a_vals = values_at(a, pts)
    b_vals = values_at(b, pts)
    skipped: list[tuple[str, str]] = []

    # Distance from the form a(x) D on each probe.
    probe_residuals: dict[str, float] = {}
    local_worst = (-1.0, None, None)
    for f in probes:
        try:
            op_f = values_at(apply_operator(spec, f, ext), pts)
        except DomainError as exc:
            skipped.append((str(f), str(exc)))
            continue
        r = np.abs(op_f - a_vals * classical_derivative(f)(pts))
        i = int(np.argmax(r))
        probe_residuals[str(f)] = float(r[i])
        if r[i] > local_worst[0]:
            local_worst = (float(r[i]), str(f), float(pts[i]))
    local_max = max(local_worst[0], 0.0)

    pair_defects: dict[str, tuple[float, ...]] = {}
    defect_worst = (-1.0, None, None, 0.0)
    linearity = 0.0
    c1, c2 = LINEARITY_COEFFS
    for f, g in pairs:
        label = _pair_label(f, g)
        try:
            d = defect_values(spec, f, g, pts)
            lin = check_linearity(spec, f, g, c1, c2, pts)
        except DomainError as exc:
            skipped.append((label, str(exc)))
            continue
        pair_defects[label] = tuple(float(v) for v in d)
        linearity = max(linearity, lin)
        i = int(np.argmax(np.abs(d)))
        if abs(d[i]) > defect_worst[0]:
            defect_worst = (float(abs(d[i])), (str(f), str(g)), float(pts[i]), float(d[i]))
    defect_max = max(defect_worst[0], 0.0)

    if local_max < tol:
        classification = Classification.FIRST_ORDER_LOCAL
    else:
        classification = Classification.NON_LEIBNIZ

    if classification is Classification.NON_LEIBNIZ and defect_worst[1] is not None and defect_max >= tol:
        witness = Witness(
            "defect",
            {"pair": list(defect_worst[1]), "x": defect_worst[2], "delta": defect_worst[3]},
            defect_max,
        )
    else:
        witness = Witness("local_form", {"probe": local_worst[1], "x": local_worst[2]}, local_max)

    return AuditReport(
        spec=spec,
        probes=probes,
        pairs=pairs,
        points=tuple(float(p) for p in pts),
        a_extract=a,
        b_extract=b,
        b_max=float(np.max(np.abs(b_vals))),
        linearity_residual=linearity,
        local_form_residual=local_max,
        defect_max=defect_max,
        classification=classification,
        witness=witness,
        tolerance=tol,
        probe_residuals=probe_residuals,
        pair_defects=pair_defects,
        skipped=tuple(skipped),
    )
