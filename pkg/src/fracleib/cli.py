"""Command-line front end: ``fracleib {deriv,defect,series,audit,hadamard,convergence}``.

Every command prints a text table by default and accepts ``--format json``
or ``--format csv``. Exit codes: 0 success, 2 parse error, 3 domain error,
4 tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .audit import DEFAULT_TOL, classify, default_audit_points
from .errors import DomainError, ParseError, ToleranceError
from .fracops import gl_derivative, rl_derivative
from .funclass import PowerSum, sample
from .hadamard import hadamard_first, hadamard_second
from .leibniz import default_points, leibniz_defect, leibniz_series
from .operators import apply_operator, values_at
from .parser import parse_function, parse_operator

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_TOLERANCE = 4

#: Reconstruction residual above which ``hadamard`` exits with code 4.
HADAMARD_TOL = 1e-9

TOL_ENV = "FRACLEIB_TOL"

_num = {"type": ["number", "null"]}

DERIV_SCHEMA = {
    "type": "object",
    "required": ["op", "fn", "result", "points", "values"],
    "properties": {
        "op": {"type": "string"},
        "fn": {"type": "string"},
        "result": {"type": ["string", "null"]},
        "points": {"type": "array", "items": _num},
        "values": {"type": "array", "items": _num},
    },
}

DEFECT_SCHEMA = {
    "type": "object",
    "required": ["alpha", "f", "g", "points", "delta", "max_abs"],
    "properties": {
        "alpha": _num,
        "op": {"type": "string"},
        "f": {"type": "string"},
        "g": {"type": "string"},
        "points": {"type": "array", "items": _num},
        "delta": {"type": "array", "items": _num},
        "max_abs": _num,
    },
}

AUDIT_SCHEMA = {
    "type": "object",
    "required": [
        "spec",
        "classification",
        "b_max",
        "linearity_residual",
        "local_form_residual",
        "defect_max",
        "witness",
        "tolerance",
    ],
    "properties": {
        "spec": {"type": "string"},
        "classification": {"enum": ["FIRST_ORDER_LOCAL", "NON_LEIBNIZ"]},
        "b_max": _num,
        "linearity_residual": _num,
        "local_form_residual": _num,
        "defect_max": _num,
        "witness": {
            "type": "object",
            "required": ["kind", "detail", "value"],
            "properties": {
                "kind": {"enum": ["defect", "local_form"]},
                "detail": {"type": "object"},
                "value": _num,
            },
        },
        "tolerance": _num,
    },
}

SERIES_SCHEMA = {
    "type": "object",
    "required": ["alpha", "f", "g", "K", "terminated", "terms", "partial", "points", "tail"],
    "properties": {
        "alpha": _num,
        "K": {"type": "integer"},
        "terminated": {"type": "boolean"},
        "terms": {"type": "array", "items": {"type": "string"}},
        "partial": {"type": "string"},
        "points": {"type": "array", "items": _num},
        "tail": _num,
    },
}

HADAMARD_SCHEMA = {
    "type": "object",
    "required": ["fn", "x0", "order", "f_at_x0", "remainder", "points", "residual", "max_residual"],
    "properties": {
        "order": {"enum": [1, 2]},
        "remainder": {"type": ["string", "null"]},
        "max_residual": _num,
    },
}

CONVERGENCE_HEADER = ["h", "gl_value", "exact", "error", "order"]


# --- serialization -------------------------------------------------------

def _fmt_float(v) -> str:
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return _fmt_float(v) if math.isfinite(v) else ""
    return v


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _table(header, rows) -> str:
    cells = [[str(h) for h in header]]
    for row in rows:
        cells.append(
            [format(v, ".12g") if isinstance(v, (float, np.floating)) else str(v) for v in row]
        )
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


# --- helpers -------------------------------------------------------------

def _points(values, default) -> np.ndarray:
    if not values:
        return np.asarray(default, dtype=float)
    out = []
    for item in values:
        for part in str(item).split(","):
            part = part.strip()
            if part:
                try:
                    out.append(float(part))
                except ValueError:
                    raise ParseError(f"bad point {part!r}", 0) from None
    pts = np.asarray(out, dtype=float)
    if pts.size == 0 or not np.all(np.isfinite(pts)) or np.any(pts <= 0):
        raise DomainError("evaluation points must be finite and positive")
    return pts


def _tolerance(explicit) -> float | None:
    if explicit is not None:
        return float(explicit)
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise ParseError(f"{TOL_ENV}={env!r} is not a number", 0) from None
    return None


# --- commands ------------------------------------------------------------

def cmd_deriv(args):
    op = parse_operator(args.op)
    fn = parse_function(args.fn)
    if args.grid:
        h, n = args.grid
        n = int(n)
        if not (h > 0 and n >= 1):
            raise DomainError("--grid needs h > 0 and N >= 1")
        pts = np.arange(1, n + 1) * h
    else:
        pts = _points(args.points, default_points())
    result = apply_operator(op, fn, float(np.max(pts)))
    vals = values_at(result, pts)
    exact = str(result) if isinstance(result, PowerSum) else None
    payload = {"op": str(op), "fn": str(fn), "result": exact, "points": pts, "values": vals}
    rows = list(zip(pts, vals))
    if args.format == "json":
        return to_json(payload) + "\n"
    if args.format == "csv":
        return _csv_text(["x", "value"], rows)
    head = f"{op} applied to {fn}\n"
    head += f"exact result: {exact}\n" if exact is not None else "grid result (linear interpolation between nodes)\n"
    return head + _table(["x", "value"], rows)


def cmd_defect(args):
    op = parse_operator(args.op)
    f = parse_function(args.f)
    g = parse_function(args.g)
    pts = _points(args.points, default_points())
    rep = leibniz_defect(op, f, g, pts)
    payload = {
        "alpha": rep.alpha,
        "op": str(op),
        "f": str(f),
        "g": str(g),
        "points": rep.points,
        "delta": rep.delta,
        "max_abs": rep.max_abs,
    }
    rows = list(zip(rep.points, rep.delta))
    if args.format == "json":
        return to_json(payload) + "\n"
    if args.format == "csv":
        return _csv_text(["x", "delta"], rows)
    head = f"Leibniz defect of {op} on f = {f}, g = {g}\n"
    return head + _table(["x", "delta"], rows) + f"max |delta| = {rep.max_abs:.17g}\n"


def cmd_series(args):
    f = parse_function(args.f)
    g = parse_function(args.g)
    pts = _points(args.points, default_points())
    ev = leibniz_series(f, g, args.alpha, args.K, pts)
    term_vals = [t(pts) for t in ev.terms]
    partial_vals = [s(pts) for s in ev.partial_sums()]
    try:
        reference = rl_derivative(f * g, args.alpha)
        ref_vals = reference(pts)
    except DomainError:
        reference, ref_vals = None, None
    payload = {
        "alpha": ev.alpha,
        "f": str(f),
        "g": str(g),
        "K": ev.K,
        "terminated": ev.terminated,
        "terms": [str(t) for t in ev.terms],
        "partial": str(ev.partial),
        "points": ev.points,
        "term_values": term_vals,
        "partial_values": ev.partial(pts),
        "tail": ev.tail,
        "reference": None if reference is None else str(reference),
        "reference_values": ref_vals,
    }
    if args.format == "json":
        return to_json(payload) + "\n"
    rows = [
        (k, x, term_vals[k][j], partial_vals[k][j])
        for k in range(ev.K + 1)
        for j, x in enumerate(pts)
    ]
    if args.format == "csv":
        return _csv_text(["k", "x", "term", "partial_sum"], rows)
    out = [
        f"generalized Leibniz series, alpha = {ev.alpha!r}, f = {f}, g = {g}, K = {ev.K}",
        f"terminated: {str(ev.terminated).lower()}",
        f"partial sum: {ev.partial}",
        f"tail |term K| max: {ev.tail:.17g}",
    ]
    if not ev.terminated:
        out.append("series not terminated: partial sums are reported without a convergence claim")
    text = "\n".join(out) + "\n" + _table(["k", "x", "term", "partial_sum"], rows)
    if reference is not None:
        text += f"reference RL derivative of f*g: {reference}\n"
        text += _table(
            ["x", "partial", "reference", "difference"],
            [(x, p, r, p - r) for x, p, r in zip(pts, ev.partial(pts), ref_vals)],
        )
    return text


def _evaluable_text(e):
    return str(e) if isinstance(e, PowerSum) else f"<grid h={e.h!r}, N={e.N}>"


def cmd_audit(args):
    op = parse_operator(args.op)
    probes = [parse_function(p) for p in args.probe] if args.probe else None
    pts = _points(args.points, default_audit_points())
    tol = _tolerance(args.tol)
    rep = classify(op, probes=probes, points=pts, tol=tol)
    payload = {
        "spec": str(op),
        "classification": rep.classification.value,
        "b_max": rep.b_max,
        "linearity_residual": rep.linearity_residual,
        "local_form_residual": rep.local_form_residual,
        "defect_max": rep.defect_max,
        "witness": {"kind": rep.witness.kind, "detail": rep.witness.detail, "value": rep.witness.value},
        "tolerance": rep.tolerance,
        "a_extract": _evaluable_text(rep.a_extract),
        "b_extract": _evaluable_text(rep.b_extract),
        "points": rep.points,
        "probe_residuals": rep.probe_residuals,
        "pair_defects": rep.pair_defects,
        "skipped": [list(s) for s in rep.skipped],
    }
    if args.format == "json":
        return to_json(payload) + "\n"
    pair_rows = [(label, x, d) for label, ds in rep.pair_defects.items() for x, d in zip(rep.points, ds)]
    if args.format == "csv":
        return _csv_text(["pair", "x", "delta"], pair_rows)
    lines = [
        f"operator: {op}",
        f"classification: {rep.classification.value}",
        f"a(x) = op(x) - x op(1): {_evaluable_text(rep.a_extract)}",
        f"b(x) = op(1): {_evaluable_text(rep.b_extract)}",
        f"max |b|: {rep.b_max:.17g}",
        f"linearity residual: {rep.linearity_residual:.17g}",
        f"local-form residual: {rep.local_form_residual:.17g}",
        f"defect max: {rep.defect_max:.17g}",
        f"tolerance: {rep.tolerance:.17g}",
        f"witness: {rep.witness.kind} {json.dumps(rep.witness.detail, sort_keys=True)} value {rep.witness.value:.17g}",
    ]
    for name, reason in rep.skipped:
        lines.append(f"skipped {name}: {reason}")
    if 1.0 in rep.points:
        lines.append("pair defects at x = 1:")
        i = rep.points.index(1.0)
        for label, ds in rep.pair_defects.items():
            lines.append(f"  {label}: {ds[i]:.17g}")
    lines.append("probe residuals:")
    for label, r in rep.probe_residuals.items():
        lines.append(f"  {label}: {r:.17g}")
    return "\n".join(lines) + "\n"


def cmd_hadamard(args):
    fn = parse_function(args.fn)
    x0 = args.x0
    if args.points:
        pts = _points(args.points, None)
    else:
        lo = x0 / 2 if x0 > 0 else 0.1
        hi = 2 * x0 if x0 > 0 else 1.0
        pts = np.linspace(lo, hi, 11)
    build = hadamard_first if args.order == 1 else hadamard_second
    dec = build(fn, x0, method=args.method)
    rem = dec.remainder_at(pts)
    res = dec.residual(pts)
    max_res = float(np.max(res))
    payload = {
        "fn": str(fn),
        "x0": x0,
        "order": dec.order,
        "f_at_x0": dec.f_at_x0,
        "deriv_at_x0": dec.deriv_at_x0,
        "remainder": str(dec.remainder) if dec.exact else None,
        "points": pts,
        "remainder_values": rem,
        "residual": res,
        "max_residual": max_res,
    }
    if args.format == "json":
        text = to_json(payload) + "\n"
    elif args.format == "csv":
        text = _csv_text(["x", "remainder", "residual"], list(zip(pts, rem, res)))
    else:
        name = "g" if dec.order == 1 else "g2"
        lines = [
            f"Hadamard decomposition of order {dec.order} of {fn} at x0 = {x0!r}",
            f"f(x0) = {dec.f_at_x0:.17g}",
        ]
        if dec.order == 2:
            lines.append(f"f'(x0) = {dec.deriv_at_x0:.17g}")
        lines.append(f"{name}(x) = {dec.remainder}" if dec.exact else f"{name}(x) by quadrature")
        lines.append(f"max reconstruction residual: {max_res:.17g}")
        text = "\n".join(lines) + "\n" + _table(["x", name, "residual"], list(zip(pts, rem, res)))
    if max_res > HADAMARD_TOL:
        raise ToleranceError(f"reconstruction residual {max_res:.3g} exceeds {HADAMARD_TOL:g}", text)
    return text


def convergence_rows(fn: PowerSum, alpha: float, x: float, steps):
    """Rows (h, GL value, exact value, error, observed order) at point ``x``."""
    exact = rl_derivative(fn, alpha)(x)
    rows = []
    prev = None
    for h in steps:
        n = max(2, math.ceil(x / h - 1e-9))
        gl = gl_derivative(sample(fn, h, n), alpha).at(x)
        err = abs(gl - exact)
        order = math.nan
        if prev is not None and err > 0 and prev[1] > 0:
            order = math.log(prev[1] / err) / math.log(prev[0] / h)
        rows.append((float(h), float(gl), float(exact), float(err), order))
        prev = (h, err)
    return rows


def cmd_convergence(args):
    fn = parse_function(args.fn)
    steps = [float(h) for h in _points(args.h, [1e-2, 5e-3, 2.5e-3, 1.25e-3])]
    rows = convergence_rows(fn, args.alpha, args.x, steps)
    if args.format == "json":
        return to_json({
            "fn": str(fn),
            "alpha": args.alpha,
            "x": args.x,
            "rows": [dict(zip(CONVERGENCE_HEADER, r)) for r in rows],
        }) + "\n"
    if args.format == "csv":
        return _csv_text(CONVERGENCE_HEADER, rows)
    head = f"GL({args.alpha!r}) vs exact RL derivative of {fn} at x = {args.x!r}\n"
    return head + _table(CONVERGENCE_HEADER, [r[:4] + ("" if math.isnan(r[4]) else r[4],) for r in rows])


# --- argument parsing ----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--out", help="write output to this path instead of stdout")

    p = argparse.ArgumentParser(prog="fracleib", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("deriv", parents=[common], help="apply an operator to a function")
    d.add_argument("--op", required=True)
    d.add_argument("--fn", required=True)
    d.add_argument("--points", nargs="+")
    d.add_argument("--grid", nargs=2, type=float, metavar=("H", "N"), help="tabulate at n*H, n = 1..N")
    d.set_defaults(run=cmd_deriv)

    d = sub.add_parser("defect", parents=[common], help="pointwise Leibniz defect")
    d.add_argument("--op", required=True)
    d.add_argument("--f", required=True)
    d.add_argument("--g", required=True)
    d.add_argument("--points", nargs="+")
    d.set_defaults(run=cmd_defect)

    d = sub.add_parser("series", parents=[common], help="generalized Leibniz series")
    d.add_argument("--f", required=True)
    d.add_argument("--g", required=True)
    d.add_argument("--alpha", type=float, required=True)
    d.add_argument("--K", type=int)
    d.add_argument("--points", nargs="+")
    d.set_defaults(run=cmd_series)

    d = sub.add_parser("audit", parents=[common], help="classify an operator")
    d.add_argument("--op", required=True)
    d.add_argument("--probe", action="append", help="probe function (repeatable)")
    d.add_argument("--points", nargs="+")
    d.add_argument("--tol", type=float, help=f"classification tolerance (default ${TOL_ENV} or {DEFAULT_TOL:g})")
    d.set_defaults(run=cmd_audit)

    d = sub.add_parser("hadamard", parents=[common], help="Hadamard decomposition")
    d.add_argument("--fn", required=True)
    d.add_argument("--x0", type=float, required=True)
    d.add_argument("--order", type=int, choices=[1, 2], default=1)
    d.add_argument("--points", nargs="+")
    d.add_argument("--method", choices=["auto", "exact", "quad"], default="auto")
    d.set_defaults(run=cmd_hadamard)

    d = sub.add_parser("convergence", parents=[common], help="GL convergence table")
    d.add_argument("--fn", required=True)
    d.add_argument("--alpha", type=float, required=True)
    d.add_argument("--x", type=float, default=1.0)
    d.add_argument("--h", nargs="+")
    d.set_defaults(run=cmd_convergence)
    return p


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ToleranceError as exc:
        if len(exc.args) > 1:
            _emit(exc.args[1], args.out)
        print(f"tolerance failure: {exc.args[0]}", file=sys.stderr)
        return EXIT_TOLERANCE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
