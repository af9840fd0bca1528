"""Fractional derivatives, the generalized Leibniz series and Leibniz-rule audits."""

from .audit import AuditReport, Classification, check_linearity, classify, extract_local_form
from .errors import DomainError, FracError, ParseError, PoleError, ToleranceError
from .fracops import caputo_derivative, frac_diffint, gl_derivative, rl_derivative, rl_integral
from .funclass import (
    ONE,
    X,
    ZERO,
    Domain,
    GridFunction,
    PowerSum,
    PowerTerm,
    add,
    classical_derivative,
    constant,
    eval_sum,
    monomial,
    multiply,
    sample,
    scale,
)
from .hadamard import HadamardDecomposition, Smooth, hadamard_first, hadamard_second
from .leibniz import DefectReport, SeriesEvaluation, leibniz_defect, leibniz_series
from .operators import GL, RL, Caputo, Classical, LinearCombo, LocalForm, apply_operator
from .parser import parse_function, parse_operator
from .specfun import gamma, gen_binom, rgamma

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "Classification",
    "check_linearity",
    "classify",
    "extract_local_form",
    "DomainError",
    "FracError",
    "ParseError",
    "PoleError",
    "ToleranceError",
    "caputo_derivative",
    "frac_diffint",
    "gl_derivative",
    "rl_derivative",
    "rl_integral",
    "ONE",
    "X",
    "ZERO",
    "Domain",
    "GridFunction",
    "PowerSum",
    "PowerTerm",
    "add",
    "classical_derivative",
    "constant",
    "eval_sum",
    "monomial",
    "multiply",
    "sample",
    "scale",
    "HadamardDecomposition",
    "Smooth",
    "hadamard_first",
    "hadamard_second",
    "DefectReport",
    "SeriesEvaluation",
    "leibniz_defect",
    "leibniz_series",
    "GL",
    "RL",
    "Caputo",
    "Classical",
    "LinearCombo",
    "LocalForm",
    "apply_operator",
    "parse_function",
    "parse_operator",
    "gamma",
    "gen_binom",
    "rgamma",
]
