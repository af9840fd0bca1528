import os
import random

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from fracleib.funclass import ONE, X, ZERO, PowerSum, monomial
from fracleib.operators import GL, RL, Caputo, Classical, LinearCombo, LocalForm

ACCEPTANCE_RESULTS: dict = {}

# Reproducible example generation by default; HYPOTHESIS_PROFILE=explore draws fresh inputs.
settings.register_profile("repro", derandomize=True, database=None, print_blob=True)
settings.register_profile("explore", max_examples=300, print_blob=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))


def power_sums(max_terms=6, lo=-0.9, hi=4.0, coeff=10.0):
    """Random power sums with exponents in (lo, hi)."""
    term = st.tuples(
        st.floats(min_value=-coeff, max_value=coeff, allow_nan=False).filter(lambda c: abs(c) > 1e-3),
        st.floats(min_value=lo, max_value=hi, exclude_min=True, exclude_max=True),
    )
    return st.lists(term, min_size=1, max_size=max_terms).map(PowerSum)


def polynomials(max_degree=4, coeff=5.0):
    return st.lists(
        st.integers(min_value=-50, max_value=50).map(lambda n: n / 10.0),
        min_size=1,
        max_size=max_degree + 1,
    ).map(lambda cs: PowerSum([(c, float(k)) for k, c in enumerate(cs)]))


def magnitude(f: PowerSum, x):
    """sum |c| x^b, the scale against which rounding in f(x) is measured."""
    return PowerSum([(abs(c), b) for c, b in f.terms])(x)


# Built-in operator matrix with the side each spec must land on.
OPERATOR_MATRIX = [
    (Classical(), True),
    (LocalForm(ONE), True),
    (LocalForm(X), True),
    (LocalForm(monomial(1, 2)), True),
    (LocalForm(PowerSum([(2, 0.5), (-1, 3)])), True),
    (LocalForm(ONE, PowerSum([(3, 0)])), False),
    (LocalForm(monomial(1, 2), X), False),
    (RL(0.3), False),
    (RL(0.5), False),
    (RL(1.0), True),
    (RL(1.5), False),
    (Caputo(0.5), False),
    (Caputo(1.0), True),
    (LinearCombo(((2.0, Classical()), (-1.0, Classical()))), True),
    (LinearCombo(((1.0, RL(0.5)), (-1.0, RL(0.5)))), True),
    (LinearCombo(((1.0, Classical()), (1.0, RL(0.5)))), False),
    (LinearCombo(((3.0, LocalForm(X)), (0.5, RL(1.0)))), True),
    (LinearCombo(((1.0, Caputo(0.5)), (2.0, RL(0.3)))), False),
]


def _random_function(rng: random.Random) -> PowerSum:
    terms = []
    for _ in range(rng.randint(1, 5)):
        coeff = rng.choice([rng.randint(-9, 9), round(rng.uniform(-50, 50), rng.randint(0, 6)), rng.uniform(-1e3, 1e3)])
        exponent = rng.choice([float(rng.randint(0, 5)), round(rng.uniform(-0.95, 4), 3), rng.uniform(-0.95, 4)])
        terms.append((coeff, exponent))
    return PowerSum(terms)


def _random_operator(rng: random.Random, depth: int = 0):
    kind = rng.randrange(6 if depth < 2 else 5)
    if kind == 0:
        return Classical(rng.randint(1, 3))
    if kind == 1:
        return RL(rng.choice([0.3, 0.5, 1.0, 1.5, rng.uniform(0.01, 1.99)]))
    if kind == 2:
        return Caputo(rng.choice([0.5, 1.0, rng.uniform(0.01, 1.0)]))
    if kind == 3:
        return GL(rng.uniform(0.05, 1.95), rng.choice([1e-3, 0.01, rng.uniform(1e-4, 0.1)]))
    if kind == 4:
        return LocalForm(_random_function(rng), rng.choice([ZERO, _random_function(rng)]))
    n = rng.randint(1, 3)
    return LinearCombo(tuple((rng.uniform(-5, 5), _random_operator(rng, depth + 1)) for _ in range(n)))


def parser_corpus(n: int = 200, seed: int = 7):
    """Seeded corpus of n/2 power sums and n/2 operator specs."""
    rng = random.Random(seed)
    half = n // 2
    return [_random_function(rng) for _ in range(half)], [_random_operator(rng) for _ in range(n - half)]


@pytest.fixture
def rng():
    return np.random.default_rng(20131101)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        status, title = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key:>2}: {status}  {title}")
