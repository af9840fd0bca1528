import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import parser_corpus
from fracleib.errors import DomainError, ParseError
from fracleib.funclass import ONE, X, ZERO, PowerSum, monomial
from fracleib.operators import GL, RL, Caputo, Classical, LinearCombo, LocalForm
from fracleib.parser import MAX_DEPTH, parse_function, parse_operator


def test_function_examples():
    assert parse_function("1 + 2*x^0.5 - x^2").terms == ((1, 0), (2, 0.5), (-1, 2))
    assert parse_function("(1+x)*(1+x)").terms == ((1, 0), (2, 1), (1, 2))
    assert parse_function("x^(-0.5)").terms == ((1, -0.5),)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("0", ZERO),
        ("x - x", ZERO),
        ("  x\t^ 2 ", monomial(1, 2)),
        ("-x", monomial(-1, 1)),
        ("--x", X),
        ("-x^2", monomial(-1, 2)),
        ("2*3*x", monomial(6, 1)),
        ("x/4", monomial(0.25, 1)),
        ("(x + 1)/(1 + 1)", PowerSum([(0.5, 0), (0.5, 1)])),
        ("x^0.5*x^0.5", X),
        ("1e-3*x^1.5E0", monomial(1e-3, 1.5)),
        ("x^(+2)", monomial(1, 2)),
        (".5", PowerSum([(0.5, 0)])),
        ("x^0", ONE),
        ("((((x))))", X),
    ],
)
def test_function_grammar(text, expected):
    assert parse_function(text) == expected


def test_bytes_input():
    assert parse_function(b"1 + x") == PowerSum([(1, 0), (1, 1)])


def test_operator_examples():
    assert parse_operator("D") == Classical()
    assert parse_operator("RL(0.5)") == RL(0.5)
    assert parse_operator("local(a=x^2, b=0)") == LocalForm(monomial(1, 2), ZERO)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("d", Classical()),
        ("D^2", Classical(2)),
        ("caputo(1)", Caputo(1.0)),
        ("Caputo(0.25)", Caputo(0.25)),
        ("GL(0.5, h=0.001)", GL(0.5, 0.001)),
        ("gl(1.5, 0.01)", GL(1.5, 0.01)),
        ("local(a=1)", LocalForm(ONE)),
        ("local(a = 2*x, b = x^0.5)", LocalForm(monomial(2, 1), monomial(1, 0.5))),
        ("2*RL(0.5) - D", LinearCombo(((2.0, RL(0.5)), (-1.0, Classical())))),
        ("RL(0.5)*3", LinearCombo(((3.0, RL(0.5)),))),
        ("-D", LinearCombo(((-1.0, Classical()),))),
        ("(D)", Classical()),
        (
            "0.5*(RL(0.3) + D) - caputo(0.5)",
            LinearCombo(
                (
                    (0.5, LinearCombo(((1.0, RL(0.3)), (1.0, Classical())))),
                    (-1.0, Caputo(0.5)),
                )
            ),
        ),
    ],
)
def test_operator_grammar(text, expected):
    assert parse_operator(text) == expected


@pytest.mark.parametrize(
    "text,offset",
    [
        ("", 0),
        ("1 +", 3),
        ("x^", 2),
        ("y", 0),
        ("x + (1", 6),
        ("2^x", 1),
        ("x $ 1", 2),
        ("1 + é", 4),
        ("x^x", 2),
        ("x)", 1),
    ],
)
def test_function_errors_carry_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse_function(text)
    assert info.value.offset == offset


def test_unsupported_division():
    with pytest.raises(ParseError, match="constant"):
        parse_function("1/x")
    with pytest.raises(ParseError, match="zero"):
        parse_function("x/0")


def test_non_ascii_bytes():
    with pytest.raises(ParseError) as info:
        parse_function(b"x + \xff")
    assert info.value.offset == 4


def test_overflow_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_function("1e308*1e308*x")
    with pytest.raises(ParseError):
        parse_function("1e999")


def test_nesting_limit():
    deep = "(" * (MAX_DEPTH + 1) + "x" + ")" * (MAX_DEPTH + 1)
    with pytest.raises(ParseError, match="nesting"):
        parse_function(deep)
    ok = "(" * MAX_DEPTH + "x" + ")" * MAX_DEPTH
    assert parse_function(ok) == X


@pytest.mark.parametrize(
    "text,needle",
    [
        ("RL(2.5)", r"\(0, 2\)"),
        ("RL(0)", r"\(0, 2\)"),
        ("caputo(1.5)", r"\(0, 1\]"),
        ("GL(0.5, h=0)", "positive"),
        ("GL(3, 0.1)", r"\(0, 2\)"),
        ("D^0", "integer"),
        ("D^1.5", "integer"),
        ("foo(1)", "unknown operator"),
        ("2*3", "no operator"),
        ("RL(0.5)*D", "only one operator"),
        ("local(b=1)", "'a='"),
        ("RL(0.5) +", "operator"),
    ],
)
def test_operator_errors(text, needle):
    with pytest.raises(ParseError, match=needle):
        parse_operator(text)


def test_range_error_offset_points_at_order():
    with pytest.raises(ParseError) as info:
        parse_operator("D + RL(2.5)")
    assert info.value.offset == 7


# --- round trip ------------------------------------------------------------


FUNCTIONS, OPERATORS = parser_corpus()


@pytest.mark.parametrize("f", FUNCTIONS, ids=range(len(FUNCTIONS)))
def test_function_round_trip(f):
    text = str(f)
    parsed = parse_function(text)
    assert parsed == f
    assert str(parsed) == text


@pytest.mark.parametrize("op", OPERATORS, ids=range(len(OPERATORS)))
def test_operator_round_trip(op):
    text = str(op)
    parsed = parse_operator(text)
    assert str(parsed) == text
    assert parse_operator(str(parsed)) == parsed


# --- fuzz ------------------------------------------------------------------

ALPHABET = st.sampled_from(list("x0123456789.eE+-*/^() ,=DRLGhablocaputo") + ["RL(", "GL(", "local(a=", "caputo("])


def _total(parse, data):
    try:
        value = parse(data)
    except ParseError as exc:
        assert isinstance(exc.offset, int) and exc.offset >= 0
        return None
    return value


@given(st.binary(max_size=4096))
@settings(max_examples=300, deadline=None)
def test_fuzz_bytes(data):
    _total(parse_function, data)
    _total(parse_operator, data)


@given(st.lists(ALPHABET, max_size=60).map("".join))
@settings(max_examples=500, deadline=None)
def test_fuzz_grammar_shaped(text):
    f = _total(parse_function, text)
    if f is not None:
        assert parse_function(str(f)) == f
    op = _total(parse_operator, text)
    if op is not None:
        assert str(parse_operator(str(op))) == str(op)


def test_parse_error_is_value_error():
    assert issubclass(ParseError, ValueError)
    assert not issubclass(ParseError, DomainError)
