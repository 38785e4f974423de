import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from nilcert import serialize as ser
from nilcert.certify import certify
from nilcert.errors import ParseError
from nilcert.exact.algebraic import AlgebraicReal
from nilcert.exact.quad import QuadExt
from nilcert.foliation import heisenberg_example, torus_example
from nilcert.linalg import Matrix
from nilcert.liealg import LieAlgebra


@given(rationals)
def test_rational_literal_round_trip(r):
    assert ser.parse_rational(ser.rational_to_literal(r)) == r


@given(rationals, rationals, st.sampled_from([2, 3, 5]))
def test_quad_literal_round_trip(a, b, p):
    x = QuadExt(a, b, p)
    y = ser.parse_scalar(json.loads(json.dumps(ser.scalar_to_literal(x))))
    assert y == x


@pytest.mark.parametrize("bad", ["1/0", "2/4", "1/-2", "x", 1.5, True, None, "1.0"])
def test_rational_literal_rejects(bad):
    with pytest.raises(ParseError):
        ser.parse_rational(bad)


def test_rational_literal_forms():
    assert ser.parse_rational("-3/4") == Fraction(-3, 4)
    assert ser.parse_rational(7) == 7
    assert ser.rational_to_literal(Fraction(6, 3)) == "2"


def test_quad_literal_rejects_bad_p():
    with pytest.raises(ParseError):
        ser.parse_scalar({"a": 1, "b": 1, "p": 4})
    with pytest.raises(ParseError):
        ser.parse_scalar({"a": 1, "b": 1})


def test_algebra_round_trip():
    g = LieAlgebra.from_brackets(4, {(0, 1): (0, 0, 1, 0), (0, 2): (0, 0, 0, Fraction(1, 2))})
    assert ser.parse_algebra(json.loads(json.dumps(ser.algebra_to_literal(g)))) == g


def test_algebra_parse_errors():
    with pytest.raises(ParseError, match="twice"):
        ser.parse_algebra({"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": [0, 0, 1]}] * 2})
    with pytest.raises(ParseError, match="out of range"):
        ser.parse_algebra({"dim": 2, "brackets": [{"i": 0, "j": 2, "coeffs": [0, 0]}]})
    with pytest.raises(ParseError, match="coefficients"):
        ser.parse_algebra({"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": [0, 1]}]})
    with pytest.raises(ParseError):
        ser.parse_algebra({"brackets": []})
    with pytest.raises(ParseError):
        ser.parse_algebra({"dim": 2, "field": "R"})


def test_algebraic_literal():
    x = AlgebraicReal.from_quad(QuadExt(Fraction(3, 2), Fraction(1, 2), 5))
    assert ser.parse_algebraic(ser.algebraic_to_literal(x)) == x
    with pytest.raises(ParseError):
        ser.parse_algebraic({"minpoly": ["1", "-3", "1"], "interval": ["-10", "10"]})


def test_problem_parse_and_certificate_round_trip():
    prob, strict = ser.parse_problem({
        "h": {"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": [0, 0, 1]}]},
        "F": [[2, 0, 0], [0, 3, 0], [0, 0, 6]],
        "strict": False,
    })
    assert not strict and prob.g == prob.h and prob.proj == Matrix.identity(3)
    cert = certify(prob, strict=False)
    d = ser.certificate_to_dict(cert)
    assert ser.certificate_from_dict(json.loads(ser.dumps(d))) == cert


def test_report_round_trip_is_exact_and_byte_stable():
    reports = torus_example(Matrix([[2, 1], [1, 1]])) + [heisenberg_example(2, (1, 1), ((1, 0), (0, 1)))]
    for r in reports:
        text = ser.dumps(ser.report_to_dict(r))
        back = ser.report_from_dict(json.loads(text))
        assert back == r
        assert ser.dumps(ser.report_to_dict(back)) == text


def test_input_records():
    assert ser.parse_torus({"A": [[2, 1], [1, 1]]}) == Matrix([[2, 1], [1, 1]])
    with pytest.raises(ParseError):
        ser.parse_torus({"A": [[1, "1/2"], [0, 1]]})
    assert ser.parse_heisenberg({"p": 2, "alpha": {"a": 1, "b": 1}, "M": [[1, 0], [0, 1]]}) == \
        (2, (1, 1), ((1, 0), (0, 1)))
    with pytest.raises(ParseError):
        ser.parse_heisenberg({"p": 2, "alpha": {"a": 1, "b": 1}, "M": [[1, 0]]})


def test_load_json_errors(tmp_path):
    with pytest.raises(ParseError, match="does not exist"):
        ser.load_json(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError, match="invalid JSON"):
        ser.load_json(str(bad))
