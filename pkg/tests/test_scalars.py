from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import V, pochhammer_expand, sympy_of
from qsu11.scalars import (
    ONE,
    ZERO,
    LambdaScalar,
    Q,
    QSeries,
    QSeriesTruncation,
    Scalar,
    pochhammer_expansion_coeff,
    qbinomial_series,
    qnum,
    qpochhammer,
    qpow,
    sh_ratio,
    verify_pochhammer_expansion,
    vpow,
)

small = st.integers(-6, 6)


@st.composite
def scalars(draw):
    num = [draw(small) for _ in range(draw(st.integers(1, 4)))]
    den = [draw(small) for _ in range(draw(st.integers(1, 3)))]
    shift = draw(st.integers(-3, 3))
    n = sum((c * vpow(i) for i, c in enumerate(num)), ZERO)
    d = sum((c * vpow(i) for i, c in enumerate(den)), ZERO)
    return n / (d or ONE) * vpow(shift)


def _sym(s):
    return sympy_of(s)


@settings(max_examples=150, deadline=None)
@given(scalars(), scalars())
def test_arithmetic_matches_sympy(a, b):
    assert sympy.simplify(_sym(a + b) - (_sym(a) + _sym(b))) == 0
    assert sympy.simplify(_sym(a * b) - _sym(a) * _sym(b)) == 0
    if b:
        assert sympy.simplify(_sym(a / b) - _sym(a) / _sym(b)) == 0


@settings(max_examples=100, deadline=None)
@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == ZERO
    if a:
        assert a * a.inverse() == ONE


@settings(max_examples=100, deadline=None)
@given(scalars())
def test_str_parse_roundtrip(a):
    assert Scalar.parse(str(a)) == a


@settings(max_examples=60, deadline=None)
@given(scalars(), st.fractions(min_value=Fraction(1, 5), max_value=Fraction(5, 2)))
def test_evaluate_matches_sympy(a, v):
    try:
        value = a.evaluate(v)
    except ZeroDivisionError:
        return
    assert value == Fraction(str(_sym(a).subs(V, sympy.Rational(v.numerator, v.denominator))))


def test_canonical_form_is_equality():
    a = (1 - qpow(2)) / (1 - qpow(1))
    assert a == 1 + qpow(1)
    assert hash(a) == hash(1 + qpow(1))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_half_integer_powers():
    assert qpow(Fraction(1, 2)) ** 2 == Q
    assert qpow(Fraction(-3, 2)) == vpow(-3)
    with pytest.raises(ValueError):
        qpow(Fraction(1, 3))


def test_q_printing():
    assert qpow(-1).q_str() == "q^-1"
    assert qpow(Fraction(-1, 2)).q_str() == "q^(-1/2)"
    assert (-qpow(Fraction(3, 2)) / (1 - qpow(2))).q_str() == "q^(3/2)/(q^2 - 1)"


@pytest.mark.parametrize("n", range(-4, 5))
def test_qnum(n):
    expected = (V ** (2 * n) - V ** (-2 * n)) / (V ** 2 - V ** -2)
    assert sympy.simplify(_sym(qnum(n)) - expected) == 0


@pytest.mark.parametrize("l", range(-3, 4))
def test_sh_ratio_equals_qnum_product(l):
    assert sh_ratio(l) == qnum(l + 1) * qnum(l)


@pytest.mark.parametrize("n", range(0, 7))
def test_pochhammer_against_sympy(n):
    ref = pochhammer_expand(n)
    ours = qpochhammer(None, Q, n)
    assert set(ours) == set(ref)
    for k, c in ours.items():
        assert sympy.simplify(_sym(c) - ref[k]) == 0


@pytest.mark.parametrize("n", range(0, 11))
def test_pochhammer_expansion_identity(n):
    assert verify_pochhammer_expansion(n)


@pytest.mark.parametrize("n", range(1, 5))
def test_shifted_exponent_is_wrong(n):
    # (t;q)_1 = 1 - t, but the shifted exponent gives 1 - q t
    assert not verify_pochhammer_expansion(n, shift=1)
    assert pochhammer_expansion_coeff(1, 1, shift=1) == -Q


def test_pochhammer_edge_cases():
    assert qpochhammer(None, Q, 0) == {0: ONE}
    assert qpochhammer(qpow(-3), Q, 4) == ZERO
    assert qpochhammer(qpow(5), Q, 0) == ONE
    with pytest.raises(ValueError):
        qpochhammer(None, Q, -1)


def test_qbinomial_geometric_case():
    series = qbinomial_series(qpow(2), QSeriesTruncation(4))
    assert all(series[n] == ONE for n in range(5))
    assert series[5] == ZERO


@pytest.mark.parametrize("l,order", [(1, 4), (2, 6), (3, 8)])
def test_qbinomial_inverts_pochhammer(l, order):
    poch = QSeries(qpochhammer(None, qpow(2), l), order)
    assert (poch * qbinomial_series(qpow(2 * l), order)).is_one()


def test_qbinomial_with_lambda():
    lam = LambdaScalar({1: ONE})
    series = qbinomial_series(lam, 3)
    assert series[1] == (1 - lam) / (1 - qpow(2))
    assert series[2].substitute(qpow(4)) == qbinomial_series(qpow(4), 3)[2]


def test_lambda_scalar_arithmetic():
    lam = LambdaScalar({1: ONE})
    p = (lam - 1) * (lam + 1)
    assert p == lam * lam - 1
    assert p.substitute(qpow(2)) == qpow(4) - 1
    assert p.lam_degrees() == (0, 2)
    assert LambdaScalar.parse("lam^2 - 1") == p
    with pytest.raises(ValueError):
        p / (lam + 1)
