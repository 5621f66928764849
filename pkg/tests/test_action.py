from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsu11.action import (
    DEFAULT_CONFIG,
    GENERATORS,
    ActionConfig,
    Gen,
    act,
    act_qH,
    act_word,
    casimir,
    casimir_eigenvalue,
    check_module_algebra,
    derived_e0_constants,
    is_invariant,
    printed_e0_constants,
    select_twist,
)
from qsu11.algebra import (
    DELTA,
    MONO,
    AlgebraError,
    Base,
    Element,
    Layer,
    SpaceTag,
    format_element,
    letter,
    mul,
    normal_form,
    term_h_weight,
    term_weight,
)
from qsu11.distributions import make_e0
from qsu11.sampling import random_element, rng_for
from qsu11.scalars import ONE, qnum, qpow

XI = Base.XI


@pytest.mark.parametrize(
    "gen,name,expected",
    [
        (Gen.H, "t11", "t11"),
        (Gen.H, "t12", "-t12"),
        (Gen.H, "t11*", "-t11*"),
        (Gen.H, "t12*", "t12*"),
        (Gen.XPLUS, "t11", "0"),
        (Gen.XPLUS, "t12", "t11"),
        (Gen.XPLUS, "t11*", "q^-1 · t12*"),
        (Gen.XPLUS, "t12*", "0"),
        (Gen.XMINUS, "t11", "t12"),
        (Gen.XMINUS, "t12", "0"),
        (Gen.XMINUS, "t11*", "0"),
        (Gen.XMINUS, "t12*", "q · t11*"),
    ],
)
def test_generator_table(gen, name, expected):
    for base in (Base.X, XI):
        assert format_element(act(gen, letter(name, base))) == expected


def test_radial_example():
    assert format_element(act(Gen.XPLUS, letter("x", XI))) == "q^(-1/2) · t11 t12*"
    assert format_element(act(Gen.XMINUS, letter("x", XI))) == "q^(1/2) · t12 t11*"
    assert act(Gen.H, letter("x")).is_zero()


def test_e0_images():
    cp, cm = derived_e0_constants()
    e0 = make_e0()
    a, b, a_s = letter("t11"), letter("t12"), letter("t11*")
    bs = letter("t12*")
    assert act(Gen.XPLUS, e0) == mul(mul(a, bs), e0).scale(cp)
    assert act(Gen.XMINUS, e0) == mul(mul(b, e0), a_s).scale(cm)
    assert act(Gen.H, e0).is_zero()


def test_printed_constants_are_the_derived_ones_swapped():
    cp, cm = derived_e0_constants()
    assert printed_e0_constants() == (cm, cp)


def test_act_qH_uses_h_weight():
    assert act_qH(Fraction(1, 2), letter("t12*")) == letter("t12*").scale(qpow(Fraction(1, 2)))
    assert act_qH(1, letter("t11")) == letter("t11").scale(qpow(1))
    assert act_qH(1, letter("x")) == letter("x")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_weights_under_generators(seed):
    rng = rng_for(seed)
    for base in (Base.X, XI):
        f = random_element(rng, base)
        for t, c in f.data.items():
            single = Element(f.space, {t: c})
            h = term_h_weight(t)
            assert act(Gen.H, single) == single.scale(h)
            for gen, shift in ((Gen.XPLUS, 2), (Gen.XMINUS, -2)):
                image = act(gen, single)
                assert all(term_h_weight(s) == h + shift for s in image.data)
                assert all(term_weight(s) == term_weight(t) for s in image.data)


def test_module_algebra_default_twist():
    report = check_module_algebra(samples=20)
    assert report.passed, report.failures()[:3]


def test_twist_selection():
    candidates = [ActionConfig(a_plus=ap, a_minus=am) for ap in (Fraction(1, 2), Fraction(-1, 2)) for am in (Fraction(1, 2), Fraction(-1, 2))]
    chosen = select_twist(candidates, samples=4)
    assert (chosen.a_plus, chosen.a_minus) == (Fraction(-1, 2), Fraction(-1, 2))
    with pytest.raises(RuntimeError):
        select_twist([ActionConfig(a_plus=Fraction(1, 2))], samples=2)


def test_e0_constant_modes():
    printed = ActionConfig(e0_action="printed")
    assert not check_module_algebra(samples=0, config=printed, bases=(Base.X,)).passed
    cp, cm = printed_e0_constants()
    swapped = ActionConfig(e0_action="printed", c_plus=cm, c_minus=cp)
    assert check_module_algebra(samples=10, config=swapped, bases=(Base.X,)).passed
    with pytest.raises(ValueError):
        ActionConfig(e0_action="other")
    with pytest.raises(ValueError):
        ActionConfig(a_plus=Fraction(1, 3))


def test_leibniz_on_product():
    # X+(t12 t12) = X+(t12) q^(aH)(t12) + q^(bH)(t12) X+(t12)
    word = act_word(Gen.XPLUS, ["t12", "t12"], Base.X)
    b = letter("t12")
    expected = mul(act(Gen.XPLUS, b), b.scale(qpow(Fraction(1, 2)))) + mul(b.scale(qpow(Fraction(-1, 2))), act(Gen.XPLUS, b))
    assert word == expected
    assert act(Gen.XPLUS, normal_form(["t12", "t12"], SpaceTag(Base.X, Layer.POLYNOMIAL))) == word


@pytest.mark.parametrize("l", range(-3, 4))
@pytest.mark.parametrize("base", [Base.X, XI])
def test_casimir_eigenvalues(l, base):
    out = casimir({(MONO, l): ONE}, base)
    expected = casimir_eigenvalue(l)
    assert out == ({(MONO, l): expected} if expected else {})
    assert expected == qnum(l + 1) * qnum(l)


def test_casimir_rejects_grid_deltas_on_principal_space():
    with pytest.raises(AlgebraError):
        casimir({(DELTA, 0): ONE}, Base.X)
    assert casimir({(DELTA, 0): ONE}, XI)


def test_invariance_predicate():
    assert is_invariant(Element.one(SpaceTag(Base.X, Layer.POLYNOMIAL)))
    assert not is_invariant(letter("x"))
    assert not is_invariant(make_e0())
    assert DEFAULT_CONFIG.twist(Gen.H) == (0, 0)
    assert len(GENERATORS) == 3
