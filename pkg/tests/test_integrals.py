import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsu11.action import GENERATORS, Gen, act
from qsu11.algebra import DELTA, MONO, AlgebraError, Base, Element, Layer, SpaceTag, letter, mul, x_power
from qsu11.distributions import make_e0
from qsu11.integrals import (
    IntegralTag,
    check_integral_invariance,
    check_trace_property,
    eta_witnesses,
    integrate,
    nu,
    nu_xi_witness,
    radial_sum,
    trace_l,
    trace_property_check,
)
from qsu11.sampling import random_finite, random_homogeneous, rng_for
from qsu11.scalars import ONE, ZERO, qpow


def _delta(base, n):
    return Element(SpaceTag(base, Layer.FINITE), {(0, 0, 0, DELTA, n): ONE})


def test_values_on_deltas():
    assert nu(make_e0()) == 1 - qpow(2)
    # the delta at x = q^(2n) weighs (1 - q^2) q^(2n)
    assert nu(_delta(Base.X, -2)) == (1 - qpow(2)) * qpow(-4)
    assert nu(_delta(Base.XI, -3)) == (1 - qpow(2)) * qpow(-6)
    assert trace_l(make_e0()) == 1 - qpow(2)
    assert nu(mul(letter("t11"), make_e0())) == ZERO


def test_radial_sum_needs_finite_support():
    with pytest.raises(AlgebraError):
        radial_sum(Base.X, {(MONO, 0): ONE, (DELTA, 0): ONE})
    with pytest.raises(AlgebraError):
        nu(letter("x"))
    with pytest.raises(AlgebraError):
        integrate(IntegralTag.NU_XI, make_e0())


@pytest.mark.parametrize("tag", [IntegralTag.NU_X, IntegralTag.NU_XI, IntegralTag.ETA])
def test_invariance_reports(tag):
    report = check_integral_invariance(tag, samples=100, seed=1)
    assert report.passed, report.failures()[:3]
    assert len(report.checks) >= 300


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([Base.X, Base.XI]))
def test_generator_images_integrate_to_zero(seed, base):
    f = random_finite(rng_for(seed), base, terms=5)
    for gen in GENERATORS:
        assert nu(act(gen, f)).is_zero()


def test_naive_functional_is_not_invariant():
    # dropping the measure factor x breaks invariance
    def plain(f):
        return sum((c for (i, k, j, _, _), c in f.data.items() if (i, k, j) == (0, 0, 0)), ZERO)

    f = mul(mul(letter("t11"), make_e0()), letter("t12*"))
    assert any(plain(act(g, f)) != 0 for g in GENERATORS)


def test_eta_witnesses():
    w1, w2 = eta_witnesses()
    assert integrate(IntegralTag.ETA, w1) == ONE
    for w in (w1, w2):
        for gen in GENERATORS:
            assert integrate(IntegralTag.ETA, act(gen, w)).is_zero()
    with pytest.raises(AlgebraError):
        integrate(IntegralTag.ETA, x_power(Base.XI, -2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_eta_on_random_degree_minus_one(seed):
    f = random_homogeneous(rng_for(seed), -1)
    for gen in GENERATORS:
        assert integrate(IntegralTag.ETA, act(gen, f)).is_zero()


def test_cone_witness_uses_whole_grid():
    for n in (-2, 0, 3):
        w = nu_xi_witness(n)
        for gen in GENERATORS:
            assert nu(act(gen, w)).is_zero()
    assert nu(act(Gen.XPLUS, nu_xi_witness(0))) == ZERO


def test_trace_property():
    assert check_trace_property(samples=100).passed
    a, e0 = letter("t11"), make_e0()
    f1, f2 = mul(a, e0), mul(e0, letter("t11*"))
    assert trace_property_check(f1, f2)
    assert nu(mul(f1, f2)) != nu(mul(f2, f1))
