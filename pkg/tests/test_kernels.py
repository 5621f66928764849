import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsu11.action import GENERATORS, Gen, act
from qsu11.algebra import AlgebraError, Base, Element, Layer, SpaceTag, letter, mul, star
from qsu11.distributions import make_e0
from qsu11.kernels import (
    PAIRS,
    LambdaKernel,
    TensorElement,
    a_inverse,
    all_kernels,
    apply_integral_operator,
    check_continuation,
    check_kernel_invariance,
    check_operator_morphism,
    check_sharp,
    commutation_lemmas,
    continue_kernel,
    diagonal_block_coefficient,
    expansion_coefficient,
    finite_test_functions,
    generalized_kernel_blocks,
    gram_determinant,
    inverse_power_series,
    is_invariant,
    kernel_k,
    kernel_letters,
    kernel_power_direct,
    kernel_power_factored,
    left,
    lemma65_check,
    lemma65_rhs,
    pairing,
    prop69_check,
    relation_unit,
    right,
    scalar_shadow_remainder,
    sharp,
    sharp_defining_identity_check,
    shift_kernels,
    tensor_act,
    tensor_mul,
    to_generalized_kernel,
    verify_k_relations,
)
from qsu11.sampling import random_element, random_finite, rng_for
from qsu11.scalars import ONE, LambdaScalar, qpochhammer, qpow

XX = PAIRS["xx"]
MIXED = [PAIRS["xx"], PAIRS["xxi"], PAIRS["xix"]]
ALL = list(PAIRS.values())


def _one(base):
    return Element.one(SpaceTag(base, Layer.POLYNOMIAL))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(ALL))
def test_left_factor_multiplies_in_opposite_order(seed, bases):
    rng = rng_for(seed)
    a, c = random_element(rng, bases[0]), random_element(rng, bases[0])
    b, d = random_element(rng, bases[1]), random_element(rng, bases[1])
    lhs = tensor_mul(TensorElement.pure(a, b), TensorElement.pure(c, d))
    assert lhs == TensorElement.pure(mul(c, a), mul(b, d))


def test_kernel_printing():
    k = all_kernels(XX)
    assert str(k["k11"]) == "t12 tau12* - t11 tau11*"
    assert str(k["k12"]) == "t12 tau11 - q^-1 · t11 tau12"
    assert str(k["k21"]) == "q^-1 · t12* tau11* - t11* tau12*"
    assert str(k["k22"]) == "q^-2 · t12* tau12 - t11* tau11"
    letters = kernel_letters(XX)
    assert str(letters["z"]) == "q · x^-1 t12* t11"
    assert str(letters["zeta"]) == "q · tau11 tau12* xi^-1"


@pytest.mark.parametrize("bases", ALL)
def test_invariance_of_basic_kernels(bases):
    report = check_kernel_invariance(bases)
    assert report.passed and len(report.checks) == 12
    assert not is_invariant(left("t11", bases))
    k = all_kernels(bases)
    assert is_invariant(tensor_mul(k["k11"], k["k22"]) + k["k12"].scale(qpow(3)))


@pytest.mark.parametrize("bases", ALL)
def test_kernel_relations(bases):
    report = verify_k_relations(bases)
    assert report.passed, report.failures()


def test_determinant_relation_dichotomy():
    assert relation_unit(PAIRS["xx"]) == TensorElement.one(PAIRS["xx"])
    for name in ("xxi", "xix", "xixi"):
        bases = PAIRS[name]
        k = all_kernels(bases)
        value = tensor_mul(k["k22"], k["k11"]) - tensor_mul(k["k12"], k["k21"]).scale(qpow(1))
        assert value.is_zero()


@pytest.mark.parametrize("bases", ALL)
def test_sharp(bases):
    assert check_sharp(bases).passed
    k = all_kernels(bases)
    assert sharp(k["k11"]) == k["k22"].scale(qpow(2))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_sharp_is_antimultiplicative_involution(seed):
    rng = rng_for(seed)
    K1 = TensorElement.pure(random_element(rng, Base.X), random_element(rng, Base.X))
    K2 = TensorElement.pure(random_element(rng, Base.X), random_element(rng, Base.X))
    assert sharp(sharp(K1)) == K1
    assert sharp(tensor_mul(K1, K2)) == tensor_mul(sharp(K2), sharp(K1))


@pytest.mark.parametrize("bases", MIXED)
def test_commutation_rules(bases):
    report = commutation_lemmas(bases)
    assert report.passed, report.failures()


@pytest.mark.parametrize("l", range(4))
def test_factored_powers(l):
    direct, factored = kernel_power_factored(l, XX)
    assert direct == factored


def test_expansion_coefficients():
    assert expansion_coefficient(2, 0) == ONE
    assert expansion_coefficient(2, 3).is_zero()
    q2 = qpow(2)
    assert expansion_coefficient(1, 1) == (1 - qpow(-2)) / (1 - q2)


def test_double_sum_expansion():
    start = time.perf_counter()
    for l in range(4):
        assert lemma65_check(l)
        assert lemma65_check(l, PAIRS["xxi"])
    assert time.perf_counter() - start < 60


@pytest.mark.parametrize("l", [1, 2])
def test_generalized_kernel_blocks(l):
    blocks = generalized_kernel_blocks(l, XX)
    total = blocks["j<m"] + blocks["j=m"] + blocks["j>m"]
    assert total == kernel_power_direct(l, XX)
    K = lemma65_rhs(l, XX)
    assert to_generalized_kernel(to_generalized_kernel(K)) == to_generalized_kernel(K)
    assert diagonal_block_coefficient(1, 1) == qpow(2)


def test_inverse_series():
    s = shift_kernels(XX)
    assert tensor_mul(s["A"], a_inverse(XX)) == TensorElement.one(XX)
    # l = 1 is the geometric series
    u = s["u"]
    assert inverse_power_series(1, 4, XX) == sum((u ** n for n in range(1, 5)), TensorElement.one(XX))
    for l, order in ((1, 4), (2, 6), (1, 8), (2, 8)):
        report = prop69_check(l, order)
        assert report.passed, report.failures()
    assert all(p > 8 for p in scalar_shadow_remainder(3, 8))


def test_pairing_examples():
    e0 = make_e0()
    F = TensorElement.pure(e0, e0)
    assert pairing(TensorElement.one(XX), F) == (1 - qpow(2)) ** 2
    assert pairing(left("t11", XX), F).is_zero()
    with pytest.raises(AlgebraError):
        pairing(TensorElement.one(XX), TensorElement.pure(letter("x"), e0))
    for l in range(4):
        assert pairing(kernel_power_direct(l, XX), F) == (1 - qpow(2)) ** 2 * qpow(-2 * l)


def test_integral_operator_example():
    e0 = make_e0()
    K = TensorElement.pure(_one(Base.X), e0)
    assert apply_integral_operator(K, e0) == _one(Base.X).scale(1 - qpow(2))
    assert apply_integral_operator(kernel_k(1, 1, XX), e0).is_zero()
    with pytest.raises(AlgebraError):
        apply_integral_operator(K, letter("x"))


@pytest.mark.parametrize("l", [1, 2])
def test_operator_is_a_morphism(l):
    K = kernel_power_direct(l, XX)
    rng = rng_for(l)
    fs = [random_finite(rng, Base.X, terms=3) for _ in range(20)]
    assert check_operator_morphism(K, fs).passed


def test_sharp_defining_identity():
    rng = rng_for(5)
    for K in all_kernels(XX).values():
        for _ in range(5):
            assert sharp_defining_identity_check(K, random_finite(rng, Base.X, terms=2))


def test_lambda_continuation():
    lk = continue_kernel(cap=3)
    tests = finite_test_functions(XX)
    assert len(tests) >= 20
    report = check_continuation(lk, tests)
    assert report.passed, report.failures()[:3]
    nonzero = [F for F in tests if lk.pair(F)]
    assert len(nonzero) >= 20
    assert all(isinstance(lk.pair(F), LambdaScalar) for F in nonzero)
    e0 = make_e0()
    value = lk.pair(TensorElement.pure(e0, e0))
    assert value == LambdaScalar({-1: (1 - qpow(2)) ** 2})
    # at lam = 1 the continuation is the unit kernel
    for F in tests[:30]:
        assert lk.pair(F).substitute(ONE) == pairing(TensorElement.one(XX), F)


@pytest.mark.parametrize("bases", [PAIRS["xxi"], PAIRS["xix"]])
def test_lambda_continuation_mixed(bases):
    lk = continue_kernel(cap=2, bases=bases)
    assert check_continuation(lk, finite_test_functions(bases, count=60)).passed


@pytest.mark.parametrize("base,trunc", [(Base.X, 1), (Base.X, 2), (Base.XI, 1)])
def test_pairing_is_nondegenerate(base, trunc):
    assert gram_determinant(base, trunc) != 0


def test_tensor_action_on_pure_tensors():
    f1, f2 = letter("t12"), letter("t11*")
    K = TensorElement.pure(f1, f2)
    image = tensor_act(Gen.H, K)
    assert image == K.scale(-2)
    assert tensor_act(Gen.XPLUS, TensorElement.one(XX)).is_zero()


def test_json_roundtrip():
    for bases in ALL:
        for K in all_kernels(bases).values():
            assert TensorElement.from_json_obj(K.to_json_obj()) == K
        K = kernel_power_direct(2, bases)
        assert TensorElement.from_json_obj(K.to_json_obj()) == K
