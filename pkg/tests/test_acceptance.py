"""One test per acceptance criterion; conftest prints a pass/fail line for each."""

import json
import time
from pathlib import Path

from qsu11.action import (
    GENERATORS,
    ActionConfig,
    casimir,
    casimir_eigenvalue,
    check_module_algebra,
    select_twist,
)
from qsu11.algebra import (
    MONO,
    Base,
    Element,
    Layer,
    SpaceTag,
    embed_disc,
    mul,
    natural_layer,
    normal_form,
    star,
)
from qsu11.cli import main
from qsu11.distributions import make_e0, solve_e0_all
from qsu11.integrals import IntegralTag, check_integral_invariance, check_trace_property, eta_witnesses
from qsu11.kernels import (
    PAIRS,
    TensorElement,
    check_continuation,
    check_kernel_invariance,
    check_operator_morphism,
    check_sharp,
    continue_kernel,
    finite_test_functions,
    is_invariant,
    kernel_power_direct,
    lemma65_check,
    pairing,
    prop69_check,
    scalar_shadow_remainder,
    tensor_mul,
    all_kernels,
    verify_k_relations,
)
from qsu11.sampling import random_element, random_finite, random_word, rng_for
from qsu11.scalars import ONE, LambdaScalar, qpochhammer, qpow, verify_pochhammer_expansion
from qsu11.suites import SuiteConfig, run_suite

THREE_PAIRS = [PAIRS["xx"], PAIRS["xxi"], PAIRS["xix"]]


def _dist(f):
    return f.with_layer(natural_layer(f))


def test_criterion_01_relations():
    start = time.perf_counter()
    rng = rng_for(101)
    for base in (Base.X, Base.XI):
        space = SpaceTag(base, Layer.DISTRIBUTION)
        for _ in range(500):
            word = random_word(rng, base, max_len=8, with_e0=True)
            i, j = sorted(rng.randint(0, len(word)) for _ in range(2))
            a, b, c = (_dist(normal_form(w, space)) for w in (word[:i], word[i:j], word[j:]))
            whole = normal_form(word, space)
            assert mul(_dist(mul(a, b)), c) == whole
            assert mul(a, _dist(mul(b, c))) == whole
    assert time.perf_counter() - start < 10


def test_criterion_02_involution():
    rng = rng_for(202)
    for n in range(200):
        base = Base.X if n % 2 else Base.XI
        f, g = random_element(rng, base), random_element(rng, base)
        assert star(star(f)) == f
        assert star(mul(f, g)) == mul(star(g), star(f))
    for bases in PAIRS.values():
        report = check_sharp(bases)
        assert report.passed, report.failures()


def test_criterion_03_e0():
    report = run_suite("e0", SuiteConfig())
    assert report.passed, report.failures
    for trunc in (4, 6, 8):
        nonzero = [f for f in solve_e0_all(trunc) if not f.is_zero()]
        assert nonzero == [make_e0()]


def test_criterion_04_disc_embedding():
    z, zs, f0 = (embed_disc([n]) for n in ("z", "z*", "f0"))
    one = Element.one(SpaceTag(Base.X, Layer.LOCALIZED))
    assert mul(zs, z) - mul(z, zs).scale(qpow(2)) == one.scale(1 - qpow(2))
    assert f0 == make_e0()
    assert mul(zs, f0).is_zero() and mul(f0, z).is_zero()
    assert run_suite("embed", SuiteConfig()).passed


def test_criterion_05_module_algebra():
    report = check_module_algebra(samples=50)
    assert report.passed, report.failures()[:3]
    candidates = [ActionConfig(a_plus=ap, a_minus=am) for ap in (1 / 2, -1 / 2) for am in (1 / 2, -1 / 2)]
    assert select_twist(candidates, samples=5) == ActionConfig()


def test_criterion_06_integral_invariance():
    for tag in (IntegralTag.NU_X, IntegralTag.NU_XI, IntegralTag.ETA):
        report = check_integral_invariance(tag, samples=100, seed=6)
        assert report.passed, report.failures()[:3]
        assert len({c.name.split()[1] for c in report.checks}) >= 100
    assert len(eta_witnesses()) == 2


def test_criterion_07_casimir():
    for base in (Base.X, Base.XI):
        for l in range(-3, 4):
            out = casimir({(MONO, l): ONE}, base)
            expected = casimir_eigenvalue(l)
            assert out == ({(MONO, l): expected} if expected else {})


def test_criterion_08_kernel_invariance():
    for bases in PAIRS.values():
        report = check_kernel_invariance(bases)
        assert report.passed and len(report.checks) == 12


def test_criterion_09_kernel_relations():
    for bases in THREE_PAIRS:
        report = verify_k_relations(bases)
        assert report.passed, report.failures()
        k = all_kernels(bases)
        det = tensor_mul(k["k22"], k["k11"]) - tensor_mul(k["k12"], k["k21"]).scale(qpow(1))
        expected = TensorElement.one(bases) if bases == PAIRS["xx"] else TensorElement.zero(bases)
        assert det == expected


def test_criterion_10_double_sum_expansion():
    start = time.perf_counter()
    for l in range(4):
        assert lemma65_check(l)
    assert time.perf_counter() - start < 60


def test_criterion_11_lambda_continuation():
    xx = PAIRS["xx"]
    lk = continue_kernel(cap=3)
    tests = finite_test_functions(xx)
    report = check_continuation(lk, tests)
    assert report.passed, report.failures()[:3]
    values = [lk.pair(F) for F in tests]
    assert sum(1 for v in values if v) >= 20
    assert all(isinstance(v, LambdaScalar) for v in values)
    for l in range(4):
        K = kernel_power_direct(l, xx)
        assert all(v.substitute(qpow(2 * l)) == pairing(K, F) for v, F in zip(values, tests))


def test_criterion_12_inverse_series():
    for l in (1, 2):
        report = prop69_check(l, 8)
        assert report.passed, report.failures()
        assert all(p > 8 for p in scalar_shadow_remainder(l, 8))
    assert run_suite("prop69", SuiteConfig(trunc=8)).passed


def test_criterion_13_trace():
    assert check_trace_property(samples=100, seed=13).passed


def test_criterion_14_operator_morphism():
    xx = PAIRS["xx"]
    K = kernel_power_direct(2, xx)
    assert is_invariant(K)
    rng = rng_for(14)
    fs = [random_finite(rng, Base.X, terms=3) for _ in range(20)]
    report = check_operator_morphism(K, fs)
    assert report.passed and len(report.checks) == 20 * len(GENERATORS)


def test_criterion_15_qseries():
    for n in range(11):
        assert verify_pochhammer_expansion(n)
    assert qpochhammer(None, qpow(1), 0) == {0: ONE}
    assert qpochhammer(qpow(-3), qpow(1), 4) == 0
    assert run_suite("qseries", SuiteConfig()).passed


def test_criterion_16_cli(capsys):
    golden = Path(__file__).parent / "golden" / "normalize.tsv"
    rows = [line.split("\t") for line in golden.read_text(encoding="utf-8").splitlines()]
    assert len(rows) == 25
    for space, expr, expected in rows:
        args = ["--pair", space] if space in PAIRS else ["--space", space]
        assert main(["normalize", *args, expr]) == 0
        assert capsys.readouterr().out.rstrip("\n") == expected
    outputs = []
    for _ in range(2):
        assert main(["verify", "k-relations", "--json"]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1] and json.loads(outputs[0])["passed"]
    assert main(["verify", "nonsense"]) == 2
    assert main(["normalize", "t11 +"]) == 2
    capsys.readouterr()
