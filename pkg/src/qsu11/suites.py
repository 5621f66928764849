"""Named verification suites and their reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import kernels as kc
from .action import (
    DEFAULT_CONFIG,
    GENERATORS,
    ActionConfig,
    Gen,
    Report,
    act,
    act_qH,
    casimir,
    casimir_eigenvalue,
    check_module_algebra,
    is_invariant,
    select_twist,
)
from .algebra import (
    Base,
    Element,
    Layer,
    SpaceTag,
    delta,
    disc_z,
    disc_z_right_inverse_form,
    embed_disc,
    eval_coeff,
    letter,
    mul,
    natural_layer,
    normal_form,
    radial,
    star,
    t12_inverse,
    t12_star_inverse,
    weight,
    MONO,
)
from .distributions import (
    e0_decomposition,
    finiteness_criterion,
    from_e0_words,
    make_e0,
    solve_e0_all,
    weight_space_check,
)
from .integrals import IntegralTag, check_integral_invariance, check_trace_property, integrate
from .sampling import random_element, random_finite, random_word, rng_for
from .scalars import (
    ONE,
    ZERO,
    LambdaScalar,
    Q,
    qbinomial_series,
    qnum,
    qpochhammer,
    qpow,
    sh_ratio,
    verify_pochhammer_expansion,
)

SUITES = (
    "relations",
    "e0",
    "embed",
    "nu-x",
    "nu-xi",
    "eta",
    "trace-l",
    "casimir",
    "module-algebra",
    "k-invariance",
    "k-relations",
    "lemma65",
    "prop67",
    "prop69",
    "sharp",
    "qseries",
)


@dataclass
class SuiteConfig:
    space: Optional[Base] = None
    pair: Optional[Tuple[Base, Base]] = None
    trunc: Optional[int] = None
    max_l: int = 3
    seed: int = 0
    samples: Optional[int] = None
    action: ActionConfig = DEFAULT_CONFIG

    def bases(self) -> List[Base]:
        return [self.space] if self.space is not None else [Base.X, Base.XI]

    def pairs(self) -> List[Tuple[Base, Base]]:
        if self.pair is not None:
            return [self.pair]
        return [kc.PAIRS["xx"], kc.PAIRS["xxi"], kc.PAIRS["xix"]]

    def echo(self) -> dict:
        return {
            "space": None if self.space is None else self.space.value,
            "pair": None if self.pair is None else [b.value for b in self.pair],
            "trunc": self.trunc,
            "max_l": self.max_l,
            "seed": self.seed,
            "samples": self.samples,
            "action": self.action.describe(),
        }


@dataclass
class SuiteReport:
    suite: str
    config: dict
    checks: List[Tuple[str, bool, str]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def failures(self) -> List[Tuple[str, bool, str]]:
        return [c for c in self.checks if not c[1]]

    def extend(self, report: Report, prefix: str = "") -> None:
        for c in report.checks:
            self.checks.append((prefix + c.name, c.passed, c.witness))

    def add(self, name: str, ok: bool, witness: str = "") -> None:
        self.checks.append((name, bool(ok), "" if ok else witness))

    def to_json_obj(self, timing: bool = False) -> dict:
        obj = {
            "suite": self.suite,
            "config": self.config,
            "passed": self.passed,
            "total": len(self.checks),
            "failed": len(self.failures),
            "checks": [
                {"id": name, "status": "pass" if ok else "fail", **({"witness": w} if not ok else {})}
                for name, ok, w in self.checks
            ],
        }
        if timing:
            obj["elapsed_seconds"] = round(self.elapsed, 3)
        return obj

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_json_obj(timing), indent=2, sort_keys=True, ensure_ascii=False)

    def to_text(self, verbose: bool = False, timing: bool = True) -> str:
        lines = [f"suite {self.suite}: {len(self.checks) - len(self.failures)}/{len(self.checks)} passed"]
        if timing:
            lines[0] += f" in {self.elapsed:.2f}s"
        for name, ok, w in self.checks:
            if not ok:
                lines.append(f"  FAIL {name}: {w}")
            elif verbose:
                lines.append(f"  ok   {name}")
        return "\n".join(lines)


# -- individual suites -----------------------------------------------------------------------


def _relations(cfg: SuiteConfig, out: SuiteReport) -> None:
    samples = cfg.samples or 500
    for base in cfg.bases():
        rng = rng_for(cfg.seed)
        space = SpaceTag(base, Layer.DISTRIBUTION)
        for s in range(samples):
            w1 = random_word(rng, base, max_len=4, with_e0=True)
            w2 = random_word(rng, base, max_len=4, with_e0=True)
            lhs = normal_form(w1 + w2, space)
            f1, f2 = (normal_form(w, space) for w in (w1, w2))
            rhs = mul(f1.with_layer(natural_layer(f1)), f2.with_layer(natural_layer(f2)))
            out.add(f"{base.value} concat #{s}", lhs == rhs, f"{' '.join(w1)} | {' '.join(w2)}")
        for s in range(samples // 5):
            f, g, h = (random_element(rng, base) for _ in range(3))
            out.add(f"{base.value} assoc #{s}", mul(mul(f, g), h) == mul(f, mul(g, h)), f"{f} ; {g} ; {h}")
        for s in range(samples // 5):
            f, g = random_element(rng, base), random_element(rng, base)
            out.add(f"{base.value} star antihom #{s}", star(mul(f, g)) == mul(star(g), star(f)), f"{f} ; {g}")
            out.add(f"{base.value} star involutive #{s}", star(star(f)) == f, str(f))
        for s in range(samples // 10):
            f, g = random_element(rng, base), random_element(rng, base)
            wf, wg, wfg = weight(f), weight(g), weight(mul(f, g))
            conv: Dict[int, Element] = {}
            for a, fa in wf.items():
                for b, gb in wg.items():
                    p = mul(fa, gb)
                    conv[a + b] = conv[a + b] + p if a + b in conv else p
            conv = {k: v for k, v in conv.items() if not v.is_zero()}
            out.add(f"{base.value} weight grading #{s}", conv == wfg, f"{f} ; {g}")


def _e0(cfg: SuiteConfig, out: SuiteReport) -> None:
    e0 = make_e0()
    t = {n: letter(n) for n in ("t11", "t12", "t11*", "t12*")}
    out.add("t12 e0 = e0 t12", mul(t["t12"], e0) == mul(e0, t["t12"]))
    out.add("t12* e0 = e0 t12*", mul(t["t12*"], e0) == mul(e0, t["t12*"]))
    out.add("t11* e0 = 0", mul(t["t11*"], e0).is_zero())
    out.add("e0 t11 = 0", mul(e0, t["t11"]).is_zero())
    out.add("e0 e0 = e0", mul(e0, e0) == e0)
    out.add("e0* = e0", star(e0) == e0)
    out.add("psi(1) = 1", eval_coeff(e0, (0, 0, 0), 0) == ONE)
    for m in range(1, 4):
        out.add(f"psi(q^-{2 * m}) = 0", eval_coeff(e0, (0, 0, 0), m) == ZERO)
    for trunc in (cfg.trunc,) if cfg.trunc else (4, 6, 8):
        sols = [f for f in solve_e0_all(trunc) if not f.is_zero()]
        out.add(f"unique nonzero solution at truncation {trunc}", len(sols) == 1 and sols[0] == e0, str(sols))
    r = finiteness_criterion(e0)
    out.add("e0 finite with N = 1", r.finite and r.witness == 1, str(r))
    out.add("1 is not finite", not finiteness_criterion(Element.one(SpaceTag(Base.X, Layer.POLYNOMIAL))).finite)
    f = mul(mul(t["t11"], e0), t["t12*"])
    out.add("t11 e0 t12* finite", finiteness_criterion(f).finite)
    rng = rng_for(cfg.seed)
    for s in range(cfg.samples or 30):
        g = random_finite(rng, Base.X)
        out.add(f"e0 expansion #{s}", from_e0_words(e0_decomposition(g)) == g, str(g))
        out.add(f"finiteness #{s}", finiteness_criterion(g).finite, str(g))
    e0e0 = mul(e0, e0)
    for gen in GENERATORS:
        out.add(f"{gen.value}(e0 e0) = {gen.value}(e0)", act(gen, e0e0, cfg.action) == act(gen, e0, cfg.action))


def _embed(cfg: SuiteConfig, out: SuiteReport) -> None:
    z, zs = embed_disc(["z"]), embed_disc(["z*"])
    one = Element.one(SpaceTag(Base.X, Layer.LOCALIZED))
    out.add("z = q t11 t12^-1", z == mul(letter("t11"), t12_inverse()).scale(qpow(1)), str(z))
    out.add("z* z - q^2 z z* = 1 - q^2", mul(zs, z) - mul(z, zs).scale(qpow(2)) == one.scale(1 - qpow(2)))
    out.add("z z* = 1 - x^-1", mul(z, zs) == one - radial(Base.X, {(MONO, -1): ONE}))
    out.add("f0 -> e0", embed_disc(["f0"]) == make_e0())
    out.add("z* f0 = 0", embed_disc(["z*", "f0"]).is_zero())
    out.add("f0 z = 0", embed_disc(["f0", "z"]).is_zero())
    out.add("star(z) = image of z*", star(z) == zs)
    out.add("t12 t12^-1 = 1", mul(letter("t12"), t12_inverse()) == one)
    out.add("t12^-1 t12 = 1", mul(t12_inverse(), letter("t12")) == one)
    out.add("t12* t12*^-1 = 1", mul(letter("t12*"), t12_star_inverse()) == one)
    out.add("t12*^-1 t12* = 1", mul(t12_star_inverse(), letter("t12*")) == one)
    out.add("q t12^-1 t11 = q z", disc_z_right_inverse_form() == z.scale(qpow(1)))
    rng = rng_for(cfg.seed)
    for s in range(cfg.samples or 20):
        word = [rng.choice(["z", "z*", "f0"]) for _ in range(rng.randint(1, 5))]
        starred = [{"z": "z*", "z*": "z", "f0": "f0"}[w] for w in reversed(word)]
        out.add(f"*-homomorphism #{s}", star(embed_disc(word)) == embed_disc(starred), " ".join(word))
    trunc = cfg.trunc or 3
    for m in (0, 1, -1, 2, -2):
        out.add(f"weight space {m} at truncation {trunc}", weight_space_check(m, trunc))


def _integral(tag: IntegralTag) -> Callable[[SuiteConfig, SuiteReport], None]:
    def run(cfg: SuiteConfig, out: SuiteReport) -> None:
        out.extend(check_integral_invariance(tag, cfg.samples or 100, cfg.seed, cfg.action))
        e0 = make_e0()
        if tag is IntegralTag.NU_X:
            out.add("nu(e0) = 1 - q^2", integrate(tag, e0) == 1 - qpow(2))
            out.add("nu(t11 e0) = 0", integrate(tag, mul(letter("t11"), e0)).is_zero())
        if tag is IntegralTag.ETA:
            out.add("eta(x^-1) = 1", integrate(tag, radial(Base.XI, {(MONO, -1): ONE})) == ONE)

    return run


def _trace(cfg: SuiteConfig, out: SuiteReport) -> None:
    out.extend(check_trace_property(cfg.samples or 100, cfg.seed))
    e0 = make_e0()
    t12, t12s, t11, t11s = (letter(n) for n in ("t12", "t12*", "t11", "t11*"))
    out.add("l(e0) = 1 - q^2", integrate(IntegralTag.TRACE_L, e0) == 1 - qpow(2))
    for name, f1, f2 in (
        ("(e0, e0)", e0, e0),
        ("(t12 e0, e0 t12*)", mul(t12, e0), mul(e0, t12s)),
        ("(t11 e0, e0 t11*)", mul(t11, e0), mul(e0, t11s)),
    ):
        lhs = integrate(IntegralTag.TRACE_L, mul(f1, f2))
        rhs = integrate(IntegralTag.TRACE_L, mul(f2, f1))
        out.add(f"trace {name}", lhs == rhs, f"{lhs} vs {rhs}")


def _casimir(cfg: SuiteConfig, out: SuiteReport) -> None:
    for base in cfg.bases():
        for l in range(-3, 4):
            phi = {(MONO, l): ONE}
            image = casimir(phi, base)
            want = casimir_eigenvalue(l)
            expected = {(MONO, l): want} if want else {}
            out.add(f"{base.value}: Omega x^{l} = [{l + 1}][{l}] x^{l}", image == expected, str(image))
            out.add(f"{base.value}: [{l + 1}][{l}] = sh ratio at l = {l}", want == sh_ratio(l))


def _module_algebra(cfg: SuiteConfig, out: SuiteReport) -> None:
    out.extend(check_module_algebra(cfg.samples or 50, cfg.seed, cfg.action, cfg.bases()))
    candidates = [
        ActionConfig(a_plus=Fraction(sp, 2), a_minus=Fraction(sm, 2)) for sp in (1, -1) for sm in (1, -1)
    ]
    try:
        chosen = select_twist(candidates)
        out.add("some candidate twist passes", True)
        out.add("selected twist agrees with the configured one",
                (chosen.a_plus, chosen.a_minus) == (cfg.action.a_plus, cfg.action.a_minus),
                f"selected a+ = {chosen.a_plus}, a- = {chosen.a_minus}")
    except RuntimeError as err:
        out.add("some candidate twist passes", False, str(err))
    rng = rng_for(cfg.seed)
    for base in cfg.bases():
        for s in range(20):
            f = random_element(rng, base)
            for w, comp in weight(f).items():
                plus = act(Gen.XPLUS, comp, cfg.action)
                minus = act(Gen.XMINUS, comp, cfg.action)
                out.add(f"{base.value} X+ keeps weight #{s}.{w}", all(k == w for k in weight(plus)), str(comp))
                out.add(f"{base.value} X- keeps weight #{s}.{w}", all(k == w for k in weight(minus)), str(comp))
        for s in range(20):
            f = random_element(rng, base)
            for h, comp in _h_components(f).items():
                out.add(f"{base.value} H eigenvalue #{s}.{h}", act(Gen.H, comp, cfg.action) == comp.scale(h), str(comp))
                for gen, shift in ((Gen.XPLUS, 2), (Gen.XMINUS, -2)):
                    image = act(gen, comp, cfg.action)
                    out.add(f"{base.value} {gen.value} shifts H by {shift} #{s}.{h}",
                            all(k == h + shift for k in _h_components(image)), str(comp))
    out.add("qH(1) t11 = q t11", act_qH(1, letter("t11")) == letter("t11").scale(qpow(1)))


def _h_components(f: Element) -> Dict[int, Element]:
    from .algebra import h_weight

    return h_weight(f)


def _k_invariance(cfg: SuiteConfig, out: SuiteReport) -> None:
    for pair in cfg.pairs():
        tag = f"({pair[0].value},{pair[1].value}) "
        out.extend(kc.check_kernel_invariance(pair, cfg.action), tag)
        k = kc.all_kernels(pair)
        products = {
            "k22 k11": kc.tensor_mul(k["k22"], k["k11"]),
            "k12 k21 + k11": kc.tensor_mul(k["k12"], k["k21"]) + k["k11"],
            "k11^2 k12": kc.tensor_mul(k["k11"] ** 2, k["k12"]),
            "k21 - q k22 k12": k["k21"] - kc.tensor_mul(k["k22"], k["k12"]).scale(qpow(1)),
        }
        for name, K in products.items():
            images = "; ".join(f"{g.value}: {kc.tensor_act(g, K, cfg.action)}" for g in GENERATORS)
            out.add(tag + f"{name} invariant", kc.is_invariant(K, cfg.action), images)
        out.add(tag + "t11 (x) 1 not invariant", not kc.is_invariant(kc.left("t11", pair), cfg.action))
        out.add(tag + "1 (x) 1 invariant", kc.is_invariant(kc.TensorElement.one(pair), cfg.action))


def _k_relations(cfg: SuiteConfig, out: SuiteReport) -> None:
    for pair in cfg.pairs():
        tag = f"({pair[0].value},{pair[1].value}) "
        out.extend(kc.verify_k_relations(pair), tag)
        out.extend(kc.commutation_lemmas(pair), tag)
    if cfg.pair is None:
        pair = kc.PAIRS["xix"]
        k = kc.all_kernels(pair)
        residual = kc.tensor_mul(k["k22"], k["k11"]) - kc.tensor_mul(k["k12"], k["k21"]).scale(qpow(1))
        out.add("(TildeXi,TildeX) k22 k11 - q k12 k21 is not 1", residual != kc.TensorElement.one(pair), str(residual))


def _lemma65(cfg: SuiteConfig, out: SuiteReport) -> None:
    pairs = [cfg.pair] if cfg.pair else [kc.PAIRS["xx"]]
    for pair in pairs:
        tag = f"({pair[0].value},{pair[1].value}) "
        for l in range(cfg.max_l + 1):
            direct, factored = kc.kernel_power_factored(l, pair)
            out.add(tag + f"l = {l} factored", direct == factored, str(direct - factored))
            out.add(tag + f"l = {l} double sum", direct == kc.lemma65_rhs(l, pair))
            blocks = kc.generalized_kernel_blocks(l, pair)
            total = blocks["j<m"] + blocks["j=m"] + blocks["j>m"]
            out.add(tag + f"l = {l} three blocks", total == direct)
            canon = kc.to_generalized_kernel(direct)
            out.add(tag + f"l = {l} canonical form idempotent", kc.to_generalized_kernel(canon) == canon)
        for l in range(1, cfg.max_l + 1):
            for j in range(l + 1):
                c = kc.expansion_coefficient(l, j)
                out.add(tag + f"diagonal coefficient l = {l}, j = {j}",
                        kc.diagonal_block_coefficient(l, j) == c * c * qpow(4 * j * l + 2 * j))


def _prop67(cfg: SuiteConfig, out: SuiteReport) -> None:
    for pair in cfg.pairs():
        tag = f"({pair[0].value},{pair[1].value}) "
        lk = kc.continue_kernel(cfg.max_l, pair)
        tests = kc.finite_test_functions(pair, count=cfg.samples)
        out.extend(kc.check_continuation(lk, tests, cfg.max_l), tag)
        nonzero = sum(1 for F in tests if lk.pair(F))
        out.add(tag + "at least 20 test functions pair nontrivially", nonzero >= 20, f"{nonzero} nonzero")
        e0e0 = kc.TensorElement.pure(delta(pair[0], 0), delta(pair[1], 0))
        out.add(tag + "lam = 1 gives the unit kernel", lk.evaluate(0) == kc.TensorElement.one(pair))
        out.add(tag + "e0 (x) e0 at lam = q^4",
                lk.pair(e0e0).substitute(qpow(4)) == kc.pairing(kc.kernel_power_direct(2, pair), e0e0))
        # integral operators with invariant kernels are module maps
        rng = rng_for(cfg.seed)
        fs = [_weight_zero_finite(rng, pair[1]) for _ in range(10)] + [random_finite(rng, pair[1]) for _ in range(10)]
        for l in (1, 2):
            K = kc.kernel_power_direct(l, pair)
            out.extend(kc.check_operator_morphism(K, fs, cfg.action), tag + f"operator k22^{l} k11^{l} ")
        K = kc.kernel_power_direct(1, pair)
        produced = sum(1 for f in fs if not kc.apply_integral_operator(K, f).is_zero())
        out.add(tag + "operator is nontrivial on the samples", produced > 0)
    for base in cfg.bases():
        trunc = cfg.trunc or 2
        det = kc.gram_determinant(base, trunc)
        out.add(f"{base.value} Gram determinant nonzero at truncation {trunc}", det != 0, str(det))


def _weight_zero_finite(rng, base: Base) -> Element:
    from .algebra import DELTA, grid_to_internal

    data = {}
    for _ in range(rng.randint(1, 3)):
        i = rng.randint(0, 2)
        j = 0 if i else rng.randint(0, 2)
        m = rng.randint(0, 3) if base is Base.X else rng.randint(-2, 2)
        data[(i, j - i, j, DELTA, grid_to_internal(base, m))] = ONE * rng.choice([1, -2, 3])
    return Element(SpaceTag(base, Layer.FINITE), data)


def _prop69(cfg: SuiteConfig, out: SuiteReport) -> None:
    order = cfg.trunc or 8
    pairs = [cfg.pair] if cfg.pair else [kc.PAIRS["xx"]]
    for pair in pairs:
        for l in range(1, min(cfg.max_l, 2) + 1):
            out.extend(kc.prop69_check(l, order, pair), f"l = {l}, N = {order}: ")
    for l in range(1, 4):
        series = qbinomial_series(qpow(2 * l), order)
        rem = kc.scalar_shadow_remainder(l, order)
        out.add(f"scalar shadow l = {l}, N = {order}", all(p > order for p in rem), str(rem))
        # (q^(2l-2) u; q^-2)_l is the same product as (u; q^2)_l
        from .scalars import pochhammer_poly

        out.add(f"(q^{2 * l - 2} u; q^-2)_{l} = (u; q^2)_{l}",
                pochhammer_poly(qpow(2 * l - 2), qpow(-2), l) == pochhammer_poly(ONE, qpow(2), l))
        out.add(f"series coefficients l = {l}", series[1] == (1 - qpow(2 * l)) / (1 - qpow(2)))
    geo = qbinomial_series(qpow(2), 4)
    out.add("l = 1 series is geometric", all(geo[n] == ONE for n in range(5)))


def _sharp(cfg: SuiteConfig, out: SuiteReport) -> None:
    for pair in cfg.pairs():
        tag = f"({pair[0].value},{pair[1].value}) "
        out.extend(kc.check_sharp(pair), tag)
        rng = rng_for(cfg.seed)
        k = kc.all_kernels(pair)
        kernels = list(k.values()) + [kc.kernel_power_direct(1, pair), kc.TensorElement.one(pair)]
        for s in range(cfg.samples or 10):
            f = random_finite(rng, pair[1])
            for idx, K in enumerate(kernels):
                out.add(tag + f"defining identity #{s}.{idx}", kc.sharp_defining_identity_check(K, f), str(f))
        for s in range(20):
            K = _random_kernel(rng, pair)
            out.add(tag + f"## = id #{s}", kc.sharp(kc.sharp(K)) == K, str(K))
            K2 = _random_kernel(rng, pair)
            out.add(tag + f"# antimultiplicative #{s}",
                    kc.sharp(kc.tensor_mul(K, K2)) == kc.tensor_mul(kc.sharp(K2), kc.sharp(K)), f"{K} ; {K2}")
    rng = rng_for(cfg.seed)
    for base in cfg.bases():
        for s in range(cfg.samples or 200):
            f = random_element(rng, base)
            out.add(f"{base.value} star involutive #{s}", star(star(f)) == f, str(f))


def _random_kernel(rng, pair) -> "kc.TensorElement":
    from .sampling import random_polynomial

    f1 = random_polynomial(rng, pair[0], terms=2)
    f2 = random_polynomial(rng, pair[1], terms=2)
    return kc.TensorElement.pure(f1, f2)


def _qseries(cfg: SuiteConfig, out: SuiteReport) -> None:
    for n in range(11):
        out.add(f"Pochhammer expansion n = {n}", verify_pochhammer_expansion(n))
    for n in range(1, 4):
        out.add(f"exponent j(n+1) rejected at n = {n}", not verify_pochhammer_expansion(n, shift=1))
    out.add("(t; q)_0 = 1", qpochhammer(None, Q, 0) == {0: ONE})
    out.add("(a; q)_0 = 1 for a scalar a", qpochhammer(qpow(3), Q, 0) == ONE)
    for n in range(4):
        out.add(f"(q^-{n}; q)_{n + 1} = 0", qpochhammer(qpow(-n), Q, n + 1) == ZERO)
        out.add(f"(1; q)_{n + 1} = 0", qpochhammer(ONE, Q, n + 1) == ZERO)
    out.add("(t; q)_1 = 1 - t", qpochhammer(None, Q, 1) == {0: ONE, 1: -ONE})
    out.add("[0] = 0", qnum(0) == ZERO)
    out.add("[1] = 1", qnum(1) == ONE)
    for n in range(1, 5):
        out.add(f"[-{n}] = -[{n}]", qnum(-n) == -qnum(n))
    lam = LambdaScalar({1: ONE})
    poly = qpochhammer(lam, qpow(2), 2)
    out.add("(lam; q^2)_2 is a polynomial in lam", poly.lam_degrees() == (0, 2))
    series = qbinomial_series(qpow(4), 6)
    inv = {0: ONE, 1: -(1 + qpow(2)), 2: qpow(2)}
    from .scalars import QSeries

    out.add("q-binomial inverts (u; q^2)_2 mod u^7", (QSeries(inv, 6) * series).is_one())
    try:
        qpochhammer(None, Q, -1)
        out.add("negative length rejected", False, "no error")
    except ValueError:
        out.add("negative length rejected", True)


_RUNNERS: Dict[str, Callable[[SuiteConfig, SuiteReport], None]] = {
    "relations": _relations,
    "e0": _e0,
    "embed": _embed,
    "nu-x": _integral(IntegralTag.NU_X),
    "nu-xi": _integral(IntegralTag.NU_XI),
    "eta": _integral(IntegralTag.ETA),
    "trace-l": _trace,
    "casimir": _casimir,
    "module-algebra": _module_algebra,
    "k-invariance": _k_invariance,
    "k-relations": _k_relations,
    "lemma65": _lemma65,
    "prop67": _prop67,
    "prop69": _prop69,
    "sharp": _sharp,
    "qseries": _qseries,
}


def run_suite(name: str, cfg: Optional[SuiteConfig] = None) -> SuiteReport:
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = cfg or SuiteConfig()
    report = SuiteReport(name, cfg.echo())
    start = time.perf_counter()
    _RUNNERS[name](cfg, report)
    report.elapsed = time.perf_counter() - start
    return report
