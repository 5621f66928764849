"""Kernels on products of two spaces.

A kernel lives in F1^op (x) F2: the left factor multiplies in the opposite
order, so (A (x) B)(C (x) D) = (C A) (x) (B D).  Elements are stored as flat
maps {(left basis term, right basis term): Scalar}.  Letters of the right
factor are written tau_ij, and x, e0 there become xi, eps0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .action import DEFAULT_CONFIG, GENERATORS, ActionConfig, Gen, Report, _act_term, _register, act
from .algebra import (
    DELTA,
    MONO,
    AlgebraError,
    Base,
    Element,
    Layer,
    SpaceTag,
    Term,
    _add_into,
    _letter_data,
    _mul_basis,
    coef_monomial,
    grid_to_internal,
    internal_to_grid,
    join_terms,
    monomial_parts,
    mul,
    star_term,
    term_h_weight,
    term_sort_key,
)
from .integrals import radial_sum
from .scalars import (
    ONE,
    ZERO,
    LambdaScalar,
    QSeriesTruncation,
    Scalar,
    as_scalar,
    pochhammer_poly,
    qbinomial_series,
    qpochhammer,
    qpow,
    vpow,
)

Pair = Tuple[Base, Base]
PAIRS = {
    "xx": (Base.X, Base.X),
    "xxi": (Base.X, Base.XI),
    "xix": (Base.XI, Base.X),
    "xixi": (Base.XI, Base.XI),
}
_UNIT: Term = (0, 0, 0, MONO, 0)


class TensorElement:
    """Finite sum of pure tensors of basis monomials."""

    __slots__ = ("bases", "data")

    def __init__(self, bases: Pair, data: Optional[dict] = None):
        self.bases = tuple(bases)
        self.data = {k: c for k, c in (data or {}).items() if c}

    @classmethod
    def pure(cls, f1: Element, f2: Element) -> "TensorElement":
        out = {}
        for t1, c1 in f1.data.items():
            for t2, c2 in f2.data.items():
                out[(t1, t2)] = c1 * c2
        return cls((f1.base, f2.base), out)

    @classmethod
    def one(cls, bases: Pair) -> "TensorElement":
        return cls(bases, {(_UNIT, _UNIT): ONE})

    @classmethod
    def zero(cls, bases: Pair) -> "TensorElement":
        return cls(bases, {})

    def is_zero(self) -> bool:
        return not self.data

    def _check(self, other: "TensorElement") -> None:
        if self.bases != other.bases:
            raise AlgebraError(f"kernel spaces differ: {self.bases} vs {other.bases}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = TensorElement.one(self.bases).scale(other)
        self._check(other)
        out = dict(self.data)
        for k, c in other.data.items():
            _add_into(out, k, c)
        return TensorElement(self.bases, out)

    __radd__ = __add__

    def __neg__(self):
        return TensorElement(self.bases, {k: -c for k, c in self.data.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self + (-as_scalar(other))
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = as_scalar(c)
        return TensorElement(self.bases, {k: v * c for k, v in self.data.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_mul(self, other)
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "TensorElement":
        if n < 0:
            raise AlgebraError("use an explicit inverse for negative powers")
        out = TensorElement.one(self.bases)
        for _ in range(n):
            out = tensor_mul(out, self)
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            other = TensorElement.one(self.bases).scale(other)
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.bases == other.bases and self.data == other.data

    def __hash__(self):
        return hash((self.bases, frozenset((k, c.key()) for k, c in self.data.items())))

    def act(self, gen: Gen, config: ActionConfig = DEFAULT_CONFIG) -> "TensorElement":
        return tensor_act(gen, self, config)

    def sharp(self) -> "TensorElement":
        return sharp(self)

    def is_finite(self) -> bool:
        return all(t1[3] == DELTA and t2[3] == DELTA for t1, t2 in self.data)

    def terms(self):
        return sorted(self.data.items(), key=lambda kv: (term_sort_key(kv[0][0]), term_sort_key(kv[0][1])))

    def __str__(self) -> str:
        b1, b2 = self.bases
        if len(self.data) == 1 and (_UNIT, _UNIT) in self.data:
            return self.data[(_UNIT, _UNIT)].q_str()
        pieces = []
        for (t1, t2), c in self.terms():
            left = list(reversed(monomial_parts(b1, t1)))
            right = monomial_parts(b2, t2, right=True)
            pieces.append(coef_monomial(c, " ".join(left + right)))
        return join_terms(pieces)

    def __repr__(self) -> str:
        return f"TensorElement<{self.bases[0].value},{self.bases[1].value}>({self})"

    def to_json_obj(self) -> dict:
        b1, b2 = self.bases

        def term(t, base):
            i, k, j, kind, n = t
            return {"i1": i, "k": k, "j1": j, "kind": "delta" if kind == DELTA else "power",
                    "index": internal_to_grid(base, n) if kind == DELTA else n}

        return {
            "spaces": [b1.value, b2.value],
            "terms": [
                {"left": term(t1, b1), "right": term(t2, b2), "coeff": str(c)} for (t1, t2), c in self.terms()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TensorElement":
        b1, b2 = Base(obj["spaces"][0]), Base(obj["spaces"][1])

        def term(d, base):
            if d["kind"] == "delta":
                return (d["i1"], d["k"], d["j1"], DELTA, grid_to_internal(base, d["index"]))
            return (d["i1"], d["k"], d["j1"], MONO, d["index"])

        data = {(term(t["left"], b1), term(t["right"], b2)): Scalar.parse(t["coeff"]) for t in obj["terms"]}
        return cls((b1, b2), data)


def tensor_mul(A: TensorElement, B: TensorElement) -> TensorElement:
    A._check(B)
    b1, b2 = A.bases
    out: dict = {}
    for (a1, a2), ca in A.data.items():
        for (s1, s2), cb in B.data.items():
            left = _mul_basis(b1, s1, a1)
            if not left:
                continue
            right = _mul_basis(b2, a2, s2)
            if not right:
                continue
            c = ca * cb
            for t1, c1 in left:
                c1c = c * c1
                for t2, c2 in right:
                    _add_into(out, (t1, t2), c1c * c2)
    return TensorElement(A.bases, out)


def tensor_product(factors: Sequence[TensorElement]) -> TensorElement:
    out = factors[0]
    for f in factors[1:]:
        out = tensor_mul(out, f)
    return out


def tensor_act(gen: Gen, K: TensorElement, config: ActionConfig = DEFAULT_CONFIG) -> TensorElement:
    """X(f1 (x) f2) = X f1 (x) q^(aH) f2 + q^(bH) f1 (x) X f2; H acts as a derivation."""
    b1, b2 = K.bases
    key = _register(config)
    a, b = config.twist(gen)
    out: dict = {}
    for (t1, t2), c in K.data.items():
        h1, h2 = term_h_weight(t1), term_h_weight(t2)
        s_right = c * qpow(a * h2) if gen is not Gen.H else c
        for u1, c1 in _act_term(b1, gen, t1, key):
            _add_into(out, (u1, t2), s_right * c1)
        s_left = c * qpow(b * h1) if gen is not Gen.H else c
        for u2, c2 in _act_term(b2, gen, t2, key):
            _add_into(out, (t1, u2), s_left * c2)
    return TensorElement(K.bases, out)


def sharp(K: TensorElement) -> TensorElement:
    """Star in the left factor; x^-1 f* x in the right factor."""
    out = {}
    for (t1, t2), c in K.data.items():
        i, _, j = t2[:3]
        out[(star_term(t1), star_term(t2))] = c * vpow(4 * (j - i))
    return TensorElement(K.bases, out)


# -- letters of the kernel algebra ------------------------------------------------------


def left(name: str, bases: Pair) -> TensorElement:
    data, _ = _letter_data(name)
    return TensorElement(bases, {(t, _UNIT): c for t, c in data.items()})


def right(name: str, bases: Pair) -> TensorElement:
    data, _ = _letter_data(name)
    return TensorElement(bases, {(_UNIT, t): c for t, c in data.items()})


def left_element(f: Element, bases: Pair) -> TensorElement:
    return TensorElement(bases, {(t, _UNIT): c for t, c in f.data.items()})


def right_element(f: Element, bases: Pair) -> TensorElement:
    return TensorElement(bases, {(_UNIT, t): c for t, c in f.data.items()})


def _inverse_t21(side, bases: Pair) -> TensorElement:
    """t21 = -q^-1 t12*, so t21^-1 = -q t12*^-1."""
    return side("t12*^-1", bases).scale(-qpow(1))


def kernel_letters(bases: Pair) -> Dict[str, TensorElement]:
    """The coordinates z, z*, zeta, zeta*, x, xi of the kernel algebra."""
    q = qpow(1)
    t = lambda n: left(n, bases)
    tau = lambda n: right(n, bases)
    return {
        "z": tensor_mul(t("t12^-1"), t("t11")).scale(q),
        "z*": tensor_mul(t("t22"), _inverse_t21(left, bases)),
        "zeta": tensor_mul(tau("t11"), tau("t12^-1")).scale(q),
        "zeta*": tensor_mul(_inverse_t21(right, bases), tau("t22")),
        "x": t("x"),
        "xi": tau("x"),
    }


def kernel_k(i: int, j: int, bases: Pair) -> TensorElement:
    """The four basic invariant kernels."""
    q, qi = qpow(1), qpow(-1)
    t = lambda n: left(n, bases)
    tau = lambda n: right(n, bases)
    tm = tensor_mul
    if (i, j) == (1, 1):
        return tm(t("t11"), tau("t22")) - tm(t("t12"), tau("t21")).scale(q)
    if (i, j) == (1, 2):
        return tm(t("t11"), tau("t12")).scale(-qi) + tm(t("t12"), tau("t11"))
    if (i, j) == (2, 1):
        return tm(t("t21"), tau("t22")) - tm(t("t22"), tau("t21")).scale(q)
    if (i, j) == (2, 2):
        return tm(t("t21"), tau("t12")).scale(-qi) + tm(t("t22"), tau("t11"))
    raise ValueError(f"no kernel k{i}{j}")


def all_kernels(bases: Pair) -> Dict[str, TensorElement]:
    return {f"k{i}{j}": kernel_k(i, j, bases) for i in (1, 2) for j in (1, 2)}


def is_invariant(K: TensorElement, config: ActionConfig = DEFAULT_CONFIG) -> bool:
    return all(tensor_act(g, K, config).is_zero() for g in GENERATORS)


def check_kernel_invariance(bases: Pair, config: ActionConfig = DEFAULT_CONFIG) -> Report:
    report = Report()
    for name, K in all_kernels(bases).items():
        for gen in GENERATORS:
            image = tensor_act(gen, K, config)
            report.add(f"{gen.value} {name}", image.is_zero(), str(image))
    return report


def relation_unit(bases: Pair) -> TensorElement:
    """Value of k22 k11 - q k12 k21: the product of the two quantum
    determinants, 1 on the principal space and 0 on the cone in each factor."""
    if bases == (Base.X, Base.X):
        return TensorElement.one(bases)
    return TensorElement.zero(bases)


def verify_k_relations(bases: Pair) -> Report:
    k = all_kernels(bases)
    q, qi = qpow(1), qpow(-1)
    tm = tensor_mul
    unit = relation_unit(bases)
    rels = [
        ("k11 k12 = q^-1 k12 k11", tm(k["k11"], k["k12"]) - tm(k["k12"], k["k11"]).scale(qi)),
        ("k21 k22 = q^-1 k22 k21", tm(k["k21"], k["k22"]) - tm(k["k22"], k["k21"]).scale(qi)),
        ("k11 k21 = q^-1 k21 k11", tm(k["k11"], k["k21"]) - tm(k["k21"], k["k11"]).scale(qi)),
        ("k12 k22 = q^-1 k22 k12", tm(k["k12"], k["k22"]) - tm(k["k22"], k["k12"]).scale(qi)),
        ("k12 k21 = k21 k12", tm(k["k12"], k["k21"]) - tm(k["k21"], k["k12"])),
        (
            "k11 k22 - k22 k11 = (q^-1 - q) k12 k21",
            tm(k["k11"], k["k22"]) - tm(k["k22"], k["k11"]) - tm(k["k12"], k["k21"]).scale(qi - q),
        ),
        (
            "k22 k11 - q k12 k21 = " + ("1" if unit == TensorElement.one(bases) else "0"),
            tm(k["k22"], k["k11"]) - tm(k["k12"], k["k21"]).scale(q) - unit,
        ),
    ]
    report = Report()
    for name, residual in rels:
        report.add(name, residual.is_zero(), str(residual))
    return report


def check_sharp(bases: Pair) -> Report:
    k = all_kernels(bases)
    report = Report()
    report.add("k11# = q^2 k22", sharp(k["k11"]) == k["k22"].scale(qpow(2)), str(sharp(k["k11"])))
    report.add("k12# = q^-1 k21", sharp(k["k12"]) == k["k21"].scale(qpow(-1)), str(sharp(k["k12"])))
    report.add("k22# = q^-2 k11", sharp(k["k22"]) == k["k11"].scale(qpow(-2)), str(sharp(k["k22"])))
    report.add("k21# = q k12", sharp(k["k21"]) == k["k12"].scale(qpow(1)), str(sharp(k["k21"])))
    for name, K in k.items():
        report.add(f"{name}## = {name}", sharp(sharp(K)) == K)
        report.add(f"{name}# invariant", is_invariant(sharp(K)))
    return report


# -- factorised powers -------------------------------------------------------------------


def _poly_in(u: TensorElement, poly: Dict[int, object], bases: Pair) -> TensorElement:
    """Evaluate a polynomial {n: coeff} at a kernel u."""
    out = TensorElement.zero(bases)
    power = TensorElement.one(bases)
    for n in range(max(poly, default=-1) + 1):
        if n:
            power = tensor_mul(power, u)
        c = poly.get(n)
        if c:
            out = out + power.scale(c)
    return out


def pochhammer_kernel(u: TensorElement, scale: Scalar, base: Scalar, n: int) -> TensorElement:
    """(scale * u; base)_n for a kernel u (all factors are polynomials in u)."""
    return _poly_in(u, pochhammer_poly(scale, base, n), u.bases)


def shift_kernels(bases: Pair) -> Dict[str, TensorElement]:
    """A = -q t12 tau21, B = -q^-1 t21 tau12, u = z zeta*, u' = z* zeta."""
    L = kernel_letters(bases)
    return {
        "A": tensor_mul(left("t12", bases), right("t21", bases)).scale(-qpow(1)),
        "B": tensor_mul(left("t21", bases), right("t12", bases)).scale(-qpow(-1)),
        "u": tensor_mul(L["z"], L["zeta*"]),
        "u'": tensor_mul(L["z*"], L["zeta"]),
    }


def commutation_lemmas(bases: Pair) -> Report:
    """The exchange rules used to factor kernel powers."""
    s = shift_kernels(bases)
    L = kernel_letters(bases)
    tm = tensor_mul
    q2 = qpow(2)
    t12tau21 = tm(left("t12", bases), right("t21", bases))
    t21tau12 = tm(left("t21", bases), right("t12", bases))
    zeta_zs = tm(L["zeta"], L["z*"])
    report = Report()
    report.add("t12 tau21 u = q^2 u t12 tau21", tm(t12tau21, s["u"]) == tm(s["u"], t12tau21).scale(q2))
    report.add(
        "(zeta z*) t21 tau12 = q^2 t21 tau12 (zeta z*)",
        tm(zeta_zs, t21tau12) == tm(t21tau12, zeta_zs).scale(q2),
    )
    report.add(
        "(zeta z*) t12 tau21 = q^2 t21 tau12 (zeta z*) fails",
        tm(zeta_zs, t12tau21) != tm(t21tau12, zeta_zs).scale(q2),
    )
    report.add("B u' = q^-2 u' B", tm(s["B"], s["u'"]) == tm(s["u'"], s["B"]).scale(qpow(-2)))
    report.add("k11 = A (1 - q^-2 u)", kernel_k(1, 1, bases) == tm(s["A"], TensorElement.one(bases) - s["u"].scale(qpow(-2))))
    report.add("k22 = (1 - u') B", kernel_k(2, 2, bases) == tm(TensorElement.one(bases) - s["u'"], s["B"]))
    return report


def kernel_power_direct(l: int, bases: Pair) -> TensorElement:
    """k22^l k11^l by repeated multiplication."""
    return tensor_mul(kernel_k(2, 2, bases) ** l, kernel_k(1, 1, bases) ** l)


def kernel_power_factored(l: int, bases: Pair) -> Tuple[TensorElement, TensorElement]:
    """(direct, factored) forms of k22^l k11^l.

    factored = (u'; q^-2)_l B^l A^l (q^-2 u; q^-2)_l with A, B, u, u' as in
    ``shift_kernels``.
    """
    s = shift_kernels(bases)
    qm2 = qpow(-2)
    left_p = pochhammer_kernel(s["u'"], ONE, qm2, l)
    right_p = pochhammer_kernel(s["u"], qm2, qm2, l)
    factored = tensor_product([left_p, s["B"] ** l, s["A"] ** l, right_p])
    return kernel_power_direct(l, bases), factored


def expansion_coefficient(l: int, n: int) -> Scalar:
    """(q^-2l; q^2)_n / (q^2; q^2)_n."""
    q2 = qpow(2)
    return qpochhammer(qpow(-2 * l), q2, n) / qpochhammer(q2, q2, n)


def lemma65_rhs(l: int, bases: Pair) -> TensorElement:
    """q^-2l xi^l sum_{j,m<=l} c_j c_m (q^(2l+2) z* zeta)^j (q^2l z zeta*)^m x^l."""
    L = kernel_letters(bases)
    s = shift_kernels(bases)
    up = s["u'"]
    u = s["u"]
    total = TensorElement.zero(bases)
    up_pows = [TensorElement.one(bases)]
    u_pows = [TensorElement.one(bases)]
    for _ in range(l):
        up_pows.append(tensor_mul(up_pows[-1], up))
        u_pows.append(tensor_mul(u_pows[-1], u))
    for j in range(l + 1):
        cj = expansion_coefficient(l, j) * qpow((2 * l + 2) * j)
        for m in range(l + 1):
            cm = expansion_coefficient(l, m) * qpow(2 * l * m)
            c = cj * cm
            if c:
                total = total + tensor_mul(up_pows[j], u_pows[m]).scale(c)
    xi_l = L["xi"] ** l
    x_l = L["x"] ** l
    return tensor_product([xi_l, total, x_l]).scale(qpow(-2 * l))


def lemma65_check(l: int, bases: Pair = (Base.X, Base.X)) -> bool:
    return kernel_power_direct(l, bases) == lemma65_rhs(l, bases)


def generalized_kernel_blocks(l: int, bases: Pair) -> Dict[str, TensorElement]:
    """The j < m, j = m and j > m parts of the double sum, grouped through
    the radial factors z^n z*^n and zeta^n zeta*^n."""
    L = kernel_letters(bases)
    tm = tensor_mul
    blocks = {"j<m": TensorElement.zero(bases), "j=m": TensorElement.zero(bases), "j>m": TensorElement.zero(bases)}
    xl_xil = tm(L["x"] ** l, L["xi"] ** l)
    for j in range(l + 1):
        for m in range(l + 1):
            c = expansion_coefficient(l, j) * expansion_coefficient(l, m) * qpow(2 * j * (l + 1) + 2 * m * l - 2 * l)
            if not c:
                continue
            n = min(j, m)
            left_radial = tm(L["z*"] ** n, L["z"] ** n)
            right_radial = tm(L["zeta"] ** n, L["zeta*"] ** n)
            if j < m:
                word = [left_radial, L["z"] ** (m - j), xl_xil, right_radial, L["zeta*"] ** (m - j)]
                key = "j<m"
            elif j == m:
                word = [left_radial, xl_xil, right_radial]
                key = "j=m"
            else:
                word = [L["z*"] ** (j - m), left_radial, xl_xil, L["zeta"] ** (j - m), right_radial]
                key = "j>m"
            blocks[key] = blocks[key] + tensor_product(word).scale(c)
    return blocks


def diagonal_block_coefficient(l: int, j: int) -> Scalar:
    q2 = qpow(2)
    return (qpochhammer(qpow(-2 * l), q2, j) / qpochhammer(q2, q2, j)) ** 2 * qpow(4 * j * l + 2 * j)


def to_generalized_kernel(K: TensorElement) -> TensorElement:
    """Canonical ordered form; kernels are stored canonically, so this only
    drops zero terms and is idempotent."""
    return TensorElement(K.bases, {k: c for k, c in K.data.items() if c})


# -- inverse powers as series in u = z zeta* ----------------------------------------------


def inverse_power_series(l: int, trunc, bases: Pair = (Base.X, Base.X)) -> TensorElement:
    """sum_{n<=N} (q^2l; q^2)_n / (q^2; q^2)_n u^n, the inverse of (u; q^2)_l mod u^(N+1)."""
    if l < 1:
        raise ValueError("l must be positive")
    series = qbinomial_series(qpow(2 * l), trunc)
    u = shift_kernels(bases)["u"]
    return _poly_in(u, series.coeffs, bases)


def a_inverse(bases: Pair) -> TensorElement:
    """(-q t12 tau21)^-1 = -q^-1 t12^-1 tau21^-1."""
    return tensor_mul(left("t12^-1", bases), _inverse_t21(right, bases)).scale(-qpow(-1))


def scalar_shadow_remainder(l: int, trunc) -> Dict[int, Scalar]:
    """(u; q^2)_l times the truncated series, minus 1, as {power: coeff}."""
    order = trunc.order if isinstance(trunc, QSeriesTruncation) else int(trunc)
    series = qbinomial_series(qpow(2 * l), order)
    poch = pochhammer_poly(ONE, qpow(2), l)
    out: Dict[int, Scalar] = {}
    for p1, c1 in poch.items():
        for p2, c2 in series.coeffs.items():
            out[p1 + p2] = out.get(p1 + p2, ZERO) + c1 * c2
    out[0] = out.get(0, ZERO) - ONE
    return {p: c for p, c in out.items() if c}


def prop69_check(l: int, trunc, bases: Pair = (Base.X, Base.X)) -> Report:
    """k11^l A^-l times the truncated series equals 1 plus terms of u-degree > N."""
    order = trunc.order if isinstance(trunc, QSeriesTruncation) else int(trunc)
    report = Report()
    s = shift_kernels(bases)
    k11l = kernel_k(1, 1, bases) ** l
    ainv_l = a_inverse(bases) ** l
    report.add("A A^-1 = 1", tensor_mul(s["A"], a_inverse(bases)) == TensorElement.one(bases))
    conj = tensor_mul(k11l, ainv_l)
    report.add(f"k11^{l} A^-{l} = (u; q^2)_{l}", conj == pochhammer_kernel(s["u"], ONE, qpow(2), l))
    series = inverse_power_series(l, order, bases)
    product = tensor_mul(conj, series)
    remainder = scalar_shadow_remainder(l, order)
    report.add(f"scalar remainder has u-degree > {order}", all(p > order for p in remainder))
    expected = TensorElement.one(bases) + _poly_in(s["u"], remainder, bases)
    report.add(f"k11^{l} A^-{l} f_N = 1 mod u^{order + 1}", product == expected, str(product - expected))
    return report


# -- pairing, lambda continuation, integral operators ---------------------------------------


def _nu_radial(base: Base, data: dict) -> Scalar:
    rad = {(t[3], t[4]): c for t, c in data.items() if t[:3] == (0, 0, 0)}
    return radial_sum(base, rad)


def pairing(K, F: TensorElement) -> Scalar:
    """nu1 (x) nu2 of the product K F, for F finite in both factors."""
    if isinstance(K, LambdaKernel):
        return K.pair(F)
    if not F.is_finite():
        raise AlgebraError("the test function must be finite in both factors")
    prod = tensor_mul(K, F)
    b1, b2 = prod.bases
    total = ZERO
    for (t1, t2), c in prod.data.items():
        if t1[:3] == (0, 0, 0) and t2[:3] == (0, 0, 0):
            if t1[3] != DELTA or t2[3] != DELTA:
                raise AlgebraError("pairing produced a non-finite coefficient")
            total = total + c * vpow(4 * t1[4]) * vpow(4 * t2[4])
    return total * (1 - vpow(4)) ** 2


def apply_integral_operator(K: TensorElement, f: Element) -> Element:
    """id (x) nu2 applied to K (1 (x) f)."""
    if not f.is_finite():
        raise AlgebraError("the integral operator takes finite functions")
    b1, b2 = K.bases
    if f.base is not b2:
        raise AlgebraError("f lives on the wrong space")
    prod = tensor_mul(K, right_element(f, K.bases))
    out: dict = {}
    for (t1, t2), c in prod.data.items():
        if t2[:3] == (0, 0, 0):
            if t2[3] != DELTA:
                raise AlgebraError("non-finite coefficient in the second factor")
            _add_into(out, t1, c * vpow(4 * t2[4]) * (1 - vpow(4)))
    layer = Layer.FINITE if all(t[3] == DELTA for t in out) else Layer.DISTRIBUTION
    return Element(SpaceTag(b1, layer), out, check=False)


def sharp_defining_identity_check(K: TensorElement, f: Element) -> bool:
    """T_{K#}(f) = (T_K(f*))* with trivial conjugation on Q(v)."""
    from .algebra import star

    return apply_integral_operator(sharp(K), f) == star(apply_integral_operator(K, star(f)))


def check_operator_morphism(K: TensorElement, fs: Iterable[Element], config: ActionConfig = DEFAULT_CONFIG) -> Report:
    report = Report()
    for idx, f in enumerate(fs):
        for gen in GENERATORS:
            lhs = apply_integral_operator(K, act(gen, f, config))
            rhs = act(gen, apply_integral_operator(K, f), config)
            report.add(f"#{idx} {gen.value}", lhs == rhs, f"f = {f}; difference = {lhs - rhs}")
    return report


def _lambda_left(f1: Element) -> Dict[Term, LambdaScalar]:
    """f1 x^l with lam = q^2l: a delta at x = q^(2e) under a*^j gains lam^(e - j)."""
    out = {}
    for t, c in f1.data.items():
        if t[3] != DELTA:
            raise AlgebraError("test functions must be finite")
        out[t] = LambdaScalar({t[4] - t[2]: c})
    return out


@lru_cache(maxsize=None)
def _letter_power(bases: Pair, name: str, n: int) -> TensorElement:
    return kernel_letters(bases)[name] ** n


def _side_element(K: TensorElement, side: int) -> Element:
    """The factor of a kernel supported on a single side."""
    base = K.bases[side]
    data = {}
    for (t1, t2), c in K.data.items():
        other = t2 if side == 0 else t1
        if other != _UNIT:
            raise AlgebraError("kernel is not supported on a single side")
        data[t1 if side == 0 else t2] = c
    return Element(SpaceTag(base, Layer.LOCALIZED), data, check=False)


def _grid_span(f: Element) -> int:
    return max((t[0] + abs(t[1]) + t[2] + (abs(t[4]) if t[3] == DELTA else 0) for t in f.data), default=0)


@dataclass
class LambdaKernel:
    """The continuation of k22^l k11^l to a formal parameter lam = q^2l.

    The kernel is an infinite sum over (j, m); only finitely many terms
    contribute against a finite test function, and ``pair`` sums exactly
    those.  ``cutoff_slack`` enlarges the range beyond the proven support,
    which is useful for checking that extra terms vanish.
    """

    bases: Pair
    cutoff_slack: int = 0

    def __post_init__(self):
        if Base.X not in self.bases:
            raise AlgebraError("the continuation needs at least one principal-space factor")

    @staticmethod
    def coefficient_j(j: int) -> LambdaScalar:
        """(lam^-1; q^2)_j / (q^2; q^2)_j (lam q^2)^j."""
        q2 = qpow(2)
        lam_inv = LambdaScalar({-1: ONE})
        c = qpochhammer(lam_inv, q2, j) / qpochhammer(q2, q2, j)
        return c * LambdaScalar({j: qpow(2 * j)})

    @staticmethod
    def coefficient_m(m: int) -> LambdaScalar:
        q2 = qpow(2)
        lam_inv = LambdaScalar({-1: ONE})
        c = qpochhammer(lam_inv, q2, m) / qpochhammer(q2, q2, m)
        return c * LambdaScalar({m: ONE})

    def pair_pure(self, f1: Element, f2: Element) -> LambdaScalar:
        b1, b2 = self.bases
        if f1.base is not b1 or f2.base is not b2:
            raise AlgebraError("test function spaces do not match the kernel")
        left_lam = _lambda_left(f1)
        # m - j is fixed by the H-weight of the left test term.
        diffs = sorted({term_h_weight(t) for t in f1.data})
        bound = max(_grid_span(f1), _grid_span(f2)) + 2 + self.cutoff_slack
        total = LambdaScalar()
        for h in diffs:
            if h % 2:
                continue
            d = -h // 2  # m - j
            for n in range(bound + 1):
                j, m = (n, n + d) if d >= 0 else (n - d, n)
                # the left factor is x^l z^m z*^j in F1; x^l is absorbed into lam
                g = _side_element(tensor_mul(_letter_power(self.bases, "z*", j), _letter_power(self.bases, "z", m)), 0)
                lval = LambdaScalar()
                for t, lam in left_lam.items():
                    if term_h_weight(t) != h:
                        continue
                    prod = mul(Element(g.space, {t: ONE}, check=False), g)
                    rad = {(tt[3], tt[4]): cc for tt, cc in prod.data.items() if tt[:3] == (0, 0, 0)}
                    if rad:
                        lval = lval + lam * radial_sum(b1, rad)
                if lval.is_zero():
                    continue
                r = _side_element(
                    tensor_mul(_letter_power(self.bases, "zeta", j), _letter_power(self.bases, "zeta*", m)), 1
                )
                prod2 = mul(r, f2)
                rval = LambdaScalar()
                for tt, cc in prod2.data.items():
                    if tt[:3] == (0, 0, 0):
                        if tt[3] != DELTA:
                            raise AlgebraError("non-finite right coefficient")
                        rval = rval + LambdaScalar({tt[4]: cc * vpow(4 * tt[4]) * (1 - vpow(4))})
                if rval.is_zero():
                    continue
                coef = self.coefficient_j(j) * self.coefficient_m(m) * LambdaScalar({-1: ONE})
                total = total + coef * lval * rval
        return total

    def pair(self, F: TensorElement) -> LambdaScalar:
        """Pairing against a finite test kernel, as a Laurent polynomial in lam."""
        if not F.is_finite():
            raise AlgebraError("the test function must be finite in both factors")
        b1, b2 = self.bases
        total = LambdaScalar()
        for (t1, t2), c in F.data.items():
            f1 = Element(SpaceTag(b1, Layer.FINITE), {t1: ONE}, check=False)
            f2 = Element(SpaceTag(b2, Layer.FINITE), {t2: ONE}, check=False)
            total = total + self.pair_pure(f1, f2) * c
        return total

    def evaluate(self, l: int) -> TensorElement:
        """The plain kernel at lam = q^2l (the double sum terminates at j, m <= l)."""
        return lemma65_rhs(l, self.bases)


def continue_kernel(cap: int = 3, bases: Pair = (Base.X, Base.X)) -> LambdaKernel:
    """The continuation; ``check_continuation`` compares it with the plain
    kernels for l <= cap."""
    lk = LambdaKernel(bases)
    lk.cap = cap
    return lk


def check_continuation(lk: LambdaKernel, tests: Sequence[TensorElement], cap: Optional[int] = None) -> Report:
    """Stability of the cutoff and agreement with k22^l k11^l at lam = q^2l."""
    cap = getattr(lk, "cap", 3) if cap is None else cap
    wide = LambdaKernel(lk.bases, cutoff_slack=lk.cutoff_slack + 3)
    plain = [kernel_power_direct(l, lk.bases) for l in range(cap + 1)]
    report = Report()
    for idx, F in enumerate(tests):
        value = lk.pair(F)
        report.add(f"#{idx} cutoff stable", value == wide.pair(F), str(F))
        for l, K in enumerate(plain):
            report.add(f"#{idx} lam = q^{2 * l}", value.substitute(qpow(2 * l)) == pairing(K, F), str(F))
    return report


# -- Gram matrices of the pairing -------------------------------------------------------------


def finite_basis(base: Base, trunc: int) -> List[Term]:
    """Finite basis monomials with i, j, |k| <= trunc and |grid index| <= trunc."""
    grid = range(trunc + 1) if base is Base.X else range(-trunc, trunc + 1)
    out = []
    for i in range(trunc + 1):
        for j in range(trunc + 1):
            if i and j:
                continue
            for k in range(-trunc, trunc + 1):
                for m in grid:
                    out.append((i, k, j, DELTA, grid_to_internal(base, m)))
    return out


def gram_matrix(base: Base, trunc: int) -> List[List[Scalar]]:
    """G[s][t] = nu(s t) on the truncated finite basis.

    The pairing of pure tensors factorises as nu1(f1 A) nu2(B f2), so the
    Gram matrix of the two-space form is the Kronecker product of two of these.
    """
    basis = finite_basis(base, trunc)
    rows = []
    for s in basis:
        row = []
        for t in basis:
            prod = dict(_mul_basis(base, s, t))
            rad = {(tt[3], tt[4]): c for tt, c in prod.items() if tt[:3] == (0, 0, 0)}
            row.append(radial_sum(base, rad) if rad else ZERO)
        rows.append(row)
    return rows


def gram_determinant(base: Base, trunc: int, at: Fraction = Fraction(1, 2)) -> Fraction:
    """Determinant of the Gram matrix with v specialised to ``at``."""
    from .linalg import det_fraction

    return det_fraction([[c.evaluate(at) for c in row] for row in gram_matrix(base, trunc)])


def finite_test_functions(bases: Pair, count: Optional[int] = None, spread: int = 2) -> List[TensorElement]:
    """Pure tensors of weight-zero finite basis monomials, deterministic order.

    Both factors of k22^l k11^l have weight zero, so other monomials pair to 0.
    """
    b1, b2 = bases
    one_side = []
    for i in range(spread + 1):
        for j in range(spread + 1):
            if i and j:
                continue
            k = j - i
            for m in range(spread + 1):
                one_side.append((i, k, j, m))
    one_side.sort(key=lambda t: (sum(map(abs, t)), t))
    out = []
    for a in one_side:
        for b in one_side:
            t1 = (a[0], a[1], a[2], DELTA, grid_to_internal(b1, a[3]))
            t2 = (b[0], b[1], b[2], DELTA, grid_to_internal(b2, b[3]))
            out.append(TensorElement(bases, {(t1, t2): ONE}))
    out.sort(key=lambda F: sum(abs(x) for t in next(iter(F.data)) for x in t[:3]))
    return out if count is None else out[:count]
