"""Ordered-monomial arithmetic in the function algebras on the two spaces.

Notation used throughout: a = t11, b = t12 and their stars a*, b*.  The
second-row generators are eliminated on entry,

    t21 = -q^-1 b*,   t22 = -a*,   t21* = -q^-1 b,   t22* = -a,

and every element is a finite sum of ordered monomials

    a^i  B^k  psi(x)  a*^j        with i*j == 0,

where B^k means b^k for k >= 0 and b*^|k| for k < 0, and x = b b*.  The
radial factor psi is itself a finite sum of Laurent monomials x^p and grid
deltas.  A basis term is therefore the tuple ``(i, k, j, kind, n)`` with
``kind == 0`` for x^n and ``kind == 1`` for the delta at x = q^(2n).

On the principal space (``Base.X``) the grid is x = q^(-2m), m >= 0, so only
n <= 0 occurs, and the defining relations give a a* = x - 1.  On the cone
(``Base.XI``) the grid is all of q^(2Z) and a a* = x.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple, Union

from .scalars import ONE, ZERO, Scalar, as_scalar, qpow, vpow

Term = Tuple[int, int, int, int, int]
MONO, DELTA = 0, 1


class Base(Enum):
    X = "TildeX"
    XI = "TildeXi"

    @property
    def unit_eps(self) -> int:
        """Constant term of a a* = x - eps."""
        return 1 if self is Base.X else 0


class Layer(Enum):
    POLYNOMIAL = "Polynomial"
    FINITE = "Finite"
    DISTRIBUTION = "Distribution"
    LOCALIZED = "Localized"


@dataclass(frozen=True)
class SpaceTag:
    base: Base
    layer: Layer = Layer.POLYNOMIAL

    def with_layer(self, layer: Layer) -> "SpaceTag":
        return SpaceTag(self.base, layer)


class AlgebraError(ValueError):
    """Raised for products or letters the requested layer does not admit."""


# -- grid indices ---------------------------------------------------------------


def grid_to_internal(base: Base, m: int) -> int:
    """Public grid index -> exponent n with x = q^(2n)."""
    if base is Base.X:
        if m < 0:
            raise AlgebraError(f"grid index {m} is off the grid q^(-2m), m >= 0")
        return -m
    return m


def internal_to_grid(base: Base, n: int) -> int:
    return -n if base is Base.X else n


# -- radial functions: dicts {(kind, n): Scalar} ----------------------------------


def _add_into(out: dict, key, c: Scalar) -> None:
    if key in out:
        s = out[key] + c
        if s:
            out[key] = s
        else:
            del out[key]
    elif c:
        out[key] = c


def fn_shift(base: Base, phi: dict, s: int) -> dict:
    """psi(x) -> psi(q^(2s) x)."""
    if s == 0:
        return phi
    out = {}
    for (kind, n), c in phi.items():
        if kind == MONO:
            out[(MONO, n)] = c * vpow(4 * s * n) if n else c
        else:
            e = n - s
            if base is Base.X and e > 0:
                continue
            out[(DELTA, e)] = c
    return out


def fn_mul(phi1: dict, phi2: dict) -> dict:
    out: dict = {}
    for (k1, n1), c1 in phi1.items():
        for (k2, n2), c2 in phi2.items():
            if k1 == MONO and k2 == MONO:
                _add_into(out, (MONO, n1 + n2), c1 * c2)
            elif k1 == DELTA and k2 == DELTA:
                if n1 == n2:
                    _add_into(out, (DELTA, n1), c1 * c2)
            else:
                p, e = (n1, n2) if k1 == MONO else (n2, n1)
                _add_into(out, (DELTA, e), c1 * c2 * vpow(4 * e * p))
    return out


def _rho(base: Base) -> dict:
    if base is Base.X:
        return {(MONO, 1): ONE, (MONO, 0): -ONE}
    return {(MONO, 1): ONE}


@lru_cache(maxsize=None)
def _p_poly(base: Base, n: int) -> dict:
    """a*^n a^n = prod_{s=1..n} rho(q^(-2s) x)."""
    if n == 0:
        return {(MONO, 0): ONE}
    return fn_mul(_p_poly(base, n - 1), fn_shift(base, _rho(base), -n))


@lru_cache(maxsize=None)
def _r_poly(base: Base, n: int) -> dict:
    """a^n a*^n = prod_{s=0..n-1} rho(q^(2s) x)."""
    if n == 0:
        return {(MONO, 0): ONE}
    return fn_mul(_r_poly(base, n - 1), fn_shift(base, _rho(base), n - 1))


@lru_cache(maxsize=200000)
def _mul_basis(base: Base, t1: Term, t2: Term) -> Tuple[Tuple[Term, Scalar], ...]:
    i1, k1, j1, kind1, n1 = t1
    i2, k2, j2, kind2, n2 = t2
    beta1 = {(kind1, n1): ONE}
    beta2 = {(kind2, n2): ONE}
    if k1 * k2 < 0:
        mu = min(abs(k1), abs(k2))
    else:
        mu = 0
    if i2 >= j1:
        d = i2 - j1
        coef = vpow(-2 * abs(k1) * d)
        phi = fn_mul(fn_shift(base, fn_mul(beta1, _p_poly(base, j1)), -d), beta2)
        big_i, big_j = i1 + d, j2
    else:
        d = j1 - i2
        coef = vpow(-2 * abs(k2) * d)
        phi = fn_mul(fn_mul(beta1, fn_shift(base, _p_poly(base, i2), -d)), fn_shift(base, beta2, -d))
        big_i, big_j = i1, d + j2
    if mu:
        phi = fn_mul(phi, {(MONO, mu): ONE})
    big_k = k1 + k2
    n = min(big_i, big_j)
    if n > 0:
        coef = coef * vpow(2 * abs(big_k) * n)
        phi = fn_mul(fn_shift(base, phi, n), _r_poly(base, n))
        big_i -= n
        big_j -= n
    return tuple(((big_i, big_k, big_j, kind, m), c * coef) for (kind, m), c in phi.items() if c)


def mul_terms(base: Base, d1: dict, d2: dict) -> dict:
    out: dict = {}
    for t1, c1 in d1.items():
        for t2, c2 in d2.items():
            c12 = c1 * c2
            for t, c in _mul_basis(base, t1, t2):
                _add_into(out, t, c12 * c)
    return out


def star_term(t: Term) -> Term:
    i, k, j, kind, n = t
    return (j, -k, i, kind, n)


# -- layers ----------------------------------------------------------------------




def _check_layer(base: Base, layer: Layer, data: dict) -> None:
    if layer is Layer.FINITE:
        if any(t[3] == MONO for t in data):
            raise AlgebraError("a finite function cannot carry Laurent monomials in x")
    elif layer is Layer.POLYNOMIAL:
        for t in data:
            if t[3] == DELTA:
                raise AlgebraError("grid deltas require the Finite or Distribution layer")
            if t[4] < 0:
                raise AlgebraError("negative powers of x require the Distribution or Localized layer")


def _sum_layer(l1: Layer, l2: Layer) -> Layer:
    if l1 is l2:
        return l1
    if Layer.LOCALIZED in (l1, l2):
        return Layer.LOCALIZED
    return Layer.DISTRIBUTION


def _product_layer(l1: Layer, l2: Layer) -> Layer:
    if Layer.FINITE in (l1, l2):
        return Layer.FINITE
    if Layer.LOCALIZED in (l1, l2):
        return Layer.LOCALIZED
    if l1 is Layer.POLYNOMIAL and l2 is Layer.POLYNOMIAL:
        return Layer.POLYNOMIAL
    if l1 is Layer.DISTRIBUTION and l2 is Layer.DISTRIBUTION:
        raise AlgebraError("the product of two distributions is undefined unless one is finite")
    return Layer.DISTRIBUTION


# -- coefficient view ---------------------------------------------------------------


@dataclass(frozen=True)
class CoeffFn:
    """psi as a Laurent polynomial in x plus finitely many grid corrections.

    ``corrections`` is keyed by public grid index.
    """

    base: Base
    laurent: Tuple[Tuple[int, Scalar], ...]
    corrections: Tuple[Tuple[int, Scalar], ...]

    @classmethod
    def from_radial(cls, base: Base, phi: dict) -> "CoeffFn":
        lau = tuple(sorted(((n, c) for (kind, n), c in phi.items() if kind == MONO), key=lambda t: -t[0]))
        cor = tuple(sorted((internal_to_grid(base, n), c) for (kind, n), c in phi.items() if kind == DELTA))
        return cls(base, lau, cor)

    def radial(self) -> dict:
        out = {(MONO, p): c for p, c in self.laurent}
        for m, c in self.corrections:
            out[(DELTA, grid_to_internal(self.base, m))] = c
        return out

    def is_finite(self) -> bool:
        return not self.laurent

    def __call__(self, m: int) -> Scalar:
        n = grid_to_internal(self.base, m)
        total = ZERO
        for p, c in self.laurent:
            total = total + c * vpow(4 * n * p)
        for mm, c in self.corrections:
            if mm == m:
                total = total + c
        return total


# -- elements ----------------------------------------------------------------------


class Element:
    """Finite linear combination of ordered monomials on one space."""

    __slots__ = ("space", "data")

    def __init__(self, space: SpaceTag, data: Optional[dict] = None, check: bool = True):
        self.space = space
        self.data = {t: c for t, c in (data or {}).items() if c}
        if check:
            for (i, k, j, kind, n) in self.data:
                if i < 0 or j < 0 or i * j != 0:
                    raise AlgebraError(f"not an ordered monomial: {(i, k, j)}")
                if kind == DELTA and space.base is Base.X and n > 0:
                    raise AlgebraError("delta off the grid of the principal space")
            _check_layer(space.base, space.layer, self.data)

    # -- construction helpers
    @classmethod
    def zero(cls, space: SpaceTag) -> "Element":
        return cls(space, {})

    @classmethod
    def one(cls, space: SpaceTag) -> "Element":
        return cls(space, {(0, 0, 0, MONO, 0): ONE})

    @property
    def base(self) -> Base:
        return self.space.base

    @property
    def layer(self) -> Layer:
        return self.space.layer

    def with_layer(self, layer: Layer) -> "Element":
        return Element(self.space.with_layer(layer), self.data)

    def is_zero(self) -> bool:
        return not self.data

    def is_finite(self) -> bool:
        return all(t[3] == DELTA for t in self.data)

    def is_polynomial(self) -> bool:
        return all(t[3] == MONO and t[4] >= 0 for t in self.data)

    def terms(self) -> Iterator[Tuple[Term, Scalar]]:
        return iter(sorted(self.data.items(), key=lambda tc: term_sort_key(tc[0])))

    def keys(self) -> list:
        return sorted({t[:3] for t in self.data})

    def coeff_fn(self, key: Tuple[int, int, int]) -> CoeffFn:
        phi = {(t[3], t[4]): c for t, c in self.data.items() if t[:3] == tuple(key)}
        return CoeffFn.from_radial(self.base, phi)

    def radial_part(self) -> dict:
        return {(t[3], t[4]): c for t, c in self.data.items() if t[:3] == (0, 0, 0)}

    # -- arithmetic
    def _same_base(self, other: "Element") -> None:
        if self.base is not other.base:
            raise AlgebraError(f"cannot combine elements on {self.base.value} and {other.base.value}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = Element.one(self.space) * as_scalar(other) if other else Element.zero(self.space)
        if not isinstance(other, Element):
            return NotImplemented
        self._same_base(other)
        out = dict(self.data)
        for t, c in other.data.items():
            _add_into(out, t, c)
        return Element(SpaceTag(self.base, _sum_layer(self.layer, other.layer)), out, check=False)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.space, {t: -c for t, c in self.data.items()}, check=False)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self + (-as_scalar(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Element":
        c = as_scalar(c)
        if not c:
            return Element(self.space, {}, check=False)
        return Element(self.space, {t: v * c for t, v in self.data.items()}, check=False)

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            raise AlgebraError("negative powers are only available through explicit inverses")
        out = Element.one(self.space.with_layer(Layer.POLYNOMIAL if self.layer is not Layer.LOCALIZED else Layer.LOCALIZED))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            other = Element.one(self.space).scale(other) if other else Element.zero(self.space)
        if not isinstance(other, Element):
            return NotImplemented
        return self.base is other.base and self.data == other.data

    def __hash__(self):
        return hash((self.base, frozenset((t, c.key()) for t, c in self.data.items())))

    def star(self) -> "Element":
        return star(self)

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"Element<{self.base.value}/{self.layer.value}>({self})"

    # -- serialization
    def to_json_obj(self) -> dict:
        terms = []
        for key in self.keys():
            fn = self.coeff_fn(key)
            terms.append(
                {
                    "i1": key[0],
                    "k": key[1],
                    "j1": key[2],
                    "laurent": [[p, str(c)] for p, c in fn.laurent],
                    "corrections": [[m, str(c)] for m, c in fn.corrections],
                }
            )
        return {"space": {"base": self.base.value, "layer": self.layer.value}, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Element":
        space = SpaceTag(Base(obj["space"]["base"]), Layer(obj["space"]["layer"]))
        data = {}
        for term in obj["terms"]:
            i, k, j = term["i1"], term["k"], term["j1"]
            for p, c in term["laurent"]:
                data[(i, k, j, MONO, int(p))] = Scalar.parse(c)
            for m, c in term["corrections"]:
                data[(i, k, j, DELTA, grid_to_internal(space.base, int(m)))] = Scalar.parse(c)
        return cls(space, data)

    @classmethod
    def from_json(cls, text: str) -> "Element":
        return cls.from_json_obj(json.loads(text))


def term_sort_key(t: Term):
    i, k, j, kind, n = t
    return (i, k, j, kind, -n if kind == MONO else n)


# -- products and involution ----------------------------------------------------------


def natural_layer(f: Element) -> Layer:
    """Smallest layer holding the terms of f."""
    if f.data and all(t[3] == DELTA for t in f.data):
        return Layer.FINITE
    if all(t[3] == MONO and t[4] >= 0 for t in f.data):
        return Layer.POLYNOMIAL
    if all(t[3] == DELTA or t[4] >= 0 for t in f.data):
        return Layer.DISTRIBUTION
    return Layer.LOCALIZED


def mul(f: Element, g: Element) -> Element:
    f._same_base(g)
    layer = _product_layer(f.layer, g.layer)
    return Element(SpaceTag(f.base, layer), mul_terms(f.base, f.data, g.data), check=False)


def mul_many(factors: Sequence[Element]) -> Element:
    out = factors[0]
    for g in factors[1:]:
        out = mul(out, g)
    return out


def star(f: Element) -> Element:
    """Antilinear antiautomorphism; conjugation on Q(v) is trivial."""
    return Element(f.space, {star_term(t): c for t, c in f.data.items()}, check=False)


# -- letters ------------------------------------------------------------------------


LETTERS = ("t11", "t12", "t21", "t22", "t11*", "t12*", "t21*", "t22*", "e0", "x", "x^-1", "t12^-1", "t12*^-1")
INVERSE_LETTERS = ("x^-1", "t12^-1", "t12*^-1")


def _letter_data(name: str) -> Tuple[dict, Layer]:
    minus_qinv = -vpow(-2)
    table = {
        "t11": ({(1, 0, 0, MONO, 0): ONE}, Layer.POLYNOMIAL),
        "t12": ({(0, 1, 0, MONO, 0): ONE}, Layer.POLYNOMIAL),
        "t21": ({(0, -1, 0, MONO, 0): minus_qinv}, Layer.POLYNOMIAL),
        "t22": ({(0, 0, 1, MONO, 0): -ONE}, Layer.POLYNOMIAL),
        "t11*": ({(0, 0, 1, MONO, 0): ONE}, Layer.POLYNOMIAL),
        "t12*": ({(0, -1, 0, MONO, 0): ONE}, Layer.POLYNOMIAL),
        "t21*": ({(0, 1, 0, MONO, 0): minus_qinv}, Layer.POLYNOMIAL),
        "t22*": ({(1, 0, 0, MONO, 0): -ONE}, Layer.POLYNOMIAL),
        "x": ({(0, 0, 0, MONO, 1): ONE}, Layer.POLYNOMIAL),
        "e0": ({(0, 0, 0, DELTA, 0): ONE}, Layer.FINITE),
        "x^-1": ({(0, 0, 0, MONO, -1): ONE}, Layer.LOCALIZED),
        "t12^-1": ({(0, -1, 0, MONO, -1): ONE}, Layer.LOCALIZED),
        "t12*^-1": ({(0, 1, 0, MONO, -1): ONE}, Layer.LOCALIZED),
    }
    if name not in table:
        raise AlgebraError(f"unknown generator {name!r}")
    return table[name]


def letter(name: str, base: Base = Base.X) -> Element:
    data, layer = _letter_data(name)
    return Element(SpaceTag(base, layer), data, check=False)


def radial(base: Base, phi: dict, layer: Optional[Layer] = None) -> Element:
    """The element psi(x) for a radial dict {(kind, n): Scalar}."""
    data = {(0, 0, 0, kind, n): c for (kind, n), c in phi.items()}
    if layer is None:
        if all(kind == DELTA for kind, _ in phi):
            layer = Layer.FINITE
        elif all(kind == MONO and n >= 0 for kind, n in phi):
            layer = Layer.POLYNOMIAL
        else:
            layer = Layer.DISTRIBUTION
    return Element(SpaceTag(base, layer), data)


def x_power(base: Base, p: int) -> Element:
    layer = Layer.POLYNOMIAL if p >= 0 else Layer.DISTRIBUTION
    return Element(SpaceTag(base, layer), {(0, 0, 0, MONO, p): ONE})


def delta(base: Base, m: int) -> Element:
    """Indicator of the grid point with public index m (e0 is m = 0)."""
    return Element(SpaceTag(base, Layer.FINITE), {(0, 0, 0, DELTA, grid_to_internal(base, m)): ONE})


def basis_element(base: Base, term: Term, layer: Optional[Layer] = None) -> Element:
    if layer is None:
        if term[3] == DELTA:
            layer = Layer.FINITE
        elif term[4] >= 0:
            layer = Layer.POLYNOMIAL
        else:
            layer = Layer.DISTRIBUTION
    return Element(SpaceTag(base, layer), {term: ONE})


@dataclass(frozen=True)
class GenWord:
    """A scalar times a product of generator letters."""

    letters: Tuple[str, ...]
    coeff: Scalar = ONE

    def __post_init__(self):
        for name in self.letters:
            _letter_data(name)


def normal_form(word: Union[GenWord, Sequence[str]], space: SpaceTag) -> Element:
    """Canonical ordered form of a word in the letters, in the given layer."""
    if not isinstance(word, GenWord):
        word = GenWord(tuple(word))
    if space.layer is not Layer.LOCALIZED:
        for name in word.letters:
            if name in INVERSE_LETTERS:
                raise AlgebraError(f"inverse letter {name} needs the Localized layer")
    data = {(0, 0, 0, MONO, 0): as_scalar(word.coeff)}
    for name in word.letters:
        data = mul_terms(space.base, data, _letter_data(name)[0])
    out = Element(SpaceTag(space.base, space.layer), data, check=False)
    _check_layer(space.base, space.layer, out.data)
    return out


def eval_coeff(f: Element, key: Tuple[int, int, int], m: int) -> Scalar:
    return f.coeff_fn(key)(m)


# -- gradings -------------------------------------------------------------------------


def term_weight(t: Term) -> int:
    """Circle-action weight: a, b count +1, their stars -1."""
    return t[0] + t[1] - t[2]


def term_h_weight(t: Term) -> int:
    """Eigenvalue of the Cartan generator H: a, b* count +1, b, a* count -1."""
    return t[0] - t[1] - t[2]


def _graded(f: Element, grading) -> Dict[int, Element]:
    parts: Dict[int, dict] = {}
    for t, c in f.data.items():
        parts.setdefault(grading(t), {})[t] = c
    return {w: Element(f.space, d, check=False) for w, d in sorted(parts.items())}


def weight(f: Element) -> Dict[int, Element]:
    return _graded(f, term_weight)


def h_weight(f: Element) -> Dict[int, Element]:
    return _graded(f, term_h_weight)


def average_j(f: Element) -> Element:
    """Projection onto the circle-invariant (weight 0) part."""
    return Element(f.space, {t: c for t, c in f.data.items() if term_weight(t) == 0}, check=False)


def dilate_alpha(f: Element) -> Element:
    """The automorphism t_ij -> q t_ij, which sends psi(x) to psi(q^2 x)."""
    out: dict = {}
    for t, c in f.data.items():
        i, k, j, kind, n = t
        scale = vpow(2 * (i + abs(k) + j))
        for (kk, nn), cc in fn_shift(f.base, {(kind, n): ONE}, 1).items():
            _add_into(out, (i, k, j, kk, nn), c * cc * scale)
    return Element(f.space, out, check=False)


def homogeneity_degree(f: Element) -> Optional[Fraction]:
    """The l with dilate_alpha(f) = q^(2l) f, or None if f is not homogeneous."""
    if f.base is not Base.XI:
        raise AlgebraError("homogeneity is only defined on the cone")
    degrees = set()
    for (i, k, j, kind, n) in f.data:
        if kind == DELTA:
            return None
        degrees.add(Fraction(2 * n + i + abs(k) + j, 2))
    if len(degrees) != 1:
        return None
    return degrees.pop()


# -- localization and the disc ------------------------------------------------------------


def localize(f: Element) -> Element:
    return f.with_layer(Layer.LOCALIZED) if f.layer is not Layer.FINITE else f


def t12_inverse(base: Base = Base.X) -> Element:
    """x^-1 t12*, a two-sided inverse of t12."""
    return letter("t12^-1", base)


def t12_star_inverse(base: Base = Base.X) -> Element:
    """t12 x^-1, a two-sided inverse of t12*."""
    return letter("t12*^-1", base)


def disc_z(base: Base = Base.X) -> Element:
    """Image of the disc coordinate: q t11 t12^-1."""
    return mul(letter("t11", base), t12_inverse(base)).scale(qpow(1))


def disc_z_right_inverse_form(base: Base = Base.X) -> Element:
    """q t12^-1 t11, the same coordinate written with the inverse on the left."""
    return mul(t12_inverse(base), letter("t11", base)).scale(qpow(1))


def embed_disc(word: Iterable[str], base: Base = Base.X) -> Element:
    """Image of a word in z, z*, f0 under the embedding of the quantum disc."""
    images = {
        "z": lambda: disc_z(base),
        "z*": lambda: star(disc_z(base)),
        "f0": lambda: letter("e0", base),
    }
    out = Element.one(SpaceTag(base, Layer.LOCALIZED))
    for name in word:
        if name not in images:
            raise AlgebraError(f"unknown disc letter {name!r}")
        out = mul(out, images[name]())
    return out


# -- printing ---------------------------------------------------------------------------


def _scalar_q(c: Scalar) -> Tuple[str, str]:
    """(sign, body) for a coefficient; body is '' for 1."""
    mono = c.laurent_monomial()
    if mono is not None and mono[0].denominator == 1:
        sign = "-" if mono[0] < 0 else "+"
        text = (-c if mono[0] < 0 else c).q_str()
        return sign, "" if text == "1" else text
    return "+", f"({c.q_str()})"


def _power(name: str, p: int) -> str:
    return name if p == 1 else f"{name}^{p}"


def monomial_parts(base: Base, t: Term, right: bool = False) -> list:
    """Letters of a basis monomial in algebra order."""
    i, k, j, kind, n = t
    a, b, xx, dl = ("tau11", "tau12", "xi", "eps") if right else ("t11", "t12", "x", "e")
    parts = []
    if i:
        parts.append(_power(a, i))
    if k > 0:
        parts.append(_power(b, k))
    elif k < 0:
        parts.append(_power(b + "*", -k))
    if kind == MONO:
        if n:
            parts.append(_power(xx, n))
    else:
        m = internal_to_grid(base, n)
        parts.append(f"{dl}0" if m == 0 else f"{dl}[{m}]")
    if j:
        parts.append(_power(a + "*", j))
    return parts


def join_terms(pieces: Sequence[Tuple[str, str]]) -> str:
    if not pieces:
        return "0"
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def coef_monomial(c: Scalar, mono: str) -> Tuple[str, str]:
    sign, body = _scalar_q(c)
    if not mono:
        return sign, body or "1"
    if not body:
        return sign, mono
    return sign, f"{body} · {mono}"


def format_element(f: Element) -> str:
    if len(f.data) == 1 and (0, 0, 0, MONO, 0) in f.data:
        return f.data[(0, 0, 0, MONO, 0)].q_str()
    pieces = []
    for t, c in f.terms():
        pieces.append(coef_monomial(c, " ".join(monomial_parts(f.base, t))))
    return join_terms(pieces)
