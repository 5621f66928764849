"""Exact coefficients: the field Q(v) with q = v**2, and Laurent polynomials
in a formal parameter lam over it.

Everything here is exact. ``Scalar`` keeps a reduced fraction of integer
polynomials in ``v``; ``LambdaScalar`` is a finite map ``lam-exponent ->
Scalar`` so that ``lam`` only ever occurs in numerators.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

from flint import fmpz_poly

__all__ = [
    "Scalar",
    "LambdaScalar",
    "ZERO",
    "ONE",
    "V",
    "Q",
    "LAM",
    "vpow",
    "qpow",
    "as_scalar",
    "qnum",
    "qpochhammer",
    "pochhammer_poly",
    "verify_pochhammer_expansion",
    "pochhammer_expansion_coeff",
    "QSeries",
    "QSeriesTruncation",
    "qbinomial_series",
    "sh_ratio",
]

_POLY_ONE = fmpz_poly([1])
_POLY_ZERO = fmpz_poly([])


def _poly_key(p: fmpz_poly) -> tuple:
    return tuple(int(c) for c in p.coeffs())


class Scalar:
    """Element of Q(v), stored as a reduced fraction ``num/den``.

    The denominator has positive leading coefficient and is coprime to the
    numerator (content included), so equal values have equal storage.
    """

    __slots__ = ("num", "den", "_key")

    def __init__(self, num=0, den=None):
        if isinstance(num, Scalar):
            if den is not None:
                raise TypeError("cannot combine a Scalar with an explicit denominator")
            self.num, self.den, self._key = num.num, num.den, num._key
            return
        if isinstance(num, Fraction):
            n, d = fmpz_poly([num.numerator]), fmpz_poly([num.denominator])
        elif isinstance(num, int):
            n, d = fmpz_poly([num]), _POLY_ONE
        elif isinstance(num, fmpz_poly):
            n, d = num, _POLY_ONE
        else:
            raise TypeError(f"cannot build a Scalar from {type(num).__name__}")
        if den is not None:
            if isinstance(den, int):
                den = fmpz_poly([den])
            d = d * den
        self._set(n, d)

    def _set(self, n: fmpz_poly, d: fmpz_poly) -> None:
        if d == 0:
            raise ZeroDivisionError("Scalar with zero denominator")
        if n == 0:
            self.num, self.den = _POLY_ZERO, _POLY_ONE
        else:
            if d != 1:
                g = n.gcd(d)
                if g != 1:
                    n, d = n // g, d // g
                if d.leading_coefficient() < 0:
                    n, d = -n, -d
            self.num, self.den = n, d
        self._key = None

    @classmethod
    def _raw(cls, n: fmpz_poly, d: fmpz_poly) -> "Scalar":
        s = cls.__new__(cls)
        s._set(n, d)
        return s

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num == 0

    def __bool__(self) -> bool:
        return self.num != 0

    def key(self) -> tuple:
        if self._key is None:
            self._key = (_poly_key(self.num), _poly_key(self.den))
        return self._key

    def __hash__(self) -> int:
        return hash(self.key())

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == Scalar(other)
        if isinstance(other, LambdaScalar):
            return other == self
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar(other)
            else:
                return NotImplemented
        if self.den == other.den:
            return Scalar._raw(self.num + other.num, self.den)
        return Scalar._raw(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        s = Scalar.__new__(Scalar)
        s.num, s.den, s._key = -self.num, self.den, None
        return s

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar(other)
            else:
                return NotImplemented
        if self.den == 1 and other.den == 1:
            s = Scalar.__new__(Scalar)
            s.num, s.den, s._key = self.num * other.num, _POLY_ONE, None
            return s
        return Scalar._raw(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num == 0:
            raise ZeroDivisionError("division by the zero Scalar")
        return Scalar._raw(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.num == 0:
            raise ZeroDivisionError("division by the zero Scalar")
        return Scalar._raw(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return Scalar(other) / self

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        return Scalar._raw(self.num ** n, self.den ** n)

    # -- evaluation -------------------------------------------------------
    def evaluate(self, v: Fraction) -> Fraction:
        """Specialise ``v`` to a rational number."""
        n = sum((Fraction(int(c)) * v ** i for i, c in enumerate(self.num.coeffs())), Fraction(0))
        d = sum((Fraction(int(c)) * v ** i for i, c in enumerate(self.den.coeffs())), Fraction(0))
        if d == 0:
            raise ZeroDivisionError(f"pole at v = {v}")
        return n / d

    def laurent_monomial(self):
        """Return ``(c, e)`` if this equals ``c * v**e`` for a rational ``c``, else None."""
        if self.num == 0:
            return None
        n_terms = [(i, int(c)) for i, c in enumerate(self.num.coeffs()) if c != 0]
        d_terms = [(i, int(c)) for i, c in enumerate(self.den.coeffs()) if c != 0]
        if len(n_terms) != 1 or len(d_terms) != 1:
            return None
        (ni, nc), (di, dc) = n_terms[0], d_terms[0]
        return Fraction(nc, dc), ni - di

    # -- printing ---------------------------------------------------------
    def __str__(self) -> str:
        n = _poly_str(self.num, "v")
        if self.den == 1:
            return n
        return f"({n})/({_poly_str(self.den, 'v')})"

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def q_str(self) -> str:
        """Render in terms of q (half-integer exponents allowed), for display."""
        return _q_fraction_str(self)

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Inverse of ``str``: accepts ``poly`` or ``(poly)/(poly)`` in ``v``."""
        value = _parse_v_fraction(text)
        if isinstance(value, LambdaScalar):
            raise ValueError(f"{text!r} involves lam; use LambdaScalar.parse")
        return value


class LambdaScalar:
    """Laurent polynomial in the formal parameter ``lam`` with Q(v) coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        out = {}
        for e, c in (coeffs or {}).items():
            c = as_scalar(c)
            if c:
                out[int(e)] = c
        self.coeffs = out

    @classmethod
    def lam_power(cls, e: int) -> "LambdaScalar":
        return cls({e: ONE})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def free_part(self):
        """The plain Scalar if no ``lam`` occurs, else None."""
        if not self.coeffs:
            return ZERO
        if set(self.coeffs) == {0}:
            return self.coeffs[0]
        return None

    def _coerce(self, other):
        if isinstance(other, LambdaScalar):
            return other
        if isinstance(other, (Scalar, int, Fraction)):
            return LambdaScalar({0: other})
        return None

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        free = self.free_part()
        if free is not None:
            return hash(free)
        return hash(tuple(sorted((e, c.key()) for e, c in self.coeffs.items())))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return LambdaScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return LambdaScalar({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                e = e1 + e2
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return LambdaScalar(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LambdaScalar):
            free = other.free_part()
            if free is None:
                raise ValueError("lam may not occur in a denominator")
            other = free
        other = as_scalar(other)
        return LambdaScalar({e: c / other for e, c in self.coeffs.items()})

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) == 1:
                (e, c), = self.coeffs.items()
                return LambdaScalar({-e * (-n): c ** n})
            raise ValueError("only lam-monomials can be inverted")
        out = LambdaScalar({0: ONE})
        for _ in range(n):
            out = out * self
        return out

    def substitute(self, lam_value: Scalar) -> Scalar:
        """Evaluate at ``lam = lam_value`` (a nonzero Scalar)."""
        total = ZERO
        for e, c in self.coeffs.items():
            total = total + c * lam_value ** e
        return total

    def lam_degrees(self) -> tuple:
        if not self.coeffs:
            return (0, 0)
        return (min(self.coeffs), max(self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = str(self.coeffs[e])
            if e == 0:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*lam^{e}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LambdaScalar({self})"

    @classmethod
    def parse(cls, text: str) -> "LambdaScalar":
        value = _parse_v_fraction(text)
        if isinstance(value, Scalar):
            return LambdaScalar({0: value})
        return value


AnyScalar = Union[Scalar, LambdaScalar]


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    raise TypeError(f"expected a Scalar, got {type(x).__name__}")


ZERO = Scalar(0)
ONE = Scalar(1)
V = Scalar(fmpz_poly([0, 1]))
Q = Scalar(fmpz_poly([0, 0, 1]))
LAM = LambdaScalar({1: ONE})


@lru_cache(maxsize=None)
def vpow(n: int) -> Scalar:
    """v**n for any integer n."""
    if n >= 0:
        return Scalar(fmpz_poly([0] * n + [1]))
    return Scalar(1, fmpz_poly([0] * (-n) + [1]))


def qpow(r) -> Scalar:
    """q**r for integer or half-integer r."""
    r = Fraction(r)
    if (2 * r).denominator != 1:
        raise ValueError(f"q**{r} is not in Q(v)")
    return vpow(int(2 * r))


# -- q-numbers and q-Pochhammer symbols ---------------------------------------


def qnum(n: int) -> Scalar:
    """Symmetric q-number (q**n - q**-n)/(q - q**-1)."""
    return (qpow(n) - qpow(-n)) / (Q - qpow(-1))


def sh_ratio(l: int) -> Scalar:
    """sh((l+1)h/2) sh(lh/2) / sh(h/2)**2 written through q = exp(-h/2).

    sh(nh/2) = (exp(nh/2) - exp(-nh/2))/2 = (q**-n - q**n)/2, so this never
    goes through ``qnum``; it is the independent side of the Casimir check.
    """
    def sh(n):
        return (qpow(-n) - qpow(n)) / 2

    return sh(l + 1) * sh(l) / (sh(1) * sh(1))


def pochhammer_poly(t_scale, base: Scalar, n: int) -> dict:
    """(c t; base)_n as a polynomial in a commuting symbol t: {power: coeff}.

    ``t_scale`` is the constant c in front of t (Scalar or LambdaScalar).
    """
    if n < 0:
        raise ValueError("Pochhammer length must be nonnegative")
    poly: dict = {0: ONE}
    factor = t_scale
    for _ in range(n):
        new: dict = {}
        for p, c in poly.items():
            new[p] = new[p] + c if p in new else c
            new[p + 1] = new.get(p + 1, ZERO) - c * factor
        poly = {p: c for p, c in new.items() if c}
        factor = factor * base
    return poly


def qpochhammer(t, base: Scalar, n: int):
    """(t; base)_n.

    With ``t`` a Scalar (or LambdaScalar) returns the product as a value; with
    ``t=None`` returns the polynomial in a formal commuting symbol t as
    ``{power: coeff}``.
    """
    if n < 0:
        raise ValueError("Pochhammer length must be nonnegative")
    if t is None:
        return pochhammer_poly(ONE, base, n)
    out = ONE if not isinstance(t, LambdaScalar) else LambdaScalar({0: ONE})
    factor = t
    for _ in range(n):
        out = out * (1 - factor)
        factor = factor * base
    return out


def pochhammer_expansion_coeff(n: int, j: int, shift: int = 0) -> Scalar:
    """(q^-n;q)_j/(q;q)_j q^(j(n+shift)), the t^j coefficient of (t;q)_n when shift=0."""
    return qpochhammer(qpow(-n), Q, j) / qpochhammer(Q, Q, j) * qpow(j * (n + shift))


def verify_pochhammer_expansion(n: int, shift: int = 0) -> bool:
    """(t;q)_n == sum_j (q^-n;q)_j/(q;q)_j q^(j(n+shift)) t^j as polynomials in t.

    True for every n >= 0 only with ``shift=0``; any other shift breaks at n=1.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    lhs = pochhammer_poly(ONE, Q, n)
    rhs = {}
    for j in range(n + 1):
        c = pochhammer_expansion_coeff(n, j, shift)
        if c:
            rhs[j] = c
    return lhs == rhs


# -- truncated power series in a commuting symbol u ----------------------------


class QSeriesTruncation:
    """Series are kept modulo u**(order+1)."""

    __slots__ = ("order",)

    def __init__(self, order: int):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        self.order = int(order)

    def __repr__(self) -> str:
        return f"QSeriesTruncation({self.order})"


class QSeries:
    """Truncated power series sum_n c_n u^n, n <= order."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: dict, order: int):
        self.order = order
        self.coeffs = {n: c for n, c in coeffs.items() if n <= order and c}

    @classmethod
    def from_poly(cls, poly: dict, order: int) -> "QSeries":
        return cls(dict(poly), order)

    def __mul__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        out: dict = {}
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                n = n1 + n2
                if n <= order:
                    out[n] = out[n] + c1 * c2 if n in out else c1 * c2
        return QSeries(out, order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def is_one(self) -> bool:
        return set(self.coeffs) == {0} and self.coeffs[0] == 1

    def __getitem__(self, n: int):
        return self.coeffs.get(n, ZERO)

    def __repr__(self) -> str:
        body = " + ".join(f"({self.coeffs[n]})*u^{n}" for n in sorted(self.coeffs))
        return f"QSeries({body or '0'} + O(u^{self.order + 1}))"


def qbinomial_series(a, trunc) -> QSeries:
    """sum_{n<=N} (a;q^2)_n/(q^2;q^2)_n u^n; ``a`` may be a LambdaScalar."""
    order = trunc.order if isinstance(trunc, QSeriesTruncation) else int(trunc)
    q2 = qpow(2)
    coeffs = {}
    for n in range(order + 1):
        coeffs[n] = qpochhammer(a, q2, n) / qpochhammer(q2, q2, n)
    return QSeries(coeffs, order)


# -- printing / parsing helpers -------------------------------------------------


def _poly_str(p: fmpz_poly, var: str) -> str:
    coeffs = [int(c) for c in p.coeffs()]
    terms = [(i, c) for i, c in enumerate(coeffs) if c != 0]
    if not terms:
        return "0"
    out = []
    for i, c in reversed(terms):
        if i == 0:
            body = str(abs(c))
        else:
            mon = var if i == 1 else f"{var}^{i}"
            body = mon if abs(c) == 1 else f"{abs(c)}*{mon}"
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def _q_exp_str(e: int) -> str:
    """v**e written as a power of q."""
    if e % 2 == 0:
        k = e // 2
        return "q" if k == 1 else f"q^{k}"
    return f"q^({e}/2)"


def _laurent_q_str(terms: list) -> str:
    """terms: list of (v-exponent, int coefficient), printed descending."""
    out = []
    for e, c in sorted(terms, reverse=True):
        if e == 0:
            body = str(abs(c))
        else:
            mon = _q_exp_str(e)
            body = mon if abs(c) == 1 else f"{abs(c)} {mon}"
        out.append(("-" if c < 0 else "+", body))
    if not out:
        return "0"
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def _q_fraction_str(s: Scalar) -> str:
    num = [(i, int(c)) for i, c in enumerate(s.num.coeffs()) if c != 0]
    den = [(i, int(c)) for i, c in enumerate(s.den.coeffs()) if c != 0]
    if not num:
        return "0"
    shift = min(i for i, _ in den)
    den = [(i - shift, c) for i, c in den]
    num = [(i - shift, c) for i, c in num]
    if den == [(0, 1)]:
        return _laurent_q_str(num)
    if den == [(0, -1)]:
        return _laurent_q_str([(i, -c) for i, c in num])
    n_text = _laurent_q_str(num)
    if len(num) > 1:
        n_text = f"({n_text})"
    d_text = _laurent_q_str(den)
    if len(den) > 1:
        d_text = f"({d_text})"
    return f"{n_text}/{d_text}"


_TOKEN = re.compile(r"\s*(?:(\d+)|(v|lam)|(\^)|(\*)|(\+)|(-)|(\()|(\))|(/))")


def _parse_v_fraction(text: str):
    """Tiny recursive-descent parser for the ``str`` output of scalars."""
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad scalar literal {text!r} at offset {pos}")
        tokens.append(m.group(0).strip())
        pos = m.end()
    tokens.append("")
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        t = tokens[idx]
        idx += 1
        return t

    def expr():
        sign = 1
        if peek() == "-":
            take()
            sign = -1
        value = term() * sign
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term():
        value = factor()
        while peek() in ("*", "/"):
            op = take()
            rhs = factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor():
        t = take()
        if t == "(":
            value = expr()
            if take() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
        elif t.isdigit():
            value = Scalar(int(t))
        elif t == "v":
            value = V
        elif t == "lam":
            value = LAM
        else:
            raise ValueError(f"unexpected token {t!r} in {text!r}")
        if peek() == "^":
            take()
            neg = False
            if peek() == "-":
                take()
                neg = True
            e = int(take())
            value = value ** (-e if neg else e)
        return value

    value = expr()
    if peek() != "":
        raise ValueError(f"trailing input in scalar literal {text!r}")
    if isinstance(value, LambdaScalar):
        free = value.free_part()
        if free is not None:
            return free
    return value
