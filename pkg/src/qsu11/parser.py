"""Expression syntax for elements, kernels and scalars.

    expr   := tensor
    tensor := sum (('|' | '⊗') sum)?
    sum    := ['-'] term (('+' | '-') term)*
    term   := factor (['·'] factor | '/' factor)*
    factor := atom ('^' exponent)?
    atom   := ident | number | '(' expr ')'

Stars are trailing: t11*, t12*^2.  Grid deltas are e0, e[m] (and eps0,
eps[m] in the second tensor factor).  Second-factor letters are tau11 ...
tau22, xi, zeta, zeta*.  q^(1/2) is the only kind of fractional power.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .algebra import (
    AlgebraError,
    Base,
    Element,
    Layer,
    SpaceTag,
    _check_layer,
    delta,
    disc_z,
    letter,
    natural_layer,
    star,
)
from .scalars import ONE, LambdaScalar, Scalar, qpow


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        self.message = message
        self.offset = offset
        self.text = text
        super().__init__(self._render())

    def _render(self) -> str:
        out = f"{self.message} at offset {self.offset}"
        if self.text:
            out += f"\n  {self.text}\n  {' ' * self.offset}^"
        return out


# -- syntax tree ------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Atom:
    name: str
    pos: int
    index: Optional[int] = None  # grid index for e[m], eps[m]


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: Fraction
    pos: int


@dataclass(frozen=True)
class Prod:
    factors: Tuple[Tuple[str, "Expr"], ...]  # ('*' | '/', factor)


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Tuple[int, "Expr"], ...]  # (sign, term)


@dataclass(frozen=True)
class Tensor:
    left: "Expr"
    right: "Expr"
    pos: int


Expr = Union[Num, Atom, Pow, Prod, Sum, Tensor]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*\*?(?:\[-?\d+\])?)
  | (?P<op>[-+^()/|·⊗])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos, self.text)

    def fail(self, message: str):
        raise ParseError(message, self.peek()[2], self.text)

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        node = self.tensor()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node

    def tensor(self) -> Expr:
        left = self.sum()
        if self.peek()[1] in ("|", "⊗"):
            pos = self.take()[2]
            right = self.sum()
            return Tensor(left, right, pos)
        return left

    def sum(self) -> Expr:
        terms = []
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        elif self.peek()[1] == "+":
            self.take()
        terms.append((sign, self.term()))
        while self.peek()[1] in ("+", "-"):
            sign = 1 if self.take()[1] == "+" else -1
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def _starts_factor(self) -> bool:
        kind, text, _ = self.peek()
        return kind in ("num", "ident") or text == "("

    def term(self) -> Expr:
        factors = [("*", self.factor())]
        while True:
            text = self.peek()[1]
            if text == "·":
                self.take()
                factors.append(("*", self.factor()))
            elif text == "/":
                self.take()
                factors.append(("/", self.factor()))
            elif self._starts_factor():
                factors.append(("*", self.factor()))
            else:
                break
        if len(factors) == 1:
            return factors[0][1]
        return Prod(tuple(factors))

    def factor(self) -> Expr:
        node = self.atom()
        if self.peek()[1] == "^":
            pos = self.take()[2]
            node = Pow(node, self.exponent(), pos)
        return node

    def exponent(self) -> Fraction:
        kind, text, pos = self.peek()
        if text == "(":
            self.take()
            value = self._signed_int()
            if self.peek()[1] == "/":
                self.take()
                den = self._signed_int()
                if den == 0:
                    raise ParseError("zero denominator in exponent", pos, self.text)
                value = Fraction(value, den)
            self.expect(")")
            return Fraction(value)
        return Fraction(self._signed_int())

    def _signed_int(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, text, pos = self.take()
        if kind != "num":
            raise ParseError("expected an integer exponent", pos, self.text)
        return sign * int(text)

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            return Num(int(text), pos)
        if kind == "ident":
            m = re.fullmatch(r"([A-Za-z][A-Za-z0-9]*\*?)(?:\[(-?\d+)\])?", text)
            name, idx = m.group(1), m.group(2)
            if idx is not None:
                if name not in ("e", "eps"):
                    raise ParseError(f"{name!r} takes no grid index", pos, self.text)
                return Atom(name, pos, int(idx))
            if name in ("e", "eps"):
                raise ParseError(f"{name!r} needs a grid index, as in {name}[2]", pos, self.text)
            return Atom(name, pos)
        if text == "(":
            node = self.tensor()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos, self.text)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# -- evaluation ---------------------------------------------------------------------------

LEFT_ATOMS = {"t11", "t12", "t21", "t22", "t11*", "t12*", "t21*", "t22*", "x", "e0", "e", "z", "z*", "f0"}
RIGHT_ATOMS = {
    "tau11", "tau12", "tau21", "tau22", "tau11*", "tau12*", "tau21*", "tau22*",
    "xi", "eps0", "eps", "zeta", "zeta*",
}
KERNEL_ATOMS = {"k11", "k12", "k21", "k22"}
SCALAR_ATOMS = {"q", "lam"}
INVERTIBLE = {"x": "x^-1", "t12": "t12^-1", "t12*": "t12*^-1"}


def _walk(node: Expr):
    yield node
    if isinstance(node, Pow):
        yield from _walk(node.base)
    elif isinstance(node, Prod):
        for _, f in node.factors:
            yield from _walk(f)
    elif isinstance(node, Sum):
        for _, t in node.terms:
            yield from _walk(t)
    elif isinstance(node, Tensor):
        yield from _walk(node.left)
        yield from _walk(node.right)


def is_tensor_expr(node: Expr) -> bool:
    for n in _walk(node):
        if isinstance(n, Tensor):
            return True
        if isinstance(n, Atom) and (n.name in RIGHT_ATOMS or n.name in KERNEL_ATOMS):
            return True
    return False


@dataclass
class Context:
    """Where an expression is evaluated.  ``layer`` None means: pick the
    smallest layer containing the result, allowing inverse letters."""

    base: Base = Base.X
    layer: Optional[Layer] = None
    pair: Tuple[Base, Base] = (Base.X, Base.X)
    text: str = ""


class _Evaluator:
    def __init__(self, ctx: Context, tensor: bool):
        self.ctx = ctx
        self.tensor = tensor
        self.used_inverse = False

    def error(self, message: str, pos: int):
        raise ParseError(message, pos, self.ctx.text)

    # values are Scalar, LambdaScalar, Element or TensorElement
    def unit(self):
        if self.tensor:
            from .kernels import TensorElement

            return TensorElement.one(self.ctx.pair)
        return Element.one(SpaceTag(self.ctx.base, Layer.LOCALIZED))

    def lift(self, value):
        if isinstance(value, LambdaScalar):
            free = value.free_part()
            if free is None:
                raise AlgebraError("lam may only appear in scalar expressions")
            value = free
        if isinstance(value, Scalar):
            return self.unit().scale(value)
        return value

    def element_atom(self, name: str, base: Base, index: Optional[int], pos: int) -> Element:
        loc = SpaceTag(base, Layer.LOCALIZED)
        if name in ("e0", "f0", "e", "eps0", "eps"):
            m = 0 if index is None else index
            if base is Base.X and m < 0:
                self.error(f"grid index {m} is off the grid q^(-2m), m >= 0", pos)
            return delta(base, m).with_layer(Layer.LOCALIZED)
        if name in ("z", "z*"):
            if base is not Base.X:
                self.error("z is defined on the principal space", pos)
            z = disc_z(base)
            return (star(z) if name == "z*" else z).with_layer(Layer.LOCALIZED)
        if name.startswith("tau"):
            name = "t" + name[3:]
        if name == "xi":
            name = "x"
        f = letter(name, base)
        return Element(loc, f.data, check=False)

    def atom(self, node: Atom):
        name = node.name
        if name == "q":
            return qpow(1)
        if name == "lam":
            return LambdaScalar({1: ONE})
        if name not in LEFT_ATOMS | RIGHT_ATOMS | KERNEL_ATOMS:
            self.error(f"unknown identifier {name!r}", node.pos)
        if not self.tensor:
            if name in RIGHT_ATOMS or name in KERNEL_ATOMS:
                self.error(f"{name!r} belongs to a kernel expression", node.pos)
            return self.element_atom(name, self.ctx.base, node.index, node.pos)
        from . import kernels

        pair = self.ctx.pair
        if name in KERNEL_ATOMS:
            return kernels.kernel_k(int(name[1]), int(name[2]), pair)
        if name in ("z", "z*", "zeta", "zeta*"):
            return kernels.kernel_letters(pair)[name]
        if name in RIGHT_ATOMS:
            return kernels.right_element(self.element_atom(name, pair[1], node.index, node.pos), pair)
        return kernels.left_element(self.element_atom(name, pair[0], node.index, node.pos), pair)

    def power(self, node: Pow):
        exp = node.exp
        if isinstance(node.base, Atom) and node.base.name == "q":
            if (2 * exp).denominator != 1:
                self.error("only half-integer powers of q are allowed", node.pos)
            return qpow(exp)
        if exp.denominator != 1:
            self.error("fractional powers are only allowed on q", node.pos)
        n = int(exp)
        value = self.eval(node.base)
        if isinstance(value, (Scalar, LambdaScalar)):
            if n < 0 and isinstance(value, Scalar) and not value:
                self.error("zero to a negative power", node.pos)
            return value ** n
        if n >= 0:
            return value ** n
        base = node.base
        if isinstance(base, Atom) and base.name in ("x", "t12", "t12*", "xi", "tau12", "tau12*"):
            self.used_inverse = True
            inv_name = INVERTIBLE[{"xi": "x", "tau12": "t12", "tau12*": "t12*"}.get(base.name, base.name)]
            data = letter(inv_name, Base.X).data
            if self.tensor:
                from . import kernels

                side = kernels.right_element if base.name in ("xi", "tau12", "tau12*") else kernels.left_element
                inv = side(Element(SpaceTag(Base.X, Layer.LOCALIZED), data, check=False), self.ctx.pair)
            else:
                inv = Element(SpaceTag(self.ctx.base, Layer.LOCALIZED), data, check=False)
            return inv ** (-n)
        self.error("negative powers are only defined for x, t12 and t12*", node.pos)

    def eval(self, node: Expr):
        if isinstance(node, Num):
            return Scalar(node.value)
        if isinstance(node, Atom):
            return self.atom(node)
        if isinstance(node, Pow):
            return self.power(node)
        if isinstance(node, Prod):
            acc = None
            for op, f in node.factors:
                value = self.eval(f)
                if acc is None:
                    acc = value
                elif op == "/":
                    if not isinstance(value, Scalar):
                        self.error("division is only by scalars", _pos(f))
                    if not value:
                        self.error("division by zero", _pos(f))
                    acc = acc * (ONE / value) if isinstance(acc, (Scalar, LambdaScalar)) else acc.scale(ONE / value)
                else:
                    acc = self.multiply(acc, value)
            return acc
        if isinstance(node, Sum):
            total = None
            for sign, t in node.terms:
                value = self.eval(t)
                if sign < 0:
                    value = -value
                total = value if total is None else self.add(total, value)
            return total
        if isinstance(node, Tensor):
            if not self.tensor:
                self.error("tensor product outside a kernel expression", node.pos)
            return self.pure(node)
        raise TypeError(node)

    def pure(self, node: Tensor):
        from .kernels import TensorElement

        b1, b2 = self.ctx.pair
        left = _Evaluator(Context(b1, None, self.ctx.pair, self.ctx.text), False)
        right = _Evaluator(Context(b2, None, self.ctx.pair, self.ctx.text), False)
        f1 = left.lift(left.eval(node.left))
        f2 = right.lift(right.eval(node.right))
        self.used_inverse |= left.used_inverse or right.used_inverse
        return TensorElement.pure(f1, f2)

    def multiply(self, a, b):
        scalars = (Scalar, LambdaScalar)
        if isinstance(a, scalars) and isinstance(b, scalars):
            return a * b
        if isinstance(a, scalars):
            return b.scale(_only(a))
        if isinstance(b, scalars):
            return a.scale(_only(b))
        return a * b

    def add(self, a, b):
        scalars = (Scalar, LambdaScalar)
        if isinstance(a, scalars) and isinstance(b, scalars):
            return a + b
        return self.lift(a) + self.lift(b)


def _only(value) -> Scalar:
    if isinstance(value, LambdaScalar):
        free = value.free_part()
        if free is None:
            raise AlgebraError("lam may only appear in scalar expressions")
        return free
    return value


def _pos(node: Expr) -> int:
    for n in _walk(node):
        if hasattr(n, "pos"):
            return n.pos
    return 0


def evaluate(text_or_node, ctx: Optional[Context] = None):
    """Evaluate to a Scalar, LambdaScalar, Element or TensorElement."""
    ctx = ctx or Context()
    if isinstance(text_or_node, str):
        ctx = Context(ctx.base, ctx.layer, ctx.pair, text_or_node)
        node = parse(text_or_node)
    else:
        node = text_or_node
    ev = _Evaluator(ctx, is_tensor_expr(node))
    value = ev.eval(node)
    if isinstance(value, (Scalar, LambdaScalar)):
        if ctx.layer is None:
            return value
        value = ev.lift(value)
    if ev.tensor:
        return value
    if ctx.layer is not None:
        if ctx.layer is not Layer.LOCALIZED and ev.used_inverse:
            raise AlgebraError(f"inverse letters need the Localized layer, not {ctx.layer.value}")
        _check_layer(ctx.base, ctx.layer, value.data)
        return value.with_layer(ctx.layer)
    return value.with_layer(natural_layer(value))


def render(value) -> str:
    from .algebra import format_element

    if isinstance(value, Element):
        return format_element(value)
    if isinstance(value, Scalar):
        return value.q_str()
    if isinstance(value, LambdaScalar):
        from .algebra import coef_monomial, join_terms

        pieces = []
        for e in sorted(value.coeffs, reverse=True):
            mono = "" if e == 0 else ("lam" if e == 1 else f"lam^{e}")
            pieces.append(coef_monomial(value.coeffs[e], mono))
        return join_terms(pieces)
    return str(value)


def normalize(text: str, ctx: Optional[Context] = None) -> str:
    return render(evaluate(text, ctx))
