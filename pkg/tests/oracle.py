"""Independent reference implementations used only by the tests.

The word rewriter works on the letters a = t11, b = t12, A = t11*, B = t12*
with coefficients in sympy's field Q(v), q = v^2.  It never touches the radial
functions or grid shifts of the package; normal words are a^i b^k B^l A^j with
i j = 0.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Tuple

import sympy

V = sympy.Symbol("v")
FIELD = sympy.QQ.frac_field(V)
ONE = FIELD.one
q = FIELD.convert(V) ** 2
qi = ONE / q

Word = Tuple[str, ...]

# t21 = -q^-1 B, t22 = -A, t21* = -q^-1 b, t22* = -a
SUBST = {
    "t11": [(ONE, ("a",))],
    "t12": [(ONE, ("b",))],
    "t11*": [(ONE, ("A",))],
    "t12*": [(ONE, ("B",))],
    "t21": [(-qi, ("B",))],
    "t22": [(-ONE, ("A",))],
    "t21*": [(-qi, ("b",))],
    "t22*": [(-ONE, ("a",))],
    "x": [(ONE, ("b", "B"))],
}


def _rules(eps):
    """Rewrite rules for adjacent pairs; eps is 1 on the principal space, 0 on the cone."""
    return {
        ("b", "a"): [(qi, ("a", "b"))],
        ("B", "a"): [(qi, ("a", "B"))],
        ("A", "a"): [(qi * qi, ("b", "B")), (-eps, ())],
        ("B", "b"): [(ONE, ("b", "B"))],
        ("A", "b"): [(qi, ("b", "A"))],
        ("A", "B"): [(qi, ("B", "A"))],
    }


def _reduce_once(word: Word, rules, eps):
    """One rewrite step, or None if the word is normal."""
    for p in range(len(word) - 1):
        pair = word[p:p + 2]
        if pair in rules:
            return [(c, word[:p] + r + word[p + 2:]) for c, r in rules[pair]]
    # a b^k B^l A -> q^(k+l) (b B - eps) b^k B^l
    for p, ch in enumerate(word):
        if ch != "a":
            continue
        r = p + 1
        while r < len(word) and word[r] in "bB":
            r += 1
        if r < len(word) and word[r] == "A" and r > p + 1:
            mid = word[p + 1:r]
            c = q ** len(mid)
            return [
                (c, word[:p] + ("b", "B") + mid + word[r + 1:]),
                (-c * eps, word[:p] + mid + word[r + 1:]),
            ]
        if r == p + 1 and r < len(word) and word[r] == "A":
            return [(ONE, word[:p] + ("b", "B") + word[r + 1:]), (-eps, word[:p] + word[r + 1:])]
    return None


def normal_words(letters, principal: bool = True) -> Dict[Word, object]:
    eps = ONE if principal else FIELD.zero
    rules = _rules(eps)
    todo: Dict[Word, object] = {(): ONE}
    for name in letters:
        new: Dict[Word, object] = {}
        for w, c in todo.items():
            for c2, w2 in SUBST[name]:
                key = w + w2
                new[key] = new.get(key, FIELD.zero) + c * c2
        todo = {w: c for w, c in new.items() if c}
    done: Dict[Word, object] = {}
    while todo:
        w, c = todo.popitem()
        step = _reduce_once(w, rules, eps)
        if step is None:
            done[w] = done.get(w, FIELD.zero) + c
            continue
        for c2, w2 in step:
            todo[w2] = todo.get(w2, FIELD.zero) + c * c2
            if not todo[w2]:
                del todo[w2]
    return {w: c for w, c in done.items() if c}


def to_terms(words: Dict[Word, object]) -> Dict[Tuple[int, int, int, int], object]:
    """Normal words to (i, k, j, x-power) keys, using x = b B with b, B commuting."""
    out: Dict[Tuple[int, int, int, int], object] = {}
    for w, c in words.items():
        i, nb, nB, j = (w.count(ch) for ch in "abBA")
        p = min(nb, nB)
        key = (i, nb - nB, j, p)
        out[key] = out.get(key, FIELD.zero) + c
    return {k: c for k, c in out.items() if c}


def sympy_of(s) -> sympy.Expr:
    """A package Scalar as a sympy expression in v."""
    num = sum(int(c) * V ** i for i, c in enumerate(s.num.coeffs()))
    den = sum(int(c) * V ** i for i, c in enumerate(s.den.coeffs()))
    return sympy.Rational(1) * num / den


def field_of(s):
    return FIELD.convert(sympy_of(s))


@lru_cache(maxsize=None)
def pochhammer_expand(n: int):
    """Coefficients of (t; q)_n in t, computed by sympy."""
    t = sympy.Symbol("t")
    expr = sympy.prod([(1 - t * V ** (2 * j)) for j in range(n)]) if n else sympy.Integer(1)
    poly = sympy.Poly(sympy.expand(expr), t)
    return {m[0]: sympy.simplify(c) for m, c in zip(poly.monoms(), poly.coeffs())}
