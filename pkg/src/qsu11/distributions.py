"""Finite functions on the principal space and the delta element e0."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    DELTA,
    Base,
    Element,
    Layer,
    SpaceTag,
    _r_poly,
    delta,
    disc_z,
    letter,
    mul,
    star,
    t12_inverse,
    term_weight,
    vpow,
)
from .linalg import in_span, nullspace
from .scalars import ONE, ZERO, Scalar

FINITE_X = SpaceTag(Base.X, Layer.FINITE)


def make_e0() -> Element:
    """Indicator of the grid point x = 1."""
    return delta(Base.X, 0)


def truncated_finite_basis(trunc: int, weight: Optional[int] = None) -> List[tuple]:
    """Basis terms (i, k, j, delta at index m) with all of i, j, |k|, m <= trunc."""
    out = []
    for i in range(trunc + 1):
        for j in range(trunc + 1):
            if i and j:
                continue
            for k in range(-trunc, trunc + 1):
                if weight is not None and i + k - j != weight:
                    continue
                for m in range(trunc + 1):
                    out.append((i, k, j, DELTA, -m))
    return out


# -- brute-force characterisation of e0 -------------------------------------------------


Monomial = Tuple[Tuple[int, int], ...]


def _poly_mul(p: dict, r: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in r.items():
            exps: Dict[int, int] = dict(m1)
            for v, e in m2:
                exps[v] = exps.get(v, 0) + e
            key = tuple(sorted(exps.items()))
            s = out.get(key, ZERO) + c1 * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _substitute(p: dict, var: int, value: Scalar) -> dict:
    out: dict = {}
    for mono, c in p.items():
        new, coef = [], c
        for v, e in mono:
            if v == var:
                coef = coef * value ** e
            else:
                new.append((v, e))
        if not coef:
            continue
        key = tuple(new)
        s = out.get(key, ZERO) + coef
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def solve_quadratic_system(equations: List[dict], nvars: int) -> List[Dict[int, Scalar]]:
    """All solutions of a polynomial system that splits by repeated case analysis.

    Equations are dicts {monomial: Scalar}; a monomial is a sorted tuple of
    (variable, exponent).  Raises if some variable stays free (a continuum of
    solutions) or if a branch needs roots outside Q(v).
    """
    solutions = []

    def recurse(eqs: List[dict], assigned: Dict[int, Scalar]):
        eqs = [e for e in eqs if e]
        for e in eqs:
            if set(e) == {()}:
                return
        if not eqs:
            free = [v for v in range(nvars) if v not in assigned]
            if free:
                raise ValueError(f"variables {free} are unconstrained: infinitely many solutions")
            solutions.append(dict(assigned))
            return
        for e in eqs:
            vars_in = {v for mono in e for v, _ in mono}
            degs = {sum(x for _, x in mono) for mono in e}
            if len(vars_in) == 1 and max(degs) == 1:
                var = vars_in.pop()
                lin = e.get(((var, 1),), ZERO)
                const = e.get((), ZERO)
                value = -const / lin
                recurse([_substitute(x, var, value) for x in eqs], {**assigned, var: value})
                return
        for e in eqs:
            if len(e) == 1:
                (mono, _), = e.items()
                for var, _ in mono:
                    recurse([_substitute(x, var, ZERO) for x in eqs], {**assigned, var: ZERO})
                return
        for e in eqs:
            vars_in = {v for mono in e for v, _ in mono}
            if len(vars_in) == 1 and () not in e:
                var = vars_in.pop()
                if max(x for mono in e for _, x in mono) == 2:
                    a2 = e.get(((var, 2),), ZERO)
                    a1 = e.get(((var, 1),), ZERO)
                    for value in (ZERO, -a1 / a2):
                        recurse([_substitute(x, var, value) for x in eqs], {**assigned, var: value})
                    return
        raise ValueError("system does not split over Q(v) by case analysis")

    recurse(equations, {})
    return solutions


def _commutator_columns(basis: Sequence[tuple]) -> List[dict]:
    """Columns of the linear conditions t12 f = f t12, t12* f = f t12*, t11* f = 0, f t11 = 0."""
    b, bs, a, a_s = (letter(n) for n in ("t12", "t12*", "t11", "t11*"))
    cols = []
    for t in basis:
        f = Element(FINITE_X, {t: ONE})
        col = {}
        for tag, value in (
            ("b", mul(b, f) - mul(f, b)),
            ("bs", mul(bs, f) - mul(f, bs)),
            ("as", mul(a_s, f)),
            ("a", mul(f, a)),
        ):
            for tt, c in value.data.items():
                col[(tag, tt)] = c
        cols.append(col)
    return cols


def e0_candidates(trunc: int) -> List[Element]:
    """Basis of the truncated solution space of the linear e0 conditions."""
    basis = truncated_finite_basis(trunc)
    null = nullspace(_commutator_columns(basis))
    return [Element(FINITE_X, {basis[c]: v for c, v in vec.items()}) for vec in null]


def solve_e0_all(trunc: int) -> List[Element]:
    """Every truncated finite function obeying the linear e0 conditions and f*f = f."""
    cands = e0_candidates(trunc)
    n = len(cands)
    # f = sum y_s cands[s]; expand f*f - f coordinatewise.
    eqs: Dict[tuple, dict] = {}
    for s, cs in enumerate(cands):
        for t, c in cs.data.items():
            eq = eqs.setdefault(t, {})
            key = ((s, 1),)
            eq[key] = eq.get(key, ZERO) - c
    for s1, c1 in enumerate(cands):
        for s2, c2 in enumerate(cands):
            prod = mul(c1, c2)
            key = ((s1, 2),) if s1 == s2 else ((min(s1, s2), 1), (max(s1, s2), 1))
            for t, c in prod.data.items():
                eq = eqs.setdefault(t, {})
                eq[key] = eq.get(key, ZERO) + c
    equations = [{m: c for m, c in e.items() if c} for e in eqs.values()]
    sols = solve_quadratic_system(equations, n)
    out: List[Element] = []
    for sol in sols:
        f = Element.zero(FINITE_X)
        for s, y in sol.items():
            f = f + cands[s].scale(y)
        if f not in out:
            out.append(f)
    return out


def solve_e0_bruteforce(trunc: int) -> Element:
    """The unique nonzero solution on the truncated basis (raises otherwise)."""
    nonzero = [f for f in solve_e0_all(trunc) if not f.is_zero()]
    if len(nonzero) != 1:
        raise ValueError(f"expected exactly one nonzero solution, found {len(nonzero)}")
    return nonzero[0]


# -- finiteness criterion ------------------------------------------------------------------


@dataclass(frozen=True)
class FinitenessResult:
    finite: bool
    witness: Optional[int]

    def __bool__(self) -> bool:
        return self.finite


def finiteness_criterion(f: Element, max_n: Optional[int] = None) -> FinitenessResult:
    """Smallest N with f t11^N = t11*^N f = 0, searched up to a bound.

    The bound defaults to the largest a-power plus the largest grid index plus
    two, enough for every finite function with these indices.
    """
    if f.base is not Base.X:
        raise ValueError("the criterion is stated for the principal space")
    if max_n is None:
        spread = max((t[0] + t[2] + (-t[4] if t[3] == DELTA else abs(t[4])) for t in f.data), default=0)
        max_n = spread + 2
    a, a_s = letter("t11"), letter("t11*")
    right, left = f, f
    for n in range(1, max_n + 1):
        right = mul(right, a)
        left = mul(a_s, left)
        if right.is_zero() and left.is_zero():
            return FinitenessResult(True, n)
    return FinitenessResult(False, None)


# -- expansion through e0 -------------------------------------------------------------------


def e0_decomposition(f: Element) -> List[Tuple[Tuple[int, int, int, int], Scalar]]:
    """Coefficients c with f = sum c t11^i1 t12^i2 e0 t12*^j2 t11*^j1.

    Each basis term (i, k, j, delta at index m) is a fixed multiple of the word
    with i1 = i + m, j1 = j + m and i2 / j2 the positive / negative part of k.
    """
    if not f.is_finite():
        raise ValueError("only finite functions expand through e0")
    out = []
    for (i, k, j, kind, n), c in sorted(f.data.items()):
        m = -n
        r = ZERO
        for (_, p), cc in _r_poly(Base.X, m).items():
            r = r + cc * vpow(-4 * m * p)
        factor = vpow(2 * abs(k) * m) * r
        out.append(((i + m, max(k, 0), j + m, max(-k, 0)), c / factor))
    return out


def from_e0_words(words: Sequence[Tuple[Tuple[int, int, int, int], Scalar]]) -> Element:
    out = Element.zero(FINITE_X)
    e0 = make_e0()
    for (i1, i2, j1, j2), c in words:
        f = letter("t11") ** i1 * (letter("t12") ** i2) * e0 * (letter("t12*") ** j2) * (letter("t11*") ** j1)
        out = out + f.scale(c)
    return out


# -- weight spaces and the disc ------------------------------------------------------------


def disc_finite_basis(trunc: int) -> List[Element]:
    """Images of z^r f0 z*^s for r, s <= trunc."""
    z = disc_z()
    zs = star(z)
    e0 = make_e0()
    out = []
    for r in range(trunc + 1):
        left = z ** r
        for s in range(trunc + 1):
            out.append(mul(mul(left, e0), zs ** s))
    return out


def _t12_power(m: int) -> Element:
    if m >= 0:
        return letter("t12") ** m
    return t12_inverse() ** (-m)


def weight_space_check(m: int, trunc: int) -> bool:
    """Weight-m finite functions are exactly disc finite functions times t12^m.

    Both inclusions are checked on the truncated basis: every weight-m basis
    term times t12^-m is a weight-0 element in the span of the disc images,
    and every disc image times t12^m is a weight-m finite function.
    """
    disc = disc_finite_basis(2 * trunc + abs(m) + 1)
    disc_vectors = [d.data for d in disc]
    for d in disc:
        if any(term_weight(t) != 0 for t in d.data) or not d.is_finite():
            return False
    up, down = _t12_power(m), _t12_power(-m)
    for t in truncated_finite_basis(trunc, weight=m):
        f = Element(FINITE_X, {t: ONE})
        g = mul(f, down)
        if not g.is_finite() or any(term_weight(tt) != 0 for tt in g.data):
            return False
        if mul(g, up) != f:
            return False
        if not in_span(disc_vectors, g.data):
            return False
    for d in disc_finite_basis(trunc):
        h = mul(d, up)
        if not h.is_finite() or any(term_weight(tt) != m for tt in h.data):
            return False
    return True
