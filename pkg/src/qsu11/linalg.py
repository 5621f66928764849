"""Sparse exact linear algebra over Q(v) and over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Sequence, Tuple

from .scalars import ONE, Scalar

Vector = Dict[Hashable, Scalar]


def _reduce(rows: List[Tuple[Hashable, Vector]], vec: Vector) -> Vector:
    vec = dict(vec)
    for pivot, row in rows:
        c = vec.get(pivot)
        if c is not None and c:
            for col, val in row.items():
                new = vec.get(col, Scalar(0)) - c * val
                if new:
                    vec[col] = new
                else:
                    vec.pop(col, None)
    return vec


def echelon(vectors: Sequence[Vector]) -> List[Tuple[Hashable, Vector]]:
    """Reduced basis of the span: list of (pivot, row) with row[pivot] == 1."""
    rows: List[Tuple[Hashable, Vector]] = []
    for v in vectors:
        r = _reduce(rows, v)
        if not r:
            continue
        pivot = min(r, key=repr)
        inv = ONE / r[pivot]
        r = {c: val * inv for c, val in r.items()}
        new_rows = []
        for p, row in rows:
            c = row.get(pivot)
            if c is not None and c:
                row = dict(row)
                for col, val in r.items():
                    nv = row.get(col, Scalar(0)) - c * val
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)
            new_rows.append((p, row))
        rows = new_rows + [(pivot, r)]
    return rows


def in_span(vectors: Sequence[Vector], target: Vector) -> bool:
    return not _reduce(echelon(vectors), target)


def rank(vectors: Sequence[Vector]) -> int:
    return len(echelon(vectors))


def nullspace(columns: Sequence[Vector]) -> List[Dict[int, Scalar]]:
    """Basis of {y : sum_c y_c columns[c] = 0}; columns are sparse vectors."""
    rows: Dict[Hashable, Dict[int, Scalar]] = {}
    for c, col in enumerate(columns):
        for r, val in col.items():
            rows.setdefault(r, {})[c] = val
    ech = echelon(list(rows.values()))
    pivots = {p for p, _ in ech}
    basis = []
    for free in range(len(columns)):
        if free in pivots:
            continue
        vec = {free: ONE}
        for p, row in ech:
            c = row.get(free)
            if c is not None and c:
                vec[p] = -c
        basis.append(vec)
    return basis


def det_fraction(matrix: List[List[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [list(r) for r in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det
