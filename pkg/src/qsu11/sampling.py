"""Seeded random elements for property checks."""

from __future__ import annotations

import random
from typing import List, Optional

from .algebra import DELTA, MONO, Base, Element, Layer, SpaceTag, grid_to_internal
from .scalars import Scalar, qpow

WORD_LETTERS = ("t11", "t12", "t21", "t22", "t11*", "t12*", "t21*", "t22*", "x")


def random_scalar(rng: random.Random) -> Scalar:
    c = Scalar(rng.choice([1, -1, 2, -3, 5]))
    if rng.random() < 0.5:
        c = c * qpow(rng.randint(-2, 2))
    if rng.random() < 0.2:
        c = c / (1 - qpow(2))
    return c


def random_word(rng: random.Random, base: Base, max_len: int = 8, with_e0: bool = False) -> List[str]:
    pool = list(WORD_LETTERS)
    if with_e0 and base is Base.X:
        pool.append("e0")
    return [rng.choice(pool) for _ in range(rng.randint(0, max_len))]


def random_term(rng: random.Random, base: Base, kind: int, spread: int = 2):
    i = rng.randint(0, spread)
    j = 0 if i else rng.randint(0, spread)
    k = rng.randint(-spread, spread)
    if kind == DELTA:
        if base is Base.X:
            n = grid_to_internal(base, rng.randint(0, spread + 1))
        else:
            n = rng.randint(-spread - 1, spread + 1)
    else:
        n = rng.randint(0, spread)
    return (i, k, j, kind, n)


def random_finite(rng: random.Random, base: Base, terms: int = 3, spread: int = 2) -> Element:
    data = {}
    for _ in range(rng.randint(1, terms)):
        data[random_term(rng, base, DELTA, spread)] = random_scalar(rng)
    return Element(SpaceTag(base, Layer.FINITE), data)


def random_polynomial(rng: random.Random, base: Base, terms: int = 3, spread: int = 2) -> Element:
    data = {}
    for _ in range(rng.randint(1, terms)):
        data[random_term(rng, base, MONO, spread)] = random_scalar(rng)
    return Element(SpaceTag(base, Layer.POLYNOMIAL), data)


def random_element(rng: random.Random, base: Base, terms: int = 3, spread: int = 2) -> Element:
    """Polynomial or finite, at random (products of two samples are always defined)."""
    if rng.random() < 0.5:
        return random_polynomial(rng, base, terms, spread)
    return random_finite(rng, base, terms, spread)


def random_homogeneous(rng: random.Random, degree, terms: int = 3, spread: int = 2) -> Element:
    """Random element on the cone with dilation degree ``degree`` (half-integers allowed)."""
    data = {}
    two_l = int(2 * degree)
    for _ in range(rng.randint(1, terms)):
        while True:
            i = rng.randint(0, spread)
            j = 0 if i else rng.randint(0, spread)
            k = rng.randint(-spread, spread)
            s = i + abs(k) + j
            if (two_l - s) % 2 == 0:
                break
        data[(i, k, j, MONO, (two_l - s) // 2)] = random_scalar(rng)
    return Element(SpaceTag(Base.XI, Layer.DISTRIBUTION), data)


def rng_for(seed: Optional[int]) -> random.Random:
    return random.Random(0 if seed is None else seed)
