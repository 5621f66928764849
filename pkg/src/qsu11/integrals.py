"""Invariant integrals on the two spaces and the trace functional."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import List, Optional

from .action import DEFAULT_CONFIG, GENERATORS, ActionConfig, Gen, Report, act
from .algebra import (
    DELTA,
    MONO,
    AlgebraError,
    Base,
    Element,
    Layer,
    SpaceTag,
    average_j,
    homogeneity_degree,
    letter,
    mul,
    star,
    x_power,
)
from .sampling import random_finite, random_homogeneous, rng_for
from .scalars import ONE, ZERO, Scalar, vpow


class IntegralTag(Enum):
    NU_X = "NuTildeX"
    NU_XI = "NuTildeXi"
    ETA = "Eta"
    TRACE_L = "TraceL"


def radial_sum(base: Base, radial: dict) -> Scalar:
    """(1 - q^2) sum over the grid of psi(x) x for a finitely supported psi."""
    total = ZERO
    for (kind, n), c in radial.items():
        if kind != DELTA:
            raise AlgebraError("the integral needs a finitely supported coefficient")
        total = total + c * vpow(4 * n)
    return total * (1 - vpow(4))


def integrate(tag: IntegralTag, f: Element) -> Scalar:
    if tag in (IntegralTag.NU_X, IntegralTag.TRACE_L):
        if f.base is not Base.X:
            raise AlgebraError(f"{tag.value} integrates over the principal space")
    if tag is IntegralTag.NU_XI and f.base is not Base.XI:
        raise AlgebraError("this integral lives on the cone")
    if tag is IntegralTag.ETA:
        if f.base is not Base.XI:
            raise AlgebraError("eta lives on the cone")
        degree = homogeneity_degree(f) if not f.is_zero() else Fraction(-1)
        if degree != -1:
            raise AlgebraError(f"eta needs homogeneity degree -1, got {degree}")
        total = ZERO
        for (i, k, j, kind, n), c in f.data.items():
            if (i, k, j) == (0, 0, 0):
                total = total + c
        return total
    if not f.is_finite():
        raise AlgebraError("only finite functions are integrated")
    if tag is IntegralTag.TRACE_L:
        f = mul(f, x_power(Base.X, -1))
    return radial_sum(f.base, f.radial_part())


def nu(f: Element) -> Scalar:
    return integrate(IntegralTag.NU_X if f.base is Base.X else IntegralTag.NU_XI, f)


def trace_l(f: Element) -> Scalar:
    return integrate(IntegralTag.TRACE_L, f)


def trace_property_check(f1: Element, f2: Element) -> bool:
    return trace_l(mul(f1, f2)) == trace_l(mul(f2, f1))


def eta_witnesses() -> List[Element]:
    """The degree -1 elements x^-1 and t12 x^-2 t22 on the cone."""
    xi = Base.XI
    w2 = mul(mul(letter("t12", xi), x_power(xi, -2)), letter("t22", xi))
    return [x_power(xi, -1), w2]


def nu_xi_witness(n: int = 0) -> Element:
    """t12 delta t22 on the cone, the delta sitting at x = q^(2n)."""
    xi = Base.XI
    d = Element(SpaceTag(xi, Layer.FINITE), {(0, 0, 0, DELTA, n): ONE})
    return mul(mul(letter("t12", xi), d), letter("t22", xi))


def check_integral_invariance(
    tag: IntegralTag, samples: int = 100, seed: int = 0, config: ActionConfig = DEFAULT_CONFIG
) -> Report:
    """Integral of every generator image vanishes on sampled inputs."""
    rng = rng_for(seed)
    report = Report()
    inputs: List[Element] = []
    if tag is IntegralTag.ETA:
        inputs += eta_witnesses()
        inputs += [random_homogeneous(rng, -1) for _ in range(samples)]
    else:
        base = Base.XI if tag is IntegralTag.NU_XI else Base.X
        if base is Base.XI:
            inputs += [nu_xi_witness(n) for n in (-1, 0, 2)]
        else:
            inputs.append(letter("e0"))
        inputs += [random_finite(rng, base, terms=4) for _ in range(samples)]
    for idx, f in enumerate(inputs):
        for gen in GENERATORS:
            image = act(gen, f, config)
            value = integrate(tag, image)
            report.add(f"{tag.value} #{idx} {gen.value}", value.is_zero(), f"f = {f}; integral = {value}")
        if tag is not IntegralTag.ETA:
            report.add(f"{tag.value} #{idx} averaging", integrate(tag, average_j(f)) == integrate(tag, f), str(f))
            report.add(f"{tag.value} #{idx} realness", integrate(tag, star(f)) == integrate(tag, f), str(f))
    return report


def check_trace_property(samples: int = 100, seed: int = 0) -> Report:
    rng = rng_for(seed)
    report = Report()
    for idx in range(samples):
        f1 = random_finite(rng, Base.X, terms=3)
        f2 = random_finite(rng, Base.X, terms=3)
        report.add(f"trace #{idx}", trace_property_check(f1, f2), f"f1 = {f1}; f2 = {f2}")
    return report
