"""Exact computations with the function algebras of quantum SU(1,1) spaces."""

from .action import ActionConfig, Gen, act, act_qH, casimir, check_module_algebra, is_invariant
from .algebra import (
    AlgebraError,
    Base,
    Element,
    GenWord,
    Layer,
    SpaceTag,
    embed_disc,
    letter,
    localize,
    mul,
    normal_form,
    star,
    t12_inverse,
)
from .distributions import finiteness_criterion, make_e0, solve_e0_bruteforce, weight_space_check
from .integrals import IntegralTag, integrate, trace_property_check
from .kernels import (
    LambdaKernel,
    TensorElement,
    apply_integral_operator,
    continue_kernel,
    inverse_power_series,
    kernel_k,
    kernel_power_factored,
    lemma65_check,
    pairing,
    sharp,
    tensor_mul,
    to_generalized_kernel,
    verify_k_relations,
)
from .parser import evaluate, normalize, parse
from .scalars import LambdaScalar, QSeriesTruncation, Scalar, qbinomial_series, qnum, qpochhammer
from .suites import SUITES, SuiteConfig, SuiteReport, run_suite

__all__ = [name for name in dir() if not name.startswith("_")]
