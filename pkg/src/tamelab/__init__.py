"""tamelab: exact arithmetic for tame congruence-group constructions.

Library layout:

- ``padic``    fixed-precision scalars mod p^N, truncated power series,
               Hensel square roots, p-adic log/exp, exponent ratios
- ``matgrp``   matrices over those rings: commutators, Z_p powering,
               truncated matrix exp/log, congruence depth, generators
- ``pcentral`` finite quotient enumeration, p-central series, uniformity,
               the commutator-limit Lie bracket
- ``liealg``   structure-constant Lie algebras over Q: Killing form,
               radical, toral / pluperfect verdicts, inertial certificates
- ``certify``  group-side inertial certificates, local plans, identity suites
- ``bounds``   splitting bounds, Selmer dimension, ramification budget,
               Golod-Shafarevich negativity
- ``cli``      the ``tamelab`` command
"""

from .errors import TamelabError
from .padic import (
    PadicScalar,
    ScalarRing,
    SeriesElement,
    SeriesRing,
    alpha_ratio,
    hensel_sqrt,
    pexp,
    plog,
)
from .matgrp import (
    RingMatrix,
    commutator,
    congruence_depth,
    int_power,
    mat_exp,
    mat_log,
    sl_standard_generators,
    zp_power,
)
from .pcentral import (
    FiniteQuotientGroup,
    PCentralChain,
    closure,
    dictionary_bracket,
    pcentral_series,
    uniformity_check,
)
from .liealg import LieAlgebra, classify, inertial_solve, inertial_span, is_toral_sampled
from .certify import (
    GroupInertialCertificate,
    LocalPlan,
    build_local_plan,
    brute_search_certificate,
    quaternion_uniform_suite,
    sl2_relation_suite,
    slm_series_suite,
    stable_generation_audit,
    verify_certificate,
)
from .bounds import (
    GSInput,
    SplittingBoundInput,
    gs_negative,
    ramification_budget,
    selmer_dim,
    splitting_bound,
)

__version__ = "0.1.0"

__all__ = [
    "TamelabError",
    "PadicScalar",
    "ScalarRing",
    "SeriesElement",
    "SeriesRing",
    "alpha_ratio",
    "hensel_sqrt",
    "pexp",
    "plog",
    "RingMatrix",
    "commutator",
    "congruence_depth",
    "int_power",
    "mat_exp",
    "mat_log",
    "sl_standard_generators",
    "zp_power",
    "FiniteQuotientGroup",
    "PCentralChain",
    "closure",
    "dictionary_bracket",
    "pcentral_series",
    "uniformity_check",
    "LieAlgebra",
    "classify",
    "inertial_solve",
    "inertial_span",
    "is_toral_sampled",
    "GroupInertialCertificate",
    "LocalPlan",
    "build_local_plan",
    "brute_search_certificate",
    "quaternion_uniform_suite",
    "sl2_relation_suite",
    "slm_series_suite",
    "stable_generation_audit",
    "verify_certificate",
    "GSInput",
    "SplittingBoundInput",
    "gs_negative",
    "ramification_budget",
    "selmer_dim",
    "splitting_bound",
]
