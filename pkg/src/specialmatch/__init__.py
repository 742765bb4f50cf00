"""Special matchings of lower Bruhat intervals in Coxeter groups."""

from .coxeter import CoxeterGroup, CoxeterMatrix, ParabolicSplit, format_word, parse_word
from .errors import (
    BudgetExceeded,
    ClosureBudgetExceeded,
    DihedralInterval,
    InvalidJ,
    InvalidLeftSystem,
    InvalidRightSystem,
    NoSpecialMatching,
    NotADescent,
    NotAMatching,
    NotInDomain,
    NotSpecial,
    PreconditionViolated,
    SpecialMatchError,
    SystemViolation,
)
from .poset import (
    AbstractPoset,
    BruhatInterval,
    Matching,
    build_interval,
    enumerate_special_matchings,
    is_special,
    multiplication_matching,
    poset_isomorphic,
)
from .rpoly import IntPoly, kl_polynomial, r_polynomial_abstract, r_polynomial_classical, r_polynomial_via_matching
from .systems import (
    LeftSystem,
    RightSystem,
    SFactorization,
    System,
    apply_system_matching,
    apply_via_triple,
    canonical_factorization,
    check_system,
    enumerate_SMw,
    find_commuting_multiplication_matching,
    normalize_system,
    right_system_matching,
)

__all__ = [
    "AbstractPoset",
    "BruhatInterval",
    "BudgetExceeded",
    "ClosureBudgetExceeded",
    "CoxeterGroup",
    "CoxeterMatrix",
    "DihedralInterval",
    "IntPoly",
    "InvalidJ",
    "InvalidLeftSystem",
    "InvalidRightSystem",
    "LeftSystem",
    "Matching",
    "NoSpecialMatching",
    "NotADescent",
    "NotAMatching",
    "NotInDomain",
    "NotSpecial",
    "ParabolicSplit",
    "PreconditionViolated",
    "RightSystem",
    "SFactorization",
    "SpecialMatchError",
    "System",
    "SystemViolation",
    "apply_system_matching",
    "apply_via_triple",
    "build_interval",
    "canonical_factorization",
    "check_system",
    "enumerate_SMw",
    "enumerate_special_matchings",
    "find_commuting_multiplication_matching",
    "format_word",
    "is_special",
    "kl_polynomial",
    "multiplication_matching",
    "normalize_system",
    "parse_word",
    "poset_isomorphic",
    "r_polynomial_abstract",
    "r_polynomial_classical",
    "r_polynomial_via_matching",
    "right_system_matching",
]

__version__ = "0.1.0"
