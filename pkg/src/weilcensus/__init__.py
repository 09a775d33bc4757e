"""weilcensus: exact-arithmetic enumeration and classification of Weil
q-polynomials, with desk-scale censuses of simple vs. non-simple isogeny
classes of abelian varieties over finite fields."""

__version__ = "0.1.0"

from .exactnum import IntPoly, QuadraticValue, SturmChain, qv_sign, sturm_count_real_roots_in
from .weilpoly import (
    CoeffTuple,
    PrimePower,
    RealWeilPoly,
    WeilPoly,
    dh_condition,
    expand,
    from_real_weil,
    is_ordinary,
    is_weil,
    to_real_weil,
)
from .enumsets import EnumSpec, RangePartition, SetKind, admissible_range, count_set, enumerate_set, make_partition
from .classify import (
    ClassificationError,
    ClassRecord,
    Factorization,
    Simplicity,
    SimplicityVerdict,
    classify_tuple,
    factor_weil,
    find_weil_split,
    largest_simple_factor_dim,
    lemma31_split,
    reconstruct_cofactor,
    simplicity,
)
from .census import (
    BoundReport,
    CensusFormatError,
    CensusTable,
    StaleCensusError,
    build_census,
    growth_report,
    load_census,
    save_census,
    verify_aL_identity,
    verify_recursion_domination,
    verify_thm23_bound,
    ygn_count,
)

__all__ = [
    "__version__",
    "IntPoly",
    "QuadraticValue",
    "SturmChain",
    "qv_sign",
    "sturm_count_real_roots_in",
    "CoeffTuple",
    "PrimePower",
    "RealWeilPoly",
    "WeilPoly",
    "dh_condition",
    "expand",
    "from_real_weil",
    "is_ordinary",
    "is_weil",
    "to_real_weil",
    "EnumSpec",
    "RangePartition",
    "SetKind",
    "admissible_range",
    "count_set",
    "enumerate_set",
    "make_partition",
    "ClassificationError",
    "ClassRecord",
    "Factorization",
    "Simplicity",
    "SimplicityVerdict",
    "classify_tuple",
    "factor_weil",
    "find_weil_split",
    "largest_simple_factor_dim",
    "lemma31_split",
    "reconstruct_cofactor",
    "simplicity",
    "BoundReport",
    "CensusFormatError",
    "CensusTable",
    "StaleCensusError",
    "build_census",
    "growth_report",
    "load_census",
    "save_census",
    "verify_aL_identity",
    "verify_recursion_domination",
    "verify_thm23_bound",
    "ygn_count",
]
