"""Similarity classes of 2x2 and 3x3 matrices over finite chain rings.

Everything is exact: rings are Z/p^m or F_p[t]/(t^m), matrices carry
their ring context, and all decisions (canonical form, similarity,
centralizer order, class counts) are computed with integer arithmetic
and cross-checkable against a brute-force orbit oracle.
"""

from .canon2 import CanonicalForm2, ScalarSplit, canon2, count2, enumerate2, recombine, split_scalar
from .canon3 import (
    CanonicalForm3,
    CentralizerShape,
    CyclicBody,
    EParams,
    HardBody,
    HardForm,
    ScalarBody,
    SplitBody,
    as_e_params,
    canon3,
    centralizer_shape,
    classify_hard,
    hard_class_rep,
    hard_family,
    hensel_block_split,
    reduce_to_e_form,
    residue_type,
)
from .census import (
    CountVector,
    base_vector,
    classify_form,
    count3,
    enumerate3,
    gf_coeffs,
    level_vector,
    theta,
    transfer_matrix,
    transfer_power,
    type_histogram,
)
from .errors import (
    BadDescriptor,
    BadLevel,
    BadParams,
    BudgetExceeded,
    CtxMismatch,
    DigitOutOfRange,
    NonIntegralDivision,
    NonUnit,
    NotHardCase,
    NotInvertible,
    SearchBudgetExceeded,
    SimclassError,
    WrongResidueType,
)
from .matrix import (
    Mat,
    block_diag,
    companion,
    diag,
    e_matrix,
    elementary,
    identity,
    j_matrix,
    mat_from_json,
    mat_to_json,
    scalar,
    zero,
)
from .modsolve import (
    HowellBasis,
    IntertwinerModule,
    centralizer_order,
    find_unit_element,
    intertwiner,
    is_similar,
)
from .oracle import (
    OrbitCensus,
    gl_generators,
    group_order,
    load_census,
    orbit_census,
    orbit_of,
    orbit_states,
    same_class,
    save_census,
    unit_group_generators,
    verify_counts,
)
from .ring import RingCtx, RingElem, Section, parse_ring, ring_ctx, section, section_of

__version__ = "0.1.0"

__all__ = [
    "BadDescriptor",
    "BadLevel",
    "BadParams",
    "BudgetExceeded",
    "CanonicalForm2",
    "CanonicalForm3",
    "CentralizerShape",
    "CountVector",
    "CtxMismatch",
    "CyclicBody",
    "DigitOutOfRange",
    "EParams",
    "HardBody",
    "HardForm",
    "HowellBasis",
    "IntertwinerModule",
    "Mat",
    "NonIntegralDivision",
    "NonUnit",
    "NotHardCase",
    "NotInvertible",
    "OrbitCensus",
    "RingCtx",
    "RingElem",
    "ScalarBody",
    "ScalarSplit",
    "SearchBudgetExceeded",
    "Section",
    "SimclassError",
    "SplitBody",
    "WrongResidueType",
    "as_e_params",
    "base_vector",
    "block_diag",
    "canon2",
    "canon3",
    "centralizer_order",
    "centralizer_shape",
    "classify_form",
    "classify_hard",
    "companion",
    "count2",
    "count3",
    "diag",
    "e_matrix",
    "elementary",
    "enumerate2",
    "enumerate3",
    "find_unit_element",
    "gf_coeffs",
    "gl_generators",
    "group_order",
    "hard_class_rep",
    "hard_family",
    "hensel_block_split",
    "identity",
    "intertwiner",
    "is_similar",
    "j_matrix",
    "level_vector",
    "load_census",
    "mat_from_json",
    "mat_to_json",
    "orbit_census",
    "orbit_of",
    "orbit_states",
    "parse_ring",
    "recombine",
    "reduce_to_e_form",
    "residue_type",
    "ring_ctx",
    "same_class",
    "save_census",
    "scalar",
    "section",
    "section_of",
    "split_scalar",
    "theta",
    "transfer_matrix",
    "transfer_power",
    "type_histogram",
    "unit_group_generators",
    "verify_counts",
    "zero",
]
