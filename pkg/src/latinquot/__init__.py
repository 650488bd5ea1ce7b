"""Generalized quotients of (partial) Latin squares, in exact arithmetic."""

from ._accel import JIT_ENABLED, backend_name
from .errors import InvariantError, LatinQuotError, PreconditionError
from .explore import (
    ConjectureReport,
    contains_s_gqpq,
    contains_s_gqpq_bounded,
    gqpq_witness,
    test_conjectures,
)
from .hyper import (
    HyperNumbers,
    SupportSet,
    alpha_bar,
    alpha_star,
    contains_s_guqpq,
    contains_s_quasigroup,
    find_gqq_not_guqq,
    find_statement_a_counterexample,
    hyper_numbers,
    restrict,
    rho,
    strong_quotient,
    weak_quotient,
)
from .lift import (
    LiftResult,
    QuotientInstance,
    check_conditions,
    lift_hilton,
    lift_partial,
    lift_real,
    verify_lift,
)
from .margin import (
    MarginSpec,
    MarginVector,
    class_decompose,
    construct_class,
    find_permutation,
    padded_decompose,
    perm_decompose,
    split_vector,
    split_vector_parts,
)
from .ratlp import LinearProgram, LpSolution, solve, strict_feasible
from .tensor import (
    Line,
    Matrix2,
    Matrix3,
    PairSet,
    Partition,
    RationalMatrix3,
    enumerate_latin_squares,
    is_latin,
    is_partial_s_latin,
    is_permutation,
    latin_from_table,
    line_sum,
    line_sums,
    quotient,
    random_latin_square,
    triple_quotient,
)

__version__ = "0.1.0"
