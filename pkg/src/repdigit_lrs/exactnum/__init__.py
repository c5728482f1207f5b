"""Exact and certified arithmetic: balls, quadratic fields, algebraic numbers, heights."""
from .algebraic import (
    AlgebraicNumber,
    Membership,
    as_field_element,
    height_of_minpoly,
    in_field,
    member_of_K,
    refine,
    weil_height,
)
from .balls import (
    DEFAULT_PREC,
    MAX_PREC,
    ComplexBall,
    RealBall,
    ball_exp,
    ball_log,
    ball_max,
    ball_min,
    ball_sqrt,
    log_plus,
)
from .quadfield import (
    QQ,
    Field,
    QuadFieldElem,
    conj,
    embed,
    exact_quotient,
    exact_sign,
    is_algebraic_integer,
    norm_in_K,
    trace_in_K,
)
from .roots import isolate_roots

__all__ = [
    "AlgebraicNumber", "Membership", "as_field_element", "height_of_minpoly", "in_field",
    "member_of_K", "refine", "weil_height", "DEFAULT_PREC", "MAX_PREC", "ComplexBall",
    "RealBall", "ball_exp", "ball_log", "ball_max", "ball_min", "ball_sqrt", "log_plus",
    "QQ", "Field", "QuadFieldElem", "conj", "embed", "exact_quotient", "exact_sign",
    "is_algebraic_integer", "norm_in_K", "trace_in_K", "isolate_roots",
]
