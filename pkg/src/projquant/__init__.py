"""Exact natural and projectively equivariant quantization on a coordinate chart."""

from .coefficients import (
    CoefficientTable,
    NoExistence,
    Weights,
    coefficient_table,
    critical_pairs,
    gamma_value,
    rescue_table,
)
from .exact import LinearSystem, Poly, Universe, solve_linear
from .geometry import (
    ChristoffelField,
    NormalCartanData,
    OneForm,
    cartan_curvature,
    curvature,
    normal_cartan,
    projective_shift,
    ricci,
)
from .parsing import format_poly, parse_expression
from .quantization import (
    DifferentialOperator,
    Symbol,
    apply_operator,
    principal_symbol,
    quantize,
)

__all__ = [
    "ChristoffelField",
    "CoefficientTable",
    "DifferentialOperator",
    "LinearSystem",
    "NoExistence",
    "NormalCartanData",
    "OneForm",
    "Poly",
    "Symbol",
    "Universe",
    "Weights",
    "apply_operator",
    "cartan_curvature",
    "coefficient_table",
    "critical_pairs",
    "curvature",
    "format_poly",
    "gamma_value",
    "normal_cartan",
    "parse_expression",
    "principal_symbol",
    "projective_shift",
    "quantize",
    "rescue_table",
    "ricci",
    "solve_linear",
]
