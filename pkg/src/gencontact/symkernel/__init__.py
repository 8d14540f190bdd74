"""Exact coefficient ring and classical tensor calculus on one chart."""
from .ring import Chart, RationalExpr, ZeroDenominator, normalize, format_expr
from .grammar import ExprSyntaxError, UndeclaredCoordinate, parse_expr
from .calculus import (
    Form,
    Multivector,
    Endomorphism,
    RationalMap,
    contract,
    exterior_d,
    lie,
    pullback,
    schouten,
    vector_field,
    wedge,
)
