"""
Reference elements, quadrature and finite element spaces.
"""

from .element import Element, UnsupportedElement, get_element
from .quadrature import (
    QuadratureRule,
    UnsupportedQuadrature,
    composite_quadrature,
    quadrature,
)
from .space import (
    FEFunction,
    FESpace,
    Field,
    Tabulation,
    build_space,
    eval_basis,
    interpolate,
)

__all__ = [
    "Element",
    "UnsupportedElement",
    "get_element",
    "QuadratureRule",
    "UnsupportedQuadrature",
    "composite_quadrature",
    "quadrature",
    "FEFunction",
    "FESpace",
    "Field",
    "Tabulation",
    "build_space",
    "eval_basis",
    "interpolate",
]
