"""多项式：解析、求值、复合、原像与逃逸半径"""

from .parser import format_poly, parse_poly, tokenize
from .polynomial import Polynomial, PreimageSet
from .roots import RootBatch, solve_rows

__all__ = [
    "Polynomial",
    "PreimageSet",
    "RootBatch",
    "format_poly",
    "parse_poly",
    "solve_rows",
    "tokenize",
]
