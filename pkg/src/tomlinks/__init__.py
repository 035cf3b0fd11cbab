"""Sarkisov links for codimension-4 Fano 3-folds of Tom type.

Exact-arithmetic pipeline: Tom-format pfaffian matrices, Type I
unprojection, Kawamata blow-up inside a rank-2 scroll, wall-by-wall link
tracing with basket and Picard-rank reporting.
"""

__version__ = "0.1.0"

from .algebra import BiDegree, MatrixOrder, Polynomial, Ring, parse
from .birational import Basket, FanoCase, LinkTrace, trace_link
from .groebner import Ideal, buchberger, normal_form, saturate
from .pfaffian import SkewMatrix5, TomFormat, WeightMatrix5, maximal_pfaffians
from .unprojection import build_unprojection, verify_unprojection

__all__ = [
    "BiDegree", "MatrixOrder", "Polynomial", "Ring", "parse",
    "Basket", "FanoCase", "LinkTrace", "trace_link",
    "Ideal", "buchberger", "normal_form", "saturate",
    "SkewMatrix5", "TomFormat", "WeightMatrix5", "maximal_pfaffians",
    "build_unprojection", "verify_unprojection",
    "__version__",
]
