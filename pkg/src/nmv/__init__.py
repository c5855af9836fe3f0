"""Multidegrees of nonlinear multiview varieties.

Three independent routes to deg(G) * deg^d(Y) for a rational map
P^r --> P^m_1 x ... x P^m_p: mixed volumes of projected Newton polytopes
(:mod:`nmv.engine`), Hilbert-function fitting on the saturated special fiber
ring (:mod:`nmv.oracle`), and closed formulas for structured families
(:mod:`nmv.closed_formulas`).  Linear maps are handled in
:mod:`nmv.linear_multiview`.
"""

from .maps import MapSpec, MultidegreeTable, compositions
from .monomial_algebra import MonomialIdeal, minimalize, parse_ideal, parse_monomial

__all__ = [
    "MapSpec",
    "MonomialIdeal",
    "MultidegreeTable",
    "compositions",
    "minimalize",
    "parse_ideal",
    "parse_monomial",
]
