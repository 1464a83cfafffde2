"""Hilbert and tight Hilbert functions of parameter ideals in characteristic p."""

__version__ = "0.1.0"

from .analyzer import AnalysisConfig, AnalysisReport, analyze, infer_cohomology
from .gfp import PolyRing, Polynomial, PrimeField, parse_polynomial
from .groebner import GroebnerBasis, buchberger
from .hilbert import hilbert_table, multiplicity, tight_hilbert_table
from .ideals import PresentedRing, RingIdeal, RingMap, length, toric_presentation
from .tight import TestElement, star_closure

__all__ = [
    "AnalysisConfig",
    "AnalysisReport",
    "GroebnerBasis",
    "PolyRing",
    "Polynomial",
    "PresentedRing",
    "PrimeField",
    "RingIdeal",
    "RingMap",
    "TestElement",
    "analyze",
    "buchberger",
    "hilbert_table",
    "infer_cohomology",
    "length",
    "multiplicity",
    "parse_polynomial",
    "star_closure",
    "tight_hilbert_table",
    "toric_presentation",
]
