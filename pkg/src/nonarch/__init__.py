"""Exact arithmetic in F_q((X)) and the non-analytic automorphisms built on it.

Modules: ``ffield`` (F_q), ``laurent`` (truncated Laurent series),
``expseq`` (exponent sequences), ``morphisms`` (beta, alpha, tau and the
interleaving chart), ``calculus`` (divided differences and Hoelder
certificates), ``willis`` (lattices, scale, calibrations), ``group``
(the semidirect product) and ``cli``.
"""
from .errors import (DegenerateInputError, DomainError, FieldZeroDivision,
                     IterationBudgetError, NonarchError, PrecisionError, UsageError)
from .expseq import ExponentSeq, parse_seq, seq_gauss, seq_superlinear, seq_table
from .ffield import FieldDesc, FqElem, default_field
from .laurent import Series, format_series, parse_series
from .morphisms import SeriesMap, VectorSeries, deinterleave, interleave

__version__ = "0.1.0"

__all__ = [
    "DegenerateInputError", "DomainError", "ExponentSeq", "FieldDesc", "FieldZeroDivision",
    "FqElem", "IterationBudgetError", "NonarchError", "PrecisionError", "Series",
    "SeriesMap", "UsageError", "VectorSeries", "default_field", "deinterleave",
    "format_series", "interleave", "parse_seq", "parse_series", "seq_gauss",
    "seq_superlinear", "seq_table",
]
