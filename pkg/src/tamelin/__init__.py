"""Exact computations with semilinear sets over ordered abelian groups.

Quantifier elimination, cell decompositions and dimension, definable
choice and curve selection, definable families of functions and the
extension obstruction, with a property suite and a command-line front end.
"""
from __future__ import annotations

from .errors import (ArityError, EmptySetError, FormulaSyntaxError, PreconditionError, ResourceLimitError,
                     TameError, UnassignedVariableError)
from .lang import parse_formula, parse_term
from .qe import decide, eliminate
from .sets import PeriodicSet1D, Piece, PiecewiseLinearFunction, SemilinearSet

__all__ = ["ArityError", "EmptySetError", "FormulaSyntaxError", "PreconditionError", "ResourceLimitError",
           "TameError", "UnassignedVariableError", "parse_formula", "parse_term", "decide", "eliminate",
           "PeriodicSet1D", "Piece", "PiecewiseLinearFunction", "SemilinearSet"]
