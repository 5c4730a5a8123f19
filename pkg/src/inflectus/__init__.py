"""Inflection curves of rational vector fields on the Riemann sphere."""

from .ratfun import ComplexPoly, RationalFunction, POLE, RootFindingError

__all__ = ["ComplexPoly", "RationalFunction", "POLE", "RootFindingError"]
__version__ = "0.1.0"
