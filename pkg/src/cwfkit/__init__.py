"""Executable finite models of comprehension categories, WC comonads and
generalised categories with families, with exhaustive law checking."""

from .kernel import (
    FinCategory, Functor, NatTransf, Report, check_category, check_functor, check_nat,
)
from .fibration import Fibration, FibMorphism, Fib2Cell, PresheafPair, check_fibration
from .comonad import Adjunction, AdjMorphism, Comonad, ComonadMorphism, eilenberg_moore
from .structures import CompCat, Gcwf, WCComonad, check_compcat, check_gcwf, check_wccmd

__all__ = [
    "FinCategory", "Functor", "NatTransf", "Report", "check_category", "check_functor", "check_nat",
    "Fibration", "FibMorphism", "Fib2Cell", "PresheafPair", "check_fibration",
    "Adjunction", "AdjMorphism", "Comonad", "ComonadMorphism", "eilenberg_moore",
    "CompCat", "Gcwf", "WCComonad", "check_compcat", "check_gcwf", "check_wccmd",
]

__version__ = "0.1.0"
