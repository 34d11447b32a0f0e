"""Finite-field arithmetic, curve models and exhaustive double-cover searches."""

from .artin_schreier import artin_schreier_search_q32
from .curves import EllipticModel, Genus2Model, reference_genus2_q3, weil_count
from .different import different_contribution
from .fields import GF, FqElem, PolyRing, field
from .genus2 import genus2_search_q3
from .kummer import kummer_search_q27
from .search import SearchResult

PRESETS = {
    "q27g4": kummer_search_q27,
    "q32g4": artin_schreier_search_q32,
    "q3g6": genus2_search_q3,
}

__all__ = [
    "GF", "FqElem", "PolyRing", "field", "EllipticModel", "Genus2Model", "reference_genus2_q3",
    "weil_count", "different_contribution", "kummer_search_q27", "artin_schreier_search_q32",
    "genus2_search_q3", "SearchResult", "PRESETS",
]
