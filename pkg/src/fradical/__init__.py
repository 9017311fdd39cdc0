"""Radicals of Fitting formations in finite permutation groups."""

from .formation import Formation, contains_group, ef_radical, parse
from .perm import PermGroup, QuotientRef
from .radical import RadicalReport, flength, fradical, fstar, generalized_centralizer, opp_radical
from .series import ChiefSeries, NormalSection, centralizer_of_section, chief_series, o_sigma

__all__ = [
    "PermGroup", "QuotientRef", "NormalSection", "ChiefSeries", "chief_series", "o_sigma",
    "centralizer_of_section", "Formation", "parse", "contains_group", "ef_radical",
    "RadicalReport", "fradical", "fstar", "flength", "opp_radical", "generalized_centralizer",
]
