"""Exact invariants of power series fixing the origin.

Residue fixed point index and iterative residue, lower ramification numbers
of wild automorphisms, normal forms, and periodic-point bounds over F_p((t)).
"""
from .coeffring import (
    ExtensionField,
    LaurentField,
    PrimeField,
    RationalField,
    parse_field,
)
from .dynamics import (
    RamificationReport,
    is_q_ramified,
    lower_ramification,
    normal_form,
)
from .errors import WildSeriesError
from .expr import parse_series
from .index import closed_index, index_report, laurent_index, resit
from .series import PowerSeries, compose, conjugate, iterate, make_series
from .ultrametric import newton_polygon, periodic_bound_report

__version__ = "0.1.0"

__all__ = [
    "ExtensionField",
    "LaurentField",
    "PowerSeries",
    "PrimeField",
    "RamificationReport",
    "RationalField",
    "WildSeriesError",
    "closed_index",
    "compose",
    "conjugate",
    "index_report",
    "is_q_ramified",
    "iterate",
    "laurent_index",
    "lower_ramification",
    "make_series",
    "newton_polygon",
    "normal_form",
    "parse_field",
    "parse_series",
    "periodic_bound_report",
    "resit",
]
