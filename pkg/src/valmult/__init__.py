"""Valuation ideals of monomial type, their multiplier ideals and volumes.

Submodules: ``values`` (certified value-group arithmetic), ``monomials``
(monomial ideal algebra), ``newton`` (Newton polyhedra, multiplicities,
multiplier ideals), ``valuations`` (valuations and graded families),
``asymptotics`` (asymptotic multiplier ideals, volumes) and ``harness``
(verification suites).
"""

from .asymptotics import (
    asymptotic_multiplier_ideal,
    closed_form_jm,
    delta_and_e,
    exact_monomial_volume,
    izumi_constant,
    volume_estimate,
)
from .monomials import MonomialIdeal, Polynomial
from .newton import covolume, howald_multiplier_ideal, integral_closure, multiplicity, newton_polyhedron, rees_valuations
from .valuations import (
    Arc,
    ArcValuation,
    ClosurePowers,
    Intersection,
    MonomialVal,
    MonomialValuation,
    Powers,
    Product,
    Veronese,
    Zariski,
    ZariskiValuation,
    family_at,
)
from .values import Value, compare_values, parse_value

__version__ = "0.1.0"

__all__ = [
    "Value",
    "compare_values",
    "parse_value",
    "MonomialIdeal",
    "Polynomial",
    "newton_polyhedron",
    "integral_closure",
    "covolume",
    "multiplicity",
    "howald_multiplier_ideal",
    "rees_valuations",
    "MonomialValuation",
    "ArcValuation",
    "ZariskiValuation",
    "Powers",
    "ClosurePowers",
    "MonomialVal",
    "Arc",
    "Zariski",
    "Veronese",
    "Product",
    "Intersection",
    "family_at",
    "asymptotic_multiplier_ideal",
    "closed_form_jm",
    "delta_and_e",
    "exact_monomial_volume",
    "izumi_constant",
    "volume_estimate",
]
