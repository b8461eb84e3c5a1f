"""Toric surfaces blown up at a general point: lattice ideals, width directions
and finite generation of Cox rings, all in exact arithmetic."""

from .blowup import inclusion_chain, nef_chamber_fan, neg_set, wd_set
from .criteria import ClassLattice, CurveTuple, chain_eff_test, verify_pseudogenerating
from .ideal import BudgetExceeded, lib_directions, markov_basis, surface_ideal, test_comp
from .mult1 import decide_mult1
from .polytope import Fan, Polygon, complete_fans, width_data
from .rank2 import build_model, certify, effective_cone, fibonacci_model, zero_curve_family
from .toric import ToricSurface, build_surface, read_fan

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ClassLattice",
    "CurveTuple",
    "Fan",
    "Polygon",
    "ToricSurface",
    "build_model",
    "build_surface",
    "certify",
    "chain_eff_test",
    "complete_fans",
    "decide_mult1",
    "effective_cone",
    "fibonacci_model",
    "inclusion_chain",
    "lib_directions",
    "markov_basis",
    "nef_chamber_fan",
    "neg_set",
    "read_fan",
    "surface_ideal",
    "test_comp",
    "verify_pseudogenerating",
    "wd_set",
    "width_data",
    "zero_curve_family",
]
