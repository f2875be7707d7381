"""Automorphisms of right-angled Artin groups: graph properties, words,
Whitehead automorphisms, relation certificates, transvection matrix groups
and a random-graph experiment."""
from .graphs import (
    Graph,
    GraphError,
    PropertyViolation,
    check_properties,
    compute_domination,
    decompose,
    find_indicability_witness,
)
from .words import normal_form, parse_word, format_word

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphError",
    "PropertyViolation",
    "check_properties",
    "compute_domination",
    "decompose",
    "find_indicability_witness",
    "normal_form",
    "parse_word",
    "format_word",
]
