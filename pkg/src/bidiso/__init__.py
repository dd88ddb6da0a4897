"""Deterministic isomorphism testing for finite groups and rings given by tables,
using bidirectional collision detection with a chunked time/space tradeoff."""

from .algebra import (
    CayleyTable,
    ElementSet,
    closure,
    element_order,
    is_normal,
    is_subgroup,
    normal_closure,
    quotient,
    relabel,
    validate_cayley_table,
)
from .collision import ChunkPlan, ChunkStats, detect_common, tradeoff_stats
from .corpus import make_group, make_ring, make_structure, parse_table_file
from .groupiso import (
    IsoDecision,
    IsoWitness,
    bidirectional_generator_enumeration,
    canonical_fingerprint,
    generator_enumeration,
    induced_isomorphism,
    is_isomorphic_groups,
)
from .rings import RingTable, is_isomorphic_rings, validate_ring
from .series import compute_t, composition_series, p_group_iso_via_series

__version__ = "0.1.0"

__all__ = [
    "CayleyTable",
    "ElementSet",
    "closure",
    "element_order",
    "is_normal",
    "is_subgroup",
    "normal_closure",
    "quotient",
    "relabel",
    "validate_cayley_table",
    "ChunkPlan",
    "ChunkStats",
    "detect_common",
    "tradeoff_stats",
    "make_group",
    "make_ring",
    "make_structure",
    "parse_table_file",
    "IsoDecision",
    "IsoWitness",
    "bidirectional_generator_enumeration",
    "canonical_fingerprint",
    "generator_enumeration",
    "induced_isomorphism",
    "is_isomorphic_groups",
    "RingTable",
    "is_isomorphic_rings",
    "validate_ring",
    "compute_t",
    "composition_series",
    "p_group_iso_via_series",
]
