"""Scope-aware route planning: static and dynamic S-Dijkstra with brute-force oracles."""
from .network import (
    INF,
    DynamicOverlay,
    FormatError,
    RoadNetwork,
    ScopeMap,
    ValidationError,
    Walk,
    dump_network,
    dump_overlay,
    dynamic_weights,
    effective_weight,
    load_network,
    load_overlay,
)
from .static import SearchResult, extract_walk, s_dijkstra

__all__ = [
    "INF",
    "DynamicOverlay",
    "FormatError",
    "RoadNetwork",
    "ScopeMap",
    "SearchResult",
    "ValidationError",
    "Walk",
    "dump_network",
    "dump_overlay",
    "dynamic_weights",
    "effective_weight",
    "extract_walk",
    "load_network",
    "load_overlay",
    "s_dijkstra",
]
