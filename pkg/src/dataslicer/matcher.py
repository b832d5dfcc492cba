"""Matching a specification to its nearest graph nodes by edit distance.

The distance between two canonical specs is the sum of three set
symmetric-difference sizes: the pooled selection (x, y and layers in one
set, so axis swaps and axis/layer moves cost nothing), the filter
descriptors, and the grouping fields. Symmetric difference equals the
minimal add/remove script length between sets, so distances count
Navigation Algebra steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyGraph, InvalidSpec
from .graph import DataSliceGraph
from .spec import AbstractSpec, DataSpecification, canonicalize

__all__ = ["MatchResult", "field_set_distance", "spec_distance", "match_data_slices"]


@dataclass(frozen=True)
class MatchResult:
    """All nodes at the minimum distance, capped at M, by display index."""

    nodes: tuple[tuple[str, int], ...]
    min_distance: int

    def node_ids(self) -> set[str]:
        return {nid for nid, _ in self.nodes}


def field_set_distance(a, b) -> int:
    """Symmetric-difference size between two deduplicated field collections."""
    sa, sb = set(a), set(b)
    if len(sa) != len(list(a)) or len(sb) != len(list(b)):
        raise InvalidSpec("field sets must be deduplicated")
    return len(sa ^ sb)


def spec_distance(a: AbstractSpec, b: AbstractSpec) -> int:
    """Edit distance between canonical specs: selection + filters + grouping."""
    d_s = len(a.pooled_selection() ^ b.pooled_selection())
    d_f = len(set(a.filter_descriptors) ^ set(b.filter_descriptors))
    d_g = len(set(a.grouping) ^ set(b.grouping))
    return d_s + d_f + d_g


def match_data_slices(graph: DataSliceGraph, spec: DataSpecification, m: int) -> MatchResult:
    """Return up to ``m`` nodes with the lowest distance to ``spec``.

    All returned nodes share the minimum distance; when more than ``m`` tie,
    the ``m`` with the smallest display indices are kept.
    """
    if m < 1:
        raise InvalidSpec("M must be at least 1")
    if not graph.nodes:
        raise EmptyGraph(f"graph for task {graph.task_type!r} has no nodes")
    query = canonicalize(spec)
    best: list = []
    min_distance: int | None = None
    for node in graph.nodes.values():
        d = spec_distance(query, node.spec)
        if min_distance is None or d < min_distance:
            min_distance = d
            best = [node]
        elif d == min_distance:
            best.append(node)
    assert min_distance is not None
    best.sort(key=lambda n: n.display_index)
    return MatchResult(
        nodes=tuple((n.node_id, min_distance) for n in best[:m]),
        min_distance=min_distance,
    )
