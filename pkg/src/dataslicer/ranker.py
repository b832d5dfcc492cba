"""Ranking interesting nodes by weighted shortest-path distance.

Edges traversed by an expert weigh 1; edges seen only in regular-user
sequences weigh 1 + 1/n_u where n_u is the traversal count, so heavier
user traffic shortens paths but never below expert quality. Candidates are
the nodes whose effective interestingness strictly exceeds the threshold;
each is ranked by its minimum distance from any matched node (a matched
node is its own candidate at distance zero). When fewer than M candidates
are reachable, the most interesting remaining nodes fill the list, flagged.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import InvalidSpec, UnknownNode
from .graph import DataSliceGraph, SliceEdge

__all__ = ["RankedRecommendation", "edge_weight", "shortest_paths", "rank_data_slices"]

DEFAULT_THRESHOLD_MS = 3000


@dataclass(frozen=True)
class RankedRecommendation:
    node_id: str
    path_distance: float  # math.inf when unreachable
    effective_interestingness: int
    via_fill: bool = False


def edge_weight(edge: SliceEdge) -> float:
    """1.0 for expert edges; 1 + 1/n_u for regular-user-only edges."""
    if edge.expert_count >= 1:
        return 1.0
    if edge.user_count < 1:
        raise InvalidSpec("edge has no traversals")
    return 1.0 + 1.0 / edge.user_count


def shortest_paths(graph: DataSliceGraph, source: str) -> dict[str, float]:
    """Single-source Dijkstra; unreachable nodes map to math.inf."""
    if source not in graph.nodes:
        raise UnknownNode(f"no node {source!r}")
    adjacency: dict[str, list[tuple[str, float]]] = {nid: [] for nid in graph.nodes}
    for (u, v), edge in graph.edges.items():
        adjacency[u].append((v, edge_weight(edge)))
    dist = {nid: math.inf for nid in graph.nodes}
    dist[source] = 0.0
    heap = [(0.0, source)]
    done: set[str] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adjacency[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def rank_data_slices(
    graph: DataSliceGraph,
    matched: set[str] | frozenset[str],
    m: int,
    threshold_ms: int = DEFAULT_THRESHOLD_MS,
) -> list[RankedRecommendation]:
    """Algorithm: rank interesting nodes by distance from the matched set."""
    if not matched:
        raise InvalidSpec("matched set must be nonempty")
    for nid in matched:
        if nid not in graph.nodes:
            raise UnknownNode(f"no node {nid!r}")
    if m < 0:
        raise InvalidSpec("M must be nonnegative")
    if m == 0:
        return []

    distances = {nid: math.inf for nid in graph.nodes}
    for source in matched:
        for nid, d in shortest_paths(graph, source).items():
            if d < distances[nid]:
                distances[nid] = d

    def eff(nid: str) -> int:
        return graph.nodes[nid].effective_interestingness(threshold_ms)

    candidates = [
        nid for nid in graph.nodes
        if eff(nid) > threshold_ms and math.isfinite(distances[nid])
    ]
    candidates.sort(
        key=lambda nid: (distances[nid], -eff(nid), graph.nodes[nid].display_index)
    )
    ranked = [
        RankedRecommendation(
            node_id=nid,
            path_distance=distances[nid],
            effective_interestingness=eff(nid),
        )
        for nid in candidates[:m]
    ]
    if len(ranked) < m:
        listed = {r.node_id for r in ranked}
        fill = sorted(
            (nid for nid in graph.nodes if nid not in listed),
            key=lambda nid: (-eff(nid), graph.nodes[nid].display_index),
        )
        ranked.extend(
            RankedRecommendation(
                node_id=nid,
                path_distance=distances[nid],
                effective_interestingness=eff(nid),
                via_fill=True,
            )
            for nid in fill[: m - len(ranked)]
        )
    return ranked
