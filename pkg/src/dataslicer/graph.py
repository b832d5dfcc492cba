"""Data-slice graphs: build, merge, persist and load.

Nodes are canonicalized specifications identified by a content hash; two
events land on the same node iff their specs canonicalize equally. A node's
interestingness is the maximum dwell observed for it anywhere. Directed
edges realize exactly one Navigation Algebra operation and count expert and
regular-user traversals separately.

Merging is order-independent: the canonical serialization of a graph built
from any permutation of the same sequences is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .errors import FormatError, TaskMismatch, UnknownNode
from .navops import NavOp, apply_nav_op, diff_ops, nav_op_from_document, nav_op_to_document
from .sessions import Role, SessionEvent, SessionSequence
from .spec import (
    AbstractSpec,
    VisualSpec,
    abstract_from_document,
    abstract_to_document,
    canonicalize,
    visual_from_document,
    visual_to_document,
)

__all__ = [
    "SliceNode",
    "SliceEdge",
    "GraphMeta",
    "DataSliceGraph",
    "normalize_sequence",
    "merge_sequence",
    "build_graph",
    "save_graph",
    "load_graph",
    "GRAPH_FORMAT_VERSION",
]

GRAPH_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SliceNode:
    node_id: str
    display_index: int
    spec: AbstractSpec
    interestingness_ms: int = 0
    votes: int = 0
    visual_specs: tuple[VisualSpec, ...] = ()

    def effective_interestingness(self, threshold_ms: int) -> int:
        """Dwell-based interestingness boosted by one threshold per upvote."""
        return self.interestingness_ms + self.votes * threshold_ms


@dataclass(frozen=True)
class SliceEdge:
    from_id: str
    to_id: str
    expert_count: int = 0
    user_count: int = 0
    nav_op: Optional[NavOp] = None


@dataclass(frozen=True)
class GraphMeta:
    dataset_name: Optional[str] = None
    default_threshold_ms: int = 3000
    # (session_id, role, normalized event count), sorted by session id.
    sessions: tuple[tuple[str, Role, int], ...] = ()


@dataclass(frozen=True)
class DataSliceGraph:
    task_type: str
    nodes: dict[str, SliceNode]
    edges: dict[tuple[str, str], SliceEdge]
    meta: GraphMeta = GraphMeta()

    @staticmethod
    def empty(task_type: str, dataset_name: str | None = None) -> "DataSliceGraph":
        return DataSliceGraph(
            task_type=task_type, nodes={}, edges={},
            meta=GraphMeta(dataset_name=dataset_name),
        )

    def node(self, node_id: str) -> SliceNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node {node_id!r}") from None

    def has_expert_input(self) -> bool:
        return any(role is Role.EXPERT for _, role, _ in self.meta.sessions)

    def sorted_nodes(self) -> list[SliceNode]:
        return sorted(self.nodes.values(), key=lambda n: n.node_id)

    def sorted_edges(self) -> list[SliceEdge]:
        return [self.edges[key] for key in sorted(self.edges)]


def _renumber(nodes: dict[str, SliceNode]) -> dict[str, SliceNode]:
    ordered = sorted(nodes)
    return {
        nid: replace(nodes[nid], display_index=i) for i, nid in enumerate(ordered)
    }


def normalize_sequence(seq: SessionSequence) -> SessionSequence:
    """Rewrite a sequence so consecutive events differ by exactly one operation.

    Consecutive events with equal canonical specs collapse into the first one,
    accumulating dwell time. Multi-operation transitions get intermediate
    events inserted along the canonical diff, carrying zero dwell and the
    preceding event's visual spec and timestamp.
    """
    collapsed: list[SessionEvent] = []
    for event in seq.events:
        if collapsed and canonicalize(collapsed[-1].spec) == canonicalize(event.spec):
            last = collapsed[-1]
            collapsed[-1] = replace(last, dwell_ms=last.dwell_ms + event.dwell_ms)
        else:
            collapsed.append(event)

    out: list[SessionEvent] = [collapsed[0]]
    for event in collapsed[1:]:
        previous = out[-1]
        ops = diff_ops(previous.spec, event.spec)
        spec = previous.spec
        for op in ops[:-1]:
            spec = apply_nav_op(spec, op)
            out.append(
                SessionEvent(
                    spec=spec,
                    visual=previous.visual,
                    dwell_ms=0,
                    timestamp_ms=previous.timestamp_ms,
                )
            )
        out.append(event)
    return replace(seq, events=tuple(out))


def _merge_visuals(existing: tuple[VisualSpec, ...], new: VisualSpec) -> tuple[VisualSpec, ...]:
    if new in existing:
        return existing
    return tuple(sorted(existing + (new,), key=VisualSpec.sort_key))


def merge_sequence(graph: DataSliceGraph, seq: SessionSequence) -> DataSliceGraph:
    """Merge one session sequence into the graph, returning a new graph."""
    if seq.task_type != graph.task_type:
        raise TaskMismatch(
            f"sequence task {seq.task_type!r} does not match graph task {graph.task_type!r}"
        )
    seq = normalize_sequence(seq)
    nodes = dict(graph.nodes)
    edges = dict(graph.edges)

    ids: list[str] = []
    for event in seq.events:
        spec = canonicalize(event.spec)
        nid = spec.node_id()
        ids.append(nid)
        node = nodes.get(nid)
        if node is None:
            node = SliceNode(node_id=nid, display_index=len(nodes), spec=spec)
        node = replace(
            node,
            interestingness_ms=max(node.interestingness_ms, event.dwell_ms),
            visual_specs=_merge_visuals(node.visual_specs, event.visual),
        )
        nodes[nid] = node

    for (prev, cur), (a, b) in zip(zip(ids, ids[1:]), zip(seq.events, seq.events[1:])):
        ops = diff_ops(a.spec, b.spec)
        assert len(ops) == 1, "normalized sequences step by single operations"
        edge = edges.get((prev, cur)) or SliceEdge(from_id=prev, to_id=cur, nav_op=ops[0])
        if seq.role is Role.EXPERT:
            edge = replace(edge, expert_count=edge.expert_count + 1)
        else:
            edge = replace(edge, user_count=edge.user_count + 1)
        edges[(prev, cur)] = edge

    sessions = tuple(sorted(
        set(graph.meta.sessions) | {(seq.session_id, seq.role, len(seq.events))}
    ))
    return DataSliceGraph(
        task_type=graph.task_type,
        nodes=_renumber(nodes),
        edges=edges,
        meta=replace(graph.meta, sessions=sessions),
    )


def build_graph(
    sequences: Iterable[SessionSequence],
    task_type: str,
    dataset_name: str | None = None,
) -> DataSliceGraph:
    """Fold all sequences into one graph; output independent of input order."""
    graph = DataSliceGraph.empty(task_type, dataset_name=dataset_name)
    for seq in sequences:
        graph = merge_sequence(graph, seq)
    return graph


# --- persistence -------------------------------------------------------------

def _node_to_document(node: SliceNode) -> dict:
    return {
        "nodeId": node.node_id,
        "displayIndex": node.display_index,
        "spec": abstract_to_document(node.spec),
        "interestingnessMs": node.interestingness_ms,
        "votes": node.votes,
        "visualSpecs": [visual_to_document(v) for v in node.visual_specs],
    }


def _edge_to_document(edge: SliceEdge) -> dict:
    doc = {
        "from": edge.from_id,
        "to": edge.to_id,
        "expertCount": edge.expert_count,
        "userCount": edge.user_count,
    }
    if edge.nav_op is not None:
        doc["navOp"] = nav_op_to_document(edge.nav_op)
    return doc


def graph_to_document(graph: DataSliceGraph) -> dict:
    return {
        "version": GRAPH_FORMAT_VERSION,
        "taskType": graph.task_type,
        "meta": {
            "datasetName": graph.meta.dataset_name,
            "defaultThresholdMs": graph.meta.default_threshold_ms,
            "sessions": [
                {"sessionId": sid, "role": role.value, "events": count}
                for sid, role, count in graph.meta.sessions
            ],
        },
        "nodes": [_node_to_document(n) for n in graph.sorted_nodes()],
        "edges": [_edge_to_document(e) for e in graph.sorted_edges()],
    }


def save_graph(graph: DataSliceGraph) -> str:
    """Serialize to the canonical graph document (stable bytes)."""
    return json.dumps(graph_to_document(graph), sort_keys=True, indent=2) + "\n"


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise FormatError(f"missing key {key!r}", where)
    return doc[key]


def graph_from_document(doc, where: str = "graph") -> DataSliceGraph:
    if not isinstance(doc, dict):
        raise FormatError("graph document must be an object", where)
    version = _require(doc, "version", where)
    if version != GRAPH_FORMAT_VERSION:
        raise FormatError(f"unsupported version {version!r}", where)
    task_type = str(_require(doc, "taskType", where))
    meta_doc = doc.get("meta", {})
    try:
        meta = GraphMeta(
            dataset_name=meta_doc.get("datasetName"),
            default_threshold_ms=int(meta_doc.get("defaultThresholdMs", 3000)),
            sessions=tuple(sorted(
                (str(s["sessionId"]), Role(s["role"]), int(s["events"]))
                for s in meta_doc.get("sessions", ())
            )),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(str(exc), f"{where}.meta") from exc

    nodes: dict[str, SliceNode] = {}
    for i, node_doc in enumerate(_require(doc, "nodes", where)):
        node_where = f"{where}.nodes[{i}]"
        try:
            spec = abstract_from_document(_require(node_doc, "spec", node_where), node_where)
            node = SliceNode(
                node_id=str(_require(node_doc, "nodeId", node_where)),
                display_index=int(node_doc.get("displayIndex", i)),
                spec=spec,
                interestingness_ms=int(node_doc.get("interestingnessMs", 0)),
                votes=int(node_doc.get("votes", 0)),
                visual_specs=tuple(
                    visual_from_document(v, node_where)
                    for v in node_doc.get("visualSpecs", ())
                ),
            )
        except (ValueError, TypeError) as exc:
            raise FormatError(str(exc), node_where) from exc
        if node.node_id != spec.node_id():
            raise FormatError("nodeId does not match the spec content hash", node_where)
        if node.node_id in nodes:
            raise FormatError(f"duplicate node {node.node_id}", node_where)
        if node.interestingness_ms < 0 or node.votes < 0:
            raise FormatError("negative interestingness or votes", node_where)
        nodes[node.node_id] = node

    edges: dict[tuple[str, str], SliceEdge] = {}
    for i, edge_doc in enumerate(_require(doc, "edges", where)):
        edge_where = f"{where}.edges[{i}]"
        try:
            edge = SliceEdge(
                from_id=str(_require(edge_doc, "from", edge_where)),
                to_id=str(_require(edge_doc, "to", edge_where)),
                expert_count=int(edge_doc.get("expertCount", 0)),
                user_count=int(edge_doc.get("userCount", 0)),
                nav_op=(
                    nav_op_from_document(edge_doc["navOp"], edge_where)
                    if "navOp" in edge_doc else None
                ),
            )
        except (ValueError, TypeError) as exc:
            raise FormatError(str(exc), edge_where) from exc
        for endpoint in (edge.from_id, edge.to_id):
            if endpoint not in nodes:
                raise FormatError(f"dangling edge endpoint {endpoint!r}", edge_where)
        if edge.from_id == edge.to_id:
            raise FormatError("self-loop edge", edge_where)
        if edge.expert_count + edge.user_count < 1:
            raise FormatError("edge without traversals", edge_where)
        key = (edge.from_id, edge.to_id)
        if key in edges:
            raise FormatError(f"duplicate edge {key}", edge_where)
        edges[key] = edge

    return DataSliceGraph(task_type=task_type, nodes=_renumber(nodes), edges=edges, meta=meta)


def load_graph(text: str) -> DataSliceGraph:
    """Parse a canonical graph document; FormatError points at the problem."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "graph") from None
    return graph_from_document(doc)
