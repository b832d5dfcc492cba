"""Recommendation assembly: contextualize, pick a visual, emit SQL.

A recommended node's abstract spec is re-parameterized with the current
session's concrete filter predicates where available; descriptors without a
current predicate stay as flagged placeholders. The visual spec follows the
precedence: the user's preference when it covers the node's layers, then a
visual stored on the node, then the default rule table.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .dataset import ColumnRole, ColumnType, DatasetSchema
from .fields import FieldExpr, SimpleField, is_aggregated
from .graph import DataSliceGraph, SliceNode
from .matcher import match_data_slices
from .ranker import RankedRecommendation, rank_data_slices
from .spec import (
    AbstractSpec,
    DataSpecification,
    FilterPredicate,
    VisualSpec,
)
from .sql import to_sql_template

__all__ = [
    "Recommendation",
    "contextualize",
    "choose_visual_spec",
    "upvote",
    "recommend",
]


@dataclass(frozen=True)
class Recommendation:
    node: RankedRecommendation
    display_index: int
    concrete_spec: DataSpecification
    visual: VisualSpec
    sql_template: str
    placeholder_filters: tuple[FieldExpr, ...] = ()
    already_visited: bool = False


def contextualize(node_spec: AbstractSpec, current: DataSpecification) -> DataSpecification:
    """Re-attach the current session's predicates to an abstract spec.

    Each filter descriptor copies the current spec's concrete predicates on
    that exact field when present; otherwise it becomes a placeholder.
    """
    predicates: list[FilterPredicate] = []
    for descriptor in node_spec.filter_descriptors:
        held = [p for p in current.predicates_on(descriptor) if not p.is_placeholder]
        if held:
            predicates.extend(held)
        else:
            predicates.append(FilterPredicate(field=descriptor))
    return DataSpecification(
        x=node_spec.x,
        y=node_spec.y,
        layers=node_spec.layers,
        filters=tuple(predicates),
        grouping=node_spec.grouping,
    )


def _is_geo(field: Optional[FieldExpr], schema: Optional[DatasetSchema],
            role: ColumnRole, names: tuple[str, ...]) -> bool:
    if not isinstance(field, SimpleField):
        return False
    if schema is not None:
        col = schema.column(field.name)
        if col is not None:
            return col.role is role
    return field.name.lower() in names


def _is_temporal(field: Optional[FieldExpr], schema: Optional[DatasetSchema]) -> bool:
    if not isinstance(field, SimpleField):
        return False
    if schema is not None:
        col = schema.column(field.name)
        if col is not None:
            return col.type is ColumnType.DATETIME
    return field.name.lower() in ("time", "date", "datetime", "year", "timestamp")


def _default_visual(spec: AbstractSpec, schema: Optional[DatasetSchema]) -> VisualSpec:
    axes = [f for f in (spec.x, spec.y) if f is not None]
    aggregates = [f for f in spec.pooled_selection() if is_aggregated(f)]
    lat = any(
        _is_geo(f, schema, ColumnRole.LATITUDE, ("lat", "latitude")) for f in axes
    )
    lon = any(
        _is_geo(f, schema, ColumnRole.LONGITUDE, ("lon", "long", "longitude")) for f in axes
    )
    if lat and lon:
        return VisualSpec(chart_type="map-scatter")
    if _is_temporal(spec.x, schema) and aggregates:
        return VisualSpec(chart_type="line")
    dimensions = [f for f in axes if not is_aggregated(f)]
    if len(dimensions) == 1 and aggregates:
        return VisualSpec(chart_type="bar")
    if len(aggregates) == 1 and spec.x is None and spec.y is None:
        return VisualSpec(chart_type="box-plot")
    return VisualSpec(chart_type="table")


def choose_visual_spec(
    node: SliceNode,
    user_pref: Optional[VisualSpec] = None,
    schema: Optional[DatasetSchema] = None,
) -> VisualSpec:
    """Pick the visual for a node: user preference, stored spec, rule table."""
    if user_pref is not None:
        encoded = user_pref.encoded_fields()
        if all(layer in encoded for layer in node.spec.layers):
            return user_pref
    if node.visual_specs:
        return node.visual_specs[0]
    return _default_visual(node.spec, schema)


def upvote(graph: DataSliceGraph, node_id: str) -> DataSliceGraph:
    """Increment a node's vote counter, returning the updated graph."""
    node = graph.node(node_id)
    nodes = dict(graph.nodes)
    nodes[node_id] = replace(node, votes=node.votes + 1)
    return replace(graph, nodes=nodes)


def recommend(
    graph: DataSliceGraph,
    current_spec: DataSpecification,
    user_pref: Optional[VisualSpec] = None,
    m: int = 2,
    threshold_ms: int | None = None,
    schema: Optional[DatasetSchema] = None,
    visited: set[str] | None = None,
) -> list[Recommendation]:
    """Match, rank, then contextualize each ranked node into a Recommendation."""
    t = graph.meta.default_threshold_ms if threshold_ms is None else threshold_ms
    matched = match_data_slices(graph, current_spec, m)
    ranked = rank_data_slices(graph, matched.node_ids(), m, t)
    out = []
    for entry in ranked:
        node = graph.node(entry.node_id)
        concrete = contextualize(node.spec, current_spec)
        out.append(
            Recommendation(
                node=entry,
                display_index=node.display_index,
                concrete_spec=concrete,
                visual=choose_visual_spec(node, user_pref, schema),
                sql_template=to_sql_template(concrete, schema),
                placeholder_filters=tuple(
                    p.field for p in concrete.filters if p.is_placeholder
                ),
                already_visited=bool(visited and entry.node_id in visited),
            )
        )
    return out
