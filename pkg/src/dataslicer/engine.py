"""In-memory evaluation of a data slice: filter, group, aggregate, having.

Semantics follow the generated SQL template. Group keys are the grouping
fields plus every non-aggregated selected field, so per-group values are
always well defined. Nulls are excluded from aggregates and fail every
filter; a group whose aggregate input is entirely null is dropped. Output
rows are sorted by group key (nulls last).
"""

from __future__ import annotations

import math
from typing import Any, Optional

from .dataset import ColumnType, Dataset, ResultTable
from .errors import TypeMismatch, UnresolvedField
from .fields import Agg, AggregatedField, FieldExpr, SimpleField, is_aggregated
from .spec import Comparator, DataSpecification, FilterPredicate

__all__ = ["evaluate"]

_NUMERIC = (ColumnType.INT, ColumnType.FLOAT)


def _simple_column(field: FieldExpr, dataset: Dataset, context: str) -> str:
    if not isinstance(field, SimpleField):
        raise TypeMismatch(
            f"{context}: {field.render()!r} is not evaluable; only simple "
            "attributes and single aggregations over them are supported"
        )
    if dataset.schema.column(field.name) is None:
        raise UnresolvedField(f"unknown attribute: {field.name}")
    return field.name


def _aggregate_parts(field: FieldExpr, dataset: Dataset) -> tuple[Agg, str]:
    assert isinstance(field, AggregatedField)
    name = _simple_column(field.inner, dataset, "aggregation")
    col = dataset.schema.column(name)
    assert col is not None
    if field.agg in (Agg.SUM, Agg.AVG) and col.type not in _NUMERIC:
        raise TypeMismatch(f"{field.agg.value} over non-numeric column {name!r}")
    return field.agg, name


def _coerce(operand: Any, column_type: ColumnType) -> Any:
    try:
        if column_type is ColumnType.INT or column_type is ColumnType.FLOAT:
            return operand if isinstance(operand, (int, float)) else float(operand)
        if column_type is ColumnType.DATETIME:
            from datetime import datetime

            return operand if isinstance(operand, datetime) else datetime.fromisoformat(operand)
        if column_type is ColumnType.BOOL:
            return bool(operand)
        return operand if isinstance(operand, str) else str(operand)
    except (ValueError, TypeError) as exc:
        raise TypeMismatch(f"operand {operand!r} does not fit a {column_type.value} column") from exc


def _compare(value: Any, predicate: FilterPredicate, column_type: Optional[ColumnType]) -> bool:
    if value is None:
        return False
    comparator = predicate.comparator
    assert comparator is not None
    if column_type is not None:
        operands = [_coerce(o, column_type) for o in predicate.operands]
    else:
        operands = list(predicate.operands)
    try:
        if comparator is Comparator.IN:
            return value in operands
        if comparator is Comparator.BETWEEN:
            return operands[0] <= value <= operands[1]
        target = operands[0]
        if comparator is Comparator.LT:
            return value < target
        if comparator is Comparator.LE:
            return value <= target
        if comparator is Comparator.EQ:
            return value == target
        if comparator is Comparator.NE:
            return value != target
        if comparator is Comparator.GE:
            return value >= target
        return value > target
    except TypeError as exc:
        raise TypeMismatch(str(exc)) from exc


def _aggregate(agg: Agg, values: list) -> Any:
    present = [v for v in values if v is not None]
    if not present:
        return None
    if agg is Agg.SUM:
        if all(isinstance(v, int) and not isinstance(v, bool) for v in present):
            return sum(present)
        return math.fsum(present)
    if agg is Agg.AVG:
        return math.fsum(present) / len(present)
    if agg is Agg.MIN:
        return min(present)
    return max(present)


def _sort_token(value: Any) -> tuple:
    # Nulls last; values of one key column share a type, so this total-orders.
    return (value is None, value)


def evaluate(dataset: Dataset, spec: DataSpecification) -> ResultTable:
    """Evaluate a specification against a dataset.

    Output columns: group key fields (grouping first, then non-aggregated
    selected fields), then the aggregated selected fields in SELECT order.
    """
    schema = dataset.schema
    selected = spec.selected_fields()
    agg_selected = [f for f in selected if is_aggregated(f)]
    plain_selected = [f for f in selected if not is_aggregated(f)]

    key_fields: list[FieldExpr] = []
    for f in tuple(spec.grouping) + tuple(plain_selected):
        if f not in key_fields:
            key_fields.append(f)
    key_columns = [_simple_column(f, dataset, "group key") for f in key_fields]

    where = [p for p in spec.filters if not p.is_placeholder and not p.aggregated]
    having = [p for p in spec.filters if not p.is_placeholder and p.aggregated]
    for p in where:
        _simple_column(p.field, dataset, "filter")

    # Aggregations needed: the selected ones plus any HAVING-only ones.
    agg_fields: list[FieldExpr] = list(agg_selected)
    for p in having:
        if p.field not in agg_fields:
            agg_fields.append(p.field)
    agg_parts = {f: _aggregate_parts(f, dataset) for f in agg_fields}

    # Row filter (WHERE).
    surviving: list[int] = []
    for i in range(dataset.row_count):
        ok = True
        for p in where:
            assert isinstance(p.field, SimpleField)
            col = schema.column(p.field.name)
            assert col is not None
            if not _compare(dataset.columns[p.field.name][i], p, col.type):
                ok = False
                break
        if ok:
            surviving.append(i)

    aggregating = bool(agg_fields) or bool(spec.grouping)
    if not aggregating:
        # Plain projection: no explicit grouping, nothing aggregated.
        names = [_simple_column(f, dataset, "selection") for f in plain_selected]
        rows = sorted(
            (tuple(dataset.columns[n][i] for n in names) for i in surviving),
            key=lambda row: tuple(_sort_token(v) for v in row),
        )
        columns = tuple(
            (f.render(), schema.column(n).type) for f, n in zip(plain_selected, names)
        )
        return ResultTable(columns=columns, rows=tuple(rows))

    groups: dict[tuple, list[int]] = {}
    for i in surviving:
        key = tuple(dataset.columns[n][i] for n in key_columns)
        groups.setdefault(key, []).append(i)

    out_rows = []
    for key in sorted(groups, key=lambda k: tuple(_sort_token(v) for v in k)):
        indices = groups[key]
        agg_values: dict[FieldExpr, Any] = {}
        dropped = False
        for f, (agg, name) in agg_parts.items():
            value = _aggregate(agg, [dataset.columns[name][i] for i in indices])
            if value is None:
                dropped = True
                break
            agg_values[f] = value
        if dropped:
            continue
        keep = True
        for p in having:
            if not _compare(agg_values[p.field], p, None):
                keep = False
                break
        if not keep:
            continue
        out_rows.append(tuple(key) + tuple(agg_values[f] for f in agg_selected))

    columns: list[tuple[str, ColumnType]] = []
    for f, name in zip(key_fields, key_columns):
        columns.append((f.render(), schema.column(name).type))
    for f in agg_selected:
        agg, name = agg_parts[f]
        col_type = schema.column(name).type
        if agg is Agg.AVG:
            out_type = ColumnType.FLOAT
        elif agg is Agg.SUM:
            out_type = ColumnType.INT if col_type is ColumnType.INT else ColumnType.FLOAT
        else:
            out_type = col_type
        columns.append((f.render(), out_type))
    return ResultTable(columns=tuple(columns), rows=tuple(out_rows))
