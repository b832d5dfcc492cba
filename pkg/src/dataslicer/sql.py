"""SQL template generation for data specifications.

Clause rules (documented in docs/formats.md):
- SELECT: the present axis fields sorted by canonical rendering, then layers
  in spec order.
- WHERE: non-aggregated predicates; HAVING: aggregated ones. Predicates are
  ordered by (field rendering, comparator, operands); placeholders (filters
  without a comparator) are unconstrained and omitted.
- GROUP BY: the grouping fields in spec order when grouping is nonempty;
  otherwise, when any selected field is aggregated, the non-aggregated
  selected fields. Selected dimensions are implicit group keys when an
  explicit grouping exists (paper-style template shorthand; the evaluator
  keys on both).
- Identifiers containing whitespace are double-quoted.
"""

from __future__ import annotations

from typing import Optional

from .dataset import DatasetSchema
from .errors import UnresolvedField
from .fields import (
    AggregatedField,
    ComplexField,
    FieldExpr,
    SimpleField,
    base_attributes,
    is_aggregated,
)
from .spec import Comparator, DataSpecification, FilterPredicate

__all__ = ["to_sql_template"]


def _quote(name: str) -> str:
    if any(ch.isspace() for ch in name):
        return f'"{name}"'
    return name


def _render_sql(field: FieldExpr) -> str:
    if isinstance(field, SimpleField):
        return _quote(field.name)
    if isinstance(field, AggregatedField):
        return f"{field.agg.value}({_render_sql(field.inner)})"
    assert isinstance(field, ComplexField)
    return f"({_render_sql(field.left)}{field.op.value}{_render_sql(field.right)})"


def _literal(value) -> str:
    if isinstance(value, bool):
        return "TRUE" if value else "FALSE"
    if isinstance(value, (int, float)):
        return repr(value)
    text = str(value).replace("'", "''")
    return f"'{text}'"


def _predicate_sql(p: FilterPredicate) -> str:
    field = _render_sql(p.field)
    assert p.comparator is not None
    if p.comparator is Comparator.IN:
        return f"{field} IN ({', '.join(_literal(o) for o in p.operands)})"
    if p.comparator is Comparator.BETWEEN:
        lo, hi = p.operands
        return f"{field} BETWEEN {_literal(lo)} AND {_literal(hi)}"
    return f"{field} {p.comparator.value} {_literal(p.operands[0])}"


def _check_resolved(spec: DataSpecification, schema: DatasetSchema) -> None:
    known = {c.name for c in schema.columns}
    referenced: set[str] = set()
    for f in spec.selected_fields() + spec.grouping:
        referenced |= base_attributes(f)
    for p in spec.filters:
        referenced |= base_attributes(p.field)
    unknown = sorted(referenced - known)
    if unknown:
        raise UnresolvedField(f"unknown attributes: {', '.join(unknown)}")


def to_sql_template(spec: DataSpecification, schema: Optional[DatasetSchema] = None) -> str:
    """Emit the SELECT/FROM/WHERE/GROUP BY/HAVING text for a specification.

    Without a schema, the table is rendered as ``<table>`` and no attribute
    resolution is performed.
    """
    if schema is not None:
        _check_resolved(spec, schema)
    selected = spec.selected_fields()
    table = _quote(schema.name) if schema is not None else "<table>"

    parts = [f"SELECT {', '.join(_render_sql(f) for f in selected)}" if selected
             else "SELECT *"]
    parts.append(f"FROM {table}")

    concrete = [p for p in spec.filters if not p.is_placeholder]
    where = [p for p in concrete if not p.aggregated]
    having = [p for p in concrete if p.aggregated]
    if where:
        parts.append("WHERE " + " AND ".join(_predicate_sql(p) for p in where))

    if spec.grouping:
        keys = list(spec.grouping)
    elif any(is_aggregated(f) for f in selected):
        keys = [f for f in selected if not is_aggregated(f)]
    else:
        keys = []
    if keys:
        parts.append("GROUP BY " + ", ".join(_render_sql(f) for f in keys))

    if having:
        parts.append("HAVING " + " AND ".join(_predicate_sql(p) for p in having))
    return " ".join(parts)
