"""Data specifications, their canonical (abstract) form, and document I/O.

A data specification is the five-part tuple (x, y, layers, filters, grouping)
describing one data slice. Canonicalization reduces every filter predicate to
its field descriptor, deduplicates, and sorts all parts; the resulting
``AbstractSpec`` is the identity under which graph nodes merge.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Optional

from .errors import FieldSyntaxError, FormatError, InvalidSpec
from .fields import FieldExpr, is_aggregated, parse_field

__all__ = [
    "Comparator",
    "FilterPredicate",
    "DataSpecification",
    "AbstractSpec",
    "VisualSpec",
    "canonicalize",
    "embed_spec",
    "spec_to_document",
    "spec_from_document",
    "abstract_to_document",
    "abstract_from_document",
    "visual_to_document",
    "visual_from_document",
]


class Comparator(str, Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    NE = "!="
    GE = ">="
    GT = ">"
    IN = "in"
    BETWEEN = "between"


_COMPARATOR_RANK = {c: i for i, c in enumerate(Comparator)}

Operand = Any  # int | float | str | bool


@dataclass(frozen=True)
class FilterPredicate:
    """One filter condition, or a bare placeholder when comparator is None.

    Placeholders carry only the filtered field; they arise when a recommended
    abstract filter cannot be re-parameterized from the current session.
    """

    field: FieldExpr
    comparator: Optional[Comparator] = None
    operands: tuple[Operand, ...] = ()

    def __post_init__(self):
        if self.comparator is None:
            if self.operands:
                raise InvalidSpec("placeholder filter must not carry operands")
            return
        n = len(self.operands)
        if self.comparator is Comparator.BETWEEN and n != 2:
            raise InvalidSpec("between takes exactly two operands")
        if self.comparator is Comparator.IN and n < 1:
            raise InvalidSpec("in takes at least one operand")
        if self.comparator not in (Comparator.BETWEEN, Comparator.IN) and n != 1:
            raise InvalidSpec(f"{self.comparator.value} takes exactly one operand")

    @property
    def aggregated(self) -> bool:
        """True iff the filtered field contains an aggregation operator."""
        return is_aggregated(self.field)

    @property
    def is_placeholder(self) -> bool:
        return self.comparator is None

    def sort_key(self) -> tuple:
        rank = -1 if self.comparator is None else _COMPARATOR_RANK[self.comparator]
        return (self.field.render(), rank, tuple(str(o) for o in self.operands))


def _check_unique(fields: Iterable[FieldExpr], part: str) -> tuple[FieldExpr, ...]:
    out = tuple(fields)
    if len({f.render() for f in out}) != len(out):
        raise InvalidSpec(f"duplicate field in {part}")
    return out


@dataclass(frozen=True)
class DataSpecification:
    """A concrete data specification: (x, y, layers, filters, grouping).

    Layers and grouping keep their given order (it is reflected in generated
    SQL); filters are stored sorted and deduplicated.
    """

    x: Optional[FieldExpr] = None
    y: Optional[FieldExpr] = None
    layers: tuple[FieldExpr, ...] = ()
    filters: tuple[FilterPredicate, ...] = ()
    grouping: tuple[FieldExpr, ...] = ()

    def __post_init__(self):
        if self.x is not None and self.x == self.y:
            raise InvalidSpec("x and y must differ when both present")
        _check_unique(self.layers, "layers")
        _check_unique(self.grouping, "grouping")
        ordered = tuple(sorted(set(self.filters), key=FilterPredicate.sort_key))
        object.__setattr__(self, "filters", ordered)

    def selected_fields(self) -> tuple[FieldExpr, ...]:
        """Axis fields (sorted by rendering) followed by layers in spec order."""
        axes = sorted((f for f in (self.x, self.y) if f is not None), key=lambda f: f.render())
        return tuple(axes) + self.layers

    def predicates_on(self, descriptor: FieldExpr) -> tuple[FilterPredicate, ...]:
        return tuple(p for p in self.filters if p.field == descriptor)


@dataclass(frozen=True)
class AbstractSpec:
    """Canonicalized specification: the graph-node identity.

    All parts are sorted by canonical rendering and deduplicated; filter
    predicates are reduced to their field descriptors.
    """

    x: Optional[FieldExpr] = None
    y: Optional[FieldExpr] = None
    layers: tuple[FieldExpr, ...] = ()
    filter_descriptors: tuple[FieldExpr, ...] = ()
    grouping: tuple[FieldExpr, ...] = ()

    def canonical_render(self) -> str:
        doc = {
            "x": self.x.render() if self.x else None,
            "y": self.y.render() if self.y else None,
            "layers": [f.render() for f in self.layers],
            "filters": [f.render() for f in self.filter_descriptors],
            "grouping": [f.render() for f in self.grouping],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def node_id(self) -> str:
        return hashlib.sha256(self.canonical_render().encode("utf-8")).hexdigest()[:16]

    def pooled_selection(self) -> frozenset[FieldExpr]:
        """x, y and layers pooled into one set; axis/layer placement erased."""
        pooled = set(self.layers)
        pooled.update(f for f in (self.x, self.y) if f is not None)
        return frozenset(pooled)


def _sorted_unique(fields: Iterable[FieldExpr]) -> tuple[FieldExpr, ...]:
    return tuple(sorted({f.render(): f for f in fields}.values(), key=lambda f: f.render()))


def canonicalize(spec: DataSpecification) -> AbstractSpec:
    """Reduce a concrete specification to its canonical abstract form."""
    return AbstractSpec(
        x=spec.x,
        y=spec.y,
        layers=_sorted_unique(spec.layers),
        filter_descriptors=_sorted_unique(p.field for p in spec.filters),
        grouping=_sorted_unique(spec.grouping),
    )


def embed_spec(abstract: AbstractSpec) -> DataSpecification:
    """Re-embed an abstract spec as a concrete one with placeholder filters."""
    return DataSpecification(
        x=abstract.x,
        y=abstract.y,
        layers=abstract.layers,
        filters=tuple(FilterPredicate(field=f) for f in abstract.filter_descriptors),
        grouping=abstract.grouping,
    )


@dataclass(frozen=True)
class VisualSpec:
    """Presentation choices paired with a data specification; kept opaque."""

    chart_type: str = "table"
    encodings: tuple[tuple[FieldExpr, str], ...] = ()
    extra: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "extra", tuple(sorted(self.extra)))

    def encoded_fields(self) -> set[FieldExpr]:
        return {f for f, _ in self.encodings}

    def sort_key(self) -> str:
        return json.dumps(visual_to_document(self), sort_keys=True)


# --- document (JSON) forms -------------------------------------------------

def _render_or_none(f: Optional[FieldExpr]) -> Optional[str]:
    return f.render() if f is not None else None


def filter_to_document(p: FilterPredicate) -> dict:
    doc: dict = {"field": p.field.render(), "aggregated": p.aggregated}
    if p.comparator is not None:
        doc["comparator"] = p.comparator.value
        doc["operands"] = list(p.operands)
    return doc


def filter_from_document(doc: Any, where: str = "filter") -> FilterPredicate:
    if not isinstance(doc, dict) or "field" not in doc:
        raise FormatError("filter must be an object with a 'field' key", where)
    try:
        field = parse_field(doc["field"])
        comparator = Comparator(doc["comparator"]) if "comparator" in doc else None
        operands = tuple(doc.get("operands", ()))
        pred = FilterPredicate(field=field, comparator=comparator, operands=operands)
    except (FieldSyntaxError, InvalidSpec, ValueError, TypeError) as exc:
        raise FormatError(str(exc), where) from exc
    if "aggregated" in doc and bool(doc["aggregated"]) != pred.aggregated:
        raise FormatError("'aggregated' flag contradicts the filtered field", where)
    return pred


def spec_to_document(spec: DataSpecification) -> dict:
    return {
        "x": _render_or_none(spec.x),
        "y": _render_or_none(spec.y),
        "layers": [f.render() for f in spec.layers],
        "filters": [filter_to_document(p) for p in spec.filters],
        "grouping": [f.render() for f in spec.grouping],
    }


def spec_from_document(doc: Any, where: str = "spec") -> DataSpecification:
    if not isinstance(doc, dict):
        raise FormatError("spec must be an object", where)
    try:
        return DataSpecification(
            x=parse_field(doc["x"]) if doc.get("x") else None,
            y=parse_field(doc["y"]) if doc.get("y") else None,
            layers=tuple(parse_field(f) for f in doc.get("layers", ())),
            filters=tuple(
                filter_from_document(f, where) for f in doc.get("filters", ())
            ),
            grouping=tuple(parse_field(f) for f in doc.get("grouping", ())),
        )
    except (FieldSyntaxError, InvalidSpec, ValueError, TypeError) as exc:
        raise FormatError(str(exc), where) from exc


def abstract_to_document(spec: AbstractSpec) -> dict:
    return {
        "x": _render_or_none(spec.x),
        "y": _render_or_none(spec.y),
        "layers": [f.render() for f in spec.layers],
        "filterDescriptors": [f.render() for f in spec.filter_descriptors],
        "grouping": [f.render() for f in spec.grouping],
    }


def abstract_from_document(doc: Any, where: str = "spec") -> AbstractSpec:
    if not isinstance(doc, dict):
        raise FormatError("abstract spec must be an object", where)
    try:
        return AbstractSpec(
            x=parse_field(doc["x"]) if doc.get("x") else None,
            y=parse_field(doc["y"]) if doc.get("y") else None,
            layers=_sorted_unique(parse_field(f) for f in doc.get("layers", ())),
            filter_descriptors=_sorted_unique(
                parse_field(f) for f in doc.get("filterDescriptors", ())
            ),
            grouping=_sorted_unique(parse_field(f) for f in doc.get("grouping", ())),
        )
    except (FieldSyntaxError, InvalidSpec, ValueError, TypeError) as exc:
        raise FormatError(str(exc), where) from exc


def visual_to_document(visual: VisualSpec) -> dict:
    return {
        "chartType": visual.chart_type,
        "encodings": [{"field": f.render(), "cue": cue} for f, cue in visual.encodings],
        "extra": dict(visual.extra),
    }


def visual_from_document(doc: Any, where: str = "visual") -> VisualSpec:
    if doc is None:
        return VisualSpec()
    if not isinstance(doc, dict):
        raise FormatError("visual spec must be an object", where)
    try:
        return VisualSpec(
            chart_type=str(doc.get("chartType", "table")),
            encodings=tuple(
                (parse_field(e["field"]), str(e["cue"])) for e in doc.get("encodings", ())
            ),
            extra=tuple((str(k), str(v)) for k, v in doc.get("extra", {}).items()),
        )
    except (FieldSyntaxError, KeyError, ValueError, TypeError) as exc:
        raise FormatError(str(exc), where) from exc
