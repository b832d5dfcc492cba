"""The Navigation Algebra: single-step edits between data specifications.

Eight operation kinds: add/remove a filter, add/remove a select field (X, Y
or a layer), add/remove a grouping field, and add/remove one operator node of
a field in place (a complex-field edit). Every operation changes exactly one
of the five tuple parts and has an exact inverse.

``diff_ops`` produces the canonical operation list turning one specification
into another, compared at the canonical (descriptor) level: removals first,
then additions, each ordered by part (filters, select, grouping) and then by
canonical field rendering; single-field one-operator-node substitutions
within a part are emitted as one complex edit, placed last.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .errors import FormatError, InapplicableOp
from .fields import FieldExpr, parse_field, root_wraps
from .spec import (
    AbstractSpec,
    DataSpecification,
    FilterPredicate,
    canonicalize,
    filter_from_document,
    filter_to_document,
)

__all__ = ["NavOpKind", "Slot", "NavOp", "invert", "apply_nav_op", "diff_ops",
           "nav_op_to_document", "nav_op_from_document"]


class NavOpKind(str, Enum):
    ADD_FILTER = "AddFilter"
    REMOVE_FILTER = "RemoveFilter"
    ADD_SELECT_FIELD = "AddSelectField"
    REMOVE_SELECT_FIELD = "RemoveSelectField"
    ADD_GROUP_FIELD = "AddGroupField"
    REMOVE_GROUP_FIELD = "RemoveGroupField"
    ADD_COMPLEX_OP = "AddComplexOp"
    REMOVE_COMPLEX_OP = "RemoveComplexOp"


class Slot(str, Enum):
    X = "X"
    Y = "Y"
    LAYER = "Layer"
    FILTER = "Filter"
    GROUPING = "Grouping"


_SELECT_SLOTS = (Slot.X, Slot.Y, Slot.LAYER)


@dataclass(frozen=True)
class NavOp:
    """One Navigation Algebra operation.

    ``field`` is the payload: the field added/removed, the filter descriptor,
    or (for complex edits) the field before the edit, with ``after`` the field
    after it. ``predicate`` optionally carries a concrete filter condition for
    AddFilter/RemoveFilter; without it, filter ops act at descriptor level.
    """

    kind: NavOpKind
    field: FieldExpr
    slot: Optional[Slot] = None
    after: Optional[FieldExpr] = None
    predicate: Optional[FilterPredicate] = None

    def __post_init__(self):
        k = self.kind
        if k in (NavOpKind.ADD_SELECT_FIELD, NavOpKind.REMOVE_SELECT_FIELD):
            if self.slot not in _SELECT_SLOTS:
                raise InapplicableOp(f"{k.value} requires slot X, Y or Layer")
        elif k in (NavOpKind.ADD_COMPLEX_OP, NavOpKind.REMOVE_COMPLEX_OP):
            if self.slot is None or self.after is None:
                raise InapplicableOp(f"{k.value} requires a slot and an 'after' field")
            outer, inner = (
                (self.after, self.field) if k is NavOpKind.ADD_COMPLEX_OP
                else (self.field, self.after)
            )
            if not root_wraps(outer, inner):
                raise InapplicableOp(
                    f"{k.value}: {outer.render()!r} is not {inner.render()!r} "
                    "plus one root operator node"
                )
        elif self.slot is not None:
            raise InapplicableOp(f"{k.value} takes no slot")
        if self.predicate is not None and k not in (
            NavOpKind.ADD_FILTER, NavOpKind.REMOVE_FILTER
        ):
            raise InapplicableOp(f"{k.value} takes no predicate")


def invert(op: NavOp) -> NavOp:
    """The operation undoing ``op``; applying both yields the original spec."""
    pairs = {
        NavOpKind.ADD_FILTER: NavOpKind.REMOVE_FILTER,
        NavOpKind.REMOVE_FILTER: NavOpKind.ADD_FILTER,
        NavOpKind.ADD_SELECT_FIELD: NavOpKind.REMOVE_SELECT_FIELD,
        NavOpKind.REMOVE_SELECT_FIELD: NavOpKind.ADD_SELECT_FIELD,
        NavOpKind.ADD_GROUP_FIELD: NavOpKind.REMOVE_GROUP_FIELD,
        NavOpKind.REMOVE_GROUP_FIELD: NavOpKind.ADD_GROUP_FIELD,
    }
    if op.kind in pairs:
        return replace(op, kind=pairs[op.kind])
    if op.kind is NavOpKind.ADD_COMPLEX_OP:
        return NavOp(NavOpKind.REMOVE_COMPLEX_OP, field=op.after, slot=op.slot, after=op.field)
    return NavOp(NavOpKind.ADD_COMPLEX_OP, field=op.after, slot=op.slot, after=op.field)


def _replace_in_layers(layers: tuple[FieldExpr, ...], old: FieldExpr,
                       new: FieldExpr) -> tuple[FieldExpr, ...]:
    return tuple(new if f == old else f for f in layers)


def apply_nav_op(spec: DataSpecification, op: NavOp) -> DataSpecification:
    """Apply one operation, failing with InapplicableOp when it does not fit."""
    k = op.kind
    if k is NavOpKind.ADD_FILTER:
        pred = op.predicate or FilterPredicate(field=op.field)
        present = (
            pred in spec.filters
            if not pred.is_placeholder
            else bool(spec.predicates_on(pred.field))
        )
        if present:
            raise InapplicableOp(f"filter already present: {pred.field.render()}")
        return replace(spec, filters=spec.filters + (pred,))

    if k is NavOpKind.REMOVE_FILTER:
        if op.predicate is not None:
            if op.predicate not in spec.filters:
                raise InapplicableOp(f"no such filter: {op.field.render()}")
            kept = tuple(p for p in spec.filters if p != op.predicate)
        else:
            kept = tuple(p for p in spec.filters if p.field != op.field)
            if len(kept) == len(spec.filters):
                raise InapplicableOp(f"no filter on {op.field.render()}")
        return replace(spec, filters=kept)

    if k is NavOpKind.ADD_SELECT_FIELD:
        if op.slot is Slot.X:
            if spec.x is not None:
                raise InapplicableOp("x axis already assigned")
            return replace(spec, x=op.field)
        if op.slot is Slot.Y:
            if spec.y is not None:
                raise InapplicableOp("y axis already assigned")
            return replace(spec, y=op.field)
        if op.field in spec.layers:
            raise InapplicableOp(f"layer already present: {op.field.render()}")
        return replace(spec, layers=spec.layers + (op.field,))

    if k is NavOpKind.REMOVE_SELECT_FIELD:
        if op.slot is Slot.X:
            if spec.x != op.field:
                raise InapplicableOp("x axis does not hold that field")
            return replace(spec, x=None)
        if op.slot is Slot.Y:
            if spec.y != op.field:
                raise InapplicableOp("y axis does not hold that field")
            return replace(spec, y=None)
        if op.field not in spec.layers:
            raise InapplicableOp(f"no such layer: {op.field.render()}")
        return replace(spec, layers=tuple(f for f in spec.layers if f != op.field))

    if k is NavOpKind.ADD_GROUP_FIELD:
        if op.field in spec.grouping:
            raise InapplicableOp(f"grouping field already present: {op.field.render()}")
        return replace(spec, grouping=spec.grouping + (op.field,))

    if k is NavOpKind.REMOVE_GROUP_FIELD:
        if op.field not in spec.grouping:
            raise InapplicableOp(f"no such grouping field: {op.field.render()}")
        return replace(spec, grouping=tuple(f for f in spec.grouping if f != op.field))

    # Complex edits: rewrite op.field to op.after in the addressed slot.
    old, new = op.field, op.after
    assert new is not None
    if op.slot is Slot.X:
        if spec.x != old:
            raise InapplicableOp("x axis does not hold that field")
        return replace(spec, x=new)
    if op.slot is Slot.Y:
        if spec.y != old:
            raise InapplicableOp("y axis does not hold that field")
        return replace(spec, y=new)
    if op.slot is Slot.LAYER:
        if old not in spec.layers:
            raise InapplicableOp(f"no such layer: {old.render()}")
        return replace(spec, layers=_replace_in_layers(spec.layers, old, new))
    if op.slot is Slot.GROUPING:
        if old not in spec.grouping:
            raise InapplicableOp(f"no such grouping field: {old.render()}")
        return replace(spec, grouping=_replace_in_layers(spec.grouping, old, new))
    touched = spec.predicates_on(old)
    if not touched:
        raise InapplicableOp(f"no filter on {old.render()}")
    rewritten = tuple(
        replace(p, field=new) if p.field == old else p for p in spec.filters
    )
    return replace(spec, filters=rewritten)


def _part_sets(a: AbstractSpec):
    return {
        Slot.FILTER: set(a.filter_descriptors),
        Slot.X: {a.x} if a.x is not None else set(),
        Slot.Y: {a.y} if a.y is not None else set(),
        Slot.LAYER: set(a.layers),
        Slot.GROUPING: set(a.grouping),
    }


_REMOVE_KIND = {
    Slot.FILTER: NavOpKind.REMOVE_FILTER,
    Slot.X: NavOpKind.REMOVE_SELECT_FIELD,
    Slot.Y: NavOpKind.REMOVE_SELECT_FIELD,
    Slot.LAYER: NavOpKind.REMOVE_SELECT_FIELD,
    Slot.GROUPING: NavOpKind.REMOVE_GROUP_FIELD,
}
_ADD_KIND = {
    Slot.FILTER: NavOpKind.ADD_FILTER,
    Slot.X: NavOpKind.ADD_SELECT_FIELD,
    Slot.Y: NavOpKind.ADD_SELECT_FIELD,
    Slot.LAYER: NavOpKind.ADD_SELECT_FIELD,
    Slot.GROUPING: NavOpKind.ADD_GROUP_FIELD,
}
# Canonical part order for diff output: filters, select (X, Y, layers), grouping.
_PART_ORDER = (Slot.FILTER, Slot.X, Slot.Y, Slot.LAYER, Slot.GROUPING)


def _select_slot(slot: Slot) -> Optional[Slot]:
    return slot if slot in _SELECT_SLOTS else None


def diff_ops(a: DataSpecification, b: DataSpecification) -> list[NavOp]:
    """Canonical operation list from a to b, compared at descriptor level.

    Folding the result over ``a`` with ``apply_nav_op`` yields a spec whose
    canonicalization equals ``canonicalize(b)``. Removals come first in
    (part, rendering) order, additions last in the reversed order, so that
    diff_ops(b, a) is exactly the inverted, reversed list. At most one
    substitution per diff is recognised as a single complex edit (one part
    with exactly one field removed, one added, one wrapping the other by one
    root operator node); it sits between the blocks.
    """
    ca, cb = canonicalize(a), canonicalize(b)
    removals: list[NavOp] = []
    additions: list[NavOp] = []
    edit: Optional[NavOp] = None
    parts_a, parts_b = _part_sets(ca), _part_sets(cb)
    for slot in _PART_ORDER:
        removed = sorted(parts_a[slot] - parts_b[slot], key=lambda f: f.render())
        added = sorted(parts_b[slot] - parts_a[slot], key=lambda f: f.render())
        if edit is None and len(removed) == 1 and len(added) == 1:
            old, new = removed[0], added[0]
            if root_wraps(new, old):
                edit = NavOp(NavOpKind.ADD_COMPLEX_OP, field=old, slot=slot, after=new)
                continue
            if root_wraps(old, new):
                edit = NavOp(NavOpKind.REMOVE_COMPLEX_OP, field=old, slot=slot, after=new)
                continue
        removals.extend(
            NavOp(_REMOVE_KIND[slot], field=f, slot=_select_slot(slot)) for f in removed
        )
        additions.extend(
            NavOp(_ADD_KIND[slot], field=f, slot=_select_slot(slot)) for f in added
        )
    additions.reverse()
    middle = [edit] if edit is not None else []
    return removals + middle + additions


# --- document (JSON) form ---------------------------------------------------

def nav_op_to_document(op: NavOp) -> dict:
    doc: dict = {"kind": op.kind.value, "field": op.field.render()}
    if op.slot is not None:
        doc["slot"] = op.slot.value
    if op.after is not None:
        doc["after"] = op.after.render()
    if op.predicate is not None:
        doc["predicate"] = filter_to_document(op.predicate)
    return doc


def nav_op_from_document(doc, where: str = "navOp") -> NavOp:
    if not isinstance(doc, dict):
        raise FormatError("navOp must be an object", where)
    try:
        return NavOp(
            kind=NavOpKind(doc["kind"]),
            field=parse_field(doc["field"]),
            slot=Slot(doc["slot"]) if "slot" in doc else None,
            after=parse_field(doc["after"]) if "after" in doc else None,
            predicate=(
                filter_from_document(doc["predicate"], where)
                if "predicate" in doc else None
            ),
        )
    except (KeyError, ValueError, TypeError, InapplicableOp) as exc:
        raise FormatError(str(exc), where) from exc
