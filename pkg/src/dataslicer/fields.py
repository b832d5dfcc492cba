"""Field expressions: simple attributes, aggregations, and complex combinations.

A field expression is either a bare attribute name, an aggregation
(SUM/MIN/MAX/AVG) over another expression, or a binary combination of two
expressions with concatenation (+), cross product (x) or nesting (/).
Every expression has a unique canonical rendering such as ``place``,
``AVG(magnitude)`` or ``(latitude+longitude)``; two expressions are equal
iff their renderings are equal, and ``parse_field`` inverts ``render``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import FieldSyntaxError

__all__ = [
    "Agg",
    "ComplexOp",
    "FieldExpr",
    "SimpleField",
    "AggregatedField",
    "ComplexField",
    "parse_field",
    "is_aggregated",
    "base_attributes",
    "root_wraps",
]


class Agg(str, Enum):
    SUM = "SUM"
    MIN = "MIN"
    MAX = "MAX"
    AVG = "AVG"


class ComplexOp(str, Enum):
    CONCAT = "+"
    CROSS = "×"  # ×
    NEST = "/"


# Characters that would make a rendering ambiguous if they appeared in a name.
_RESERVED = set("()+/×")


@dataclass(frozen=True)
class SimpleField:
    """A bare attribute of the underlying table, e.g. ``place``."""

    name: str

    def __post_init__(self):
        if not self.name or self.name != self.name.strip():
            raise FieldSyntaxError(f"invalid attribute name {self.name!r}")
        bad = _RESERVED.intersection(self.name)
        if bad:
            raise FieldSyntaxError(
                f"attribute name {self.name!r} contains reserved characters {sorted(bad)}"
            )

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class AggregatedField:
    """An aggregation over one inner expression, e.g. ``AVG(magnitude)``."""

    agg: Agg
    inner: "FieldExpr"

    def render(self) -> str:
        return f"{self.agg.value}({self.inner.render()})"


@dataclass(frozen=True)
class ComplexField:
    """A binary combination of two expressions, e.g. ``(latitude+longitude)``."""

    op: ComplexOp
    left: "FieldExpr"
    right: "FieldExpr"

    def render(self) -> str:
        return f"({self.left.render()}{self.op.value}{self.right.render()})"


FieldExpr = Union[SimpleField, AggregatedField, ComplexField]

_AGG_NAMES = {a.value for a in Agg}
_OP_CHARS = {o.value: o for o in ComplexOp}


def parse_field(text: str) -> FieldExpr:
    """Parse a canonical rendering back into a field expression."""
    if not isinstance(text, str) or not text:
        raise FieldSyntaxError(f"empty field expression {text!r}")
    head, sep, _ = text.partition("(")
    if sep and text.endswith(")") and head in _AGG_NAMES:
        inner = text[len(head) + 1 : -1]
        if _balanced(inner):
            return AggregatedField(Agg(head), parse_field(inner))
    if text.startswith("(") and text.endswith(")") and _balanced(text[1:-1]):
        return _parse_complex(text[1:-1])
    return SimpleField(text)


def _balanced(text: str) -> bool:
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def _parse_complex(body: str) -> ComplexField:
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in _OP_CHARS:
            return ComplexField(_OP_CHARS[ch], parse_field(body[:i]), parse_field(body[i + 1 :]))
    raise FieldSyntaxError(f"no top-level operator in {('(' + body + ')')!r}")


def is_aggregated(field: FieldExpr) -> bool:
    """True when the expression contains an aggregation operator anywhere."""
    if isinstance(field, SimpleField):
        return False
    if isinstance(field, AggregatedField):
        return True
    return is_aggregated(field.left) or is_aggregated(field.right)


def base_attributes(field: FieldExpr) -> set[str]:
    """Attribute names referenced anywhere inside the expression."""
    if isinstance(field, SimpleField):
        return {field.name}
    if isinstance(field, AggregatedField):
        return base_attributes(field.inner)
    return base_attributes(field.left) | base_attributes(field.right)


def root_wraps(outer: FieldExpr, inner: FieldExpr) -> bool:
    """True when ``outer`` is ``inner`` with exactly one extra root operator node.

    Aggregations and binary complex operators both count as operator nodes;
    this is the single-step field modification recognised by the diff.
    """
    if isinstance(outer, AggregatedField):
        return outer.inner == inner
    if isinstance(outer, ComplexField):
        return outer.left == inner or outer.right == inner
    return False
