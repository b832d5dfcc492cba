"""Exception types shared across the package."""

from __future__ import annotations


class DataSlicerError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class FieldSyntaxError(DataSlicerError):
    """A field expression string could not be parsed."""

    code = "field_syntax"


class InvalidSpec(DataSlicerError):
    """A data specification violates a structural invariant."""

    code = "invalid_spec"


class InapplicableOp(DataSlicerError):
    """A navigation operation cannot be applied to the given specification."""

    code = "inapplicable_op"


class SchemaMismatch(DataSlicerError):
    """CSV header does not match the declared schema."""

    code = "schema_mismatch"


class DatasetTypeError(DataSlicerError):
    """A CSV cell could not be converted to its declared column type."""

    code = "dataset_type"

    def __init__(self, row: int, column: str, text: str):
        super().__init__(f"row {row}, column {column!r}: cannot parse {text!r}")
        self.row = row
        self.column = column
        self.text = text


class UnresolvedField(DataSlicerError):
    """A specification references an attribute absent from the schema."""

    code = "unresolved_field"


class TypeMismatch(DataSlicerError):
    """An operation was applied to a column of an unsupported type."""

    code = "type_mismatch"


class TaskMismatch(DataSlicerError):
    """A sequence's task type differs from the graph's task type."""

    code = "task_mismatch"


class FormatError(DataSlicerError):
    """A document (log line, graph file, spec document) is malformed."""

    code = "format"

    def __init__(self, message: str, location: str | None = None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location


class InconsistentSession(DataSlicerError):
    """Events of one session disagree on role or task type."""

    code = "inconsistent_session"


class EmptyGraph(DataSlicerError):
    """Matching was requested against a graph with no nodes."""

    code = "empty_graph"


class UnknownNode(DataSlicerError):
    """A node id does not exist in the graph."""

    code = "unknown_node"
