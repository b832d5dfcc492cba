"""Session logs: the line-delimited event format and its parser.

One JSON document per line: {sessionId, role, taskType, timestampMs,
dwellMs, spec, visual}. Events are grouped into per-session sequences,
ordered by timestamp (stable for equal timestamps). A session must not
change role or task type mid-stream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import FormatError, InconsistentSession, InvalidSpec
from .spec import (
    DataSpecification,
    VisualSpec,
    spec_from_document,
    spec_to_document,
    visual_from_document,
    visual_to_document,
)

__all__ = [
    "Role",
    "SessionEvent",
    "SessionSequence",
    "LogEvent",
    "parse_session_log",
    "event_to_line",
    "mark_interesting",
]


class Role(str, Enum):
    EXPERT = "expert"
    REGULAR = "regular"


@dataclass(frozen=True)
class SessionEvent:
    spec: DataSpecification
    visual: VisualSpec
    dwell_ms: int
    timestamp_ms: int

    def __post_init__(self):
        if self.dwell_ms < 0:
            raise InvalidSpec("dwellMs must be nonnegative")


@dataclass(frozen=True)
class LogEvent:
    """One parsed log line, before session grouping."""

    session_id: str
    role: Role
    task_type: str
    event: SessionEvent


@dataclass(frozen=True)
class SessionSequence:
    session_id: str
    role: Role
    task_type: str
    events: tuple[SessionEvent, ...]

    def __post_init__(self):
        if not self.events:
            raise InvalidSpec("a session sequence needs at least one event")
        stamps = [e.timestamp_ms for e in self.events]
        if stamps != sorted(stamps):
            raise InvalidSpec("event timestamps must be nondecreasing")


_REQUIRED = ("sessionId", "role", "taskType", "timestampMs", "dwellMs", "spec")


def _parse_line(line: str, line_no: int) -> LogEvent:
    where = f"line {line_no}"
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", where) from None
    if not isinstance(doc, dict):
        raise FormatError("event must be a JSON object", where)
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise FormatError(f"missing keys: {', '.join(missing)}", where)
    try:
        role = Role(doc["role"])
    except ValueError:
        raise FormatError(f"unknown role {doc['role']!r}", where) from None
    try:
        event = SessionEvent(
            spec=spec_from_document(doc["spec"], where),
            visual=visual_from_document(doc.get("visual"), where),
            dwell_ms=int(doc["dwellMs"]),
            timestamp_ms=int(doc["timestampMs"]),
        )
    except (InvalidSpec, ValueError, TypeError) as exc:
        raise FormatError(str(exc), where) from None
    return LogEvent(
        session_id=str(doc["sessionId"]),
        role=role,
        task_type=str(doc["taskType"]),
        event=event,
    )


def parse_session_log(lines: Iterable[str]) -> list[SessionSequence]:
    """Parse log lines into per-session sequences, sorted by session id.

    Raises FormatError with the offending line number on malformed input and
    InconsistentSession when a session's role or task type varies.
    """
    by_session: dict[str, list[LogEvent]] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        record = _parse_line(line, line_no)
        by_session.setdefault(record.session_id, []).append(record)
    sequences = []
    for session_id in sorted(by_session):
        records = by_session[session_id]
        roles = {r.role for r in records}
        tasks = {r.task_type for r in records}
        if len(roles) > 1 or len(tasks) > 1:
            raise InconsistentSession(
                f"session {session_id!r} mixes roles {sorted(r.value for r in roles)} "
                f"or task types {sorted(tasks)}"
            )
        ordered = sorted(records, key=lambda r: r.event.timestamp_ms)
        sequences.append(
            SessionSequence(
                session_id=session_id,
                role=records[0].role,
                task_type=records[0].task_type,
                events=tuple(r.event for r in ordered),
            )
        )
    return sequences


def event_to_line(seq_or_event: SessionSequence | LogEvent, event: SessionEvent | None = None) -> str:
    """Serialize one event back to the log-line format."""
    if isinstance(seq_or_event, LogEvent):
        session_id, role, task = (
            seq_or_event.session_id, seq_or_event.role, seq_or_event.task_type,
        )
        event = seq_or_event.event
    else:
        assert event is not None
        session_id, role, task = seq_or_event.session_id, seq_or_event.role, seq_or_event.task_type
    doc = {
        "sessionId": session_id,
        "role": role.value,
        "taskType": task,
        "timestampMs": event.timestamp_ms,
        "dwellMs": event.dwell_ms,
        "spec": spec_to_document(event.spec),
        "visual": visual_to_document(event.visual),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def mark_interesting(seq: SessionSequence, threshold_ms: int) -> list[bool]:
    """Per-event flags: dwell time at or above the threshold."""
    if threshold_ms < 0:
        raise InvalidSpec("threshold must be nonnegative")
    return [e.dwell_ms >= threshold_ms for e in seq.events]
