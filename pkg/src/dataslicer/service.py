"""HTTP facade over the recommendation engine.

Endpoints (JSON bodies documented in docs/formats.md):
  POST /datasets                      CSV upload (multipart) + schema
  POST /datasets/{name}/evaluate      evaluate a spec -> result table
  POST /graphs/{task}/sequences       ingest session-log lines -> merge stats
  GET  /graphs/{task}                 the graph document
  POST /graphs/{task}/match           {spec, M}
  POST /graphs/{task}/recommend       {spec, userPref?, M?, T?, visited?}
  POST /graphs/{task}/nodes/{id}/upvote
  POST /sessions/events               recorder append (log-line documents)

Reads run against immutable snapshots; ingestion and upvotes are serialized
through one lock and publish new snapshots atomically. Errors are JSON
{code, message, detail} with 400 for validation, 404 for unknown entities,
409 for task mismatches.
"""

from __future__ import annotations

import io
import json
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Form, Request, UploadFile
from fastapi.responses import JSONResponse, Response

from . import transport
from .dataset import Dataset, load_dataset, result_table_to_document, schema_from_document
from .engine import evaluate
from .errors import DataSlicerError, FormatError, TaskMismatch, UnknownNode
from .graph import DataSliceGraph, graph_to_document, load_graph, merge_sequence, save_graph
from .matcher import match_data_slices
from .recommend import recommend, upvote
from .sessions import event_to_line, parse_session_log
from .spec import spec_from_document, visual_from_document

__all__ = ["AppState", "create_app"]

_NOT_FOUND = (UnknownNode,)
_CONFLICT = (TaskMismatch,)


class AppState:
    """Mutable server state: datasets, graphs, recorder sink, persistence."""

    def __init__(
        self,
        graph_path: Optional[Path] = None,
        session_log_path: Optional[Path] = None,
    ):
        self.datasets: dict[str, Dataset] = {}
        self.graphs: dict[str, DataSliceGraph] = {}
        self.recorded_events: list[str] = []
        self.graph_path = graph_path
        self.persisted_task: Optional[str] = None
        self.session_log_path = session_log_path
        self.write_lock = threading.Lock()

    def load_graph_file(self, path: Path) -> DataSliceGraph:
        graph = load_graph(path.read_text(encoding="utf-8"))
        self.graphs[graph.task_type] = graph
        self.graph_path = path
        self.persisted_task = graph.task_type
        return graph

    def publish_graph(self, graph: DataSliceGraph) -> None:
        """Swap in the new snapshot; write through to the backing file if any."""
        self.graphs[graph.task_type] = graph
        if self.graph_path is None:
            return
        if self.persisted_task is None:
            self.persisted_task = graph.task_type
        if graph.task_type == self.persisted_task:
            self.graph_path.write_text(save_graph(graph), encoding="utf-8")


def _error_response(exc: DataSlicerError, status: int) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": exc.code, "message": str(exc), "detail": type(exc).__name__},
    )


def _json(doc) -> Response:
    return Response(content=transport.to_json(doc), media_type="application/json")


def create_app(state: Optional[AppState] = None, ui_dir: Optional[Path] = None) -> FastAPI:
    state = state or AppState()
    app = FastAPI(title="dataslicer", version="0.1.0")
    app.state.slicer = state
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(DataSlicerError)
    async def handle_domain_error(_request: Request, exc: DataSlicerError):
        if isinstance(exc, _NOT_FOUND):
            return _error_response(exc, 404)
        if isinstance(exc, _CONFLICT):
            return _error_response(exc, 409)
        return _error_response(exc, 400)

    def get_dataset(name: str) -> Dataset:
        dataset = state.datasets.get(name)
        if dataset is None:
            raise UnknownNode(f"no dataset {name!r}")
        return dataset

    def get_graph(task: str) -> DataSliceGraph:
        graph = state.graphs.get(task)
        if graph is None:
            raise UnknownNode(f"no graph for task {task!r}")
        return graph

    @app.post("/datasets")
    async def upload_dataset(csv: UploadFile, schema_text: str = Form(alias="schema")):
        try:
            schema_doc = json.loads(schema_text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid schema JSON: {exc.msg}", "schema")
        parsed = schema_from_document(schema_doc)
        text = (await csv.read()).decode("utf-8")
        dataset = load_dataset(io.StringIO(text), parsed)
        with state.write_lock:
            state.datasets[parsed.name] = dataset
        return _json({"name": parsed.name, "rowCount": dataset.row_count})

    @app.post("/datasets/{name}/evaluate")
    async def evaluate_slice(name: str, body: dict):
        dataset = get_dataset(name)
        spec = spec_from_document(body.get("spec"), "spec")
        table = evaluate(dataset, spec)
        return _json(result_table_to_document(table))

    @app.post("/graphs/{task}/sequences")
    async def ingest_sequences(task: str, request: Request):
        payload = (await request.body()).decode("utf-8")
        sequences = parse_session_log(payload.splitlines())
        with state.write_lock:
            graph = state.graphs.get(task) or DataSliceGraph.empty(task)
            before = len(graph.nodes)
            for seq in sequences:
                if seq.task_type != task:
                    raise TaskMismatch(
                        f"sequence task {seq.task_type!r} does not match {task!r}"
                    )
                graph = merge_sequence(graph, seq)
            state.publish_graph(graph)
        return _json({
            "taskType": task,
            "sequences": len(sequences),
            "nodes": len(graph.nodes),
            "newNodes": len(graph.nodes) - before,
            "edges": len(graph.edges),
        })

    @app.get("/graphs/{task}")
    async def get_graph_document(task: str):
        return _json(graph_to_document(get_graph(task)))

    @app.post("/graphs/{task}/match")
    async def match(task: str, body: dict):
        graph = get_graph(task)
        spec = spec_from_document(body.get("spec"), "spec")
        m = int(body.get("M", 2))
        result = match_data_slices(graph, spec, m)
        return _json(transport.match_result_to_document(result))

    @app.post("/graphs/{task}/recommend")
    async def recommend_slices(task: str, body: dict):
        graph = get_graph(task)
        spec = spec_from_document(body.get("spec"), "spec")
        user_pref = (
            visual_from_document(body["userPref"], "userPref")
            if body.get("userPref") is not None else None
        )
        dataset = state.datasets.get(body["dataset"]) if body.get("dataset") else None
        recs = recommend(
            graph,
            spec,
            user_pref=user_pref,
            m=int(body.get("M", 2)),
            threshold_ms=int(body["T"]) if "T" in body and body["T"] is not None else None,
            schema=dataset.schema if dataset else None,
            visited=set(body.get("visited", ())) or None,
        )
        return _json({
            "mode": "prediction" if graph.has_expert_input() else "recommendation",
            "recommendations": [transport.recommendation_to_document(r) for r in recs],
        })

    @app.post("/graphs/{task}/nodes/{node_id}/upvote")
    async def upvote_node(task: str, node_id: str):
        with state.write_lock:
            graph = get_graph(task)
            graph = upvote(graph, node_id)
            state.publish_graph(graph)
        node = graph.node(node_id)
        return _json({"nodeId": node_id, "votes": node.votes})

    @app.post("/sessions/events")
    async def record_events(request: Request):
        payload = (await request.body()).decode("utf-8")
        lines = [line for line in payload.splitlines() if line.strip()]
        # Validate eagerly so the recorder learns about bad lines immediately.
        sequences = parse_session_log(lines)
        canonical = [
            event_to_line(seq, event) for seq in sequences for event in seq.events
        ]
        with state.write_lock:
            state.recorded_events.extend(canonical)
            if state.session_log_path is not None:
                with state.session_log_path.open("a", encoding="utf-8") as sink:
                    sink.write("".join(line + "\n" for line in canonical))
        return _json({"recorded": len(canonical)})

    return app
