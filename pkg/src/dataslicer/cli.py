"""Batch command line mirroring the service.

Subcommands: build-graph, match, recommend, eval, serve. Machine-readable
JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 usage
error, 2 data error. DATASLICER_T overrides the default interestingness
threshold.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import transport
from .dataset import load_dataset, result_table_to_document, schema_from_document
from .engine import evaluate
from .errors import DataSlicerError, FormatError
from .graph import build_graph, load_graph, save_graph
from .matcher import match_data_slices
from .recommend import recommend
from .sessions import parse_session_log
from .spec import spec_from_document
from .sql import to_sql_template

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _default_threshold() -> int:
    return int(os.environ.get("DATASLICER_T", "3000"))


def _read_json(path: str, what: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg} (line {exc.lineno})", path) from None
    except OSError as exc:
        raise FormatError(str(exc), path) from None


def _load_graph_file(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(str(exc), path) from None
    return load_graph(text)


def _load_dataset_files(data_path: str, schema_path: str):
    schema = schema_from_document(_read_json(schema_path, "schema"), schema_path)
    try:
        with open(data_path, encoding="utf-8", newline="") as handle:
            return load_dataset(handle, schema)
    except OSError as exc:
        raise FormatError(str(exc), data_path) from None


def _emit(doc) -> None:
    sys.stdout.write(transport.to_json(doc) + "\n")


def _cmd_build_graph(args) -> int:
    try:
        with open(args.log, encoding="utf-8") as handle:
            sequences = parse_session_log(handle)
    except OSError as exc:
        raise FormatError(str(exc), args.log) from None
    graph = build_graph((s for s in sequences if s.task_type == args.task), args.task)
    skipped = sum(1 for s in sequences if s.task_type != args.task)
    Path(args.out).write_text(save_graph(graph), encoding="utf-8")
    if skipped:
        print(f"skipped {skipped} sequence(s) of other task types", file=sys.stderr)
    _emit({
        "taskType": args.task,
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "sequences": len(graph.meta.sessions),
        "out": args.out,
    })
    return 0


def _cmd_match(args) -> int:
    graph = _load_graph_file(args.graph)
    spec = spec_from_document(_read_json(args.spec, "spec"), args.spec)
    result = match_data_slices(graph, spec, args.M)
    _emit(transport.match_result_to_document(result))
    return 0


def _cmd_recommend(args) -> int:
    graph = _load_graph_file(args.graph)
    spec = spec_from_document(_read_json(args.spec, "spec"), args.spec)
    schema = None
    if args.data and args.schema:
        schema = _load_dataset_files(args.data, args.schema).schema
    elif args.schema:
        schema = schema_from_document(_read_json(args.schema, "schema"), args.schema)
    recs = recommend(
        graph, spec, m=args.M,
        threshold_ms=args.T if args.T is not None else _default_threshold(),
        schema=schema,
    )
    _emit({
        "mode": "prediction" if graph.has_expert_input() else "recommendation",
        "recommendations": [transport.recommendation_to_document(r) for r in recs],
    })
    return 0


def _cmd_eval(args) -> int:
    dataset = _load_dataset_files(args.data, args.schema)
    spec = spec_from_document(_read_json(args.spec, "spec"), args.spec)
    if args.sql_only:
        _emit({"sql": to_sql_template(spec, dataset.schema)})
        return 0
    table = evaluate(dataset, spec)
    _emit(result_table_to_document(table))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import AppState, create_app

    state = AppState(session_log_path=Path(args.sessions_log) if args.sessions_log else None)
    state.load_graph_file(Path(args.graph))
    if args.data and args.schema:
        dataset = _load_dataset_files(args.data, args.schema)
        state.datasets[dataset.schema.name] = dataset
    app = create_app(state, ui_dir=Path(args.ui) if args.ui else None)
    print(f"serving on port {args.port}", file=sys.stderr)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dataslicer", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("build-graph", help="build a data-slice graph from a session log")
    p.add_argument("--log", required=True, help="session log (one JSON event per line)")
    p.add_argument("--task", required=True, help="task type to select")
    p.add_argument("--out", required=True, help="output graph file")
    p.set_defaults(func=_cmd_build_graph)

    p = sub.add_parser("match", help="match a spec against a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--spec", required=True, help="spec document (JSON file)")
    p.add_argument("-M", type=int, default=2, help="maximum matched nodes")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("recommend", help="recommend next data slices for a spec")
    p.add_argument("--graph", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--data", help="CSV dataset (enables SQL table naming)")
    p.add_argument("--schema", help="schema sidecar (JSON file)")
    p.add_argument("-M", type=int, default=2)
    p.add_argument("-T", type=int, default=None, help="interestingness threshold (ms)")
    p.set_defaults(func=_cmd_recommend)

    p = sub.add_parser("eval", help="evaluate a spec against a CSV dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--sql-only", action="store_true", help="emit the SQL template only")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8400)
    p.add_argument("--graph", required=True)
    p.add_argument("--data")
    p.add_argument("--schema")
    p.add_argument("--sessions-log", help="append recorded UI events to this file")
    p.add_argument("--ui", help="serve this directory as the web explorer at /ui")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return USAGE_EXIT
    try:
        return args.func(args)
    except DataSlicerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
