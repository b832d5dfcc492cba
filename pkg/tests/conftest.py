from __future__ import annotations

import json
from pathlib import Path

import pytest

import fig_fixture as fig
from dataslicer.dataset import load_dataset, schema_from_document
from dataslicer.graph import build_graph

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def quake_schema():
    doc = json.loads((FIXTURES / "earthquakes_small.schema.json").read_text())
    return schema_from_document(doc)


@pytest.fixture(scope="session")
def quake_dataset(quake_schema):
    with open(FIXTURES / "earthquakes_small.csv", encoding="utf-8", newline="") as f:
        return load_dataset(f, quake_schema)


@pytest.fixture(scope="session")
def fig3_graph():
    return build_graph([fig.expert_sequence()], fig.TASK)


@pytest.fixture()
def fixture_paths():
    return {
        "csv": str(FIXTURES / "earthquakes_small.csv"),
        "schema": str(FIXTURES / "earthquakes_small.schema.json"),
        "spec": str(FIXTURES / "fig1b_spec.json"),
        "log": str(FIXTURES / "fig3_sessions.jsonl"),
    }
