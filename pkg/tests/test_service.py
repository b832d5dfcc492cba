from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

import fig_fixture as fig
from dataslicer.service import AppState, create_app
from dataslicer.spec import spec_to_document

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture()
def client(tmp_path):
    state = AppState(session_log_path=tmp_path / "recorded.jsonl")
    return TestClient(create_app(state)), state


def _upload_dataset(http):
    schema = (FIXTURES / "earthquakes_small.schema.json").read_text()
    csv_bytes = (FIXTURES / "earthquakes_small.csv").read_bytes()
    return http.post(
        "/datasets",
        files={"csv": ("earthquakes.csv", csv_bytes, "text/csv")},
        data={"schema": schema},
    )


def _ingest_fig3(http):
    payload = "\n".join(fig.expert_log_lines())
    return http.post(f"/graphs/{fig.TASK}/sequences", content=payload)


def test_full_flow(client):
    http, _ = client
    response = _upload_dataset(http)
    assert response.status_code == 200
    assert response.json() == {"name": "Earthquakes", "rowCount": 9}

    response = _ingest_fig3(http)
    assert response.status_code == 200
    body = response.json()
    assert (body["nodes"], body["edges"], body["sequences"]) == (6, 7, 1)

    response = http.get(f"/graphs/{fig.TASK}")
    assert response.status_code == 200
    doc = response.json()
    assert len(doc["nodes"]) == 6 and len(doc["edges"]) == 7

    response = http.post(
        f"/graphs/{fig.TASK}/match",
        json={"spec": spec_to_document(fig.FIG1B), "M": 2},
    )
    assert response.status_code == 200
    matched = response.json()
    assert matched["minDistance"] == 4
    assert {n["nodeId"] for n in matched["nodes"]} == {
        fig.NODE_IDS["8"], fig.NODE_IDS["23"]
    }

    response = http.post(
        f"/graphs/{fig.TASK}/recommend",
        json={
            "spec": spec_to_document(fig.FIG1B_BOUNDED),
            "dataset": "Earthquakes",
            "M": 2,
            "T": 3000,
        },
    )
    assert response.status_code == 200
    body = response.json()
    assert body["mode"] == "prediction"
    recs = body["recommendations"]
    assert [r["node"]["nodeId"] for r in recs] == [
        fig.NODE_IDS["23"], fig.NODE_IDS["9"]
    ]
    assert recs[0]["node"]["pathDistance"] == 0.0
    assert "FROM Earthquakes" in recs[0]["sqlTemplate"]

    response = http.post(
        "/datasets/Earthquakes/evaluate",
        json={"spec": spec_to_document(fig.FIG1C)},
    )
    assert response.status_code == 200
    table = response.json()
    assert [c["label"] for c in table["columns"]] == [
        "place", "latitude", "longitude", "AVG(magnitude)"
    ]

    response = http.post(
        f"/graphs/{fig.TASK}/nodes/{fig.NODE_IDS['24']}/upvote"
    )
    assert response.status_code == 200
    assert response.json() == {"nodeId": fig.NODE_IDS["24"], "votes": 1}


def test_error_statuses(client):
    http, _ = client
    assert http.get("/graphs/absent").status_code == 404
    assert http.post("/datasets/absent/evaluate", json={"spec": {}}).status_code == 404

    _ingest_fig3(http)
    bad_spec = http.post(
        f"/graphs/{fig.TASK}/match", json={"spec": {"x": "(("}, "M": 1}
    )
    assert bad_spec.status_code == 400
    assert bad_spec.json()["code"] == "format"

    unknown_node = http.post(f"/graphs/{fig.TASK}/nodes/ffffffffffffffff/upvote")
    assert unknown_node.status_code == 404

    lines = fig.expert_log_lines()
    mismatch = http.post("/graphs/other-task/sequences", content="\n".join(lines))
    assert mismatch.status_code == 409
    assert mismatch.json()["code"] == "task_mismatch"

    malformed = http.post(f"/graphs/{fig.TASK}/sequences", content="{broken")
    assert malformed.status_code == 400


def test_recorder_appends_canonical_lines(client, tmp_path):
    http, state = client
    payload = "\n".join(fig.expert_log_lines()[:3])
    response = http.post("/sessions/events", content=payload)
    assert response.status_code == 200
    assert response.json() == {"recorded": 3}
    recorded = state.session_log_path.read_text().strip().splitlines()
    assert len(recorded) == 3
    assert json.loads(recorded[0])["taskType"] == fig.TASK


def test_graph_persists_to_file(tmp_path):
    from dataslicer.graph import build_graph, load_graph, save_graph

    path = tmp_path / "task1.graph.json"
    path.write_text(save_graph(build_graph([], fig.TASK)))
    state = AppState()
    state.load_graph_file(path)
    http = TestClient(create_app(state))
    assert _ingest_fig3(http).status_code == 200
    persisted = load_graph(path.read_text())
    assert len(persisted.nodes) == 6
    http.post(f"/graphs/{fig.TASK}/nodes/{fig.NODE_IDS['24']}/upvote")
    assert load_graph(path.read_text()).nodes[fig.NODE_IDS["24"]].votes == 1
