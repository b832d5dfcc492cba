from __future__ import annotations

import itertools
import json

import pytest

import fig_fixture as fig
from dataslicer.errors import FormatError, TaskMismatch
from dataslicer.graph import (
    build_graph,
    load_graph,
    merge_sequence,
    normalize_sequence,
    save_graph,
)
from dataslicer.navops import diff_ops
from dataslicer.sessions import Role, SessionEvent, SessionSequence
from dataslicer.spec import VisualSpec, canonicalize


def _sequence(specs, dwells=None, role=Role.EXPERT, session_id="s1", task=fig.TASK):
    dwells = dwells or [0] * len(specs)
    events = tuple(
        SessionEvent(spec=s, visual=VisualSpec(), dwell_ms=d, timestamp_ms=i)
        for i, (s, d) in enumerate(zip(specs, dwells))
    )
    return SessionSequence(session_id=session_id, role=role, task_type=task, events=events)


def test_normalize_fig3_sequence_unchanged():
    seq = fig.expert_sequence()
    assert normalize_sequence(seq) == seq


def test_normalize_inserts_intermediates():
    seq = _sequence([fig.D8, fig.FIG1B])
    ops = diff_ops(fig.D8, fig.FIG1B)
    assert len(ops) > 1
    norm = normalize_sequence(seq)
    assert len(norm.events) == len(ops) + 1
    for a, b in zip(norm.events, norm.events[1:]):
        assert len(diff_ops(a.spec, b.spec)) == 1
    assert canonicalize(norm.events[0].spec) == canonicalize(fig.D8)
    assert canonicalize(norm.events[-1].spec) == canonicalize(fig.FIG1B)
    inserted = norm.events[1:-1]
    assert all(e.dwell_ms == 0 for e in inserted)
    assert all(e.visual == norm.events[0].visual for e in inserted)


def test_normalize_single_event():
    seq = _sequence([fig.D8])
    assert normalize_sequence(seq) == seq


def test_normalize_collapses_repeats_and_accumulates_dwell():
    seq = _sequence([fig.D8, fig.D8, fig.D9], dwells=[1000, 2500, 100])
    norm = normalize_sequence(seq)
    assert len(norm.events) == 2
    assert norm.events[0].dwell_ms == 3500


def test_merge_fig3_sequence_into_empty_graph(fig3_graph):
    assert len(fig3_graph.nodes) == 6
    assert len(fig3_graph.edges) == 7
    assert set(fig3_graph.nodes) == set(fig.NODE_IDS.values())
    assert all(e.expert_count == 1 and e.user_count == 0
               for e in fig3_graph.edges.values())
    ids = fig.NODE_IDS
    assert set(fig3_graph.edges) == {
        (ids["8"], ids["9"]), (ids["9"], ids["23"]), (ids["23"], ids["24"]),
        (ids["24"], ids["23"]), (ids["23"], ids["8"]), (ids["8"], ids["13"]),
        (ids["13"], ids["14"]),
    }
    # Opposite directions are distinct edges.
    assert (ids["23"], ids["24"]) in fig3_graph.edges
    assert (ids["24"], ids["23"]) in fig3_graph.edges


def test_merge_same_sequence_twice_doubles_counts(fig3_graph):
    twice = merge_sequence(fig3_graph, fig.expert_sequence("expert-2"))
    assert set(twice.nodes) == set(fig3_graph.nodes)
    assert all(e.expert_count == 2 for e in twice.edges.values())


def test_merge_sequences_sharing_one_node():
    other = _sequence([fig.D8, fig.D13], session_id="s2", role=Role.REGULAR)
    graph = build_graph([fig.expert_sequence(), other], fig.TASK)
    assert len(graph.nodes) == 6
    edge = graph.edges[(fig.NODE_IDS["8"], fig.NODE_IDS["13"])]
    assert (edge.expert_count, edge.user_count) == (1, 1)


def test_interestingness_keeps_maximum(fig3_graph):
    node = fig3_graph.nodes[fig.NODE_IDS["23"]]
    assert node.interestingness_ms == 5000  # max(5000, 700)
    node8 = fig3_graph.nodes[fig.NODE_IDS["8"]]
    assert node8.interestingness_ms == 1500  # max(1000, 1500)


def test_interestingness_monotone_under_merge(fig3_graph):
    richer = merge_sequence(
        fig3_graph,
        _sequence([fig.D24], dwells=[9000], session_id="s3", role=Role.REGULAR),
    )
    for nid, node in fig3_graph.nodes.items():
        assert richer.nodes[nid].interestingness_ms >= node.interestingness_ms


def test_task_mismatch_rejected(fig3_graph):
    with pytest.raises(TaskMismatch):
        merge_sequence(fig3_graph, _sequence([fig.D8], task="other-task"))


def test_edge_single_op_property(fig3_graph):
    from dataslicer.navops import apply_nav_op
    from dataslicer.spec import embed_spec

    for (u, v), edge in fig3_graph.edges.items():
        assert edge.nav_op is not None
        embedded = embed_spec(fig3_graph.nodes[u].spec)
        stepped = apply_nav_op(embedded, edge.nav_op)
        assert canonicalize(stepped) == fig3_graph.nodes[v].spec


def test_build_graph_empty():
    graph = build_graph([], fig.TASK)
    assert graph.nodes == {} and graph.edges == {}
    assert save_graph(graph) == save_graph(build_graph([], fig.TASK))


def test_build_graph_permutation_invariance_small():
    sequences = [
        fig.expert_sequence("e1"),
        _sequence([fig.D8, fig.D13, fig.D14], session_id="u1", role=Role.REGULAR),
        _sequence([fig.FIG1B, fig.FIG1C], session_id="u2", role=Role.REGULAR),
    ]
    baseline = save_graph(build_graph(sequences, fig.TASK))
    for perm in itertools.permutations(sequences):
        assert save_graph(build_graph(list(perm), fig.TASK)) == baseline


def test_save_load_roundtrip(fig3_graph):
    text = save_graph(fig3_graph)
    loaded = load_graph(text)
    assert loaded == fig3_graph
    assert save_graph(loaded) == text


def test_load_rejects_dangling_edge(fig3_graph):
    doc = json.loads(save_graph(fig3_graph))
    doc["edges"][0]["from"] = "feedfacedeadbeef"
    with pytest.raises(FormatError) as err:
        load_graph(json.dumps(doc))
    assert "dangling" in str(err.value)


def test_load_rejects_wrong_hash(fig3_graph):
    doc = json.loads(save_graph(fig3_graph))
    doc["nodes"][0]["nodeId"] = "0" * 16
    with pytest.raises(FormatError):
        load_graph(json.dumps(doc))


def test_display_indices_follow_canonical_order(fig3_graph):
    ordered = fig3_graph.sorted_nodes()
    assert [n.display_index for n in ordered] == list(range(len(ordered)))
