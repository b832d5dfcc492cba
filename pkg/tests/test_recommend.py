from __future__ import annotations

import pytest

import fig_fixture as fig
from dataslicer.errors import EmptyGraph, UnknownNode
from dataslicer.graph import DataSliceGraph, SliceNode, save_graph
from dataslicer.recommend import (
    choose_visual_spec,
    contextualize,
    recommend,
    upvote,
)
from dataslicer.spec import (
    AbstractSpec,
    DataSpecification,
    VisualSpec,
    canonicalize,
)


def test_contextualize_copies_current_bounds():
    node_spec = AbstractSpec(
        x=fig.LON, y=fig.LAT,
        filter_descriptors=(fig.LAT, fig.LON), grouping=(fig.PLACE,),
    )
    concrete = contextualize(node_spec, fig.FIG1B_BOUNDED)
    assert set(concrete.filters) == set(fig.CENTRAL_AMERICA)
    assert not any(p.is_placeholder for p in concrete.filters)
    assert canonicalize(concrete) == node_spec


def test_contextualize_without_descriptors_ignores_current_filters():
    node_spec = canonicalize(fig.FIG1C)
    concrete = contextualize(node_spec, fig.FIG1B_BOUNDED)
    assert concrete.filters == ()
    assert canonicalize(concrete) == node_spec


def test_contextualize_emits_flagged_placeholder():
    node_spec = AbstractSpec(filter_descriptors=(fig.AVG_MAG,))
    concrete = contextualize(node_spec, fig.FIG1B_BOUNDED)
    assert len(concrete.filters) == 1
    assert concrete.filters[0].is_placeholder
    assert concrete.filters[0].field == fig.AVG_MAG
    assert canonicalize(concrete) == node_spec


def _node(spec, visuals=(), index=0):
    abstract = canonicalize(spec) if isinstance(spec, DataSpecification) else spec
    return SliceNode(
        node_id=abstract.node_id(), display_index=index, spec=abstract,
        visual_specs=tuple(visuals),
    )


def test_choose_visual_reuses_covering_user_pref(fig3_graph):
    node = fig3_graph.nodes[fig.NODE_IDS["9"]]
    chosen = choose_visual_spec(_node(node.spec), user_pref=fig.MAP_VISUAL)
    assert chosen == fig.MAP_VISUAL


def test_choose_visual_rule_table(quake_schema):
    box = _node(DataSpecification(layers=(fig.AVG_MAG,)))
    assert choose_visual_spec(box, schema=quake_schema).chart_type == "box-plot"
    geo = _node(DataSpecification(x=fig.LON, y=fig.LAT, grouping=(fig.PLACE,)))
    assert choose_visual_spec(geo, schema=quake_schema).chart_type == "map-scatter"
    line = _node(DataSpecification(x=fig.TIME, layers=(fig.AVG_MAG,)))
    assert choose_visual_spec(line, schema=quake_schema).chart_type == "line"
    bar = _node(DataSpecification(x=fig.PLACE, layers=(fig.AVG_MAG,)))
    assert choose_visual_spec(bar, schema=quake_schema).chart_type == "bar"
    fallback = _node(DataSpecification(x=fig.PLACE, y=fig.MAG))
    assert choose_visual_spec(fallback, schema=quake_schema).chart_type == "table"


def test_choose_visual_stored_beats_incompatible_pref():
    stored = VisualSpec(chart_type="bar", encodings=((fig.AVG_MAG, "height"),))
    node = _node(DataSpecification(layers=(fig.AVG_MAG,)), visuals=(stored,))
    incompatible = VisualSpec(chart_type="line", encodings=((fig.SUM_NR, "y"),))
    assert choose_visual_spec(node, user_pref=incompatible) == stored


def test_upvote_raises_effective_interestingness(fig3_graph):
    nid = fig.NODE_IDS["24"]
    voted = upvote(fig3_graph, nid)
    assert voted.nodes[nid].votes == 1
    base = fig3_graph.nodes[nid].interestingness_ms
    assert voted.nodes[nid].effective_interestingness(3000) == base + 3000
    # One vote on a zero-dwell node meets the threshold but strictness keeps
    # it out; the second vote lets it in.
    assert upvote(voted, nid).nodes[nid].votes == 2
    assert fig3_graph.nodes[nid].votes == 0  # original untouched


def test_upvote_unknown_node(fig3_graph):
    with pytest.raises(UnknownNode):
        upvote(fig3_graph, "beefbeefbeefbeef")


def test_recommend_fig3_golden(fig3_graph, quake_schema):
    recs = recommend(fig3_graph, fig.FIG1B_BOUNDED, user_pref=fig.MAP_VISUAL,
                     m=2, threshold_ms=3000, schema=quake_schema)
    assert [r.node.node_id for r in recs] == [fig.NODE_IDS["23"], fig.NODE_IDS["9"]]
    assert [r.node.path_distance for r in recs] == [0.0, 1.0]
    for rec in recs:
        assert canonicalize(rec.concrete_spec) == fig3_graph.nodes[rec.node.node_id].spec
    # Node 23 carries magnitude and place context; the magnitude filter has no
    # counterpart in the current session, so it surfaces as a placeholder.
    assert recs[0].placeholder_filters == (fig.MAG,)
    assert "FROM Earthquakes" in recs[0].sql_template
    assert recs[0].visual == fig.MAP_VISUAL


def test_recommend_self_when_only_interesting(fig3_graph):
    recs = recommend(fig3_graph, fig.D24, m=1, threshold_ms=700)
    assert recs[0].node.node_id == fig.NODE_IDS["24"]
    assert recs[0].node.path_distance == 0.0


def test_recommend_empty_graph():
    with pytest.raises(EmptyGraph):
        recommend(DataSliceGraph.empty(fig.TASK), fig.FIG1B, m=2)


def test_recommend_is_pure(fig3_graph):
    before = save_graph(fig3_graph)
    recommend(fig3_graph, fig.FIG1B, m=2, threshold_ms=3000)
    assert save_graph(fig3_graph) == before


def test_recommend_deterministic(fig3_graph, quake_schema):
    kwargs = dict(m=2, threshold_ms=3000, schema=quake_schema)
    a = recommend(fig3_graph, fig.FIG1B_BOUNDED, **kwargs)
    b = recommend(fig3_graph, fig.FIG1B_BOUNDED, **kwargs)
    assert a == b


def test_recommend_flags_visited(fig3_graph):
    recs = recommend(fig3_graph, fig.FIG1B, m=2, threshold_ms=3000,
                     visited={fig.NODE_IDS["23"]})
    flags = {r.node.node_id: r.already_visited for r in recs}
    assert flags[fig.NODE_IDS["23"]] is True
    assert flags[fig.NODE_IDS["9"]] is False
