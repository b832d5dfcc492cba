from __future__ import annotations

import pytest

import fig_fixture as fig
from dataslicer.errors import FormatError, InvalidSpec
from dataslicer.spec import (
    AbstractSpec,
    Comparator,
    DataSpecification,
    FilterPredicate,
    canonicalize,
    embed_spec,
    spec_from_document,
    spec_to_document,
    visual_from_document,
    visual_to_document,
)


def test_canonicalize_reduces_filters_to_descriptors():
    # Central-America bounds: two latitude and two longitude predicates
    # collapse to one descriptor each.
    abstract = canonicalize(fig.FIG1B_BOUNDED)
    assert [f.render() for f in abstract.filter_descriptors] == ["latitude", "longitude"]
    assert [f.render() for f in abstract.layers] == [
        "AVG(depth)", "AVG(magnitude)", "SUM(number of records)"
    ]
    assert abstract.grouping == (fig.PLACE,)


def test_canonicalize_empty_spec():
    assert canonicalize(DataSpecification()) == AbstractSpec()


def test_canonicalize_deduplicates_aggregated_descriptor():
    spec = DataSpecification(
        filters=(
            FilterPredicate(fig.AVG_MAG, Comparator.GT, (7.0,)),
            FilterPredicate(fig.AVG_MAG, Comparator.LT, (9.0,)),
        )
    )
    assert canonicalize(spec).filter_descriptors == (fig.AVG_MAG,)


def test_canonicalize_order_insensitive_and_idempotent():
    a = DataSpecification(
        x=fig.LON, y=fig.LAT,
        layers=(fig.AVG_MAG, fig.SUM_NR),
        grouping=(fig.PLACE, fig.TIME),
    )
    b = DataSpecification(
        x=fig.LON, y=fig.LAT,
        layers=(fig.SUM_NR, fig.AVG_MAG),
        grouping=(fig.TIME, fig.PLACE),
    )
    assert canonicalize(a) == canonicalize(b)
    assert canonicalize(embed_spec(canonicalize(a))) == canonicalize(a)


def test_axes_must_differ():
    with pytest.raises(InvalidSpec):
        DataSpecification(x=fig.LON, y=fig.LON)


def test_duplicate_layers_rejected():
    with pytest.raises(InvalidSpec):
        DataSpecification(layers=(fig.MAG, fig.MAG))


def test_predicate_arity():
    with pytest.raises(InvalidSpec):
        FilterPredicate(fig.MAG, Comparator.BETWEEN, (1.0,))
    with pytest.raises(InvalidSpec):
        FilterPredicate(fig.MAG, Comparator.IN, ())
    with pytest.raises(InvalidSpec):
        FilterPredicate(fig.MAG, Comparator.LT, (1.0, 2.0))
    FilterPredicate(fig.MAG, Comparator.BETWEEN, (1.0, 2.0))
    FilterPredicate(fig.MAG, Comparator.IN, ("a", "b", "c"))


def test_aggregated_flag_follows_field():
    assert FilterPredicate(fig.AVG_MAG, Comparator.GT, (7.0,)).aggregated
    assert not FilterPredicate(fig.MAG, Comparator.GT, (6.0,)).aggregated


def test_placeholder_predicates():
    p = FilterPredicate(fig.MAG)
    assert p.is_placeholder
    with pytest.raises(InvalidSpec):
        FilterPredicate(fig.MAG, operands=(1,))


def test_spec_document_roundtrip():
    doc = spec_to_document(fig.FIG1B_BOUNDED)
    assert spec_from_document(doc) == fig.FIG1B_BOUNDED
    assert doc["x"] == "longitude"
    assert doc["layers"][0] == "AVG(magnitude)"


def test_spec_document_rejects_bad_aggregated_flag():
    doc = spec_to_document(fig.D9)
    doc["filters"][0]["aggregated"] = not doc["filters"][0]["aggregated"]
    with pytest.raises(FormatError):
        spec_from_document(doc)


def test_visual_document_roundtrip():
    doc = visual_to_document(fig.MAP_VISUAL)
    assert visual_from_document(doc) == fig.MAP_VISUAL
    assert visual_from_document(None).chart_type == "table"
