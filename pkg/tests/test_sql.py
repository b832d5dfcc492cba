from __future__ import annotations

import pytest

import fig_fixture as fig
from dataslicer.errors import UnresolvedField
from dataslicer.spec import Comparator, DataSpecification, FilterPredicate
from dataslicer.sql import to_sql_template

GOLDEN = (
    "SELECT latitude, longitude, AVG(magnitude), SUM(\"number of records\"), AVG(depth) "
    "FROM Earthquakes "
    "WHERE latitude < 49.5 AND latitude > 5.3 AND longitude < -24.5 AND longitude > -128.7 "
    "GROUP BY place"
)


def test_central_america_query_text(quake_schema):
    assert to_sql_template(fig.FIG1B_BOUNDED, quake_schema) == GOLDEN


def test_minimal_clause_set():
    spec = DataSpecification(layers=(fig.MAG,))
    assert to_sql_template(spec) == "SELECT magnitude FROM <table>"


def test_aggregated_filter_goes_to_having(quake_schema):
    spec = DataSpecification(
        layers=(fig.AVG_MAG,),
        filters=(FilterPredicate(fig.AVG_MAG, Comparator.GT, (7.0,)),),
        grouping=(fig.PLACE,),
    )
    sql = to_sql_template(spec, quake_schema)
    assert "WHERE" not in sql
    assert sql.endswith("GROUP BY place HAVING AVG(magnitude) > 7.0")


def test_axis_dimensions_ground_group_by_when_no_grouping():
    spec = DataSpecification(x=fig.PLACE, layers=(fig.AVG_MAG,))
    assert to_sql_template(spec) == "SELECT place, AVG(magnitude) FROM <table> GROUP BY place"


def test_placeholder_filters_are_unconstrained():
    spec = DataSpecification(layers=(fig.MAG,), filters=(FilterPredicate(fig.DEPTH),))
    assert to_sql_template(spec) == "SELECT magnitude FROM <table>"


def test_in_and_between_rendering():
    spec = DataSpecification(
        layers=(fig.MAG,),
        filters=(
            FilterPredicate(fig.PLACE, Comparator.IN, ("Guadeloupe", "Martinique")),
            FilterPredicate(fig.DEPTH, Comparator.BETWEEN, (0.0, 70.0)),
        ),
    )
    sql = to_sql_template(spec)
    assert "depth BETWEEN 0.0 AND 70.0" in sql
    assert "place IN ('Guadeloupe', 'Martinique')" in sql


def test_unresolved_field(quake_schema):
    ok = DataSpecification(layers=(fig.MAG, fig.SUM_NR, fig.AVG_DEPTH),
                           grouping=(fig.PLACE,))
    to_sql_template(ok, quake_schema)
    bogus = DataSpecification(
        layers=(fig.MAG,),
        filters=(FilterPredicate(fig.parse_field("bogus"), Comparator.EQ, (1,)),),
    )
    with pytest.raises(UnresolvedField):
        to_sql_template(bogus, quake_schema)


def test_deterministic_for_equal_specs(quake_schema):
    again = DataSpecification(
        x=fig.LON, y=fig.LAT, layers=(fig.AVG_MAG, fig.SUM_NR, fig.AVG_DEPTH),
        filters=tuple(reversed(fig.CENTRAL_AMERICA)), grouping=(fig.PLACE,),
    )
    assert to_sql_template(again, quake_schema) == GOLDEN


def test_injective_up_to_axis_slot(quake_schema):
    # Distinct canonical specs (beyond x/y slot assignment) give distinct SQL.
    a = DataSpecification(x=fig.PLACE, layers=(fig.AVG_MAG,))
    b = DataSpecification(x=fig.PLACE, layers=(fig.AVG_MAG,), grouping=(fig.TIME,))
    c = DataSpecification(x=fig.PLACE, layers=(fig.SUM_NR,))
    texts = {to_sql_template(s, quake_schema) for s in (a, b, c)}
    assert len(texts) == 3
