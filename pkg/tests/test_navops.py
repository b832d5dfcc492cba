from __future__ import annotations

import random

import pytest

import fig_fixture as fig
from dataslicer.errors import InapplicableOp
from dataslicer.fields import parse_field
from dataslicer.navops import (
    NavOp,
    NavOpKind,
    Slot,
    apply_nav_op,
    diff_ops,
    invert,
    nav_op_from_document,
    nav_op_to_document,
)
from dataslicer.spec import (
    Comparator,
    DataSpecification,
    FilterPredicate,
    canonicalize,
)


def test_add_filter_is_the_d8_to_d9_step():
    op = NavOp(NavOpKind.ADD_FILTER, field=fig.MAG,
               predicate=FilterPredicate(fig.MAG, Comparator.GT, (6.0,)))
    result = apply_nav_op(fig.D8, op)
    assert canonicalize(result) == canonicalize(fig.D9)
    assert fig.MAG in canonicalize(result).filter_descriptors


def test_remove_layer_from_fig1b():
    op = NavOp(NavOpKind.REMOVE_SELECT_FIELD, field=fig.AVG_DEPTH, slot=Slot.LAYER)
    result = apply_nav_op(fig.FIG1B, op)
    assert result.layers == (fig.AVG_MAG, fig.SUM_NR)
    assert (result.x, result.y, result.grouping) == (fig.LON, fig.LAT, (fig.PLACE,))


def test_group_field_inverse_pair():
    op = NavOp(NavOpKind.ADD_GROUP_FIELD, field=fig.TIME)
    assert apply_nav_op(apply_nav_op(fig.D8, op), invert(op)) == fig.D8


def test_every_kind_has_exact_inverse():
    ops = [
        NavOp(NavOpKind.ADD_FILTER, field=fig.DEPTH),
        NavOp(NavOpKind.ADD_SELECT_FIELD, field=fig.DEPTH, slot=Slot.LAYER),
        NavOp(NavOpKind.ADD_GROUP_FIELD, field=fig.TIME),
        NavOp(NavOpKind.ADD_COMPLEX_OP, field=fig.MAG, slot=Slot.FILTER,
              after=fig.AVG_MAG),
    ]
    for op in ops:
        spec = fig.D23
        assert apply_nav_op(apply_nav_op(spec, op), invert(op)) == spec


def test_inapplicable_operations():
    with pytest.raises(InapplicableOp):
        apply_nav_op(fig.D8, NavOp(NavOpKind.REMOVE_SELECT_FIELD, field=fig.MAG, slot=Slot.LAYER))
    with pytest.raises(InapplicableOp):
        apply_nav_op(fig.D8, NavOp(NavOpKind.ADD_SELECT_FIELD, field=fig.MAG, slot=Slot.X))
    with pytest.raises(InapplicableOp):
        apply_nav_op(fig.D8, NavOp(NavOpKind.ADD_GROUP_FIELD, field=fig.PLACE))
    with pytest.raises(InapplicableOp):
        apply_nav_op(fig.D8, NavOp(NavOpKind.REMOVE_FILTER, field=fig.DEPTH))


def test_untouched_parts_preserved():
    op = NavOp(NavOpKind.ADD_SELECT_FIELD, field=fig.DEPTH, slot=Slot.LAYER)
    result = apply_nav_op(fig.D23, op)
    assert (result.x, result.y) == (fig.D23.x, fig.D23.y)
    assert result.filters == fig.D23.filters
    assert result.grouping == fig.D23.grouping
    assert result.layers == (fig.DEPTH,)


def test_complex_edit_requires_single_operator_step():
    with pytest.raises(InapplicableOp):
        NavOp(NavOpKind.ADD_COMPLEX_OP, field=fig.MAG, slot=Slot.FILTER,
              after=parse_field("AVG(SUM(magnitude))"))


def test_diff_fig1b_to_fig1c_exact_order():
    ops = diff_ops(fig.FIG1B, fig.FIG1C)
    assert [op.kind for op in ops] == [NavOpKind.REMOVE_SELECT_FIELD] * 2
    assert [op.field for op in ops] == [fig.AVG_DEPTH, fig.SUM_NR]
    assert all(op.slot is Slot.LAYER for op in ops)


def test_diff_identity_is_empty():
    assert diff_ops(fig.FIG1B, fig.FIG1B) == []


def test_diff_pairs_single_field_wrap_as_one_edit():
    ops = diff_ops(fig.D23, fig.D8)
    assert len(ops) == 1
    assert ops[0].kind is NavOpKind.ADD_COMPLEX_OP
    assert (ops[0].field, ops[0].after) == (fig.MAG, fig.AVG_MAG)
    back = diff_ops(fig.D8, fig.D23)
    assert len(back) == 1 and back[0].kind is NavOpKind.REMOVE_COMPLEX_OP


def _random_spec(rng: random.Random) -> DataSpecification:
    pool = [fig.LON, fig.LAT, fig.MAG, fig.DEPTH, fig.AVG_MAG, fig.SUM_NR]
    rng.shuffle(pool)
    x = pool[0] if rng.random() < 0.7 else None
    y = pool[1] if x is not None and rng.random() < 0.7 else None
    layers = tuple(pool[2 : 2 + rng.randrange(3)])
    n_filters = rng.randrange(3)
    filters = tuple(
        FilterPredicate(f, Comparator.GT, (float(i),))
        for i, f in enumerate(rng.sample(pool, n_filters))
    )
    grouping = tuple(rng.sample([fig.PLACE, fig.TIME], rng.randrange(3)))
    return DataSpecification(x=x, y=y, layers=layers, filters=filters, grouping=grouping)


def test_diff_replay_oracle_random_pairs():
    rng = random.Random(1138)
    for _ in range(300):
        a, b = _random_spec(rng), _random_spec(rng)
        spec = a
        for op in diff_ops(a, b):
            spec = apply_nav_op(spec, op)
        assert canonicalize(spec) == canonicalize(b)


def test_diff_symmetry_and_reversed_inverses():
    rng = random.Random(93)
    for _ in range(200):
        a, b = _random_spec(rng), _random_spec(rng)
        forward = diff_ops(a, b)
        backward = diff_ops(b, a)
        assert len(forward) == len(backward)
        assert [invert(op) for op in reversed(forward)] == backward


def test_nav_op_document_roundtrip():
    ops = [
        NavOp(NavOpKind.ADD_FILTER, field=fig.MAG,
              predicate=FilterPredicate(fig.MAG, Comparator.GT, (6.0,))),
        NavOp(NavOpKind.REMOVE_SELECT_FIELD, field=fig.AVG_DEPTH, slot=Slot.LAYER),
        NavOp(NavOpKind.ADD_COMPLEX_OP, field=fig.MAG, slot=Slot.FILTER, after=fig.AVG_MAG),
    ]
    for op in ops:
        assert nav_op_from_document(nav_op_to_document(op)) == op
