import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynmis.graph import DynamicGraph, GraphUpdateError, Kind, UpdateEvent, as_mask, delete, insert

from conftest import graph_of


def test_new_graph_is_empty():
    g = DynamicGraph(4)
    assert g.n == 4 and g.m == 0
    assert all(not a for a in g.adj)
    assert DynamicGraph(1).n == 1


def test_zero_vertices_rejected():
    with pytest.raises(ValueError):
        DynamicGraph(0)


def test_insert_then_delete():
    g = DynamicGraph(4)
    g.apply(insert(0, 1))
    assert g.m == 1 and g.adj[0] == {1} and g.adj[1] == {0}
    assert g.nonisolated == {0, 1}
    g.apply(delete(0, 1))
    assert g.m == 0 and not g.nonisolated


@pytest.mark.parametrize("ev", [
    delete(0, 1), UpdateEvent(Kind.INSERT, 0, 0), UpdateEvent(Kind.INSERT, 0, 9),
])
def test_bad_updates_raise(ev):
    g = DynamicGraph(4)
    with pytest.raises(GraphUpdateError):
        g.apply(ev)


def test_event_constructor_rejects_self_loop():
    with pytest.raises(GraphUpdateError):
        insert(2, 2)


def test_duplicate_insert_raises():
    g = graph_of(3, [(0, 1)])
    with pytest.raises(GraphUpdateError):
        g.apply(insert(0, 1))


def test_event_normalises_endpoints():
    ev = insert(3, 1)
    assert (ev.u, ev.v) == (1, 3) and ev.kind is Kind.INSERT
    assert isinstance(ev, UpdateEvent) and ev.is_insert
    assert not delete(1, 3).is_insert


def test_induced_degree(triangle):
    assert triangle.induced_degree(0) == 2
    assert triangle.induced_degree(0, lambda w: w == 1) == 1
    assert triangle.induced_degree(0, lambda w: False) == 0


def test_as_mask_forms():
    assert as_mask(3, None) == bytearray(b"\x01\x01\x01")
    assert as_mask(3, {2}) == bytearray(b"\x00\x00\x01")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=60))
def test_degrees_track_a_reference_edge_set(pairs):
    g = DynamicGraph(8)
    ref = set()
    for a, b in pairs:
        if a == b:
            continue
        e = (min(a, b), max(a, b))
        if e in ref:
            ref.remove(e)
            g.apply(delete(*e))
        else:
            ref.add(e)
            g.apply(insert(*e))
    assert g.m == len(ref)
    assert sorted(g.edges()) == sorted(ref)
    for v in range(8):
        assert g.degree(v) == sum(v in e for e in ref)
    assert g.nonisolated == {v for e in ref for v in e}
    assert g.max_degree() == max((g.degree(v) for v in range(8)), default=0)
