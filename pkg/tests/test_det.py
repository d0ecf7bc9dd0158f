from hypothesis import given, settings
from hypothesis import strategies as st

from dynmis.det import DetAlgorithm, DetMis
from dynmis.graph import DynamicGraph, delete, insert
from dynmis.oracle import verify_mis

from conftest import graph_of, random_toggles


def counts(eng, n):
    return tuple(eng.count[v] for v in range(n))


def test_init_path(path3):
    eng = DetMis.from_graph(path3)
    assert eng.mis() == {0, 2}
    assert counts(eng, 3) == (0, 2, 0)


def test_init_empty_and_triangle(triangle):
    eng = DetMis.from_graph(DynamicGraph(3))
    assert eng.mis() == {0, 1, 2} and counts(eng, 3) == (0, 0, 0)
    eng = DetMis.from_graph(triangle)
    assert eng.mis() == {0} and counts(eng, 3) == (0, 1, 1)


def test_insert_conflict_evicts_larger_id():
    g = DynamicGraph(3)
    eng = DetMis.from_graph(g)
    g.apply(insert(0, 1))
    eng.insert_edge(0, 1)
    assert eng.mis() == {0, 2}
    assert verify_mis(g, eng.mis())


def test_delete_leaves_vertex_blocked(path3):
    eng = DetMis.from_graph(path3)
    path3.apply(delete(0, 1))
    eng.delete_edge(0, 1)
    assert eng.count[1] == 1
    assert eng.mis() == {0, 2}


def test_delete_frees_vertex(triangle):
    eng = DetMis.from_graph(triangle)
    triangle.apply(delete(0, 1))
    eng.delete_edge(0, 1)
    assert eng.mis() == {0, 1}
    assert eng.count[1] == 0 and eng.count[2] == 2
    eng.audit(triangle)


def test_activate_cases():
    g = graph_of(4, [(0, 1), (2, 3)])
    eng = DetMis.from_graph(g, active={1, 2})
    # isolated in the active subgraph
    assert eng.mis() == {1, 2}
    eng.activate(0, [1])
    assert eng.mis() == {1, 2} and eng.count[0] == 1
    eng2 = DetMis.from_graph(graph_of(3, [(0, 1), (0, 2), (1, 2)]), active={1})
    eng2.deactivate(1)
    eng2.activate(1, [])
    assert eng2.mis() == {1}


def test_activate_between_two_non_members():
    g = graph_of(5, [(0, 1), (2, 3), (4, 1), (4, 3)])
    eng = DetMis.from_graph(g, active={0, 1, 2, 3})
    assert not eng.member[1] and not eng.member[3]
    before = eng.count[1], eng.count[3]
    eng.activate(4, [1, 3])
    assert eng.member[4]
    assert (eng.count[1], eng.count[3]) == (before[0] + 1, before[1] + 1)
    eng.audit(g)


def test_deactivate_cases(path3):
    eng = DetMis.from_graph(path3)
    eng.deactivate(1)
    assert eng.mis() == {0, 2}
    eng = DetMis.from_graph(graph_of(3, [(0, 1), (1, 2)]))
    eng.deactivate(0)
    assert eng.count[1] == 1 and eng.mis() == {2}


def test_star_center_removal_cascades():
    star = graph_of(6, [(0, i) for i in range(1, 6)])
    eng = DetMis.from_graph(star)
    assert eng.mis() == {0}
    eng.deactivate(0)
    assert eng.mis() == {1, 2, 3, 4, 5}
    assert all(eng.count[v] == 0 for v in range(1, 6))


def test_work_is_charged():
    algo = DetAlgorithm(16)
    before = algo.meter.work_units
    algo.update(insert(0, 1))
    assert algo.meter.work_units > before


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 10_000))
def test_random_sequences_stay_valid(n, seed):
    algo = DetAlgorithm(n)
    for ev in random_toggles(n, 6 * n, seed):
        algo.update(ev)
        assert verify_mis(algo.graph, algo.current_mis())
    algo.audit()

