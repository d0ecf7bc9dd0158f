import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynmis.graph import Kind, UpdateEvent, delete, insert
from dynmis.workload import (
    FAMILIES, WorkloadFormatError, WorkloadSpec, check_well_formed, family_name, format_updates,
    generate, parse_updates, read_updates, write_updates,
)


@pytest.mark.parametrize("family", FAMILIES)
def test_families_well_formed_and_replayable(family):
    spec = WorkloadSpec(family, 48, 900, seed=3, clique_size=6)
    a = generate(spec)
    assert len(a) == 900
    check_well_formed(48, a)
    assert format_updates(48, a) == format_updates(48, generate(spec))
    assert generate(WorkloadSpec(family, 48, 900, seed=4, clique_size=6)) != a


def test_single_update_is_an_insert():
    (ev,) = generate(WorkloadSpec("uniform", 10, 1))
    assert ev.kind is Kind.INSERT


def test_build_teardown_halves():
    evs = generate(WorkloadSpec("er", 8, 10, seed=1))
    ins, dels = evs[:5], evs[5:]
    assert all(e.kind is Kind.INSERT for e in ins)
    assert all(e.kind is Kind.DELETE for e in dels)
    assert sorted((e.u, e.v) for e in ins) == sorted((e.u, e.v) for e in dels)


def test_window_keeps_edge_count_bounded():
    evs = generate(WorkloadSpec("window", 100, 1000, window=30))
    live = 0
    for e in evs:
        live += 1 if e.kind else -1
        assert live <= 30


def test_hub_concentrates_on_hot_vertices():
    spec = WorkloadSpec("hub", 400, 4000, seed=2, hot_set_size=5, hot_fraction=0.8)
    evs = generate(spec)
    touches = {}
    for e in evs:
        for x in (e.u, e.v):
            touches[x] = touches.get(x, 0) + 1
    top5 = sorted(touches.values(), reverse=True)[:5]
    assert sum(top5) > 0.6 * len(evs)


def test_aliases_and_bad_names():
    assert family_name("SlidingWindow") == "window"
    assert family_name("Uniform_Toggle") == "uniform"
    with pytest.raises(ValueError):
        family_name("random")


@pytest.mark.parametrize("kw", [
    dict(family="uniform", n=1, k=3),
    dict(family="uniform", n=5, k=-1),
    dict(family="er", n=5, k=3, p_edge=0.0),
    dict(family="window", n=4, k=3, window=7),
    dict(family="hub", n=5, k=3, hot_set_size=9),
    dict(family="clique", n=5, k=3, clique_size=1),
])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        WorkloadSpec(**kw)


def test_empty_sequence_is_header_only():
    assert format_updates(7, []) == "n 7\n"
    assert parse_updates("n 7\n") == (7, [])


def test_large_round_trip(tmp_path):
    evs = generate(WorkloadSpec("uniform", 1000, 100_000, seed=5))
    path = tmp_path / "u.txt"
    write_updates(1000, evs, path)
    assert read_updates(path) == (1000, evs)
    buf = io.StringIO()
    write_updates(1000, evs[:10], buf)
    buf.seek(0)
    assert read_updates(buf) == (1000, evs[:10])


@pytest.mark.parametrize("text,line", [
    ("n 5\nx 1 2\n", 2),
    ("", 1),
    ("nodes 5\n", 1),
    ("n 5\n+ 1 2\n+ 2 1\n", 3),
    ("n 5\n+ 1 9\n", 2),
    ("n 5\n+ 1\n", 2),
    ("n 5\n+ a 2\n", 2),
])
def test_malformed_lines(text, line):
    with pytest.raises(WorkloadFormatError) as err:
        parse_updates(text)
    assert err.value.line == line


def test_well_formed_checker_rejects_bad_sequences():
    with pytest.raises(ValueError):
        check_well_formed(4, [delete(0, 1)])
    with pytest.raises(ValueError):
        check_well_formed(4, [insert(0, 1), insert(0, 1)])
    with pytest.raises(ValueError):
        check_well_formed(4, [UpdateEvent(Kind.INSERT, 2, 7)])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.integers(0, 30), st.integers(0, 30))
                .filter(lambda t: t[1] != t[2]), max_size=80))
def test_format_round_trip(items):
    evs = [UpdateEvent(Kind(k), min(a, b), max(a, b)) for k, a, b in items]
    assert parse_updates(format_updates(31, evs)) == (31, evs)
