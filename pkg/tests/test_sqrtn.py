import math

import numpy as np
import pytest

from dynmis.graph import DynamicGraph, delete, insert
from dynmis.meter import Cause
from dynmis.oracle import MisChecker, verify_mis
from dynmis.sqrtn import LevelParams, SqrtNMis, make_level_params, solve_exponent_chain, sqrtn_run

from conftest import random_toggles
from test_warmup import er_graph


def chain_by_linear_solve(R):
    """Exponents from the balance equations written as a dense linear system."""
    a = np.zeros((R, R))
    b = np.ones(R)
    for r in range(R):
        a[r, r] -= 2
        a[r, R - 1] -= 1
        if r == 0:
            b[r] += 1  # n^2/Delta_1^2 has an extra factor n
        else:
            a[r, r - 1] += 1
    return np.linalg.solve(a, -b)


def test_chain_small_levels():
    assert solve_exponent_chain(1) == pytest.approx([2 / 3])
    assert solve_exponent_chain(2) == pytest.approx([5 / 7, 4 / 7])


@pytest.mark.parametrize("R", range(1, 11))
def test_chain_matches_linear_solve(R):
    np.testing.assert_allclose(solve_exponent_chain(R), chain_by_linear_solve(R), atol=1e-12)


def test_last_exponent_falls_toward_half():
    last = [solve_exponent_chain(R)[-1] for R in range(1, 16)]
    assert all(x > y > 0.5 for x, y in zip(last, last[1:]))
    assert last[-1] - 0.5 < 1e-4


def test_chain_rejects_zero_levels():
    with pytest.raises(ValueError):
        solve_exponent_chain(0)


def test_bare_single_level_delta():
    prm = make_level_params(65536, levels=1, cost_scale=1.0)
    assert prm.delta_raw[0] == pytest.approx(65536 ** (2 / 3), rel=1e-12)
    assert prm.delta_raw[0] == pytest.approx(1625.5, abs=0.05)


@pytest.mark.parametrize("n", [4, 64, 1024, 4096, 65536, 2**20, 2**30])
@pytest.mark.parametrize("scale", [None, 1.0])
def test_accepted_levels_are_spaced(n, scale):
    prm = make_level_params(n, cost_scale=scale)
    assert prm.spaced()
    assert all(0 < q <= 1 for q in prm.p)
    assert list(prm.T) == [max(1, math.floor(1 / (24 * q * q))) for q in prm.p]


def test_level_count_reduction_at_2_20():
    n = 2**20
    target = round(2 * math.log2(math.log2(n)))
    assert target == 9
    bare = make_level_params(n, cost_scale=1.0)
    scaled = make_level_params(n)
    assert 1 <= bare.R < target
    assert scaled.R <= bare.R


def test_probabilities_validated():
    with pytest.raises(ValueError):
        LevelParams.from_probabilities(10, [0.0])
    with pytest.raises(ValueError):
        make_level_params(3)


def test_empty_graph_all_in_deepest_level():
    prm = LevelParams.from_probabilities(64, [0.05, 0.2, 0.5])
    algo = SqrtNMis(64, seed=1, params=prm)
    assert algo.current_mis() == set(range(64))
    algo.audit()


def test_certain_last_level_empties_engine():
    g = er_graph(80, 0.1, 2)
    prm = LevelParams.from_probabilities(80, [0.1, 1.0])
    algo = SqrtNMis(80, seed=3, params=prm, graph=g)
    assert not any(algo.engine.active)
    assert algo.low_set(2) == []
    algo.audit()


@pytest.mark.parametrize("ps", [[0.05], [0.03, 0.12], [0.02, 0.06, 0.25]])
def test_audited_run(ps):
    n = 96
    algo = SqrtNMis(n, seed=5, params=LevelParams.from_probabilities(n, ps))
    for ev in random_toggles(n, 1500, 6):
        algo.update(ev)
        algo.audit()


def test_descent_through_levels():
    """A deletion freeing an I vertex sends it into the next low set and possibly deeper."""
    n = 120
    prm = LevelParams.from_probabilities(n, [0.02, 0.05, 0.1])
    for seed in range(50):
        g = er_graph(n, 0.06, seed)
        algo = SqrtNMis(n, seed=seed, params=prm, graph=g)
        pick = None
        for v in range(n):
            if algo.lvl[v] == 1 and not algo.is_h[v] and algo.mc[1][v] == 1:
                blockers = [w for w in g.adj[v] if algo.in_m[w] and algo.lvl[w] == 1]
                if len(blockers) == 1 and algo.lo[v] == 0:
                    pick = v, blockers[0]
                    break
        if pick is None:
            continue
        v, w = pick
        algo.update(delete(min(v, w), max(v, w)))
        if algo.meter.level_phases(1):
            continue
        assert algo.lvl[v] > 1
        algo.audit()
        return
    pytest.fail("no seed produced a level-1 vertex with a single blocker")


def test_k_r_bound_on_multi_level_run():
    n = 256
    ps = [0.03, 0.1, 0.35]
    prm = LevelParams.from_probabilities(n, ps)
    evs = random_toggles(n, 6000, 2)
    ks = np.zeros(3)
    seeds = range(4)
    for s in seeds:
        _, meter = sqrtn_run(n, evs, seed=s, params=prm)
        ks += [meter.level_phases(r) for r in (1, 2, 3)]
    ks /= len(seeds)
    K = len(evs)
    prev = 0.0
    for r, q in enumerate(ps):
        assert ks[r] <= 4 * K * 24 * q * q + 10 * prev + 10
        prev = ks[r]


def test_long_run_default_params_valid_after_every_update():
    n = 512
    algo = SqrtNMis(n, seed=8)
    chk = MisChecker(algo.graph)
    chk.sync(algo.member)
    for i, ev in enumerate(random_toggles(n, 10_000, 4)):
        algo.update(ev)
        chk.edge(ev)
        chk.sync(algo.member)
        assert chk.ok, i
    assert verify_mis(algo.graph, algo.current_mis())
    algo.audit()


def test_sampled_edge_ends_level_phase():
    prm = LevelParams.from_probabilities(64, [0.3])
    algo = SqrtNMis(64, seed=0, params=prm)
    a, b = [v for v in range(64) if algo.lo[v]][:2]
    algo.update(insert(a, b))
    assert algo.meter.phases_by_cause[Cause.TH] == 1


def test_no_updates_and_determinism():
    mis, meter = sqrtn_run(40, [], seed=1)
    assert mis == set(range(40))
    evs = random_toggles(150, 2000, 9)
    a = sqrtn_run(150, evs, seed=2)
    b = sqrtn_run(150, evs, seed=2)
    assert a[0] == b[0] and a[1].work_units == b[1].work_units
