import random
from fractions import Fraction

import pytest

from hierflow.config import DEFAULT_CONFIG
from hierflow.errors import NotADAGError
from hierflow.graph import Flow, FlowInstance, build_graph, flow_stats, is_feasible
from hierflow.maxflow import (capacity_scaled_max_flow, dag_approx_flow,
                              edmonds_karp, ek_solver, exact_solver,
                              max_flow_exact, max_flow_value_by_cuts)

from helpers import random_instance


def test_ek_single_edge():
    g, caps = build_graph(2, [(0, 1, 5)])
    inst = FlowInstance(g, caps, [5, 0], [0, 5])
    assert edmonds_karp(inst).stats.value == 5


def test_ek_zero_supply():
    g, caps = build_graph(2, [(0, 1, 5)])
    inst = FlowInstance(g, caps, [0, 0], [0, 5])
    assert edmonds_karp(inst).stats.value == 0


def test_ek_matches_exhaustive_min_cut():
    rng = random.Random(61)
    for _ in range(120):
        inst = random_instance(rng, rng.randint(2, 8), rng.randint(1, 16),
                               rng.randint(1, 6), st=False)
        res = edmonds_karp(inst)
        assert res.stats.value == max_flow_value_by_cuts(inst)
        assert is_feasible(inst, res.flow)


def test_dag_approx_exact_on_single_edge():
    g, caps = build_graph(2, [(0, 1, 3)])
    inst = FlowInstance(g, caps, [3, 0], [0, 3])
    r = dag_approx_flow(inst)
    assert r.value == 3


def test_dag_approx_rejects_cycles():
    g, caps = build_graph(2, [(0, 1, 1), (1, 0, 1)])
    inst = FlowInstance(g, caps, [1, 0], [0, 1])
    with pytest.raises(NotADAGError):
        dag_approx_flow(inst)


def test_dag_approx_diamond():
    g, caps = build_graph(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])
    inst = FlowInstance(g, caps, [2, 0, 0, 0], [0, 0, 0, 2])
    r = dag_approx_flow(inst)
    assert 6 * r.value >= 2
    assert r.value >= 1


def test_dag_approx_sixth_on_random_dags():
    rng = random.Random(62)
    for _ in range(60):
        n = rng.randint(4, 20)
        perm = list(range(n))
        rng.shuffle(perm)
        arcs = []
        seen = set()
        for _ in range(rng.randint(n, 4 * n)):
            i = rng.randrange(n - 1)
            j = rng.randrange(i + 1, n)
            uv = (perm[i], perm[j])
            if uv not in seen:
                seen.add(uv)
                arcs.append((uv[0], uv[1], rng.randint(1, 6)))
        g, caps = build_graph(n, arcs)
        delta = [0] * n
        nabla = [0] * n
        big = sum(caps) + 1
        delta[perm[0]] = big
        nabla[perm[-1]] = big
        inst = FlowInstance(g, caps, delta, nabla)
        r = dag_approx_flow(inst)
        fstar = edmonds_karp(inst).stats.value
        assert 6 * r.value >= fstar
        assert is_feasible(inst, r.flow)


def test_exact_zero_flow_instances():
    g, caps = build_graph(3, [(0, 1, 2)])
    inst = FlowInstance(g, caps, [0, 0, 2], [2, 0, 0])  # no path from 2 to 0
    res = max_flow_exact(inst, Fraction(1, 8), seed=0)
    assert res.stats.value == 0
    assert res.stats.iterations == 0


def test_exact_dumbbell_bridge_three():
    k = 5
    arcs = []
    for a in range(k):
        for b in range(k):
            if a != b:
                arcs.append((a, b, 1))
    for a in range(k, 2 * k):
        for b in range(k, 2 * k):
            if a != b:
                arcs.append((a, b, 1))
    arcs.append((k - 1, k, 3))
    arcs.append((2 * k - 1, 0, 3))
    g, caps = build_graph(2 * k, arcs)
    big = sum(caps) + 1
    delta = [0] * (2 * k)
    nabla = [0] * (2 * k)
    delta[0] = big
    nabla[2 * k - 1] = big
    inst = FlowInstance(g, caps, delta, nabla)
    res = max_flow_exact(inst, Fraction(1, 16), seed=2)
    want = edmonds_karp(inst).stats.value
    assert want == 3
    assert res.stats.value == 3
    assert is_feasible(inst, res.flow)


def test_exact_matches_oracle_on_random_instances():
    rng = random.Random(63)
    for trial in range(30):
        inst = random_instance(rng, rng.randint(3, 12), rng.randint(2, 30),
                               rng.randint(1, 10), st=True)
        res = max_flow_exact(inst, Fraction(1, 16), seed=trial)
        want = edmonds_karp(inst).stats.value
        assert res.stats.value == want, f"trial {trial}"
        assert is_feasible(inst, res.flow)
        st = flow_stats(inst, res.flow)
        assert st.value == want


def test_exact_matches_oracle_on_diffusion_instances():
    rng = random.Random(64)
    for trial in range(20):
        inst = random_instance(rng, rng.randint(3, 10), rng.randint(2, 24),
                               rng.randint(1, 6), st=False)
        res = max_flow_exact(inst, Fraction(1, 16), seed=trial)
        want = edmonds_karp(inst).stats.value
        assert res.stats.value == want


def test_scaling_single_edge_large_cap():
    g, caps = build_graph(2, [(0, 1, 10 ** 6)])
    inst = FlowInstance(g, caps, [10 ** 6, 0], [0, 10 ** 6])
    res = capacity_scaled_max_flow(inst, ek_solver)
    assert res.stats.value == 10 ** 6
    assert res.stats.phases == 21  # ceil(log2(1e6)) + 1
    assert all(v <= 4 for v in res.stats.phase_values)  # n^2 = 4


def test_scaling_matches_direct_on_small_caps():
    rng = random.Random(65)
    for _ in range(100):
        inst = random_instance(rng, rng.randint(2, 8), rng.randint(1, 14), 3, st=False)
        res = capacity_scaled_max_flow(inst, ek_solver)
        want = edmonds_karp(inst).stats.value
        assert res.stats.value == want
        n2 = inst.n * inst.n
        assert all(v <= n2 for v in res.stats.phase_values)


def test_scaling_phase_count_formula():
    for u, phases in [(1, 1), (2, 2), (3, 3), (4, 3), (5, 4), (1023, 11), (1024, 11)]:
        g, caps = build_graph(2, [(0, 1, u)])
        inst = FlowInstance(g, caps, [u, 0], [0, u])
        res = capacity_scaled_max_flow(inst, ek_solver)
        assert res.stats.phases == phases, f"U={u}"
        assert res.stats.value == u


def test_scaling_with_exact_inner_solver():
    rng = random.Random(66)
    inst = random_instance(rng, 6, 14, 50, st=True)
    res = capacity_scaled_max_flow(inst, exact_solver(Fraction(1, 16), seed=0))
    want = edmonds_karp(inst).stats.value
    assert res.stats.value == want


def test_exact_progress_guarantee():
    # value strictly increases every iteration (safety net makes it so)
    rng = random.Random(67)
    inst = random_instance(rng, 10, 25, 5, st=True)
    res = max_flow_exact(inst, Fraction(1, 16), seed=1)
    assert res.stats.iterations <= edmonds_karp(inst).stats.value + 1
