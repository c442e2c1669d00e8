import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hierflow.errors import InfeasibleFlowError, SelfLoopError, VertexOutOfRangeError
from hierflow.graph import (Flow, FlowInstance, build_graph, condensation_topo_order,
                            decompose_paths, flow_stats, is_feasible, net_outflow,
                            residual, scc)

from helpers import random_feasible_flow, random_instance, scc_from_closure


def test_build_single_edge():
    g, caps = build_graph(2, [(0, 1, 5)])
    assert g.m == 1
    assert caps[0] == 5
    assert g.out_edges[0] == [0] and g.in_edges[1] == [0]


def test_build_antiparallel_pair_kept_distinct():
    g, caps = build_graph(3, [(0, 1, 1), (1, 0, 1)])
    assert g.m == 2
    assert g.edge(0) == (0, 1) and g.edge(1) == (1, 0)


def test_build_rejects_self_loop():
    with pytest.raises(SelfLoopError):
        build_graph(4, [(0, 0, 1)])


def test_build_rejects_vertex_out_of_range():
    with pytest.raises(VertexOutOfRangeError):
        build_graph(2, [(0, 2, 1)])


def test_scc_three_cycle():
    g, _ = build_graph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    comps = scc(g)
    assert len(comps) == 1 and sorted(comps[0]) == [0, 1, 2]


def test_scc_isolated_vertices():
    g, _ = build_graph(2, [])
    assert sorted(len(c) for c in scc(g)) == [1, 1]


def test_scc_matches_transitive_closure_oracle():
    rng = random.Random(7)
    for trial in range(500):
        n = rng.randint(1, 8)
        m = rng.randint(0, 20)
        pairs = []
        for _ in range(m):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                pairs.append((u, v))
        g, _ = build_graph(n, [(u, v, 1) for u, v in pairs])
        ours = {frozenset(c) for c in scc(g)}
        oracle = set(scc_from_closure(n, pairs))
        assert ours == oracle


def test_scc_reverse_topological_order():
    # edge (u, v) between components: v's component must appear first
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(2, 9)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 18))]
        pairs = [(u, v) for u, v in pairs if u != v]
        g, _ = build_graph(n, [(u, v, 1) for u, v in pairs])
        comps = scc(g)
        pos = {}
        for i, c in enumerate(comps):
            for v in c:
                pos[v] = i
        for u, v in pairs:
            if pos[u] != pos[v]:
                assert pos[v] < pos[u]


def test_condensation_topo_chain():
    g, _ = build_graph(3, [(0, 1, 1), (1, 2, 1)])
    comps = condensation_topo_order(g)
    assert [sorted(c) for c in comps] == [[0], [1], [2]]


def test_condensation_topo_cycle_single_component():
    g, _ = build_graph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    assert len(condensation_topo_order(g)) == 1


def test_condensation_topo_random_dag_edges_forward():
    rng = random.Random(11)
    for _ in range(50):
        n = 10
        pairs = sorted({(rng.randrange(n), rng.randrange(n)) for _ in range(20)})
        pairs = [(u, v) for u, v in pairs if u < v]  # force a DAG
        g, _ = build_graph(n, [(u, v, 1) for u, v in pairs])
        comps = condensation_topo_order(g)
        pos = {}
        for i, c in enumerate(comps):
            for v in c:
                pos[v] = i
        for u, v in pairs:
            assert pos[u] < pos[v]


def test_flow_stats_zero_flow():
    g, caps = build_graph(3, [(0, 1, 2), (1, 2, 2)])
    inst = FlowInstance(g, caps, [3, 0, 1], [1, 0, 2])
    st = flow_stats(inst, Flow.zero(2))
    # with no flow, absorption is the pointwise min of supply and sink
    assert st.absorption == [1, 0, 1]
    assert st.excess == [2, 0, 0]
    assert st.value == 2


def test_flow_stats_single_edge():
    g, caps = build_graph(2, [(0, 1, 1)])
    inst = FlowInstance(g, caps, [1, 0], [0, 1])
    st = flow_stats(inst, Flow([1]))
    assert st.value == 1
    assert st.excess == [0, 0]
    assert st.absorption == [0, 1]


def _subset_identity_holds(inst, f, subset):
    st = flow_stats(inst, f)
    lhs = sum(inst.delta[v] for v in subset)
    out = net_outflow(inst.g, f)
    rhs = (sum(st.absorption[v] for v in subset)
           + sum(out[v] for v in subset)
           + sum(st.excess[v] for v in subset))
    return lhs == rhs


def test_flow_conservation_identity_exhaustive_small():
    rng = random.Random(5)
    for _ in range(20):
        inst = random_instance(rng, 4, 8, 4, st=False)
        f = random_feasible_flow(rng, inst)
        n = inst.n
        for mask in range(1 << n):
            subset = [v for v in range(n) if (mask >> v) & 1]
            assert _subset_identity_holds(inst, f, subset)


def test_flow_conservation_identity_sampled():
    rng = random.Random(6)
    inst = random_instance(rng, 10, 30, 6, st=False)
    f = random_feasible_flow(rng, inst)
    for _ in range(100):
        subset = [v for v in range(inst.n) if rng.random() < 0.5]
        assert _subset_identity_holds(inst, f, subset)


def test_residual_of_zero_flow_equals_original():
    g, caps = build_graph(3, [(0, 1, 4), (1, 2, 2)])
    inst = FlowInstance(g, caps, [2, 0, 0], [0, 0, 2])
    res = residual(inst, Flow.zero(2))
    for e in range(2):
        assert res.arc_cap[2 * e] == caps[e]
        assert res.arc_cap[2 * e + 1] == 0


def test_residual_saturated_edge_only_backward_usable():
    g, caps = build_graph(2, [(0, 1, 3)])
    inst = FlowInstance(g, caps, [3, 0], [0, 3])
    res = residual(inst, Flow([3]))
    assert res.arc_cap[0] == 0 and res.arc_cap[1] == 3
    assert list(res.usable_out_arcs(0)) == []
    assert list(res.usable_out_arcs(1)) == [1]


def test_residual_rejects_overflow():
    g, caps = build_graph(2, [(0, 1, 3)])
    inst = FlowInstance(g, caps, [3, 0], [0, 3])
    with pytest.raises(InfeasibleFlowError):
        residual(inst, Flow([4]))


def test_residual_round_trip_augment_then_revert():
    g, caps = build_graph(4, [(0, 1, 3), (1, 2, 3), (2, 3, 3)])
    inst = FlowInstance(g, caps, [3, 0, 0, 0], [0, 0, 0, 3])
    f = Flow([2, 2, 2])
    f2 = Flow([0, 0, 0])  # augment 2 then push 2 back
    res0 = residual(inst, f2)
    res = residual(inst, f)
    for e in range(3):
        assert res.arc_cap[2 * e] + res.arc_cap[2 * e + 1] == caps[e]
    assert [res0.arc_cap[a] for a in range(6)] == [3, 0, 3, 0, 3, 0]


def test_decompose_single_saturated_path():
    g, caps = build_graph(3, [(0, 1, 2), (1, 2, 2)])
    inst = FlowInstance(g, caps, [2, 0, 0], [0, 0, 2])
    paths, cycles = decompose_paths(inst, Flow([2, 2]))
    assert cycles == []
    assert paths == [([0, 1], 2)]


def test_decompose_two_disjoint_unit_paths():
    g, caps = build_graph(4, [(0, 1, 1), (2, 3, 1)])
    inst = FlowInstance(g, caps, [1, 0, 1, 0], [0, 1, 0, 1])
    paths, cycles = decompose_paths(inst, Flow([1, 1]))
    assert cycles == []
    assert sorted(p for p, _ in paths) == [[0], [1]]


def test_decompose_recomposition_random():
    rng = random.Random(9)
    for _ in range(60):
        inst = random_instance(rng, 10, 25, 5, st=False)
        f = random_feasible_flow(rng, inst)
        paths, cycles = decompose_paths(inst, f)
        recomposed = [0] * inst.m
        for arcs, amt in paths:
            for e in arcs:
                recomposed[e] += amt
        with_cycles = list(recomposed)
        for arcs, amt in cycles:
            for e in arcs:
                with_cycles[e] += amt
        assert all(recomposed[e] <= f.values[e] for e in range(inst.m))
        assert net_outflow(inst.g, Flow(recomposed)) == net_outflow(inst.g, f)
        assert with_cycles == f.values
        assert len(paths) + len(cycles) <= inst.m + 2 * inst.n


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_decompose_paths_hypothesis(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, rng.randint(2, 8), rng.randint(1, 16), 4, st=False)
    f = random_feasible_flow(rng, inst)
    assert is_feasible(inst, f)
    paths, cycles = decompose_paths(inst, f)
    recomposed = [0] * inst.m
    for arcs, amt in paths + cycles:
        assert amt > 0
        for e in arcs:
            recomposed[e] += amt
    assert recomposed == f.values
