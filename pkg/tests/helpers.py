"""Shared independent oracles for the test suite.

Everything here is deliberately naive (transitive closure, exhaustive
enumeration, path scans) so it cannot share a failure mode with the
library code it checks.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from hierflow.graph import DiGraph, Flow, FlowInstance


def reachability_closure(n: int, pairs: Sequence[Tuple[int, int]]) -> List[List[bool]]:
    """Floyd-Warshall style transitive closure (reflexive)."""
    reach = [[False] * n for _ in range(n)]
    for v in range(n):
        reach[v][v] = True
    for u, v in pairs:
        reach[u][v] = True
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            if reach[i][k]:
                ri = reach[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    return reach


def scc_from_closure(n: int, pairs) -> List[frozenset]:
    reach = reachability_closure(n, pairs)
    comps = {}
    for v in range(n):
        key = frozenset(u for u in range(n) if reach[v][u] and reach[u][v])
        comps[key] = True
    return list(comps.keys())


def random_instance(rng: random.Random, n: int, m: int, cap: int,
                    st: bool = True) -> FlowInstance:
    from hierflow.graph import build_graph

    arcs = []
    seen = set()
    guard = 0
    while len(arcs) < m and guard < 40 * m + 50:
        guard += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or (u, v) in seen:
            continue
        seen.add((u, v))
        arcs.append((u, v, rng.randint(1, cap)))
    g, caps = build_graph(n, arcs)
    delta = [0] * n
    nabla = [0] * n
    if st:
        s, t = 0, n - 1
        big = sum(caps) + 1
        delta[s] = big
        nabla[t] = big
    else:
        for _ in range(max(1, n // 3)):
            delta[rng.randrange(n)] += rng.randint(1, cap)
        total = sum(delta)
        while total > 0:
            v = rng.randrange(n)
            amt = rng.randint(1, total)
            nabla[v] += amt
            total -= amt
        nabla[rng.randrange(n)] += rng.randint(0, cap)
    return FlowInstance(g, caps, delta, nabla)


def random_feasible_flow(rng: random.Random, inst: FlowInstance, rounds: int = 30) -> Flow:
    """Random augmenting walks; always yields a feasible integral flow."""
    from hierflow.graph import flow_stats

    g = inst.g
    f = Flow.zero(g.m)
    for _ in range(rounds):
        st = flow_stats(inst, f)
        sources = [v for v in range(g.n) if st.excess[v] > 0]
        if not sources:
            break
        s0 = rng.choice(sources)
        v = s0
        path: List[int] = []
        seen = {v}
        while True:
            if path and inst.nabla[v] - st.absorption[v] > 0:
                bottleneck = min(st.excess[s0], inst.nabla[v] - st.absorption[v],
                                 min(inst.cap[e] - f.values[e] for e in path))
                if bottleneck > 0:
                    amt = rng.randint(1, bottleneck)
                    for e in path:
                        f.values[e] += amt
                break
            outs = [e for e in g.out_edges[v]
                    if f.values[e] < inst.cap[e] and g.heads[e] not in seen]
            if not outs:
                break
            e = rng.choice(outs)
            path.append(e)
            v = g.heads[e]
            seen.add(v)
    return f


def dijkstra_residual(inst: FlowInstance, f: Flow, w: Sequence[int],
                      sources: Sequence[int]) -> List[float]:
    """Textbook Dijkstra over usable residual arcs, weight per base edge."""
    import heapq
    import math

    g = inst.g
    dist = [math.inf] * g.n
    pq = []
    for s in sources:
        dist[s] = 0
        heapq.heappush(pq, (0, s))
    while pq:
        d, v = heapq.heappop(pq)
        if d > dist[v]:
            continue
        for e in g.out_edges[v]:
            if inst.cap[e] - f.values[e] > 0 and d + w[e] < dist[g.heads[e]]:
                dist[g.heads[e]] = d + w[e]
                heapq.heappush(pq, (d + w[e], g.heads[e]))
        for e in g.in_edges[v]:
            if f.values[e] > 0 and d + w[e] < dist[g.tails[e]]:
                dist[g.tails[e]] = d + w[e]
                heapq.heappush(pq, (d + w[e], g.tails[e]))
    return dist


def bellman_ford_arcs(n: int, arcs: Sequence[Tuple[int, int, int]],
                      sources: Sequence[int]) -> List[float]:
    """Bellman-Ford over explicit (u, v, weight) arcs; no negative arcs here."""
    import math

    dist = [math.inf] * n
    for s in sources:
        dist[s] = 0
    for _ in range(n):
        changed = False
        for u, v, w in arcs:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    return dist


def exhaustive_sparsest_cut(vertices: Sequence[int],
                            edges: Sequence[Tuple[int, int, int]],
                            volw: Dict[int, int]) -> Tuple[Optional[Fraction], Optional[Set[int]]]:
    """All-subsets sparsest cut, written independently of the library."""
    verts = list(vertices)
    k = len(verts)
    best = None
    best_side = None
    for mask in range(1, (1 << k) - 1):
        side = {verts[i] for i in range(k) if (mask >> i) & 1}
        vol_s = sum(volw.get(v, 0) for v in side)
        vol_t = sum(volw.get(v, 0) for v in verts) - vol_s
        mv = min(vol_s, vol_t)
        if mv <= 0:
            continue
        out_c = sum(c for u, v, c in edges if u in side and v not in side)
        in_c = sum(c for u, v, c in edges if v in side and u not in side)
        r = Fraction(min(out_c, in_c), mv)
        if best is None or r < best:
            best = r
            best_side = side
    return best, best_side
