"""Directed capacitated multigraphs, flow algebra, residual views.

Edge identity is the dense integer id assigned at construction; vertices
are 0..n-1.  Parallel edges and antiparallel pairs are first-class, so
every structure downstream (hierarchies, weight functions, flows) is
keyed by edge id, never by endpoint pair.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .errors import InfeasibleFlowError, SelfLoopError, VertexOutOfRangeError


class DiGraph:
    """Directed multigraph with stable dense edge ids."""

    __slots__ = ("n", "tails", "heads", "out_edges", "in_edges")

    def __init__(self, n: int, arcs: Iterable[Tuple[int, int]]):
        self.n = n
        self.tails: List[int] = []
        self.heads: List[int] = []
        self.out_edges: List[List[int]] = [[] for _ in range(n)]
        self.in_edges: List[List[int]] = [[] for _ in range(n)]
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRangeError(f"arc ({u},{v}) outside [0,{n})")
            if u == v:
                raise SelfLoopError(u)
            eid = len(self.tails)
            self.tails.append(u)
            self.heads.append(v)
            self.out_edges[u].append(eid)
            self.in_edges[v].append(eid)

    @property
    def m(self) -> int:
        return len(self.tails)

    def edge(self, e: int) -> Tuple[int, int]:
        return self.tails[e], self.heads[e]

    def edges(self) -> Iterable[Tuple[int, int, int]]:
        for e in range(self.m):
            yield e, self.tails[e], self.heads[e]

    def subgraph_edges(self, edge_ids: Iterable[int], vertices=None):
        """Edge ids with both endpoints inside `vertices` (all if None)."""
        if vertices is None:
            return list(edge_ids)
        vs = vertices if isinstance(vertices, set) else set(vertices)
        return [e for e in edge_ids if self.tails[e] in vs and self.heads[e] in vs]


def build_graph(n: int, arcs: Sequence[Tuple[int, int, int]]) -> Tuple[DiGraph, List[int]]:
    """Build a graph plus capacity vector from (tail, head, capacity) triples."""
    for u, v, c in arcs:
        if c < 0:
            raise InfeasibleFlowError(f"negative capacity on ({u},{v})")
    g = DiGraph(n, [(u, v) for u, v, _ in arcs])
    caps = [c for _, _, c in arcs]
    return g, caps


def scc(g: DiGraph, edge_filter: Sequence[bool] = None) -> List[List[int]]:
    """Strongly connected components, in reverse topological discovery order.

    `edge_filter[e] == False` hides edge e.  Iterative Tarjan; component
    k never has an edge into component j < k.
    """
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: List[int] = []
    comps: List[List[int]] = []
    counter = 0
    out_edges = g.out_edges
    heads = g.heads
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            edges_v = out_edges[v]
            while ei < len(edges_v):
                e = edges_v[ei]
                ei += 1
                if edge_filter is not None and not edge_filter[e]:
                    continue
                w = heads[e]
                if index[w] == -1:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    advanced = True
                    break
                elif on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                u, _ = work[-1]
                if low[v] < low[u]:
                    low[u] = low[v]
    return comps


def condensation_topo_order(g: DiGraph, edge_filter: Sequence[bool] = None) -> List[List[int]]:
    """SCCs ordered so that every inter-component edge points forward."""
    return list(reversed(scc(g, edge_filter)))


def scc_subgraph(vertices: Iterable[int], arcs: Iterable[Tuple[int, int]]) -> List[List[int]]:
    """SCCs of an ad-hoc subgraph, in reverse topological order.

    `arcs` are (tail, head) pairs; endpoints outside `vertices` are ignored.
    """
    verts = list(vertices)
    vset = set(verts)
    adj = {v: [] for v in verts}
    for u, v in arcs:
        if u in vset and v in vset:
            adj[u].append(v)
    index = {}
    low = {}
    on_stack = set()
    stack: List[int] = []
    comps: List[List[int]] = []
    counter = 0
    for root in verts:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            nbrs = adj[v]
            while ei < len(nbrs):
                w = nbrs[ei]
                ei += 1
                if w not in index:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    advanced = True
                    break
                elif w in on_stack:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                u, _ = work[-1]
                if low[v] < low[u]:
                    low[u] = low[v]
    return comps


@dataclass
class FlowInstance:
    """Diffusion instance: graph, capacities, supply and sink vectors."""

    g: DiGraph
    cap: List[int]
    delta: List[int]
    nabla: List[int]

    @property
    def n(self) -> int:
        return self.g.n

    @property
    def m(self) -> int:
        return self.g.m

    def total_source(self) -> int:
        return sum(self.delta)

    def total_sink(self) -> int:
        return sum(self.nabla)


class Flow:
    """Integer edge flow; mutable, everything else derives from it."""

    __slots__ = ("values",)

    def __init__(self, values: List[int]):
        self.values = values

    @classmethod
    def zero(cls, m: int) -> "Flow":
        return cls([0] * m)

    def copy(self) -> "Flow":
        return Flow(list(self.values))

    def __getitem__(self, e: int) -> int:
        return self.values[e]

    def __setitem__(self, e: int, x: int) -> None:
        self.values[e] = x


@dataclass
class FlowStats:
    value: int
    excess: List[int]
    absorption: List[int]
    net_out: List[int]


def net_outflow(g: DiGraph, f: Flow) -> List[int]:
    out = [0] * g.n
    vals = f.values
    tails, heads = g.tails, g.heads
    for e in range(g.m):
        x = vals[e]
        if x:
            out[tails[e]] += x
            out[heads[e]] -= x
    return out


def flow_stats(inst: FlowInstance, f: Flow) -> FlowStats:
    """Value, excess and absorption vectors of `f` on `inst`.

    abs = min(-B^T f + delta, nabla), ex = -B^T f + delta - abs,
    value = sum(abs).  For any vertex set S the identity
    delta(S) = abs(S) + net_out(S) + ex(S) holds.
    """
    out = net_outflow(inst.g, f)
    absorption = []
    excess = []
    for v in range(inst.n):
        supply = -out[v] + inst.delta[v]
        a = min(supply, inst.nabla[v])
        absorption.append(a)
        excess.append(supply - a)
    return FlowStats(sum(absorption), excess, absorption, out)


def is_feasible(inst: FlowInstance, f: Flow) -> bool:
    if any(x < 0 or x > c for x, c in zip(f.values, inst.cap)):
        return False
    st = flow_stats(inst, f)
    return all(0 <= e <= d for e, d in zip(st.excess, inst.delta))


class ResidualView:
    """Residual graph of (inst, f): arc 2e is forward, 2e+1 backward.

    All arcs exist; saturated ones carry capacity 0 and are skipped by
    path search.  Residual sources are the excess vector, residual sinks
    the unabsorbed sink capacity.
    """

    __slots__ = ("g", "arc_cap", "delta_f", "nabla_f", "weights")

    def __init__(self, g: DiGraph, arc_cap: List[int], delta_f: List[int], nabla_f: List[int]):
        self.g = g
        self.arc_cap = arc_cap
        self.delta_f = delta_f
        self.nabla_f = nabla_f
        self.weights: List[int] = None

    def arc_ends(self, a: int) -> Tuple[int, int]:
        e = a >> 1
        if a & 1:
            return self.g.heads[e], self.g.tails[e]
        return self.g.tails[e], self.g.heads[e]

    def base_edge(self, a: int) -> int:
        return a >> 1

    def attach_weights(self, w: Sequence[int]) -> None:
        """Both residual arcs of edge e inherit weight w[e]."""
        self.weights = list(w)

    def arc_weight(self, a: int) -> int:
        return self.weights[a >> 1]

    def out_arcs(self, v: int):
        """Arc ids leaving v (including saturated ones)."""
        for e in self.g.out_edges[v]:
            yield 2 * e
        for e in self.g.in_edges[v]:
            yield 2 * e + 1

    def usable_out_arcs(self, v: int):
        for a in self.out_arcs(v):
            if self.arc_cap[a] > 0:
                yield a


def residual(inst: FlowInstance, f: Flow) -> ResidualView:
    arc_cap = []
    for e in range(inst.m):
        x = f.values[e]
        if x < 0 or x > inst.cap[e]:
            raise InfeasibleFlowError(f"flow {x} outside [0, {inst.cap[e]}] on edge {e}")
        arc_cap.append(inst.cap[e] - x)
        arc_cap.append(x)
    st = flow_stats(inst, f)
    nabla_f = [inst.nabla[v] - st.absorption[v] for v in range(inst.n)]
    return ResidualView(inst.g, arc_cap, st.excess, nabla_f)


def decompose_paths(inst: FlowInstance, f: Flow):
    """Split an integral flow into source-to-sink paths plus cycles.

    Returns (paths, cycles) where each entry is (edge id list, amount).
    The recomposed flow routes the same demand as f and is pointwise <= f;
    grouped peeling emits at most m + 2n entries.
    """
    g = inst.g
    rem = list(f.values)
    st = flow_stats(inst, f)
    src_rem = [inst.delta[v] - st.excess[v] for v in range(inst.n)]
    abs_rem = list(st.absorption)
    out_iter = [0] * g.n  # out-edge scan position; exhausted edges stay behind it
    paths: List[Tuple[List[int], int]] = []
    cycles: List[Tuple[List[int], int]] = []

    def next_out(v: int) -> int:
        es = g.out_edges[v]
        i = out_iter[v]
        while i < len(es) and rem[es[i]] == 0:
            i += 1
        out_iter[v] = i
        return es[i] if i < len(es) else -1

    def walk_until(v: int, stop) -> Tuple[List[int], int]:
        """Follow positive edges from v, peeling loops, until stop(u)."""
        path: List[int] = []
        pos = {v: 0}
        while not stop(v):
            e = next_out(v)
            if e == -1:
                raise AssertionError("flow decomposition stalled: flow does not conserve")
            path.append(e)
            v = g.heads[e]
            if v in pos:
                k = pos[v]
                loop = path[k:]
                amt = min(rem[e2] for e2 in loop)
                for e2 in loop:
                    rem[e2] -= amt
                cycles.append((loop, amt))
                for u in [u for u, i in pos.items() if i > k]:
                    del pos[u]
                del path[k:]
            else:
                pos[v] = len(path)
        return path, v

    for s in range(g.n):
        while src_rem[s] > 0:
            path, t = walk_until(s, lambda u: abs_rem[u] > 0)
            amt = min(src_rem[s], abs_rem[t])
            if path:
                amt = min(amt, min(rem[e2] for e2 in path))
            src_rem[s] -= amt
            abs_rem[t] -= amt
            for e2 in path:
                rem[e2] -= amt
            if path:
                paths.append((path, amt))

    # leftover is a circulation; every positive edge lies on a cycle
    for e0 in range(g.m):
        while rem[e0] > 0:
            u0 = g.tails[e0]
            path = [e0]
            pos = {u0: 0, g.heads[e0]: 1}
            v = g.heads[e0]
            while v != u0:
                e = next_out(v)
                if e == -1:
                    raise AssertionError("circulation peel stalled")
                path.append(e)
                v = g.heads[e]
                if v in pos and v != u0:
                    # inner loop never contains e0 (only u0 sits at index 0)
                    k = pos[v]
                    loop = path[k:]
                    amt = min(rem[e2] for e2 in loop)
                    for e2 in loop:
                        rem[e2] -= amt
                    cycles.append((loop, amt))
                    for u in [u for u, i in pos.items() if i > k]:
                        del pos[u]
                    del path[k:]
                else:
                    pos[v] = len(path)
            amt = min(rem[e2] for e2 in path)
            for e2 in path:
                rem[e2] -= amt
            cycles.append((path, amt))
    return paths, cycles
