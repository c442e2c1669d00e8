"""Flow-or-cut subroutine: route a diffusion demand at bounded congestion
or return a sparse level cut of the residual graph.

Push-relabel runs on kappa-scaled capacities with hierarchy-induced
weights (terminal edges get weight n).  If demand is left over, distance
levels are computed in the residual graph under a reduced weight
function whose forward DAG arcs cost zero, and the returned cut is the
level cut minimizing residual boundary capacity minus terminal volume.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import InvalidHierarchyError, NotStronglyConnectedError
from .graph import DiGraph, Flow, FlowInstance, ResidualView, flow_stats, residual, scc
from .hierarchy import Hierarchy, induced_weights
from .push_relabel import PushRelabelResult, push_relabel

INF = math.inf


@dataclass
class CutMetrics:
    boundary_out: int      # c(E_G(S, S-bar)), base capacities
    boundary_in: int       # c(E_G(S-bar, S))
    vol_f_side: int        # vol_F(S)
    vol_f_other: int       # vol_F(S-bar)
    absorbed: int          # abs_f(S)
    excess: int            # ex_f(S)
    objective: int         # residual kappa-boundary minus min terminal volume
    level: int


@dataclass
class SparseCutOutcome:
    flow: Flow
    value: int
    cut: Optional[List[int]]
    metrics: Optional[CutMetrics]
    result: PushRelabelResult
    h: int
    labels: Optional[List[float]] = None


def sparse_cut_height(n: int, eta: int, kappa: int, phi: Fraction,
                      config: SolverConfig) -> int:
    """Height budget for the inner push-relabel run.

    The nominal formula is ceil(c_6 * eta^4 * ln(n)^7 * kappa * n / phi^2),
    with eta read as at least one (an all-terminal call sees the empty
    hierarchy, which must not collapse the height).  The result is floored
    at n (the level construction needs that), capped at n^2 (every edge
    weight is at most n, so every simple path is shorter than n^2 and
    heights beyond that cannot enlarge the set of h-short flows), and
    clamped at config.max_h.
    """
    ln = math.log(max(n, 2))
    eta_eff = max(eta, 1)
    nominal = config.c_6 * (eta_eff ** 4) * (ln ** 7) * kappa * n / float(phi) ** 2
    h = max(n, min(math.ceil(nominal), n * n))
    return min(config.max_h, h)


def terminal_weights(g: DiGraph, f_edges: Set[int], hier: Hierarchy) -> List[int]:
    """Hierarchy-induced weights off the terminal set, weight n on it."""
    w = induced_weights(g, hier.tau)
    n = g.n
    return [n if e in f_edges else w[e] for e in range(g.m)]


def level_labels(res: ResidualView, w_f: Sequence[int], s0: Sequence[int]) -> List[float]:
    """Shortest w_f-distances from the source set in the residual graph.

    w_f is per arc (2e forward, 2e+1 backward); zero weights are allowed
    (used on forward DAG arcs).  Saturated arcs are skipped; unreachable
    vertices get inf.
    """
    n = res.g.n
    dist: List[float] = [INF] * n
    pq: List[Tuple[int, int]] = []
    for s in s0:
        if dist[s] != 0:
            dist[s] = 0
            heapq.heappush(pq, (0, s))
    arc_cap = res.arc_cap
    g = res.g
    while pq:
        d, v = heapq.heappop(pq)
        if d > dist[v]:
            continue
        for e in g.out_edges[v]:
            a = 2 * e
            if arc_cap[a] > 0:
                nd = d + w_f[a]
                if nd < dist[g.heads[e]]:
                    dist[g.heads[e]] = nd
                    heapq.heappush(pq, (nd, g.heads[e]))
        for e in g.in_edges[v]:
            a = 2 * e + 1
            if arc_cap[a] > 0:
                nd = d + w_f[a]
                if nd < dist[g.tails[e]]:
                    dist[g.tails[e]] = nd
                    heapq.heappush(pq, (nd, g.tails[e]))
    return dist


def reduced_arc_weights(g: DiGraph, w_g: Sequence[int], dag_edges: Set[int]) -> List[int]:
    """Per-arc weights: forward arcs of DAG edges cost zero, everything
    else inherits its base edge weight in both directions."""
    w_arc = [0] * (2 * g.m)
    for e in range(g.m):
        w_arc[2 * e] = 0 if e in dag_edges else w_g[e]
        w_arc[2 * e + 1] = w_g[e]
    return w_arc


def min_level_cut(res: ResidualView, labels: Sequence[float], h: int,
                  vol_f: Sequence[int], kappa_caps: Sequence[int],
                  flow_vals: Sequence[int]) -> Tuple[List[int], int, int]:
    """Level cut minimizing residual boundary minus terminal volume.

    Scans prefix cuts S = {v: label(v) <= i} over distinct finite labels
    i <= h with S != V; ties break toward the smallest level.  Returns
    (side, objective, level).
    """
    n = res.g.n
    order = sorted(range(n), key=lambda v: (labels[v], v))
    total_vol = sum(vol_f)
    g = res.g
    best = None
    in_s = [False] * n
    idx = 0
    vol_s = 0
    distinct = sorted({labels[v] for v in range(n) if labels[v] != INF and labels[v] <= h})
    for lab in distinct:
        while idx < n and labels[order[idx]] <= lab:
            v = order[idx]
            idx += 1
            in_s[v] = True
            vol_s += vol_f[v]
        if idx >= n:
            break  # S == V, not a proper cut
        boundary = 0  # residual kappa-capacity leaving S
        for e in range(g.m):
            tu, tv = in_s[g.tails[e]], in_s[g.heads[e]]
            if tu == tv:
                continue
            cf_fwd = kappa_caps[e] - flow_vals[e]
            cf_bwd = flow_vals[e]
            if tu:
                if cf_fwd > 0:
                    boundary += cf_fwd
            else:
                if cf_bwd > 0:
                    boundary += cf_bwd
        obj = boundary - min(vol_s, total_vol - vol_s)
        if best is None or obj < best[0]:
            best = (obj, lab, [v for v in range(n) if in_s[v]])
    if best is None:
        raise AssertionError("no proper level cut found")
    return best[2], best[0], best[1]


def sparse_cut(
    inst: FlowInstance,
    kappa: int,
    f_edges: Set[int],
    hier: Hierarchy,
    config: SolverConfig = DEFAULT_CONFIG,
    weights: Optional[Sequence[int]] = None,
    phi: Optional[Fraction] = None,
    check_connected: bool = True,
) -> SparseCutOutcome:
    """Route the demand at congestion kappa or return a sparse level cut.

    `hier` describes the graph without the terminal edges `f_edges`.
    `weights` may carry precomputed terminal weights (one entry per edge)
    to amortize repeated calls on a fixed graph.
    """
    g = inst.g
    n = g.n
    if check_connected and n > 1:
        comps = scc(g)
        if len(comps) != 1:
            raise NotStronglyConnectedError(f"{len(comps)} strongly connected components")
    if hier.edge_count() != g.m - len(f_edges):
        raise InvalidHierarchyError(
            f"hierarchy covers {hier.edge_count()} edges, expected {g.m - len(f_edges)}")
    w_g = list(weights) if weights is not None else terminal_weights(g, f_edges, hier)
    phi = phi if phi is not None else Fraction(1, 2)
    h = sparse_cut_height(n, hier.eta, kappa, phi, config)
    scaled = FlowInstance(g, [kappa * c for c in inst.cap], inst.delta, inst.nabla)
    result = push_relabel(scaled, w_g, h, mode="capacitated", config=config)
    f = result.flow
    if result.value == inst.total_source():
        return SparseCutOutcome(f, result.value, None, None, result, h)

    res = residual(scaled, f)
    w_arc = reduced_arc_weights(g, w_g, hier.d)
    s0 = [v for v in range(n) if res.delta_f[v] > 0]
    labels = level_labels(res, w_arc, s0)
    vol_f = [0] * n
    for e in f_edges:
        vol_f[g.tails[e]] += inst.cap[e]
        vol_f[g.heads[e]] += inst.cap[e]
    side, obj, lab = min_level_cut(res, labels, h, vol_f, scaled.cap, f.values)
    sset = set(side)
    b_out = sum(inst.cap[e] for e in range(g.m)
                if g.tails[e] in sset and g.heads[e] not in sset)
    b_in = sum(inst.cap[e] for e in range(g.m)
               if g.heads[e] in sset and g.tails[e] not in sset)
    vol_side = sum(vol_f[v] for v in side)
    st = flow_stats(scaled, f)
    metrics = CutMetrics(
        boundary_out=b_out,
        boundary_in=b_in,
        vol_f_side=vol_side,
        vol_f_other=sum(vol_f) - vol_side,
        absorbed=sum(st.absorption[v] for v in side),
        excess=sum(st.excess[v] for v in side),
        objective=obj,
        level=lab,
    )
    return SparseCutOutcome(f, result.value, side, metrics, result, h, labels)
