"""End-to-end exact maximum flow, the DAG approximation, capacity
scaling, and the shortest-augmenting-path oracle every test leans on.

The exact driver loops: build a hierarchy of the current residual graph,
run weighted push-relabel with the induced weights, apply the flow, and
repeat until no augmenting path remains.  A single breadth-first
augmentation acts as a safety net whenever an iteration routes nothing,
so exactness never depends on hierarchy quality.
"""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .builder import build_hierarchy
from .config import DEFAULT_CONFIG, SolverConfig, default_phi
from .errors import BuildFailedError, NotADAGError
from .graph import (DiGraph, Flow, FlowInstance, flow_stats, residual, scc)
from .hierarchy import induced_weights
from .push_relabel import push_relabel


@dataclass
class SolveStats:
    value: int
    iterations: int = 0
    augmentations: int = 0
    relabels: int = 0
    safety_net_hits: int = 0
    build_failures: int = 0
    phases: int = 0
    phase_values: List[int] = field(default_factory=list)


@dataclass
class SolveResult:
    flow: Flow
    stats: SolveStats


# --- shortest augmenting paths (the oracle) ----------------------------------


def edmonds_karp(inst: FlowInstance) -> SolveResult:
    """Exact maximum flow by breadth-first shortest augmenting paths."""
    g = inst.g
    n, m = g.n, g.m
    cf = [0] * (2 * m)
    for e in range(m):
        cf[2 * e] = inst.cap[e]
    delta_rem = [max(inst.delta[v] - inst.nabla[v], 0) for v in range(n)]
    nabla_rem = [max(inst.nabla[v] - inst.delta[v], 0) for v in range(n)]
    augs = 0
    while True:
        parent_arc = [-1] * n
        seen = [False] * n
        q = deque()
        for v in range(n):
            if delta_rem[v] > 0:
                seen[v] = True
                q.append(v)
        t = -1
        while q:
            v = q.popleft()
            if nabla_rem[v] > 0:
                t = v
                break
            for e in g.out_edges[v]:
                w = g.heads[e]
                if not seen[w] and cf[2 * e] > 0:
                    seen[w] = True
                    parent_arc[w] = 2 * e
                    q.append(w)
            for e in g.in_edges[v]:
                w = g.tails[e]
                if not seen[w] and cf[2 * e + 1] > 0:
                    seen[w] = True
                    parent_arc[w] = 2 * e + 1
                    q.append(w)
        if t == -1:
            break
        arcs = []
        v = t
        while parent_arc[v] != -1:
            a = parent_arc[v]
            arcs.append(a)
            v = (g.tails if a & 1 == 0 else g.heads)[a >> 1]
        s = v
        amt = min(delta_rem[s], nabla_rem[t])
        for a in arcs:
            amt = min(amt, cf[a])
        for a in arcs:
            cf[a] -= amt
            cf[a ^ 1] += amt
        delta_rem[s] -= amt
        nabla_rem[t] -= amt
        augs += 1
    f = Flow([inst.cap[e] - cf[2 * e] for e in range(m)])
    value = sum(inst.delta) - sum(delta_rem)
    stats = SolveStats(value=value, iterations=augs, augmentations=augs)
    return SolveResult(f, stats)


def max_flow_value_by_cuts(inst: FlowInstance) -> int:
    """Exhaustive min-cut evaluation: min over S of c(E(S, S-bar)) +
    delta(S-bar) + nabla(S).  Exponential; for tiny oracles only."""
    g = inst.g
    n = g.n
    best = None
    for mask in range(1 << n):
        cut_cap = 0
        for e in range(g.m):
            if (mask >> g.tails[e]) & 1 and not (mask >> g.heads[e]) & 1:
                cut_cap += inst.cap[e]
        val = cut_cap
        val += sum(inst.delta[v] for v in range(n) if not (mask >> v) & 1)
        val += sum(inst.nabla[v] for v in range(n) if (mask >> v) & 1)
        if best is None or val < best:
            best = val
    return best


# --- DAG approximation --------------------------------------------------------


def dag_approx_flow(inst: FlowInstance, config: SolverConfig = DEFAULT_CONFIG):
    """Constant-factor approximate max flow on a DAG.

    Weights edges by topological-position difference and runs
    push-relabel with height n; the result is at least a sixth of the
    maximum.
    """
    g = inst.g
    comps = scc(g)
    if any(len(c) > 1 for c in comps):
        raise NotADAGError("instance graph has a cycle")
    tau = [0] * g.n
    for pos, comp in enumerate(reversed(comps), start=1):
        tau[comp[0]] = pos
    w = [abs(tau[g.heads[e]] - tau[g.tails[e]]) for e in range(g.m)]
    return push_relabel(inst, w, max(g.n, 1), mode="auto", config=config)


# --- exact driver -------------------------------------------------------------


def _bfs_path(g: DiGraph, cf: Sequence[int], delta_rem, nabla_rem):
    n = g.n
    parent = [-1] * n
    seen = [False] * n
    q = deque()
    for v in range(n):
        if delta_rem[v] > 0:
            seen[v] = True
            q.append(v)
    while q:
        v = q.popleft()
        if nabla_rem[v] > 0:
            t = v
            arcs = []
            while parent[v] != -1:
                a = parent[v]
                arcs.append(a)
                v = (g.tails if a & 1 == 0 else g.heads)[a >> 1]
            return list(reversed(arcs)), t
        for e in g.out_edges[v]:
            w = g.heads[e]
            if not seen[w] and cf[2 * e] > 0:
                seen[w] = True
                parent[w] = 2 * e
                q.append(w)
        for e in g.in_edges[v]:
            w = g.tails[e]
            if not seen[w] and cf[2 * e + 1] > 0:
                seen[w] = True
                parent[w] = 2 * e + 1
                q.append(w)
    return None, -1


def driver_height(n: int, eta: int, phi: Fraction, config: SolverConfig) -> int:
    # capped at n^2: weights never exceed n, so beyond n^2 every simple
    # path already counts as short and a larger height only adds relabels
    nominal = config.c_h * n * (eta ** 2) * math.log(max(n, 2)) / float(phi)
    return max(n, min(math.ceil(nominal), n * n))


def max_flow_exact(inst: FlowInstance, phi: Optional[Fraction] = None,
                   seed: int = 0, config: SolverConfig = DEFAULT_CONFIG) -> SolveResult:
    """Exact maximum flow via hierarchy-guided augmentation.

    With config.reuse_hierarchy the previous iteration's edge levels are
    carried over to surviving residual arcs (fresh arcs join the acyclic
    part) and rebuilt only when that projection no longer validates.
    """
    g = inst.g
    n, m = g.n, g.m
    phi = phi if phi is not None else default_phi(n)
    base = random.Random(seed)
    f = Flow.zero(m)
    stats = SolveStats(value=0)
    prev_levels: Optional[dict] = None  # arc id -> level of last hierarchy
    while True:
        res = residual(inst, f)
        arcs_path, _sink = _bfs_path(g, res.arc_cap, res.delta_f, res.nabla_f)
        if arcs_path is None:
            break
        stats.iterations += 1
        # materialize the residual graph: one edge per usable arc
        arc_ids = [a for a in range(2 * m) if res.arc_cap[a] > 0]
        pairs = []
        for a in arc_ids:
            e = a >> 1
            if a & 1:
                pairs.append((g.heads[e], g.tails[e]))
            else:
                pairs.append((g.tails[e], g.heads[e]))
        rg = DiGraph(n, pairs)
        rcaps = [res.arc_cap[a] for a in arc_ids]
        rinst = FlowInstance(rg, rcaps, res.delta_f, res.nabla_f)
        # validation inside the driver runs with the builder's (lighter)
        # falsification budget: exactness never depends on it thanks to the
        # safety net, and a failed build just costs one plain augmentation
        drv_cfg = config.with_(
            validator_falsifier_cuts=min(config.validator_falsifier_cuts,
                                         config.builder_falsifier_cuts))
        r = None
        try:
            hier = None
            if config.reuse_hierarchy and prev_levels is not None:
                hier = _project_hierarchy(rg, rcaps, arc_ids, prev_levels,
                                          phi, drv_cfg)
            if hier is None:
                build = build_hierarchy(rg, rcaps, phi, base.getrandbits(64),
                                        drv_cfg)
                hier = build.hierarchy
            if config.reuse_hierarchy:
                lv = hier.level_of(rg.m)
                prev_levels = {arc_ids[i]: lv[i] for i in range(rg.m)}
            w = induced_weights(rg, hier.tau)
            h = driver_height(n, max(hier.eta, 1), phi, config)
            r = push_relabel(rinst, w, h, mode="capacitated", config=config)
            stats.augmentations += r.augment_count
            stats.relabels += r.relabel_climbs
        except BuildFailedError:
            stats.build_failures += 1
        if r is None or r.value == 0:
            # safety net: one shortest augmentation keeps progress unconditional
            stats.safety_net_hits += 1
            amt = min(res.delta_f[(g.tails if arcs_path[0] & 1 == 0 else g.heads)[arcs_path[0] >> 1]],
                      res.nabla_f[_sink])
            for a in arcs_path:
                amt = min(amt, res.arc_cap[a])
            for a in arcs_path:
                e = a >> 1
                f.values[e] += -amt if a & 1 else amt
            stats.augmentations += 1
        else:
            for ridx, a in enumerate(arc_ids):
                x = r.flow.values[ridx]
                if x:
                    e = a >> 1
                    f.values[e] += -x if a & 1 else x
    stats.value = flow_stats(inst, f).value
    return SolveResult(f, stats)


# --- capacity scaling ---------------------------------------------------------


def capacity_scaled_max_flow(inst: FlowInstance,
                             inner: Callable[[FlowInstance], Flow]) -> SolveResult:
    """Bit-by-bit scaling from the most significant capacity bit.

    Each phase doubles the current flow, solves the residual instance
    (whose value is at most n^2, asserted) with capacities capped at n^2,
    and adds the correction.  Phase count is ceil(log2 U) + 1.
    """
    g = inst.g
    n, m = g.n, g.m
    u = max([1] + list(inst.cap) + list(inst.delta) + list(inst.nabla))
    k = (u - 1).bit_length() + 1 if u >= 1 else 1
    n2 = max(n * n, 1)
    f = Flow.zero(m)
    stats = SolveStats(value=0, phases=k)
    for b in range(1, k + 1):
        shift = k - b
        cap_b = [c >> shift for c in inst.cap]
        delta_b = [d >> shift for d in inst.delta]
        nabla_b = [s >> shift for s in inst.nabla]
        if b > 1:
            for e in range(m):
                f.values[e] *= 2
        inst_b = FlowInstance(g, cap_b, delta_b, nabla_b)
        st = flow_stats(inst_b, f)
        # residual instance, materialized with capacities capped at n^2
        arc_ids = []
        pairs = []
        rcaps = []
        for e in range(m):
            fwd = cap_b[e] - f.values[e]
            if fwd > 0:
                arc_ids.append(2 * e)
                pairs.append((g.tails[e], g.heads[e]))
                rcaps.append(min(fwd, n2))
            if f.values[e] > 0:
                arc_ids.append(2 * e + 1)
                pairs.append((g.heads[e], g.tails[e]))
                rcaps.append(min(f.values[e], n2))
        rg = DiGraph(n, pairs)
        nabla_f = [inst_b.nabla[v] - st.absorption[v] for v in range(n)]
        rinst = FlowInstance(rg, rcaps, st.excess, nabla_f)
        corr = inner(rinst)
        val = flow_stats(rinst, corr).value
        if val > n2:
            raise AssertionError(
                f"phase {b} residual flow value {val} exceeds n^2 = {n2}")
        stats.phase_values.append(val)
        for ridx, a in enumerate(arc_ids):
            x = corr.values[ridx]
            if x:
                e = a >> 1
                f.values[e] += -x if a & 1 else x
    stats.value = flow_stats(inst, f).value
    return SolveResult(f, stats)


def ek_solver(inst: FlowInstance) -> Flow:
    return edmonds_karp(inst).flow


def exact_solver(phi: Optional[Fraction] = None, seed: int = 0,
                 config: SolverConfig = DEFAULT_CONFIG) -> Callable[[FlowInstance], Flow]:
    def solve(inst: FlowInstance) -> Flow:
        return max_flow_exact(inst, phi, seed, config).flow
    return solve
