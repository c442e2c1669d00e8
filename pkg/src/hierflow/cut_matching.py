"""Cut-matching game: certify that a terminal edge set expands, or find
a balanced sparse cut.

The cut player keeps a low-dimensional random-projection sketch of lazy
averaging walks: each terminal-degree unit of a vertex carries a sketch
vector, fresh random directions project them each round, and the routed
matchings average the sketches across their endpoints (half stays, half
crosses).  The matching player answers bisections with the sparse-cut
subroutine at congestion kappa = ceil(2 c_kappa / phi), retrying on
residual demand; a round may leave a small unrouted remainder that is
accounted as fake volume against the budget R rather than materialized
as edges.

A component certifies early when brute force already confirms expansion
(exactly on small components, by failing falsification on large ones);
the full round budget runs when that shortcut is disabled.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import CutCheckFailedError, NotStronglyConnectedError
from .graph import DiGraph, Flow, FlowInstance, decompose_paths, flow_stats, scc
from .hierarchy import Hierarchy, exhaustive_worst_cut, sampled_sparse_cut
from .sparse_cut import sparse_cut, terminal_weights


@dataclass
class CMGState:
    """Mutable cut-player state across rounds."""

    nu: List[int]
    rng: random.Random
    t_cmg: int
    sketch: Dict[int, List[float]] = field(default_factory=dict)
    matchings: List[List[Tuple[int, int, int]]] = field(default_factory=list)
    rounds_played: int = 0

    def __post_init__(self):
        n = len(self.nu)
        k = max(1, math.ceil(math.log(max(n, 2))))
        for v in range(n):
            if self.nu[v] > 0:
                self.sketch[v] = [self.rng.gauss(0.0, 1.0) for _ in range(k)]


def rounds_budget(n: int, nu: Sequence[int], config: SolverConfig) -> int:
    u = max(1, max(nu, default=1))
    return max(1, math.ceil(config.c_t * math.log(max(n, 2) * u) ** 2))


def retry_budget(n: int) -> int:
    return max(1, math.ceil(20 * math.log(max(n, 2))))


def cut_player_bisection(state: CMGState) -> Tuple[List[int], List[int]]:
    """Project sketches on a fresh direction and split at the weighted
    median, so that ||nu_A|| <= ||nu_B|| and nu_A + nu_B <= nu."""
    n = len(state.nu)
    nu_a = [0] * n
    nu_b = [0] * n
    active = [v for v in range(n) if state.nu[v] > 0]
    if not active:
        return nu_a, nu_b
    k = len(next(iter(state.sketch.values())))
    direction = [state.rng.gauss(0.0, 1.0) for _ in range(k)]
    proj = {v: sum(a * b for a, b in zip(state.sketch[v], direction)) for v in active}
    active.sort(key=lambda v: (proj[v], v))
    total = sum(state.nu[v] for v in active)
    target = total // 2
    acc = 0
    for v in active:
        take = min(state.nu[v], target - acc)
        if take > 0:
            nu_a[v] = take
            acc += take
        nu_b[v] = state.nu[v] - take if take > 0 else state.nu[v]
        # a straddling vertex contributes to both sides
    return nu_a, nu_b


def absorb_matching(state: CMGState, matching: List[Tuple[int, int, int]]) -> None:
    """Average the sketches across the matching: half stays, half crosses."""
    if not matching:
        state.matchings.append([])
        state.rounds_played += 1
        return
    k = len(next(iter(state.sketch.values())))
    part = {v: 0 for v in state.sketch}
    for a, b, c in matching:
        part[a] += c
        part[b] += c
    acc = {}
    for v, x in state.sketch.items():
        stay = state.nu[v] - part[v] / 2.0
        acc[v] = [stay * xi for xi in x]
    for a, b, c in matching:
        xa, xb = state.sketch[a], state.sketch[b]
        half = c / 2.0
        va, vb = acc[a], acc[b]
        for i in range(k):
            va[i] += half * xb[i]
            vb[i] += half * xa[i]
    for v in acc:
        nu = state.nu[v]
        state.sketch[v] = [x / nu for x in acc[v]]
    state.matchings.append(matching)
    state.rounds_played += 1


def union_psi(n: int, matchings, r_vec: Sequence[int],
              threshold: int) -> Optional[Fraction]:
    """Worst cut ratio of the matching union (with fake mass in volumes).

    Exact only up to `threshold` participating vertices; None above, and
    None when the union has no cut with volume on both sides.
    """
    agg: Dict[Tuple[int, int], int] = {}
    for matching in matchings:
        for a, b, c in matching:
            agg[(a, b)] = agg.get((a, b), 0) + c
    verts = sorted({v for ab in agg for v in ab} | {v for v in range(n) if r_vec[v] > 0})
    if len(verts) <= 1:
        return None
    if len(verts) > threshold:
        return None
    edges = [(a, b, c) for (a, b), c in sorted(agg.items())]
    volw = {v: r_vec[v] for v in verts}
    for a, b, c in edges:
        volw[a] += c
        volw[b] += c
    ratio, _side = exhaustive_worst_cut(verts, edges, volw)
    return ratio


@dataclass
class Certificate:
    phi: Fraction
    psi_measured: Optional[Fraction]
    rounds: int
    r_used: int
    early: bool


@dataclass
class CutOrEmbedOutcome:
    cut: Optional[List[int]]
    vol_f_side: int = 0
    vol_f_total: int = 0
    boundary_out: int = 0
    boundary_in: int = 0
    certificate: Optional[Certificate] = None
    state: Optional[CMGState] = None


def _terminal_degrees(g: DiGraph, cap, f_edges) -> List[int]:
    deg = [0] * g.n
    for e in f_edges:
        deg[g.tails[e]] += cap[e]
        deg[g.heads[e]] += cap[e]
    return deg


def _brute_force_check(g, cap, f_edges, phi, deg_f, rng, config):
    """(certified, witness_side): exact on small graphs, falsification
    above; (False, None) means unknown."""
    edges = [(g.tails[e], g.heads[e], cap[e]) for e in range(g.m)]
    volw = {v: deg_f[v] for v in range(g.n)}
    if g.n <= config.exact_cut_threshold:
        ratio, side = exhaustive_worst_cut(range(g.n), edges, volw)
        if ratio is None or ratio >= phi:
            return True, None
        return False, side
    side = sampled_sparse_cut(range(g.n), edges, volw, phi, rng,
                              config.builder_falsifier_cuts)
    if side is not None:
        return False, side
    return None, None  # silence: no refutation, no proof


def cut_or_embed(
    g: DiGraph,
    cap: Sequence[int],
    f_edges: Set[int],
    phi: Fraction,
    r_budget: int,
    hier: Hierarchy,
    rng: random.Random,
    config: SolverConfig = DEFAULT_CONFIG,
) -> CutOrEmbedOutcome:
    """Certify f_edges as expanding in (g, cap) or return a sparse cut.

    The cut branch side S satisfies min-direction sparsity below
    phi * vol_F(S) and r_budget/(4 t) <= vol_F(S) <= vol_F(V)/2; both are
    checked before returning, never assumed.
    """
    n = g.n
    if n > 1 and len(scc(g)) != 1:
        raise NotStronglyConnectedError("cut_or_embed needs a strongly connected graph")
    deg_f = _terminal_degrees(g, cap, f_edges)
    vol_total = sum(deg_f)
    if vol_total * phi.numerator < phi.denominator or n <= 1:
        # tiny total volume expands unconditionally
        return CutOrEmbedOutcome(None, 0, vol_total,
                                 certificate=Certificate(phi, None, 0, 0, True))
    state = CMGState(deg_f, rng, rounds_budget(n, deg_f, config))
    r_vec = [0] * n
    r_used = 0
    w_g = terminal_weights(g, f_edges, hier)
    kappa = max(1, math.ceil(2 * config.c_kappa / float(phi)))
    z = retry_budget(n)
    t_cmg = state.t_cmg

    def finish(early: bool) -> CutOrEmbedOutcome:
        psi = union_psi(n, state.matchings, r_vec, config.exact_cut_threshold)
        return CutOrEmbedOutcome(
            None, 0, vol_total,
            certificate=Certificate(phi, psi, state.rounds_played, r_used, early),
            state=state)

    def try_cut(side: List[int]) -> Optional[CutOrEmbedOutcome]:
        sset = set(side)
        vol_s = sum(deg_f[v] for v in side)
        if 2 * vol_s > vol_total:
            side = [v for v in range(n) if v not in sset]
            sset = set(side)
            vol_s = vol_total - vol_s
        b_out = b_in = 0
        for e in range(g.m):
            tu, tv = g.tails[e] in sset, g.heads[e] in sset
            if tu and not tv:
                b_out += cap[e]
            elif tv and not tu:
                b_in += cap[e]
        ok = (min(b_out, b_in) * phi.denominator < phi.numerator * vol_s
              and 4 * t_cmg * vol_s >= r_budget
              and vol_s >= 1)
        if not ok:
            return None
        return CutOrEmbedOutcome(sorted(side), vol_s, vol_total, b_out, b_in, state=state)

    if config.cmg_early_exit:
        verdict, witness = _brute_force_check(g, cap, f_edges, phi, deg_f, rng, config)
        if verdict is True:
            return finish(early=True)
        if witness is not None:
            out = try_cut(witness)
            if out is not None:
                return out

    while state.rounds_played < t_cmg:
        nu_a, nu_b = cut_player_bisection(state)
        delta = list(nu_a)
        nabla = list(nu_b)
        demand0 = sum(delta)
        tol2 = r_budget  # remainder rem is fake-tolerable when 2*t*rem <= R
        round_flow = Flow.zero(g.m)
        stuck = None
        for _attempt in range(z):
            rem = sum(delta)
            if rem == 0 or 2 * t_cmg * rem <= tol2:
                break
            inst = FlowInstance(g, list(cap), delta, nabla)
            out = sparse_cut(inst, kappa, f_edges, hier, config, weights=w_g,
                             phi=phi, check_connected=False)
            if 2 * out.value < rem:
                branch = try_cut(out.cut)
                if branch is not None:
                    return branch
                if out.value == 0:
                    stuck = "cut check failed with zero routed flow"
                    break
            st = flow_stats(inst, out.flow)
            for e in range(g.m):
                round_flow.values[e] += out.flow.values[e]
            delta = list(st.excess)
            nabla = [nabla[v] - st.absorption[v] for v in range(n)]
        rem = sum(delta)
        if stuck or 2 * t_cmg * rem > tol2:
            raise CutCheckFailedError(
                stuck or f"round left {rem} of {demand0} unrouted beyond the fake budget")
        if rem:
            r_used += 2 * rem  # fake edges count at both endpoints
            for v in range(n):
                r_vec[v] += delta[v]
        # matching = grouped path decomposition of the round flow
        matching: Dict[Tuple[int, int], int] = {}
        if any(round_flow.values):
            inst0 = FlowInstance(g, [kappa * z * c for c in cap], nu_a, nu_b)
            paths, _cycles = decompose_paths(inst0, round_flow)
            for arcs, amt in paths:
                a = g.tails[arcs[0]]
                b = g.heads[arcs[-1]]
                key = (a, b)
                matching[key] = matching.get(key, 0) + amt
        absorb_matching(state, sorted((a, b, c) for (a, b), c in matching.items()))
        if config.cmg_early_exit:
            verdict, witness = _brute_force_check(g, cap, f_edges, phi, deg_f, rng, config)
            if verdict is True or verdict is None:
                return finish(early=True)
            if witness is not None:
                out = try_cut(witness)
                if out is not None:
                    return out
    return finish(early=False)
