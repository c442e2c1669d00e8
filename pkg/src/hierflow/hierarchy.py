"""Edge-partition hierarchies, respecting topological orders, induced
weights and a brute-force validity checker.

A hierarchy splits the edge ids into an acyclic part D and levels
X_1..X_eta, where every level-i edge sits inside a strongly connected
component of the graph with all higher levels removed, and the level-i
edges expand inside those components.  The respecting order tau makes
every D edge point forward and keeps each component's tau values
contiguous at every level; the weight of an edge is |tau_v - tau_u|.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import LevelViolationError, NotAcyclicError, ParseError
from .graph import DiGraph, scc_subgraph


@dataclass
class Hierarchy:
    """Partition (D, X_1..X_eta) of edge ids plus a respecting order tau.

    tau[v] is 1-based; levels[i] holds level i+1.
    """

    d: Set[int]
    levels: List[Set[int]]
    tau: List[int]

    @property
    def eta(self) -> int:
        return len(self.levels)

    def level_of(self, m: int) -> List[int]:
        """Per-edge level; 0 means D, missing edges get -1."""
        lv = [-1] * m
        for e in self.d:
            lv[e] = 0
        for i, xs in enumerate(self.levels):
            for e in xs:
                lv[e] = i + 1
        return lv

    def edge_count(self) -> int:
        return len(self.d) + sum(len(x) for x in self.levels)


def respecting_topo_order(g: DiGraph, d: Set[int], levels: Sequence[Set[int]],
                          vertices: Optional[Iterable[int]] = None) -> List[int]:
    """Compute a respecting topological order for the partition.

    Works per level from the top: split into strongly connected
    components, order them topologically, hand each component a
    contiguous block, then recurse inside with the top level dropped.
    Raises NotAcyclicError if D has a cycle, LevelViolationError if a
    level edge crosses components of its level graph.
    """
    n = g.n
    verts = list(range(n)) if vertices is None else list(vertices)
    tau = [0] * n
    eta = len(levels)
    level_sets = [set(d)] + [set(x) for x in levels]
    edge_level: Dict[int, int] = {}
    for lv, s in enumerate(level_sets):
        for e in s:
            edge_level[e] = lv
    next_val = 1

    # frames: (vertex list, active edge ids, level index); pushing the
    # components of a frame in reverse topological order makes the stack
    # pop them topologically, so tau values grow contiguously per block
    work = [(verts, sorted(edge_level), eta)]
    while work:
        comp_verts, comp_edges, k = work.pop()
        if k == 0:
            comps = scc_subgraph(comp_verts, [(g.tails[e], g.heads[e]) for e in comp_edges])
            if any(len(c) > 1 for c in comps):
                bad = next(c for c in comps if len(c) > 1)
                raise NotAcyclicError(f"D contains a cycle through {sorted(bad)}")
            for comp in reversed(comps):
                tau[comp[0]] = next_val
                next_val += 1
            continue
        comps = scc_subgraph(comp_verts, [(g.tails[e], g.heads[e]) for e in comp_edges])
        comp_id: Dict[int, int] = {}
        for i, comp in enumerate(comps):
            for v in comp:
                comp_id[v] = i
        edges_in: List[List[int]] = [[] for _ in comps]
        for e in comp_edges:
            cu, cv = comp_id[g.tails[e]], comp_id[g.heads[e]]
            lv = edge_level[e]
            if cu != cv:
                # only D edges may run between components of a level graph
                if lv >= 1:
                    raise LevelViolationError(
                        f"level-{lv} edge {e} crosses components at level {k}")
            elif lv != k:
                edges_in[cu].append(e)
            else:
                # level-k edge inside its component: consumed at this level
                pass
        for i, comp in enumerate(comps):
            work.append((comp, edges_in[i], k - 1))
    return tau


def induced_weights(g: DiGraph, tau: Sequence[int]) -> List[int]:
    """Per-edge weight |tau_v - tau_u|; positive whenever tau is a permutation."""
    return [abs(tau[g.heads[e]] - tau[g.tails[e]]) for e in range(g.m)]


# --- sparsity predicates -----------------------------------------------------


def degrees_for(n: int, edges: Sequence[Tuple[int, int, int]]) -> List[int]:
    """Capacitated degree of each vertex over the given (u, v, c) edges."""
    deg = [0] * n
    for u, v, c in edges:
        deg[u] += c
        deg[v] += c
    return deg


class CutScanner:
    """Incremental boundary/volume bookkeeping over a fixed component.

    Vertices are the component's, edges the surviving subgraph's, volume
    weights an arbitrary nonnegative vertex vector (capacitated terminal
    degrees in hierarchy checks, witness degrees when measuring a
    matching union).
    """

    def __init__(self, vertices: Sequence[int], edges: Sequence[Tuple[int, int, int]],
                 vol_weight: Dict[int, int]):
        self.vertices = list(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.k = len(self.vertices)
        self.edges = list(edges)
        self.volw = [vol_weight.get(v, 0) for v in self.vertices]
        self.total_vol = sum(self.volw)
        self.inc: List[List[Tuple[int, int, int]]] = [[] for _ in range(self.k)]
        for u, v, c in self.edges:
            iu, iv = self.index[u], self.index[v]
            self.inc[iu].append((iu, iv, c))
            self.inc[iv].append((iu, iv, c))
        self.in_s = [False] * self.k
        self.out_cap = 0  # c(E(S, S-bar))
        self.in_cap = 0   # c(E(S-bar, S))
        self.vol_s = 0

    def flip(self, i: int) -> None:
        entering = not self.in_s[i]
        for iu, iv, c in self.inc[i]:
            if iu == iv:
                continue
            su, sv = self.in_s[iu], self.in_s[iv]
            if su and not sv:
                self.out_cap -= c
            elif sv and not su:
                self.in_cap -= c
        self.in_s[i] = entering
        self.vol_s += self.volw[i] if entering else -self.volw[i]
        for iu, iv, c in self.inc[i]:
            if iu == iv:
                continue
            su, sv = self.in_s[iu], self.in_s[iv]
            if su and not sv:
                self.out_cap += c
            elif sv and not su:
                self.in_cap += c

    def ratio(self) -> Optional[Fraction]:
        """Sparsity ratio of the current cut, None when volume-degenerate."""
        mv = min(self.vol_s, self.total_vol - self.vol_s)
        if mv <= 0:
            return None
        return Fraction(min(self.out_cap, self.in_cap), mv)

    def current_side(self) -> List[int]:
        return [self.vertices[i] for i in range(self.k) if self.in_s[i]]


def exhaustive_worst_cut(vertices, edges, vol_weight) -> Tuple[Optional[Fraction], Optional[List[int]]]:
    """Exact sparsest cut by enumerating all 2^(k-1) proper cuts.

    Returns (ratio, side) for the minimizing cut; (None, None) when no
    cut has positive volume on both sides.  Deterministic: gray-code
    order, strict improvement only.
    """
    sc = CutScanner(vertices, edges, vol_weight)
    k = sc.k
    if k <= 1:
        return None, None
    best: Optional[Fraction] = None
    best_side: Optional[List[int]] = None
    # last vertex stays outside S; gray code over the first k-1
    for i in range(1, 1 << (k - 1)):
        flip = (i & -i).bit_length() - 1
        sc.flip(flip)
        r = sc.ratio()
        if r is not None and (best is None or r < best):
            best = r
            best_side = sc.current_side()
    return best, best_side


def sampled_sparse_cut(vertices, edges, vol_weight, phi: Fraction, rng: random.Random,
                       budget: int) -> Optional[List[int]]:
    """Falsification-only search for a phi-sparse cut on large components.

    Tries `budget` random cuts plus every level cut of breadth-first
    labelings from random sources (forward and reverse).  Returns a
    witness side or None; None proves nothing.
    """
    verts = list(vertices)
    k = len(verts)
    if k <= 1:
        return None
    idx = {v: i for i, v in enumerate(verts)}
    deg = [vol_weight.get(v, 0) for v in verts]
    total = sum(deg)
    out_adj: List[List[Tuple[int, int]]] = [[] for _ in range(k)]
    in_adj: List[List[Tuple[int, int]]] = [[] for _ in range(k)]
    for u, v, c in edges:
        out_adj[idx[u]].append((idx[v], c))
        in_adj[idx[v]].append((idx[u], c))

    def check(side_flags) -> bool:
        volS = sum(deg[i] for i in range(k) if side_flags[i])
        mv = min(volS, total - volS)
        if mv <= 0:
            return False
        out_c = in_c = 0
        for u, v, c in edges:
            su, sv = side_flags[idx[u]], side_flags[idx[v]]
            if su and not sv:
                out_c += c
            elif sv and not su:
                in_c += c
        return min(out_c, in_c) * phi.denominator < phi.numerator * mv

    # random subsets
    for _ in range(budget):
        flags = [rng.random() < 0.5 for _ in range(k)]
        if any(flags) and not all(flags) and check(flags):
            return [verts[i] for i in range(k) if flags[i]]
    # level cuts of BFS labelings from random sources, both directions
    tries = max(2, min(k, 8))
    for _ in range(tries):
        src = rng.randrange(k)
        for adj in (out_adj, in_adj):
            dist = [-1] * k
            dist[src] = 0
            frontier = [src]
            layers = [[src]]
            while frontier:
                nxt = []
                for u in frontier:
                    for v, _c in adj[u]:
                        if dist[v] == -1:
                            dist[v] = dist[u] + 1
                            nxt.append(v)
                if nxt:
                    layers.append(nxt)
                frontier = nxt
            flags = [False] * k
            for layer in layers[:-1]:
                for u in layer:
                    flags[u] = True
                if all(flags):
                    break
                if check(flags):
                    return [verts[i] for i in range(k) if flags[i]]
    return None


# --- validation --------------------------------------------------------------


@dataclass
class ComponentCheck:
    level: int
    size: int
    exact: bool
    ok: bool
    witness: Optional[List[int]] = None
    ratio: Optional[Fraction] = None


@dataclass
class ValidationReport:
    ok: bool
    errors: List[str] = field(default_factory=list)
    components: List[ComponentCheck] = field(default_factory=list)

    def summary(self) -> str:
        lines = ["VALID" if self.ok else "INVALID"]
        lines += [f"error {e}" for e in self.errors]
        exact = sum(1 for c in self.components if c.exact)
        lines.append(f"components checked {len(self.components)} exact {exact}")
        return "\n".join(lines)


def validate_hierarchy(g: DiGraph, cap: Sequence[int], h: Hierarchy, phi: Fraction,
                       config: SolverConfig = DEFAULT_CONFIG,
                       rng: Optional[random.Random] = None,
                       check_tau: bool = True) -> ValidationReport:
    """Brute-force checks of the four structural conditions plus tau.

    Expansion is exact on components of at most config.exact_cut_threshold
    vertices (all cuts enumerated), falsification-only above.
    """
    rng = rng or random.Random(0)
    rep = ValidationReport(ok=True)
    m = g.m
    # (a) partition
    seen = [0] * m
    for e in h.d:
        seen[e] += 1
    for xs in h.levels:
        for e in xs:
            seen[e] += 1
    if any(c != 1 for c in seen):
        bad = [e for e in range(m) if seen[e] != 1][:5]
        rep.ok = False
        rep.errors.append(f"partition broken at edges {bad}")
        return rep
    # (b) D acyclic
    comps = scc_subgraph(range(g.n), [(g.tails[e], g.heads[e]) for e in h.d])
    if any(len(c) > 1 for c in comps):
        rep.ok = False
        rep.errors.append("D has a cycle")
    # (c) containment and (d) expansion, level by level
    level_sets = [set(h.d)] + [set(x) for x in h.levels]
    eta = len(h.levels)
    active: Set[int] = set(h.d)
    for i in range(1, eta + 1):
        active |= level_sets[i]
        comps = scc_subgraph(range(g.n), [(g.tails[e], g.heads[e]) for e in active])
        comp_id = {}
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_id[v] = ci
        members: Dict[int, List[int]] = {}
        for e in level_sets[i]:
            cu, cv = comp_id[g.tails[e]], comp_id[g.heads[e]]
            if cu != cv:
                rep.ok = False
                rep.errors.append(f"level-{i} edge {e} not inside one component")
                continue
            members.setdefault(cu, []).append(e)
        for ci, f_edges in sorted(members.items()):
            comp = comps[ci]
            comp_set = set(comp)
            sub_edges = [(g.tails[e], g.heads[e], cap[e]) for e in active
                         if g.tails[e] in comp_set and g.heads[e] in comp_set]
            volw: Dict[int, int] = {v: 0 for v in comp}
            for e in f_edges:
                volw[g.tails[e]] += cap[e]
                volw[g.heads[e]] += cap[e]
            if len(comp) <= config.exact_cut_threshold:
                ratio, side = exhaustive_worst_cut(comp, sub_edges, volw)
                sparse = ratio is not None and ratio < phi
                rep.components.append(ComponentCheck(
                    i, len(comp), True, not sparse,
                    sorted(side) if sparse else None, ratio))
                if sparse:
                    rep.ok = False
                    rep.errors.append(
                        f"level-{i} component of size {len(comp)} has a "
                        f"{ratio}-sparse cut (phi={phi})")
            else:
                side = sampled_sparse_cut(comp, sub_edges, volw, phi, rng,
                                          config.validator_falsifier_cuts)
                rep.components.append(ComponentCheck(
                    i, len(comp), False, side is None,
                    sorted(side) if side else None))
                if side is not None:
                    rep.ok = False
                    rep.errors.append(
                        f"level-{i} component of size {len(comp)} refuted "
                        f"by sampled cut of size {len(side)}")
    if check_tau:
        _check_tau(g, h, rep)
    return rep


def _check_tau(g: DiGraph, h: Hierarchy, rep: ValidationReport) -> None:
    n = g.n
    tau = h.tau
    if sorted(tau) != list(range(1, n + 1)):
        rep.ok = False
        rep.errors.append("tau is not a permutation of 1..n")
        return
    for e in h.d:
        if tau[g.tails[e]] >= tau[g.heads[e]]:
            rep.ok = False
            rep.errors.append(f"tau not forward on D edge {e}")
    level_sets = [set(h.d)] + [set(x) for x in h.levels]
    active: Set[int] = set(h.d)
    for i in range(1, len(level_sets)):
        active |= level_sets[i]
        comps = scc_subgraph(range(n), [(g.tails[e], g.heads[e]) for e in active])
        for comp in comps:
            vals = sorted(tau[v] for v in comp)
            if vals[-1] - vals[0] + 1 != len(vals):
                rep.ok = False
                rep.errors.append(f"tau not contiguous on a level-{i} component")


# --- serialization -----------------------------------------------------------


def hierarchy_to_text(h: Hierarchy, m: int) -> str:
    """One `<edge-id> <level>` line per edge (level 0 = D), then
    `t <vertex> <tau>` lines with 1-based vertices."""
    lv = h.level_of(m)
    lines = [f"{e} {lv[e]}" for e in range(m)]
    lines += [f"t {v + 1} {h.tau[v]}" for v in range(len(h.tau))]
    return "\n".join(lines) + "\n"


def hierarchy_from_text(text: str, g: DiGraph) -> Hierarchy:
    level_of: Dict[int, int] = {}
    tau = [0] * g.n
    seen_tau = 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "t":
            if len(parts) != 3:
                raise ParseError(no, "expected `t <vertex> <tau>`")
            v, t = int(parts[1]) - 1, int(parts[2])
            if not (0 <= v < g.n):
                raise ParseError(no, f"vertex {v + 1} out of range")
            tau[v] = t
            seen_tau += 1
        else:
            if len(parts) != 2:
                raise ParseError(no, "expected `<edge-id> <level>`")
            e, lv = int(parts[0]), int(parts[1])
            if not (0 <= e < g.m):
                raise ParseError(no, f"edge id {e} out of range")
            level_of[e] = lv
    if len(level_of) != g.m:
        raise ParseError(0, f"expected {g.m} edge lines, saw {len(level_of)}")
    if seen_tau != g.n:
        raise ParseError(0, f"expected {g.n} tau lines, saw {seen_tau}")
    eta = max(level_of.values(), default=0)
    levels = [set() for _ in range(eta)]
    d: Set[int] = set()
    for e, lv in level_of.items():
        if lv == 0:
            d.add(e)
        elif lv >= 1:
            levels[lv - 1].add(e)
        else:
            raise ParseError(0, f"negative level on edge {e}")
    return Hierarchy(d, levels, tau)
