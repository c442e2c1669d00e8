"""Bottom-up expander-hierarchy construction.

The builder grows levels from the terminal set downward-up: level one
decomposes with every edge as a terminal, each later level decomposes
with the previous separator as its terminal set.  Components are handled
by the cut-matching game; every returned cut removes the sparser
direction of its boundary, and when that direction contains non-terminal
edges (a non-nested cut) the lower hierarchy of both sides is rebuilt
from scratch.  The final output is re-validated by brute force, with
fresh-seed retries, so correctness rests on the validator rather than on
any maintenance argument.
"""
from __future__ import annotations

import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .config import DEFAULT_CONFIG, SolverConfig, default_phi
from .cut_matching import CutOrEmbedOutcome, cut_or_embed
from .errors import BuildFailedError, CutCheckFailedError, IterationCapExceededError
from .graph import DiGraph, scc_subgraph
from .hierarchy import Hierarchy, respecting_topo_order, validate_hierarchy


@dataclass
class Parts:
    """Partition-in-progress: D plus levels, over some edge subset."""

    d: Set[int] = field(default_factory=set)
    levels: List[Set[int]] = field(default_factory=list)

    def covered(self) -> Set[int]:
        out = set(self.d)
        for x in self.levels:
            out |= x
        return out

    def restrict(self, edge_subset: Set[int]) -> "Parts":
        return Parts(self.d & edge_subset,
                     [x & edge_subset for x in self.levels])

    def compact(self) -> "Parts":
        return Parts(set(self.d), [x for x in self.levels if x])


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.cap:
            raise IterationCapExceededError(
                f"{self.used} recursive cut events exceed the cap {self.cap}")


@dataclass
class BuildResult:
    hierarchy: Hierarchy
    log: List[str]
    attempts: int
    effective_phi: Fraction


class _SubView:
    """Reindexed subgraph over a vertex/edge subset."""

    def __init__(self, g: DiGraph, cap: Sequence[int], vertices: List[int],
                 edge_ids: List[int]):
        self.vmap = {v: i for i, v in enumerate(vertices)}
        self.vertices = vertices
        self.edge_ids = edge_ids
        self.g = DiGraph(len(vertices),
                         [(self.vmap[g.tails[e]], self.vmap[g.heads[e]]) for e in edge_ids])
        self.cap = [cap[e] for e in edge_ids]
        self.emap = {e: i for i, e in enumerate(edge_ids)}

    def to_global_vertices(self, local: Sequence[int]) -> List[int]:
        return [self.vertices[v] for v in local]

    def local_edge_set(self, global_ids: Set[int]) -> Set[int]:
        return {self.emap[e] for e in global_ids if e in self.emap}


def _sub_hierarchy(view: _SubView, parts: Parts) -> Hierarchy:
    """Reindexed hierarchy of the piece's non-terminal edges."""
    d = view.local_edge_set(parts.d)
    levels = [view.local_edge_set(x) for x in parts.levels]
    levels = [x for x in levels if x]
    # any non-terminal edge not placed by parts would be a bookkeeping bug
    tau = respecting_topo_order(view.g, d, levels)
    return Hierarchy(d, levels, tau)


def _decompose(g: DiGraph, cap, vertices: List[int], edge_ids: Set[int],
               f_edges: Set[int], below: Parts, phi: Fraction,
               rng: random.Random, config: SolverConfig, budget: _Budget,
               log: List[str], level_no: int) -> Tuple[Set[int], Parts]:
    """Carve a separator out of (vertices, edge_ids) so the terminals
    expand in what remains; returns (removed, partition of the rest)."""
    removed: Set[int] = set()
    parts = Parts()
    pieces = scc_subgraph(vertices, [(g.tails[e], g.heads[e]) for e in edge_ids])
    by_vertex: Dict[int, int] = {}
    for i, piece in enumerate(pieces):
        for v in piece:
            by_vertex[v] = i
    piece_edges: List[List[int]] = [[] for _ in pieces]
    for e in sorted(edge_ids):
        pu, pv = by_vertex[g.tails[e]], by_vertex[g.heads[e]]
        if pu == pv:
            piece_edges[pu].append(e)
        # cross edges fall through to D at assembly
    order = sorted(range(len(pieces)), key=lambda i: (len(pieces[i]), min(pieces[i])))
    for i in order:
        piece = sorted(pieces[i])
        edges_here = piece_edges[i]
        f_here = {e for e in edges_here if e in f_edges}
        lower_here = {e for e in edges_here if e not in f_edges}
        below_here = below.restrict(lower_here).compact()
        if not f_here:
            parts.d |= below_here.d
            _merge_levels(parts, below_here.levels)
            continue
        view = _SubView(g, cap, piece, edges_here)
        hier = _sub_hierarchy(view, below_here)
        seed = rng.getrandbits(64)
        outcome = cut_or_embed(view.g, view.cap, view.local_edge_set(f_here),
                               phi, 0, hier, random.Random(seed), config)
        if outcome.cut is None:
            cert = outcome.certificate
            log.append(
                f"level={level_no} event=certify component={len(piece)} "
                f"rounds={cert.rounds} early={int(cert.early)}")
            merged = below_here.compact()
            _merge_levels(parts, merged.levels + [set(f_here)])
            parts.d |= merged.d
            continue
        budget.tick()
        side_local = outcome.cut
        side = set(view.to_global_vertices(side_local))
        other = [v for v in piece if v not in side]
        if outcome.boundary_out <= outcome.boundary_in:
            rem_dir = {e for e in edges_here
                       if g.tails[e] in side and g.heads[e] not in side}
        else:
            rem_dir = {e for e in edges_here
                       if g.heads[e] in side and g.tails[e] not in side}
        removed |= rem_dir
        non_nested = {e for e in rem_dir if e not in f_edges}
        log.append(
            f"level={level_no} event=cut component={len(piece)} side={len(side)} "
            f"removed={len(rem_dir)} nonnested={len(non_nested)}")
        for sub_vertices in sorted((sorted(side), other), key=len):
            if not sub_vertices:
                continue
            sv = set(sub_vertices)
            sub_edges = {e for e in edges_here
                         if e not in rem_dir and g.tails[e] in sv and g.heads[e] in sv}
            sub_f = {e for e in sub_edges if e in f_edges}
            sub_lower = sub_edges - sub_f
            if non_nested:
                log.append(
                    f"level={level_no} event=rebuild component={len(sub_vertices)} "
                    f"edges={len(sub_lower)}")
                sub_below = _full_build(g, cap, sub_vertices, sub_lower, phi,
                                        rng, config, budget, log)
            else:
                sub_below = below.restrict(sub_lower).compact()
            rem2, parts2 = _decompose(g, cap, sub_vertices, sub_edges, sub_f,
                                      sub_below, phi, rng, config, budget, log,
                                      level_no)
            removed |= rem2
            parts.d |= parts2.d
            _merge_levels(parts, parts2.levels)
    # everything surviving but unplaced runs between pieces: DAG edges
    leftover = (edge_ids - removed) - parts.covered()
    parts.d |= leftover
    return removed, parts


def _merge_levels(parts: Parts, levels: Sequence[Set[int]]) -> None:
    for i, x in enumerate(levels):
        if not x:
            continue
        while len(parts.levels) <= i:
            parts.levels.append(set())
        parts.levels[i] |= x


def _full_build(g: DiGraph, cap, vertices: List[int], edge_ids: Set[int],
                phi: Fraction, rng: random.Random, config: SolverConfig,
                budget: _Budget, log: List[str]) -> Parts:
    """Complete hierarchy of (vertices, edge_ids) built from scratch."""
    if not edge_ids:
        return Parts()
    m = max(len(edge_ids), 1)
    eta_cap = math.ceil(2 * math.log(4 * m) / math.log(1 / float(phi)))
    eta_cap = max(eta_cap, 1)
    f_cur: Set[int] = set(edge_ids)
    parts = Parts()
    level_no = 0
    while f_cur:
        level_no += 1
        if level_no > eta_cap + 1:
            raise IterationCapExceededError(
                f"level count exceeded cap {eta_cap} while terminals remain")
        removed, parts = _decompose(g, cap, list(vertices), set(edge_ids), f_cur,
                                    parts, phi, rng, config, budget, log, level_no)
        f_cur = removed
    return parts


def expander_decompose(g: DiGraph, cap: Sequence[int], f_edges: Set[int],
                       phi: Fraction, below: Hierarchy, seed: int,
                       config: SolverConfig = DEFAULT_CONFIG,
                       log: Optional[List[str]] = None) -> Set[int]:
    """Separator X such that the terminals expand in the graph without X.

    `below` must partition the non-terminal edges.  Components are
    decomposed independently; every cut removes one boundary direction.
    """
    log = log if log is not None else []
    budget = _Budget(50 * math.ceil(math.log2(max(g.m, 2))))
    below_parts = Parts(set(below.d), [set(x) for x in below.levels])
    rng = random.Random(seed)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20000))
    try:
        removed, _parts = _decompose(g, cap, list(range(g.n)), set(range(g.m)),
                                     set(f_edges), below_parts, phi, rng, config,
                                     budget, log, 1)
    finally:
        sys.setrecursionlimit(old_limit)
    return removed


def build_hierarchy(g: DiGraph, cap: Sequence[int], phi: Optional[Fraction] = None,
                    seed: int = 0, config: SolverConfig = DEFAULT_CONFIG,
                    validate: bool = True) -> BuildResult:
    """Construct a hierarchy of (g, cap) and brute-force validate it.

    Retries with fresh seeds when validation refutes a component; raises
    BuildFailedError when the retry budget runs out.
    """
    phi = phi if phi is not None else default_phi(g.n)
    base = random.Random(seed)
    log: List[str] = []
    last_report = None
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20000))
    try:
        for attempt in range(1, config.build_retries + 1):
            attempt_seed = base.getrandbits(64)
            rng = random.Random(attempt_seed)
            budget = _Budget(50 * math.ceil(math.log2(max(g.m, 2))))
            # a refuted attempt was certified too optimistically on some large
            # component; escalate the falsification budget so retries converge
            att_cfg = config if attempt == 1 else config.with_(
                builder_falsifier_cuts=config.builder_falsifier_cuts * 4 ** (attempt - 1))
            try:
                parts = _full_build(g, cap, list(range(g.n)), set(range(g.m)),
                                    phi, rng, att_cfg, budget, log)
            except (IterationCapExceededError, CutCheckFailedError) as exc:
                log.append(f"attempt={attempt} event=abort reason={type(exc).__name__}")
                continue
            parts = parts.compact()
            tau = respecting_topo_order(g, parts.d, parts.levels)
            hier = Hierarchy(parts.d, parts.levels, tau)
            if not validate:
                return BuildResult(hier, log, attempt, phi)
            report = validate_hierarchy(g, cap, hier, phi, att_cfg,
                                        random.Random(attempt_seed ^ 0xA5A5))
            for i, x in enumerate(hier.levels):
                log.append(f"attempt={attempt} level={i + 1} capacity={sum(cap[e] for e in x)}")
            if report.ok:
                return BuildResult(hier, log, attempt, phi)
            last_report = report
            log.append(f"attempt={attempt} event=invalid errors={len(report.errors)}")
    finally:
        sys.setrecursionlimit(old_limit)
    witness = None
    if last_report is not None:
        for c in last_report.components:
            if not c.ok:
                witness = c.witness
                break
    raise BuildFailedError(
        f"no valid hierarchy after {config.build_retries} attempts",
        component=None, witness=witness)
