"""Weighted push-relabel: approximate short flows guided by edge weights.

The solver maintains per-vertex integer levels.  A residual arc (u, v) of
weight w is admissible when it was examined at a level where w divides
the relabeled endpoint's level and the gap l(u) - l(v) was at least 2w
with positive residual capacity.  Vertices above 9h are dead.  The
returned flow f satisfies, for height parameter h:

  (i)   residual w-distance from any unsaturated source to any
        unsaturated sink exceeds 3h,
  (ii)  w(f) <= 9h * |f|,
  (iii) |f| is at least one sixth of the best flow of average
        w-length <= h.

Relabeling is processed one vertex at a time until it either gains an
admissible out-arc or dies.  The fast scheduler collapses such a climb
into one batch whose final labels and marks coincide with jumping level
by level; the debug scheduler really does jump level by level (to the
next multiple of an incident weight) and asserts the level invariants
after every step.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import BadInstanceError, WeightZeroError
from .forest import DynForest
from .graph import Flow, FlowInstance, flow_stats

INF = math.inf


@dataclass
class LevelLabeling:
    """Final labels of a run: levels, liveness and admissible arc marks."""

    levels: List[int]
    alive: List[bool]
    admissible: List[bool]  # per arc id (2e forward, 2e+1 backward)
    h: int


@dataclass
class AugmentRecord:
    arcs: Tuple[int, ...]
    amount: int
    w_length: int
    labels: Optional[Tuple[int, ...]] = None


@dataclass
class PushRelabelResult:
    flow: Flow
    labels: LevelLabeling
    augmentations: List[AugmentRecord]
    value: int
    edge_saturations: List[int]
    edge_flips: List[int]
    relabel_climbs: int
    relabel_landings: int
    levels_visited: List[int]
    delta_residual: List[int]
    nabla_residual: List[int]
    augment_count: int = 0
    relabel_events: Optional[List[Tuple[int, int, int]]] = None  # debug only


def push_relabel(
    inst: FlowInstance,
    w: Sequence[int],
    h: int,
    mode: str = "auto",
    config: SolverConfig = DEFAULT_CONFIG,
) -> PushRelabelResult:
    """Run weighted push-relabel on a diffusion instance.

    mode: "unit" walks paths explicitly (meant for unit capacities),
    "capacitated" drives augmentation through a dynamic forest, "auto"
    picks by inspecting the capacities.
    """
    if inst.total_source() > inst.total_sink():
        raise BadInstanceError("supply exceeds sink capacity; not a diffusion instance")
    if h < 1:
        raise BadInstanceError(f"height parameter must be positive, got {h}")
    m = inst.m
    if len(w) != m:
        raise BadInstanceError("weight vector length differs from edge count")
    for e in range(m):
        if w[e] <= 0:
            raise WeightZeroError(f"edge {e} has non-positive weight {w[e]}")
    if mode == "auto":
        mode = "unit" if all(c <= 1 for c in inst.cap) else "capacitated"
    if mode not in ("unit", "capacitated"):
        raise ValueError(f"unknown mode {mode!r}")
    return _Engine(inst, w, h, mode, config).run()


class _Engine:
    def __init__(self, inst, w, h, mode, config):
        self.inst = inst
        self.w = list(w)
        self.h = h
        self.nine_h = 9 * h
        self.mode = mode
        self.cfg = config
        g = inst.g
        n, m = g.n, g.m
        self.n, self.m = n, m
        self.arc_tail = [0] * (2 * m)
        self.arc_head = [0] * (2 * m)
        self.cf = [0] * (2 * m)
        for e in range(m):
            t, hd = g.tails[e], g.heads[e]
            self.arc_tail[2 * e] = t
            self.arc_head[2 * e] = hd
            self.arc_tail[2 * e + 1] = hd
            self.arc_head[2 * e + 1] = t
            self.cf[2 * e] = inst.cap[e]
        self.level = [0] * n
        self.alive = [True] * n
        self.adm = [False] * (2 * m)
        self.adm_count = [0] * n
        self.current_arc = [-1] * n  # chosen admissible out-arc (tree parent)
        self.adm_heap: List[List[int]] = [[] for _ in range(n)]
        self.delta_rem = [max(inst.delta[v] - inst.nabla[v], 0) for v in range(n)]
        self.nabla_rem = [max(inst.nabla[v] - inst.delta[v], 0) for v in range(n)]
        # arcs with tail v, sorted; and all arcs touching v, sorted
        self.out_arc_list: List[List[int]] = [[] for _ in range(n)]
        self.inc_arc_list: List[List[int]] = [[] for _ in range(n)]
        for v in range(n):
            outs = [2 * e for e in g.out_edges[v]] + [2 * e + 1 for e in g.in_edges[v]]
            outs.sort()
            self.out_arc_list[v] = outs
            inc = sorted(
                [2 * e for e in g.out_edges[v]] + [2 * e + 1 for e in g.out_edges[v]]
                + [2 * e for e in g.in_edges[v]] + [2 * e + 1 for e in g.in_edges[v]]
            )
            self.inc_arc_list[v] = inc
        self.distinct_weights: List[List[int]] = [
            sorted({self.w[a >> 1] for a in self.inc_arc_list[v]}) for v in range(n)
        ]
        self.pending: List[int] = []
        self.pending_flag = [False] * n
        self.forest = DynForest(n) if mode == "capacitated" else None
        # counters
        self.edge_sat = [0] * m
        self.edge_flip = [0] * m
        self.relabel_climbs = 0
        self.relabel_landings = 0
        self.levels_visited = [0] * n
        self.augments: List[AugmentRecord] = []
        self.relabel_events: List[Tuple[int, int, int]] = []
        self.total_supply = inst.total_source()

    # residual capacity that respects in-tree values ----------------------

    def _in_tree(self, a: int) -> bool:
        return self.forest is not None and self.current_arc[self.arc_tail[a]] == a \
            and self.forest.rep_par[self.arc_tail[a]] != -1

    def cf_of(self, a: int) -> int:
        if self.forest is not None:
            t = self.arc_tail[a]
            if self.current_arc[t] == a and self.forest.rep_par[t] != -1:
                return int(self.forest.edge_value(t))
            p = a ^ 1
            tp = self.arc_tail[p]
            if self.current_arc[tp] == p and self.forest.rep_par[tp] != -1:
                return self.inst.cap[a >> 1] - int(self.forest.edge_value(tp))
        return self.cf[a]

    # admissible bookkeeping ----------------------------------------------

    def _enqueue(self, v: int) -> None:
        if not self.pending_flag[v] and self.alive[v] and self.nabla_rem[v] == 0 \
                and self.adm_count[v] == 0:
            self.pending_flag[v] = True
            heapq.heappush(self.pending, v)

    def _select_parent(self, v: int) -> None:
        """Point current_arc[v] at the smallest valid admissible out-arc."""
        heap = self.adm_heap[v]
        while heap and not self.adm[heap[0]]:
            heapq.heappop(heap)
        if not heap:
            self.current_arc[v] = -1
            return
        a = heap[0]
        if self.forest is not None:
            # read through cf_of: mid-examination the partner arc can still
            # sit in a tree, making the raw cf entry stale
            val = self.cf_of(a)
            self.current_arc[v] = a
            self.forest.link_unchecked(v, self.arc_head[a], val)
        else:
            self.current_arc[v] = a

    def _drop_parent(self, v: int) -> None:
        """Detach v's tree edge, persisting its live residual value."""
        a = self.current_arc[v]
        self.current_arc[v] = -1
        if self.forest is not None and self.forest.rep_par[v] != -1:
            val = int(self.forest.edge_value(v))
            self.forest.cut(v)
            self.cf[a] = val
            self.cf[a ^ 1] = self.inst.cap[a >> 1] - val

    def set_mark(self, a: int, new: bool) -> None:
        if self.adm[a] == new:
            return
        self.adm[a] = new
        self.edge_flip[a >> 1] += 1
        t = self.arc_tail[a]
        if new:
            self.adm_count[t] += 1
            heapq.heappush(self.adm_heap[t], a)
            # the parent is always the smallest admissible arc, so the
            # traced structure is a pure function of the current marks
            if self.current_arc[t] == -1:
                self._select_parent(t)
            elif a < self.current_arc[t]:
                self._drop_parent(t)
                self._select_parent(t)
        else:
            self.adm_count[t] -= 1
            if self.current_arc[t] == a:
                self._drop_parent(t)
                self._select_parent(t)
            if self.adm_count[t] == 0:
                self._enqueue(t)

    # relabel ---------------------------------------------------------------

    def _die(self, v: int) -> None:
        self.level[v] = self.nine_h + 1
        self.alive[v] = False
        # marks on arcs touching a dead vertex are purged: traces can never
        # reach them and the level invariants stay strict
        for a in self.inc_arc_list[v]:
            if self.adm[a]:
                self.set_mark(a, False)

    def _stop_level(self, v: int) -> float:
        """First admissible-making level for v given frozen neighbors.

        Always strictly above the current level: an examination only
        happens at a landing, and landings go up.
        """
        best = INF
        start = self.level[v]
        lvl = self.level
        for a in self.out_arc_list[v]:
            if self.cf_of(a) <= 0:
                continue
            wa = self.w[a >> 1]
            t = lvl[self.arc_head[a]] + 2 * wa
            le = -(-t // wa) * wa  # smallest multiple of wa >= t
            if le <= start:
                le = (start // wa + 1) * wa
            if le < best:
                best = le
        return best

    def _climb(self, v: int) -> None:
        """Relabel v until it has an admissible out-arc or dies (batched)."""
        start = self.level[v]
        stop = self._stop_level(v)
        self.relabel_climbs += 1
        if stop > self.nine_h:
            for wgt in self.distinct_weights[v]:
                cross = self.nine_h // wgt - start // wgt
                self.relabel_landings += cross
                self.levels_visited[v] += cross
            self.relabel_landings += 1  # the landing that kills v
            self.levels_visited[v] += 1
            self._die(v)
            return
        stop = int(stop)
        self.level[v] = stop
        for wgt in self.distinct_weights[v]:
            cross = stop // wgt - start // wgt
            self.relabel_landings += cross
            self.levels_visited[v] += cross
        lvl = self.level
        to_mark = []
        for a in self.inc_arc_list[v]:
            wa = self.w[a >> 1]
            mark_level = (stop // wa) * wa
            if mark_level <= start:
                continue  # no crossing of wa since the last examination
            if self.arc_tail[a] == v:
                gap = mark_level - lvl[self.arc_head[a]]
            else:
                gap = lvl[self.arc_tail[a]] - mark_level
            if gap >= 2 * wa and self.cf_of(a) > 0:
                to_mark.append(a)
            else:
                self.set_mark(a, False)
        # unmark before mark: a stale opposite arc must release its tree
        # edge before the fresh direction claims one
        for a in to_mark:
            self.set_mark(a, True)

    def _relabel_once(self, v: int) -> None:
        """One jump to the next multiple of an incident weight (debug path)."""
        cur = self.level[v]
        nxt = INF
        for wgt in self.distinct_weights[v]:
            cand = (cur // wgt + 1) * wgt
            if cand < nxt:
                nxt = cand
        if nxt > self.nine_h:
            self.relabel_events.append((v, cur, self.nine_h + 1))
            self._die(v)
            return
        nxt = int(nxt)
        self.relabel_events.append((v, cur, nxt))
        self.level[v] = nxt
        self.levels_visited[v] += 1
        self.relabel_landings += 1
        lvl = self.level
        to_mark = []
        for a in self.inc_arc_list[v]:
            wa = self.w[a >> 1]
            if nxt % wa:
                continue
            gap = lvl[self.arc_tail[a]] - lvl[self.arc_head[a]]
            if gap >= 2 * wa and self.cf_of(a) > 0:
                to_mark.append(a)
            else:
                self.set_mark(a, False)
        for a in to_mark:
            self.set_mark(a, True)

    def _drain(self) -> None:
        debug = self.cfg.debug_invariants
        while self.pending:
            v = heapq.heappop(self.pending)
            self.pending_flag[v] = False
            if not self.alive[v] or self.nabla_rem[v] > 0 or self.adm_count[v] > 0:
                continue
            if debug:
                while self.alive[v] and self.nabla_rem[v] == 0 and self.adm_count[v] == 0:
                    self._relabel_once(v)
                    self._assert_invariants()
                self.relabel_climbs += 1
            else:
                self._climb(v)

    # augmentation ----------------------------------------------------------

    def _walk_path(self, s: int) -> Tuple[List[int], int]:
        arcs = []
        v = s
        while self.nabla_rem[v] == 0:
            a = self.current_arc[v]
            assert a != -1, "trace lost its way; admissible structure broken"
            arcs.append(a)
            v = self.arc_head[a]
        return arcs, v

    def _augment_unit(self, s: int) -> None:
        arcs, t = self._walk_path(s)
        amt = min(self.delta_rem[s], self.nabla_rem[t])
        amt = min(amt, min(self.cf[a] for a in arcs))
        for a in arcs:
            self.cf[a] -= amt
            self.cf[a ^ 1] += amt
            if self.cf[a] == 0:
                self.edge_sat[a >> 1] += 1
                self.set_mark(a, False)
        self._finish_augment(s, t, amt, arcs)

    def _augment_capacitated(self, s: int) -> None:
        forest = self.forest
        t = forest.find_root(s)
        arcs = None
        if self.cfg.log_paths:
            arcs, t2 = self._walk_path(s)
            assert t2 == t
        amt = min(self.delta_rem[s], self.nabla_rem[t])
        _, bottleneck = forest.find_min(s)
        amt = min(amt, int(bottleneck))
        forest.add_path(s, -amt)
        # mark newly saturated arcs, climbing from s toward the root
        cur = s
        while forest.rep_par[cur] != -1:
            (child, par), val = forest.find_min(cur)
            if val > 0:
                break
            a = self.current_arc[child]
            self.edge_sat[a >> 1] += 1
            self.set_mark(a, False)  # drops the tree edge and syncs cf
            cur = par
        self._finish_augment(s, t, amt, arcs)

    def _finish_augment(self, s: int, t: int, amt: int, arcs) -> None:
        assert amt > 0
        self.delta_rem[s] -= amt
        self.nabla_rem[t] -= amt
        if self.nabla_rem[t] == 0:
            self._enqueue(t)
        if self.cfg.log_paths and arcs is not None:
            rec = AugmentRecord(
                tuple(arcs), amt, sum(self.w[a >> 1] for a in arcs),
                tuple(self.level) if self.cfg.snapshot_labels else None,
            )
            self.augments.append(rec)
        self.augment_count += 1
        if self.cfg.debug_invariants:
            self._assert_invariants()

    # main loop ---------------------------------------------------------------

    def run(self) -> PushRelabelResult:
        self.augment_count = 0
        for v in range(self.n):
            self._enqueue(v)
        self._drain()
        excess = [v for v in range(self.n) if self.delta_rem[v] > 0]
        while excess:
            s = excess.pop()
            if not self.alive[s] or self.delta_rem[s] == 0:
                continue
            if self.mode == "unit":
                self._augment_unit(s)
            else:
                self._augment_capacitated(s)
            if self.delta_rem[s] > 0:
                excess.append(s)
            self._drain()
        return self._result()

    def _result(self) -> PushRelabelResult:
        # persist in-tree residual values before reading the flow off cf
        if self.forest is not None:
            for v in range(self.n):
                if self.current_arc[v] != -1 and self.forest.rep_par[v] != -1:
                    a = self.current_arc[v]
                    val = int(self.forest.edge_value(v))
                    self.cf[a] = val
                    self.cf[a ^ 1] = self.inst.cap[a >> 1] - val
        f = Flow([self.inst.cap[e] - self.cf[2 * e] for e in range(self.m)])
        value = self.total_supply - sum(self.delta_rem)
        labels = LevelLabeling(list(self.level), list(self.alive), list(self.adm), self.h)
        return PushRelabelResult(
            flow=f,
            labels=labels,
            augmentations=self.augments,
            value=value,
            edge_saturations=self.edge_sat,
            edge_flips=self.edge_flip,
            relabel_climbs=self.relabel_climbs,
            relabel_landings=self.relabel_landings,
            levels_visited=self.levels_visited,
            delta_residual=list(self.delta_rem),
            nabla_residual=list(self.nabla_rem),
            augment_count=self.augment_count,
            relabel_events=self.relabel_events if self.cfg.debug_invariants else None,
        )

    # invariants ---------------------------------------------------------------

    def _assert_invariants(self) -> None:
        lvl = self.level
        for a in range(2 * self.m):
            wa = self.w[a >> 1]
            gap = lvl[self.arc_tail[a]] - lvl[self.arc_head[a]]
            if self.cf_of(a) > 0:
                assert gap < 3 * wa, f"I-1 violated on arc {a}: gap {gap}, w {wa}"
            if self.adm[a]:
                assert gap > wa, f"I-2 violated on arc {a}: gap {gap}, w {wa}"
                assert self.cf_of(a) > 0, f"admissible arc {a} has no capacity"
        for v in range(self.n):
            if self.alive[v]:
                assert lvl[v] <= self.nine_h, f"I-3: alive {v} above 9h"
            else:
                assert lvl[v] > self.nine_h, f"I-3: dead {v} at {lvl[v]}"
            if self.nabla_rem[v] > 0:
                assert lvl[v] == 0, f"I-3: unsaturated sink {v} at level {lvl[v]}"


def label_gap_certificate(result: PushRelabelResult, s: int, t: int) -> int:
    """Final-label gap l(s) - l(t); at most three times the residual
    w-distance between s and t at every point of the run."""
    return result.labels.levels[s] - result.labels.levels[t]
