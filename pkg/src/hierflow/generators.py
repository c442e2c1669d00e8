"""Deterministic instance generators for tests and benchmarks."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import BadParamsError
from .graph import FlowInstance, build_graph


@dataclass
class Generated:
    name: str
    n: int
    arcs: List[Tuple[int, int, int]]
    source: int
    sink: int

    def instance(self) -> FlowInstance:
        g, caps = build_graph(self.n, self.arcs)
        big = sum(caps) + 1
        delta = [0] * self.n
        nabla = [0] * self.n
        delta[self.source] = big
        nabla[self.sink] = big
        return FlowInstance(g, caps, delta, nabla)


def gen_cycle(n: int, cap: int = 1) -> Generated:
    if n < 2:
        raise BadParamsError("cycle needs n >= 2")
    arcs = [(i, (i + 1) % n, cap) for i in range(n)]
    return Generated(f"cycle-{n}", n, arcs, 0, n // 2)


def gen_dumbbell(k: int, bridge: int, clique_cap: int = 1) -> Generated:
    """Two complete digraphs on k vertices, one bridge each way."""
    if k < 2 or bridge < 0:
        raise BadParamsError("dumbbell needs k >= 2 and bridge >= 0")
    arcs = []
    for a in range(k):
        for b in range(k):
            if a != b:
                arcs.append((a, b, clique_cap))
    for a in range(k, 2 * k):
        for b in range(k, 2 * k):
            if a != b:
                arcs.append((a, b, clique_cap))
    arcs.append((k - 1, k, bridge))      # forward bridge
    arcs.append((2 * k - 1, 0, bridge))  # return bridge
    return Generated(f"dumbbell-{k}-{bridge}", 2 * k, arcs, 0, 2 * k - 1)


def gen_dag(n: int, m: int, cap: int, seed: int) -> Generated:
    if n < 2 or m < 1 or cap < 1:
        raise BadParamsError("dag needs n >= 2, m >= 1, cap >= 1")
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)  # perm[i] = vertex at topological position i
    arcs = []
    seen = set()
    guard = 0
    while len(arcs) < m and guard < 50 * m:
        guard += 1
        i = rng.randrange(n - 1)
        j = rng.randrange(i + 1, n)
        u, v = perm[i], perm[j]
        if (u, v) in seen:
            continue
        seen.add((u, v))
        arcs.append((u, v, rng.randint(1, cap)))
    if not arcs:
        raise BadParamsError("could not place any DAG arc")
    return Generated(f"dag-{n}-{m}-{seed}", n, arcs, perm[0], perm[n - 1])


def gen_random(n: int, m: int, cap: int, seed: int) -> Generated:
    if n < 2 or m < 1 or cap < 1:
        raise BadParamsError("random needs n >= 2, m >= 1, cap >= 1")
    rng = random.Random(seed)
    arcs = []
    seen = set()
    guard = 0
    while len(arcs) < m and guard < 50 * m + 100:
        guard += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v or (u, v) in seen:
            continue
        seen.add((u, v))
        arcs.append((u, v, rng.randint(1, cap)))
    return Generated(f"random-{n}-{m}-{seed}", n, arcs, 0, n - 1)


def gen_grid(rows: int, cols: int, cap: int, seed: int = 0) -> Generated:
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise BadParamsError("grid needs at least two cells")
    rng = random.Random(seed)
    n = rows * cols
    arcs = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                arcs.append((v, v + 1, rng.randint(1, cap)))
            if r + 1 < rows:
                arcs.append((v, v + cols, rng.randint(1, cap)))
    return Generated(f"grid-{rows}x{cols}-{seed}", n, arcs, 0, n - 1)


def generate(model: str, seed: int = 0, **params) -> Generated:
    """Dispatch by model name; deterministic in (model, params, seed)."""
    try:
        if model == "cycle":
            return gen_cycle(params.get("n", 8), params.get("cap", 1))
        if model == "dumbbell":
            return gen_dumbbell(params.get("k", 5), params.get("bridge", 3),
                                params.get("cap", 1))
        if model == "dag":
            return gen_dag(params.get("n", 10), params.get("m", 20),
                           params.get("cap", 5), seed)
        if model == "random":
            return gen_random(params.get("n", 10), params.get("m", 20),
                              params.get("cap", 5), seed)
        if model == "grid":
            return gen_grid(params.get("rows", 3), params.get("cols", 3),
                            params.get("cap", 5), seed)
    except BadParamsError:
        raise
    except (TypeError, ValueError) as exc:
        raise BadParamsError(str(exc))
    raise BadParamsError(f"unknown model {model!r}")
