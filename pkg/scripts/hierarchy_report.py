#!/usr/bin/env python3
"""Build hierarchies over a seeded corpus and report heights, level
capacities, validation mode and wall time.

Usage: python scripts/hierarchy_report.py [--phi 1/16] [--seeds 3] [--n 14]
"""
import argparse
import random
import sys
import time
from fractions import Fraction

from hierflow.builder import build_hierarchy
from hierflow.config import DEFAULT_CONFIG
from hierflow.generators import gen_dumbbell
from hierflow.graph import build_graph
from hierflow.hierarchy import validate_hierarchy


def corpus(rng, n_max):
    yield "cycle", build_graph(n_max, [(i, (i + 1) % n_max, 1) for i in range(n_max)])
    gen = gen_dumbbell(max(2, n_max // 2 - 1), 1)
    yield gen.name, build_graph(gen.n, gen.arcs)
    for t in range(4):
        n = rng.randint(4, n_max)
        arcs = []
        seen = set()
        for _ in range(rng.randint(n, 4 * n)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v and (u, v) not in seen:
                seen.add((u, v))
                arcs.append((u, v, rng.randint(1, 3)))
        yield f"random-{t}", build_graph(n, arcs)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--phi", default="1/16")
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--n", type=int, default=14)
    args = ap.parse_args(argv)
    num, _, den = args.phi.partition("/")
    phi = Fraction(int(num), int(den or 1))
    rng = random.Random(7)
    print("graph\tn\tm\tseed\teta\tlevel_caps\tattempts\tvalid\tms")
    for name, (g, caps) in corpus(rng, args.n):
        for seed in range(args.seeds):
            t0 = time.perf_counter()
            res = build_hierarchy(g, caps, phi, seed=seed)
            ms = (time.perf_counter() - t0) * 1e3
            rep = validate_hierarchy(g, caps, res.hierarchy, phi,
                                     DEFAULT_CONFIG, random.Random(seed))
            lv = ",".join(str(sum(caps[e] for e in x))
                          for x in res.hierarchy.levels) or "-"
            print(f"{name}\t{g.n}\t{g.m}\t{seed}\t{res.hierarchy.eta}\t{lv}\t"
                  f"{res.attempts}\t{int(rep.ok)}\t{ms:.0f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
