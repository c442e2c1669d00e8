"""Command-line front end: solvers, generators, hierarchy tools, bench."""
from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction
from typing import List, Optional

from .builder import build_hierarchy
from .config import DEFAULT_CONFIG, default_phi
from .errors import (ArcCountMismatchError, BadParamsError, HierflowError,
                     MissingSourceOrSinkError, NotDiffusionError, ParseError)
from .graph import FlowInstance, flow_stats
from .hierarchy import (Hierarchy, hierarchy_from_text, hierarchy_to_text,
                        validate_hierarchy)
from .io import InstanceFile, emit_dimacs, emit_diffusion, parse_instance
from .maxflow import (capacity_scaled_max_flow, dag_approx_flow, edmonds_karp,
                      ek_solver, exact_solver, max_flow_exact)
from .generators import generate
from .sparse_cut import sparse_cut

PARSE_ERRORS = (ParseError, MissingSourceOrSinkError, ArcCountMismatchError,
                NotDiffusionError, FileNotFoundError)


def _phi_arg(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def _load(path: str) -> InstanceFile:
    with open(path) as fh:
        return parse_instance(fh.read(), path)


def _config_from(args) -> "SolverConfig":
    cfg = DEFAULT_CONFIG
    kw = {}
    if getattr(args, "debug_invariants", False):
        kw["debug_invariants"] = True
    if getattr(args, "c_h", None) is not None:
        kw["c_h"] = args.c_h
    if getattr(args, "c_6", None) is not None:
        kw["c_6"] = args.c_6
    if getattr(args, "max_h", None) is not None:
        kw["max_h"] = args.max_h
    return cfg.with_(**kw) if kw else cfg


def _write_flow(path: str, inst_file: InstanceFile, flow) -> None:
    g = inst_file.inst.g
    lines = []
    for e in range(g.m):
        x = flow.values[e]
        if x:
            lines.append(f"f {g.tails[e] + 1} {g.heads[e] + 1} {x}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))


def cmd_solve(args) -> int:
    inst_file = _load(args.file)
    inst = inst_file.inst
    cfg = _config_from(args)
    print(f"# seed {args.seed} file {args.file} algo {args.algo}", file=sys.stderr)
    if args.algo == "ek":
        res = edmonds_karp(inst)
    else:
        phi = args.phi if args.phi is not None else default_phi(inst.n)
        n2 = inst.n * inst.n
        if max(inst.cap, default=0) > n2:
            res = capacity_scaled_max_flow(inst, exact_solver(phi, args.seed, cfg))
        else:
            res = max_flow_exact(inst, phi, args.seed, cfg)
    print(f"value {res.stats.value}")
    if args.flow:
        _write_flow(args.flow, inst_file, res.flow)
    return 0


def cmd_approx_dag(args) -> int:
    inst_file = _load(args.file)
    cfg = _config_from(args)
    result = dag_approx_flow(inst_file.inst, cfg)
    print(f"value {result.value}")
    if args.flow:
        _write_flow(args.flow, inst_file, result.flow)
    return 0


def cmd_sparse_cut(args) -> int:
    inst_file = _load(args.file)
    inst = inst_file.inst
    cfg = _config_from(args)
    phi = args.phi if args.phi is not None else default_phi(inst.n)
    print(f"# seed {args.seed} kappa {args.kappa} phi {phi}", file=sys.stderr)
    if args.terminals == "all":
        f_edges = set(range(inst.m))
        hier = Hierarchy(set(), [], list(range(1, inst.n + 1)))
    else:
        f_edges = set()
        build = build_hierarchy(inst.g, inst.cap, phi, args.seed, cfg)
        hier = build.hierarchy
    # the front end accepts any digraph; strong connectivity only
    # matters for the cut-quality analysis, not the mechanics
    out = sparse_cut(inst, args.kappa, f_edges, hier, cfg, phi=phi,
                     check_connected=False)
    print(f"flow {out.value}")
    if out.cut is None:
        print("routed")
    else:
        print("cut " + " ".join(str(v + 1) for v in out.cut))
        mtr = out.metrics
        print(f"metrics out {mtr.boundary_out} in {mtr.boundary_in} "
              f"vol {mtr.vol_f_side} volother {mtr.vol_f_other} "
              f"abs {mtr.absorbed} ex {mtr.excess}")
    return 0


def cmd_hierarchy(args) -> int:
    inst_file = _load(args.file)
    inst = inst_file.inst
    cfg = _config_from(args)
    phi = args.phi if args.phi is not None else default_phi(inst.n)
    build = build_hierarchy(inst.g, inst.cap, phi, args.seed, cfg)
    text = hierarchy_to_text(build.hierarchy, inst.m)
    report = validate_hierarchy(inst.g, inst.cap, build.hierarchy, phi, cfg,
                                random.Random(args.seed))
    summary = (f"# seed {args.seed} phi {phi} eta {build.hierarchy.eta} "
               f"attempts {build.attempts}\n" + report.summary())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    inst_file = _load(args.graph)
    with open(args.hierarchy) as fh:
        hier = hierarchy_from_text(fh.read(), inst_file.inst.g)
    report = validate_hierarchy(inst_file.inst.g, inst_file.inst.cap, hier,
                                args.phi, DEFAULT_CONFIG, random.Random(0))
    print(report.summary())
    return 0 if report.ok else 1


def cmd_gen(args) -> int:
    params = {}
    for key in ("n", "m", "cap", "k", "bridge", "rows", "cols"):
        val = getattr(args, key if key != "n" else "gen_n", None)
        if val is not None:
            params[key] = val
    gen = generate(args.model, args.seed, **params)
    if args.format == "dimacs":
        text = emit_dimacs(gen.n, gen.arcs, gen.source, gen.sink, gen.name)
    else:
        text = emit_diffusion(gen.instance(), gen.name)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    cfg = _config_from(args)
    algos = args.algo.split(",") if args.algo else ["exact", "ek"]
    print(f"# seed {args.seed}")
    print("instance\talgo\tvalue\twall_ms\taugmentations\trelabels")
    for path in args.files:
        inst_file = _load(path)
        inst = inst_file.inst
        for algo in algos:
            t0 = time.perf_counter()
            if algo == "ek":
                res = edmonds_karp(inst)
            else:
                phi = args.phi if args.phi is not None else default_phi(inst.n)
                res = max_flow_exact(inst, phi, args.seed, cfg)
            ms = (time.perf_counter() - t0) * 1000.0
            print(f"{inst_file.name}\t{algo}\t{res.stats.value}\t{ms:.2f}\t"
                  f"{res.stats.augmentations}\t{res.stats.relabels}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hierflow",
                                description="max-flow via weighted push-relabel "
                                            "over expander hierarchies")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, phi=True):
        sp.add_argument("--seed", type=int, default=0)
        if phi:
            sp.add_argument("--phi", type=_phi_arg, default=None,
                            help="expansion parameter as p/q")
        sp.add_argument("--debug-invariants", action="store_true")
        sp.add_argument("--c-h", type=float, default=None)
        sp.add_argument("--c-6", type=float, default=None)
        sp.add_argument("--max-h", type=int, default=None)

    sp = sub.add_parser("solve", help="exact maximum flow")
    sp.add_argument("--algo", choices=["exact", "ek"], default="exact")
    sp.add_argument("--flow", help="write flow lines to this file")
    common(sp)
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("approx-dag", help="constant-factor approximation on DAGs")
    sp.add_argument("--flow")
    common(sp)
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_approx_dag)

    sp = sub.add_parser("sparse-cut", help="route demand or find a sparse level cut")
    sp.add_argument("--kappa", type=int, required=True)
    sp.add_argument("--terminals", choices=["all", "none"], default="all")
    common(sp)
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_sparse_cut)

    sp = sub.add_parser("hierarchy", help="build and validate a hierarchy")
    sp.add_argument("--out", help="write hierarchy text here instead of stdout")
    common(sp)
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_hierarchy)

    sp = sub.add_parser("validate", help="check a hierarchy file against a graph")
    sp.add_argument("--phi", type=_phi_arg, required=True)
    sp.add_argument("hierarchy")
    sp.add_argument("graph")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("gen", help="generate an instance file")
    sp.add_argument("--model", choices=["dag", "random", "dumbbell", "cycle", "grid"],
                    required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["dimacs", "diff"], default="dimacs")
    sp.add_argument("--gen-n", type=int, default=None, dest="gen_n")
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--bridge", type=int, default=None)
    sp.add_argument("--rows", type=int, default=None)
    sp.add_argument("--cols", type=int, default=None)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("bench", help="table of solver runs")
    sp.add_argument("--algo", default=None, help="comma list: exact,ek")
    common(sp)
    sp.add_argument("files", nargs="+")
    sp.set_defaults(fn=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BadParamsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HierflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
