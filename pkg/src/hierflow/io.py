"""Instance file formats: DIMACS max-flow and the diffusion variant.

Vertices are 1-indexed on disk, 0-indexed in memory.  DIMACS source/sink
instances get supply and sink capacity one above the total edge capacity,
which is effectively unbounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import (ArcCountMismatchError, MissingSourceOrSinkError,
                     NotDiffusionError, ParseError)
from .graph import DiGraph, FlowInstance, build_graph


def _int(token: str, no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(no, f"expected an integer, got {token!r}")


@dataclass
class InstanceFile:
    name: str
    inst: FlowInstance
    source: Optional[int]
    sink: Optional[int]
    declared_n: int
    declared_m: int


def parse_dimacs(text: str, name: str = "<memory>") -> InstanceFile:
    n = m = None
    s = t = None
    arcs: List[Tuple[int, int, int]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "p":
            if len(parts) != 4 or parts[1] != "max":
                raise ParseError(no, "expected `p max <n> <m>`")
            if n is not None:
                raise ParseError(no, "duplicate problem line")
            n, m = _int(parts[2], no), _int(parts[3], no)
        elif kind == "n":
            if len(parts) != 3 or parts[2] not in ("s", "t"):
                raise ParseError(no, "expected `n <v> s|t`")
            if n is None:
                raise ParseError(no, "node line before problem line")
            v = _int(parts[1], no) - 1
            if not (0 <= v < n):
                raise ParseError(no, f"vertex {parts[1]} out of range")
            if parts[2] == "s":
                s = v
            else:
                t = v
        elif kind == "a":
            if len(parts) != 4:
                raise ParseError(no, "expected `a <u> <v> <cap>`")
            if n is None:
                raise ParseError(no, "arc line before problem line")
            u, v, c = _int(parts[1], no) - 1, _int(parts[2], no) - 1, _int(parts[3], no)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(no, "arc endpoint out of range")
            if c < 0:
                raise ParseError(no, "negative capacity")
            arcs.append((u, v, c))
        else:
            raise ParseError(no, f"unknown line kind {kind!r}")
    if n is None:
        raise ParseError(0, "missing problem line")
    if s is None or t is None:
        raise MissingSourceOrSinkError("missing `n ... s` or `n ... t` line")
    if len(arcs) != m:
        raise ArcCountMismatchError(f"declared {m} arcs, saw {len(arcs)}")
    g, caps = build_graph(n, arcs)
    big = sum(caps) + 1
    delta = [0] * n
    nabla = [0] * n
    delta[s] = big
    nabla[t] = big
    return InstanceFile(name, FlowInstance(g, caps, delta, nabla), s, t, n, m)


def emit_dimacs(n: int, arcs: List[Tuple[int, int, int]], s: int, t: int,
                name: str = "instance") -> str:
    lines = [f"c {name}", f"p max {n} {len(arcs)}", f"n {s + 1} s", f"n {t + 1} t"]
    lines += [f"a {u + 1} {v + 1} {c}" for u, v, c in arcs]
    return "\n".join(lines) + "\n"


def parse_diffusion(text: str, name: str = "<memory>") -> InstanceFile:
    n = m = None
    arcs: List[Tuple[int, int, int]] = []
    srcs: List[Tuple[int, int]] = []
    snks: List[Tuple[int, int]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "p":
            if len(parts) != 4 or parts[1] != "diff":
                raise ParseError(no, "expected `p diff <n> <m>`")
            if n is not None:
                raise ParseError(no, "duplicate problem line")
            n, m = _int(parts[2], no), _int(parts[3], no)
        elif kind == "a":
            if len(parts) != 4:
                raise ParseError(no, "expected `a <u> <v> <cap>`")
            if n is None:
                raise ParseError(no, "arc line before problem line")
            u, v, c = _int(parts[1], no) - 1, _int(parts[2], no) - 1, _int(parts[3], no)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(no, "arc endpoint out of range")
            arcs.append((u, v, c))
        elif kind in ("src", "snk"):
            if len(parts) != 3:
                raise ParseError(no, f"expected `{kind} <v> <amount>`")
            if n is None:
                raise ParseError(no, f"{kind} line before problem line")
            v, amount = _int(parts[1], no) - 1, _int(parts[2], no)
            if not (0 <= v < n):
                raise ParseError(no, "vertex out of range")
            if amount < 0:
                raise ParseError(no, "negative amount")
            (srcs if kind == "src" else snks).append((v, amount))
        else:
            raise ParseError(no, f"unknown line kind {kind!r}")
    if n is None:
        raise ParseError(0, "missing problem line")
    if len(arcs) != m:
        raise ArcCountMismatchError(f"declared {m} arcs, saw {len(arcs)}")
    delta = [0] * n
    nabla = [0] * n
    for v, amt in srcs:
        delta[v] += amt
    for v, amt in snks:
        nabla[v] += amt
    if sum(delta) > sum(nabla):
        raise NotDiffusionError(
            f"total supply {sum(delta)} exceeds total sink capacity {sum(nabla)}")
    g, caps = build_graph(n, arcs)
    return InstanceFile(name, FlowInstance(g, caps, delta, nabla), None, None, n, m)


def emit_diffusion(inst: FlowInstance, name: str = "instance") -> str:
    g = inst.g
    lines = [f"c {name}", f"p diff {g.n} {g.m}"]
    lines += [f"a {g.tails[e] + 1} {g.heads[e] + 1} {inst.cap[e]}" for e in range(g.m)]
    lines += [f"src {v + 1} {inst.delta[v]}" for v in range(g.n) if inst.delta[v] > 0]
    lines += [f"snk {v + 1} {inst.nabla[v]}" for v in range(g.n) if inst.nabla[v] > 0]
    return "\n".join(lines) + "\n"


def parse_instance(text: str, name: str = "<memory>") -> InstanceFile:
    """Dispatch on the problem line: `p max` or `p diff`."""
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p "):
            parts = line.split()
            if len(parts) >= 2 and parts[1] == "diff":
                return parse_diffusion(text, name)
            return parse_dimacs(text, name)
    raise ParseError(0, "missing problem line")
