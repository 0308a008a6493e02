"""Exact checks: embedding verification, family membership, and a backtracking containment oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import Graph
from .instances import linear_components

FOUND, NONE, BUDGET = "found", "none", "budget"


def _as_map(e) -> dict[int, int]:
    if isinstance(e, Mapping):
        return {int(a): int(x) for a, x in e.items()}
    return {a: int(x) for a, x in enumerate(e)}


def verify_embedding(
    f_target: Graph, h: Graph, e: Mapping[int, int] | Sequence[int], require_spanning: bool = False
) -> tuple[bool, list[str]]:
    """Check that ``e`` is a total injective, edge-preserving map; returns ``(ok, violations)``."""
    m = _as_map(e)
    problems: list[str] = []
    missing = [a for a in range(f_target.n) if a not in m]
    if missing:
        problems.append(f"unmapped target vertices {missing[:5]}")
    extra = [a for a in m if not 0 <= a < f_target.n]
    if extra:
        problems.append(f"map has keys outside the target {extra[:5]}")
    bad_range = [x for x in m.values() if not 0 <= x < h.n]
    if bad_range:
        problems.append(f"images outside the host {bad_range[:5]}")
    if len(set(m.values())) != len(m):
        problems.append("map is not injective")
    for a, b in f_target.edges():
        if a in m and b in m and 0 <= m[a] < h.n and 0 <= m[b] < h.n and not h.has_edge(m[a], m[b]):
            problems.append(f"edge ({a}, {b}) -> non-edge ({m[a]}, {m[b]})")
    if require_spanning and set(m.values()) != set(range(h.n)):
        problems.append(f"not spanning: covers {len(set(m.values()))} of {h.n} host vertices")
    return not problems, problems


def verify_family_membership(f: Graph, ell: int, maximal: bool = False) -> bool:
    if f.max_degree() > 2:
        return False
    comps = linear_components(f)
    if any(c.kind == "cycle" and c.size < ell for c in comps):
        return False
    if not maximal:
        return True
    paths = [c for c in comps if c.kind == "path"]
    return len(paths) <= 1 and all(c.size - 1 <= ell - 2 for c in paths)


@dataclass
class OracleResult:
    verdict: str  # found / none / budget
    embedding: dict[int, int] | None
    nodes: int

    @property
    def found(self) -> bool:
        return self.verdict == FOUND


def oracle_embed(f_target: Graph, h: Graph, require_spanning: bool = True, node_budget: int = 2_000_000) -> OracleResult:
    """Exhaustive backtracking for a copy of ``f_target`` in ``h``.

    Components are handled largest first, each walked in traversal order.
    A cycle starts at the smallest host id it will use and is read in the
    direction whose second vertex is smaller than its last, and equal
    components take increasing start ids; these rules remove rotations,
    reflections and permutations of identical components without losing
    any copy.
    """
    nf, nh = f_target.n, h.n
    if nf > nh or (require_spanning and nf != nh):
        return OracleResult(NONE, None, 0)
    if f_target.max_degree() > 2:
        raise ValueError("oracle handles max-degree-2 targets only")
    comps = sorted(linear_components(f_target), key=lambda c: (-c.size, c.kind, c.vertices[0]))
    by_degree = sorted(range(nh), key=lambda x: (h.degree(x), x))
    used = [False] * nh
    mapping: dict[int, int] = {}
    nodes = 0

    class _Out(Exception):
        pass

    def place_comp(ci: int, prev_start: int) -> bool:
        if ci == len(comps):
            return True
        comp = comps[ci]
        same_as_prev = ci > 0 and (comps[ci - 1].kind, comps[ci - 1].size) == (comp.kind, comp.size)
        vs = comp.vertices
        k = len(vs)
        need_deg = 2 if comp.kind == "cycle" else (0 if k == 1 else 1)
        for s in by_degree:
            if used[s] or h.degree(s) < need_deg:
                continue
            if same_as_prev and s <= prev_start:
                continue
            used[s] = True
            mapping[vs[0]] = s
            if walk(ci, 1, s):
                return True
            used[s] = False
            del mapping[vs[0]]
        return False

    def walk(ci: int, i: int, s: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise _Out
        comp = comps[ci]
        vs = comp.vertices
        k = len(vs)
        if i == k:
            if comp.kind == "cycle" and not (mapping[vs[1]] < mapping[vs[-1]] and h.has_edge(mapping[vs[-1]], s)):
                return False
            return place_comp(ci + 1, s)
        prev = mapping[vs[i - 1]]
        cyc = comp.kind == "cycle"
        for x in sorted(h.neighbors(prev)):
            if used[x] or (cyc and x < s):
                continue
            if cyc and i == k - 1 and not h.has_edge(x, s):
                continue
            used[x] = True
            mapping[vs[i]] = x
            if walk(ci, i + 1, s):
                return True
            used[x] = False
            del mapping[vs[i]]
        return False

    try:
        ok = place_comp(0, -1)
    except _Out:
        return OracleResult(BUDGET, None, nodes)
    return OracleResult(FOUND, dict(mapping), nodes) if ok else OracleResult(NONE, None, nodes)
