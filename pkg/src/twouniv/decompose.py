"""Greedy split of a maximal target into a cyclic core U, a middle W \\ U and a leftover V \\ W.

The core collects whole cycles (longest first) until it reaches its target
size, then the last cycle is trimmed by a run of 2 or of at least 5
consecutive vertices.  The leftover receives the edges cut off by the trim,
one edge from every long cycle of the middle, then triangles and finally
isolated edges until it reaches ``epsilon n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import Graph
from .instances import ParamSet, linear_components, round_half_up


class DecompositionInfeasible(ValueError):
    """The size targets cannot be met at this n."""


@dataclass(frozen=True)
class Decomposition:
    n: int
    u_set: frozenset[int]
    w_set: frozenset[int]
    tolerance: int
    u_target: int
    leftover_target: int
    trimmed: tuple[int, ...] = ()  # run removed from the last core cycle, in cycle order

    @property
    def middle(self) -> frozenset[int]:
        return self.w_set - self.u_set

    @property
    def leftover(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.w_set

    def to_record(self) -> str:
        return json.dumps(
            {
                "U": sorted(self.u_set),
                "W_minus_U": sorted(self.middle),
                "V_minus_W": sorted(self.leftover),
                "tolerance": self.tolerance,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_record(cls, text: str, *, tolerance: int | None = None) -> "Decomposition":
        rec = json.loads(text)
        u = frozenset(rec["U"])
        mid = frozenset(rec["W_minus_U"])
        rest = frozenset(rec["V_minus_W"])
        n = len(u) + len(mid) + len(rest)
        tol = rec.get("tolerance", 2) if tolerance is None else tolerance
        return cls(n, u, u | mid, tol, len(u), len(rest))


def _is_maximal(f: Graph, ell: int) -> bool:
    if f.max_degree() > 2:
        return False
    comps = linear_components(f)
    paths = [c for c in comps if c.kind == "path"]
    if any(c.kind == "cycle" and c.size < ell for c in comps):
        return False
    return len(paths) <= 1 and all(c.size - 1 <= ell - 2 for c in paths)


def _choose_trim(length: int, excess: int, tol: int) -> int | None:
    """Run length to cut from the last core cycle: 0, 2 or >= 5 (never 1, 3, 4)."""
    options = [0, 2] + list(range(5, length))
    # leftover cost of each choice: none, one edge, two edges
    cost = {0: 0, 2: 2}
    valid = [r for r in options if abs(excess - r) <= tol and r < length]
    if not valid:
        return None
    return min(valid, key=lambda r: (cost.get(r, 4), abs(excess - r), r))


def decompose(f: Graph, params: ParamSet) -> Decomposition:
    if not _is_maximal(f, params.ell):
        raise ValueError(f"target is not an edge-maximal max-degree-2 graph of girth >= {params.ell}")
    n = f.n
    prm = params.with_n(n)
    u_star, e_star, tol = prm.u_target, prm.leftover_target, prm.slack
    if u_star < 3:
        raise DecompositionInfeasible(f"core target round({prm.u_frac:.4g}*n) = {u_star} < 3 at n={n}")
    if not prm.practical_mode and e_star < 4:
        raise DecompositionInfeasible(f"leftover target round(epsilon*n) = {e_star} < 4 at n={n}")

    comps = linear_components(f)
    cycles = sorted((c for c in comps if c.kind == "cycle"), key=lambda c: (-c.size, c.vertices[0]))

    core: list[int] = []
    last = None
    for cyc in cycles:
        if len(core) >= u_star:
            break
        core.extend(cyc.vertices)
        last = cyc
    if len(core) < u_star - tol or last is None:
        raise DecompositionInfeasible(f"only {len(core)} cycle vertices available for a core of {u_star}")

    leftover: set[int] = set()
    trimmed: tuple[int, ...] = ()
    excess = len(core) - u_star
    r = _choose_trim(last.size, excess, tol) if excess > 0 else 0
    if r is None:
        raise DecompositionInfeasible(
            f"cannot trim a {last.size}-cycle by {excess} +- {tol} vertices using runs of 2 or >= 5"
        )
    if r:
        run = last.vertices[:r]
        trimmed = tuple(run)
        core = [v for v in core if v not in set(run)]
        if r == 2:
            leftover.update(run)
        else:
            leftover.update((run[0], run[1], run[-2], run[-1]))
    u_set = frozenset(core)
    middle = set(range(n)) - u_set - leftover

    # long cycles of the middle lose one edge
    for comp in linear_components(f, middle):
        if comp.kind == "cycle" and comp.size >= prm.ell0:
            a, b = comp.vertices[0], comp.vertices[1]
            leftover.update((a, b))
            middle -= {a, b}

    if prm.ell == 3:
        for comp in linear_components(f, middle):
            if len(leftover) + 3 > e_star + tol or 2 * len(leftover) + 3 > 2 * e_star:
                break
            if comp.kind == "cycle" and comp.size == 3:
                leftover.update(comp.vertices)
                middle -= set(comp.vertices)

    while len(leftover) + 2 <= e_star:
        edge = _pick_isolated_edge(f, middle, leftover)
        if edge is None:
            break
        leftover.update(edge)
        middle -= set(edge)

    if abs(len(u_set) - u_star) > tol:
        raise DecompositionInfeasible(f"|U| = {len(u_set)} outside {u_star} +- {tol}")
    if abs(len(leftover) - e_star) > tol:
        raise DecompositionInfeasible(f"|V \\ W| = {len(leftover)} outside {e_star} +- {tol}")
    return Decomposition(n, u_set, frozenset(u_set | middle), tol, u_star, e_star, trimmed)


def _pick_isolated_edge(f: Graph, middle: set[int], leftover: set[int]):
    """An edge of F[middle] with no other neighbour in the leftover, from the largest component."""

    def clean(a, b):
        return not ((f.neighbors(a) | f.neighbors(b)) - {a, b}) & leftover

    comps = sorted(linear_components(f, middle), key=lambda c: (-c.size, c.vertices[0]))
    for comp in comps:
        vs = comp.vertices
        if len(vs) < 2:
            continue
        if comp.kind == "cycle":
            return (vs[0], vs[1])
        # cut near the middle of a path, falling back to any clean edge
        mid = len(vs) // 2 - 1
        order = sorted(range(len(vs) - 1), key=lambda i: abs(i - mid))
        for i in order:
            if clean(vs[i], vs[i + 1]):
                return (vs[i], vs[i + 1])
    return None


def check_partition_props(f: Graph, d: Decomposition, ell0: int) -> tuple[bool, bool, bool]:
    """Recheck the three structural properties from scratch."""
    u, mid, rest = set(d.u_set), set(d.middle), set(d.leftover)
    p1 = all(c.kind == "path" or c.size < ell0 for c in linear_components(f, mid))
    p2 = all(
        (c.kind == "path" and c.size == 2) or (c.kind == "cycle" and c.size == 3)
        for c in linear_components(f, rest)
    )
    u_mid = sum(1 for a, b in f.edges() if (a in u and b in mid) or (b in u and a in mid))
    u_rest = sum(1 for a, b in f.edges() if (a in u and b in rest) or (b in u and a in rest))
    p3 = u_mid == 0 and u_rest <= 2
    return p1, p2, p3


def edge_partition_audit(f: Graph, d: Decomposition) -> bool:
    """Induced pieces plus crossing edges rebuild F exactly, and the sets nest properly."""
    u, w = set(d.u_set), set(d.w_set)
    if not (u <= w <= set(range(f.n))):
        return False
    mid, rest = w - u, set(range(f.n)) - w
    label = {}
    for v in u:
        label[v] = 0
    for v in mid:
        label[v] = 1
    for v in rest:
        label[v] = 2
    if len(label) != f.n:
        return False
    pieces: list[set] = [set() for _ in range(3)]
    crossing: set = set()
    for a, b in f.edges():
        if label[a] == label[b]:
            pieces[label[a]].add((a, b))
        else:
            crossing.add((a, b))
    induced = [set(f.restricted(s).edges()) for s in (u, mid, rest)]
    if induced != pieces:
        return False
    rebuilt = induced[0] | induced[1] | induced[2] | crossing
    return rebuilt == f.edge_set() and sum(len(x) for x in induced) + len(crossing) == f.edge_count
