"""Exact copy counts of edges, cherries and cycles, and the sampling certifier.

All counts are of subgraph copies.  Between labelled parts a cherry is
counted with its centre in the first part; a rainbow cycle ``v1..vk`` with
``vi`` in part ``i`` is counted once for the given part order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph
from .rng import make_rng


def _as_sets(parts: Iterable[Iterable[int]]) -> list[set[int]]:
    sets = [set(p) for p in parts]
    seen: set[int] = set()
    for s in sets:
        if seen & s:
            raise ValueError("vertex sets must be pairwise disjoint")
        seen |= s
    return sets


def count_edges_between(g: Graph, v1: Iterable[int], v2: Iterable[int]) -> int:
    a, b = _as_sets([v1, v2])
    if len(a) > len(b):
        a, b = b, a
    return sum(len(g.neighbors(x) & b) for x in a)


def count_cherries(g: Graph, v1: Iterable[int], v2: Iterable[int], v3: Iterable[int]) -> int:
    """Paths ``b - a - c`` with centre ``a`` in ``v1``, ``b`` in ``v2``, ``c`` in ``v3``."""
    a, b, c = _as_sets([v1, v2, v3])
    return sum(len(g.neighbors(x) & b) * len(g.neighbors(x) & c) for x in a)


def count_cycles_rainbow(g: Graph, parts: Sequence[Iterable[int]]) -> int:
    """Number of cycles ``v1 v2 ... vk`` with ``vi`` in ``parts[i]``.

    Computed as the trace of the product of the biadjacency matrices
    between consecutive parts; disjointness makes every closed walk a cycle.
    """
    sets = _as_sets(parts)
    k = len(sets)
    if k < 3:
        raise ValueError("rainbow cycles need k >= 3 parts")
    if any(not s for s in sets):
        return 0
    # trace is rotation invariant; start at the smallest part to keep products thin
    i0 = min(range(k), key=lambda i: len(sets[i]))
    sets = sets[i0:] + sets[:i0]
    idx = [np.fromiter(sorted(s), dtype=np.int64) for s in sets]
    a = g.adjacency_matrix()
    # float64 products are exact below 2**53; fall back to Python ints above
    dtype = np.float64 if math.prod(len(s) for s in sets) < 2**52 else object
    acc = a[np.ix_(idx[0], idx[1])].astype(dtype)
    for i in range(1, k):
        acc = acc @ a[np.ix_(idx[i], idx[(i + 1) % k])].astype(dtype)
    return int(round(np.trace(acc))) if dtype is np.float64 else int(np.trace(acc))


def rainbow_cycle_dfs(
    g: Graph,
    parts: Sequence[Iterable[int]],
    *,
    first: bool = False,
    rng=None,
    budget: int | None = None,
    priority=None,
):
    """Ordered DFS over the parts.

    Returns the count, or with ``first=True`` the first cycle found as a
    vertex list (``None`` if there is none).  ``rng`` shuffles the search order.
    ``budget`` caps the number of DFS nodes; running out returns ``None``.
    ``priority`` (vertex -> number) makes the search try low values first,
    with the shuffled order breaking ties.
    """
    sets = _as_sets(parts)
    k = len(sets)
    if k < 3:
        raise ValueError("rainbow cycles need k >= 3 parts")
    gen = make_rng(rng) if rng is not None else None

    def order(it):
        lst = sorted(it)
        if gen is not None:
            gen.shuffle(lst)
        if priority is not None:
            lst.sort(key=priority.__getitem__)
        return lst

    closers = sets[-1]
    path: list[int] = []
    count = 0
    nodes = 0

    class _Out(Exception):
        pass

    def extend(i: int):
        nonlocal count, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise _Out
        last = path[-1]
        if i == k - 1:
            cands = g.neighbors(last) & closers & g.neighbors(path[0])
            if first:
                for c in order(cands):
                    return path + [c]
                return None
            count += len(cands)
            return None
        for nxt in order(g.neighbors(last) & sets[i]):
            path.append(nxt)
            found = extend(i + 1)
            path.pop()
            if found is not None:
                return found
        return None

    try:
        for start in order(sets[0]):
            if not (g.neighbors(start) & closers):
                continue
            path.append(start)
            found = extend(1)
            path.pop()
            if found is not None:
                return found
    except _Out:
        return None
    return None if first else count


def count_global(g: Graph, shape: str) -> int:
    """Unlabelled copies of ``cherry``, ``C3`` or ``C4`` in ``g``."""
    if shape == "cherry":
        return sum(d * (d - 1) // 2 for d in g.degrees())
    a = g.adjacency_matrix().astype(np.float64)  # exact: all entries stay below 2**53
    if shape == "C3":
        a2 = a @ a
        return int(round(float((a2 * a).sum()))) // 6
    if shape == "C4":
        codeg = a @ a
        np.fill_diagonal(codeg, 0)
        pairs = codeg * (codeg - 1) / 2
        return int(round(float(pairs.sum()))) // 4  # ordered pairs (x2), each C4 has 2 diagonals
    raise ValueError(f"unknown shape {shape!r}")


# ---------------------------------------------------------------------------
# certification


@dataclass
class CountReport:
    prop: str  # A1, A2, A3, A2-global, A3-global
    k: int
    sizes: tuple[int, ...]
    observed: int | None
    bound: float
    upper: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.observed is None:
            return False
        return self.observed <= self.bound if self.upper else self.observed >= self.bound

    def row(self) -> list:
        return [
            self.prop,
            self.k,
            "x".join(map(str, self.sizes)),
            "" if self.observed is None else self.observed,
            f"{self.bound:.6g}",
            int(self.passed),
        ]


CSV_HEADER = ["property", "k", "sizes", "observed", "bound", "pass"]


def reports_to_csv(reports: Sequence[CountReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def _draw_sizes(rng, parts: int, lo: int, n: int, policy: str) -> list[int] | None:
    hi = n // parts
    if lo > hi:
        return None
    if policy == "minimum":
        return [lo] * parts
    if policy == "uniform":
        return [int(rng.integers(lo, hi + 1)) for _ in range(parts)]
    raise ValueError(f"unknown size policy {policy!r}")


def certify_pseudorandom(
    g: Graph,
    params,
    samples: int,
    seed=None,
    *,
    cap: int = 8,
    size_policy: str = "uniform",
    include_global: bool = True,
) -> list[CountReport]:
    """Sample set tuples and test the edge/cherry/cycle count conditions.

    Set sizes are at least ``n/ell0`` (edges, cherries) and ``n/ell0^2``
    (cycles).  ``size_policy="minimum"`` uses exactly those sizes;
    ``"uniform"`` draws each size uniformly up to ``n // parts``.  Cycle
    lengths run over ``ell <= k < min(ell0, cap)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = make_rng(seed)
    n, p, ell0 = g.n, params.p, params.ell0
    lo1 = math.ceil(n / ell0)
    lo3 = math.ceil(n / ell0**2)
    reports: list[CountReport] = []

    def tuple_of(sizes):
        perm = rng.permutation(n)
        out, at = [], 0
        for s in sizes:
            out.append(perm[at : at + s].tolist())
            at += s
        return out

    def too_small(prop, k, parts):
        reports.append(CountReport(prop, k, (), None, math.nan, note=f"n too small for {parts} sets"))

    for _ in range(samples):
        sizes = _draw_sizes(rng, 2, lo1, n, size_policy)
        if sizes is None:
            too_small("A1", 2, 2)
        else:
            v1, v2 = tuple_of(sizes)
            reports.append(CountReport("A1", 2, tuple(sizes), count_edges_between(g, v1, v2), p / 2 * sizes[0] * sizes[1]))
    for _ in range(samples):
        sizes = _draw_sizes(rng, 3, lo1, n, size_policy)
        if sizes is None:
            too_small("A2", 3, 3)
        else:
            v1, v2, v3 = tuple_of(sizes)
            reports.append(
                CountReport("A2", 3, tuple(sizes), count_cherries(g, v1, v2, v3), p**2 / 4 * math.prod(sizes))
            )
    cycle_ks = range(params.ell, min(ell0, cap))
    for k in cycle_ks:
        for _ in range(samples):
            sizes = _draw_sizes(rng, k, lo3, n, size_policy)
            if sizes is None:
                too_small("A3", k, k)
                continue
            parts = tuple_of(sizes)
            reports.append(
                CountReport("A3", k, tuple(sizes), count_cycles_rainbow(g, parts), 0.5 * p**k * math.prod(sizes))
            )
    if include_global:
        reports.append(CountReport("A2-global", 3, (n,), count_global(g, "cherry"), p**2 * n**3, upper=True))
        if params.ell < ell0:
            reports.append(CountReport("A3-global", 3, (n,), count_global(g, "C3"), p**3 * n**3, upper=True))
            reports.append(CountReport("A3-global", 4, (n,), count_global(g, "C4"), p**4 * n**4, upper=True))
    return reports
