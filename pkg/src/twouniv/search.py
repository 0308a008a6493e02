"""Randomised path and cycle search in a host restricted to a vertex set."""

from __future__ import annotations

from typing import Iterable

from .counting import rainbow_cycle_dfs
from .errors import PathSearchError
from .graph import Graph
from .rng import make_rng


def _restricted_neighbors(g: Graph, allowed: set[int]) -> dict[int, frozenset[int]]:
    return {v: g.neighbors(v) & allowed for v in allowed}


def _pick(cands: list[int], rng, weight=None) -> int:
    if weight is None:
        return cands[int(rng.integers(len(cands)))]
    low = min(weight[y] for y in cands)
    best = [y for y in cands if weight[y] == low]
    return best[int(rng.integers(len(best)))]


def _order(cands: list[int], rng, weight=None) -> list[int]:
    rng.shuffle(cands)
    if weight is not None:
        cands.sort(key=weight.__getitem__)
    return cands


def _grow(nbr, path: list[int], need: int, rng, rot_budget: int, *, keep_start: bool, weight=None) -> list[int]:
    """Extend ``path`` in place to ``need`` vertices using Posa rotations when stuck."""
    on = set(path)
    rots = 0
    while len(path) < need:
        end = path[-1]
        free = [y for y in nbr[end] if y not in on]
        if free:
            y = _pick(free, rng, weight)
            path.append(y)
            on.add(y)
            continue
        if rots >= rot_budget:
            break
        rots += 1
        if not keep_start and len(path) > 1 and any(y not in on for y in nbr[path[0]]):
            path.reverse()
            continue
        pivots = [y for y in nbr[end] if len(path) < 2 or y != path[-2]]
        if not pivots:
            break
        y = pivots[int(rng.integers(len(pivots)))]
        i = path.index(y)
        path[i + 1 :] = path[i + 1 :][::-1]
    return path


def find_long_path(
    g: Graph,
    avoid: Iterable[int],
    min_len: int,
    seed=None,
    *,
    restarts: int = 10,
    rotation_factor: int = 2,
    low_degree_first: bool = False,
) -> list[int]:
    """A simple path with at least ``min_len`` edges avoiding ``avoid``.

    Random extension with rotations when the end gets stuck, restarted from
    fresh random vertices up to ``restarts`` times.  With
    ``low_degree_first`` the extension prefers neighbours of small degree
    inside the allowed set, saving well-connected vertices for later.
    """
    rng = make_rng(seed)
    allowed = set(range(g.n)) - set(avoid)
    need = max(min_len, 0) + 1
    if need > len(allowed):
        raise PathSearchError(f"need {need} vertices, only {len(allowed)} available")
    pool = sorted(allowed)
    if need == 1:
        return [pool[int(rng.integers(len(pool)))]]
    nbr = _restricted_neighbors(g, allowed)
    weight = {v: len(nb) for v, nb in nbr.items()} if low_degree_first else None
    best = 0
    for _ in range(restarts):
        start = pool[int(rng.integers(len(pool)))]
        path = _grow(nbr, [start], need, rng, rotation_factor * need, keep_start=False, weight=weight)
        if len(path) >= need:
            return path
        best = max(best, len(path) - 1)
    raise PathSearchError(f"longest path found has {best} edges, wanted {min_len}")


def find_cycle(
    g: Graph,
    allowed: Iterable[int],
    k: int,
    seed=None,
    *,
    restarts: int = 20,
    budget: int = 5000,
    low_degree_first: bool = False,
):
    """A ``k``-cycle inside ``allowed`` as a vertex list, or ``None``.

    Short cycles use a budgeted DFS; longer ones grow a path from a fixed
    start and rotate its far end until it closes.  ``low_degree_first``
    orders candidates by their degree inside ``allowed``.
    """
    if k < 3:
        raise ValueError("cycles need k >= 3")
    rng = make_rng(seed)
    allowed = set(allowed)
    if len(allowed) < k:
        return None
    nbr = _restricted_neighbors(g, allowed)
    pool = sorted(v for v in allowed if len(nbr[v]) >= 2)
    if len(pool) < k:
        return None
    weight = {v: len(nb) for v, nb in nbr.items()} if low_degree_first else None
    if k <= 6:
        return _short_cycle_dfs(nbr, pool, k, rng, restarts * budget, weight=weight)
    for _ in range(restarts):
        s = _pick(pool, rng, weight)
        path = _grow(nbr, [s], k, rng, 2 * k, keep_start=True, weight=weight)
        if len(path) < k:
            continue
        on = set(path)
        for _ in range(4 * k):
            if path[0] in nbr[path[-1]]:
                return path
            pivots = [y for y in nbr[path[-1]] if y in on and y != path[-2] and y != path[0]]
            if not pivots:
                break
            y = pivots[int(rng.integers(len(pivots)))]
            i = path.index(y)
            path[i + 1 :] = path[i + 1 :][::-1]
    return None


def _short_cycle_dfs(nbr, pool, k, rng, budget, per_start: int = 400, weight=None):
    """Randomised DFS for a ``k``-cycle, ``per_start`` nodes from each start, ``budget`` overall."""

    class _Stop(Exception):
        pass

    starts = _order(list(pool), rng, weight)
    total = 0
    for s in starts:
        if total > budget:
            return None
        path = [s]
        on = {s}
        local = 0
        ns = nbr[s]

        def rec() -> bool:
            nonlocal local, total
            local += 1
            total += 1
            if local > per_start:
                raise _Stop
            end = path[-1]
            depth = len(path)
            if depth == k - 1:
                cands = [y for y in nbr[end] & ns if y not in on]
            elif depth == k - 2:
                # the next vertex must still see a free common neighbour with the start
                cands = [y for y in nbr[end] if y not in on and any(z not in on and z != y for z in nbr[y] & ns)]
            else:
                cands = [y for y in nbr[end] if y not in on]
            if depth == k - 1:
                if cands:
                    path.append(_pick(cands, rng, weight))
                    return True
                return False
            for y in _order(cands, rng, weight):
                path.append(y)
                on.add(y)
                if rec():
                    return True
                path.pop()
                on.discard(y)
            return False

        try:
            if rec():
                return list(path)
        except _Stop:
            continue
    return None


def rainbow_block_cycle(
    g: Graph,
    allowed: Iterable[int],
    k: int,
    rng,
    *,
    min_block: int = 1,
    reshuffles: int = 5,
    budget: int = 20000,
    low_degree_first: bool = False,
):
    """Split ``allowed`` into ``k`` random blocks and look for a cycle with one vertex per block."""
    verts = sorted(allowed)
    if len(verts) < k * max(min_block, 1):
        return None
    weight = None
    if low_degree_first:
        keep = set(verts)
        weight = {v: len(g.neighbors(v) & keep) for v in verts}
    for _ in range(reshuffles):
        rng.shuffle(verts)
        blocks = [verts[i::k] for i in range(k)]
        cyc = rainbow_cycle_dfs(g, blocks, first=True, rng=rng, budget=budget, priority=weight)
        if cyc:
            return cyc
    return None
