"""Partial embeddings, reservoir sets and the embedding of the core F[U].

The core is embedded by first mapping a sparse set of centres (with their
two neighbours) onto random disjoint centred copies in the random part G,
then growing the remaining pieces greedily and closing every gap of two
vertices with a host path of length three.  The random centred copies are
what makes the reservoir sets ``B(u, v)`` large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import CenterCapacityError, ClosureError, PlacementError, ReservoirShortfall
from .graph import Graph
from .instances import ParamSet, linear_components
from .rng import child_rng, make_rng
from .search import find_cycle


class PartialEmbedding:
    """Injective partial map from target vertices to host vertices."""

    def __init__(self, target: Graph, host_n: int, mapping: Mapping[int, int] | None = None):
        self.target = target
        self.host_n = host_n
        self._fwd: dict[int, int] = {}
        self._inv: dict[int, int] = {}
        self.spare: tuple[int, ...] = ()  # host vertices of centred copies left unused
        for a, x in (mapping or {}).items():
            self.assign(a, x)

    # -- map maintenance -----------------------------------------------

    def assign(self, a: int, x: int) -> None:
        if a in self._fwd:
            raise ValueError(f"target vertex {a} already mapped")
        if x in self._inv:
            raise ValueError(f"host vertex {x} already covered")
        if not (0 <= x < self.host_n):
            raise ValueError(f"host vertex {x} out of range")
        self._fwd[a] = x
        self._inv[x] = a

    def unassign(self, a: int) -> int:
        x = self._fwd.pop(a)
        del self._inv[x]
        return x

    def move(self, a: int, x: int) -> int:
        old = self.unassign(a)
        self.assign(a, x)
        return old

    def image(self, a: int) -> int:
        return self._fwd[a]

    def preimage(self, x: int) -> int:
        return self._inv[x]

    def is_mapped(self, a: int) -> bool:
        return a in self._fwd

    def is_covered(self, x: int) -> bool:
        return x in self._inv

    @property
    def mapped(self):
        return self._fwd.keys()

    @property
    def covered(self):
        return self._inv.keys()

    def __len__(self) -> int:
        return len(self._fwd)

    def as_dict(self) -> dict[int, int]:
        return dict(self._fwd)

    def copy(self) -> "PartialEmbedding":
        out = PartialEmbedding(self.target, self.host_n)
        out._fwd = dict(self._fwd)
        out._inv = dict(self._inv)
        out.spare = self.spare
        return out

    def rebase(self, target: Graph) -> "PartialEmbedding":
        out = self.copy()
        out.target = target
        return out

    # -- image graph ---------------------------------------------------

    def image_neighbors(self, x: int) -> set[int]:
        """Neighbours of host vertex ``x`` in the embedded image graph."""
        a = self._inv.get(x)
        if a is None:
            return set()
        return {self._fwd[b] for b in self.target.neighbors(a) if b in self._fwd}

    def neighborhood_map(self) -> dict[int, frozenset[int]]:
        return {x: frozenset(self.image_neighbors(x)) for x in self._inv}

    def edge_ok(self, h: Graph, a: int) -> bool:
        x = self._fwd[a]
        return all(h.has_edge(x, self._fwd[b]) for b in self.target.neighbors(a) if b in self._fwd)

    def violations(self, h: Graph) -> list[tuple[int, int]]:
        bad = []
        for a, b in self.target.edges():
            if a in self._fwd and b in self._fwd and not h.has_edge(self._fwd[a], self._fwd[b]):
                bad.append((a, b))
        return bad

    def is_valid(self, h: Graph) -> bool:
        return not self.violations(h)


# ---------------------------------------------------------------------------
# reservoir sets


def reservoir_set(fimg: PartialEmbedding, h: Graph, u: int, v: int) -> set[int]:
    """Covered ``w`` adjacent to ``u`` whose image neighbours all lie in ``N_H(v)``."""
    if u == v:
        raise ValueError("reservoir pair needs u != v")
    nv = h.neighbors(v)
    return {w for w in h.neighbors(u) if fimg.is_covered(w) and fimg.image_neighbors(w) <= nv}


def reservoir_single(fimg: PartialEmbedding, h: Graph, v: int) -> set[int]:
    """Covered ``w`` whose image neighbours all lie in ``N_H(v)`` (no adjacency to an anchor)."""
    nv = h.neighbors(v)
    return {w for w in fimg.covered if w != v and fimg.image_neighbors(w) <= nv}


class ReservoirIndex:
    """Tracks ``|B(u, v)|`` over a fixed sample of host pairs across switch steps."""

    def __init__(self, h: Graph, pairs: Iterable[tuple[int, int]]):
        self.h = h
        self.pairs = [(int(u), int(v)) for u, v in pairs]
        self.sizes: dict[tuple[int, int], int] = {}
        self.decrements: list[int] = []  # worst decrement over the sample, per step

    @classmethod
    def sample(cls, h: Graph, count: int, seed=None) -> "ReservoirIndex":
        rng = make_rng(seed)
        pairs = []
        if h.n >= 2:
            for _ in range(count):
                u, v = rng.choice(h.n, size=2, replace=False)
                pairs.append((int(u), int(v)))
        return cls(h, pairs)

    def members(self, fimg: PartialEmbedding, u: int, v: int) -> set[int]:
        return reservoir_set(fimg, self.h, u, v)

    def refresh(self, fimg: PartialEmbedding) -> dict[tuple[int, int], int]:
        self.sizes = {pr: len(reservoir_set(fimg, self.h, *pr)) for pr in self.pairs}
        return self.sizes

    def step(self, fimg: PartialEmbedding) -> int:
        """Recompute sizes and record the largest per-pair decrease since the last call."""
        before = self.sizes
        after = self.refresh(fimg)
        worst = max((before.get(pr, 0) - after[pr] for pr in self.pairs if pr in before), default=0)
        self.decrements.append(max(worst, 0))
        return worst

    def min_size(self) -> int:
        return min(self.sizes.values(), default=0)


# ---------------------------------------------------------------------------
# centres


def _distance_two(f: Graph, a: int) -> set[int]:
    near = f.neighbors(a)
    out: set[int] = set()
    for b in near:
        out |= f.neighbors(b)
    return out - near - {a}


def _slots(comp, ) -> list[int]:
    vs = comp.vertices
    if comp.kind == "cycle":
        cap = max(1, len(vs) // 5)
        return [5 * j for j in range(cap)]
    return list(range(1, len(vs) - 1, 5))


def center_capacity(f_u: Graph, ell: int, vertices=None) -> int:
    comps = linear_components(f_u, vertices)
    if ell != 3:
        return sum(len(_slots(c)) for c in comps)
    tri = sum(len(_slots(c)) for c in comps if c.kind == "cycle" and c.size == 3)
    rest = sum(len(_slots(c)) for c in comps if not (c.kind == "cycle" and c.size == 3))
    return max(tri, rest)


def pick_centers(f_u: Graph, t: int, ell: int, seed=None, vertices=None) -> list[int]:
    """``t`` degree-2 vertices at pairwise distance at least 5.

    A cycle of length ``L`` offers ``max(1, L // 5)`` slots spaced 5 apart
    from a random offset; a path offers its interior positions 1, 6, 11, ...
    For girth 3 the centres are all in triangles or all outside them,
    whichever class has more room.
    """
    rng = make_rng(seed)
    comps = linear_components(f_u, vertices)
    if ell == 3:
        tri = [c for c in comps if c.kind == "cycle" and c.size == 3]
        rest = [c for c in comps if not (c.kind == "cycle" and c.size == 3)]
        cap_tri = sum(len(_slots(c)) for c in tri)
        cap_rest = sum(len(_slots(c)) for c in rest)
        comps = tri if cap_tri > cap_rest else rest
    slots: list[int] = []
    for c in comps:
        offs = _slots(c)
        if not offs:
            continue
        shift = int(rng.integers(c.size)) if c.kind == "cycle" else 0
        slots.extend(c.vertices[(o + shift) % c.size] for o in offs)
    if t > len(slots):
        raise CenterCapacityError(t, len(slots))
    if t == 0:
        return []
    picked = rng.choice(len(slots), size=t, replace=False)
    return sorted(slots[int(i)] for i in picked)


# ---------------------------------------------------------------------------
# centred copies


@dataclass(frozen=True)
class CenteredCopy:
    center: int
    ends: tuple[int, int]
    fourth: int | None = None  # opposite vertex of a C4 copy

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.center, *self.ends) + (() if self.fourth is None else (self.fourth,))


class _CherrySampler:
    """Uniform cherries inside a fixed vertex set: centre weighted by C(d, 2), then two neighbours."""

    def __init__(self, g: Graph, free: set[int]):
        self.cand = sorted(free)
        self.nbrs = [sorted(g.neighbors(x) & free) for x in self.cand]
        w = np.array([len(nb) * (len(nb) - 1) / 2 for nb in self.nbrs], dtype=float)
        total = w.sum()
        self.probs = w / total if total > 0 else None

    def maxdeg(self) -> int:
        return max((len(nb) for nb in self.nbrs), default=0)

    def draw(self, rng):
        if self.probs is None:
            return None
        i = int(rng.choice(len(self.cand), p=self.probs))
        a, b = rng.choice(len(self.nbrs[i]), size=2, replace=False)
        return self.cand[i], self.nbrs[i][int(a)], self.nbrs[i][int(b)]


def _sample_cherry(g: Graph, free: set[int], rng):
    return _CherrySampler(g, free).draw(rng)


def _sample_copy(g: Graph, shape: str, free: set[int], rng, tries: int):
    sampler = _CherrySampler(g, free)
    if shape == "cherry":
        c = sampler.draw(rng)
        return None if c is None else CenteredCopy(c[0], (c[1], c[2]))
    maxdeg = sampler.maxdeg()
    for _ in range(tries):
        c = sampler.draw(rng)
        if c is None:
            return None
        x, a, b = c
        if shape == "C3":
            if g.has_edge(a, b):
                return CenteredCopy(x, (a, b))
            continue
        common = sorted((g.neighbors(a) & g.neighbors(b) & free) - {x})
        # accept proportionally to the number of completions keeps the C4 draw uniform
        if common and rng.random() < len(common) / maxdeg:
            return CenteredCopy(x, (a, b), common[int(rng.integers(len(common)))])
    # rejection ran dry: fall back to an exhaustive scan in random order
    order = sorted(free)
    rng.shuffle(order)
    for x in order:
        nb = sorted(g.neighbors(x) & free)
        rng.shuffle(nb)
        for i, a in enumerate(nb):
            for b in nb[i + 1 :]:
                if shape == "C3" and g.has_edge(a, b):
                    return CenteredCopy(x, (a, b))
                if shape == "C4":
                    common = sorted((g.neighbors(a) & g.neighbors(b) & free) - {x})
                    if common:
                        return CenteredCopy(x, (a, b), common[int(rng.integers(len(common)))])
    return None


def copy_audit(copies, g_alpha: Graph, pairs) -> list[int]:
    """Per pair ``(u, v)``: copies with centre in ``N(u)`` and both ends in ``N(v)`` (in ``g_alpha``)."""
    out = []
    for u, v in pairs:
        nu, nv = g_alpha.neighbors(u), g_alpha.neighbors(v)
        out.append(sum(1 for c in copies if c.center in nu and c.ends[0] in nv and c.ends[1] in nv))
    return out


class PlacementAudit:
    def __init__(self, attempts: int, best_min: int, target: int):
        self.attempts = attempts
        self.best_min = best_min
        self.target = target


def place_centered_copies(
    g: Graph,
    g_alpha: Graph,
    shape: str,
    t: int,
    reservoir_target: int,
    seed=None,
    *,
    forbidden: Iterable[int] = (),
    audit_pairs: int = 50,
    retries: int = 20,
    rejection_tries: int = 2000,
) -> list[CenteredCopy]:
    """``t`` vertex-disjoint centred copies of ``shape`` in ``g``, drawn one after another.

    Each draw is (close to) uniform over copies disjoint from the earlier
    ones.  The result must give at least ``reservoir_target`` good copies for
    every sampled pair ``(u, v)``; otherwise the whole placement is redrawn.
    """
    if shape not in ("cherry", "C3", "C4"):
        raise ValueError(f"unknown shape {shape!r}")
    rng = make_rng(seed)
    size = 4 if shape == "C4" else 3
    base_free = set(range(g.n)) - set(forbidden)
    if size * t > len(base_free):
        raise PlacementError(f"{t} disjoint {shape} copies need {size * t} vertices, {len(base_free)} free")
    best = -1
    for attempt in range(max(retries, 1)):
        free = set(base_free)
        copies: list[CenteredCopy] = []
        for _ in range(t):
            c = _sample_copy(g, shape, free, rng, rejection_tries)
            if c is None:
                raise PlacementError(f"no {shape} copy left after {len(copies)} of {t} placements")
            copies.append(c)
            free -= set(c.vertices)
        if reservoir_target <= 0 or t == 0:
            return copies
        pairs = [tuple(int(z) for z in rng.choice(g.n, size=2, replace=False)) for _ in range(audit_pairs)]
        counts = copy_audit(copies, g_alpha, pairs)
        low = min(counts, default=0)
        best = max(best, low)
        if low >= reservoir_target:
            return copies
    err = PlacementError(
        f"reservoir audit failed {retries} times: best minimum {best} < target {reservoir_target}"
    )
    err.audit = PlacementAudit(retries, best, reservoir_target)
    raise err


# ---------------------------------------------------------------------------
# core embedding


def _closing_edge(f_u: Graph, vertices: set[int], ell: int):
    ends = [v for v in vertices if len(f_u.neighbors(v) & vertices) == 1]
    if len(ends) != 2:
        return None
    a, b = ends
    d = f_u.restricted(vertices).distance(a, b)
    return (a, b) if d != math.inf and d >= ell - 1 else None


def embed_core(f_u: Graph, g: Graph, g_alpha: Graph, params: ParamSet, seed=None, vertices=None):
    """Embed the core ``f_u`` into ``g | g_alpha``; returns ``(embedding, reservoir index)``.

    ``vertices`` restricts the target to a subset of ids (the core set U);
    default is every vertex of ``f_u``.
    """
    rng = make_rng(seed)
    h = g.union(g_alpha)
    core = set(range(f_u.n)) if vertices is None else set(vertices)
    work = f_u.restricted(core)
    extra = _closing_edge(work, core, params.ell)
    if extra is not None:
        work = work.with_edges([extra])

    emb = PartialEmbedding(work, h.n)
    t = params.centre_count
    cap = center_capacity(work, params.ell, core)
    if t > cap:
        if t - 1 <= cap:  # the centre count carries a +-1 slack
            t = cap
        else:
            raise CenterCapacityError(t, cap)
    centres = pick_centers(work, t, params.ell, child_rng(rng), core)
    comps = linear_components(work, core)
    comp_of = {v: c for c in comps for v in c.vertices}

    in_tri = bool(centres) and comp_of[centres[0]].kind == "cycle" and comp_of[centres[0]].size == 3
    if params.ell == 3 and in_tri:
        shape = "C3"
    elif params.ell <= 4:
        shape = "C4"
    else:
        shape = "cherry"

    target = math.ceil(params.reservoir_floor * params.n - 1e-9)
    copies = place_centered_copies(
        g,
        g_alpha,
        shape,
        len(centres),
        target,
        child_rng(rng),
        audit_pairs=params.audit_pairs,
        retries=params.placement_retries,
    )
    spare = []
    for x, cp in zip(centres, copies):
        y1, y2 = sorted(work.neighbors(x))
        if rng.random() < 0.5:
            y1, y2 = y2, y1
        emb.assign(x, cp.center)
        emb.assign(y1, cp.ends[0])
        emb.assign(y2, cp.ends[1])
        if cp.fourth is not None:
            comp = comp_of[x]
            if comp.kind == "cycle" and comp.size == 4:
                (z,) = set(comp.vertices) - {x, y1, y2}
                emb.assign(z, cp.fourth)
            else:
                spare.append(cp.fourth)

    def free_vertices():
        return set(range(h.n)) - set(emb.covered)

    # short cycles of the core without a centre are placed whole
    if params.ell <= 4:
        for comp in comps:
            if comp.kind == "cycle" and comp.size <= 4 and not any(emb.is_mapped(v) for v in comp.vertices):
                cyc = find_cycle(h, free_vertices(), comp.size, child_rng(rng))
                if cyc is None:
                    raise PlacementError(f"no free C{comp.size} for a core component")
                for a, x in zip(comp.vertices, cyc):
                    emb.assign(a, x)

    for comp in comps:
        if not any(emb.is_mapped(v) for v in comp.vertices):
            free = sorted(free_vertices())
            if not free:
                raise ClosureError("host exhausted")
            emb.assign(comp.vertices[0], free[int(rng.integers(len(free)))])

    _extend(work, emb, h, core, rng)
    _close_gaps(work, emb, h, core, rng)

    final = emb.rebase(f_u)  # drop the closing edge again
    final.spare = tuple(spare)
    index = ReservoirIndex.sample(h, params.audit_pairs, child_rng(rng))
    index.refresh(final)
    if target > 0 and index.min_size() < target:
        raise ReservoirShortfall(f"reservoir minimum {index.min_size()} < floor {target}")
    return final, index


def _extend(work: Graph, emb: PartialEmbedding, h: Graph, core: set[int], rng) -> None:
    """Grow embedded pieces one vertex at a time while no gap drops below two."""
    changed = True
    while changed:
        changed = False
        for u in sorted(core):
            if emb.is_mapped(u):
                continue
            mapped_nb = [b for b in work.neighbors(u) if emb.is_mapped(b)]
            if len(mapped_nb) != 1:
                continue
            if sum(1 for z in _distance_two(work, u) if emb.is_mapped(z)) > 1:
                continue
            cands = sorted(h.neighbors(emb.image(mapped_nb[0])) - set(emb.covered))
            if not cands:
                raise ClosureError(f"no free neighbour to extend from target vertex {mapped_nb[0]}")
            emb.assign(u, cands[int(rng.integers(len(cands)))])
            changed = True


def _close_gaps(work: Graph, emb: PartialEmbedding, h: Graph, core: set[int], rng) -> None:
    """Fill every remaining two-vertex gap ``a - x - y - b`` by a host path of length three."""
    for x in sorted(core):
        if emb.is_mapped(x):
            continue
        nb = list(work.neighbors(x))
        a = [z for z in nb if emb.is_mapped(z)]
        y = [z for z in nb if not emb.is_mapped(z)]
        if len(a) != 1 or len(y) != 1:
            raise ClosureError(f"target vertex {x} is not in a gap of length two")
        a, y = a[0], y[0]
        b = [z for z in work.neighbors(y) if z != x]
        if len(b) != 1 or not emb.is_mapped(b[0]):
            raise ClosureError(f"target vertex {y} is not in a gap of length two")
        b = b[0]
        covered = set(emb.covered)
        xs = sorted(h.neighbors(emb.image(a)) - covered)
        ys = h.neighbors(emb.image(b)) - covered
        rng.shuffle(xs)
        for xt in xs:
            opts = sorted((h.neighbors(xt) & ys) - {xt})
            if opts:
                emb.assign(x, xt)
                emb.assign(y, opts[int(rng.integers(len(opts)))])
                break
        else:
            raise ClosureError(f"no host path of length three between images of {a} and {b}")
