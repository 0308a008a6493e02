"""Middle embedding, switching, and the end-to-end driver ``embed_full``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .counting import rainbow_cycle_dfs
from .decompose import Decomposition, DecompositionInfeasible, decompose
from .errors import CycleSearchError, ReservoirUnderflow, StageError, SwitchSearchError
from .graph import Graph
from .instances import ParamSet, augment_to_maximal, linear_components, min_degree_audit
from .oracle import verify_embedding, verify_family_membership
from .reservoir import PartialEmbedding, ReservoirIndex, embed_core, reservoir_set, reservoir_single
from .rng import child_rng, derive_seed, make_rng
from .search import find_cycle, find_long_path, rainbow_block_cycle

__all__ = [
    "embed_middle",
    "find_long_path",
    "find_cycle",
    "Increment",
    "SwitchPlan",
    "SwitchRecord",
    "build_switch_plan",
    "switch_insert_pair",
    "switch_insert_triangle",
    "run_switch_plan",
    "FailureReport",
    "EmbedResult",
    "embed_full",
]


# ---------------------------------------------------------------------------
# middle part


def embed_middle(f_mid: Graph, host: Graph, occupied, params: ParamSet, seed=None, vertices=None) -> PartialEmbedding:
    """Embed the paths and short cycles of ``f_mid`` into the unoccupied part of ``host``.

    All paths go onto consecutive segments of one long path; cycles are then
    placed longest first by a rainbow search over random blocks of the free
    vertices, with a plain cycle search as fallback.  Every search tries
    vertices of small free degree first so the best-connected host vertices
    stay available for the last, most constrained placements.
    """
    rng = make_rng(seed)
    emb = PartialEmbedding(f_mid, host.n)
    occupied = set(occupied)
    comps = linear_components(f_mid, vertices)
    paths = [c for c in comps if c.kind == "path"]
    cycles = sorted((c for c in comps if c.kind == "cycle"), key=lambda c: -c.size)

    total = sum(c.size for c in paths)
    if total:
        line = find_long_path(host, occupied, total - 1, child_rng(rng), low_degree_first=True)
        at = 0
        for c in paths:
            for a in c.vertices:
                emb.assign(a, line[at])
                at += 1

    min_block = max(1, math.ceil(host.n / params.ell0**2))
    for c in cycles:
        free = set(range(host.n)) - occupied - set(emb.covered)
        cyc = rainbow_block_cycle(host, free, c.size, rng, min_block=min_block, reshuffles=3, low_degree_first=True)
        if cyc is None:
            cyc = find_cycle(host, free, c.size, child_rng(rng), low_degree_first=True)
        if cyc is None:
            raise CycleSearchError(f"no free C{c.size} among {len(free)} uncovered vertices")
        for a, x in zip(c.vertices, cyc):
            emb.assign(a, x)
    return emb


# ---------------------------------------------------------------------------
# switching plan


@dataclass(frozen=True)
class Increment:
    kind: str  # "pair" or "triangle"
    new: tuple[int, ...]
    anchors: tuple[int | None, ...] = ()


@dataclass
class SwitchPlan:
    increments: list[Increment]

    @property
    def t(self) -> int:
        return len(self.increments)

    @property
    def t_prime(self) -> int:
        """1-based index of the first triangle increment (``t + 1`` when there is none)."""
        for i, inc in enumerate(self.increments):
            if inc.kind == "triangle":
                return i + 1
        return self.t + 1


def build_switch_plan(f: Graph, d: Decomposition, ell: int) -> SwitchPlan:
    rest = set(d.leftover)
    pairs, triangles = [], []
    for comp in linear_components(f, rest):
        if comp.kind == "path" and comp.size == 2:
            w1, w2 = comp.vertices
            anchors = []
            for w, other in ((w1, w2), (w2, w1)):
                out = [z for z in f.neighbors(w) if z != other]
                if out and out[0] in rest:
                    raise ValueError(f"edge {w1}-{w2} of the leftover is not isolated there")
                anchors.append(out[0] if out else None)
            pairs.append(Increment("pair", (w1, w2), tuple(anchors)))
        elif comp.kind == "cycle" and comp.size == 3:
            if ell != 3:
                raise ValueError("triangle in the leftover although the girth bound exceeds 3")
            triangles.append(Increment("triangle", comp.vertices))
        else:
            raise ValueError(f"leftover component {comp.vertices} is neither an edge nor a triangle")
    return SwitchPlan(pairs + triangles)


# ---------------------------------------------------------------------------
# switch steps


@dataclass
class SwitchRecord:
    kind: str
    changed: int  # old-image host vertices whose image neighbourhood changed
    valid: bool
    decrement: int | None = None


def _changed(before: dict, emb: PartialEmbedding) -> int:
    return sum(1 for x, nb in before.items() if frozenset(emb.image_neighbors(x)) != nb)


def _apply_moves(emb: PartialEmbedding, h: Graph, new, olds, spots) -> bool:
    """Relocate the occupants of ``olds`` to ``spots`` and embed ``new`` onto ``olds``.

    Reverts and returns False if any touched edge is not a host edge.
    """
    displaced = [emb.preimage(x) for x in olds]
    for p in displaced:
        emb.unassign(p)
    for p, s in zip(displaced, spots):
        emb.assign(p, s)
    for w, x in zip(new, olds):
        emb.assign(w, x)
    if all(emb.edge_ok(h, a) for a in (*displaced, *new)):
        return True
    for w in new:
        emb.unassign(w)
    for p, x in zip(displaced, olds):
        emb.unassign(p)
        emb.assign(p, x)
    return False


def _distinct_tuples(free: list[int], size: int, count: int, rng):
    """Up to ``count`` distinct ordered tuples of free vertices, uniformly at random."""
    total = math.perm(len(free), size)
    if total <= 4 * count:
        every = [tuple(free[i] for i in idx) for idx in _ordered(len(free), size)]
        rng.shuffle(every)
        return every[:count]
    seen: set = set()
    out = []
    while len(out) < count:
        tup = tuple(free[int(i)] for i in rng.choice(len(free), size=size, replace=False))
        if tup not in seen:
            seen.add(tup)
            out.append(tup)
    return out


def _ordered(m: int, size: int):
    from itertools import permutations

    return permutations(range(m), size)


def _finish(emb, before, kind, index, log, h):
    rec = SwitchRecord(kind, _changed(before, emb), emb.is_valid(h))
    if index is not None:
        rec.decrement = index.step(emb)
    if log is not None:
        log.append(rec)
    return emb


def switch_insert_pair(
    emb: PartialEmbedding,
    index: ReservoirIndex | None,
    h: Graph,
    g: Graph,
    g_alpha: Graph,
    anchors: tuple[int | None, int | None],
    seed=None,
    *,
    new: tuple[int, int],
    floor: float = 0.0,
    attempts: int = 12,
    log: list | None = None,
) -> PartialEmbedding:
    """Embed the edge ``new = (w1, w2)`` hanging off ``anchors`` by one switch.

    Two free host vertices take over the occupants of a G-edge found between
    the reservoirs of the anchor images; the new edge then uses that G-edge.
    A missing anchor is replaced by a random covered vertex whose edge is
    not kept.  ``g_alpha`` is part of ``h``; it is accepted for symmetry.
    """
    rng = make_rng(seed)
    free = sorted(set(range(h.n)) - set(emb.covered))
    if len(free) < 2:
        raise SwitchSearchError("fewer than two uncovered host vertices")
    need = max(1, math.ceil(2 * floor * h.n - 1e-9))
    covered = sorted(emb.covered)
    anchor_imgs = []
    for u in anchors:
        if u is not None:
            anchor_imgs.append(emb.image(u))
        else:
            anchor_imgs.append(covered[int(rng.integers(len(covered)))] if covered else None)
    fixed = {emb.image(u) for u in anchors if u is not None}
    short = 0
    tries = _distinct_tuples(free, 2, attempts, rng)
    for v1, v2 in tries:
        sets = []
        for a, v in zip(anchor_imgs, (v1, v2)):
            s = reservoir_single(emb, h, v) if a is None else reservoir_set(emb, h, a, v)
            sets.append(s - fixed)
        if min(len(sets[0]), len(sets[1])) < need:
            short += 1
            continue
        before = emb.neighborhood_map()
        order = sorted(sets[0])
        rng.shuffle(order)
        for x1 in order:
            opts = sorted((g.neighbors(x1) & sets[1]) - {x1})
            rng.shuffle(opts)
            for x2 in opts:
                if _apply_moves(emb, h, new, (x1, x2), (v1, v2)):
                    return _finish(emb, before, "pair", index, log, h)
    if short == len(tries):
        raise ReservoirUnderflow(f"reservoir below {need} for all {len(tries)} choices of free vertices")
    raise SwitchSearchError(f"no usable G-edge between reservoirs in {len(tries)} attempts")


def switch_insert_triangle(
    emb: PartialEmbedding,
    index: ReservoirIndex | None,
    h: Graph,
    g: Graph,
    g_alpha: Graph,
    seed=None,
    *,
    new: tuple[int, int, int],
    floor: float = 0.0,
    attempts: int = 12,
    splits: int = 3,
    budget: int = 20000,
    log: list | None = None,
) -> PartialEmbedding:
    """Embed the isolated triangle ``new`` by switching three reservoir vertices.

    The reservoirs of three free host vertices are split at random into
    disjoint blocks and a triangle of ``g`` with one vertex per block is
    searched for.
    """
    rng = make_rng(seed)
    free = sorted(set(range(h.n)) - set(emb.covered))
    if len(free) < 3:
        raise SwitchSearchError("fewer than three uncovered host vertices")
    need = max(1, math.ceil(floor * h.n - 1e-9))
    short = 0
    # the three free vertices play symmetric roles, so unordered triples suffice
    tries = list({tuple(sorted(t)) for t in _distinct_tuples(free, 3, attempts * 6, rng)})
    tries.sort()
    rng.shuffle(tries)
    tries = tries[:attempts]
    for spots in tries:
        sets = [reservoir_single(emb, h, v) for v in spots]
        if min(len(s) for s in sets) < need:
            short += 1
            continue
        before = emb.neighborhood_map()
        pool = sorted(sets[0] | sets[1] | sets[2])
        for _ in range(splits):
            blocks: list[list[int]] = [[], [], []]
            for x in pool:
                homes = [j for j in range(3) if x in sets[j]]
                blocks[homes[int(rng.integers(len(homes)))]].append(x)
            if not all(blocks):
                continue
            tri = rainbow_cycle_dfs(g, blocks, first=True, rng=rng, budget=budget)
            if tri is None:
                continue
            if _apply_moves(emb, h, new, tuple(tri), spots):
                return _finish(emb, before, "triangle", index, log, h)
    if short == len(tries):
        raise ReservoirUnderflow(f"reservoir below {need} for all {len(tries)} choices of free vertices")
    raise SwitchSearchError(f"no rainbow triangle in G between reservoirs in {len(tries)} attempts")


def run_switch_plan(plan: SwitchPlan, emb, index, h, g, g_alpha, params: ParamSet, seed=None, log=None, order_tries=3):
    """Execute all increments, edges before triangles.

    Within each kind the next increment is chosen adaptively: up to
    ``order_tries`` pending increments are tried in random order and the
    first that switches in successfully is taken.
    """
    rng = make_rng(seed)
    for kind in ("pair", "triangle"):
        pending = [inc for inc in plan.increments if inc.kind == kind]
        while pending:
            picks = [int(i) for i in rng.permutation(len(pending))[:order_tries]]
            err = None
            for i in picks:
                inc = pending[i]
                try:
                    if kind == "pair":
                        switch_insert_pair(
                            emb, index, h, g, g_alpha, inc.anchors, child_rng(rng),
                            new=inc.new, floor=params.reservoir_floor, attempts=params.switch_attempts, log=log,
                        )
                    else:
                        switch_insert_triangle(
                            emb, index, h, g, g_alpha, child_rng(rng),
                            new=inc.new, floor=params.reservoir_floor, attempts=params.switch_attempts, log=log,
                        )
                except StageError as exc:
                    err = exc
                    continue
                pending.pop(i)
                err = None
                break
            if err is not None:
                raise err
    return emb


# ---------------------------------------------------------------------------
# end to end


@dataclass
class FailureReport:
    stage: str
    reason: str
    seed: int | None
    sizes: dict = field(default_factory=dict)

    def to_record(self) -> str:
        sz = ",".join(f"{k}={v}" for k, v in self.sizes.items())
        reason = self.reason.replace("\t", " ").replace("\n", " ")
        return f"stage={self.stage}\treason={reason}\tseed={self.seed}\tsizes={sz}"


@dataclass
class EmbedResult:
    success: bool
    embedding: dict[int, int] | None
    failure: FailureReport | None
    retries: int
    switch_log: list[SwitchRecord] = field(default_factory=list)
    decomposition: Decomposition | None = None

    @property
    def outcome(self) -> str:
        return "success" if self.success else f"fail:{self.failure.stage}"


def embed_full(f: Graph, g: Graph, g_alpha: Graph, params: ParamSet, seed=0) -> EmbedResult:
    """Spanning embedding of ``f`` into ``g | g_alpha``, retried with derived seeds."""
    n = f.n
    seed = int(seed)

    def fail(stage, reason, sizes=None, retries=0, log=None, d=None):
        return EmbedResult(False, None, FailureReport(stage, reason, seed, sizes or {"n": n}), retries, log or [], d)

    if not (g.n == g_alpha.n == n):
        return fail("input", f"vertex counts differ: target {n}, G {g.n}, G_alpha {g_alpha.n}")
    if not min_degree_audit(g_alpha, params.alpha):
        return fail("input", f"G_alpha has minimum degree {g_alpha.min_degree()} < alpha*n = {params.alpha * n:g}")
    if not verify_family_membership(f, params.ell, maximal=False):
        return fail("input", f"target is not max-degree-2 with girth >= {params.ell}")
    prm = params.with_n(n)
    f_aug = augment_to_maximal(f, prm.ell)
    h = g.union(g_alpha)
    try:
        d = decompose(f_aug, prm)
    except DecompositionInfeasible as exc:
        return fail("decompose", str(exc))
    sizes = {"n": n, "U": len(d.u_set), "mid": len(d.middle), "rest": len(d.leftover)}
    plan = build_switch_plan(f_aug, d, prm.ell)

    last = None
    for attempt in range(max(prm.retry_budget, 1)):
        rng = make_rng(derive_seed(seed, attempt))
        log: list[SwitchRecord] = []
        try:
            core, index = embed_core(f_aug, g, g_alpha, prm, child_rng(rng), vertices=d.u_set)
            mid = embed_middle(f_aug, h, core.covered, prm, child_rng(rng), vertices=d.middle)
            emb = PartialEmbedding(f_aug, n, {**core.as_dict(), **mid.as_dict()})
            index.refresh(emb)
            run_switch_plan(plan, emb, index, h, g, g_alpha, prm, child_rng(rng), log)
        except StageError as exc:
            last = (exc.stage, str(exc), log)
            continue
        mapping = emb.as_dict()
        ok, problems = verify_embedding(f, h, mapping, require_spanning=True)
        if not ok:
            last = ("verify", "; ".join(problems[:3]), log)
            continue
        return EmbedResult(True, mapping, None, attempt, log, d)
    stage, reason, log = last
    return fail(stage, reason, sizes, prm.retry_budget - 1, log, d)
