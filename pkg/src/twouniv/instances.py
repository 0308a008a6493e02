"""Host and target generators, parameter sets, cycle-type specs."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from .graph import Graph, GraphError
from .rng import make_rng


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


# ---------------------------------------------------------------------------
# cycle-type specs


@dataclass(frozen=True, order=True)
class CycleTypeSpec:
    """Disjoint cycles plus at most one path.

    ``path_length`` counts edges; ``None`` means there is no path
    component and ``0`` means a lone vertex.
    """

    cycle_lengths: tuple[int, ...] = ()
    path_length: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "cycle_lengths", tuple(sorted(self.cycle_lengths, reverse=True)))
        for c in self.cycle_lengths:
            if c < 3:
                raise ValueError(f"cycle length {c} < 3")
        if self.path_length is not None and self.path_length < 0:
            raise ValueError("path length must be >= 0")

    @property
    def n(self) -> int:
        return sum(self.cycle_lengths) + (0 if self.path_length is None else self.path_length + 1)

    @property
    def girth(self) -> float:
        return min(self.cycle_lengths, default=math.inf)

    def is_maximal(self, ell: int) -> bool:
        """Membership in the edgewise-maximal family for girth ``ell``."""
        if any(c < ell for c in self.cycle_lengths):
            return False
        return self.path_length is None or self.path_length <= ell - 2

    def __str__(self) -> str:
        return format_spec(self)

    @classmethod
    def parse(cls, text: str) -> "CycleTypeSpec":
        return parse_spec(text)


_TOKEN = re.compile(r"^([CP])(\d+)$")


def parse_spec(text: str) -> CycleTypeSpec:
    """Parse ``"C3,C3,C5;P2"``; the path token may also appear alone (``"P4"``)."""
    cycles: list[int] = []
    path = None
    for tok in re.split(r"[;,\s]+", text.strip().upper()):
        if not tok:
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad spec token {tok!r} in {text!r}")
        kind, val = m.group(1), int(m.group(2))
        if kind == "C":
            cycles.append(val)
        elif path is not None:
            raise ValueError(f"more than one path in {text!r}")
        else:
            path = val
    return CycleTypeSpec(tuple(cycles), path)


def format_spec(spec: CycleTypeSpec) -> str:
    cyc = ",".join(f"C{c}" for c in spec.cycle_lengths)
    if spec.path_length is None:
        return cyc
    return f"{cyc};P{spec.path_length}" if cyc else f"P{spec.path_length}"


def build_f_graph(spec: CycleTypeSpec) -> Graph:
    """Cycles on consecutive ids in spec order, then the path."""
    edges = []
    base = 0
    for c in spec.cycle_lengths:
        edges.extend((base + i, base + (i + 1) % c) for i in range(c))
        base += c
    if spec.path_length is not None:
        edges.extend((base + i, base + i + 1) for i in range(spec.path_length))
        base += spec.path_length + 1
    return Graph.from_edges(base, edges)


def _partitions_min(total: int, smallest: int, largest: int) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into parts in ``[smallest, largest]``, non-increasing."""
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), smallest - 1, -1):
        for rest in _partitions_min(total - first, smallest, first):
            yield (first,) + rest


def enumerate_specs(n: int, ell: int) -> list[CycleTypeSpec]:
    """Every member of the maximal girth-``ell`` family on ``n`` vertices, up to isomorphism."""
    if n < 1 or ell < 3:
        raise ValueError("need n >= 1 and ell >= 3")
    out = [CycleTypeSpec(parts, None) for parts in _partitions_min(n, ell, n)]
    for path_vertices in range(1, min(ell - 1, n) + 1):
        for parts in _partitions_min(n - path_vertices, ell, n):
            out.append(CycleTypeSpec(parts, path_vertices - 1))
    return out


def random_spec(n: int, ell: int, seed=None) -> CycleTypeSpec:
    """A random maximal spec: random path size, then a random composition into cycles."""
    rng = make_rng(seed)
    options = [r for r in range(0, min(ell - 1, n) + 1) if n - r == 0 or n - r >= ell]
    r = int(rng.choice(options))
    rem = n - r
    cycles = []
    while rem:
        choices = [c for c in range(ell, rem + 1) if rem - c == 0 or rem - c >= ell]
        # bias towards short cycles half of the time so factors appear often
        if rng.random() < 0.5:
            c = int(choices[min(len(choices) - 1, int(rng.integers(0, 3)))])
        else:
            c = int(rng.choice(choices))
        cycles.append(c)
        rem -= c
    return CycleTypeSpec(tuple(cycles), None if r == 0 else r - 1)


# ---------------------------------------------------------------------------
# max-degree-2 structure


@dataclass(frozen=True)
class Component:
    kind: str  # "cycle" or "path"
    vertices: tuple[int, ...]  # traversal order

    @property
    def size(self) -> int:
        return len(self.vertices)


def linear_components(f: Graph, vertices=None) -> list[Component]:
    """Components of a max-degree-2 graph (optionally restricted), in traversal order."""
    allowed = set(range(f.n)) if vertices is None else set(vertices)
    seen: set[int] = set()
    out = []

    def nbrs(x):
        return [y for y in f.neighbors(x) if y in allowed]

    for s in sorted(allowed):
        if s in seen:
            continue
        if len(nbrs(s)) > 2:
            raise GraphError(f"vertex {s} has degree > 2")
        # walk to an endpoint if there is one
        start, prev = s, None
        while True:
            nxt = [y for y in nbrs(start) if y != prev]
            if len(nbrs(start)) < 2 or not nxt:
                break
            prev, start = start, nxt[0]
            if start == s:
                break
        order = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [y for y in nbrs(cur) if y != prev and y not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            order.append(cur)
            seen.add(cur)
        is_cycle = len(order) >= 3 and all(len(nbrs(v)) == 2 for v in order)
        out.append(Component("cycle" if is_cycle else "path", tuple(order)))
    return out


def spec_of_graph(f: Graph) -> CycleTypeSpec:
    comps = linear_components(f)
    cycles = tuple(c.size for c in comps if c.kind == "cycle")
    paths = [c for c in comps if c.kind == "path"]
    if len(paths) > 1:
        raise ValueError("graph has more than one path component")
    return CycleTypeSpec(cycles, paths[0].size - 1 if paths else None)


def girth_of(f: Graph) -> float:
    return min((c.size for c in linear_components(f) if c.kind == "cycle"), default=math.inf)


def augment_to_maximal(f: Graph, ell: int) -> Graph:
    """Add edges until only cycles of length >= ell and one short path remain.

    Paths are concatenated first (in order of their smallest vertex), and the
    merged path is closed into a cycle when it has at least ``ell`` vertices.
    """
    if f.max_degree() > 2:
        raise ValueError("target has a vertex of degree > 2")
    comps = linear_components(f)
    if any(c.kind == "cycle" and c.size < ell for c in comps):
        raise ValueError(f"target has a cycle shorter than {ell}")
    paths = sorted((c.vertices for c in comps if c.kind == "path"), key=min)
    if not paths:
        return f
    new_edges = []
    merged = list(paths[0])
    for p in paths[1:]:
        new_edges.append((merged[-1], p[0]))
        merged.extend(p)
    if len(merged) >= ell:
        new_edges.append((merged[-1], merged[0]))
    if not new_edges:
        return f
    return f.with_edges(new_edges)


# ---------------------------------------------------------------------------
# hosts


def sample_gnp(n: int, p: float, seed=None) -> Graph:
    """Binomial random graph; pair ``(i, j)``, ``i < j``, is tested in row-major order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in zip(iu[keep].tolist(), ju[keep].tolist()):
        adj[u].append(v)
        adj[v].append(u)
    return Graph(n, adj)


def bipartite_sizes(n: int, alpha: float) -> tuple[int, int]:
    a = round_half_up(alpha * n)
    return a, n - a


def make_bipartite_host(n: int, alpha: float) -> Graph:
    """Complete bipartite graph with parts ``{0..a-1}`` and ``{a..n-1}``, ``a = round(alpha n)``."""
    if not 0 < alpha <= 0.5:
        raise ValueError("alpha must lie in (0, 1/2]")
    a, b = bipartite_sizes(n, alpha)
    if a == 0 or b == 0:
        raise ValueError(f"degenerate bipartite host: part sizes {a}, {b}")
    small = list(range(a))
    large = list(range(a, n))
    return Graph(n, [large if v < a else small for v in range(n)])


def make_random_dense_host(n: int, alpha: float, seed=None) -> Graph:
    """Random graph with minimum degree at least ``ceil(alpha n)``.

    Each vertex picks ``ceil(alpha n)`` random partners; edges are symmetrised.
    """
    rng = make_rng(seed)
    d = min(n - 1, math.ceil(alpha * n - 1e-9))
    edges = []
    for v in range(n):
        others = rng.choice(n - 1, size=d, replace=False)
        edges.extend((v, int(o) + (o >= v)) for o in others)
    return Graph.from_edges(n, edges)


def min_degree_audit(g: Graph, alpha: float) -> bool:
    need = alpha * g.n
    return all(g.degree(v) >= need - 1e-9 for v in range(g.n))


# ---------------------------------------------------------------------------
# parameters


# with the practical defaults U would have fewer than 3 vertices at n <= 20
SMALL_N_OVERRIDES = {"u_fraction": 1 / 3, "epsilon": 0.25}


@dataclass
class ParamSet:
    """Constants of the embedding procedure.

    ``beta`` sets the number of centred copies (``round(beta n)``); the
    core set U has ``round(u_fraction n)`` vertices (default ``10 beta``);
    ``epsilon`` sets the leftover |V \\ W|.  ``reservoir_floor`` is the
    practical-mode stand-in for the ``10 epsilon`` reservoir guarantee.
    """

    n: int
    alpha: float
    beta: float
    epsilon: float
    ell: int = 3
    ell0: int = 100
    p: float = 0.0
    practical_mode: bool = True
    retry_budget: int = 20
    reservoir_floor: float = 0.0
    u_fraction: float | None = None
    tolerance: int | None = None
    switch_attempts: int = 12
    audit_pairs: int = 50
    placement_retries: int = 20

    @classmethod
    def practical(cls, n: int, alpha: float, ell: int = 3, p: float = 0.0, **overrides) -> "ParamSet":
        """Desk-scale defaults: ``beta = alpha/20``, ``epsilon = 0.1``, ``ell0 = ceil(10/epsilon)``."""
        eps = overrides.pop("epsilon", 0.1)
        kw = dict(beta=alpha / 20, epsilon=eps, ell0=max(ell + 1, math.ceil(10 / eps - 1e-9)))
        kw.update(overrides)
        return cls(n=n, alpha=alpha, ell=ell, p=p, **kw)

    @classmethod
    def small(cls, n: int, alpha: float, ell: int = 3, p: float = 0.0, **overrides) -> "ParamSet":
        """Preset for n below about 20: a third of the vertices in U and a quarter left over."""
        kw = dict(SMALL_N_OVERRIDES)
        kw.update(overrides)
        return cls.practical(n, alpha, ell=ell, p=p, **kw)

    def with_n(self, n: int) -> "ParamSet":
        return replace(self, n=n)

    @property
    def u_frac(self) -> float:
        return 10 * self.beta if self.u_fraction is None else self.u_fraction

    @property
    def u_target(self) -> int:
        return round_half_up(self.u_frac * self.n)

    @property
    def leftover_target(self) -> int:
        return round_half_up(self.epsilon * self.n)

    @property
    def centre_count(self) -> int:
        return round_half_up(self.beta * self.n)

    @property
    def slack(self) -> int:
        if self.tolerance is not None:
            return self.tolerance
        return max(2, math.ceil(self.n / 500)) if self.practical_mode else 2

    def violations(self) -> list[str]:
        out = []
        if not 0 < self.alpha <= 1:
            out.append("alpha must lie in (0, 1]")
        if not 0 <= self.p <= 1:
            out.append("p must lie in [0, 1]")
        if self.ell < 3:
            out.append("ell must be >= 3")
        if self.beta <= 0 or self.epsilon <= 0:
            out.append("beta and epsilon must be positive")
        if 20 * self.beta > self.alpha + 1e-12:
            out.append("20*beta <= alpha violated")
        if self.practical_mode:
            if self.ell0 < 3:
                out.append("ell0 >= 3 violated")
            if self.u_frac + self.epsilon > 1:
                out.append("core fraction + epsilon exceeds 1")
        else:
            if self.epsilon > 1e-4 * self.alpha**3 * self.beta / 2 + 1e-18:
                out.append("epsilon <= 1e-4*alpha^3*beta/2 violated")
            if self.ell0 < 10 / self.epsilon - 1e-9:
                out.append("ell0 >= 10/epsilon violated")
        if self.retry_budget < 1:
            out.append("retry_budget must be >= 1")
        return out

    def validate(self) -> "ParamSet":
        bad = self.violations()
        if bad:
            raise ValueError("invalid parameters: " + "; ".join(bad))
        return self


def threshold_p(n: int, ell: int, ell0: int) -> float:
    """The probability scale ``n^{-(ell-1)/ell}`` (``1/n`` once ``ell >= ell0``)."""
    if ell < ell0:
        return n ** (-(ell - 1) / ell)
    return 1.0 / n
