"""Undirected simple graphs over dense integer vertex ids."""

from __future__ import annotations

import math
from collections import deque
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

INF = math.inf


class GraphError(ValueError):
    pass


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Neighbourhoods are frozensets, so membership tests are O(1) and the
    object can be shared freely between trials.
    """

    __slots__ = ("_n", "_adj", "_m", "_matrix")

    def __init__(self, n: int, adjacency: Sequence[Iterable[int]] | None = None):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        self._n = n
        if adjacency is None:
            self._adj = tuple(frozenset() for _ in range(n))
        else:
            if len(adjacency) != n:
                raise GraphError("adjacency length does not match vertex count")
            self._adj = tuple(frozenset(nb) for nb in adjacency)
        self._m = sum(len(nb) for nb in self._adj) // 2
        self._matrix = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], *, strict: bool = False) -> "Graph":
        """Build from an edge iterable.

        With ``strict`` duplicates raise; otherwise they are merged.
        Self-loops and out-of-range ids always raise.
        """
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if strict and v in adj[u]:
                raise GraphError(f"duplicate edge ({min(u, v)}, {max(u, v)})")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, adj)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, [[u for u in range(n) if u != v] for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise GraphError("a cycle needs at least 3 vertices")
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Graph":
        a = np.asarray(matrix, dtype=bool)
        n = a.shape[0]
        a = a | a.T
        np.fill_diagonal(a, False)
        return cls(n, [np.flatnonzero(a[v]).tolist() for v in range(n)])

    # -- basic queries ------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return self._m

    def __len__(self) -> int:
        return self._n

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self._adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nb in enumerate(self._adj):
            for v in nb:
                if u < v:
                    yield (u, v)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 int64 matrix, cached on first use."""
        if self._matrix is None:
            a = np.zeros((self._n, self._n), dtype=np.int64)
            for u, nb in enumerate(self._adj):
                if nb:
                    a[u, list(nb)] = 1
            a.flags.writeable = False
            self._matrix = a
        return self._matrix

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self._n):
            raise GraphError(f"vertex {v} out of range for n={self._n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"

    # -- operations ---------------------------------------------------

    def union(self, other: "Graph") -> "Graph":
        if self._n != other._n:
            raise GraphError(f"vertex-count mismatch: {self._n} vs {other._n}")
        return Graph(self._n, [a | b for a, b in zip(self._adj, other._adj)])

    def distance(self, u: int, v: int) -> float:
        """BFS distance, ``math.inf`` when disconnected."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return 0
        seen = {u}
        frontier = deque([(u, 0)])
        while frontier:
            x, d = frontier.popleft()
            for y in self._adj[x]:
                if y == v:
                    return d + 1
                if y not in seen:
                    seen.add(y)
                    frontier.append((y, d + 1))
        return INF

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Return ``(subgraph, remap)`` where ``remap[i]`` is the original id of new vertex ``i``."""
        remap = sorted(set(vertices))
        for v in remap:
            self._check_vertex(v)
        index = {v: i for i, v in enumerate(remap)}
        adj = [[index[w] for w in self._adj[v] if w in index] for v in remap]
        return Graph(len(remap), adj), remap

    def restricted(self, vertices: Iterable[int]) -> "Graph":
        """Same vertex ids, only edges with both ends in ``vertices``."""
        keep = set(vertices)
        return Graph(self._n, [(nb & keep) if v in keep else () for v, nb in enumerate(self._adj)])

    def without_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [set(nb) for nb in self._adj]
        for u, v in edges:
            adj[u].discard(v)
            adj[v].discard(u)
        return Graph(self._n, adj)

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        return self.union(Graph.from_edges(self._n, edges))

    def components(self) -> list[list[int]]:
        seen = [False] * self._n
        out = []
        for s in range(self._n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            out.append(comp)
        return out

    def audit(self) -> list[str]:
        """Check symmetry and loop-freeness; returns a list of problems."""
        problems = []
        for u, nb in enumerate(self._adj):
            if u in nb:
                problems.append(f"self-loop at {u}")
            for v in nb:
                if not (0 <= v < self._n):
                    problems.append(f"neighbour {v} of {u} out of range")
                elif u not in self._adj[v]:
                    problems.append(f"asymmetric edge {u}->{v}")
        return problems


def union(g1: Graph, g2: Graph) -> Graph:
    return g1.union(g2)


def distance(g: Graph, u: int, v: int) -> float:
    return g.distance(u, v)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    return g.induced_subgraph(vertices)


# -- edge-list text format ------------------------------------------------
#
# first line "n m", then m lines "u v" with u < v, 0-based.


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges()))
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise GraphError("empty edge list")
    try:
        n, m = (int(x) for x in rows[0])
    except ValueError as exc:
        raise GraphError(f"bad header line: {' '.join(rows[0])!r}") from exc
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for row in body:
        if len(row) != 2:
            raise GraphError(f"bad edge line: {' '.join(row)!r}")
        u, v = int(row[0]), int(row[1])
        if u == v:
            raise GraphError(f"self-loop at {u}")
        if u > v:
            raise GraphError(f"edge ({u}, {v}) not written with u < v")
        edges.append((u, v))
    return Graph.from_edges(n, edges, strict=True)


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))
