"""Immutable graph and tree types plus a mutable partial embedding."""

from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np


class GraphError(ValueError):
    pass


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Instances are immutable; derived views (adjacency matrix, bitmasks)
    are computed lazily and cached.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"vertex out of range in edge ({u}, {v})")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)

    @classmethod
    def from_adjacency(cls, adj: Iterable[Iterable[int]]) -> "Graph":
        adj = [set(a) for a in adj]
        for u, nb in enumerate(adj):
            for v in nb:
                if u not in adj[v]:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")
        return cls(len(adj), ((u, v) for u, nb in enumerate(adj) for v in nb if u < v))

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def sorted_neighbors(self, v: int) -> tuple[int, ...]:
        return self._sorted_adj[v]

    @cached_property
    def _sorted_adj(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(a)) for a in self._adj)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    @property
    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as ``(u, v)`` with ``u < v``, sorted."""
        for u in range(self.n):
            for v in self._sorted_adj[u]:
                if u < v:
                    yield u, v

    @cached_property
    def m(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self._adj)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def min_degree(self) -> int:
        return min(self.degrees, default=0)

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, nb in enumerate(self._adj):
            if nb:
                a[u, list(nb)] = True
        a.setflags(write=False)
        return a

    @cached_property
    def bitmasks(self) -> tuple[int, ...]:
        """Neighborhood of each vertex as a Python int bitmask."""
        out = []
        for nb in self._adj:
            m = 0
            for v in nb:
                m |= 1 << v
            out.append(m)
        return tuple(out)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.n

    def remove_vertices(self, removed: Iterable[int]) -> "Graph":
        """Drop every edge touching ``removed``; the vertex set is kept so labels stay stable."""
        removed = set(removed)
        return Graph(self.n, ((u, v) for u, v in self.edges() if u not in removed and v not in removed))

    def validate(self) -> None:
        for u, nb in enumerate(self._adj):
            if u in nb:
                raise GraphError(f"self-loop at {u}")
            for v in nb:
                if u not in self._adj[v]:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, m={self.m})"


class Tree(Graph):
    """A connected acyclic graph, optionally rooted."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), root: int | None = None):
        edges = list(edges)
        super().__init__(n, edges)
        if n == 0:
            raise GraphError("a tree needs at least one vertex")
        if self.m != n - 1:
            raise GraphError(f"non-tree edge count: {self.m} edges on {n} vertices")
        if not self.is_connected():
            raise GraphError("tree is not connected")
        if root is not None and not 0 <= root < n:
            raise GraphError(f"root {root} out of range")
        self.root = root

    def validate(self) -> None:
        super().validate()
        if self.m != self.n - 1 or not self.is_connected():
            raise GraphError("not a tree")

    def bfs_order(self, source: int) -> tuple[list[int], list[int]]:
        """Return ``(order, parent)`` of a BFS from ``source``; ``parent[source] == -1``."""
        parent = [-1] * self.n
        parent[source] = source
        order = [source]
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            for v in self._sorted_adj[u]:
                if parent[v] == -1 and v != source:
                    parent[v] = u
                    order.append(v)
        parent[source] = -1
        return order, parent

    def distances_from(self, sources: Iterable[int]) -> list[int]:
        """Multi-source BFS distances; unreachable entries never occur in a tree."""
        dist = [-1] * self.n
        queue = deque()
        for s in sources:
            if dist[s] == -1:
                dist[s] = 0
                queue.append(s)
        while queue:
            u = queue.popleft()
            for v in self._adj[u]:
                if dist[v] == -1:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def path(self, u: int, v: int) -> list[int]:
        _, parent = self.bfs_order(u)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def induced_subtree(self, vertices: Iterable[int]) -> tuple["Tree", list[int]]:
        """Relabel the subtree on ``vertices`` to ``0..k-1`` in increasing order.

        Returns the relabelled tree and the list mapping new labels back to old ones.
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        return Tree(len(keep), edges), keep


class EmbeddingError(ValueError):
    pass


class Embedding:
    """Partial injective map from tree vertices to host vertices."""

    def __init__(self, forward: dict[int, int] | None = None):
        self.forward: dict[int, int] = {}
        self.inverse: dict[int, int] = {}
        for x, h in (forward or {}).items():
            self.assign(x, h)

    def assign(self, x: int, h: int) -> None:
        if x in self.forward:
            raise EmbeddingError(f"tree vertex {x} already mapped")
        if h in self.inverse:
            raise EmbeddingError(f"host vertex {h} already used by {self.inverse[h]}")
        self.forward[x] = h
        self.inverse[h] = x

    def unassign(self, x: int) -> int:
        h = self.forward.pop(x)
        del self.inverse[h]
        return h

    def move(self, x: int, h: int) -> None:
        self.unassign(x)
        self.assign(x, h)

    def __getitem__(self, x: int) -> int:
        return self.forward[x]

    def __contains__(self, x: int) -> bool:
        return x in self.forward

    def __len__(self) -> int:
        return len(self.forward)

    def get(self, x: int, default=None):
        return self.forward.get(x, default)

    def preimage(self, h: int) -> int | None:
        return self.inverse.get(h)

    def image(self) -> set[int]:
        return set(self.inverse)

    def copy(self) -> "Embedding":
        e = Embedding()
        e.forward = dict(self.forward)
        e.inverse = dict(self.inverse)
        return e

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Embedding) and self.forward == other.forward

    def __repr__(self) -> str:
        return f"Embedding({len(self.forward)} vertices)"


def embedding_violation(tree: Graph, host: Graph, emb: Embedding, spanning: bool = False) -> str | None:
    """Return a description of the first problem with ``emb``, or ``None`` if it is valid.

    Edges are only checked when both ends are mapped. With ``spanning`` the map
    must be a bijection from all tree vertices onto all host vertices.
    """
    for x, h in emb.forward.items():
        if not 0 <= x < tree.n:
            return f"tree vertex {x} out of range"
        if not 0 <= h < host.n:
            return f"host vertex {h} out of range"
        if emb.inverse.get(h) != x:
            return f"inverse map disagrees at {x} -> {h}"
    if len(emb.inverse) != len(emb.forward):
        return "map is not injective"
    for x, y in tree.edges():
        if x in emb.forward and y in emb.forward:
            if not host.has_edge(emb.forward[x], emb.forward[y]):
                return f"tree edge ({x}, {y}) maps to non-edge ({emb.forward[x]}, {emb.forward[y]})"
    if spanning:
        if tree.n != host.n:
            return f"tree has {tree.n} vertices, host has {host.n}"
        if len(emb.forward) != tree.n:
            missing = min(set(range(tree.n)) - set(emb.forward))
            return f"tree vertex {missing} is not mapped"
    return None


def union(g1: Graph, g2: Graph) -> Graph:
    if g1.n != g2.n:
        raise GraphError(f"mismatched vertex counts {g1.n} and {g2.n}")
    return Graph.from_adjacency(g1.neighbors(v) | g2.neighbors(v) for v in range(g1.n))
