"""Tree partitioning: a separable subtree and well-spread star centers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .graph import GraphError, Tree


class DecompositionError(GraphError):
    pass


@dataclass(frozen=True)
class DecompositionResult:
    t1: frozenset[int]
    cut_edge: tuple[int, int]  # (a, b) with a in t1
    t_prime: frozenset[int]
    removed: tuple[int, ...]  # leaves of T outside T', in deletion order

    @property
    def anchor(self) -> int:
        return self.cut_edge[0]

    def attachment_order(self) -> list[int]:
        """Vertices of ``T - T'`` in an order where each has its parent already placed."""
        return list(reversed(self.removed))


def find_separable_subtree(t: Tree, beta: float, eps: float, Delta: int) -> DecompositionResult:
    """Split off a branch ``T1`` with ``floor(beta*n) <= |T1| <= Delta*beta*n``.

    Rooted at vertex 0, the search walks down into the smallest-index child
    whose branch has at least ``floor(beta*n)`` vertices until the current
    branch is no larger than ``Delta*beta*n``. ``T'`` is then obtained from ``T``
    by deleting ``floor(2*eps*n)`` leaves, always the one farthest from ``T1``
    (smallest index on ties).
    """
    n = t.n
    if not Delta * beta + 2 * eps < 1:
        raise DecompositionError(f"need Delta*beta + 2*eps < 1, got {Delta * beta + 2 * eps:g}")
    if t.max_degree > Delta:
        raise DecompositionError(f"tree has maximum degree {t.max_degree} > Delta = {Delta}")
    if beta * n < 1 - 1e-9:
        raise DecompositionError(f"need n >= 1/beta, got beta*n = {beta * n:g}")
    if eps < 0:
        raise DecompositionError("eps must be non-negative")
    order, parent = t.bfs_order(0)
    size = [1] * n
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    lower = math.floor(beta * n + 1e-9)
    upper = Delta * beta * n
    v = 0
    while size[v] > upper + 1e-9:
        heavy = [w for w in t.sorted_neighbors(v) if w != parent[v] and size[w] >= lower]
        if not heavy:
            raise DecompositionError(f"descent stuck at vertex {v}")
        v = heavy[0]
    t1 = _branch(t, v, parent)
    cut = (v, parent[v])

    drop = math.floor(2 * eps * n + 1e-9)
    dist = t.distances_from(t1)
    alive = set(range(n))
    degree = list(t.degrees)
    # a vertex farthest from T1 is always a leaf of the current tree
    removed = []
    candidates = sorted((v for v in range(n) if v not in t1), key=lambda x: (-dist[x], x))
    for x in candidates[:drop]:
        if degree[x] != 1:
            raise DecompositionError(f"vertex {x} is not a leaf when removed")
        alive.discard(x)
        removed.append(x)
        for w in t.neighbors(x):
            if w in alive:
                degree[w] -= 1
    return DecompositionResult(frozenset(t1), cut, frozenset(alive), tuple(removed))


def _branch(t: Tree, v: int, parent: list[int]) -> set[int]:
    out = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in t.neighbors(u):
            if w != parent[u] and w not in out:
                out.add(w)
                stack.append(w)
    return out


def minimal_spanning_subtree(t: Tree, vertices: Iterable[int]) -> set[int]:
    """Vertex set of the smallest subtree of ``t`` containing ``vertices``."""
    targets = set(vertices)
    if not targets:
        raise GraphError("need at least one vertex")
    root = min(targets)
    order, parent = t.bfs_order(root)
    marked = [v in targets for v in range(t.n)]
    # keep v iff its branch (rooted at root) contains a target
    for v in reversed(order[1:]):
        if marked[v]:
            marked[parent[v]] = True
    return {v for v in range(t.n) if marked[v]}


@dataclass(frozen=True)
class StarCenterResult:
    centers: tuple[int, ...]
    skeleton: frozenset[int]
    paths: tuple[tuple[int, ...], ...]  # paths[i-1] = x_i, y1, y2, y3, y4, z for i >= 2

    @property
    def s(self) -> int:
        return len(self.centers)


def select_star_centers(t: Tree, first: int = 0) -> StarCenterResult:
    """Greedy centers, each at distance exactly 5 from the skeleton of the earlier ones.

    Starts from ``first`` and repeatedly adds the smallest-index vertex at
    distance exactly 5; stops when none remains, so every vertex ends up
    within distance 4 of the skeleton.
    """
    if t.n == 0:
        raise GraphError("empty tree")
    centers = [first]
    skeleton = {first}
    paths = []
    while True:
        dist = t.distances_from(skeleton)
        far = [v for v in range(t.n) if dist[v] == 5]
        if not far:
            break
        x = far[0]
        # walk back toward the skeleton along decreasing distance
        path = [x]
        while dist[path[-1]] > 0:
            cur = path[-1]
            path.append(min(w for w in t.neighbors(cur) if dist[w] == dist[cur] - 1))
        centers.append(x)
        skeleton.update(path)
        paths.append(tuple(path))
    return StarCenterResult(tuple(centers), frozenset(skeleton), tuple(paths))
