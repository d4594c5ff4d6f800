"""Seeded generators for host graphs and bounded-degree trees."""

from __future__ import annotations

import math
import random

import numpy as np

from .graph import Graph, GraphError, Tree
from .seeding import as_seed

TREE_FAMILIES = ("path", "random", "caterpillar", "spider", "complete")


def _pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # pairs (u, v), u < v, are numbered k = v(v-1)/2 + u
    v = ((1 + np.sqrt(1 + 8 * k.astype(np.float64))) / 2).astype(np.int64)
    base = v * (v - 1) // 2
    too_big = base > k
    v[too_big] -= 1
    base = v * (v - 1) // 2
    too_small = k - base >= v
    v[too_small] += 1
    base = v * (v - 1) // 2
    return k - base, v


def binomial_edges(n: int, p: float, seed) -> np.ndarray:
    """Edge array of G(n, p) as an ``(m, 2)`` int array with rows ``u < v``.

    Each pair is kept independently with probability ``p``; gaps between kept
    pairs are drawn as geometric variables so the cost is linear in the output.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return np.empty((0, 2), dtype=np.int64)
    if p == 1.0:
        k = np.arange(total, dtype=np.int64)
    else:
        rng = np.random.default_rng(as_seed(seed))
        chunks = []
        pos = -1
        batch = max(16, int(total * p * 1.1) + 64)
        while True:
            gaps = rng.geometric(p, size=batch)
            idx = pos + np.cumsum(gaps)
            if idx[-1] >= total:
                chunks.append(idx[idx < total])
                break
            chunks.append(idx)
            pos = int(idx[-1])
            batch = max(16, int((total - pos) * p * 1.1) + 64)
        k = np.concatenate(chunks)
    u, v = _pair_from_index(k)
    return np.stack([u, v], axis=1)


def generate_binomial(n: int, p: float, seed=None) -> Graph:
    return Graph(n, binomial_edges(n, p, seed).tolist())


def generate_unbalanced_bipartite(n: int, alpha: float) -> Graph:
    """Complete bipartite graph with parts ``0..a-1`` and ``a..n-1``, ``a = floor(alpha*n)``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    a = math.floor(alpha * n)
    return Graph(n, ((i, j) for i in range(a) for j in range(a, n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def perfect_matching(n: int) -> Graph:
    if n % 2:
        raise GraphError("perfect matching needs an even vertex count")
    return Graph(n, ((2 * i, 2 * i + 1) for i in range(n // 2)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_cliques(n: int, alpha: float) -> Graph:
    """Disjoint cliques of size ``ceil(alpha*n)+1``; the last block absorbs the remainder."""
    size = math.ceil(alpha * n) + 1
    if size > n:
        return complete_graph(n)
    starts = list(range(0, n - n % size if n % size else n, size))
    edges = []
    for i, s in enumerate(starts):
        end = n if i == len(starts) - 1 else s + size
        edges.extend((a, b) for a in range(s, end) for b in range(a + 1, end))
    return Graph(n, edges)


def random_min_degree(n: int, alpha: float, seed=None) -> Graph:
    """Random graph with minimum degree at least ``ceil(alpha*n)``.

    Starts from G(n, alpha) and tops up deficient vertices with uniformly
    random extra neighbors, so it is not an exact conditional distribution.
    """
    target = math.ceil(alpha * n)
    if target > n - 1:
        raise ValueError("minimum degree target exceeds n-1")
    rng = random.Random(as_seed(seed))
    adj = [set() for _ in range(n)]
    for u, v in binomial_edges(n, alpha, rng.getrandbits(64)).tolist():
        adj[u].add(v)
        adj[v].add(u)
    for u in range(n):
        if len(adj[u]) < target:
            others = [w for w in range(n) if w != u and w not in adj[u]]
            for w in rng.sample(others, target - len(adj[u])):
                adj[u].add(w)
                adj[w].add(u)
    return Graph.from_adjacency(adj)


def alpha_graph(kind: str, n: int, alpha: float, seed=None) -> Graph:
    """Dense graph with minimum degree about ``alpha*n`` from a named family."""
    if kind == "bipartite":
        return generate_unbalanced_bipartite(n, alpha)
    if kind == "cliques":
        return disjoint_cliques(n, alpha)
    if kind == "random":
        return random_min_degree(n, alpha, seed)
    raise ValueError(f"unknown dense family {kind!r}")


# -- trees -----------------------------------------------------------------


def generate_tree(n: int, family: str, Delta: int, seed=None) -> Tree:
    """Build an ``n``-vertex tree of maximum degree at most ``Delta``.

    The ``random`` family attaches each new vertex to a uniformly chosen
    earlier vertex that still has spare degree. It is not uniform over
    labelled or unlabelled trees.
    """
    if n < 1:
        raise GraphError("n must be at least 1")
    if Delta < 1:
        raise GraphError("Delta must be at least 1")
    if n == 1:
        return Tree(1)
    if Delta == 1 and n > 2:
        raise GraphError(f"no tree on {n} vertices has maximum degree 1")
    if n == 2:
        return Tree(2, [(0, 1)])
    if family == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif family == "random":
        edges = _random_tree_edges(n, Delta, random.Random(as_seed(seed)))
    elif family == "caterpillar":
        edges = _caterpillar_edges(n, Delta)
    elif family == "spider":
        edges = _spider_edges(n, Delta)
    elif family in ("complete", "complete-ternary"):
        if Delta < 2:
            raise GraphError("complete family needs Delta >= 2")
        b = Delta - 1
        edges = [((i - 1) // b, i) for i in range(1, n)]
    else:
        raise GraphError(f"unknown tree family {family!r}")
    return Tree(n, edges)


def _random_tree_edges(n: int, Delta: int, rng: random.Random) -> list[tuple[int, int]]:
    degree = [0] * n
    open_ = [0]  # vertices with spare capacity
    slot = {0: 0}
    edges = []
    for v in range(1, n):
        u = open_[rng.randrange(len(open_))]
        edges.append((u, v))
        degree[u] += 1
        degree[v] = 1
        if degree[u] == Delta:
            i = slot.pop(u)
            last = open_.pop()
            if last != u:
                open_[i] = last
                slot[last] = i
        if Delta > 1:
            slot[v] = len(open_)
            open_.append(v)
    return edges


def _caterpillar_edges(n: int, Delta: int) -> list[tuple[int, int]]:
    # spine 0, 1, 2, ...; every spine vertex takes up to Delta-2 legs before the spine grows
    edges = []
    spine = [0]
    nxt = 1
    legs = 0
    while nxt < n:
        cap = Delta - 2 if len(spine) > 1 or Delta == 2 else Delta - 1
        if legs < cap and nxt < n - 1:
            edges.append((spine[-1], nxt))
            legs += 1
        else:
            edges.append((spine[-1], nxt))
            spine.append(nxt)
            legs = 0
        nxt += 1
    return edges


def _spider_edges(n: int, Delta: int) -> list[tuple[int, int]]:
    legs = min(Delta, n - 1)
    edges = []
    tips = []
    v = 1
    for _ in range(legs):
        edges.append((0, v))
        tips.append(v)
        v += 1
    i = 0
    while v < n:
        edges.append((tips[i], v))
        tips[i] = v
        v += 1
        i = (i + 1) % legs
    return edges
