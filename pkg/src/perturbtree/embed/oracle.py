"""Exhaustive ground-truth embedder for small instances."""

from __future__ import annotations

from ..graph import Embedding, Graph, GraphError, Tree

MAX_ORACLE_N = 12


def oracle_embed(t: Tree, h: Graph) -> Embedding | None:
    """Find an embedding of ``t`` into ``h`` or return ``None`` if none exists.

    Complete backtracking from a maximum-degree root. Sibling leaves are
    interchangeable, so their images are forced to increase.
    """
    if max(t.n, h.n) > MAX_ORACLE_N:
        raise GraphError(f"oracle is limited to n <= {MAX_ORACLE_N}")
    if t.n > h.n:
        return None
    root = max(range(t.n), key=lambda v: (t.degree(v), -v))
    order, parent = t.bfs_order(root)
    tdeg = t.degrees
    hdeg = h.degrees
    if _dominated(tdeg, hdeg):
        return None
    # previous leaf sibling in BFS order, for symmetry breaking
    prev_leaf = [-1] * t.n
    last = {}
    for x in order[1:]:
        if tdeg[x] == 1:
            p = parent[x]
            prev_leaf[x] = last.get(p, -1)
            last[p] = x

    img = [-1] * t.n
    used = [False] * h.n
    nb = [h.sorted_neighbors(v) for v in range(h.n)]

    def place(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        if i == 0:
            opts = range(h.n)
        else:
            opts = nb[img[parent[x]]]
        floor = img[prev_leaf[x]] if prev_leaf[x] >= 0 else -1
        for v in opts:
            if used[v] or hdeg[v] < tdeg[x] or v <= floor:
                continue
            img[x] = v
            used[v] = True
            if place(i + 1):
                return True
            used[v] = False
        img[x] = -1
        return False

    if not place(0):
        return None
    return Embedding({x: img[x] for x in range(t.n)})


def _dominated(tdeg, hdeg) -> bool:
    # the i-th largest tree degree must not exceed the i-th largest host degree
    return any(a > b for a, b in zip(sorted(tdeg, reverse=True), sorted(hdeg, reverse=True)))
