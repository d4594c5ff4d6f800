"""Exhaustive enumeration of free trees up to isomorphism."""

from __future__ import annotations

from .graph import Graph, GraphError, Tree

MAX_ENUMERATION_N = 16


def tree_centers(t: Graph) -> list[int]:
    """The one or two centers of a tree, found by peeling leaves."""
    n = t.n
    if n <= 2:
        return list(range(n))
    degree = list(t.degrees)
    layer = [v for v in range(n) if degree[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for leaf in layer:
            for w in t.neighbors(leaf):
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def rooted_encoding(t: Graph, root: int) -> str:
    """AHU parenthesis string of ``t`` rooted at ``root``."""
    order = [root]
    parent = {root: -1}
    for u in order:
        for w in t.neighbors(u):
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    code: dict[int, str] = {}
    for u in reversed(order):
        kids = sorted(code[w] for w in t.neighbors(u) if w != parent[u])
        code[u] = "(" + "".join(kids) + ")"
    return code[root]


def canonical_form(t: Graph) -> str:
    """Isomorphism invariant that separates non-isomorphic trees."""
    return min(rooted_encoding(t, c) for c in tree_centers(t))


def enumerate_free_trees(n: int, Delta: int) -> list[Tree]:
    """One representative per isomorphism class of ``n``-vertex trees with max degree <= Delta.

    Trees on ``k+1`` vertices are grown from those on ``k`` by hanging a leaf
    on every vertex with spare degree; duplicates are dropped by canonical form.
    """
    if n < 1:
        raise GraphError("n must be at least 1")
    if n > MAX_ENUMERATION_N:
        raise GraphError(f"n={n} exceeds the enumeration guard of {MAX_ENUMERATION_N}")
    level: dict[str, list[tuple[int, int]]] = {"()": []}
    for k in range(1, n):
        nxt: dict[str, list[tuple[int, int]]] = {}
        for edges in level.values():
            degree = [0] * k
            for u, v in edges:
                degree[u] += 1
                degree[v] += 1
            for v in range(k):
                if degree[v] < Delta:
                    grown = edges + [(v, k)]
                    key = canonical_form(Graph(k + 1, grown))
                    if key not in nxt:
                        nxt[key] = grown
        level = nxt
    return [Tree(n, level[key]) for key in sorted(level)]
