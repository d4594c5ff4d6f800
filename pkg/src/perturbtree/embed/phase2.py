"""Anchored embedding of an almost spanning subtree by greedy search with backtracking."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..graph import Embedding, Graph, Tree
from ..seeding import as_seed
from .phase1 import EmbedError


class BudgetExhausted(EmbedError):
    """The search ran out of node expansions. This does not show that no embedding exists."""


@dataclass
class Phase2Result:
    embedding: Embedding
    expansions: int
    backtracks: int


def embed_phase2(
    tree: Tree,
    anchor: int,
    host: Graph,
    anchor_image: int,
    seed,
    budget: int,
    vertices: Iterable[int] | None = None,
    blocked: Iterable[int] = (),
    order: str = "bfs",
) -> Phase2Result:
    """Embed the subtree of ``tree`` on ``vertices`` (default: all) with ``anchor -> anchor_image``.

    Host vertices in ``blocked`` are never used. Vertices are placed in a
    randomized BFS (or DFS) order from the anchor; each goes to a free host
    neighbor of its parent's image, preferring candidates with the fewest free
    neighbors among those that still have room for the vertex's children.
    Dead ends trigger chronological backtracking until ``budget`` placements
    have been made.
    """
    rng = random.Random(as_seed(seed))
    verts = set(range(tree.n)) if vertices is None else set(vertices)
    if anchor not in verts:
        raise ValueError("anchor must belong to the subtree")
    blocked = set(blocked)
    blocked.discard(anchor_image)
    if len(verts) > host.n - len(blocked):
        raise EmbedError("subtree is larger than the available host", "phase2")

    seq, parent = _order(tree, anchor, verts, rng, order)
    kids = {x: 0 for x in seq}
    for x in seq[1:]:
        kids[parent[x]] += 1

    used = np.zeros(host.n, dtype=bool)
    used[list(blocked)] = True
    nbrs = [np.array(host.sorted_neighbors(v), dtype=np.int64) for v in range(host.n)]
    free_deg = np.array([int((~used[nb]).sum()) for nb in nbrs], dtype=np.int64)

    def occupy(v):
        used[v] = True
        free_deg[nbrs[v]] -= 1

    def release(v):
        used[v] = False
        free_deg[nbrs[v]] += 1

    emb = Embedding()
    emb.assign(anchor, anchor_image)
    occupy(anchor_image)
    expansions = 1
    backtracks = 0

    def candidates(x):
        nb = nbrs[emb[parent[x]]]
        nb = nb[~used[nb]]
        if nb.size == 0:
            return []
        fd = free_deg[nb]
        ok = fd >= kids[x]
        nb, fd = nb[ok], fd[ok]
        noise = np.array([rng.random() for _ in range(nb.size)])
        return nb[np.lexsort((noise, fd))].tolist()

    stack: list[list[int]] = []  # remaining candidates for seq[i], i = len(stack)
    i = 1
    while i < len(seq):
        x = seq[i]
        if len(stack) < i:
            stack.append(candidates(x))
        opts = stack[i - 1]
        if opts:
            v = opts.pop(0)
            emb.assign(x, v)
            occupy(v)
            expansions += 1
            if expansions > budget:
                raise BudgetExhausted(
                    f"budget of {budget} expansions exhausted with {len(emb)}/{len(seq)} placed",
                    "phase2", expansions=expansions,
                )
            i += 1
            continue
        # dead end: drop this frame and undo the previous placement
        stack.pop()
        i -= 1
        backtracks += 1
        if i == 0:
            raise EmbedError("search space exhausted: no anchored embedding exists", "phase2")
        release(emb.unassign(seq[i]))
    return Phase2Result(emb, expansions, backtracks)


def _order(tree: Tree, root: int, verts: set[int], rng: random.Random, kind: str):
    parent = {root: -1}
    seq = [root]
    if kind == "bfs":
        i = 0
        while i < len(seq):
            u = seq[i]
            i += 1
            kids = [w for w in tree.sorted_neighbors(u) if w in verts and w not in parent]
            rng.shuffle(kids)
            for w in kids:
                parent[w] = u
                seq.append(w)
    elif kind == "dfs":
        seq = []
        stack = [root]
        while stack:
            u = stack.pop()
            seq.append(u)
            kids = [w for w in tree.sorted_neighbors(u) if w in verts and w not in parent]
            rng.shuffle(kids)
            for w in kids:
                parent[w] = u
            stack.extend(kids)
    else:
        raise ValueError(f"unknown order {kind!r}")
    if len(seq) != len(verts):
        raise ValueError("vertex set does not induce a connected subtree")
    return seq, parent
