"""Randomized embedding of the small subtree T1 with large reservoir sets."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from ..graph import Embedding, Graph, Tree, union
from ..params import Params
from ..seeding import derive_seed
from ..tree_decomp import select_star_centers
from .reservoir import ReservoirTable, tree_image


class EmbedError(RuntimeError):
    """Raised when a phase cannot complete; ``phase`` names where it stopped."""

    def __init__(self, message: str, phase: str = "", **info):
        super().__init__(f"[{phase}] {message}" if phase else message)
        self.phase = phase
        self.info = info


class StarPlacementError(EmbedError):
    pass


class StarConnectionError(EmbedError):
    pass


@dataclass
class StarPlacement:
    stars: list[tuple[int, tuple[int, ...]]]  # (center, leaves)

    def vertices(self) -> set[int]:
        out = set()
        for c, leaves in self.stars:
            out.add(c)
            out.update(leaves)
        return out


def pick_disjoint_stars(g: Graph, s: int, Delta: int, rng: random.Random) -> StarPlacement:
    """Pick ``s`` vertex-disjoint copies of ``K_{1,Delta}`` in ``g`` one at a time.

    Each pick is uniform over the copies avoiding earlier stars: a center is
    drawn with weight ``C(free_degree, Delta)`` and then a uniform
    ``Delta``-subset of its free neighbors.
    """
    used = np.zeros(g.n, dtype=bool)
    free_deg = np.array(g.degrees, dtype=np.int64)
    stars = []
    for i in range(1, s + 1):
        weights = [0 if used[v] else math.comb(int(free_deg[v]), Delta) for v in range(g.n)]
        if not any(weights):
            raise StarPlacementError(f"no K_1,{Delta} left at step {i}", "phase1", step=i)
        center = rng.choices(range(g.n), weights=weights)[0]
        free_nb = [w for w in g.sorted_neighbors(center) if not used[w]]
        leaves = tuple(sorted(rng.sample(free_nb, Delta)))
        stars.append((center, leaves))
        for v in (center, *leaves):
            used[v] = True
            for w in g.neighbors(v):
                free_deg[w] -= 1
    return StarPlacement(stars)


@dataclass
class StarAudit:
    passed: bool
    min_count: int
    worst_pair: tuple[int, int]


def star_audit_counts(placement: StarPlacement, g_alpha: Graph) -> np.ndarray:
    """``counts[u, v]``: stars centered in ``N(u)`` with every leaf in ``N(v)`` (in ``g_alpha``)."""
    a = g_alpha.adjacency_matrix
    if not placement.stars:
        return np.zeros((g_alpha.n, g_alpha.n), dtype=np.int64)
    centers = np.array([c for c, _ in placement.stars])
    center_ok = a[:, centers].astype(np.float64)
    leaf_ok = np.stack([a[:, list(leaves)].all(axis=1) for _, leaves in placement.stars], axis=1)
    return (center_ok @ leaf_ok.astype(np.float64).T).astype(np.int64)


def audit_star_placement(placement: StarPlacement, g_alpha: Graph, threshold: int) -> StarAudit:
    counts = star_audit_counts(placement, g_alpha)
    n = counts.shape[0]
    if n < 2:
        return StarAudit(True, 0, (0, 0))
    np.fill_diagonal(counts, np.iinfo(np.int64).max)
    idx = int(np.argmin(counts))
    u, v = divmod(idx, n)
    m = int(counts[u, v])
    return StarAudit(m >= threshold, m, (u, v))


@dataclass
class Connection:
    path: tuple[int, ...]  # x_i, y1, y2, y3, y4, z (tree vertices)
    image: tuple[int, ...]
    g_edge: tuple[int, int]  # image of y2 y3


@dataclass
class Phase1Result:
    embedding: Embedding
    reservoir: ReservoirTable
    placement: StarPlacement
    audit: StarAudit
    connections: list[Connection]
    attempts: int
    min_reservoir: int
    attempt_log: list[dict] = field(default_factory=list)


def embed_phase1(
    tree: Tree,
    t1: set[int] | frozenset[int],
    g: Graph,
    g_alpha: Graph,
    params: Params,
    seed,
    retries: int | None = None,
    h: Graph | None = None,
) -> Phase1Result:
    """Embed the subtree of ``tree`` spanned by ``t1`` into ``H = G | G_alpha``.

    Each attempt places random disjoint stars of ``G`` for the distance-5
    centers of ``T1``, links consecutive skeleton paths through one ``G`` edge
    and finishes ``T1`` greedily inside ``G_alpha``. Attempts use independent
    streams derived from ``seed``; the first whose star audit and minimum
    ``|B(u, v)|`` reach the configured thresholds is returned.
    """
    retries = params.retries if retries is None else retries
    n = g.n
    if h is None:
        h = union(g_alpha, g)
    t1 = frozenset(t1)
    local, labels = tree.induced_subtree(t1)
    if local.max_degree > params.Delta:
        raise EmbedError(f"T1 has maximum degree {local.max_degree} > {params.Delta}", "phase1")
    threshold = params.reservoir_threshold
    if params.paper_exact:
        upper = params.alpha * n / (2 * params.Delta)
        if len(t1) > upper + 1e-9:
            raise EmbedError(f"|T1| = {len(t1)} exceeds alpha*n/(2*Delta) = {upper:g}", "phase1")
        threshold = max(threshold, math.ceil(params.reservoir_target(n) - 1e-9))
    centers = select_star_centers(local)

    log = []
    best = None
    last_error: EmbedError | None = None
    for attempt in range(1, retries + 1):
        rng = random.Random(derive_seed(seed, "phase1", attempt))
        try:
            result = _attempt(tree, local, labels, centers, g, g_alpha, h, params, rng)
        except StarPlacementError as exc:
            if exc.info.get("step") == 1:
                raise
            last_error = exc
            log.append({"attempt": attempt, "error": str(exc)})
            continue
        except EmbedError as exc:
            last_error = exc
            log.append({"attempt": attempt, "error": str(exc)})
            continue
        emb, placement, connections = result
        audit = audit_star_placement(placement, g_alpha, params.star_threshold)
        reservoir = ReservoirTable(tree_image(tree, emb), h)
        min_res, pair = reservoir.min_pair()
        log.append({"attempt": attempt, "star_min": audit.min_count, "min_reservoir": min_res, "pair": pair})
        out = Phase1Result(emb, reservoir, placement, audit, connections, attempt, min_res, log)
        if audit.passed and min_res >= threshold:
            return out
        if best is None or min_res > best.min_reservoir:
            best = out
    if best is None:
        raise last_error or EmbedError("no attempt made", "phase1")
    raise EmbedError(
        f"retries exhausted after {retries} attempts; best min |B(u,v)| = {best.min_reservoir} < {threshold}",
        "phase1", best=best.min_reservoir,
    )


def _attempt(tree, local, labels, centers, g, g_alpha, h, params, rng):
    Delta = params.Delta
    placement = pick_disjoint_stars(g, centers.s, Delta, rng)
    emb = Embedding()
    for (host_c, host_leaves), x_local in zip(placement.stars, centers.centers):
        x = labels[x_local]
        emb.assign(x, host_c)
        nbrs = sorted(labels[y] for y in local.neighbors(x_local))
        for y, leaf in zip(nbrs, host_leaves):
            emb.assign(y, leaf)

    used = np.zeros(h.n, dtype=bool)
    used[list(emb.inverse)] = True

    def free_alpha(v):
        return [w for w in g_alpha.sorted_neighbors(v) if not used[w]]

    connections = []
    for i, path_local in enumerate(centers.paths, start=2):
        x, y1, y2, y3, y4, z = (labels[p] for p in path_local)
        if y4 in emb:
            y4_options = [emb[y4]]
        else:
            y4_options = free_alpha(emb[z])
            rng.shuffle(y4_options)
        done = False
        for cand4 in y4_options:
            mid2 = [w for w in free_alpha(emb[y1]) if w != cand4]
            mid3 = {w for w in free_alpha(cand4) if w != emb[y1]}
            rng.shuffle(mid2)
            for a in mid2:
                hits = sorted(b for b in g.neighbors(a) & mid3 if b != a)
                if hits:
                    b = hits[0]
                    if y4 not in emb:
                        emb.assign(y4, cand4)
                        used[cand4] = True
                    emb.assign(y2, a)
                    emb.assign(y3, b)
                    used[a] = used[b] = True
                    connections.append(Connection((x, y1, y2, y3, y4, z), tuple(emb[p] for p in (x, y1, y2, y3, y4, z)), (a, b)))
                    done = True
                    break
            if done:
                break
        if not done:
            raise StarConnectionError(f"no G edge links the candidate sets at step {i}", "phase1", step=i)

    # finish T1 greedily through G_alpha
    stack = sorted(emb.forward)
    t1 = set(labels)
    while stack:
        x = stack.pop()
        for y in tree.sorted_neighbors(x):
            if y in t1 and y not in emb:
                opts = free_alpha(emb[x])
                if not opts:
                    opts = [w for w in h.sorted_neighbors(emb[x]) if not used[w]]
                if not opts:
                    raise EmbedError(f"no free neighbor for tree vertex {y}", "phase1")
                w = rng.choice(opts)
                emb.assign(y, w)
                used[w] = True
                stack.append(y)
    return emb, placement, connections
