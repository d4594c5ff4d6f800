"""Completion of an almost spanning embedding by direct attachment and reservoir swaps."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..graph import Embedding, Graph, Tree
from ..seeding import as_seed
from .phase1 import EmbedError
from .reservoir import ReservoirTable, tree_image


@dataclass
class SwapRecord:
    step: int
    b: int  # new leaf
    parent_image: int  # image of b's parent
    free_vertex: int  # v'
    w: int  # reservoir vertex handed to b
    c: int  # tree vertex moved from w to v'


@dataclass
class StepAudit:
    step: int
    kind: str  # "direct" or "swap"
    min_reservoir: int
    min_change: int | None = None  # min over pairs of the change in |B(u,v)| since the last audit
    span: int = 1  # steps covered by min_change
    matches_scratch: bool | None = None


@dataclass
class Phase3Result:
    embedding: Embedding
    swaps: list[SwapRecord] = field(default_factory=list)
    audits: list[StepAudit] = field(default_factory=list)
    direct: int = 0


def embed_phase3(
    tree: Tree,
    embedding: Embedding,
    h: Graph,
    reservoir: ReservoirTable,
    order: Sequence[int],
    seed,
    Delta: int | None = None,
    enforce_bound: bool = False,
    audit_every: int = 0,
    attach: str = "neighbor",
) -> Phase3Result:
    """Attach the tree vertices in ``order`` one leaf at a time.

    ``embedding`` covers a subtree ``T'`` and ``order`` lists ``T - T'`` so that
    every vertex has its tree parent placed before it. For leaf ``b`` with
    parent image ``a``: if some unused vertex is adjacent to ``a`` then ``b``
    goes there; otherwise, trying unused ``v'`` in random order, the
    smallest ``w`` in ``B(a, v')`` is taken, its tree vertex moves to ``v'``
    and ``b`` takes ``w``.

    With ``attach="random"`` a single unused ``v'`` is drawn first and the
    direct attachment is only taken when ``v'`` happens to neighbor ``a``;
    otherwise the swap uses that ``v'`` (falling back to other unused vertices
    if ``B(a, v')`` is empty). This produces many more swaps.

    ``reservoir`` is updated in place. With ``audit_every = k > 0`` every
    ``k``-th step compares it with a from-scratch table and records the worst
    per-pair change of ``|B(u, v)|``.
    """
    rng = random.Random(as_seed(seed))
    emb = embedding.copy()
    Delta = tree.max_degree if Delta is None else Delta
    L = len(order)
    if L and enforce_bound:
        low, pair = reservoir.min_pair()
        if low <= L * (Delta + 3):
            raise EmbedError(
                f"min |B(u,v)| = {low} at {pair} is not above L*(Delta+3) = {L * (Delta + 3)}",
                "phase3", pair=pair,
            )
    result = Phase3Result(emb)
    free = set(range(h.n)) - set(emb.inverse)
    adj = h.adjacency_matrix
    prev_counts = reservoir.pair_counts() if audit_every else None
    last_audit = 0
    for step, b in enumerate(order, start=1):
        placed = [y for y in tree.neighbors(b) if y in emb]
        if len(placed) != 1:
            raise EmbedError(f"vertex {b} does not hang off exactly one placed vertex", "phase3", step=step)
        a = emb[placed[0]]
        pool = sorted(free)
        if attach == "random":
            first = rng.choice(pool)
            direct = [first] if adj[a, first] else []
        elif attach == "neighbor":
            first = None
            direct = [v for v in pool if adj[a, v]]
        else:
            raise ValueError(f"unknown attach mode {attach!r}")
        if direct:
            v = rng.choice(direct)
            emb.assign(b, v)
            free.discard(v)
            reservoir.add_edge(a, v)
            result.direct += 1
            kind = "direct"
        else:
            rng.shuffle(pool)
            if first is not None:
                pool.remove(first)
                pool.insert(0, first)
            for v in pool:
                w = reservoir.first_in_pair(a, v)
                if w is not None:
                    break
            else:
                raise EmbedError(f"B({a}, v') is empty for every free v' at step {step}", "phase3", step=step, parent_image=a)
            c = emb.preimage(w)
            emb.move(c, v)
            emb.assign(b, w)
            free.discard(v)
            reservoir.relocate(w, v)
            reservoir.add_vertex(w)
            reservoir.add_edge(a, w)
            result.swaps.append(SwapRecord(step, b, a, v, w, c))
            kind = "swap"
        if audit_every and (step % audit_every == 0 or step == L):
            counts = reservoir.pair_counts()
            off = ~np.eye(h.n, dtype=bool)
            change = int((counts - prev_counts)[off].min()) if h.n > 1 else 0
            scratch = ReservoirTable(tree_image(tree, emb), h)
            result.audits.append(StepAudit(
                step, kind, int(counts[off].min()) if h.n > 1 else 0,
                min_change=change, span=step - last_audit, matches_scratch=reservoir.equals(scratch),
            ))
            prev_counts = counts
            last_audit = step
    return result
