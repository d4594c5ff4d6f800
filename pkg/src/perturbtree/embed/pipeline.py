"""The full three-phase spanning tree embedding."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ..graph import Embedding, Graph, Tree, embedding_violation, union
from ..params import Params
from ..tree_decomp import DecompositionError, find_separable_subtree
from ..seeding import derive_seed
from .phase1 import Connection, EmbedError, embed_phase1
from .phase2 import embed_phase2
from .phase3 import StepAudit, SwapRecord, embed_phase3
from .reservoir import ReservoirTable, tree_image


@dataclass
class PipelineTrace:
    n: int
    params: dict
    t1_size: int = 0
    anchor: int = -1
    anchor_image: int = -1
    leftover: int = 0
    phase_ms: dict = field(default_factory=dict)
    phase1_attempts: int = 0
    phase1_min_reservoir: int = 0
    star_audit_min: int = 0
    connections: list[Connection] = field(default_factory=list)
    phase2_expansions: int = 0
    phase2_backtracks: int = 0
    min_reservoir_after_phase2: int = 0
    phase2_min_change: int | None = None  # min over pairs of |B_T'(u,v)| - |B_T1(u,v)|
    swaps: list[SwapRecord] = field(default_factory=list)
    direct_attachments: int = 0
    audits: list[StepAudit] = field(default_factory=list)
    scratch_checks: list[tuple[str, bool]] = field(default_factory=list)
    phase_embeddings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["phase_embeddings"] = {k: sorted(v.items()) for k, v in self.phase_embeddings.items()}
        return d


def embed_spanning_tree(
    t: Tree,
    g: Graph,
    g_alpha: Graph,
    params: Params,
    seed,
    audit: bool | None = None,
    attach: str = "neighbor",
) -> tuple[Embedding, PipelineTrace]:
    """Embed ``t`` as a spanning tree of ``H = G_alpha | G``.

    Splits off ``T1``, embeds it with large reservoir sets, extends to ``T'``
    from the anchor, then attaches the last ``floor(2*eps'*n)`` leaves with
    swaps. ``audit`` (default: on for ``n <= 300``) compares the incremental
    reservoir table against a from-scratch one after each phase and after
    every phase-3 step; for larger ``n`` phase 3 is audited every 50 steps.
    """
    n = t.n
    if g.n != n or g_alpha.n != n:
        raise EmbedError(f"tree has {n} vertices but hosts have {g.n} and {g_alpha.n}", "setup")
    if t.max_degree > params.Delta:
        raise EmbedError(f"tree has maximum degree {t.max_degree} > Delta = {params.Delta}", "setup")
    if audit is None:
        audit = n <= 300
    h = union(g_alpha, g)
    trace = PipelineTrace(n, params.as_dict())
    clock = time.perf_counter()

    def tick(name):
        nonlocal clock
        now = time.perf_counter()
        trace.phase_ms[name] = round((now - clock) * 1000, 3)
        clock = now

    try:
        decomp = find_separable_subtree(t, params.beta, params.eps_prime, params.Delta)
    except DecompositionError as exc:
        raise EmbedError(str(exc), "decompose") from exc
    a, _ = decomp.cut_edge
    trace.t1_size = len(decomp.t1)
    trace.anchor = a
    trace.leftover = len(decomp.removed)
    tick("decompose")

    p1 = embed_phase1(t, decomp.t1, g, g_alpha, params, derive_seed(seed, "p1"), h=h)
    emb = p1.embedding
    reservoir = p1.reservoir
    trace.phase1_attempts = p1.attempts
    trace.phase1_min_reservoir = p1.min_reservoir
    trace.star_audit_min = p1.audit.min_count
    trace.connections = p1.connections
    trace.phase_embeddings["phase1"] = dict(emb.forward)
    if audit:
        trace.scratch_checks.append(("phase1", reservoir.equals(ReservoirTable(tree_image(t, emb), h))))
    tick("phase1")

    a_img = emb[a]
    trace.anchor_image = a_img
    t2 = (decomp.t_prime - decomp.t1) | {a}
    blocked = set(emb.inverse) - {a_img}
    h_prime = h.remove_vertices(blocked)
    p2 = embed_phase2(
        t, a, h_prime, a_img, derive_seed(seed, "p2"),
        budget=params.budget_factor * n, vertices=t2, blocked=blocked,
    )
    trace.phase2_expansions = p2.expansions
    trace.phase2_backtracks = p2.backtracks
    for x, v in p2.embedding.forward.items():
        if x != a:
            emb.assign(x, v)
    trace.phase_embeddings["phase2"] = dict(p2.embedding.forward)
    tick("phase2")

    before = reservoir.pair_counts() if audit else None
    new_edges = [(emb[x], emb[y]) for x in t2 for y in t.neighbors(x) if y in t2 and x < y]
    reservoir.extend(new_edges, (emb[x] for x in t2))
    min_res, _ = reservoir.min_pair()
    trace.min_reservoir_after_phase2 = min_res
    if audit:
        after = reservoir.pair_counts()
        off = ~np.eye(n, dtype=bool)
        trace.phase2_min_change = int((after - before)[off].min()) if n > 1 else 0
        trace.scratch_checks.append(("phase2", reservoir.equals(ReservoirTable(tree_image(t, emb), h))))
    tick("adjust")

    p3 = embed_phase3(
        t, emb, h, reservoir, decomp.attachment_order(), derive_seed(seed, "p3"),
        Delta=params.Delta, enforce_bound=params.paper_exact,
        audit_every=(1 if n <= 300 else 50) if audit else 0, attach=attach,
    )
    emb = p3.embedding
    trace.swaps = p3.swaps
    trace.direct_attachments = p3.direct
    trace.audits = p3.audits
    if audit:
        trace.scratch_checks.extend((f"phase3 step {s.step}", bool(s.matches_scratch)) for s in p3.audits)
    tick("phase3")

    problem = embedding_violation(t, h, emb, spanning=True)
    if problem:
        raise EmbedError(f"final embedding is invalid: {problem}", "validate")
    return emb, trace

