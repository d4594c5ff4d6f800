"""Neighborhood-expansion conditions that guarantee an anchored tree embedding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from ..expansion import ExpansionCertificate
from ..graph import Graph, GraphError

MAX_HAXELL_EXACT_N = 20


@dataclass
class HaxellResult:
    passed: bool
    mode: str
    condition: str | None = None  # "i" or "ii" on failure
    witness: tuple[int, ...] | None = None
    reason: str = ""


def check_haxell_conditions(
    g: Graph,
    t_edges: int,
    Delta: int,
    k: int,
    mode: str = "exact",
    certificate: ExpansionCertificate | None = None,
) -> HaxellResult:
    """Check (i) ``|N(X)| >= Delta|X| + 1`` for ``1 <= |X| <= 2k`` and
    (ii) ``|N(X)| >= Delta|X| + t + 1`` for ``k < |X| <= 2k + 1``.

    ``exact`` enumerates every such ``X``. ``heuristic`` checks the sufficient
    pair used for large hosts: minimum degree at least ``2*Delta*k + 1``, and an
    expansion certificate (``eps * n <= k + 1``) whose complement bound
    ``|V - N(X)| < eps*n`` leaves at least ``Delta(2k+1) + t + 1`` neighbors.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if mode == "exact":
        return _exact(g, t_edges, Delta, k)
    if mode == "heuristic":
        return _heuristic(g, t_edges, Delta, k, certificate)
    raise ValueError(f"unknown mode {mode!r}")


def _exact(g: Graph, t: int, Delta: int, k: int) -> HaxellResult:
    n = g.n
    if n > MAX_HAXELL_EXACT_N:
        raise GraphError(f"exact Haxell check is limited to n <= {MAX_HAXELL_EXACT_N}")
    masks = g.bitmasks
    for size in range(1, min(2 * k + 1, n) + 1):
        need = Delta * size + 1
        cond = "i"
        if size > k:
            need_ii = Delta * size + t + 1
            if size > 2 * k:
                need, cond = need_ii, "ii"
            else:
                need = max(need, need_ii)
        for X in combinations(range(n), size):
            nb = 0
            for x in X:
                nb |= masks[x]
            got = nb.bit_count()
            if got < need:
                which = cond
                if k < size <= 2 * k:
                    which = "i" if got < Delta * size + 1 else "ii"
                return HaxellResult(False, "exact", which, X, f"|N(X)| = {got} < {need}")
    return HaxellResult(True, "exact")


def _heuristic(g: Graph, t: int, Delta: int, k: int, cert: ExpansionCertificate | None) -> HaxellResult:
    n = g.n
    need_deg = 2 * Delta * k + 1
    if g.min_degree < need_deg:
        v = min(range(n), key=lambda x: (g.degree(x), x))
        return HaxellResult(False, "heuristic", "i", (v,), f"degree {g.degree(v)} < {need_deg}")
    if cert is None:
        raise ValueError("heuristic mode needs an expansion certificate")
    if not cert.passed:
        return HaxellResult(False, "heuristic", "ii", None, "expansion certificate failed")
    m = math.ceil(cert.eps * n - 1e-9)
    if m > k + 1:
        return HaxellResult(False, "heuristic", "ii", None, f"certificate sets of size {m} exceed k + 1 = {k + 1}")
    # |N(X)| > n - m for |X| >= m
    if n - m + 1 < Delta * (2 * k + 1) + t + 1:
        return HaxellResult(False, "heuristic", "ii", None, "complement bound too weak for condition (ii)")
    return HaxellResult(True, "heuristic")
