"""Expansion certificates: the (n, p, eps, C) density predicate, pruning, and spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .graph import Graph, GraphError
from .seeding import as_seed

MAX_EXACT_N = 24
MAX_MIXING_N = 16
MAX_DENSE_SPECTRAL_N = 2000


def ceil_size(x: float) -> int:
    """Ceiling that ignores float noise such as ``0.2 * 5 = 1.0000000000000002``."""
    return math.ceil(x - 1e-9)


def edge_count_between(g: Graph, U: Iterable[int], W: Iterable[int]) -> int:
    """Edges with one end in ``U`` and the other in ``W``; edges inside ``U & W`` count twice."""
    U = set(U)
    W = set(W)
    for v in U | W:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range")
    return sum(len(g.neighbors(w) & U) for w in W)


@dataclass
class ExpansionCertificate:
    mode: str
    passed: bool
    p: float
    eps: float
    C: float
    reason: str = ""
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    degree_witness: int | None = None
    trials: int | None = None
    d: int | None = None
    lam: float | None = None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_text(self) -> str:
        lines = [f"verdict {self.verdict}", f"mode {self.mode}", f"p {self.p!r}", f"eps {self.eps!r}", f"C {self.C!r}"]
        if self.trials is not None:
            lines.append(f"trials {self.trials}")
        if self.d is not None:
            lines.append(f"d {self.d}")
            lines.append(f"lambda {self.lam!r}")
        if self.reason:
            lines.append(f"reason {self.reason}")
        if self.degree_witness is not None:
            lines.append(f"degree_witness {self.degree_witness}")
        if self.witness is not None:
            U, W = self.witness
            lines.append("witness_U " + " ".join(map(str, U)))
            lines.append("witness_W " + " ".join(map(str, W)))
        return "\n".join(lines) + "\n"


def _degree_failure(g: Graph, p: float, C: float, mode: str, eps: float, **extra) -> ExpansionCertificate | None:
    bound = C * p * g.n
    if g.max_degree > bound + 1e-9:
        v = max(range(g.n), key=lambda x: (g.degree(x), -x))
        return ExpansionCertificate(
            mode, False, p, eps, C,
            reason=f"max degree {g.degree(v)} exceeds C*p*n = {bound:g}",
            degree_witness=v, **extra,
        )
    return None


def verify_expander_exact(g: Graph, p: float, eps: float, C: float) -> ExpansionCertificate:
    """Decide membership in the (n, p, eps, C) family by exhaustive search.

    For a fixed ``U`` and size ``m`` the worst ``W`` is the ``m`` vertices with
    fewest neighbors in ``U``, so only ``U`` is enumerated. Sets are scanned by
    increasing ``|U|`` and then ``|W|``, so a failure reports a smallest witness.
    """
    n = g.n
    if n > MAX_EXACT_N:
        raise GraphError(f"exact verification is limited to n <= {MAX_EXACT_N}")
    failed = _degree_failure(g, p, C, "exact", eps)
    if failed:
        return failed
    m0 = max(1, ceil_size(eps * n))
    if m0 > n:
        return ExpansionCertificate("exact", True, p, eps, C, reason="no qualifying sets")
    masks = np.array(g.bitmasks, dtype=np.int64)
    density = p / C
    sizes = np.arange(1, n + 1)
    for k in range(m0, n + 1):
        for batch in _combination_batches(n, k):
            deg = np.bitwise_count(batch[:, None] & masks[None, :]).astype(np.int64)
            order = np.argsort(deg, axis=1, kind="stable")
            prefix = np.cumsum(np.take_along_axis(deg, order, axis=1), axis=1)
            need = density * k * sizes
            bad = prefix[:, m0 - 1:] < need[m0 - 1:] - 1e-9
            if bad.any():
                row = int(np.argmax(bad.any(axis=1)))
                m = m0 + int(np.argmax(bad[row]))
                U = tuple(v for v in range(n) if (int(batch[row]) >> v) & 1)
                W = tuple(sorted(int(x) for x in order[row, :m]))
                return ExpansionCertificate(
                    "exact", False, p, eps, C,
                    reason=f"e(U,W) = {int(prefix[row, m - 1])} < {need[m - 1]:g}",
                    witness=(U, W),
                )
    return ExpansionCertificate("exact", True, p, eps, C)


def _combination_batches(n: int, k: int, size: int = 1 << 15):
    buf = []
    for combo in combinations(range(n), k):
        mask = 0
        for v in combo:
            mask |= 1 << v
        buf.append(mask)
        if len(buf) == size:
            yield np.array(buf, dtype=np.int64)
            buf = []
    if buf:
        yield np.array(buf, dtype=np.int64)


def verify_expander_sampled(
    g: Graph, p: float, eps: float, C: float, trials: int, seed=None, batch: int = 256
) -> ExpansionCertificate:
    """Refutation-only check: the degree bound exactly, the density bound on random pairs.

    A pass means no sampled pair violated the bound; it is not a proof of membership.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    failed = _degree_failure(g, p, C, "sampled", eps, trials=trials)
    if failed:
        return failed
    n = g.n
    m = max(1, ceil_size(eps * n))
    if m > n:
        return ExpansionCertificate("sampled", True, p, eps, C, trials=trials, reason="no qualifying sets")
    need = (p / C) * m * m
    rng = np.random.default_rng(as_seed(seed))
    adj = g.adjacency_matrix.view(np.uint8)
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        U = np.argpartition(rng.random((b, n)), m - 1, axis=1)[:, :m]
        W = np.argpartition(rng.random((b, n)), m - 1, axis=1)[:, :m]
        counts = adj[U[:, :, None], W[:, None, :]].sum(axis=(1, 2), dtype=np.int64)
        bad = np.flatnonzero(counts < need - 1e-9)
        if bad.size:
            i = int(bad[0])
            return ExpansionCertificate(
                "sampled", False, p, eps, C, trials=trials,
                reason=f"e(U,W) = {int(counts[i])} < {need:g} at trial {done + i}",
                witness=(tuple(sorted(map(int, U[i]))), tuple(sorted(map(int, W[i])))),
            )
        done += b
    return ExpansionCertificate("sampled", True, p, eps, C, trials=trials)


def prune_to_expander(g: Graph, D: float, C: float) -> Graph:
    """Delete every edge at a vertex whose degree exceeds ``C*D``."""
    if C < 2 or D <= 0:
        raise ValueError("need C >= 2 and D > 0")
    cap = C * D
    heavy = {v for v in range(g.n) if g.degree(v) > cap}
    if not heavy:
        return g
    return g.remove_vertices(heavy)


class NotRegularError(GraphError):
    def __init__(self, u: int, v: int, du: int, dv: int):
        super().__init__(f"graph is not regular: deg({u}) = {du}, deg({v}) = {dv}")
        self.witness = (u, v)


@dataclass
class SpectralCertificate:
    d: int
    lam: float
    eigenvalues: np.ndarray = field(repr=False)


def spectral_certificate(g: Graph) -> SpectralCertificate:
    """Degree ``d`` and the largest nontrivial eigenvalue modulus of a regular graph.

    Dense symmetric eigendecomposition up to ``MAX_DENSE_SPECTRAL_N`` vertices,
    Lanczos on a sparse matrix above that.
    """
    if g.n == 0:
        raise GraphError("empty graph")
    degs = g.degrees
    d = degs[0]
    for v in range(1, g.n):
        if degs[v] != d:
            raise NotRegularError(0, v, d, degs[v])
    if g.n <= MAX_DENSE_SPECTRAL_N:
        a = g.adjacency_matrix.astype(np.float64)
        a = (a + a.T) / 2
        eig = np.linalg.eigvalsh(a)
    else:
        from scipy.sparse import csr_matrix
        from scipy.sparse.linalg import eigsh

        rows, cols = zip(*((u, v) for u in range(g.n) for v in g.neighbors(u)))
        a = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
        eig = np.sort(eigsh(a, k=4, which="LM", return_eigenvectors=False, tol=1e-12))
    # drop one copy of the trivial eigenvalue d
    top = int(np.argmin(np.abs(eig - d)))
    rest = np.delete(eig, top)
    lam = float(np.max(np.abs(rest))) if rest.size else 0.0
    return SpectralCertificate(d, lam, eig)


@dataclass
class MixingResult:
    passed: bool
    worst: tuple[tuple[int, ...], tuple[int, ...]]
    worst_ratio: float
    worst_deviation: float


def mixing_lemma_check(g: Graph, d: float, lam: float, tol: float = 1e-9) -> MixingResult:
    """Check ``|e(A,B) - d|A||B|/n| <= lam*sqrt(|A||B|)`` for all nonempty ``A, B``.

    Returns the pair maximising ``|e(A,B) - d|A||B|/n| / sqrt(|A||B|)``. The
    check passes iff that maximum is at most ``lam``.
    """
    n = g.n
    if n > MAX_MIXING_N:
        raise GraphError(f"mixing check is limited to n <= {MAX_MIXING_N}")
    masks = np.arange(1, 1 << n, dtype=np.int64)
    S = ((masks[:, None] >> np.arange(n)) & 1).astype(np.float64)
    sizes = S.sum(axis=1)
    SA = S @ g.adjacency_matrix.astype(np.float64)
    best = (-1.0, 0, 0, 0.0)
    chunk = max(1, (1 << 22) // len(masks))
    for start in range(0, len(masks), chunk):
        e = SA[start:start + chunk] @ S.T
        ab = sizes[start:start + chunk, None] * sizes[None, :]
        dev = np.abs(e - d * ab / n)
        ratio = dev / np.sqrt(ab)
        idx = int(np.argmax(ratio))
        r, c = divmod(idx, ratio.shape[1])
        if ratio[r, c] > best[0]:
            best = (float(ratio[r, c]), start + r, c, float(dev[r, c]))
    ratio, ia, ib, dev = best
    A = tuple(v for v in range(n) if (int(masks[ia]) >> v) & 1)
    B = tuple(v for v in range(n) if (int(masks[ib]) >> v) & 1)
    return MixingResult(ratio <= lam + tol, (A, B), ratio, dev)
