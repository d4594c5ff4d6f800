"""Reservoir (switching) sets of an embedded tree image.

For a tree image ``T~`` on host vertices, ``B(v)`` holds every image vertex
``w`` whose whole tree neighborhood lies in ``N_H(v)``; ``B(u, v)`` is
``B(v) & N_H(u)``. Any ``w`` in ``B(u, v)`` can be freed by moving its tree
vertex to ``v``, after which ``w`` is available to a new neighbor of ``u``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from ..graph import Embedding, Graph


def tree_image(tree: Graph, emb: Embedding) -> dict[int, set[int]]:
    """Adjacency of the image tree on host vertices, restricted to mapped tree vertices."""
    img: dict[int, set[int]] = {h: set() for h in emb.inverse}
    for x, h in emb.forward.items():
        for y in tree.neighbors(x):
            hy = emb.forward.get(y)
            if hy is not None:
                img[h].add(hy)
    return img


class ReservoirTable:
    """Membership matrix ``member[w, v] = (w in B(v))``, maintained under local edits.

    Rows of host vertices outside the image are all False.
    """

    def __init__(self, image: Mapping[int, Iterable[int]], h: Graph):
        self.h = h
        self.adj = h.adjacency_matrix
        self.image: dict[int, set[int]] = {w: set(nb) for w, nb in image.items()}
        for w, nb in self.image.items():
            if not 0 <= w < h.n:
                raise ValueError(f"image vertex {w} outside the host")
            for x in nb:
                if w not in self.image.get(x, ()):
                    raise ValueError(f"image adjacency is not symmetric at ({w}, {x})")
        self.member = np.zeros((h.n, h.n), dtype=bool)
        for w in self.image:
            self._refresh_row(w)

    def _refresh_row(self, w: int) -> None:
        nb = self.image.get(w)
        if nb is None:
            self.member[w] = False
        elif not nb:
            self.member[w] = True
        else:
            self.member[w] = np.logical_and.reduce(self.adj[list(nb)], axis=0)

    def refresh(self, vertices: Iterable[int]) -> None:
        for w in set(vertices):
            self._refresh_row(w)

    # -- queries -------------------------------------------------------------

    def B(self, v: int) -> set[int]:
        return set(np.flatnonzero(self.member[:, v]).tolist())

    def B_pair(self, u: int, v: int) -> set[int]:
        return set(np.flatnonzero(self.member[:, v] & self.adj[u]).tolist())

    def first_in_pair(self, u: int, v: int) -> int | None:
        hits = np.flatnonzero(self.member[:, v] & self.adj[u])
        return int(hits[0]) if hits.size else None

    def pair_counts(self) -> np.ndarray:
        """``counts[u, v] = |B(u, v)|``; the diagonal is meaningless and set to -1."""
        counts = (self.adj.astype(np.float64) @ self.member.astype(np.float64)).astype(np.int64)
        np.fill_diagonal(counts, -1)
        return counts

    def min_pair(self) -> tuple[int, tuple[int, int]]:
        counts = self.pair_counts()
        if counts.shape[0] < 2:
            return 0, (0, 0)
        np.fill_diagonal(counts, np.iinfo(np.int64).max)
        idx = int(np.argmin(counts))
        u, v = divmod(idx, counts.shape[1])
        return int(counts[u, v]), (u, v)

    # -- edits ---------------------------------------------------------------

    def add_vertex(self, w: int) -> None:
        self.image.setdefault(w, set())
        self._refresh_row(w)

    def add_edge(self, x: int, y: int) -> None:
        self.image.setdefault(x, set()).add(y)
        self.image.setdefault(y, set()).add(x)
        self._refresh_row(x)
        self._refresh_row(y)

    def extend(self, edges: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> None:
        touched = set(vertices)
        for w in touched:
            self.image.setdefault(w, set())
        for x, y in edges:
            self.image.setdefault(x, set()).add(y)
            self.image.setdefault(y, set()).add(x)
            touched.update((x, y))
        self.refresh(touched)

    def relocate(self, w: int, v: int) -> set[int]:
        """Move the tree vertex sitting on ``w`` to the unused host vertex ``v``.

        ``w`` leaves the image. Returns the set of rows that were refreshed.
        """
        if v in self.image:
            raise ValueError(f"host vertex {v} is already in the image")
        nb = self.image.pop(w)
        self.image[v] = set(nb)
        for x in nb:
            self.image[x].discard(w)
            self.image[x].add(v)
        touched = {w, v} | nb
        self.refresh(touched)
        return touched

    def snapshot(self) -> np.ndarray:
        return self.member.copy()

    def equals(self, other: "ReservoirTable") -> bool:
        return self.image == other.image and bool(np.array_equal(self.member, other.member))


def compute_reservoir(image: Mapping[int, Iterable[int]], h: Graph) -> ReservoirTable:
    return ReservoirTable(image, h)

