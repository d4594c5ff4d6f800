"""Plain-text formats.

Graphs and trees::

    n m
    u v        (m lines, u < v, 0-indexed)

Embeddings::

    n
    t h        (one line per mapped tree vertex)

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, TextIO

from .graph import Embedding, Graph, GraphError, Tree


class FormatError(GraphError):
    pass


def _content_lines(lines: Iterable[str]) -> list[list[str]]:
    out = []
    for raw in lines:
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line.split())
    return out


def _ints(fields: list[str], count: int, where: str) -> list[int]:
    if len(fields) != count:
        raise FormatError(f"{where}: expected {count} integers, got {' '.join(fields)!r}")
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise FormatError(f"{where}: non-integer field in {' '.join(fields)!r}") from None


def parse_edges(text: str) -> tuple[int, list[tuple[int, int]]]:
    rows = _content_lines(text.splitlines())
    if not rows:
        raise FormatError("malformed header: empty input")
    n, m = _ints(rows[0], 2, "malformed header")
    if n < 0 or m < 0:
        raise FormatError("malformed header: negative count")
    body = rows[1:]
    if len(body) != m:
        raise FormatError(f"header declares {m} edges but {len(body)} follow")
    edges = []
    seen = set()
    for i, fields in enumerate(body, start=2):
        u, v = _ints(fields, 2, f"line {i}")
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"line {i}: vertex out of range in edge ({u}, {v})")
        if u == v:
            raise FormatError(f"line {i}: self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"line {i}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    return n, edges


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    n, edges = parse_edges(text)
    return Graph(n, edges)


def parse_tree(text: str) -> Tree:
    n, edges = parse_edges(text)
    if len(edges) != n - 1:
        raise FormatError(f"non-tree edge count: {len(edges)} edges on {n} vertices")
    return Tree(n, edges)


def format_embedding(emb: Embedding, n: int) -> str:
    lines = [str(n)]
    lines.extend(f"{t} {h}" for t, h in sorted(emb.forward.items()))
    return "\n".join(lines) + "\n"


def parse_embedding(text: str) -> tuple[int, Embedding]:
    rows = _content_lines(text.splitlines())
    if not rows:
        raise FormatError("malformed header: empty input")
    (n,) = _ints(rows[0], 1, "malformed header")
    emb = Embedding()
    for i, fields in enumerate(rows[1:], start=2):
        t, h = _ints(fields, 2, f"line {i}")
        if not (0 <= t < n and 0 <= h < n):
            raise FormatError(f"line {i}: vertex out of range in pair ({t}, {h})")
        try:
            emb.assign(t, h)
        except ValueError as exc:
            raise FormatError(f"line {i}: {exc}") from None
    return n, emb


def _read(src: str | Path | TextIO) -> str:
    if hasattr(src, "read"):
        return src.read()
    return Path(src).read_text()


def _write(dst: str | Path | TextIO, text: str) -> None:
    if hasattr(dst, "write"):
        dst.write(text)
    else:
        Path(dst).write_text(text)


def read_graph(src) -> Graph:
    return parse_graph(_read(src))


def write_graph(g: Graph, dst) -> None:
    _write(dst, format_graph(g))


def read_tree(src) -> Tree:
    return parse_tree(_read(src))


def write_tree(t: Tree, dst) -> None:
    _write(dst, format_graph(t))


def read_embedding(src) -> tuple[int, Embedding]:
    return parse_embedding(_read(src))


def write_embedding(emb: Embedding, n: int, dst) -> None:
    _write(dst, format_embedding(emb, n))
