"""Bidirectional collision detection over abstract choice trees.

Alice enumerates every path of the top ``d`` levels of a tree and extends
each one to a leaf by always taking the first child.  Bob fixes a single
depth-``d`` node and enumerates every leaf below it.  If two labelled trees
are equal, the two path sets share a leaf; :func:`detect_common` finds it
while holding at most ``2 * delta`` fingerprints at a time.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import islice
from typing import Callable, Hashable, Iterable, Iterator, Protocol, Sequence

__all__ = [
    "ChoiceTree",
    "ChunkPlan",
    "ChunkStats",
    "prefix_paths",
    "first_path",
    "extend_arbitrarily",
    "suffix_paths",
    "detect_common",
    "tradeoff_stats",
    "count_nodes",
]

Path = tuple
Stream = Callable[[], Iterable[bytes]]


class ChoiceTree(Protocol):
    """Read-only access to a rooted tree through opaque node labels.

    ``children`` must return the same ordered sequence every time it is
    called with the same label, and must be empty exactly at leaves.
    """

    root: Hashable

    def children(self, label) -> Sequence: ...

    def is_leaf(self, label) -> bool: ...


def _last(tree: ChoiceTree, path: Path):
    return path[-1] if path else tree.root


def prefix_paths(tree: ChoiceTree, d: int) -> Iterator[Path]:
    """All root paths with exactly ``d`` edges, plus shorter ones ending at a leaf.

    Paths are tuples of the labels below the root, yielded depth-first in
    child order.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")

    def walk(label, path):
        if len(path) == d or tree.is_leaf(label):
            yield path
            return
        for child in tree.children(label):
            yield from walk(child, path + (child,))

    yield from walk(tree.root, ())


def first_path(tree: ChoiceTree, d: int) -> Path:
    """The first-child path of length ``d`` (shorter if a leaf is reached)."""
    return next(prefix_paths(tree, d))


def extend_arbitrarily(tree: ChoiceTree, path: Path) -> Path:
    label = _last(tree, path)
    path = tuple(path)
    while not tree.is_leaf(label):
        label = tree.children(label)[0]
        path += (label,)
    return path


def suffix_paths(tree: ChoiceTree, prefix: Path) -> Iterator[Path]:
    """Every root-to-leaf path that starts with ``prefix``."""

    def walk(label, path):
        if tree.is_leaf(label):
            yield path
            return
        for child in tree.children(label):
            yield from walk(child, path + (child,))

    yield from walk(_last(tree, prefix), tuple(prefix))


def count_nodes(tree: ChoiceTree, start: Path = (), depth: int | None = None) -> int:
    """Nodes in the subtree below ``start`` (inclusive), down to ``depth`` extra levels."""
    stack = [(_last(tree, start), 0)]
    total = 0
    while stack:
        label, k = stack.pop()
        total += 1
        if depth is not None and k == depth:
            continue
        stack.extend((c, k + 1) for c in tree.children(label))
    return total


@dataclass(frozen=True)
class ChunkPlan:
    """How many fingerprints each side may hold per round; ``None`` means no limit."""

    delta: int | None = None

    def __post_init__(self):
        if self.delta is not None and self.delta < 1:
            raise ValueError("delta must be at least 1")

    @property
    def unbounded(self) -> bool:
        return self.delta is None


@dataclass
class ChunkStats:
    a_count: int = 0
    b_count: int = 0
    chunk_pairs: int = 0
    peak_fingerprints: int = 0
    b_passes: int = 0


def tradeoff_stats(f: int, g: int, plan: ChunkPlan) -> dict:
    """Chunk pairs and resident fingerprints for a full scan of sizes f and g."""
    delta = plan.delta if plan.delta is not None else max(f, g, 1)
    return {
        "chunk_pairs": math.ceil(f / delta) * math.ceil(g / delta),
        "peak_space_units": 2 * delta,
    }


def _chunks(stream: Iterable[bytes], size: int | None) -> Iterator[list[tuple[bytes, int]]]:
    it = enumerate(stream)
    if size is None:
        chunk = [(fp, i) for i, fp in it]
        if chunk:
            yield chunk
        return
    while True:
        chunk = [(fp, i) for i, fp in islice(it, size)]
        if not chunk:
            return
        yield chunk


def _sorted_dedup(chunk: list[tuple[bytes, int]]) -> list[tuple[bytes, int]]:
    # keep the least index of each fingerprint
    chunk.sort()
    out = []
    for fp, i in chunk:
        if not out or out[-1][0] != fp:
            out.append((fp, i))
    return out


def _match(a_sorted, b_sorted) -> tuple[int, int] | None:
    """Least (i, j) over fingerprints common to two sorted, deduplicated chunks."""
    best = None
    x = y = 0
    while x < len(a_sorted) and y < len(b_sorted):
        fa, fb = a_sorted[x][0], b_sorted[y][0]
        if fa == fb:
            cand = (a_sorted[x][1], b_sorted[y][1])
            if best is None or cand < best:
                best = cand
            x += 1
            y += 1
        elif fa < fb:
            x += 1
        else:
            y += 1
    return best


def detect_common(
    a_stream: Stream,
    b_stream: Stream,
    plan: ChunkPlan = ChunkPlan(),
    stats: ChunkStats | None = None,
    threads: int = 1,
) -> tuple[int, int] | None:
    """Find the lexicographically least ``(i, j)`` with ``A[i] == B[j]``.

    ``a_stream`` and ``b_stream`` are zero-argument callables returning a
    fresh iterator over the fingerprints each time; B is re-enumerated once
    per A chunk instead of being cached.  With ``threads > 1`` up to
    ``threads`` B chunks are compared concurrently, so the resident bound
    grows to ``(1 + threads) * delta``.
    """
    if stats is None:
        stats = ChunkStats()
    delta = plan.delta
    b_total = None
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for a_chunk in _chunks(a_stream(), delta):
            stats.a_count += len(a_chunk)
            a_sorted = _sorted_dedup(a_chunk)
            best = None
            b_seen = 0
            stats.b_passes += 1
            if pool is None:
                for b_chunk in _chunks(b_stream(), delta):
                    b_seen += len(b_chunk)
                    stats.chunk_pairs += 1
                    stats.peak_fingerprints = max(stats.peak_fingerprints, len(a_chunk) + len(b_chunk))
                    hit = _match(a_sorted, _sorted_dedup(b_chunk))
                    if hit is not None and (best is None or hit < best):
                        best = hit
            else:
                best, b_seen = _threaded_pass(pool, threads, a_sorted, len(a_chunk), b_stream, delta, stats)
            if b_total is None:
                b_total = b_seen
                stats.b_count = b_seen
            if best is not None:
                return best
    finally:
        if pool is not None:
            pool.shutdown()
    if b_total is None:
        # A was empty; B was never enumerated
        stats.b_count = sum(1 for _ in b_stream())
    return None


def _threaded_pass(pool, threads, a_sorted, a_len, b_stream, delta, stats):
    best = None
    b_seen = 0
    pending = []

    def drain():
        nonlocal best
        for fut, _ in pending:
            hit = fut.result()
            if hit is not None and (best is None or hit < best):
                best = hit
        pending.clear()

    for b_chunk in _chunks(b_stream(), delta):
        b_seen += len(b_chunk)
        stats.chunk_pairs += 1
        pending.append((pool.submit(lambda c=b_chunk: _match(a_sorted, _sorted_dedup(c))), len(b_chunk)))
        resident = a_len + sum(size for _, size in pending)
        stats.peak_fingerprints = max(stats.peak_fingerprints, resident)
        if len(pending) >= threads:
            drain()
    drain()
    return best, b_seen
