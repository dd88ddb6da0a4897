import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bidiso.collision import (
    ChunkPlan,
    ChunkStats,
    count_nodes,
    detect_common,
    extend_arbitrarily,
    first_path,
    prefix_paths,
    suffix_paths,
    tradeoff_stats,
)
from bidiso.groupiso import GeneratorTree
from conftest import group


class BinaryTree:
    """Complete binary tree; labels are bit strings."""

    def __init__(self, depth):
        self.depth = depth
        self.root = ""

    def children(self, label):
        return [] if len(label) == self.depth else [label + "0", label + "1"]

    def is_leaf(self, label):
        return len(label) == self.depth


class TestPaths:
    def test_prefix_paths(self):
        T = BinaryTree(3)
        paths = list(prefix_paths(T, 2))
        assert paths == [("0", "00"), ("0", "01"), ("1", "10"), ("1", "11")]
        assert list(prefix_paths(T, 0)) == [()]
        with pytest.raises(ValueError):
            list(prefix_paths(T, -1))

    def test_prefix_paths_stop_at_shallow_leaves(self):
        T = BinaryTree(1)
        assert list(prefix_paths(T, 3)) == [("0",), ("1",)]

    def test_prefix_paths_generator_tree(self):
        assert len(list(prefix_paths(GeneratorTree(group("Z2^2")), 1))) == 3

    def test_extend_arbitrarily(self):
        T = BinaryTree(3)
        assert extend_arbitrarily(T, ("1", "10", "101")) == ("1", "10", "101")
        assert extend_arbitrarily(T, ("1", "11")) == ("1", "11", "110")
        tree = GeneratorTree(group("Z2^3"))
        (p,) = [q for q in prefix_paths(tree, 1)][:1]
        leaf = extend_arbitrarily(tree, p)[-1]
        assert len(leaf.elems) == 3 and leaf.span == group("Z2^3").everything

    def test_suffix_paths(self):
        T = BinaryTree(3)
        leaf = ("0", "01", "011")
        assert list(suffix_paths(T, leaf)) == [leaf]
        assert len(list(suffix_paths(T, ("1",)))) == 4
        assert all(p[0] == "1" for p in suffix_paths(T, ("1",)))

    def test_suffix_paths_generator_tree(self):
        G = group("Z2^4")
        tree = GeneratorTree(G)
        prefix = first_path(tree, 2)
        completions = list(suffix_paths(tree, prefix))
        assert all(p[:2] == prefix for p in completions)
        # elements outside a rank-2 span, then outside a rank-3 span
        assert len(completions) == (16 - 4) * (16 - 8) <= 16**2

    def test_count_nodes(self):
        T = BinaryTree(3)
        assert count_nodes(T) == 15
        assert count_nodes(T, (), 1) == 3


class TestTradeoff:
    def test_arithmetic(self):
        assert tradeoff_stats(100, 100, ChunkPlan(10)) == {"chunk_pairs": 100, "peak_space_units": 20}
        assert tradeoff_stats(100, 100, ChunkPlan(1))["chunk_pairs"] == 10000
        assert tradeoff_stats(100, 100, ChunkPlan(100))["chunk_pairs"] == 1

    def test_plan_validation(self):
        with pytest.raises(ValueError):
            ChunkPlan(0)
        assert ChunkPlan().unbounded


def enc(xs):
    return lambda: (str(x).encode() for x in xs)


def pairwise_oracle(A, B):
    hits = [(i, j) for i, a in enumerate(A) for j, b in enumerate(B) if a == b]
    return min(hits) if hits else None


class TestDetectCommon:
    def test_examples(self):
        assert detect_common(enc([1, 2, 3]), enc([4, 5, 3]), ChunkPlan(2)) == (2, 2)
        assert detect_common(enc([1, 2]), enc([3, 4]), ChunkPlan(2)) is None

    def test_empty(self):
        stats = ChunkStats()
        assert detect_common(enc([]), enc([1, 2]), ChunkPlan(1), stats) is None
        assert stats.b_count == 2

    def test_full_scan_counts_match_tradeoff(self):
        A, B = list(range(0, 23)), list(range(100, 117))
        for delta in (1, 3, 5, 40):
            stats = ChunkStats()
            detect_common(enc(A), enc(B), ChunkPlan(delta), stats)
            expected = tradeoff_stats(len(A), len(B), ChunkPlan(delta))
            assert stats.chunk_pairs == expected["chunk_pairs"]
            assert stats.peak_fingerprints <= expected["peak_space_units"]
            assert stats.b_passes == math.ceil(len(A) / delta)
            assert (stats.a_count, stats.b_count) == (len(A), len(B))

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(st.integers(0, 15), max_size=25),
        st.lists(st.integers(0, 15), max_size=25),
        st.integers(1, 30),
    )
    def test_against_pairwise_scan(self, A, B, delta):
        want = pairwise_oracle(A, B)
        stats = ChunkStats()
        assert detect_common(enc(A), enc(B), ChunkPlan(delta), stats) == want
        assert stats.peak_fingerprints <= 2 * delta
        for other in (ChunkPlan(1), ChunkPlan(2), ChunkPlan(len(A) + len(B) + 1), ChunkPlan(None)):
            assert detect_common(enc(A), enc(B), other) == want

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.integers(0, 30), max_size=30),
        st.lists(st.integers(0, 30), max_size=30),
        st.integers(1, 6),
        st.integers(2, 4),
    )
    def test_threaded_agrees(self, A, B, delta, threads):
        stats = ChunkStats()
        assert detect_common(enc(A), enc(B), ChunkPlan(delta), stats, threads) == pairwise_oracle(A, B)
        assert stats.peak_fingerprints <= (1 + threads) * delta

    def test_streams_are_reenumerated(self):
        calls = {"b": 0}

        def b_stream():
            calls["b"] += 1
            return iter([b"x", b"y"])

        detect_common(enc(range(6)), b_stream, ChunkPlan(2))
        assert calls["b"] == 3
