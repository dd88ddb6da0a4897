"""Finite rings given by addition and multiplication tables.

No unit element and no commutativity of multiplication are assumed.  The
isomorphism search runs over generating sequences of the additive group;
an additive isomorphism that also respects multiplication is a ring
isomorphism.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cached_property
from itertools import islice
from typing import Sequence

import numpy as np

from .algebra import CayleyTable, has_generating_sequence_of_size, validate_cayley_table
from .collision import ChunkPlan, ChunkStats, detect_common
from .errors import AddNotAbelianGroup, EntryOutOfRange, MulNotAssociative, NotDistributive, NotGenerating, OrderMismatch, TableError, TableShapeError
from .groupiso import (
    IsoDecision,
    IsoWitness,
    _relabelled_bytes,
    alice_sequences,
    bob_sequences,
    first_generating_sequence,
    iter_extensions,
    split_depth,
    word_map,
    word_order,
)

__all__ = [
    "RingTable",
    "validate_ring",
    "induced_ring_isomorphism",
    "ring_fingerprint",
    "ring_generator_enumeration",
    "is_isomorphic_rings",
]


@dataclass(frozen=True, eq=False)
class RingTable:
    n: int
    add: CayleyTable
    mul: tuple[tuple[int, ...], ...]

    @property
    def zero(self) -> int:
        return self.add.identity

    @cached_property
    def mul_array(self) -> np.ndarray:
        return np.asarray(self.mul, dtype=np.int64).reshape(self.n, self.n)

    def __repr__(self):
        return f"RingTable(n={self.n}, zero={self.zero})"


def _first_bad(mask: np.ndarray):
    bad = np.argwhere(mask)
    return tuple(int(v) for v in bad[0]) if len(bad) else None


def validate_ring(n: int, add_raw: Sequence[Sequence[int]], mul_raw: Sequence[Sequence[int]]) -> RingTable:
    try:
        add = validate_cayley_table(n, add_raw)
    except TableError as exc:
        raise AddNotAbelianGroup(f"addition is not a group: {exc}") from exc
    if not add.is_abelian:
        a, b = _first_bad(add.array != add.array.T)
        raise AddNotAbelianGroup(f"addition not commutative at ({a}, {b})")
    if len(mul_raw) != n or any(len(row) != n for row in mul_raw):
        raise TableShapeError(f"multiplication table is not {n}x{n}")
    mul = tuple(tuple(int(v) for v in row) for row in mul_raw)
    for a, row in enumerate(mul):
        for b, v in enumerate(row):
            if not 0 <= v < n:
                raise EntryOutOfRange(a, b, v, n)
    M = np.asarray(mul, dtype=np.int64).reshape(n, n)
    A = add.array
    for a in range(n):
        # (a*b)*c vs a*(b*c)
        hit = _first_bad(M[M[a]] != M[a][M])
        if hit:
            raise MulNotAssociative(a, *hit)
    for a in range(n):
        # a*(b+c) vs a*b + a*c
        hit = _first_bad(M[a][A] != A[np.ix_(M[a], M[a])])
        if hit:
            raise NotDistributive(a, *hit, side="left")
        # (b+c)*a vs b*a + c*a
        col = M[:, a]
        hit = _first_bad(col[A] != A[np.ix_(col, col)])
        if hit:
            raise NotDistributive(a, *hit, side="right")
    return RingTable(n, add, mul)


def _is_multiplicative(R: RingTable, S: RingTable, phi: Sequence[int]) -> bool:
    p = np.asarray(phi)
    return bool((p[R.mul_array] == S.mul_array[np.ix_(p, p)]).all())


def induced_ring_isomorphism(R: RingTable, rgens: Sequence[int], S: RingTable, sgens: Sequence[int]) -> IsoWitness | None:
    """Additive extension of ``rgens -> sgens``, kept only if it is a ring isomorphism."""
    if R.n != S.n:
        return None
    phi = word_map(R.add, rgens, S.add, sgens)
    if phi is None or len(phi) != R.n:
        return None
    w = IsoWitness(tuple(phi[x] for x in range(R.n)))
    return w if _is_multiplicative(R, S, w.map) else None


def ring_fingerprint(R: RingTable, rgens: Sequence[int]) -> bytes:
    order, _ = word_order(R.add, rgens)
    if len(order) != R.n:
        raise NotGenerating(f"{tuple(rgens)} spans only {len(order)} of {R.n} elements additively")
    return _relabelled_bytes(R.n, order, [R.add.array, R.mul_array], rgens)


def is_ring_isomorphism(R: RingTable, S: RingTable, w: IsoWitness) -> bool:
    return w.is_group_isomorphism(R.add, S.add) and _is_multiplicative(R, S, w.map)


def ring_generator_enumeration(R: RingTable, S: RingTable) -> IsoDecision:
    """Baseline: fix additive generators of R, try every irredundant image tuple in S."""
    start = time.perf_counter()
    if R.n != S.n:
        raise OrderMismatch(R.n, S.n)
    gens = first_generating_sequence(R.add)
    k = len(gens)
    tried = 0
    witness = None
    for cand in iter_extensions(S.add, (), 0, k):
        if len(cand) != k:
            continue
        tried += 1
        witness = induced_ring_isomorphism(R, gens, S, cand)
        if witness is not None:
            break
    stats = {"algorithm": "genenum", "n": R.n, "candidates": tried, "a_count": 1, "b_count": tried,
             "chunk_pairs": 0, "peak_fingerprints": 0, "millis": (time.perf_counter() - start) * 1000}
    return IsoDecision(witness is not None, witness, stats)


def is_isomorphic_rings(R: RingTable, S: RingTable, plan: ChunkPlan = ChunkPlan(), threads: int = 1) -> IsoDecision:
    """Bidirectional split over the additive generator tree, fingerprints carrying both tables."""
    start = time.perf_counter()
    if R.n != S.n:
        raise OrderMismatch(R.n, S.n)
    if R.n == 1:
        return IsoDecision(True, IsoWitness((0,)), {"algorithm": "bidi", "n": 1, "a_count": 0, "b_count": 0,
                                                    "chunk_pairs": 0, "peak_fingerprints": 0, "millis": 0.0})
    p, d = split_depth(R.n)
    base = {"algorithm": "bidi", "n": R.n, "p": p, "d": d, "delta": plan.delta}
    if has_generating_sequence_of_size(R.add, d) is not None:
        res = ring_generator_enumeration(R, S)
        res.stats = {**res.stats, **base, "fallback": "genenum", "millis": (time.perf_counter() - start) * 1000}
        return res
    if has_generating_sequence_of_size(S.add, d) is not None:
        return IsoDecision(False, None, {**base, "a_count": 0, "b_count": 0, "chunk_pairs": 0,
                                         "peak_fingerprints": 0, "millis": (time.perf_counter() - start) * 1000})
    cs = ChunkStats()
    hit = detect_common(
        lambda: (ring_fingerprint(R, g) for g in alice_sequences(R.add, d)),
        lambda: (ring_fingerprint(S, h) for h in bob_sequences(S.add, d)),
        plan,
        cs,
        threads,
    )
    witness = None
    if hit is not None:
        i, j = hit
        g = next(islice(alice_sequences(R.add, d), i, None))
        h = next(islice(bob_sequences(S.add, d), j, None))
        witness = induced_ring_isomorphism(R, g, S, h)
        if witness is None:
            raise RuntimeError("ring fingerprint match did not yield an isomorphism")
    stats = {
        **base,
        "a_count": sum(1 for _ in alice_sequences(R.add, d)),
        "b_count": sum(1 for _ in bob_sequences(S.add, d)),
        "chunk_pairs": cs.chunk_pairs,
        "peak_fingerprints": cs.peak_fingerprints,
        "millis": (time.perf_counter() - start) * 1000,
    }
    return IsoDecision(witness is not None, witness, stats)
