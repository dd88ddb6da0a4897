"""Composition series built from simple minimal normal subgroups of socles.

A series is grown one simple factor at a time inside ``soc(G)``, then the
construction recurses on ``G / soc(G)`` and pulls the result back.  Each
factor choice is either *arbitrary* (first option) or *nondeterministic*
(every option explored), depending on its 1-based position relative to a
window ``[a, b]``.  Alice explores the first ``t`` choices and Bob the
rest, which splits the choice tree for a bidirectional search.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .algebra import (
    CayleyTable,
    ElementSet,
    QuotientResult,
    _closure_from,
    element_order,
    normal_closure,
    prime_power,
    quotient,
    subgroup_generators,
    subgroup_table,
)
from .errors import ChoiceOutOfRange, NotAPGroup, OrderMismatch
from .groupiso import IsoDecision, IsoWitness, word_map

__all__ = [
    "CompositionSeriesRec",
    "SocleData",
    "TParams",
    "minimal_normal_subgroups",
    "is_simple",
    "simple_minimal_subgroups",
    "socle",
    "composition_series",
    "all_choices",
    "composition_series_alice",
    "composition_series_bob",
    "compute_t",
    "series_isomorphic",
    "p_group_iso_via_series",
]

Chooser = Callable[[int], int]


@dataclass(frozen=True)
class CompositionSeriesRec:
    chain: tuple[ElementSet, ...]
    socle_marks: frozenset[int] = frozenset()

    def __len__(self):
        return len(self.chain)

    def sizes(self) -> tuple[int, ...]:
        return tuple(s.size for s in self.chain)

    def image(self, phi: Sequence[int]) -> tuple[ElementSet, ...]:
        return tuple(ElementSet.of(phi[x] for x in s) for s in self.chain)


@dataclass(frozen=True)
class SocleData:
    minimal_normals: tuple[ElementSet, ...]
    socle: ElementSet
    simple_pool: tuple[ElementSet, ...]


@dataclass(frozen=True)
class TParams:
    p: int
    ell: int
    m: tuple[int, ...]
    s: tuple[int, ...]
    N_i: tuple[int, ...]
    N: int
    r: int
    u: int
    t: int


def minimal_normal_subgroups(G: CayleyTable) -> list[ElementSet]:
    """Inclusion-minimal nontrivial normal subgroups, sorted by member lists.

    Each one is the normal closure of any of its nonidentity elements, so
    the minimal normal closures of single elements are exactly these.
    """
    closures = {}
    for x in range(G.n):
        if x != G.identity:
            N = normal_closure(G, x)
            closures[N.mask] = N
    cands = list(closures.values())
    minimal = [N for N in cands if not any(M < N for M in cands)]
    return sorted(minimal, key=ElementSet.sort_key)


def is_simple(G: CayleyTable) -> bool:
    if G.n < 2:
        return False
    return all(normal_closure(G, x) == G.everything for x in range(G.n) if x != G.identity)


def simple_minimal_subgroups(G: CayleyTable, N: ElementSet) -> list[ElementSet]:
    """Minimal normal subgroups of the group ``N`` that are simple, as subsets of G."""
    sub, emb = subgroup_table(G, N)
    out = []
    for M in minimal_normal_subgroups(sub):
        if is_simple(subgroup_table(sub, M)[0]):
            out.append(ElementSet.of(emb[x] for x in M))
    return sorted(out, key=ElementSet.sort_key)


def socle(G: CayleyTable) -> SocleData:
    mins = minimal_normal_subgroups(G)
    gens = [x for N in mins for x in subgroup_generators(G, N)]
    soc = _closure_from(G, gens)
    pool: dict[int, ElementSet] = {}
    for N in mins:
        for L in simple_minimal_subgroups(G, N):
            pool.setdefault(L.mask, L)
    return SocleData(tuple(mins), soc, tuple(sorted(pool.values(), key=ElementSet.sort_key)))


@dataclass(eq=False)
class _Level:
    """One step of the socle tower: a group F_i with its socle data and the
    map from elements of the original group down to F_i."""

    group: CayleyTable
    simple: bool
    soc: SocleData | None
    to_level: tuple[int, ...]
    products: dict = field(default_factory=dict)
    gens: dict = field(default_factory=dict)

    def lift(self, S: ElementSet) -> ElementSet:
        return ElementSet.of(x for x, y in enumerate(self.to_level) if y in S)

    def generators(self, S: ElementSet) -> tuple[int, ...]:
        g = self.gens.get(S.mask)
        if g is None:
            g = self.gens[S.mask] = subgroup_generators(self.group, S)
        return g

    def product(self, K: ElementSet, L: ElementSet) -> ElementSet:
        key = (K.mask, L.mask)
        P = self.products.get(key)
        if P is None:
            P = self.products[key] = _closure_from(self.group, self.generators(K) + self.generators(L))
        return P


@lru_cache(maxsize=64)
def _socle_tower(G: CayleyTable) -> tuple[_Level, ...]:
    # the tower G, G/soc(G), ... does not depend on any choice, so it is shared by all branches
    levels = []
    F = G
    to_level = tuple(range(G.n))
    while True:
        simple = is_simple(F)
        data = None if simple or F.n < 2 else socle(F)
        levels.append(_Level(F, simple, data, to_level))
        if data is None or data.socle == F.everything:
            break
        q: QuotientResult = quotient(F, data.socle)
        to_level = tuple(q.projection[y] for y in to_level)
        F = q.quotient
    return tuple(levels)


def composition_series(G: CayleyTable, a: int, b: float, j: int = 0, chooser: Chooser | None = None) -> CompositionSeriesRec:
    """Run the series construction for one branch.

    The choice of the ``i``-th simple factor (``i = j + 1`` when ``j``
    factors are already chosen) is delegated to ``chooser(option_count)``
    when ``a <= i <= b``; otherwise the first option is taken.  A missing
    chooser takes the first option everywhere.
    """
    chain: list[ElementSet] = [G.trivial]
    marks: list[int] = []
    for level in _socle_tower(G):
        if level.simple or level.soc is None:
            break
        F = level.group
        soc = level.soc.socle
        pool = list(level.soc.simple_pool)
        K = F.trivial
        while K != soc:
            if a <= j + 1 <= b and chooser is not None:
                idx = chooser(len(pool))
                if not 0 <= idx < len(pool):
                    raise ChoiceOutOfRange(f"choice {idx} not in [0, {len(pool)})")
            else:
                idx = 0
            K = level.product(K, pool[idx])
            chain.append(level.lift(K))
            j += 1
            kept: list[ElementSet] = []
            seen: set[int] = set()
            for L in pool:
                if (K & L) == F.trivial:
                    P = level.product(K, L)
                    if P.mask not in seen:
                        seen.add(P.mask)
                        kept.append(L)
            pool = kept
        marks.append(len(chain) - 1)
    if chain[-1] != G.everything:
        chain.append(G.everything)
    return CompositionSeriesRec(tuple(chain), frozenset(marks))


class _Cursor:
    """Odometer over decision sequences: replays a branch, then advances the
    last decision that still has an untried option."""

    def __init__(self):
        self.script: list[int] = []
        self.counts: list[int] = []
        self.pos = 0

    def __call__(self, options: int) -> int:
        if self.pos < len(self.script):
            choice = self.script[self.pos]
            self.counts[self.pos] = options
        else:
            choice = 0
            self.script.append(0)
            self.counts.append(options)
        self.pos += 1
        return choice

    def advance(self) -> bool:
        del self.script[self.pos:], self.counts[self.pos:]
        while self.script:
            if self.script[-1] + 1 < self.counts[-1]:
                self.script[-1] += 1
                self.pos = 0
                return True
            self.script.pop()
            self.counts.pop()
        return False


def iter_branches(G: CayleyTable, a: int, b: float, j: int = 0) -> Iterator[CompositionSeriesRec]:
    cursor = _Cursor()
    while True:
        yield composition_series(G, a, b, j, cursor)
        if not cursor.advance():
            return


def all_choices(G: CayleyTable, a: int, b: float, j: int = 0) -> list[CompositionSeriesRec]:
    """Distinct outputs over every combination of nondeterministic choices, in branch order."""
    return list(dict.fromkeys(iter_branches(G, a, b, j)))


def composition_series_alice(G: CayleyTable, t: int) -> list[CompositionSeriesRec]:
    return all_choices(G, 1, t, 0)


def composition_series_bob(H: CayleyTable, t: int) -> list[CompositionSeriesRec]:
    return all_choices(H, t + 1, math.inf, 0)


def compute_t(G: CayleyTable) -> TParams:
    """Split point that balances Alice's and Bob's share of the choice tree."""
    pk = prime_power(G.n)
    if pk is None:
        raise NotAPGroup(f"order {G.n} is not a prime power")
    p = pk[0]
    S = composition_series(G, 1, 0, 0)
    marks = sorted(S.socle_marks)
    m, s = [], []
    prev = 0
    for pos in marks:
        m.append(pos - prev)
        s.append(S.chain[pos].size // S.chain[prev].size)
        prev = pos
    N_i = [math.prod(si // p**jj for jj in range(mi)) for mi, si in zip(m, s)]
    N = math.prod(N_i)
    ell = len(marks)
    if ell == 0:
        return TParams(p, 0, (), (), (), 1, 0, 0, 0)

    def fits(x: int) -> bool:
        # x <= sqrt(N) without floating point
        return x * x <= N

    r = max(rr for rr in range(1, ell + 1) if fits(math.prod(N_i[: rr - 1])))
    head = math.prod(N_i[: r - 1])
    sr, mr = s[r - 1], m[r - 1]
    u = max(uu for uu in range(0, mr + 1) if fits(head * math.prod(sr // p**jj for jj in range(uu))))
    t = sum(m[: r - 1]) + u
    return TParams(p, ell, tuple(m), tuple(s), tuple(N_i), N, r, u, t)


def _levels(G: CayleyTable, S: CompositionSeriesRec) -> list[int]:
    level = [0] * G.n
    for x in range(G.n):
        level[x] = next(i for i, M in enumerate(S.chain) if x in M)
    return level


def series_invariant(G: CayleyTable, S: CompositionSeriesRec) -> tuple:
    """Isomorphism invariant of a (group, series) pair: per level, the sorted element orders."""
    lv = _levels(G, S)
    prof = sorted((lv[x], element_order(G, x)) for x in range(G.n))
    return (S.sizes(), tuple(sorted(S.socle_marks)), tuple(prof))


def series_isomorphic(G: CayleyTable, S: CompositionSeriesRec, H: CayleyTable, S2: CompositionSeriesRec) -> IsoWitness | None:
    """Find an isomorphism carrying every chain member of S onto the matching member of S2.

    Backtracks over images of a chain-adapted generating sequence, pruning
    by element order, level, and consistency on each partial span.
    """
    if G.n != H.n or len(S) != len(S2) or S.sizes() != S2.sizes() or S.socle_marks != S2.socle_marks:
        return None
    lg, lh = _levels(G, S), _levels(H, S2)
    og = [element_order(G, x) for x in range(G.n)]
    oh = [element_order(H, y) for y in range(H.n)]

    gens: list[int] = []
    checkpoints: dict[int, int] = {}  # number of gens -> chain index it must span
    span = G.trivial
    for i, M in enumerate(S.chain[1:], start=1):
        while span != M:
            x = next(x for x in M if x not in span)
            gens.append(x)
            span = _closure_from(G, gens)
        checkpoints[len(gens)] = i

    cands = [[y for y in range(H.n) if lh[y] == lg[x] and oh[y] == og[x]] for x in gens]
    imgs: list[int] = []

    def search(k: int) -> dict | None:
        if k == len(gens):
            return word_map(G, gens, H, imgs)
        for y in cands[k]:
            imgs.append(y)
            phi = word_map(G, gens[: k + 1], H, imgs)
            ok = phi is not None
            if ok and (k + 1) in checkpoints:
                ok = ElementSet.of(phi.values()) == S2.chain[checkpoints[k + 1]]
            if ok:
                found = search(k + 1)
                if found is not None:
                    return found
            imgs.pop()
        return None

    phi = search(0)
    if phi is None or len(phi) != G.n:
        return None
    return IsoWitness(tuple(phi[x] for x in range(G.n)))


def p_group_iso_via_series(G: CayleyTable, H: CayleyTable) -> IsoDecision:
    """Decide isomorphism of p-groups from Alice's and Bob's composition series."""
    start = time.perf_counter()
    if G.n != H.n:
        raise OrderMismatch(G.n, H.n)
    pk = prime_power(G.n)
    if pk is None:
        raise NotAPGroup(f"order {G.n} is not a prime power")
    tg, th = compute_t(G), compute_t(H)
    stats = {"algorithm": "series", "n": G.n, "p": pk[0], "d": tg.t, "t_g": tg.t, "t_h": th.t}
    if tg.t != th.t:
        stats.update(a_count=0, b_count=0, pairs=0, millis=(time.perf_counter() - start) * 1000)
        return IsoDecision(False, None, stats)
    A = composition_series_alice(G, tg.t)
    B = composition_series_bob(H, tg.t)
    buckets: dict[tuple, list[CompositionSeriesRec]] = {}
    for S2 in B:
        buckets.setdefault(series_invariant(H, S2), []).append(S2)
    witness = None
    tried = 0
    for S in A:
        for S2 in buckets.get(series_invariant(G, S), ()):
            tried += 1
            witness = series_isomorphic(G, S, H, S2)
            if witness is not None:
                break
        if witness is not None:
            break
    stats.update(a_count=len(A), b_count=len(B), pairs=tried, millis=(time.perf_counter() - start) * 1000)
    return IsoDecision(witness is not None, witness, stats)
