"""Acceptance suite: ten criteria, each checked exactly against brute-force oracles.

Under pytest the PASS/FAIL line of each criterion appears in an
"acceptance criteria" section of the terminal summary; ``python3
tests/test_acceptance.py`` prints the same lines as it goes.
"""

from __future__ import annotations

import itertools
import math
import random
import sys
import time
from functools import lru_cache

import pytest

from bidiso.algebra import ElementSet, prime_power
from bidiso.collision import ChunkPlan
from bidiso.errors import OrderMismatch
from bidiso.groupiso import (
    CandidateSets,
    IsoDecision,
    bidirectional_generator_enumeration,
    canonical_fingerprint,
    first_generating_sequence,
    induced_isomorphism,
    is_isomorphic_groups,
    iter_extensions,
)
from bidiso.rings import is_isomorphic_rings, is_ring_isomorphism
from bidiso.series import (
    all_choices,
    composition_series,
    composition_series_alice,
    composition_series_bob,
    compute_t,
    p_group_iso_via_series,
)
from conftest import corpus_groups, corpus_rings, group, ring, shuffled, shuffled_ring
from oracles import (
    check_composition_series,
    groups_isomorphic,
    irredundant_generating_tuples,
    is_isomorphism,
    isomorphisms,
    rings_isomorphic,
)

DELTAS = (ChunkPlan(1), ChunkPlan(16), ChunkPlan(None))
SAMPLE_PAIRS = 10_000


def report(number: int, title: str, fn) -> None:
    start = time.perf_counter()
    try:
        detail = fn()
    except AssertionError as exc:
        _emit(f"[FAIL] criterion {number:2d}: {title} ({time.perf_counter() - start:.1f}s) {exc}")
        raise
    _emit(f"[PASS] criterion {number:2d}: {title} ({time.perf_counter() - start:.1f}s) {detail or ''}".rstrip())


RESULT_LINES: list[str] = []


def _emit(line: str) -> None:
    # pytest captures output, so the lines are also replayed in the terminal summary (see conftest)
    RESULT_LINES.append(line)
    if __name__ == "__main__":
        print(line, flush=True)


@lru_cache(maxsize=None)
def oracle_iso(a: str, b: str) -> bool:
    return groups_isomorphic(group(a).table, group(b).table)


def isomorphic_pairs(names):
    """Every corpus name with itself plus distinct constructions that the oracle finds isomorphic."""
    pairs = [(a, a) for a in names]
    for a, b in itertools.combinations(names, 2):
        if group(a).n == group(b).n and oracle_iso(a, b):
            pairs.append((a, b))
    return pairs


# 1 and 5 share the same runs -------------------------------------------------

@lru_cache(maxsize=None)
def group_runs():
    names = corpus_groups(24)
    runs = []
    for i, a in enumerate(names):
        for b in names[i:]:
            G = group(a)
            H, _ = shuffled(group(b), seed=i)
            if G.n != H.n:
                runs.append((a, b, None, False, None))
                continue
            want = oracle_iso(a, b)
            for plan in DELTAS:
                res = is_isomorphic_groups(G, H, plan)
                ok_witness = res.witness is None or is_isomorphism(res.witness.map, [G.table], [H.table])
                runs.append((a, b, plan.delta, want, (res, ok_witness)))
    return names, runs


def criterion_1():
    names, runs = group_runs()
    classes = []
    for a in names:
        if not any(group(a).n == group(c).n and oracle_iso(c, a) for c in classes):
            classes.append(a)
    assert len(classes) >= 20, f"only {len(classes)} isomorphism classes"
    compared = 0
    for a, b, delta, want, outcome in runs:
        if outcome is None:
            with pytest.raises(OrderMismatch):
                is_isomorphic_groups(group(a), group(b))
            continue
        res, ok_witness = outcome
        compared += 1
        assert res.isomorphic == want, f"{a} vs {b} at delta={delta}: got {res.isomorphic}, oracle {want}"
        assert ok_witness, f"{a} vs {b}: witness is not an isomorphism"
        assert (res.witness is not None) == want
    return f"{compared} decisions over {len(names)} groups ({len(classes)} classes)"


def criterion_5():
    _, runs = group_runs()
    decisions: dict[tuple[str, str], set[bool]] = {}
    worst = 0.0
    for a, b, delta, _, outcome in runs:
        if outcome is None:
            continue
        res, _ = outcome
        decisions.setdefault((a, b), set()).add(res.isomorphic)
        if delta is not None:
            assert res.stats["peak_fingerprints"] <= 2 * delta, f"{a} vs {b}: peak above 2*delta={2 * delta}"
            worst = max(worst, res.stats["peak_fingerprints"] / (2 * delta))
    unstable = [k for k, v in decisions.items() if len(v) != 1]
    assert not unstable, f"decision depends on delta for {unstable[:3]}"
    return f"{len(decisions)} pairs stable, max peak/(2 delta) = {worst:.2f}"


# 2 ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def generating_tuples(name: str, seed: int | None):
    G = group(name) if seed is None else shuffled(group(name), seed)[0]
    return G, list(irredundant_generating_tuples(G.table))


def criterion_2():
    names = corpus_groups(16)
    rng = random.Random(2024)
    checked = positives = 0
    for i, a in enumerate(names):
        for b in names[i:]:
            if group(a).n != group(b).n:
                continue
            G, gs = generating_tuples(a, None)
            H, hs = generating_tuples(b, 1000 + i)
            fg = [canonical_fingerprint(G, g) for g in gs]
            fh = [canonical_fingerprint(H, h) for h in hs]
            total = len(gs) * len(hs)
            if total <= SAMPLE_PAIRS:
                sample = itertools.product(range(len(gs)), range(len(hs)))
            else:
                # half uniform, half drawn from pairs with equal fingerprints so both directions get exercised
                by_fp: dict[bytes, list[int]] = {}
                for j, f in enumerate(fh):
                    by_fp.setdefault(f, []).append(j)
                sample = [(rng.randrange(len(gs)), rng.randrange(len(hs))) for _ in range(SAMPLE_PAIRS // 2)]
                matching = [x for x in range(len(gs)) if fg[x] in by_fp]
                for _ in range(SAMPLE_PAIRS - len(sample)):
                    if not matching:
                        break
                    x = rng.choice(matching)
                    sample.append((x, rng.choice(by_fp[fg[x]])))
            for x, y in sample:
                w = induced_isomorphism(G, gs[x], H, hs[y])
                same = fg[x] == fh[y]
                assert same == (w is not None), f"{a} {gs[x]} vs {b} {hs[y]}: fingerprint equal={same}, witness={w}"
                if w is not None:
                    assert is_isomorphism(w.map, [G.table], [H.table])
                    positives += 1
                checked += 1
    return f"{checked} sequence pairs, {positives} isomorphic"


# 3 ---------------------------------------------------------------------------

def criterion_3():
    names = corpus_groups(16)
    maps = splits = 0
    for k, (a, b) in enumerate(isomorphic_pairs(names)):
        G = group(a)
        H, _ = shuffled(group(b), seed=300 + k)
        res = bidirectional_generator_enumeration(G, H)
        if isinstance(res, CandidateSets):
            A, B = res.a, set(res.b)
            splits += 1
        else:
            assert isinstance(res, IsoDecision) and res.isomorphic, f"{a} vs {b}: fallback said not isomorphic"
            # the fallback fixes one sequence of G and tries every irredundant tuple of that length in H
            g = first_generating_sequence(G)
            A = [g]
            B = {h for h in iter_extensions(H, (), 0, len(g)) if len(h) == len(g)}
        for phi in isomorphisms([G.table], [H.table]):
            maps += 1
            assert any(tuple(phi[x] for x in g) in B for g in A), f"{a} vs {b}: no matched pair for {phi}"
    return f"{maps} isomorphisms checked, {splits} pairs through the split"


# 4 ---------------------------------------------------------------------------

def criterion_4():
    details = []
    for name in ("Z2^3", "Z2^4"):
        G = group(name)
        baseline = sum(1 for _ in irredundant_generating_tuples(G.table))
        res = bidirectional_generator_enumeration(G, G)
        assert isinstance(res, CandidateSets), f"{name}: expected the split, got a fallback"
        measured = len(res.a) + len(res.b)
        bound = 4 * math.sqrt(baseline) * G.n**2
        assert measured <= bound, f"{name}: |A|+|B| = {measured} > {bound:.1f}"
        details.append(f"{name}: |A|+|B|={measured}, baseline={baseline}, sqrt(baseline)={math.sqrt(baseline):.1f}")
    return "; ".join(details)


# 6 ---------------------------------------------------------------------------

def criterion_6():
    names = corpus_groups(16, p_groups_only=True)
    maps = 0
    for k, (a, b) in enumerate(isomorphic_pairs(names)):
        G = group(a)
        H, _ = shuffled(group(b), seed=600 + k)
        t = compute_t(G).t
        A = composition_series_alice(G, t)
        B = {S.chain for S in composition_series_bob(H, t)}
        for phi in isomorphisms([G.table], [H.table]):
            maps += 1
            images = (tuple(ElementSet.of(phi[x] for x in M) for M in S.chain) for S in A)
            assert any(img in B for img in images), f"{a} vs {b}: no matched series for {phi}"
    return f"{maps} isomorphisms checked"


# 7 ---------------------------------------------------------------------------

def criterion_7():
    names = corpus_groups(32, p_groups_only=True)
    checked = 0
    for a, b in isomorphic_pairs(names):
        t = compute_t(group(a)).t
        assert compute_t(group(b)).t == t, f"t({a}) != t({b})"
        for seed in range(50):
            H, _ = shuffled(group(b), seed=700 + seed)
            assert compute_t(H).t == t, f"t changes under relabelling {b} (seed {seed})"
            checked += 1
    return f"{checked} relabelled copies"


# 8 ---------------------------------------------------------------------------

def criterion_8():
    names = corpus_groups(32, p_groups_only=True)
    checked = 0
    for k, name in enumerate(names):
        for G in (group(name), shuffled(group(name), seed=800 + k)[0]):
            t = compute_t(G).t
            emitted = [composition_series(G, 1, 0)] + composition_series_alice(G, t) + composition_series_bob(G, t)
            if G.n <= 16:
                emitted += all_choices(G, 1, math.inf)
            for S in emitted:
                why = check_composition_series(G.table, [set(M) for M in S.chain])
                assert why is None, f"{name}: {why}"
                checked += 1
    return f"{checked} series"


# 9 ---------------------------------------------------------------------------

def criterion_9():
    names = corpus_rings(16)
    assert len(names) >= 8
    compared = 0
    for i, a in enumerate(names):
        for b in names[i:]:
            R = ring(a)
            S = shuffled_ring(ring(b), seed=900 + i)
            if R.n != S.n:
                with pytest.raises(OrderMismatch):
                    is_isomorphic_rings(R, S)
                continue
            want = rings_isomorphic(R.add.table, R.mul, S.add.table, S.mul)
            for plan in DELTAS:
                res = is_isomorphic_rings(R, S, plan)
                assert res.isomorphic == want, f"{a} vs {b} at delta={plan.delta}: got {res.isomorphic}, oracle {want}"
                if res.witness is not None:
                    assert is_ring_isomorphism(R, S, res.witness)
                    assert is_isomorphism(res.witness.map, [R.add.table, R.mul], [S.add.table, S.mul])
                compared += 1
    return f"{compared} decisions over {len(names)} rings"


# 10 --------------------------------------------------------------------------

def criterion_10():
    names = corpus_groups(32, p_groups_only=True)
    compared = 0
    for i, a in enumerate(names):
        for b in names[i:]:
            G = group(a)
            H, _ = shuffled(group(b), seed=1000 + i)
            if G.n != H.n:
                continue
            assert prime_power(G.n) is not None
            via_series = p_group_iso_via_series(G, H)
            direct = is_isomorphic_groups(G, H)
            assert via_series.isomorphic == direct.isomorphic, f"{a} vs {b}: series {via_series.isomorphic}, bidi {direct.isomorphic}"
            if via_series.witness is not None:
                assert is_isomorphism(via_series.witness.map, [G.table], [H.table])
            compared += 1
    return f"{compared} p-group pairs"


CRITERIA = [
    (1, "group decisions match the oracle for every corpus pair of order <= 24, delta in {1, 16, all}", criterion_1),
    (2, "fingerprint equality iff induced isomorphism, corpus groups of order <= 16", criterion_2),
    (3, "split sets contain a matched pair for every isomorphism, order <= 16", criterion_3),
    (4, "|A|+|B| <= 4 sqrt(baseline) n^2 on Z2^3 and Z2^4", criterion_4),
    (5, "decisions independent of delta, peak fingerprints <= 2 delta", criterion_5),
    (6, "Alice/Bob series contain a matched pair for every isomorphism, p-groups of order <= 16", criterion_6),
    (7, "t is invariant under isomorphism, p-groups of order <= 32", criterion_7),
    (8, "every emitted series is a composition series, p-groups of order <= 32", criterion_8),
    (9, "ring decisions match the oracle for every corpus pair of order <= 16", criterion_9),
    (10, "series pipeline agrees with the bidirectional decider, p-groups of order <= 32", criterion_10),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    report(number, title, fn)


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        try:
            report(number, title, fn)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
