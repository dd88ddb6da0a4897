import random
import sys
from functools import lru_cache

import pytest

from bidiso.algebra import CayleyTable, prime_power, relabel
from bidiso.corpus import GROUP_CORPUS, P_GROUP_CORPUS_32, RING_CORPUS, make_group, make_ring
from bidiso.rings import RingTable, validate_ring


@lru_cache(maxsize=None)
def group(name: str) -> CayleyTable:
    specs = {**GROUP_CORPUS, **P_GROUP_CORPUS_32}
    return make_group(specs.get(name, name))


@lru_cache(maxsize=None)
def ring(name: str) -> RingTable:
    return make_ring(RING_CORPUS.get(name, name))


def shuffled(G: CayleyTable, seed: int = 0) -> tuple[CayleyTable, list[int]]:
    perm = list(range(G.n))
    random.Random(seed).shuffle(perm)
    return relabel(G, perm), perm


def shuffled_ring(R: RingTable, seed: int = 0) -> RingTable:
    n = R.n
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    inv = [0] * n
    for x, y in enumerate(perm):
        inv[y] = x
    add = [[perm[R.add.table[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    mul = [[perm[R.mul[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    return validate_ring(n, add, mul)


def corpus_groups(max_order: int, p_groups_only: bool = False) -> list[str]:
    names = list(dict.fromkeys([*GROUP_CORPUS, *P_GROUP_CORPUS_32]))
    out = []
    for name in names:
        G = group(name)
        if G.n <= max_order and (not p_groups_only or prime_power(G.n) is not None):
            out.append(name)
    return out


def corpus_rings(max_order: int) -> list[str]:
    return [name for name in RING_CORPUS if ring(name).n <= max_order]


@pytest.fixture
def z2sq():
    return group("Z2^2")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
