"""Finite groups given by explicit multiplication tables.

Elements are the integers ``0..n-1``.  Subsets of a group are
:class:`ElementSet` bitsets backed by Python ints, which keeps subgroup
membership tests and intersections cheap in the closure loops that dominate
every search in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    EntryOutOfRange,
    InvalidOrder,
    MissingInverse,
    NoIdentity,
    NotAssociative,
    NotASubgroup,
    NotNormal,
    TableShapeError,
)

__all__ = [
    "ElementSet",
    "CayleyTable",
    "QuotientResult",
    "validate_cayley_table",
    "closure",
    "element_order",
    "smallest_prime_divisor",
    "prime_power",
    "has_generating_sequence_of_size",
    "normal_closure",
    "is_subgroup",
    "is_normal",
    "quotient",
    "subgroup_table",
    "subgroup_generators",
]


@dataclass(frozen=True, order=False)
class ElementSet:
    """Immutable set of element indices stored as an int bitmask."""

    mask: int = 0
    size: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "size", self.mask.bit_count())

    @classmethod
    def of(cls, elements: Iterable[int]) -> ElementSet:
        mask = 0
        for x in elements:
            mask |= 1 << x
        return cls(mask)

    def __contains__(self, x: int) -> bool:
        return (self.mask >> x) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.size

    def __and__(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.mask & other.mask)

    def __or__(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.mask | other.mask)

    def __sub__(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.mask & ~other.mask)

    def __le__(self, other: ElementSet) -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: ElementSet) -> bool:
        return self <= other and self.mask != other.mask

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def sort_key(self) -> tuple[int, ...]:
        return self.members()

    def __repr__(self):
        return f"ElementSet({list(self)})"


@dataclass(frozen=True, eq=False)
class CayleyTable:
    """A validated finite group.

    Instances compare and hash by identity; use :meth:`same_table` for
    structural equality.  Build them with :func:`validate_cayley_table`.
    """

    n: int
    identity: int
    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64).reshape(self.n, self.n)

    @cached_property
    def everything(self) -> ElementSet:
        return ElementSet((1 << self.n) - 1)

    @cached_property
    def trivial(self) -> ElementSet:
        return ElementSet(1 << self.identity)

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.array == self.array.T).all())

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def conj(self, g: int, x: int) -> int:
        """Return g x g^-1."""
        t = self.table
        return t[t[g][x]][self.inverse[g]]

    def same_table(self, other: CayleyTable) -> bool:
        return self.n == other.n and self.table == other.table

    def __repr__(self):
        return f"CayleyTable(n={self.n}, identity={self.identity})"


@dataclass(frozen=True, eq=False)
class QuotientResult:
    quotient: CayleyTable
    projection: tuple[int, ...]
    cosets: tuple[ElementSet, ...]

    def preimage(self, subset: Iterable[int]) -> ElementSet:
        mask = 0
        for c in subset:
            mask |= self.cosets[c].mask
        return ElementSet(mask)


def _first_nonassociative(arr: np.ndarray) -> tuple[int, int, int] | None:
    # row a: lhs[b, c] = (a*b)*c = arr[arr[a, b], c];  rhs[b, c] = a*(b*c) = arr[a, arr[b, c]]
    for a in range(arr.shape[0]):
        lhs = arr[arr[a]]
        rhs = arr[a][arr]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            b, c = bad[0]
            return a, int(b), int(c)
    return None


def validate_cayley_table(n: int, raw: Sequence[Sequence[int]]) -> CayleyTable:
    """Check the group axioms on ``raw`` and return the validated table.

    The identity is located rather than assumed to be 0.  Each failure names
    the first offending element or triple in index order.
    """
    if n < 1:
        raise InvalidOrder(f"group order must be positive, got {n}")
    if len(raw) != n or any(len(row) != n for row in raw):
        raise TableShapeError(f"table is not {n}x{n}")
    rows = tuple(tuple(int(v) for v in row) for row in raw)
    for a, row in enumerate(rows):
        for b, v in enumerate(row):
            if not 0 <= v < n:
                raise EntryOutOfRange(a, b, v, n)

    everyone = tuple(range(n))
    identity = None
    for e in range(n):
        if rows[e] == everyone and all(rows[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity()

    inverse = []
    for x in range(n):
        right = [y for y in range(n) if rows[x][y] == identity]
        if len(right) != 1 or rows[right[0]][x] != identity:
            raise MissingInverse(x)
        inverse.append(right[0])

    bad = _first_nonassociative(np.asarray(rows, dtype=np.int64).reshape(n, n))
    if bad is not None:
        raise NotAssociative(*bad)
    return CayleyTable(n, identity, rows, tuple(inverse))


def _closure_from(G: CayleyTable, gens: Sequence[int]) -> ElementSet:
    e = G.identity
    gens = [g for g in dict.fromkeys(gens) if g != e]
    mask = 1 << e
    found = [e]
    rows = G.table
    for x in found:
        row = rows[x]
        for s in gens:
            y = row[s]
            if not (mask >> y) & 1:
                mask |= 1 << y
                found.append(y)
    return ElementSet(mask)


def closure(G: CayleyTable, seed: Iterable[int]) -> ElementSet:
    """Subgroup generated by ``seed``.

    Worklist search from the identity, right-multiplying by the seed
    elements.  In a finite group this is the generated subgroup.
    """
    return _closure_from(G, list(seed))


def subgroup_generators(G: CayleyTable, S: ElementSet) -> tuple[int, ...]:
    """Greedy irredundant generators of a subgroup, smallest index first."""
    gens: list[int] = []
    span = G.trivial
    for x in S:
        if x not in span:
            gens.append(x)
            span = _closure_from(G, gens)
            if span == S:
                break
    return tuple(gens)


def element_order(G: CayleyTable, x: int) -> int:
    k, y = 1, x
    row_mul = G.table
    while y != G.identity:
        y = row_mul[y][x]
        k += 1
    return k


def smallest_prime_divisor(n: int) -> int:
    if n < 2:
        raise InvalidOrder(f"order {n} has no prime divisor")
    if n % 2 == 0:
        return 2
    q = 3
    while q * q <= n:
        if n % q == 0:
            return q
        q += 2
    return n


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``n == p**k`` and ``k >= 1``, else None."""
    if n < 2:
        return None
    p = smallest_prime_divisor(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def has_generating_sequence_of_size(G: CayleyTable, d: int) -> tuple[int, ...] | None:
    """Find an irredundant generating sequence of length at most ``d``.

    Searches irredundant prefixes with strictly increasing element indices;
    any generating set sorted ascending contains such a subsequence, so the
    restriction loses nothing.
    """
    if d < 0:
        return None
    if G.n == 1:
        return ()
    full = G.everything

    def search(prefix: tuple[int, ...], span: ElementSet, start: int):
        if len(prefix) == d:
            return None
        for g in range(start, G.n):
            if g in span:
                continue
            seq = prefix + (g,)
            new_span = _closure_from(G, seq)
            if new_span == full:
                return seq
            found = search(seq, new_span, g + 1)
            if found is not None:
                return found
        return None

    return search((), G.trivial, 0)


def normal_closure(G: CayleyTable, x: int) -> ElementSet:
    """Smallest normal subgroup containing ``x``: the span of its conjugacy class."""
    cls = {G.conj(g, x) for g in range(G.n)}
    return _closure_from(G, sorted(cls))


def is_subgroup(G: CayleyTable, S: ElementSet) -> bool:
    if G.identity not in S:
        return False
    members = S.members()
    rows = G.table
    return all(rows[a][b] in S for a in members for b in members)


def is_normal(G: CayleyTable, S: ElementSet) -> bool:
    if not is_subgroup(G, S):
        raise NotASubgroup(f"{S!r} is not closed under multiplication")
    members = S.members()
    return all(G.conj(g, s) in S for g in range(G.n) for s in members)


def quotient(G: CayleyTable, N: ElementSet) -> QuotientResult:
    if not is_normal(G, N):
        raise NotNormal(f"{N!r} is not normal")
    rows = G.table
    members = N.members()
    projection = [-1] * G.n
    reps: list[int] = []
    cosets: list[ElementSet] = []
    for x in range(G.n):
        if projection[x] >= 0:
            continue
        c = len(reps)
        coset = [rows[x][m] for m in members]
        for y in coset:
            projection[y] = c
        reps.append(x)
        cosets.append(ElementSet.of(coset))
    m = len(reps)
    table = tuple(tuple(projection[rows[a][b]] for b in reps) for a in reps)
    inverse = tuple(projection[G.inverse[a]] for a in reps)
    Q = CayleyTable(m, projection[G.identity], table, inverse)
    return QuotientResult(Q, tuple(projection), tuple(cosets))


def subgroup_table(G: CayleyTable, S: ElementSet) -> tuple[CayleyTable, tuple[int, ...]]:
    """Re-index a subgroup as a group in its own right.

    Returns the subgroup table and the embedding (new index -> old index).
    """
    if not is_subgroup(G, S):
        raise NotASubgroup(f"{S!r} is not closed under multiplication")
    embedding = S.members()
    pos = {x: i for i, x in enumerate(embedding)}
    rows = G.table
    table = tuple(tuple(pos[rows[a][b]] for b in embedding) for a in embedding)
    inverse = tuple(pos[G.inverse[a]] for a in embedding)
    return CayleyTable(len(embedding), pos[G.identity], table, inverse), embedding


def conjugacy_classes(G: CayleyTable) -> list[ElementSet]:
    seen = 0
    classes = []
    for x in range(G.n):
        if (seen >> x) & 1:
            continue
        cls = ElementSet.of(G.conj(g, x) for g in range(G.n))
        seen |= cls.mask
        classes.append(cls)
    return classes


def order_profile(G: CayleyTable) -> tuple[int, ...]:
    """Sorted element orders; an isomorphism invariant."""
    return tuple(sorted(element_order(G, x) for x in range(G.n)))


def relabel(G: CayleyTable, perm: Sequence[int]) -> CayleyTable:
    """Copy of G with element x renamed perm[x]."""
    n = G.n
    inv = [0] * n
    for x, y in enumerate(perm):
        inv[y] = x
    table = tuple(tuple(perm[G.table[inv[a]][inv[b]]] for b in range(n)) for a in range(n))
    inverse = tuple(perm[G.inverse[inv[a]]] for a in range(n))
    return CayleyTable(n, perm[G.identity], table, inverse)

