"""Group and ring constructors, the constructor-expression grammar, and table files.

Constructor expressions look like ``cyclic 4``, ``elementary 2 3``,
``product(dihedral 4, cyclic 2)`` or ``semidirect(4 2; 2; 1 1, 0 1)``.
Ring expressions use their own names (``zmod 4``, ``gf 2 3``,
``rproduct(zmod 2, zmod 3)``, ...).  Every constructor returns a table that
has been re-validated from scratch.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Hashable, Sequence

from .algebra import CayleyTable, validate_cayley_table
from .errors import SpecError, TableError, TableSyntaxError, TooLarge, UnknownSpec, ValidationError
from .rings import RingTable, validate_ring

DEFAULT_MAX_ORDER = 256

__all__ = [
    "max_order",
    "make_group",
    "make_ring",
    "make_structure",
    "parse_table_file",
    "read_table_text",
    "format_group",
    "format_ring",
    "write_table_file",
    "TableFile",
    "GROUP_CORPUS",
    "RING_CORPUS",
    "ORDER16_GROUPS",
    "P_GROUP_CORPUS_32",
]


def max_order() -> int:
    return int(os.environ.get("ISO_MAX_ORDER", DEFAULT_MAX_ORDER))


def table_from_elements(elems: Sequence[Hashable], mul: Callable) -> list[list[int]]:
    index = {x: i for i, x in enumerate(elems)}
    return [[index[mul(a, b)] for b in elems] for a in elems]


def _group(elems, mul) -> CayleyTable:
    return validate_cayley_table(len(elems), table_from_elements(elems, mul))


# --- groups ---------------------------------------------------------------

def cyclic(k: int) -> CayleyTable:
    return _group(list(range(k)), lambda a, b: (a + b) % k)


def elementary(p: int, k: int) -> CayleyTable:
    elems = list(itertools.product(range(p), repeat=k))
    return _group(elems, lambda a, b: tuple((x + y) % p for x, y in zip(a, b)))


def dihedral(k: int) -> CayleyTable:
    """Symmetries of a regular k-gon, order 2k; ``(r, s)`` is rotation r then reflection s."""
    elems = [(r, s) for s in range(2) for r in range(k)]

    def mul(a, b):
        r1, s1 = a
        r2, s2 = b
        return ((r1 + (-r2 if s1 else r2)) % k, (s1 + s2) % 2)

    return _group(elems, mul)


def dicyclic(k: int) -> CayleyTable:
    """Order 4k: ``<a, x | a^2k = 1, x^2 = a^k, x a x^-1 = a^-1>``; k = 2 is Q8."""
    m = 2 * k
    elems = [(i, j) for j in range(2) for i in range(m)]

    def mul(a, b):
        i1, j1 = a
        i2, j2 = b
        if j1 == 0:
            return ((i1 + i2) % m, j2)
        if j2 == 0:
            return ((i1 - i2) % m, 1)
        return ((i1 - i2 + k) % m, 0)

    return _group(elems, mul)


def _qmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def quaternion8() -> CayleyTable:
    """Unit quaternions +-1, +-i, +-j, +-k under Hamilton's product; -1 is element 1."""
    elems = []
    for axis in range(4):
        for sign in (1, -1):
            v = [0, 0, 0, 0]
            v[axis] = sign
            elems.append(tuple(v))
    return _group(elems, _qmul)


def _compose(a, b):
    # (a b)(i) = a(b(i))
    return tuple(a[i] for i in b)


def _is_even(perm) -> bool:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return inversions % 2 == 0


def symmetric(k: int) -> CayleyTable:
    return _group(list(itertools.permutations(range(k))), _compose)


def alternating(k: int) -> CayleyTable:
    return _group([p for p in itertools.permutations(range(k)) if _is_even(p)], _compose)


def _matmul(a, b, p):
    k = len(a)
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k)) % p for j in range(k)) for i in range(k))


def heisenberg(p: int) -> CayleyTable:
    """Upper unitriangular 3x3 matrices over Z_p (order p^3)."""
    elems = [((1, x, z), (0, 1, y), (0, 0, 1)) for x in range(p) for y in range(p) for z in range(p)]
    return _group(elems, lambda a, b: _matmul(a, b, p))


def sl2(p: int) -> CayleyTable:
    elems = [((a, b), (c, d)) for a, b, c, d in itertools.product(range(p), repeat=4) if (a * d - b * c) % p == 1]
    return _group(elems, lambda x, y: _matmul(x, y, p))


def product(G: CayleyTable, H: CayleyTable) -> CayleyTable:
    elems = [(a, b) for a in range(G.n) for b in range(H.n)]
    return _group(elems, lambda x, y: (G.table[x[0]][y[0]], H.table[x[1]][y[1]]))


def semidirect(moduli: Sequence[int], n: int, matrix: Sequence[Sequence[int]]) -> CayleyTable:
    """``(Z_m1 x ... x Z_mr) x| Z_n`` where the generator of Z_n sends basis
    vector ``e_i`` to ``sum_j matrix[i][j] e_j``.

    An ill-formed action shows up as a failed group axiom.
    """
    r = len(moduli)
    if len(matrix) != r or any(len(row) != r for row in matrix):
        raise SpecError("action matrix must be r x r for r moduli")

    def act(v, times):
        for _ in range(times):
            v = tuple(sum(v[i] * matrix[i][j] for i in range(r)) % moduli[j] for j in range(r))
        return v

    vectors = list(itertools.product(*(range(m) for m in moduli)))
    elems = [(v, c) for c in range(n) for v in vectors]

    def mul(a, b):
        (v1, c1), (v2, c2) = a, b
        w = act(v2, c1)
        return (tuple((x + y) % m for x, y, m in zip(v1, w, moduli)), (c1 + c2) % n)

    return _group(elems, mul)


# --- rings ----------------------------------------------------------------

def _ring(elems, add, mul) -> RingTable:
    return validate_ring(len(elems), table_from_elements(elems, add), table_from_elements(elems, mul))


def zmod(k: int) -> RingTable:
    return _ring(list(range(k)), lambda a, b: (a + b) % k, lambda a, b: (a * b) % k)


def zero_ring(k: int) -> RingTable:
    """Z_k with identically zero multiplication (non-unital)."""
    return _ring(list(range(k)), lambda a, b: (a + b) % k, lambda a, b: 0)


def _polymulmod(a, b, modulus, p):
    deg = len(modulus) - 1
    prod = [0] * (2 * deg)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            for t in range(deg + 1):
                prod[i - deg + t] = (prod[i - deg + t] - c * modulus[t]) % p
    return tuple(prod[:deg])


def poly_quotient(p: int, modulus: Sequence[int]) -> RingTable:
    """Z_p[x] / (f) for monic f given by coefficients, lowest degree first."""
    modulus = tuple(c % p for c in modulus)
    if len(modulus) < 2 or modulus[-1] != 1:
        raise SpecError("modulus must be monic of degree >= 1")
    deg = len(modulus) - 1
    elems = list(itertools.product(range(p), repeat=deg))
    return _ring(
        elems,
        lambda a, b: tuple((x + y) % p for x, y in zip(a, b)),
        lambda a, b: _polymulmod(a, b, modulus, p),
    )


def _irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible polynomial of degree k over Z_p."""
    for low in itertools.product(range(p), repeat=k):
        f = tuple(low) + (1,)
        if f[0] == 0 and k > 1:
            continue
        has_factor = False
        for dg in range(1, k // 2 + 1):
            for lowg in itertools.product(range(p), repeat=dg):
                g = tuple(lowg) + (1,)
                rem = list(f)
                for i in range(k, dg - 1, -1):
                    c = rem[i]
                    if c:
                        for t in range(dg + 1):
                            rem[i - dg + t] = (rem[i - dg + t] - c * g[t]) % p
                if not any(rem[:dg]):
                    has_factor = True
                    break
            if has_factor:
                break
        if not has_factor:
            return f
    raise SpecError(f"no irreducible polynomial of degree {k} over Z_{p}")


def galois_field(p: int, k: int) -> RingTable:
    return poly_quotient(p, _irreducible(p, k))


def matrix_ring(p: int, k: int, upper: bool = False) -> RingTable:
    cells = [(i, j) for i in range(k) for j in range(k) if not upper or i <= j]
    elems = []
    for vals in itertools.product(range(p), repeat=len(cells)):
        m = [[0] * k for _ in range(k)]
        for (i, j), v in zip(cells, vals):
            m[i][j] = v
        elems.append(tuple(map(tuple, m)))
    return _ring(
        elems,
        lambda a, b: tuple(tuple((x + y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b)),
        lambda a, b: _matmul(a, b, p),
    )


def ring_product(R: RingTable, S: RingTable) -> RingTable:
    elems = [(a, b) for a in range(R.n) for b in range(S.n)]
    return _ring(
        elems,
        lambda x, y: (R.add.table[x[0]][y[0]], S.add.table[x[1]][y[1]]),
        lambda x, y: (R.mul[x[0]][y[0]], S.mul[x[1]][y[1]]),
    )


# --- expression grammar ---------------------------------------------------

@dataclass
class _Node:
    name: str
    ints: list[int]
    children: list["_Node"]
    groups: list[list[int]]  # semicolon-separated integer groups, for semidirect


_GROUP_NAMES = {"cyclic", "elementary", "dihedral", "quaternion8", "dicyclic", "symmetric", "alternating",
                "heisenberg", "sl2", "product", "semidirect"}
_RING_NAMES = {"zmod", "zero", "gf", "poly", "matrix", "upper", "rproduct"}


def _split_top(s: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse(text: str) -> _Node:
    text = text.strip()
    m = re.fullmatch(r"([a-z][a-z0-9_]*)\s*\((.*)\)", text, flags=re.S)
    if m:
        name, inner = m.group(1), m.group(2)
        if name == "semidirect":
            fields = [f.strip() for f in inner.split(";")]
            if len(fields) != 3:
                raise SpecError("semidirect needs 'moduli; n; matrix rows'")
            try:
                moduli = [int(x) for x in fields[0].split()]
                n = int(fields[1])
                rows = [[int(x) for x in row.split()] for row in fields[2].split(",")]
            except ValueError as exc:
                raise SpecError(f"bad semidirect arguments: {inner!r}") from exc
            return _Node(name, [n], [], [moduli] + rows)
        children = [_parse(part) for part in _split_top(inner, ",")]
        return _Node(name, [], children, [])
    tokens = text.split()
    if not tokens:
        raise SpecError("empty constructor expression")
    try:
        ints = [int(t) for t in tokens[1:]]
    except ValueError as exc:
        raise SpecError(f"bad arguments in {text!r}") from exc
    return _Node(tokens[0], ints, [], [])


def _arity(node: _Node, k: int):
    if len(node.ints) != k:
        raise SpecError(f"{node.name} takes {k} integer argument(s)")
    if any(v < 1 for v in node.ints):
        raise SpecError(f"{node.name} arguments must be positive")
    return node.ints


def _order(node: _Node) -> int:
    """Order of the structure an expression denotes, computed without building it."""
    name = node.name
    if name in ("product", "rproduct"):
        if len(node.children) != 2:
            raise SpecError(f"{name} takes two arguments")
        return _order(node.children[0]) * _order(node.children[1])
    if name == "semidirect":
        return math.prod(node.groups[0]) * node.ints[0]
    if name == "quaternion8":
        _arity(node, 0)
        return 8
    if name in ("cyclic", "zmod", "zero"):
        return _arity(node, 1)[0]
    if name == "dihedral":
        return 2 * _arity(node, 1)[0]
    if name == "dicyclic":
        return 4 * _arity(node, 1)[0]
    if name in ("symmetric", "alternating"):
        k = _arity(node, 1)[0]
        return math.factorial(k) // (2 if name == "alternating" and k > 1 else 1)
    if name == "heisenberg":
        return _arity(node, 1)[0] ** 3
    if name == "sl2":
        p = _arity(node, 1)[0]
        return p * (p * p - 1)
    if name in ("elementary", "gf"):
        p, k = _arity(node, 2)
        return p**k
    if name == "poly":
        if len(node.ints) < 3:
            raise SpecError("poly takes p followed by the monic modulus coefficients")
        return node.ints[0] ** (len(node.ints) - 2)
    if name == "matrix":
        p, k = _arity(node, 2)
        return p ** (k * k)
    if name == "upper":
        p, k = _arity(node, 2)
        return p ** (k * (k + 1) // 2)
    raise UnknownSpec(f"unknown constructor {name!r}")


def _build(node: _Node):
    name, a = node.name, node.ints
    builders = {
        "cyclic": lambda: cyclic(a[0]),
        "elementary": lambda: elementary(a[0], a[1]),
        "dihedral": lambda: dihedral(a[0]),
        "dicyclic": lambda: dicyclic(a[0]),
        "quaternion8": quaternion8,
        "symmetric": lambda: symmetric(a[0]),
        "alternating": lambda: alternating(a[0]),
        "heisenberg": lambda: heisenberg(a[0]),
        "sl2": lambda: sl2(a[0]),
        "semidirect": lambda: semidirect(node.groups[0], a[0], node.groups[1:]),
        "product": lambda: product(_build(node.children[0]), _build(node.children[1])),
        "zmod": lambda: zmod(a[0]),
        "zero": lambda: zero_ring(a[0]),
        "gf": lambda: galois_field(a[0], a[1]),
        "poly": lambda: poly_quotient(a[0], a[1:]),
        "matrix": lambda: matrix_ring(a[0], a[1]),
        "upper": lambda: matrix_ring(a[0], a[1], upper=True),
        "rproduct": lambda: ring_product(_build(node.children[0]), _build(node.children[1])),
    }
    return builders[name]()


def _kinds(node: _Node) -> set[str]:
    kind = "group" if node.name in _GROUP_NAMES else "ring" if node.name in _RING_NAMES else "?"
    out = {kind}
    for c in node.children:
        out |= _kinds(c)
    return out


def make_structure(spec: str) -> CayleyTable | RingTable:
    """Build a group or a ring from a constructor expression, refusing orders above the cap."""
    node = _parse(spec)
    kinds = _kinds(node)
    if "?" in kinds:
        _order(node)  # raises UnknownSpec naming the offending constructor
    if len(kinds) != 1:
        raise SpecError(f"{spec!r} mixes group and ring constructors")
    n = _order(node)
    if n > max_order():
        raise TooLarge(f"{spec!r} has order {n}, above the cap {max_order()} (set ISO_MAX_ORDER to raise it)")
    if n < 1:
        raise SpecError(f"{spec!r} has no elements")
    return _build(node)


def make_group(spec: str) -> CayleyTable:
    G = make_structure(spec)
    if not isinstance(G, CayleyTable):
        raise SpecError(f"{spec!r} is a ring expression")
    return G


def make_ring(spec: str) -> RingTable:
    R = make_structure(spec)
    if not isinstance(R, RingTable):
        raise SpecError(f"{spec!r} is a group expression")
    return R


# --- table files ----------------------------------------------------------

@dataclass
class TableFile:
    kind: str
    n: int
    tables: list[list[list[int]]]
    structure: CayleyTable | RingTable


def _rows(table) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in table)


def format_group(G: CayleyTable) -> str:
    return f"group {G.n}\n{_rows(G.table)}\n"


def format_ring(R: RingTable) -> str:
    return f"ring {R.n}\n{_rows(R.add.table)}\n\n{_rows(R.mul)}\n"


def write_table_file(path, structure: CayleyTable | RingTable) -> None:
    text = format_group(structure) if isinstance(structure, CayleyTable) else format_ring(structure)
    Path(path).write_text(text)


def _read_rows(lines, start, n, what):
    rows = []
    i = start
    while len(rows) < n:
        if i >= len(lines):
            raise TableSyntaxError(i + 1, f"expected {n} rows of {what}, found {len(rows)}")
        lineno, text = lines[i]
        if not text:
            raise TableSyntaxError(lineno, f"expected {n} rows of {what}, found {len(rows)}")
        try:
            row = [int(t) for t in text.split()]
        except ValueError:
            raise TableSyntaxError(lineno, f"non-integer entry in {text!r}") from None
        if len(row) != n:
            raise TableSyntaxError(lineno, f"expected {n} entries, found {len(row)}")
        rows.append(row)
        i += 1
    return rows, i


def read_table_text(text: str) -> TableFile:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("#"):
            continue
        lines.append((lineno, s))
    while lines and not lines[0][1]:
        lines.pop(0)
    if not lines:
        raise TableSyntaxError(1, "empty file")
    lineno, header = lines[0]
    m = re.fullmatch(r"(group|ring)\s+(\d+)", header)
    if not m:
        raise TableSyntaxError(lineno, f"expected 'group <n>' or 'ring <n>', got {header!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise TableSyntaxError(lineno, "order must be positive")
    if n > max_order():
        raise TooLarge(f"order {n} above the cap {max_order()}")
    first, i = _read_rows(lines, 1, n, "the table" if kind == "group" else "the addition table")
    tables = [first]
    if kind == "ring":
        if i >= len(lines) or lines[i][1]:
            where = lines[i][0] if i < len(lines) else (lines[-1][0] + 1)
            raise TableSyntaxError(where, "expected a blank line between addition and multiplication tables")
        while i < len(lines) and not lines[i][1]:
            i += 1
        second, i = _read_rows(lines, i, n, "the multiplication table")
        tables.append(second)
    for lineno, rest in lines[i:]:
        if rest:
            raise TableSyntaxError(lineno, "unexpected trailing content")
    try:
        structure = validate_cayley_table(n, first) if kind == "group" else validate_ring(n, *tables)
    except TableError as exc:
        raise ValidationError(exc) from exc
    return TableFile(kind, n, tables, structure)


def parse_table_file(path) -> TableFile:
    return read_table_text(Path(path).read_text())


# --- the standard corpus --------------------------------------------------

# all fourteen groups of order 16, up to isomorphism
ORDER16_GROUPS = {
    "Z16": "cyclic 16",
    "Z8xZ2": "product(cyclic 8, cyclic 2)",
    "Z4xZ4": "product(cyclic 4, cyclic 4)",
    "Z4xZ2^2": "product(cyclic 4, elementary 2 2)",
    "Z2^4": "elementary 2 4",
    "D8": "dihedral 8",
    "Q16": "dicyclic 4",
    "SD16": "semidirect(8; 2; 3)",
    "M16": "semidirect(8; 2; 5)",
    "Z4:Z4": "semidirect(4; 4; 3)",
    "D4xZ2": "product(dihedral 4, cyclic 2)",
    "Q8xZ2": "product(quaternion8, cyclic 2)",
    "Pauli": "semidirect(4 2; 2; 1 0, 2 1)",
    "(Z4xZ2):Z2": "semidirect(4 2; 2; 1 1, 0 1)",
}

GROUP_CORPUS = {
    "Z2": "cyclic 2",
    "Z3": "cyclic 3",
    "Z4": "cyclic 4",
    "Z2^2": "elementary 2 2",
    "Z5": "cyclic 5",
    "Z6": "cyclic 6",
    "Z2xZ3": "product(cyclic 2, cyclic 3)",
    "S3": "symmetric 3",
    "D3": "dihedral 3",
    "Z7": "cyclic 7",
    "Z8": "cyclic 8",
    "Z2xZ4": "product(cyclic 2, cyclic 4)",
    "Z2^3": "elementary 2 3",
    "D4": "dihedral 4",
    "Q8": "quaternion8",
    "Dic2": "dicyclic 2",
    "Heis2": "heisenberg 2",
    "Z9": "cyclic 9",
    "Z3^2": "elementary 3 2",
    "D5": "dihedral 5",
    "Z12": "cyclic 12",
    "Z2xZ6": "product(cyclic 2, cyclic 6)",
    "A4": "alternating 4",
    "D6": "dihedral 6",
    "Dic3": "dicyclic 3",
    **ORDER16_GROUPS,
    "Z18": "cyclic 18",
    "Z3xZ6": "product(cyclic 3, cyclic 6)",
    "D9": "dihedral 9",
    "S3xZ3": "product(symmetric 3, cyclic 3)",
    "Z24": "cyclic 24",
    "S4": "symmetric 4",
    "SL(2,3)": "sl2 3",
    "Z2^2xZ6": "product(elementary 2 2, cyclic 6)",
    "Q8xZ3": "product(quaternion8, cyclic 3)",
    "A4xZ2": "product(alternating 4, cyclic 2)",
    "D12": "dihedral 12",
    "Z3:Z8": "semidirect(3; 8; 2)",
}

P_GROUP_CORPUS_32 = {
    "Z32": "cyclic 32",
    "Z2^5": "elementary 2 5",
    "Z4xZ2^3": "product(cyclic 4, elementary 2 3)",
    "Z8xZ4": "product(cyclic 8, cyclic 4)",
    "D16": "dihedral 16",
    "Q32": "dicyclic 8",
    "D4xZ2^2": "product(dihedral 4, elementary 2 2)",
    "Q8xZ4": "product(quaternion8, cyclic 4)",
    "D4xZ4": "product(dihedral 4, cyclic 4)",
    "Z27": "cyclic 27",
    "Z3^3": "elementary 3 3",
    "Z9xZ3": "product(cyclic 9, cyclic 3)",
    "Heis3": "heisenberg 3",
}

RING_CORPUS = {
    "Z2": "zmod 2",
    "zero2": "zero 2",
    "Z3": "zmod 3",
    "Z4": "zmod 4",
    "zero4": "zero 4",
    "F4": "gf 2 2",
    "F2[x]/x^2": "poly 2 0 0 1",
    "Z2xZ2": "rproduct(zmod 2, zmod 2)",
    "Z6": "zmod 6",
    "Z2xZ3": "rproduct(zmod 2, zmod 3)",
    "Z8": "zmod 8",
    "F8": "gf 2 3",
    "F2[x]/x^3": "poly 2 0 0 0 1",
    "UT2(F2)": "upper 2 2",
    "Z2xF4": "rproduct(zmod 2, gf 2 2)",
    "Z2^3": "rproduct(zmod 2, rproduct(zmod 2, zmod 2))",
    "Z9": "zmod 9",
    "F9": "gf 3 2",
    "Z3xZ3": "rproduct(zmod 3, zmod 3)",
    "F4xF4": "rproduct(gf 2 2, gf 2 2)",
    "M2(F2)": "matrix 2 2",
    "F16": "gf 2 4",
    "F2[x]/x^4": "poly 2 0 0 0 0 1",
}
