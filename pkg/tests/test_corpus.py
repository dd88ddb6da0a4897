import pytest

from bidiso.algebra import element_order
from bidiso.corpus import (
    GROUP_CORPUS,
    ORDER16_GROUPS,
    RING_CORPUS,
    format_group,
    format_ring,
    make_group,
    make_ring,
    make_structure,
    parse_table_file,
    read_table_text,
    write_table_file,
)
from bidiso.errors import NotDistributive, SpecError, TableSyntaxError, TooLarge, UnknownSpec, ValidationError
from bidiso.groupiso import is_isomorphic_groups
from conftest import group, ring
from oracles import groups_isomorphic, naive_is_group, naive_is_ring, rings_isomorphic


class TestConstructors:
    def test_cyclic(self):
        G = make_group("cyclic 4")
        assert G.table == tuple(tuple((a + b) % 4 for b in range(4)) for a in range(4))

    def test_product_cyclic(self):
        assert is_isomorphic_groups(make_group("product(cyclic 2, cyclic 3)"), make_group("cyclic 6")).isomorphic

    def test_heisenberg3(self):
        G = make_group("heisenberg 3")
        assert G.n == 27 and not G.is_abelian
        assert naive_is_group(G.table)
        assert {element_order(G, x) for x in range(G.n)} == {1, 3}

    @pytest.mark.parametrize(
        "spec,n",
        [("dihedral 5", 10), ("dicyclic 3", 12), ("quaternion8", 8), ("symmetric 4", 24), ("alternating 4", 12),
         ("sl2 3", 24), ("elementary 3 2", 9), ("semidirect(8; 2; 3)", 16)],
    )
    def test_orders_and_axioms(self, spec, n):
        G = make_group(spec)
        assert G.n == n and naive_is_group(G.table)

    def test_quaternion_matches_dicyclic(self):
        assert groups_isomorphic(group("quaternion8").table, group("dicyclic 2").table)
        Q8 = group("Q8")
        assert sorted(element_order(Q8, x) for x in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]

    def test_order16_list(self):
        assert len(ORDER16_GROUPS) == 14
        assert all(group(name).n == 16 for name in ORDER16_GROUPS)

    def test_rings(self):
        F8 = make_ring("gf 2 3")
        assert naive_is_ring(F8.add.table, F8.mul)
        assert rings_isomorphic(ring("F4").add.table, ring("F4").mul,
                                make_ring("poly 2 1 1 1").add.table, make_ring("poly 2 1 1 1").mul)
        U = make_ring("upper 2 2")
        assert any(U.mul[a][b] != U.mul[b][a] for a in range(8) for b in range(8))
        Z = make_ring("zero 3")
        assert all(v == Z.zero for row in Z.mul for v in row)

    def test_corpus_sizes(self):
        assert len({group(n).n for n in GROUP_CORPUS}) >= 10
        assert sum(group(n).n <= 24 for n in GROUP_CORPUS) >= 20
        assert sum(ring(n).n <= 16 for n in RING_CORPUS) >= 8


class TestSpecErrors:
    def test_unknown(self):
        with pytest.raises(UnknownSpec):
            make_group("frobenius 5")
        with pytest.raises(UnknownSpec):
            make_group("product(cyclic 2, nope 3)")

    def test_malformed(self):
        with pytest.raises(SpecError):
            make_group("cyclic")
        with pytest.raises(SpecError):
            make_group("cyclic x")
        with pytest.raises(SpecError):
            make_group("zmod 4")
        with pytest.raises(SpecError):
            make_ring("cyclic 4")
        with pytest.raises(SpecError):
            make_structure("product(cyclic 2, zmod 2)")

    def test_too_large(self, monkeypatch):
        with pytest.raises(TooLarge):
            make_group("cyclic 100000")
        with pytest.raises(TooLarge):
            make_group("symmetric 7")
        monkeypatch.setenv("ISO_MAX_ORDER", "8")
        with pytest.raises(TooLarge):
            make_group("cyclic 9")
        assert make_group("cyclic 8").n == 8


class TestFiles:
    def test_z3(self):
        tf = read_table_text("# a comment\ngroup 3\n0 1 2\n1 2 0\n2 0 1\n")
        assert tf.kind == "group" and tf.n == 3 and tf.structure.identity == 0

    def test_short(self):
        with pytest.raises(TableSyntaxError) as e:
            read_table_text("group 3\n0 1 2\n1 2 0\n")
        assert e.value.line >= 3

    def test_bad_header(self):
        with pytest.raises(TableSyntaxError) as e:
            read_table_text("monoid 2\n0 1\n1 0\n")
        assert e.value.line == 1

    def test_bad_token(self):
        with pytest.raises(TableSyntaxError) as e:
            read_table_text("group 2\n0 1\n1 a\n")
        assert e.value.line == 3

    def test_invalid_group(self):
        with pytest.raises(ValidationError):
            read_table_text("group 2\n0 1\n1 1\n")

    def test_ring_bad_mul(self):
        text = "ring 4\n" + "\n".join(" ".join(str(a ^ b) for b in range(4)) for a in range(4))
        text += "\n\n0 0 0 0\n0 1 0 0\n0 0 0 0\n0 0 0 0\n"
        with pytest.raises(ValidationError) as e:
            read_table_text(text)
        assert isinstance(e.value.cause, NotDistributive)

    def test_ring_needs_blank_line(self):
        with pytest.raises(TableSyntaxError):
            read_table_text("ring 1\n0\n0\n")

    @pytest.mark.parametrize("spec", ["dihedral 4", "quaternion8", "semidirect(4 2; 2; 1 0, 2 1)", "sl2 3"])
    def test_group_round_trip(self, spec, tmp_path):
        G = make_group(spec)
        path = tmp_path / "g.tbl"
        write_table_file(path, G)
        tf = parse_table_file(path)
        assert tf.structure.table == G.table
        assert read_table_text(format_group(G)).structure.table == G.table

    @pytest.mark.parametrize("spec", ["gf 2 2", "upper 2 2", "zero 4"])
    def test_ring_round_trip(self, spec, tmp_path):
        R = make_ring(spec)
        path = tmp_path / "r.tbl"
        write_table_file(path, R)
        tf = parse_table_file(path)
        assert tf.kind == "ring"
        assert tf.structure.add.table == R.add.table and tf.structure.mul == R.mul
        assert read_table_text(format_ring(R)).structure.mul == R.mul
