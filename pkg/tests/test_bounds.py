import pytest

from boundsmith.bounds import allocate_primary_vars, build_universe, dump_varmap
from boundsmith.lang import parse_model, resolve_model
from conftest import load_model


def table_for(model, k):
    return allocate_primary_vars(model, build_universe(model, k))


def test_universe_sll_k2(sll):
    u = build_universe(sll, 2)
    assert u.atoms == {"List": ("L0", "L1"), "Node": ("N0", "N1")}
    assert u.all_atoms == ("L0", "L1", "N0", "N1")


def test_universe_sll_k1(sll):
    u = build_universe(sll, 1)
    assert u.atoms == {"List": ("L0",), "Node": ("N0",)}


def test_universe_one_sig_single_atom():
    m = resolve_model(parse_model("one sig Root {}\nsig A {}\nrun {} for 3"))
    u = build_universe(m, 3)
    assert u.atoms["Root"] == ("R0",)
    assert u.atoms["A"] == ("A0", "A1", "A2")


def test_universe_requires_positive_size(sll):
    with pytest.raises(ValueError):
        build_universe(sll, 0)


def test_universe_first_letter_collision():
    m = resolve_model(parse_model("sig List {} sig Lock {}\nrun {} for 2"))
    u = build_universe(m, 2)
    assert u.atoms == {"List": ("List0", "List1"), "Lock": ("Lock0", "Lock1")}


def test_extension_pool_is_root_pool():
    m = load_model("shapes")
    u = build_universe(m, 2)
    assert set(u.atoms) == {"Shape", "Canvas"}
    assert u.atoms["Shape"] == ("S0", "S1")


def test_sll_k3_layout_matches_published_numbering(sll):
    t = table_for(sll, 3)
    assert t.num_primary == 24
    assert t.per_sig_vars["List"] == (1, 2, 3)
    assert t.per_sig_vars["Node"] == (4, 5, 6)
    assert t.var_for("header", ("L0", "N0")) == 7
    assert t.var_for("header", ("L2", "N2")) == 15
    assert t.var_for("link", ("N0", "N0")) == 16
    assert t.var_for("link", ("N2", "N2")) == 24


def test_sll_k1_four_vars(sll):
    t = table_for(sll, 1)
    assert t.num_primary == 4
    assert t.var_for("List", ("L0",)) == 1
    assert t.var_for("Node", ("N0",)) == 2
    assert t.var_for("header", ("L0", "N0")) == 3
    assert t.var_for("link", ("N0", "N0")) == 4


def test_sll_k2_twelve_vars(sll):
    assert table_for(sll, 2).num_primary == 12


@pytest.mark.parametrize("k,expected", [(1, 4), (2, 12), (3, 24)])
def test_sll_pv_is_quadratic(sll, k, expected):
    # 2k membership variables plus 2k^2 field variables
    assert table_for(sll, k).num_primary == 2 * k + 2 * k * k == expected


def test_table_is_bijection(example_model):
    _, model = example_model
    for k in (1, 2):
        t = table_for(model, k)
        assert sorted(t.entries.values()) == list(range(1, t.num_primary + 1))
        assert len(t.by_var) == t.num_primary + 1
        for var in range(1, t.num_primary + 1):
            assert t.entries[t.by_var[var]] == var


def test_one_and_abstract_allocate_nothing():
    m = load_model("shapes")
    t = table_for(m, 2)
    assert t.per_sig_vars["Canvas"] == ()
    assert t.per_sig_vars["Shape"] == ()
    assert t.per_sig_vars["Circle"] == (1, 2)
    assert t.per_sig_vars["Square"] == (3, 4)
    # holds ranges over Canvas (1 atom) x Shape pool (2 atoms)
    assert t.num_primary == 6


def test_rebuild_is_deterministic(sll):
    a, b = table_for(sll, 2), table_for(sll, 2)
    assert a.entries == b.entries and a.per_sig_vars == b.per_sig_vars


def test_dump_varmap_format(sll):
    text = dump_varmap(table_for(sll, 1))
    lines = text.strip().split("\n")
    assert lines[0] == "1\tList\tL0"
    assert lines[2] == "3\theader\tL0,N0"
    assert len(lines) == 4
