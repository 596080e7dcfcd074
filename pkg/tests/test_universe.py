import pytest

from sigmaform.catalog import build_group, group_label
from sigmaform.errors import InputError
from sigmaform.permcore import canon_id, cyclic, normal_subgroups, quotient
from sigmaform.universe import Universe, build_universe, parse_manifest, standard_universe

# per-order counts of the default order-24 universe, frozen after a manual audit
COUNTS_24 = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5, 13: 1, 14: 2, 15: 1,
             16: 9, 17: 1, 18: 5, 19: 1, 20: 5, 21: 2, 22: 2, 23: 1, 24: 12}


def test_default_universe_is_frozen():
    u = standard_universe(24)
    assert len(u) == 66
    assert u.by_order() == COUNTS_24


def test_default_universe_contains_the_named_groups():
    u = standard_universe(24)
    for name in ["S3", "S4", "D4", "Q8", "A4", "V4", "Dic3"] + [f"C{n}" for n in range(1, 25)]:
        assert build_group(name) in u, name


def test_universe_is_quotient_closed_and_duplicate_free():
    u = standard_universe(24)
    ids = [r.cid for r in u]
    assert len(ids) == len(set(ids))
    for rec in u:
        for n in normal_subgroups(rec.group):
            assert canon_id(quotient(rec.group, n)) in set(ids)


def test_bound_one():
    u = build_universe("bound 1\n")
    assert len(u) == 1 and u.records[0].order == 1


def test_mandated_group_over_the_bound_is_rejected():
    with pytest.raises(InputError):
        build_universe("bound 24\ngroup W = affine(25,6)\n")


def test_manifest_with_mandated_groups():
    u = build_universe("bound 150\nseeds none\ngroup W = witness150\n")
    # W and its quotients C6, C3, C2, C1
    assert sorted(r.order for r in u) == [1, 2, 3, 6, 150]


@pytest.mark.parametrize("text", ["group W = C2\n", "bound x\n", "universe 3\n"])
def test_manifest_errors(text):
    with pytest.raises(InputError):
        parse_manifest(text)


def test_build_with_explicit_seeds():
    u = Universe.build(12, seeds=[cyclic(4)], products=False)
    assert [r.order for r in u] == [1, 2, 4]


@pytest.mark.parametrize("expr, order, label", [
    ("C6", 6, "C6"), ("direct(C2,C3)", 6, "C6"), ("S3", 6, "S3"), ("D3", 6, "S3"), ("Q8", 8, "Q8"),
    ("wreath(C2,C2)", 8, "D4"), ("A4", 12, "A4"), ("affine(25,6)", 150, None),
])
def test_catalog(expr, order, label):
    g = build_group(expr)
    assert g.order == order
    if label:
        assert group_label(g) == label


@pytest.mark.parametrize("expr", ["Q6", "X3", "cyclic(2,3)", "nothing(3)", "affine(6,1)"])
def test_catalog_errors(expr):
    with pytest.raises(InputError):
        build_group(expr)
