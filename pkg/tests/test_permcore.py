import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmaform.catalog import build_group
from sigmaform.errors import PreconditionError
from sigmaform.permcore import (
    Permutation, PermGroup, all_subgroups, center, chief_series, derived_subgroup, find_isomorphism,
    frattini, normal_subgroups, quotient, socle_and_monolith, minimal_normal_subgroups, canon_id,
    regular_wreath, affine_frobenius, direct_product, cyclic, is_monolithic,
)


def closure_by_bfs(degree, gens):
    """Every element reachable from the identity, as image tuples."""
    ident = tuple(range(degree))
    seen = {ident}
    todo = [ident]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple(g[x[i]] for i in range(degree))
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


perm5 = st.permutations(list(range(5))).map(tuple)


@settings(max_examples=40, deadline=None)
@given(st.lists(perm5, min_size=1, max_size=3))
def test_order_agrees_with_bfs_closure(gens):
    g = PermGroup(5, [Permutation(p) for p in gens])
    assert g.order == len(closure_by_bfs(5, gens))


@settings(max_examples=25, deadline=None)
@given(st.lists(perm5, min_size=1, max_size=2))
def test_normal_subgroups_are_exactly_the_conjugation_invariant_ones(gens):
    g = PermGroup(5, [Permutation(p) for p in gens])
    if g.order > 24:
        return
    elems = g.elements()
    subs = all_subgroups(g)
    brute = []
    for h in subs:
        if all(x.inverse() * y * x in h for x in elems for y in h.generators):
            brute.append(h)
    assert set(brute) == set(normal_subgroups(g))


@pytest.mark.parametrize("name, order, normals, subgroups", [
    ("S3", 6, 3, 6),
    ("C6", 6, 4, 4),
    ("D4", 8, 6, 10),
    ("Q8", 8, 6, 6),
    ("A4", 12, 3, 10),
    ("S4", 24, 4, 30),
])
def test_subgroup_counts(name, order, normals, subgroups):
    g = build_group(name)
    assert g.order == order
    assert len(normal_subgroups(g)) == normals
    assert len(all_subgroups(g)) == subgroups


def test_standard_invariants():
    s4 = build_group("S4")
    assert derived_subgroup(s4).order == 12
    assert center(s4).order == 1
    assert frattini(build_group("D4")).order == 2
    assert frattini(build_group("S3")).order == 1
    assert chief_series(s4).factor_orders() == [2, 3, 4]


def test_quotient_orders_and_isomorphism_types():
    s4 = build_group("S4")
    for n in normal_subgroups(s4):
        assert quotient(s4, n).order * n.order == 24
    v4 = [n for n in normal_subgroups(s4) if n.order == 4][0]
    assert canon_id(quotient(s4, v4)) == canon_id(build_group("S3"))


def test_quotient_rejects_non_normal():
    s3 = build_group("S3")
    two = [h for h in all_subgroups(s3) if h.order == 2][0]
    with pytest.raises(PreconditionError):
        quotient(s3, two)


def test_isomorphism_search():
    assert find_isomorphism(build_group("C6"), direct_product(cyclic(2), cyclic(3))) is not None
    assert find_isomorphism(build_group("D4"), build_group("Q8")) is None
    assert canon_id(build_group("S3")) == canon_id(build_group("D3"))
    assert canon_id(build_group("C4")) != canon_id(build_group("V4"))


def test_socle_of_order_150_witness():
    g = affine_frobenius(25, 6)
    assert g.order == 150
    mins, soc, mono = socle_and_monolith(g)
    assert soc.order == 25 and mono == soc
    assert is_monolithic(g)
    assert [n.order for n in minimal_normal_subgroups(g)] == [25]


def test_regular_wreath_order():
    w = regular_wreath(build_group("C2"), build_group("S3"))
    assert w.order == 2 ** 6 * 6


def test_permutation_cycles_round_trip():
    for images in itertools.permutations(range(4)):
        p = Permutation(tuple(images))
        q = Permutation.from_cycles(str(p), 4) if str(p) != "()" else Permutation.identity(4)
        assert q == p
        assert (p * p.inverse()).is_identity()
