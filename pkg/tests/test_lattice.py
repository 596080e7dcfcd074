"""Lattice laws as verdict equalities on the order-24 universe."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmaform.catalog import build_group
from sigmaform.classes import All, Context, Empty, Gpi, Identity, class_equal_on_universe
from sigmaform.lattice import (
    compactness_probe, gen, join, meet, modularity_suite, separability_witness, sublattice_embedding_suite,
    sublattice_gap_witness,
)
from sigmaform.universe import standard_universe
from sigmaform.verdict import Verdict

YES, NO = Verdict.YES, Verdict.NO
U24 = standard_universe(24)
SMALL = ["C2", "C3", "C4", "S3", "C6", "V4", "D4", "A4", "D5"]

formation = st.tuples(st.lists(st.sampled_from(SMALL), min_size=1, max_size=2, unique=True),
                      st.sampled_from([0, 1]))


def _gen(spec, tau="trivial"):
    names, n = spec
    return gen([build_group(x) for x in names], n, tau)


def same(c1, c2, ctx):
    rep = class_equal_on_universe(c1, c2, U24, ctx)
    return not rep.disagreements


def below(c1, c2, ctx):
    """No universe group is a definite member of c1 and a definite non-member of c2."""
    return all(not (ctx.member(c1, g) is YES and ctx.member(c2, g) is NO) for g in U24.groups())


@settings(max_examples=20, deadline=None)
@given(formation, formation)
def test_meet_is_commutative_and_idempotent(a, b):
    ctx = Context()
    fa, fb = _gen(a), _gen(b)
    assert same(meet(fa, fb), meet(fb, fa), ctx)
    assert same(meet(fa, fa), fa, ctx)
    assert below(meet(fa, fb), fa, ctx)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.sampled_from(SMALL), min_size=1, max_size=2, unique=True),
       st.lists(st.sampled_from(SMALL), min_size=1, max_size=2, unique=True), st.sampled_from([0, 1]))
def test_join_is_an_upper_bound(xs, ys, n):
    ctx = Context()
    fa, fb = _gen((xs, n)), _gen((ys, n))
    j = join(fa, fb, n, "trivial", ctx)
    assert below(fa, j, ctx) and below(fb, j, ctx)
    assert same(join(fb, fa, n, "trivial", ctx), j, ctx)


@settings(max_examples=15, deadline=None)
@given(formation)
def test_absorption(a):
    ctx = Context()
    names, n = a
    fa = _gen(a)
    fb = gen([build_group("C2")], n)
    assert same(meet(fa, join(fa, fb, n, "trivial", ctx)), fa, ctx)


def test_meet_examples():
    ctx = Context()
    assert same(meet(Gpi({"s2"}), Gpi({"s3"})), Identity(), ctx)
    c = _gen((["S3"], 1))
    assert same(meet(c, All()), c, ctx)
    assert same(meet(c, Empty()), Empty(), ctx)


def test_join_examples():
    ctx = Context()
    j = join([build_group("C2")], [build_group("C3")], 0, "trivial", ctx)
    assert ctx.member(j, build_group("C6")) is YES
    f = _gen((["S3", "C4"], 1))
    assert same(join(f, f, 1, "trivial", ctx), f, ctx)


def test_order_150_gap_witness():
    rep = sublattice_gap_witness(Context())
    assert not rep.violations and not rep.gaps
    assert rep.checked == 4      # (a) covers two product classes


def test_modular_law_small_run():
    rep = modularity_suite(U24, samples=4, seed=3, ctx=Context())
    assert not rep.violations


def test_embedding_small_run():
    rep = sublattice_embedding_suite(U24, pairs=[(("S3",), ("C4",))], taus=("normal",), ctx=Context())
    assert not rep.violations and not rep.gaps


def test_compactness_example():
    c2, c3, s3, c6 = (build_group(x) for x in ("C2", "C3", "S3", "C6"))
    res = compactness_probe(c6, [[c2], [c3], [s3]], 0, "trivial", Context())
    assert res.status == "found" and res.subfamily == [0, 1]
    res = compactness_probe(s3, [[c2], [s3]], 0, "trivial", Context())
    assert res.subfamily == [1]


@pytest.mark.parametrize("term, classes, group, expect", [
    (("join", ("x", 0), ("x", 1)), [Gpi({"s2"}), Gpi({"s3"})], "C6", ["C2", "C3"]),
    (("x", 0), [gen([build_group("S3")], 0)], "S3", ["S3"]),
])
def test_separability_examples(term, classes, group, expect):
    res = separability_witness(term, classes, build_group(group), U24, 0, "trivial", Context())
    assert res.status == "found"
    assert res.witnesses == expect


def test_separability_meet_uses_the_group_twice():
    a = build_group("S3")
    classes = [Gpi({"s2", "s3"}), gen([a], 0)]
    res = separability_witness(("meet", ("x", 0), ("x", 1)), classes, a, U24, 0, "trivial", Context())
    assert res.status == "found" and res.witnesses == ["S3", "S3"]
