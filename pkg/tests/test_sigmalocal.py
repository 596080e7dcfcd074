import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmaform.catalog import build_group
from sigmaform.classes import (
    All, Context, Empty, GeneratedClosure, Gpi, Identity, SigmaLocal, SigmaNilpotent,
    class_equal_on_universe,
)
from sigmaform.errors import InputError, PreconditionError
from sigmaform.permcore import canon_id, normal_subgroups, prime_divisors, quotient
from sigmaform.sigmakit import f_block_bruteforce
from sigmaform.sigmalocal import (
    CanonicalFunction, TableFunction, canonical_from, class_at, generated_member, generated_member_formula,
    is_n_multiply_local_on, lemma24_decomposition, lemma25_transfer_check, lf_member, nilpotent_product_class,
    nilpotent_product_definition, sigma_locality_index, smallest_definition,
)
from sigmaform.universe import standard_universe
from sigmaform.verdict import Verdict

YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN
U24 = standard_universe(24)
G = {n: build_group(n) for n in ("C1", "C2", "C3", "C4", "C6", "S3", "A4", "A5", "S4", "V4")}


def ids(groups):
    return sorted(canon_id(g) for g in groups)


def lf_by_radicals(f, g, ctx):
    """LF membership with every block radical recomputed from normal subgroups."""
    if g.order == 1:
        return YES
    out = YES
    for b in ctx.sigma.sigma_of(g):
        r = f_block_bruteforce(g, b, ctx.sigma)
        out = out & ctx.member(f.value(b, ctx), quotient(g, r))
    return out


@pytest.fixture
def ctx():
    return Context()


def test_lf_of_identity_function_is_sigma_nilpotent(ctx):
    f = TableFunction({}, Identity())
    assert lf_member(f, G["S3"], ctx) is NO
    assert lf_member(f, G["C1"], ctx) is YES
    rep = class_equal_on_universe(SigmaLocal(f), SigmaNilpotent(), U24, ctx)
    assert not rep.disagreements and not rep.gaps


def test_lf_of_all_is_everything(ctx):
    f = TableFunction({}, All())
    assert all(lf_member(f, g, ctx) is YES for g in U24.groups())


@pytest.mark.parametrize("table", [
    {"s2": Gpi({"s3"}), "s3": Identity()},
    {"s2": All(), "s3": GeneratedClosure("form", "trivial", 0, [build_group("C2")])},
    {"s2": SigmaNilpotent(), "s5": All()},
])
def test_lf_member_against_recomputed_radicals(ctx, table):
    f = TableFunction(table, Empty())
    for g in U24.groups():
        assert lf_member(f, g, ctx) is lf_by_radicals(f, g, ctx)


def test_class_at(ctx):
    assert ids(class_at([G["S3"]], "s3", ctx)) == ids([G["C2"]])
    assert ids(class_at([G["S3"]], "s2", ctx)) == ids([G["C1"]])
    assert class_at([G["S3"]], "s5", ctx) == []


def test_smallest_definitions_frozen(ctx):
    # golden values confirmed with the brute-force radical oracle
    f = smallest_definition([G["S3"]], 1, "trivial", ctx)
    assert f.listed() == ["s2", "s3"]
    assert ids(f.value("s2", ctx).gens) == ids([G["C1"]])
    assert ids(f.value("s3", ctx).gens) == ids([G["C2"]])
    assert isinstance(f.value("s5", ctx), Empty)
    f = smallest_definition([G["C6"]], 1, "trivial", ctx)
    assert ids(f.value("s2", ctx).gens) == ids([G["C1"]])
    assert ids(f.value("s3", ctx).gens) == ids([G["C1"]])


def test_smallest_definition_support_and_errors(ctx):
    f = smallest_definition([G["S3"], G["C4"]], 2, "normal", ctx)
    assert f.support(ctx, ["s2", "s3", "s5", "s7"]) == {"s2", "s3"}
    assert smallest_definition([G["C1"]], 1, "trivial", ctx).listed() == []
    with pytest.raises(InputError):
        smallest_definition([G["S3"]], 0, "trivial", ctx)
    with pytest.raises(InputError):
        smallest_definition([], 1, "trivial", ctx)


def test_generated_member_examples(ctx):
    assert generated_member(G["C6"], [G["S3"]], 1, "trivial", ctx) is YES
    assert generated_member(G["C1"], [G["S3"]], 2, "normal", ctx) is YES
    assert generated_member(G["A5"], [G["S3"]], 1, "trivial", ctx) is NO


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(range(len(U24))), st.sampled_from([("S3",), ("C6",), ("S3", "C4")]),
       st.sampled_from(["trivial", "normal"]))
def test_generators_belong_to_their_closure(idx, gens, tau):
    ctx = Context()
    groups = [build_group(n) for n in gens]
    for x in groups:
        assert generated_member(x, groups, 1, tau, ctx) is YES
    g = U24.groups()[idx]
    a = generated_member(g, groups, 1, tau, ctx)
    b = generated_member_formula(g, groups, 1, tau, ctx)
    assert {a, b} != {YES, NO}
    # the support of the closure is sigma of the generators
    if a is YES:
        assert set(prime_divisors(g.order)) <= set().union(*(prime_divisors(x.order) for x in groups))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(range(len(U24))), st.sampled_from([("S3",), ("C6",), ("C4",)]))
def test_levels_shrink(idx, gens):
    # an (n+1)-multiply local closure sits inside the n-multiply one
    ctx = Context()
    groups = [build_group(n) for n in gens]
    g = U24.groups()[idx]
    hi = generated_member(g, groups, 2, "trivial", ctx)
    lo = generated_member(g, groups, 1, "trivial", ctx)
    assert not (hi is YES and lo is NO)


def test_canonical_definition(ctx):
    f = TableFunction({}, Identity())
    canon = canonical_from(f)
    assert isinstance(canon, CanonicalFunction) and canonical_from(canon) is canon
    for g in U24.groups():
        assert lf_member(canon, g, ctx) is lf_member(f, g, ctx)
        # F(b) = G_b on every block
        for b in ctx.sigma.sigma_of(g):
            assert ctx.member(canon.value(b, ctx), g) is Verdict.of(ctx.sigma.sigma_of(g) == {b})


def test_locality_criterion(ctx):
    for n in (1, 2):
        assert is_n_multiply_local_on(SigmaNilpotent(), n, "trivial", U24, ctx).holds
    assert is_n_multiply_local_on(All(), 1, "trivial", U24, ctx).holds
    with pytest.raises(InputError):
        is_n_multiply_local_on(All(), 0, "trivial", U24, ctx)


def test_locality_index_of_sigma_nilpotent(ctx):
    rep = sigma_locality_index(SigmaNilpotent(), 3, "trivial", U24, ctx)
    assert rep.lower == 3 and rep.upper is None
    assert str(rep).startswith(">= 3")


def test_lemma24_on_c6(ctx):
    entries, trivial = lemma24_decomposition(G["C6"], "s5", ctx)
    assert trivial
    assert sorted(e.kernel.order for e in entries) == [2, 3]
    assert all(e.ok for e in entries)


def test_lemma24_on_klein_four(ctx):
    entries, trivial = lemma24_decomposition(G["V4"], "s3", ctx)
    assert trivial and len(entries) == 2 and all(e.ok for e in entries)


def test_lemma24_preconditions(ctx):
    with pytest.raises(PreconditionError):
        lemma24_decomposition(G["S3"], "s5", ctx)       # monolithic
    with pytest.raises(PreconditionError):
        lemma24_decomposition(G["C6"], "s2", ctx)       # O_2 is not trivial


def test_lemma25_transfer(ctx):
    assert lemma25_transfer_check(G["C3"], "s2", [G["C6"]], 0, "trivial", ctx).status == "pass"
    assert lemma25_transfer_check(G["C2"], "s2", [G["C6"]], 0, "trivial", ctx).status == "skipped"
    assert lemma25_transfer_check(G["C1"], "s2", [G["C6"]], 0, "trivial", ctx).status == "pass"


def test_nilpotent_product_definition(ctx):
    form_c2 = GeneratedClosure("form", "trivial", 0, [G["C2"]])
    f = nilpotent_product_definition(form_c2, ["s2", "s3"], ctx)
    assert lf_member(f, G["S3"], ctx) is YES
    assert ctx.member(nilpotent_product_class(form_c2, ["s2", "s3"]), G["S3"]) is YES
    rep = class_equal_on_universe(SigmaLocal(f), nilpotent_product_class(form_c2, ["s2", "s3"]), U24, ctx)
    assert not rep.disagreements
    with pytest.raises(InputError):
        nilpotent_product_definition(Gpi({"s5"}), ["s2"], ctx)


def test_quotient_closure_of_lf_classes(ctx):
    f = smallest_definition([G["S3"], G["C4"]], 1, "trivial", ctx)
    for g in U24.groups():
        if lf_member(f, g, ctx) is YES:
            for n in normal_subgroups(g):
                assert lf_member(f, quotient(g, n), ctx) is YES
