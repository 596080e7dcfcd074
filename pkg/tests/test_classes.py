import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmaform.catalog import build_group
from sigmaform.classes import (
    All, Context, Empty, GeneratedClosure, Gpi, Identity, Intersection, Product, SigmaNilpotent,
    SigmaSoluble, monolithic_kernels, r0_member, residual_of, semiformation_generate,
)
from sigmaform.errors import InputError
from sigmaform.permcore import (
    Subgroup, all_subgroups, canon_id, derived_length, direct_product, exponent, normal_subgroups, prime_divisors,
    quotient,
)
from sigmaform.universe import standard_universe
from sigmaform.verdict import Verdict

YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN
U24 = standard_universe(24).groups()


def subdirect_quotients(x, y):
    """Quotients of every subdirect product inside x * y (built by brute force)."""
    d = direct_product(x, y)
    nx = x.degree
    out = {}
    for h in all_subgroups(d):
        imgs_x = {tuple(p.images[:nx]) for p in h.as_group().elements()}
        imgs_y = {tuple(p.images[nx:]) for p in h.as_group().elements()}
        if len(imgs_x) != x.order or len(imgs_y) != y.order:
            continue
        hg = h.as_group()
        for n in normal_subgroups(hg):
            q = quotient(hg, n)
            out[canon_id(q)] = q
    return list(out.values())


def residual_bruteforce(g, test):
    """Intersection of the kernels whose quotient passes ``test``."""
    inter = g.whole.elements
    for n in normal_subgroups(g):
        if test(quotient(g, n)):
            inter = inter & n.elements
    return inter


@pytest.fixture
def ctx():
    return Context()


def test_atoms(ctx):
    s3, c1 = build_group("S3"), build_group("C1")
    assert ctx.member(Empty(), c1) is NO
    assert ctx.member(Identity(), c1) is YES and ctx.member(Identity(), s3) is NO
    assert ctx.member(All(), s3) is YES
    assert ctx.member(Gpi({"s2", "s3"}), s3) is YES
    assert ctx.member(Gpi({"s2"}), s3) is NO
    assert ctx.member(Gpi(None), build_group("A5")) is YES


def test_soluble_and_nilpotent_classes(ctx):
    assert ctx.member(SigmaSoluble(), build_group("A5")) is NO
    assert ctx.member(SigmaSoluble(), build_group("S4")) is YES
    assert ctx.member(SigmaSoluble({"s2"}), build_group("S4")) is NO
    assert ctx.member(SigmaNilpotent(), build_group("C6")) is YES
    assert ctx.member(SigmaNilpotent(), build_group("S3")) is NO


def test_product_uses_the_residual(ctx):
    # N_sigma N_sigma: S4 has nilpotent residual A4, which is not nilpotent
    nn = Product(SigmaNilpotent(), SigmaNilpotent())
    assert ctx.member(nn, build_group("S3")) is YES
    assert ctx.member(nn, build_group("A4")) is YES
    assert ctx.member(nn, build_group("S4")) is NO
    assert ctx.member(Product(SigmaNilpotent(), Empty()), build_group("C1")) is NO


def test_product_against_bruteforce_residual(ctx):
    classes = [(Gpi({"s2"}), Gpi({"s3"})), (SigmaNilpotent(), Gpi({"s2"})), (Gpi({"s3"}), SigmaNilpotent())]
    for lower, upper in classes:
        prod = Product(lower, upper)
        for g in U24:
            r = residual_bruteforce(g, lambda q: ctx.member(upper, q) is YES)
            expect = ctx.member(lower, Subgroup(g, r).as_group())
            assert ctx.member(prod, g) is expect


def test_intersection_is_three_valued_conjunction(ctx):
    both = Intersection([Gpi({"s2", "s3"}), SigmaNilpotent()])
    for g in U24:
        a, b = ctx.member(Gpi({"s2", "s3"}), g), ctx.member(SigmaNilpotent(), g)
        assert ctx.member(both, g) is (a & b)
    with pytest.raises(InputError):
        Intersection([])


def test_residual_of(ctx):
    s4 = build_group("S4")
    assert residual_of(s4, SigmaNilpotent(), ctx).order == 12
    assert residual_of(s4, Gpi({"s2"}), ctx).order == 12
    assert residual_of(s4, All(), ctx).order == 1


def test_semiformation_generate():
    sf = semiformation_generate("trivial", [build_group("S3")])
    assert sorted(g.order for g in sf) == [1, 2, 6]
    sf = semiformation_generate("all", [build_group("S3")])
    assert sorted(g.order for g in sf) == [1, 2, 3, 6]


def test_sf_closure_is_exactly_the_semiformation(ctx):
    sf = GeneratedClosure("sf", "normal", 0, [build_group("S3")])
    assert ctx.member(sf, build_group("C3")) is YES
    assert ctx.member(sf, build_group("C6")) is NO


def test_r0_member():
    ids = {canon_id(build_group(n)) for n in ("C2", "C3", "S3", "C1")}
    assert r0_member(build_group("C6"), ids) is YES
    assert r0_member(build_group("C4"), ids) is NO
    assert r0_member(build_group("D6"), ids) is YES


def test_monolithic_kernels_intersect_trivially():
    for g in U24:
        inter = g.whole.elements
        for n in monolithic_kernels(g):
            inter = inter & n.elements
        assert len(inter) == 1


@pytest.mark.parametrize("gens", [("S3",), ("C6",), ("C4",), ("S3", "C4")])
def test_formation_contains_subdirect_products(ctx, gens):
    groups = [build_group(n) for n in gens]
    f = GeneratedClosure("form", "trivial", 0, groups)
    for x in groups:
        for y in groups:
            for q in subdirect_quotients(x, y):
                assert ctx.member(f, q) is not NO, q


@pytest.mark.parametrize("gens", [("S3",), ("C6",), ("C4",), ("S3", "C4")])
def test_formation_respects_primes_and_exponent(ctx, gens):
    groups = [build_group(n) for n in gens]
    f = GeneratedClosure("form", "trivial", 0, groups)
    primes = set().union(*(prime_divisors(g.order) for g in groups))
    exp = math.lcm(*(exponent(g) for g in groups))
    dl = max(derived_length(g) for g in groups)
    for g in U24:
        v = ctx.member(f, g)
        outside = (not set(prime_divisors(g.order)) <= primes or exp % exponent(g)
                   or derived_length(g) is None or derived_length(g) > dl)
        if outside:
            assert v is NO, g


def test_formation_generated_by_s3_frozen(ctx):
    f = GeneratedClosure("form", "trivial", 0, [build_group("S3")])
    # C3 is not a quotient of S3, and the 3-chief factors of every member are inverted
    verdicts = {n: ctx.member(f, build_group(n)) for n in ("C3", "C6", "D6", "C4", "D5", "A4", "S4", "D4")}
    assert verdicts == {"C3": NO, "C6": NO, "D6": YES, "C4": NO, "D5": NO, "A4": NO, "S4": NO, "D4": NO}
    # the generalized dihedral group of order 18 is a subdirect square of S3
    gd18 = [g for g in U24 if g.order == 18 and not g.is_abelian() and exponent(g) == 6
            and derived_length(g) == 2 and ctx.member(f, g) is YES]
    assert gd18


def test_closure_rejects_bad_arguments():
    with pytest.raises(InputError):
        GeneratedClosure("sf", "trivial", 1, [])
    with pytest.raises(InputError):
        GeneratedClosure("group", "trivial", 0, [])
    with pytest.raises(InputError):
        GeneratedClosure("form", "trivial", 1, [], parts=[Gpi({"s2"})])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(U24))), st.sampled_from(["S3", "C6", "C4", "A4", "D5"]))
def test_verdicts_are_deterministic_across_contexts(idx, gen):
    g = U24[idx]
    f = GeneratedClosure("form", "trivial", 0, [build_group(gen)])
    assert Context().member(f, g) is Context().member(f, g)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(U24))), st.sampled_from(["S3", "C6", "C4", "A4", "D5", "Q8"]))
def test_formations_are_quotient_closed(idx, gen):
    ctx = Context()
    g = U24[idx]
    f = GeneratedClosure("form", "trivial", 0, [build_group(gen)])
    if ctx.member(f, g) is YES:
        for n in normal_subgroups(g):
            assert ctx.member(f, quotient(g, n)) is YES


def test_socle_match_with_parts_agrees_with_flat_generators():
    # a level-0 closure with a closure part must agree with the flat one
    flat = GeneratedClosure("form", "trivial", 0, [build_group("S3"), build_group("C5")])
    nested = GeneratedClosure("form", "trivial", 0, [build_group("C5")],
                              parts=[GeneratedClosure("form", "trivial", 0, [build_group("S3")])])
    ctx = Context()
    for g in U24:
        a, b = ctx.member(flat, g), ctx.member(nested, g)
        assert not {a, b} == {YES, NO}, g
