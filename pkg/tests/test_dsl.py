import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmaform.classes import Context, GeneratedClosure, Gpi, Intersection, Product, SigmaLocal
from sigmaform.catalog import build_group
from sigmaform.dsl import (
    Atom, Blocks, Gen, Lf, Meet, ParseError, Prod, format_class_expr, parse_class, parse_class_expr,
    parse_sigma_function,
)
from sigmaform.errors import InputError
from sigmaform.sigmakit import parse_sigma
from sigmaform.sigmalocal import lf_member
from sigmaform.verdict import Verdict

BLOCKS = ["s2", "s3", "s5", "s7"]
GROUPS = ["C2", "S3", "C4", "A4", "direct(C2,C3)", "wreath(C2,C2)", "affine(5,4)"]

block_sets = st.one_of(st.none(), st.lists(st.sampled_from(BLOCKS), min_size=1, unique=True)
                       .map(lambda b: tuple(sorted(b))))
atoms = st.one_of(
    st.sampled_from(["empty", "one", "all", "Nsigma"]).map(Atom),
    st.builds(Blocks, st.sampled_from(["Gpi", "Ssol"]), block_sets),
    st.builds(lambda k, t, n, r: Gen(k, t, 0 if k == "sf" else n, tuple(r)),
              st.sampled_from(["sf", "form"]), st.sampled_from(["trivial", "normal", "all"]),
              st.integers(0, 3), st.lists(st.sampled_from(GROUPS), max_size=3)),
    st.just(Lf("f")),
)
exprs = st.recursive(atoms, lambda inner: st.one_of(
    st.builds(Prod, inner, inner),
    st.lists(inner, min_size=1, max_size=3).map(lambda p: Meet(tuple(p))),
), max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_print_parse_round_trip(node):
    text = format_class_expr(node)
    again = parse_class_expr(text, functions={"f": None})
    assert again == node
    assert format_class_expr(again) == text


def test_parse_examples():
    c = parse_class("prod(Gpi{s5}, Gpi{s2})")
    assert isinstance(c, Product) and c.lower == Gpi({"s5"})
    c = parse_class("gen(form, normal, 1, [S3, C4])")
    assert isinstance(c, GeneratedClosure) and c.level == 1 and c.tau.kind == "normal"
    assert isinstance(parse_class("meet(Nsigma, Gpi{*})"), Intersection)
    assert parse_class("meet(Nsigma)") == parse_class("Nsigma")


@pytest.mark.parametrize("text, where", [
    ("meet()", (1, 6)),
    ("Gpi{s4}", (1, 5)),
    ("prod(one,\n  bogus)", (2, 3)),
    ("gen(sf, trivial, 1, [S3])", (1, 18)),
    ("gen(form, sideways, 0, [S3])", (1, 11)),
    ("gen(form, trivial, 0, [X9])", (1, 24)),
    ("lf(g)", (1, 4)),
    ("one two", (1, 5)),
    ("prod(one, all", (1, 14)),
])
def test_parse_errors_report_position(text, where):
    with pytest.raises(ParseError) as info:
        parse_class_expr(text)
    assert (info.value.line, info.value.column) == where


def test_named_blocks_follow_the_partition():
    sigma = parse_sigma("block s23: 2 3\n")
    assert parse_class_expr("Gpi{s23, s5}", sigma) == Blocks("Gpi", ("s23", "s5"))
    with pytest.raises(ParseError):
        parse_class_expr("Gpi{s2}", sigma)


def test_group_manifest_names():
    groups = {"W": build_group("affine(25,6)")}
    c = parse_class("gen(form, trivial, 0, [W, C2])", groups=groups)
    assert sorted(g.order for g in c.gens) == [2, 150]


def test_sigma_function_file():
    text = """
    # f(s2) = (1), f(s3) = N_sigma, empty elsewhere
    sigma s2 := one
    sigma s3 := Nsigma
    """
    f = parse_sigma_function(text)
    ctx = Context()
    assert lf_member(f, build_group("C6"), ctx) is Verdict.YES
    assert lf_member(f, build_group("C5"), ctx) is Verdict.NO
    c = parse_class("lf(f)", functions={"f": f})
    assert isinstance(c, SigmaLocal)
    g = parse_sigma_function("default := one\n")
    assert lf_member(g, build_group("D5"), ctx) is Verdict.NO
    assert lf_member(g, build_group("C10"), ctx) is Verdict.YES


@pytest.mark.parametrize("text", [
    "sigma s4 := one\n",
    "sigma s2 := one\nsigma s2 := all\n",
    "s2 = one\n",
    "sigma s2 := prod(one)\n",
])
def test_sigma_function_errors(text):
    with pytest.raises(InputError):
        parse_sigma_function(text)
