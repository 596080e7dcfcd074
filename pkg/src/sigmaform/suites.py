"""Named verification suites, one per acceptance criterion.

Each suite returns a ``Report`` whose ``line()`` is the machine-readable
``CHECK <name> PASS|FAIL|GAP ...`` summary.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .catalog import build_group, group_label
from .classes import (All, Context, Empty, GeneratedClosure, Gpi, Identity, SigmaLocal, SigmaNilpotent,
                      SigmaSoluble, class_equal_on_universe)
from .lattice import (LatticeReport, compactness_probe, join, modularity_suite, sublattice_embedding_suite,
                      sublattice_gap_witness, theorem7_classes)
from .permcore import PermGroup, affine_frobenius, all_subgroups, frattini, prime_divisors, quotient, regular_wreath
from .sigmakit import SIGMA1, block_sort_key, f_block_bruteforce, o_block, o_pi, o_pi_nu
from .sigmalocal import (JoinFunction, TableFunction, generated_member, generated_member_formula,
                         is_n_multiply_local_on, lemma24_decomposition, direct_socle_factors, lf_member,
                         nilpotent_product_class, nilpotent_product_definition, sigma_of_set, smallest_definition)
from .universe import Universe, standard_universe
from .verdict import Verdict

YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN

Report = LatticeReport


def _fresh(sigma=SIGMA1) -> Context:
    return Context(sigma)


def _finish(rep: Report, t0: float, limit: float) -> Report:
    # timings stay out of the report text so that reruns are byte-identical
    rep.wall = time.time() - t0
    rep.limit = limit
    return rep


def _compare(rep: Report, tag: str, eq) -> None:
    rep.checked += eq.agree + len(eq.disagreements) + len(eq.gaps)
    rep.violations += [f"{tag} group={d[0]} {d[1]} vs {d[2]}" for d in eq.disagreements]
    rep.gaps += [f"{tag} group={d[0]} {d[1]} vs {d[2]}" for d in eq.gaps]


# ---------------------------------------------------------------------------
# wreath radicals


L17_CONFIGS = (("C2", "C6", (3,)), ("C2", "S3", (3,)), ("C3", "C4", (2,)))


def lemma17_configuration(a_name: str, b_name: str, pi, sigma=SIGMA1) -> list[str]:
    """Failures of the four radical identities over every subgroup B1 of B, for W1 = K B1 in A wr B."""
    a, b = build_group(a_name), build_group(b_name)
    p = prime_divisors(a.order)[0]
    nu_block = sigma.block_of(p)
    in_nu = lambda q: sigma.block_of(q) == nu_block  # noqa: E731
    in_pi = lambda q: q in pi  # noqa: E731
    if any(in_nu(q) for q in pi):
        raise ValueError("pi must avoid the block of p")
    w = regular_wreath(a, b)
    data = w.meta["wreath"]
    failures = []
    for b1 in all_subgroups(b):
        top = [data.embed_top(x) for x in b1.generators]
        w1 = PermGroup(w.degree, data.base_generators + top)
        b1g = b1.as_group()

        def k_times(sub) -> "object":
            return w1.subgroup(data.base_generators + [data.embed_top(x) for x in sub.generators])

        tag = f"{a_name} wr {b_name}, |B1|={b1.order}"
        if not o_pi(w1, in_pi).is_trivial():
            failures.append(f"{tag}: O_pi(W1) != 1")
        o_nu = o_pi(w1, in_nu)
        if o_nu != k_times(o_pi(b1g, in_nu)):
            failures.append(f"{tag}: O_nu(W1) != K O_nu(B1)")
        if o_pi_nu(w1, in_nu, in_pi) != k_times(o_pi_nu(b1g, in_nu, in_pi)):
            failures.append(f"{tag}: O_nu,pi(W1) != K O_nu,pi(B1)")
        if o_pi_nu(w1, in_pi, in_nu) != o_nu:
            failures.append(f"{tag}: O_pi,nu(W1) != O_nu(W1)")
    return failures


def suite_l17(seed: int = 0) -> Report:
    t0 = time.time()
    rep = Report("l17")
    for a, b, pi in L17_CONFIGS:
        t1 = time.time()
        fails = lemma17_configuration(a, b, pi)
        dt = time.time() - t1
        rep.checked += 4 * len(all_subgroups(build_group(b)))
        rep.violations += fails
        rep.timings[f"{a} wr {b}"] = dt
        rep.notes.append(f"{a} wr {b}, pi={set(pi)}: {'PASS' if not fails else 'FAIL'}")
    return _finish(rep, t0, 30)


# ---------------------------------------------------------------------------
# LF membership against recomputed radicals


def _value_pool():
    return [Identity(), All(), Gpi({"s2"}), Gpi({"s2", "s3"}), Gpi({"s3"}), SigmaNilpotent(), SigmaSoluble(None),
            GeneratedClosure("form", "trivial", 0, [build_group("C2")]),
            GeneratedClosure("form", "trivial", 0, [build_group("S3")]),
            GeneratedClosure("form", "normal", 0, [build_group("C6")])]


def sample_sigma_functions(count: int, seed: int, blocks=("s2", "s3", "s5", "s7")) -> list[TableFunction]:
    """Random table functions over a few small blocks with a random default."""
    rng = random.Random(seed)
    pool = _value_pool()
    defaults = [Empty(), Identity(), All()]
    out = []
    for _ in range(count):
        table = {b: rng.choice(pool) for b in blocks if rng.random() < 0.85}
        out.append(TableFunction(table, rng.choice(defaults)))
    return out


def _empty_value(v) -> bool:
    return isinstance(v, Empty) or (isinstance(v, GeneratedClosure) and v.is_empty())


def lf_member_bruteforce(f, g: PermGroup, sigma=SIGMA1) -> Verdict:
    """LF membership with every block radical recomputed by scanning normal subgroups."""
    if g.order == 1:
        return YES
    ctx = _fresh(sigma)
    out = YES
    for b in sorted({sigma.block_of(p) for p in prime_divisors(g.order)}):
        v = f.value(b, ctx)
        if _empty_value(v):
            return NO
        q = quotient(g, f_block_bruteforce(g, b, sigma))
        out = out & ctx.member(v, q)
    return out


def suite_lemma1(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = Report("lemma1", seed=seed)
    universe = universe or standard_universe(24)
    ctx = _fresh()
    for k, f in enumerate(sample_sigma_functions(5, seed)):
        for rec in universe:
            a = lf_member(f, rec.group, ctx)
            b = lf_member_bruteforce(f, rec.group)
            rep.checked += 1
            if a.definite and b.definite and a is not b:
                rep.violations.append(f"f{k}={f} group={rec.name} lf={a} oracle={b}")
            elif not (a.definite and b.definite):
                rep.gaps.append(f"f{k} group={rec.name} lf={a} oracle={b}")
    return _finish(rep, t0, 60)


# ---------------------------------------------------------------------------
# smallest definitions


# block -> generator labels of the level-0 value, checked against the radical oracle
T1_GOLDEN = {
    ("S3",): {"s2": ["C1"], "s3": ["C2"]},
    ("C6",): {"s2": ["C1"], "s3": ["C1"]},
}


def _oracle_class_at(groups, block, sigma=SIGMA1):
    if not any(sigma.block_of(p) == block for g in groups for p in prime_divisors(g.order)):
        return []
    return sorted({group_label(quotient(g, f_block_bruteforce(g, block, sigma))) for g in groups})


def suite_t1(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = Report("t1")
    universe = universe or standard_universe(24)
    ctx = _fresh()
    for names, golden in T1_GOLDEN.items():
        groups = [build_group(x) for x in names]
        f = smallest_definition(groups, 1, "trivial", ctx)
        got = {b: sorted(group_label(g) for g in f.value(b, ctx).gens) for b in f.listed()}
        oracle = {b: _oracle_class_at(groups, b) for b in ("s2", "s3", "s5", "s7")}
        oracle = {b: v for b, v in oracle.items() if v}
        rep.checked += 3
        if got != golden:
            rep.violations.append(f"X={list(names)}: definition {got} differs from golden {golden}")
        if oracle != golden:
            rep.violations.append(f"X={list(names)}: radical oracle {oracle} differs from golden {golden}")
        supp = {b for b in ("s2", "s3", "s5", "s7", "s11") if not _empty_value(f.value(b, ctx))}
        if supp != set(sigma_of_set(groups, ctx)):
            rep.violations.append(f"X={list(names)}: support {sorted(supp)} != sigma(X)")
        rep.notes.append(f"X={list(names)}: {f.describe(ctx)}".replace("\n", "; "))
        # values against the closure of {A in F and h(b) with O_b(A) = 1}, h canonical
        lf = SigmaLocal(f)
        for b in f.listed():
            members = []
            for rec in universe:
                a = rec.group
                if not o_block(a, b, ctx.sigma).is_trivial():
                    continue
                in_f = ctx.member(lf, a)
                # with O_b(A) = 1, A lies in G_b (f(b) meet F) iff it lies in f(b) meet F
                in_h = ctx.member(f.value(b, ctx), a)
                if in_f is YES and in_h is YES:
                    members.append(a)
            hb = GeneratedClosure("form", "trivial", 0, members)
            _compare(rep, f"X={list(names)} block={b} canonical", class_equal_on_universe(f.value(b, ctx), hb,
                                                                                         universe, ctx))
    return _finish(rep, t0, 30)


# ---------------------------------------------------------------------------
# two evaluation paths for generated formations


T4_GENERATORS = (("S3",), ("C6",), ("S3", "C4"))


def suite_t4(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = Report("t4")
    universe = universe or standard_universe(24)
    ctx = _fresh()
    for tau in ("trivial", "normal"):
        for names in T4_GENERATORS:
            groups = [build_group(x) for x in names]
            for rec in universe:
                a = generated_member(rec.group, groups, 1, tau, ctx)
                b = generated_member_formula(rec.group, groups, 1, tau, ctx)
                rep.checked += 1
                tag = f"tau={tau} X={list(names)} group={rec.name} recursion={a} formula={b}"
                if a.definite and b.definite and a is not b:
                    rep.violations.append(tag)
                elif not (a.definite and b.definite):
                    rep.gaps.append(tag)
    return _finish(rep, t0, 120)


# ---------------------------------------------------------------------------
# sigma-nilpotent products


L27_SAMPLES = ((lambda: GeneratedClosure("form", "trivial", 0, [build_group("C2")]), ("s2", "s3")),
               (lambda: Gpi({"s3"}), ("s2", "s3", "s5")))


def suite_l10(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = Report("l10")
    universe = universe or standard_universe(24)
    ctx = _fresh()
    ident = SigmaLocal(TableFunction({}, Identity(), integrated=True), name="f=(1)")
    _compare(rep, "LF(f=(1)) vs Nsigma", class_equal_on_universe(ident, SigmaNilpotent(), universe, ctx))
    for make, blocks in L27_SAMPLES:
        cls = make()
        lf = SigmaLocal(nilpotent_product_definition(cls, blocks, ctx))
        prod = nilpotent_product_class(cls, blocks)
        _compare(rep, f"Pi={set(blocks)} F={cls}", class_equal_on_universe(lf, prod, universe, ctx))
    return _finish(rep, t0, 60)


# ---------------------------------------------------------------------------
# the order-150 witness


def suite_t7(seed: int = 0) -> Report:
    t0 = time.time()
    rep = sublattice_gap_witness(_fresh())
    return _finish(rep, t0, 10)


# ---------------------------------------------------------------------------
# modular law, embeddings, compactness, separability


def suite_t9(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = modularity_suite(universe or standard_universe(24), samples=20, seed=seed, ctx=_fresh())
    return _finish(rep, t0, 300)


def suite_t8(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = sublattice_embedding_suite(universe or standard_universe(24), ctx=_fresh())
    return _finish(rep, t0, 60)


def compactness_instances(universe, count: int, seed: int, ctx: Context):
    """(G0, family, n) with G0 a nontrivial member of the join of the whole family."""
    rng = random.Random(seed)
    pool = [r.group for r in universe if 1 < r.order <= 12]
    out = []
    while len(out) < count:
        n = rng.choice((0, 1))
        family = [[g] for g in rng.sample(pool, 3)]
        union = [g for part in family for g in part]
        cands = [r.group for r in universe
                 if r.order > 1 and generated_member(r.group, union, n, "trivial", ctx) is YES]
        # prefer groups outside every single closure so that the probe has work to do
        hard = [g for g in cands if all(generated_member(g, p, n, "trivial", ctx) is not YES for p in family)]
        pick = hard or cands
        if pick:
            out.append((rng.choice(pick), family, n))
    return out


def suite_t10(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = Report("t10", seed=seed)
    universe = universe or standard_universe(24)
    ctx = _fresh()
    for g0, family, n in compactness_instances(universe, 5, seed, ctx):
        res = compactness_probe(g0, family, n, "trivial", ctx)
        rep.checked += 1
        tag = f"G0={group_label(g0)} family={[[group_label(g) for g in p] for p in family]} n={n}"
        rep.notes.append(f"{tag}: {res}")
        if res.status == "violation":
            rep.violations.append(tag)
        elif res.status != "found":
            rep.gaps.append(f"{tag}: {res.status}")
    return _finish(rep, t0, 60)


def separability_examples():
    """(label, term, formations, A, expected witnesses)."""
    x1, x2 = ("x", 0), ("x", 1)
    return [
        ("join", ("join", x1, x2), [Gpi({"s2"}), Gpi({"s3"})], "C6", ["C2", "C3"]),
        ("single", x1, [Gpi({"s2", "s3"})], "S3", ["S3"]),
        ("meet", ("meet", x1, x2), [Gpi({"s2", "s3"}), SigmaSoluble(None)], "S3", ["S3", "S3"]),
    ]


def suite_t11(seed: int = 0, universe=None) -> Report:
    from .lattice import separability_witness

    t0 = time.time()
    rep = Report("t11")
    universe = universe or standard_universe(24)
    ctx = _fresh()
    for label, term, forms, a, expected in separability_examples():
        for n in (0, 1):
            res = separability_witness(term, forms, build_group(a), universe, n, "trivial", ctx)
            rep.checked += 1
            tag = f"{label} A={a} n={n}"
            rep.notes.append(f"{tag}: {res}")
            if res.status != "found":
                rep.gaps.append(f"{tag}: {res.status}")
            elif n == 0 and res.witnesses != expected:
                rep.notes.append(f"{tag}: witnesses differ from the listed {expected}")
    return _finish(rep, t0, 60)


# ---------------------------------------------------------------------------
# decompositions over the socle


def suite_l24(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = Report("l24")
    universe = universe or standard_universe(24)
    ctx = _fresh()
    blocks = sorted({b for rec in universe for b in ctx.sigma.sigma_of(rec.group)} | {"s29"}, key=block_sort_key)
    groups = 0
    ties = 0
    for rec in universe:
        g = rec.group
        if g.order == 1 or len(direct_socle_factors(g)) < 2:
            continue
        used = False
        for b in blocks:
            if not o_block(g, b, ctx.sigma).is_trivial():
                continue
            used = True
            entries, inter = lemma24_decomposition(g, b, ctx)
            rep.checked += 1
            bad = [k for k, e in enumerate(entries) if not e.ok]
            ties += sum(not e.unique_largest for e in entries)
            if bad or not inter:
                rep.violations.append(f"group={rec.name} block={b} failing kernels={bad} intersection={inter}")
        groups += used
    rep.notes.append(f"{groups} groups with at least two minimal normal factors")
    rep.notes.append(f"{ties} kernels chosen among several maximal candidates")
    return _finish(rep, t0, 60)


def suite_l28(seed: int = 0, universe=None) -> Report:
    """N_Pi M joined with N_Pi H at level 1 against N_Pi (M joined with H at level 0)."""
    t0 = time.time()
    rep = Report("l28")
    universe = universe or standard_universe(24)
    ctx = _fresh()
    samples = ((["C2"], ["C3"], ("s2", "s3")), (["S3"], ["C4"], ("s2", "s3")), (["C5"], ["C2"], ("s2", "s5")))
    for a, b, blocks in samples:
        m = GeneratedClosure("form", "trivial", 0, [build_group(x) for x in a])
        h = GeneratedClosure("form", "trivial", 0, [build_group(x) for x in b])
        fm = nilpotent_product_definition(m, blocks, ctx)
        fh = nilpotent_product_definition(h, blocks, ctx)
        lhs = SigmaLocal(JoinFunction([fm, fh], 1, "trivial"))
        mh = join(m, h, 0, "trivial", ctx)
        rhs = nilpotent_product_class(mh, blocks)
        _compare(rep, f"M={a} H={b} Pi={set(blocks)}", class_equal_on_universe(lhs, rhs, universe, ctx))
    return _finish(rep, t0, 60)


# ---------------------------------------------------------------------------
# locality criterion


def t3_universe() -> Universe:
    extra = [(f"AF25_{d}", affine_frobenius(25, d)) for d in (2, 3, 6)]
    return Universe.build(150, seed_bound=24, extra=extra)


def suite_t3(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = Report("t3")
    universe = universe or t3_universe()
    ctx = _fresh()
    rep.notes.append(universe.summary())
    for label, cls in (("Nsigma", SigmaNilpotent()), ("G{s2,s3}", Gpi({"s2", "s3"}))):
        for n in (1, 2, 3):
            lr = is_n_multiply_local_on(cls, n, "trivial", universe, ctx)
            rep.checked += 1
            rep.notes.append(f"{label} {lr}")
            rep.violations += [f"{label} n={n} {v}" for v in lr.violations]
            rep.gaps += [f"{label} n={n} {v}" for v in lr.gaps]
    *_, j0 = theorem7_classes(ctx)
    b5 = ctx.sigma.block_of(5)
    lr = is_n_multiply_local_on(j0, 1, "trivial", universe, ctx, blocks=[b5])
    rep.checked += 1
    rep.notes.append(f"level-0 join at {b5}: {lr}")
    if not lr.violations:
        rep.violations.append("the level-0 join shows no definite violation at the block of 5")
    else:
        rep.notes.append(f"violation witness: {lr.violations[0]}")
    return _finish(rep, t0, 120)


# ---------------------------------------------------------------------------
# saturation


def suite_l6(seed: int = 0, universe=None) -> Report:
    t0 = time.time()
    rep = Report("l6", seed=seed)
    universe = universe or standard_universe(24)
    ctx = _fresh()
    rng = random.Random(seed)
    pool = [r.group for r in universe if 1 < r.order <= 12]
    classes = [SigmaLocal(f, name=f"f{k}") for k, f in enumerate(sample_sigma_functions(2, seed + 1))]
    classes.append(SigmaLocal(smallest_definition(rng.sample(pool, 2), 1, "trivial", ctx), name="gen1"))
    for cls in classes:
        for rec in universe:
            g = rec.group
            phi = frattini(g)
            if phi.is_trivial():
                continue
            top = ctx.member(cls, quotient(g, phi))
            if top is not YES:
                continue
            v = ctx.member(cls, g)
            rep.checked += 1
            if v is NO:
                rep.violations.append(f"{cls.name}: group={rec.name} has G/Phi in the class but G is not")
            elif v is UNKNOWN:
                rep.gaps.append(f"{cls.name}: group={rec.name} Unknown")
    return _finish(rep, t0, 60)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    criterion: int
    limit: float
    description: str
    run: Callable[..., Report]


REGISTRY: dict[str, SuiteEntry] = {e.name: e for e in [
    SuiteEntry("l17", 1, 30, "radical identities in wreath products", suite_l17),
    SuiteEntry("lemma1", 2, 60, "LF membership against recomputed radicals", suite_lemma1),
    SuiteEntry("t1", 3, 30, "smallest definitions of generated formations", suite_t1),
    SuiteEntry("t4", 4, 120, "recursion against the product formula", suite_t4),
    SuiteEntry("l10", 5, 60, "sigma-nilpotent products as LF classes", suite_l10),
    SuiteEntry("t7", 6, 10, "the order-150 join witness", suite_t7),
    SuiteEntry("t9", 7, 300, "modular law on sampled triples", suite_t9),
    SuiteEntry("t3", 8, 120, "locality criterion on evidence", suite_t3),
    SuiteEntry("l24", 9, 60, "socle decompositions with trivial radical", suite_l24),
    SuiteEntry("t8", 10, 60, "tau-joins against plain joins", suite_t8),
    SuiteEntry("t10", 10, 60, "finite subfamilies of joins", suite_t10),
    SuiteEntry("t11", 10, 60, "single-generated witnesses for lattice terms", suite_t11),
    SuiteEntry("l28", 10, 60, "joins of sigma-nilpotent products", suite_l28),
    SuiteEntry("l6", 11, 60, "saturation of sigma-local classes", suite_l6),
]}


def run_suite(name: str, seed: int = 0) -> Report:
    if name not in REGISTRY:
        from .errors import InputError
        raise InputError(f"unknown suite {name!r}; known: {', '.join(REGISTRY)}")
    return REGISTRY[name].run(seed=seed)
