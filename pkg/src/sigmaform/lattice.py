"""Meets and joins of formations and the lattice property suites."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .classes import (Context, GeneratedClosure, Gpi, GroupClass, Product, class_equal_on_universe,
                      default_context, monolithic_descent_certificate, parse_tau, semiformation_generate)
from .errors import InputError
from .permcore import PermGroup, affine_frobenius, canon_id
from .sigmakit import o_block
from .sigmalocal import (FormationSigmaFunction, JoinFunction, MeetFunction, SigmaLocal, definition_of,
                         generated_member, join_classes, meet_classes)
from .verdict import Verdict

YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN


@dataclass
class LatticeReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    gaps: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    seed: int | None = None
    wall: float = 0.0
    limit: float | None = None
    timings: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.violations:
            return "FAIL"
        return "GAP" if self.gaps else "PASS"

    def line(self) -> str:
        extra = f" seed={self.seed}" if self.seed is not None else ""
        return (f"CHECK {self.name} {self.status} checked={self.checked} violations={len(self.violations)} "
                f"gaps={len(self.gaps)}{extra}")

    def text(self) -> str:
        out = [self.line()]
        out += [f"  note: {n}" for n in self.notes]
        out += [f"  violation: {v}" for v in self.violations]
        out += [f"  gap: {g}" for g in self.gaps[:10]]
        if len(self.gaps) > 10:
            out.append(f"  ... {len(self.gaps) - 10} more gaps")
        return "\n".join(out)


# ---------------------------------------------------------------------------
# operations


def meet(c1: GroupClass, c2: GroupClass) -> GroupClass:
    return meet_classes([c1, c2])


def meet_definitions(f1: FormationSigmaFunction, f2: FormationSigmaFunction) -> MeetFunction:
    return MeetFunction([f1, f2])


def _as_class(x, n: int, tau, ctx: Context) -> GroupClass:
    if isinstance(x, GroupClass):
        return x
    if isinstance(x, FormationSigmaFunction):
        return SigmaLocal(x, max(n, 1), tau)
    groups = list(x)
    if not all(isinstance(g, PermGroup) for g in groups):
        raise InputError("join operands must be classes, definitions or lists of groups")
    return GeneratedClosure("form", tau, n, groups)


def join(x1, x2, n: int, tau="trivial", ctx: Context | None = None) -> GroupClass:
    """Join in the lattice of tau-closed n-multiply sigma-local formations.

    Operands may be group lists (generators), classes or sigma-functions."""
    ctx = ctx or default_context()
    tau = parse_tau(tau)
    if isinstance(x1, FormationSigmaFunction) and isinstance(x2, FormationSigmaFunction):
        if n < 1:
            raise InputError("definitions can only be joined at level >= 1")
        return SigmaLocal(JoinFunction([x1, x2], n, tau), n, tau)
    return join_classes([_as_class(x1, n, tau, ctx), _as_class(x2, n, tau, ctx)], n, tau, ctx)


def gen(groups: Sequence[PermGroup], n: int, tau="trivial") -> GeneratedClosure:
    return GeneratedClosure("form", tau, n, groups)


# ---------------------------------------------------------------------------
# modularity


def _pool(universe, max_order: int = 12) -> list:
    return [r for r in universe if 1 < r.order <= max_order]


def sample_modular_triples(universe, count: int, tau, seed: int) -> list:
    """(gens1, gens2, gens3) with gens2 drawn from the tau-semiformation of gens1."""
    rng = random.Random(seed)
    pool = _pool(universe)
    out = []
    while len(out) < count:
        g1 = rng.sample(pool, rng.randint(1, 2))
        sf = [g for g in semiformation_generate(tau, [r.group for r in g1]) if g.order > 1]
        g2 = rng.sample(sf, min(len(sf), rng.randint(1, 2))) if sf else []
        g3 = rng.sample(pool, rng.randint(1, 2))
        out.append(([r.group for r in g1], g2, [r.group for r in g3]))
    return out


def modularity_suite(universe, samples: int = 20, seed: int = 0, levels=(0, 1), taus=("trivial", "normal"),
                     ctx: Context | None = None) -> LatticeReport:
    """F1 meet (F2 join F3) against F2 join (F1 meet F3), for F2 inside F1."""
    ctx = ctx or default_context()
    t0 = time.time()
    rep = LatticeReport("t9", seed=seed)
    for tau in taus:
        for n in levels:
            triples = sample_modular_triples(universe, samples, tau, seed)
            for k, (a, b, c) in enumerate(triples):
                f1, f2, f3 = gen(a, n, tau), gen(b, n, tau), gen(c, n, tau)
                lhs = meet(f1, join(f2, f3, n, tau, ctx))
                rhs = join(f2, meet(f1, f3), n, tau, ctx)
                eq = class_equal_on_universe(lhs, rhs, universe, ctx)
                rep.checked += eq.agree + len(eq.disagreements) + len(eq.gaps)
                tag = f"tau={tau} n={n} triple={k} F1={f1} F2={f2} F3={f3}"
                rep.violations += [f"{tag} group={d[0]} lhs={d[1]} rhs={d[2]}" for d in eq.disagreements]
                rep.gaps += [f"{tag} group={d[0]} lhs={d[1]} rhs={d[2]}" for d in eq.gaps]
    rep.wall = time.time() - t0
    return rep


# ---------------------------------------------------------------------------
# the sublattice gap


def theorem7_classes(ctx: Context):
    """(witness group, F1, F2, level-1 join, level-0 join) for blocks of 5, 2 and 3."""
    sg = ctx.sigma
    b5, b2, b3 = sg.block_of(5), sg.block_of(2), sg.block_of(3)
    if len({b5, b2, b3}) < 3:
        raise InputError("the primes 5, 2 and 3 must lie in three distinct blocks")
    g = affine_frobenius(25, 6, name="witness150")
    f1 = Product(Gpi({b5}), Gpi({b2}))
    f2 = Product(Gpi({b5}), Gpi({b3}))
    return g, f1, f2, join(f1, f2, 1, "trivial", ctx), join(f1, f2, 0, "trivial", ctx)


def sublattice_gap_witness(ctx: Context | None = None) -> LatticeReport:
    """The order-150 group lies in the level-1 join of G_5G_2 and G_5G_3 but not in their level-0 join."""
    ctx = ctx or default_context()
    t0 = time.time()
    rep = LatticeReport("t7")
    g, f1, f2, j1, j0 = theorem7_classes(ctx)
    b5 = ctx.sigma.block_of(5)
    top = o_block(g, b5, ctx.sigma)
    rep.notes.append(f"|G| = {g.order}, |O_5(G)| = {top.order}, |G/O_5(G)| = {g.order // top.order}")
    checks = [("a1", ctx.member(f1, g), NO), ("a2", ctx.member(f2, g), NO), ("b", ctx.member(j1, g), YES),
              ("c", ctx.member(j0, g), NO)]
    for name, got, want in checks:
        rep.checked += 1
        rep.notes.append(f"assertion {name}: {got}")
        if got is UNKNOWN:
            rep.gaps.append(f"assertion {name} is Unknown")
        elif got is not want:
            rep.violations.append(f"assertion {name}: expected {want}, got {got}")
    cert = monolithic_descent_certificate(g, j0, ctx)
    rep.notes.append(f"certificate: {cert}")
    if cert is None:
        rep.violations.append("no descent certificate for the level-0 join")
    rep.wall = time.time() - t0
    return rep


# ---------------------------------------------------------------------------
# sublattice embedding, compactness, separability


DEFAULT_PAIRS = (("S3",), ("C4",)), (("C6",), ("S3",)), (("D4",), ("C3",)), (("A4",), ("C2",)), (("C5",), ("D5",))


def sublattice_embedding_suite(universe, pairs=None, taus=("normal", "all"), n: int = 1,
                               ctx: Context | None = None) -> LatticeReport:
    """The tau-join of tau-closed formations equals their join taken with the trivial functor."""
    from .catalog import build_group

    ctx = ctx or default_context()
    t0 = time.time()
    rep = LatticeReport("t8")
    pairs = pairs or DEFAULT_PAIRS
    for tau in taus:
        for a, b in pairs:
            ga = [build_group(x) if isinstance(x, str) else x for x in a]
            gb = [build_group(x) if isinstance(x, str) else x for x in b]
            f1, f2 = gen(ga, n, tau), gen(gb, n, tau)
            tau_join = join(f1, f2, n, tau, ctx)
            plain = SigmaLocal(JoinFunction([definition_of(f1, n, ctx), definition_of(f2, n, ctx)], n, "trivial"),
                               n, "trivial")
            eq = class_equal_on_universe(tau_join, plain, universe, ctx)
            rep.checked += eq.agree + len(eq.disagreements) + len(eq.gaps)
            tag = f"tau={tau} pair={f1} | {f2}"
            rep.violations += [f"{tag} group={d[0]} {d[1]} vs {d[2]}" for d in eq.disagreements]
            rep.gaps += [f"{tag} group={d[0]} {d[1]} vs {d[2]}" for d in eq.gaps]
    rep.wall = time.time() - t0
    return rep


@dataclass
class CompactnessResult:
    status: str              # "found", "violation", "gap" or "skipped"
    subfamily: list

    def __str__(self):
        return f"{self.status}: {self.subfamily}"


def compactness_probe(g0: PermGroup, family: Sequence[Sequence[PermGroup]], n: int, tau="trivial",
                      ctx: Context | None = None) -> CompactnessResult:
    """Smallest subfamily (by size, then position) whose join already contains G0."""
    ctx = ctx or default_context()
    union = [g for part in family for g in part]
    pre = generated_member(g0, union, n, tau, ctx)
    if pre is not YES:
        return CompactnessResult("skipped", [])
    saw_unknown = False
    for size in range(1, len(family) + 1):
        for idx in itertools.combinations(range(len(family)), size):
            gens = [g for i in idx for g in family[i]]
            v = generated_member(g0, gens, n, tau, ctx)
            if v is YES:
                return CompactnessResult("found", list(idx))
            saw_unknown |= v is UNKNOWN
    return CompactnessResult("gap" if saw_unknown else "violation", [])


def evaluate_term(term, classes: Sequence[GroupClass], n: int, tau, ctx: Context) -> GroupClass:
    """Terms are ("x", i), ("join", s, t) or ("meet", s, t)."""
    op = term[0]
    if op == "x":
        return classes[term[1]]
    a = evaluate_term(term[1], classes, n, tau, ctx)
    b = evaluate_term(term[2], classes, n, tau, ctx)
    if op == "join":
        return join(a, b, n, tau, ctx)
    if op == "meet":
        return meet(a, b)
    raise InputError(f"unknown term operator {op!r}")


def term_arity(term) -> int:
    if term[0] == "x":
        return term[1] + 1
    return max(term_arity(term[1]), term_arity(term[2]))


@dataclass
class SeparabilityResult:
    status: str              # "found", "gap" or "skipped"
    witnesses: list

    def __str__(self):
        return f"{self.status}: {self.witnesses}"


def separability_witness(term, formations: Sequence[GroupClass], a: PermGroup, universe, n: int = 0,
                         tau="trivial", ctx: Context | None = None, budget: int = 4000) -> SeparabilityResult:
    """Single-generated subformations gen(A_j) of the F_j whose term value still contains A."""
    ctx = ctx or default_context()
    tau = parse_tau(tau)
    if ctx.member(evaluate_term(term, formations, n, tau, ctx), a) is not YES:
        return SeparabilityResult("skipped", [])
    target = canon_id(a)
    cands = []
    for f in formations:
        c = [r.group for r in universe if ctx.member(f, r.group) is YES]
        # try A itself first, then small groups
        c.sort(key=lambda g: (canon_id(g) != target, g.order, canon_id(g)))
        cands.append(c)
    tried = 0
    combos = sorted(itertools.product(*[range(len(c)) for c in cands]), key=lambda ix: (sum(ix), ix))
    for ix in combos:
        tried += 1
        if tried > budget:
            break
        picks = [cands[j][i] for j, i in enumerate(ix)]
        gens = [gen([p], n, tau) for p in picks]
        if ctx.member(evaluate_term(term, gens, n, tau, ctx), a) is YES:
            from .catalog import group_label
            return SeparabilityResult("found", [group_label(p) for p in picks])
    return SeparabilityResult("gap", [])
