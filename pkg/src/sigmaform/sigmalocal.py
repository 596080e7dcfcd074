"""Formation sigma-functions, LF_sigma membership and generated sigma-local formations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .classes import (All, Context, Empty, GeneratedClosure, Gpi, GroupClass, Identity, Intersection,
                      Product, SigmaLocal, SigmaNilpotent, SigmaSoluble, class_included_on_universe,
                      dedupe, default_context, member, parse_tau, semiformation_generate)
from .errors import InputError, PreconditionError
from .permcore import PermGroup, Subgroup, _normal_product, normal_subgroups, quotient, socle_and_monolith
from .sigmakit import block_quotient, block_sort_key, o_block
from .verdict import Verdict

YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN


# ---------------------------------------------------------------------------
# formation sigma-functions


class FormationSigmaFunction:
    """A map from blocks to group classes."""

    integrated = False

    def value(self, block: str, ctx: Context) -> GroupClass:
        raise NotImplementedError

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def listed(self) -> list[str]:
        """Blocks given explicitly; every other block shares one rule."""
        return []

    def default_empty(self) -> bool:
        """True when every unlisted block is mapped to the empty class."""
        return True

    def support_primes(self, ctx: Context):
        """Primes of the support when it is finite, else None."""
        if not self.default_empty():
            return None
        out = set()
        for b in self.listed():
            if not _is_empty(self.value(b, ctx)):
                out |= ctx.sigma.primes_of(b)
        return frozenset(out)

    def support(self, ctx: Context, blocks: Iterable[str]) -> set[str]:
        """Blocks among ``blocks`` with a nonempty value."""
        return {b for b in blocks if not _is_empty(self.value(b, ctx))}

    def _default_text(self, ctx) -> str:
        return "empty" if self.default_empty() else "(depends on the block)"

    def describe(self, ctx: Context | None = None) -> str:
        ctx = ctx or default_context()
        lines = [f"sigma {b} := {self.value(b, ctx)}" for b in self.listed()]
        lines.append(f"default := {self._default_text(ctx)}")
        return "\n".join(lines)

    def __eq__(self, other):
        return isinstance(other, FormationSigmaFunction) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return self.describe().replace("\n", "; ")


def _is_empty(c) -> bool:
    return isinstance(c, Empty) or (isinstance(c, GeneratedClosure) and c.is_empty())


class TableFunction(FormationSigmaFunction):
    def __init__(self, assignments: Mapping[str, GroupClass], default: GroupClass | None = None,
                 integrated: bool = False):
        self.assignments = dict(assignments)
        self.default = default if default is not None else Empty()
        self.integrated = integrated

    def value(self, block, ctx):
        return self.assignments.get(block, self.default)

    def listed(self):
        return sorted(self.assignments)

    def default_empty(self):
        return _is_empty(self.default)

    def _default_text(self, ctx):
        return str(self.default)

    @property
    def key(self):
        return ("table", tuple(sorted((b, c.key) for b, c in self.assignments.items())), self.default.key)


class CanonicalFunction(FormationSigmaFunction):
    """F(b) = G_b (f(b) meet LF(f)): the full integrated definition of LF(f)."""
    integrated = True

    def __init__(self, base: FormationSigmaFunction):
        self.base = base

    def value(self, block, ctx):
        v = self.base.value(block, ctx)
        if _is_empty(v):
            return Empty()
        return Product(Gpi({block}), Intersection([v, SigmaLocal(self.base)]))

    def listed(self):
        return self.base.listed()

    def default_empty(self):
        return self.base.default_empty()

    def _default_text(self, ctx):
        if self.base.default_empty():
            return "empty"
        return f"prod(Gpi{{<block>}},meet(<base value>,{SigmaLocal(self.base)}))"

    @property
    def key(self):
        return ("canon", self.base.key)


class MeetFunction(FormationSigmaFunction):
    """Blockwise intersection; defines the intersection of the LF classes."""

    def __init__(self, parts: Sequence[FormationSigmaFunction]):
        if not parts:
            raise InputError("a meet of definitions needs at least one part")
        self.parts = tuple(parts)
        self.integrated = all(p.integrated for p in parts)

    def value(self, block, ctx):
        vals = [p.value(block, ctx) for p in self.parts]
        if any(_is_empty(v) for v in vals):
            return Empty()
        return vals[0] if len(vals) == 1 else Intersection(vals)

    def listed(self):
        return sorted({b for p in self.parts for b in p.listed()})

    def default_empty(self):
        return any(p.default_empty() for p in self.parts)

    def support_primes(self, ctx):
        bounds = [b for b in (p.support_primes(ctx) for p in self.parts) if b is not None]
        if not bounds:
            return None
        out = bounds[0]
        for b in bounds[1:]:
            out &= b
        return out

    @property
    def key(self):
        return ("meetf",) + tuple(p.key for p in self.parts)


class JoinFunction(FormationSigmaFunction):
    """Blockwise level-(n-1) join of definitions."""

    def __init__(self, parts: Sequence[FormationSigmaFunction], level: int, tau="trivial"):
        if level < 1:
            raise InputError("a join of definitions needs level >= 1")
        self.parts = tuple(parts)
        self.level = level
        self.tau = parse_tau(tau)
        self.integrated = all(p.integrated for p in parts)

    def value(self, block, ctx):
        return join_classes([p.value(block, ctx) for p in self.parts], self.level - 1, self.tau, ctx)

    def listed(self):
        return sorted({b for p in self.parts for b in p.listed()})

    def default_empty(self):
        return all(p.default_empty() for p in self.parts)

    def support_primes(self, ctx):
        out = set()
        for p in self.parts:
            b = p.support_primes(ctx)
            if b is None:
                return None
            out |= b
        return frozenset(out)

    @property
    def key(self):
        return ("joinf", self.level, self.tau.kind) + tuple(p.key for p in self.parts)


# ---------------------------------------------------------------------------
# LF membership


def lf_member(f: FormationSigmaFunction, g: PermGroup, ctx: Context | None = None) -> Verdict:
    """G in LF(f) iff G/F_b(G) lies in f(b) for every block b of sigma(G)."""
    ctx = ctx or default_context()
    if g.order == 1:
        return YES
    out = YES
    for b in sorted(ctx.sigma.sigma_of(g)):
        v = f.value(b, ctx)
        if _is_empty(v):
            return NO
        out = out & ctx.member(v, block_quotient(g, b, ctx.sigma))
        if out is NO:
            return NO
    return out


def class_at(groups: Sequence[PermGroup], block: str, ctx: Context | None = None) -> list[PermGroup]:
    """{G/F_b(G) : G in X} when b meets X, else the empty list."""
    ctx = ctx or default_context()
    if not any(block in ctx.sigma.sigma_of(g) for g in groups):
        return []
    return dedupe(block_quotient(g, block, ctx.sigma) for g in groups)


def sigma_of_set(groups: Sequence[PermGroup], ctx: Context) -> frozenset:
    out = set()
    for g in groups:
        out |= ctx.sigma.sigma_of(g)
    return frozenset(out)


def smallest_definition(groups: Sequence[PermGroup], n: int, tau="trivial",
                        ctx: Context | None = None) -> TableFunction:
    """f(b) = level-(n-1) generated formation of class_at(X, b) on sigma(X), empty elsewhere."""
    ctx = ctx or default_context()
    if n < 1:
        raise InputError("smallest definitions exist for n >= 1")
    if not groups:
        raise InputError("the generating set must be nonempty")
    tau = parse_tau(tau)
    table = {b: GeneratedClosure("form", tau, n - 1, class_at(groups, b, ctx))
             for b in sorted(sigma_of_set(groups, ctx))}
    return TableFunction(table, Empty(), integrated=True)


def canonical_from(f: FormationSigmaFunction) -> CanonicalFunction:
    if isinstance(f, CanonicalFunction):
        return f
    return CanonicalFunction(f)


def generated_member(g: PermGroup, groups: Sequence[PermGroup], n: int, tau="trivial",
                     ctx: Context | None = None) -> Verdict:
    """Membership in the tau-closed n-multiply sigma-local formation generated by X."""
    ctx = ctx or default_context()
    tau = parse_tau(tau)
    if n == 0:
        return member(GeneratedClosure("form", tau, 0, groups), g, ctx)
    if not groups:
        return NO
    if g.order == 1:
        return YES
    sx = sigma_of_set(groups, ctx)
    if not ctx.sigma.sigma_of(g) <= sx:
        return NO
    out = YES
    for b in sorted(ctx.sigma.sigma_of(g)):
        inner = GeneratedClosure("form", tau, n - 1, class_at(groups, b, ctx))
        out = out & ctx.member(inner, block_quotient(g, b, ctx.sigma))
        if out is NO:
            return NO
    return out


def formula_class(groups: Sequence[PermGroup], n: int, tau="trivial", ctx: Context | None = None) -> GroupClass:
    """form of the union over blocks b of G_b times the level-(n-1) closure of X(b)."""
    ctx = ctx or default_context()
    if n < 1:
        raise InputError("the product formula needs n >= 1")
    tau = parse_tau(tau)
    parts = [Product(Gpi({b}), GeneratedClosure("form", tau, n - 1, class_at(groups, b, ctx)))
             for b in sorted(sigma_of_set(groups, ctx))]
    return GeneratedClosure("form", tau, 0, (), parts)


def generated_member_formula(g: PermGroup, groups: Sequence[PermGroup], n: int, tau="trivial",
                             ctx: Context | None = None) -> Verdict:
    ctx = ctx or default_context()
    return ctx.member(formula_class(groups, n, tau, ctx), g)


# ---------------------------------------------------------------------------
# definitions of known classes, joins


def definition_of(cls: GroupClass, n: int = 1, ctx: Context | None = None) -> FormationSigmaFunction:
    """A sigma-local definition of ``cls`` whose values are (n-1)-multiply sigma-local."""
    ctx = ctx or default_context()
    if isinstance(cls, SigmaLocal):
        return cls.f
    if isinstance(cls, Empty):
        raise InputError("the empty class has no sigma-local definition")
    if isinstance(cls, Identity):
        return TableFunction({}, Empty(), integrated=True)
    if isinstance(cls, All):
        return TableFunction({}, All(), integrated=True)
    if isinstance(cls, (Gpi, SigmaSoluble)):
        if cls.blocks is None:
            return TableFunction({}, cls, integrated=True)
        return TableFunction({b: cls for b in cls.blocks}, Empty(), integrated=True)
    if isinstance(cls, SigmaNilpotent):
        return TableFunction({}, Identity(), integrated=True)
    if isinstance(cls, GeneratedClosure) and cls.level >= 1 and cls.kind == "form":
        return smallest_definition(cls.gens, cls.level, cls.tau, ctx) if cls.gens else TableFunction({}, Empty())
    if isinstance(cls, Product) and isinstance(cls.lower, Gpi) and isinstance(cls.upper, Gpi):
        lo, up = cls.lower.blocks, cls.upper.blocks
        if lo is not None and up is not None and len(lo) == 1 and len(up) == 1 and lo != up:
            (b,), (c,) = tuple(lo), tuple(up)
            return TableFunction({b: Gpi({c}), c: Identity()}, Empty(), integrated=True)
    if isinstance(cls, Intersection):
        return MeetFunction([definition_of(p, n, ctx) for p in cls.parts])
    raise InputError(f"no sigma-local definition is known for {cls}")


def join_classes(classes: Sequence[GroupClass], n: int, tau="trivial", ctx: Context | None = None) -> GroupClass:
    """The join in the lattice of tau-closed n-multiply sigma-local formations."""
    ctx = ctx or default_context()
    tau = parse_tau(tau)
    cs = [c for c in classes if not _is_empty(c)]
    uniq = []
    for c in cs:
        if c not in uniq:
            uniq.append(c)
    if not uniq:
        return Empty()
    if len(uniq) == 1:
        return uniq[0]
    same_gen = all(isinstance(c, GeneratedClosure) and c.kind == "form" and c.level == n and c.tau == tau
                   for c in uniq)
    if n == 0:
        gens, parts = [], []
        for c in uniq:
            if same_gen or (isinstance(c, GeneratedClosure) and c.kind == "form" and c.level == 0
                            and c.tau == tau):
                gens.extend(c.gens)
                parts.extend(c.parts)
            else:
                parts.append(c)
        return GeneratedClosure("form", tau, 0, gens, parts)
    if same_gen:
        return GeneratedClosure("form", tau, n, [g for c in uniq for g in c.gens])
    return SigmaLocal(JoinFunction([definition_of(c, n, ctx) for c in uniq], n, tau), n, tau)


def meet_classes(classes: Sequence[GroupClass]) -> GroupClass:
    cs = [c for c in classes if not isinstance(c, All)]
    if any(_is_empty(c) for c in cs):
        return Empty()
    if not cs:
        return All()
    return cs[0] if len(cs) == 1 else Intersection(cs)


# ---------------------------------------------------------------------------
# locality criterion and index


@dataclass
class LocalityReport:
    n: int
    blocks: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    gaps: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations

    def __str__(self):
        state = "violated" if self.violations else "holds on evidence"
        return (f"level {self.n}: {state}; blocks {self.blocks}; violations {len(self.violations)}; "
                f"gaps {len(self.gaps)}")


def block_value_generators(cls: GroupClass, block: str, universe, ctx: Context) -> list[PermGroup]:
    """Block quotients G/F_b(G) of the universe members of cls (when b meets them)."""
    members = [rec.group for rec in universe if ctx.member(cls, rec.group) is YES]
    return class_at(members, block, ctx)


def is_n_multiply_local_on(cls: GroupClass, n: int, tau, universe, ctx: Context | None = None,
                           blocks: Iterable[str] | None = None) -> LocalityReport:
    """Test G_b * (level-(n-1) closure of the block values of cls) inside cls for every block.

    Block values are generated from the universe members of cls, so a
    violation is definitive while a pass is evidence only."""
    ctx = ctx or default_context()
    tau = parse_tau(tau)
    if n < 1:
        raise InputError("the locality criterion needs n >= 1")
    if blocks is None:
        blocks = sorted({b for rec in universe for b in ctx.sigma.sigma_of(rec.group)}, key=block_sort_key)
    rep = LocalityReport(n, list(blocks))
    for b in rep.blocks:
        gens = block_value_generators(cls, b, universe, ctx)
        if not gens:
            continue
        lhs = Product(Gpi({b}), GeneratedClosure("form", tau, n - 1, gens))
        inc = class_included_on_universe(lhs, cls, universe, ctx)
        rep.violations += [(b,) + d for d in inc.disagreements]
        rep.gaps += [(b,) + d for d in inc.gaps]
    return rep


@dataclass
class IndexReport:
    lower: int
    upper: int | None
    n_max: int
    levels: list

    def __str__(self):
        if self.upper is None:
            return f">= {self.lower} (checked to {self.n_max}, on evidence)"
        if self.lower == self.upper:
            return f"{self.lower} on evidence"
        return f"in [{self.lower}, {self.upper}]"


def sigma_locality_index(cls: GroupClass, n_max: int, tau, universe, ctx: Context | None = None) -> IndexReport:
    """Largest n (capped at n_max) for which the level-n criterion holds on the universe.

    A definite violation at level n caps the index at n-1.  Gaps at a level
    widen the reported range instead of being read as passes."""
    ctx = ctx or default_context()
    levels = []
    lower = 0
    for n in range(1, n_max + 1):
        rep = is_n_multiply_local_on(cls, n, tau, universe, ctx)
        levels.append(rep)
        if rep.violations:
            return IndexReport(lower, n - 1, n_max, levels)
        if rep.gaps:
            return IndexReport(lower, None, n_max, levels)
        lower = n
    return IndexReport(lower, None, n_max, levels)


# ---------------------------------------------------------------------------
# special constructions


def direct_socle_factors(g: PermGroup) -> list[Subgroup]:
    """Minimal normal subgroups N_1..N_t with Soc(G) = N_1 x ... x N_t (greedy)."""
    mins, soc, _ = socle_and_monolith(g)
    chosen: list[Subgroup] = []
    prod = g.trivial
    for m in mins:
        if (prod.elements & m.elements) == frozenset({0}):
            chosen.append(m)
            prod = _normal_product(prod, m)
        if prod == soc:
            break
    return chosen


@dataclass
class Lemma24Entry:
    kernel: Subgroup
    monolithic: bool
    monolith_matches: bool
    radical_trivial: bool
    unique_largest: bool     # informational: only maximality is used

    @property
    def ok(self):
        return self.monolithic and self.monolith_matches and self.radical_trivial


def lemma24_decomposition(g: PermGroup, block: str, ctx: Context | None = None):
    """Kernels M_k for a direct decomposition of Soc(G) when O_b(G) = 1.

    Returns (entries, intersection_trivial)."""
    ctx = ctx or default_context()
    if g.order == 1:
        raise PreconditionError("the trivial group has no socle")
    if not o_block(g, block, ctx.sigma).is_trivial():
        raise PreconditionError(f"O_{block}(G) is not trivial")
    factors = direct_socle_factors(g)
    if len(factors) < 2:
        raise PreconditionError("the socle has a single minimal normal factor")
    normals = normal_subgroups(g)
    entries = []
    inter = g.whole.elements
    for k, nk in enumerate(factors):
        others = g.trivial
        for j, nj in enumerate(factors):
            if j != k:
                others = _normal_product(others, nj)
        cands = [m for m in normals if others <= m and not nk <= m]
        # several maximal candidates can exist (C2 x C4); take the first of largest order
        mk = max(cands, key=lambda s: s.order)
        unique = all(c <= mk for c in cands)
        q = quotient(g, mk)
        mono = q.order > 1 and socle_and_monolith(q)[2] is not None
        # N_k M_k / M_k is G-isomorphic to N_k exactly when N_k meets M_k trivially
        image = _normal_product(nk, mk)
        matches = mono and (nk.elements & mk.elements) == frozenset({0}) and \
            image.order // mk.order == socle_and_monolith(q)[1].order
        rad = o_block(q, block, ctx.sigma).is_trivial()
        entries.append(Lemma24Entry(mk, mono, matches, rad, unique))
        inter = inter & mk.elements
    return entries, len(inter) == 1


def nilpotent_product_definition(cls: GroupClass, blocks: Iterable[str] | None,
                                 ctx: Context | None = None) -> TableFunction:
    """f(b) = cls on the blocks (all blocks when None), empty elsewhere."""
    ctx = ctx or default_context()
    if blocks is None:
        return TableFunction({}, cls, integrated=True)
    blocks = frozenset(ctx.sigma.check_block(b) for b in blocks)
    bound = cls.prime_bound(ctx)
    if bound is not None:
        allowed = set()
        for b in blocks:
            allowed |= ctx.sigma.primes_of(b)
        if not bound <= allowed:
            raise InputError(f"the class {cls} involves primes outside the given blocks")
    return TableFunction({b: cls for b in blocks}, Empty(), integrated=True)


def nilpotent_product_class(cls: GroupClass, blocks: Iterable[str] | None) -> GroupClass:
    """N_Pi times cls, with N_Pi the sigma-nilpotent Pi-groups."""
    lower = SigmaNilpotent() if blocks is None else Intersection([SigmaNilpotent(), Gpi(blocks)])
    return Product(lower, cls)


@dataclass
class TransferReport:
    status: str          # "pass", "violation", "gap" or "skipped"
    detail: str

    def __str__(self):
        return f"{self.status}: {self.detail}"


def lemma25_transfer_check(g: PermGroup, block: str, groups: Sequence[PermGroup], n: int, tau="trivial",
                           ctx: Context | None = None) -> TransferReport:
    """If G lies in the generated formation and O_b(G) = 1, G also lies in the
    formation generated by the quotients H/O_b(H) of the semiformation."""
    ctx = ctx or default_context()
    tau = parse_tau(tau)
    if g.order == 1:
        return TransferReport("pass", "trivial group")
    if not o_block(g, block, ctx.sigma).is_trivial():
        return TransferReport("skipped", f"O_{block}(G) is not trivial")
    pre = generated_member(g, groups, n, tau, ctx)
    if pre is not YES:
        return TransferReport("skipped", f"G is not a confirmed member ({pre})")
    m = semiformation_generate(tau, groups)
    reduced = dedupe(quotient(h, o_block(h, block, ctx.sigma)) for h in m)
    v = generated_member(g, reduced, n, tau, ctx)
    if v is YES:
        return TransferReport("pass", f"{len(reduced)} reduced generators")
    if v is NO:
        return TransferReport("violation", "G is excluded from the reduced closure")
    return TransferReport("gap", "membership in the reduced closure is Unknown")
