"""Group classes as expression trees with a three-valued membership oracle.

Every node answers ``member(G, ctx)`` with Yes, No or Unknown.  Predicate
nodes are always definite.  Generated closures are decided inside a bounded
universe: a Yes means a concrete derivation was found, a No means a sound
certificate excluded the group, and anything else is reported as Unknown.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import IndeterminateError, InputError
from .permcore import (PermGroup, Subgroup, all_subgroups, canon_id, centralizer_of_normal,
                       derived_length, exponent, nilpotency_class, normal_subgroups,
                       prime_divisors, quotient, socle_and_monolith)
from .sigmakit import SIGMA1, SigmaPartition, is_sigma_nilpotent, is_sigma_soluble
from .verdict import Verdict, all_of, any_of

YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN


# ---------------------------------------------------------------------------
# subgroup functors


@dataclass(frozen=True)
class SubgroupFunctor:
    """One of the three closed functors: trivial, normal or all."""
    kind: str

    def __post_init__(self):
        if self.kind not in ("trivial", "normal", "all"):
            raise InputError(f"unknown subgroup functor {self.kind!r}")

    def subgroups(self, g: PermGroup) -> list[Subgroup]:
        if self.kind == "trivial":
            return [g.whole]
        if self.kind == "normal":
            return list(normal_subgroups(g))
        return list(all_subgroups(g))

    def groups(self, g: PermGroup) -> list[PermGroup]:
        return [s.as_group() for s in self.subgroups(g)]

    def __str__(self) -> str:
        return self.kind


TRIVIAL = SubgroupFunctor("trivial")
NORMAL = SubgroupFunctor("normal")
ALL = SubgroupFunctor("all")


def parse_tau(text) -> SubgroupFunctor:
    if isinstance(text, SubgroupFunctor):
        return text
    alias = {"trivial": "trivial", "normal": "normal", "all": "all", "all_subgroups": "all",
             "normal_subgroups": "normal"}
    if text not in alias:
        raise InputError(f"unknown subgroup functor {text!r}")
    return SubgroupFunctor(alias[text])


# ---------------------------------------------------------------------------
# evaluation context


class Context:
    """Partition, closure bound and the verdict memo shared by a computation."""

    def __init__(self, sigma: SigmaPartition = SIGMA1, bound: int = 48):
        self.sigma = sigma
        self.bound = bound
        self.memo: dict = {}
        self._fix: dict = {}

    @property
    def universe(self):
        from .universe import standard_universe
        return standard_universe(self.bound)

    def member(self, cls: "GroupClass", g: PermGroup) -> Verdict:
        if not cls.memoize:
            return cls._member(g, self)
        key = (cls.key, canon_id(g))
        v = self.memo.get(key)
        if v is None:
            v = cls._member(g, self)
            self.memo[key] = v
        return v


_DEFAULT: dict = {}


def default_context(sigma: SigmaPartition = SIGMA1, bound: int = 48) -> Context:
    k = (sigma, bound)
    if k not in _DEFAULT:
        _DEFAULT[k] = Context(sigma, bound)
    return _DEFAULT[k]


def member(cls: "GroupClass", g: PermGroup, ctx: Context | None = None) -> Verdict:
    return (ctx or default_context()).member(cls, g)


# ---------------------------------------------------------------------------
# class nodes


class GroupClass:
    memoize = False
    hereditary = False

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def _member(self, g: PermGroup, ctx: Context) -> Verdict:
        raise NotImplementedError

    def member(self, g: PermGroup, ctx: Context | None = None) -> Verdict:
        return member(self, g, ctx)

    def prime_bound(self, ctx: Context):
        """A finite set of primes containing pi(G) for every member, or None."""
        return None

    def variety(self, ctx: Context):
        """Identities (a _Variety) satisfied by every member, or None."""
        return None

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupClass) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return str(self)


class Empty(GroupClass):
    hereditary = True
    key = ("empty",)

    def variety(self, ctx):
        return _Variety(1, 0, 0, frozenset())

    def _member(self, g, ctx):
        return NO

    def prime_bound(self, ctx):
        return frozenset()

    def __str__(self):
        return "empty"


class Identity(GroupClass):
    hereditary = True
    key = ("one",)

    def variety(self, ctx):
        return _Variety(1, 0, 0, frozenset())

    def _member(self, g, ctx):
        return Verdict.of(g.order == 1)

    def prime_bound(self, ctx):
        return frozenset()

    def __str__(self):
        return "one"


class All(GroupClass):
    hereditary = True
    key = ("all",)

    def _member(self, g, ctx):
        return YES

    def __str__(self):
        return "all"


def _blocks_text(blocks) -> str:
    return "*" if blocks is None else ",".join(sorted(blocks))


def _block_primes(blocks, ctx):
    if blocks is None:
        return None
    out = set()
    for b in blocks:
        out |= ctx.sigma.primes_of(b)
    return frozenset(out)


class Gpi(GroupClass):
    """All groups G with sigma(G) inside the given blocks (None means every block)."""
    hereditary = True

    def __init__(self, blocks: Iterable[str] | None):
        self.blocks = None if blocks is None else frozenset(blocks)

    @property
    def key(self):
        return ("Gpi", None if self.blocks is None else tuple(sorted(self.blocks)))

    def _member(self, g, ctx):
        if self.blocks is None:
            return YES
        return Verdict.of(ctx.sigma.sigma_of(g) <= self.blocks)

    def prime_bound(self, ctx):
        return _block_primes(self.blocks, ctx)

    def __str__(self):
        return f"Gpi{{{_blocks_text(self.blocks)}}}"


class SigmaSoluble(GroupClass):
    hereditary = True

    def __init__(self, blocks: Iterable[str] | None = None):
        self.blocks = None if blocks is None else frozenset(blocks)

    @property
    def key(self):
        return ("Ssol", None if self.blocks is None else tuple(sorted(self.blocks)))

    def _member(self, g, ctx):
        if self.blocks is not None and not ctx.sigma.sigma_of(g) <= self.blocks:
            return NO
        return Verdict.of(is_sigma_soluble(g, ctx.sigma))

    def prime_bound(self, ctx):
        return _block_primes(self.blocks, ctx)

    def __str__(self):
        return f"Ssol{{{_blocks_text(self.blocks)}}}"


class SigmaNilpotent(GroupClass):
    hereditary = True
    key = ("Nsigma",)

    def _member(self, g, ctx):
        return Verdict.of(is_sigma_nilpotent(g, ctx.sigma))

    def __str__(self):
        return "Nsigma"


def residual_bounds(g: PermGroup, cls: GroupClass, ctx: Context) -> tuple[Subgroup, Subgroup]:
    """(lower, upper) brackets for the cls-residual of G.

    ``upper`` intersects the kernels with a Yes quotient, ``lower`` also takes
    the Unknown ones; for a formation the true residual lies in between."""
    yes = g.whole.elements
    maybe = g.whole.elements
    for n in normal_subgroups(g):
        v = ctx.member(cls, quotient(g, n))
        if v is YES:
            yes = yes & n.elements
        if v is not NO:
            maybe = maybe & n.elements
    return Subgroup(g, maybe), Subgroup(g, yes)


def residual_of(g: PermGroup, cls: GroupClass, ctx: Context | None = None) -> Subgroup:
    """The cls-residual; raises IndeterminateError when an Unknown verdict blocks it."""
    ctx = ctx or default_context()
    for n in normal_subgroups(g):
        q = quotient(g, n)
        if ctx.member(cls, q) is UNKNOWN:
            raise IndeterminateError(f"residual of {g} for {cls} is blocked by a quotient of order {q.order}",
                                     blocking=q)
    lo, hi = residual_bounds(g, cls, ctx)
    return hi


class Product(GroupClass):
    """Groups whose lower-residual lies in the upper class: G in MH iff G^H in M."""
    memoize = True

    def __init__(self, lower: GroupClass, upper: GroupClass):
        self.lower = lower
        self.upper = upper

    @property
    def key(self):
        return ("prod", self.lower.key, self.upper.key)

    def _member(self, g, ctx):
        if isinstance(self.upper, Empty) or isinstance(self.lower, Empty):
            return NO
        lo, hi = residual_bounds(g, self.upper, ctx)
        if lo == hi:
            return ctx.member(self.lower, hi.as_group())
        if self.lower.hereditary:
            if ctx.member(self.lower, hi.as_group()) is YES:
                return YES
            if ctx.member(self.lower, lo.as_group()) is NO:
                return NO
        return UNKNOWN

    def prime_bound(self, ctx):
        a, b = self.lower.prime_bound(ctx), self.upper.prime_bound(ctx)
        if isinstance(self.upper, Empty) or isinstance(self.lower, Empty):
            return frozenset()
        if a is None or b is None:
            return None
        return a | b

    def __str__(self):
        return f"prod({self.lower},{self.upper})"


class Intersection(GroupClass):
    def __init__(self, parts: Sequence[GroupClass]):
        if not parts:
            raise InputError("an intersection needs at least one class")
        self.parts = tuple(parts)

    @property
    def hereditary(self):
        return all(p.hereditary for p in self.parts)

    @property
    def key(self):
        return ("meet",) + tuple(p.key for p in self.parts)

    def _member(self, g, ctx):
        return all_of(ctx.member(p, g) for p in self.parts)

    def prime_bound(self, ctx):
        bounds = [b for b in (p.prime_bound(ctx) for p in self.parts) if b is not None]
        if not bounds:
            return None
        out = bounds[0]
        for b in bounds[1:]:
            out = out & b
        return out

    def variety(self, ctx):
        vs = [v for v in (p.variety(ctx) for p in self.parts) if v is not None]
        if not vs:
            return None
        out = vs[0]
        for v in vs[1:]:
            out = out.meet(v)
        return out

    def __str__(self):
        return "meet(" + ",".join(str(p) for p in self.parts) + ")"


# ---------------------------------------------------------------------------
# closure operators on finite sets of groups


def dedupe(groups: Iterable[PermGroup]) -> list[PermGroup]:
    """One representative per isomorphism type, first occurrence wins."""
    seen, out = set(), []
    for g in groups:
        c = canon_id(g)
        if c not in seen:
            seen.add(c)
            out.append(g)
    return out


def s_tau(tau, groups: Iterable[PermGroup]) -> list[PermGroup]:
    tau = parse_tau(tau)
    out = []
    for g in groups:
        out.extend(tau.groups(g))
    return dedupe(out)


def q_closure(groups: Iterable[PermGroup]) -> list[PermGroup]:
    out = []
    for g in dedupe(groups):
        out.extend(quotient(g, n) for n in normal_subgroups(g))
    return dedupe(out)


def semiformation_generate(tau, groups: Iterable[PermGroup], universe=None) -> list[PermGroup]:
    """Q S_tau of the generators, sorted by order; cut to the universe bound if given."""
    out = q_closure(s_tau(tau, groups))
    if universe is not None:
        out = [g for g in out if g.order <= universe.bound]
    return sorted(out, key=lambda g: (g.order, canon_id(g)))


def r0_member(g: PermGroup, test) -> Verdict:
    """Is G a subdirect product of groups passing ``test``?

    ``test`` is a GroupClass, a set of canonical ids or a callable returning
    a Verdict.  For a quotient-closed test the family of all admissible kernels
    is the best possible one, so intersecting it decides the question."""
    if isinstance(test, GroupClass):
        ctx = default_context()
        fn = lambda h: ctx.member(test, h)
    elif isinstance(test, (set, frozenset)):
        fn = lambda h: Verdict.of(canon_id(h) in test)
    else:
        fn = test
    yes = g.whole.elements
    maybe = g.whole.elements
    for n in normal_subgroups(g):
        v = fn(quotient(g, n))
        if isinstance(v, bool):
            v = Verdict.of(v)
        if v is YES:
            yes = yes & n.elements
        if v is not NO:
            maybe = maybe & n.elements
    if len(yes) == 1:
        return YES
    if len(maybe) > 1:
        return NO
    return UNKNOWN


def monolithic_kernels(g: PermGroup) -> list[Subgroup]:
    """Normal subgroups N with G/N monolithic; they intersect trivially."""
    def build():
        normals = normal_subgroups(g)
        out = []
        for n in normals:
            above = [m for m in normals if n < m]
            mins = [m for m in above if not any(n < k < m for k in above)]
            if len(mins) == 1:
                out.append(n)
        return out
    return g.cached("monolithic_kernels", build)


def monolithic_quotients(g: PermGroup) -> list[PermGroup]:
    return [quotient(g, n) for n in monolithic_kernels(g)]


@dataclass
class _SocleData:
    socle: int
    top: int


def _socle_data(a: PermGroup) -> _SocleData:
    """Canonical ids of Soc(A) and A/C_A(Soc A) for a monolithic A."""
    def build():
        _, soc, _ = socle_and_monolith(a)
        c = centralizer_of_normal(a, soc)
        return _SocleData(canon_id(soc.as_group()), canon_id(quotient(a, c)))
    return a.cached("socle_data", build)


@dataclass
class _Variety:
    """Identities shared by every group of a finite set; inherited by its formation."""
    exponent: int
    derived_length: int | None
    nil_class: int | None
    primes: frozenset

    @classmethod
    def of(cls, groups: Sequence[PermGroup]) -> "_Variety":
        e, dl, nc, ps = 1, 0, 0, set()
        for g in groups:
            e = math.lcm(e, exponent(g))
            d = derived_length(g)
            dl = None if (dl is None or d is None) else max(dl, d)
            c = nilpotency_class(g)
            nc = None if (nc is None or c is None) else max(nc, c)
            ps |= set(prime_divisors(g.order))
        return cls(e, dl, nc, frozenset(ps))

    def join(self, other: "_Variety") -> "_Variety":
        """Identities holding in both sets."""
        dl = None if self.derived_length is None or other.derived_length is None else \
            max(self.derived_length, other.derived_length)
        nc = None if self.nil_class is None or other.nil_class is None else max(self.nil_class, other.nil_class)
        return _Variety(math.lcm(self.exponent, other.exponent), dl, nc, self.primes | other.primes)

    def meet(self, other: "_Variety") -> "_Variety":
        """Identities holding in either set (for an intersection of classes)."""
        dls = [d for d in (self.derived_length, other.derived_length) if d is not None]
        ncs = [c for c in (self.nil_class, other.nil_class) if c is not None]
        return _Variety(math.gcd(self.exponent, other.exponent), min(dls) if dls else None,
                        min(ncs) if ncs else None, self.primes & other.primes)

    def excludes(self, a: PermGroup) -> str | None:
        if not set(prime_divisors(a.order)) <= self.primes:
            return "prime"
        if self.exponent % exponent(a):
            return "exponent"
        if self.derived_length is not None:
            d = derived_length(a)
            if d is None or d > self.derived_length:
                return "derived length"
        if self.nil_class is not None:
            c = nilpotency_class(a)
            if c is None or c > self.nil_class:
                return "nilpotency class"
        return None


@dataclass
class Certificate:
    """A sound reason why a group lies outside a generated formation."""
    rule: str
    detail: str

    def __str__(self):
        return f"{self.rule}: {self.detail}"


class GeneratedClosure(GroupClass):
    """The semiformation or (n-multiply sigma-local) formation generated by
    finitely many groups, optionally together with class parts.

    Class parts must be tau-closed formations; they are only allowed at level 0
    for kind ``form``."""
    memoize = True

    def __init__(self, kind: str, tau, level: int, gens: Sequence[PermGroup] = (),
                 parts: Sequence[GroupClass] = ()):
        if kind not in ("sf", "form"):
            raise InputError(f"closure kind must be sf or form, got {kind!r}")
        if level < 0:
            raise InputError("closure level must be non-negative")
        if kind == "sf" and level != 0:
            raise InputError("semiformation closures only exist at level 0")
        parts = tuple(p for p in parts if not isinstance(p, Empty))
        if parts and (kind != "form" or level != 0):
            raise InputError("class parts are only supported for level-0 formations")
        self.kind = kind
        self.tau = parse_tau(tau)
        self.level = level
        self.gens = tuple(dedupe(gens))
        self.parts = parts
        self._ids = tuple(sorted(canon_id(g) for g in self.gens))
        self._sf = None

    @property
    def key(self):
        return ("gen", self.kind, self.tau.kind, self.level, self._ids, tuple(p.key for p in self.parts))

    @property
    def hereditary(self):
        return self.tau.kind == "all" and not self.parts

    def is_empty(self) -> bool:
        return not self.gens and not self.parts

    # -- finite part
    def semiformation(self) -> list[PermGroup]:
        if self._sf is None:
            self._sf = semiformation_generate(self.tau, self.gens)
            self._sf_ids = frozenset(canon_id(g) for g in self._sf)
            self._sf_socles = {}
            for h in self._sf:
                if h.order > 1 and socle_and_monolith(h)[2] is not None:
                    d = _socle_data(h)
                    self._sf_socles.setdefault(d.socle, set()).add(d.top)
            self._variety = _Variety.of(self._sf) if self._sf else None
        return self._sf

    def in_generating_set(self, a: PermGroup, ctx: Context) -> Verdict:
        """Membership in the tau-closed semiformation X = Q S_tau(gens) united with the parts."""
        self.semiformation()
        if canon_id(a) in self._sf_ids:
            return YES
        return any_of(ctx.member(p, a) for p in self.parts)

    def prime_bound(self, ctx):
        primes = set()
        for g in self.gens:
            primes |= set(prime_divisors(g.order))
        for p in self.parts:
            b = p.prime_bound(ctx)
            if b is None:
                return None
            primes |= b
        return frozenset(primes)

    def variety(self, ctx):
        if self.level > 0 or self.kind != "form":
            return None
        self.semiformation()
        out = self._variety or _Variety(1, 0, 0, frozenset())
        for p in self.parts:
            v = p.variety(ctx)
            if v is None:
                return None
            out = out.join(v)
        return out

    # -- universe fixpoint
    def fixpoint(self, ctx: Context) -> frozenset:
        """Canonical ids of universe groups derivable by Q and R0 from X."""
        key = self.key
        if key in ctx._fix:
            return ctx._fix[key]
        uni = ctx.universe
        self.semiformation()
        inset = set()
        for rec in uni:
            if rec.cid in self._sf_ids or (self.parts and self.in_generating_set(rec.group, ctx) is YES):
                inset.add(rec.cid)
                inset.update(q for _, q in uni.quotient_ids(rec))
        if self.kind == "form":
            changed = True
            while changed:
                changed = False
                for rec in uni:
                    if rec.cid in inset:
                        continue
                    inter = rec.group.whole.elements
                    for n, q in uni.quotient_ids(rec):
                        if q in inset:
                            inter = inter & n.elements
                    if len(inter) == 1:
                        inset.add(rec.cid)
                        inset.update(q for _, q in uni.quotient_ids(rec))
                        changed = True
        out = frozenset(inset)
        ctx._fix[key] = out
        return out

    # -- membership
    def _member(self, g, ctx):
        if self.level > 0:
            from .sigmalocal import generated_member
            return generated_member(g, self.gens, self.level, self.tau, ctx)
        if self.kind == "sf":
            self.semiformation()
            return Verdict.of(canon_id(g) in self._sf_ids)
        return self._form_member(g, ctx)

    def _form_member(self, g, ctx):
        if self.is_empty():
            return NO
        if g.order == 1:
            return YES if self.gens else any_of(ctx.member(p, g) for p in self.parts)
        if self.in_generating_set(g, ctx) is YES:
            return YES
        cid = canon_id(g)
        if g.order <= ctx.bound and cid in self.fixpoint(ctx):
            return YES
        out = YES
        for a in monolithic_quotients(g):
            v = self._monolithic_verdict(a, ctx)
            out = out & v
            if out is NO:
                return NO
        return out

    def _monolithic_verdict(self, a: PermGroup, ctx: Context) -> Verdict:
        if self.in_generating_set(a, ctx) is YES:
            return YES
        if a.order <= ctx.bound and canon_id(a) in self.fixpoint(ctx):
            return YES
        return NO if self.certificate(a, ctx) is not None else UNKNOWN

    def certificate(self, a: PermGroup, ctx: Context) -> Certificate | None:
        """A reason for the monolithic group A to lie outside this level-0 formation."""
        return monolithic_descent_certificate(a, self, ctx)

    def __str__(self):
        from .catalog import group_label
        refs = ", ".join(group_label(g) for g in self.gens)
        text = f"gen({self.kind}, {self.tau}, {self.level}, [{refs}])"
        if self.parts:
            text = f"form-of({text}; " + "; ".join(str(p) for p in self.parts) + ")"
        return text


def _socle_match_possible(cls: GroupClass, a: PermGroup, top: PermGroup, ctx: Context) -> bool:
    """False only when cls surely has no monolithic member B with Soc(B) isomorphic
    to Soc(A) and B/C_B(Soc B) isomorphic to top = A/C_A(Soc A)."""
    _, soc, _ = socle_and_monolith(a)
    abelian = soc.as_group().is_abelian()
    if isinstance(cls, (Empty, Identity)):
        return False
    if not abelian:
        # C_B(Soc B) = 1 for such B, so B would be isomorphic to A
        return ctx.member(cls, a) is not NO
    if isinstance(cls, GeneratedClosure):
        if cls.level > 0 or cls.kind != "form":
            return True
        cls.semiformation()
        d = _socle_data(a)
        if d.top in cls._sf_socles.get(d.socle, set()):
            return True
        return any(_socle_match_possible(p, a, top, ctx) for p in cls.parts)
    if isinstance(cls, Gpi):
        if cls.blocks is None:
            return True
        allowed = _block_primes(cls.blocks, ctx)
        return set(prime_divisors(soc.order)) | set(prime_divisors(top.order)) <= allowed
    if isinstance(cls, SigmaNilpotent):
        # chief factors of a sigma-nilpotent group are central
        return top.order == 1
    if isinstance(cls, Intersection):
        return all(_socle_match_possible(p, a, top, ctx) for p in cls.parts)
    if isinstance(cls, Product) and isinstance(cls.lower, Gpi) and cls.lower.blocks is not None:
        lower = _block_primes(cls.lower.blocks, ctx)
        (p,) = prime_divisors(soc.order)
        if p not in lower:
            # O_b(B) = 1, so B already lies in the upper class
            return _socle_match_possible(cls.upper, a, top, ctx)
        if lower == {p}:
            # O_p(B) centralizes the socle, so the top is a quotient of B/O_p(B)
            return ctx.member(cls.upper, top) is not NO
    return True


def monolithic_descent_certificate(a: PermGroup, closure: GeneratedClosure,
                                   ctx: Context | None = None) -> Certificate | None:
    """Sound exclusion of a monolithic A from the formation generated by X.

    Rules, each returning a certificate when it fires:

    * socle-descent: A is not in X and A/C_A(Soc A) is not in X.  A monolithic
      member outside X has a monolithic X-group above it sharing the socle
      action, whose top A/C_A(Soc A) would then be in X.
    * socle-match (finite X only): no monolithic group of X has a socle
      isomorphic to Soc(A) with the same top.
    * non-primary socle: Soc(A) meets two blocks and A is not in X.  Valid at
      every level of sigma-locality.
    * variety: X satisfies an identity (exponent, derived length, nilpotency
      class, prime set) that A violates.
    """
    ctx = ctx or default_context()
    if a.order == 1 or socle_and_monolith(a)[2] is None:
        return None
    if closure.is_empty():
        return Certificate("empty", "the generating set is empty")
    _, soc, _ = socle_and_monolith(a)
    in_x = closure.in_generating_set(a, ctx)
    bound = closure.prime_bound(ctx)
    if bound is not None and not set(prime_divisors(a.order)) <= bound:
        return Certificate("variety", f"prime divisors of |A| = {a.order} exceed {sorted(bound)}")
    if in_x is not NO:
        return None
    blocks = ctx.sigma.sigma_of(soc.order)
    if len(blocks) > 1:
        return Certificate("non-primary socle",
                           f"Soc(A) of order {soc.order} meets blocks {sorted(blocks)} and A is not in X")
    c = centralizer_of_normal(a, soc)
    top = quotient(a, c)
    if closure.in_generating_set(top, ctx) is NO:
        return Certificate("socle-descent",
                           f"|Soc(A)| = {soc.order}, |C_A(Soc A)| = {c.order}, A/C_A(Soc A) of order "
                           f"{top.order} is not in X and neither is A")
    if not _socle_match_possible(closure, a, top, ctx):
        return Certificate("socle-match",
                           f"no monolithic member of X has socle and top isomorphic to those of A "
                           f"(orders {soc.order} and {top.order})")
    var = closure.variety(ctx)
    if var is not None:
        why = var.excludes(a)
        if why is not None:
            return Certificate("variety", f"A violates the {why} identity of X")
    return None


def tau_form_member(g: PermGroup, tau, gens: Sequence[PermGroup], ctx: Context | None = None,
                    parts: Sequence[GroupClass] = ()) -> Verdict:
    return member(GeneratedClosure("form", tau, 0, gens, parts), g, ctx)


# ---------------------------------------------------------------------------
# sigma-local classes (definitions live in sigmalocal)


class SigmaLocal(GroupClass):
    """LF_sigma(f) for a formation sigma-function f; ``level`` and ``tau`` are
    the claimed multiplicity and closure, kept for reporting."""
    memoize = True

    def __init__(self, f, level: int = 1, tau="trivial", name: str | None = None):
        self.f = f
        self.level = level
        self.tau = parse_tau(tau)
        self.name = name

    @property
    def key(self):
        return ("lf", self.f.key)

    @property
    def hereditary(self):
        return False

    def _member(self, g, ctx):
        from .sigmalocal import lf_member
        return lf_member(self.f, g, ctx)

    def prime_bound(self, ctx):
        return self.f.support_primes(ctx)

    def __str__(self):
        return f"lf({self.name})" if self.name else f"lf<{self.f}>"


# ---------------------------------------------------------------------------
# comparisons on a universe


@dataclass
class EqualityReport:
    agree: int = 0
    disagreements: list = field(default_factory=list)
    gaps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def __str__(self):
        return (f"agree={self.agree} disagreements={len(self.disagreements)} gaps={len(self.gaps)}")


def class_equal_on_universe(c1: GroupClass, c2: GroupClass, universe, ctx: Context | None = None) -> EqualityReport:
    """Compare verdicts group by group; definite Yes against definite No is a disagreement."""
    ctx = ctx or default_context()
    rep = EqualityReport()
    for rec in universe:
        a, b = ctx.member(c1, rec.group), ctx.member(c2, rec.group)
        if a is b and a.definite:
            rep.agree += 1
        elif a.definite and b.definite:
            rep.disagreements.append((rec.name, a, b))
        else:
            rep.gaps.append((rec.name, a, b))
    return rep


def class_included_on_universe(c1: GroupClass, c2: GroupClass, universe, ctx: Context | None = None) -> EqualityReport:
    """Checks c1 <= c2: a Yes for c1 against a No for c2 is a violation."""
    ctx = ctx or default_context()
    rep = EqualityReport()
    for rec in universe:
        a = ctx.member(c1, rec.group)
        if a is NO:
            rep.agree += 1
            continue
        b = ctx.member(c2, rec.group)
        if a is YES and b is NO:
            rep.disagreements.append((rec.name, a, b))
        elif a is YES and b is YES:
            rep.agree += 1
        else:
            rep.gaps.append((rec.name, a, b))
    return rep
