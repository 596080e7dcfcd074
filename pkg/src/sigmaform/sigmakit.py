"""Partitions of the primes into blocks and the block-indexed radicals.

A partition lists finitely many named blocks; every prime not listed sits in
its own singleton block whose id is ``s<p>`` (``s5`` for the prime 5).  The
empty configuration is the all-singletons partition.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError
from .permcore import (PermGroup, Subgroup, chief_series, class_closures, is_prime,
                       normal_subgroups, prime_divisors, quotient, section_centralizer,
                       _normal_product)

_ID_RE = re.compile(r"^[A-Za-z0-9_]+$")
_SINGLETON_RE = re.compile(r"^s(\d+)(?:_r)?$")


@dataclass(frozen=True)
class SigmaPartition:
    blocks: tuple[tuple[str, frozenset], ...] = ()

    def __post_init__(self):
        seen: dict[int, str] = {}
        ids = set()
        for bid, primes in self.blocks:
            if not _ID_RE.match(bid):
                raise InputError(f"bad block id {bid!r}")
            if bid in ids:
                raise InputError(f"block id {bid!r} listed twice")
            ids.add(bid)
            if not primes:
                raise InputError(f"block {bid!r} is empty")
            for p in primes:
                if not is_prime(p):
                    raise InputError(f"block {bid!r}: {p} is not a prime")
                if p in seen:
                    raise InputError(f"prime {p} appears in blocks {seen[p]!r} and {bid!r}")
                seen[p] = bid
        object.__setattr__(self, "_lookup", seen)
        object.__setattr__(self, "_ids", frozenset(ids))

    # -- lookup
    def block_of(self, p: int) -> str:
        listed = self._lookup.get(p)
        if listed is not None:
            return listed
        # a listed id such as s23 shadows the singleton name of 23
        return f"s{p}" if f"s{p}" not in self._ids else f"s{p}_r"

    def _singleton_prime(self, bid: str) -> int | None:
        m = _SINGLETON_RE.match(bid)
        if not m:
            return None
        p = int(m.group(1))
        if not is_prime(p) or p in self._lookup:
            return None
        return p if self.block_of(p) == bid else None

    def is_block(self, bid: str) -> bool:
        return bid in self._ids or self._singleton_prime(bid) is not None

    def check_block(self, bid: str) -> str:
        if not self.is_block(bid):
            raise InputError(f"unknown block id {bid!r}")
        return bid

    def primes_of(self, bid: str) -> frozenset:
        for b, primes in self.blocks:
            if b == bid:
                return primes
        self.check_block(bid)
        return frozenset({self._singleton_prime(bid)})

    def contains(self, bid: str, p: int) -> bool:
        return self.block_of(p) == bid

    def sigma_of(self, x) -> frozenset:
        n = x.order if isinstance(x, PermGroup) else int(x)
        if n < 1:
            raise InputError("sigma_of needs a positive integer")
        return frozenset(self.block_of(p) for p in prime_divisors(n))

    def is_number_in(self, n: int, blocks: Iterable[str]) -> bool:
        """True if every prime of n lies in one of the blocks."""
        bs = set(blocks)
        return all(self.block_of(p) in bs for p in prime_divisors(n))

    def is_number_outside(self, n: int, bid: str) -> bool:
        return all(self.block_of(p) != bid for p in prime_divisors(n))

    def config_text(self) -> str:
        return "".join(f"block {b}: {' '.join(map(str, sorted(ps)))}\n" for b, ps in self.blocks)

    def __str__(self) -> str:
        if not self.blocks:
            return "sigma1"
        return "; ".join(f"{b}={{{','.join(map(str, sorted(ps)))}}}" for b, ps in self.blocks)


SIGMA1 = SigmaPartition()


def parse_sigma(text: str) -> SigmaPartition:
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^block\s+([A-Za-z0-9_]+)\s*:\s*(.*)$", line)
        if not m:
            raise InputError(f"line {lineno}: expected 'block <id>: p1 p2 ...'")
        primes = []
        for tok in m.group(2).split():
            try:
                p = int(tok)
            except ValueError as exc:
                raise InputError(f"line {lineno}: {tok!r} is not an integer") from exc
            if not is_prime(p):
                raise InputError(f"line {lineno}: {p} is not a prime")
            primes.append(p)
        if len(set(primes)) != len(primes):
            raise InputError(f"line {lineno}: repeated prime")
        blocks.append((m.group(1), frozenset(primes)))
    return SigmaPartition(tuple(blocks))


def block_sort_key(bid: str):
    """Singleton blocks s<p> sort by p, named blocks after them by name."""
    m = _SINGLETON_RE.match(bid)
    return (0, int(m.group(1)), bid) if m else (1, 0, bid)


def block_set(sigma: SigmaPartition, ids: Iterable[str]) -> frozenset:
    """Validated set of block ids (a Pi in the docs)."""
    return frozenset(sigma.check_block(b) for b in ids)


def sigma_of(x, sigma: SigmaPartition = SIGMA1) -> frozenset:
    return sigma.sigma_of(x)


def pi_of(x) -> frozenset:
    n = x.order if isinstance(x, PermGroup) else int(x)
    return frozenset(prime_divisors(n))


# ---------------------------------------------------------------------------
# radicals


def _is_pi_number(n: int, primes) -> bool:
    return all(p in primes for p in prime_divisors(n))


class _Primes:
    """Membership predicate for a prime set given as a collection or a callable."""

    def __init__(self, spec):
        self.spec = spec

    def __contains__(self, p):
        if callable(self.spec):
            return bool(self.spec(p))
        return p in self.spec


def _as_primes(spec):
    return spec if isinstance(spec, _Primes) else _Primes(spec)


def _join_all(g: PermGroup, subs: list[Subgroup]) -> Subgroup:
    out = g.trivial
    for s in subs:
        out = _normal_product(out, s)
    return out


def o_pi(g: PermGroup, primes) -> Subgroup:
    """Largest normal subgroup whose order involves only the given primes."""
    pr = _as_primes(primes)
    key = ("o_pi", frozenset(p for p in prime_divisors(g.order) if p in pr))
    return g.cached(key, lambda: _join_all(g, [c for c in class_closures(g) if _is_pi_number(c.order, pr)]))


def o_pi_nu(g: PermGroup, pi, nu) -> Subgroup:
    """Preimage of O_nu(G / O_pi(G))."""
    ppi, pnu = _as_primes(pi), _as_primes(nu)
    divs = prime_divisors(g.order)
    key = ("o_pi_nu", frozenset(p for p in divs if p in ppi), frozenset(p for p in divs if p in pnu))

    def build():
        base = o_pi(g, ppi)
        picked = [base]
        for c in class_closures(g):
            m = _normal_product(base, c)
            if _is_pi_number(m.order // base.order, pnu):
                picked.append(m)
        return _join_all(g, picked)
    return g.cached(key, build)


def o_block(g: PermGroup, bid: str, sigma: SigmaPartition = SIGMA1) -> Subgroup:
    sigma.check_block(bid)
    return o_pi(g, lambda p: sigma.block_of(p) == bid)


def o_block_complement(g: PermGroup, bid: str, sigma: SigmaPartition = SIGMA1) -> Subgroup:
    sigma.check_block(bid)
    return o_pi(g, lambda p: sigma.block_of(p) != bid)


def f_block(g: PermGroup, bid: str, sigma: SigmaPartition = SIGMA1) -> Subgroup:
    """O_{sigma_i', sigma_i}(G)."""
    sigma.check_block(bid)
    return o_pi_nu(g, lambda p: sigma.block_of(p) != bid, lambda p: sigma.block_of(p) == bid)


def block_quotient(g: PermGroup, bid: str, sigma: SigmaPartition = SIGMA1) -> PermGroup:
    """G / F_{sigma_i}(G)."""
    return quotient(g, f_block(g, bid, sigma))


def f_block_bruteforce(g: PermGroup, bid: str, sigma: SigmaPartition = SIGMA1) -> Subgroup:
    """Reference computation of F_{sigma_i}(G) by scanning every normal subgroup."""
    normals = normal_subgroups(g)
    lower = max((s for s in normals if sigma.is_number_outside(s.order, bid)), key=len)
    upper = max((s for s in normals if lower <= s and sigma.is_number_in(s.order // lower.order, [bid])),
                key=len)
    return upper


# ---------------------------------------------------------------------------
# predicates


def is_sigma_primary(g: PermGroup, sigma: SigmaPartition = SIGMA1) -> bool:
    return len(sigma.sigma_of(g)) <= 1


def is_chief_factor_sigma_central(g: PermGroup, h: Subgroup, k: Subgroup,
                                  sigma: SigmaPartition = SIGMA1) -> bool:
    c = section_centralizer(g, h, k)
    blocks = sigma.sigma_of(h.order // k.order) | sigma.sigma_of(g.order // c.order)
    return len(blocks) <= 1


def is_sigma_soluble(g: PermGroup, sigma: SigmaPartition = SIGMA1, strategy: str = "top") -> bool:
    return all(len(sigma.sigma_of(h.order // k.order)) <= 1
               for h, k in chief_series(g, strategy).factors)


def is_sigma_nilpotent(g: PermGroup, sigma: SigmaPartition = SIGMA1, strategy: str = "top") -> bool:
    return g.cached(("snil", sigma, strategy), lambda: all(
        is_chief_factor_sigma_central(g, h, k, sigma) for h, k in chief_series(g, strategy).factors))
