"""A finite, isomorphism-free, quotient-closed catalogue of small groups."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InputError
from .permcore import (Permutation, PermGroup, REGISTRY, Subgroup, affine_frobenius, alternating, cyclic,
                       dicyclic, dihedral, direct_product, normal_subgroups, prime_divisors,
                       quotient, regular_wreath, symmetric)


@dataclass
class UniverseRecord:
    name: str
    group: PermGroup
    cid: int

    @property
    def order(self) -> int:
        return self.group.order


def _prime_powers(limit: int) -> Iterator[int]:
    for q in range(2, limit + 1):
        if len(prime_divisors(q)) == 1:
            yield q


def default_seeds(bound: int) -> list[PermGroup]:
    """Cyclic, dihedral, dicyclic, small symmetric/alternating, affine and wreath groups."""
    seeds: list[PermGroup] = [cyclic(n) for n in range(1, bound + 1)]
    seeds += [dihedral(n) for n in range(2, bound // 2 + 1)]
    seeds += [dicyclic(n) for n in range(2, bound // 4 + 1)]
    seeds += [g for g in (symmetric(4), symmetric(5), alternating(4), alternating(5)) if g.order <= bound]
    for q in _prime_powers(bound):
        for d in range(2, q):
            if (q - 1) % d == 0 and q * d <= bound:
                seeds.append(affine_frobenius(q, d))
    for a in (2, 3):
        for b in (2, 3):
            if a ** b * b <= bound:
                seeds.append(regular_wreath(cyclic(a), cyclic(b)))
    return seeds


class Universe:
    """Groups of order at most ``bound``, one per isomorphism class."""

    def __init__(self, bound: int, records: list[UniverseRecord]):
        self.bound = bound
        self.records = records
        self._by_cid = {r.cid: r for r in records}
        self._quotients: dict[int, list[tuple[Subgroup, int]]] = {}
        self.discovered = list(records)

    # -- construction
    @classmethod
    def build(cls, bound: int, seeds: Iterable[PermGroup] | None = None,
              extra: Iterable[tuple[str, PermGroup]] = (), seed_bound: int | None = None,
              products: bool = True) -> "Universe":
        """Seeds (default: ``default_seeds``) are cut at ``seed_bound``; ``extra``
        groups are mandatory and must respect ``bound``."""
        if bound < 1:
            raise InputError("universe bound must be at least 1")
        sb = bound if seed_bound is None else min(seed_bound, bound)
        if seeds is None:
            seeds = default_seeds(sb)
        else:
            seeds = list(seeds)
        records: list[UniverseRecord] = []
        seen: set[int] = set()

        def add(name: str, g: PermGroup) -> bool:
            cid = REGISTRY.canon_id(g)
            if cid in seen:
                return False
            seen.add(cid)
            if g.name is None:
                g.name = name
            records.append(UniverseRecord(name, g, cid))
            return True

        for name, g in extra:
            if g.order > bound:
                raise InputError(f"mandated group {name} has order {g.order} > bound {bound}")
        for g in seeds:
            if g.order <= sb:
                add(g.name or f"G{len(records)}", g)
        if products:
            frontier = [r for r in records if r.order > 1]
            while frontier:
                base = [r for r in records if r.order > 1]
                new = []
                for a in frontier:
                    for b in base:
                        if a.order * b.order <= sb and (a.cid <= b.cid or b not in frontier):
                            g = direct_product(a.group, b.group)
                            if add(f"{a.name}x{b.name}", g):
                                new.append(records[-1])
                frontier = new
        for name, g in extra:
            add(name, g)
        # close under quotients
        i = 0
        while i < len(records):
            rec = records[i]
            for n in normal_subgroups(rec.group):
                if n.is_trivial():
                    continue
                q = quotient(rec.group, n)
                add(f"{rec.name}/{n.order}", q)
            i += 1
        found = list(records)
        records.sort(key=lambda r: (r.order, r.cid))
        uni = cls(bound, records)
        uni.discovered = found
        return uni

    # -- queries
    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def groups(self) -> list[PermGroup]:
        return [r.group for r in self.records]

    def find(self, g: PermGroup) -> UniverseRecord | None:
        if g.order > self.bound:
            return None
        return self._by_cid.get(REGISTRY.canon_id(g))

    def record(self, cid: int) -> UniverseRecord | None:
        return self._by_cid.get(cid)

    def __contains__(self, g: PermGroup) -> bool:
        return self.find(g) is not None

    def quotient_ids(self, rec: UniverseRecord) -> list[tuple[Subgroup, int]]:
        """(N, canonical id of G/N) for every normal subgroup of a member."""
        if rec.cid not in self._quotients:
            g = rec.group
            self._quotients[rec.cid] = [(n, REGISTRY.canon_id(quotient(g, n))) for n in normal_subgroups(g)]
        return self._quotients[rec.cid]

    def by_order(self) -> dict[int, int]:
        return dict(sorted(Counter(r.order for r in self.records).items()))

    def summary(self) -> str:
        parts = [f"{o}:{c}" for o, c in self.by_order().items()]
        return f"universe bound {self.bound}: {len(self)} groups (order:count) " + " ".join(parts)


_UNIVERSES: dict = {}


def standard_universe(bound: int) -> Universe:
    """The default universe for a bound, built once per process."""
    if bound not in _UNIVERSES:
        _UNIVERSES[bound] = _load_standard(bound) or _store_standard(Universe.build(bound))
    return _UNIVERSES[bound]


# Cached universes list their members in discovery order, so reloading them
# hands out the same isomorphism ids as a fresh build would.  Each member
# carries its quotient map as (normal subgroup index, member index) pairs.
def _standard_key(bound: int) -> str:
    return f"universe-{bound}-v2"


def _load_standard(bound: int) -> Universe | None:
    from . import cache
    data = cache.load_named(_standard_key(bound))
    if not isinstance(data, list):
        return None
    try:
        found, quots = [], []
        for name, degree, gens, q in data:
            g = PermGroup(degree, [Permutation(tuple(im)) for im in gens], name=name)
            found.append(UniverseRecord(name, g, REGISTRY.canon_id(g)))
            quots.append(q)
        records = sorted(found, key=lambda r: (r.order, r.cid))
        uni = Universe(bound, records)
        for rec, q in zip(found, quots):
            normals = normal_subgroups(rec.group)
            uni._quotients[rec.cid] = [(normals[i], found[j].cid) for i, j in q]
    except (TypeError, ValueError, IndexError, InputError):
        return None
    uni.discovered = found
    return uni


def _store_standard(uni: Universe) -> Universe:
    from . import cache
    if cache.load_named(_standard_key(uni.bound)) is not None or not cache.enabled():
        return uni
    where = {r.cid: i for i, r in enumerate(uni.discovered)}
    entries = []
    for r in uni.discovered:
        normals = {n: i for i, n in enumerate(normal_subgroups(r.group))}
        q = [[normals[n], where[cid]] for n, cid in uni.quotient_ids(r)]
        entries.append([r.name, r.group.degree, [list(p.images) for p in r.group.generators], q])
    cache.store_named(_standard_key(uni.bound), entries)
    return uni


def parse_manifest(text: str, require_bound: bool = True):
    """Returns (bound, [(name, expr)], use_default_seeds)."""
    bound = None
    entries = []
    defaults = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^bound\s+(\d+)$", line)
        if m:
            bound = int(m.group(1))
            continue
        m = re.match(r"^group\s+([A-Za-z0-9_]+)\s*=\s*(.+)$", line)
        if m:
            entries.append((m.group(1), m.group(2).strip()))
            continue
        m = re.match(r"^seeds\s+(default|none)$", line)
        if m:
            defaults = m.group(1) == "default"
            continue
        raise InputError(f"manifest line {lineno}: cannot parse {line!r}")
    if bound is None and require_bound:
        raise InputError("manifest needs a 'bound <B>' line")
    return bound, entries, defaults


def build_universe(manifest: str) -> Universe:
    from .catalog import build_group

    bound, entries, defaults = parse_manifest(manifest)
    extra = []
    for name, expr in entries:
        g = build_group(expr)
        extra.append((name, g))
    return Universe.build(bound, seeds=None if defaults else [], extra=extra)
