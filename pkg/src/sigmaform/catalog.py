"""Named groups and constructor expressions such as ``wreath(C2, C6)``.

Recognised forms::

    C6 S4 A5 D4 Q8 Dic3 V4 witness150 C1
    cyclic(n) dihedral(n) symmetric(n) alternating(n) dicyclic(n)
    direct(G, H) wreath(G, H) affine(q, d)
    path/to/file.grp        (group file format)
"""
from __future__ import annotations

import os
import re

from .errors import InputError
from .permcore import (PermGroup, affine_frobenius, alternating, cyclic, dicyclic, dihedral,
                       direct_product, load_group_file, regular_wreath, symmetric)

_SHORT = re.compile(r"^([CSADQ])(\d+)$")
_CALL = re.compile(r"^([a-z_]+)\((.*)\)$", re.S)

_CACHE: dict[str, PermGroup] = {}


def _split_args(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur).strip())
    return out


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError as exc:
        raise InputError(f"expected an integer, got {tok!r}") from exc


def build_group(expr: str, env: dict[str, PermGroup] | None = None) -> PermGroup:
    """Evaluate a constructor expression; ``env`` maps extra names to groups."""
    expr = expr.strip()
    env = env or {}
    if expr in env:
        return env[expr]
    if expr in _CACHE:
        return _CACHE[expr]
    g = _build(expr, env)
    if not env:
        _CACHE[expr] = g
    return g


def _build(expr: str, env) -> PermGroup:
    if expr == "witness150":
        return affine_frobenius(25, 6, name="witness150")
    if expr == "V4":
        return dihedral(2)
    m = re.match(r"^Dic(\d+)$", expr)
    if m:
        return dicyclic(int(m.group(1)))
    m = _SHORT.match(expr)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "C":
            return cyclic(n)
        if kind == "S":
            return symmetric(n)
        if kind == "A":
            return alternating(n)
        if kind == "D":
            return dihedral(n)
        if kind == "Q":
            if n % 4 or n < 8:
                raise InputError(f"Q{n}: quaternion-type groups need order divisible by 4, at least 8")
            g = dicyclic(n // 4)
            g.name = expr
            return g
    m = _CALL.match(expr)
    if m:
        fn, args = m.group(1), _split_args(m.group(2))
        one_int = {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric,
                   "alternating": alternating, "dicyclic": dicyclic}
        if fn in one_int:
            if len(args) != 1:
                raise InputError(f"{fn}() takes one argument")
            return one_int[fn](_int(args[0]))
        if fn in ("direct", "wreath"):
            if len(args) != 2:
                raise InputError(f"{fn}() takes two arguments")
            a, b = build_group(args[0], env), build_group(args[1], env)
            return direct_product(a, b) if fn == "direct" else regular_wreath(a, b)
        if fn == "affine":
            if len(args) != 2:
                raise InputError("affine() takes two arguments")
            return affine_frobenius(_int(args[0]), _int(args[1]))
        raise InputError(f"unknown constructor {fn!r}")
    if os.path.exists(expr):
        return load_group_file(expr, name=os.path.splitext(os.path.basename(expr))[0])
    raise InputError(f"unknown group {expr!r}")


def resolve_group(ref: str, env: dict[str, PermGroup] | None = None) -> PermGroup:
    return build_group(ref, env)


_LABEL_CANDIDATES = ("S3", "V4", "D4", "Q8", "A4", "D5", "D6", "Dic3", "S4", "D7", "D8", "Q16", "D9",
                     "D10", "D11", "D12", "A5")


def group_label(g: PermGroup) -> str:
    """A short human name for G: C<n> when cyclic, a catalog name when one
    matches, otherwise the group's own name."""
    from .permcore import canon_id

    if g.order == 1:
        return "C1"
    if int(g.engine.orders.max()) == g.order:
        return f"C{g.order}"
    cid = canon_id(g)
    for name in _LABEL_CANDIDATES:
        h = build_group(name)
        if h.order == g.order and canon_id(h) == cid:
            return name
    return g.name or f"G{g.order}"
