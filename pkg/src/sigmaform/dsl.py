"""Parser and printer for class expressions and sigma-function files.

Grammar::

    expr  := empty | one | all | Nsigma
           | Gpi{blocks} | Ssol{blocks}
           | prod(expr, expr) | meet(expr, ...)
           | gen(sf|form, trivial|normal|all, n, [group, ...])
           | lf(name)
    blocks := * | id, id, ...
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InputError
from .sigmakit import SIGMA1, SigmaPartition


class ParseError(InputError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.column = line, col


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Atom:
    name: str                       # empty | one | all | Nsigma
    pos: int = field(default=0, compare=False)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Blocks:
    kind: str                       # Gpi | Ssol
    blocks: tuple | None            # None for *
    pos: int = field(default=0, compare=False)

    def __str__(self):
        inner = "*" if self.blocks is None else ",".join(self.blocks)
        return f"{self.kind}{{{inner}}}"


@dataclass(frozen=True)
class Prod:
    lower: object
    upper: object
    pos: int = field(default=0, compare=False)

    def __str__(self):
        return f"prod({self.lower}, {self.upper})"


@dataclass(frozen=True)
class Meet:
    parts: tuple
    pos: int = field(default=0, compare=False)

    def __str__(self):
        return "meet(" + ", ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Gen:
    kind: str
    tau: str
    level: int
    refs: tuple
    pos: int = field(default=0, compare=False)

    def __str__(self):
        return f"gen({self.kind}, {self.tau}, {self.level}, [{', '.join(self.refs)}])"


@dataclass(frozen=True)
class Lf:
    ref: str
    pos: int = field(default=0, compare=False)

    def __str__(self):
        return f"lf({self.ref})"


# ---------------------------------------------------------------------------
# parser


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_BLOCK = re.compile(r"[A-Za-z0-9_]+")
_INT = re.compile(r"\d+")


class _Parser:
    def __init__(self, text: str, sigma: SigmaPartition | None, groups, functions, check_refs: bool):
        self.text = text
        self.i = 0
        self.sigma = sigma
        self.groups = groups
        self.functions = functions
        self.check_refs = check_refs

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.text, self.i if pos is None else pos)

    def ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.error(f"expected {ch!r}, found {found!r}")
        self.i += 1

    def match(self, rx) -> str:
        self.ws()
        m = rx.match(self.text, self.i)
        if not m:
            self.error("unexpected " + (repr(self.text[self.i]) if self.i < len(self.text) else "end of input"))
        self.i = m.end()
        return m.group(0)

    def parse(self):
        node = self.expr()
        if self.peek():
            self.error(f"unexpected trailing text {self.text[self.i:]!r}")
        return node

    def expr(self):
        self.ws()
        start = self.i
        name = self.match(_IDENT)
        if name in ("empty", "one", "all", "Nsigma"):
            return Atom(name, start)
        if name in ("Gpi", "Ssol"):
            return Blocks(name, self.blocks(), start)
        if name == "prod":
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Prod(a, b, start)
        if name == "meet":
            self.expect("(")
            if self.peek() == ")":
                self.error("meet needs at least one argument")
            parts = [self.expr()]
            while self.peek() == ",":
                self.i += 1
                parts.append(self.expr())
            self.expect(")")
            return Meet(tuple(parts), start)
        if name == "gen":
            return self.gen(start)
        if name == "lf":
            self.expect("(")
            self.ws()
            rpos = self.i
            ref = self.match(_IDENT)
            if self.check_refs and ref not in (self.functions or {}):
                self.error(f"unknown sigma-function {ref!r}", rpos)
            self.expect(")")
            return Lf(ref, start)
        self.error(f"unknown class name {name!r}", start)

    def blocks(self):
        self.expect("{")
        if self.peek() == "*":
            self.i += 1
            self.expect("}")
            return None
        out = []
        while True:
            self.ws()
            bpos = self.i
            b = self.match(_BLOCK)
            if self.sigma is not None and not self.sigma.is_block(b):
                self.error(f"unknown block {b!r}", bpos)
            out.append(b)
            if self.peek() == ",":
                self.i += 1
                continue
            break
        self.expect("}")
        return tuple(sorted(set(out)))

    def gen(self, start):
        self.expect("(")
        self.ws()
        kpos = self.i
        kind = self.match(_IDENT)
        if kind not in ("sf", "form"):
            self.error("closure kind must be sf or form", kpos)
        self.expect(",")
        self.ws()
        tpos = self.i
        tau = self.match(_IDENT)
        if tau not in ("trivial", "normal", "all"):
            self.error("subgroup functor must be trivial, normal or all", tpos)
        self.expect(",")
        self.ws()
        npos = self.i
        level = int(self.match(_INT))
        if kind == "sf" and level != 0:
            self.error("semiformation closures need level 0", npos)
        self.expect(",")
        self.expect("[")
        refs = []
        if self.peek() != "]":
            while True:
                refs.append(self.group_ref())
                if self.peek() == ",":
                    self.i += 1
                    continue
                break
        self.expect("]")
        self.expect(")")
        return Gen(kind, tau, level, tuple(refs), start)

    def group_ref(self) -> str:
        self.ws()
        start = self.i
        depth = 0
        while self.i < len(self.text):
            ch = self.text[self.i]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch in ",]" and depth == 0:
                break
            self.i += 1
        ref = re.sub(r"\s+", "", self.text[start:self.i])
        if not ref:
            self.error("expected a group reference", start)
        if self.check_refs:
            from .catalog import build_group
            try:
                build_group(ref, self.groups)
            except InputError as exc:
                self.error(str(exc), start)
        return ref


def parse_class_expr(text: str, sigma: SigmaPartition | None = SIGMA1, groups: Mapping | None = None,
                     functions: Mapping | None = None, check_refs: bool = True):
    """Parse to a syntax tree; group and sigma-function references are checked."""
    return _Parser(text, sigma, groups, functions, check_refs).parse()


def format_class_expr(node) -> str:
    return str(node)


# ---------------------------------------------------------------------------
# evaluation


def to_class(node, groups: Mapping | None = None, functions: Mapping | None = None):
    """Build the GroupClass denoted by a syntax tree."""
    from .catalog import build_group
    from .classes import (All, Empty, GeneratedClosure, Gpi, Identity, Intersection, Product, SigmaLocal,
                          SigmaNilpotent, SigmaSoluble)

    if isinstance(node, Atom):
        return {"empty": Empty, "one": Identity, "all": All, "Nsigma": SigmaNilpotent}[node.name]()
    if isinstance(node, Blocks):
        return (Gpi if node.kind == "Gpi" else SigmaSoluble)(node.blocks)
    if isinstance(node, Prod):
        return Product(to_class(node.lower, groups, functions), to_class(node.upper, groups, functions))
    if isinstance(node, Meet):
        parts = [to_class(p, groups, functions) for p in node.parts]
        return parts[0] if len(parts) == 1 else Intersection(parts)
    if isinstance(node, Gen):
        gs = []
        for r in node.refs:
            g = build_group(r, groups)
            gs.append(g)
        return GeneratedClosure(node.kind, node.tau, node.level, gs)
    if isinstance(node, Lf):
        if not functions or node.ref not in functions:
            raise InputError(f"unknown sigma-function {node.ref!r}")
        return SigmaLocal(functions[node.ref], name=node.ref)
    raise InputError(f"not a class expression node: {node!r}")


def parse_class(text: str, sigma: SigmaPartition = SIGMA1, groups: Mapping | None = None,
                functions: Mapping | None = None):
    return to_class(parse_class_expr(text, sigma, groups, functions), groups, functions)


# ---------------------------------------------------------------------------
# sigma-function files


def parse_sigma_function(text: str, sigma: SigmaPartition = SIGMA1, groups: Mapping | None = None,
                         functions: Mapping | None = None):
    """Lines ``sigma <block> := <expr>`` and ``default := <expr>``; unlisted blocks are empty."""
    from .classes import Empty
    from .sigmalocal import TableFunction

    table = {}
    default = Empty()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^sigma\s+([A-Za-z0-9_]+)\s*:=\s*(.+)$", line)
        d = re.match(r"^default\s*:=\s*(.+)$", line)
        try:
            if m:
                b = m.group(1)
                if not sigma.is_block(b):
                    raise InputError(f"unknown block {b!r}")
                if b in table:
                    raise InputError(f"block {b!r} assigned twice")
                table[b] = parse_class(m.group(2), sigma, groups, functions)
            elif d:
                default = parse_class(d.group(1), sigma, groups, functions)
            else:
                raise InputError("expected 'sigma <block> := <expr>' or 'default := <expr>'")
        except InputError as exc:
            raise InputError(f"sigma-function line {lineno}: {exc}") from exc
    return TableFunction(table, default)


def format_sigma_function(f, ctx=None) -> str:
    return f.describe(ctx) + "\n"
