"""Command-line interface: ``sigmaform <command> ...``.

Exit codes: 0 success (GAP results only warn), 1 a verify suite failed,
2 usage or input errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import cache
from .errors import SigmaFormError


# ---------------------------------------------------------------------------
# shared option handling


def _sigma(args):
    from .sigmakit import SIGMA1, parse_sigma
    if not getattr(args, "sigma", None):
        return SIGMA1
    with open(args.sigma, encoding="utf-8") as fh:
        return parse_sigma(fh.read())


def _context(args):
    from .classes import Context
    return Context(_sigma(args), bound=getattr(args, "closure_bound", 48))


def _group(ref: str, env=None):
    from .catalog import build_group
    return build_group(ref, env)


def _env(args) -> dict:
    """Extra group names from a manifest (``group <name> = <expr>`` lines)."""
    if not getattr(args, "groups", None):
        return {}
    from .universe import parse_manifest
    with open(args.groups, encoding="utf-8") as fh:
        _, entries, _ = parse_manifest(fh.read(), require_bound=False)
    return {name: _group(expr) for name, expr in entries}


def _functions(args, sigma, env) -> dict:
    from .dsl import parse_sigma_function
    out = {}
    for spec in getattr(args, "function", None) or []:
        if "=" not in spec:
            raise SigmaFormError(f"--function expects NAME=FILE, got {spec!r}")
        name, path = spec.split("=", 1)
        with open(path, encoding="utf-8") as fh:
            out[name] = parse_sigma_function(fh.read(), sigma, env, out)
    return out


def _parse(text, args, sigma, env):
    from .dsl import parse_class
    return parse_class(text, sigma, env, _functions(args, sigma, env))


def _label(g) -> str:
    from .catalog import group_label
    return group_label(g)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, out) -> int:
    from .permcore import (center, chief_series, derived_length, exponent, frattini, nilpotency_class,
                           normal_subgroups, prime_divisors, socle_and_monolith)
    from .sigmakit import f_block, is_sigma_nilpotent, is_sigma_primary, is_sigma_soluble, o_block

    sigma = _sigma(args)
    g = _group(args.group, _env(args))
    blocks = sorted(sigma.sigma_of(g))
    out(f"group {args.group} ({_label(g)})")
    out(f"order {g.order}")
    out(f"primes {{{', '.join(map(str, prime_divisors(g.order)))}}}")
    out(f"sigma(G) = {{{', '.join(blocks)}}}" if blocks else "sigma(G) = {}")
    if g.order == 1:
        return 0
    out(f"exponent {exponent(g)}")
    dl, nc = derived_length(g), nilpotency_class(g)
    out(f"derived length {dl if dl is not None else 'insoluble'}")
    out(f"nilpotency class {nc if nc is not None else 'not nilpotent'}")
    out(f"sigma-primary {is_sigma_primary(g, sigma)}")
    out(f"sigma-nilpotent {is_sigma_nilpotent(g, sigma)}")
    out(f"sigma-soluble {is_sigma_soluble(g, sigma)}")
    out(f"|Z(G)| {center(g).order}")
    out(f"|Phi(G)| {frattini(g).order}")
    mins, soc, mono = socle_and_monolith(g)
    out(f"minimal normal subgroups {len(mins)}; |Soc(G)| {soc.order}; monolithic {mono is not None}")
    out(f"normal subgroups {len(normal_subgroups(g))}")
    out("chief factor orders " + " ".join(map(str, chief_series(g).factor_orders())))
    for b in blocks:
        out(f"block {b}: |O_b(G)| {o_block(g, b, sigma).order}, |F_b(G)| {f_block(g, b, sigma).order}")
    return 0


def cmd_radical(args, out) -> int:
    from .permcore import quotient
    from .sigmakit import f_block, o_block, o_pi

    sigma = _sigma(args)
    g = _group(args.group, _env(args))
    if args.pi:
        primes = {int(x) for x in args.pi.split(",") if x.strip()}
        r = o_pi(g, primes)
        what = f"O_{{{','.join(map(str, sorted(primes)))}}}(G)"
    else:
        sigma.check_block(args.block)
        r = f_block(g, args.block, sigma) if args.full else o_block(g, args.block, sigma)
        what = f"{'F' if args.full else 'O'}_{args.block}(G)"
    out(f"{what} order {r.order}")
    out(f"quotient {_label(quotient(g, r))} of order {g.order // r.order}")
    return 0


def cmd_member(args, out) -> int:
    from .classes import GeneratedClosure, monolithic_descent_certificate
    from .permcore import socle_and_monolith

    sigma = _sigma(args)
    env = _env(args)
    ctx = _context(args)
    cls = _parse(args.cls, args, sigma, env)
    for ref in args.group:
        g = _group(ref, env)
        v = ctx.member(cls, g)
        out(str(v) if len(args.group) == 1 else f"{ref} {v}")
        if args.explain and isinstance(cls, GeneratedClosure) and cls.level == 0 and g.order > 1 \
                and socle_and_monolith(g)[2] is not None:
            cert = monolithic_descent_certificate(g, cls, ctx)
            if cert is not None:
                out(f"certificate {cert}")
    return 0


def cmd_define(args, out) -> int:
    from .sigmalocal import canonical_from, smallest_definition

    env = _env(args)
    ctx = _context(args)
    groups = [_group(r, env) for r in args.gens]
    f = smallest_definition(groups, args.n, args.tau, ctx)
    out(f"# smallest definition, n={args.n}, tau={args.tau}")
    out(f.describe(ctx))
    out("# canonical definition")
    out(canonical_from(f).describe(ctx))
    return 0


def _universe(args):
    from .universe import Universe, build_universe, standard_universe
    if getattr(args, "manifest", None):
        with open(args.manifest, encoding="utf-8") as fh:
            return build_universe(fh.read())
    if args.bound == 24 or args.bound == 48:
        return standard_universe(args.bound)
    return Universe.build(args.bound)


def _joinmeet_rows(payload):
    """Worker: verdict rows for a slice of universe groups."""
    argv, names = payload
    args = build_parser().parse_args(argv)
    sigma, env = _sigma(args), _env(args)
    ctx = _context(args)
    from .lattice import join, meet
    lhs, rhs = _parse(args.lhs, args, sigma, env), _parse(args.rhs, args, sigma, env)
    j, m = join(lhs, rhs, args.n, args.tau, ctx), meet(lhs, rhs)
    uni = {r.name: r for r in _universe(args)}
    return [f"{name} join={ctx.member(j, uni[name].group)} meet={ctx.member(m, uni[name].group)}"
            for name in names]


def cmd_joinmeet(args, out) -> int:
    from .lattice import join, meet

    sigma, env = _sigma(args), _env(args)
    ctx = _context(args)
    lhs, rhs = _parse(args.lhs, args, sigma, env), _parse(args.rhs, args, sigma, env)
    out(f"join: {join(lhs, rhs, args.n, args.tau, ctx)}")
    out(f"meet: {meet(lhs, rhs)}")
    for ref in args.group or []:
        g = _group(ref, env)
        out(f"{ref} join={ctx.member(join(lhs, rhs, args.n, args.tau, ctx), g)} meet={ctx.member(meet(lhs, rhs), g)}")
    if args.table:
        names = [r.name for r in _universe(args)]
        argv = args.argv
        for rows in _pool_map(_joinmeet_rows, [(argv, c) for c in _chunks(names, args.jobs)], args.jobs):
            for row in rows:
                out(row)
    return 0


def cmd_index(args, out) -> int:
    from .sigmalocal import sigma_locality_index

    sigma, env = _sigma(args), _env(args)
    ctx = _context(args)
    cls = _parse(args.cls, args, sigma, env)
    rep = sigma_locality_index(cls, args.nmax, args.tau, _universe(args), ctx)
    out(f"index {rep}")
    for lr in rep.levels:
        out(f"  {lr}")
    return 0


def _run_suite(payload):
    name, seed, cache_dir, cache_on = payload
    cache.configure(cache_dir, cache_on)
    from .suites import run_suite
    rep = run_suite(name, seed)
    return rep


def cmd_verify(args, out) -> int:
    from .suites import REGISTRY

    names = list(REGISTRY) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in REGISTRY:
            raise SigmaFormError(f"unknown suite {n!r}; known: {', '.join(REGISTRY)}, all")
    payloads = [(n, args.seed, cache._directory(), not args.no_cache) for n in names]
    reports = _pool_map(_run_suite, payloads, args.jobs)
    status = 0
    for rep in reports:
        out(rep.text())
        if args.timing:
            print(f"timing {rep.name} {rep.wall:.2f}s", file=sys.stderr)
    for rep in reports:
        out(rep.line())
        if rep.status == "FAIL":
            status = 1
        elif rep.status == "GAP":
            print(f"warning: suite {rep.name} has {len(rep.gaps)} Unknown gaps", file=sys.stderr)
    return status


def cmd_universe(args, out) -> int:
    out(_universe(args).summary())
    return 0


# ---------------------------------------------------------------------------
# worker pool


def _chunks(items, jobs):
    jobs = max(1, jobs)
    size = max(1, -(-len(items) // jobs))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _pool_map(fn, payloads, jobs):
    """Ordered map; results come back in input order whatever the job count."""
    if jobs <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, payloads))


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sigma", metavar="FILE", help="sigma-partition file ('block <id>: p q ...' lines)")
    common.add_argument("--groups", metavar="FILE", help="manifest naming extra groups")
    common.add_argument("--function", metavar="NAME=FILE", action="append",
                        help="sigma-function file usable as lf(NAME); repeatable")
    common.add_argument("--cache-dir", help=f"invariant cache directory (default ${cache.ENV_VAR})")
    common.add_argument("--no-cache", action="store_true", help="disable the on-disk cache")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--closure-bound", type=int, default=48,
                        help="order bound of the universe used for closure fixpoints")

    p = argparse.ArgumentParser(prog="sigmaform", description="Formations of finite groups over a sigma-partition.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="invariants of a group")
    a.add_argument("group")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("radical", parents=[common], help="O_pi(G), O_b(G) or F_b(G)")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--pi", help="comma-separated primes")
    g.add_argument("--block", help="block id, e.g. s2")
    r.add_argument("--full", action="store_true", help="with --block: F_b(G) = O_{b',b}(G)")
    r.add_argument("group")
    r.set_defaults(func=cmd_radical)

    m = sub.add_parser("member", parents=[common], help="membership verdict Yes/No/Unknown")
    m.add_argument("--class", dest="cls", required=True, help="class expression")
    m.add_argument("--explain", action="store_true", help="print exclusion certificates")
    m.add_argument("group", nargs="+")
    m.set_defaults(func=cmd_member)

    d = sub.add_parser("define", parents=[common], help="smallest and canonical definitions")
    d.add_argument("--gens", nargs="+", required=True)
    d.add_argument("--n", type=int, default=1)
    d.add_argument("--tau", default="trivial")
    d.set_defaults(func=cmd_define)

    j = sub.add_parser("joinmeet", parents=[common], help="join and meet of two classes")
    j.add_argument("--lhs", required=True)
    j.add_argument("--rhs", required=True)
    j.add_argument("--n", type=int, default=0)
    j.add_argument("--tau", default="trivial")
    j.add_argument("--group", action="append", help="group to test; repeatable")
    j.add_argument("--table", action="store_true", help="verdicts for every universe group")
    j.add_argument("--bound", type=int, default=24)
    j.add_argument("--manifest", help="universe manifest file")
    j.set_defaults(func=cmd_joinmeet)

    i = sub.add_parser("index", parents=[common], help="sigma-locality index on evidence")
    i.add_argument("--class", dest="cls", required=True)
    i.add_argument("--nmax", type=int, default=3)
    i.add_argument("--tau", default="trivial")
    i.add_argument("--bound", type=int, default=24)
    i.add_argument("--manifest", help="universe manifest file")
    i.set_defaults(func=cmd_index)

    v = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    v.add_argument("--suite", required=True, help="suite name or 'all'")
    v.add_argument("--timing", action="store_true", help="print wall times to stderr")
    v.set_defaults(func=cmd_verify)

    u = sub.add_parser("universe", parents=[common], help="build a universe and print its summary")
    u.add_argument("--bound", type=int, default=24)
    u.add_argument("--manifest", help="universe manifest file")
    u.set_defaults(func=cmd_universe)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    if args.no_cache:
        cache.configure(None, enabled=False)
    elif args.cache_dir:
        cache.configure(args.cache_dir)
    elif os.environ.get(cache.ENV_VAR):
        cache.configure(os.environ[cache.ENV_VAR])
    lines = []
    try:
        code = args.func(args, lines.append)
    except (SigmaFormError, OSError) as exc:
        sys.stdout.write("".join(x + "\n" for x in lines))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write("".join(x + "\n" for x in lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
