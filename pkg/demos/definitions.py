"""Smallest and canonical sigma-local definitions of small generated formations.

    python demos/definitions.py
"""
from sigmaform import Context, Verdict, build_group, standard_universe
from sigmaform.classes import SigmaLocal
from sigmaform.sigmalocal import canonical_from, class_at, generated_member, lf_member, smallest_definition

ctx = Context()
u = standard_universe(24)

for names in (["S3"], ["C6"], ["S3", "C4"]):
    gens = [build_group(n) for n in names]
    print(f"== generators {names}")
    for b in ("s2", "s3", "s5"):
        vals = [g.order for g in class_at(gens, b, ctx)]
        print(f"  block {b}: G/F_b(G) orders {vals or 'none (block not met)'}")
    f = smallest_definition(gens, 1, "trivial", ctx)
    print("  smallest definition:")
    for line in f.describe(ctx).splitlines():
        print("    " + line)

    # the local class of f is the generated formation itself
    members = [r.name for r in u if lf_member(f, r.group, ctx) is Verdict.YES]
    direct = [r.name for r in u if generated_member(r.group, gens, 1, "trivial", ctx) is Verdict.YES]
    print(f"  {len(members)} universe groups in LF(f); generated closure agrees: {members == direct}")

    canon = canonical_from(f)
    same = all(lf_member(canon, r.group, ctx) is lf_member(f, r.group, ctx) for r in u)
    print(f"  canonical definition defines the same class: {same}")
    print(f"  a few members: {', '.join(members[:8])}")

# SigmaLocal wraps a definition as a class
print("\nS3 in LF(smallest definition of {C6}):",
      ctx.member(SigmaLocal(smallest_definition([build_group('C6')], 1, 'trivial', ctx)), build_group("S3")))
