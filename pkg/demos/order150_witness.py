"""Walk through the order-150 group that separates the level-0 and level-1 joins.

G is the affine group x -> ax + b over the field with 25 elements, with a
running over the elements of multiplicative order dividing 6.

    python demos/order150_witness.py
"""
from sigmaform import Context, build_group, parse_class
from sigmaform.classes import monolithic_descent_certificate
from sigmaform.lattice import theorem7_classes
from sigmaform.permcore import quotient, socle_and_monolith
from sigmaform.sigmakit import o_block
from sigmaform.catalog import group_label

ctx = Context()
g, f1, f2, join1, join0 = theorem7_classes(ctx)

print(f"G has order {g.order} and acts on {g.degree} points")
mins, soc, mono = socle_and_monolith(g)
print(f"minimal normal subgroups: {len(mins)}, socle of order {soc.order}")

r5 = o_block(g, "s5", ctx.sigma)
top = quotient(g, r5)
print(f"O_5(G) has order {r5.order}; G/O_5(G) is {group_label(top)}")

# G/O_5(G) is cyclic of order 6, so it is neither a 2-group nor a 3-group
print(f"\n{f1}: {ctx.member(f1, g)}")
print(f"{f2}: {ctx.member(f2, g)}")

# one level up the join is sigma-local, and C6 lies in form{C2, C3}
print(f"\nlevel-1 join: {ctx.member(join1, g)}")

# at level 0 the join is generated by the two product classes themselves
print(f"level-0 join: {ctx.member(join0, g)}")
print("reason:", monolithic_descent_certificate(g, join0, ctx))

# the same verdicts through the expression language
w = build_group("witness150")
print("\nvia parse_class:", Context().member(parse_class("prod(Gpi{s5}, Gpi{s3})"), w))
