"""Meets, joins and the modular law, checked as verdicts on the order-24 universe.

    python demos/lattice_tour.py
"""
from sigmaform import Context, Gpi, Identity, build_group, standard_universe
from sigmaform.classes import class_equal_on_universe
from sigmaform.lattice import compactness_probe, gen, join, meet, modularity_suite, separability_witness

ctx = Context()
u = standard_universe(24)
C = {n: build_group(n) for n in ("C2", "C3", "C4", "S3", "C6")}

two, three = gen([C["C2"]], 0), gen([C["C3"]], 0)
j = join(two, three, 0, "trivial", ctx)
print("C6 in form{C2} v form{C3}:", ctx.member(j, C["C6"]))
print("C6 in form{C2} ^ form{C3}:", ctx.member(meet(two, three), C["C6"]))

rep = class_equal_on_universe(meet(Gpi({"s2"}), Gpi({"s3"})), Identity(), u, ctx)
print(f"G_2 ^ G_3 against (1): {rep.agree} agreements, {len(rep.disagreements)} disagreements")

# gaps are groups where both sides stay Unknown; only a Yes/No clash would be a failure
rep = modularity_suite(u, samples=5, seed=1, ctx=ctx)
print("\n" + rep.text())

res = compactness_probe(C["C6"], [[C["C2"]], [C["C3"]], [C["S3"]]], 0, "trivial", ctx)
print("\nsmallest subfamily whose join holds C6:", res)

res = separability_witness(("join", ("x", 0), ("x", 1)), [Gpi({"s2"}), Gpi({"s3"})], C["C6"], u)
print("single-generated witnesses for C6 in G_2 v G_3:", res)
