"""
Holonomy of normal families
===========================

The curvature operators at a point span a Lie algebra contained in the
holonomy algebra.  For the normal families it already fills so(n), the
largest possible, so the holonomy group is SO(n).
"""

# %%
from infoholonomy import (
    EvidenceFlags,
    berger_candidates,
    classify,
    curvature_algebra_dimension,
    get_model,
)

for name in ("flat-toy", "normal-1", "normal-2", "normal-3"):
    model = get_model(name)
    theta = model.sample_points(1, seed=3)[0]
    n = model.n
    print(f"{name:9s} n = {n}  algebra dim {curvature_algebra_dimension(model, theta):2d}"
          f"  dim so(n) = {n * (n - 1) // 2}")

# %%
# Berger's list for a few dimensions, with and without the exponential-family exclusions
for n in (5, 7, 8, 12):
    generic = EvidenceFlags(n, True, True, True)
    expfam = EvidenceFlags(n, True, True, True, exponential_family=True)
    print(n, [c.group for c in berger_candidates(generic)], "->",
          [c.group for c in berger_candidates(expfam)])

# %%
# Full classification with the evidence it rests on
for name in ("normal-1", "normal-2", "normal-3", "flat-toy"):
    v = classify(get_model(name), point_budget=10, seed=0)
    print(f"{name}: {v.verdict}")
    for note in v.notes:
        print("   note:", note)
v = classify(get_model("normal-2"), point_budget=10)
print("\n".join("   assumption: " + a for a in v.assumptions))
