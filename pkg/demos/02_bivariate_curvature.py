"""
Curvature of the bivariate normal family
========================================

Five natural parameters: the linear terms for x and y and the quadratic
terms for x^2, xy and y^2.  Several coordinate-plane sectional
curvatures are constant, the Ricci tensor is not proportional to the
metric, and the curvature sign profile is mixed.
"""

# %%
import numpy as np

from infoholonomy import (
    block_diagonal_partition,
    curvature_sign_profile,
    get_model,
    is_einstein,
    meancov_from_natural,
)
from infoholonomy.tensors import curvature_bundles

np.set_printoptions(precision=4, suppress=True)
model = get_model("normal-2")
points = model.sample_points(20, seed=0)
bundles = curvature_bundles(model, points)

b = bundles[0]
print("point:", meancov_from_natural(2, b.point))
print("sectional curvatures of the coordinate planes:\n", b.K)

# %%
# K_12, K_13 and K_25 do not depend on the point
K = np.array([x.K for x in bundles])
for i, j in [(0, 1), (0, 2), (1, 4)]:
    print(f"K_{i + 1}{j + 1}: min {K[:, i, j].min():+.10f}  max {K[:, i, j].max():+.10f}")

# %%
# Ric_11 = -Sigma_11 / 2
for x in bundles[:3]:
    print(x.ricci[0, 0], -0.5 * meancov_from_natural(2, x.point).sigma[0, 0])

# %%
# Not Einstein, mixed signs, and no block structure
report = is_einstein(model, bundles)
print(report.verdict, report.note)
print("smallest residual:", min(w["residual"] for w in report.witness))
print("sign profile:", curvature_sign_profile(model, bundles))
print("block diagonal anywhere:", any(block_diagonal_partition(x.K) for x in bundles))

# %%
# alpha-connections rescale the curvature by (1 - alpha^2)
from infoholonomy import riemann_tensor

R0 = riemann_tensor(model, points[0], 0.0)
for alpha in (0.5, 0.9, 1.0):
    R = riemann_tensor(model, points[0], alpha)
    print(alpha, np.abs(R - (1 - alpha**2) * R0).max())
