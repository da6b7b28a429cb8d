"""
The univariate normal family as a hyperbolic plane
==================================================

Natural coordinates theta = (mu / s^2, -1 / (2 s^2)).  The Fisher metric is
the Hessian of the log-partition function, and its curvature is a constant
-1/2.  Parallel transport around a small loop rotates vectors by roughly
curvature times enclosed area.
"""

# %%
import numpy as np

from infoholonomy import (
    MeanCovariancePoint,
    curvature_bundle,
    fisher_metric,
    get_model,
    natural_from_meancov,
    parallel_transport_loop,
)
from infoholonomy.holonomy import rectangle_loop

model = get_model("normal-1")
theta = natural_from_meancov(1, MeanCovariancePoint([0.0], [[1.0]]))
print("theta at N(0, 1):", theta)
print("Fisher metric:\n", fisher_metric(model, theta))

# %%
# The closed form in terms of (mu, s) is [[s^2, 2 mu s^2], [2 mu s^2, 2 s^2 (2 mu^2 + s^2)]].
mu, s = 1.3, 0.7
theta = natural_from_meancov(1, MeanCovariancePoint([mu], [[s * s]]))
print(fisher_metric(model, theta))
print(np.array([[s**2, 2 * mu * s**2], [2 * mu * s**2, 2 * s**2 * (2 * mu**2 + s**2)]]))

# %%
# Sectional curvature at a handful of random points
for pt in model.sample_points(5, seed=1):
    b = curvature_bundle(model, pt)
    print(f"theta = {pt.round(3)}  K = {b.K[0, 1]:+.12f}  scalar = {b.scalar:+.6f}")

# %%
# Holonomy of a small coordinate rectangle, viewed in an orthonormal frame
eps = 0.02
res = parallel_transport_loop(model, rectangle_loop(theta, 0, 1, eps), steps=2000)
g = fisher_metric(model, theta)
L = np.linalg.cholesky(g)
rot = L.T @ res.matrix @ np.linalg.inv(L.T)
angle = np.arctan2(rot[1, 0], rot[0, 0])
area = eps**2 * np.sqrt(np.linalg.det(g))
print(f"rotation angle {angle:+.3e}, curvature x area {-0.5 * area:+.3e}")
print(f"orthogonality residual {res.orthogonality_residual:.1e}, det {res.determinant:.12f}")
