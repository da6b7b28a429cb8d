"""
Geometric property checks over sampled points.

Each check evaluates Levi-Civita curvature (alpha = 0) at a set of points
and returns a :class:`PropertyReport` whose witness records the residual
at every point, so a verdict can always be traced back to numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from .tensors import CurvatureBundle, curvature_bundles

HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"

#: Dead band around zero used when classifying curvature signs.
SIGN_DEADBAND = 1e-10
DEFAULT_POINTS = 20


@dataclass
class PropertyReport:
    property: str
    verdict: str
    tolerance: float
    witness: list = field(default_factory=list)
    value: Optional[float] = None
    note: str = ""

    @property
    def holds(self):
        return self.verdict == HOLDS

    def to_dict(self):
        return {
            "property": self.property,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "value": self.value,
            "note": self.note,
            "witness": self.witness,
        }


def _bundles(model, points):
    if len(points) and isinstance(points[0], CurvatureBundle):
        return list(points)
    return curvature_bundles(model, np.asarray(points, dtype=float), 0.0)


def _require(bundles, minimum):
    if len(bundles) < minimum:
        raise ValueError(f"need at least {minimum} points, got {len(bundles)}")


def _offdiag(K):
    n = K.shape[-1]
    return K[~np.eye(n, dtype=bool)]


def is_einstein(model, points, tol: float = 1e-6) -> PropertyReport:
    """Test ``Ric = k g`` with a single constant ``k``.

    At each point ``k`` is the least-squares fit minimising the Frobenius
    norm of ``Ric - k g`` in a g-orthonormal frame (so ``k = scalar / n``);
    the residual is that norm divided by the frame norm of ``Ric``.  The
    frame norm makes the residual independent of the coordinate chart.  The
    plain coordinate-component residual is also recorded in the witness.
    ``points`` may be coordinates or precomputed bundles.
    """
    bundles = _bundles(model, points)
    _require(bundles, 5)
    ks, witness = [], []
    for b in bundles:
        n = b.g.shape[-1]
        ric = b.g_inv @ b.ricci
        k = float(np.trace(ric)) / n
        err = ric - k * np.eye(n)
        norm2 = float(np.trace(ric @ ric))
        resid = float(np.sqrt(max(np.trace(err @ err), 0.0) / norm2)) if norm2 > 0 else 0.0
        k_coord = float(np.sum(b.ricci * b.g) / np.sum(b.g * b.g))
        norm_c = float(np.linalg.norm(b.ricci))
        resid_c = float(np.linalg.norm(b.ricci - k_coord * b.g)) / norm_c if norm_c > 0 else 0.0
        ks.append(k)
        witness.append({"point": b.point.tolist(), "k": k, "residual": resid,
                        "coordinate_residual": resid_c})
    ks = np.array(ks)
    k_mean = float(ks.mean())
    spread = float(np.max(np.abs(ks - k_mean)))
    pointwise = all(w["residual"] <= tol for w in witness)
    if pointwise and spread <= tol * max(1.0, abs(k_mean)):
        return PropertyReport("einstein", HOLDS, tol, witness, value=k_mean)
    note = "Ric not proportional to g" if not pointwise else f"k varies across points by {spread:.3g}"
    bad = [w for w in witness if w["residual"] > tol] or witness
    return PropertyReport("einstein", FAILS, tol, bad, note=note)


def constant_curvature(model, points, tol: float = 1e-8) -> PropertyReport:
    """Test whether every coordinate-plane sectional curvature equals one kappa."""
    bundles = _bundles(model, points)
    _require(bundles, 5)
    if bundles[0].g.shape[-1] < 2:
        return PropertyReport("constant_curvature", INCONCLUSIVE, tol,
                              note="no 2-planes in a one-dimensional manifold")
    values = np.concatenate([_offdiag(b.K) for b in bundles])
    kappa = float(np.median(values))
    witness = []
    for b in bundles:
        dev = float(np.max(np.abs(_offdiag(b.K) - kappa)))
        witness.append({"point": b.point.tolist(), "residual": dev})
    if all(w["residual"] <= tol for w in witness):
        return PropertyReport("constant_curvature", HOLDS, tol, witness, value=kappa)
    bad = [w for w in witness if w["residual"] > tol]
    return PropertyReport("constant_curvature", FAILS, tol, bad,
                          note="sectional curvatures differ between planes or points")


def curvature_sign_profile(model, points) -> str:
    """``"zero"``, ``"all_nonnegative"``, ``"all_nonpositive"`` or ``"mixed"``.

    A mixed profile rules out Euclidean, compact and non-compact symmetric
    types; it is used as evidence of a nonsymmetric metric.
    """
    bundles = _bundles(model, points)
    _require(bundles, 5)
    values = np.concatenate([_offdiag(b.K) for b in bundles])
    if values.size == 0 or np.all(np.abs(values) <= SIGN_DEADBAND):
        return "zero"
    if np.all(values >= -SIGN_DEADBAND):
        return "all_nonnegative"
    if np.all(values <= SIGN_DEADBAND):
        return "all_nonpositive"
    return "mixed"


def block_diagonal_partition(K, tol: float = 1e-10):
    """Connected components of the graph with an edge wherever ``|K_ij| > tol``.

    Returns a list of 0-based index groups when there are at least two
    components (the sectional matrix is block diagonal up to relabelling,
    evidence of reducibility), or ``None`` when the graph is connected.
    """
    K = np.asarray(K, dtype=float)
    adj = np.abs(K) > tol
    np.fill_diagonal(adj, False)
    count, labels = connected_components(adj, directed=False)
    if count < 2:
        return None
    groups = [sorted(int(i) for i in np.flatnonzero(labels == c)) for c in range(count)]
    return sorted(groups)


def is_flat(model, points, tol: float = 1e-10) -> PropertyReport:
    """Holds iff every curvature component is below ``tol`` at every point."""
    bundles = _bundles(model, points)
    _require(bundles, 1)
    witness = [{"point": b.point.tolist(), "residual": float(np.max(np.abs(b.riemann), initial=0.0))}
               for b in bundles]
    if all(w["residual"] < tol for w in witness):
        return PropertyReport("flat", HOLDS, tol, witness)
    return PropertyReport("flat", FAILS, tol, [w for w in witness if w["residual"] >= tol])


def default_points(model, count: int = DEFAULT_POINTS, seed: int = 0):
    """Seeded test points from the model's documented in-domain box."""
    return model.sample_points(count, seed)
