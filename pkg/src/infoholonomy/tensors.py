"""
Fisher metric, connections and curvature of an exponential family.

All quantities are evaluated in natural coordinates from the derivatives
of the potential: ``g = d^2 phi``, ``T = d^3 phi`` and the Christoffel
symbols of ``g``.  Index conventions:

``gamma_first[m, i, j]``
    Gamma_{m,ij} = 1/2 (d_i g_jm + d_j g_im - d_m g_ij), lowered index first.
``gamma_second[k, i, j]``
    Gamma^k_ij = g^{km} Gamma_{m,ij}.
``riemann[i, j, k, l]``
    g(R(d_i, d_j) d_l, d_k) with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y],
    so that ``riemann[i, j, i, j]`` is the sectional curvature times the
    area of the (i, j) coordinate plane.  The hyperbolic plane (the
    univariate normal family) has sectional curvature -1/2.
``ricci[j, l]``
    g^{ik} R_ijkl.

Every function accepts batched points of shape ``(n, *batch)``; outputs then
carry the batch axes in front.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deriv import evaluate_stack
from .errors import DegeneratePlane, NotPositiveDefiniteError
from .models import ExponentialFamilyModel, sample

DEGENERATE_PLANE_TOL = 1e-12


@dataclass(frozen=True)
class CurvatureBundle:
    point: np.ndarray
    alpha: float
    g: np.ndarray
    g_inv: np.ndarray
    gamma_first: np.ndarray
    gamma_second: np.ndarray
    T: np.ndarray
    riemann: np.ndarray
    K: np.ndarray
    ricci: np.ndarray
    scalar: np.ndarray

    def summary(self):
        """Plain-data view used in reports."""
        return {
            "point": self.point.tolist(),
            "alpha": float(self.alpha),
            "g": self.g.tolist(),
            "K": self.K.tolist(),
            "ricci": self.ricci.tolist(),
            "scalar": float(self.scalar),
        }


def _stack(model, theta, order):
    theta = np.asarray(theta, dtype=float)
    return evaluate_stack(model.potential, theta, order)


def _check_pd(g):
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError("Fisher metric is not positive definite") from None


def fisher_metric(model: ExponentialFamilyModel, theta) -> np.ndarray:
    """Hessian of the potential.

    Raises
    ------
    DomainError
    NotPositiveDefiniteError
    """
    g = _stack(model, theta, 2).order2
    _check_pd(g)
    return g


def skewness_tensor(model: ExponentialFamilyModel, theta) -> np.ndarray:
    """Third cumulant of the sufficient statistics, ``d^3 phi``."""
    return _stack(model, theta, 3).order3


def _christoffel_first(dg):
    # dg[..., a, b, c] = d_c g_ab
    return 0.5 * (np.einsum("...jmi->...mij", dg) + np.einsum("...imj->...mij", dg)
                  - np.einsum("...ijm->...mij", dg))


def _christoffel_first_deriv(ddg):
    # ddg[..., a, b, c, d] = d_c d_d g_ab; returns d_a Gamma_{m,ij} as [..., a, m, i, j]
    return 0.5 * (np.einsum("...jmia->...amij", ddg) + np.einsum("...imja->...amij", ddg)
                  - np.einsum("...ijma->...amij", ddg))


def levi_civita(model: ExponentialFamilyModel, theta):
    """``(gamma_first, gamma_second)`` of the Fisher metric."""
    s = _stack(model, theta, 3)
    g_inv = np.linalg.inv(s.order2)
    first = _christoffel_first(s.order3)
    second = np.einsum("...km,...mij->...kij", g_inv, first)
    return first, second


def alpha_connection(model: ExponentialFamilyModel, theta, alpha: float) -> np.ndarray:
    """``Gamma^(alpha)_{m,ij} = Gamma_{m,ij} - alpha/2 T_{mij}`` (lowered index first)."""
    s = _stack(model, theta, 3)
    return _christoffel_first(s.order3) - 0.5 * alpha * s.order3


def _curvature_from_stack(s, alpha):
    g = s.order2
    g_inv = np.linalg.inv(g)
    dg = s.order3
    first = _christoffel_first(dg) - 0.5 * alpha * s.order3
    dfirst = _christoffel_first_deriv(s.order4) - 0.5 * alpha * np.moveaxis(s.order4, -1, -4)
    second = np.einsum("...km,...mij->...kij", g_inv, first)
    # d_a Gamma^p_jl = g^{pm} (d_a Gamma_{m,jl} - d_a g_{mb} Gamma^b_jl)
    inner = dfirst - np.einsum("...mba,...bjl->...amjl", dg, second)
    dsecond = np.einsum("...pm,...amjl->...apjl", g_inv, inner)
    # R^p_{l i j} = d_i G^p_jl - d_j G^p_il + G^p_iq G^q_jl - G^p_jq G^q_il
    r_up = (np.einsum("...ipjl->...plij", dsecond) - np.einsum("...jpil->...plij", dsecond)
            + np.einsum("...piq,...qjl->...plij", second, second)
            - np.einsum("...pjq,...qil->...plij", second, second))
    riemann = np.einsum("...kp,...plij->...ijkl", g, r_up)
    return g, g_inv, first, second, riemann


def riemann_tensor(model: ExponentialFamilyModel, theta, alpha: float = 0.0) -> np.ndarray:
    """All-lower curvature of the alpha-connection; needs fourth derivatives."""
    return _curvature_from_stack(_stack(model, theta, 4), alpha)[-1]


def _sectional(g, riemann):
    n = g.shape[-1]
    diag = np.einsum("...ii->...i", g)
    area = diag[..., :, None] * diag[..., None, :] - g**2
    num = np.einsum("...ijij->...ij", riemann)
    off = ~np.eye(n, dtype=bool)
    if np.any(area[..., off] <= DEGENERATE_PLANE_TOL):
        raise DegeneratePlane("coordinate plane with g_ii g_jj - g_ij^2 <= 1e-12")
    safe = np.where(off, area, 1.0)
    return np.where(off, num / safe, 0.0)


def sectional_matrix(bundle: CurvatureBundle) -> np.ndarray:
    """Sectional curvatures of the coordinate planes, zero diagonal."""
    return _sectional(bundle.g, bundle.riemann)


def ricci_tensor(bundle: CurvatureBundle) -> np.ndarray:
    return np.einsum("...ik,...ijkl->...jl", bundle.g_inv, bundle.riemann)


def scalar_curvature(bundle: CurvatureBundle):
    return np.einsum("...jl,...jl->...", bundle.g_inv, bundle.ricci)


def curvature_bundle(model: ExponentialFamilyModel, theta, alpha: float = 0.0) -> CurvatureBundle:
    """Every per-point geometric quantity at ``theta`` (batched if 2-D)."""
    theta = np.asarray(theta, dtype=float)
    s = _stack(model, theta, 4)
    g, g_inv, first, second, riemann = _curvature_from_stack(s, alpha)
    _check_pd(g)
    ricci = np.einsum("...ik,...ijkl->...jl", g_inv, riemann)
    return CurvatureBundle(
        point=theta,
        alpha=alpha,
        g=g,
        g_inv=g_inv,
        gamma_first=first,
        gamma_second=second,
        T=s.order3,
        riemann=riemann,
        K=_sectional(g, riemann),
        ricci=ricci,
        scalar=np.einsum("...jl,...jl->...", g_inv, ricci),
    )


def curvature_bundles(model, points, alpha=0.0) -> list[CurvatureBundle]:
    """Bundles for a ``(count, n)`` array of points, evaluated in one batch."""
    points = np.asarray(points, dtype=float)
    batch = curvature_bundle(model, points.T, alpha)
    out = []
    for b in range(points.shape[0]):
        out.append(CurvatureBundle(
            point=points[b], alpha=alpha, g=batch.g[b], g_inv=batch.g_inv[b],
            gamma_first=batch.gamma_first[b], gamma_second=batch.gamma_second[b],
            T=batch.T[b], riemann=batch.riemann[b], K=batch.K[b],
            ricci=batch.ricci[b], scalar=batch.scalar[b],
        ))
    return out


# ---------------------------------------------------------------------------
# Monte-Carlo expectations
# ---------------------------------------------------------------------------

_CHUNK = 100_000


def _scores(model, theta, count, seed):
    theta = np.asarray(theta, dtype=float)
    x = sample(model, theta, count, seed)
    grad = _stack(model, theta, 1).order1
    return model.statistics(x) - grad


def fisher_metric_mc(model: ExponentialFamilyModel, theta, count: int = 1_000_000, seed: int = 0):
    """Monte-Carlo ``E[(d_i l)(d_j l)]`` with per-entry standard errors.

    Uses the exponential-family score ``d_i l = F_i(x) - d_i phi(theta)``.

    Returns
    -------
    estimate, stderr : ndarray, ndarray
    """
    s = _scores(model, theta, count, seed)
    first = s.T @ s
    second = (s * s).T @ (s * s)
    mean = first / count
    var = second / count - mean**2
    return mean, np.sqrt(np.maximum(var, 0.0) / count)


def skewness_tensor_mc(model: ExponentialFamilyModel, theta, count: int = 1_000_000, seed: int = 0):
    """Monte-Carlo ``E[(d_i l)(d_j l)(d_k l)]`` with per-entry standard errors."""
    s = _scores(model, theta, count, seed)
    n = s.shape[1]
    first = np.zeros((n, n * n))
    second = np.zeros((n, n * n))
    for start in range(0, count, _CHUNK):
        c = s[start:start + _CHUNK]
        pair = (c[:, :, None] * c[:, None, :]).reshape(c.shape[0], n * n)
        first += c.T @ pair
        second += (c * c).T @ (pair * pair)
    mean = first / count
    var = second / count - mean**2
    return mean.reshape(n, n, n), np.sqrt(np.maximum(var, 0.0) / count).reshape(n, n, n)
