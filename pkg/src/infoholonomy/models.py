"""
Exponential-family models in natural coordinates.

Every model exposes its potential (log-partition function) as a
:class:`~infoholonomy.deriv.ScalarField`, the carrier ``C(x)`` and
sufficient statistics ``F(x)``, a seeded sampler and metadata flags that
the holonomy classifier consumes as assumptions.

Normal models ``normal-d`` (d = 1, 2, 3) use the statistics
``x_1..x_d`` followed by the products ``x_i x_j`` (i <= j, row-major
upper triangle).  The precision matrix ``P = Sigma^-1`` is encoded as
``theta_ii = -P_ii / 2`` and ``theta_ij = -P_ij`` for i < j, and the
linear part is ``b = P mu``.  For d = 2 this is the chart
``(x, y, x^2, xy, y^2)`` with potential
``log(2 pi sqrt(D)) - D (t2^2 t3 - t1 t2 t4 + t1^2 t5)``,
``D = 1 / (4 t3 t5 - t4^2) = det Sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .deriv import Domain, ScalarField, exp, log
from .errors import DomainError, NotPositiveDefiniteError, UnsupportedDimension

LOG_2PI = math.log(2 * math.pi)

#: Box used to draw in-domain test points for normal models.
NORMAL_MEAN_BOX = (-2.0, 2.0)
NORMAL_EIGEN_BOX = (0.3, 3.0)


@dataclass(frozen=True)
class MeanCovariancePoint:
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        if sigma.shape != (mu.size, mu.size):
            raise ValueError("sigma must be a d x d matrix matching mu")
        if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-12 * max(1.0, np.abs(sigma).max())):
            raise NotPositiveDefiniteError("covariance is not symmetric")
        if np.linalg.eigvalsh(sigma).min() <= 0:
            raise NotPositiveDefiniteError("covariance is not positive definite")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def d(self):
        return self.mu.size


@dataclass(frozen=True)
class ExponentialFamilyModel:
    """``p(x; theta) = exp(C(x) + theta . F(x) - phi(theta))``.

    Attributes
    ----------
    name : str
    n : int
        Manifold dimension (number of natural parameters).
    potential : ScalarField
    carrier : callable
        ``C(x)`` for a batch of samples, returns shape ``(count,)``.
    statistics : callable
        ``F(x)`` for a batch of samples, returns shape ``(count, n)``.
    sampler : callable or None
        ``sampler(theta, count, rng) -> x``.
    point_sampler : callable or None
        ``point_sampler(count, rng) -> (count, n)`` in-domain natural
        parameters from the model's documented test box.
    metadata : dict
        ``simply_connected``, ``admits_kaehler``, ``symmetric_space_known``.
    d : int or None
        Dimension of the underlying normal distribution, if any.
    """

    name: str
    n: int
    potential: ScalarField
    carrier: Callable = None
    statistics: Callable = None
    sampler: Callable = None
    point_sampler: Callable = None
    metadata: dict = field(default_factory=dict)
    d: int = None

    def check(self, theta):
        self.potential.domain.check(np.asarray(theta, dtype=float))

    def sample_points(self, count, seed=0):
        """In-domain natural parameters, shape ``(count, n)``."""
        if self.point_sampler is None:
            raise NotImplementedError(f"model {self.name!r} has no point sampler")
        return self.point_sampler(count, np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# Normal models
# ---------------------------------------------------------------------------

def _quad_pairs(d):
    return [(i, j) for i in range(d) for j in range(i, d)]


def _det(m):
    d = len(m)
    if d == 1:
        return m[0][0]
    if d == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if d == 3:
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    raise UnsupportedDimension(d)


def _adjugate(m):
    d = len(m)
    if d == 1:
        return [[1.0]]
    adj = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = [[m[r][c] for c in range(d) if c != j] for r in range(d) if r != i]
            adj[j][i] = (-1) ** (i + j) * _det(minor)
    return adj


def _precision_entries(theta, d):
    """Precision matrix P (nested lists) from the quadratic natural parameters."""
    P = [[None] * d for _ in range(d)]
    for k, (i, j) in enumerate(_quad_pairs(d)):
        t = theta[d + k]
        if i == j:
            P[i][i] = -2 * t
        else:
            P[i][j] = -t
            P[j][i] = -t
    return P


def _general_normal_potential(d):
    def phi(theta):
        P = _precision_entries(theta, d)
        b = theta[:d]
        det = _det(P)
        adj = _adjugate(P)
        quad = 0
        for i in range(d):
            row = 0
            for j in range(d):
                row = row + adj[i][j] * b[j]
            quad = quad + b[i] * row
        return 0.5 * quad / det - 0.5 * log(det) + 0.5 * d * LOG_2PI
    return phi


def _normal2_potential(theta):
    t1, t2, t3, t4, t5 = theta
    delta = 1 / (4 * t3 * t5 - t4 * t4)
    return log(2 * math.pi * delta ** 0.5) - delta * (t2 * t2 * t3 - t1 * t2 * t4 + t1 * t1 * t5)


def _leading_minors(d):
    def make(k):
        def margin(theta):
            P = _precision_entries(theta, d)
            return _det([row[: k + 1] for row in P[: k + 1]])
        return margin
    return tuple((f"precision minor {k + 1} > 0", make(k)) for k in range(d))


def _normal_statistics(d):
    pairs = _quad_pairs(d)

    def stats(x):
        x = np.asarray(x, dtype=float).reshape(-1, d)
        quad = np.stack([x[:, i] * x[:, j] for i, j in pairs], axis=1)
        return np.concatenate([x, quad], axis=1)
    return stats


def natural_from_meancov(d: int, point: MeanCovariancePoint) -> np.ndarray:
    """Natural coordinates of ``N(mu, Sigma)``."""
    if point.d != d:
        raise ValueError(f"point has dimension {point.d}, expected {d}")
    P = np.linalg.inv(point.sigma)
    P = 0.5 * (P + P.T)
    b = P @ point.mu
    quad = [(-0.5 * P[i, i] if i == j else -P[i, j]) for i, j in _quad_pairs(d)]
    return np.concatenate([b, quad])


def meancov_from_natural(d: int, theta) -> MeanCovariancePoint:
    """Inverse of :func:`natural_from_meancov`.

    Raises
    ------
    DomainError
        If the quadratic parameters do not encode a positive definite precision.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (d * (d + 3) // 2,):
        raise ValueError(f"expected {d * (d + 3) // 2} natural coordinates")
    P = np.array(_precision_entries(list(theta), d), dtype=float)
    if np.linalg.eigvalsh(P).min() <= 0:
        raise DomainError("precision matrix is not positive definite")
    sigma = np.linalg.inv(P)
    sigma = 0.5 * (sigma + sigma.T)
    return MeanCovariancePoint(sigma @ theta[:d], sigma)


def random_meancov(d, rng):
    mu = rng.uniform(*NORMAL_MEAN_BOX, size=d)
    lam = rng.uniform(*NORMAL_EIGEN_BOX, size=d)
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    sigma = (q * lam) @ q.T
    return MeanCovariancePoint(mu, 0.5 * (sigma + sigma.T))


def normal_model(d: int) -> ExponentialFamilyModel:
    """The manifold of d-variate normal distributions, n = d(d+3)/2."""
    if d not in (1, 2, 3):
        raise UnsupportedDimension(f"normal models are provided for d in {{1, 2, 3}}, got {d}")
    n = d * (d + 3) // 2
    fn = _normal2_potential if d == 2 else _general_normal_potential(d)
    domain = Domain.unbounded(n, _leading_minors(d))
    potential = ScalarField(n, fn, domain, name=f"phi_normal_{d}")

    def carrier(x):
        x = np.asarray(x, dtype=float).reshape(-1, d)
        return np.zeros(x.shape[0])

    def sampler(theta, count, rng):
        pt = meancov_from_natural(d, theta)
        chol = np.linalg.cholesky(pt.sigma)
        z = rng.standard_normal((count, d))
        return pt.mu + z @ chol.T

    def point_sampler(count, rng):
        return np.array([natural_from_meancov(d, random_meancov(d, rng)) for _ in range(count)])

    return ExponentialFamilyModel(
        name=f"normal-{d}",
        n=n,
        potential=potential,
        carrier=carrier,
        statistics=_normal_statistics(d),
        sampler=sampler,
        point_sampler=point_sampler,
        metadata={"simply_connected": True, "admits_kaehler": False,
                  "symmetric_space_known": True if d == 1 else None},
        d=d,
    )


# ---------------------------------------------------------------------------
# One-parameter families and the flat toy model
# ---------------------------------------------------------------------------

def flat_model(n: int = 2) -> ExponentialFamilyModel:
    """Unit-covariance Gaussian with free mean: phi = |theta|^2 / 2, flat metric."""

    def fn(theta):
        return 0.5 * sum(t * t for t in theta)

    def carrier(x):
        x = np.asarray(x, dtype=float).reshape(-1, n)
        return -0.5 * np.sum(x * x, axis=1) - 0.5 * n * LOG_2PI

    def statistics(x):
        return np.asarray(x, dtype=float).reshape(-1, n)

    def sampler(theta, count, rng):
        return np.asarray(theta, dtype=float) + rng.standard_normal((count, n))

    def point_sampler(count, rng):
        return rng.uniform(-2.0, 2.0, size=(count, n))

    return ExponentialFamilyModel(
        name="flat-toy", n=n, potential=ScalarField(n, fn, name="phi_flat"),
        carrier=carrier, statistics=statistics, sampler=sampler,
        point_sampler=point_sampler,
        metadata={"simply_connected": True, "admits_kaehler": False,
                  "symmetric_space_known": True},
    )


def _scalar_stats(x):
    return np.asarray(x, dtype=float).reshape(-1, 1)


def bernoulli_model() -> ExponentialFamilyModel:
    return ExponentialFamilyModel(
        name="bernoulli", n=1,
        potential=ScalarField(1, lambda t: log(1 + exp(t[0])), name="phi_bernoulli"),
        carrier=lambda x: np.zeros(np.asarray(x).reshape(-1).size),
        statistics=_scalar_stats,
        sampler=lambda theta, count, rng: (
            rng.random(count) < 1 / (1 + np.exp(-theta[0]))).astype(float),
        point_sampler=lambda count, rng: rng.uniform(-3.0, 3.0, size=(count, 1)),
        metadata={"simply_connected": True, "admits_kaehler": False,
                  "symmetric_space_known": True},
    )


def poisson_model() -> ExponentialFamilyModel:
    return ExponentialFamilyModel(
        name="poisson", n=1,
        potential=ScalarField(1, lambda t: exp(t[0]), name="phi_poisson"),
        carrier=lambda x: -gammaln(np.asarray(x, dtype=float).reshape(-1) + 1),
        statistics=_scalar_stats,
        sampler=lambda theta, count, rng: rng.poisson(np.exp(theta[0]), size=count).astype(float),
        point_sampler=lambda count, rng: rng.uniform(-1.0, 2.0, size=(count, 1)),
        metadata={"simply_connected": True, "admits_kaehler": False,
                  "symmetric_space_known": True},
    )


def gamma_model(shape: float = 2.0) -> ExponentialFamilyModel:
    """Gamma distribution with fixed shape; theta = -rate < 0."""
    domain = Domain((-np.inf,), (0.0,))
    return ExponentialFamilyModel(
        name="gamma", n=1,
        potential=ScalarField(1, lambda t: -shape * log(-t[0]), domain, name="phi_gamma"),
        carrier=lambda x: ((shape - 1) * np.log(np.asarray(x, dtype=float).reshape(-1))
                           - gammaln(shape)),
        statistics=_scalar_stats,
        sampler=lambda theta, count, rng: rng.gamma(shape, -1.0 / theta[0], size=count),
        point_sampler=lambda count, rng: rng.uniform(-3.0, -0.3, size=(count, 1)),
        metadata={"simply_connected": True, "admits_kaehler": False,
                  "symmetric_space_known": True},
    )


_REGISTRY = {
    "normal-1": lambda: normal_model(1),
    "normal-2": lambda: normal_model(2),
    "normal-3": lambda: normal_model(3),
    "flat-toy": flat_model,
    "bernoulli": bernoulli_model,
    "poisson": poisson_model,
    "gamma": gamma_model,
}


def model_names():
    return sorted(_REGISTRY)


def get_model(name: str) -> ExponentialFamilyModel:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown model {name!r}; available: {', '.join(model_names())}") from None


# ---------------------------------------------------------------------------
# Density and sampling
# ---------------------------------------------------------------------------

def log_density(model: ExponentialFamilyModel, x, theta):
    """``C(x) + theta . F(x) - phi(theta)``; scalar for a single sample."""
    theta = np.asarray(theta, dtype=float)
    model.check(theta)
    x_arr = np.asarray(x, dtype=float)
    single = x_arr.ndim == 0 or (model.d is not None and x_arr.ndim == 1 and x_arr.size == model.d) \
        or (model.d is None and x_arr.ndim == 1 and model.n > 1 and x_arr.size == model.n)
    out = model.carrier(x_arr) + model.statistics(x_arr) @ theta - model.potential(theta)
    return float(out[0]) if single else out


def sample(model: ExponentialFamilyModel, theta, count: int, seed: int):
    """``count`` i.i.d. draws at ``theta``; bit-identical for a fixed seed."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if model.sampler is None:
        raise NotImplementedError(f"model {model.name!r} has no sampler")
    theta = np.asarray(theta, dtype=float)
    model.check(theta)
    return model.sampler(theta, count, np.random.default_rng(seed))
