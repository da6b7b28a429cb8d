"""
Exact derivatives of smooth scalar fields up to fourth order.

Fields are plain Python callables built from ``+ - * /``, integer and real
powers, and the primitives :func:`exp`, :func:`log`, :func:`sqrt` and
:func:`power` defined here.  The same callable runs on floats, on numpy
arrays (vectorised over points) and on :class:`Jet` objects, which carry a
truncated multivariate Taylor expansion.  Evaluating a field on jets seeded
with the coordinate variables propagates every partial derivative exactly
(up to floating point round-off); :func:`finite_difference_stack` is an
independent central-difference estimate used only for cross-checking.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, NonFiniteError

MAX_ORDER = 4


# ---------------------------------------------------------------------------
# Multi-index bookkeeping
# ---------------------------------------------------------------------------

class JetSpace:
    """Monomial layout and multiplication table for ``n`` variables.

    Monomials are exponent tuples of total degree ``<= order`` ordered by
    degree.  The product of two jets is the truncated polynomial product,
    evaluated as ``S @ (x[left] * y[right])`` with a sparse 0/1 matrix ``S``.
    When the operands are known to be polynomials of low degree only the
    pairs that can be nonzero are formed (see :meth:`mul`).
    """

    def __init__(self, n: int, order: int):
        self.n = n
        self.order = order
        monos = []
        for deg in range(order + 1):
            for combo in itertools.combinations_with_replacement(range(n), deg):
                alpha = [0] * n
                for i in combo:
                    alpha[i] += 1
                monos.append(tuple(alpha))
        self.monomials = monos
        self.index = {m: k for k, m in enumerate(monos)}
        self.degree = np.array([sum(m) for m in monos])
        self.size = len(monos)

        left, right, out = [], [], []
        for ia, a in enumerate(monos):
            for ib, b in enumerate(monos):
                if self.degree[ia] + self.degree[ib] > order:
                    continue
                c = tuple(x + y for x, y in zip(a, b))
                left.append(ia)
                right.append(ib)
                out.append(self.index[c])
        self.left = np.array(left)
        self.right = np.array(right)
        self._out = np.array(out)
        self.scatter = sp.csr_matrix(
            (np.ones(len(out)), (self._out, np.arange(len(out)))),
            shape=(self.size, len(out)),
        )
        self._blocks = {}

        # flat tensor index -> (monomial index, multinomial factor alpha!)
        self.tensor_maps = []
        for k in range(order + 1):
            idx = np.empty(n**k, dtype=int)
            fac = np.empty(n**k)
            for flat, tup in enumerate(itertools.product(range(n), repeat=k)):
                alpha = [0] * n
                for i in tup:
                    alpha[i] += 1
                idx[flat] = self.index[tuple(alpha)]
                fac[flat] = math.prod(math.factorial(a) for a in alpha)
            self.tensor_maps.append((idx, fac))

    def _block(self, dx, dy):
        key = (dx, dy)
        if key not in self._blocks:
            keep = (self.degree[self.left] <= dx) & (self.degree[self.right] <= dy)
            rows = int(np.sum(self.degree <= min(self.order, dx + dy)))
            out = self._out[keep]
            scatter = sp.csr_matrix((np.ones(out.size), (out, np.arange(out.size))),
                                    shape=(rows, out.size))
            self._blocks[key] = (self.left[keep], self.right[keep], scatter)
        return self._blocks[key]

    def mul(self, x: np.ndarray, y: np.ndarray, dx: int = None, dy: int = None) -> np.ndarray:
        """Truncated product; ``dx``, ``dy`` bound the degrees of nonzero terms."""
        dx = self.order if dx is None else min(dx, self.order)
        dy = self.order if dy is None else min(dy, self.order)
        if dx == dy == self.order:
            left, right, scatter = self.left, self.right, self.scatter
        else:
            left, right, scatter = self._block(dx, dy)
        prod = x[left] * y[right]
        shape = prod.shape
        res = np.asarray(scatter @ prod.reshape(shape[0], -1))
        if res.shape[0] == self.size:
            return res.reshape((self.size,) + shape[1:])
        out = np.zeros((self.size,) + shape[1:])
        out[: res.shape[0]] = res.reshape((res.shape[0],) + shape[1:])
        return out


@functools.lru_cache(maxsize=None)
def jet_space(n: int, order: int) -> JetSpace:
    return JetSpace(n, order)


# ---------------------------------------------------------------------------
# Jet arithmetic
# ---------------------------------------------------------------------------

def _check_finite(arr):
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("non-finite intermediate value in jet arithmetic")
    return arr


class Jet:
    """Truncated Taylor expansion ``sum_alpha c_alpha h^alpha``.

    ``coef`` has shape ``(space.size, *batch)``; the batch axes let one jet
    evaluation cover many base points at once.  ``deg`` is an upper bound on
    the degree of the nonzero terms (1 for a coordinate, 0 for a constant);
    it only serves to skip products that are known to vanish.
    """

    __slots__ = ("space", "coef", "deg")
    __array_ufunc__ = None  # make numpy scalars defer to the reflected operators

    def __init__(self, space: JetSpace, coef: np.ndarray, deg: int = None):
        self.space = space
        self.coef = coef
        self.deg = space.order if deg is None else min(deg, space.order)

    @classmethod
    def variables(cls, point, order: int) -> list["Jet"]:
        """Seed jets for the coordinates at ``point`` (shape ``(n, *batch)``)."""
        point = np.asarray(point, dtype=float)
        n = point.shape[0]
        space = jet_space(n, order)
        out = []
        for i in range(n):
            coef = np.zeros((space.size,) + point.shape[1:])
            coef[0] = point[i]
            if order >= 1:
                e = [0] * n
                e[i] = 1
                coef[space.index[tuple(e)]] = 1.0
            out.append(cls(space, coef, 1))
        return out

    @property
    def value(self):
        return self.coef[0]

    def _lift(self, other):
        if isinstance(other, Jet):
            return other.coef
        coef = np.zeros_like(self.coef)
        coef[0] = other
        return coef

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.coef + other.coef, max(self.deg, other.deg))
        coef = self.coef.copy()
        coef[0] = coef[0] + other
        return Jet(self.space, coef, self.deg)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.coef, self.deg)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.space.mul(self.coef, other.coef, self.deg, other.deg),
                       self.deg + other.deg)
        return Jet(self.space, self.coef * other, self.deg)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.space, _check_finite(self.coef / other), self.deg)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        if float(p).is_integer() and p >= 0:
            p = int(p)
            result = Jet(self.space, self._lift(1.0), 0)
            base = self
            while p:
                if p & 1:
                    result = result * base
                p >>= 1
                if p:
                    base = base * base
            return result
        return power(self, p)

    def __rpow__(self, base):
        return exp(self * math.log(base))

    def reciprocal(self):
        return power(self, -1.0)

    def compose(self, derivs: Sequence[np.ndarray]) -> "Jet":
        """Apply a univariate function given its derivatives at ``self.value``."""
        h = self.coef.copy()
        h[0] = 0.0
        result = np.zeros_like(self.coef)
        result[0] = derivs[0]
        hk = None
        for k in range(1, self.space.order + 1):
            hk = h if hk is None else self.space.mul(hk, h)
            result = result + (derivs[k] / math.factorial(k)) * hk
        return Jet(self.space, _check_finite(result))

    def __repr__(self):
        return f"Jet(n={self.space.n}, order={self.space.order}, value={self.value!r})"


def _univariate_derivs(x0, kind, order, p=None):
    """Derivatives 0..order of exp / log / power at x0."""
    x0 = np.asarray(x0, dtype=float)
    if kind == "exp":
        e = _check_finite(np.exp(x0))
        return [e] * (order + 1)
    if kind == "log":
        if np.any(x0 <= 0):
            raise NonFiniteError("log of a non-positive value")
        out = [np.log(x0)]
        for k in range(1, order + 1):
            out.append((-1) ** (k - 1) * math.factorial(k - 1) / x0**k)
        return out
    if kind == "power":
        if np.any(x0 <= 0) and not float(p).is_integer():
            raise NonFiniteError("non-integer power of a non-positive value")
        if np.any(x0 == 0) and p < order:
            raise NonFiniteError("power singular at zero")
        out = []
        coeff = 1.0
        for k in range(order + 1):
            out.append(coeff * x0 ** (p - k))
            coeff *= p - k
        return out
    raise ValueError(kind)


def exp(x):
    if isinstance(x, Jet):
        return x.compose(_univariate_derivs(x.value, "exp", x.space.order))
    return np.exp(x)


def log(x):
    if isinstance(x, Jet):
        return x.compose(_univariate_derivs(x.value, "log", x.space.order))
    return np.log(x)


def power(x, p):
    if isinstance(x, Jet):
        if float(p).is_integer() and p >= 0:
            return x ** p  # exact repeated multiplication, fine at zero
        return x.compose(_univariate_derivs(x.value, "power", x.space.order, p))
    return np.power(x, p)


def sqrt(x):
    return power(x, 0.5)


# ---------------------------------------------------------------------------
# Fields and domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """Open box ``lower < x < upper`` plus named strict constraints ``g(x) > 0``.

    Constraint callables receive the coordinates as an array of shape
    ``(n, *batch)`` and return the margin with shape ``batch``.
    """

    lower: tuple
    upper: tuple
    constraints: tuple = ()

    @classmethod
    def unbounded(cls, n, constraints=()):
        return cls((-np.inf,) * n, (np.inf,) * n, tuple(constraints))

    def violations(self, point) -> list[str]:
        x = np.asarray(point, dtype=float)
        bad = []
        if not np.all(np.isfinite(x)):
            bad.append("non-finite coordinate")
            return bad
        lo = np.asarray(self.lower, dtype=float).reshape((-1,) + (1,) * (x.ndim - 1))
        hi = np.asarray(self.upper, dtype=float).reshape((-1,) + (1,) * (x.ndim - 1))
        for i in range(x.shape[0]):
            if np.any(x[i] <= lo[i]) or np.any(x[i] >= hi[i]):
                bad.append(f"coordinate {i} outside ({self.lower[i]}, {self.upper[i]})")
        for name, g in self.constraints:
            with np.errstate(all="ignore"):
                margin = np.asarray(g(x))
            if not np.all(margin > 0):
                bad.append(f"constraint {name!r} violated")
        return bad

    def contains(self, point) -> bool:
        return not self.violations(point)

    def check(self, point):
        bad = self.violations(point)
        if bad:
            raise DomainError("; ".join(bad))


@dataclass(frozen=True)
class ScalarField:
    """A smooth scalar function of ``arity`` variables on an open domain.

    ``fn`` takes a sequence of ``arity`` variables (floats, arrays or jets)
    and must only use arithmetic and the primitives of this module.
    """

    arity: int
    fn: Callable
    domain: Domain = None
    name: str = "field"

    def __post_init__(self):
        if self.domain is None:
            object.__setattr__(self, "domain", Domain.unbounded(self.arity))

    def __call__(self, point):
        x = np.asarray(point, dtype=float)
        self.domain.check(x)
        return self.fn(list(x))


@dataclass
class DerivativeStack:
    """Value and partial derivatives (orders 0-4) of a scalar field at a point.

    Higher orders that were not requested are ``None``.  With batched
    evaluation every array gains leading batch axes.
    """

    order0: np.ndarray
    order1: np.ndarray = None
    order2: np.ndarray = None
    order3: np.ndarray = None
    order4: np.ndarray = None
    point: np.ndarray = dc_field(default=None, repr=False)

    def __getitem__(self, k):
        return (self.order0, self.order1, self.order2, self.order3, self.order4)[k]

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rmul__(self, c):
        return DerivativeStack(*[None if a is None else c * a for a in self.orders()], point=self.point)

    def orders(self):
        return [self.order0, self.order1, self.order2, self.order3, self.order4]

    def _combine(self, other, op):
        return DerivativeStack(
            *[None if a is None or b is None else op(a, b)
              for a, b in zip(self.orders(), other.orders())],
            point=self.point,
        )


def _stack_from_coef(space: JetSpace, coef: np.ndarray, max_order: int, point):
    batch = coef.shape[1:]
    n = space.n
    orders = []
    for k in range(MAX_ORDER + 1):
        if k > max_order:
            orders.append(None)
            continue
        idx, fac = space.tensor_maps[k]
        vals = coef[idx] * fac.reshape((-1,) + (1,) * len(batch))
        vals = np.moveaxis(vals, 0, -1).reshape(batch + (n,) * k)
        orders.append(vals)
    return DerivativeStack(*orders, point=point)


def evaluate_stack(field: ScalarField, point, max_order: int = 4) -> DerivativeStack:
    """Exact derivatives of ``field`` at ``point`` up to ``max_order``.

    ``point`` may have shape ``(n,)`` or ``(n, *batch)``; in the latter case
    every order carries the batch axes in front, e.g. ``order2`` has shape
    ``batch + (n, n)``.

    Raises
    ------
    DomainError
        If any point violates the field's domain.
    NonFiniteError
        If an intermediate value is NaN or infinite.
    """
    if not 0 <= max_order <= MAX_ORDER:
        raise ValueError(f"max_order must be in 0..{MAX_ORDER}")
    x = np.asarray(point, dtype=float)
    if x.shape[0] != field.arity:
        raise ValueError(f"expected {field.arity} coordinates, got {x.shape[0]}")
    field.domain.check(x)
    variables = Jet.variables(x, max_order)
    with np.errstate(all="ignore"):
        out = field.fn(variables)
    space = variables[0].space
    if isinstance(out, Jet):
        coef = out.coef
    else:  # constant field
        coef = np.zeros((space.size,) + x.shape[1:])
        coef[0] = out
    _check_finite(coef)
    return _stack_from_coef(space, coef, max_order, x)


# ---------------------------------------------------------------------------
# Finite-difference oracle
# ---------------------------------------------------------------------------

# Default steps per derivative order, near the round-off/truncation optimum of
# fourth-order-accurate stencils for O(1) coordinates.
DEFAULT_FD_STEPS = (5e-4, 5e-4, 1e-3, 2e-3, 5e-3)

#: Agreement tolerances against evaluate_stack for orders 1..4, relative to
#: ``max(1, max |derivative of that order|)``.
FD_TOLERANCES = (1e-9, 1e-9, 1e-7, 1e-5, 1e-3)


@functools.lru_cache(maxsize=None)
def central_weights(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and weights of the 4th-order-accurate central stencil for d^m/dx^m."""
    if m == 0:
        return np.array([0]), np.array([1.0])
    half = 2 if m <= 2 else 3
    offsets = np.arange(-half, half + 1)
    vander = np.vander(offsets.astype(float), increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[m] = math.factorial(m)
    w = np.linalg.solve(vander, rhs)
    w[np.abs(w) < 1e-12] = 0.0
    keep = w != 0
    return offsets[keep], w[keep]


def finite_difference_stack(field: ScalarField, point, step=None) -> DerivativeStack:
    """Central-difference estimates of all derivatives up to order 4.

    Mixed partials use tensor products of 1-D fourth-order-accurate central
    stencils, so every entry has truncation error O(h^4).  ``step`` is a
    scalar used for all orders or a sequence indexed by order (0..4); the
    default is :data:`DEFAULT_FD_STEPS`.

    Raises
    ------
    DomainError
        If any stencil node leaves the domain.
    """
    x = np.asarray(point, dtype=float)
    n = field.arity
    if step is None:
        steps = DEFAULT_FD_STEPS
    elif np.isscalar(step):
        steps = (step,) * (MAX_ORDER + 1)
    else:
        steps = tuple(step)

    space = jet_space(n, MAX_ORDER)
    # for each monomial: list of (offset vector, weight)
    nodes, owners, weights = [], [], []
    for mi, alpha in enumerate(space.monomials):
        k = sum(alpha)
        h = steps[k]
        per_axis = []
        for i, m in enumerate(alpha):
            if m:
                off, w = central_weights(m)
                per_axis.append([(i, o, wi) for o, wi in zip(off, w)])
        if not per_axis:
            nodes.append(np.zeros(n))
            owners.append(mi)
            weights.append(1.0)
            continue
        for combo in itertools.product(*per_axis):
            d = np.zeros(n)
            w = 1.0
            for i, o, wi in combo:
                d[i] = o * h
                w *= wi
            nodes.append(d)
            owners.append(mi)
            weights.append(w / h**k)
    pts = x[:, None] + np.array(nodes).T
    bad = field.domain.violations(pts)
    if bad:
        raise DomainError("finite-difference stencil leaves the domain: " + "; ".join(bad))
    with np.errstate(all="ignore"):
        vals = np.asarray(field.fn(list(pts)), dtype=float) * np.ones(pts.shape[1])
    _check_finite(vals)
    derivs = np.bincount(owners, weights=np.array(weights) * vals, minlength=space.size)
    # derivs holds d^alpha f; convert to Taylor coefficients for the shared layout
    fac = np.array([math.prod(math.factorial(a) for a in m) for m in space.monomials])
    return _stack_from_coef(space, derivs / fac, MAX_ORDER, x)


def stack_discrepancy(a: DerivativeStack, b: DerivativeStack) -> list[float]:
    """Per-order max |a - b| relative to ``max(1, max |a|)`` (orders 0..4)."""
    out = []
    for x, y in zip(a.orders(), b.orders()):
        if x is None or y is None:
            out.append(float("nan"))
            continue
        scale = max(1.0, float(np.max(np.abs(x))))
        out.append(float(np.max(np.abs(x - y))) / scale)
    return out
