"""
Published closed forms for the bivariate normal manifold (quarantined).

The metric, sectional-curvature and Ricci component tables for the
bivariate normal family were machine generated and their typeset form
has corrupted subscripts.  They are transcribed verbatim here as
functions of the printed symbols

``mu1, mu2, s1, s2, s11, s22, s12, alpha``

and evaluated through an explicit symbol map that assigns each printed
symbol to an entry of the mean / covariance.  Two maps are needed:

``METRIC_SYMBOLS``
    used by the metric table, where ``s1``/``s11`` denote Var(x),
    ``s2``/``s22`` denote Var(y) and ``s12`` the covariance.
``CURVATURE_SYMBOLS``
    used by the curvature and Ricci tables, where ``s2`` denotes the
    covariance (the same expressions print ``s12`` and ``s2``
    interchangeably) and only ``s22`` denotes Var(y).

Mismatches are reported by :func:`discrepancy_ledger`, never raised.
"""

from __future__ import annotations

import numpy as np

from .models import MeanCovariancePoint

# printed symbol -> (kind, index) with kind in {"mu", "sigma"}
METRIC_SYMBOLS = {
    "mu1": ("mu", 0), "mu2": ("mu", 1),
    "s1": ("sigma", (0, 0)), "s11": ("sigma", (0, 0)),
    "s2": ("sigma", (1, 1)), "s22": ("sigma", (1, 1)),
    "s12": ("sigma", (0, 1)),
}
CURVATURE_SYMBOLS = {
    "mu1": ("mu", 0), "mu2": ("mu", 1),
    "s1": ("sigma", (0, 0)), "s11": ("sigma", (0, 0)),
    "s2": ("sigma", (0, 1)), "s12": ("sigma", (0, 1)),
    "s22": ("sigma", (1, 1)),
}


def bind(point: MeanCovariancePoint, symbols: dict, alpha: float = 0.0) -> dict:
    out = {"alpha": alpha}
    for name, (kind, idx) in symbols.items():
        out[name] = float(point.mu[idx] if kind == "mu" else point.sigma[idx])
    return out


# ---------------------------------------------------------------------------
# Metric table (indices are 1-based as printed)
# ---------------------------------------------------------------------------

def _metric_table():
    return {
        (1, 1): lambda v: v["s1"],
        (1, 2): lambda v: v["s12"],
        (1, 3): lambda v: 2 * v["mu1"] * v["s1"],
        (1, 4): lambda v: v["s1"] * v["mu2"] + v["s12"] * v["mu1"],
        (1, 5): lambda v: 2 * v["s12"] * v["mu2"],
        (2, 2): lambda v: v["s22"],
        (2, 3): lambda v: 2 * v["s12"] * v["mu1"],
        (2, 4): lambda v: v["s2"] * v["mu1"] + v["s12"] * v["mu2"],
        (2, 5): lambda v: 2 * v["s2"] * v["mu2"],
        (3, 3): lambda v: 2 * v["s1"] * (v["s1"] + 2 * v["mu1"] ** 2),
        (3, 4): lambda v: (2 * v["s12"] * v["s11"] + 2 * v["mu1"] * v["s1"] * v["mu2"]
                           + 2 * v["mu1"] ** 2 * v["s12"]),
        (3, 5): lambda v: 2 * v["s12"] * (v["s12"] + 2 * v["mu1"] * v["mu2"]),
        (4, 4): lambda v: (v["s1"] * v["s2"] + v["s1"] * v["mu2"] ** 2 + v["mu1"] ** 2 * v["s2"]
                           + 2 * v["mu1"] * v["s12"] * v["mu2"] + v["s12"] ** 2),
        (4, 5): lambda v: (2 * v["s2"] * v["s12"] + 2 * v["s22"] * v["mu1"] * v["mu2"]
                           + 2 * v["s12"] * v["mu2"] ** 2),
        (5, 5): lambda v: 2 * v["s2"] * (v["s2"] + 2 * v["mu2"] ** 2),
    }


# ---------------------------------------------------------------------------
# Sectional curvature table
# ---------------------------------------------------------------------------

def _k14(v):
    s1, s2, s11, s22, mu1, a = v["s1"], v["s2"], v["s11"], v["s22"], v["mu1"], v["alpha"]
    t1 = (-1 / 4 * (-3 * s2**2 * s1 - s1**2 * s22 - s2**2 * mu1**2 + s1 * mu1**2 * s22) * a**2
          / (s11**2 * s22 + s1 * mu1**2 * s22 + s2**2 * s1 - s2**2 * mu1**2))
    t2 = (-1 / 4 * (s1**2 * s22 + 3 * s2**2 * s1 - s1 * mu1**2 * s22 + s2**2 * mu1**2)
          / (s1**2 * s22 + s1 * mu1**2 * s22 + s2**2 * s1 - s2**2 * mu1**2))
    return t1 + t2


def _k15(v):
    s1, s2, s22, mu2, a = v["s1"], v["s2"], v["s22"], v["mu2"], v["alpha"]
    den = s22**2 * s1 + 2 * s1 * mu2**2 * s22 - 2 * s2**2 * mu2**2
    t1 = -1 / 2 * (s1 * mu2**2 * s22 - s22 * s2**2 - s2**2 * mu2**2) * a**2 / den
    t2 = -1 / 2 * (-s1 * mu2**2 * s22 + s22 * s2**2 + s2**2 * mu2**2) / den
    return t1 + t2


def _k23(v):
    s1, s2, s12, s22, mu1, a = v["s1"], v["s2"], v["s12"], v["s22"], v["mu1"], v["alpha"]
    den = s1**2 * s22 + 2 * s1 * mu1**2 * s22 - 2 * s2**2 * mu1**2
    t1 = -1 / 2 * (-s2**2 * s1 - s12**2 * mu1**2 + s1 * mu1**2 * s22) * a**2 / den
    t2 = -1 / 2 * (-s1 * mu1**2 * s22 + s2**2 * mu1**2 + s2**2 * s1) / den
    return t1 + t2


def _k24(v):
    s1, s2, s12, s22, mu2, a = v["s1"], v["s2"], v["s12"], v["s22"], v["mu2"], v["alpha"]
    t1 = (-1 / 4 * (-s22**2 * s1 + s1 * mu2**2 * s22 - 3 * s22 * s2**2 - s2**2 * mu2**2) * a**2
          / (s22**2 * s1 + s1 * mu2**2 * s22 + s22 * s2**2 - s2**2 * mu2**2))
    t2 = (-1 / 4 * (s22**2 * s1 - s1 * mu2**2 * s22 + 3 * s22 * s2**2 + s2**2 * mu2**2)
          / (s22**2 * s1 + s1 * mu2**2 * s22 + s22 * s12**2 - s2**2 * mu2**2))
    return t1 + t2


def _k34(v):
    s1, s2, s11, s22, mu1, mu2, a = (v["s1"], v["s2"], v["s11"], v["s22"], v["mu1"], v["mu2"],
                                     v["alpha"])
    den = (s1**3 * s22 + s1**3 * mu2**2 + 3 * s1**2 * mu1**2 * s22 - 2 * s1**2 * mu1 * s2 * mu2
           - s2**2 * s1**2 + 2 * s1 * s22 * mu1**4 - 2 * s1 * s2**2 * mu1**2 - 2 * s2**2 * mu1**4)
    n1 = (-s1**3 * s22 - s11**3 * mu2**2 - 3 * s1**2 * mu1**2 * s22 + s2**2 * s1**2
          + 2 * s1**2 * mu1 * s2 * mu2 + s1 * s22 * mu1**4 + 2 * s1 * s2**2 * mu1**2
          - s2**2 * mu1**4)
    n2 = (s1**3 * s22 + s2**2 * mu1**4 - s2**2 * s1**2 + s1**3 * mu2**2
          + 3 * s1**2 * mu1**2 * s22 - 2 * s1**2 * mu1 * s2 * mu2 - s1 * s22 * mu1**4
          - 2 * s1 * s2**2 * mu1**2)
    return -1 / 2 * n1 * a**2 / den - 1 / 2 * n2 / den


def _k35(v):
    s1, s2, s11, s22, mu1, mu2, a = (v["s1"], v["s2"], v["s11"], v["s22"], v["mu1"], v["mu2"],
                                     v["alpha"])
    n1 = (-s1 * s22 * s2**2 - 2 * s1 * s22 * mu1 * s2 * mu2 + s1 * s22 * mu1**2 * mu2**2
          - s1 * s2**2 * mu2**2 - s2**2 * mu1**2 * s22 - mu1**2 * s2**2 * mu2**2 + s2**4
          + 4 * s2**3 * mu1 * mu2)
    d1 = (s1**2 * s22**2 + 2 * s11**2 * mu2**2 * s22 + 2 * s1 * s22**2 * mu1**2
          + 4 * s1 * s22 * mu1**2 * mu2**2 - 4 * s2**3 * mu1 * mu2 - 4 * mu1**2 * s2**2 * mu2**2
          - s2**4)
    n2 = (s1 * s22 * s2**2 + 2 * s11 * s22 * mu1 * s2 * mu2 - s1 * s22 * mu1**2 * mu2**2
          + s1 * s2**2 * mu2**2 + s2**2 * mu1**2 * s22 + mu1**2 * s2**2 * mu2**2 - s2**4
          - 4 * s2**3 * mu1 * mu2)
    d2 = (s1**2 * s22**2 + 2 * s1**2 * mu2**2 * s22 + 2 * s1 * s22**2 * mu1**2
          + 4 * s11 * s22 * mu1**2 * mu2**2 - 4 * s2**3 * mu1 * mu2 - 4 * mu1**2 * s2**2 * mu2**2
          - s2**4)
    return -n1 * a**2 / d1 - n2 / d2


def _k45(v):
    s1, s2, s11, s12, s22, mu1, mu2, a = (v["s1"], v["s2"], v["s11"], v["s12"], v["s22"],
                                          v["mu1"], v["mu2"], v["alpha"])
    den = (s1 * s22**3 + 3 * s1 * s22**2 * mu2**2 + 2 * s1 * s22 * mu2**4 + s22**3 * mu1**2
           - 2 * s22**2 * mu1 * s2 * mu2 - s22**2 * s2**2 - 2 * s22 * s2**2 * mu2**2
           - 2 * s2**2 * mu2**4)
    n1 = (s1 * s22**3 + 3 * s11 * s22**2 * mu2**2 - s1 * s22 * mu2**4 + s22**3 * mu1**2
          - s22**2 * s2**2 - 2 * s22**2 * mu1 * s2 * mu2 - 2 * s22 * s2**2 * mu2**2
          + s2**2 * mu2**4)
    n2 = (-s1 * s22**3 - 3 * s1 * s22**2 * mu2**2 + s1 * s22 * mu2**4 - s22**3 * mu1**2
          + s22**2 * s12**2 + 2 * s22**2 * mu1 * s2 * mu2 + 2 * s22 * s2**2 * mu2**2
          - s2**2 * mu2**4)
    return 1 / 2 * n1 * a**2 / den + 1 / 2 * n2 / den


def _sectional_table():
    return {
        (1, 2): lambda v: 1 / 4 - 1 / 4 * v["alpha"] ** 2,
        (1, 3): lambda v: -1 / 2 + 1 / 2 * v["alpha"] ** 2,
        (1, 4): _k14,
        (1, 5): _k15,
        (2, 3): _k23,
        (2, 4): _k24,
        (2, 5): lambda v: -1 / 2 + 1 / 2 * v["alpha"] ** 2,
        (3, 4): _k34,
        (3, 5): _k35,
        (4, 5): _k45,
    }


# ---------------------------------------------------------------------------
# Ricci table
# ---------------------------------------------------------------------------

def _ricci_table():
    def r(f):
        # every printed entry has the form c(alpha^2 - 1) for an alpha-free c
        return lambda v: f(v) * (v["alpha"] ** 2 - 1)

    return {
        (1, 1): r(lambda v: 1 / 2 * v["s1"]),
        (1, 2): r(lambda v: 1 / 2 * v["s2"]),
        (1, 3): r(lambda v: v["mu1"] * v["s1"]),
        (1, 4): r(lambda v: 1 / 2 * v["s1"] * v["mu2"] + 1 / 2 * v["s2"] * v["mu1"]),
        (1, 5): r(lambda v: v["s2"] * v["mu2"]),
        (2, 2): r(lambda v: 1 / 2 * v["s22"]),
        (2, 3): r(lambda v: v["s2"] * v["mu1"]),
        (2, 4): r(lambda v: 1 / 2 * v["s22"] * v["mu1"] + 1 / 2 * v["s2"] * v["mu2"]),
        (2, 5): r(lambda v: v["s22"] * v["mu2"]),
        (3, 3): r(lambda v: 2 * v["s1"] * (v["s1"] + v["mu1"] ** 2)),
        (3, 4): r(lambda v: 2 * v["s2"] * v["s1"] + v["mu1"] * v["s1"] * v["mu2"]
                  + v["mu1"] ** 2 * v["s2"]),
        (3, 5): r(lambda v: -v["s1"] * v["s22"] + 3 * v["s2"] ** 2
                  + 2 * v["mu1"] * v["s2"] * v["mu2"]),
        (4, 4): r(lambda v: 3 / 2 * v["s11"] * v["s22"] + 1 / 2 * v["s1"] * v["mu2"] ** 2
                  + 1 / 2 * v["mu1"] ** 2 * v["s22"] + 1 / 2 * v["s2"] ** 2
                  + v["mu1"] * v["s2"] * v["mu2"]),
        (4, 5): r(lambda v: 2 * v["s22"] * v["s2"] + v["s22"] * v["mu1"] * v["mu2"]
                  + v["s2"] * v["mu2"] ** 2),
        (5, 5): r(lambda v: 2 * v["s22"] * (v["s22"] + v["mu2"] ** 2)),
    }


METRIC_TABLE = _metric_table()
SECTIONAL_TABLE = _sectional_table()
RICCI_TABLE = _ricci_table()

TABLES = {
    "g": (METRIC_TABLE, METRIC_SYMBOLS),
    "K": (SECTIONAL_TABLE, CURVATURE_SYMBOLS),
    "Ric": (RICCI_TABLE, CURVATURE_SYMBOLS),
}


def evaluate_table(name: str, point: MeanCovariancePoint, alpha: float = 0.0, symbols=None):
    """Printed values of one table at ``point``: ``{(i, j): value}`` (1-based)."""
    table, default = TABLES[name]
    v = bind(point, symbols or default, alpha)
    return {key: float(f(v)) for key, f in table.items()}


def discrepancy_ledger(computed, points, alphas=(0.0,), tol=1e-6):
    """Compare every printed entry with computed values at many points.

    Parameters
    ----------
    computed : callable
        ``computed(point, alpha) -> {"g": g, "K": K, "Ric": Ric}`` with
        0-based matrices in the natural coordinates.
    points : sequence of MeanCovariancePoint
    tol : float
        Relative tolerance ``|printed - computed| <= tol * max(1, |computed|)``.

    Returns
    -------
    list of dict
        One entry per printed expression with the worst relative error, the
        point where it occurred and a ``matches`` flag.
    """
    worst = {}
    for point in points:
        for alpha in alphas:
            values = computed(point, alpha)
            for name in TABLES:
                printed = evaluate_table(name, point, alpha)
                mat = values[name]
                for (i, j), val in printed.items():
                    ref = float(mat[i - 1, j - 1])
                    err = abs(val - ref) / max(1.0, abs(ref))
                    key = (name, i, j)
                    if key not in worst or not err <= worst[key]["error"]:
                        worst[key] = {
                            "table": name, "entry": f"{name}_{i}{j}", "error": err,
                            "printed": val, "computed": ref, "alpha": alpha,
                            "mu": point.mu.tolist(), "sigma": point.sigma.tolist(),
                        }
    out = []
    for key in sorted(worst):
        item = worst[key]
        item["matches"] = bool(item["error"] <= tol)
        item["tolerance"] = tol
        out.append(item)
    return out
