import itertools

import numpy as np
import pytest

from infoholonomy.errors import DomainError, HypothesesNotMet, LogUndefined, StepTooCoarse
from infoholonomy.holonomy import (
    NOT_CLASSIFIED,
    SYMMETRIC_SPACES,
    EvidenceFlags,
    berger_candidates,
    classify,
    curvature_algebra,
    curvature_algebra_dimension,
    curvature_operators,
    loop_curvature_consistency,
    parallel_transport_loop,
    rectangle_loop,
    transport_path,
)
from infoholonomy.tensors import curvature_bundle

TRI = (True, False, None)


def _flags(n, einstein, ricci_flat, kaehler, expfam):
    return EvidenceFlags(n, True, True, True, einstein=einstein, ricci_flat=ricci_flat,
                         admits_kaehler=kaehler, exponential_family=expfam)


def _all_flags(n):
    for e, r, k, x in itertools.product(TRI, TRI, TRI, (True, False)):
        if r and e is False:
            continue
        yield _flags(n, e, r, k, x)


def _groups(flags):
    return {c.group for c in berger_candidates(flags)}


# -- Berger table ----------------------------------------------------------

def test_examples():
    assert _groups(_flags(5, False, False, False, True)) == {"SO(5)"}
    assert _groups(_flags(7, None, None, None, True)) == {"SO(7)", "G2"}
    assert _groups(_flags(8, None, None, None, True)) == {"SO(8)", "Sp(2)·Sp(1)", "Spin(7)"}
    assert "Sp(3)·Sp(1)" in _groups(_flags(12, None, None, None, False))


def test_hypotheses_required():
    with pytest.raises(HypothesesNotMet) as exc:
        berger_candidates(EvidenceFlags(5, True, False, False))
    assert exc.value.failed == ["irreducible", "nonsymmetric"]


def test_ricci_flat_implies_einstein():
    with pytest.raises(ValueError):
        EvidenceFlags(4, True, True, True, einstein=False, ricci_flat=True)


@pytest.mark.parametrize("n", range(2, 17))
def test_general_filter_rules(n):
    for f in _all_flags(n):
        got = _groups(f)
        assert f"SO({n})" in got
        if n % 2 and n != 7:
            assert got == {f"SO({n})"}
        if n == 7:
            assert got <= {"SO(7)", "G2"}
        if f.einstein is False and n % 2 == 0:
            assert got <= {f"SO({n})", f"U({n // 2})"}


@pytest.mark.parametrize("n", range(2, 17))
def test_exponential_family_filter_rules(n):
    m = n // 4
    for f in _all_flags(n):
        if not f.exponential_family:
            continue
        got = _groups(f)
        assert not any(g.startswith(("U(", "SU(")) or (g.startswith("Sp(") and "·" not in g)
                       for g in got)
        if n not in (7, 8):
            assert got <= {f"SO({n})", f"Sp({m})·Sp(1)"}
        if n % 2 and n != 7:
            assert got == {f"SO({n})"}
        if n % 4 == 2:
            assert got == {f"SO({n})"}
        if n == 8:
            assert got <= {"SO(8)", "Sp(2)·Sp(1)", "Spin(7)"}
        if n % 4 == 0 and m != 2:
            assert got <= {f"SO({n})", f"Sp({m})·Sp(1)"}
        if f.einstein is False:
            assert got == {f"SO({n})"}


# -- curvature algebra -----------------------------------------------------

@pytest.mark.parametrize("name, dim", [("flat-toy", 0), ("normal-1", 1), ("normal-2", 10)])
def test_algebra_dimension(models, name, dim):
    m = models[name]
    for theta in m.sample_points(3, 11):
        assert curvature_algebra_dimension(m, theta) == dim


def test_algebra_dimension_normal3(models):
    m = models["normal-3"]
    alg = curvature_algebra(curvature_bundle(m, m.sample_points(1, 12)[0]))
    assert alg.dimension == 36 == alg.so_dimension
    assert alg.rounds <= 3


def test_operators_are_g_antisymmetric(models):
    m = models["normal-2"]
    b = curvature_bundle(m, m.sample_points(1, 13)[0])
    for A in curvature_operators(b):
        assert np.abs(b.g @ A + A.T @ b.g).max() < 1e-10


def test_monotone_in_points(models):
    m = models["normal-2"]
    pts = m.sample_points(4, 14)
    dims = [curvature_algebra_dimension(m, pts[:k]) for k in range(1, 5)]
    assert dims == sorted(dims)


# -- transport -------------------------------------------------------------

def test_flat_transport_is_identity(models):
    loop = [[0, 0], [1, 0.3], [0.2, 1.5], [-0.4, 0.1]]
    r = parallel_transport_loop(models["flat-toy"], loop, 200)
    np.testing.assert_allclose(r.matrix, np.eye(2), atol=1e-12)
    assert r.orthogonality_residual < 1e-12


def test_step_minimum(models):
    with pytest.raises(ValueError):
        parallel_transport_loop(models["flat-toy"], [[0, 0], [1, 0], [1, 1]], 50)


def test_domain_exit(models):
    m = models["normal-1"]
    with pytest.raises(DomainError):
        parallel_transport_loop(m, [[0, -0.5], [0, 0.5], [1, -0.5]], 200)


def test_step_too_coarse(models):
    m = models["normal-2"]
    theta = m.sample_points(1, 15)[0]
    with pytest.raises(StepTooCoarse):
        parallel_transport_loop(m, rectangle_loop(theta, 0, 2, 0.2), 100, tol=1e-16)


def test_orthogonal_with_positive_determinant(models):
    m = models["normal-2"]
    theta = m.sample_points(1, 16)[0]
    r = parallel_transport_loop(m, rectangle_loop(theta, 1, 3, 0.1), 2000)
    assert r.orthogonality_residual < 1e-6
    assert r.determinant > 0
    assert r.log_map is not None


def test_inversion_and_conjugation(models):
    m = models["normal-2"]
    theta = m.sample_points(1, 17)[0]
    loop = rectangle_loop(theta, 0, 4, 0.1)
    P = transport_path(m, loop, 2000)
    Q = transport_path(m, loop[::-1], 2000)
    np.testing.assert_allclose(Q @ P, np.eye(5), atol=1e-9)
    y = theta + 0.05 * np.array([1, -1, 0.2, 0.1, -0.3])
    rho = transport_path(m, [theta, y], 1000)
    conj = transport_path(m, np.vstack([[y], loop, [y]]), 4000)
    np.testing.assert_allclose(conj, rho @ P @ np.linalg.inv(rho), atol=1e-8)


def test_univariate_rotation_angle(models):
    m = models["normal-1"]
    theta = m.sample_points(1, 18)[0]
    eps = 0.01
    r = parallel_transport_loop(m, rectangle_loop(theta, 0, 1, eps), 1000)
    b = curvature_bundle(m, theta)
    L = np.linalg.cholesky(b.g)
    rot = L.T @ r.matrix @ np.linalg.inv(L.T)
    angle = np.arctan2(rot[1, 0], rot[0, 0])
    expected = -0.5 * eps**2 * np.sqrt(np.linalg.det(b.g))
    assert abs(abs(angle) - abs(expected)) < 20 * eps**3 * np.sqrt(np.linalg.det(b.g))


def test_loop_consistency_cubic(models):
    m = models["normal-1"]
    theta = np.array([0.0, -0.5])  # mu = 0, sigma = 1
    res = [loop_curvature_consistency(m, theta, 0, 1, eps) for eps in (0.1, 0.05, 0.025)]
    assert 6 < res[0] / res[1] < 10 and 6 < res[1] / res[2] < 10
    assert loop_curvature_consistency(models["flat-toy"], [0.1, 0.2], 0, 1, 0.5) < 1e-12


def test_loop_consistency_bivariate_reference(models):
    theta = np.array([0.0, 0.0, -0.5, 0.0, -0.5])  # mu = 0, Sigma = I
    assert loop_curvature_consistency(models["normal-2"], theta, 0, 1, 0.05) < 1e-4


def test_log_undefined(models):
    # half-turn holonomy has no real principal logarithm
    from infoholonomy.holonomy import _principal_log
    assert _principal_log(-np.eye(2)) is None
    assert LogUndefined.__mro__[1].__name__ == "InfoHolonomyError"


# -- classification --------------------------------------------------------

@pytest.mark.parametrize("name, group", [("normal-1", "SO(2)"), ("normal-2", "SO(5)")])
def test_classify(models, name, group):
    v = classify(models[name], point_budget=8)
    assert v.verdict == group
    assert group in [c.group for c in v.candidates]
    assert any("simply_connected" in a for a in v.assumptions)
    assert any("admits_kaehler" in a for a in v.assumptions)


def test_classify_flat(models):
    v = classify(models["flat-toy"], point_budget=8)
    assert v.verdict == NOT_CLASSIFIED
    assert v.flags.irreducible is False
    assert v.candidates == []


def test_verdict_dict(models):
    d = classify(models["normal-1"], point_budget=6).to_dict()
    assert d["so_dim"] == 1 and d["candidates"] == ["SO(2)"]


def test_symmetric_space_table():
    assert len(SYMMETRIC_SPACES) == 19
    assert SYMMETRIC_SPACES[3][0] == "BDI"
