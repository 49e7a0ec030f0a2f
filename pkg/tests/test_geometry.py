import numpy as np
import pytest

from bismut.geometry import (
    CurvatureConstants,
    ManifoldModel,
    brute_force_constants,
    geodesic_step,
    h3_tensor,
    ricci_z_matrix,
    rm_apply,
)

SPHERE2 = ManifoldModel("sphere", 2, curvature=1.0)
HYP3 = ManifoldModel("hyperbolic", 3, curvature=-1.0)
EUC2_OU = ManifoldModel("euclidean", 2, drift_coefficient=0.5)
MODELS = [ManifoldModel("euclidean", 3), EUC2_OU, SPHERE2, HYP3,
          ManifoldModel("sphere", 3, curvature=4.0),
          ManifoldModel("hyperbolic", 2, curvature=-2.0)]


def test_model_validation():
    with pytest.raises(ValueError):
        ManifoldModel("sphere", 2, curvature=-1.0)
    with pytest.raises(ValueError):
        ManifoldModel("hyperbolic", 2, curvature=1.0)
    with pytest.raises(ValueError):
        ManifoldModel("euclidean", 2, curvature=1.0)
    with pytest.raises(ValueError):
        ManifoldModel("sphere", 1, curvature=1.0)
    with pytest.raises(ValueError):
        ManifoldModel("sphere", 2, curvature=1.0, drift_coefficient=0.3)
    with pytest.raises(ValueError):
        ManifoldModel("torus", 2)


def test_rm_apply_examples():
    e1, e2 = np.eye(2)
    assert np.array_equal(rm_apply(ManifoldModel("euclidean", 2), e1, e2, e2), np.zeros(2))
    # constant-curvature formula: Rm(X, Y)W = kappa (<Y,W> X - <X,W> Y)
    np.testing.assert_allclose(rm_apply(SPHERE2, e1, e2, e2), e1, atol=0)
    # antisymmetry is exact
    a, b, c = np.array([0.3, -1.2]), np.array([2.0, 0.7]), np.array([-0.5, 0.1])
    np.testing.assert_array_equal(rm_apply(SPHERE2, a, b, c), -rm_apply(SPHERE2, b, a, c))
    assert np.array_equal(rm_apply(SPHERE2, a, a, c), np.zeros(2))
    with pytest.raises(ValueError):
        rm_apply(SPHERE2, np.zeros(3), a, c)


def test_rm_holonomy_small_square():
    """Finite-difference holonomy cross-check of the curvature operator.

    Transporting a frame around a geodesic square of side h on the sphere
    rotates it by about kappa h^2.
    """
    model = SPHERE2
    h = 1e-2
    p = model.base_point()
    F = model.frame_at(p)
    steps = [np.array([h, 0.0]), np.array([0.0, h]),
             np.array([-h, 0.0]), np.array([0.0, -h])]
    q, G = p, F
    for dv in steps:
        q, G = geodesic_step(model, q, G, dv)
    R = F.T @ G  # approximate in-plane rotation matrix
    angle = np.arctan2(R[1, 0] - R[0, 1], R[0, 0] + R[1, 1])
    assert abs(abs(angle) - model.curvature * h * h) < 0.1 * model.curvature * h * h


def test_first_bianchi_identity():
    rng = np.random.default_rng(0)
    for model in (SPHERE2, HYP3):
        d = model.dimension
        for _ in range(25):
            a, b, c = rng.standard_normal((3, d))
            s = rm_apply(model, a, b, c) + rm_apply(model, b, c, a) + rm_apply(model, c, a, b)
            assert np.max(np.abs(s)) < 5e-15 * max(1.0, np.max(np.abs([a, b, c])) ** 3)


def test_ricci_matrix_closed_forms():
    assert np.array_equal(ricci_z_matrix(ManifoldModel("euclidean", 3)), np.zeros((3, 3)))
    np.testing.assert_allclose(ricci_z_matrix(SPHERE2), np.eye(2), atol=0)
    np.testing.assert_allclose(ricci_z_matrix(EUC2_OU), 0.5 * np.eye(2), atol=0)


def test_ricci_matrix_vs_curvature_trace():
    """Ric(X, Y) = sum_i <Rm(e_i, X)Y, e_i> must reproduce the matrix."""
    for model in (SPHERE2, HYP3, ManifoldModel("sphere", 4, curvature=2.0)):
        d = model.dimension
        basis = np.eye(d)
        ric = np.zeros((d, d))
        for i in range(d):
            for j in range(d):
                ric[i, j] = sum(rm_apply(model, basis[k], basis[i], basis[j])[k]
                                for k in range(d))
        np.testing.assert_allclose(ric, ricci_z_matrix(model), atol=1e-14)


def test_ricci_ou_vs_drift_jacobian():
    """-grad(Z)^flat from finite differences of Z(x) = -c x."""
    model = EUC2_OU
    c = model.drift_coefficient
    eps = 1e-6
    x0 = np.array([0.3, -0.8])
    jac = np.zeros((2, 2))
    for j in range(2):
        dx = np.zeros(2)
        dx[j] = eps
        zp = -c * (x0 + dx)
        zm = -c * (x0 - dx)
        jac[:, j] = (zp - zm) / (2 * eps)
    np.testing.assert_allclose(-jac, ricci_z_matrix(model), atol=1e-9)


def test_h3_tensor():
    e1 = np.eye(2)[0]
    assert np.array_equal(h3_tensor(SPHERE2, e1, e1), np.zeros(2))
    assert np.array_equal(h3_tensor(EUC2_OU, e1, e1), np.zeros(2))
    model = SPHERE2.with_synthetic_h3(0.8)
    np.testing.assert_array_equal(h3_tensor(model, e1, e1), 0.8 * e1)
    a = np.array([0.6, 0.8])
    b = np.array([-0.8, 0.6])
    np.testing.assert_allclose(h3_tensor(model, a, b), 0.8 * (a @ b) * e1, atol=1e-15)


def test_geodesic_step_euclidean():
    model = ManifoldModel("euclidean", 2)
    p, F = np.zeros(2), np.eye(2)
    q, G = geodesic_step(model, p, F, np.array([1.0, 0.0]))
    np.testing.assert_array_equal(q, [1.0, 0.0])
    np.testing.assert_array_equal(G, np.eye(2))


def test_geodesic_step_sphere_antipode():
    p = np.array([0.0, 0.0, 1.0])
    F = SPHERE2.frame_at(p)
    q, G = geodesic_step(SPHERE2, p, F, np.array([np.pi, 0.0]))
    np.testing.assert_allclose(q, [0.0, 0.0, -1.0], atol=1e-12)
    # transported first column reverses, the orthogonal one is preserved
    np.testing.assert_allclose(G[:, 0], -F[:, 0], atol=1e-12)
    np.testing.assert_allclose(G[:, 1], F[:, 1], atol=1e-12)


def test_geodesic_zero_step():
    p = SPHERE2.base_point()
    F = SPHERE2.frame_at(p)
    q, G = geodesic_step(SPHERE2, p, F, np.zeros(2))
    assert q is p and G is F


@pytest.mark.parametrize("model", MODELS, ids=lambda m: f"{m.kind}{m.dimension}")
def test_geodesic_semigroup_property(model):
    rng = np.random.default_rng(3)
    p = model.base_point()
    F = model.frame_at(p)
    for _ in range(10):
        dv = rng.standard_normal(model.dimension) * 0.4
        q1, G1 = geodesic_step(model, p, F, dv)
        qh, Gh = geodesic_step(model, p, F, dv / 2)
        q2, G2 = geodesic_step(model, qh, Gh, dv / 2)
        np.testing.assert_allclose(q1, q2, atol=1e-12)
        np.testing.assert_allclose(G1, G2, atol=1e-12)
        p, F = q1, G1


@pytest.mark.parametrize("model", MODELS, ids=lambda m: f"{m.kind}{m.dimension}")
def test_geodesic_metric_compatibility(model):
    # desk-scale walk: the stated tolerances are absolute at unit curvature
    # scale, and the Minkowski form loses eps |x|^2 far out on the hyperboloid
    rng = np.random.default_rng(7)
    p = model.base_point()
    F = model.frame_at(p)
    for _ in range(30):
        dv = rng.standard_normal(model.dimension) * 0.25
        p, F = geodesic_step(model, p, F, dv)
        model.check_point(p)
        gram = np.array([[model.metric_dot(F[:, i], F[:, j])
                          for j in range(model.dimension)]
                         for i in range(model.dimension)])
        assert np.max(np.abs(gram - np.eye(model.dimension))) < 1e-10


def test_brute_force_constants_match_closed_forms():
    cases = [
        (ManifoldModel("euclidean", 3), CurvatureConstants(0.0, 0.0, 0.0)),
        (SPHERE2, CurvatureConstants(-1.0, 1.0, 0.0)),
        (HYP3, CurvatureConstants(2.0, np.sqrt(2.0), 0.0)),
        (EUC2_OU, CurvatureConstants(-0.5, 0.0, 0.0)),
        (SPHERE2.with_synthetic_h3(0.7), CurvatureConstants(-1.0, 1.0, 0.7)),
    ]
    for model, expect in cases:
        got = brute_force_constants(model, 1000, seed=4)
        exact = model.curvature_constants()
        for name in ("K", "K1", "K2"):
            assert abs(getattr(got, name) - getattr(expect, name)) < 1e-8, (model, name)
            assert abs(getattr(exact, name) - getattr(expect, name)) < 1e-12, (model, name)


def test_brute_force_needs_samples():
    with pytest.raises(ValueError):
        brute_force_constants(SPHERE2, 10)


def test_point_and_frame_checks():
    with pytest.raises(ValueError):
        SPHERE2.check_point(np.array([0.0, 0.0, 1.5]))
    with pytest.raises(ValueError):
        HYP3.check_point(np.array([0.0, 0.0, 0.0, -1.0]))  # wrong sheet
    p = SPHERE2.base_point()
    bad = np.array([[1.0, 0.2], [0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        SPHERE2.check_frame(p, bad)
    SPHERE2.check_frame(p, SPHERE2.frame_at(p))


@pytest.mark.parametrize("model", MODELS, ids=lambda m: f"{m.kind}{m.dimension}")
def test_frame_at_random_points(model):
    rng = np.random.default_rng(11)
    p = model.base_point()
    F = model.frame_at(p)
    for _ in range(5):
        p, F = geodesic_step(model, p, F, 0.5 * rng.standard_normal(model.dimension))
        model.check_frame(p, model.frame_at(p))
