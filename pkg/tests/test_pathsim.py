import math

import numpy as np
import pytest
from scipy.integrate import quad

from bismut import engine
from bismut.geometry import ManifoldModel
from bismut.pathsim import (
    PathConfig,
    TestFunctionK,
    default_n_steps,
    integrals_h_g,
    simulate_path,
)

SPHERE2 = ManifoldModel("sphere", 2, curvature=1.0)


def test_k_endpoint_values_exact():
    for K, T in [(0.0, 1.0), (1.0, 1.0), (-2.5, 0.7), (1e-9, 3.0), (4.0, 2.0)]:
        k = TestFunctionK(T, K)
        assert float(k.value(0.0)) == 1.0
        assert float(k.value(T)) == 0.0


def test_k_nonincreasing_and_derivative():
    for K in (-2.0, 0.0, 1.5):
        k = TestFunctionK(2.0, K)
        s = np.linspace(0, 2.0, 200)
        v = k.value(s)
        assert np.all(np.diff(v) <= 1e-15)
        eps = 1e-6
        mid = s[1:-1]
        fd = (k.value(mid + eps) - k.value(mid - eps)) / (2 * eps)
        np.testing.assert_allclose(k.derivative(mid), fd, rtol=1e-6, atol=1e-8)


def test_k_normalizer_is_integral():
    for K, T in [(0.7, 1.3), (-1.2, 0.5), (0.0, 2.0)]:
        k = TestFunctionK(T, K)
        ref, _ = quad(lambda r: math.exp(-K * r), 0, T)
        assert abs(k.normalizer - ref) < 1e-12


def test_integrals_h_g_zero_rate():
    H, G = integrals_h_g(0.0, 3.0)
    assert abs(H - 1.0 / 3.0) < 1e-15
    assert abs(G - 1.0) < 1e-15


def test_integrals_h_g_frozen_values():
    # independent quadrature oracle, frozen: H = 1/(1-e^-1), G = (e^2-1-2e)/(e-1)^2
    H, G = integrals_h_g(1.0, 1.0)
    assert abs(H - 1.5819767068693264) < 1e-14
    assert abs(G - 0.32260622532306821) < 1e-14


def test_integrals_h_g_match_quadrature():
    for K in (-3.0, -0.4, 0.3, 2.0):
        for T in (0.25, 1.0, 4.0):
            k = TestFunctionK(T, K)
            Hq, _ = quad(lambda s: math.exp(K * s) * float(k.derivative(s)) ** 2, 0, T, limit=200)
            Gq, _ = quad(lambda s: math.exp(K * s) * float(k.value(s)) ** 2, 0, T, limit=200)
            H, G = integrals_h_g(K, T)
            assert abs(H - Hq) < 1e-9 * abs(Hq)
            assert abs(G - Gq) < 1e-9 * abs(Gq)


def test_integrals_h_g_series_branch_consistent():
    # compare the series branch against the closed form just above the switch
    import mpmath as mp
    mp.mp.dps = 40
    T = 1.7
    for scale in (0.5, 0.99, 1.01, 10.0):   # |K|T around 1e-6 and at 1e-5
        for sign in (1.0, -1.0):
            K = sign * scale * 1e-6 / T
            H, G = integrals_h_g(K, T)
            x = mp.mpf(K) * T
            H_ref = float(-mp.mpf(K) / mp.expm1(-x))
            G_ref = float(mp.e**x * 2 * (mp.sinh(x) - x) / (mp.mpf(K) * mp.expm1(x) ** 2))
            assert abs(H - H_ref) < 1e-9 * abs(H_ref)
            assert abs(G - G_ref) < 1e-9 * abs(G_ref)


def test_g_below_third_of_horizon():
    rng = np.random.default_rng(1)
    for K in np.concatenate([rng.uniform(-5, 5, 60), [0.0]]):
        for T in rng.uniform(1e-3, 10.0, 30):
            _, G = integrals_h_g(float(K), float(T))
            assert G <= T / 3.0 + 1e-12


def test_integrals_h_g_domain():
    with pytest.raises(ValueError):
        integrals_h_g(1.0, 0.0)
    with pytest.raises(ValueError):
        integrals_h_g(1.0, -1.0)


def test_default_n_steps():
    assert default_n_steps(0.5) == 100
    assert default_n_steps(1.0) == 100
    assert default_n_steps(2.0) == 200
    assert default_n_steps(3.21) == 321


def test_path_config_validation():
    with pytest.raises(ValueError):
        PathConfig(horizon=0.0, n_steps=10, seed=1)
    with pytest.raises(ValueError):
        PathConfig(horizon=1.0, n_steps=0, seed=1)


def test_flat_path_trivial_accumulators():
    model = ManifoldModel("euclidean", 1)
    k = TestFunctionK(1.0, 0.0)
    rec = simulate_path(model, [0.5], PathConfig(1.0, 150, seed=9, path_index=4), k)
    assert np.array_equal(rec.q_matrix, np.eye(1))
    assert np.array_equal(rec.wk_outer_integrals, np.zeros((1, 1)))
    assert rec.valid
    # A = -(displacement)/T for the linear weight on the flat line
    disp = rec.endpoint[0] - 0.5
    assert abs(rec.grad_integrals[0] + disp / 1.0) < 1e-12
    assert abs(rec.q_bound_violation - 1.0) < 1e-12


def test_damped_transport_closed_form():
    cases = [
        (SPHERE2, 1.0, math.exp(-0.5)),
        (ManifoldModel("hyperbolic", 3, curvature=-1.0), 0.75, math.exp(0.75)),
        (ManifoldModel("euclidean", 2, drift_coefficient=1.3), 1.0, math.exp(-0.65)),
    ]
    for model, T, q_exact in cases:
        k = TestFunctionK(T, -model.ricci_rate)
        rec = simulate_path(model, model.base_point(), PathConfig(T, 200, seed=3), k)
        assert np.max(np.abs(rec.q_matrix - q_exact * np.eye(model.dimension))) < 1e-10
        assert rec.q_bound_violation <= 1.0 + 5.0 * (T / 200)


def test_grad_integrals_centered():
    k = TestFunctionK(1.0, -1.0)
    res = engine.simulate_chunk(SPHERE2, SPHERE2.base_point(), 1.0, 100, 17, 0, 6000, k)
    mean = res.grad_integrals.mean(axis=0)
    se = res.grad_integrals.std(axis=0) / np.sqrt(6000)
    assert np.all(np.abs(mean) <= 3 * se)


def test_transport_ratio_bound_on_checkpoints():
    """Pairwise contraction bound q_t / q_s <= e^{K (t-s)/2} (1 + 5h)."""
    for model, T in [(SPHERE2, 1.0),
                     (ManifoldModel("hyperbolic", 2, curvature=-1.0), 1.0),
                     (ManifoldModel("euclidean", 1, drift_coefficient=2.0), 0.5)]:
        n = 100
        h = T / n
        K = -model.ricci_rate
        k = TestFunctionK(T, K)
        res = engine.simulate_chunk(model, model.base_point(), T, n, 5, 0, 200, k,
                                    q_checkpoint_stride=10)
        steps = res.checkpoint_steps
        q = res.q_checkpoints
        for a in range(len(steps)):
            for b in range(a + 1, len(steps)):
                dt = (steps[b] - steps[a]) * h
                ratio = q[:, b] / q[:, a]
                assert np.all(ratio <= math.exp(K * dt / 2.0) * (1.0 + 5.0 * h) + 1e-12)


def test_wk_bilinearity_exact_doubling():
    model = SPHERE2.with_synthetic_h3(0.5)
    k = TestFunctionK(1.0, -1.0)
    cfg = PathConfig(1.0, 80, seed=21, path_index=2)
    x0 = model.base_point()
    base = simulate_path(model, x0, cfg, k)
    doubled_v = simulate_path(model, x0, cfg, k, v_basis=2.0 * np.eye(2))
    doubled_w = simulate_path(model, x0, cfg, k, w_basis=2.0 * np.eye(2))
    np.testing.assert_array_equal(doubled_v.wk_outer_integrals, 2.0 * base.wk_outer_integrals)
    np.testing.assert_array_equal(doubled_w.wk_outer_integrals, 2.0 * base.wk_outer_integrals)
    # gradient integrals scale with the first slot only
    np.testing.assert_array_equal(doubled_v.grad_integrals, 2.0 * base.grad_integrals)
    np.testing.assert_array_equal(doubled_w.grad_integrals, base.grad_integrals)


def test_path_determinism_across_grouping():
    model = SPHERE2
    k = TestFunctionK(1.0, -1.0)
    whole = engine.simulate_chunk(model, model.base_point(), 1.0, 60, 33, 0, 7, k)
    first = engine.simulate_chunk(model, model.base_point(), 1.0, 60, 33, 0, 3, k)
    rest = engine.simulate_chunk(model, model.base_point(), 1.0, 60, 33, 3, 4, k)
    np.testing.assert_array_equal(whole.endpoint, np.vstack([first.endpoint, rest.endpoint]))
    np.testing.assert_array_equal(whole.nested_integrals,
                                  np.vstack([first.nested_integrals, rest.nested_integrals]))
    # single-path API reproduces the chunk rows bitwise
    rec = simulate_path(model, model.base_point(), PathConfig(1.0, 60, seed=33, path_index=5), k)
    np.testing.assert_array_equal(rec.endpoint, whole.endpoint[5])
    np.testing.assert_array_equal(rec.wk_outer_integrals, whole.wk_outer_integrals[5])
