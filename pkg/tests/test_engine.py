import numpy as np
import pytest

from bismut import _fallback, engine
from bismut.geometry import ManifoldModel
from bismut.pathsim import TestFunctionK

kernel = pytest.importorskip("bismut._kernel")

ALL_MODELS = [
    (ManifoldModel("euclidean", 1), 1.0),
    (ManifoldModel("euclidean", 3), 1.0),
    (ManifoldModel("euclidean", 2, drift_coefficient=1.0), 1.0),
    (ManifoldModel("sphere", 2, curvature=1.0), 1.0),
    (ManifoldModel("sphere", 3, curvature=2.0), 0.5),
    (ManifoldModel("hyperbolic", 2, curvature=-1.0), 1.0),
    (ManifoldModel("hyperbolic", 3, curvature=-1.0), 0.5),
    (ManifoldModel("sphere", 2, curvature=1.0).with_synthetic_h3(0.7), 1.0),
]


def test_philox_reference_vectors():
    """Known-answer tests for Philox4x32-10 (counter, key) -> output."""
    def one(c, k):
        arrs = [np.array([v], dtype=np.uint32) for v in c]
        out = _fallback.philox4x32_10(*arrs, np.uint32(k[0]), np.uint32(k[1]))
        return [int(v[0]) for v in out]

    assert one((0, 0, 0, 0), (0, 0)) == [0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8]
    ff = 0xFFFFFFFF
    assert one((ff, ff, ff, ff), (ff, ff)) == [0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD]
    assert one((0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344),
               (0xA4093822, 0x299F31D0)) == [0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1]


def test_gaussian_stream_backends_bitwise_equal():
    a = kernel.gaussian_block_kernel(987654321, 12, 9, 513)
    b = _fallback.gaussian_block(987654321, 12, 9, 513)
    np.testing.assert_array_equal(a, b)


def test_gaussian_increments_single_path_row():
    blk = _fallback.gaussian_block(42, 100, 8, 64)
    one = engine.gaussian_increments(42, 103, 64)
    np.testing.assert_array_equal(one, blk[3])


def test_gaussian_stream_moments():
    x = _fallback.gaussian_block(7, 0, 200, 5000).ravel()
    n = x.size
    assert abs(x.mean()) < 4.0 / np.sqrt(n)
    assert abs(x.std() - 1.0) < 4.0 / np.sqrt(2 * n)
    # excess kurtosis of a standard normal is 0, sampling std is sqrt(24/n)
    kurt = np.mean(x**4) - 3.0
    assert abs(kurt) < 4.0 * np.sqrt(24.0 / n)


def test_stream_depends_on_seed_and_path():
    a = engine.gaussian_increments(1, 0, 16)
    b = engine.gaussian_increments(2, 0, 16)
    c = engine.gaussian_increments(1, 1, 16)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("model,T", ALL_MODELS,
                         ids=lambda m: getattr(m, "kind", None) and f"{m.kind}{m.dimension}h3{m.h3_scale:g}")
def test_backend_agreement(model, T):
    if not isinstance(model, ManifoldModel):
        pytest.skip()
    k = TestFunctionK(T, -model.ricci_rate)
    x0 = model.base_point()
    r1 = engine.simulate_chunk(model, x0, T, 120, 3, 11, 400, k, backend="cython",
                               q_checkpoint_stride=30)
    r2 = engine.simulate_chunk(model, x0, T, 120, 3, 11, 400, k, backend="numpy",
                               q_checkpoint_stride=30)
    for fld in ("endpoint", "q_scalar", "grad_integrals", "nested_integrals",
                "wk_outer_integrals", "grad_qv", "q_bound_violation", "q_checkpoints"):
        a, b = getattr(r1, fld), getattr(r2, fld)
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12, err_msg=fld)
    assert np.array_equal(r1.valid, r2.valid)


def test_injected_increments_match_generated():
    model = ManifoldModel("sphere", 2, curvature=1.0)
    k = TestFunctionK(1.0, -1.0)
    x0 = model.base_point()
    xi = _fallback.gaussian_block(5, 20, 6, 90 * 2).reshape(6, 90, 2)
    gen = engine.simulate_chunk(model, x0, 1.0, 90, 5, 20, 6, k)
    inj = engine.simulate_chunk(model, x0, 1.0, 90, 5, 20, 6, k, increments=xi)
    np.testing.assert_array_equal(gen.endpoint, inj.endpoint)
    np.testing.assert_array_equal(gen.wk_outer_integrals, inj.wk_outer_integrals)


def test_invalid_increments_rejected():
    model = ManifoldModel("euclidean", 1)
    k = TestFunctionK(1.0, 0.0)
    xi = np.zeros((3, 10, 1))
    xi[1, 4, 0] = np.nan
    res = engine.simulate_chunk(model, np.zeros(1), 1.0, 10, 0, 0, 3, k, increments=xi)
    assert list(res.valid) == [True, False, True]


def test_bad_backend_and_shapes():
    model = ManifoldModel("euclidean", 1)
    k = TestFunctionK(1.0, 0.0)
    with pytest.raises(ValueError):
        engine.simulate_chunk(model, np.zeros(1), 1.0, 10, 0, 0, 2, k, backend="fortran")
    with pytest.raises(ValueError):
        engine.simulate_chunk(model, np.zeros(1), 1.0, 10, 0, 0, 2, k,
                              increments=np.zeros((2, 9, 1)))


def test_kernel_dimension_cap():
    with pytest.raises(ValueError):
        model = ManifoldModel("euclidean", 9)
        k = TestFunctionK(1.0, 0.0)
        engine.simulate_chunk(model, np.zeros(9), 1.0, 10, 0, 0, 2, k, backend="cython")
