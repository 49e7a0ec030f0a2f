"""Backend selection and the chunk-level simulation API.

Two interchangeable engines compute path chunks:

* ``bismut._kernel``  -- compiled (Cython) kernel for the hot per-step loop;
* ``bismut._fallback`` -- vectorized numpy implementation.

The compiled kernel is preferred when importable; set ``BISMUT_FORCE_FALLBACK=1``
to force the numpy engine.  Both consume the same random stream and agree to
floating-point noise; per backend, results are bitwise reproducible and
independent of chunking, scheduling and thread count.

Random stream contract
----------------------
The j-th standard normal of path ``i`` under master seed ``s`` is obtained by
running Philox4x32-10 with key = s (as two 32-bit words) on the counter
(j >> 1 as two words, i as two words), taking the (j & 1)-th 64-bit half of
the 128-bit output, mapping it to the open unit interval via
u = ((word >> 11) + 0.5) * 2**-53, and applying the inverse normal CDF.
Every value is therefore a pure function of (seed, path_index, j): streams
are counter-based and schedule-independent.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import _fallback
from .geometry import h3_tensor_array

try:
    from . import _kernel
except ImportError:  # pragma: no cover - no compiler at install time
    _kernel = None

BACKEND = "numpy" if (_kernel is None or os.environ.get("BISMUT_FORCE_FALLBACK")) else "cython"

#: execution chunk size; also the fixed granularity of estimator reductions
CHUNK = 2048

KIND_CODES = {"euclidean": 0, "sphere": 1, "hyperbolic": 2}


@dataclass
class ChunkResult:
    endpoint: np.ndarray            # (B, e)
    q_scalar: np.ndarray            # (B,)  damped transport is q * I for all models
    grad_integrals: np.ndarray      # (B, d)
    nested_integrals: np.ndarray    # (B, d, d)
    wk_outer_integrals: np.ndarray  # (B, d, d)
    grad_qv: np.ndarray             # (B, d)
    q_bound_violation: np.ndarray   # (B,)
    valid: np.ndarray               # (B,) bool
    q_checkpoints: np.ndarray | None = None    # (B, n_chk)
    checkpoint_steps: np.ndarray | None = None  # (n_chk,) step indices

    @property
    def q_matrix(self) -> np.ndarray:
        d = self.grad_integrals.shape[1]
        return self.q_scalar[:, None, None] * np.eye(d)[None, :, :]


def gaussian_increments(seed: int, path_index: int, n_values: int) -> np.ndarray:
    """The canonical standard-normal stream of one path (see module docstring)."""
    return _fallback.gaussian_block(seed, path_index, 1, n_values)[0]


#: block access to the canonical stream (consecutive paths)
gaussian_block = _fallback.gaussian_block


def available_backends():
    return ("cython", "numpy") if _kernel is not None else ("numpy",)


def checkpoint_steps(n_steps: int, stride: int) -> np.ndarray:
    """Step indices at which the damped-transport scalar is recorded."""
    steps = list(range(0, n_steps + 1, stride))
    if steps[-1] != n_steps:
        steps.append(n_steps)
    return np.asarray(steps, dtype=np.int64)


def simulate_chunk(model, x0, T, n_steps, seed, first_path, count, k, *,
                   increments=None, v_basis=None, w_basis=None,
                   q_checkpoint_stride=0, backend=None) -> ChunkResult:
    """Simulate paths first_path .. first_path+count-1 and collect accumulators.

    ``increments``: optional (count, n_steps, d) array of standard normals used
    instead of the canonical stream (convergence ladders inject coupled
    refinements this way).  ``v_basis``/``w_basis`` rescale the two bilinear
    weight slots; they force the numpy engine.
    """
    backend = backend or BACKEND
    if backend not in available_backends():
        raise ValueError(f"backend {backend!r} is not available")
    if v_basis is not None or w_basis is not None:
        backend = "numpy"
    x0 = model.check_point(np.asarray(x0, dtype=float))
    d = model.dimension
    if increments is not None:
        increments = np.ascontiguousarray(increments, dtype=np.float64)
        if increments.shape != (count, n_steps, d):
            raise ValueError("increments must have shape (count, n_steps, d)")
    chk = checkpoint_steps(n_steps, q_checkpoint_stride) if q_checkpoint_stride else None

    if backend == "cython":
        T3 = h3_tensor_array(model) if model.h3_scale != 0.0 else np.zeros((0, 0, 0))
        raw = _kernel.simulate_chunk_kernel(
            KIND_CODES[model.kind], model.curvature,
            model.radius if model.kind != "euclidean" else 0.0,
            model.drift_coefficient,
            float(np.exp(-model.ricci_rate * (T / n_steps) / 2.0)),
            -model.ricci_rate, T / n_steps, n_steps, d, model.embedding_dim,
            *k.tables(n_steps),
            T3,
            np.ascontiguousarray(x0), np.ascontiguousarray(model.frame_at(x0)),
            np.uint64(seed), np.uint64(first_path), int(count),
            increments if increments is not None else np.zeros((0, 0, 0)),
            chk if chk is not None else np.zeros(0, dtype=np.int64),
        )
    else:
        raw = _fallback.simulate_chunk_numpy(
            model, x0, T, n_steps, seed, first_path, count, k,
            increments, chk, v_basis, w_basis,
        )
    endpoint, q, A, C, D, qv, qmax, valid, qchk = raw
    return ChunkResult(
        endpoint=endpoint, q_scalar=q, grad_integrals=A, nested_integrals=C,
        wk_outer_integrals=D, grad_qv=qv, q_bound_violation=qmax,
        valid=valid.astype(bool), q_checkpoints=qchk, checkpoint_steps=chk,
    )
