"""Batched Monte Carlo estimators for P_T f, grad P_T f and Hess P_T f.

Each estimator maps path chunks to per-path weight values, accumulates
(sum, sum of squares, counts) per fixed-size chunk, and combines the chunk
partials by a pairwise tree in chunk order.  The chunk grid and reduction
order are independent of the worker count, so results are identical for any
number of threads.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .pathsim import TestFunctionK, default_n_steps

#: estimates whose rejected-path fraction reaches this are flagged invalid
MAX_REJECT_FRACTION = 1e-3


class EstimatorFailure(RuntimeError):
    """No usable paths (or another unrecoverable estimator condition)."""


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    n_paths: int
    rejected_paths: int

    @property
    def valid(self) -> bool:
        return self.rejected_paths < MAX_REJECT_FRACTION * self.n_paths


@dataclass(frozen=True)
class FieldEstimate:
    """Componentwise Monte Carlo estimate of a vector or matrix quantity."""

    mean: np.ndarray
    std_error: np.ndarray
    n_paths: int
    rejected_paths: int

    def __getitem__(self, idx) -> MCEstimate:
        return MCEstimate(float(self.mean[idx]), float(self.std_error[idx]),
                          self.n_paths, self.rejected_paths)

    @property
    def valid(self) -> bool:
        return self.rejected_paths < MAX_REJECT_FRACTION * self.n_paths


@dataclass(frozen=True)
class ScalarFunctional:
    """Test integrand f with a closed-form supremum.

    ``gaussian_bump``  A exp(-|x - c|^2 / (2 w^2)) with the ambient distance
                       (chordal on embedded models); positive, sup = A.
    ``sphere_linear``  <a, x> on an embedded model; sign-changing, sup = |a| r.
    ``sphere_affine``  c + s <a, x>; positive when c > s |a| r.
    ``constant``       c.
    """

    kind: str
    center: np.ndarray | None = None
    width: float = 1.0
    amplitude: float = 1.0
    direction: np.ndarray | None = None
    value: float = 0.0

    @classmethod
    def gaussian_bump(cls, center, width: float, amplitude: float = 1.0):
        if not width > 0:
            raise ValueError("width must be positive")
        if not amplitude > 0:
            raise ValueError("amplitude must be positive")
        return cls(kind="gaussian_bump", center=np.asarray(center, dtype=float),
                   width=float(width), amplitude=float(amplitude))

    @classmethod
    def sphere_linear(cls, direction):
        return cls(kind="sphere_linear", direction=np.asarray(direction, dtype=float))

    @classmethod
    def sphere_affine(cls, direction, offset: float, scale: float = 1.0):
        return cls(kind="sphere_affine", direction=np.asarray(direction, dtype=float),
                   value=float(offset), amplitude=float(scale))

    @classmethod
    def constant(cls, c: float):
        return cls(kind="constant", value=float(c))

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        if self.kind == "gaussian_bump":
            d2 = np.sum((points - self.center[None, :]) ** 2, axis=1)
            return self.amplitude * np.exp(-d2 / (2.0 * self.width**2))
        if self.kind == "sphere_linear":
            return points @ self.direction
        if self.kind == "sphere_affine":
            return self.value + self.amplitude * (points @ self.direction)
        return np.full(points.shape[0], self.value)

    def sup(self, model=None) -> float:
        if self.kind == "gaussian_bump":
            return self.amplitude
        if self.kind in ("sphere_linear", "sphere_affine"):
            if model is None or model.kind == "euclidean":
                raise ValueError(f"{self.kind} needs an embedded model for its sup")
            reach = float(np.linalg.norm(self.direction) * model.radius)
            return reach if self.kind == "sphere_linear" else self.value + self.amplitude * reach
        return self.value

    @property
    def positive(self) -> bool:
        return self.kind == "gaussian_bump" or (self.kind == "constant" and self.value > 0)


# -- chunked map-reduce -------------------------------------------------------


def _tree_reduce(parts):
    while len(parts) > 1:
        nxt = []
        for i in range(0, len(parts), 2):
            if i + 1 < len(parts):
                nxt.append(tuple(a + b for a, b in zip(parts[i], parts[i + 1])))
            else:
                nxt.append(parts[i])
        parts = nxt
    return parts[0]


def _mc_sums(model, x, T, n_paths, n_steps, seed, threads, weight_fn, k):
    """Map chunks to per-path weight vectors; reduce (sum, sumsq, n, rejects)."""
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    n_steps = n_steps or default_n_steps(T)
    bounds = [(i, min(i + engine.CHUNK, n_paths)) for i in range(0, n_paths, engine.CHUNK)]

    def run(bound):
        first, stop = bound
        res = engine.simulate_chunk(model, x, T, n_steps, seed, first, stop - first, k)
        vals = weight_fn(res)                  # (B, m)
        ok = res.valid & np.isfinite(vals).all(axis=1)
        good = vals[ok]
        return (good.sum(axis=0), (good * good).sum(axis=0),
                int(ok.sum()), int((~ok).sum()))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    return _tree_reduce(parts)


def _finish(sums, sumsq, n_ok, n_rej, shape):
    if n_ok == 0:
        raise EstimatorFailure("all paths were rejected")
    mean = sums / n_ok
    var = np.maximum(sumsq - n_ok * mean * mean, 0.0)
    var = var / (n_ok - 1) if n_ok > 1 else np.zeros_like(var)
    se = np.sqrt(var / n_ok)
    return mean.reshape(shape), se.reshape(shape), n_ok + n_rej, n_rej


def _k_for(model, T):
    return TestFunctionK(T, -model.ricci_rate)


def estimate_semigroup(model, f: ScalarFunctional, x, T: float, n_paths: int,
                       seed: int, *, n_steps: int | None = None, threads: int = 1) -> MCEstimate:
    """P_T f(x) as the sample mean of f at the path endpoint."""

    def weights(res):
        return f(res.endpoint)[:, None]

    out = _mc_sums(model, x, T, n_paths, n_steps, seed, threads, weights, _k_for(model, T))
    mean, se, n, rej = _finish(*out, shape=())
    return MCEstimate(float(mean), float(se), n, rej)


def estimate_gradient(model, f: ScalarFunctional, x, T: float, n_paths: int,
                      seed: int, *, n_steps: int | None = None, threads: int = 1) -> FieldEstimate:
    """grad P_T f(x) in the canonical frame at x: component i is -E[f(x_T) A_i]."""
    d = model.dimension

    def weights(res):
        return -f(res.endpoint)[:, None] * res.grad_integrals

    out = _mc_sums(model, x, T, n_paths, n_steps, seed, threads, weights, _k_for(model, T))
    mean, se, n, rej = _finish(*out, shape=(d,))
    return FieldEstimate(mean, se, n, rej)


def hessian_weight(res: engine.ChunkResult) -> np.ndarray:
    """Per-path Hessian weight: C + C^T - (D + D^T)/2, (B, d, d)."""
    C = res.nested_integrals
    D = res.wk_outer_integrals
    return C + np.swapaxes(C, 1, 2) - 0.5 * (D + np.swapaxes(D, 1, 2))


def estimate_hessian(model, f: ScalarFunctional, x, T: float, n_paths: int,
                     seed: int, *, n_steps: int | None = None, threads: int = 1) -> FieldEstimate:
    """Hess P_T f(x) in the canonical frame at x; exactly symmetric by construction."""
    d = model.dimension

    def weights(res):
        return (f(res.endpoint)[:, None, None] * hessian_weight(res)).reshape(-1, d * d)

    out = _mc_sums(model, x, T, n_paths, n_steps, seed, threads, weights, _k_for(model, T))
    mean, se, n, rej = _finish(*out, shape=(d, d))
    return FieldEstimate(mean, se, n, rej)


# -- shared-path estimates at several points (flat drift-free models) ---------


def estimate_at_points_flat(model, f: ScalarFunctional, points, T: float, n_paths: int,
                            seed: int, *, n_steps: int | None = None,
                            quantity: str = "hessian") -> list[FieldEstimate]:
    """Estimates at several points from one set of paths (common random numbers).

    Only valid on the drift-free euclidean model, where neither the increments
    nor the weights depend on the starting point: results are bitwise identical
    to separate estimate_* calls with the same seed.
    """
    if model.kind != "euclidean" or model.drift_coefficient != 0.0:
        raise ValueError("shared-path estimation requires the drift-free euclidean model")
    if quantity not in ("semigroup", "gradient", "hessian"):
        raise ValueError(f"unknown quantity {quantity!r}")
    d = model.dimension
    points = [np.asarray(p, dtype=float) for p in points]
    n_steps = n_steps or default_n_steps(T)
    k = _k_for(model, T)
    origin = model.base_point()
    m = d * d if quantity == "hessian" else d if quantity == "gradient" else 1

    def weights(res):
        disp = res.endpoint            # displacement from the origin
        cols = []
        for p in points:
            fx = f(p[None, :] + disp)
            if quantity == "semigroup":
                cols.append(fx[:, None])
            elif quantity == "gradient":
                cols.append(-fx[:, None] * res.grad_integrals)
            else:
                cols.append((fx[:, None, None] * hessian_weight(res)).reshape(-1, d * d))
        return np.concatenate(cols, axis=1)

    out = _mc_sums(model, origin, T, n_paths, n_steps, seed, 1, weights, k)
    sums, sumsq, n_ok, n_rej = out
    results = []
    shape = {"semigroup": (), "gradient": (d,), "hessian": (d, d)}[quantity]
    for i in range(len(points)):
        mean, se, n, rej = _finish(sums[i * m:(i + 1) * m], sumsq[i * m:(i + 1) * m],
                                   n_ok, n_rej, shape)
        results.append(FieldEstimate(np.atleast_1d(mean), np.atleast_1d(se), n, rej))
    return results


# -- statistical inequality check ---------------------------------------------


@dataclass(frozen=True)
class GibbsCheck:
    margin: float       # E(XY) - [E(X log(X/EX)) + EX log E e^Y]; <= 0 in truth
    std_error: float
    n_samples: int


def gibbs_check(x_samples, y_samples) -> GibbsCheck:
    """Entropy-variational inequality margin on a sample, with a delta-method SE.

    Returns E(XY) - E(X log(X/EX)) - EX log E e^Y estimated from the sample;
    the underlying inequality says the population value is <= 0.
    """
    X = np.asarray(x_samples, dtype=float)
    Y = np.asarray(y_samples, dtype=float)
    if X.shape != Y.shape or X.ndim != 1:
        raise ValueError("samples must be two equal-length vectors")
    if np.any(X <= 0):
        raise ValueError("X samples must be positive")
    n = len(X)
    comps = np.stack([X * Y, X * np.log(X), X, np.exp(Y)], axis=1)
    m = comps.mean(axis=0)
    m_xy, m_xlx, m_x, m_ey = m
    if m_x == 0:
        raise ValueError("degenerate sample: E[X] = 0")
    margin = m_xy - (m_xlx - m_x * math.log(m_x)) - m_x * math.log(m_ey)
    # delta method: gradient of the margin in the four means
    grad = np.array([1.0, -1.0, math.log(m_x) + 1.0 - math.log(m_ey), -m_x / m_ey])
    cov = np.cov(comps, rowvar=False)
    se = float(np.sqrt(max(grad @ cov @ grad, 0.0) / n))
    return GibbsCheck(float(margin), se, n)
