"""Single-path diffusion simulation with one-pass Ito accumulators.

The diffusion has generator (1/2)(Laplace-Beltrami + Z) and is discretized by
a geodesic random walk: per step, draw a Gaussian tangent increment, add the
drift displacement, move along the exact geodesic and transport the frame
exactly.  Along the way the path collects every stochastic integral needed by
the first- and second-derivative semigroup representations:

* ``q_matrix``            damped transport Q (frame coordinates),
* ``grad_integrals``      A_i   = int kdot(s) <Q e_i, dB>,
* ``nested_integrals``    C_ij  = int A_i(s-) kdot(s) <Q e_j, dB>,
* ``wk_outer_integrals``  D_ij  = int kdot(s) <W^k(e_i, e_j), dB>,

all with left-point (Ito) evaluation.  The heavy lifting lives in the engine
backends (compiled kernel or numpy fallback); this module holds the scalar
API and the interpolation weight k(s).
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TestFunctionK",
    "PathConfig",
    "PathRecord",
    "integrals_h_g",
    "simulate_path",
    "default_n_steps",
]

#: below this |K|*T the closed forms switch to their power series
SERIES_THRESHOLD = 1e-6


@dataclass(frozen=True)
class TestFunctionK:
    """Interpolation weight k(s) = int_s^T e^(-K r) dr / int_0^T e^(-K r) dr.

    Satisfies k(0) = 1 and k(T) = 0 exactly, is nonincreasing on [0, T], and
    has derivative kdot(s) = -e^(-K s) / N with N the normalizing integral.
    """

    horizon: float
    rate: float  # the Ricci lower-bound constant K

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    @property
    def normalizer(self) -> float:
        """N = int_0^T e^(-K r) dr."""
        K, T = self.rate, self.horizon
        if abs(K) * T < SERIES_THRESHOLD:
            return T * (1.0 - K * T / 2.0 + (K * T) ** 2 / 6.0)
        return -np.expm1(-K * T) / K

    def value(self, s):
        K, T = self.rate, self.horizon
        s = np.asarray(s, dtype=float)
        if abs(K) * T < SERIES_THRESHOLD:
            return (T - s) / T
        den = -np.expm1(-K * T)
        return (np.expm1(-K * s) - np.expm1(-K * T)) / den

    def derivative(self, s):
        K, T = self.rate, self.horizon
        s = np.asarray(s, dtype=float)
        return -np.exp(-K * s) / self.normalizer

    def tables(self, n_steps: int):
        """k and kdot sampled at the left points m*h, m = 0..n_steps-1."""
        s = np.arange(n_steps) * (self.horizon / n_steps)
        return np.ascontiguousarray(self.value(s)), np.ascontiguousarray(self.derivative(s))


def integrals_h_g(K: float, T: float):
    """The weighted square integrals of the exponential interpolation weight.

    H = int_0^T e^(Ks) kdot(s)^2 ds = K / (1 - e^(-KT)),
    G = int_0^T e^(Ks) k(s)^2 ds = (e^(2TK) - 1 - 2TK e^(TK)) / (K (e^(KT)-1)^2).

    Near K = 0 both switch to series (H -> 1/T + K/2 + K^2 T/12,
    G -> T/3 - K^2 T^3 / 90); G <= T/3 always.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    x = K * T
    if abs(x) < SERIES_THRESHOLD:
        H = 1.0 / T + K / 2.0 + K * x / 12.0
        G = T / 3.0 - T * x * x / 90.0
        return H, G
    H = -K / math.expm1(-x)
    # G rewritten as e^x * 2(sinh x - x) / (K (e^x - 1)^2) for stability
    if abs(x) < 1e-2:
        x2 = x * x
        sinh_minus = x * x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0))
    else:
        sinh_minus = math.sinh(x) - x
    em = math.expm1(x)
    G = math.exp(x) * 2.0 * sinh_minus / (K * em * em)
    return H, G


def default_n_steps(T: float) -> int:
    """Smallest step count with h <= min(1e-2, T/100)."""
    return max(100, int(math.ceil(T / 1e-2)))


@dataclass(frozen=True)
class PathConfig:
    horizon: float
    n_steps: int
    seed: int
    path_index: int = 0

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")

    @property
    def step(self) -> float:
        return self.horizon / self.n_steps


@dataclass
class PathRecord:
    """Endpoint and Ito accumulators of one simulated path (frame coordinates)."""

    endpoint: np.ndarray           # (embedding_dim,)
    q_matrix: np.ndarray           # (d, d)
    grad_integrals: np.ndarray     # A, (d,)
    nested_integrals: np.ndarray   # C, (d, d)
    wk_outer_integrals: np.ndarray  # D, (d, d)
    grad_quadratic_variation: np.ndarray  # predictable QV of A, (d,)
    q_bound_violation: float       # max over steps of |Q|_2 e^(-K t / 2)
    valid: bool


def simulate_path(model, x0, cfg: PathConfig, k: TestFunctionK, v_basis=None, w_basis=None) -> PathRecord:
    """Simulate one path, returning all accumulators.

    The path's randomness is a pure function of (cfg.seed, cfg.path_index);
    see ``engine.gaussian_increments`` for the stream definition.  Non-default
    bilinear-slot bases (``v_basis``/``w_basis`` scaling the weight vectors)
    force the numpy engine.
    """
    from . import engine

    res = engine.simulate_chunk(
        model, np.asarray(x0, dtype=float), cfg.horizon, cfg.n_steps,
        cfg.seed, cfg.path_index, 1, k,
        v_basis=v_basis, w_basis=w_basis,
    )
    return PathRecord(
        endpoint=res.endpoint[0],
        q_matrix=res.q_matrix[0],
        grad_integrals=res.grad_integrals[0],
        nested_integrals=res.nested_integrals[0],
        wk_outer_integrals=res.wk_outer_integrals[0],
        grad_quadratic_variation=res.grad_qv[0],
        q_bound_violation=float(res.q_bound_violation[0]),
        valid=bool(res.valid[0]),
    )
