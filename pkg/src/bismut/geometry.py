"""Model Riemannian manifolds with exact curvature data, geodesics and parallel transport.

Three families are supported, all with constant sectional curvature kappa:

* ``euclidean``   -- R^d, optionally with the linear drift field Z(x) = -c x
  (Ornstein-Uhlenbeck), intrinsic coordinates.
* ``sphere``      -- radius-r sphere embedded in R^(d+1), kappa = 1/r^2 > 0.
* ``hyperbolic``  -- hyperboloid model in Minkowski R^(d,1), kappa < 0.

Points are stored extrinsically (embedding coordinates); frames are matrices
whose columns form an orthonormal basis of the tangent space at the base
point.  Everything here is a pure function of its inputs.
"""

from dataclasses import dataclass, replace

import numpy as np

KINDS = ("euclidean", "sphere", "hyperbolic")

POINT_TOL_SPHERE = 1e-12
POINT_TOL_HYPERBOLIC = 1e-10
FRAME_TOL = 1e-10


@dataclass(frozen=True)
class CurvatureConstants:
    """Constants of the global curvature condition.

    ``K``  bounds the Bakry-Emery tensor from below (Ric_Z >= -K),
    ``K1`` bounds the curvature operator norm |R^{#,#}|,
    ``K2`` bounds the combined derivative tensor entering the Hessian weight.
    """

    K: float
    K1: float
    K2: float


@dataclass(frozen=True)
class ManifoldModel:
    kind: str
    dimension: int
    curvature: float = 0.0
    drift_coefficient: float = 0.0
    #: strength of the synthetic constant tensor tau(a, b) = h3_scale * <a,b> e_1,
    #: used to exercise the K2 code path (no built-in geometry produces K2 != 0).
    h3_scale: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown manifold kind {self.kind!r}")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind == "euclidean":
            if self.curvature != 0.0:
                raise ValueError("euclidean model requires curvature = 0")
        else:
            if self.dimension < 2:
                raise ValueError(f"{self.kind} requires dimension >= 2")
            if self.kind == "sphere" and not self.curvature > 0:
                raise ValueError("sphere requires curvature > 0")
            if self.kind == "hyperbolic" and not self.curvature < 0:
                raise ValueError("hyperbolic requires curvature < 0")
            if self.drift_coefficient != 0.0:
                raise ValueError("drift_coefficient must be 0 unless kind is euclidean")

    # -- basic descriptors -------------------------------------------------

    @property
    def embedding_dim(self) -> int:
        return self.dimension if self.kind == "euclidean" else self.dimension + 1

    @property
    def radius(self) -> float:
        """Scale of the embedded model: r = 1/sqrt(|kappa|)."""
        if self.kind == "euclidean":
            raise ValueError("euclidean model has no radius")
        return 1.0 / np.sqrt(abs(self.curvature))

    @property
    def ricci_rate(self) -> float:
        """lam with Ric_Z = lam * I in any orthonormal frame."""
        if self.kind == "euclidean":
            return self.drift_coefficient
        return (self.dimension - 1) * self.curvature

    def with_synthetic_h3(self, k2: float) -> "ManifoldModel":
        """Copy of the model with the synthetic (H3) tensor of strength k2 >= 0."""
        if k2 < 0:
            raise ValueError("synthetic tensor strength must be >= 0")
        return replace(self, h3_scale=float(k2))

    def curvature_constants(self) -> CurvatureConstants:
        """Exact constants; the brute-force sweep must reproduce them."""
        d, kap = self.dimension, self.curvature
        k1 = abs(kap) * np.sqrt(d - 1) if self.kind != "euclidean" else 0.0
        return CurvatureConstants(K=-self.ricci_rate, K1=float(k1), K2=self.h3_scale)

    # -- metric helpers ----------------------------------------------------

    def metric_dot(self, u, v):
        """Ambient inner product: Euclidean, or Minkowski for the hyperboloid."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.kind == "hyperbolic":
            return np.sum(u[..., :-1] * v[..., :-1], axis=-1) - u[..., -1] * v[..., -1]
        return np.sum(u * v, axis=-1)

    def base_point(self) -> np.ndarray:
        """Canonical starting point (origin, or the last-axis pole)."""
        if self.kind == "euclidean":
            return np.zeros(self.dimension)
        p = np.zeros(self.embedding_dim)
        p[-1] = self.radius
        return p

    def project_point(self, p) -> np.ndarray:
        """Renormalize onto the constraint set (no-op for euclidean)."""
        p = np.asarray(p, dtype=float)
        if self.kind == "euclidean":
            return p
        if self.kind == "sphere":
            return p * (self.radius / np.linalg.norm(p))
        q = -self.metric_dot(p, p)
        if q <= 0:
            raise ValueError("point is not inside the hyperboloid cone")
        return p * (self.radius / np.sqrt(q))

    def tangent_project(self, p, w) -> np.ndarray:
        """Remove the component of w normal to the manifold at p."""
        if self.kind == "euclidean":
            return np.asarray(w, dtype=float)
        pp = self.metric_dot(p, p)
        return w - (self.metric_dot(p, w) / pp) * p

    def frame_at(self, p) -> np.ndarray:
        """Deterministic orthonormal tangent frame at p (columns)."""
        p = np.asarray(p, dtype=float)
        d, e = self.dimension, self.embedding_dim
        if self.kind == "euclidean":
            return np.eye(d)
        cols = []
        for axis in range(e):
            w = self.tangent_project(p, np.eye(e)[axis])
            for c in cols:
                w = w - self.metric_dot(c, w) * c
            nrm = self.metric_dot(w, w)
            if nrm > 1e-16:
                cols.append(w / np.sqrt(nrm))
            if len(cols) == d:
                break
        # refinement pass: re-project and re-orthogonalize the normalized
        # columns (far from the pole a single pass loses up to eps |p|^2)
        return self.orthonormalize_frame(p, np.stack(cols, axis=1))

    def orthonormalize_frame(self, p, F) -> np.ndarray:
        """Project columns to the tangent space at p and Gram-Schmidt them (two passes)."""
        if self.kind == "euclidean":
            return np.asarray(F, dtype=float)
        cols = [np.asarray(F[:, j], dtype=float) for j in range(F.shape[1])]
        for _ in range(2):
            done = []
            for w in cols:
                w = self.tangent_project(p, w)
                for c in done:
                    w = w - self.metric_dot(c, w) * c
                done.append(w / np.sqrt(self.metric_dot(w, w)))
            cols = done
        return np.stack(cols, axis=1)

    # -- invariant checks --------------------------------------------------

    def check_point(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape != (self.embedding_dim,):
            raise ValueError(f"point must have shape ({self.embedding_dim},)")
        if self.kind == "sphere":
            if abs(np.linalg.norm(p) - self.radius) > POINT_TOL_SPHERE * max(1.0, self.radius):
                raise ValueError("point is off the sphere")
        elif self.kind == "hyperbolic":
            target = -self.radius**2
            if abs(self.metric_dot(p, p) - target) > POINT_TOL_HYPERBOLIC * max(1.0, abs(target)):
                raise ValueError("point violates the hyperboloid constraint")
            if p[-1] <= 0:
                raise ValueError("point is on the wrong hyperboloid sheet")
        return p

    def check_frame(self, p, F):
        F = np.asarray(F, dtype=float)
        if F.shape != (self.embedding_dim, self.dimension):
            raise ValueError(f"frame must have shape ({self.embedding_dim}, {self.dimension})")
        for i in range(self.dimension):
            if self.kind != "euclidean":
                if abs(self.metric_dot(p, F[:, i])) > FRAME_TOL * max(1.0, self.radius):
                    raise ValueError(f"frame column {i} is not tangent")
            for j in range(i + 1):
                g = self.metric_dot(F[:, i], F[:, j])
                if abs(g - (1.0 if i == j else 0.0)) > FRAME_TOL:
                    raise ValueError("frame columns are not orthonormal")
        return F


# -- curvature operations ---------------------------------------------------


def rm_apply(model: ManifoldModel, a, b, c) -> np.ndarray:
    """Curvature operator Rm(a, b)c in frame coordinates.

    Constant-curvature closed form: kappa * (<b,c> a - <a,c> b).  Frame
    coordinates are valid at any point because the models are homogeneous.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    d = model.dimension
    if a.shape != (d,) or b.shape != (d,) or c.shape != (d,):
        raise ValueError(f"rm_apply expects three vectors of length {d}")
    if model.curvature == 0.0:
        return np.zeros(d)
    return model.curvature * ((b @ c) * a - (a @ c) * b)


def ricci_z_matrix(model: ManifoldModel) -> np.ndarray:
    """Bakry-Emery tensor Ric - grad(Z)^flat in frame coordinates.

    For constant curvature this is (d-1) kappa I; for the linear drift
    Z(x) = -c x it is c I (the Jacobian of -Z).
    """
    return model.ricci_rate * np.eye(model.dimension)


def h3_tensor(model: ManifoldModel, a, b) -> np.ndarray:
    """The combined derivative tensor of the third curvature condition.

    Identically zero for every built-in geometry (parallel curvature tensor;
    Rm vanishes whenever the drift does not).  When a synthetic tensor has
    been injected, returns h3_scale * <a,b> e_1.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = model.dimension
    if a.shape != (d,) or b.shape != (d,):
        raise ValueError(f"h3_tensor expects two vectors of length {d}")
    out = np.zeros(d)
    if model.h3_scale != 0.0:
        out[0] = model.h3_scale * (a @ b)
    return out


def h3_tensor_array(model: ManifoldModel) -> np.ndarray:
    """Constant tensor T with h3_tensor(a,b)_k = sum_ij T[k,i,j] a_i b_j."""
    d = model.dimension
    T = np.zeros((d, d, d))
    if model.h3_scale != 0.0:
        T[0] = model.h3_scale * np.eye(d)
    return T


# -- geodesics and transport --------------------------------------------------


def geodesic_step(model: ManifoldModel, p, F, dv):
    """Move along the geodesic with initial velocity F @ dv and transport F.

    ``dv`` is an increment in frame coordinates; its Euclidean length is the
    metric length of the step.  Returns the new point and the parallel
    transported (re-orthonormalized) frame.  A zero increment returns the
    inputs unchanged.
    """
    p = np.asarray(p, dtype=float)
    F = np.asarray(F, dtype=float)
    dv = np.asarray(dv, dtype=float)
    if dv.shape != (model.dimension,):
        raise ValueError(f"dv must have shape ({model.dimension},)")
    if not np.all(np.isfinite(dv)):
        raise ValueError("dv must be finite")
    tau = np.linalg.norm(dv)
    if tau == 0.0:
        return p, F

    if model.kind == "euclidean":
        return p + F @ dv, F

    r = model.radius
    u = (F @ dv) / tau
    if model.kind == "sphere":
        ct, st = np.cos(tau / r), np.sin(tau / r)
        p_new = ct * p + st * r * u
        # in-plane rotation; columns orthogonal to span(p, u) are untouched
        wu = F.T @ u
        F_new = F + np.outer((ct - 1.0) * u - (st / r) * p, wu)
    else:
        ch, sh = np.cosh(tau / r), np.sinh(tau / r)
        p_new = ch * p + sh * r * u
        wu = np.array([model.metric_dot(F[:, j], u) for j in range(F.shape[1])])
        F_new = F + np.outer((ch - 1.0) * u + (sh / r) * p, wu)

    p_new = model.project_point(p_new)
    F_new = model.orthonormalize_frame(p_new, F_new)
    return p_new, F_new


# -- independent constant oracle ----------------------------------------------


def brute_force_constants(model: ManifoldModel, n_samples: int, seed: int = 0) -> CurvatureConstants:
    """Estimate the curvature constants by a deterministic sampling sweep.

    K comes from the spectrum of the Bakry-Emery matrix.  K1 and K2 maximize
    the frame-coordinate tensor norms over sampled unit pairs (X, Y); the
    candidate set includes the aligned pairs Y = +-X and an orthogonal
    partner, which carry the extrema for every built-in model.
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be >= 1000")
    d = model.dimension
    K = -float(np.min(np.linalg.eigvalsh(ricci_z_matrix(model))))

    rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
    xs = rng.standard_normal((n_samples, d))
    ys = rng.standard_normal((n_samples, d))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)

    pairs = [(x, y) for x, y in zip(xs, ys)]
    for x, y in zip(xs, ys):
        pairs.append((x, x))
        pairs.append((x, -x))
        w = y - (x @ y) * x
        nrm = np.linalg.norm(w)
        if nrm > 1e-12:
            pairs.append((x, w / nrm))

    basis = np.eye(d)
    k1 = 0.0
    k2 = 0.0
    for x, y in pairs:
        R = np.stack([rm_apply(model, basis[i], x, y) for i in range(d)])
        k1 = max(k1, float(np.sqrt(np.sum(R * R))))
        k2 = max(k2, float(np.linalg.norm(h3_tensor(model, x, y))))
    return CurvatureConstants(K=K, K1=k1, K2=k2)
