"""Closed-form reference solutions and finite-difference checks.

An analytic solution packages u(t, .) = P_{2t} f for an initial datum f with
closed-form value, gradient and Hessian, in both semigroup time (T) and heat
time (t = T/2).  Gradients and Hessians are reported in frame coordinates of
the model's canonical frame at the evaluation point.
"""

import math
from dataclasses import dataclass

import numpy as np

from .estimators import ScalarFunctional
from .geometry import ManifoldModel, geodesic_step

FD_H_MIN = 1e-4
FD_H_MAX = 1e-1


@dataclass(frozen=True)
class GaussianKernelSolution:
    """Heat evolution of a Gaussian bump on R^d, optional linear drift.

    Under the generator (1/2)(Laplacian + Z) with Z = -c x, the transition
    kernel is Gaussian with mean e^(-cT/2) x and variance (1 - e^(-cT))/c,
    so P_T f stays Gaussian in closed form.
    """

    model: ManifoldModel
    center: np.ndarray
    width: float
    amplitude: float

    @property
    def f(self) -> ScalarFunctional:
        return ScalarFunctional.gaussian_bump(self.center, self.width, self.amplitude)

    @property
    def sup(self) -> float:
        return self.amplitude

    def _mean_var(self, T: float):
        c = self.model.drift_coefficient
        if c == 0.0:
            return 1.0, T
        return math.exp(-c * T / 2.0), -math.expm1(-c * T) / c

    def semigroup_value(self, T, x):
        x = np.asarray(x, dtype=float)
        m, s2 = self._mean_var(T)
        v = self.width**2 + s2
        q = m * x - self.center
        scale = self.amplitude * (self.width**2 / v) ** (self.model.dimension / 2.0)
        return scale * np.exp(-np.sum(q * q, axis=-1) / (2.0 * v))

    def semigroup_gradient(self, T, x):
        x = np.asarray(x, dtype=float)
        m, s2 = self._mean_var(T)
        v = self.width**2 + s2
        q = m * x - self.center
        return self.semigroup_value(T, x) * (-m / v) * q

    def semigroup_hessian(self, T, x):
        x = np.asarray(x, dtype=float)
        m, s2 = self._mean_var(T)
        v = self.width**2 + s2
        q = m * x - self.center
        d = self.model.dimension
        return self.semigroup_value(T, x) * (
            (m * m / v**2) * np.outer(q, q) - (m * m / v) * np.eye(d)
        )

    # heat-time forms: u(t, .) = P_{2t} f
    def u_value(self, t, x):
        return self.semigroup_value(2.0 * t, x)

    def u_gradient(self, t, x):
        return self.semigroup_gradient(2.0 * t, x)

    def u_hessian(self, t, x):
        return self.semigroup_hessian(2.0 * t, x)

    def generator_applied(self, t, x):
        """(Laplacian + Z) u at (t, x), from the closed forms."""
        x = np.asarray(x, dtype=float)
        lap = float(np.trace(self.u_hessian(t, x)))
        drift = -self.model.drift_coefficient * x
        return lap + float(drift @ self.u_gradient(t, x))


def euclidean_gaussian_solution(d: int, center, width: float, amplitude: float = 1.0):
    model = ManifoldModel("euclidean", d)
    if not width > 0:
        raise ValueError("width must be positive")
    return GaussianKernelSolution(model, np.asarray(center, dtype=float), float(width), float(amplitude))


def ou_gaussian_solution(d: int, drift: float, center, width: float, amplitude: float = 1.0):
    model = ManifoldModel("euclidean", d, drift_coefficient=float(drift))
    if not width > 0:
        raise ValueError("width must be positive")
    return GaussianKernelSolution(model, np.asarray(center, dtype=float), float(width), float(amplitude))


@dataclass(frozen=True)
class SphereEigenSolution:
    """First spherical harmonic <a, x> with optional affine offset.

    On the radius-r sphere, Laplacian <a,x> = -(d/r^2) <a,x>, so
    u(t, x) = offset + e^(-lam t) <a, x> with lam = d/r^2 solves the heat
    equation and P_T phi = e^(-lam T / 2) phi under the generator
    (1/2) Laplacian.  Hess <a,x> = -kappa <a,x> g.
    """

    model: ManifoldModel
    direction: np.ndarray
    offset: float = 0.0
    scale: float = 1.0

    @property
    def eigenvalue(self) -> float:
        return self.model.dimension * self.model.curvature

    @property
    def f(self) -> ScalarFunctional:
        if self.offset == 0.0 and self.scale == 1.0:
            return ScalarFunctional.sphere_linear(self.direction)
        return ScalarFunctional.sphere_affine(self.direction, self.offset, self.scale)

    @property
    def sup(self) -> float:
        reach = self.scale * float(np.linalg.norm(self.direction)) * self.model.radius
        return self.offset + reach

    def phi(self, x):
        return np.asarray(x, dtype=float) @ self.direction

    def semigroup_value(self, T, x):
        return self.offset + self.scale * math.exp(-self.eigenvalue * T / 2.0) * self.phi(x)

    def semigroup_gradient(self, T, x):
        F = self.model.frame_at(np.asarray(x, dtype=float))
        return self.scale * math.exp(-self.eigenvalue * T / 2.0) * (F.T @ self.direction)

    def semigroup_hessian(self, T, x):
        d = self.model.dimension
        decay = math.exp(-self.eigenvalue * T / 2.0)
        return -self.model.curvature * self.scale * decay * self.phi(x) * np.eye(d)

    def u_value(self, t, x):
        return self.semigroup_value(2.0 * t, x)

    def u_gradient(self, t, x):
        return self.semigroup_gradient(2.0 * t, x)

    def u_hessian(self, t, x):
        return self.semigroup_hessian(2.0 * t, x)

    def generator_applied(self, t, x):
        return -self.eigenvalue * (self.u_value(t, x) - self.offset)


def sphere_eigen_solution(d: int, direction):
    """phi = <a, x> on the unit d-sphere; lam = d."""
    direction = np.asarray(direction, dtype=float)
    model = ManifoldModel("sphere", d, curvature=1.0)
    if direction.shape != (d + 1,):
        raise ValueError(f"direction must have shape ({d + 1},)")
    nrm = np.linalg.norm(direction)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    return SphereEigenSolution(model, direction)


def sphere_affine_solution(d: int, direction, offset: float, scale: float = 1.0):
    """Positive solution offset + scale * e^(-lam t) <a, x> (offset > scale)."""
    sol = sphere_eigen_solution(d, direction)
    if not offset > abs(scale):
        raise ValueError("offset must exceed |scale| for positivity")
    return SphereEigenSolution(sol.model, sol.direction, offset=float(offset), scale=float(scale))


def heat_residual(solution, t: float, x, dt: float = 5e-4) -> float:
    """|d/dt u - (Laplacian + Z) u| with a central time difference."""
    du = (solution.u_value(t + dt, x) - solution.u_value(t - dt, x)) / (2.0 * dt)
    return abs(du - solution.generator_applied(t, x))


def finite_difference_hessian(func, model: ManifoldModel, x, h: float, frame=None) -> np.ndarray:
    """Covariant Hessian of a scalar point function by geodesic central differences.

    ``func`` takes an embedding point and returns a float.  Second derivatives
    are taken along geodesics through x (O(h^2) accurate); off-diagonal entries
    come from the polarization identity.
    """
    if not (FD_H_MIN <= h <= FD_H_MAX):
        raise ValueError(f"h must lie in [{FD_H_MIN}, {FD_H_MAX}]")
    x = model.check_point(np.asarray(x, dtype=float))
    F = model.frame_at(x) if frame is None else frame
    d = model.dimension
    f0 = func(x)

    def second(v):
        p_plus, _ = geodesic_step(model, x, F, h * v)
        p_minus, _ = geodesic_step(model, x, F, -h * v)
        return (func(p_plus) - 2.0 * f0 + func(p_minus)) / (h * h)

    H = np.empty((d, d))
    basis = np.eye(d)
    for i in range(d):
        H[i, i] = second(basis[i])
    for i in range(d):
        for j in range(i + 1, d):
            mixed = (second(basis[i] + basis[j]) - second(basis[i] - basis[j])) / 4.0
            H[i, j] = mixed
            H[j, i] = mixed
    return H
