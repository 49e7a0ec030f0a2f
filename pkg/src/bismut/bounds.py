"""Closed-form gradient, Hessian, Harnack and eigenfunction bounds.

Every evaluator is a total function over its stated domain, raises ValueError
outside it, and handles the removable K -> 0 singularity of the rate
K / (1 - e^(-2Kt)) by a series branch.  All functions accept numpy arrays
where elementwise evaluation makes sense.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .pathsim import integrals_h_g

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)


def exp_rate(K, t):
    """K / (1 - e^(-2Kt)), continued through K = 0 by its limit 1/(2t)."""
    K = np.asarray(K, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    x = 2.0 * K * t
    small = np.abs(x) < 1e-12
    xs = np.where(small, 1.0, x)
    out = np.where(small, (1.0 + x / 2.0 + x * x / 12.0) / (2.0 * t),
                   K / np.where(small, 1.0, -np.expm1(-xs)))
    return out if out.ndim else float(out)


def _check_log_ratio(A, u):
    A = np.asarray(A, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0) or np.any(u > A * (1 + 1e-15)):
        raise ValueError("required: 0 < u <= A")
    return np.log(A / u)


def hamilton_gradient_bound(K, t, A, u):
    """(2K + 1/t) log(A/u): the time-uniform first-derivative bound, K >= 0."""
    K = np.asarray(K, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(K < 0):
        raise ValueError("this bound requires K >= 0")
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    out = (2.0 * K + 1.0 / t) * _check_log_ratio(A, u)
    return out if out.ndim else float(out)


def li_gradient_bound(K, t, A, u):
    """2K/(1 - e^(-2Kt)) log(A/u), the sharpened rate; K -> 0 gives (1/t) log(A/u)."""
    out = 2.0 * exp_rate(K, t) * _check_log_ratio(A, u)
    return out if np.ndim(out) else float(out)


def hessian_bound_main(K, K1, K2, t, A, u):
    """Composed second-derivative bound with explicit constants.

    sqrt(8K/(3(1-e^(-2Kt))) log(A/u)) *
        [K2 t/2 + (sqrt(2t) K1 + sqrt(12K/(1-e^(-2Kt)))) (1 + sqrt(2 log(A/u)))],
    with the K -> 0 limit taken through the rate function.  Zero when u = A.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    if np.any(np.asarray(K1) < 0) or np.any(np.asarray(K2) < 0):
        raise ValueError("K1, K2 must be >= 0")
    L = _check_log_ratio(A, u)
    R = exp_rate(K, t)
    out = np.sqrt(8.0 * R * L / 3.0) * (
        np.asarray(K2) * t / 2.0
        + (np.sqrt(2.0 * t) * np.asarray(K1) + np.sqrt(12.0 * R)) * (1.0 + np.sqrt(2.0 * L))
    )
    return out if out.ndim else float(out)


def hessian_bound_hg_form(K, K1, K2, t, A, u, substitute_g_third=True):
    """The same bound assembled from the raw weighted-integral route.

    Uses H and G of the exponential interpolation weight with horizon T = 2t:

        sqrt(H) [ (K2/2 sqrt(2GT) + 2 K1 sqrt(2G) + 4 sqrt(2H)) sqrt(L)
                  + 4 (K1 sqrt(G) + 2 sqrt(H)) L ],   L = log(A/u).

    With ``substitute_g_third`` the integral G is replaced by its upper bound
    T/3, which reproduces the composed form exactly; with the exact G the
    result is dominated by the composed form.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    L = float(_check_log_ratio(A, u))
    T = 2.0 * t
    H, G = integrals_h_g(K, T)
    if substitute_g_third:
        G = T / 3.0
    sqH = math.sqrt(H)
    sqL = math.sqrt(L)
    return sqH * ((0.5 * K2 * math.sqrt(2.0 * G * T) + 2.0 * K1 * math.sqrt(2.0 * G)
                   + 4.0 * math.sqrt(2.0 * H)) * sqL
                  + 4.0 * (K1 * math.sqrt(G) + 2.0 * sqH) * L)


def clean_bound_rate(K, K1, K2):
    """B = (sqrt(6 K2) - sqrt(3 K2))/12 + sqrt(6)/3 K1 + 2 (K+ v K2 + K+)."""
    K = np.asarray(K, dtype=float)
    K1 = np.asarray(K1, dtype=float)
    K2 = np.asarray(K2, dtype=float)
    if np.any(K1 < 0) or np.any(K2 < 0):
        raise ValueError("K1, K2 must be >= 0")
    Kp = np.maximum(K, 0.0)
    out = (SQRT6 - SQRT3) * np.sqrt(K2) / 12.0 + (SQRT6 / 3.0) * K1 \
        + 2.0 * (np.maximum(Kp, K2) + Kp)
    return out if out.ndim else float(out)


def hessian_bound_clean(K, K1, K2, t, A, u):
    """(sqrt(6)+2)(B + 1/t)(1 + log(A/u)) with the constant-rate B above."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    L = _check_log_ratio(A, u)
    out = (SQRT6 + 2.0) * (clean_bound_rate(K, K1, K2) + 1.0 / t) * (1.0 + L)
    return out if out.ndim else float(out)


# -- backward Harnack exponents ------------------------------------------------


@dataclass(frozen=True)
class HarnackExponents:
    gamma: float
    eta: float
    gamma_tilde: float
    eta_tilde: float


def _log_rate_integral(K, s, t):
    """int_s^t K/(1 - e^(-2Kr)) dr = (1/2) log((e^(2Kt)-1)/(e^(2Ks)-1)), K -> 0 safe."""
    if abs(K) * t < 1e-12:
        return 0.5 * math.log(t / s)
    return 0.5 * math.log(math.expm1(2.0 * K * t) / math.expm1(2.0 * K * s))


def harnack_exponents(K, K1, K2, d, s, t) -> HarnackExponents:
    """Backward Harnack exponents by adaptive quadrature, plus their closed bounds.

    gamma = 2 d^2 (int_s^t [(K2 sqrt(2r)/4 + K1) sqrt(2Kr/(3(1-e^(-2Kr))))
                            + K/(1-e^(-2Kr))] dr)^2,
    eta   = (1/2) exp(-4d int_s^t [K1 sqrt(2Kr/(3(1-e^(-2Kr)))) + K/(1-e^(-2Kr))] dr).

    The tilde variants replace 2Kr/(1-e^(-2Kr)) <= 1 + 2 K+ r and integrate in
    closed form; always gamma <= gamma_tilde and eta >= eta_tilde.
    """
    if not (t > s > 0):
        raise ValueError("required: t > s > 0")
    if K1 < 0 or K2 < 0 or d < 1:
        raise ValueError("K1, K2 must be >= 0 and d >= 1")

    def curb(r):
        # sqrt(2Kr / (3 (1 - e^(-2Kr)))) = sqrt(2 r exp_rate(K, r) / 3)
        return math.sqrt(2.0 * r * exp_rate(K, r) / 3.0)

    a_int, _ = quad(lambda r: (K2 * math.sqrt(2.0 * r) / 4.0 + K1) * curb(r)
                    + exp_rate(K, r), s, t, limit=200)
    b_int, _ = quad(lambda r: K1 * curb(r) + exp_rate(K, r), s, t, limit=200)
    gamma = 2.0 * d * d * a_int * a_int
    eta = 0.5 * math.exp(-4.0 * d * b_int)

    Kp = max(K, 0.0)
    log_term = _log_rate_integral(K, s, t)
    t32 = t ** 1.5 - s ** 1.5
    a_tilde = (SQRT6 / 18.0) * (K2 + 4.0 * K1 * math.sqrt(Kp)) * t32 \
        + (K2 * math.sqrt(3.0 * Kp) / 12.0) * (t * t - s * s) \
        + (SQRT3 / 3.0) * K1 * (t - s) + log_term
    gamma_tilde = 2.0 * d * d * a_tilde * a_tilde
    eta_tilde = 0.5 * math.exp(
        (4.0 * d * SQRT3 / 3.0) * K1 * (s - t)
        + (8.0 * d * SQRT6 / 9.0) * K1 * math.sqrt(Kp) * (s ** 1.5 - t ** 1.5)
        - 4.0 * d * log_term
    )
    return HarnackExponents(gamma, eta, gamma_tilde, eta_tilde)


# -- eigenfunction bounds --------------------------------------------------------


def eigenfunction_rate(lam, lam1, K, K1, K2):
    """(2+sqrt(2)) (K2/4 sqrt(1/(3 lam1) + K+/(3 lam1^2))
                    + 2 K1 sqrt(1/3 + K+/(3 lam1)) + 2 (lam + K+))."""
    if not (lam1 > 0 and lam >= lam1):
        raise ValueError("required: lam >= lam1 > 0")
    if K1 < 0 or K2 < 0:
        raise ValueError("K1, K2 must be >= 0")
    Kp = max(K, 0.0)
    return (2.0 + SQRT2) * (
        K2 / 4.0 * math.sqrt(1.0 / (3.0 * lam1) + Kp / (3.0 * lam1 * lam1))
        + 2.0 * K1 * math.sqrt(1.0 / 3.0 + Kp / (3.0 * lam1))
        + 2.0 * (lam + Kp)
    )


def eigenfunction_bound(lam, lam1, K, K1, K2, phi_x, phi_sup):
    """Pointwise bound on Hess(phi)_ij / phi where phi > 0."""
    if not (0 < phi_x <= phi_sup * (1 + 1e-15)):
        raise ValueError("required: 0 < phi_x <= phi_sup")
    return eigenfunction_rate(lam, lam1, K, K1, K2) * (1.0 + math.log(phi_sup / phi_x))


def eigenfunction_uniform_bound(lam, lam1, K, K1, K2, phi_sup):
    """Uniform bound on |Hess phi|: the same rate times sup phi."""
    if not phi_sup > 0:
        raise ValueError("phi_sup must be positive")
    return eigenfunction_rate(lam, lam1, K, K1, K2) * phi_sup


# -- scalar appendix inequalities -----------------------------------------------


def appendix_g(x):
    """G(x) = (3 - x) e^(2x) - 3 - 4x e^x - x; <= 0 for x >= 0, >= 0 for x <= 0."""
    x = np.asarray(x, dtype=float)
    out = (3.0 - x) * np.exp(2.0 * x) - 3.0 - 4.0 * x * np.exp(x) - x
    return out if out.ndim else float(out)


def appendix_g_sign_check(grid, tol: float = 1e-12):
    """Check the sign pattern of G on a grid, tolerance scaled by e^(2|x|).

    Returns a dict with the worst scaled violations on each side.
    """
    grid = np.asarray(grid, dtype=float)
    vals = appendix_g(grid)
    scale = np.exp(2.0 * np.abs(grid))
    pos = grid >= 0
    # violation: G > 0 on x >= 0 or G < 0 on x <= 0, beyond the scaled tolerance
    viol_pos = np.where(pos, vals / scale, -np.inf)
    viol_neg = np.where(~pos, -vals / scale, -np.inf)
    worst_pos = float(np.max(viol_pos)) if np.any(pos) else -np.inf
    worst_neg = float(np.max(viol_neg)) if np.any(~pos) else -np.inf
    n_viol = int(np.sum((np.where(pos, vals, -vals) > tol * scale)))
    return {"worst_scaled_positive_side": worst_pos,
            "worst_scaled_negative_side": worst_neg,
            "n_violations": n_viol,
            "tolerance": tol}


def ek_inequality_check(K, t):
    """Margin of K/(1 - e^(-2Kt)) <= 1/(2t) + K+; nonnegative up to roundoff."""
    K = np.asarray(K, dtype=float)
    t = np.asarray(t, dtype=float)
    out = 1.0 / (2.0 * t) + np.maximum(K, 0.0) - exp_rate(K, t)
    return out if out.ndim else float(out)
