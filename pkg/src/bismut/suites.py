"""Experiment suites driven by the CLI: each produces ReportRows.

Suites
------
formula-gradient    MC gradient vs analytic oracle (3 sigma rule).
formula-hessian     MC Hessian vs analytic oracle (4 sigma rule).
bound-sweep         observed Hess(u)_ij / u vs the two closed-form bounds.
harnack             backward Harnack inequality + exponent bound comparison.
eigen               eigenfunction Hessian bounds on the sphere.
scalar-inequalities closed-form inequality grids (no simulation).
convergence         weak-error order of the Hessian estimator vs n_steps.

Row semantics: pass <=> estimate - 3 std_error <= bound (see reports module).
Rows that are purely informational carry bound = +inf.
"""

import math

import numpy as np

from . import engine
from .bounds import (appendix_g, ek_inequality_check, eigenfunction_bound,
                     eigenfunction_uniform_bound, exp_rate, harnack_exponents,
                     hessian_bound_clean, hessian_bound_main)
from .estimators import (EstimatorFailure, ScalarFunctional, _finish, _mc_sums,
                         estimate_at_points_flat, estimate_gradient,
                         estimate_hessian, hessian_weight)
from .geometry import ManifoldModel, brute_force_constants
from .oracles import GaussianKernelSolution, SphereEigenSolution
from .pathsim import TestFunctionK, default_n_steps, integrals_h_g
from .reports import ReportRow


class ConfigError(ValueError):
    """Invalid experiment configuration."""


SUITES = ("formula-gradient", "formula-hessian", "bound-sweep", "harnack",
          "eigen", "scalar-inequalities", "convergence")

_MODEL_KEYS = {"kind", "dimension", "curvature", "drift_coefficient", "h3_scale"}
_F_KEYS = {"kind", "center", "width", "amplitude", "direction", "offset", "scale", "value"}
_GRID_KEYS = {"times", "points"}
_TOP_KEYS = {
    "formula-gradient": {"suite", "seed", "output", "threads", "model", "f",
                         "grid", "n_paths", "n_steps"},
    "formula-hessian": {"suite", "seed", "output", "threads", "model", "f",
                        "grid", "n_paths", "n_steps"},
    "bound-sweep": {"suite", "seed", "output", "threads", "model", "f", "grid",
                    "n_paths", "n_steps"},
    "harnack": {"suite", "seed", "output", "threads", "model", "f", "n_triples",
                "time_range", "x_range", "tilde_grid_size"},
    "eigen": {"suite", "seed", "output", "threads", "model", "f", "grid",
              "n_constant_samples"},
    "scalar-inequalities": {"suite", "seed", "output", "threads",
                            "grid_rate_points", "grid_sign_points",
                            "grid_quadrature_points"},
    "convergence": {"suite", "seed", "output", "threads", "model", "f", "grid",
                    "n_paths", "ladder_start", "ladder_points"},
}


def _require(cfg, key, typ, suite):
    if key not in cfg:
        raise ConfigError(f"suite {suite!r}: missing required field {key!r}")
    val = cfg[key]
    if typ is float:
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError(f"field {key!r} must be a number")
        return float(val)
    if typ is int:
        if not isinstance(val, int) or isinstance(val, bool):
            raise ConfigError(f"field {key!r} must be an integer")
    elif not isinstance(val, typ):
        raise ConfigError(f"field {key!r} must be of type {typ.__name__}")
    return val


def _check_keys(d, allowed, where):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def parse_model(d) -> ManifoldModel:
    if not isinstance(d, dict):
        raise ConfigError("'model' must be an object")
    _check_keys(d, _MODEL_KEYS, "model")
    try:
        return ManifoldModel(
            kind=_require(d, "kind", str, "model"),
            dimension=_require(d, "dimension", int, "model"),
            curvature=float(d.get("curvature", 0.0)),
            drift_coefficient=float(d.get("drift_coefficient", 0.0)),
            h3_scale=float(d.get("h3_scale", 0.0)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid model: {exc}") from exc


def parse_functional(d) -> ScalarFunctional:
    if not isinstance(d, dict):
        raise ConfigError("'f' must be an object")
    _check_keys(d, _F_KEYS, "f")
    kind = _require(d, "kind", str, "f")
    try:
        if kind == "gaussian_bump":
            return ScalarFunctional.gaussian_bump(d["center"], float(d["width"]),
                                                  float(d.get("amplitude", 1.0)))
        if kind == "sphere_linear":
            return ScalarFunctional.sphere_linear(d["direction"])
        if kind == "sphere_affine":
            return ScalarFunctional.sphere_affine(d["direction"], float(d["offset"]),
                                                  float(d.get("scale", 1.0)))
        if kind == "constant":
            return ScalarFunctional.constant(float(d["value"]))
    except KeyError as exc:
        raise ConfigError(f"functional {kind!r}: missing field {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid functional: {exc}") from exc
    raise ConfigError(f"unknown functional kind {kind!r}")


def parse_grid(d, model) -> tuple[list[float], list[np.ndarray]]:
    if not isinstance(d, dict):
        raise ConfigError("'grid' must be an object")
    _check_keys(d, _GRID_KEYS, "grid")
    times = d.get("times")
    points = d.get("points")
    if not isinstance(times, list) or not times:
        raise ConfigError("grid.times must be a nonempty list")
    if not isinstance(points, list) or not points:
        raise ConfigError("grid.points must be a nonempty list")
    out_pts = []
    for i, p in enumerate(points):
        arr = np.asarray(p, dtype=float)
        try:
            out_pts.append(model.check_point(arr))
        except ValueError as exc:
            raise ConfigError(f"grid.points[{i}]: {exc}") from exc
    for t in times:
        if not isinstance(t, (int, float)) or t <= 0:
            raise ConfigError("grid.times entries must be positive numbers")
    return [float(t) for t in times], out_pts


def validate_config(raw: dict):
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    suite = raw.get("suite")
    if suite not in SUITES:
        raise ConfigError(f"'suite' must be one of {SUITES}, got {suite!r}")
    _check_keys(raw, _TOP_KEYS[suite], "config")
    _require(raw, "seed", int, suite)
    if "threads" in raw and (not isinstance(raw["threads"], int) or raw["threads"] < 1):
        raise ConfigError("'threads' must be a positive integer")
    needs_paths = suite in ("formula-gradient", "formula-hessian", "bound-sweep",
                            "convergence")
    if needs_paths:
        n_paths = _require(raw, "n_paths", int, suite)
        if n_paths < 1:
            raise ConfigError("'n_paths' must be >= 1")
    if suite not in ("scalar-inequalities",):
        parse_model(_require(raw, "model", dict, suite))
    return raw


def _model_label(model: ManifoldModel) -> str:
    if model.kind == "euclidean":
        if model.drift_coefficient:
            return f"euclidean(cz={model.drift_coefficient:g})"
        return "euclidean"
    return f"{model.kind}(kappa={model.curvature:g})"


def _oracle_for(model: ManifoldModel, f: ScalarFunctional):
    if model.kind == "euclidean" and f.kind == "gaussian_bump":
        return GaussianKernelSolution(model, f.center, f.width, f.amplitude)
    if model.kind == "sphere" and f.kind == "sphere_linear":
        return SphereEigenSolution(model, f.direction)
    if model.kind == "sphere" and f.kind == "sphere_affine":
        return SphereEigenSolution(model, f.direction, offset=f.value, scale=f.amplitude)
    raise ConfigError(f"no analytic oracle for {model.kind} with f.kind={f.kind!r}")


def _base_row(suite, model, consts, t, x_id, quantity, estimate, std_error, bound):
    return ReportRow(suite=suite, model=_model_label(model), d=model.dimension,
                     K=consts.K, K1=consts.K1, K2=consts.K2, t=t, x_id=x_id,
                     quantity=quantity, estimate=estimate, std_error=std_error,
                     bound=bound)


# -- formula fidelity suites ---------------------------------------------------


def run_formula_gradient(cfg) -> list[ReportRow]:
    model = parse_model(cfg["model"])
    f = parse_functional(cfg["f"])
    times, points = parse_grid(cfg.get("grid", {}), model)
    oracle = _oracle_for(model, f)
    consts = model.curvature_constants()
    seed = cfg["seed"]
    n_paths = cfg["n_paths"]
    n_steps = cfg.get("n_steps")
    threads = cfg.get("threads", 1)
    rows = []
    shareable = model.kind == "euclidean" and model.drift_coefficient == 0.0
    for T in times:
        if shareable:
            ests = estimate_at_points_flat(model, f, points, T, n_paths, seed,
                                           n_steps=n_steps, quantity="gradient")
        else:
            ests = [estimate_gradient(model, f, x, T, n_paths, seed,
                                      n_steps=n_steps, threads=threads)
                    for x in points]
        for x_id, (x, est) in enumerate(zip(points, ests)):
            ref = oracle.semigroup_gradient(T, x)
            for i in range(model.dimension):
                rows.append(_base_row("formula-gradient", model, consts, T, x_id,
                                      f"grad[{i}]", abs(float(est.mean[i]) - float(ref[i])),
                                      float(est.std_error[i]), 0.0))
    return rows


def run_formula_hessian(cfg) -> list[ReportRow]:
    model = parse_model(cfg["model"])
    f = parse_functional(cfg["f"])
    times, points = parse_grid(cfg.get("grid", {}), model)
    oracle = _oracle_for(model, f)
    consts = model.curvature_constants()
    seed = cfg["seed"]
    n_paths = cfg["n_paths"]
    n_steps = cfg.get("n_steps")
    threads = cfg.get("threads", 1)
    d = model.dimension
    rows = []
    shareable = model.kind == "euclidean" and model.drift_coefficient == 0.0
    for T in times:
        if shareable:
            ests = estimate_at_points_flat(model, f, points, T, n_paths, seed,
                                           n_steps=n_steps, quantity="hessian")
            ests = [type(e)(e.mean.reshape(d, d), e.std_error.reshape(d, d),
                            e.n_paths, e.rejected_paths) for e in ests]
        else:
            ests = [estimate_hessian(model, f, x, T, n_paths, seed,
                                     n_steps=n_steps, threads=threads)
                    for x in points]
        for x_id, (x, est) in enumerate(zip(points, ests)):
            ref = oracle.semigroup_hessian(T, x)
            for i in range(d):
                for j in range(i, d):
                    se = float(est.std_error[i, j])
                    rows.append(_base_row("formula-hessian", model, consts, T, x_id,
                                          f"hess[{i}.{j}]",
                                          abs(float(est.mean[i, j]) - float(ref[i, j])),
                                          se, se))  # bound = one extra sigma: 4 total
    return rows


# -- bound sweep -----------------------------------------------------------------


def estimate_hessian_ratio(model, f, x, T, n_paths, seed, n_steps=None, threads=1):
    """Hess(P_T f)_ij / P_T f with a delta-method standard error, from one run."""
    d = model.dimension
    k = TestFunctionK(T, -model.ricci_rate)

    def weights(res):
        fx = f(res.endpoint)
        hw = (fx[:, None, None] * hessian_weight(res)).reshape(-1, d * d)
        cross = fx[:, None] * hw
        return np.concatenate([fx[:, None], fx[:, None] ** 2, hw, cross], axis=1)

    sums, sumsq, n_ok, n_rej = _mc_sums(model, x, T, n_paths, n_steps, seed,
                                        threads, weights, k)
    if n_ok == 0:
        raise EstimatorFailure("all paths were rejected")
    m = sums / n_ok
    u, u2 = m[0], m[1]
    H = m[2:2 + d * d]
    X = m[2 + d * d:]
    if u <= 0:
        raise EstimatorFailure("nonpositive semigroup estimate; cannot form Hess/u")
    var = np.maximum(sumsq / n_ok - m * m, 0.0)
    var_u = var[0]
    var_H = var[2:2 + d * d]
    cov = X - H * u                      # cov(f W, f) per path
    ratio = H / u
    var_ratio = np.maximum(var_H / u**2 + (H * H) * var_u / u**4
                           - 2.0 * H * cov / u**3, 0.0) / n_ok
    return (ratio.reshape(d, d), np.sqrt(var_ratio).reshape(d, d),
            float(u), n_ok, n_rej)


def run_bound_sweep(cfg) -> list[ReportRow]:
    model = parse_model(cfg["model"])
    f = parse_functional(cfg["f"])
    if not (f.positive or f.kind == "sphere_affine"):
        raise ConfigError("bound-sweep requires a positive functional")
    times, points = parse_grid(cfg.get("grid", {}), model)
    consts = model.curvature_constants()
    seed = cfg["seed"]
    n_paths = cfg["n_paths"]
    n_steps = cfg.get("n_steps")
    threads = cfg.get("threads", 1)
    A = f.sup(model if model.kind != "euclidean" else None)
    d = model.dimension
    rows = []
    for t in times:
        T = 2.0 * t                       # heat time t corresponds to P_{2t}
        for x_id, x in enumerate(points):
            ratio, se, u, _, _ = estimate_hessian_ratio(
                model, f, x, T, n_paths, seed, n_steps=n_steps, threads=threads)
            u_clip = min(u, A)
            b_main = hessian_bound_main(consts.K, consts.K1, consts.K2, t, A, u_clip)
            b_clean = hessian_bound_clean(consts.K, consts.K1, consts.K2, t, A, u_clip)
            for i in range(d):
                for j in range(i, d):
                    rows.append(_base_row("bound-sweep", model, consts, t, x_id,
                                          f"hess_ratio[{i}.{j}]/main",
                                          float(ratio[i, j]), float(se[i, j]), b_main))
                    rows.append(_base_row("bound-sweep", model, consts, t, x_id,
                                          f"hess_ratio[{i}.{j}]/clean",
                                          float(ratio[i, j]), float(se[i, j]), b_clean))
    return rows


# -- backward Harnack ------------------------------------------------------------


def run_harnack(cfg) -> list[ReportRow]:
    model = parse_model(cfg["model"])
    f = parse_functional(cfg["f"])
    if model.kind != "euclidean" or model.drift_coefficient <= 0:
        raise ConfigError("harnack suite runs on the euclidean model with positive drift")
    if f.kind != "gaussian_bump":
        raise ConfigError("harnack suite requires a gaussian_bump functional")
    sol = GaussianKernelSolution(model, f.center, f.width, f.amplitude)
    consts = model.curvature_constants()
    n_triples = cfg.get("n_triples", 50)
    t_lo, t_hi = cfg.get("time_range", [0.05, 2.0])
    x_lo, x_hi = cfg.get("x_range", [-3.0, 3.0])
    A = sol.sup
    rng = np.random.Generator(np.random.Philox(key=[cfg["seed"], 0]))
    rows = []
    for _ in range(n_triples):
        s = rng.uniform(t_lo, t_hi)
        t = s + rng.uniform(0.01, t_hi)
        x = rng.uniform(x_lo, x_hi, size=model.dimension)
        he = harnack_exponents(consts.K, consts.K1, consts.K2, model.dimension, s, t)
        lhs = math.log(sol.u_value(t, x))
        bound = he.gamma + (1.0 - he.eta) * math.log(A) + he.eta * math.log(sol.u_value(s, x))
        rows.append(_base_row("harnack", model, consts, t, -1,
                              "harnack_log_u", lhs, 0.0, bound))

    # exponent comparison grid: quadrature value vs closed-form bound
    n_grid = cfg.get("tilde_grid_size", 1000)
    ks = np.array([-2.0, -1.0, -0.3, 0.0, 0.4, 1.0, 2.5])
    k1s = np.array([0.0, 0.5, 1.5])
    dims = np.array([1, 2, 3])
    st = [(0.2, 0.5), (0.5, 1.0), (0.1, 2.0), (1.0, 1.5), (0.05, 0.4)]
    count = 0
    for K in ks:
        for K1 in k1s:
            for K2 in (0.0, 1.0):
                for dims_i in dims:
                    for (s, t) in st:
                        if count >= n_grid:
                            break
                        he = harnack_exponents(float(K), float(K1), K2, int(dims_i), s, t)
                        # quadrature slack: relative 1e-9 (gamma = gamma_tilde exactly
                        # when K1 = K2 = 0, so roundoff can fall on either side)
                        rows.append(ReportRow("harnack", "exponents", int(dims_i),
                                              float(K), float(K1), K2, t, -1,
                                              "gamma_le_tilde", he.gamma, 0.0,
                                              he.gamma_tilde * (1 + 1e-9) + 1e-12))
                        rows.append(ReportRow("harnack", "exponents", int(dims_i),
                                              float(K), float(K1), K2, t, -1,
                                              "eta_ge_tilde", he.eta_tilde, 0.0,
                                              he.eta * (1 + 1e-9) + 1e-12))
                        count += 1
    return rows


# -- eigenfunction bounds ----------------------------------------------------------


def run_eigen(cfg) -> list[ReportRow]:
    model = parse_model(cfg["model"])
    f = parse_functional(cfg["f"])
    if model.kind != "sphere" or f.kind != "sphere_linear":
        raise ConfigError("eigen suite runs on the sphere with a linear functional")
    sol = SphereEigenSolution(model, f.direction)
    n_samp = cfg.get("n_constant_samples", 2000)
    consts = brute_force_constants(model, n_samp, seed=cfg["seed"])
    lam = sol.eigenvalue
    phi_sup = f.sup(model)
    d = model.dimension

    grid = cfg.get("grid")
    if grid:
        _, points = parse_grid(grid, model)
    else:
        # default: latitudes from the direction pole toward the equator
        from .geometry import geodesic_step
        pole = model.project_point(sol.direction * model.radius)
        Fp = model.frame_at(pole)
        points = []
        for theta in np.linspace(0.0, np.pi / 2, 25):
            dv = np.zeros(d)
            dv[0] = theta * model.radius
            pt, _ = geodesic_step(model, pole, Fp, dv)
            points.append(pt)
    rows = []
    for x_id, x in enumerate(points):
        phi = float(sol.phi(x))
        if phi < 0.05 * phi_sup:
            continue
        H = sol.semigroup_hessian(0.0, x)   # Hess phi itself
        b = eigenfunction_bound(lam, lam, consts.K, consts.K1, consts.K2, phi, phi_sup)
        for i in range(d):
            for j in range(i, d):
                rows.append(_base_row("eigen", model, consts, 0.0, x_id,
                                      f"eig_point[{i}.{j}]", float(H[i, j]) / phi,
                                      0.0, b))
    hess_sup = model.curvature * phi_sup   # |Hess phi| = kappa |phi| <= kappa phi_sup
    rows.append(_base_row("eigen", model, consts, 0.0, -1, "eig_uniform",
                          hess_sup, 0.0,
                          eigenfunction_uniform_bound(lam, lam, consts.K, consts.K1,
                                                      consts.K2, phi_sup)))
    return rows


# -- scalar inequality grids --------------------------------------------------------


def run_scalar_inequalities(cfg) -> list[ReportRow]:
    n_rate = cfg.get("grid_rate_points", 100)
    n_sign = cfg.get("grid_sign_points", 2001)
    n_quad = cfg.get("grid_quadrature_points", 7)
    rows = []
    dummy = ManifoldModel("euclidean", 1)
    consts = dummy.curvature_constants()

    ks = np.linspace(-5.0, 5.0, n_rate)
    ts = np.linspace(10.0 / n_rate, 10.0, n_rate)
    for i, K in enumerate(ks):
        for j, T in enumerate(ts):
            H, G = integrals_h_g(float(K), float(T))
            rows.append(ReportRow("scalar-inequalities", "none", 0, float(K), 0.0,
                                  0.0, float(T), i * n_rate + j, "G_le_T3",
                                  G, 0.0, T / 3.0 + 1e-12))
            margin = ek_inequality_check(float(K), float(T))
            rows.append(ReportRow("scalar-inequalities", "none", 0, float(K), 0.0,
                                  0.0, float(T), i * n_rate + j, "rate_le_half_t",
                                  float(exp_rate(float(K), float(T))), 0.0,
                                  1.0 / (2.0 * float(T)) + max(float(K), 0.0) + 1e-12))
    xs = np.linspace(-10.0, 10.0, n_sign)
    g_vals = appendix_g(xs)
    scale = np.exp(2.0 * np.abs(xs))
    for idx, (x, g, sc) in enumerate(zip(xs, g_vals, scale)):
        signed = g if x >= 0 else -g     # must be <= 0 on both sides
        rows.append(ReportRow("scalar-inequalities", "none", 0, 0.0, 0.0, 0.0,
                              float(x), idx, "appendix_g_sign", float(signed), 0.0,
                              1e-12 * float(sc)))

    # closed forms vs quadrature (relative agreement to 1e-9)
    from scipy.integrate import quad
    kq = np.linspace(-4.0, 4.0, n_quad)
    tq = np.linspace(0.3, 6.0, n_quad)
    for i, K in enumerate(kq):
        for j, T in enumerate(tq):
            H, G = integrals_h_g(float(K), float(T))
            k = TestFunctionK(float(T), float(K))
            Hq, _ = quad(lambda s: math.exp(K * s) * float(k.derivative(s)) ** 2, 0, T, limit=200)
            Gq, _ = quad(lambda s: math.exp(K * s) * float(k.value(s)) ** 2, 0, T, limit=200)
            rows.append(ReportRow("scalar-inequalities", "none", 0, float(K), 0.0,
                                  0.0, float(T), i * n_quad + j, "H_vs_quadrature",
                                  abs(H - Hq) / abs(Hq), 0.0, 1e-9))
            rows.append(ReportRow("scalar-inequalities", "none", 0, float(K), 0.0,
                                  0.0, float(T), i * n_quad + j, "G_vs_quadrature",
                                  abs(G - Gq) / abs(Gq), 0.0, 1e-9))
    return rows


# -- convergence ladder ---------------------------------------------------------------


def run_convergence(cfg) -> list[ReportRow]:
    model = parse_model(cfg["model"])
    f = parse_functional(cfg["f"])
    if model.kind != "euclidean" or model.dimension != 1 or model.drift_coefficient != 0:
        raise ConfigError("convergence suite runs on the drift-free euclidean line")
    times, points = parse_grid(cfg.get("grid", {}), model)
    T = times[0]
    x = points[0]
    seed = cfg["seed"]
    n_paths = cfg["n_paths"]
    start = cfg.get("ladder_start", 4)
    n_rungs = cfg.get("ladder_points", 8)
    consts = model.curvature_constants()
    oracle = GaussianKernelSolution(model, f.center, f.width, f.amplitude)
    ref = float(oracle.semigroup_hessian(T, x)[0, 0])

    ladder = [start * 2 ** j for j in range(n_rungs)]
    n_max = ladder[-1]
    k = TestFunctionK(T, 0.0)

    sums = {n: 0.0 for n in ladder}
    sumsq = {n: 0.0 for n in ladder}
    count = 0
    for first in range(0, n_paths, engine.CHUNK):
        B = min(engine.CHUNK, n_paths - first)
        fine = engine.gaussian_block(seed, first, B, n_max).reshape(B, n_max, 1)
        for n in ladder:
            group = n_max // n
            # coarse standard normals: sum of fine normals over each group / sqrt(group)
            xi = fine.reshape(B, n, group).sum(axis=2, keepdims=False) / math.sqrt(group)
            res = engine.simulate_chunk(model, x, T, n, seed, first, B,
                                        k, increments=xi[:, :, None])
            w = f(res.endpoint) * hessian_weight(res)[:, 0, 0]
            sums[n] += float(w.sum())
            sumsq[n] += float((w * w).sum())
        count += B

    rows = []
    means = {}
    for n in ladder:
        mean = sums[n] / count
        se = math.sqrt(max(sumsq[n] / count - mean * mean, 0.0) / count)
        means[n] = mean
        rows.append(_base_row("convergence", model, consts, T, 0,
                              f"hess_abs_err[n={n}]", abs(mean - ref), se,
                              float("inf")))
    diffs = [abs(means[ladder[j]] - means[ladder[j + 1]]) for j in range(n_rungs - 1)]
    log_n = np.log2(np.array(ladder[:-1], dtype=float))
    log_d = np.log2(np.maximum(diffs, 1e-300))
    slope = float(np.polyfit(log_n, log_d, 1)[0])
    order = -slope
    for j, dv in enumerate(diffs):
        rows.append(_base_row("convergence", model, consts, T, 0,
                              f"ladder_diff[n={ladder[j]}]", dv, 0.0, float("inf")))
    rows.append(_base_row("convergence", model, consts, T, 0, "weak_order",
                          order, 0.0, float("inf")))
    rows.append(_base_row("convergence", model, consts, T, 0, "slope_deficit",
                          0.8 - order, 0.0, 0.0))
    return rows


RUNNERS = {
    "formula-gradient": run_formula_gradient,
    "formula-hessian": run_formula_hessian,
    "bound-sweep": run_bound_sweep,
    "harnack": run_harnack,
    "eigen": run_eigen,
    "scalar-inequalities": run_scalar_inequalities,
    "convergence": run_convergence,
}


def run_suite(cfg) -> list[ReportRow]:
    return RUNNERS[cfg["suite"]](cfg)
