"""Monte Carlo heat-semigroup derivative estimation on model manifolds.

Simulates manifold diffusions by geodesic random walk while accumulating the
stochastic-integral weights of the first- and second-order semigroup
derivative representations, estimates P_T f, grad P_T f and Hess P_T f by
Monte Carlo, and evaluates every closed-form gradient/Hessian/Harnack/
eigenfunction bound for verification sweeps.
"""

__version__ = "0.1.0"

from .geometry import (
    CurvatureConstants,
    ManifoldModel,
    brute_force_constants,
    geodesic_step,
    h3_tensor,
    ricci_z_matrix,
    rm_apply,
)
from .pathsim import (
    PathConfig,
    PathRecord,
    TestFunctionK,
    default_n_steps,
    integrals_h_g,
    simulate_path,
)

__all__ = [
    "__version__",
    "CurvatureConstants",
    "ManifoldModel",
    "brute_force_constants",
    "geodesic_step",
    "h3_tensor",
    "ricci_z_matrix",
    "rm_apply",
    "PathConfig",
    "PathRecord",
    "TestFunctionK",
    "default_n_steps",
    "integrals_h_g",
    "simulate_path",
]
