"""Benchmark the compiled kernel against the numpy engine.

Run as ``python -m bismut.benchmark [--n-paths N] [--n-steps M]``.  Reports
paths/second for each backend on the same workloads and the largest
discrepancy between their accumulator outputs (which should be at the level
of floating-point noise).
"""

import argparse
import time

import numpy as np

from . import engine
from .geometry import ManifoldModel
from .pathsim import TestFunctionK

WORKLOADS = [
    ("euclidean d=1", ManifoldModel("euclidean", 1), 1.0),
    ("euclidean-ou d=2", ManifoldModel("euclidean", 2, drift_coefficient=1.0), 1.0),
    ("sphere d=2", ManifoldModel("sphere", 2, curvature=1.0), 1.0),
    ("hyperbolic d=3", ManifoldModel("hyperbolic", 3, curvature=-1.0), 0.5),
]

FIELDS = ("endpoint", "q_scalar", "grad_integrals", "nested_integrals",
          "wk_outer_integrals", "grad_qv", "q_bound_violation")


def _run(model, T, n_steps, n_paths, backend):
    k = TestFunctionK(T, -model.ricci_rate)
    x0 = model.base_point()
    t0 = time.perf_counter()
    out = None
    for first in range(0, n_paths, engine.CHUNK):
        res = engine.simulate_chunk(model, x0, T, n_steps, 2024, first,
                                    min(engine.CHUNK, n_paths - first), k,
                                    backend=backend)
        if out is None:
            out = res
    return time.perf_counter() - t0, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n-paths", type=int, default=4096)
    ap.add_argument("--n-steps", type=int, default=200)
    args = ap.parse_args(argv)

    backends = engine.available_backends()
    print(f"available backends: {', '.join(backends)}   "
          f"(selected at import: {engine.BACKEND})")
    print(f"workload: {args.n_paths} paths x {args.n_steps} steps\n")
    hdr = f"{'workload':<20}" + "".join(f"{b + ' paths/s':>18}" for b in backends)
    if len(backends) == 2:
        hdr += f"{'speedup':>10}{'max |diff|':>13}"
    print(hdr)
    for name, model, T in WORKLOADS:
        rates = {}
        first_res = {}
        for b in backends:
            dt, res = _run(model, T, args.n_steps, args.n_paths, b)
            rates[b] = args.n_paths / dt
            first_res[b] = res
        line = f"{name:<20}" + "".join(f"{rates[b]:>18.0f}" for b in backends)
        if len(backends) == 2:
            diff = max(float(np.max(np.abs(getattr(first_res["cython"], f)
                                           - getattr(first_res["numpy"], f))))
                       for f in FIELDS)
            line += f"{rates['cython'] / rates['numpy']:>10.1f}{diff:>13.2e}"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
