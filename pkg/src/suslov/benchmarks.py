"""Timing comparison of the jit-compiled and pure-Python kernels.

Run as a module:

    python3 -m suslov.benchmarks [--steps N] [--repeats R]

Both backends execute the same scalar RK4 arithmetic; the jit path is
typically two orders of magnitude faster, which is why the trajectory
and first-return loops live in _kernels rather than in numpy batch
code (the step-to-step dependency defeats vectorization).
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import _kernels

__all__ = ["main", "run_benchmark"]

# a generic state on S_k for b = (4, 1), k = (1, 0.5): torus angles
# (0.7, 1.3) with positive gamma3
_B1 = 4.0
_B2 = 1.0
_K1 = 1.0
_K2 = 0.5


def _probe_state() -> np.ndarray:
    t1, t2 = 0.7, 1.3
    m1 = math.sqrt(_K1) * math.cos(t1)
    g1 = math.sqrt(_K1 / _B1) * math.sin(t1)
    m2 = math.sqrt(_K2) * math.sin(t2)
    g2 = math.sqrt(_K2 / _B2) * math.cos(t2)
    g3 = math.sqrt(1.0 - g1 * g1 - g2 * g2)
    return np.array([m1, m2, g1, g2, g3], dtype=np.float64)


def _best_of(fn, args: tuple, repeats: int) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmark(n_steps: int = 200_000, repeats: int = 3) -> list[dict]:
    """Time rk4_drift and first_return on each available backend.

    Returns one record per backend with steps-per-second figures; the
    first_return probe uses an unreachable residual so the full step
    budget is always exercised.
    """
    y0 = _probe_state()
    normal = np.array([0.0, 0.0, 0.0, 0.0, 1.0], dtype=np.float64)
    variants: list[tuple[str, object, object]] = [
        ("numpy", _kernels.rk4_drift_python, _kernels.first_return_python)
    ]
    if _kernels.rk4_drift_numba is not None:
        variants.append(
            ("numba", _kernels.rk4_drift_numba, _kernels.first_return_numba)
        )
    results = []
    for name, drift, first_ret in variants:
        drift_args = (y0, _B1, _B2, 1e-3, n_steps, n_steps)
        ret_args = (y0, _B1, _B2, 1e-3, n_steps, normal, 5, -1.0)
        drift(y0, _B1, _B2, 1e-3, 64, 64)
        first_ret(y0, _B1, _B2, 1e-3, 64, normal, 5, -1.0)
        t_drift = _best_of(drift, drift_args, repeats)
        t_ret = _best_of(first_ret, ret_args, repeats)
        results.append(
            {
                "backend": name,
                "n_steps": n_steps,
                "rk4_drift_s": t_drift,
                "rk4_drift_steps_per_s": n_steps / t_drift,
                "first_return_s": t_ret,
                "first_return_steps_per_s": n_steps / t_ret,
            }
        )
    return results


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)
    results = run_benchmark(n_steps=args.steps, repeats=args.repeats)
    print(f"active backend: {_kernels.backend_name()}")
    print(f"{'backend':>8} {'rk4 drift':>14} {'first return':>14}   (steps/s)")
    for r in results:
        print(
            f"{r['backend']:>8} {r['rk4_drift_steps_per_s']:>14.3e} "
            f"{r['first_return_steps_per_s']:>14.3e}"
        )
    if len(results) == 2:
        ratio = results[1]["rk4_drift_steps_per_s"] / results[0]["rk4_drift_steps_per_s"]
        print(f"numba speedup on rk4_drift: {ratio:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
