"""Hot integration kernels with a numba backend and a pure-numpy fallback.

The classical RK4 loop dominates every workload in this package (trajectory
generation, drift monitoring, first-return detection), so it is written once
as plain scalar code and compiled with numba.njit when available.  Setting
the environment variable SUSLOV_BACKEND to "numpy" (or "numba") forces a
backend; the default is numba when importable, numpy otherwise.  Both paths
execute the identical arithmetic in the identical order, so results agree
bitwise, which the test suite asserts and the benchmark module exploits.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BLOWUP_LIMIT",
    "backend_name",
    "first_return",
    "first_return_numba",
    "first_return_python",
    "rk4_drift",
    "rk4_drift_numba",
    "rk4_drift_python",
]

_ENV_VAR = "SUSLOV_BACKEND"
BLOWUP_LIMIT = 1e10


def _rk4_step(m1, m2, g1, g2, g3, b1, b2, h):
    # One classical RK4 step of the reduced flow
    #   m1' = -b1 g1 g3, m2' = b2 g2 g3, g1' = m1 g3, g2' = -m2 g3,
    #   g3' = g2 m2 - g1 m1
    a1 = -b1 * g1 * g3
    a2 = b2 * g2 * g3
    a3 = m1 * g3
    a4 = -m2 * g3
    a5 = g2 * m2 - g1 * m1

    u1 = m1 + 0.5 * h * a1
    u2 = m2 + 0.5 * h * a2
    u3 = g1 + 0.5 * h * a3
    u4 = g2 + 0.5 * h * a4
    u5 = g3 + 0.5 * h * a5
    b1_ = -b1 * u3 * u5
    b2_ = b2 * u4 * u5
    b3_ = u1 * u5
    b4_ = -u2 * u5
    b5_ = u4 * u2 - u3 * u1

    u1 = m1 + 0.5 * h * b1_
    u2 = m2 + 0.5 * h * b2_
    u3 = g1 + 0.5 * h * b3_
    u4 = g2 + 0.5 * h * b4_
    u5 = g3 + 0.5 * h * b5_
    c1 = -b1 * u3 * u5
    c2 = b2 * u4 * u5
    c3 = u1 * u5
    c4 = -u2 * u5
    c5 = u4 * u2 - u3 * u1

    u1 = m1 + h * c1
    u2 = m2 + h * c2
    u3 = g1 + h * c3
    u4 = g2 + h * c4
    u5 = g3 + h * c5
    d1 = -b1 * u3 * u5
    d2 = b2 * u4 * u5
    d3 = u1 * u5
    d4 = -u2 * u5
    d5 = u4 * u2 - u3 * u1

    s = h / 6.0
    return (
        m1 + s * (a1 + 2.0 * b1_ + 2.0 * c1 + d1),
        m2 + s * (a2 + 2.0 * b2_ + 2.0 * c2 + d2),
        g1 + s * (a3 + 2.0 * b3_ + 2.0 * c3 + d3),
        g2 + s * (a4 + 2.0 * b4_ + 2.0 * c4 + d4),
        g3 + s * (a5 + 2.0 * b5_ + 2.0 * c5 + d5),
    )


def _make_rk4_drift(step):
    def rk4_drift(y0, b1, b2, h, n_steps, record_every):
        """Fixed-step RK4 with per-step conservation monitoring.

        Returns (samples, sample_steps, f1_drift, f2_drift, norm_drift,
        steps_done, blown).  samples[i] is the state after sample_steps[i]
        steps; row 0 is the initial state.  Drift values are running maxima
        of |f - f(0)| checked after every step, not just recorded ones.
        blown is True when a coordinate left the guard box, in which case
        the arrays are truncated at the last valid state.
        """
        tail = 1 if n_steps % record_every != 0 else 0
        n_rec = 1 + n_steps // record_every + tail
        out = np.empty((n_rec, 5), dtype=np.float64)
        rec_steps = np.empty(n_rec, dtype=np.int64)

        m1 = y0[0]
        m2 = y0[1]
        g1 = y0[2]
        g2 = y0[3]
        g3 = y0[4]
        f1_0 = m1 * m1 + b1 * g1 * g1
        f2_0 = m2 * m2 + b2 * g2 * g2
        n_0 = g1 * g1 + g2 * g2 + g3 * g3

        out[0, 0] = m1
        out[0, 1] = m2
        out[0, 2] = g1
        out[0, 3] = g2
        out[0, 4] = g3
        rec_steps[0] = 0
        filled = 1

        f1_drift = 0.0
        f2_drift = 0.0
        norm_drift = 0.0
        steps_done = 0
        blown = False
        for i in range(1, n_steps + 1):
            m1, m2, g1, g2, g3 = step(m1, m2, g1, g2, g3, b1, b2, h)
            if (
                abs(m1) > BLOWUP_LIMIT
                or abs(m2) > BLOWUP_LIMIT
                or abs(g1) > BLOWUP_LIMIT
                or abs(g2) > BLOWUP_LIMIT
                or abs(g3) > BLOWUP_LIMIT
            ):
                blown = True
                break
            steps_done = i
            e1 = abs(m1 * m1 + b1 * g1 * g1 - f1_0)
            e2 = abs(m2 * m2 + b2 * g2 * g2 - f2_0)
            e3 = abs(g1 * g1 + g2 * g2 + g3 * g3 - n_0)
            if e1 > f1_drift:
                f1_drift = e1
            if e2 > f2_drift:
                f2_drift = e2
            if e3 > norm_drift:
                norm_drift = e3
            if i % record_every == 0 or i == n_steps:
                out[filled, 0] = m1
                out[filled, 1] = m2
                out[filled, 2] = g1
                out[filled, 3] = g2
                out[filled, 4] = g3
                rec_steps[filled] = i
                filled += 1
        return (
            out[:filled],
            rec_steps[:filled],
            f1_drift,
            f2_drift,
            norm_drift,
            steps_done,
            blown,
        )

    return rk4_drift


def _make_first_return(step):
    def first_return(y0, b1, b2, h, max_steps, normal, min_steps, accept_res):
        """Integrate until the orbit recrosses the section through y0.

        The section is the hyperplane through y0 with the given normal
        (the flow direction at y0).  Crossings from the negative to the
        nonnegative side are refined by bisection on the final substep;
        the first crossing whose refined state lies within accept_res of
        y0 is returned as (t, residual, found, y_end, blown).
        """
        m1 = y0[0]
        m2 = y0[1]
        g1 = y0[2]
        g2 = y0[3]
        g3 = y0[4]
        h_prev = 0.0
        found = False
        blown = False
        t_ret = 0.0
        res_ret = np.inf
        y_end = np.empty(5, dtype=np.float64)
        for i in range(1, max_steps + 1):
            p1 = m1
            p2 = m2
            p3 = g1
            p4 = g2
            p5 = g3
            m1, m2, g1, g2, g3 = step(m1, m2, g1, g2, g3, b1, b2, h)
            if (
                abs(m1) > BLOWUP_LIMIT
                or abs(m2) > BLOWUP_LIMIT
                or abs(g1) > BLOWUP_LIMIT
                or abs(g2) > BLOWUP_LIMIT
                or abs(g3) > BLOWUP_LIMIT
            ):
                blown = True
                t_ret = (i - 1) * h
                break
            h_val = (
                (m1 - y0[0]) * normal[0]
                + (m2 - y0[1]) * normal[1]
                + (g1 - y0[2]) * normal[2]
                + (g2 - y0[3]) * normal[3]
                + (g3 - y0[4]) * normal[4]
            )
            if i > min_steps and h_prev < 0.0 and h_val >= 0.0:
                # Bisect the substep fraction for the exact section hit.
                lo = 0.0
                hi = 1.0
                q1 = m1
                q2 = m2
                q3 = g1
                q4 = g2
                q5 = g3
                for _ in range(64):
                    mid = 0.5 * (lo + hi)
                    q1, q2, q3, q4, q5 = step(p1, p2, p3, p4, p5, b1, b2, mid * h)
                    h_mid = (
                        (q1 - y0[0]) * normal[0]
                        + (q2 - y0[1]) * normal[1]
                        + (q3 - y0[2]) * normal[2]
                        + (q4 - y0[3]) * normal[3]
                        + (q5 - y0[4]) * normal[4]
                    )
                    if h_mid < 0.0:
                        lo = mid
                    else:
                        hi = mid
                frac = 0.5 * (lo + hi)
                q1, q2, q3, q4, q5 = step(p1, p2, p3, p4, p5, b1, b2, frac * h)
                dr = (
                    (q1 - y0[0]) ** 2
                    + (q2 - y0[1]) ** 2
                    + (q3 - y0[2]) ** 2
                    + (q4 - y0[3]) ** 2
                    + (q5 - y0[4]) ** 2
                ) ** 0.5
                if dr <= accept_res:
                    t_ret = (i - 1) * h + frac * h
                    res_ret = dr
                    y_end[0] = q1
                    y_end[1] = q2
                    y_end[2] = q3
                    y_end[3] = q4
                    y_end[4] = q5
                    found = True
                    break
            h_prev = h_val
        if not found:
            y_end[0] = m1
            y_end[1] = m2
            y_end[2] = g1
            y_end[3] = g2
            y_end[4] = g3
        return t_ret, res_ret, found, y_end, blown

    return first_return


def _resolve_backend() -> str:
    requested = os.environ.get(_ENV_VAR, "").strip().lower()
    if requested and requested not in ("numba", "numpy"):
        raise ValueError(
            f"{_ENV_VAR} must be 'numba' or 'numpy', got {requested!r}"
        )
    if requested == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if requested == "numba":
            raise ImportError(
                f"{_ENV_VAR}=numba was requested but numba is not installed"
            ) from None
        return "numpy"
    return "numba"


_BACKEND = _resolve_backend()

# Plain variants are always available; they are the numpy-backend path.
rk4_drift_python = _make_rk4_drift(_rk4_step)
first_return_python = _make_first_return(_rk4_step)

rk4_drift_numba = None
first_return_numba = None
if _BACKEND == "numba":
    from numba import njit

    _step_jit = njit(_rk4_step)
    rk4_drift_numba = njit(_make_rk4_drift(_step_jit))
    first_return_numba = njit(_make_first_return(_step_jit))
    rk4_drift = rk4_drift_numba
    first_return = first_return_numba
else:
    rk4_drift = rk4_drift_python
    first_return = first_return_python


def backend_name() -> str:
    """The backend selected at import time ('numba' or 'numpy')."""
    return _BACKEND
