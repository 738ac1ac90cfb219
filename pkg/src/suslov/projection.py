"""Torus and Poisson-sphere pictures of the flow on S_k.

On S_k the pair (m1, gamma1) lies on an ellipse of invariants
m1^2 + b1 gamma1^2 = k1 and similarly for (m2, gamma2), so the state
projects to angles

    m1 = sqrt(k1) cos t1,   gamma1 = sqrt(k1/b1) sin t1,
    m2 = sqrt(k2) sin t2,   gamma2 = sqrt(k2/b2) cos t2,

with gamma3^2 = g_k(t1, t2) - eps_k.  The angle dynamics is the linear
flow t1' = sqrt(b1) gamma3, t2' = sqrt(b2) gamma3: straight lines of
slope sqrt(b2/b1) traversed while gamma3 != 0 and reversed where
g_k = eps_k.  Periodicity of an orbit is therefore decided by the
geometry of its chord on the torus: a chord meeting the fold circle
transversally at both ends gives a periodic bounce orbit, a chord whose
closure meets a tangency point is a separatrix, and when U_k is the
whole torus (eps_k < 0) the verdict reduces to rationality of the
slope.  Periods are certified by integrating the full flow to its first
Poincare return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (
    DEFAULT_TOL,
    DegenerateEllipseError,
    IntegrationBlowupError,
    InvalidInputError,
    LevelValues,
    NotInImageError,
    Params,
    PeriodNotFoundError,
    State,
    UnsupportedRegionError,
)
from .critical import find_critical_points
from .dynamics import conserved_quantities, detect_rational_ratio, vector_field
from .levelset import classify_region, g_value, gk_data, singular_message

__all__ = [
    "DpmDescription",
    "PeriodicityVerdict",
    "TorusPoint",
    "detect_periodicity",
    "dpm",
    "dpm_multiplicity",
    "flow_slope",
    "from_torus",
    "to_torus",
]


@dataclass(frozen=True)
class TorusPoint:
    """Angles on the flat torus with the sign of gamma3.

    theta1 lies in [-pi/2, 3pi/2), theta2 in [0, 2pi); gamma3_sign is
    "Plus", "Minus", or "Zero", with Zero exactly on the fold circle
    g_k = eps_k.
    """

    theta1: float
    theta2: float
    gamma3_sign: str

    def __post_init__(self) -> None:
        if self.gamma3_sign not in ("Plus", "Minus", "Zero"):
            raise InvalidInputError(f"unknown gamma3 sign {self.gamma3_sign!r}")


@dataclass(frozen=True)
class DpmDescription:
    """Shape of the domain of possible motion on the Poisson sphere."""

    shape: str
    gamma1_bound: float
    gamma2_bound: float


_SHAPE_BY_TAG = {
    "D1": "TwoSquares",
    "D2": "SphereWithFourHoles",
    "D3": "BandTheta1",
    "D4": "BandTheta2",
    "D5": "FullSphere",
}


def _require_on_surface(s: State, b: Params, k: LevelValues) -> None:
    f1, f2, norm = conserved_quantities(s, b)
    err = max(abs(f1 - k.k1), abs(f2 - k.k2), abs(norm - 1.0))
    if err > 1e-9:
        raise InvalidInputError(
            f"state is not on S_k: integral residual {err:.3e} exceeds 1e-9"
        )


def to_torus(s: State, b: Params, k: LevelValues, tol: float = DEFAULT_TOL) -> TorusPoint:
    """Angles of a state on S_k, with the gamma3 sign flag."""
    if k.k1 <= 0.0 or k.k2 <= 0.0:
        raise DegenerateEllipseError(
            f"torus angles are undefined when an ellipse degenerates: "
            f"k = ({k.k1:g}, {k.k2:g}) has a zero component"
        )
    _require_on_surface(s, b, k)
    sk1 = math.sqrt(k.k1)
    sk2 = math.sqrt(k.k2)
    theta1 = math.atan2(s.gamma1 * math.sqrt(b.b1 / k.k1), s.m1 / sk1)
    if theta1 < -math.pi / 2.0:
        theta1 += 2.0 * math.pi
    theta2 = math.atan2(s.m2 / sk2, s.gamma2 * math.sqrt(b.b2 / k.k2))
    if theta2 < 0.0:
        theta2 += 2.0 * math.pi
    data = gk_data(b, k)
    fence = tol * max(1.0, data.max_level)
    if s.gamma3 * s.gamma3 <= fence:
        sign = "Zero"
    elif s.gamma3 > 0.0:
        sign = "Plus"
    else:
        sign = "Minus"
    return TorusPoint(theta1=theta1, theta2=theta2, gamma3_sign=sign)


def from_torus(t: TorusPoint, b: Params, k: LevelValues, tol: float = DEFAULT_TOL) -> State:
    """State on S_k over a torus point; inverse of to_torus on U_k."""
    if k.k1 <= 0.0 or k.k2 <= 0.0:
        raise DegenerateEllipseError(
            f"torus angles are undefined when an ellipse degenerates: "
            f"k = ({k.k1:g}, {k.k2:g}) has a zero component"
        )
    data = gk_data(b, k)
    fence = tol * max(1.0, data.max_level)
    height = g_value(t.theta1, t.theta2, b, k) - data.eps
    if height < -fence:
        raise NotInImageError(
            f"torus point ({t.theta1:g}, {t.theta2:g}) lies outside the "
            f"closure of U_k: g - eps = {height:.3e}"
        )
    if t.gamma3_sign == "Zero":
        gamma3 = 0.0
    else:
        root = math.sqrt(max(height, 0.0))
        gamma3 = root if t.gamma3_sign == "Plus" else -root
    return State(
        m1=math.sqrt(k.k1) * math.cos(t.theta1),
        m2=math.sqrt(k.k2) * math.sin(t.theta2),
        gamma1=math.sqrt(k.k1 / b.b1) * math.sin(t.theta1),
        gamma2=math.sqrt(k.k2 / b.b2) * math.cos(t.theta2),
        gamma3=gamma3,
    )


def flow_slope(b: Params) -> float:
    """dtheta2/dtheta1 = sqrt(b2/b1) wherever gamma3 != 0."""
    return math.sqrt(b.b2 / b.b1)


def dpm(b: Params, k: LevelValues, tol: float = DEFAULT_TOL) -> DpmDescription:
    """Domain of possible motion on the Poisson sphere.

    The projection of S_k to gamma-space is the part of the unit sphere
    with |gamma1| <= sqrt(k1/b1) and |gamma2| <= sqrt(k2/b2); its shape
    is determined by the region of k.
    """
    region = classify_region(b, k, tol)
    if region.is_singular:
        raise UnsupportedRegionError(singular_message(region.singular_cause, b, k))
    return DpmDescription(
        shape=_SHAPE_BY_TAG[region.tag],
        gamma1_bound=min(math.sqrt(k.k1 / b.b1), 1.0),
        gamma2_bound=min(math.sqrt(k.k2 / b.b2), 1.0),
    )


def dpm_multiplicity(
    gamma: np.ndarray, b: Params, k: LevelValues, tol: float = DEFAULT_TOL
) -> int:
    """Number of states of S_k over a point of the Poisson sphere.

    Counts solutions of m1^2 = k1 - b1 gamma1^2, m2^2 = k2 - b2 gamma2^2:
    4 over the interior of the domain of possible motion, 2 over an edge
    (one m vanishes), 1 over a corner (both vanish), 0 outside.
    """
    g = np.asarray(gamma, dtype=float)
    if g.shape != (3,):
        raise InvalidInputError(f"gamma must be a 3-vector, got shape {g.shape}")
    norm = float(g[0] * g[0] + g[1] * g[1] + g[2] * g[2])
    if abs(norm - 1.0) > 1e-9:
        raise InvalidInputError(f"gamma must lie on the unit sphere: |gamma|^2 = {norm!r}")
    counts = []
    for r, scale in (
        (k.k1 - b.b1 * float(g[0]) ** 2, max(1.0, k.k1)),
        (k.k2 - b.b2 * float(g[1]) ** 2, max(1.0, k.k2)),
    ):
        fence = tol * scale
        if r > fence:
            counts.append(2)
        elif r >= -fence:
            counts.append(1)
        else:
            return 0
    return counts[0] * counts[1]


@dataclass(frozen=True)
class PeriodicityVerdict:
    """Outcome of orbit classification through the torus chord picture.

    kind is "Periodic", "ConnectsCritical", "QuasiPeriodic", or
    "Equilibrium".  For Periodic verdicts, period is the first-return
    time, residual the phase-space distance at that return, and winding
    the net (theta1, theta2) turns per period ((0, 0) for bounce
    orbits).
    """

    kind: str
    period: float | None = None
    winding: tuple[int, int] | None = None
    residual: float | None = None

    def __post_init__(self) -> None:
        kinds = ("Periodic", "ConnectsCritical", "QuasiPeriodic", "Equilibrium")
        if self.kind not in kinds:
            raise InvalidInputError(f"unknown verdict kind {self.kind!r}")


_TANGENCY_FENCE = 1e-8


def _height(u: float, base1: float, base2: float, slope: float, b: Params, k: LevelValues) -> float:
    return g_value(base1 + u, base2 + slope * u, b, k) - (
        k.k1 / b.b1 + k.k2 / b.b2 - 1.0
    )


def _height_batch(
    u: np.ndarray, base1: float, base2: float, slope: float, b: Params, k: LevelValues
) -> np.ndarray:
    t1 = base1 + u
    t2 = base2 + slope * u
    g = (k.k1 / b.b1) * np.cos(t1) ** 2 + (k.k2 / b.b2) * np.sin(t2) ** 2
    return g - (k.k1 / b.b1 + k.k2 / b.b2 - 1.0)


def _bisect_ray(
    u_lo: float,
    u_hi: float,
    direction: float,
    base1: float,
    base2: float,
    slope: float,
    b: Params,
    k: LevelValues,
) -> float:
    # h(direction u_lo) > 0 >= h(direction u_hi); refine u to 1e-12.
    while u_hi - u_lo > 1e-12:
        mid = 0.5 * (u_lo + u_hi)
        if _height(direction * mid, base1, base2, slope, b, k) > 0.0:
            u_lo = mid
        else:
            u_hi = mid
    return 0.5 * (u_lo + u_hi)


def _first_boundary_hit(
    direction: float,
    base1: float,
    base2: float,
    slope: float,
    b: Params,
    k: LevelValues,
    u_cap: float,
) -> float | None:
    """Distance along the ray to the first g = eps crossing, or None.

    Assumes the ray starts strictly inside U_k (h(0) > 0); marches in
    fixed angular steps and bisects the first bracketed sign change.
    """
    du = 1.5e-3 / math.hypot(1.0, slope)
    chunk = 4096
    lo = 0.0
    while lo < u_cap:
        count = min(chunk, max(1, int(math.ceil((u_cap - lo) / du))))
        u_vals = lo + (1.0 + np.arange(count)) * du
        h = _height_batch(direction * u_vals, base1, base2, slope, b, k)
        neg = np.flatnonzero(h <= 0.0)
        if neg.size:
            i = int(neg[0])
            u_lo = float(u_vals[i - 1]) if i > 0 else lo
            return _bisect_ray(u_lo, float(u_vals[i]), direction, base1, base2, slope, b, k)
        lo = float(u_vals[-1])
    return None


def _segment_tangency_distance(
    targets: list[tuple[float, float]],
    base1: float,
    base2: float,
    slope: float,
    u_lo: float,
    u_hi: float,
) -> float:
    """Min distance from the chord segment to any target, 2pi-periodically.

    The segment lives in the universal cover; each target is compared
    against its lattice translate nearest to each sampled chord point,
    then the exact point-to-segment distance is taken.
    """
    if not targets:
        return math.inf
    two_pi = 2.0 * math.pi
    n = max(64, int((u_hi - u_lo) / 0.01) + 2)
    us = np.linspace(u_lo, u_hi, n)
    x1 = base1 + us
    x2 = base2 + slope * us
    denom = 1.0 + slope * slope
    best = math.inf
    for t1, t2 in targets:
        c1 = t1 + two_pi * np.round((x1 - t1) / two_pi)
        c2 = t2 + two_pi * np.round((x2 - t2) / two_pi)
        u_star = np.clip(((c1 - base1) + slope * (c2 - base2)) / denom, u_lo, u_hi)
        e1 = base1 + u_star - c1
        e2 = base2 + slope * u_star - c2
        best = min(best, float(np.min(np.hypot(e1, e2))))
    return best


def _winding_time(
    base1: float, base2: float, slope: float, b: Params, k: LevelValues, p: int
) -> float:
    # T = int du / (sqrt(b1) sqrt(g - eps)) over one closed loop of
    # theta1-extent 2 pi p; the integrand is smooth since the loop stays
    # inside U_k.
    n = 4096 * min(p, 8)
    span = 2.0 * math.pi * p
    u = (np.arange(n) + 0.5) * (span / n)
    h = np.maximum(_height_batch(u, base1, base2, slope, b, k), 1e-30)
    return float(np.sum((span / n) / (math.sqrt(b.b1) * np.sqrt(h))))


def _bounce_time(
    base1: float,
    base2: float,
    slope: float,
    u_lo: float,
    u_hi: float,
    b: Params,
    k: LevelValues,
) -> float:
    # Full period = out and back: 2 int du / (sqrt(b1) sqrt(g - eps)).
    # The substitution u = mid - (L/2) cos v absorbs the inverse-sqrt
    # endpoint singularities of transversal fold hits.
    length = u_hi - u_lo
    mid = 0.5 * (u_lo + u_hi)
    n = 2048
    v = (np.arange(n) + 0.5) * (math.pi / n)
    u = mid - 0.5 * length * np.cos(v)
    h = np.maximum(_height_batch(u, base1, base2, slope, b, k), 1e-30)
    dt = (0.5 * length * np.sin(v)) * (math.pi / n) / (math.sqrt(b.b1) * np.sqrt(h))
    return 2.0 * float(np.sum(dt))


def _certified_period(
    s0: State, b: Params, step: float, t_max: float
) -> tuple[float, float]:
    """First Poincare return of the full flow: (period, residual)."""
    y0 = s0.as_array()
    x0 = vector_field(s0, b)
    normal = x0 / np.linalg.norm(x0)
    max_steps = int(math.ceil(t_max / step))
    t_ret, res, found, _, blown = _kernels.first_return(
        y0, b.b1, b.b2, step, max_steps, normal, 5, 1e-6
    )
    if blown:
        raise IntegrationBlowupError(
            "trajectory blew up while searching for the first return",
            last_valid_time=float(t_ret),
        )
    if not found:
        raise PeriodNotFoundError(
            f"no first return with residual <= 1e-6 within t = {t_max:g} "
            f"at step {step:g}"
        )
    return float(t_ret), float(res)


def detect_periodicity(
    s0: State,
    b: Params,
    k: LevelValues,
    tol: float = DEFAULT_TOL,
    step: float = 1e-3,
) -> PeriodicityVerdict:
    """Classify the orbit of s0 as periodic, separatrix, or quasiperiodic.

    Equilibria are reported directly.  Otherwise the orbit's chord in
    torus angles is traced exactly (bracketing and bisection of
    g = eps along the line): two transversal fold hits give a periodic
    bounce orbit; a chord whose closure passes within 1e-8 of a tangency
    point connects critical points; when the fold is empty (eps < 0) the
    orbit winds, periodic precisely when sqrt(b1/b2) is rational.
    Periods are certified by a first-return integration of the full
    flow.
    """
    region = classify_region(b, k, tol)
    if region.is_singular:
        raise UnsupportedRegionError(singular_message(region.singular_cause, b, k))
    _require_on_surface(s0, b, k)
    if float(np.linalg.norm(vector_field(s0, b))) <= 1e-12:
        return PeriodicityVerdict(kind="Equilibrium")

    data = gk_data(b, k)
    slope = flow_slope(b)
    ratio = detect_rational_ratio(b)
    t0 = to_torus(s0, b, k, tol)
    base1, base2 = t0.theta1, t0.theta2

    if data.eps < 0.0:
        if ratio is None:
            return PeriodicityVerdict(kind="QuasiPeriodic")
        t_est = _winding_time(base1, base2, slope, b, k, ratio.p)
        period, residual = _certified_period(s0, b, step, max(3.0 * t_est, 100.0))
        return PeriodicityVerdict(
            kind="Periodic",
            period=period,
            winding=(ratio.p, ratio.q),
            residual=residual,
        )

    fence = tol * max(1.0, data.max_level)
    u_cap = 2.0 * math.pi * ratio.p if ratio is not None else 64.0 * math.pi
    h0 = _height(0.0, base1, base2, slope, b, k)
    if h0 <= fence:
        # Fold start: u = 0 is one chord endpoint; march into the interior.
        probe = 1e-6
        h_plus = _height(probe, base1, base2, slope, b, k)
        h_minus = _height(-probe, base1, base2, slope, b, k)
        if h_plus <= fence and h_minus <= fence:
            # Both sides leave U_k: s0 sits at a tangency of the fold.
            return PeriodicityVerdict(kind="ConnectsCritical")
        direction = 1.0 if h_plus > h_minus else -1.0
        dist = _first_boundary_hit(direction, base1, base2, slope, b, k, u_cap)
        if dist is None:
            raise PeriodNotFoundError(
                f"no second fold crossing within chord length {u_cap:g}"
            )
        u_lo, u_hi = sorted((0.0, direction * dist))
    else:
        d_plus = _first_boundary_hit(1.0, base1, base2, slope, b, k, u_cap)
        d_minus = _first_boundary_hit(-1.0, base1, base2, slope, b, k, u_cap)
        if d_plus is None and d_minus is None:
            if ratio is None:
                raise PeriodNotFoundError(
                    f"chord did not reach the fold within length {u_cap:g} "
                    f"and the slope is not a detected rational"
                )
            # Rational slope and a full closed loop inside U_k: a winding
            # periodic orbit that never bounces.
            t_est = _winding_time(base1, base2, slope, b, k, ratio.p)
            period, residual = _certified_period(s0, b, step, max(3.0 * t_est, 100.0))
            return PeriodicityVerdict(
                kind="Periodic",
                period=period,
                winding=(ratio.p, ratio.q),
                residual=residual,
            )
        if d_plus is None or d_minus is None:
            raise PeriodNotFoundError(
                f"only one fold crossing found within chord length {u_cap:g}"
            )
        u_lo, u_hi = -d_minus, d_plus

    tangencies = [
        (tp.theta1, tp.theta2)
        for tp in (
            to_torus(p.state, b, k, tol) for p in find_critical_points(b, k, tol)
        )
    ]
    if (
        _segment_tangency_distance(tangencies, base1, base2, slope, u_lo, u_hi)
        <= _TANGENCY_FENCE
    ):
        return PeriodicityVerdict(kind="ConnectsCritical")

    t_est = _bounce_time(base1, base2, slope, u_lo, u_hi, b, k)
    period, residual = _certified_period(s0, b, step, max(3.0 * t_est, 100.0))
    return PeriodicityVerdict(
        kind="Periodic", period=period, winding=(0, 0), residual=residual
    )
