"""The Suslov vector field, its conserved quantities, and the integrator.

The flow on R^5 is

    m1' = -b1 g1 g3,  m2' = b2 g2 g3,
    g1' = m1 g3,      g2' = -m2 g3,     g3' = g2 m2 - g1 m1

with integrals f1 = m1^2 + b1 g1^2, f2 = m2^2 + b2 g2^2 and the Poisson
sphere |gamma| = 1.  When sqrt(b1/b2) is rational p/q there is an extra
polynomial integral, the real and imaginary parts of

    W = (m1 + i sqrt(b1) g1)^q * (sqrt(b2) g2 - i m2)^p.

Integration is fixed-step RK4 with no constraint projection; conservation
is monitored, never enforced, so drift reports are an honest witness of
integrator quality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .core import (
    IntegrationBlowupError,
    InvalidInputError,
    Params,
    State,
)

__all__ = [
    "DriftReport",
    "ExtraIntegral",
    "Trajectory",
    "conserved_quantities",
    "detect_rational_ratio",
    "extra_integral_value",
    "integrate",
    "vector_field",
]


def vector_field(s: State, b: Params) -> np.ndarray:
    """Right-hand side of the reduced flow, ordered (m1, m2, g1, g2, g3)."""
    return np.array(
        [
            -b.b1 * s.gamma1 * s.gamma3,
            b.b2 * s.gamma2 * s.gamma3,
            s.m1 * s.gamma3,
            -s.m2 * s.gamma3,
            s.gamma2 * s.m2 - s.gamma1 * s.m1,
        ],
        dtype=float,
    )


def conserved_quantities(s: State, b: Params) -> tuple[float, float, float]:
    """(f1, f2, |gamma|^2) at the given state."""
    f1 = s.m1**2 + b.b1 * s.gamma1**2
    f2 = s.m2**2 + b.b2 * s.gamma2**2
    norm = s.gamma1**2 + s.gamma2**2 + s.gamma3**2
    return f1, f2, norm


@dataclass(frozen=True)
class ExtraIntegral:
    """Certificate that sqrt(b1/b2) = p/q in lowest terms."""

    p: int
    q: int
    kind: str = "ComplexPower"

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            raise InvalidInputError(f"p and q must be positive, got ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise InvalidInputError(f"p/q must be in lowest terms, got ({self.p}, {self.q})")
        if self.kind != "ComplexPower":
            raise InvalidInputError(f"unknown extra-integral kind {self.kind!r}")


def detect_rational_ratio(b: Params, max_den: int = 10_000) -> ExtraIntegral | None:
    """Detect sqrt(b1/b2) = p/q with q <= max_den, else None.

    The continued-fraction expansion of the computed float runs in exact
    rational arithmetic.  A convergent is accepted once the remaining error
    sits at the floating-point noise floor of the input (a few ulps), which
    is the only sense in which the expansion of a float can be said to
    terminate.  The generic irrational case, e.g. b = (2, 1), keeps strict
    convergent errors far above that floor for every denominator below any
    practical bound and comes back empty.
    """
    if max_den < 1:
        raise InvalidInputError(f"max_den must be >= 1, got {max_den}")
    x = math.sqrt(b.b1 / b.b2)
    noise = Fraction(4.0 * np.finfo(float).eps * x)
    target = Fraction(x)

    # Convergents p_i/q_i of the exact continued fraction of the float.
    p_prev, q_prev = 1, 0
    p_cur, q_cur = int(math.floor(x)), 1
    rest = target - int(math.floor(x))
    while True:
        if q_cur > max_den:
            return None
        if p_cur > 0 and abs(target - Fraction(p_cur, q_cur)) <= noise:
            approx = p_cur / q_cur
            if abs(x - approx) <= 1e-10 * approx:
                return ExtraIntegral(p=p_cur, q=q_cur)
            return None
        if rest == 0:
            return None
        rest = 1 / rest
        a = int(rest)
        rest -= a
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur


def extra_integral_value(s: State, b: Params, e: ExtraIntegral) -> tuple[float, float]:
    """(re, im) of W = (m1 + i sqrt(b1) g1)^q (sqrt(b2) g2 - i m2)^p.

    For p = q = 1 and b1 = b2 = b this reduces to
    im(W) = b g1 g2 - m1 m2, the negative of the classical cubic-case
    integral m1 m2 - b g1 g2.
    """
    w = (s.m1 + 1j * math.sqrt(b.b1) * s.gamma1) ** e.q
    w *= (math.sqrt(b.b2) * s.gamma2 - 1j * s.m2) ** e.p
    return w.real, w.imag


@dataclass(frozen=True)
class DriftReport:
    """Max absolute drift of f1, f2 and |gamma|^2 - 1 over a run."""

    f1: float
    f2: float
    norm: float


@dataclass(frozen=True)
class Trajectory:
    """RK4 trajectory samples plus the conservation drift report.

    states_array has one row per sample in the order
    (m1, m2, gamma1, gamma2, gamma3); times matches rows.  The states
    property materializes State objects on demand.
    """

    times: np.ndarray
    states_array: np.ndarray
    drift_report: DriftReport

    @property
    def states(self) -> list[State]:
        return [State.from_array(row) for row in self.states_array]

    def __len__(self) -> int:
        return len(self.times)


def integrate(
    s0: State,
    b: Params,
    step: float = 1e-3,
    t_end: float = 100.0,
    record_every: int = 1,
) -> Trajectory:
    """Classical fixed-step RK4 from s0 with drift monitoring.

    No renormalization or projection is applied.  record_every thins the
    stored samples (drift is still monitored at every step).  Raises
    IntegrationBlowupError when a coordinate exceeds the guard box.
    """
    if step <= 0.0:
        raise InvalidInputError(f"step must be > 0, got {step!r}")
    if t_end <= 0.0:
        raise InvalidInputError(f"t_end must be > 0, got {t_end!r}")
    if record_every < 1:
        raise InvalidInputError(f"record_every must be >= 1, got {record_every}")
    if not s0.on_sphere():
        raise InvalidInputError(
            f"initial state must lie on the Poisson sphere to 1e-9, "
            f"|gamma|^2 - 1 = {s0.sphere_error():.3e}"
        )
    y0 = s0.as_array()
    if np.any(np.abs(y0) > _kernels.BLOWUP_LIMIT):
        raise IntegrationBlowupError(
            f"initial coordinate exceeds the blowup guard {_kernels.BLOWUP_LIMIT:g}",
            last_valid_time=0.0,
        )
    n_steps = int(round(t_end / step))
    if n_steps < 1:
        raise InvalidInputError(
            f"t_end={t_end!r} is below one step of size {step!r}"
        )
    samples, sample_steps, f1d, f2d, nd, steps_done, blown = _kernels.rk4_drift(
        y0, b.b1, b.b2, step, n_steps, record_every
    )
    if blown:
        raise IntegrationBlowupError(
            f"coordinate left the guard box |x| <= {_kernels.BLOWUP_LIMIT:g} "
            f"at t = {(steps_done + 1) * step:g}; last valid time {steps_done * step:g}",
            last_valid_time=steps_done * step,
        )
    times = sample_steps.astype(float) * step
    return Trajectory(
        times=times,
        states_array=samples,
        drift_report=DriftReport(f1=float(f1d), f2=float(f2d), norm=float(nd)),
    )
