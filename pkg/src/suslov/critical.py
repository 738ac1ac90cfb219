"""Critical points of the flow on S_k, in closed form.

Equilibria on a smooth S_k have gamma3 = 0 and satisfy a tangency
condition that reduces to a quadratic in x = gamma1^2:

    (b1 - b2) x^2 - (k1 + k2 - 2 b2) x + (k2 - b2) = 0.

An admissible root must give gamma1^2 strictly inside (0, 1) (with
gamma2^2 = 1 - gamma1^2) and positive m1^2 = k1 - b1 gamma1^2,
m2^2 = k2 - b2 gamma2^2.  Each admissible root then yields 8 equilibria
through the sign pattern

    m1 = (-1)^kappa L1,  m2 = (-1)^ell L2,
    gamma1 = (-1)^i G1,  gamma2 = (-1)^j G2,  ell = i + kappa - j (mod 2),

which is exactly the constraint gamma1 m1 = gamma2 m2 read off from
stationarity of gamma3.

The linearization at an equilibrium, in the (gamma2, gamma3) chart of
S_k, has characteristic polynomial lambda^2 - c with

    c = k1 + k2 - 2 (m1^2 + m2^2),

so c > 0 gives a saddle (lambda = +-sqrt(c)) and c < 0 a center
(lambda = +-i sqrt(-c)).  On the quadratic's roots c = -+ sqrt(Delta):
the "+" root is always a saddle family and the "-" root always a center
family, and c = 0 exactly on the double-root curve, where the equilibria
are degenerate (nilpotent linear part, index 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quadratic import (
    discriminant_value,
    equal_b_gamma1_squared,
    gamma1_squared_roots,
)
from .core import (
    DEFAULT_TOL,
    EqualBParamsError,
    InvalidInputError,
    LevelValues,
    Params,
    State,
    UnsupportedRegionError,
)
from .dynamics import vector_field
from .levelset import classify_region, singular_message

__all__ = [
    "CriticalPoint",
    "Discriminant",
    "classify_critical_point",
    "discriminant",
    "euler_char_ph",
    "find_critical_points",
]


@dataclass(frozen=True)
class Discriminant:
    """Discriminant of the gamma1^2 quadratic."""

    delta: float


def discriminant(b: Params, k: LevelValues, tol: float = DEFAULT_TOL) -> Discriminant:
    """Delta = (k1 + k2 - 2 b2)^2 - 4 (b1 - b2)(k2 - b2), for b1 != b2.

    The value is symmetric under swapping the two axes (indices 1 and 2
    in both b and k together); for b1 < b2 it is evaluated in swapped
    form so the returned float is identical either way.
    """
    if b.equal_b(tol):
        raise EqualBParamsError(
            f"discriminant is undefined for equal moments b1 = b2 = {b.b1:g}; "
            f"the tangency condition is linear in gamma1^2 there"
        )
    return Discriminant(delta=discriminant_value(b.b1, b.b2, k.k1, k.k2))


@dataclass(frozen=True)
class CriticalPoint:
    """An equilibrium of the flow on S_k with its linearized type.

    kind is "Saddle", "Center", or "Degenerate"; index is the
    Poincare-Hopf index (-1, +1, 0 respectively); family records which
    quadratic root produced the point ("Plus", "Minus", or "EqualB");
    eigenvalues are the two roots of lambda^2 - c.
    """

    state: State
    kind: str
    index: int
    family: str
    eigenvalues: tuple[complex, complex]


_SIGNS = (1.0, -1.0)


def _eight_points(l1: float, l2: float, g1: float, g2: float) -> list[State]:
    # gamma1 m1 = gamma2 m2 forces ell = i + kappa - j (mod 2).
    points = []
    for i in (0, 1):
        for j in (0, 1):
            for kappa in (0, 1):
                ell = (i + kappa - j) % 2
                points.append(
                    State(
                        m1=_SIGNS[kappa] * l1,
                        m2=_SIGNS[ell] * l2,
                        gamma1=_SIGNS[i] * g1,
                        gamma2=_SIGNS[j] * g2,
                        gamma3=0.0,
                    )
                )
    return points


def _admissible(
    x: float, b: Params, k: LevelValues
) -> tuple[float, float, float, float] | None:
    if not 0.0 < x < 1.0:
        return None
    m1_sq = k.k1 - b.b1 * x
    m2_sq = k.k2 - b.b2 * (1.0 - x)
    if m1_sq <= 0.0 or m2_sq <= 0.0:
        return None
    return math.sqrt(m1_sq), math.sqrt(m2_sq), math.sqrt(x), math.sqrt(1.0 - x)


def _kind_and_eigen(c: float, fence: float) -> tuple[str, int, tuple[complex, complex]]:
    if c > fence:
        root = math.sqrt(c)
        return "Saddle", -1, (complex(root, 0.0), complex(-root, 0.0))
    if c < -fence:
        root = math.sqrt(-c)
        return "Center", 1, (complex(0.0, root), complex(0.0, -root))
    return "Degenerate", 0, (complex(0.0, 0.0), complex(0.0, 0.0))


def find_critical_points(
    b: Params, k: LevelValues, tol: float = DEFAULT_TOL
) -> list[CriticalPoint]:
    """All equilibria of the flow on a smooth S_k, classified.

    Returns an empty list when no quadratic root is admissible (regions
    D1, D3 and the discriminant-negative part of D4).  Raises
    UnsupportedRegionError for singular k.
    """
    region = classify_region(b, k, tol)
    if region.is_singular:
        raise UnsupportedRegionError(singular_message(region.singular_cause, b, k))

    candidates: list[tuple[float, str]] = []
    if b.equal_b(tol):
        x = equal_b_gamma1_squared(b.b1, k.k1, k.k2)
        if x is not None:
            candidates.append((x, "EqualB"))
    else:
        candidates.extend(gamma1_squared_roots(b.b1, b.b2, k.k1, k.k2, tol))

    fence = tol * max(1.0, k.k1 + k.k2)
    out: list[CriticalPoint] = []
    for x, family in candidates:
        parts = _admissible(x, b, k)
        if parts is None:
            continue
        l1, l2, g1, g2 = parts
        c = k.k1 + k.k2 - 2.0 * (l1 * l1 + l2 * l2)
        kind, index, eigen = _kind_and_eigen(c, fence)
        for state in _eight_points(l1, l2, g1, g2):
            out.append(
                CriticalPoint(
                    state=state,
                    kind=kind,
                    index=index,
                    family=family,
                    eigenvalues=eigen,
                )
            )
    return out


def classify_critical_point(
    cp: State, b: Params, k: LevelValues, tol: float = DEFAULT_TOL
) -> tuple[str, tuple[complex, complex]]:
    """Linearized type of an equilibrium from lambda^2 = c.

    c = k1 + k2 - 2 (m1^2 + m2^2); c > 0 is a saddle with eigenvalues
    +-sqrt(c), c < 0 a center with +-i sqrt(-c), and |c| within the fence
    a degenerate point.  Raises when cp is not an equilibrium.
    """
    residual = float(np.linalg.norm(vector_field(cp, b)))
    if residual > 1e-9:
        raise InvalidInputError(
            f"state is not an equilibrium: vector field residual {residual:.3e}"
        )
    c = k.k1 + k.k2 - 2.0 * (cp.m1 * cp.m1 + cp.m2 * cp.m2)
    fence = tol * max(1.0, k.k1 + k.k2)
    kind, _, eigen = _kind_and_eigen(c, fence)
    return kind, eigen


def euler_char_ph(points: list[CriticalPoint]) -> int:
    """Euler characteristic of S_k as the sum of equilibrium indices."""
    return sum(p.index for p in points)
