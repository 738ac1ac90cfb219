"""Quadratic in gamma1^2 shared by region subdivision and equilibria.

Eliminating the tangency condition against the level equations leaves

    (b1 - b2) * x^2 - (k1 + k2 - 2*b2) * x + (k2 - b2) = 0,   x = gamma1^2

whose discriminant Delta decides how many equilibria a level surface
carries and how D4 (or its mirror D3) splits into subregions.  Delta is
invariant under swapping the 1 and 2 indices of both b and k, which is
asserted by the property tests; the swap below keeps the evaluation in
the b1 > b2 orientation regardless.
"""

from __future__ import annotations

import math

from .core import DEFAULT_TOL

__all__ = [
    "delta_scale",
    "discriminant_value",
    "equal_b_gamma1_squared",
    "gamma1_squared_roots",
]


def discriminant_value(b1: float, b2: float, k1: float, k2: float) -> float:
    """Delta = (k1 + k2 - 2*b2)^2 - 4*(b1 - b2)*(k2 - b2).

    Evaluated with indices swapped when b1 < b2 so the formula always runs
    in its stated orientation.  The value itself is swap invariant.
    """
    if b1 < b2:
        b1, b2, k1, k2 = b2, b1, k2, k1
    return (k1 + k2 - 2.0 * b2) ** 2 - 4.0 * (b1 - b2) * (k2 - b2)


def delta_scale(b1: float, b2: float, k1: float, k2: float) -> float:
    """Magnitude scale of the two terms forming Delta, for the zero fence."""
    if b1 < b2:
        b1, b2, k1, k2 = b2, b1, k2, k1
    return max((k1 + k2 - 2.0 * b2) ** 2, abs(4.0 * (b1 - b2) * (k2 - b2)), 1.0)


def gamma1_squared_roots(
    b1: float, b2: float, k1: float, k2: float, tol: float = DEFAULT_TOL
) -> list[tuple[float, str]]:
    """Real roots of the quadratic as (value, family) pairs.

    family is "Plus" for the +sqrt(Delta) branch and "Minus" for the
    -sqrt(Delta) branch of the root formula in the original index order.
    A discriminant within the fence of zero yields the single double root,
    labeled "Plus" since both branches coincide.  No admissibility
    filtering happens here; callers enforce 0 < x < 1 and the m^2 > 0
    conditions themselves.
    """
    delta = discriminant_value(b1, b2, k1, k2)
    fence = tol * delta_scale(b1, b2, k1, k2)
    lead = 2.0 * (b1 - b2)
    mid = k1 + k2 - 2.0 * b2
    if abs(delta) <= fence:
        return [(mid / lead, "Plus")]
    if delta < 0.0:
        return []
    root = math.sqrt(delta)
    return [((mid + root) / lead, "Plus"), ((mid - root) / lead, "Minus")]


def equal_b_gamma1_squared(b: float, k1: float, k2: float) -> float | None:
    """Linear-case root gamma1^2 = (k2 - b) / (k1 + k2 - 2b), or None.

    The denominator can only vanish at level values where no equilibria
    exist anyway (the sign conditions fail in D3/D4 and the equality is
    unreachable inside D2/D5), so None is an honest empty answer.
    """
    denom = k1 + k2 - 2.0 * b
    if abs(denom) <= DEFAULT_TOL * max(k1 + k2, 2.0 * b, 1.0):
        return None
    return (k2 - b) / denom
