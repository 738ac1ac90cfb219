"""Shared domain types for the reduced Suslov flow.

The reduced system lives on R^5 with coordinates (m1, m2, gamma1, gamma2,
gamma3).  Two positive ratios b = (b1, b2) fix the system, two nonnegative
integral values k = (k1, k2) select a joint level surface S_k, and the unit
Poisson sphere constrains the gamma block.  Everything downstream (dynamics,
level-set topology, critical points, projections) consumes these types.

All types are immutable values and all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "DegenerateEllipseError",
    "EqualBParamsError",
    "IntegrationBlowupError",
    "InvalidInputError",
    "LevelValues",
    "NotInImageError",
    "Params",
    "PeriodNotFoundError",
    "PhysicalParams",
    "Region",
    "State",
    "SuslovError",
    "UnsupportedRegionError",
    "from_physical",
    "from_physical_raw",
    "rel_close",
]

# Single relative tolerance for all boundary comparisons in the parameter
# plane.  Values within DEFAULT_TOL of a boundary are fenced off as Singular
# so that classification never flips due to rounding right on a bifurcation
# curve.
DEFAULT_TOL = 1e-12


class SuslovError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidInputError(SuslovError, ValueError):
    """An argument violates a documented precondition."""


class UnsupportedRegionError(SuslovError):
    """The requested operation is undefined on singular level values."""


class EqualBParamsError(SuslovError):
    """The quadratic branch was called with b1 == b2 (use the linear case)."""


class DegenerateEllipseError(InvalidInputError):
    """Torus coordinates are undefined when k1 == 0 or k2 == 0."""


class NotInImageError(SuslovError):
    """The torus point lies outside the closure of U_k."""


class IntegrationBlowupError(SuslovError):
    """A coordinate left the guard box during integration."""

    def __init__(self, message: str, last_valid_time: float):
        super().__init__(message)
        self.last_valid_time = last_valid_time


class PeriodNotFoundError(SuslovError):
    """No first return was found within the integration horizon."""


def rel_close(a: float, b: float, tol: float = DEFAULT_TOL) -> bool:
    """Relative closeness with a floor of 1 on the scale.

    Used for every boundary comparison so the fence width is consistent
    across the parameter plane.
    """
    return abs(a - b) <= tol * max(abs(a), abs(b), 1.0)


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Params:
    """System ratios b1 = B1/I2, b2 = B2/I1.  Both must be positive."""

    b1: float
    b2: float

    def __post_init__(self) -> None:
        for name in ("b1", "b2"):
            value = _require_finite(name, getattr(self, name))
            if value <= 0.0:
                raise InvalidInputError(
                    f"{name} must be > 0, got {value!r}; the system is only "
                    "defined for positive potential/inertia ratios"
                )
            object.__setattr__(self, name, value)

    def equal_b(self, tol: float = DEFAULT_TOL) -> bool:
        """True when b1 and b2 are indistinguishable at tolerance tol."""
        return abs(self.b1 - self.b2) <= tol * max(self.b1, self.b2)


@dataclass(frozen=True)
class LevelValues:
    """Integral values k1 = K1/I2, k2 = K2/I1.  Both must be nonnegative."""

    k1: float
    k2: float

    def __post_init__(self) -> None:
        for name in ("k1", "k2"):
            value = _require_finite(name, getattr(self, name))
            if value < 0.0:
                raise InvalidInputError(f"{name} must be >= 0, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class State:
    """A point (m1, m2, gamma1, gamma2, gamma3) of the reduced phase space."""

    m1: float
    m2: float
    gamma1: float
    gamma2: float
    gamma3: float

    def __post_init__(self) -> None:
        for name in ("m1", "m2", "gamma1", "gamma2", "gamma3"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.m1, self.m2, self.gamma1, self.gamma2, self.gamma3], dtype=float
        )

    @classmethod
    def from_array(cls, y: np.ndarray) -> "State":
        if len(y) != 5:
            raise InvalidInputError(f"state vector must have length 5, got {len(y)}")
        return cls(float(y[0]), float(y[1]), float(y[2]), float(y[3]), float(y[4]))

    def sphere_error(self) -> float:
        return abs(self.gamma1**2 + self.gamma2**2 + self.gamma3**2 - 1.0)

    def on_sphere(self, tol: float = 1e-9) -> bool:
        return self.sphere_error() <= tol


@dataclass(frozen=True)
class PhysicalParams:
    """Physical inertia/potential/momentum data before the reduction."""

    I1: float
    I2: float
    B1: float
    B2: float
    Pi1: float
    Pi2: float
    K1: float
    K2: float

    def __post_init__(self) -> None:
        for name in ("I1", "I2", "B1", "B2", "Pi1", "Pi2", "K1", "K2"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.I1 <= 0.0 or self.I2 <= 0.0:
            raise InvalidInputError(
                f"inertias must be positive, got I1={self.I1!r}, I2={self.I2!r}"
            )
        for name in ("B1", "B2", "K1", "K2"):
            if getattr(self, name) < 0.0:
                raise InvalidInputError(
                    f"{name} must be >= 0, got {getattr(self, name)!r}"
                )


_REGION_TAGS = ("D1", "D2", "D3", "D4", "D5", "Singular")
_D4_SUBREGIONS = ("Sub12", "Sub3", "Sub4", "C1", "C2")
_SINGULAR_CAUSES = ("KZero", "K1EqB1", "K2EqB2", "RatioSumOne")


@dataclass(frozen=True)
class Region:
    """Classification cell of (k1, k2): one of D1..D5 or Singular.

    d4sub is populated only for the region that carries the discriminant
    subdivision: D4 when b1 > b2, and its mirror D3 when b1 < b2.
    singular_cause reports the first failing smoothness condition, in the
    order KZero, K1EqB1, K2EqB2, RatioSumOne.
    """

    tag: str
    d4sub: str | None = None
    singular_cause: str | None = None

    def __post_init__(self) -> None:
        if self.tag not in _REGION_TAGS:
            raise InvalidInputError(f"unknown region tag {self.tag!r}")
        if self.d4sub is not None and self.d4sub not in _D4_SUBREGIONS:
            raise InvalidInputError(f"unknown subregion {self.d4sub!r}")
        if self.singular_cause is not None and self.singular_cause not in _SINGULAR_CAUSES:
            raise InvalidInputError(f"unknown singular cause {self.singular_cause!r}")
        if self.singular_cause is not None and self.tag != "Singular":
            raise InvalidInputError("singular_cause requires tag == 'Singular'")
        if self.d4sub is not None and self.tag not in ("D3", "D4"):
            raise InvalidInputError("d4sub requires tag D3 or D4")

    @property
    def is_singular(self) -> bool:
        return self.tag == "Singular"


def from_physical_raw(p: PhysicalParams) -> tuple[float, float, float, float, float, float]:
    """Raw change of variables, returned as (b1, b2, k1, k2, m1, m2).

    No positivity filtering is applied: B = 0 comes back as b = 0 and only
    fails once the caller tries to build Params from it.
    """
    b1 = p.B1 / p.I2
    b2 = p.B2 / p.I1
    k1 = p.K1 / p.I2
    k2 = p.K2 / p.I1
    m1 = -p.Pi2 / p.I2
    m2 = -p.Pi1 / p.I1
    return b1, b2, k1, k2, m1, m2


def from_physical(p: PhysicalParams) -> tuple[Params, LevelValues, float, float]:
    """Convert physical data to reduced data (Params, LevelValues, m1, m2)."""
    b1, b2, k1, k2, m1, m2 = from_physical_raw(p)
    return Params(b1, b2), LevelValues(k1, k2), m1, m2
