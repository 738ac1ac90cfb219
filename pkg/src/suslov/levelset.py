"""Parameter-plane regions, the torus Morse function, and grid topology.

The projection of S_k to the flat torus [-pi/2, 3pi/2) x [0, 2pi) covers

    U_k = { g_k > eps_k },   g_k = (k1/b1) cos^2 t1 + (k2/b2) sin^2 t2,
    eps_k = k1/b1 + k2/b2 - 1

twice over the interior and once over the boundary, so S_k is the double
of the closure of U_k along its boundary circles.  That makes the topology
of S_k computable from a boolean pixel grid: chi(S_k) = 2 chi(closure U_k)
and each component with boundary doubles to one closed surface of genus
1 - chi, while a boundaryless U_k (the whole torus) doubles to two tori.

Note on the two saddle levels of g_k: direct evaluation gives
g(+-pi/2, pi/2 or 3pi/2) = k2/b2 and g(0 or pi, 0 or pi) = k1/b1.
All reported levels come from evaluating the formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import ndimage

from ._quadratic import delta_scale, discriminant_value
from .core import (
    DEFAULT_TOL,
    InvalidInputError,
    LevelValues,
    Params,
    Region,
    UnsupportedRegionError,
    rel_close,
)

__all__ = [
    "GkCriticalPoint",
    "GkData",
    "Topology",
    "classify_region",
    "g_value",
    "gk_critical_points",
    "gk_data",
    "singular_message",
    "topology_via_construction",
    "uk_grid",
]


@dataclass(frozen=True)
class GkData:
    """Critical levels of g_k: eps_k, the two saddle levels, and the max."""

    eps: float
    saddle_levels: tuple[float, float]
    max_level: float

    def __post_init__(self) -> None:
        if self.max_level != self.saddle_levels[0] + self.saddle_levels[1]:
            raise InvalidInputError("max_level must equal the sum of the saddle levels")
        if self.eps != self.max_level - 1.0:
            raise InvalidInputError("eps must equal max_level - 1")


def gk_data(b: Params, k: LevelValues) -> GkData:
    s1 = k.k1 / b.b1
    s2 = k.k2 / b.b2
    return GkData(eps=s1 + s2 - 1.0, saddle_levels=(s1, s2), max_level=s1 + s2)


@dataclass(frozen=True)
class Topology:
    """Connected components of S_k with per-component genus and chi."""

    components: int
    genus_per_component: tuple[int, ...]
    euler: int

    def __post_init__(self) -> None:
        if self.components != len(self.genus_per_component):
            raise InvalidInputError("components must match the genus list length")
        if self.euler != sum(2 - 2 * g for g in self.genus_per_component):
            raise InvalidInputError("euler must equal sum(2 - 2 genus)")


def singular_message(cause: str, b: Params, k: LevelValues) -> str:
    detail = {
        "KZero": "k1 * k2 = 0",
        "K1EqB1": f"k1 = b1 = {b.b1:g}",
        "K2EqB2": f"k2 = b2 = {b.b2:g}",
        "RatioSumOne": "k1/b1 + k2/b2 = 1",
    }[cause]
    return (
        f"S_k is not a smooth surface at k = ({k.k1:g}, {k.k2:g}): the "
        f"smoothness conditions require k1*k2 != 0, k1 != b1, k2 != b2 and "
        f"k1/b1 + k2/b2 != 1, but {detail} holds within tolerance"
    )


def classify_region(b: Params, k: LevelValues, tol: float = DEFAULT_TOL) -> Region:
    """Classify (k1, k2) into D1..D5, subregions, or Singular.

    Singular iff any smoothness condition fails within the relative fence;
    singular_cause reports the first failure in the order KZero, K1EqB1,
    K2EqB2, RatioSumOne.  The discriminant subdivision attaches to D4 when
    b1 > b2 and mirrors onto D3 when b1 < b2; equal b has no subdivision.
    """
    b1, b2, k1, k2 = b.b1, b.b2, k.k1, k.k2
    if rel_close(k1, 0.0, tol) or rel_close(k2, 0.0, tol):
        return Region("Singular", singular_cause="KZero")
    if rel_close(k1, b1, tol):
        return Region("Singular", singular_cause="K1EqB1")
    if rel_close(k2, b2, tol):
        return Region("Singular", singular_cause="K2EqB2")
    ratio = k1 / b1 + k2 / b2
    if rel_close(ratio, 1.0, tol):
        return Region("Singular", singular_cause="RatioSumOne")

    if ratio < 1.0:
        return Region("D1")
    if k1 < b1 and k2 < b2:
        return Region("D2")
    if k1 > b1 and k2 < b2:
        tag = "D3"
    elif k1 < b1:
        tag = "D4"
    else:
        return Region("D5")

    carries_subdivision = (tag == "D4" and b1 > b2) or (tag == "D3" and b1 < b2)
    if b.equal_b(tol) or not carries_subdivision:
        return Region(tag)
    delta = discriminant_value(b1, b2, k1, k2)
    fence = tol * delta_scale(b1, b2, k1, k2)
    line = 2.0 * max(b1, b2)
    total = k1 + k2
    if abs(delta) <= fence:
        sub = "C1" if total < line else "C2"
    elif delta < 0.0:
        sub = "Sub4"
    else:
        sub = "Sub12" if total < line else "Sub3"
    return Region(tag, d4sub=sub)


def g_value(theta1: float, theta2: float, b: Params, k: LevelValues) -> float:
    """g_k(theta1, theta2) = (k1/b1) cos^2 theta1 + (k2/b2) sin^2 theta2."""
    return (k.k1 / b.b1) * math.cos(theta1) ** 2 + (k.k2 / b.b2) * math.sin(theta2) ** 2


@dataclass(frozen=True)
class GkCriticalPoint:
    """One of the 16 k-independent critical points of g_k."""

    theta1: float
    theta2: float
    kind: str
    level: Callable[[Params, LevelValues], float]


def _level_zero(b: Params, k: LevelValues) -> float:
    return 0.0


def _level_k2_over_b2(b: Params, k: LevelValues) -> float:
    return k.k2 / b.b2


def _level_k1_over_b1(b: Params, k: LevelValues) -> float:
    return k.k1 / b.b1


def _level_max(b: Params, k: LevelValues) -> float:
    return k.k1 / b.b1 + k.k2 / b.b2


def gk_critical_points() -> list[GkCriticalPoint]:
    """The 16 critical points of g_k with kind and level closures.

    Levels follow from evaluating g_k: minima at level 0, saddles at
    {+-pi/2} x {pi/2, 3pi/2} at level k2/b2, saddles at {0, pi} x {0, pi}
    at level k1/b1, maxima at level k1/b1 + k2/b2.
    """
    half = math.pi / 2.0
    points: list[GkCriticalPoint] = []
    for t1 in (-half, half):
        for t2 in (0.0, math.pi):
            points.append(GkCriticalPoint(t1, t2, "min", _level_zero))
    for t1 in (-half, half):
        for t2 in (half, 3.0 * half):
            points.append(GkCriticalPoint(t1, t2, "saddle", _level_k2_over_b2))
    for t1 in (0.0, math.pi):
        for t2 in (0.0, math.pi):
            points.append(GkCriticalPoint(t1, t2, "saddle", _level_k1_over_b1))
    for t1 in (0.0, math.pi):
        for t2 in (half, 3.0 * half):
            points.append(GkCriticalPoint(t1, t2, "max", _level_max))
    return points


def uk_grid(b: Params, k: LevelValues, n: int) -> np.ndarray:
    """Boolean n x n grid of U_k membership at cell centers.

    Axis 0 indexes theta1 over [-pi/2, 3pi/2) and axis 1 indexes theta2
    over [0, 2pi); both axes wrap torically.
    """
    if n < 16:
        raise InvalidInputError(f"grid size must be >= 16, got {n}")
    data = gk_data(b, k)
    centers = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
    theta1 = -math.pi / 2.0 + centers
    theta2 = centers
    c1 = np.cos(theta1) ** 2
    s2 = np.sin(theta2) ** 2
    g = (k.k1 / b.b1) * c1[:, None] + (k.k2 / b.b2) * s2[None, :]
    return g > data.eps


def _toric_label(grid: np.ndarray) -> tuple[np.ndarray, int]:
    # 4-connected labeling, then merge across the wrap seams.
    lab, nlab = ndimage.label(grid)
    if nlab == 0:
        return lab, 0
    parent = list(range(nlab + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for a, c in zip(lab[0, :], lab[-1, :]):
        if a and c:
            union(int(a), int(c))
    for a, c in zip(lab[:, 0], lab[:, -1]):
        if a and c:
            union(int(a), int(c))

    roots = sorted({find(x) for x in range(1, nlab + 1)})
    remap = np.zeros(nlab + 1, dtype=np.int64)
    for new_id, root in enumerate(roots, start=1):
        for x in range(1, nlab + 1):
            if find(x) == root:
                remap[x] = new_id
    return remap[lab], len(roots)


def _component_euler(labels: np.ndarray, count: int) -> np.ndarray:
    """chi per component of the union of closed cells, V - E + F.

    Edges and vertices are attributed once per distinct incident component,
    which separates components that meet only at a pixel corner (the
    4-connectivity convention for U_k).
    """
    faces = np.bincount(labels.ravel(), minlength=count + 1)[1:]

    right = np.roll(labels, -1, axis=1)
    down = np.roll(labels, -1, axis=0)
    diag = np.roll(right, -1, axis=0)

    edges = np.zeros(count + 1, dtype=np.int64)
    for a, c in ((labels, right), (labels, down)):
        owner = np.where(a > 0, a, c)
        edges += np.bincount(owner[owner > 0], minlength=count + 1)
    edges = edges[1:]

    vertices = np.zeros(count + 1, dtype=np.int64)
    layers = (labels, right, down, diag)
    for t, arr in enumerate(layers):
        contribute = arr > 0
        for prev in layers[:t]:
            contribute &= arr != prev
        vertices += np.bincount(arr[contribute], minlength=count + 1)
    vertices = vertices[1:]

    return vertices - edges + faces


def topology_via_construction(
    b: Params, k: LevelValues, n: int = 512, tol: float = DEFAULT_TOL
) -> Topology:
    """Topology of S_k as the double of the closure of U_k on a toric grid.

    A component of U_k with boundary doubles to one closed surface of genus
    1 - chi; when U_k is the whole torus (empty boundary) the double is two
    copies of T^2.  Raises UnsupportedRegionError for singular k.
    """
    if n < 64:
        raise InvalidInputError(f"topology grid size must be >= 64, got {n}")
    region = classify_region(b, k, tol)
    if region.is_singular:
        raise UnsupportedRegionError(singular_message(region.singular_cause, b, k))
    grid = uk_grid(b, k, n)
    if grid.all():
        return Topology(components=2, genus_per_component=(1, 1), euler=0)
    if not grid.any():
        raise InvalidInputError(
            f"grid size n={n} is too coarse to resolve U_k for "
            f"k = ({k.k1:g}, {k.k2:g}); increase n"
        )
    labels, count = _toric_label(grid)
    chis = _component_euler(labels, count)
    if np.any(chis > 1):
        raise InvalidInputError(
            f"component Euler characteristic {chis.tolist()} exceeds 1; "
            f"grid size n={n} does not resolve the boundary curves"
        )
    genus = tuple(sorted(int(1 - c) for c in chis))
    return Topology(
        components=count,
        genus_per_component=genus,
        euler=int(2 * int(chis.sum())),
    )
