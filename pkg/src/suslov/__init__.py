"""Reduced Suslov flow with a Klebsh-Tisserand potential.

The state (m1, m2, gamma1, gamma2, gamma3) evolves by

    m1' = -b1 gamma1 gamma3,   m2' = b2 gamma2 gamma3,
    gamma1' = m1 gamma3,       gamma2' = -m2 gamma3,
    gamma3' = gamma2 m2 - gamma1 m1,

conserving f1 = m1^2 + b1 gamma1^2, f2 = m2^2 + b2 gamma2^2 and the
Poisson sphere |gamma| = 1.  The package classifies the joint level
surfaces S_k topologically by two independent routes (explicit
construction over a torus grid, and Poincare-Hopf index counting over
the closed-form equilibria), projects the dynamics onto the flat torus
and the Poisson sphere, detects periodic orbits, and ships a CLI that
emits reproducible JSON/CSV/SVG artifacts.
"""

from .core import (
    DEFAULT_TOL,
    DegenerateEllipseError,
    EqualBParamsError,
    IntegrationBlowupError,
    InvalidInputError,
    LevelValues,
    NotInImageError,
    Params,
    PeriodNotFoundError,
    PhysicalParams,
    Region,
    State,
    SuslovError,
    UnsupportedRegionError,
    from_physical,
    from_physical_raw,
    rel_close,
)
from .dynamics import (
    DriftReport,
    ExtraIntegral,
    Trajectory,
    conserved_quantities,
    detect_rational_ratio,
    extra_integral_value,
    integrate,
    vector_field,
)
from .levelset import (
    GkCriticalPoint,
    GkData,
    Topology,
    classify_region,
    g_value,
    gk_critical_points,
    gk_data,
    topology_via_construction,
    uk_grid,
)
from .critical import (
    CriticalPoint,
    Discriminant,
    classify_critical_point,
    discriminant,
    euler_char_ph,
    find_critical_points,
)
from .projection import (
    DpmDescription,
    PeriodicityVerdict,
    TorusPoint,
    detect_periodicity,
    dpm,
    dpm_multiplicity,
    flow_slope,
    from_torus,
    to_torus,
)
from .cli import RunConfig, main, random_states, render_svg, run

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "CriticalPoint",
    "DegenerateEllipseError",
    "Discriminant",
    "DpmDescription",
    "DriftReport",
    "EqualBParamsError",
    "ExtraIntegral",
    "GkCriticalPoint",
    "GkData",
    "IntegrationBlowupError",
    "InvalidInputError",
    "LevelValues",
    "NotInImageError",
    "Params",
    "PeriodNotFoundError",
    "PeriodicityVerdict",
    "PhysicalParams",
    "Region",
    "RunConfig",
    "State",
    "SuslovError",
    "Topology",
    "TorusPoint",
    "Trajectory",
    "UnsupportedRegionError",
    "classify_critical_point",
    "classify_region",
    "conserved_quantities",
    "detect_periodicity",
    "detect_rational_ratio",
    "discriminant",
    "dpm",
    "dpm_multiplicity",
    "euler_char_ph",
    "extra_integral_value",
    "find_critical_points",
    "flow_slope",
    "from_physical",
    "from_physical_raw",
    "from_torus",
    "g_value",
    "gk_critical_points",
    "gk_data",
    "integrate",
    "main",
    "random_states",
    "rel_close",
    "render_svg",
    "run",
    "to_torus",
    "topology_via_construction",
    "uk_grid",
    "vector_field",
    "__version__",
]
