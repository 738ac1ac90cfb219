"""Command-line surface: classification, simulation, reports, figures.

All numerics live in the library modules; this module only parses
flags, dispatches, and serializes artifacts.  Outputs are deterministic
for a fixed config and seed: JSON uses stable key order, CSV is
RFC-4180 with CRLF and 17-significant-digit floats, SVG is rendered by
fixed-precision string assembly.

Exit codes: 0 success, 1 domain error (singular region, integration
failure, I/O), 2 usage error (bad flags or flag combinations).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _svg
from .core import (
    InvalidInputError,
    LevelValues,
    Params,
    State,
    SuslovError,
)
from .critical import discriminant, euler_char_ph, find_critical_points
from .dynamics import Trajectory, integrate
from .levelset import classify_region, g_value, gk_data, topology_via_construction, uk_grid
from .projection import TorusPoint, from_torus, to_torus

render_svg = _svg.render_svg

__all__ = ["RunConfig", "main", "random_states", "render_svg", "run"]


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: one command plus its numeric settings."""

    command: str
    b1: float
    b2: float
    k1: float | None = None
    k2: float | None = None
    step: float = 1e-3
    t_end: float = 100.0
    grid_n: int = 512
    out_format: str | None = None
    out_path: str | None = None
    seed: int = 0
    sweep: tuple[float, float, float, float, int] | None = None


class _UsageError(Exception):
    pass


_COMMANDS = ("classify", "critical-points", "topology", "simulate", "project", "sweep")
_DEFAULT_FORMAT = {
    "classify": "json",
    "critical-points": "json",
    "topology": "json",
    "simulate": "csv",
    "project": "svg",
    "sweep": "csv",
}
_ALLOWED_FORMATS = {
    "classify": ("json",),
    "critical-points": ("json",),
    "topology": ("json",),
    "simulate": ("csv",),
    "project": ("svg",),
    "sweep": ("csv", "json"),
}
_NEEDS_OUT = ("simulate", "project", "sweep")


def random_states(
    b: Params, k: LevelValues, count: int, seed: int | np.random.Generator
) -> list[State]:
    """Seeded uniform draws of torus angles restricted to U_k.

    Rejection sampling over the fundamental domain with a random gamma3
    sign; used for reproducible "generic" initial conditions.
    """
    rng = np.random.default_rng(seed)
    data = gk_data(b, k)
    out: list[State] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100_000 * max(count, 1):
            raise InvalidInputError(
                f"rejection sampling failed: U_k appears too small for "
                f"k = ({k.k1:g}, {k.k2:g})"
            )
        t1 = -math.pi / 2.0 + 2.0 * math.pi * float(rng.random())
        t2 = 2.0 * math.pi * float(rng.random())
        if g_value(t1, t2, b, k) - data.eps <= 1e-9:
            continue
        sign = "Plus" if float(rng.random()) < 0.5 else "Minus"
        out.append(from_torus(TorusPoint(t1, t2, sign), b, k))
    return out


def _fmt_float(v: float) -> str:
    return format(v, ".17g")


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _classify_payload(b: Params, k: LevelValues) -> dict:
    region = classify_region(b, k)
    delta = None if b.equal_b() else discriminant(b, k).delta
    return {
        "region": region.tag,
        "subregion": region.d4sub,
        "singular_cause": region.singular_cause,
        "delta": delta,
    }


def _critical_payload(b: Params, k: LevelValues) -> list[dict]:
    out = []
    for p in find_critical_points(b, k):
        out.append(
            {
                "state": {
                    "m1": p.state.m1,
                    "m2": p.state.m2,
                    "gamma1": p.state.gamma1,
                    "gamma2": p.state.gamma2,
                    "gamma3": p.state.gamma3,
                },
                "kind": p.kind,
                "index": p.index,
                "eigenvalues": [
                    {"re": e.real, "im": e.imag} for e in p.eigenvalues
                ],
            }
        )
    return out


def _topology_payload(b: Params, k: LevelValues, grid_n: int) -> dict:
    topo = topology_via_construction(b, k, n=grid_n)
    ph = euler_char_ph(find_critical_points(b, k))
    return {
        "components": topo.components,
        "genus_per_component": list(topo.genus_per_component),
        "euler": topo.euler,
        "euler_ph": ph,
        "agree": topo.euler == ph,
    }


def _trajectory_csv(traj: Trajectory, b: Params) -> str:
    buf = io.StringIO()
    buf.write("t,m1,m2,gamma1,gamma2,gamma3,f1,f2,norm\r\n")
    arr = traj.states_array
    f1 = arr[:, 0] ** 2 + b.b1 * arr[:, 2] ** 2
    f2 = arr[:, 1] ** 2 + b.b2 * arr[:, 3] ** 2
    norm = arr[:, 2] ** 2 + arr[:, 3] ** 2 + arr[:, 4] ** 2
    for i in range(arr.shape[0]):
        row = [traj.times[i], *arr[i], f1[i], f2[i], norm[i]]
        buf.write(",".join(_fmt_float(float(v)) for v in row) + "\r\n")
    return buf.getvalue()


def _drift_payload(config: RunConfig, traj: Trajectory, s0: State) -> dict:
    return {
        "b1": config.b1,
        "b2": config.b2,
        "k1": config.k1,
        "k2": config.k2,
        "step": config.step,
        "t_end": config.t_end,
        "seed": config.seed,
        "initial_state": {
            "m1": s0.m1,
            "m2": s0.m2,
            "gamma1": s0.gamma1,
            "gamma2": s0.gamma2,
            "gamma3": s0.gamma3,
        },
        "f1_drift": traj.drift_report.f1,
        "f2_drift": traj.drift_report.f2,
        "norm_drift": traj.drift_report.norm,
    }


def _orbit_polylines(traj: Trajectory, b: Params, k: LevelValues) -> list[np.ndarray]:
    """Torus-angle polylines of a trajectory, split at wrap jumps."""
    angles = np.empty((traj.states_array.shape[0], 2))
    for i, row in enumerate(traj.states_array):
        tp = to_torus(State.from_array(row), b, k)
        angles[i, 0] = tp.theta1
        angles[i, 1] = tp.theta2
    if angles.shape[0] < 2:
        return [angles]
    jumps = np.abs(np.diff(angles, axis=0)).max(axis=1) > math.pi
    breaks = np.flatnonzero(jumps) + 1
    return [seg for seg in np.split(angles, breaks) if seg.shape[0] >= 2]


def _project_svg(config: RunConfig, b: Params, k: LevelValues) -> str:
    markers = [
        (tp.theta1, tp.theta2, p.kind)
        for p, tp in (
            (p, to_torus(p.state, b, k)) for p in find_critical_points(b, k)
        )
    ]
    n_steps = max(1, int(round(config.t_end / config.step)))
    every = max(1, n_steps // 1500)
    orbits: list[np.ndarray] = []
    for s0 in random_states(b, k, 4, config.seed):
        traj = integrate(s0, b, step=config.step, t_end=config.t_end, record_every=every)
        orbits.extend(_orbit_polylines(traj, b, k))
    scene = _svg.Scene(
        size=640,
        label=f"b=({config.b1:g},{config.b2:g}) k=({config.k1:g},{config.k2:g})",
        shading=uk_grid(b, k, 256),
        boundary=_svg.fold_segments(b, k, 256),
        orbits=orbits,
        markers=markers,
    )
    return render_svg(scene)


def _sweep_cells(config: RunConfig, b: Params) -> list[dict]:
    k1_lo, k1_hi, k2_lo, k2_hi, n = config.sweep
    w1 = (k1_hi - k1_lo) / n
    w2 = (k2_hi - k2_lo) / n

    def compute(idx: int) -> dict:
        i, j = divmod(idx, n)
        k = LevelValues(k1_lo + (i + 0.5) * w1, k2_lo + (j + 0.5) * w2)
        region = classify_region(b, k)
        cell = {
            "k1": k.k1,
            "k2": k.k2,
            "region": region.tag,
            "subregion": region.d4sub,
            "singular_cause": region.singular_cause,
            "n_critical": None,
            "euler": None,
            "euler_ph": None,
            "agree": None,
        }
        if not region.is_singular:
            points = find_critical_points(b, k)
            topo = topology_via_construction(b, k, n=config.grid_n)
            cell["n_critical"] = len(points)
            cell["euler"] = topo.euler
            cell["euler_ph"] = euler_char_ph(points)
            cell["agree"] = cell["euler"] == cell["euler_ph"]
        return cell

    with ThreadPoolExecutor() as pool:
        return list(pool.map(compute, range(n * n)))


def _sweep_csv(cells: list[dict]) -> str:
    buf = io.StringIO()
    buf.write("k1,k2,region,subregion,singular_cause,n_critical,euler,euler_ph,agree\r\n")
    for c in cells:
        row = [
            _fmt_float(c["k1"]),
            _fmt_float(c["k2"]),
            c["region"],
            c["subregion"] or "",
            c["singular_cause"] or "",
            "" if c["n_critical"] is None else str(c["n_critical"]),
            "" if c["euler"] is None else str(c["euler"]),
            "" if c["euler_ph"] is None else str(c["euler_ph"]),
            "" if c["agree"] is None else ("true" if c["agree"] else "false"),
        ]
        buf.write(",".join(row) + "\r\n")
    return buf.getvalue()


def _sibling(path: str, suffix: str) -> str:
    stem, dot, _ = path.rpartition(".")
    return (stem if dot else path) + suffix


def _validate(config: RunConfig) -> RunConfig:
    if config.command not in _COMMANDS:
        raise _UsageError(f"unknown command {config.command!r}")
    for name, value in (("b1", config.b1), ("b2", config.b2)):
        if not (math.isfinite(value) and value > 0.0):
            raise _UsageError(f"--{name} must be finite and positive, got {value!r}")
    if config.command != "sweep":
        for name, value in (("k1", config.k1), ("k2", config.k2)):
            if value is None:
                raise _UsageError(f"--{name} is required for {config.command}")
            if not (math.isfinite(value) and value >= 0.0):
                raise _UsageError(f"--{name} must be finite and >= 0, got {value!r}")
    else:
        if config.sweep is None:
            raise _UsageError("--sweep k1min:k1max:k2min:k2max:n is required for sweep")
        k1_lo, k1_hi, k2_lo, k2_hi, n = config.sweep
        if not (k1_lo < k1_hi and k2_lo < k2_hi):
            raise _UsageError("sweep ranges must satisfy min < max on both axes")
        if min(k1_lo, k2_lo) < 0.0:
            raise _UsageError("sweep ranges must be non-negative")
        if n < 1:
            raise _UsageError(f"sweep samples per axis must be >= 1, got {n}")
    if not (math.isfinite(config.step) and config.step > 0.0):
        raise _UsageError(f"--step must be positive, got {config.step!r}")
    if not (math.isfinite(config.t_end) and config.t_end > 0.0):
        raise _UsageError(f"--t-end must be positive, got {config.t_end!r}")
    if config.grid_n < 64:
        raise _UsageError(f"--grid-n must be >= 64, got {config.grid_n}")
    if config.seed < 0:
        raise _UsageError(f"--seed must be a non-negative integer, got {config.seed}")
    fmt = config.out_format or _DEFAULT_FORMAT[config.command]
    if fmt not in _ALLOWED_FORMATS[config.command]:
        allowed = "/".join(_ALLOWED_FORMATS[config.command])
        raise _UsageError(f"{config.command} supports --format {allowed}, got {fmt}")
    if config.out_path is None and config.command in _NEEDS_OUT:
        raise _UsageError(f"--out is required for {config.command}")
    return replace(config, out_format=fmt)


def _execute(config: RunConfig) -> dict[str | None, str]:
    """Build all artifact texts for a validated config, keyed by path.

    A None key means stdout.
    """
    b = Params(config.b1, config.b2)
    if config.command == "classify":
        k = LevelValues(config.k1, config.k2)
        return {config.out_path: _json_text(_classify_payload(b, k))}
    if config.command == "critical-points":
        k = LevelValues(config.k1, config.k2)
        return {config.out_path: _json_text(_critical_payload(b, k))}
    if config.command == "topology":
        k = LevelValues(config.k1, config.k2)
        return {config.out_path: _json_text(_topology_payload(b, k, config.grid_n))}
    if config.command == "simulate":
        # integration is fine on singular levels too; the torus chart only
        # needs k1, k2 > 0, and from_torus raises otherwise
        k = LevelValues(config.k1, config.k2)
        s0 = random_states(b, k, 1, config.seed)[0]
        n_steps = max(1, int(round(config.t_end / config.step)))
        every = max(1, n_steps // 4000)
        traj = integrate(s0, b, step=config.step, t_end=config.t_end, record_every=every)
        return {
            config.out_path: _trajectory_csv(traj, b),
            _sibling(config.out_path, ".drift.json"): _json_text(
                _drift_payload(config, traj, s0)
            ),
        }
    if config.command == "project":
        k = LevelValues(config.k1, config.k2)
        return {config.out_path: _project_svg(config, b, k)}
    # sweep
    cells = _sweep_cells(config, b)
    k1_lo, k1_hi, k2_lo, k2_hi, n = config.sweep
    if config.out_format == "json":
        atlas = _json_text(
            {
                "b1": config.b1,
                "b2": config.b2,
                "k1_min": k1_lo,
                "k1_max": k1_hi,
                "k2_min": k2_lo,
                "k2_max": k2_hi,
                "samples_per_axis": n,
                "cells": cells,
            }
        )
    else:
        atlas = _sweep_csv(cells)
    diagram = _svg.render_bifurcation_svg(
        b, k1_lo, k1_hi, k2_lo, k2_hi, cells, n, size=1024
    )
    return {
        config.out_path: atlas,
        _sibling(config.out_path, ".svg"): diagram,
    }


def run(config: RunConfig) -> int:
    """Execute a run configuration; returns the process exit code."""
    try:
        config = _validate(config)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    try:
        artifacts = _execute(config)
    except SuslovError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    try:
        for path, text in artifacts.items():
            if path is None:
                sys.stdout.write(text)
            else:
                with open(path, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def _parse_sweep(text: str) -> tuple[float, float, float, float, int]:
    parts = text.split(":")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError(
            "expected k1min:k1max:k2min:k2max:n"
        )
    try:
        lo1, hi1, lo2, hi2 = (float(p) for p in parts[:4])
        n = int(parts[4])
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return (lo1, hi1, lo2, hi2, n)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--b1", type=float, required=True)
    common.add_argument("--b2", type=float, required=True)
    common.add_argument("--k1", type=float, default=None)
    common.add_argument("--k2", type=float, default=None)
    common.add_argument("--step", type=float, default=1e-3)
    common.add_argument("--t-end", dest="t_end", type=float, default=100.0)
    common.add_argument("--grid-n", dest="grid_n", type=int, default=512)
    common.add_argument("--format", dest="out_format", choices=("json", "csv", "svg"))
    common.add_argument("--out", dest="out_path", default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--sweep", type=_parse_sweep, default=None)

    parser = argparse.ArgumentParser(
        prog="suslov",
        description=(
            "Level-surface topology, critical points, and flow portraits "
            "of the reduced Suslov system"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    help_by_command = {
        "classify": "region of (k1, k2) with the quadratic discriminant",
        "critical-points": "closed-form equilibria with stability types",
        "topology": "genus and Euler characteristic of S_k by two routes",
        "simulate": "RK4 trajectory CSV with a drift summary JSON",
        "project": "flat-torus SVG portrait of U_k, orbits, equilibria",
        "sweep": "region/topology atlas over a k-rectangle plus diagram",
    }
    for name in _COMMANDS:
        sub.add_parser(name, parents=[common], help=help_by_command[name])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    config = RunConfig(
        command=args.command,
        b1=args.b1,
        b2=args.b2,
        k1=args.k1,
        k2=args.k2,
        step=args.step,
        t_end=args.t_end,
        grid_n=args.grid_n,
        out_format=args.out_format,
        out_path=args.out_path,
        seed=args.seed,
        sweep=args.sweep,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
