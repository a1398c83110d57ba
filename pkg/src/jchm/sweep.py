"""Phase-diagram sweeps over the (log10 kappa, l mu - omega) plane.

The x axis is log10 of the hopping amplitude; the y axis is l mu - omega, so
larger y means a softer cavity.  Cells are classified independently and in a
fixed order, which keeps grid output deterministic and makes the sweep safe
to parallelise over processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Sequence

import numpy as np

from .classify import (
    DEFAULT_PIN_FRACTION,
    DEFAULT_TOL_CONV,
    IndeterminatePhaseError,
    PhasePoint,
    classify_point,
    default_n_max,
)
from .eigen import DEFAULT_TOL
from .groundstate import PsiSearchSpec, minimize_over_psi
from .hilbert import build_space
from .operators import ModelParams

BOUNDARY_TOL = 1e-3


def params_for(l: int, x: float, y: float, *, z: int = 2, mu: float = 1.0,
               delta: float = 0.0) -> ModelParams:
    """Model parameters at diagram coordinates (x, y).

    kappa = 10**x and omega = l mu - y; the atomic splitting follows from the
    detuning delta = omega - Omega.  Raises ValueError when omega or Omega
    would not be positive.
    """
    omega = l * mu - y
    if omega <= 0:
        raise ValueError(f"omega = l mu - y = {omega:g} must be positive")
    Omega = omega - delta
    if Omega <= 0:
        raise ValueError(f"Omega = omega - delta = {Omega:g} must be positive")
    return ModelParams(l=l, omega=omega, Omega=Omega, mu=mu, kappa=10.0 ** x, z=z)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular diagram grid, linspace in both coordinates."""

    l: int
    x_lo: float
    x_hi: float
    nx: int
    y_lo: float
    y_hi: float
    ny: int
    z: int = 2
    mu: float = 1.0
    delta: float = 0.0

    def __post_init__(self) -> None:
        if not 1 <= self.l <= 4:
            raise ValueError(f"l must be between 1 and 4, got {self.l}")
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"need nx, ny >= 2, got nx={self.nx}, ny={self.ny}")
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError("grid ranges must be increasing")

    @classmethod
    def default(cls, l: int, nx: int = 81, ny: int = 101, **overrides) -> "GridSpec":
        """Reference diagram window: x in [-4, -0.2]; y up to 0.5 for the
        single-photon model and 0.3 above, where the forbidden region opens."""
        y_lo, y_hi = (-2.0, 0.5) if l == 1 else (-1.5, 0.3)
        values = dict(l=l, x_lo=-4.0, x_hi=-0.2, nx=nx,
                      y_lo=y_lo, y_hi=y_hi, ny=ny)
        values.update(overrides)
        return cls(**values)

    @property
    def x_values(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.nx)

    @property
    def y_values(self) -> np.ndarray:
        return np.linspace(self.y_lo, self.y_hi, self.ny)

    def params_at(self, x: float, y: float) -> ModelParams:
        return params_for(self.l, x, y, z=self.z, mu=self.mu, delta=self.delta)


@dataclass(frozen=True)
class PhaseGrid:
    """Classified grid; cells[ix][iy] matches (x_values[ix], y_values[iy])."""

    spec: GridSpec
    cells: tuple[tuple[PhasePoint, ...], ...]

    def cell(self, ix: int, iy: int) -> PhasePoint:
        return self.cells[ix][iy]

    def iter_cells(self) -> Iterator[PhasePoint]:
        for column in self.cells:
            yield from column

    def token_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for pt in self.iter_cells():
            counts[pt.token] = counts.get(pt.token, 0) + 1
        return counts

    def mi_levels(self) -> set[int]:
        """Distinct L values among Mott-insulator cells."""
        return {pt.label.L for pt in self.iter_cells()
                if pt.label is not None and pt.label.L is not None}


def classify_at(l: int, x: float, y: float, *, z: int = 2, mu: float = 1.0,
                delta: float = 0.0, base_n_max: int | None = None,
                psi_spec: PsiSearchSpec | None = None,
                schedule: Sequence[int] | None = None,
                tol_conv: float = DEFAULT_TOL_CONV,
                pin_fraction: float = DEFAULT_PIN_FRACTION,
                tol: float = DEFAULT_TOL) -> PhasePoint:
    """classify_point at diagram coordinates, reporting the exact (x, y) given."""
    params = params_for(l, x, y, z=z, mu=mu, delta=delta)
    pt = classify_point(params, base_n_max, psi_spec, schedule=schedule,
                        tol_conv=tol_conv, pin_fraction=pin_fraction, tol=tol)
    return replace(pt, x=float(x), y=float(y))


def _evaluate_cell(task) -> PhasePoint:
    """Worker for one grid cell; never raises, records failures in the cell."""
    (spec, base_n_max, psi_spec, schedule, tol_conv, pin_fraction, tol,
     x, y) = task
    try:
        return classify_at(spec.l, x, y, z=spec.z, mu=spec.mu, delta=spec.delta,
                           base_n_max=base_n_max, psi_spec=psi_spec,
                           schedule=schedule, tol_conv=tol_conv,
                           pin_fraction=pin_fraction, tol=tol)
    except ValueError as err:
        return PhasePoint(x=float(x), y=float(y), psi_star=float("nan"),
                          energy=float("nan"), l_expect=float("nan"),
                          label=None, n_max_used=0, converged=False,
                          note=f"invalid: {err}")
    except IndeterminatePhaseError as err:
        report = err.report
        energy = report.energies[-1] if report else float("nan")
        l_expect = report.l_expects[-1] if report else float("nan")
        n_used = report.n_max_sequence[-1] if report else 0
        return PhasePoint(x=float(x), y=float(y), psi_star=0.0, energy=energy,
                          l_expect=l_expect, label=None, n_max_used=n_used,
                          converged=False, note=f"indeterminate: {err}",
                          report=report)


def run_grid(spec: GridSpec, base_n_max: int | None = None,
             psi_spec: PsiSearchSpec | None = None, *, jobs: int = 1,
             schedule: Sequence[int] | None = None,
             tol_conv: float = DEFAULT_TOL_CONV,
             pin_fraction: float = DEFAULT_PIN_FRACTION,
             tol: float = DEFAULT_TOL) -> PhaseGrid:
    """Classify every cell of the grid.

    Unclassifiable cells are recorded (tokens INVALID / INDET), never fatal.
    The result is independent of `jobs`.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be positive, got {jobs}")
    if base_n_max is None:
        base_n_max = default_n_max(spec.l)
    if base_n_max < spec.l + 2:
        # a bad truncation is a configuration error, not a per-cell condition
        raise ValueError(f"n_max must be at least l + 2 = {spec.l + 2}, got {base_n_max}")
    if psi_spec is None:
        psi_spec = PsiSearchSpec.for_truncation(base_n_max)

    xs = spec.x_values
    ys = spec.y_values
    tasks = [
        (spec, base_n_max, psi_spec, schedule, tol_conv, pin_fraction, tol, x, y)
        for x in xs for y in ys
    ]
    if jobs == 1:
        flat = [_evaluate_cell(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (8 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flat = list(pool.map(_evaluate_cell, tasks, chunksize=chunk))
    cells = tuple(
        tuple(flat[ix * spec.ny + iy] for iy in range(spec.ny))
        for ix in range(spec.nx)
    )
    return PhaseGrid(spec=spec, cells=cells)


def refine_boundary(evaluate: Callable[[float], PhasePoint], lo: float,
                    hi: float, pair: tuple[str, str] | None = None,
                    tol: float = BOUNDARY_TOL) -> float:
    """Bisect the coordinate where the phase token changes.

    evaluate maps a scalar coordinate to a PhasePoint.  The bracket is
    [lo, hi]; the returned coordinate separates points sharing evaluate(lo)'s
    token from everything else.  With `pair` given, the bracket ends must
    carry exactly those two tokens (in order), else ValueError.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    token_lo = evaluate(lo).token
    token_hi = evaluate(hi).token
    if token_lo == token_hi:
        raise ValueError(f"both bracket ends classify as {token_lo}; nothing to bisect")
    if pair is not None and (token_lo, token_hi) != tuple(pair):
        raise ValueError(
            f"bracket ends are ({token_lo}, {token_hi}), expected {tuple(pair)}"
        )
    while abs(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        if evaluate(mid).token == token_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def energy_scan(l: int, y: float, x_points: Sequence[float], *, z: int = 2,
                mu: float = 1.0, delta: float = 0.0,
                base_n_max: int | None = None,
                psi_spec: PsiSearchSpec | None = None,
                tol: float = DEFAULT_TOL) -> list[tuple[float, float, float]]:
    """Minimised ground energy along a horizontal cut of the diagram.

    Returns (x, energy, psi_star) per requested x.  Exposes the kink where
    the minimiser leaves psi = 0 at the insulator-superfluid boundary.
    """
    if base_n_max is None:
        base_n_max = default_n_max(l)
    if psi_spec is None:
        psi_spec = PsiSearchSpec.for_truncation(base_n_max)
    space = build_space(l, base_n_max)
    out: list[tuple[float, float, float]] = []
    for x in x_points:
        params = params_for(l, x, y, z=z, mu=mu, delta=delta)
        sol = minimize_over_psi(params, space, psi_spec, tol)
        out.append((float(x), sol.energy, sol.psi_star))
    return out


@dataclass(frozen=True)
class BoundarySegment:
    """Connected polyline separating two phases on a classified grid.

    pair holds the two tokens in sorted order; points are midpoints of the
    cell-centre edges the boundary crosses.
    """

    pair: tuple[str, str]
    points: tuple[tuple[float, float], ...]


def extract_boundary(grid: PhaseGrid) -> list[BoundarySegment]:
    """Token changes between 4-neighbour cells, grouped into polylines.

    Each crossing contributes the midpoint of the two cell centres; crossings
    of the same token pair that share a cell are chained into one segment.
    Segments are ordered by pair, then by their smallest point.
    """
    xs = grid.spec.x_values
    ys = grid.spec.y_values
    # edge records: (pair, midpoint, cells touched)
    edges: list[tuple[tuple[str, str], tuple[float, float],
                      tuple[tuple[int, int], tuple[int, int]]]] = []
    for ix in range(grid.spec.nx):
        for iy in range(grid.spec.ny):
            here = grid.cell(ix, iy).token
            if ix + 1 < grid.spec.nx:
                other = grid.cell(ix + 1, iy).token
                if other != here:
                    pair = tuple(sorted((here, other)))
                    mid = (0.5 * (xs[ix] + xs[ix + 1]), float(ys[iy]))
                    edges.append((pair, mid, ((ix, iy), (ix + 1, iy))))
            if iy + 1 < grid.spec.ny:
                other = grid.cell(ix, iy + 1).token
                if other != here:
                    pair = tuple(sorted((here, other)))
                    mid = (float(xs[ix]), 0.5 * (ys[iy] + ys[iy + 1]))
                    edges.append((pair, mid, ((ix, iy), (ix, iy + 1))))

    # union-find over edges of the same pair sharing a cell
    parent = list(range(len(edges)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_cell: dict[tuple[tuple[str, str], tuple[int, int]], int] = {}
    for i, (pair, _, cells) in enumerate(edges):
        for cell in cells:
            key = (pair, cell)
            if key in by_cell:
                ra, rb = find(by_cell[key]), find(i)
                if ra != rb:
                    parent[rb] = ra
            else:
                by_cell[key] = i

    groups: dict[int, list[int]] = {}
    for i in range(len(edges)):
        groups.setdefault(find(i), []).append(i)

    segments: list[BoundarySegment] = []
    for members in groups.values():
        pair = edges[members[0]][0]
        pts = sorted(edges[i][1] for i in members)
        # greedy nearest-neighbour walk from the smallest point gives a
        # deterministic, mostly monotone polyline
        path = [pts[0]]
        rest = pts[1:]
        while rest:
            px, py = path[-1]
            nxt = min(rest, key=lambda q: (q[0] - px) ** 2 + (q[1] - py) ** 2)
            path.append(nxt)
            rest.remove(nxt)
        segments.append(BoundarySegment(pair=pair, points=tuple(path)))
    segments.sort(key=lambda s: (s.pair, s.points[0]))
    return segments
