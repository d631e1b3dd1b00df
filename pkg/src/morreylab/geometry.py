"""Model domains, uniform grids, sampled fields and midpoint quadrature.

Everything downstream (weights, norms, operators, the solver) computes on the
cell-center grids defined here.  Conventions used throughout the package:

* a cell belongs to a region iff its *center* does (open-ball membership,
  ``|node - center| < r``),
* quadrature is the midpoint rule ``sum f(node) * cell_measure``,
* grid nodes are strictly interior to their cells, so no node falls exactly
  on a domain boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "Interval",
    "Disk",
    "Ball",
    "Grid",
    "SampledField",
    "integrate",
    "ball_sweep",
]


@dataclass(frozen=True)
class Interval:
    """1D model domain (a, b)."""

    a: float
    b: float

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("interval needs b > a")

    @property
    def dim(self) -> int:
        return 1

    @property
    def diameter(self) -> float:
        return self.b - self.a

    @property
    def volume(self) -> float:
        return self.b - self.a

    @property
    def bounding_box(self) -> tuple[tuple[float, float], ...]:
        return ((self.a, self.b),)

    def boundary_distance(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.minimum(x - self.a, self.b - x)

    def contains(self, x: np.ndarray) -> np.ndarray:
        return self.boundary_distance(x) > 0.0


@dataclass(frozen=True)
class Disk:
    """2D model domain: open disk of given center and radius."""

    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk needs radius > 0")

    @property
    def dim(self) -> int:
        return 2

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    @property
    def volume(self) -> float:
        return np.pi * self.radius**2

    @property
    def bounding_box(self) -> tuple[tuple[float, float], ...]:
        cx, cy = self.center
        r = self.radius
        return ((cx - r, cx + r), (cy - r, cy + r))

    def boundary_distance(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = np.atleast_2d(x)
        d = self.radius - np.hypot(pts[:, 0] - self.center[0], pts[:, 1] - self.center[1])
        return d[0] if single else d

    def contains(self, x: np.ndarray) -> np.ndarray:
        return self.boundary_distance(x) > 0.0


Domain = Interval | Disk


@dataclass(frozen=True)
class Ball:
    """Open ball B(center, radius); in 1D the center is a length-1 tuple."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("ball needs radius > 0")


def _as_point(x, dim: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.shape != (dim,):
        raise ValueError(f"point of dimension {p.shape} on a {dim}D domain")
    return p


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform cell-centered grid over the bounding box of a domain.

    ``n`` cells per axis; cells outside the domain are masked out.  An
    explicit ``box`` may enlarge the embedding box (used for zero-extension
    tests); it must contain the domain's bounding box.
    """

    domain: Domain
    n: int
    box: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("grid needs n >= 2 cells per axis")

    @cached_property
    def _box(self) -> tuple[tuple[float, float], ...]:
        return self.box if self.box is not None else self.domain.bounding_box

    @cached_property
    def h(self) -> float:
        """Cell width (same along every axis; enforced via the box)."""
        widths = [(hi - lo) / self.n for lo, hi in self._box]
        if max(widths) - min(widths) > 1e-12 * max(widths):
            raise ValueError("embedding box must yield square cells")
        return widths[0]

    @property
    def dim(self) -> int:
        return self.domain.dim

    @cached_property
    def cell_measure(self) -> float:
        return self.h**self.dim

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        """Cell-center coordinates along each axis."""
        out = []
        for lo, hi in self._box:
            out.append(lo + (np.arange(self.n) + 0.5) * (hi - lo) / self.n)
        return tuple(out)

    @cached_property
    def lattice_nodes(self) -> np.ndarray:
        """All cell centers of the embedding box, shape (n**dim, dim)."""
        if self.dim == 1:
            return self.axes[0][:, None]
        xx, yy = np.meshgrid(self.axes[0], self.axes[1], indexing="ij")
        return np.column_stack([xx.ravel(), yy.ravel()])

    @cached_property
    def lattice_mask(self) -> np.ndarray:
        return np.asarray(self.domain.contains(
            self.lattice_nodes[:, 0] if self.dim == 1 else self.lattice_nodes))

    @cached_property
    def nodes(self) -> np.ndarray:
        """Masked cell centers, shape (n_cells, dim)."""
        return self.lattice_nodes[self.lattice_mask]

    @property
    def n_cells(self) -> int:
        return int(self.lattice_mask.sum())

    @cached_property
    def boundary_dist(self) -> np.ndarray:
        """dist(node, boundary) for every masked node."""
        x = self.nodes[:, 0] if self.dim == 1 else self.nodes
        return np.asarray(self.domain.boundary_distance(x))

    def in_ball(self, center, radius: float) -> np.ndarray:
        """Boolean mask over masked nodes: |node - center| < radius."""
        c = _as_point(center, self.dim)
        d = np.linalg.norm(self.nodes - c[None, :], axis=1)
        return d < radius

    def embed(self, values: np.ndarray, fill: float = 0.0) -> np.ndarray:
        """Scatter masked-cell values onto the full lattice (zero outside)."""
        flat = np.full(self.lattice_mask.shape, fill, dtype=float)
        flat[self.lattice_mask] = values
        return flat if self.dim == 1 else flat.reshape(self.n, self.n)

    def extract(self, lattice: np.ndarray) -> np.ndarray:
        return np.asarray(lattice).ravel()[self.lattice_mask]


@dataclass(frozen=True, eq=False)
class SampledField:
    """Real values on the masked cells of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_cells,):
            raise ValueError("values must match the grid's masked cells")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "SampledField":
        if grid.dim == 1:
            return cls(grid, np.asarray(func(grid.nodes[:, 0]), dtype=float))
        return cls(grid, np.asarray(func(grid.nodes[:, 0], grid.nodes[:, 1]), dtype=float))

    def __add__(self, other: "SampledField") -> "SampledField":
        return SampledField(self.grid, self.values + other.values)

    def __sub__(self, other: "SampledField") -> "SampledField":
        return SampledField(self.grid, self.values - other.values)

    def __mul__(self, c: float) -> "SampledField":
        return SampledField(self.grid, self.values * float(c))

    __rmul__ = __mul__

    def __abs__(self) -> "SampledField":
        return SampledField(self.grid, np.abs(self.values))


def region_mask(grid: Grid, region: Ball | None) -> np.ndarray:
    """Cells whose centers lie in the region (whole domain when None)."""
    if region is None:
        return np.ones(grid.n_cells, dtype=bool)
    return grid.in_ball(region.center, region.radius)


def integrate(f: SampledField, region: Ball | None = None) -> float:
    """Midpoint quadrature of f over region ∩ domain.

    Raises ValueError("empty region") when no cell center falls inside.
    """
    sel = region_mask(f.grid, region)
    if not sel.any():
        raise ValueError("empty region")
    return float(f.values[sel].sum() * f.grid.cell_measure)


def sweep_centers(grid: Grid, centers_per_axis: int) -> np.ndarray:
    """Cell-center-style uniform lattice of sweep centers inside the domain."""
    box = grid.domain.bounding_box
    axes = [lo + (np.arange(centers_per_axis) + 0.5) * (hi - lo) / centers_per_axis
            for lo, hi in box]
    if grid.dim == 1:
        pts = axes[0][:, None]
    else:
        xx, yy = np.meshgrid(axes[0], axes[1], indexing="ij")
        pts = np.column_stack([xx.ravel(), yy.ravel()])
    inside = grid.domain.contains(pts[:, 0] if grid.dim == 1 else pts)
    return pts[np.asarray(inside)]


def log_radii(r_min: float, r_max: float, count: int) -> np.ndarray:
    """Log-spaced radii in [r_min, r_max], last one exactly r_max."""
    if count < 2:
        raise ValueError("need at least 2 radii")
    r = np.geomspace(r_min, r_max, count)
    r[-1] = r_max
    return r


def nested_log_radii(r_max: float, r_min: float, per_octave: int = 4) -> np.ndarray:
    """r_max * 2^{-j/q} down to r_min, anchored at r_max: refining a grid
    (smaller r_min) only appends radii, so sups over these grids are
    monotone across refinement levels and their trends are comparable."""
    j = np.arange(int(np.ceil(per_octave * np.log2(r_max / r_min))) + 1)
    r = r_max * 2.0 ** (-j / per_octave)
    return r[r >= r_min * (1 - 1e-12)][::-1].copy()


def ball_sweep(grid: Grid, centers_per_axis: int, radii_count: int) -> list[Ball]:
    """Discretize sup over (x, r): centers on a uniform sub-grid of the
    domain times log-spaced radii in [h, diam], including r = diam exactly."""
    if centers_per_axis < 2 or radii_count < 2:
        raise ValueError("sweep counts must be >= 2")
    radii = log_radii(grid.h, grid.domain.diameter, radii_count)
    balls = []
    for c in sweep_centers(grid, centers_per_axis):
        for r in radii:
            balls.append(Ball(tuple(float(v) for v in c), float(r)))
    return balls
