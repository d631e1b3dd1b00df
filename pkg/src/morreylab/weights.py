"""Analytic weight families and Muckenhoupt A_p constant estimation.

The family {constant, |x - x0|^gamma, products thereof} is closed under the
powers needed by the A_p expression (w -> w^{-1/(p-1)}), evaluates pointwise,
and integrates over grid cells: exactly in 1D via the |t|^{gamma+1}/(gamma+1)
antiderivative, by 8x oversampled midpoint in 2D.

Cells on which the exact 1D integral diverges (conjugate exponent <= -1
straddling the singular center) fall back to the midpoint value so that
out-of-class weights produce finite, refinement-divergent estimates instead
of immediate infinities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import Ball, Grid, region_mask

__all__ = [
    "ConstantWeight",
    "PowerWeight",
    "ProductWeight",
    "Weight",
    "ApEstimate",
    "MembershipReport",
    "conjugate_weight",
    "weight_cell_integrals",
    "weight_measure",
    "ball_measure",
    "ap_constant",
    "ap_membership",
    "ap_sweep",
]

_OVERSAMPLE = 8


@dataclass(frozen=True)
class ConstantWeight:
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("constant weight must be positive")

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(pts).shape[0], self.c)

    def pow(self, s: float) -> "ConstantWeight":
        return ConstantWeight(self.c**s)

    @property
    def label(self) -> str:
        return f"const({self.c:g})"


@dataclass(frozen=True)
class PowerWeight:
    """w(x) = |x - center|^gamma; local integrability needs gamma > -dim."""

    center: tuple[float, ...]
    gamma: float

    def __post_init__(self):
        if self.gamma <= -len(self.center):
            raise ValueError("power weight needs gamma > -n for local integrability")

    @property
    def dim(self) -> int:
        return len(self.center)

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d = np.linalg.norm(pts - np.asarray(self.center)[None, :], axis=1)
        with np.errstate(divide="ignore"):
            return d**self.gamma

    def pow(self, s: float):
        g = self.gamma * s
        if g <= -self.dim:
            return _RawPower(self.center, g)
        return PowerWeight(self.center, g)

    @property
    def label(self) -> str:
        return f"|x-{self.center}|^{self.gamma:g}"


@dataclass(frozen=True)
class _RawPower(PowerWeight):
    """Power with a non-integrable exponent (appears only as an A_p
    conjugate); singular cells are integrated by midpoint fallback."""

    def __post_init__(self):  # skip the integrability guard
        pass


@dataclass(frozen=True)
class ProductWeight:
    w1: "Weight"
    w2: "Weight"

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        return self.w1(pts) * self.w2(pts)

    def pow(self, s: float) -> "ProductWeight":
        return ProductWeight(self.w1.pow(s), self.w2.pow(s))

    @property
    def label(self) -> str:
        return f"{self.w1.label}*{self.w2.label}"


Weight = ConstantWeight | PowerWeight | ProductWeight


def conjugate_weight(w: Weight, p: float) -> Weight:
    """w^{-1/(p-1)}, the second factor of the A_p expression (p > 1)."""
    if p <= 1:
        raise ValueError("invalid exponent")
    return w.pow(-1.0 / (p - 1.0))


def _power_antiderivative(t: np.ndarray, gamma: float) -> np.ndarray:
    return np.sign(t) * np.abs(t) ** (gamma + 1.0) / (gamma + 1.0)


def _power_cells_1d(lo: np.ndarray, hi: np.ndarray, x0: float, gamma: float) -> np.ndarray:
    if gamma > -1.0:
        return _power_antiderivative(hi - x0, gamma) - _power_antiderivative(lo - x0, gamma)
    straddle = (lo <= x0) & (x0 <= hi)
    mid = 0.5 * (lo + hi)
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = _power_antiderivative(hi - x0, gamma) - _power_antiderivative(lo - x0, gamma)
        fallback = np.abs(mid - x0) ** gamma * (hi - lo)
    return np.where(straddle, fallback, exact)


def _oversampled_cells(w: Weight, grid: Grid) -> np.ndarray:
    k = _OVERSAMPLE
    h = grid.h
    offs = (np.arange(k) + 0.5) / k - 0.5
    if grid.dim == 1:
        x = grid.nodes[:, 0][:, None] + offs[None, :] * h
        vals = w(x.reshape(-1, 1)).reshape(-1, k)
        return vals.sum(axis=1) * (h / k)
    ox, oy = np.meshgrid(offs, offs, indexing="ij")
    sub = np.column_stack([ox.ravel(), oy.ravel()]) * h
    pts = grid.nodes[:, None, :] + sub[None, :, :]
    vals = w(pts.reshape(-1, 2)).reshape(-1, k * k)
    return vals.sum(axis=1) * (h / k) ** 2


@lru_cache(maxsize=256)
def _cells_cached(w: Weight, grid: Grid) -> np.ndarray:
    if isinstance(w, ConstantWeight):
        out = np.full(grid.n_cells, w.c * grid.cell_measure)
    elif isinstance(w, PowerWeight) and grid.dim == 1:
        x = grid.nodes[:, 0]
        out = _power_cells_1d(x - grid.h / 2, x + grid.h / 2, w.center[0], w.gamma)
    elif isinstance(w, ProductWeight) and isinstance(w.w1, ConstantWeight):
        out = w.w1.c * _cells_cached(w.w2, grid)
    elif isinstance(w, ProductWeight) and isinstance(w.w2, ConstantWeight):
        out = w.w2.c * _cells_cached(w.w1, grid)
    else:
        out = _oversampled_cells(w, grid)
    out.setflags(write=False)
    return out


def weight_cell_integrals(w: Weight, grid: Grid) -> np.ndarray:
    """integral of w over each masked cell (vector aligned with grid.nodes)."""
    return _cells_cached(w, grid)


def weight_measure(w: Weight, region: Ball | None, grid: Grid) -> float:
    """w(region ∩ domain) over the cells whose centers lie in the region."""
    sel = region_mask(grid, region)
    if not sel.any():
        raise ValueError("empty region")
    return float(weight_cell_integrals(w, grid)[sel].sum())


def ball_measure(w: Weight, x, r: float, dim: int, quad: int = 96) -> float:
    """Full-space w(B(x, r)) for the analytic family (used by the phi
    condition checkers, where balls are not clipped to the domain).

    1D: exact antiderivatives.  2D: midpoint polar quadrature around x.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if isinstance(w, ConstantWeight):
        vol = 2.0 * r if dim == 1 else np.pi * r**2
        return w.c * vol
    if dim == 1 and isinstance(w, PowerWeight):
        arr = _power_cells_1d(np.array([x[0] - r]), np.array([x[0] + r]), w.center[0], w.gamma)
        return float(arr[0])
    # generic numeric path
    if dim == 1:
        t = x[0] - r + (np.arange(4 * quad) + 0.5) * (2 * r / (4 * quad))
        return float(w(t.reshape(-1, 1)).sum() * (2 * r / (4 * quad)))
    rho = (np.arange(quad) + 0.5) * (r / quad)
    th = (np.arange(2 * quad) + 0.5) * (2 * np.pi / (2 * quad))
    rr, tt = np.meshgrid(rho, th, indexing="ij")
    pts = np.column_stack([
        (x[0] + rr * np.cos(tt)).ravel(),
        (x[1] + rr * np.sin(tt)).ravel(),
    ])
    vals = w(pts).reshape(quad, 2 * quad)
    return float((vals * rho[:, None]).sum() * (r / quad) * (2 * np.pi / (2 * quad)))


def _cell_extrema(w: Weight, grid: Grid, sel: np.ndarray) -> tuple[float, float]:
    """(ess inf, ess sup) of w over the selected cell union: analytic for
    constants and pure powers; for composites, extremes over the same
    oversampled subnodes as the cell integrals (keeps avg >= inf exact)."""
    if isinstance(w, ConstantWeight):
        return w.c, w.c
    if isinstance(w, ProductWeight) and isinstance(w.w1, ConstantWeight):
        lo, hi = _cell_extrema(w.w2, grid, sel)
        return w.w1.c * lo, w.w1.c * hi
    if isinstance(w, ProductWeight) and isinstance(w.w2, ConstantWeight):
        lo, hi = _cell_extrema(w.w1, grid, sel)
        return w.w2.c * lo, w.w2.c * hi
    nodes = grid.nodes[sel]
    if isinstance(w, PowerWeight):
        c = np.asarray(w.center)
        d = np.linalg.norm(nodes - c[None, :], axis=1)
        half = grid.h / 2 if grid.dim == 1 else grid.h / np.sqrt(2.0)
        dmin = np.maximum(d - half, 0.0)
        dmax = d + half
        if w.gamma >= 0:
            return float(dmin.min() ** w.gamma), float(dmax.max() ** w.gamma)
        with np.errstate(divide="ignore"):
            return float(dmax.max() ** w.gamma), float(dmin.min() ** w.gamma)
    k = _OVERSAMPLE
    offs = (np.arange(k) + 0.5) / k - 0.5
    if grid.dim == 1:
        sub = nodes[:, 0][:, None] + offs[None, :] * grid.h
        vals = w(sub.reshape(-1, 1))
    else:
        ox, oy = np.meshgrid(offs, offs, indexing="ij")
        shift = np.column_stack([ox.ravel(), oy.ravel()]) * grid.h
        vals = w((nodes[:, None, :] + shift[None, :, :]).reshape(-1, 2))
    return float(vals.min()), float(vals.max())


@dataclass(frozen=True)
class ApEstimate:
    p: float
    value: float
    attaining_ball: Ball
    n_balls: int

    def __post_init__(self):
        if np.isfinite(self.value) and self.value < 1.0 - 1e-9:
            raise ValueError("A_p expression fell below 1; quadrature is inconsistent")


def _admissible(grid: Grid, balls: list[Ball]) -> list[Ball]:
    dom = grid.domain
    out = []
    for b in balls:
        c = np.asarray(b.center)
        dist = dom.boundary_distance(c if dom.dim > 1 else c[0:1])
        dist = float(np.atleast_1d(dist)[0])
        if b.radius <= dist:
            out.append(b)
    return out


def ap_constant(w: Weight, p: float, grid: Grid, sweep: list[Ball]) -> ApEstimate:
    """Discrete A_p constant: max over the admissible sweep (balls contained
    in the domain) of the A_p product; both averages use the same cell set.

    p = 1 uses the A_1 form sup_B avg_B(w) / ess inf_B(w).
    """
    if p < 1:
        raise ValueError("invalid exponent")
    balls = _admissible(grid, sweep)
    if not balls:
        raise ValueError("empty region")
    wc = weight_cell_integrals(w, grid)
    wconj = weight_cell_integrals(conjugate_weight(w, p), grid) if p > 1 else None
    best = -np.inf
    best_ball = balls[0]
    for b in balls:
        sel = region_mask(grid, b)
        m = int(sel.sum())
        if m == 0:
            continue
        meas = m * grid.cell_measure
        avg_w = wc[sel].sum() / meas
        if p > 1:
            val = avg_w * (wconj[sel].sum() / meas) ** (p - 1.0)
        else:
            lo, _ = _cell_extrema(w, grid, sel)
            val = avg_w / lo if lo > 0 else np.inf
        if val > best:
            best, best_ball = val, b
    if best == -np.inf:
        raise ValueError("empty region")
    return ApEstimate(p=p, value=float(best), attaining_ball=best_ball, n_balls=len(balls))


def _nested_radii(r_max: float, r_min: float, per_octave: int = 4) -> np.ndarray:
    from .geometry import nested_log_radii

    return nested_log_radii(r_max, r_min, per_octave)


def ap_sweep(grid: Grid, w: Weight, centers_per_axis: int = 9,
             per_octave: int = 4) -> list[Ball]:
    """Sweep for A_p estimation: coarse sub-grid centers plus balls centered
    at the weight's singular center, nested radii from the largest inscribed
    radius down to one cell width."""
    from .geometry import sweep_centers

    centers = [tuple(float(v) for v in c) for c in sweep_centers(grid, centers_per_axis)]
    if isinstance(w, PowerWeight):
        centers.append(tuple(float(v) for v in w.center))
    elif isinstance(w, ProductWeight):
        for part in (w.w1, w.w2):
            if isinstance(part, PowerWeight):
                centers.append(tuple(float(v) for v in part.center))
    balls = []
    for c in centers:
        arr = np.asarray(c, dtype=float)
        dist = float(np.atleast_1d(
            grid.domain.boundary_distance(arr if grid.dim > 1 else arr[0:1]))[0])
        if dist <= grid.h:
            continue
        for r in _nested_radii(dist, grid.h, per_octave):
            balls.append(Ball(c, float(r)))
    return balls


@dataclass(frozen=True)
class MembershipReport:
    in_class: bool
    p: float
    gamma: float
    criterion: str
    estimate: ApEstimate | None = None


def _power_gamma(w: Weight) -> float:
    if isinstance(w, ConstantWeight):
        return 0.0
    if isinstance(w, PowerWeight):
        return w.gamma
    raise ValueError("analytic classification unavailable; use ap_constant")


def ap_membership(w: Weight, p: float, grid: Grid | None = None,
                  sweep: list[Ball] | None = None) -> MembershipReport:
    """Power-weight A_p classification: -n < gamma < n(p-1) for p > 1,
    -n < gamma <= 0 for p = 1.  Attaches a numeric estimate when a grid is
    supplied, for cross-validation."""
    if p < 1:
        raise ValueError("invalid exponent")
    gamma = _power_gamma(w)
    if isinstance(w, ConstantWeight):
        n = grid.dim if grid is not None else 1
    else:
        n = w.dim
    if p > 1:
        ok = -n < gamma < n * (p - 1.0)
        crit = f"-{n} < gamma < {n * (p - 1.0):g}"
    else:
        ok = -n < gamma <= 0.0
        crit = f"-{n} < gamma <= 0"
    est = None
    if grid is not None:
        est = ap_constant(w, p, grid, sweep or ap_sweep(grid, w))
    return MembershipReport(in_class=bool(ok), p=p, gamma=gamma, criterion=crit,
                            estimate=est)
