"""Brute-force direct-summation oracles.

Written before (and independently of) the vectorized package code.  Every
oracle is a plain Python loop over cells, using only the shared discrete
model: midpoint quadrature, cell-in-region-by-center, analytic 1D power
antiderivatives, 8x oversampled midpoint for 2D weight cells.
"""

from __future__ import annotations

import math


def dist(p, q) -> float:
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(p, q)))


def cells_in_region(nodes, center, radius) -> list[int]:
    if center is None:
        return list(range(len(nodes)))
    return [i for i, p in enumerate(nodes) if dist(p, center) < radius]


def integrate(nodes, values, cell_measure, center=None, radius=None) -> float:
    total = 0.0
    for i in cells_in_region(nodes, center, radius):
        total += values[i] * cell_measure
    return total


def power_antiderivative(t: float, gamma: float) -> float:
    # odd antiderivative of |t|^gamma, valid for gamma > -1
    return math.copysign(abs(t) ** (gamma + 1.0) / (gamma + 1.0), t)


def power_cell_integral_1d(lo: float, hi: float, x0: float, gamma: float) -> float:
    if gamma > -1.0:
        return power_antiderivative(hi - x0, gamma) - power_antiderivative(lo - x0, gamma)
    if lo - x0 <= 0.0 <= hi - x0:
        # non-integrable singular cell: midpoint fallback
        mid = 0.5 * (lo + hi)
        return abs(mid - x0) ** gamma * (hi - lo)
    return power_antiderivative(hi - x0, gamma) - power_antiderivative(lo - x0, gamma)


def weight_cell_integrals(nodes, h, weight_eval, dim, analytic_1d=None):
    """Per-cell integrals of a weight.

    analytic_1d: optional (x0, gamma) for exact 1D power integration;
    otherwise 8x oversampled midpoint in every dimension.
    """
    out = []
    for p in nodes:
        if dim == 1 and analytic_1d is not None:
            x0, gamma = analytic_1d
            out.append(power_cell_integral_1d(p[0] - h / 2, p[0] + h / 2, x0, gamma))
        else:
            k = 8
            s = 0.0
            if dim == 1:
                for i in range(k):
                    x = p[0] - h / 2 + (i + 0.5) * h / k
                    s += weight_eval((x,)) * (h / k)
            else:
                for i in range(k):
                    for j in range(k):
                        x = p[0] - h / 2 + (i + 0.5) * h / k
                        y = p[1] - h / 2 + (j + 0.5) * h / k
                        s += weight_eval((x, y)) * (h / k) ** 2
            out.append(s)
    return out


def weight_measure(nodes, wcells, center=None, radius=None) -> float:
    total = 0.0
    for i in cells_in_region(nodes, center, radius):
        total += wcells[i]
    return total


def lp_weighted_norm(nodes, values, wcells, p, center=None, radius=None) -> float:
    total = 0.0
    for i in cells_in_region(nodes, center, radius):
        total += abs(values[i]) ** p * wcells[i]
    return total ** (1.0 / p)


def weak_lp_weighted_norm(nodes, values, wcells, p, center=None, radius=None) -> float:
    """sup over t of t * w({|f| >= t})^{1/p}, t running over the field values
    (the left-limit realization of the strict-level-set sup)."""
    sel = cells_in_region(nodes, center, radius)
    best = 0.0
    for i in sel:
        t = abs(values[i])
        if t == 0.0:
            continue
        mass = 0.0
        for j in sel:
            if abs(values[j]) >= t:
                mass += wcells[j]
        best = max(best, t * mass ** (1.0 / p))
    return best


def weak_norm_dense_t(nodes, values, wcells, p, t_grid, center=None, radius=None) -> float:
    sel = cells_in_region(nodes, center, radius)
    best = 0.0
    for t in t_grid:
        if t <= 0:
            continue
        mass = 0.0
        for j in sel:
            if abs(values[j]) > t:
                mass += wcells[j]
        best = max(best, t * mass ** (1.0 / p))
    return best


def morrey_norm(nodes, values, wcells, p, phi_eval, balls, weak=False):
    """max over balls of phi^{-1} * w(region)^{-1/p} * inner norm; returns
    (value, index of attaining ball), first index winning ties."""
    best, best_i = 0.0, -1
    for bi, (center, radius) in enumerate(balls):
        wm = weight_measure(nodes, wcells, center, radius)
        if wm <= 0.0:
            continue
        if weak:
            inner = weak_lp_weighted_norm(nodes, values, wcells, p, center, radius)
        else:
            inner = lp_weighted_norm(nodes, values, wcells, p, center, radius)
        val = inner / (phi_eval(center, radius) * wm ** (1.0 / p))
        if val > best:
            best, best_i = val, bi
    return best, best_i


def maximal(nodes, values, cell_measure, dim, x, radii) -> float:
    best = 0.0
    vol = {1: 2.0, 2: math.pi}[dim]
    for t in radii:
        s = 0.0
        for i, p in enumerate(nodes):
            if dist(p, x) < t:
                s += abs(values[i]) * cell_measure
        best = max(best, s / (vol * t**dim))
    return best


def ap_expression(nodes, wcells, wconj_cells, p, center, radius, cell_measure):
    """A_p product over one ball, averaging against the measure of the
    selected cell union.  Returns None for balls containing no cell."""
    sel = cells_in_region(nodes, center, radius)
    if not sel:
        return None
    meas = len(sel) * cell_measure
    iw = 0.0
    iconj = 0.0
    for i in sel:
        iw += wcells[i]
        iconj += wconj_cells[i]
    return (iw / meas) * (iconj / meas) ** (p - 1.0)


def hardy_best_constant(ts, v1, v2, w) -> float:
    """Discrete eqH2 sup on a shared grid: suffix ess sup of v1, trapezoid
    cumulative integral of w/sup, sup over grid r of v2 * integral."""
    K = len(ts)
    sup1 = [0.0] * K
    run = 0.0
    for i in range(K - 1, -1, -1):
        run = max(run, v1[i])
        sup1[i] = run
    integrand = [w[i] / sup1[i] if sup1[i] > 0 else (0.0 if w[i] == 0 else math.inf)
                 for i in range(K)]
    best = 0.0
    for i in range(K):
        acc = 0.0
        for j in range(i, K - 1):
            acc += 0.5 * (integrand[j] + integrand[j + 1]) * (ts[j + 1] - ts[j])
        best = max(best, v2[i] * acc)
    return best


def condition_213_powerlaw_constant(lam: float, n: int, p: float) -> float:
    """Closed-form fitted constant for w == 1 and phi = r^{(lam-n)/p}."""
    return p / (n - lam)


def lemma22_sides(nodes, dists, h_n, green_deriv, f, g, Mf, Mg):
    """Double sums over D = {(i,j): |x_i - y_j| > d(x_i)} for Lemma 2.2."""
    lhs = 0.0
    rhs1 = 0.0
    rhs2 = 0.0
    m = len(nodes)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if dist(nodes[i], nodes[j]) > dists[i]:
                lhs += abs(green_deriv(nodes[i], nodes[j]) * f[j] * g[i]) * h_n * h_n
                rhs1 += Mf[j] * abs(g[i]) * h_n * h_n
                rhs2 += Mg[i] * abs(f[j]) * h_n * h_n
    return lhs, rhs1 + rhs2
