import numpy as np
import pytest

from morreylab.corpus import build_corpus, smoothstep_indicator
from morreylab.geometry import Disk, Grid, Interval, SampledField
from morreylab.operators import maximal_field, operator_radius_grid
from morreylab.solver import residual_check, solve_dirichlet
from morreylab.spaces import multi_indices

UNIT = Interval(0.0, 1.0)
DISK = Disk((0.0, 0.0), 1.0)


def ones(g):
    return SampledField(g, np.ones(g.n_cells))


def test_interval_m1_exact():
    g = Grid(UNIT, 256)
    sol = solve_dirichlet(UNIT, 1, ones(g))
    x = g.nodes[:, 0]
    want = x * (1 - x) / 2
    assert np.abs(sol.u.values - want).max() / want.max() < 1e-10


def test_interval_m2_exact():
    g = Grid(UNIT, 256)
    sol = solve_dirichlet(UNIT, 2, ones(g))
    x = g.nodes[:, 0]
    want = x**2 * (1 - x) ** 2 / 24
    assert np.abs(sol.u.values - want).max() / want.max() < 1e-6
    mid = np.argmin(np.abs(x - 0.5))
    assert sol.u.values[mid] == pytest.approx(1 / 384, rel=1e-4)


def test_disk_m1_exact():
    g = Grid(DISK, 128)
    sol = solve_dirichlet(DISK, 1, ones(g))
    want = (1 - (g.nodes**2).sum(-1)) / 4
    assert np.abs(sol.u.values - want).max() / want.max() < 2e-4
    center = np.argmin((g.nodes**2).sum(-1))
    assert sol.u.values[center] == pytest.approx(0.25, rel=0.01)


def test_disk_m2_exact():
    g = Grid(DISK, 48)
    sol = solve_dirichlet(DISK, 2, ones(g))
    want = (1 - (g.nodes**2).sum(-1)) ** 2 / 64
    assert np.abs(sol.u.values - want).max() / want.max() < 1e-4


def test_jet_complete():
    g = Grid(UNIT, 64)
    sol = solve_dirichlet(UNIT, 2, ones(g))
    assert set(sol.jet) == set(multi_indices(1, 4))
    g2 = Grid(DISK, 32)
    sol2 = solve_dirichlet(DISK, 1, ones(g2))
    assert set(sol2.jet) == set(multi_indices(2, 2))


def test_jet_derivatives_interval_m1():
    g = Grid(UNIT, 256)
    sol = solve_dirichlet(UNIT, 1, ones(g))
    x = g.nodes[:, 0]
    assert np.abs(sol.jet[(1,)].values - (0.5 - x)).max() < 1e-8
    interior = (x > 0.05) & (x < 0.95)
    assert np.abs(sol.jet[(2,)].values + 1.0)[interior].max() < 1e-6


def test_residual_exact_cases():
    for dom, m, n, tol in ((UNIT, 1, 256, 1e-8), (UNIT, 2, 256, 1e-5),
                           (DISK, 1, 128, 0.05)):
        g = Grid(dom, n)
        f = ones(g)
        sol = solve_dirichlet(dom, m, f)
        assert residual_check(dom, m, sol, f) < tol * 1.0


def test_zero_field_zero_solution():
    g = Grid(UNIT, 64)
    f = SampledField(g, np.zeros(g.n_cells))
    sol = solve_dirichlet(UNIT, 1, f)
    for field in sol.jet.values():
        assert np.all(field.values == 0.0)


def test_linearity():
    g = Grid(UNIT, 64)
    rng = np.random.default_rng(0)
    f1 = SampledField(g, rng.normal(size=g.n_cells))
    f2 = SampledField(g, rng.normal(size=g.n_cells))
    a = solve_dirichlet(UNIT, 2, f1)
    b = solve_dirichlet(UNIT, 2, f2)
    ab = solve_dirichlet(UNIT, 2, f1 + f2)
    for alpha in ab.jet:
        lin = a.jet[alpha].values + b.jet[alpha].values
        np.testing.assert_allclose(ab.jet[alpha].values, lin, rtol=1e-10, atol=1e-12)


def test_positivity_m1():
    for dom, n in ((UNIT, 128), (DISK, 64)):
        g = Grid(dom, n)
        center = [0.6] if dom.dim == 1 else [0.3, -0.2]
        f = SampledField.from_function(g, smoothstep_indicator(center, 0.2))
        sol = solve_dirichlet(dom, 1, f)
        assert sol.u.values.min() >= -1e-12


def test_boundary_decay_rate():
    # |u| on the three outermost cell layers scales like dist^m
    for m, n in ((1, 256), (2, 128)):
        g = Grid(UNIT, n)
        sol = solve_dirichlet(UNIT, m, ones(g))
        layers = []
        for k in range(3):
            sel = (g.boundary_dist >= k * g.h) & (g.boundary_dist < (k + 1) * g.h)
            layers.append(np.abs(sol.u.values[sel]).max())
        # dist of layer k is (k + 1/2) h: ratios follow ((k+1.5)/(k+0.5))^m
        for k in range(2):
            want = ((k + 1.5) / (k + 0.5)) ** m
            assert layers[k + 1] / layers[k] == pytest.approx(want, rel=0.2)


def test_pointwise_domination_by_maximal():
    # |D^alpha u| <= C Mf holds with a refinement-stable constant
    consts = {}
    for n in (64, 128):
        g = Grid(UNIT, n)
        corpus = build_corpus(g, seed=1, n_random=2)
        worst = 0.0
        for _, f in corpus:
            sol = solve_dirichlet(UNIT, 1, f)
            mf = maximal_field(f, operator_radius_grid(g, 24))
            ratio = np.abs(sol.jet[(1,)].values) / np.maximum(mf.values, 1e-300)
            worst = max(worst, ratio.max())
        consts[n] = worst
    assert np.isfinite(consts[128])
    assert abs(consts[128] - consts[64]) <= 0.1 * consts[64]


def test_no_green_function():
    g = Grid(UNIT, 16)
    with pytest.raises(ValueError, match="no Green function"):
        solve_dirichlet(UNIT, 3, ones(g))


def test_domain_mismatch():
    g = Grid(UNIT, 16)
    with pytest.raises(ValueError, match="different domain"):
        solve_dirichlet(Interval(0.0, 2.0), 1, ones(g))
