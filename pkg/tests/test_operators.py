import numpy as np
import pytest

from morreylab.corpus import polynomial_bump, smoothstep_indicator
from morreylab.geometry import Disk, Grid, Interval, SampledField
from morreylab.operators import (
    CZKernel,
    maximal,
    maximal_field,
    maximal_singular,
    operator_radius_grid,
    singular_field,
    singular_identity_check,
    truncated_singular,
)

D1 = Disk((0.0, 0.0), 1.0)


def disk_grid(n=64, R=1.0):
    return Grid(Disk((0.0, 0.0), R), n)


# --- maximal -----------------------------------------------------------------

def test_maximal_constant_one():
    g = Grid(Interval(-1.0, 1.0), 256)
    f = SampledField(g, np.ones(g.n_cells))
    got = maximal(f, [0.0], operator_radius_grid(g))
    # cell quantization against the exact-ball denominator overshoots by at
    # most a factor 1 + h/t, attained at radii of a few cells
    assert 1.0 - 1e-12 <= got <= 1.5
    coarse = maximal(f, [0.0], operator_radius_grid(g)[24:])
    assert coarse == pytest.approx(1.0, rel=0.02)


def test_maximal_offset_indicator():
    g = Grid(Interval(-4.0, 4.0), 512)
    f = SampledField.from_function(g, lambda x: (np.abs(x) < 1.0).astype(float))
    radii = np.concatenate([operator_radius_grid(g, 64), [3.0]])
    got = maximal(f, [2.0], radii)
    assert got == pytest.approx(1.0 / 3.0, rel=0.02)
    # dense sweep oracle: the optimum over a fine t grid agrees
    dense = maximal(f, [2.0], np.linspace(0.1, 8.0, 1500))
    assert got == pytest.approx(dense, rel=0.02)


def test_maximal_dominates_single_ball_average():
    g = disk_grid(48)
    rng = np.random.default_rng(1)
    f = SampledField(g, rng.uniform(0, 1, g.n_cells))
    x = [0.2, -0.1]
    radii = operator_radius_grid(g, 16)
    m = maximal(f, x, radii)
    for t in radii[:4]:
        d = np.linalg.norm(g.nodes - np.array(x)[None, :], axis=1)
        avg = f.values[d < t].sum() * g.cell_measure / (np.pi * t**2)
        assert m >= avg - 1e-12


def test_maximal_sublinear_homogeneous():
    g = Grid(Interval(0.0, 1.0), 128)
    rng = np.random.default_rng(2)
    f1 = SampledField(g, rng.normal(size=g.n_cells))
    f2 = SampledField(g, rng.normal(size=g.n_cells))
    radii = operator_radius_grid(g, 24)
    for x in ([0.3], [0.71]):
        assert maximal(f1 + f2, x, radii) <= maximal(f1, x, radii) + maximal(f2, x, radii) + 1e-12
        assert maximal(-3.0 * f1, x, radii) == pytest.approx(3.0 * maximal(f1, x, radii), rel=1e-12)


def test_maximal_field_matches_pointwise():
    for g in (Grid(Interval(0.0, 1.0), 64), disk_grid(32)):
        rng = np.random.default_rng(3)
        f = SampledField(g, rng.uniform(-1, 1, g.n_cells))
        radii = operator_radius_grid(g, 12)
        field = maximal_field(f, radii)
        idx = rng.integers(0, g.n_cells, 12)
        for i in idx:
            want = maximal(f, g.nodes[i], radii)
            assert field.values[i] == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_maximal_zero_extension_box_invariance():
    dom = Interval(0.0, 1.0)
    g1 = Grid(dom, 64)
    pad = 16 * g1.h
    g2 = Grid(dom, 64 + 32, box=((-pad, 1.0 + pad),))
    vals = np.sin(np.pi * g1.nodes[:, 0])
    order1 = np.argsort(g1.nodes[:, 0])
    order2 = np.argsort(g2.nodes[:, 0])
    f1 = SampledField(g1, vals)
    f2 = SampledField(g2, vals[np.argsort(order1)][order2] if False else vals)
    radii = operator_radius_grid(g1, 16)
    for x in ([0.31], [0.77]):
        assert abs(maximal(f1, x, radii) - maximal(f2, x, radii)) < 1e-12


# --- CZ kernels ---------------------------------------------------------------

def test_czkernel_zero_mean_and_size():
    for alpha in ((2, 0), (1, 1), (0, 2)):
        k = CZKernel(2, 1, alpha)
        assert k.size_constant() < 1.0
    for alpha in ((4, 0), (2, 2), (1, 3)):
        k = CZKernel(2, 2, alpha)
        assert np.isfinite(k.size_constant())


def test_czkernel_rejects_wrong_order():
    with pytest.raises(ValueError):
        CZKernel(2, 1, (1, 0))


def test_czkernel_1d_vanishes():
    k = CZKernel(1, 1, (2,))
    assert np.all(k(np.array([[0.2], [-0.4]])) == 0.0)


# --- truncated singular --------------------------------------------------------

def test_truncated_radial_cancellation():
    g = disk_grid(64)
    f = SampledField(g, np.ones(g.n_cells))  # radial indicator of the disk
    k = CZKernel(2, 1, (2, 0))
    for eps in (2 * g.h, 0.3, 0.7):
        val = truncated_singular(f, k, [0.0, 0.0], eps)
        assert abs(val) < 1e-10


def test_truncated_odd_symmetry():
    g = disk_grid(48)
    f = SampledField.from_function(g, lambda x, y: x)  # odd under x1 -> -x1
    k = CZKernel(2, 1, (2, 0))  # even under the reflection
    val = truncated_singular(f, k, [0.0, 0.3], 3 * g.h)
    assert abs(val) < 1e-10


def test_truncated_below_resolution():
    g = disk_grid(16)
    f = SampledField(g, np.ones(g.n_cells))
    with pytest.raises(ValueError, match="truncation below resolution"):
        truncated_singular(f, CZKernel(2, 1, (2, 0)), [0.0, 0.0], g.h / 2)


def test_truncated_smooth_oversampling_oracle():
    # x outside the support: nonsingular quadrature must converge under
    # refinement (4x finer grid within 1e-4 relative)
    k = CZKernel(2, 1, (1, 1))
    vals = {}
    for n in (64, 256):
        g = disk_grid(n, R=2.0)
        bump, _, _ = polynomial_bump([0.5, 0.0], 0.5, 2)
        f = SampledField(g, bump(g.nodes))
        vals[n] = truncated_singular(f, k, [-1.2, 0.0], 2 * g.h)
    assert vals[256] == pytest.approx(vals[64], rel=1e-4)


def test_maximal_singular_dominates_and_constant_region():
    g = Grid(Disk((0.0, 0.0), 3.0), 96)
    f = SampledField.from_function(g, lambda x, y: (np.hypot(x, y) < 1.0).astype(float))
    k = CZKernel(2, 1, (2, 0))
    x = [2.0, 0.0]
    eps_grid = operator_radius_grid(g, 24)
    ks = maximal_singular(f, k, x, eps_grid)
    for e in eps_grid[:5]:
        assert ks >= abs(truncated_singular(f, k, x, e)) - 1e-14
    # truncations below the distance to the support see the whole support
    a = truncated_singular(f, k, x, 0.3)
    b = truncated_singular(f, k, x, 0.8)
    assert a == pytest.approx(b, abs=1e-6 * max(abs(a), 1))


def test_singular_field_matches_pointwise():
    g = disk_grid(32)
    rng = np.random.default_rng(5)
    f = SampledField(g, rng.normal(size=g.n_cells))
    k = CZKernel(2, 1, (1, 1))
    eps_grid = operator_radius_grid(g, 8)
    field = singular_field(f, k, eps_grid)
    for i in rng.integers(0, g.n_cells, 8):
        want = maximal_singular(f, k, g.nodes[i], eps_grid)
        assert field.values[i] == pytest.approx(want, rel=1e-8, abs=1e-11)


def test_singular_linearity():
    g = disk_grid(24)
    rng = np.random.default_rng(7)
    f1 = SampledField(g, rng.normal(size=g.n_cells))
    f2 = SampledField(g, rng.normal(size=g.n_cells))
    k = CZKernel(2, 1, (2, 0))
    x, e = [0.1, 0.2], 3 * g.h
    lhs = truncated_singular(f1 + 2.0 * f2, k, x, e)
    rhs = truncated_singular(f1, k, x, e) + 2.0 * truncated_singular(f2, k, x, e)
    assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-13)


# --- identity -----------------------------------------------------------------

def test_identity_zero_field():
    g = disk_grid(32, R=2.0)
    f = SampledField(g, np.zeros(g.n_cells))
    rep = singular_identity_check(f, (2, 0), (1, 0))
    assert rep.max_discrepancy == 0.0


def test_identity_mollified_disk_indicator():
    g = disk_grid(256, R=2.0)
    bump, _, _ = polynomial_bump([0.0, 0.0], 1.0, 2)
    f = SampledField(g, bump(g.nodes))
    rep = singular_identity_check(f, (2, 0), (1, 0))
    assert rep.expected_a == -0.5
    assert rep.fitted_a == pytest.approx(-0.5, abs=0.01)
    assert rep.max_discrepancy < 0.02
    assert rep.trace_residual < 0.02


def test_identity_requires_compatible_indices():
    g = disk_grid(16)
    f = SampledField(g, np.ones(g.n_cells))
    with pytest.raises(ValueError):
        singular_identity_check(f, (2, 0), (0, 1))
