"""Fundamental solutions, model-domain Green functions, Poisson kernels, and
numerical verification of the kernel bounds.

Implemented instances of the Dirichlet problem (-Lap)^m u = f:

* interval, m = 1      (second order, absorbing ends)
* interval, m = 2      (clamped beam; cubic closed form)
* disk, m = 1          (logarithmic image formula)
* disk, m = 2          (Boggio's formula on the ball)

Each Green function is assembled as G = Gamma + h with the regular part h in
closed form, so both G and h (and their x-derivatives) are available off and
on the diagonal.  Closed-form derivatives are used where the formulas permit;
the remaining orders (disk m=2, orders >= 2) use Richardson-extrapolated
central differences of the closed-form gradient.

The closed forms are treated as hypotheses: the test suite admits them only
after they reproduce smooth solutions through the quadrature identity
u = integral of G * f.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .geometry import Disk, Domain, Interval

__all__ = [
    "FundamentalSolution",
    "GreenFunction",
    "green_function",
    "PoissonKernel",
    "sample_pairs",
    "verify_kernel_bounds",
    "verify_poisson_bounds",
    "RegimeFit",
]


# ---------------------------------------------------------------------------
# fundamental solutions of (-Lap)^m in dimension n, and their derivatives


class FundamentalSolution:
    """Gamma with (-Lap)^m Gamma = delta; supported (n, m) pairs:
    (1,1), (1,2), (2,1), (2,2)."""

    def __init__(self, dim: int, m: int):
        if (dim, m) not in {(1, 1), (1, 2), (2, 1), (2, 2)}:
            raise ValueError("no fundamental solution implemented")
        self.dim = dim
        self.m = m

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return self.derivative((0,) * self.dim, z)

    def derivative(self, alpha: tuple[int, ...], z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if self.dim == 1:
            t = z.reshape(-1) if z.ndim else z[None]
            out = _gamma_1d(self.m, alpha[0], t)
            return out.reshape(z.shape) if z.ndim else out[0]
        pts = np.atleast_2d(z)
        out = _gamma_2d(self.m, tuple(alpha), pts[:, 0], pts[:, 1])
        return out if z.ndim > 1 else out[0]


def _gamma_1d(m: int, k: int, t: np.ndarray) -> np.ndarray:
    a = np.abs(t)
    s = np.sign(t)
    if m == 1:
        table = [-a / 2, -s / 2, np.zeros_like(t)]
    else:
        table = [a**3 / 12, t * a / 4, a / 2, s / 2, np.zeros_like(t)]
    if k >= len(table):
        return np.zeros_like(t)
    return table[k]


_M1_FORMS = {
    (0, 0): lambda z1, z2, r2: 0.5 * np.log(r2),
    (1, 0): lambda z1, z2, r2: z1 / r2,
    (0, 1): lambda z1, z2, r2: z2 / r2,
    (2, 0): lambda z1, z2, r2: 1.0 / r2 - 2.0 * z1**2 / r2**2,
    (1, 1): lambda z1, z2, r2: -2.0 * z1 * z2 / r2**2,
    (0, 2): lambda z1, z2, r2: 1.0 / r2 - 2.0 * z2**2 / r2**2,
}

# derivatives of v = r^2 log r (biharmonic fundamental solution up to 1/8pi)
_M2_FORMS = {
    (0, 0): lambda z1, z2, r2: r2 * 0.5 * np.log(r2),
    (1, 0): lambda z1, z2, r2: z1 * (np.log(r2) + 1.0),
    (0, 1): lambda z1, z2, r2: z2 * (np.log(r2) + 1.0),
    (2, 0): lambda z1, z2, r2: np.log(r2) + 1.0 + 2.0 * z1**2 / r2,
    (1, 1): lambda z1, z2, r2: 2.0 * z1 * z2 / r2,
    (0, 2): lambda z1, z2, r2: np.log(r2) + 1.0 + 2.0 * z2**2 / r2,
    (3, 0): lambda z1, z2, r2: 6.0 * z1 / r2 - 4.0 * z1**3 / r2**2,
    (2, 1): lambda z1, z2, r2: 2.0 * z2 / r2 - 4.0 * z1**2 * z2 / r2**2,
    (1, 2): lambda z1, z2, r2: 2.0 * z1 / r2 - 4.0 * z2**2 * z1 / r2**2,
    (0, 3): lambda z1, z2, r2: 6.0 * z2 / r2 - 4.0 * z2**3 / r2**2,
    (4, 0): lambda z1, z2, r2: 6.0 / r2 - 24.0 * z1**2 / r2**2 + 16.0 * z1**4 / r2**3,
    (3, 1): lambda z1, z2, r2: -12.0 * z1 * z2 / r2**2 + 16.0 * z1**3 * z2 / r2**3,
    (2, 2): lambda z1, z2, r2: -2.0 / r2 + 16.0 * z1**2 * z2**2 / r2**3,
    (1, 3): lambda z1, z2, r2: -12.0 * z1 * z2 / r2**2 + 16.0 * z2**3 * z1 / r2**3,
    (0, 4): lambda z1, z2, r2: 6.0 / r2 - 24.0 * z2**2 / r2**2 + 16.0 * z2**4 / r2**3,
}


def _gamma_2d(m: int, alpha: tuple[int, int], z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
    r2 = z1 * z1 + z2 * z2
    with np.errstate(divide="ignore", invalid="ignore"):
        if m == 1:
            return -_M1_FORMS[alpha](z1, z2, r2) / (2.0 * np.pi)
        return _M2_FORMS[alpha](z1, z2, r2) / (8.0 * np.pi)


# ---------------------------------------------------------------------------
# Richardson central differences (for derivative orders without closed forms)

_STENCILS = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
}


def _fd_tensor(func, orders: tuple[int, ...], x: np.ndarray, step) -> np.ndarray:
    """Composed central differences of per-axis orders at points x (..., dim);
    step may be a scalar or a per-point array."""
    step = np.asarray(step, dtype=float)
    axes = [_STENCILS[k] for k in orders]
    total = sum(orders)
    out = 0.0
    for combo in iproduct(*axes):
        shift = np.zeros_like(x)
        coeff = 1.0
        for ax, (off, c) in enumerate(combo):
            shift[..., ax] = off
            coeff *= c
        out = out + coeff * func(x + shift * step[..., None])
    return out / step**total


def _fd_richardson(func, orders, x, step):
    f1 = _fd_tensor(func, orders, x, step)
    f2 = _fd_tensor(func, orders, x, step / 2.0)
    return (4.0 * f2 - f1) / 3.0


# ---------------------------------------------------------------------------
# Green functions


def _pairs(x, y, dim):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    x, y = np.broadcast_arrays(x, y)
    if x.shape[-1] != dim:
        raise ValueError("point dimension mismatch")
    if np.any(np.all(np.isclose(x, y, rtol=0, atol=1e-15), axis=-1)):
        raise ValueError("on-diagonal")
    return x, y


class GreenFunction:
    """Common interface: __call__(x, y), derivative(alpha, x, y),
    regular_part(x, y), regular_derivative(alpha, x, y)."""

    domain: Domain
    m: int

    @property
    def dim(self):
        return self.domain.dim

    @property
    def gamma(self) -> FundamentalSolution:
        return FundamentalSolution(self.dim, self.m)

    def __call__(self, x, y):
        x, y = _pairs(x, y, self.dim)
        return (self.gamma(x - y if self.dim > 1 else (x - y)[..., 0])
                + self._h(x, y))

    def derivative(self, alpha, x, y):
        if sum(alpha) == 0:
            return self(x, y)
        x, y = _pairs(x, y, self.dim)
        z = x - y if self.dim > 1 else (x - y)[..., 0]
        return self.gamma.derivative(tuple(alpha), z) + self._h_deriv(tuple(alpha), x, y)

    def regular_part(self, x, y):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.atleast_2d(np.asarray(y, dtype=float))
        x, y = np.broadcast_arrays(x, y)
        return self._h(x, y)

    def regular_derivative(self, alpha, x, y):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.atleast_2d(np.asarray(y, dtype=float))
        x, y = np.broadcast_arrays(x, y)
        return self._h_deriv(tuple(alpha), x, y)


class IntervalGreen1(GreenFunction):
    """-u'' = f on (a,b), u(a) = u(b) = 0."""

    def __init__(self, domain: Interval):
        self.domain = domain
        self.m = 1
        self._L = domain.diameter

    def _unit(self, x, y):
        return (x[..., 0] - self.domain.a) / self._L, (y[..., 0] - self.domain.a) / self._L

    def _h(self, x, y):
        xi, eta = self._unit(x, y)
        return self._L * ((xi + eta) / 2.0 - xi * eta)

    def _h_deriv(self, alpha, x, y):
        k = alpha[0]
        xi, eta = self._unit(x, y)
        if k == 0:
            return self._h(x, y)
        if k == 1:
            return 0.5 - eta
        return np.zeros_like(xi)


class IntervalGreen2(GreenFunction):
    """Clamped beam u'''' = f on (a,b), u = u' = 0 at both ends."""

    def __init__(self, domain: Interval):
        self.domain = domain
        self.m = 2
        self._L = domain.diameter

    def _unit(self, x, y):
        return (x[..., 0] - self.domain.a) / self._L, (y[..., 0] - self.domain.a) / self._L

    # regular part and x-derivatives on the unit interval (polynomials
    # generated symbolically from the x <= y branch of the cubic closed form)
    @staticmethod
    def _h_unit(k, x, y):
        if k == 0:
            return (-x**3 * y**3 / 3 + x**3 * y**2 / 2 - x**3 / 12 + x**2 * y**3 / 2
                    - x**2 * y**2 + x**2 * y / 4 + x * y**2 / 4 - y**3 / 12)
        if k == 1:
            return (-x**2 * y**3 + 1.5 * x**2 * y**2 - x**2 / 4 + x * y**3
                    - 2 * x * y**2 + x * y / 2 + y**2 / 4)
        if k == 2:
            return -2 * x * y**3 + 3 * x * y**2 - x / 2 + y**3 - 2 * y**2 + y / 2
        if k == 3:
            return -2 * y**3 + 3 * y**2 - 0.5 + 0.0 * x
        return 0.0 * x

    def _h(self, x, y):
        xi, eta = self._unit(x, y)
        return self._L**3 * self._h_unit(0, xi, eta)

    def _h_deriv(self, alpha, x, y):
        k = alpha[0]
        xi, eta = self._unit(x, y)
        return self._L ** (3 - k) * self._h_unit(k, xi, eta)


class DiskGreen1(GreenFunction):
    """-Lap u = f on a disk, u = 0 on the boundary (image formula)."""

    def __init__(self, domain: Disk):
        self.domain = domain
        self.m = 1

    def _unit(self, x, y):
        c = np.asarray(self.domain.center)
        return (x - c) / self.domain.radius, (y - c) / self.domain.radius

    @staticmethod
    def _A2(xi, eta):
        # A^2 = |xi|^2 |eta|^2 - 2 xi.eta + 1 = |xi-eta|^2 + (1-|xi|^2)(1-|eta|^2)
        return ((xi**2).sum(-1) * (eta**2).sum(-1)
                - 2.0 * (xi * eta).sum(-1) + 1.0)

    def _h(self, x, y):
        xi, eta = self._unit(x, y)
        return (0.5 * np.log(self._A2(xi, eta))
                + np.log(self.domain.radius)) / (2.0 * np.pi)

    def _h_deriv(self, alpha, x, y):
        k = sum(alpha)
        if k == 0:
            return self._h(x, y)
        xi, eta = self._unit(x, y)
        A2 = self._A2(xi, eta)
        e2 = (eta**2).sum(-1)
        g1 = xi[..., 0] * e2 - eta[..., 0]   # d(A^2)/d(xi_1) / 2
        g2 = xi[..., 1] * e2 - eta[..., 1]
        R = self.domain.radius
        if alpha == (1, 0):
            return g1 / A2 / (2.0 * np.pi) / R
        if alpha == (0, 1):
            return g2 / A2 / (2.0 * np.pi) / R
        if alpha == (2, 0):
            return (e2 / A2 - 2.0 * g1 * g1 / A2**2) / (2.0 * np.pi) / R**2
        if alpha == (0, 2):
            return (e2 / A2 - 2.0 * g2 * g2 / A2**2) / (2.0 * np.pi) / R**2
        if alpha == (1, 1):
            return (-2.0 * g1 * g2 / A2**2) / (2.0 * np.pi) / R**2
        raise ValueError(f"derivative order {alpha} not available for disk m=1")


class DiskGreen2(GreenFunction):
    """Clamped plate Lap^2 u = f on a disk (ball formula).

    h and its gradient are closed-form; higher x-derivatives use Richardson
    central differences of the gradient with a diagonal-aware step.
    """

    def __init__(self, domain: Disk):
        self.domain = domain
        self.m = 2

    def _unit(self, x, y):
        c = np.asarray(self.domain.center)
        return (x - c) / self.domain.radius, (y - c) / self.domain.radius

    @staticmethod
    def _h_unit(xi, eta):
        s = ((xi - eta) ** 2).sum(-1)
        q = (1.0 - (xi**2).sum(-1)) * (1.0 - (eta**2).sum(-1))
        return (q / 2.0 - (s / 2.0) * np.log(s + q)) / (8.0 * np.pi)

    @staticmethod
    def _h_unit_grad(i, xi, eta):
        s = ((xi - eta) ** 2).sum(-1)
        q = (1.0 - (xi**2).sum(-1)) * (1.0 - (eta**2).sum(-1))
        ds = 2.0 * (xi[..., i] - eta[..., i])
        dq = -2.0 * xi[..., i] * (1.0 - (eta**2).sum(-1))
        return (dq / 2.0 - (ds / 2.0) * np.log(s + q)
                - (s / 2.0) * (ds + dq) / (s + q)) / (8.0 * np.pi)

    @staticmethod
    def _h_unit_partials(alpha, xi, eta):
        """Closed-form partials of h = (q/2 - P log A)/(8 pi) up to order 3:
        P = s/2 and A = s + q are quadratic in xi, so their third partials
        vanish and the chain rule terminates."""
        Qe = 1.0 - (eta**2).sum(-1)
        s = ((xi - eta) ** 2).sum(-1)
        q = (1.0 - (xi**2).sum(-1)) * Qe
        A = s + q
        u = np.log(A)
        P = s / 2.0

        def Pd(i):
            return xi[..., i] - eta[..., i]

        def Ad(i):
            return 2.0 * (xi[..., i] - eta[..., i]) - 2.0 * xi[..., i] * Qe

        def Pdd(i, j):
            return 1.0 if i == j else 0.0

        def Add(i, j):
            return 2.0 * (1.0 - Qe) if i == j else 0.0

        idx = [ax for ax in (0, 1) for _ in range(alpha[ax])]
        k = len(idx)
        if k == 0:
            return (q / 2.0 - P * u) / (8.0 * np.pi)
        if k == 1:
            (i,) = idx
            qd = -2.0 * xi[..., i] * Qe
            return (qd / 2.0 - Pd(i) * u - P * Ad(i) / A) / (8.0 * np.pi)
        if k == 2:
            i, j = idx
            qdd = -2.0 * Qe if i == j else 0.0
            val = (qdd / 2.0 - Pdd(i, j) * u
                   - Pd(i) * Ad(j) / A - Pd(j) * Ad(i) / A
                   - P * (Add(i, j) / A - Ad(i) * Ad(j) / A**2))
            return val / (8.0 * np.pi)
        # k == 3
        i, j, l = idx
        T = (-Pdd(i, j) * Ad(l) / A
             - Pdd(i, l) * Ad(j) / A
             - Pd(i) * (Add(j, l) / A - Ad(j) * Ad(l) / A**2)
             - Pdd(j, l) * Ad(i) / A
             - Pd(j) * (Add(i, l) / A - Ad(i) * Ad(l) / A**2)
             - Pd(l) * (Add(i, j) / A - Ad(i) * Ad(j) / A**2)
             - P * (-Add(i, j) * Ad(l) / A**2
                    - (Add(i, l) * Ad(j) + Ad(i) * Add(j, l)) / A**2
                    + 2.0 * Ad(i) * Ad(j) * Ad(l) / A**3))
        return T / (8.0 * np.pi)

    def regular_jet(self, x, y, max_order: int = 3) -> dict:
        """All regular-part x-derivatives with |alpha| <= max_order (<= 3) in
        one pass over shared intermediates; the solver's pairwise quadrature
        is memory-bound, so the shared s, q, A terms matter."""
        if max_order > 3:
            raise ValueError("closed forms stop at order 3")
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.atleast_2d(np.asarray(y, dtype=float))
        x, y = np.broadcast_arrays(x, y)
        xi, eta = self._unit(x, y)
        R = self.domain.radius
        Qe = 1.0 - (eta**2).sum(-1)
        s = ((xi - eta) ** 2).sum(-1)
        q = (1.0 - (xi**2).sum(-1)) * Qe
        A = s + q
        invA = 1.0 / A
        u = np.log(A)
        P = s / 2.0
        Pd = [xi[..., i] - eta[..., i] for i in (0, 1)]
        Ad = [2.0 * Pd[i] - 2.0 * xi[..., i] * Qe for i in (0, 1)]
        qd = [-2.0 * xi[..., i] * Qe for i in (0, 1)]
        add = 2.0 * (1.0 - Qe)  # Add(i,i); mixed entries vanish
        c = 1.0 / (8.0 * np.pi)
        out = {(0, 0): R**2 * c * (q / 2.0 - P * u)}
        if max_order >= 1:
            for i, alpha in ((0, (1, 0)), (1, (0, 1))):
                out[alpha] = R * c * (qd[i] / 2.0 - Pd[i] * u - P * Ad[i] * invA)
        if max_order >= 2:
            for (i, j), alpha in (((0, 0), (2, 0)), ((0, 1), (1, 1)), ((1, 1), (0, 2))):
                dij = 1.0 if i == j else 0.0
                qdd = -2.0 * Qe * dij
                val = (qdd / 2.0 - dij * u
                       - (Pd[i] * Ad[j] + Pd[j] * Ad[i]) * invA
                       - P * (add * dij * invA - Ad[i] * Ad[j] * invA**2))
                out[alpha] = c * val
        if max_order >= 3:
            for idx, alpha in (((0, 0, 0), (3, 0)), ((0, 0, 1), (2, 1)),
                               ((0, 1, 1), (1, 2)), ((1, 1, 1), (0, 3))):
                i, j, l = idx
                dij, dil, djl = float(i == j), float(i == l), float(j == l)
                T = (-dij * Ad[l] * invA
                     - dil * Ad[j] * invA
                     - Pd[i] * (add * djl * invA - Ad[j] * Ad[l] * invA**2)
                     - djl * Ad[i] * invA
                     - Pd[j] * (add * dil * invA - Ad[i] * Ad[l] * invA**2)
                     - Pd[l] * (add * dij * invA - Ad[i] * Ad[j] * invA**2)
                     - P * (-add * dij * Ad[l] * invA**2
                            - (add * dil * Ad[j] + Ad[i] * add * djl) * invA**2
                            + 2.0 * Ad[i] * Ad[j] * Ad[l] * invA**3))
                out[alpha] = (c / R) * T
        return out

    def _h(self, x, y):
        xi, eta = self._unit(x, y)
        return self.domain.radius**2 * self._h_unit(xi, eta)

    def _h_deriv(self, alpha, x, y):
        k = sum(alpha)
        R = self.domain.radius
        xi, eta = self._unit(x, y)
        if k <= 3:
            return R ** (2 - k) * self._h_unit_partials(alpha, xi, eta)
        # order 4: one central difference of the closed-form third order;
        # step stays below the pair separation and inside the disk (the
        # continued formula degenerates at the exterior image points)
        i = 0 if alpha[0] else 1
        rest = (alpha[0] - 1, alpha[1]) if alpha[0] else (alpha[0], alpha[1] - 1)
        sep = np.sqrt(((xi - eta) ** 2).sum(-1))
        bdist = 1.0 - np.sqrt((xi**2).sum(-1))
        step = np.minimum(2e-3, np.minimum(sep / 8.0, bdist / 4.0))
        step = np.maximum(step, 1e-6)
        func = lambda p: self._h_unit_partials(rest, p, eta)
        return R ** (2 - k) * _fd_richardson(func, (1 if i == 0 else 0,
                                                    0 if i == 0 else 1), xi, step)


def green_function(domain: Domain, m: int) -> GreenFunction:
    if isinstance(domain, Interval) and m == 1:
        return IntervalGreen1(domain)
    if isinstance(domain, Interval) and m == 2:
        return IntervalGreen2(domain)
    if isinstance(domain, Disk) and m == 1:
        return DiskGreen1(domain)
    if isinstance(domain, Disk) and m == 2:
        return DiskGreen2(domain)
    raise ValueError("no Green function")


# ---------------------------------------------------------------------------
# Poisson kernel (disk, m = 1, j = 0: harmonic measure)


@dataclass(frozen=True)
class PoissonKernel:
    domain: Disk
    j: int = 0

    def __post_init__(self):
        if not isinstance(self.domain, Disk) or self.j != 0:
            raise ValueError("Poisson kernel implemented for disk, j = 0")

    def __call__(self, x, P):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        P = np.atleast_2d(np.asarray(P, dtype=float))
        c = np.asarray(self.domain.center)
        R = self.domain.radius
        num = R**2 - ((x - c) ** 2).sum(-1)
        den = ((x - P) ** 2).sum(-1)
        return num / (2.0 * np.pi * R * den)

    def boundary_nodes(self, count: int):
        """Equispaced boundary points and the arclength weight."""
        th = (np.arange(count) + 0.5) * (2.0 * np.pi / count)
        c = np.asarray(self.domain.center)
        P = c[None, :] + self.domain.radius * np.column_stack([np.cos(th), np.sin(th)])
        return P, 2.0 * np.pi * self.domain.radius / count


# ---------------------------------------------------------------------------
# kernel-bound verification


def _pair_positions(domain: Domain) -> list[np.ndarray]:
    """Ordered base positions: deep-interior lattice points interleaved with
    boundary anchors at nested depths, finest depth first (the regular-part
    and singular bounds approach their sups in the boundary-layer limit).

    The depth floor d/2048 is a fitting-protocol constant, not a grid
    property: grids floor the pair separation, while a grid-tied depth floor
    would make fitted constants incomparable across refinement levels.
    """
    from .geometry import Grid, nested_log_radii, sweep_centers

    interior = sweep_centers(Grid(domain, 64), 7)
    depth = np.atleast_1d(domain.boundary_distance(
        interior if domain.dim > 1 else interior[:, 0]))
    interior = [np.asarray(p, dtype=float) for p in interior[np.argsort(-depth, kind="stable")]]
    layers = []
    for i, delta in enumerate(nested_log_radii(domain.diameter / 4.0,
                                               domain.diameter / 2048.0, 1)):
        if isinstance(domain, Interval):
            layers.append(np.array([domain.a + delta]))
            layers.append(np.array([domain.b - delta]))
        else:
            c = np.asarray(domain.center)
            for k in range(4):
                th = np.pi / 16.0 + i * np.pi / 8.0 + k * np.pi / 2.0
                layers.append(c + (domain.radius - delta)
                              * np.array([np.cos(th), np.sin(th)]))
    out = []
    for i in range(max(len(interior), len(layers))):
        if i < len(interior):
            out.append(interior[i])
        if i < len(layers):
            out.append(layers[i])
    return out


def _direction_fan(domain: Domain, b: np.ndarray, n_dir: int) -> np.ndarray:
    if isinstance(domain, Interval):
        return np.array([[1.0], [-1.0]])
    c = np.asarray(domain.center)
    v = b - c
    nrm = np.hypot(v[0], v[1])
    # anchor the fan to the inward normal near the boundary, to the axes in
    # the deep interior (mixed-derivative shapes peak on axis diagonals)
    phi0 = np.arctan2(v[1], v[0]) + np.pi if nrm > 0.5 * domain.radius else 0.0
    th = phi0 + np.arange(n_dir) * (2.0 * np.pi / n_dir)
    return np.column_stack([np.cos(th), np.sin(th)])


def sample_pairs(domain: Domain, count: int, seed: int, min_sep: float) -> tuple[np.ndarray, np.ndarray]:
    """Off-diagonal point pairs for sup fitting.

    Nine tenths form a deterministic configuration lattice, complete at every
    budget: nested log separations crossed with base positions (interior plus
    boundary-depth anchors) and direction fans, denser as `count` grows.  The
    remainder is seeded random draws, log-uniform in separation with half the
    bases pulled toward the boundary.  Sups over the lattice saturate, which
    is what makes fitted constants comparable across sample sizes and grids.
    """
    from .geometry import nested_log_radii

    rng = np.random.default_rng(seed)
    d = domain.diameter
    budget = int(0.9 * count)
    floor = d / 2048.0  # fixed protocol floor: keeps fits comparable across N
    seps = nested_log_radii(d / 2.0, min_sep, 2)
    n_dir = 2 if domain.dim == 1 else 8
    n_pos = max(2, budget // (max(len(seps), 1) * n_dir))
    positions = _pair_positions(domain)[:n_pos]
    xs, ys = [], []
    for sep in seps:
        for b in positions:
            for v in _direction_fan(domain, b, n_dir):
                y = b + sep * v
                dy = domain.boundary_distance(y if domain.dim > 1 else y[0:1])
                if np.all(np.atleast_1d(dy) >= floor):
                    xs.append(b)
                    ys.append(y)
    xs, ys = xs[:budget], ys[:budget]

    def draw_interior(k):
        if isinstance(domain, Interval):
            return rng.uniform(domain.a, domain.b, size=(k, 1))
        c = np.asarray(domain.center)
        u = rng.uniform(-1, 1, size=(2 * k, 2)) * domain.radius
        u = u[np.hypot(u[:, 0], u[:, 1]) < domain.radius][:k]
        while len(u) < k:
            extra = rng.uniform(-1, 1, size=(k, 2)) * domain.radius
            extra = extra[np.hypot(extra[:, 0], extra[:, 1]) < domain.radius]
            u = np.vstack([u, extra])[:k]
        return c[None, :] + u

    while len(xs) < count:
        k = count
        x = draw_interior(k)
        if rng.uniform() < 0.5:
            delta = np.exp(rng.uniform(np.log(min_sep), np.log(d / 4), size=k))
            if isinstance(domain, Interval):
                side = rng.integers(0, 2, size=k)
                x = np.where(side[:, None] == 0, domain.a + delta[:, None],
                             domain.b - delta[:, None])
            else:
                c = np.asarray(domain.center)
                v = x - c[None, :]
                nrm = np.maximum(np.hypot(v[:, 0], v[:, 1]), 1e-12)
                x = c[None, :] + v / nrm[:, None] * (domain.radius - delta)[:, None]
        r = np.exp(rng.uniform(np.log(min_sep), np.log(d), size=k))
        if isinstance(domain, Interval):
            sign = rng.choice([-1.0, 1.0], size=k)
            y = x + (sign * r)[:, None]
            ok = np.asarray(domain.boundary_distance(y[:, 0]) >= floor)
        else:
            th = rng.uniform(0, 2 * np.pi, size=k)
            y = x + np.column_stack([r * np.cos(th), r * np.sin(th)])
            ok = np.asarray(domain.boundary_distance(y) >= floor)
        xs.extend(x[ok])
        ys.extend(y[ok])
    return np.asarray(xs[:count]), np.asarray(ys[:count])


@dataclass(frozen=True)
class RegimeFit:
    regime: str
    alpha: tuple[int, ...]
    constant: float
    pairs_used: int


def _bdist(domain: Domain, pts: np.ndarray) -> np.ndarray:
    return np.asarray(domain.boundary_distance(pts[:, 0] if domain.dim == 1 else pts))


def verify_kernel_bounds(domain: Domain, m: int, x: np.ndarray, y: np.ndarray,
                         alphas) -> list[RegimeFit]:
    """Fit the implicit constant of every applicable derivative-bound regime
    as the empirical sup of |LHS| / shape over the pair sample.

    Regimes, by k = |alpha| against 2m - n: bounded (k < 2m-n), logarithmic
    (k = 2m-n), power |x-y|^{2m-n-k} (k > 2m-n), the min{1, d/|x-y|}^m form
    at k = 2m (fitted in both the d(x) and d(y) readings, which the source
    states ambiguously), and the regular-part bound d(x)^{2m-n-k} for
    k > 2m-n+1 on pairs with |x-y| <= d(x).
    """
    gf = green_function(domain, m)
    n = domain.dim
    d = domain.diameter
    sep = np.linalg.norm(x - y, axis=-1)
    dx = _bdist(domain, x)
    dy = _bdist(domain, y)
    fits = []
    for alpha in alphas:
        k = sum(alpha)
        vals = np.abs(gf.derivative(alpha, x, y))
        if k < 2 * m - n:
            fits.append(RegimeFit("bounded", tuple(alpha), float(vals.max()), len(x)))
        elif k == 2 * m - n:
            shape = np.log(2.0 * d / sep)
            fits.append(RegimeFit("log", tuple(alpha), float((vals / shape).max()), len(x)))
        else:
            shape = sep ** (2 * m - n - k)
            fits.append(RegimeFit("power", tuple(alpha), float((vals / shape).max()), len(x)))
        if k == 2 * m:
            for tag, dd in (("min-dx", dx), ("min-dy", dy)):
                shape = np.minimum(1.0, dd / sep) ** m / sep**n
                fits.append(RegimeFit(f"singular-{tag}", tuple(alpha),
                                      float((vals / shape).max()), len(x)))
        if k > 2 * m - n + 1:
            near = sep <= dx
            if near.any():
                hv = np.abs(gf.regular_derivative(alpha, x[near], y[near]))
                shape = dx[near] ** (2 * m - n - k)
                fits.append(RegimeFit("regular-part", tuple(alpha),
                                      float((hv / shape).max()), int(near.sum())))
    if not fits:
        raise ValueError("regime not applicable")
    return fits


def verify_poisson_bounds(domain: Disk, count: int, seed: int) -> dict:
    """Fit C in |K_0(x,P)| <= C d(x)/|x-P|^n over interior x and boundary P,
    and check the harmonic-measure normalization at a probe point."""
    kern = PoissonKernel(domain, 0)
    rng = np.random.default_rng(seed)
    c = np.asarray(domain.center)
    R = domain.radius
    rho = R * np.sqrt(rng.uniform(0, 1, count)) * (1 - 1e-9)
    th = rng.uniform(0, 2 * np.pi, count)
    x = c[None, :] + np.column_stack([rho * np.cos(th), rho * np.sin(th)])
    # push a quarter of the probes very close to the boundary (sharpness)
    x[: count // 4] = c[None, :] + (R - np.geomspace(1e-6 * R, 0.2 * R, count // 4))[:, None] * \
        np.column_stack([np.cos(th[: count // 4]), np.sin(th[: count // 4])])
    phb = rng.uniform(0, 2 * np.pi, count)
    P = c[None, :] + R * np.column_stack([np.cos(phb), np.sin(phb)])
    vals = np.abs(kern(x, P))
    dxs = _bdist(domain, x)
    sep = np.linalg.norm(x - P, axis=-1)
    fitted = float((vals * sep**2 / dxs).max())
    nodes, wgt = kern.boundary_nodes(4096)
    probe = c + np.array([0.5 * R, 0.0])
    normalization = float(kern(probe[None, :], nodes).sum() * wgt)
    return {"fitted": fitted, "normalization": normalization,
            "center_value": float(kern(c[None, :], nodes[:1])[0])}
