"""Deterministic quadrature and the radial inhomogeneous ODE solver.

Integrands passed to the routines here are vectorized: they receive a numpy
array of abscissae (shape ``(n,)`` in 1D, ``(n, 3)`` in 3D) and return an array
of values.  Complex-valued integrands are supported by the 1D routine.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss
from scipy.integrate import simpson

from .errors import DomainError, SolverError, ToleranceError

ABS_FLOOR = 1e-30

# Gauss-Kronrod 15-point nodes (non-negative half) and weights; the Gauss
# 7-point rule uses the odd-indexed Kronrod nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[1:7:2] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[-2:-8:-2] = _WG[:3]


@dataclass(frozen=True)
class QuadratureResult:
    value: float | complex
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class RadialFunction:
    """A function sampled on a logarithmic radial grid."""

    r_grid: np.ndarray
    values: np.ndarray
    grid_kind: str = "log"

    def __post_init__(self):
        r = np.asarray(self.r_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "r_grid", r)
        object.__setattr__(self, "values", v)
        if r.ndim != 1 or r.shape != v.shape:
            raise DomainError("r_grid and values must be 1D arrays of equal length")
        if len(r) < 200:
            raise DomainError(f"radial grid needs at least 200 points, got {len(r)}")
        if r[0] <= 0 or np.any(np.diff(r) <= 0):
            raise DomainError("radial grid must be positive and strictly increasing")
        if not np.all(np.isfinite(v)):
            raise DomainError("radial function has non-finite values")

    def norm_squared(self) -> float:
        """Integral of values**2 dr (Simpson's rule in log r)."""
        return float(simpson(self.values**2 * self.r_grid, x=np.log(self.r_grid)))


def log_grid(r_min=1e-4, r_max=50.0, n=2000) -> np.ndarray:
    return np.exp(np.linspace(math.log(r_min), math.log(r_max), n))


# ---------------------------------------------------------------------------
# 1D adaptive Gauss-Kronrod


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    fx = np.asarray(f(mid + half * _NODES))
    kronrod = half * np.dot(_KRONROD_W, fx)
    gauss = half * np.dot(_GAUSS_W, fx)
    return kronrod, abs(kronrod - gauss)


def integrate_1d(f, a, b, rel_tol=1e-8, abs_floor=ABS_FLOOR, max_intervals=5000,
                 breakpoints=()):
    """Globally adaptive 15-point Gauss-Kronrod quadrature.

    The error estimate is the raw |K15 - G7| difference summed over panels,
    which is conservative for smooth integrands.  An infinite upper limit is
    handled with the map x = a + t / (1 - t).  ``breakpoints`` seed the
    initial partition (use them at known kinks or narrow peaks).
    """
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    if not a < b:
        raise DomainError(f"integrate_1d needs a < b, got a={a!r}, b={b!r}")
    if rel_tol <= 0:
        raise DomainError("rel_tol must be positive")

    if math.isinf(b):
        if math.isinf(a):
            raise DomainError("only the upper limit may be infinite")
        g = f

        def f(t):
            s = 1.0 - t
            return np.asarray(g(a + t / s)) / s**2

        # the mapped integrand is evaluated strictly inside (0, 1) by GK15
        breakpoints = [(bp - a) / (1.0 + bp - a) for bp in breakpoints]
        a, b = 0.0, 1.0

    edges = sorted({a, b, *[x for x in breakpoints if a < x < b]})
    heap = []
    total = 0.0
    total_err = 0.0
    evaluations = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _gk15(f, lo, hi)
        evaluations += 15
        total += val
        total_err += err
        heapq.heappush(heap, (-err, lo, hi, val))

    while total_err > max(rel_tol * abs(total), abs_floor):
        if len(heap) >= max_intervals:
            raise ToleranceError(
                f"integrate_1d: {max_intervals} subintervals exceeded "
                f"(estimate {total!r}, error {total_err:.3g})",
                estimate=total, error_estimate=total_err)
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise ToleranceError("integrate_1d: interval collapsed below machine resolution",
                                 estimate=total, error_estimate=total_err)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        evaluations += 30
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))

    # re-sum from the panels to shed the drift of the running updates
    total = sum(item[3] for item in sorted(heap, key=lambda item: item[1]))
    total_err = sum(-item[0] for item in heap)
    total = complex(total) if np.iscomplexobj(total) else float(total)
    return QuadratureResult(total, float(total_err), evaluations)


# ---------------------------------------------------------------------------
# 3D Gaussian-weighted integrals


@lru_cache(maxsize=None)
def _hermite_grid(order):
    x, w = hermgauss(order)
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    W = (w[:, None, None] * w[None, :, None] * w[None, None, :]).ravel()
    points = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
    points.setflags(write=False)
    W.setflags(write=False)
    return points, W


def integrate_3d_gaussian(f, r_c, rel_tol=1e-6, orders=(20, 40, 80), abs_floor=ABS_FLOOR):
    """Integral of exp(-|w|^2 r_c^2) f(w) d^3w by tensor-product Gauss-Hermite.

    The order is escalated through ``orders`` until two successive estimates
    agree to ``rel_tol``.  ``f`` receives an ``(n, 3)`` array of wave vectors.
    """
    if r_c <= 0:
        raise DomainError("r_c must be positive")
    previous = None
    evaluations = 0
    for order in orders:
        points, weights = _hermite_grid(order)
        values = np.asarray(f(points / r_c))
        evaluations += len(weights)
        current = float(np.dot(weights, values)) / r_c**3
        # roundoff floor for integrands that cancel to ~0
        noise = 1e-13 * float(np.dot(weights, np.abs(values))) / r_c**3
        if previous is not None:
            err = abs(current - previous)
            if err <= max(rel_tol * abs(current), noise, abs_floor):
                return QuadratureResult(current, err, evaluations)
        previous = current
    raise ToleranceError(
        f"integrate_3d_gaussian did not converge to rel_tol={rel_tol} at order {orders[-1]}",
        estimate=previous, error_estimate=err)


@lru_cache(maxsize=None)
def spherical_rule(n_theta=16, n_phi=None):
    """Unit vectors and weights for the average over the sphere.

    Gauss-Legendre in cos(theta) times the trapezoid rule in phi; exact for
    spherical harmonics of degree below min(2 n_theta, n_phi).  Weights sum
    to one.
    """
    n_phi = n_phi or 2 * n_theta
    mu, wmu = leggauss(n_theta)
    phi = 2 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
    s = np.sqrt(1 - mu**2)
    dirs = np.stack([
        np.outer(s, np.cos(phi)).ravel(),
        np.outer(s, np.sin(phi)).ravel(),
        np.repeat(mu, n_phi),
    ], axis=1)
    weights = np.repeat(wmu, n_phi) / (2.0 * n_phi)
    dirs.setflags(write=False)
    weights.setflags(write=False)
    return dirs, weights


def integrate_3d_isotropic(f, kernel, w_max, rel_tol=1e-6, n_theta=16):
    """Integral of kernel(|w|) f(w) d^3w in spherical coordinates.

    Radial direction: adaptive Gauss-Kronrod on [0, w_max]; angular part:
    ``spherical_rule``.  Used for general (non-Gaussian) spatial kernels.
    """
    dirs, weights = spherical_rule(n_theta)

    def radial(w):
        pts = w[:, None, None] * dirs[None, :, :]
        vals = np.asarray(f(pts.reshape(-1, 3))).reshape(len(w), len(weights))
        return 4 * np.pi * w**2 * np.asarray(kernel(w)) * (vals @ weights)

    return integrate_1d(radial, 0.0, w_max, rel_tol=rel_tol)


# ---------------------------------------------------------------------------
# Radial inhomogeneous equation (Numerov on a log grid)


def _numerov_march(K, G, h2, phi0, phi1, reverse=False):
    n = len(K)
    phi = np.zeros(n)
    T = h2 / 12.0 * K
    S = h2 / 12.0 * G
    idx = range(n - 1, -1, -1) if reverse else range(n)
    order = list(idx)
    phi[order[0]], phi[order[1]] = phi0, phi1
    for a, b, c in zip(order[:-2], order[1:-1], order[2:]):
        phi[c] = (2 * (1 + 5 * T[b]) * phi[b] - (1 - T[a]) * phi[a]
                  + S[a] + 10 * S[b] + S[c]) / (1 - T[c])
    return phi


def solve_radial_inhomogeneous(energy, source: RadialFunction, l, z=1.0, match_radius=2.0):
    """Solve the radial Coulomb problem with a source term, in atomic units.

    Finds the reduced radial function y(r) = r R(r) with

        -y''/2 + [l(l+1)/(2 r^2) - z/r - energy] y = s(r),

    regular at the origin and vanishing at the outer grid edge, where
    ``source.values`` holds s(r).  The grid must be uniform in log r.  With
    y = sqrt(r) phi(ln r) the equation becomes phi'' = K phi + G, integrated by
    Numerov outward and inward; the two sweeps are joined at ``match_radius``
    by adding regular and decaying homogeneous solutions.
    """
    r = source.r_grid
    x = np.log(r)
    h = np.diff(x)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise DomainError("solve_radial_inhomogeneous needs a log-uniform grid")
    if energy >= 0:
        raise DomainError("energy must lie below the continuum threshold")
    s = source.values
    if not np.any(s):
        return RadialFunction(r, np.zeros_like(r))

    h2 = h[0] ** 2
    K = l * (l + 1) - 2 * z * r - 2 * energy * r**2 + 0.25
    G = -2.0 * r**1.5 * s

    zero = np.zeros_like(G)
    reg = _numerov_march(K, zero, h2, r[0] ** (l + 0.5), r[1] ** (l + 0.5))
    part_out = _numerov_march(K, G, h2, 0.0, 0.0)
    dec = _numerov_march(K, zero, h2, 0.0, 1e-30, reverse=True)
    part_in = _numerov_march(K, G, h2, 0.0, 0.0, reverse=True)

    m = int(np.searchsorted(r, match_radius))
    m = min(max(m, 2), len(r) - 3)
    A = np.array([[reg[m], -dec[m]], [reg[m + 1], -dec[m + 1]]])
    rhs = np.array([part_in[m] - part_out[m], part_in[m + 1] - part_out[m + 1]])
    if abs(np.linalg.det(A)) <= 1e-14 * np.abs(A).max() ** 2:
        raise SolverError("matching matrix is singular (energy at an eigenvalue?)")
    a, b = np.linalg.solve(A, rhs)
    phi = np.where(np.arange(len(r)) <= m, part_out + a * reg, part_in + b * dec)

    residual = numerov_residual(phi, K, G, h2)
    scale = np.linalg.norm(h2 / 12.0 * (G[:-2] + 10 * G[1:-1] + G[2:]))
    if not residual <= 1e-6 * scale:
        raise SolverError(f"radial solve residual {residual:.3g} exceeds 1e-6 of source norm",
                          residual=residual / scale)
    return RadialFunction(r, np.sqrt(r) * phi)


def numerov_residual(phi, K, G, h2):
    """Norm of the discrete Numerov operator applied to phi minus its source."""
    T = h2 / 12.0 * K
    lhs = ((1 - T[2:]) * phi[2:] - 2 * (1 + 5 * T[1:-1]) * phi[1:-1]
           + (1 - T[:-2]) * phi[:-2])
    rhs = h2 / 12.0 * (G[2:] + 10 * G[1:-1] + G[:-2])
    return float(np.linalg.norm(lhs - rhs))
