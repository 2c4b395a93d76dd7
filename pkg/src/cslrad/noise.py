"""Noise models, spatial correlation kernels and the gamma <-> lambda map.

The CSL noise enters the rates only through two numbers: a temporal weight
(gamma for white noise, gamma(omega) evaluated at the photon frequency for
colored noise, or a time-integrated weight for non-stationary noise) and the
Fourier transform of the spatial correlation G, which weights the momentum
transfer w.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError
from .quadrature import QuadratureResult, integrate_1d

_GAMMA_PER_LAMBDA = 8.0 * math.pi**1.5


def gamma_from_lambda(lam, r_c):
    """gamma = 8 pi^{3/2} r_c^3 lambda  (cm^3 s^-1)."""
    if r_c <= 0:
        raise DomainError(f"r_c must be positive, got {r_c!r}")
    if lam < 0:
        raise DomainError(f"lambda must be non-negative, got {lam!r}")
    return _GAMMA_PER_LAMBDA * r_c**3 * lam


def lambda_from_gamma(gamma, r_c):
    if r_c <= 0:
        raise DomainError(f"r_c must be positive, got {r_c!r}")
    if gamma < 0:
        raise DomainError(f"gamma must be non-negative, got {gamma!r}")
    return gamma / (_GAMMA_PER_LAMBDA * r_c**3)


@dataclass(frozen=True)
class TabulatedFunction:
    """Piecewise-linear interpolant of sampled (x, y) pairs.

    Outside the table the value is 0 (``tail="zero"``) or the nearest end
    value (``tail="hold"``).
    """

    x: tuple
    y: tuple
    tail: str = "zero"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or len(x) < 2:
            raise DomainError("table needs at least two (x, y) pairs")
        if np.any(np.diff(x) <= 0):
            raise DomainError("table abscissae must be strictly increasing")
        if self.tail not in ("zero", "hold"):
            raise DomainError(f"unknown tail rule {self.tail!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __call__(self, t):
        if self.tail == "zero":
            return np.interp(t, self.x, self.y, left=0.0, right=0.0)
        return np.interp(t, self.x, self.y)


# ---------------------------------------------------------------------------
# temporal noise


@dataclass(frozen=True)
class WhiteNoise:
    lam: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise DomainError(f"lambda must be non-negative, got {self.lam!r}")


@dataclass(frozen=True)
class ColoredNoise:
    """Spectral density gamma(omega) in cm^3 s^-1, with an optional hard cutoff.

    The density is treated as zero for omega above ``cutoff``.
    """

    gamma_of_omega: Callable
    cutoff: float | None = None

    @classmethod
    def constant(cls, gamma, cutoff=None):
        return cls(_Constant(gamma), cutoff)


@dataclass(frozen=True)
class NonStationaryNoise:
    """Correlator Delta(s, u) (cm^3 s^-2) observed over a window [0, duration]."""

    delta: Callable
    duration: float
    rel_tol: float = 1e-6


NoiseSpec = Union[WhiteNoise, ColoredNoise, NonStationaryNoise]


@dataclass(frozen=True)
class _Constant:
    value: float

    def __call__(self, omega):
        return np.full_like(np.asarray(omega, dtype=float), self.value)


def noise_weight(spec: NoiseSpec, omega, corr: "SpatialCorrelation"):
    """Spectral weight of the noise at angular frequency ``omega``.

    The caller supplies the shifted frequency omega_p + (E_f - E_i)/hbar.
    """
    if isinstance(spec, WhiteNoise):
        return gamma_from_lambda(spec.lam, corr.r_c)
    if isinstance(spec, ColoredNoise):
        if spec.cutoff is not None and omega > spec.cutoff:
            return 0.0
        value = float(spec.gamma_of_omega(omega))
        if value < 0:
            raise DomainError(f"spectral density is negative at omega={omega!r}")
        return value
    if isinstance(spec, NonStationaryNoise):
        raise DomainError("non-stationary noise has no spectral weight; use nonstationary_weight")
    raise TypeError(f"not a noise spec: {spec!r}")


def effective_gamma(spec: NoiseSpec, omega, corr: "SpatialCorrelation"):
    """Rate-equivalent gamma: the noise weight per unit observation time."""
    if isinstance(spec, NonStationaryNoise):
        result = nonstationary_weight(spec.delta, spec.duration, omega, rel_tol=spec.rel_tol)
        return result.value.real / spec.duration
    return noise_weight(spec, omega, corr)


def nonstationary_weight(delta, t, omega, rel_tol=1e-6) -> QuadratureResult:
    """Double integral of Delta(s, u) exp(i (s - u) omega) over [0, t]^2.

    Evaluated in lag / mean-time coordinates v = s - u, m = (s + u)/2; the
    lag integral is folded onto [0, t] so that +v and -v are paired
    pointwise, and its initial partition is refined geometrically toward
    v = 0 to catch correlators concentrated near the diagonal.  For a
    symmetric Delta the imaginary part cancels identically.
    """
    if t <= 0:
        raise DomainError("observation time must be positive")

    def mean_time_integral(v):
        lo, hi = 0.5 * abs(v), t - 0.5 * abs(v)
        if hi <= lo:
            return 0.0
        return integrate_1d(lambda m: delta(m + 0.5 * v, m - 0.5 * v), lo, hi,
                            rel_tol=rel_tol).value

    def lag_integrand(v):
        out = np.empty(len(v), dtype=complex)
        for i, vi in enumerate(v):
            phase = complex(math.cos(omega * vi), math.sin(omega * vi))
            out[i] = (mean_time_integral(vi) * phase
                      + mean_time_integral(-vi) * phase.conjugate())
        return out

    seeds = [t * 10.0**-k for k in range(1, 13)]
    return integrate_1d(lag_integrand, 0.0, t, rel_tol=rel_tol, breakpoints=seeds)


# ---------------------------------------------------------------------------
# spatial correlation


@dataclass(frozen=True)
class GaussianCorrelation:
    r_c: float

    def __post_init__(self):
        if not self.r_c > 0:
            raise DomainError(f"r_c must be positive, got {self.r_c!r}")


@dataclass(frozen=True)
class GeneralCorrelation:
    """Isotropic Fourier-space kernel G[w] with G[0] = 1.

    ``r_c`` is the reference length of the lambda convention (and the scale
    used to size quadratures); ``w_max`` bounds the kernel's support, 12/r_c
    by default.
    """

    kernel: Callable
    r_c: float
    w_max: float | None = None

    def __post_init__(self):
        if not self.r_c > 0:
            raise DomainError(f"r_c must be positive, got {self.r_c!r}")
        g0 = float(np.asarray(self.kernel(np.array([0.0])))[0])
        if abs(g0 - 1.0) > 1e-6:
            raise DomainError(f"kernel must equal 1 at w = 0, got {g0!r}")

    @property
    def support(self):
        return self.w_max if self.w_max is not None else 12.0 / self.r_c


SpatialCorrelation = Union[GaussianCorrelation, GeneralCorrelation]


def spatial_kernel(corr: SpatialCorrelation, w):
    """G[w]; exp(-w^2 r_c^2) for the Gaussian correlation."""
    w = np.asarray(w, dtype=float)
    if isinstance(corr, GaussianCorrelation):
        return np.exp(-(w * corr.r_c) ** 2)
    return np.asarray(corr.kernel(np.abs(w)), dtype=float)
