"""Upper bounds on the CSL rate lambda from experimental photon-rate limits.

Every implemented rate is linear in lambda, so a bound is one division:
lambda_max = rate_limit / (dGamma/dp per unit lambda).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .errors import DomainError
from .units import CONSTANTS, LAMBDA_STANDARD, Constants, energy_to_momentum


@dataclass(frozen=True)
class ExperimentalLimit:
    E_photon: float  # keV
    rate_limit: float  # s^-1 cm, upper limit on dGamma/dp
    description: str = ""
    name: str = ""
    stated_lambda_bound: float | None = None

    def __post_init__(self):
        if not (self.E_photon > 0 and self.rate_limit > 0):
            raise DomainError("an experimental limit needs E_photon > 0 and rate_limit > 0")


@dataclass(frozen=True)
class BoundResult:
    lambda_max: float  # s^-1; inf when the model predicts no emission
    rate_per_lambda: float  # cm (dGamma/dp per unit lambda)
    r_c: float

    @property
    def constrained(self):
        return math.isfinite(self.lambda_max)

    @property
    def ratio_to_standard(self):
        return self.lambda_max / LAMBDA_STANDARD


def load_limits() -> dict[str, ExperimentalLimit]:
    raw = json.loads(resources.files("cslrad").joinpath("data/limits.json").read_text())
    return {
        name: ExperimentalLimit(
            E_photon=entry["E_photon_keV"],
            rate_limit=entry["rate_limit_s_inv_cm"],
            description=entry.get("description", ""),
            name=name,
            stated_lambda_bound=entry.get("stated_lambda_bound_s_inv"),
        )
        for name, entry in sorted(raw.items())
    }


def get_limit(name) -> ExperimentalLimit:
    limits = load_limits()
    if name not in limits:
        raise KeyError(f"unknown limit {name!r}; available: {', '.join(limits)}")
    return limits[name]


def lambda_bound(limit: ExperimentalLimit, rate: Callable, r_c,
                 constants: Constants = CONSTANTS) -> BoundResult:
    """Invert ``rate(p, lam, r_c)`` (linear in lam) against ``limit``."""
    p = energy_to_momentum(limit.E_photon, constants)
    per_lambda = rate(p, 1.0, r_c)
    if per_lambda < 0:
        raise DomainError("rate per unit lambda is negative")
    if per_lambda == 0:
        return BoundResult(math.inf, 0.0, r_c)
    return BoundResult(limit.rate_limit / per_lambda, per_lambda, r_c)


def bound_rescale_rc(lambda_bound, r_c_old, r_c_new):
    """Rescale a bound for rates scaling as 1/r_c^2: lambda (r_new / r_old)^2."""
    if r_c_old <= 0 or r_c_new <= 0:
        raise DomainError("correlation lengths must be positive")
    return lambda_bound * (r_c_new / r_c_old) ** 2
