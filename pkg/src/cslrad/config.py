"""Run configuration: strict JSON schema and the mapping onto the physics modules."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import (BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat,
                      PositiveInt, ValidationError, model_validator)

from .errors import ConfigError
from .free_electron import FreeParticle, rate_closed_form, rate_exact_quadrature
from .hydrogen import HydrogenicAtom, ground_state_form_factor, rate_high_p, rate_small_p
from .manybody import (CrystalCell, CrystalSite, FixedPositions, Hydrogenic1s, ParticleSpec,
                       coherence_ratio, crystal_coherence_ratio, crystal_rate, rate_general)
from .noise import (ColoredNoise, GaussianCorrelation, GeneralCorrelation, TabulatedFunction,
                    WhiteNoise, effective_gamma, lambda_from_gamma)
from .units import CONSTANTS

Vec3 = tuple[float, float, float]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class FreeElectronSystem(_Strict):
    type: Literal["free_electron"]
    charge: float = 1.0
    mass_g: Optional[PositiveFloat] = None
    method: Literal["closed_form", "exact_quadrature"] = "closed_form"


class HydrogenSystem(_Strict):
    type: Literal["hydrogen"]
    m1_g: Optional[PositiveFloat] = None
    m2_g: Optional[PositiveFloat] = None
    charge: float = 1.0
    regime: Literal["high_p", "small_p"] = "high_p"


class ParticleModel(_Strict):
    charge: float
    mass_g: PositiveFloat
    coupling_g: Optional[float] = None


class FixedPositionsModel(_Strict):
    type: Literal["fixed_positions"]
    positions_cm: list[Vec3]


class Hydrogenic1sModel(_Strict):
    type: Literal["hydrogenic_1s"]
    a0_cm: Optional[PositiveFloat] = None


class ManyBodySystem(_Strict):
    type: Literal["many_body"]
    particles: list[ParticleModel] = Field(min_length=1)
    configuration: Annotated[Union[FixedPositionsModel, Hydrogenic1sModel],
                             Field(discriminator="type")]
    mode: Literal["exact", "w0"] = "exact"

    @model_validator(mode="after")
    def _lengths(self):
        cfg = self.configuration
        if isinstance(cfg, FixedPositionsModel) and len(cfg.positions_cm) != len(self.particles):
            raise ValueError("positions_cm needs one entry per particle")
        if isinstance(cfg, Hydrogenic1sModel) and len(self.particles) != 2:
            raise ValueError("hydrogenic_1s needs exactly two particles")
        return self


class SiteModel(_Strict):
    charge: float
    position_cm: Vec3
    sigma_cm: NonNegativeFloat = 0.0
    coupling_ratio: float = 1.0


class CrystalSystem(_Strict):
    type: Literal["crystal"]
    sites: list[SiteModel] = Field(min_length=1)
    n_cells: PositiveInt = 1
    lattice_constant_cm: Optional[PositiveFloat] = None


class WhiteNoiseModel(_Strict):
    type: Literal["white"]
    lambda_s_inv: NonNegativeFloat = 2.2e-17


class ColoredNoiseModel(_Strict):
    type: Literal["colored"]
    gamma_cm3_s_inv: Optional[NonNegativeFloat] = None
    table: Optional[list[tuple[float, NonNegativeFloat]]] = None
    tail: Literal["zero", "hold"] = "zero"
    cutoff_s_inv: Optional[PositiveFloat] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.gamma_cm3_s_inv is None) == (self.table is None):
            raise ValueError("give exactly one of gamma_cm3_s_inv and table")
        return self


class GaussianCorrelationModel(_Strict):
    type: Literal["gaussian"]
    r_c_cm: PositiveFloat = 1e-5


class TableCorrelationModel(_Strict):
    type: Literal["table"]
    r_c_cm: PositiveFloat
    table: list[tuple[NonNegativeFloat, float]] = Field(min_length=2)
    tail: Literal["zero", "hold"] = "zero"


class GridModel(_Strict):
    E_min_keV: PositiveFloat
    E_max_keV: PositiveFloat
    n_points: int = Field(ge=2)
    spacing: Literal["linear", "log"] = "log"

    @model_validator(mode="after")
    def _ordered(self):
        if not self.E_min_keV < self.E_max_keV:
            raise ValueError("E_min_keV must be below E_max_keV")
        return self

    def energies(self):
        if self.spacing == "log":
            return np.geomspace(self.E_min_keV, self.E_max_keV, self.n_points)
        return np.linspace(self.E_min_keV, self.E_max_keV, self.n_points)


class OutputModel(_Strict):
    format: Literal["csv", "json"] = "csv"
    plot: bool = False
    path: Optional[str] = None


class ConstantsModel(_Strict):
    m_N_g: Optional[PositiveFloat] = None


System = Annotated[Union[FreeElectronSystem, HydrogenSystem, ManyBodySystem, CrystalSystem],
                   Field(discriminator="type")]
Noise = Annotated[Union[WhiteNoiseModel, ColoredNoiseModel], Field(discriminator="type")]
Correlation = Annotated[Union[GaussianCorrelationModel, TableCorrelationModel],
                        Field(discriminator="type")]


class RunConfig(_Strict):
    system: System
    noise: Noise = WhiteNoiseModel(type="white")
    correlation: Correlation = GaussianCorrelationModel(type="gaussian")
    grid: GridModel
    output: OutputModel = OutputModel()
    constants: ConstantsModel = ConstantsModel()

    def digest(self):
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True,
                               separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def parse_config(data) -> RunConfig:
    """Validate a config given as a JSON string or a decoded mapping."""
    try:
        if isinstance(data, (str, bytes)):
            return RunConfig.model_validate_json(data)
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        path = ".".join(str(part) for part in err["loc"])
        raise ConfigError(err["msg"], path=path) from None


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# mapping onto the physics objects


def build_constants(cfg: RunConfig):
    if cfg.constants.m_N_g is None:
        return CONSTANTS
    return CONSTANTS.replace(m_N=cfg.constants.m_N_g)


def build_noise(model):
    if isinstance(model, WhiteNoiseModel):
        return WhiteNoise(model.lambda_s_inv)
    if model.gamma_cm3_s_inv is not None:
        return ColoredNoise.constant(model.gamma_cm3_s_inv, cutoff=model.cutoff_s_inv)
    omega, gamma = zip(*model.table)
    return ColoredNoise(TabulatedFunction(omega, gamma, model.tail), cutoff=model.cutoff_s_inv)


def build_correlation(model):
    if isinstance(model, GaussianCorrelationModel):
        return GaussianCorrelation(model.r_c_cm)
    w, g = zip(*model.table)
    kernel = TabulatedFunction(w, g, model.tail)
    w_max = max(w) if model.tail == "zero" else None
    return GeneralCorrelation(kernel, model.r_c_cm, w_max=w_max)


def _require_gaussian(corr, what):
    if not isinstance(corr, GaussianCorrelation):
        raise ConfigError(f"{what} rates need a gaussian correlation; use a many_body system",
                          path="correlation.type")


def _atom(system: HydrogenSystem, constants):
    return HydrogenicAtom(system.m1_g or constants.m_e, system.m2_g or constants.m_p,
                          system.charge, constants)


def _particles(system: ManyBodySystem):
    return [ParticleSpec(pt.charge, pt.mass_g, pt.coupling_g) for pt in system.particles]


def _configuration(system: ManyBodySystem, constants):
    cfg = system.configuration
    if isinstance(cfg, FixedPositionsModel):
        return FixedPositions(cfg.positions_cm)
    if cfg.a0_cm is not None:
        return Hydrogenic1s(cfg.a0_cm)
    m1, m2 = (pt.mass_g for pt in system.particles)
    q = system.particles[0].charge * system.particles[1].charge
    mu = m1 * m2 / (m1 + m2)
    return Hydrogenic1s(constants.hbar**2 / (mu * constants.e2 * abs(q)))


def _cell(system: CrystalSystem):
    sites = [CrystalSite(s.charge, s.position_cm, s.sigma_cm, s.coupling_ratio)
             for s in system.sites]
    return CrystalCell(sites, system.n_cells, system.lattice_constant_cm)


def evaluate_point(cfg: RunConfig, p, noise=None, corr=None):
    """(dGamma/dp, structure factor) for the configured system at momentum p.

    ``noise`` and ``corr`` override the configured ones (used by sweeps and
    bounds).  The structure factor is <|N(p)|^2> over the incoherent sum of
    squared charges: 1 for a free particle, F(p a0) for hydrogen.
    """
    constants = build_constants(cfg)
    noise = build_noise(cfg.noise) if noise is None else noise
    corr = build_correlation(cfg.correlation) if corr is None else corr
    system = cfg.system

    if isinstance(system, (FreeElectronSystem, HydrogenSystem)):
        _require_gaussian(corr, system.type)
        lam = lambda_from_gamma(effective_gamma(noise, constants.c * p, corr), corr.r_c)
        if isinstance(system, FreeElectronSystem):
            particle = FreeParticle(system.charge, system.mass_g or constants.m_e)
            fn = rate_exact_quadrature if system.method == "exact_quadrature" else rate_closed_form
            return fn(p, particle, lam, corr.r_c, constants=constants), 1.0
        atom = _atom(system, constants)
        fn = rate_small_p if system.regime == "small_p" else rate_high_p
        return fn(p, atom, lam, corr.r_c), ground_state_form_factor(p * atom.a0_eff)

    if isinstance(system, ManyBodySystem):
        particles = _particles(system)
        config = _configuration(system, constants)
        rate = rate_general(p, particles, config, noise, corr, mode=system.mode,
                            constants=constants)
        return rate, coherence_ratio(particles, config, p)

    cell = _cell(system)
    return crystal_rate(p, cell, noise, corr, constants=constants), \
        crystal_coherence_ratio(cell, p)


def rate_per_lambda_fn(cfg: RunConfig):
    """rate(p, lam, r_c) for the configured system under white noise."""
    base = build_correlation(cfg.correlation)

    def rate(p, lam, r_c):
        corr = dataclasses.replace(base, r_c=r_c)
        return evaluate_point(cfg, p, WhiteNoise(lam), corr)[0]

    return rate
