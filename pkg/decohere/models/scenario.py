"""
Scenario configuration
----------------------

A scenario file is a flat YAML mapping whose keys may be dotted
(``packet.center: 0.0``).  ``load_scenario`` reads the file, applies
``key=value`` overrides from the command line, expands dotted keys into
nested sections and validates the result into ``ScenarioConfig``.  Every
failure on the way (missing file, YAML syntax, unknown key, out-of-range
value, parameters not admissible for the regime) is raised as
``ConfigError`` carrying the dotted path of the offending key.
"""

from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import yaml
from pydantic import Field, ValidationError, field_validator, model_validator

from ..errors import ConfigError, DecohereError
from .base import FrozenModel
from .physical import FINE_STRUCTURE, PhysicalParams
from .regime import CutoffShape, DressingForm, Regime, VacuumForm

logger = logging.getLogger(__name__)

DEFAULT_FIGURE1_Q = (0.1, 0.5, 1.0, 5.0)

# Scenario keys that are stored under another name on PhysicalParams.
_PARAM_KEYS = {
    "alpha": "alpha",
    "omega_uv": "omega_uv",
    "omega_ir": "omega_ir",
    "mass_ratio": "mass_ratio_m_over_m0",
    "chi": "kinetic_scale_chi",
    "uv_energy_ratio": "uv_energy_ratio",
    "mass_cutoff": "mass_cutoff",
}
_SCENARIO_KEYS = {value: key for key, value in _PARAM_KEYS.items()}


class GridScale(str, Enum):
    LINEAR = "linear"
    LOG = "log"


class Units(str, Enum):
    DIMENSIONLESS = "dimensionless"
    SI = "si"


class OutputKind(str, Enum):
    """Table emitted by ``evolve``."""

    DIAGNOSTICS = "diagnostics"
    ELEMENTS = "elements"


class TauGrid(FrozenModel):
    min: float = Field(0.0, ge=0.0)
    max: float = Field(10.0, ge=0.0)
    points: int = Field(3, ge=1)
    scale: GridScale = GridScale.LINEAR

    @model_validator(mode="after")
    def _check_range(self) -> "TauGrid":
        if self.max < self.min:
            raise ValueError("tau.max must not be below tau.min")
        if self.scale is GridScale.LOG and self.min <= 0.0:
            raise ValueError("a log tau grid needs tau.min > 0")
        return self

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.min])
        if self.scale is GridScale.LOG:
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


class PacketSpec(FrozenModel):
    """Gaussian packet arguments, or an explicit list of points.

    Explicit packets give ``momenta`` and real ``amplitudes``, optionally
    with ``phases`` in radians; the amplitudes are normalised on build.
    """

    center: float = 0.0
    width: float = Field(0.01, gt=0.0)
    n: int = Field(2, ge=2, le=256)
    span: float = Field(1.0, gt=0.0)
    momenta: Optional[List[float]] = None
    amplitudes: Optional[List[float]] = None
    phases: Optional[List[float]] = None

    @field_validator("momenta")
    @classmethod
    def _check_points(cls, values: Optional[List[float]]) -> Optional[List[float]]:
        if values is not None and len(values) < 2:
            raise ValueError("an explicit packet needs at least 2 momenta")
        return values

    @model_validator(mode="after")
    def _check_explicit(self) -> "PacketSpec":
        if (self.momenta is None) != (self.amplitudes is None):
            raise ValueError("explicit packets need both momenta and amplitudes")
        if self.momenta is not None and len(self.momenta) != len(self.amplitudes):
            raise ValueError("momenta and amplitudes differ in length")
        if self.phases is not None and (
            self.momenta is None or len(self.phases) != len(self.momenta)
        ):
            raise ValueError("phases must accompany explicit momenta, one per point")
        return self

    def build(self):
        from ..services.density import explicit_packet, gaussian_packet

        if self.momenta is None:
            return gaussian_packet(self.center, self.width, self.n, self.span)
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.phases is not None:
            amplitudes = amplitudes * np.exp(1j * np.asarray(self.phases))
        return explicit_packet(self.momenta, amplitudes)


def q_label(q: float) -> str:
    """Short form of a Q value used in column names."""
    return f"{q:g}"


class QList(FrozenModel):
    q: List[float] = Field(default_factory=lambda: list(DEFAULT_FIGURE1_Q))

    @field_validator("q")
    @classmethod
    def _check_q(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("at least one Q value is required")
        if any(not v > 0.0 for v in values):
            raise ValueError("Q values must be > 0")
        labels = [q_label(v) for v in values]
        if len(set(labels)) != len(labels):
            raise ValueError(f"Q values must be distinct to 6 significant digits, got {labels}")
        return values


class ScenarioConfig(FrozenModel):
    regime: Regime = Regime.PARTIALLY_CORRELATED
    alpha: float = FINE_STRUCTURE
    omega_uv: float = 1.0
    omega_ir: float = 1e-2
    chi: float = 0.0
    mass_ratio: float = 1.0
    uv_energy_ratio: float = 1e-3
    mass_cutoff: CutoffShape = CutoffShape.EXPONENTIAL
    vac_form: VacuumForm = VacuumForm.EXACT
    dressing_form: DressingForm = DressingForm.SERIES
    units: Units = Units.DIMENSIONLESS
    rest_energy_ev: Optional[float] = None
    # Packet position; a common phase of both coherent states, so unused.
    r0: Optional[Union[float, List[float]]] = None
    packet: PacketSpec = Field(default_factory=PacketSpec)
    tau: TauGrid = Field(default_factory=TauGrid)
    outputs: OutputKind = OutputKind.DIAGNOSTICS
    figure1: QList = Field(default_factory=QList)
    sweep: QList = Field(default_factory=QList)

    @field_validator("outputs", mode="before")
    @classmethod
    def _single_output(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            if len(value) != 1:
                raise ValueError("choose exactly one of diagnostics, elements")
            return value[0]
        return value

    def params(self) -> PhysicalParams:
        """PhysicalParams for this scenario, converting SI input if requested."""
        values = {name: getattr(self, key) for key, name in _PARAM_KEYS.items()}
        if self.units is Units.SI:
            from ..services.units import from_si

            if self.rest_energy_ev is None:
                raise ConfigError("required when units are SI", field="rest_energy_ev")
            scales = from_si(self.omega_uv, self.omega_ir, self.rest_energy_ev)
            values.update(
                omega_uv=scales.omega_uv,
                omega_ir=scales.omega_ir,
                kinetic_scale_chi=scales.chi,
                uv_energy_ratio=scales.uv_energy_ratio,
            )
        try:
            return PhysicalParams(**values)
        except ValidationError as exc:
            raise _config_error(exc, rename=_SCENARIO_KEYS) from exc

    def evolve_options(self):
        from ..services.density import EvolveOptions

        return EvolveOptions(vac_form=self.vac_form, dressing_form=self.dressing_form)


def _config_error(
    exc: ValidationError, rename: Optional[Mapping[str, str]] = None
) -> ConfigError:
    first = exc.errors()[0]
    loc = [str(part) for part in first["loc"]]
    if loc and rename:
        loc[0] = rename.get(loc[0], loc[0])
    return ConfigError(first["msg"], field=".".join(loc) or None)


def parse_override(text: str) -> tuple:
    """Split ``key=value``; the value is parsed as YAML so numbers stay numbers."""
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"override {text!r} is not of the form key=value")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse value {raw!r}: {exc}", field=key.strip()) from exc
    return key.strip(), value


def unflatten(flat: Mapping[str, Any]) -> Dict[str, Any]:
    """Expand dotted keys into nested dictionaries, merging existing sections."""
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        parts = str(key).split(".")
        node = nested
        for depth, part in enumerate(parts[:-1]):
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError("is a value, not a section", field=".".join(parts[: depth + 1]))
            node = child
        leaf = parts[-1]
        if isinstance(value, Mapping):
            existing = node.setdefault(leaf, {})
            if not isinstance(existing, dict):
                raise ConfigError("is a value, not a section", field=str(key))
            existing.update(unflatten(value))
        else:
            node[leaf] = value
    return nested


def read_scenario_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc.strerror}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path} is not valid YAML: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a mapping of keys to values")
    return data


def build_scenario(
    flat: Mapping[str, Any], overrides: Sequence[str] = ()
) -> ScenarioConfig:
    merged = dict(flat)
    for item in overrides:
        key, value = parse_override(item)
        merged[key] = value
    try:
        config = ScenarioConfig.model_validate(unflatten(merged))
    except ValidationError as exc:
        raise _config_error(exc) from exc

    from ..services.density import check_regime

    params = config.params()
    check_regime(params, config.regime)
    try:
        config.packet.build()
    except DecohereError as exc:
        raise ConfigError(str(exc), field="packet") from exc
    if config.r0 is not None:
        logger.debug("r0 = %r accepted; it cancels in every overlap", config.r0)
    return config


def load_scenario(
    path: Union[str, Path], overrides: Sequence[str] = ()
) -> ScenarioConfig:
    """
    Read, override and validate a scenario file.

    Parameters
    ----------
    path : str or Path
        Flat YAML mapping; keys may be dotted.
    overrides : sequence of str
        ``key=value`` items applied after the file, values parsed as YAML.

    Returns
    -------
    ScenarioConfig
        Validated configuration whose physical parameters are admissible
        for its regime and whose packet builds.

    Raises
    ------
    ConfigError
        For unreadable files, YAML errors, unknown keys, out-of-range
        values and regime mismatches, with the dotted path of the key.
    """
    config = build_scenario(read_scenario_file(path), overrides)
    logger.info("loaded scenario %s (regime=%s)", path, config.regime.value)
    return config
