"""
Validated run configuration in dotted-key TOML text.
"""

from typing import Annotated, Literal, cast

import tomlkit
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
)
from tomlkit.exceptions import ParseError

from .settings import Settings

Mode = Literal["solve-static", "simulate", "mms-convergence", "infsup-scan"]
Bounds = tuple[float, float, float, float]
PositiveFloat = Annotated[float, Field(gt=0.0)]
PositiveInt = Annotated[int, Field(ge=1)]


class ConfigError(ValueError):
    """
    Error indicating that run configuration text is malformed, has unknown
    keys or holds values that violate constraints.
    """

    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"{key}: {message}" if key else message)
        self.key: str = key


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RunSection(_Section):
    """
    Kind of run.
    """

    mode: Mode


class FluidSection(_Section):
    """
    Fluid grid and initial velocity.
    """

    nx: PositiveInt
    ny: PositiveInt
    bounds: Bounds
    initial: Literal["zero", "vortex"]
    amplitude: float

    @field_validator("bounds")
    @classmethod
    def _check_bounds(cls, bounds: Bounds) -> Bounds:
        if not (bounds[1] > bounds[0] and bounds[3] > bounds[2]):
            raise ValueError("bounds must be x0 < x1 and y0 < y1")
        return bounds


class SolidSection(_Section):
    """
    Reference domain and initial map of the immersed solid.
    """

    kind: Literal["disk", "square", "curve"]
    center: tuple[float, float]
    radius: PositiveFloat
    refine: Annotated[int, Field(ge=0)]
    stretch: PositiveFloat
    segments: Annotated[int, Field(ge=3)]
    bounds: Bounds
    cells: PositiveInt
    collapse: bool


class PhysicsSection(_Section):
    """
    Densities, viscosity and elasticity modulus.
    """

    rho_f: PositiveFloat
    rho_s: PositiveFloat
    nu: PositiveFloat
    kappa: PositiveFloat

    @field_validator("rho_s")
    @classmethod
    def _check_excess_density(
        cls, rho_s: float, info: ValidationInfo
    ) -> float:
        rho_f = cast(float | None, info.data.get("rho_f"))
        if rho_f is not None and rho_s < rho_f:
            raise ValueError(
                "solid density must be at least the fluid density "
                + "(delta rho = rho_s - rho_f >= 0)"
            )
        return rho_s


class SchemeSection(_Section):
    """
    Time stepping and discretization choices.
    """

    dt: PositiveFloat
    steps: PositiveInt
    convection: bool
    coupling: Literal["L2", "H1"]
    codim: Literal[0, 1]
    quad_degree: Annotated[int, Field(ge=1, le=30)]
    workers: PositiveInt


class OutputSection(_Section):
    """
    Output location, snapshot cadence and energy audit.
    """

    directory: str
    cadence: Annotated[int, Field(ge=0)]
    audit: Literal["off", "on", "strict"]
    refined: bool
    matrices: bool

    @field_validator("audit", mode="before")
    @classmethod
    def _audit_flag(cls, audit: object) -> object:
        if isinstance(audit, bool):
            return "on" if audit else "off"
        return audit


class ToleranceSection(_Section):
    """
    Tolerances of solver contracts and verification checks.
    """

    energy: PositiveFloat
    residual: PositiveFloat
    slope: PositiveFloat
    mms: PositiveFloat
    infsup: Annotated[float, Field(ge=1.0)]


class StudySection(_Section):
    """
    Refinement levels and mesh size ratios of studies.
    """

    levels: PositiveInt
    base: PositiveInt
    ratio: PositiveFloat
    ratios: Annotated[tuple[PositiveFloat, ...], Field(min_length=1)]
    fix_solid: bool


class RunConfig(_Section):
    """
    Complete configuration of a run.
    """

    run: RunSection
    fluid: FluidSection
    solid: SolidSection
    physics: PhysicsSection
    scheme: SchemeSection
    output: OutputSection
    tolerance: ToleranceSection
    study: StudySection


SECTIONS: dict[str, type[_Section]] = {
    name: cast(type[_Section], field.annotation)
    for name, field in RunConfig.model_fields.items()
}


def _check_consistency(config: RunConfig) -> None:
    if config.scheme.codim == 1 and config.solid.kind != "curve":
        raise ConfigError(
            "scheme.codim", "thin structures require solid.kind = curve"
        )
    if config.scheme.codim == 0 and config.solid.kind == "curve":
        raise ConfigError(
            "scheme.codim", "curve solids are thin structures with codim 1"
        )
    if config.scheme.coupling == "H1" and config.scheme.codim != 0:
        raise ConfigError(
            "scheme.coupling", "the H1 coupling requires a thick solid"
        )


def _error_key(error: ValidationError) -> tuple[str, str]:
    details = error.errors()[0]
    path = [str(part) for part in details["loc"] if isinstance(part, str)]
    return ".".join(path[:2]), details["msg"]


def parse_config(text: str, settings: Settings | None = None) -> RunConfig:
    """
    Parse run configuration text with dotted keys such as `fluid.nx = 32`,
    or with equivalent TOML tables. Keys missing from the text are filled
    from the settings chain. Raises `ConfigError` with the dotted key path
    for malformed text, unknown keys and invalid values.
    """

    try:
        document = tomlkit.parse(text)
    except ParseError as error:
        raise ConfigError("", f"Malformed configuration: {error}") from error

    if settings is None:
        settings = Settings.get_settings()

    given = cast(dict[str, object], document.unwrap())
    values: dict[str, dict[str, object]] = {}
    for section, model in SECTIONS.items():
        group = given.pop(section, {})
        if not isinstance(group, dict):
            raise ConfigError(section, "expected a table of keys")
        group = cast(dict[str, object], group)
        unknown = [key for key in group if key not in model.model_fields]
        if unknown:
            raise ConfigError(f"{section}.{unknown[0]}", "unknown key")
        try:
            values[section] = {
                key: group[key]
                if key in group
                else settings.get_value(section, key)
                for key in model.model_fields
            }
        except KeyError as error:
            raise ConfigError(section, f"no default for {error}") from error
    if given:
        raise ConfigError(next(iter(given)), "unknown section")

    try:
        config = RunConfig.model_validate(values)
    except ValidationError as error:
        key, message = _error_key(error)
        raise ConfigError(key, message) from error
    _check_consistency(config)
    return config


def default_config(settings: Settings | None = None) -> RunConfig:
    """
    Create a configuration from the settings chain alone.
    """

    return parse_config("", settings)


def serialize_config(config: RunConfig) -> str:
    """
    Write a configuration as dotted-key TOML text, one key per line.
    """

    lines: list[str] = []
    for section, values in config.model_dump(mode="json").items():
        for key, value in cast(dict[str, object], values).items():
            lines.append(
                f"{section}.{key} = {tomlkit.item(value).as_string()}"
            )
    return "\n".join(lines) + "\n"
