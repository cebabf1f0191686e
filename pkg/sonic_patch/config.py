from __future__ import annotations

"""Run configuration for sonic-patch.

A run is described by five blocks (gas, boundary, solver, output, verify), read from a
TOML file, validated against CONFIG_SCHEMA, and turned into dataclasses that check their
own ranges in __post_init__.
"""

import hashlib
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Literal

from jsonschema import Draft7Validator

from sonic_patch.errors import ConfigError
from sonic_patch.gas import DEFAULT_BERNOULLI, DEFAULT_ENTROPY_CONST, DEFAULT_GAMMA, GasParams

# =============================================================================
# Constants
# =============================================================================

DEFAULT_DT = 2e-3
# Smallest t_min used when none is given; the effective default is max(this, dt)
DEFAULT_T_MIN_FLOOR = 1e-3
DEFAULT_RESIDUAL_T_FLOOR = 0.05

VALID_CHECKS = ("oracle", "residual", "holder", "manufactured")
VALID_FORMATS = ("csv", "json")


@dataclass
class GasConfig:
    """Gas block.

    Attributes:
        gamma: Adiabatic index.
        bernoulli: Bernoulli constant B0.
        entropy_const: Constant A of p = A rho^gamma.
    """

    gamma: float = DEFAULT_GAMMA
    bernoulli: float = DEFAULT_BERNOULLI
    entropy_const: float = DEFAULT_ENTROPY_CONST

    def to_params(self) -> GasParams:
        return GasParams(
            gamma=self.gamma, bernoulli=self.bernoulli, entropy_const=self.entropy_const
        )


@dataclass
class BoundaryConfig:
    """Boundary block: either a registered preset or a pair of tables.

    Attributes:
        preset: Registered preset id. Ignored when tables are given.
        params: Keyword overrides for the preset builder.
        varpi_table: Path of the (x, varpi_hat) table.
        wall_table: Path of the (x, phi', phi'') table.
        n_samples: Trace sample count for table input.
        y1: Wall ordinate at x1 for table input.
    """

    preset: str | None = "reference"
    params: dict[str, float] = field(default_factory=dict)
    varpi_table: str | None = None
    wall_table: str | None = None
    n_samples: int = 401
    y1: float = 0.0

    def __post_init__(self) -> None:
        if (self.varpi_table is None) != (self.wall_table is None):
            raise ValueError("varpi_table and wall_table must be given together")
        if self.preset is None and self.varpi_table is None:
            raise ValueError("boundary needs a preset or a pair of tables")

    @property
    def uses_tables(self) -> bool:
        return self.varpi_table is not None


@dataclass
class SolverParams:
    """Marching resolution.

    Attributes:
        dt: Level spacing in t. Ignored when n_characteristics is set.
        t_min: Last marched level before the sonic line is closed by extrapolation.
            None means max(1e-3, dt).
        corrector_iters: Trapezoidal corrector sweeps per step.
        interp_order: 3 for cubic-spline foot interpolation, 1 for linear.
        n_characteristics: If set, dt = t0 / n_characteristics.
    """

    dt: float | None = DEFAULT_DT
    t_min: float | None = None
    corrector_iters: int = 2
    interp_order: Literal[1, 3] = 3
    n_characteristics: int | None = None

    def __post_init__(self) -> None:
        if self.dt is None and self.n_characteristics is None:
            raise ValueError("one of dt or n_characteristics is required")
        if self.dt is not None and not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_min is not None and not self.t_min > 0.0:
            raise ValueError(f"t_min must be positive, got {self.t_min}")
        if self.dt is not None and self.t_min is not None and self.dt > self.t_min:
            raise ValueError(f"dt must not exceed t_min, got dt={self.dt}, t_min={self.t_min}")
        if self.corrector_iters < 0:
            raise ValueError(f"corrector_iters must be >= 0, got {self.corrector_iters}")
        if self.interp_order not in (1, 3):
            raise ValueError(f"interp_order must be 1 or 3, got {self.interp_order}")
        if self.n_characteristics is not None and self.n_characteristics < 2:
            raise ValueError(f"n_characteristics must be >= 2, got {self.n_characteristics}")

    def resolve(self, t0: float) -> tuple[float, float]:
        """Effective (dt, t_min) for a region of height t0.

        Raises:
            ConfigError: If n_characteristics gives a dt above t_min.
        """
        dt = t0 / self.n_characteristics if self.n_characteristics is not None else self.dt
        assert dt is not None
        t_min = self.t_min if self.t_min is not None else max(DEFAULT_T_MIN_FLOOR, dt)
        if dt > t_min * (1.0 + 1e-12):
            raise ConfigError(
                f"dt must not exceed t_min, got dt={dt} (t0={t0} / n_characteristics), t_min={t_min}"
            )
        return dt, t_min


@dataclass
class OutputConfig:
    directory: str = "out"
    formats: list[str] = field(default_factory=lambda: list(VALID_FORMATS))

    def __post_init__(self) -> None:
        for fmt in self.formats:
            if fmt not in VALID_FORMATS:
                raise ValueError(f"Invalid format '{fmt}', must be one of {VALID_FORMATS}")


@dataclass
class VerifyConfig:
    """Verify block.

    Attributes:
        checks: Which verify studies `sonic-patch verify` runs.
        refine: Number of refinement levels for `sonic-patch converge` (>= 3).
        oracle_samples: Random supersonic samples per exact flow.
        residual_t_floor: Discrete residuals are measured only where t >= this.
        seed: Seed for sample placement.
    """

    checks: list[str] = field(default_factory=lambda: ["oracle", "residual", "holder"])
    refine: int = 3
    oracle_samples: int = 1000
    residual_t_floor: float = DEFAULT_RESIDUAL_T_FLOOR
    seed: int = 0

    def __post_init__(self) -> None:
        for check in self.checks:
            if check not in VALID_CHECKS:
                raise ValueError(f"Invalid check '{check}', must be one of {VALID_CHECKS}")
        if self.refine < 3:
            raise ValueError(f"refine must be >= 3, got {self.refine}")
        if self.oracle_samples <= 0:
            raise ValueError(f"oracle_samples must be positive, got {self.oracle_samples}")
        if not 0.0 < self.residual_t_floor < 1.0:
            raise ValueError(f"residual_t_floor must lie in (0, 1), got {self.residual_t_floor}")


@dataclass
class RunConfig:
    """A complete run description."""

    gas: GasConfig = field(default_factory=GasConfig)
    boundary: BoundaryConfig = field(default_factory=BoundaryConfig)
    solver: SolverParams = field(default_factory=SolverParams)
    output: OutputConfig = field(default_factory=OutputConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def config_hash(self) -> str:
        """First 16 hex chars of SHA-256 over the canonical JSON of this config."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]


# =============================================================================
# Schema and loading
# =============================================================================

_NUMBER_MAP = {"type": "object", "additionalProperties": {"type": "number"}}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "gas": {
            "type": "object",
            "properties": {
                "gamma": {"type": "number", "exclusiveMinimum": 1},
                "bernoulli": {"type": "number", "exclusiveMinimum": 0},
                "entropy_const": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "boundary": {
            "type": "object",
            "properties": {
                "preset": {"type": "string"},
                "params": _NUMBER_MAP,
                "varpi_table": {"type": "string"},
                "wall_table": {"type": "string"},
                "n_samples": {"type": "integer", "minimum": 16},
                "y1": {"type": "number"},
            },
            "additionalProperties": False,
        },
        "solver": {
            "type": "object",
            "properties": {
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "t_min": {"type": "number", "exclusiveMinimum": 0},
                "corrector_iters": {"type": "integer", "minimum": 0},
                "interp_order": {"enum": [1, 3]},
                "n_characteristics": {"type": "integer", "minimum": 2},
            },
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {
                "directory": {"type": "string"},
                "formats": {"type": "array", "items": {"enum": list(VALID_FORMATS)}},
            },
            "additionalProperties": False,
        },
        "verify": {
            "type": "object",
            "properties": {
                "checks": {"type": "array", "items": {"enum": list(VALID_CHECKS)}},
                "refine": {"type": "integer", "minimum": 3},
                "oracle_samples": {"type": "integer", "minimum": 1},
                "residual_t_floor": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "seed": {"type": "integer"},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


def validate_config_dict(raw: dict[str, Any]) -> list[str]:
    """Validate a raw config mapping against CONFIG_SCHEMA.

    Returns:
        List of "path: message" strings; empty if valid.
    """
    validator = Draft7Validator(CONFIG_SCHEMA)
    errors = []
    for error in sorted(validator.iter_errors(raw), key=lambda e: list(e.path)):
        path = ".".join(str(p) for p in error.path) or "<root>"
        errors.append(f"{path}: {error.message}")
    return errors


def config_from_dict(raw: dict[str, Any], base_dir: Path | None = None) -> RunConfig:
    """Build a RunConfig from a raw mapping; table paths are resolved against base_dir.

    Raises:
        ConfigError: If the mapping fails schema validation or a range check.
    """
    errors = validate_config_dict(raw)
    if errors:
        raise ConfigError("invalid configuration: " + "; ".join(errors))

    boundary = dict(raw.get("boundary", {}))
    if base_dir is not None:
        for key in ("varpi_table", "wall_table"):
            if key in boundary and not Path(boundary[key]).is_absolute():
                boundary[key] = str(base_dir / boundary[key])
    if "varpi_table" in boundary and "preset" not in boundary:
        boundary["preset"] = None

    try:
        return RunConfig(
            gas=GasConfig(**raw.get("gas", {})),
            boundary=BoundaryConfig(**boundary),
            solver=SolverParams(**raw.get("solver", {})),
            output=OutputConfig(**raw.get("output", {})),
            verify=VerifyConfig(**raw.get("verify", {})),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a TOML run configuration.

    Raises:
        ConfigError: If the file is missing, is not valid TOML, or fails validation.
    """
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(raw, base_dir=path.parent)


def apply_overrides(
    config: RunConfig,
    dt: float | None = None,
    t_min: float | None = None,
    out: str | None = None,
    seed: int | None = None,
    refine: int | None = None,
) -> RunConfig:
    """Return a copy of `config` with command-line overrides applied.

    Raises:
        ConfigError: If an override breaks a range check.
    """
    raw = config.to_dict()
    if dt is not None:
        raw["solver"]["dt"] = dt
        raw["solver"]["n_characteristics"] = None
    if t_min is not None:
        raw["solver"]["t_min"] = t_min
    if out is not None:
        raw["output"]["directory"] = out
    if seed is not None:
        raw["verify"]["seed"] = seed
    if refine is not None:
        raw["verify"]["refine"] = refine
    try:
        return RunConfig(
            gas=GasConfig(**raw["gas"]),
            boundary=BoundaryConfig(**raw["boundary"]),
            solver=SolverParams(**raw["solver"]),
            output=OutputConfig(**raw["output"]),
            verify=VerifyConfig(**raw["verify"]),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid override: {exc}") from exc
