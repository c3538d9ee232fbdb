"""
Wronsk Pydantic Schemas

Validated option bundles and serializable results.

Architecture:
    - PhysicalScales: mass, ħ and length unit for nondimensionalization
    - SolverOptions: numeric knobs shared by scans, refinement and solving
    - BoundState / CriticalCoupling: solver results, one row each in reports
    - RunConfig: one CLI invocation, built from parsed arguments

Array-carrying types (Potential, Grid, SolutionPair, ScanTable, ...) live next
to the engines that produce them as frozen dataclasses.
"""

from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from .config import (
    DEFAULT_JOBS, DEFAULT_MAX_ITER, DEFAULT_N_SCAN, DEFAULT_STEP, DEFAULT_TOL,
    MAX_STEP, MIN_TOL,
)


class StateParity(str, Enum):
    """Parity label of a bound state or critical coupling."""
    EVEN = "even"
    ODD = "odd"
    NONE = "none"


# ---------------------------------------------------------------------------
# PHYSICAL SCALES
# ---------------------------------------------------------------------------

class PhysicalScales(BaseModel):
    """Mass, ħ and length unit L; energy unit ħ²/(mL²)."""
    mass: float = Field(..., gt=0.0)
    hbar: float = Field(..., gt=0.0)
    length_scale: float = Field(..., gt=0.0)

    model_config = {"frozen": True}

    @property
    def energy_scale(self) -> float:
        return self.hbar ** 2 / (self.mass * self.length_scale ** 2)

    def to_physical_energy(self, eps: float) -> float:
        """E = ε · ħ²/(mL²)."""
        return eps * self.energy_scale

    def to_dimensionless_energy(self, energy: float) -> float:
        return energy / self.energy_scale


# ---------------------------------------------------------------------------
# SOLVER OPTIONS
# ---------------------------------------------------------------------------

class SolverOptions(BaseModel):
    """Numeric options for scans, root refinement and bound-state search."""
    h: float = Field(DEFAULT_STEP, gt=0.0, le=MAX_STEP)
    x_eval: Optional[float] = Field(None, gt=0.0)   # None = auto
    x0: float = 0.0
    eps_floor: Optional[float] = None
    eps_ceiling: Optional[float] = None
    n_scan: int = Field(DEFAULT_N_SCAN, ge=2)
    tol: float = Field(DEFAULT_TOL, ge=MIN_TOL)
    max_iter: int = Field(DEFAULT_MAX_ITER, ge=1)
    method: Literal["bisect", "brent"] = "bisect"
    jobs: int = Field(DEFAULT_JOBS, ge=1)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_energy_window(self):
        if (
            self.eps_floor is not None
            and self.eps_ceiling is not None
            and self.eps_floor >= self.eps_ceiling
        ):
            raise ValueError(
                f"eps_floor ({self.eps_floor}) must lie below eps_ceiling ({self.eps_ceiling})"
            )
        return self


# ---------------------------------------------------------------------------
# RESULTS
# ---------------------------------------------------------------------------

class BoundState(BaseModel):
    """One refined bound state."""
    index: int = Field(..., ge=0)
    energy: float
    parity: StateParity
    residual_divergent: float           # B₃ at x_eval
    wronskian_residual: float           # quantization value at the accepted ε
    bracket_width: float
    k: float
    x_eval: float
    low_confidence: bool = False
    mixture: tuple[float, float] = (1.0, 0.0)


class CriticalCoupling(BaseModel):
    """Coupling value at which a new state sits exactly at threshold."""
    index: int = Field(..., ge=0)
    coupling: float
    parity: StateParity
    bracket_width: float


# ---------------------------------------------------------------------------
# CLI RUN CONFIGURATION
# ---------------------------------------------------------------------------

class RunConfig(BaseModel):
    """One CLI invocation after argument parsing."""
    subcommand: Literal["solve", "scan", "critical", "wavefunction", "oracle"]
    builtin: Optional[str] = None
    params: dict[str, float] = Field(default_factory=dict)
    expr: Optional[str] = None
    solver: SolverOptions = Field(default_factory=SolverOptions)
    mode: Literal["energy", "coupling", "x"] = "energy"
    emin: Optional[float] = None
    emax: Optional[float] = None
    value_range: Optional[tuple[float, float]] = None
    energy: Optional[float] = None
    state: Optional[int] = Field(None, ge=0)
    coupling: str = "v0"
    mixture: Optional[tuple[float, float]] = None
    output: Optional[str] = None
    output_format: Literal["csv", "table"] = "csv"
    header: bool = True

    @field_validator("value_range")
    @classmethod
    def validate_range(cls, v):
        if v is not None and not v[0] < v[1]:
            raise ValueError(f"Range must satisfy LO < HI, got {v[0]}:{v[1]}")
        return v

    @model_validator(mode="after")
    def check_potential_spec(self):
        if self.subcommand == "oracle":
            if "v0" not in self.params:
                raise ValueError("oracle needs --param v0=VALUE")
            return self
        if (self.builtin is None) == (self.expr is None):
            raise ValueError("Give exactly one of --builtin NAME or --expr STR")
        if self.expr is not None and self.params:
            raise ValueError("--param applies to --builtin potentials only")
        return self

    @property
    def potential_spec(self) -> str:
        if self.expr is not None:
            return f"expr:{self.expr}"
        params = ",".join(f"{k}={v!r}" for k, v in sorted(self.params.items()))
        return f"builtin:{self.builtin}({params})"
