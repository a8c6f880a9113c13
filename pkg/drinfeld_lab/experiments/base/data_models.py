"""
Experiment Data Models

This module defines the core data structures for the experiment framework:
experiment configurations as read from TOML files, module specifications,
verdicts with their exit statuses, and the reports written after a run.
"""

from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import factorint

from drinfeld_lab.algebra.fields import FiniteField, constant_field
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule
from drinfeld_lab.arithmetic.funcfield import rational_function_field
from drinfeld_lab.arithmetic.ore import OrePoly
from drinfeld_lab.core.serialization import canonical_json, content_hash


class ExperimentKind(str, Enum):
    """Experiment kinds, one per subcommand"""
    TORSION = "torsion"
    FROBENIUS = "frobenius"
    IMAGE = "image"
    KUMMER_DENSITY = "kummer-density"
    DIVISION_HULL = "division-hull"
    ENDRING = "endring"
    INDEX_BOUND = "index-bound"
    ISOGENY_CHECK = "isogeny-check"
    RESTRICT_CHECK = "restrict-check"


class BaseKind(str, Enum):
    """Field of definition of a module"""
    RATIONAL = "rational"
    FINITE = "finite"


class ExperimentStatus(str, Enum):
    """Experiment execution status enumeration"""
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class ProgressStage(str, Enum):
    """Progress tracking stage enumeration"""
    INITIALIZING = "initializing"
    VALIDATING = "validating"
    COMPUTING = "computing"
    SWEEPING = "sweeping"
    CLASSIFYING = "classifying"
    WRITING_REPORT = "writing_report"
    COMPLETED = "completed"


class Verdict(str, Enum):
    """Outcome of an experiment check"""
    HOLDS = "holds"
    FAILS = "fails"
    FULL = "full"
    CONTAINS_SL = "contains-SL-index-known"
    CYCLIC_SCALAR = "cyclic-scalar"
    INCONCLUSIVE = "inconclusive"
    STABILIZED = "stabilized"
    NOT_STABILIZED = "not-stabilized"
    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"
    INAPPLICABLE = "inapplicable"
    UNDER_SAMPLE = "under-sample"

    @property
    def exit_status(self) -> int:
        if self in (Verdict.FAILS, Verdict.FAIL):
            return 1
        if self in (Verdict.INCONCLUSIVE, Verdict.NOT_STABILIZED, Verdict.UNDER_SAMPLE, Verdict.INAPPLICABLE):
            return 2
        return 0


def _is_prime_power(q: int) -> bool:
    return q >= 2 and len(factorint(q)) == 1


class ModuleSpec(BaseModel):
    """
    A Drinfeld module as written in a config file.

    `phi_t` lists the coefficients of φ_t in τ. Over the rational base each
    coefficient is a polynomial in θ (a coefficient list) or a
    {"num": [...], "den": [...]} pair; over a finite base it is an element of
    k = F_q[x]/(base_modulus), written as an integer or as prime-field
    coordinates.
    """

    model_config = ConfigDict(extra="forbid")

    base: BaseKind = BaseKind.RATIONAL
    base_modulus: Optional[List[Any]] = None
    phi_t: List[Any] = Field(..., min_length=2)

    @model_validator(mode="after")
    def check_base(self) -> "ModuleSpec":
        if self.base_modulus is not None and self.base != BaseKind.FINITE:
            raise ValueError("base_modulus is only meaningful for a finite base")
        return self

    def build(self, q: int) -> DrinfeldModule:
        fq = constant_field(q)
        if self.base == BaseKind.RATIONAL:
            L = rational_function_field(q)
        elif self.base_modulus is None:
            L = fq
        else:
            L = FiniteField(fq, tuple(fq.decode(c) for c in self.base_modulus))
        return DrinfeldModule(OrePoly(L, [L.decode(c) for c in self.phi_t]))


class ExperimentConfig(BaseModel):
    """
    Schema-validated experiment configuration.

    `parameters` is checked again against the parameter model of the
    experiment kind before anything runs.
    """

    model_config = ConfigDict(extra="forbid")

    kind: ExperimentKind
    q: int
    seed: int
    module: ModuleSpec
    parameters: Dict[str, Any] = Field(default_factory=dict)
    workers: int = Field(default=1, ge=1, le=256)
    output: Optional[str] = None

    @field_validator("q")
    @classmethod
    def validate_q(cls, v: int) -> int:
        if not _is_prime_power(v):
            raise ValueError(f"q = {v} is not a prime power")
        return v

    def canonical(self) -> Dict[str, Any]:
        """Everything that determines the payload; workers and output do not."""
        return self.model_dump(mode="json", exclude={"workers", "output"})

    @property
    def config_hash(self) -> str:
        return content_hash(self.canonical())


class ValidationResult(BaseModel):
    """Result of parameter validation"""
    is_valid: bool = True
    errors: List[str] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    def add_error(self, message: str):
        """Add a validation error"""
        self.errors.append(message)
        self.is_valid = False

    def add_warning(self, message: str):
        """Add a validation warning"""
        self.warnings.append(message)


class SkipRecord(BaseModel):
    """A place left out of a sweep"""
    place: List[Any]
    reason: str


class ExperimentReport(BaseModel):
    """Complete experiment report"""
    config: Dict[str, Any]
    config_hash: str
    tool_version: str
    status: ExperimentStatus
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    wall_time_seconds: Optional[float] = None

    payload: Dict[str, Any] = Field(default_factory=dict)
    verdicts: List[Verdict] = Field(default_factory=list)
    skips: List[SkipRecord] = Field(default_factory=list)
    exit_status: int = 0

    # Error information (if failed)
    error_message: Optional[str] = None
    error_category: Optional[str] = None
    error_details: Dict[str, Any] = Field(default_factory=dict)

    def payload_json(self) -> str:
        """Canonical payload; identical for identical configs."""
        return canonical_json(self.payload)

    def summary(self) -> str:
        verdicts = ", ".join(v.value for v in self.verdicts) or "none"
        line = f"{self.config['kind']}: status={self.status.value} verdicts={verdicts} exit={self.exit_status}"
        if self.wall_time_seconds is not None:
            line += f" time={self.wall_time_seconds:.2f}s"
        if self.error_message:
            line += f" error={self.error_message}"
        return line


class ExperimentInfo(BaseModel):
    """Experiment metadata and capabilities"""
    kind: ExperimentKind
    description: str
    version: str
    bases: List[BaseKind] = Field(default_factory=lambda: list(BaseKind))
    parameters_schema: Dict[str, Any] = Field(default_factory=dict)


class ExperimentParameters(BaseModel):
    """
    Base for the [parameters] table of an experiment kind.

    Polynomials in t (levels, b) and in θ are ascending coefficient lists;
    field elements use the encoding of the module's field of definition.
    """

    model_config = ConfigDict(extra="forbid")
