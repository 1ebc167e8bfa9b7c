"""
Pydantic schemas for checks, tasks, results and run configuration.
"""

import math
import time
from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_serializer, field_validator, model_validator


class CheckId(str, Enum):
    """Stable names of every check."""

    # Series congruences
    ANEW3 = "anew3"
    ANEW4 = "anew4"
    ANEW5 = "anew5"
    ANEW6 = "anew6"
    WANG_YU = "wang-yu"
    A1 = "a1"
    A2 = "a2"
    B1 = "b1"
    C1 = "c1"

    # Exact identities
    CARLITZ = "carlitz"
    CARLITZ_SPECIALIZATION = "carlitz-specialization"
    B2_IDENTITY = "b2-identity"
    C2_IDENTITY = "c2-identity"
    RATIO_IDENTITY = "ratio-identity"

    # Proof steps
    QBINOM_NEGK = "qbinom-negk"
    B3 = "b3"
    B4 = "b4"
    B5 = "b5"
    B8 = "b8"
    MORLEY_B9 = "morley-b9"
    B10 = "b10"
    CENTRAL_QBINOM = "central-qbinom"
    B11 = "b11"
    B12 = "b12"
    B13 = "b13"
    B14 = "b14"
    B15 = "b15"
    B16 = "b16"
    B18 = "b18"
    B19 = "b19"
    B20 = "b20"
    C3 = "c3"
    C4 = "c4"
    C5 = "c5"
    C6 = "c6"
    C7 = "c7"
    C8 = "c8"
    C9 = "c9"
    C10 = "c10"
    C11 = "c11"
    QPOW_LEMMA = "qpow-lemma"

    # Classical integer congruences
    SUN_TAURASO = "sun-tauraso"
    SUN = "sun"
    Q_TO_1 = "q-to-1"


SERIES_CHECKS = (
    CheckId.ANEW3,
    CheckId.ANEW4,
    CheckId.ANEW5,
    CheckId.ANEW6,
    CheckId.WANG_YU,
    CheckId.A1,
    CheckId.A2,
    CheckId.B1,
    CheckId.C1,
)

CLASSICAL_CHECKS = (CheckId.SUN_TAURASO, CheckId.SUN)


class OutputFormat(str, Enum):
    """Report formats."""

    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class ProofSection(str, Enum):
    """Which proof chain to replay."""

    S2 = "2"
    S3 = "3"
    BOTH = "both"


class CheckResult(BaseModel):
    """Verdict for one named check at one n."""

    check: str = Field(..., description="Check name, e.g. a1 or morley-b9")
    n: int = Field(..., description="Index n, or p^r for classical checks")
    power: int = Field(..., ge=0, description="Modulus power the check was run at")
    params: Dict[str, Union[int, str]] = Field(
        default_factory=dict, description="Extra parameters such as d, k, s, p, r, a, b"
    )
    holds: bool = Field(..., description="Decided by exact arithmetic only")
    valuation: Optional[int] = Field(
        default=None, description="Valuation of the difference; None means infinite"
    )
    ms: float = Field(default=0.0, ge=0, description="Elapsed wall time in milliseconds")
    detail: str = Field(default="", description="Human-readable notes")

    @field_validator("valuation", mode="before")
    @classmethod
    def validate_valuation(cls, v):
        """Map an infinite valuation to None."""
        if isinstance(v, float) and math.isinf(v) and v > 0:
            return None
        if isinstance(v, float):
            return int(v)
        return v

    @field_serializer("valuation")
    def serialize_valuation(self, v: Optional[int]) -> Union[int, str]:
        return "inf" if v is None else v

    @classmethod
    def timed(
        cls,
        check: str,
        n: int,
        power: int,
        started: float,
        holds: bool,
        valuation: Any = None,
        params: Optional[Dict[str, Union[int, str]]] = None,
        detail: str = "",
    ) -> "CheckResult":
        """Create a result whose ms field runs from a perf_counter start."""
        return cls(
            check=check,
            n=n,
            power=power,
            params=params or {},
            holds=holds,
            valuation=valuation,
            ms=round((time.perf_counter() - started) * 1000, 3),
            detail=detail,
        )

    def valuation_text(self) -> str:
        return "inf" if self.valuation is None else str(self.valuation)

    def report_record(self, timing: bool = True) -> Dict[str, Any]:
        """Ordered record for JSON and CSV reports."""
        record = {
            "check": self.check,
            "n": self.n,
            "power": self.power,
            "params": dict(sorted(self.params.items())),
            "holds": self.holds,
            "valuation": self.valuation_text() if self.valuation is None else self.valuation,
        }
        if timing:
            record["ms"] = self.ms
        return record


class ClassicalParams(BaseModel):
    """Parameters of the classical congruences; primality is checked by the check itself."""

    p: int = Field(..., ge=2, description="Odd prime")
    r: int = Field(default=1, ge=1, description="Exponent of p")
    power: int = Field(default=1, ge=1, le=2, description="Modulus p^power")


class CheckTask(BaseModel):
    """One unit of work for the runner."""

    check: str = Field(..., description="Registry name")
    n: int = Field(..., ge=0, description="Index n (p^r for classical checks)")
    power: Optional[int] = Field(default=None, ge=1, le=2, description="Modulus power override")
    params: Dict[str, Union[int, str]] = Field(default_factory=dict)

    def label(self) -> str:
        extra = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.check} n={self.n}" + (f" {extra}" if extra else "")


class RunConfig(BaseModel):
    """Everything the verify command needs."""

    checks: List[str] = Field(..., min_length=1, description="Check names")
    n_start: int = Field(..., ge=0, description="First n (inclusive)")
    n_end: int = Field(..., ge=0, description="Last n (inclusive)")
    power: Optional[int] = Field(default=None, ge=1, le=2, description="Modulus power override")
    d: Optional[int] = Field(default=None, description="Wang-Yu parameter")
    k: Optional[int] = Field(default=None, ge=0, description="Proof-step index k")
    s: Optional[int] = Field(default=None, description="QPOW_LEMMA exponent")
    r: int = Field(default=1, ge=1, description="Exponent for classical checks")
    a: Optional[str] = Field(default=None, description="Carlitz parameter a")
    b: Optional[str] = Field(default=None, description="Carlitz parameter b")
    base_power: Optional[int] = Field(default=None, ge=1, description="Carlitz base power")
    count: Optional[int] = Field(default=None, ge=1, description="Random specialisation count")
    seed: Optional[int] = Field(default=None, description="Random seed")
    format: OutputFormat = Field(default=OutputFormat.TEXT)
    out: Optional[str] = Field(default=None, description="Report path, stdout when omitted")
    parallelism: int = Field(default=1, ge=1)
    fail_fast: bool = Field(default=False)
    timing: bool = Field(default=True, description="Include elapsed times in reports")

    @model_validator(mode="after")
    def validate_range(self):
        if self.n_end < self.n_start:
            raise ValueError(f"empty n range {self.n_start}..={self.n_end}")
        return self
