# isotower/report.py
"""
Pydantic models for suite configuration and verification reports.
"""

import json
import logging
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from config.settings import TOLERANCE_ATTRS, settings

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIP = "skip"


class CheckRecord(BaseModel):
    """Outcome of one named check."""
    id: str
    status: str = PASS
    witness: Optional[Any] = None
    metrics: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("status")
    @classmethod
    def status_known(cls, v: str) -> str:
        if v not in (PASS, FAIL, SKIP):
            raise ValueError(f"unknown status {v!r}")
        return v


class Summary(BaseModel):
    # field names mirror the report schema
    pass_: int = Field(0, alias="pass")
    fail: int = 0
    skip: int = 0

    model_config = {"populate_by_name": True}


GRID_D0 = (2, 3, 4, 5)
GRID_D1_OFFSETS = (0, 1, 2)
DEFAULT_D1 = 4


class SuiteConfig(BaseModel):
    """
    Parameters of a suite run.  Leaving d0 unset sweeps the default grid
    d0 ∈ GRID_D0, d1 = d0 + GRID_D1_OFFSETS; a fixed d1 keeps that column.
    """
    d0: Optional[int] = None
    d1: Optional[int] = None
    k_range: List[int] = Field(default_factory=list)
    group: Optional[List[int]] = None
    trials: int = settings.DEFAULT_TRIALS
    seed: int = settings.DEFAULT_SEED
    tol: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def dims_ordered(self) -> "SuiteConfig":
        if self.d0 is not None and self.d0 < 1:
            raise ValueError(f"need d0 ≥ 1, got d0={self.d0}")
        if self.d0 is not None and self.d1 is not None and self.d1 < self.d0:
            raise ValueError(f"need d1 ≥ d0 ≥ 1, got d0={self.d0}, d1={self.d1}")
        if not self.cells():
            raise ValueError(f"d1={self.d1} is below every grid dimension {list(GRID_D0)}")
        if self.trials < 1:
            raise ValueError("trials must be ≥ 1")
        top = self.d0 if self.d0 is not None else max(GRID_D0)
        bad = [k for k in self.k_range if not 0 <= k <= top]
        if bad:
            raise ValueError(f"k_range entries {bad} outside [0, {top}]")
        unknown = sorted(set(self.tol) - set(TOLERANCE_ATTRS))
        if unknown:
            raise ValueError(f"unknown tolerances {unknown}; known: {sorted(TOLERANCE_ATTRS)}")
        if any(not value > 0 for value in self.tol.values()):
            raise ValueError("tolerances must be positive")
        return self

    def tolerances(self) -> Dict[str, float]:
        merged = settings.tolerances()
        merged.update(self.tol)
        return merged

    def cells(self) -> List[Tuple[int, int]]:
        """The (d0, d1) pairs a run covers."""
        if self.d0 is not None:
            return [(self.d0, self.d1 if self.d1 is not None else max(self.d0, DEFAULT_D1))]
        if self.d1 is not None:
            return [(d0, self.d1) for d0 in GRID_D0 if d0 <= self.d1]
        return [(d0, d0 + offset) for d0 in GRID_D0 for offset in GRID_D1_OFFSETS]

    def sweeps(self) -> bool:
        return len(self.cells()) > 1

    def at(self, d0: int, d1: int) -> "SuiteConfig":
        return self.model_copy(update={"d0": d0, "d1": d1})

    def levels(self) -> List[int]:
        """Levels 1..d0−1 unless k_range narrows them."""
        d0 = self.cells()[0][0] if self.d0 is None else self.d0
        if self.k_range:
            return [k for k in self.k_range if k <= d0]
        return list(range(1, d0))


class Report(BaseModel):
    suite: str
    config: Dict[str, Any] = Field(default_factory=dict)
    environment: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckRecord] = Field(default_factory=list)
    summary: Summary = Field(default_factory=Summary)

    @property
    def failed(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failed

    def finalize(self) -> "Report":
        """Sort records by id and recount the summary."""
        self.checks = sorted(self.checks, key=lambda c: c.id)
        self.summary = Summary(
            pass_=sum(c.status == PASS for c in self.checks),
            fail=sum(c.status == FAIL for c in self.checks),
            skip=sum(c.status == SKIP for c in self.checks),
        )
        return self

    def merge(self, other: "Report") -> "Report":
        merged = Report(
            suite=self.suite,
            config=self.config,
            environment=self.environment,
            checks=self.checks + other.checks,
        )
        return merged.finalize()

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=_jsonable)


def _jsonable(obj: Any) -> Any:
    # numpy scalars and arrays sneaking into metrics or witnesses
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return str(obj)


def environment(seed: int, **extra: Any) -> Dict[str, Any]:
    env = {"seed": seed, "residue_convention": settings.RESIDUE_CONVENTION}
    env.update(extra)
    return env


def new_report(suite: str, records: List[CheckRecord], config: Optional[SuiteConfig] = None,
               seed: Optional[int] = None, **env: Any) -> Report:
    cfg = config.model_dump() if config is not None else {}
    s = seed if seed is not None else (config.seed if config is not None else settings.DEFAULT_SEED)
    return Report(suite=suite, config=cfg, environment=environment(s, **env), checks=records).finalize()
