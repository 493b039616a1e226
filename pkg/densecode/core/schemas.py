import hashlib
import json
import math
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from densecode.core.states import MultipartiteState
from densecode.core.theorems import DEFAULT_NOISE_GRID, REQUIREMENTS, validate_noise_grid
from densecode.utils.dataclasses import TheoremId, TheoremVerdict, UINT64_MAX
from densecode.utils.errors import RejectedInputError


SIGNIFICANT_DIGITS = 12


def round_sig(x: float) -> float:
    """Round to 12 significant digits so reports stay byte-stable across platforms."""
    if not math.isfinite(x):
        return x
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


class StateFile(BaseModel):
    """
    On-disk state: ``data`` holds [re, im] pairs, either prod(dims) amplitudes
    (form "pure") or the row-major density matrix (form "mixed").
    """
    dims: List[int]
    form: Literal["pure", "mixed"]
    data: List[List[float]]

    @field_validator("dims")
    @classmethod
    def _dims_are_nontrivial(cls, dims: List[int]) -> List[int]:
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"dimension invariant violated: dims {dims} must be nonempty and >= 2")
        return dims

    @model_validator(mode="after")
    def _data_length_matches(self) -> "StateFile":
        total = math.prod(self.dims)
        expected = total if self.form == "pure" else total * total
        if len(self.data) != expected:
            raise ValueError(f"length invariant violated: {self.form} data for dims {self.dims} "
                             f"needs {expected} entries, got {len(self.data)}")
        if any(len(pair) != 2 for pair in self.data):
            raise ValueError("entries must be [re, im] pairs")
        return self

    def to_state(self) -> MultipartiteState:
        values = np.array([complex(re, im) for re, im in self.data], dtype=np.complex128)
        if self.form == "pure":
            return MultipartiteState.from_vector(values, self.dims)
        total = math.prod(self.dims)
        return MultipartiteState(values.reshape(total, total), self.dims)



def load_state_file(path: Union[str, Path]) -> MultipartiteState:
    try:
        raw = Path(path).read_text()
    except OSError as e:
        raise RejectedInputError(f"cannot read state file {path}: {e}") from e
    return StateFile.model_validate_json(raw).to_state()


class SweepConfig(BaseModel):
    dims: List[int]
    kind: Literal["pure", "mixed"] = "mixed"
    samples: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0, le=UINT64_MAX)
    theorems: List[TheoremId] = Field(default_factory=lambda: [TheoremId.T1])
    output_path: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    ancilla_dim: Optional[int] = Field(default=None, ge=1)
    noise_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_NOISE_GRID))

    @field_validator("dims")
    @classmethod
    def _dims_are_nontrivial(cls, dims: List[int]) -> List[int]:
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"dimension invariant violated: dims {dims} must be nonempty and >= 2")
        return dims

    @field_validator("noise_grid")
    @classmethod
    def _grid_is_valid(cls, grid: List[float]) -> List[float]:
        try:
            return list(validate_noise_grid(grid))
        except RejectedInputError as e:
            raise ValueError(str(e)) from e

    @model_validator(mode="after")
    def _theorems_fit_states(self) -> "SweepConfig":
        if not self.theorems:
            raise ValueError("at least one theorem is required")
        if len(set(self.theorems)) != len(self.theorems):
            raise ValueError(f"duplicate theorem ids in {[t.value for t in self.theorems]}")
        for theorem in self.theorems:
            reason = REQUIREMENTS[theorem].violation(self.dims, pure=self.kind == "pure")
            if reason:
                raise ValueError(f"{theorem.value} {reason}")
        return self

    def report_config(self) -> Dict:
        """The part of the config that determines the report contents."""
        config = self.model_dump(mode="json", exclude={"output_path"})
        return config

    @property
    def run_key(self) -> str:
        """Identity of the sample stream: everything but sample count and output options."""
        identity = self.model_dump(mode="json", exclude={"output_path", "format", "samples"})
        return hashlib.sha256(json.dumps(identity, sort_keys=True).encode()).hexdigest()


class VerdictRecord(BaseModel):
    theorem: TheoremId
    sample: int
    lhs: float
    rhs: float
    slack: float
    holds: bool
    applicable: bool

    @classmethod
    def from_verdict(cls, verdict: TheoremVerdict, sample: int) -> "VerdictRecord":
        return cls(
            theorem=verdict.theorem_id,
            sample=sample,
            lhs=round_sig(verdict.lhs),
            rhs=round_sig(verdict.rhs),
            slack=round_sig(verdict.slack),
            holds=verdict.holds,
            applicable=verdict.applicable,
        )


class TheoremSummary(BaseModel):
    checked: int
    held: int
    applicable: int
    min_slack: Optional[float]


class SweepSummary(BaseModel):
    per_theorem: Dict[str, TheoremSummary]


class SweepReport(BaseModel):
    config: Dict
    verdicts: List[VerdictRecord]
    summary: SweepSummary

    @property
    def all_hold(self) -> bool:
        return all(v.holds for v in self.verdicts)
