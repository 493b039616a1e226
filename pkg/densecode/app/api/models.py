from pydantic import BaseModel, Field, model_validator
from typing import List, Optional, Union, Dict, Any

from densecode.core.schemas import StateFile
from densecode.utils.dataclasses import TheoremId


class EvalRequest(BaseModel):
    state: Optional[str] = None
    dims: Optional[List[int]] = None
    state_file: Optional[StateFile] = None
    alice: int = 0
    theorems: Optional[List[TheoremId]] = None
    discord_starts: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _one_source(self) -> "EvalRequest":
        if (self.state is None) == (self.state_file is None):
            raise ValueError("exactly one of state or state_file is required")
        return self


class CapacityRecord(BaseModel):
    senders: List[int]
    receiver: Union[int, List[int]]
    quantum_part: float
    classical_floor: float
    full_capacity: float
    advantage: bool


class VerdictOut(BaseModel):
    theorem: TheoremId
    lhs: float
    rhs: float
    slack: float
    holds: bool
    applicable: bool
    details: Dict[str, Any] = {}


class EvalResponse(BaseModel):
    dims: List[int]
    fingerprint: str
    pairwise: List[CapacityRecord]
    multiport: List[CapacityRecord]
    verdicts: List[VerdictOut]
    all_hold: bool


class TheoremInfo(BaseModel):
    theorem: TheoremId
    min_parties: int
    max_parties: Optional[int]
    pure_only: bool
    qubits_only: bool
    description: str
