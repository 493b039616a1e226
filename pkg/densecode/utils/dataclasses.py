import math
from dataclasses import dataclass, asdict, field
from enum import Enum
from typing import Optional, Dict, Any, Tuple, Iterable, Union, TYPE_CHECKING

from densecode.utils.errors import RejectedInputError

if TYPE_CHECKING:
    from densecode.core.states import MultipartiteState


PROBABILITY_TOL = 1e-10
ADVANTAGE_EPS = 1e-9
UINT64_MAX = 2 ** 64 - 1


class SampleKind(str, Enum):
    HAAR_PURE = "haar_pure"
    INDUCED_MIXED = "induced_mixed"


class TheoremId(str, Enum):
    T1 = "T1"
    C1 = "C1"
    T2 = "T2"
    C2 = "C2"
    NOISE = "NOISE"
    T3 = "T3"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    T4 = "T4"


@dataclass(frozen=True)
class DimensionProfile:
    """
    Ordered local dimensions of a multipartite system. Party labels are the
    0-based positions in ``dims``.
    """
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise RejectedInputError("dimension invariant violated: a profile needs at least one party")
        for party, d in enumerate(dims):
            if d < 2:
                raise RejectedInputError(
                    f"dimension invariant violated: party {party} has dimension {d}, expected >= 2"
                )
        object.__setattr__(self, "dims", dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def validate_parties(self, parties: Iterable[int], allow_empty: bool = False) -> Tuple[int, ...]:
        """Return the parties as a sorted tuple, rejecting duplicates and out-of-range labels."""
        parties = tuple(int(p) for p in parties)
        if len(set(parties)) != len(parties):
            raise RejectedInputError(f"party set {parties} contains duplicates")
        if not parties and not allow_empty:
            raise RejectedInputError("party set must be nonempty")
        for p in parties:
            if not 0 <= p < self.n_parties:
                raise RejectedInputError(f"party {p} out of range for {self.n_parties} parties")
        return tuple(sorted(parties))

    def subsystem_dim(self, parties: Iterable[int]) -> int:
        return math.prod(self.dims[p] for p in parties)

    def log2_dim(self, parties: Iterable[int]) -> float:
        return sum(math.log2(self.dims[p]) for p in parties)

    def sub_profile(self, parties: Iterable[int]) -> "DimensionProfile":
        return DimensionProfile(tuple(self.dims[p] for p in parties))

    def complement(self, parties: Iterable[int]) -> Tuple[int, ...]:
        kept = set(parties)
        return tuple(p for p in range(self.n_parties) if p not in kept)

    @property
    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class RandomSpec:
    """
    Recipe for one random state. ``ancilla_dim`` only matters for induced
    mixed states and defaults to the system dimension (Hilbert-Schmidt measure).
    """
    profile: DimensionProfile
    kind: SampleKind
    seed: int
    ancilla_dim: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SampleKind(self.kind))
        if not 0 <= int(self.seed) <= UINT64_MAX:
            raise RejectedInputError(f"seed {self.seed} is not a 64-bit unsigned integer")
        if self.ancilla_dim is not None and self.ancilla_dim < 1:
            raise RejectedInputError(f"ancilla_dim must be >= 1, got {self.ancilla_dim}")

    @property
    def effective_ancilla_dim(self) -> int:
        return self.ancilla_dim if self.ancilla_dim is not None else self.profile.total


@dataclass(frozen=True)
class EntropyReport:
    subsystem: Tuple[int, ...]
    value: float

    @property
    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class CapacityResult:
    """
    Dense coding capacity for one sender set and one receiver (or receiver group).
    """
    senders: Tuple[int, ...]
    receiver: Union[int, Tuple[int, ...]]
    quantum_part: float
    classical_floor: float
    full_capacity: float
    advantage: bool

    @classmethod
    def build(cls, senders: Tuple[int, ...], receiver: Union[int, Tuple[int, ...]],
              quantum_part: float, classical_floor: float) -> "CapacityResult":
        return cls(
            senders=senders,
            receiver=receiver,
            quantum_part=quantum_part,
            classical_floor=classical_floor,
            full_capacity=max(quantum_part, classical_floor),
            advantage=quantum_part > classical_floor + ADVANTAGE_EPS,
        )

    @property
    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Ensemble:
    """Classical-quantum ensemble {p_i, rho_i}; all members share one profile."""
    items: Tuple[Tuple[float, "MultipartiteState"], ...]

    def __post_init__(self):
        items = tuple((float(p), s) for p, s in self.items)
        if not items:
            raise RejectedInputError("ensemble must contain at least one member")
        if any(p < 0 for p, _ in items):
            raise RejectedInputError("probability invariant violated: negative probability in ensemble")
        total = sum(p for p, _ in items)
        if abs(total - 1.0) > PROBABILITY_TOL:
            raise RejectedInputError(f"probability invariant violated: probabilities sum to {total}")
        profile = items[0][1].profile
        if any(s.profile != profile for _, s in items):
            raise RejectedInputError("ensemble members must share one dimension profile")
        object.__setattr__(self, "items", items)


@dataclass(frozen=True)
class EofResult:
    concurrence: float
    eof: float

    @property
    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class DiscordResult:
    """
    Discord of a bipartite state with a projective qubit measurement.
    ``optimizer_angles`` is the (theta, phi) Bloch axis of the best measurement found.
    """
    value: float
    optimizer_angles: Tuple[float, float]
    starts_used: int
    converged: bool

    @property
    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class TheoremVerdict:
    """
    Outcome of one theorem check on one state. ``slack`` is rhs - lhs;
    conditional corollaries set ``applicable`` to False when their premise fails.
    """
    theorem_id: TheoremId
    lhs: float
    rhs: float
    slack: float
    holds: bool
    applicable: bool
    state_fingerprint: str
    details: Dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def as_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result["theorem_id"] = self.theorem_id.value
        return result
