import logging
import string
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from densecode.core.capacity import cyclic_groups, dc_capacity
from densecode.core.correlations import DISCORD_STARTS
from densecode.core.states import MultipartiteState, named_state
from densecode.core.theorems import DEFAULT_NOISE_GRID, REQUIREMENTS, applicable_theorems, run_check
from densecode.utils.dataclasses import CapacityResult, TheoremId, TheoremVerdict
from densecode.utils.errors import ConfigError


logger = logging.getLogger(__name__)


def party_label(party: int) -> str:
    letters = string.ascii_uppercase
    return letters[party] if party < len(letters) else f"P{party}"


def sender_first_order(n_parties: int, sender: int) -> Tuple[int, ...]:
    """Party order that puts ``sender`` in the A slot and keeps the rest in order."""
    if not 0 <= sender < n_parties:
        raise ConfigError(f"party index {sender} out of range for {n_parties} parties")
    return (sender,) + tuple(p for p in range(n_parties) if p != sender)


def default_dims(name: str) -> Tuple[int, ...]:
    return (2, 2) if name == "bell" else (2, 2, 2)


def load_named_state(name: str, dims: Optional[Sequence[int]] = None) -> MultipartiteState:
    return named_state(name, tuple(dims) if dims else default_dims(name))


@dataclass(frozen=True)
class StateEvaluation:
    dims: Tuple[int, ...]
    fingerprint: str
    pairwise: List[CapacityResult]
    multiport: List[CapacityResult]
    verdicts: List[TheoremVerdict] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(v.holds for v in self.verdicts)


def resolve_theorems(s: MultipartiteState, theorems: Optional[Iterable] = None) -> Tuple[TheoremId, ...]:
    """Requested theorems checked against the state's shape; every applicable one when none given."""
    if theorems is None:
        return applicable_theorems(s)
    resolved = []
    for theorem in theorems:
        try:
            theorem = TheoremId(theorem)
        except ValueError:
            raise ConfigError(f"unknown theorem id {theorem!r}")
        reason = REQUIREMENTS[theorem].violation(s.dims, s.is_pure)
        if reason:
            raise ConfigError(f"{theorem.value} {reason}")
        resolved.append(theorem)
    return tuple(resolved)


def evaluate_state(s: MultipartiteState, theorems: Optional[Iterable] = None, alice: int = 0,
                   discord_starts: int = DISCORD_STARTS,
                   noise_grid: Sequence[float] = DEFAULT_NOISE_GRID) -> StateEvaluation:
    """
    All ordered pairwise capacities, the cyclic multi-port capacities (four or
    more parties) and the theorem verdicts of ``s``. ``alice`` is relabelled to
    party 0 before anything is computed.
    """
    if alice:
        s = s.permute(sender_first_order(s.n_parties, alice))
    selected = resolve_theorems(s, theorems)
    logger.info(f"Evaluating state {s.fingerprint[:12]} dims={s.dims} theorems={[t.value for t in selected]}")

    n = s.n_parties
    pairwise = [dc_capacity(s, [i], j) for i in range(n) for j in range(n) if i != j]
    multiport = [dc_capacity(s, senders, receiver) for senders, receiver in cyclic_groups(n)] if n >= 4 else []
    verdicts = [run_check(t, s, discord_starts=discord_starts, noise_grid=noise_grid) for t in selected]

    return StateEvaluation(
        dims=s.dims,
        fingerprint=s.fingerprint,
        pairwise=pairwise,
        multiport=multiport,
        verdicts=verdicts,
    )
