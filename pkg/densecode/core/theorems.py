import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

from densecode.core.capacity import cyclic_groups, dc_capacity, dc_quantum_part
from densecode.core.correlations import DISCORD_STARTS, discord, eof_two_qubit
from densecode.core.entropy import entropy
from densecode.core.states import MultipartiteState, depolarize_party
from densecode.utils.dataclasses import TheoremId, TheoremVerdict
from densecode.utils.errors import RejectedInputError


SLACK_TOL = 1e-8
MAXIMAL_ENTANGLEMENT_TOL = 1e-6
DISCORD_BAND = 2e-3
MONOTONE_TOL = 1e-9
DEFAULT_NOISE_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TheoremRequirement:
    """Which states a check accepts."""
    min_parties: int
    max_parties: Optional[int] = None
    pure: bool = False
    qubits: bool = False
    description: str = ""

    def violation(self, dims: Sequence[int], pure: Optional[bool]) -> Optional[str]:
        """Reason the check cannot run on states with these dims/purity, or None."""
        n = len(dims)
        if n < self.min_parties or (self.max_parties is not None and n > self.max_parties):
            if self.max_parties == self.min_parties:
                return f"needs exactly {self.min_parties} parties, got {n}"
            return f"needs at least {self.min_parties} parties, got {n}"
        if self.pure and pure is False:
            return "needs pure states"
        if self.qubits and any(d != 2 for d in dims):
            return f"needs qubit parties, got dims {tuple(dims)}"
        return None


REQUIREMENTS: Dict[TheoremId, TheoremRequirement] = {
    TheoremId.T1: TheoremRequirement(3, 3, description="exclusion: C_AB + C_AC <= 2 log2 d_A, never two advantages"),
    TheoremId.C1: TheoremRequirement(3, 3, description="full capacities C'_AB + C'_AC <= 3 log2 d_A"),
    TheoremId.T2: TheoremRequirement(3, description="at most one pair A-B_i with quantum advantage"),
    TheoremId.C2: TheoremRequirement(3, description="sum of full capacities A->B_i <= (N+1) log2 d_A"),
    TheoremId.NOISE: TheoremRequirement(3, 3, description="exclusion and monotone capacities under sender depolarization"),
    TheoremId.T3: TheoremRequirement(3, 3, description="receiver monogamy C_BA + C_CA <= C_BC:A"),
    TheoremId.C3: TheoremRequirement(3, 3, pure=True, description="C_AB + C_AC <= C_A:BC forces S(A) = log2 d_A"),
    TheoremId.C4: TheoremRequirement(3, 3, description="C_AB + C_AC <= C_A:BC implies the entropy inequality"),
    TheoremId.C5: TheoremRequirement(3, 3, pure=True, qubits=True,
                                     description="C_AB + C_AC >= D_AB + D_AC = E_AB + E_AC"),
    TheoremId.T4: TheoremRequirement(3, description="multi-port monogamy over the cyclic sender groups"),
}


def _require(theorem_id: TheoremId, s: MultipartiteState):
    reason = REQUIREMENTS[theorem_id].violation(s.dims, s.is_pure)
    if reason:
        raise RejectedInputError(f"{theorem_id.value} {reason}")


def _verdict(theorem_id: TheoremId, s: MultipartiteState, lhs: float, rhs: float, tol: float = SLACK_TOL,
             applicable: bool = True, also: bool = True, **details) -> TheoremVerdict:
    slack = rhs - lhs
    holds = (not applicable) or (slack >= -tol and also)
    if not holds:
        logger.warning(f"{theorem_id.value} failed: lhs={lhs:.12g} rhs={rhs:.12g} slack={slack:.3e}")
    return TheoremVerdict(
        theorem_id=theorem_id,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        holds=bool(holds),
        applicable=bool(applicable),
        state_fingerprint=s.fingerprint,
        details=details,
    )


def _sender_roles(s: MultipartiteState, sender: int) -> Tuple[int, int, int]:
    sender = s.profile.validate_parties([sender])[0]
    b, c = s.profile.complement([sender])
    return sender, b, c


def check_exclusion(s: MultipartiteState, sender: int = 0) -> TheoremVerdict:
    _require(TheoremId.T1, s)
    a, b, c = _sender_roles(s, sender)
    c_ab = dc_capacity(s, [a], b)
    c_ac = dc_capacity(s, [a], c)
    advantages = int(c_ab.advantage) + int(c_ac.advantage)
    return _verdict(
        TheoremId.T1, s,
        lhs=c_ab.quantum_part + c_ac.quantum_part,
        rhs=2 * math.log2(s.dims[a]),
        also=advantages <= 1,
        c_ab=c_ab.quantum_part, c_ac=c_ac.quantum_part, advantages=advantages,
    )


def check_cor1(s: MultipartiteState, sender: int = 0) -> TheoremVerdict:
    _require(TheoremId.C1, s)
    a, b, c = _sender_roles(s, sender)
    c_ab = dc_capacity(s, [a], b)
    c_ac = dc_capacity(s, [a], c)
    return _verdict(
        TheoremId.C1, s,
        lhs=c_ab.full_capacity + c_ac.full_capacity,
        rhs=3 * math.log2(s.dims[a]),
        full_ab=c_ab.full_capacity, full_ac=c_ac.full_capacity,
    )


def _sender_to_each(s: MultipartiteState, sender: int):
    sender = s.profile.validate_parties([sender])[0]
    return sender, [dc_capacity(s, [sender], b) for b in s.profile.complement([sender])]


def check_cor2(s: MultipartiteState, sender: int = 0) -> TheoremVerdict:
    _require(TheoremId.C2, s)
    sender, results = _sender_to_each(s, sender)
    return _verdict(
        TheoremId.C2, s,
        lhs=sum(r.full_capacity for r in results),
        rhs=s.n_parties * math.log2(s.dims[sender]),
    )


def check_t2(s: MultipartiteState, sender: int = 0) -> TheoremVerdict:
    """Advantage count over all pairs sender-B_i; the C2 bound is recorded alongside."""
    _require(TheoremId.T2, s)
    sender, results = _sender_to_each(s, sender)
    advantages = sum(r.advantage for r in results)
    full_sum = sum(r.full_capacity for r in results)
    full_bound = s.n_parties * math.log2(s.dims[sender])
    cor2_holds = full_sum <= full_bound + SLACK_TOL
    return _verdict(
        TheoremId.T2, s,
        lhs=advantages, rhs=1, tol=0.0,
        also=cor2_holds,
        cor2_lhs=full_sum, cor2_rhs=full_bound, cor2_holds=cor2_holds,
    )


def check_receiver_monogamy(s: MultipartiteState, receiver: int = 0) -> TheoremVerdict:
    _require(TheoremId.T3, s)
    a, b, c = _sender_roles(s, receiver)
    c_ba = dc_quantum_part(s, [b], a)
    c_ca = dc_quantum_part(s, [c], a)
    return _verdict(
        TheoremId.T3, s,
        lhs=c_ba + c_ca,
        rhs=dc_quantum_part(s, [b, c], a),
        c_ba=c_ba, c_ca=c_ca,
    )


def _sender_monogamy_premise(s: MultipartiteState, a: int, b: int, c: int) -> Tuple[bool, float]:
    """Whether C_AB + C_AC <= C_A:BC holds (within tolerance) and its slack."""
    slack = dc_quantum_part(s, [a], [b, c]) - dc_quantum_part(s, [a], b) - dc_quantum_part(s, [a], c)
    return slack >= -SLACK_TOL, slack


def check_cor3(s: MultipartiteState, sender: int = 0) -> TheoremVerdict:
    _require(TheoremId.C3, s)
    a, b, c = _sender_roles(s, sender)
    applicable, premise_slack = _sender_monogamy_premise(s, a, b, c)
    return _verdict(
        TheoremId.C3, s,
        lhs=math.log2(s.dims[a]) - entropy(s, [a]),
        rhs=0.0,
        tol=MAXIMAL_ENTANGLEMENT_TOL,
        applicable=applicable,
        premise_slack=premise_slack,
        near_boundary=abs(premise_slack) <= MAXIMAL_ENTANGLEMENT_TOL,
    )


def check_cor4(s: MultipartiteState, sender: int = 0) -> TheoremVerdict:
    _require(TheoremId.C4, s)
    a, b, c = _sender_roles(s, sender)
    applicable, premise_slack = _sender_monogamy_premise(s, a, b, c)
    s_a = entropy(s, [a])
    return _verdict(
        TheoremId.C4, s,
        lhs=math.log2(s.dims[a]) - s_a,
        rhs=s_a + entropy(s, [b]) + entropy(s, [c]) - entropy(s),
        applicable=applicable,
        premise_slack=premise_slack,
    )


def _pair_discord(s: MultipartiteState, a: int, other: int, starts: int) -> float:
    keep = tuple(sorted((a, other)))
    return discord(s.reduce(keep), measured_party=keep.index(other), starts=starts).value


def check_cor5(s: MultipartiteState, sender: int = 0, starts: int = DISCORD_STARTS) -> TheoremVerdict:
    """
    Lower bound of the capacity sum by the discord sum, and the discord/EoF
    equality behind it. Discord is only ever overstated, so both bands are
    one-sided in effect.
    """
    _require(TheoremId.C5, s)
    a, b, c = _sender_roles(s, sender)

    c_sum = dc_quantum_part(s, [a], b) + dc_quantum_part(s, [a], c)
    d_ab = _pair_discord(s, a, b, starts)
    d_ac = _pair_discord(s, a, c, starts)
    e_ab = eof_two_qubit(s.reduce(sorted((a, b)))).eof
    e_ac = eof_two_qubit(s.reduce(sorted((a, c)))).eof
    gap = (d_ab + d_ac) - (e_ab + e_ac)

    return _verdict(
        TheoremId.C5, s,
        lhs=d_ab + d_ac,
        rhs=c_sum,
        tol=DISCORD_BAND,
        also=abs(gap) <= DISCORD_BAND,
        d_ab=d_ab, d_ac=d_ac, e_ab=e_ab, e_ac=e_ac, discord_eof_gap=gap,
        decomposition_residual=c_sum - (gap + 2 * math.log2(s.dims[a])),
    )


def check_multiport_monogamy(s: MultipartiteState) -> TheoremVerdict:
    _require(TheoremId.T4, s)
    n = s.n_parties
    results = [dc_capacity(s, senders, receiver) for senders, receiver in cyclic_groups(n)]
    advantages = sum(r.advantage for r in results)
    return _verdict(
        TheoremId.T4, s,
        lhs=sum(r.quantum_part for r in results),
        rhs=(n - 2) * s.profile.log2_dim(range(n)),
        also=advantages <= n - 1,
        advantages=advantages,
    )


def validate_noise_grid(p_grid: Sequence[float]) -> Tuple[float, ...]:
    grid = tuple(float(p) for p in p_grid)
    if not grid:
        raise RejectedInputError("noise grid must be nonempty")
    if any(not 0.0 <= p <= 1.0 for p in grid):
        raise RejectedInputError(f"noise grid {grid} must lie in [0, 1]")
    if any(q < p for p, q in zip(grid, grid[1:])):
        raise RejectedInputError(f"noise grid {grid} must be ascending")
    return grid


def check_noise_monotonicity(s: MultipartiteState, p_grid: Sequence[float] = DEFAULT_NOISE_GRID,
                             sender: int = 0) -> TheoremVerdict:
    """
    Depolarize the sender along ``p_grid``: exclusion must hold at every level
    and both quantum parts must be non-increasing in p.
    """
    _require(TheoremId.NOISE, s)
    grid = validate_noise_grid(p_grid)
    a, _, _ = _sender_roles(s, sender)

    exclusions = [check_exclusion(depolarize_party(s, a, p), sender=a) for p in grid]
    c_ab = [v.details["c_ab"] for v in exclusions]
    c_ac = [v.details["c_ac"] for v in exclusions]
    max_increase = max(
        [0.0] + [later - earlier for series in (c_ab, c_ac) for earlier, later in zip(series, series[1:])]
    )
    return _verdict(
        TheoremId.NOISE, s,
        lhs=max(v.lhs for v in exclusions),
        rhs=exclusions[0].rhs,
        also=all(v.holds for v in exclusions) and max_increase <= MONOTONE_TOL,
        grid=list(grid), c_ab=c_ab, c_ac=c_ac, max_increase=max_increase,
    )


CHECKS: Dict[TheoremId, Callable[..., TheoremVerdict]] = {
    TheoremId.T1: check_exclusion,
    TheoremId.C1: check_cor1,
    TheoremId.T2: check_t2,
    TheoremId.C2: check_cor2,
    TheoremId.NOISE: check_noise_monotonicity,
    TheoremId.T3: check_receiver_monogamy,
    TheoremId.C3: check_cor3,
    TheoremId.C4: check_cor4,
    TheoremId.C5: check_cor5,
    TheoremId.T4: check_multiport_monogamy,
}


def run_check(theorem_id, s: MultipartiteState, discord_starts: int = DISCORD_STARTS,
              noise_grid: Sequence[float] = DEFAULT_NOISE_GRID) -> TheoremVerdict:
    theorem_id = TheoremId(theorem_id)
    if theorem_id == TheoremId.C5:
        return check_cor5(s, starts=discord_starts)
    if theorem_id == TheoremId.NOISE:
        return check_noise_monotonicity(s, p_grid=noise_grid)
    return CHECKS[theorem_id](s)


def applicable_theorems(s: MultipartiteState) -> Tuple[TheoremId, ...]:
    return tuple(t for t, req in REQUIREMENTS.items() if req.violation(s.dims, s.is_pure) is None)
