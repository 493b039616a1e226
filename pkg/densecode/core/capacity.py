import itertools
import logging
from typing import Iterable, List, Tuple, Union

import numpy as np

from densecode.core.entropy import entropy, von_neumann_entropy
from densecode.core.states import MultipartiteState, embed_local
from densecode.core.tensor import ComplexMatrix
from densecode.utils.dataclasses import CapacityResult, Ensemble
from densecode.utils.errors import RejectedInputError


ORACLE_MAX_DIM = 64

Receiver = Union[int, Iterable[int]]

logger = logging.getLogger(__name__)


def _roles(s: MultipartiteState, senders: Iterable[int], receiver: Receiver) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    senders = s.profile.validate_parties(senders)
    receivers = s.profile.validate_parties([receiver] if isinstance(receiver, (int, np.integer)) else receiver)
    overlap = set(senders) & set(receivers)
    if overlap:
        raise RejectedInputError(f"receiver parties {sorted(overlap)} are also senders")
    return senders, receivers


def _receiver_label(receiver: Receiver) -> Union[int, Tuple[int, ...]]:
    if isinstance(receiver, (int, np.integer)):
        return int(receiver)
    receiver = tuple(int(r) for r in receiver)
    return receiver[0] if len(receiver) == 1 else receiver


def dc_quantum_part(s: MultipartiteState, senders: Iterable[int], receiver: Receiver) -> float:
    """
    Quantum part of the dense coding capacity with local unitary encoding at
    every sender:  sum_i log2 d_i + S(receiver) - S(senders + receiver).
    Parties outside senders and receiver are traced out. ``receiver`` may be a
    single party or a group of parties that decode jointly.
    """
    senders, receivers = _roles(s, senders, receiver)
    return (
        s.profile.log2_dim(senders)
        + entropy(s, receivers)
        - entropy(s, senders + receivers)
    )


def dc_capacity(s: MultipartiteState, senders: Iterable[int], receiver: Receiver) -> CapacityResult:
    """Full capacity max[classical floor, quantum part] with the advantage flag."""
    senders = tuple(senders)
    quantum_part = dc_quantum_part(s, senders, receiver)
    return CapacityResult.build(
        senders=tuple(sorted(int(p) for p in senders)),
        receiver=_receiver_label(receiver),
        quantum_part=quantum_part,
        classical_floor=s.profile.log2_dim(senders),
    )


def cyclic_groups(n: int) -> List[Tuple[Tuple[int, ...], int]]:
    """
    The n ring groups of the multi-port scenario: group j has senders
    j, ..., j+n-3 and receiver j+n-2 (all mod n); party j+n-1 is left out.
    """
    if n < 3:
        raise RejectedInputError(f"cyclic groups need at least 3 parties, got {n}")
    return [
        (tuple((j + k) % n for k in range(n - 2)), (j + n - 2) % n)
        for j in range(n)
    ]


def holevo_chi(e: Ensemble) -> float:
    """chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i)."""
    average = sum(p * state.matrix for p, state in e.items)
    members = sum(p * von_neumann_entropy(state.matrix) for p, state in e.items if p > 0)
    return von_neumann_entropy(average) - members


def weyl_operators(d: int) -> List[ComplexMatrix]:
    """
    The d^2 Heisenberg-Weyl unitaries X^a Z^b with X|j> = |j+1 mod d> and
    Z|j> = w^j |j>, w = exp(2 pi i / d), ordered by (a, b).
    """
    if d < 2:
        raise RejectedInputError(f"Weyl operators need d >= 2, got {d}")
    shift = np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return [
        np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
        for a in range(d) for b in range(d)
    ]


def _encoded_ensemble(s: MultipartiteState, senders: Tuple[int, ...]) -> Ensemble:
    per_sender = [
        [embed_local(u, s.profile, party) for u in weyl_operators(s.profile.dims[party])]
        for party in senders
    ]
    unitaries = [
        np.linalg.multi_dot(combo) if len(combo) > 1 else combo[0]
        for combo in itertools.product(*per_sender)
    ]
    weight = 1.0 / len(unitaries)
    return Ensemble(tuple(
        (weight, MultipartiteState(u @ s.matrix @ u.conj().T, s.profile, pure=s.pure))
        for u in unitaries
    ))


def weyl_encoding_ensemble(s: MultipartiteState, sender: int) -> Ensemble:
    """Uniform ensemble of the d^2 Weyl encodings applied at ``sender``."""
    sender = s.profile.validate_parties([sender])[0]
    return _encoded_ensemble(s, (sender,))


def holevo_capacity_oracle(s: MultipartiteState, senders: Iterable[int], receiver: Receiver) -> float:
    """
    Holevo quantity of the product Weyl encoding of the senders + receiver
    marginal. Reproduces ``dc_quantum_part`` by brute force.
    """
    senders, receivers = _roles(s, senders, receiver)
    keep = tuple(sorted(senders + receivers))
    if s.profile.subsystem_dim(keep) > ORACLE_MAX_DIM:
        raise RejectedInputError(
            f"oracle limited to total dimension {ORACLE_MAX_DIM}, got {s.profile.subsystem_dim(keep)}"
        )
    reduced = s if len(keep) == s.n_parties else s.reduce(keep)
    local_senders = tuple(keep.index(p) for p in senders)
    logger.debug(f"Holevo oracle over senders {senders} -> {receivers} with dims {reduced.dims}")
    return holevo_chi(_encoded_ensemble(reduced, local_senders))
