import logging
from typing import Iterable, Optional

import numpy as np

from densecode.core.states import MultipartiteState, POSITIVITY_TOL
from densecode.core.tensor import hermitian_eigvals
from densecode.utils.dataclasses import EntropyReport
from densecode.utils.errors import RejectedInputError, PositivityError


logger = logging.getLogger(__name__)


def spectrum_entropy(eigenvalues) -> float:
    """
    Shannon entropy in bits of a spectrum. Values in [-1e-10, 0] count as 0;
    anything more negative is rejected.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
    if eigenvalues.size and eigenvalues.min() < -POSITIVITY_TOL:
        raise PositivityError(f"positivity invariant violated: eigenvalue {eigenvalues.min():.3e}")
    positive = eigenvalues[eigenvalues > 0]
    return float(max(-np.sum(positive * np.log2(positive)), 0.0))


def von_neumann_entropy(matrix) -> float:
    return spectrum_entropy(hermitian_eigvals(matrix))


def binary_entropy(x: float) -> float:
    return spectrum_entropy([x, 1.0 - x])


def entropy(s: MultipartiteState, keep: Optional[Iterable[int]] = None) -> float:
    """Von Neumann entropy in bits of the marginal on ``keep`` (all parties by default)."""
    keep = range(s.n_parties) if keep is None else keep
    return von_neumann_entropy(s.reduced_matrix(keep))


def entropy_report(s: MultipartiteState, keep: Iterable[int]) -> EntropyReport:
    keep = s.profile.validate_parties(keep)
    return EntropyReport(subsystem=keep, value=entropy(s, keep))


def _disjoint(s: MultipartiteState, *groups: Iterable[int]):
    validated = [s.profile.validate_parties(g) for g in groups]
    seen = set()
    for group in validated:
        if seen & set(group):
            raise RejectedInputError(f"party sets {validated} must be disjoint")
        seen |= set(group)
    return validated


def conditional_entropy(s: MultipartiteState, target: Iterable[int], condition: Iterable[int]) -> float:
    """S(target | condition) = S(target u condition) - S(condition); may be negative."""
    target, condition = _disjoint(s, target, condition)
    return entropy(s, target + condition) - entropy(s, condition)


def mutual_information(s: MultipartiteState, x: Iterable[int], y: Iterable[int]) -> float:
    x, y = _disjoint(s, x, y)
    return entropy(s, x) + entropy(s, y) - entropy(s, x + y)


def ssa_slack(s: MultipartiteState, a: Iterable[int], b: Iterable[int], c: Iterable[int]) -> float:
    """
    S(B) + S(C) - S(AB) - S(AC). Strong subadditivity makes this <= 0 for
    every state.
    """
    a, b, c = _disjoint(s, a, b, c)
    return entropy(s, b) + entropy(s, c) - entropy(s, a + b) - entropy(s, a + c)


def q_functional(s: MultipartiteState) -> float:
    """
    Sum of single-party entropies minus the entropies of the N cyclic groups of
    N - 1 parties. Nonpositive for every state and zero for pure states.
    """
    n = s.n_parties
    if n < 3:
        raise RejectedInputError(f"q_functional needs at least 3 parties, got {n}")

    singles = sum(entropy(s, [j]) for j in range(n))
    groups = 0.0
    for j in range(n):
        left_out = (j + n - 1) % n
        groups += entropy(s, [p for p in range(n) if p != left_out])
    return singles - groups
