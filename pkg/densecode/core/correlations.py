import logging
import math
from typing import Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from densecode.core.entropy import binary_entropy, entropy, conditional_entropy, von_neumann_entropy
from densecode.core.states import MultipartiteState, PURITY_TOL
from densecode.core.tensor import hermitian_eigvals, hermitian_sqrt, kron
from densecode.utils.dataclasses import DiscordResult, EofResult
from densecode.utils.errors import RejectedInputError, UnsupportedDimensionError


DISCORD_STARTS = 32
ANGLE_TOL = 1e-6
REFINE_WINDOW = 0.5
MAX_REFINE_PASSES = 25
# squared spin-flip eigenvalues below this are treated as zero
SPECTRUM_FLOOR = 1e-13

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SPIN_FLIP = kron(SIGMA_Y, SIGMA_Y)

logger = logging.getLogger(__name__)


def _require_two_qubits(s: MultipartiteState):
    if s.dims != (2, 2):
        raise UnsupportedDimensionError(f"two-qubit state required, got dims {s.dims}")


def concurrence(s: MultipartiteState) -> float:
    """
    Wootters concurrence max(0, l1 - l2 - l3 - l4), the l_i being the decreasing
    eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)) with rho~ the spin-flipped state.
    """
    _require_two_qubits(s)
    rho = s.matrix
    flipped = SPIN_FLIP @ rho.conj() @ SPIN_FLIP
    root = hermitian_sqrt(rho)
    squared = hermitian_eigvals(root @ flipped @ root)
    lambdas = np.sqrt(np.where(squared > SPECTRUM_FLOOR, squared, 0.0))[::-1]
    return float(min(max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]), 1.0))


def eof_from_concurrence(c: float) -> float:
    return binary_entropy((1 + math.sqrt(max(0.0, 1 - c * c))) / 2)


def eof_two_qubit(s: MultipartiteState) -> EofResult:
    c = concurrence(s)
    return EofResult(concurrence=c, eof=eof_from_concurrence(c))


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` roughly uniform Bloch-sphere points as (theta, phi) rows."""
    golden = math.pi * (3 - math.sqrt(5))
    k = np.arange(n)
    z = 1 - (2 * k + 1) / n
    return np.column_stack([np.arccos(z), (golden * k) % (2 * math.pi)])


class _ConditionalEntropyObjective:
    """
    Average entropy of the unmeasured party after a projective qubit
    measurement along the Bloch axis (theta, phi) on the measured party.
    """

    def __init__(self, s: MultipartiteState, measured_party: int):
        if measured_party == 0:
            s = s.permute((1, 0))
        d_other = s.dims[0]
        self.blocks = s.matrix.reshape(d_other, 2, d_other, 2)
        self.qubit_pair = d_other == 2

    def __call__(self, theta: float, phi: float) -> float:
        up = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
        down = np.array([-np.exp(-1j * phi) * math.sin(theta / 2), math.cos(theta / 2)])
        total = 0.0
        for v in (up, down):
            conditional = np.einsum("a,iajb,b->ij", v.conj(), self.blocks, v)
            q = float(np.trace(conditional).real)
            if q > 1e-14:
                total += q * self._entropy(conditional, q)
        return total

    def _entropy(self, conditional: np.ndarray, q: float) -> float:
        if not self.qubit_pair:
            return von_neumann_entropy(conditional / q)
        # 2x2 spectrum from trace and determinant
        det = float((conditional[0, 0] * conditional[1, 1] - conditional[0, 1] * conditional[1, 0]).real)
        gap = math.sqrt(min(max(1 - 4 * det / (q * q), 0.0), 1.0))
        return binary_entropy((1 + gap) / 2)


def _refine(objective: _ConditionalEntropyObjective, theta: float, phi: float) -> Tuple[float, float, float, bool]:
    """Coordinate-wise bounded scalar descent on (theta, phi) from one start."""
    value = objective(theta, phi)
    for _ in range(MAX_REFINE_PASSES):
        previous = (theta, phi, value)
        result = minimize_scalar(lambda t: objective(t, phi), bounds=(theta - REFINE_WINDOW, theta + REFINE_WINDOW),
                                 method="bounded", options={"xatol": ANGLE_TOL})
        if result.fun < value:
            theta, value = float(result.x), float(result.fun)
        result = minimize_scalar(lambda p: objective(theta, p), bounds=(phi - REFINE_WINDOW, phi + REFINE_WINDOW),
                                 method="bounded", options={"xatol": ANGLE_TOL})
        if result.fun < value:
            phi, value = float(result.x), float(result.fun)
        moved = max(abs(theta - previous[0]), abs(phi - previous[1]))
        if moved < ANGLE_TOL or previous[2] - value < 1e-13:
            return theta, phi, value, True
    return theta, phi, value, False


def discord(s: MultipartiteState, measured_party: int, starts: int = DISCORD_STARTS) -> DiscordResult:
    """
    Quantum discord of a bipartite state with rank-1 projective measurements on
    ``measured_party`` (which must be a qubit):
        D = I(X:Y) - max_M [S(X) - sum_m q_m S(X|m)].
    The maximization runs from a Fibonacci-sphere grid of starts, each refined
    by coordinate-wise descent; the result can only overstate the true value.
    """
    if starts < 1:
        raise RejectedInputError(f"discord needs at least one start, got {starts}")
    if s.n_parties != 2:
        raise RejectedInputError(f"discord needs a bipartite state, got {s.n_parties} parties")
    measured_party = s.profile.validate_parties([measured_party])[0]
    if s.dims[measured_party] != 2:
        raise UnsupportedDimensionError(
            f"discord supports a measured qubit only, party {measured_party} has dimension {s.dims[measured_party]}"
        )

    objective = _ConditionalEntropyObjective(s, measured_party)
    best = (math.inf, 0.0, 0.0)
    all_converged = True
    for theta0, phi0 in fibonacci_sphere(starts):
        theta, phi, value, converged = _refine(objective, float(theta0), float(phi0))
        all_converged = all_converged and converged
        if value < best[0]:
            best = (value, theta, phi)

    if not all_converged:
        logger.warning(f"Discord refinement did not converge for every start (best axis {best[1:]})")

    # D = S(measured) - S(XY) + min_M sum_m q_m S(X|m)
    value = entropy(s, [measured_party]) - entropy(s) + best[0]
    return DiscordResult(
        value=float(value),
        optimizer_angles=(best[1] % (2 * math.pi), best[2] % (2 * math.pi)),
        starts_used=starts,
        converged=all_converged,
    )


def _require_pure_three_qubits(s: MultipartiteState):
    if s.dims != (2, 2, 2):
        raise RejectedInputError(f"three-qubit state required, got dims {s.dims}")
    if s.purity < 1 - PURITY_TOL:
        raise RejectedInputError(f"purity invariant violated: tr(rho^2) = {s.purity:.12g}")


def koashi_winter_residual(s: MultipartiteState, starts: int = DISCORD_STARTS) -> float:
    """E_AB - D_AC - S(A|C) for a pure three-qubit state; zero up to optimizer error."""
    _require_pure_three_qubits(s)
    e_ab = eof_two_qubit(s.reduce([0, 1])).eof
    d_ac = discord(s.reduce([0, 2]), measured_party=1, starts=starts).value
    return e_ab - d_ac - conditional_entropy(s, [0], [2])
