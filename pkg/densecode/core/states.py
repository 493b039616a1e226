import hashlib
import logging
import math
from dataclasses import dataclass
from typing import Optional, Iterable, Sequence, Union

import numpy as np
import numpy.typing as npt

from densecode.core.tensor import (
    ComplexMatrix, as_matrix, hermiticity_error, hermitian_eigvals, kron, partial_trace,
    permute_systems, permuted_profile, inverse_permutation, HERMITIAN_TOL,
)
from densecode.utils.dataclasses import DimensionProfile, RandomSpec, SampleKind
from densecode.utils.errors import RejectedInputError, PositivityError


TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
PURITY_TOL = 1e-9

NAMED_STATES = ("ghz", "w", "bell", "product_zero", "bell_times_pure")

logger = logging.getLogger(__name__)


def _as_profile(profile: Union[DimensionProfile, Sequence[int]]) -> DimensionProfile:
    return profile if isinstance(profile, DimensionProfile) else DimensionProfile(tuple(profile))


@dataclass(frozen=True, eq=False)
class MultipartiteState:
    """
    Density operator together with its ordered local dimensions.

    Construction validates Hermiticity, unit trace and positivity (all within
    1e-10) and stores a read-only symmetrized copy of the matrix. ``pure`` is
    an optional hint; when True the purity tr(rho^2) is checked as well.
    """
    matrix: ComplexMatrix
    profile: DimensionProfile
    pure: Optional[bool] = None

    def __post_init__(self):
        profile = _as_profile(self.profile)
        matrix = as_matrix(self.matrix)
        if matrix.shape[0] != profile.total:
            raise RejectedInputError(
                f"dimension invariant violated: matrix side {matrix.shape[0]} != product of dims {profile.total}"
            )

        herm_err = hermiticity_error(matrix)
        if herm_err > HERMITIAN_TOL:
            raise RejectedInputError(f"hermiticity invariant violated: max|M - M^dagger| = {herm_err:.3e}")
        matrix = (matrix + matrix.conj().T) / 2

        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > TRACE_TOL:
            raise RejectedInputError(f"trace invariant violated: trace = {trace.real:.12g}, expected 1")

        # |tr(rho^2) - 1| <= tol with unit trace bounds any negative eigenvalue by tol / 2
        if self.pure:
            purity = float(np.real(np.vdot(matrix, matrix)))
            if abs(purity - 1) > PURITY_TOL:
                raise RejectedInputError(f"purity invariant violated: tr(rho^2) = {purity:.12g}")
        else:
            smallest = float(hermitian_eigvals(matrix)[0])
            if smallest < -POSITIVITY_TOL:
                raise PositivityError(f"positivity invariant violated: smallest eigenvalue {smallest:.3e}")

        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "profile", profile)

    @classmethod
    def from_vector(cls, amplitudes, profile: Union[DimensionProfile, Sequence[int]]) -> "MultipartiteState":
        """Projector onto a state vector; the vector must already be normalized."""
        profile = _as_profile(profile)
        psi = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if psi.shape[0] != profile.total:
            raise RejectedInputError(
                f"dimension invariant violated: {psi.shape[0]} amplitudes for dims {profile.dims}"
            )
        norm = float(np.linalg.norm(psi))
        if abs(norm ** 2 - 1.0) > TRACE_TOL:
            raise RejectedInputError(f"trace invariant violated: squared norm = {norm ** 2:.12g}, expected 1")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), profile, pure=True)

    @property
    def n_parties(self) -> int:
        return self.profile.n_parties

    @property
    def dims(self):
        return self.profile.dims

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    @property
    def is_pure(self) -> bool:
        return self.purity >= 1 - PURITY_TOL

    @property
    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(np.asarray(self.dims, dtype=np.int64).tobytes())
        digest.update(np.ascontiguousarray(self.matrix).tobytes())
        return digest.hexdigest()

    def reduced_matrix(self, keep: Iterable[int]) -> ComplexMatrix:
        keep = self.profile.validate_parties(keep)
        if len(keep) == self.n_parties:
            return self.matrix
        return partial_trace(self.matrix, self.profile, keep)

    def reduce(self, keep: Iterable[int]) -> "MultipartiteState":
        keep = self.profile.validate_parties(keep)
        return MultipartiteState(self.reduced_matrix(keep), self.profile.sub_profile(keep))

    def permute(self, perm: Sequence[int]) -> "MultipartiteState":
        return MultipartiteState(
            permute_systems(self.matrix, self.profile, perm),
            permuted_profile(self.profile, perm),
            pure=self.pure,
        )


def _basis_index(digits: Sequence[int], dims: Sequence[int]) -> int:
    return int(np.ravel_multi_index(tuple(digits), tuple(dims)))


def _ghz_vector(dims: Sequence[int]) -> npt.NDArray[np.complex128]:
    d = dims[0]
    psi = np.zeros(math.prod(dims), dtype=np.complex128)
    for j in range(d):
        psi[_basis_index([j] * len(dims), dims)] = 1.0
    return psi / math.sqrt(d)


def _w_vector(dims: Sequence[int]) -> npt.NDArray[np.complex128]:
    n = len(dims)
    psi = np.zeros(math.prod(dims), dtype=np.complex128)
    for k in range(n):
        digits = [0] * n
        digits[k] = 1
        psi[_basis_index(digits, dims)] = 1.0
    return psi / math.sqrt(n)


def named_state(name: str, profile: Union[DimensionProfile, Sequence[int]]) -> MultipartiteState:
    """
    Textbook states: ghz, w, bell (maximally entangled pair), product_zero and
    bell_times_pure (maximally entangled first pair, |0> on every other party).
    """
    profile = _as_profile(profile)
    dims = profile.dims
    n = profile.n_parties

    if name == "ghz":
        if n < 2 or len(set(dims)) != 1:
            raise RejectedInputError(f"ghz needs >= 2 parties of equal dimension, got {dims}")
        psi = _ghz_vector(dims)
    elif name == "w":
        if n < 2 or len(set(dims)) != 1:
            raise RejectedInputError(f"w needs >= 2 parties of equal dimension, got {dims}")
        psi = _w_vector(dims)
    elif name == "bell":
        if n != 2 or dims[0] != dims[1]:
            raise RejectedInputError(f"bell needs exactly 2 parties of equal dimension, got {dims}")
        psi = _ghz_vector(dims)
    elif name == "bell_times_pure":
        if n < 3 or dims[0] != dims[1]:
            raise RejectedInputError(f"bell_times_pure needs >= 3 parties with dims[0] == dims[1], got {dims}")
        rest = np.zeros(math.prod(dims[2:]), dtype=np.complex128)
        rest[0] = 1.0
        psi = np.kron(_ghz_vector(dims[:2]), rest)
    elif name == "product_zero":
        psi = np.zeros(profile.total, dtype=np.complex128)
        psi[0] = 1.0
    else:
        raise RejectedInputError(f"unknown named state '{name}', expected one of {NAMED_STATES}")

    return MultipartiteState.from_vector(psi, profile)


def derive_seed(master_seed: int, counter: int) -> int:
    """Stream seed for sample ``counter`` of a sweep; independent of scheduling."""
    sequence = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(counter),))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _gaussian(rng: np.random.Generator, shape) -> npt.NDArray[np.complex128]:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sample(spec: RandomSpec) -> MultipartiteState:
    """
    Draw a random state deterministically from ``spec.seed``.

    haar_pure: normalized complex Gaussian vector.
    induced_mixed: G G^dagger / tr for a Gaussian (D x ancilla) matrix G, i.e. the
    ancilla-traced Haar state.
    """
    rng = np.random.default_rng(spec.seed)
    dim = spec.profile.total

    if spec.kind == SampleKind.HAAR_PURE:
        psi = _gaussian(rng, dim)
        return MultipartiteState.from_vector(psi / np.linalg.norm(psi), spec.profile)

    g = _gaussian(rng, (dim, spec.effective_ancilla_dim))
    rho = g @ g.conj().T
    return MultipartiteState(rho / np.trace(rho).real, spec.profile)


def random_unitary(d: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix, phases fixed."""
    q, r = np.linalg.qr(_gaussian(rng, (d, d)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def embed_local(op, profile: DimensionProfile, party: int) -> ComplexMatrix:
    """Operator ``op`` acting on ``party`` tensored with identities elsewhere."""
    party = profile.validate_parties([party])[0]
    op = as_matrix(op)
    if op.shape[0] != profile.dims[party]:
        raise RejectedInputError(f"operator side {op.shape[0]} != dimension {profile.dims[party]} of party {party}")
    left = np.eye(profile.subsystem_dim(range(party)))
    right = np.eye(profile.subsystem_dim(range(party + 1, profile.n_parties)))
    return kron(kron(left, op), right)


def apply_local_unitary(s: MultipartiteState, party: int, u) -> MultipartiteState:
    full = embed_local(u, s.profile, party)
    if np.max(np.abs(full.conj().T @ full - np.eye(full.shape[0]))) > 1e-9:
        raise RejectedInputError("unitarity invariant violated for local operator")
    return MultipartiteState(full @ s.matrix @ full.conj().T, s.profile, pure=s.pure)


def depolarize_party(s: MultipartiteState, party: int, p: float) -> MultipartiteState:
    """rho -> (1 - p) rho + p (I_d / d at ``party``) (x) tr_party rho."""
    if not 0.0 <= p <= 1.0:
        raise RejectedInputError(f"probability invariant violated: p = {p} not in [0, 1]")
    party = s.profile.validate_parties([party])[0]
    if p == 0.0:
        return s

    others = s.profile.complement([party])
    d = s.profile.dims[party]
    maximally_mixed = np.eye(d, dtype=np.complex128) / d
    rest = partial_trace(s.matrix, s.profile, others) if others else np.ones((1, 1), dtype=np.complex128)

    # built with ``party`` first, then moved back into place
    order = (party,) + others
    noise = kron(maximally_mixed, rest)
    noise = permute_systems(noise, s.profile.sub_profile(order) if others else s.profile,
                            inverse_permutation(order))
    return MultipartiteState((1 - p) * s.matrix + p * noise, s.profile)
