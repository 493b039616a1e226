import logging
from typing import Iterable, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from densecode.utils.dataclasses import DimensionProfile
from densecode.utils.errors import RejectedInputError


ComplexMatrix = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

logger = logging.getLogger(__name__)


def as_matrix(m) -> ComplexMatrix:
    """Coerce input to a square complex128 array, rejecting anything else."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise RejectedInputError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def hermiticity_error(m: ComplexMatrix) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def symmetrize(m, tol: float = HERMITIAN_TOL) -> ComplexMatrix:
    """Check Hermiticity within ``tol`` and return (M + M^dagger) / 2."""
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > tol:
        raise RejectedInputError(f"hermiticity invariant violated: max|M - M^dagger| = {err:.3e}")
    return (m + m.conj().T) / 2


def kron(a, b) -> ComplexMatrix:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def kron_all(factors: Iterable) -> ComplexMatrix:
    result = np.ones((1, 1), dtype=np.complex128)
    for factor in factors:
        result = kron(result, factor)
    return result


def _check_side(m: ComplexMatrix, profile: DimensionProfile):
    if m.shape[0] != profile.total:
        raise RejectedInputError(
            f"dimension mismatch: matrix side {m.shape[0]} != product of dims {profile.dims} = {profile.total}"
        )


def partial_trace(m, profile: DimensionProfile, keep: Iterable[int]) -> ComplexMatrix:
    """
    Trace out every party not in ``keep``. Kept parties stay in their original
    relative order.
    """
    m = as_matrix(m)
    _check_side(m, profile)
    keep = profile.validate_parties(keep)
    traced = profile.complement(keep)
    n = profile.n_parties

    tensor = m.reshape(profile.dims + profile.dims)
    order = list(keep) + list(traced)
    tensor = tensor.transpose(order + [n + p for p in order])

    d_keep = profile.subsystem_dim(keep)
    d_traced = profile.subsystem_dim(traced)
    tensor = tensor.reshape(d_keep, d_traced, d_keep, d_traced)
    return np.einsum("ijkj->ik", tensor)


def _validate_permutation(perm: Sequence[int], n: int) -> Tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise RejectedInputError(f"invalid permutation {perm} for {n} parties")
    return perm


def permute_systems(m, profile: DimensionProfile, perm: Sequence[int]) -> ComplexMatrix:
    """
    Reorder parties: new party ``i`` is old party ``perm[i]``. The new profile
    is ``permuted_profile(profile, perm)``.
    """
    m = as_matrix(m)
    _check_side(m, profile)
    n = profile.n_parties
    perm = _validate_permutation(perm, n)

    tensor = m.reshape(profile.dims + profile.dims)
    tensor = tensor.transpose(list(perm) + [n + p for p in perm])
    return np.ascontiguousarray(tensor.reshape(profile.total, profile.total))


def permuted_profile(profile: DimensionProfile, perm: Sequence[int]) -> DimensionProfile:
    perm = _validate_permutation(perm, profile.n_parties)
    return DimensionProfile(tuple(profile.dims[p] for p in perm))


def inverse_permutation(perm: Sequence[int]) -> Tuple[int, ...]:
    inverse = [0] * len(perm)
    for new, old in enumerate(perm):
        inverse[old] = new
    return tuple(inverse)


def _jacobi_rotation(a: ComplexMatrix, v: ComplexMatrix, p: int, q: int):
    """Annihilate a[p, q] in place with a phase-corrected real Givens rotation."""
    apq = a[p, q]
    magnitude = abs(apq)
    phase = apq / magnitude
    phi = 0.5 * np.arctan2(2.0 * magnitude, a[q, q].real - a[p, p].real)
    c, s = np.cos(phi), np.sin(phi)

    # columns p, q of the unitary: diag(1, conj(phase)) @ [[c, s], [-s, c]]
    u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]], dtype=np.complex128)
    idx = [p, q]
    a[idx, :] = u.conj().T @ a[idx, :]
    a[:, idx] = a[:, idx] @ u
    v[:, idx] = v[:, idx] @ u

    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def _off_diagonal_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def hermitian_eig(m) -> Tuple[npt.NDArray[np.float64], ComplexMatrix]:
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Returns:
        (eigenvalues ascending, unitary V with m @ V = V @ diag(eigenvalues))
    """
    a = symmetrize(m).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while _off_diagonal_norm(a) > threshold and sweeps < JACOBI_MAX_SWEEPS:
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > 1e-300:
                    _jacobi_rotation(a, v, p, q)
        sweeps += 1

    if sweeps == JACOBI_MAX_SWEEPS:
        logger.warning(f"Jacobi eigensolver hit {JACOBI_MAX_SWEEPS} sweeps on a {n}x{n} matrix")

    eigenvalues = np.real(np.diag(a))
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def hermitian_eigvals(m) -> npt.NDArray[np.float64]:
    return hermitian_eig(m)[0]


def hermitian_sqrt(m) -> ComplexMatrix:
    """Principal square root of a positive semidefinite Hermitian matrix."""
    eigenvalues, vectors = hermitian_eig(m)
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (vectors * roots) @ vectors.conj().T
