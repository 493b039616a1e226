import unittest

import numpy as np
from hypothesis import given, settings, seed
from hypothesis import strategies as st

from densecode.core.tensor import (
    hermitian_eig, hermitian_eigvals, hermitian_sqrt, inverse_permutation, kron, kron_all,
    partial_trace, permute_systems, permuted_profile, symmetrize,
)
from densecode.core.states import named_state
from densecode.utils.dataclasses import DimensionProfile
from densecode.utils.errors import RejectedInputError


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def random_density(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


class TestHermitianEig(unittest.TestCase):

    @seed(7)
    @settings(max_examples=20, deadline=None)
    @given(size=st.integers(min_value=1, max_value=64), rng_seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_matches_reference_eigenvalues(self, size, rng_seed):
        m = random_hermitian(size, np.random.default_rng(rng_seed))
        eigenvalues, vectors = hermitian_eig(m)
        np.testing.assert_allclose(eigenvalues, np.linalg.eigvalsh(m), atol=1e-9)
        np.testing.assert_allclose(vectors @ np.diag(eigenvalues) @ vectors.conj().T, m, atol=1e-9)
        np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(size), atol=1e-9)

    def test_pauli_x(self):
        eigenvalues, vectors = hermitian_eig(np.array([[0, 1], [1, 0]]))
        np.testing.assert_allclose(eigenvalues, [-1.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(np.abs(vectors), np.full((2, 2), 2 ** -0.5), atol=1e-12)

    def test_w_marginal_spectrum(self):
        marginal = named_state("w", [2, 2, 2]).reduce([0, 1]).matrix
        np.testing.assert_allclose(hermitian_eigvals(marginal), [0.0, 0.0, 1 / 3, 2 / 3], atol=1e-12)

    def test_tiny_off_diagonal_is_still_rotated(self):
        m = np.diag([10.0, 20.0, 30.0, 40.0]).astype(np.complex128)
        m[0, 1], m[1, 0] = 1e-8, 1e-8
        m[2, 3], m[3, 2] = 3e-8j, -3e-8j
        eigenvalues, vectors = hermitian_eig(m)
        self.assertLessEqual(np.linalg.norm(m @ vectors - vectors * eigenvalues), 1e-12)

    @seed(11)
    @settings(max_examples=15, deadline=None)
    @given(size=st.integers(min_value=2, max_value=32), rng_seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_residual_on_density_matrices(self, size, rng_seed):
        rho = random_density(size, np.random.default_rng(rng_seed))
        eigenvalues, vectors = hermitian_eig(rho)
        self.assertLessEqual(np.linalg.norm(rho @ vectors - vectors * eigenvalues), 1e-9)
        np.testing.assert_allclose(vectors @ np.diag(eigenvalues) @ vectors.conj().T, rho, atol=1e-9)

    def test_eigenvalues_ascending(self):
        eigenvalues = hermitian_eigvals(np.diag([3.0, -1.0, 2.0]))
        np.testing.assert_allclose(eigenvalues, [-1.0, 2.0, 3.0])

    def test_degenerate_spectrum(self):
        m = np.eye(4) / 4
        np.testing.assert_allclose(hermitian_eigvals(m), [0.25] * 4, atol=1e-15)

    def test_rejects_non_hermitian(self):
        with self.assertRaises(RejectedInputError):
            hermitian_eig(np.array([[0, 1], [0, 0]]))

    def test_rejects_non_square(self):
        with self.assertRaises(RejectedInputError):
            symmetrize(np.zeros((2, 3)))

    def test_square_root(self):
        rho = random_density(6, np.random.default_rng(3))
        root = hermitian_sqrt(rho)
        np.testing.assert_allclose(root @ root, rho, atol=1e-10)


class TestKron(unittest.TestCase):

    def test_pauli_product(self):
        x = np.array([[0, 1], [1, 0]])
        z = np.array([[1, 0], [0, -1]])
        expected = np.array([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]])
        np.testing.assert_array_equal(kron(x, z), expected)

    def test_diagonal_factors(self):
        np.testing.assert_array_equal(kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))

    def test_kron_all_order(self):
        a, b, c = np.diag([1, 2]), np.diag([1, 3]), np.diag([1, 5])
        np.testing.assert_array_equal(kron_all([a, b, c]), kron(kron(a, b), c))
        self.assertEqual(kron_all([a, np.eye(3)]).shape, (6, 6))


class TestPartialTrace(unittest.TestCase):

    def test_product_state_factors(self):
        rng = np.random.default_rng(11)
        a, b, c = random_density(2, rng), random_density(3, rng), random_density(2, rng)
        profile = DimensionProfile((2, 3, 2))
        rho = kron_all([a, b, c])
        np.testing.assert_allclose(partial_trace(rho, profile, [0]), a, atol=1e-12)
        np.testing.assert_allclose(partial_trace(rho, profile, [1]), b, atol=1e-12)
        np.testing.assert_allclose(partial_trace(rho, profile, [0, 2]), kron(a, c), atol=1e-12)
        np.testing.assert_allclose(partial_trace(rho, profile, [0, 1, 2]), rho, atol=1e-12)

    @seed(3)
    @settings(max_examples=25, deadline=None)
    @given(rng_seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_trace_is_preserved(self, rng_seed):
        profile = DimensionProfile((2, 3, 2))
        rho = random_density(profile.total, np.random.default_rng(rng_seed))
        for keep in ([0], [1], [2], [0, 1], [1, 2]):
            self.assertAlmostEqual(np.trace(partial_trace(rho, profile, keep)).real, 1.0, places=12)

    def test_nested_traces_agree(self):
        profile = DimensionProfile((2, 2, 3))
        rho = random_density(profile.total, np.random.default_rng(5))
        two_steps = partial_trace(partial_trace(rho, profile, [0, 2]), DimensionProfile((2, 3)), [1])
        np.testing.assert_allclose(two_steps, partial_trace(rho, profile, [2]), atol=1e-12)

    def test_ghz_keeps_classical_correlation(self):
        ghz = named_state("ghz", [2, 2, 2])
        np.testing.assert_allclose(partial_trace(ghz.matrix, ghz.profile, [0, 1]), np.diag([0.5, 0, 0, 0.5]),
                                   atol=1e-12)

    def test_bell_marginal_is_maximally_mixed(self):
        bell = named_state("bell", [2, 2])
        np.testing.assert_allclose(partial_trace(bell.matrix, bell.profile, [0]), np.eye(2) / 2, atol=1e-12)
        np.testing.assert_allclose(partial_trace(bell.matrix, bell.profile, [1]), np.eye(2) / 2, atol=1e-12)

    def test_rejects_bad_parties(self):
        profile = DimensionProfile((2, 2))
        rho = np.eye(4) / 4
        with self.assertRaises(RejectedInputError):
            partial_trace(rho, profile, [2])
        with self.assertRaises(RejectedInputError):
            partial_trace(rho, profile, [0, 0])
        with self.assertRaises(RejectedInputError):
            partial_trace(np.eye(6) / 6, profile, [0])


class TestPermuteSystems(unittest.TestCase):

    def test_swaps_product_factors(self):
        rng = np.random.default_rng(2)
        a, b = random_density(2, rng), random_density(3, rng)
        swapped = permute_systems(kron(a, b), DimensionProfile((2, 3)), (1, 0))
        np.testing.assert_allclose(swapped, kron(b, a), atol=1e-12)
        self.assertEqual(permuted_profile(DimensionProfile((2, 3)), (1, 0)).dims, (3, 2))

    def test_inverse_restores(self):
        profile = DimensionProfile((2, 3, 4))
        rho = random_density(profile.total, np.random.default_rng(9))
        perm = (2, 0, 1)
        moved = permute_systems(rho, profile, perm)
        back = permute_systems(moved, permuted_profile(profile, perm), inverse_permutation(perm))
        np.testing.assert_allclose(back, rho, atol=1e-12)

    def test_rejects_invalid_permutation(self):
        with self.assertRaises(RejectedInputError):
            permute_systems(np.eye(4) / 4, DimensionProfile((2, 2)), (0, 0))


class TestDimensionProfile(unittest.TestCase):

    def test_rejects_trivial_party(self):
        with self.assertRaises(RejectedInputError):
            DimensionProfile((2, 1))
        with self.assertRaises(RejectedInputError):
            DimensionProfile(())

    def test_helpers(self):
        profile = DimensionProfile((2, 3, 4))
        self.assertEqual(profile.total, 24)
        self.assertEqual(profile.complement([1]), (0, 2))
        self.assertEqual(profile.validate_parties([2, 0]), (0, 2))
        self.assertAlmostEqual(profile.log2_dim([0, 2]), 3.0)


if __name__ == '__main__':
    unittest.main()
