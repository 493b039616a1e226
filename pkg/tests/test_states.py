import math
import unittest

import numpy as np

from densecode.core.entropy import entropy
from densecode.core.states import (
    MultipartiteState, apply_local_unitary, depolarize_party, derive_seed, named_state, random_unitary, sample,
)
from densecode.utils.dataclasses import DimensionProfile, RandomSpec, SampleKind
from densecode.utils.errors import PositivityError, RejectedInputError


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


class TestNamedStates(unittest.TestCase):

    def test_ghz(self):
        s = named_state("ghz", [2, 2, 2])
        psi = np.zeros(8)
        psi[0] = psi[7] = 1 / math.sqrt(2)
        np.testing.assert_allclose(s.matrix, projector(psi), atol=1e-15)
        self.assertTrue(s.is_pure)

    def test_qutrit_ghz(self):
        s = named_state("ghz", [3, 3])
        psi = np.zeros(9)
        psi[[0, 4, 8]] = 1 / math.sqrt(3)
        np.testing.assert_allclose(s.matrix, projector(psi), atol=1e-15)

    def test_w(self):
        s = named_state("w", [2, 2, 2])
        psi = np.zeros(8)
        psi[[1, 2, 4]] = 1 / math.sqrt(3)
        np.testing.assert_allclose(s.matrix, projector(psi), atol=1e-15)

    def test_bell_times_pure(self):
        s = named_state("bell_times_pure", [2, 2, 2])
        bell = named_state("bell", [2, 2]).matrix
        zero = np.diag([1.0, 0.0])
        np.testing.assert_allclose(s.matrix, np.kron(bell, zero), atol=1e-15)

    def test_incompatible_profiles(self):
        with self.assertRaises(RejectedInputError):
            named_state("w", [2, 3])
        with self.assertRaises(RejectedInputError):
            named_state("bell", [2, 2, 2])
        with self.assertRaises(RejectedInputError):
            named_state("bell_times_pure", [2, 2])
        with self.assertRaises(RejectedInputError):
            named_state("cluster", [2, 2])


class TestValidation(unittest.TestCase):

    def test_trace_invariant(self):
        with self.assertRaisesRegex(RejectedInputError, "trace invariant violated"):
            MultipartiteState(np.eye(4) / 2, [2, 2])

    def test_hermiticity_invariant(self):
        m = np.array([[0.5, 0.1], [0.0, 0.5]])
        with self.assertRaisesRegex(RejectedInputError, "hermiticity invariant violated"):
            MultipartiteState(m, [2])

    def test_positivity_invariant(self):
        with self.assertRaises(PositivityError):
            MultipartiteState(np.diag([1.2, -0.2]), [2])

    def test_dimension_invariant(self):
        with self.assertRaises(RejectedInputError):
            MultipartiteState(np.eye(4) / 4, [2, 3])

    def test_purity_hint(self):
        with self.assertRaisesRegex(RejectedInputError, "purity invariant violated"):
            MultipartiteState(np.eye(2) / 2, [2], pure=True)

    def test_unnormalized_vector(self):
        with self.assertRaises(RejectedInputError):
            MultipartiteState.from_vector([1.0, 1.0], [2])

    def test_matrix_is_read_only(self):
        s = named_state("bell", [2, 2])
        with self.assertRaises(ValueError):
            s.matrix[0, 0] = 0

    def test_fingerprint_tracks_content(self):
        self.assertEqual(named_state("ghz", [2, 2, 2]).fingerprint, named_state("ghz", [2, 2, 2]).fingerprint)
        self.assertNotEqual(named_state("ghz", [2, 2, 2]).fingerprint, named_state("w", [2, 2, 2]).fingerprint)


class TestSampling(unittest.TestCase):

    def test_haar_pure_is_pure(self):
        for k in range(20):
            s = sample(RandomSpec(DimensionProfile((2, 3, 2)), SampleKind.HAAR_PURE, seed=k))
            self.assertAlmostEqual(s.purity, 1.0, delta=1e-12)

    def test_same_seed_is_bit_identical(self):
        spec = RandomSpec(DimensionProfile((2, 2, 2)), SampleKind.INDUCED_MIXED, seed=42)
        self.assertTrue(np.array_equal(sample(spec).matrix, sample(spec).matrix))
        self.assertEqual(sample(spec).fingerprint, sample(spec).fingerprint)

    def test_induced_mixed_is_valid_and_mixed(self):
        s = sample(RandomSpec(DimensionProfile((2, 2, 2)), SampleKind.INDUCED_MIXED, seed=1))
        self.assertAlmostEqual(np.trace(s.matrix).real, 1.0, places=12)
        self.assertLess(s.purity, 1.0)

    def test_rank_one_ancilla_gives_pure_state(self):
        s = sample(RandomSpec(DimensionProfile((2, 2)), SampleKind.INDUCED_MIXED, seed=4, ancilla_dim=1))
        self.assertTrue(s.is_pure)

    def test_invalid_spec(self):
        with self.assertRaises(RejectedInputError):
            RandomSpec(DimensionProfile((2, 2)), SampleKind.INDUCED_MIXED, seed=0, ancilla_dim=0)
        with self.assertRaises(RejectedInputError):
            RandomSpec(DimensionProfile((2, 2)), SampleKind.HAAR_PURE, seed=-1)

    def test_derived_seeds(self):
        self.assertEqual(derive_seed(42, 3), derive_seed(42, 3))
        self.assertEqual(len({derive_seed(42, k) for k in range(100)}), 100)
        self.assertNotEqual(derive_seed(42, 0), derive_seed(43, 0))

    def test_page_average_single_qubit_entropy(self):
        values = [
            entropy(sample(RandomSpec(DimensionProfile((2, 2)), SampleKind.HAAR_PURE, seed=derive_seed(2024, k))), [0])
            for k in range(10_000)
        ]
        self.assertAlmostEqual(float(np.mean(values)), 1 / (3 * math.log(2)), delta=0.01)


class TestChannels(unittest.TestCase):

    def test_depolarize_zero_is_identity(self):
        s = sample(RandomSpec(DimensionProfile((2, 2, 2)), SampleKind.INDUCED_MIXED, seed=5))
        np.testing.assert_allclose(depolarize_party(s, 1, 0.0).matrix, s.matrix)

    def test_full_depolarization_of_bell(self):
        s = depolarize_party(named_state("bell", [2, 2]), 0, 1.0)
        np.testing.assert_allclose(s.matrix, np.eye(4) / 4, atol=1e-15)

    def test_depolarize_middle_party(self):
        s = named_state("ghz", [2, 2, 2])
        noisy = depolarize_party(s, 1, 1.0)
        expected = np.kron(np.eye(2) / 2, s.reduced_matrix([0, 2])).reshape(2, 2, 2, 2, 2, 2)
        # reorder (B, A, C) back to (A, B, C)
        expected = expected.transpose(1, 0, 2, 4, 3, 5).reshape(8, 8)
        np.testing.assert_allclose(noisy.matrix, expected, atol=1e-15)

    def test_depolarize_preserves_trace_and_positivity(self):
        s = sample(RandomSpec(DimensionProfile((3, 2)), SampleKind.INDUCED_MIXED, seed=8))
        for p in (0.1, 0.5, 0.9):
            noisy = depolarize_party(s, 0, p)
            self.assertAlmostEqual(np.trace(noisy.matrix).real, 1.0, places=10)
            self.assertGreaterEqual(float(np.linalg.eigvalsh(noisy.matrix)[0]), -1e-10)

    def test_depolarize_invalid_probability(self):
        with self.assertRaises(RejectedInputError):
            depolarize_party(named_state("bell", [2, 2]), 0, 1.5)

    def test_local_unitary_keeps_marginal_spectra(self):
        rng = np.random.default_rng(12)
        s = sample(RandomSpec(DimensionProfile((2, 3)), SampleKind.INDUCED_MIXED, seed=12))
        rotated = apply_local_unitary(s, 1, random_unitary(3, rng))
        np.testing.assert_allclose(
            np.linalg.eigvalsh(rotated.reduced_matrix([1])), np.linalg.eigvalsh(s.reduced_matrix([1])), atol=1e-10
        )
        np.testing.assert_allclose(rotated.reduced_matrix([0]), s.reduced_matrix([0]), atol=1e-10)

    def test_rejects_non_unitary(self):
        with self.assertRaises(RejectedInputError):
            apply_local_unitary(named_state("bell", [2, 2]), 0, np.diag([1.0, 0.5]))


if __name__ == '__main__':
    unittest.main()
