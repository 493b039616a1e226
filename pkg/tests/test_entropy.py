import unittest

import numpy as np
from hypothesis import given, settings, seed
from hypothesis import strategies as st

from densecode.core.entropy import (
    binary_entropy, conditional_entropy, entropy, entropy_report, mutual_information, q_functional,
    spectrum_entropy, ssa_slack,
)
from densecode.core.states import MultipartiteState, apply_local_unitary, named_state, random_unitary, sample
from densecode.core.tensor import kron_all
from densecode.utils.dataclasses import DimensionProfile, RandomSpec, SampleKind
from densecode.utils.errors import PositivityError, RejectedInputError


def mixed(dims, k) -> MultipartiteState:
    return sample(RandomSpec(DimensionProfile(tuple(dims)), SampleKind.INDUCED_MIXED, seed=k))


def pure(dims, k) -> MultipartiteState:
    return sample(RandomSpec(DimensionProfile(tuple(dims)), SampleKind.HAAR_PURE, seed=k))


class TestEntropy(unittest.TestCase):

    def test_maximally_mixed_qubit(self):
        self.assertAlmostEqual(entropy(MultipartiteState(np.eye(2) / 2, [2]), [0]), 1.0, places=12)

    def test_pure_state_has_zero_entropy(self):
        self.assertAlmostEqual(entropy(pure([2, 3, 2], 1)), 0.0, delta=1e-9)

    def test_known_spectrum(self):
        s = MultipartiteState(np.diag([0.5, 0.25, 0.125, 0.125]), [4])
        self.assertAlmostEqual(entropy(s), 1.75, places=12)

    def test_clamps_tiny_negative_eigenvalues(self):
        self.assertAlmostEqual(spectrum_entropy([1.0, -5e-11]), 0.0, places=12)

    def test_rejects_negative_spectrum(self):
        with self.assertRaises(PositivityError):
            spectrum_entropy([1.1, -0.1])

    def test_binary_entropy(self):
        self.assertAlmostEqual(binary_entropy(0.5), 1.0, places=12)
        self.assertEqual(binary_entropy(0.0), 0.0)

    def test_report(self):
        report = entropy_report(named_state("ghz", [2, 2, 2]), [2, 0])
        self.assertEqual(report.subsystem, (0, 2))
        self.assertAlmostEqual(report.value, 1.0, places=12)

    def test_invalid_subset(self):
        with self.assertRaises(RejectedInputError):
            entropy(named_state("bell", [2, 2]), [3])
        with self.assertRaises(RejectedInputError):
            entropy(named_state("bell", [2, 2]), [])

    def test_schmidt_symmetry(self):
        for k in range(10):
            s = pure([2, 3, 2], k)
            self.assertAlmostEqual(entropy(s, [0]), entropy(s, [1, 2]), delta=1e-9)
            self.assertAlmostEqual(entropy(s, [0, 1]), entropy(s, [2]), delta=1e-9)

    def test_bounded_by_log_dimension(self):
        for k in range(10):
            s = mixed([2, 3], k)
            self.assertLessEqual(entropy(s, [1]), np.log2(3) + 1e-9)
            self.assertGreaterEqual(entropy(s, [1]), 0.0)

    @seed(17)
    @settings(max_examples=20, deadline=None)
    @given(k=st.integers(min_value=0, max_value=2 ** 32 - 1), perm=st.permutations([0, 1, 2]))
    def test_permutation_invariance(self, k, perm):
        s = mixed([2, 3, 2], k)
        moved = s.permute(perm)
        self.assertAlmostEqual(entropy(moved), entropy(s), delta=1e-9)
        for new, old in enumerate(perm):
            self.assertAlmostEqual(entropy(moved, [new]), entropy(s, [old]), delta=1e-9)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(3)
        s = mixed([2, 2, 2], 3)
        rotated = apply_local_unitary(s, 0, random_unitary(2, rng))
        for keep in ([0], [0, 1], [0, 2], [0, 1, 2]):
            self.assertAlmostEqual(entropy(rotated, keep), entropy(s, keep), delta=1e-9)


class TestConditionalAndMutual(unittest.TestCase):

    def test_product_state(self):
        a = mixed([2], 10).matrix
        b = mixed([3], 11).matrix
        s = MultipartiteState(kron_all([a, b]), [2, 3])
        self.assertAlmostEqual(conditional_entropy(s, [0], [1]), entropy(s, [0]), delta=1e-9)
        self.assertAlmostEqual(mutual_information(s, [0], [1]), 0.0, delta=1e-9)

    def test_bell_state(self):
        s = named_state("bell", [2, 2])
        self.assertAlmostEqual(conditional_entropy(s, [0], [1]), -1.0, places=9)
        self.assertAlmostEqual(mutual_information(s, [0], [1]), 2.0, places=9)

    def test_ghz_marginal(self):
        self.assertAlmostEqual(conditional_entropy(named_state("ghz", [2, 2, 2]), [0], [2]), 0.0, places=9)

    def test_overlap_rejected(self):
        with self.assertRaises(RejectedInputError):
            conditional_entropy(named_state("ghz", [2, 2, 2]), [0, 1], [1])

    def test_mutual_information_nonnegative(self):
        for k in range(20):
            s = mixed([2, 2, 3], k)
            self.assertGreaterEqual(mutual_information(s, [0], [1, 2]), -1e-9)


class TestStrongSubadditivity(unittest.TestCase):

    def test_product_state_slack(self):
        # S(B) + S(C) - S(AB) - S(AC) = -2 S(A) when nothing is correlated
        s = MultipartiteState(kron_all([mixed([2], 1).matrix, mixed([2], 2).matrix, mixed([2], 3).matrix]), [2, 2, 2])
        self.assertAlmostEqual(ssa_slack(s, [0], [1], [2]), -2 * entropy(s, [0]), delta=1e-9)
        self.assertLess(ssa_slack(s, [0], [1], [2]), 0.0)

    def test_pure_first_factor_saturates(self):
        pure_a = MultipartiteState.from_vector(np.array([1.0, 0.0]), [2]).matrix
        s = MultipartiteState(kron_all([pure_a, mixed([2], 2).matrix, mixed([2], 3).matrix]), [2, 2, 2])
        self.assertAlmostEqual(ssa_slack(s, [0], [1], [2]), 0.0, delta=1e-9)

    def test_pure_tripartite_slack_is_zero(self):
        for k in range(10):
            self.assertAlmostEqual(ssa_slack(pure([2, 2, 3], k), [0], [1], [2]), 0.0, delta=1e-9)

    def test_random_mixed_states(self):
        for k in range(100):
            self.assertLessEqual(ssa_slack(mixed([2, 2, 2], k), [0], [1], [2]), 1e-9)

    def test_overlap_rejected(self):
        with self.assertRaises(RejectedInputError):
            ssa_slack(named_state("ghz", [2, 2, 2]), [0], [0], [2])


class TestQFunctional(unittest.TestCase):

    def test_pure_states_vanish(self):
        for k in range(10):
            self.assertAlmostEqual(q_functional(pure([2, 2, 2, 2], k)), 0.0, delta=1e-9)

    def test_maximally_mixed_four_qubits(self):
        s = MultipartiteState(np.eye(16) / 16, [2, 2, 2, 2])
        self.assertAlmostEqual(q_functional(s), -8.0, places=9)

    def test_random_mixed_states_nonpositive(self):
        for k in range(50):
            self.assertLessEqual(q_functional(mixed([2, 2, 2, 2], k)), 1e-9)

    def test_needs_three_parties(self):
        with self.assertRaises(RejectedInputError):
            q_functional(named_state("bell", [2, 2]))


if __name__ == '__main__':
    unittest.main()
