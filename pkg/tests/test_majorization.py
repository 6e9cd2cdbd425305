import math

import numpy as np
import pytest

from locc_lab import (
    NotMajorizedError,
    SchmidtVector,
    as_schmidt_vector,
    average_schmidt_vector,
    majorizes,
    max_probability,
    shannon_entropy,
    t_transform_chain,
    tail_sum,
    weakly_supermajorized,
)

from conftest import random_schmidt_vector


class TestSchmidtVector:
    def test_valid(self):
        v = SchmidtVector(np.array([0.6, 0.3, 0.1]))
        assert len(v) == 3
        assert v.values.sum() == pytest.approx(1.0)

    def test_rejects_increasing(self):
        with pytest.raises(ValueError):
            SchmidtVector(np.array([0.3, 0.7]))

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            SchmidtVector(np.array([0.7, 0.2]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            SchmidtVector(np.array([1.2, -0.2]))

    def test_padding(self):
        v = SchmidtVector(np.array([0.7, 0.3]))
        assert np.allclose(v.padded(4), [0.7, 0.3, 0.0, 0.0])

    def test_json_round_trip(self):
        v = SchmidtVector(np.array([0.5, 0.25, 0.25]))
        assert np.allclose(SchmidtVector.from_json(v.to_json()).values, v.values)


class TestMajorizes:
    def test_top_majorizes_all(self):
        assert majorizes([1, 0], [0.5, 0.5])

    def test_reverse_fails(self):
        assert not majorizes([0.5, 0.5], [1, 0])

    def test_prefix_sums(self):
        # prefix sums 0.75 >= 0.5, 1.0 >= 0.75, 1.0 >= 1.0
        assert majorizes([0.75, 0.25, 0], [0.5, 0.25, 0.25])
        assert not majorizes([0.5, 0.25, 0.25], [0.75, 0.25, 0])

    def test_cross_length_padding(self):
        assert majorizes([0.5, 0.5], [0.5, 0.3, 0.2])

    def test_reflexive_transitive_antisymmetric(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 7))
            x = random_schmidt_vector(rng, n)
            y = random_schmidt_vector(rng, n)
            z = random_schmidt_vector(rng, n)
            assert majorizes(x, x)
            if majorizes(x, y) and majorizes(y, z):
                assert majorizes(x, z)
            if majorizes(x, y) and majorizes(y, x):
                assert np.allclose(x.values, y.values, atol=1e-8)


class TestWeakSupermajorization:
    def test_equal_vectors(self):
        assert weakly_supermajorized(1.0, [0.7, 0.3], [0.7, 0.3])

    def test_threshold_two_qubits(self):
        # feasibility boundary at twice the smaller source coefficient
        assert weakly_supermajorized(0.4, [0.5, 0.5], [0.8, 0.2])
        assert not weakly_supermajorized(0.41, [0.5, 0.5], [0.8, 0.2])

    def test_exact_conversion_case(self):
        assert weakly_supermajorized(1.0, [1, 0], [0.6, 0.4])

    def test_implied_by_majorization(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 6))
            x = random_schmidt_vector(rng, n)
            y = random_schmidt_vector(rng, n)
            if majorizes(x, y):
                assert weakly_supermajorized(1.0, x, y)

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            weakly_supermajorized(1.5, [1, 0], [1, 0])


class TestMaxProbability:
    def test_identical(self):
        assert max_probability([0.6, 0.4], [0.6, 0.4]) == 1.0

    def test_two_qubit_value(self):
        # tail ratio at the second position: 0.2 / 0.5
        assert max_probability([0.5, 0.5], [0.8, 0.2]) == pytest.approx(0.4, abs=1e-15)

    def test_rank_increase_impossible(self):
        assert max_probability([0.5, 0.5], [1, 0]) == 0.0

    def test_defining_property(self, rng):
        for _ in range(300):
            n = int(rng.integers(2, 6))
            lam = random_schmidt_vector(rng, n)
            mu = random_schmidt_vector(rng, n)
            p = max_probability(lam, mu)
            assert weakly_supermajorized(p, lam, mu)
            for l in range(1, n + 1):
                assert p * tail_sum(lam, l) <= tail_sum(mu, l) + 1e-9
            if p < 1.0:
                assert not weakly_supermajorized(min(1.0, p + 1e-6), lam, mu)
            else:
                assert majorizes(lam, mu)

    def test_p_one_iff_majorizes(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 5))
            lam = random_schmidt_vector(rng, n)
            mu = random_schmidt_vector(rng, n)
            assert (max_probability(lam, mu) == 1.0) == majorizes(lam, mu)


class TestTailSum:
    def test_full_tail_is_one(self):
        assert tail_sum([0.5, 0.3, 0.2], 1) == pytest.approx(1.0)

    def test_past_end_is_zero(self):
        assert tail_sum([0.5, 0.3, 0.2], 4) == 0.0

    def test_values(self):
        assert tail_sum([0.8, 0.2], 2) == pytest.approx(0.2)
        assert tail_sum([0.5, 0.3, 0.2], 3) == pytest.approx(0.2)

    def test_decreasing_in_start(self, rng):
        v = random_schmidt_vector(rng, 5)
        tails = [tail_sum(v, l) for l in range(1, 7)]
        assert all(a >= b - 1e-12 for a, b in zip(tails, tails[1:]))

    def test_range_check(self):
        with pytest.raises(IndexError):
            tail_sum([1.0], 3)


class TestAverage:
    def test_single_member(self):
        avg = average_schmidt_vector([(1.0, [0.7, 0.3])])
        assert np.allclose(avg.values, [0.7, 0.3])

    def test_positional_average(self):
        avg = average_schmidt_vector([(0.5, [1, 0]), (0.5, [0.5, 0.5])])
        assert np.allclose(avg.values, [0.75, 0.25])

    def test_worked_three_level_case(self):
        avg = average_schmidt_vector(
            [(0.5, [1, 0, 0]), (0.5, [0.5, 0.5, 0.0])]
        )
        assert np.allclose(avg.values, [0.75, 0.25, 0.0])

    def test_prefix_identity(self, rng):
        # prefixes of the average equal the weighted average of prefixes
        for _ in range(50):
            n = int(rng.integers(2, 5))
            m = int(rng.integers(1, 5))
            weights = rng.dirichlet(np.ones(m))
            vecs = [random_schmidt_vector(rng, n) for _ in range(m)]
            avg = average_schmidt_vector(list(zip(weights, vecs)))
            expect = sum(
                w * np.cumsum(v.values) for w, v in zip(weights, vecs)
            )
            assert np.allclose(np.cumsum(avg.values), expect, atol=1e-12)


class TestEntropy:
    def test_pure(self):
        assert shannon_entropy([1, 0]) == 0.0

    def test_uniform(self):
        assert shannon_entropy([0.5, 0.5]) == pytest.approx(1.0)

    def test_value(self):
        expected = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
        assert shannon_entropy([0.75, 0.25]) == pytest.approx(expected, abs=1e-12)
        assert shannon_entropy([0.75, 0.25]) == pytest.approx(0.811278, abs=1e-6)


class TestTTransformChain:
    def test_empty_for_equal(self):
        chain = t_transform_chain([0.6, 0.4], [0.6, 0.4])
        assert len(chain) == 0

    def test_two_level_halving(self):
        chain = t_transform_chain([1, 0], [0.5, 0.5])
        assert len(chain) == 1
        step = chain.steps[0]
        assert (step.i, step.j) == (0, 1)
        assert step.t == pytest.approx(0.5)

    def test_three_level(self):
        chain = t_transform_chain([0.75, 0.25, 0], [0.5, 0.25, 0.25])
        assert len(chain) <= 2
        assert np.allclose(chain.apply([0.75, 0.25, 0]), [0.5, 0.25, 0.25], atol=1e-9)

    def test_adjacent_rule_stall_case(self):
        # the prefix gap at position 2 exceeds the adjacent entry gap, so
        # only non-adjacent pairing can make progress here
        chain = t_transform_chain([0.8, 0.1, 0.1], [0.4, 0.3, 0.3])
        assert len(chain) <= 2
        assert np.allclose(chain.apply([0.8, 0.1, 0.1]), [0.4, 0.3, 0.3], atol=1e-9)

    def test_not_majorized_error(self):
        with pytest.raises(NotMajorizedError) as err:
            t_transform_chain([0.5, 0.5], [0.9, 0.1])
        assert err.value.prefix_index == 1

    def test_random_chains(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 7))
            x = random_schmidt_vector(rng, n)
            y = random_schmidt_vector(rng, n)
            if not majorizes(x, y):
                continue
            chain = t_transform_chain(x, y)
            assert len(chain) <= n - 1
            current = x.values.copy()
            for step in chain.steps:
                assert 0.0 <= step.t <= 1.0
                current = step.apply(current)
                mid = as_schmidt_vector(np.clip(current, 0, None))
                assert majorizes(x, mid)
                assert majorizes(mid, y)
            assert np.max(np.abs(current - y.padded(n))) <= 1e-9
