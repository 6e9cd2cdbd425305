import numpy as np
import pytest

from locc_lab import (
    DensityMatrix,
    SearchConfig,
    TwoQubitMu,
    approx_threshold_alpha,
    binary_entropy,
    concurrence,
    eof,
    membership_approx_2q,
    membership_exact_2q,
    membership_prob_2q,
    membership_splus,
    min_mu2,
    optimal_pure_fidelity,
    random_density,
    schmidt_form_state,
    vidal_monotone,
)

from conftest import basis_state, bell_state


def werner(w: float) -> DensityMatrix:
    bell = bell_state().density().entries
    return DensityMatrix(w * bell + (1 - w) * np.eye(4) / 4, (2, 2))


def random_local_unitary_pair(rng):
    out = []
    for _ in range(2):
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        q, r = np.linalg.qr(g)
        out.append(q * (np.diagonal(r) / np.abs(np.diagonal(r))))
    return out


class TestConcurrence:
    def test_bell(self):
        assert concurrence(bell_state().density()) == pytest.approx(1.0)

    def test_product(self):
        assert concurrence(basis_state((2, 2), 0, 0).density()) == 0.0

    def test_werner_analytic(self):
        # spin-flip spectrum of the Werner family gives max(0, (3w-1)/2)
        for w in (0.2, 1 / 3, 0.5, 0.8, 1.0):
            expected = max(0.0, (3 * w - 1) / 2)
            assert concurrence(werner(w)) == pytest.approx(expected, abs=1e-10)

    def test_local_unitary_invariance(self, rng):
        # square roots amplify eigenvalue round-off near zero to ~1e-9,
        # so the invariance check allows a slightly wider margin
        for seed in range(10):
            rho = random_density((2, 2), int(rng.integers(1, 5)), seed)
            u, v = random_local_unitary_pair(rng)
            full = np.kron(u, v)
            rotated = DensityMatrix(full @ rho.entries @ full.conj().T, (2, 2))
            assert concurrence(rotated) == pytest.approx(concurrence(rho), abs=1e-7)

    def test_separable_mixture_is_zero(self, rng):
        # convex mixture of product states
        mats = []
        for _ in range(4):
            a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            vec = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
            mats.append(np.outer(vec, vec.conj()))
        weights = rng.dirichlet(np.ones(4))
        rho = DensityMatrix(sum(w * m for w, m in zip(weights, mats)), (2, 2))
        assert concurrence(rho) <= 1e-8

    def test_wrong_dims_rejected(self):
        rho = random_density((3, 3), 2, 0)
        with pytest.raises(ValueError):
            concurrence(rho)


class TestEofMinMu2:
    def test_bell(self):
        rho = bell_state().density()
        assert eof(rho) == pytest.approx(1.0)
        assert min_mu2(rho) == pytest.approx(0.5)

    def test_separable(self):
        rho = basis_state((2, 2), 1, 0).density()
        assert eof(rho) == 0.0
        assert min_mu2(rho) == 0.0

    def test_quarter_concurrence_closed_form(self):
        rho = werner(0.5)  # concurrence 1/4
        expected_mu2 = (1 - np.sqrt(15) / 4) / 2
        assert min_mu2(rho) == pytest.approx(expected_mu2, abs=1e-12)
        assert eof(rho) == pytest.approx(binary_entropy(expected_mu2), abs=1e-12)
        # decomposition upper bound: any ensemble's average entanglement
        # entropy dominates the entanglement of formation
        from locc_lab import schmidt_decompose, shannon_entropy

        bound = sum(
            w * shannon_entropy(schmidt_decompose(s).coefficients)
            for w, s in rho.eigen_ensemble().members
        )
        assert eof(rho) <= bound + 1e-9

    def test_monotone_in_concurrence(self):
        values = [min_mu2(werner(w)) for w in (0.4, 0.6, 0.8, 1.0)]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


class TestMembershipExact:
    def test_bell_needs_half(self):
        rho = bell_state().density()
        assert not membership_exact_2q(rho, 0.4)
        assert membership_exact_2q(rho, 0.5)

    def test_werner_case(self):
        rho = werner(0.5)
        assert membership_exact_2q(rho, 0.02)
        assert not membership_exact_2q(rho, 0.01)

    def test_maximal_set(self, rng):
        rho = random_density((2, 2), 4, rng)
        assert membership_exact_2q(rho, 0.5)

    def test_nested_sets(self, rng):
        for seed in range(20):
            rho = random_density((2, 2), 4, seed)
            for mu2, mu2_bigger in ((0.1, 0.3), (0.2, 0.45)):
                if membership_exact_2q(rho, mu2):
                    assert membership_exact_2q(rho, mu2_bigger)

    def test_eof_bounded_by_source_entropy(self, rng):
        for seed in range(20):
            rho = random_density((2, 2), 4, seed)
            for mu2 in (0.05, 0.2, 0.4):
                if membership_exact_2q(rho, mu2):
                    assert eof(rho) <= binary_entropy(mu2) + 1e-9


class TestMembershipProb:
    def test_collapse_at_threshold(self, rng):
        for seed in range(10):
            rho = random_density((2, 2), 4, seed)
            assert membership_prob_2q(rho, 0.2, 0.4)

    def test_above_threshold_composition(self):
        bell = bell_state().density()
        # q > 2 mu2 reduces to the exact set at mu2 / q
        assert membership_prob_2q(bell, 0.2, 0.5) == membership_exact_2q(bell, 0.4)
        assert not membership_prob_2q(bell, 0.2, 0.5)

    def test_rescaled_exact_set(self):
        rho = werner(0.9)  # min_mu2 about 0.12
        mu2, q = 0.2, 0.8
        assert membership_prob_2q(rho, mu2, q) == membership_exact_2q(rho, mu2 / q)

    def test_validation(self):
        with pytest.raises(ValueError):
            membership_prob_2q(bell_state().density(), 0.2, 0.0)

    def test_optimizer_never_contradicts(self):
        # generic search member verdicts imply the closed form
        from locc_lab import membership_prob

        cfg = SearchConfig(max_ensemble_size=4, restarts=3, seed=9)
        for seed in range(6):
            rho = random_density((2, 2), 4, 300 + seed)
            for mu2, q in ((0.25, 0.4), (0.25, 0.9), (0.1, 0.5)):
                verdict = membership_prob(rho, [1 - mu2, mu2], q, cfg)
                if verdict.is_member:
                    assert membership_prob_2q(rho, mu2, q)


class TestMembershipApprox:
    def test_fidelity_one_reduces_to_exact(self, rng):
        for seed in range(10):
            rho = random_density((2, 2), 4, seed)
            for mu2 in (0.1, 0.3):
                assert membership_approx_2q(rho, mu2, 1.0) == membership_exact_2q(
                    rho, mu2
                )

    def test_low_fidelity_admits_everything(self, rng):
        rho = bell_state().density()
        mu2 = 0.1
        f_balanced = np.sqrt(0.9 / 2) + np.sqrt(0.1 / 2)
        assert membership_approx_2q(rho, mu2, f_balanced - 1e-6)

    def test_threshold_matches_pure_fidelity(self):
        # the flip point solves the scalar fidelity equation
        mu2 = 0.2
        for f in (0.97, 0.99, 0.995):
            alpha = approx_threshold_alpha(mu2, f)
            target = schmidt_form_state([alpha, 1 - alpha], (2, 2))
            fid, _ = optimal_pure_fidelity(target, [1 - mu2, mu2])
            assert fid == pytest.approx(f, abs=1e-6)

    def test_pure_target_flip(self):
        mu2 = 0.2
        f = 0.99
        alpha_star = approx_threshold_alpha(mu2, f)
        above = schmidt_form_state([alpha_star + 1e-4, 1 - alpha_star - 1e-4], (2, 2))
        below = schmidt_form_state([alpha_star - 1e-4, 1 - alpha_star + 1e-4], (2, 2))
        assert membership_approx_2q(above.density(), mu2, f)
        assert not membership_approx_2q(below.density(), mu2, f)


class TestOracleAgreement:
    def test_search_never_contradicts_closed_form(self):
        cfg = SearchConfig(max_ensemble_size=4, restarts=3, seed=11)
        disagreements = 0
        for seed in range(30):
            rho = random_density((2, 2), 4, 400 + seed)
            for mu2 in (0.1, 0.25, 0.4):
                verdict = membership_splus(rho, [1 - mu2, mu2], cfg)
                exact = membership_exact_2q(rho, mu2)
                if verdict.is_member:
                    assert exact
                elif exact:
                    disagreements += 1  # semi-decision slack only
        assert disagreements <= 12

    def test_e2_closed_form_two_sided(self):
        cfg = SearchConfig(max_ensemble_size=4, restarts=4, seed=13)
        for seed in range(10):
            rho = random_density((2, 2), 4, 500 + seed)
            c = concurrence(rho)
            closed = (1 - np.sqrt(1 - c * c)) / 2
            est = vidal_monotone(rho, 2, cfg)
            assert est >= closed - 1e-5
            assert est <= closed + 1e-4


class TestTwoQubitMu:
    def test_validation(self):
        with pytest.raises(ValueError):
            TwoQubitMu(0.6)
        assert TwoQubitMu(0.3).mu1 == pytest.approx(0.7)
        assert np.allclose(TwoQubitMu(0.3).vector().values, [0.7, 0.3])
