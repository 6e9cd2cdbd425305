import numpy as np
import pytest

from locc_lab import (
    HermitianPreservingMap,
    apply_extended,
    apply_map,
    averaged_map,
    identity_map,
    k_positivity_implication_check,
    majorizes,
    mu_positivity_check,
    rank_positivity_check,
    random_density,
    reduction_like_map,
    schmidt_decompose,
    trace_map,
    transpose_map,
)

from conftest import bell_state


class TestMapRepresentation:
    def test_requires_hermitian_choi(self):
        bad = np.zeros((4, 4), dtype=complex)
        bad[0, 1] = 1.0
        with pytest.raises(ValueError):
            HermitianPreservingMap(bad)

    def test_identity(self):
        m = identity_map(3)
        x = np.arange(9).reshape(3, 3).astype(complex)
        x = x + x.conj().T
        assert np.allclose(apply_map(m, x), x)

    def test_transpose(self):
        m = transpose_map(2)
        x = np.array([[1, 2j], [-2j, 3]], dtype=complex)
        assert np.allclose(apply_map(m, x), x.T)

    def test_trace_map_positive(self):
        m = trace_map(3)
        x = np.diag([1.0, 2.0, 3.0]).astype(complex)
        assert np.allclose(apply_map(m, x), np.eye(3) * 2.0)

    def test_hermiticity_preserved_on_samples(self, rng):
        for m in (identity_map(2), transpose_map(2), reduction_like_map(2)):
            g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            x = g + g.conj().T
            out = apply_map(m, x)
            assert np.allclose(out, out.conj().T, atol=1e-12)

    def test_json_round_trip(self):
        m = reduction_like_map(3)
        again = HermitianPreservingMap.from_json(m.to_json())
        assert np.allclose(again.choi, m.choi)


class TestApplyExtended:
    def test_identity_map_extension(self, rng):
        rho = random_density((3, 3), 2, rng)
        assert np.allclose(apply_extended(identity_map(3), rho), rho.entries)

    def test_partial_transpose_of_bell(self):
        # oracle: build the partially transposed matrix by hand
        rho = bell_state().density()
        out = apply_extended(transpose_map(2), rho)
        manual = rho.entries.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        assert np.allclose(out, manual, atol=1e-12)
        evals = np.sort(np.linalg.eigvalsh(out))
        assert evals[0] == pytest.approx(-0.5, abs=1e-12)

    def test_trace_map_positive_everywhere(self, rng):
        rho = random_density((3, 3), 4, rng)
        out = apply_extended(trace_map(3), rho)
        assert np.linalg.eigvalsh(out).min() >= -1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_extended(transpose_map(3), bell_state().density())


class TestMuPositivity:
    def test_identity_passes(self):
        report = mu_positivity_check(identity_map(2), [0.5, 0.5], 200, seed=0)
        assert report.passed
        assert report.min_eigenvalue >= -1e-9

    def test_transpose_violated_for_entangled_source(self):
        report = mu_positivity_check(transpose_map(2), [0.5, 0.5], 10000, seed=0)
        assert not report.passed
        w = report.witness
        assert w.eigenvalue < -1e-9
        # witness re-validates from scratch
        coeffs = schmidt_decompose(w.state).coefficients
        assert majorizes(coeffs, [0.5, 0.5])
        recheck = np.linalg.eigvalsh(
            apply_extended(transpose_map(2), w.state.density())
        ).min()
        assert recheck == pytest.approx(w.eigenvalue, abs=1e-12)

    def test_transpose_passes_for_product_source(self):
        # a rank-1 source only reaches product states, where the
        # transpose stays positive
        report = mu_positivity_check(transpose_map(2), [1.0, 0.0], 500, seed=1)
        assert report.passed

    def test_seed_determinism(self):
        a = mu_positivity_check(transpose_map(3), [0.5, 0.3, 0.2], 300, seed=5)
        b = mu_positivity_check(transpose_map(3), [0.5, 0.3, 0.2], 300, seed=5)
        assert a.passed == b.passed
        assert a.min_eigenvalue == b.min_eigenvalue
        if a.witness is not None:
            assert np.array_equal(a.witness.state.amplitudes, b.witness.state.amplitudes)

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            mu_positivity_check(identity_map(2), [1.0, 0.0], 0, seed=0)


class TestImplication:
    def test_identity_consistent(self):
        report = k_positivity_implication_check(identity_map(2), [0.7, 0.3], 200, 0)
        assert report.consistent
        assert report.mu_report.passed
        assert report.rank_report.passed
        assert report.schmidt_rank == 2

    def test_transpose_both_violated(self):
        report = k_positivity_implication_check(transpose_map(2), [0.6, 0.4], 2000, 0)
        assert report.consistent
        assert not report.mu_report.passed
        assert not report.rank_report.passed

    def test_reduction_like_at_three_levels(self):
        m = reduction_like_map(3)
        report = k_positivity_implication_check(m, [0.6, 0.4, 0.0], 1500, 2)
        assert report.schmidt_rank == 2
        assert report.consistent

    def test_rank_check_probes_maximally_entangled(self):
        # the first rank-k sample is the decisive maximally entangled one
        report = rank_positivity_check(transpose_map(3), 2, 1, seed=0)
        assert not report.passed
        assert report.samples == 1
