import numpy as np
import pytest
from oracles import random_density

from shadowvqc.data import Dataset, GenConfig, OutcomeSymbol, Sample, generate_synthetic, ideal_pattern
from shadowvqc.shadows import (
    MODE_PAPER,
    MODE_UNBIASED,
    SHADOW_OPS,
    average_shadow,
    expectations_csv,
    outcome_state,
    pauli_expectations,
    reconstruct_density,
    shadow_features,
    shadow_operator,
)

SQ2 = 1 / np.sqrt(2)


def sample_of(rows) -> Sample:
    return Sample("s", "Z2", np.array(rows, dtype=np.uint8))


class TestOutcomeStates:
    def test_eigenstate_vectors(self):
        assert np.allclose(outcome_state(OutcomeSymbol.G), [1, 0])
        assert np.allclose(outcome_state(OutcomeSymbol.MINUS), [SQ2, -SQ2])
        assert np.allclose(outcome_state(OutcomeSymbol.PLUS_I), [SQ2, SQ2 * 1j])

    def test_all_unit_norm(self):
        for sym in OutcomeSymbol:
            assert np.linalg.norm(outcome_state(sym)) == pytest.approx(1.0, abs=1e-15)


class TestShadowOperator:
    def test_known_matrices(self):
        assert np.allclose(shadow_operator(OutcomeSymbol.G), [[2, 0], [0, -1]])
        assert np.allclose(shadow_operator(OutcomeSymbol.PLUS), [[0.5, 1.5], [1.5, 0.5]])
        assert np.allclose(
            shadow_operator(OutcomeSymbol.PLUS_I), [[0.5, -1.5j], [1.5j, 0.5]]
        )

    def test_trace_and_spectrum(self):
        for sym in OutcomeSymbol:
            op = shadow_operator(sym)
            assert np.trace(op).real == pytest.approx(1.0, abs=1e-12)
            assert np.abs(op - op.conj().T).max() < 1e-15
            eigs = np.sort(np.linalg.eigvalsh(op))
            assert np.allclose(eigs, [-1.0, 2.0], atol=1e-12)

    def test_consistent_with_projector_formula(self):
        for sym in OutcomeSymbol:
            built = 3.0 * np.outer(outcome_state(sym), outcome_state(sym).conj()) - np.eye(2)
            assert np.abs(built - shadow_operator(sym)).max() < 1e-15


class TestAverageShadow:
    def test_constant_outcomes(self):
        s = sample_of([[0], [0], [0]])
        assert np.allclose(average_shadow(s, 0), [[2, 0], [0, -1]])

    def test_gr_mix_is_maximally_mixed(self):
        s = sample_of([[0], [1]])
        assert np.allclose(average_shadow(s, 0), [[0.5, 0], [0, 0.5]])

    def test_plus_minus_offdiagonals_cancel(self):
        s = sample_of([[2], [3]])
        assert np.allclose(average_shadow(s, 0), [[0.5, 0], [0, 0.5]])

    def test_out_of_range_qubit(self):
        with pytest.raises(IndexError):
            average_shadow(sample_of([[0, 1]]), 2)

    def test_matches_naive_shot_average(self):
        rng = np.random.default_rng(8)
        grid = rng.integers(0, 6, size=(37, 3)).astype(np.uint8)
        s = Sample("s", "Z3", grid)
        for q in range(3):
            naive = sum(SHADOW_OPS[c] for c in grid[:, q]) / 37
            assert np.array_equal(average_shadow(s, q), naive)


class TestReconstruction:
    def test_paper_mode(self):
        S = np.array([[2, 0], [0, -1]], dtype=complex)
        assert np.allclose(reconstruct_density(S, MODE_PAPER), [[1, 0], [0, 0]])

    def test_unbiased_mode_is_identity(self):
        S = np.array([[2, 0], [0, -1]], dtype=complex)
        assert np.allclose(reconstruct_density(S, MODE_UNBIASED), S)

    def test_maximally_mixed_fixed_point(self):
        S = np.eye(2) * 0.5
        assert np.allclose(reconstruct_density(S, MODE_PAPER), S)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            reconstruct_density(np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError, match="mode"):
            reconstruct_density(np.eye(2) * 0.5, "other")


class TestPauliExpectations:
    def test_pure_zero(self):
        assert pauli_expectations(np.diag([1.0, 0.0]).astype(complex)) == (0.0, 1.0)

    def test_pure_plus(self):
        rho = np.full((2, 2), 0.5, dtype=complex)
        assert pauli_expectations(rho) == (1.0, 0.0)

    def test_maximally_mixed(self):
        assert pauli_expectations(np.eye(2, dtype=complex) / 2) == (0.0, 0.0)


class TestShadowFeatures:
    def test_single_cell_chain(self):
        ds = Dataset([sample_of([[0], [0]])], n_qubits=1, n_shots=2)
        table = shadow_features(ds, MODE_PAPER)
        assert table.values.shape == (1, 1, 2)
        assert table.values[0, 0].tolist() == [0.0, 1.0]

    def test_matches_per_cell_composition(self):
        ds = generate_synthetic(GenConfig(2, 5, 20, 0.1, seed=21))
        for mode in (MODE_PAPER, MODE_UNBIASED):
            table = shadow_features(ds, mode)
            for i, sample in enumerate(ds.samples):
                for q in range(ds.n_qubits):
                    rho = reconstruct_density(average_shadow(sample, q), mode)
                    ex, ez = pauli_expectations(rho)
                    assert table.values[i, q, 0] == ex
                    assert table.values[i, q, 1] == ez

    def test_paper_mode_bounded(self):
        ds = generate_synthetic(GenConfig(2, 6, 30, 0.2, seed=4))
        table = shadow_features(ds, MODE_PAPER)
        assert np.all(table.values >= -1.0) and np.all(table.values <= 1.0)

    def test_deterministic(self):
        ds = generate_synthetic(GenConfig(1, 4, 10, 0.0, seed=2))
        a = shadow_features(ds, MODE_PAPER)
        b = shadow_features(ds, MODE_PAPER)
        assert np.array_equal(a.values, b.values)
        assert a.sample_ids == b.sample_ids

    def test_csv_dump(self):
        ds = Dataset([sample_of([[0, 1]])], n_qubits=2, n_shots=1)
        text = expectations_csv(shadow_features(ds, MODE_PAPER))
        lines = text.strip().splitlines()
        assert lines[0] == "sample_id,qubit,ex,ez"
        assert len(lines) == 3
        assert lines[1].startswith("s,0,")


def enumerate_expected_shadow(rho: np.ndarray) -> np.ndarray:
    """Exact E[shadow op] under the 3-basis random-measurement distribution."""
    expected = np.zeros((2, 2), dtype=complex)
    for sym in OutcomeSymbol:
        ket = outcome_state(sym)
        born = float(np.real(np.conj(ket) @ rho @ ket))
        expected += (1.0 / 3.0) * born * shadow_operator(sym)
    return expected


class TestShadowInverseIdentity:
    def test_inverse_identity_on_random_densities(self):
        rng = np.random.default_rng(123)
        for _ in range(100):
            rho = random_density(rng)
            assert np.abs(enumerate_expected_shadow(rho) - rho).max() <= 1e-12

    def test_paper_mode_bias_is_bloch_shrink_by_three(self):
        rng = np.random.default_rng(321)
        eye = np.eye(2)
        for _ in range(100):
            rho = random_density(rng)
            expected_paper = (enumerate_expected_shadow(rho) + eye) / 3.0
            assert np.abs(expected_paper - (rho + eye) / 3.0).max() <= 1e-12


class TestStatisticalConsistency:
    def test_unbiased_z_estimate_concentrates(self):
        n_shots, n_qubits, seeds = 4000, 10, 12
        tol = 5 * np.sqrt(3 / n_shots)
        failures = 0
        for seed in range(seeds):
            ds = generate_synthetic(GenConfig(1, n_qubits, n_shots, 0.0, seed=seed))
            for sample in ds.samples:
                target = np.where(ideal_pattern(sample.label, n_qubits) == 1, -1.0, 1.0)
                table = shadow_features(
                    Dataset([sample], n_qubits, n_shots), MODE_UNBIASED
                )
                if np.any(np.abs(table.values[0, :, 1] - target) > tol):
                    failures += 1
        assert failures == 0
