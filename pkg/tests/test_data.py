import json

import numpy as np
import pytest

from shadowvqc.data import (
    BASIS_X,
    BASIS_Y,
    BASIS_Z,
    Dataset,
    GenConfig,
    OutcomeSymbol,
    Sample,
    generate_synthetic,
    ideal_pattern,
    parse_dataset,
    sample_pauli_measurement,
    write_dataset,
)
from shadowvqc.errors import ConfigError, DataError


class TestIdealPattern:
    def test_z2_period(self):
        assert ideal_pattern("Z2", 6).tolist() == [1, 0, 1, 0, 1, 0]

    def test_z3_period(self):
        assert ideal_pattern("Z3", 6).tolist() == [1, 0, 0, 1, 0, 0]

    def test_truncation(self):
        assert ideal_pattern("Z2", 1).tolist() == [1]
        assert ideal_pattern("Z3", 7).tolist() == [1, 0, 0, 1, 0, 0, 1]

    def test_unknown_phase(self):
        with pytest.raises(DataError):
            ideal_pattern("Z4", 4)

    def test_bad_count(self):
        with pytest.raises(ValueError):
            ideal_pattern("Z2", 0)


class TestPauliMeasurement:
    def test_eigenstate_in_own_basis_is_deterministic(self):
        rng = np.random.default_rng(0)
        g = np.array([1.0, 0.0])
        r = np.array([0.0, 1.0])
        for _ in range(50):
            assert sample_pauli_measurement(g, BASIS_Z, rng) is OutcomeSymbol.G
            assert sample_pauli_measurement(r, BASIS_Z, rng) is OutcomeSymbol.R

    def test_g_in_x_basis_is_balanced(self):
        rng = np.random.default_rng(1)
        n = 20000
        outcomes = [sample_pauli_measurement(np.array([1.0, 0.0]), BASIS_X, rng) for _ in range(n)]
        frac_plus = sum(o is OutcomeSymbol.PLUS for o in outcomes) / n
        # p = 1/2, five standard errors
        assert abs(frac_plus - 0.5) <= 5 * np.sqrt(0.25 / n)

    def test_plus_in_y_basis_is_balanced(self):
        # independent check of the Born weight: |<+i|+>|^2 computed directly
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        plus_i = np.array([1.0, 1.0j]) / np.sqrt(2)
        p = abs(np.vdot(plus_i, plus)) ** 2
        assert p == pytest.approx(0.5, abs=1e-15)
        rng = np.random.default_rng(2)
        n = 20000
        outcomes = [sample_pauli_measurement(plus, BASIS_Y, rng) for _ in range(n)]
        frac = sum(o is OutcomeSymbol.PLUS_I for o in outcomes) / n
        assert abs(frac - p) <= 5 * np.sqrt(p * (1 - p) / n)

    def test_outcome_basis_matches_request(self):
        rng = np.random.default_rng(3)
        state = np.array([0.6, 0.8])
        for basis in (BASIS_X, BASIS_Y, BASIS_Z):
            for _ in range(20):
                assert sample_pauli_measurement(state, basis, rng).basis == basis

    def test_rejects_unnormalized_state(self):
        with pytest.raises(ValueError, match="normalized"):
            sample_pauli_measurement(np.array([1.0, 1.0]), BASIS_Z, np.random.default_rng(0))


class TestGenerator:
    def test_shape_contract(self):
        ds = generate_synthetic(GenConfig(1, 4, 2, 0.0, seed=7))
        assert len(ds) == 2
        assert {s.label for s in ds.samples} == {"Z2", "Z3"}
        for s in ds.samples:
            assert s.shots.shape == (2, 4)

    def test_forced_z_basis_reads_pattern(self):
        ds = generate_synthetic(GenConfig(1, 4, 5, 0.0, seed=3), force_basis=BASIS_Z)
        z2 = next(s for s in ds.samples if s.label == "Z2")
        assert np.array_equal(z2.shots, np.tile([1, 0, 1, 0], (5, 1)))
        z3 = next(s for s in ds.samples if s.label == "Z3")
        assert np.array_equal(z3.shots, np.tile([1, 0, 0, 1], (5, 1)))

    def test_noiseless_z_occupation_is_exact(self):
        cfg = GenConfig(1, 9, 40, 0.0, seed=11)
        ds = generate_synthetic(cfg, force_basis=BASIS_Z)
        for s in ds.samples:
            pattern = ideal_pattern(s.label, 9)
            occupation = (s.shots == OutcomeSymbol.R).mean(axis=0)
            assert np.array_equal(occupation, pattern.astype(float))

    def test_basis_fractions_near_one_third(self):
        n_shots = 600
        ds = generate_synthetic(GenConfig(1, 8, n_shots, 0.0, seed=5))
        sample = ds.samples[0]
        z_mask = sample.shots <= 1  # g, r
        frac = z_mask.mean(axis=0)
        se = np.sqrt((1 / 3) * (2 / 3) / n_shots)
        assert np.all(np.abs(frac - 1 / 3) <= 5 * se)

    def test_determinism(self, tmp_path):
        cfg = GenConfig(2, 6, 10, 0.2, seed=42)
        a, b = generate_synthetic(cfg), generate_synthetic(cfg)
        assert a == b
        pa, pb = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_dataset(a, pa)
        write_dataset(b, pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_seed_changes_output(self):
        cfg = GenConfig(1, 6, 10, 0.2, seed=1)
        other = GenConfig(1, 6, 10, 0.2, seed=2)
        assert generate_synthetic(cfg) != generate_synthetic(other)

    def test_flip_noise_flips_everything_at_one(self):
        ds = generate_synthetic(GenConfig(1, 4, 5, 1.0, seed=0), force_basis=BASIS_Z)
        z2 = next(s for s in ds.samples if s.label == "Z2")
        assert np.array_equal(z2.shots, np.tile([0, 1, 0, 1], (5, 1)))

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            GenConfig(0, 4, 2, 0.0, 1)
        with pytest.raises(ConfigError):
            GenConfig(1, 4, 2, 1.5, 1)


class TestFileFormat:
    def test_round_trip(self, tmp_path):
        ds = generate_synthetic(GenConfig(3, 7, 11, 0.1, seed=9))
        path = tmp_path / "d.jsonl"
        write_dataset(ds, path)
        assert parse_dataset(path) == ds

    def test_round_trip_with_metadata(self, tmp_path):
        grid = np.array([[0, 1], [2, 5]], dtype=np.uint8)
        ds = Dataset(
            [
                Sample("a", "Z2", grid, detuning=1.25, blockade_radius=2.5),
                Sample("b", "Z3", grid),
            ],
            n_qubits=2,
            n_shots=2,
        )
        path = tmp_path / "m.jsonl"
        write_dataset(ds, path)
        parsed = parse_dataset(path)
        assert parsed == ds
        assert parsed.samples[0].detuning == 1.25
        assert parsed.samples[1].detuning is None

    def test_all_symbols_round_trip(self, tmp_path):
        grid = np.arange(6, dtype=np.uint8).reshape(1, 6)
        ds = Dataset([Sample("s", "Z2", grid)], n_qubits=6, n_shots=1)
        path = tmp_path / "s.jsonl"
        write_dataset(ds, path)
        line = json.loads(path.read_text().splitlines()[0])
        assert line["shots"] == ["gr+-ij"]
        assert parse_dataset(path) == ds

    def test_unknown_symbol_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"id":"a","label":"Z2","shots":["gr"]}\n'
            '{"id":"b","label":"Z3","shots":["gq"]}\n'
        )
        with pytest.raises(DataError, match=r"line 2.*'q'"):
            parse_dataset(path)

    def test_ragged_grid_names_line(self, tmp_path):
        path = tmp_path / "ragged.jsonl"
        path.write_text('{"id":"a","label":"Z2","shots":["gr","g"]}\n')
        with pytest.raises(DataError, match="line 1.*ragged"):
            parse_dataset(path)

    def test_mismatched_sample_shape(self, tmp_path):
        path = tmp_path / "shape.jsonl"
        path.write_text(
            '{"id":"a","label":"Z2","shots":["gr"]}\n'
            '{"id":"b","label":"Z3","shots":["grg"]}\n'
        )
        with pytest.raises(DataError, match="line 2"):
            parse_dataset(path)

    def test_duplicate_id_names_both_lines(self, tmp_path):
        path = tmp_path / "dup.jsonl"
        path.write_text(
            '{"id":"a","label":"Z2","shots":["gr"]}\n'
            '{"id":"a","label":"Z3","shots":["gr"]}\n'
        )
        with pytest.raises(DataError, match="line 2.*duplicate.*line 1"):
            parse_dataset(path)

    def test_malformed_json_names_line(self, tmp_path):
        path = tmp_path / "mal.jsonl"
        path.write_text('{"id":"a","label":"Z2","shots":["gr"]}\n{oops\n')
        with pytest.raises(DataError, match="line 2.*malformed"):
            parse_dataset(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with pytest.raises(DataError, match="no samples"):
            parse_dataset(path)

    def test_missing_field(self, tmp_path):
        path = tmp_path / "miss.jsonl"
        path.write_text('{"id":"a","shots":["gr"]}\n')
        with pytest.raises(DataError, match="line 1.*label"):
            parse_dataset(path)

    def test_bad_label(self, tmp_path):
        path = tmp_path / "lab.jsonl"
        path.write_text('{"id":"a","label":"Z9","shots":["gr"]}\n')
        with pytest.raises(DataError, match="line 1"):
            parse_dataset(path)


class TestModelValidation:
    def test_duplicate_ids_rejected(self):
        grid = np.zeros((1, 2), dtype=np.uint8)
        with pytest.raises(DataError, match="duplicate"):
            Dataset([Sample("x", "Z2", grid), Sample("x", "Z3", grid)], 2, 1)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DataError):
            Dataset([Sample("x", "Z2", np.zeros((1, 2), dtype=np.uint8))], 3, 1)

    def test_symbol_enum_basis_map(self):
        assert OutcomeSymbol.G.basis == BASIS_Z
        assert OutcomeSymbol.R.basis == BASIS_Z
        assert OutcomeSymbol.PLUS.basis == BASIS_X
        assert OutcomeSymbol.MINUS.basis == BASIS_X
        assert OutcomeSymbol.PLUS_I.basis == BASIS_Y
        assert OutcomeSymbol.MINUS_I.basis == BASIS_Y
