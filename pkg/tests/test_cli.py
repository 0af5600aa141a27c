import csv
import io

import numpy as np
import pytest

from sigcount import (
    ESTIMATORS,
    SampleSpectrum,
    ScenarioSpec,
    SeedPolicy,
    SnapshotMatrix,
    generate_snapshots,
    hermitian_eigenvalues,
    sample_covariance,
    validate_spectrum,
)
from sigcount.cli import (
    DEFAULT_SEED,
    InputFormatError,
    load_input_file,
    main,
    write_eigenvalue_file,
    write_snapshot_file,
)


def make_spectrum(seed=7, n=16, m=64, beta=1, signals=(10.0, 3.0)):
    spec = ScenarioSpec(tuple(signals), 1.0, n, m, beta=beta)
    snaps = generate_snapshots(spec, SeedPolicy(seed))
    eigs = hermitian_eigenvalues(sample_covariance(snaps))
    return snaps, validate_spectrum(eigs, n, m, beta)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestFileFormats:
    def test_eigenvalue_file_round_trip(self, tmp_path):
        _, spectrum = make_spectrum()
        path = str(tmp_path / "eigs.txt")
        write_eigenvalue_file(path, spectrum)
        loaded = load_input_file(path)
        assert isinstance(loaded, SampleSpectrum)
        np.testing.assert_array_equal(loaded.eigenvalues, spectrum.eigenvalues)
        assert (loaded.n, loaded.m, loaded.beta) == (16, 64, 1)

    @pytest.mark.parametrize("beta", [1, 2])
    def test_snapshot_file_round_trip(self, tmp_path, beta):
        snaps, _ = make_spectrum(beta=beta)
        path = str(tmp_path / "snaps.txt")
        write_snapshot_file(path, snaps)
        loaded = load_input_file(path)
        assert isinstance(loaded, SnapshotMatrix)
        np.testing.assert_array_equal(loaded.data, snaps.data)

    def test_eigenvalues_accepted_in_any_order(self, tmp_path):
        path = tmp_path / "eigs.txt"
        path.write_text("eigenvalues,n=3,m=10,beta=1\n1.0\n3.0\n2.0\n")
        loaded = load_input_file(str(path))
        np.testing.assert_array_equal(loaded.eigenvalues, [3.0, 2.0, 1.0])

    def test_header_fields_accepted_in_any_order(self, tmp_path):
        path = tmp_path / "eigs.txt"
        path.write_text("eigenvalues,beta=1,m=10,n=2\n1.0\n2.0\n")
        loaded = load_input_file(str(path))
        assert (loaded.n, loaded.m) == (2, 10)

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "eigs.txt"
        path.write_text("eigenvalues,n=2,m=10,beta=1\n\n2.0\n\n1.0\n\n")
        loaded = load_input_file(str(path))
        np.testing.assert_array_equal(loaded.eigenvalues, [2.0, 1.0])

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        with pytest.raises(InputFormatError, match="line 1"):
            load_input_file(str(path))

    def test_unknown_header_kind(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("spectra,n=2,m=10,beta=1\n1.0\n2.0\n")
        with pytest.raises(InputFormatError, match="line 1"):
            load_input_file(str(path))

    def test_missing_header_field(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("eigenvalues,n=2,m=10\n1.0\n2.0\n")
        with pytest.raises(InputFormatError, match="beta"):
            load_input_file(str(path))

    def test_non_integer_header_field(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("eigenvalues,n=two,m=10,beta=1\n1.0\n2.0\n")
        with pytest.raises(InputFormatError, match="line 1"):
            load_input_file(str(path))

    def test_bad_value_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("eigenvalues,n=3,m=10,beta=1\n1.0\nbogus\n2.0\n")
        with pytest.raises(InputFormatError, match="line 3"):
            load_input_file(str(path))

    def test_wrong_eigenvalue_count(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("eigenvalues,n=3,m=10,beta=1\n1.0\n2.0\n")
        with pytest.raises(InputFormatError, match="expected 3"):
            load_input_file(str(path))

    def test_wrong_snapshot_row_width(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("snapshots,n=2,m=3,beta=1\n1.0,2.0,3.0\n1.0,2.0\n")
        with pytest.raises(InputFormatError, match="line 3"):
            load_input_file(str(path))

    def test_complex_snapshot_interleaving(self, tmp_path):
        # beta=2 rows hold m (re, im) pairs.
        path = tmp_path / "snaps.txt"
        path.write_text("snapshots,n=1,m=2,beta=2\n1.0,2.0,3.0,-4.0\n")
        loaded = load_input_file(str(path))
        np.testing.assert_array_equal(loaded.data, [[1.0 + 2.0j, 3.0 - 4.0j]])


class TestEstimateCommand:
    def test_runs_all_estimators_by_default(self, capsys, tmp_path):
        _, spectrum = make_spectrum()
        path = str(tmp_path / "eigs.txt")
        write_eigenvalue_file(path, spectrum)
        code, out, _ = run_cli(capsys, "estimate", path)
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["estimator_id", "k_hat"]
        assert [r[0] for r in rows] == ["NEW_RMT_AIC", "WK_AIC", "WK_MDL"]

    def test_matches_in_process_results(self, capsys, tmp_path):
        snaps, spectrum = make_spectrum(seed=21)
        path = str(tmp_path / "snaps.txt")
        write_snapshot_file(path, snaps)
        code, out, _ = run_cli(capsys, "estimate", path)
        assert code == 0
        _, rows = parse_csv(out)
        want = {str(est): fn(spectrum).k_hat for est, fn in ESTIMATORS.items()}
        assert {r[0]: int(r[1]) for r in rows} == want

    def test_estimator_subset(self, capsys, tmp_path):
        _, spectrum = make_spectrum()
        path = str(tmp_path / "eigs.txt")
        write_eigenvalue_file(path, spectrum)
        code, out, _ = run_cli(capsys, "estimate", path, "--estimators", "mdl")
        _, rows = parse_csv(out)
        assert code == 0
        assert len(rows) == 1
        assert rows[0][0] == "WK_MDL"

    def test_verbose_appends_criterion_columns(self, capsys, tmp_path):
        _, spectrum = make_spectrum(n=6, m=12)
        path = str(tmp_path / "eigs.txt")
        write_eigenvalue_file(path, spectrum)
        code, out, _ = run_cli(capsys, "estimate", path, "--verbose")
        header, rows = parse_csv(out)
        assert code == 0
        assert header == ["estimator_id", "k_hat"] + [f"crit_k{k}" for k in range(6)]
        for row in rows:
            values = [float(v) for v in row[2:]]
            best = int(row[1])
            assert values[best] == min(values)

    def test_output_flag_writes_file(self, capsys, tmp_path):
        _, spectrum = make_spectrum()
        src = str(tmp_path / "eigs.txt")
        dst = tmp_path / "out.csv"
        write_eigenvalue_file(src, spectrum)
        code, out, _ = run_cli(capsys, "estimate", src, "--output", str(dst))
        assert code == 0
        assert out == ""
        assert dst.read_text().startswith("estimator_id,k_hat")

    def test_missing_file_is_exit_2(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "estimate", str(tmp_path / "nope.txt"))
        assert code == 2
        assert "error" in err

    def test_malformed_file_is_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("eigenvalues,n=2,m=10,beta=1\n1.0\nnope\n")
        code, _, err = run_cli(capsys, "estimate", str(path))
        assert code == 2
        assert "line 3" in err

    def test_negative_eigenvalue_is_exit_3(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("eigenvalues,n=2,m=10,beta=1\n1.0\n-5.0\n")
        code, _, err = run_cli(capsys, "estimate", str(path))
        assert code == 3
        assert "error" in err

    def test_unsupported_beta_is_exit_3(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("eigenvalues,n=2,m=10,beta=3\n1.0\n2.0\n")
        code, _, _ = run_cli(capsys, "estimate", str(path))
        assert code == 3

    def test_unknown_estimator_is_exit_3(self, capsys, tmp_path):
        _, spectrum = make_spectrum()
        path = str(tmp_path / "eigs.txt")
        write_eigenvalue_file(path, spectrum)
        code, _, err = run_cli(capsys, "estimate", path, "--estimators", "wavelet")
        assert code == 3
        assert "wavelet" in err


class TestSimulateCommand:
    def test_csv_schema_and_distribution(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--signals", "10", "--grid", "8:32",
            "--trials", "25", "--seed", "3",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["n", "m", "estimator", "k", "probability", "stderr"]
        assert len(rows) == 3 * 8  # three estimators, k in [0, min(8, 32))
        by_est = {}
        for n, m, est, k, p, se in rows:
            assert (n, m) == ("8", "32")
            by_est.setdefault(est, []).append(float(p))
            assert 0.0 <= float(se) <= 0.5
        for probs in by_est.values():
            assert abs(sum(probs) - 1.0) < 1e-12

    def test_reruns_are_byte_identical(self, capsys, tmp_path):
        args = [
            "simulate", "--signals", "10,3", "--grid", "12:48,10:5",
            "--trials", "20", "--seed", "11",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(capsys, *args, "--output", str(a))[0] == 0
        assert run_cli(capsys, *args, "--output", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_worker_count_invariance(self, capsys, tmp_path):
        args = [
            "simulate", "--signals", "8", "--grid", "10:40,8:4",
            "--trials", "15", "--seed", "2",
        ]
        a, b = tmp_path / "w1.csv", tmp_path / "w2.csv"
        assert run_cli(capsys, *args, "--workers", "1", "--output", str(a))[0] == 0
        assert run_cli(capsys, *args, "--workers", "2", "--output", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_default_seed_is_fixed(self, capsys):
        args = ["simulate", "--signals", "6", "--grid", "6:24", "--trials", "10"]
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_bad_grid_is_exit_3(self, capsys):
        code, _, err = run_cli(
            capsys, "simulate", "--signals", "10", "--grid", "64x256", "--trials", "5"
        )
        assert code == 3
        assert "error" in err

    def test_empty_grid_is_exit_3(self, capsys):
        code, _, _ = run_cli(
            capsys, "simulate", "--signals", "10", "--grid", ",", "--trials", "5"
        )
        assert code == 3

    def test_signal_below_noise_is_exit_3(self, capsys):
        code, _, _ = run_cli(
            capsys, "simulate", "--signals", "0.5", "--grid", "8:32", "--trials", "5"
        )
        assert code == 3

    def test_nonpositive_trials_is_exit_3(self, capsys):
        code, _, _ = run_cli(
            capsys, "simulate", "--signals", "10", "--grid", "8:32", "--trials", "0"
        )
        assert code == 3


class TestKeffCommand:
    def test_oversampled(self, capsys):
        code, out, _ = run_cli(
            capsys, "keff", "--signals", "10,3", "--n", "64", "--m", "256"
        )
        assert code == 0
        assert out.strip() == "threshold=1.5, k_eff=2"

    def test_undersampled(self, capsys):
        code, out, _ = run_cli(
            capsys, "keff", "--signals", "10,3", "--n", "64", "--m", "16"
        )
        assert code == 0
        assert out.strip() == "threshold=3, k_eff=1"

    def test_invalid_scenario_is_exit_3(self, capsys):
        code, _, _ = run_cli(
            capsys, "keff", "--signals", "0.5", "--n", "64", "--m", "16"
        )
        assert code == 3


class TestLimitsCommand:
    def test_values_and_flags(self, capsys):
        code, out, _ = run_cli(capsys, "limits", "--signals", "10,3", "--c", "4")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["lambda", "limit", "above_threshold", "bulk_edge"]
        assert [r[0] for r in rows] == ["10.0", "3.0"]
        np.testing.assert_allclose(float(rows[0][1]), 130.0 / 9.0)
        assert rows[0][2] == "true"
        assert float(rows[1][1]) == 9.0
        assert rows[1][2] == "false"
        assert all(float(r[3]) == 9.0 for r in rows)

    def test_n_m_equivalent_to_c(self, capsys):
        _, via_c, _ = run_cli(capsys, "limits", "--signals", "10", "--c", "0.25")
        _, via_nm, _ = run_cli(capsys, "limits", "--signals", "10", "--n", "64", "--m", "256")
        assert via_c == via_nm

    def test_missing_shape_is_exit_3(self, capsys):
        code, _, err = run_cli(capsys, "limits", "--signals", "10")
        assert code == 3
        assert "--c" in err

    def test_signal_below_noise_floor_is_exit_3(self, capsys):
        code, _, _ = run_cli(capsys, "limits", "--signals", "0.5", "--c", "1")
        assert code == 3


class TestCltCheckCommand:
    def test_too_few_trials_is_exit_3(self, capsys):
        code, _, err = run_cli(capsys, "clt-check", "--trials", "100")
        assert code == 3
        assert "1000" in err

    def test_small_run_passes(self, capsys):
        code, out, _ = run_cli(
            capsys, "clt-check", "--n", "50", "--m", "100",
            "--trials", "1000", "--seed", "3",
        )
        assert code == 0
        assert out.strip().endswith("PASS")

    def test_invalid_beta_rejected_by_parser(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["clt-check", "--beta", "4"])
        assert excinfo.value.code == 2


def test_missing_subcommand_is_parser_error():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2
