import json
import subprocess
import sys

import numpy as np
import pytest

from ttabma import load_csv, run_aggregate, run_simulation, save_csv, to_json
from ttabma.cli import main
from ttabma.errors import SplitError
from ttabma.logreg import DesignMatrix, fit_logistic
from ttabma.report import split_rows
from ttabma.rng import derive_seeds

from conftest import make_table
from oracles import sweep_oracle


def write_fixture_csv(tmp_path, table, name="table.csv"):
    path = tmp_path / name
    save_csv(table, path)
    return path


class TestRunAggregate:
    def test_transductive_matches_sweep_oracle(self, seed42_table):
        report = run_aggregate(seed42_table, protocol="transductive")
        oracle = sweep_oracle(seed42_table)
        assert report["inclusion_prob"] == pytest.approx(
            oracle["inclusion_prob"], abs=1e-9
        )
        assert report["expected_coeffs"] == pytest.approx(
            oracle["expected_coeffs"], abs=1e-9
        )
        assert report["log_l_total"] == pytest.approx(
            oracle["log_l_total"], abs=1e-9
        )
        assert report["n_fit_rows"] == report["n_eval_rows"] == 200

    def test_single_column_equals_plain_logistic_accuracy(self):
        table = make_table(5, n_rows=60, n_columns=1)
        report = run_aggregate(table, protocol="transductive")
        fitted = fit_logistic(DesignMatrix(table.predictions, table.labels))
        labels = (fitted.predict_proba(table.predictions) >= 0.5).astype(int)
        plain_accuracy = float((labels == table.labels).mean())
        assert report["methods"]["bma"]["accuracy"] == plain_accuracy

    def test_split_protocol_disjoint_and_seeded(self, seed42_table):
        report = run_aggregate(seed42_table, seed=3)
        assert report["n_fit_rows"] == 100
        assert report["n_eval_rows"] == 100
        again = run_aggregate(seed42_table, seed=3)
        assert to_json(report) == to_json(again)
        other = run_aggregate(seed42_table, seed=4)
        assert to_json(other) != to_json(report)

    def test_split_rows_partition(self):
        fit_idx, eval_idx = split_rows(11, 0.5, 1)
        assert sorted(fit_idx + eval_idx) == list(range(11))
        assert len(fit_idx) == 6  # round(0.5 * 11)

    @pytest.mark.parametrize("fraction", [1.0, 0.0, 1.5])
    def test_degenerate_split_fraction_rejected(self, seed42_table, fraction):
        with pytest.raises(SplitError):
            run_aggregate(seed42_table, split_fraction=fraction)

    def test_report_weights_sum_to_one(self, seed42_table):
        report = run_aggregate(seed42_table, mode="full", protocol="transductive")
        total = sum(m["posterior_weight"] for m in report["accepted_models"])
        assert total == pytest.approx(1.0, abs=1e-9)


class TestRunSimulation:
    def test_single_trial_reduces_to_aggregate(self):
        sim = run_simulation(trials=1, n_rows=80, n_columns=3, seed=5)
        trial_seed = derive_seeds(5, 1)[0]
        gen_seed, _ = derive_seeds(trial_seed, 2)
        table = make_table(gen_seed, n_rows=80, n_columns=3)
        agg = run_aggregate(table, protocol="transductive")
        assert sim["per_trial"]["bma_accuracy"][0] == agg["methods"]["bma"]["accuracy"]
        assert sim["per_trial"]["mean_accuracy"][0] == agg["methods"]["mean"]["accuracy"]
        assert sim["bma_accuracy"]["std"] == 0.0

    def test_zero_noise_methods_agree_per_trial(self):
        sim = run_simulation(trials=6, n_rows=200, n_columns=4, signal_noise=0.0, seed=3)
        for bma_acc, mean_acc in zip(
            sim["per_trial"]["bma_accuracy"], sim["per_trial"]["mean_accuracy"]
        ):
            assert abs(bma_acc - mean_acc) <= 1e-12

    def test_adversarial_bookkeeping_absent_without_adversarial_columns(self):
        sim = run_simulation(trials=2, n_rows=40, n_columns=2, seed=1)
        assert sim["adversarial_lowest_trials"] is None

    def test_deterministic_json(self):
        a = run_simulation(trials=3, n_rows=50, n_columns=3, seed=9)
        b = run_simulation(trials=3, n_rows=50, n_columns=3, seed=9)
        assert to_json(a) == to_json(b)


class TestCli:
    def test_aggregate_success_and_json(self, tmp_path, capsys, seed42_table):
        path = write_fixture_csv(tmp_path, seed42_table)
        json_path = tmp_path / "report.json"
        code = main(
            [
                "aggregate",
                "--input",
                str(path),
                "--protocol",
                "transductive",
                "--json",
                str(json_path),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "accuracy=" in out
        report = json.loads(json_path.read_text())
        assert report["schema_version"] == 1
        oracle = sweep_oracle(seed42_table)
        assert report["inclusion_prob"] == pytest.approx(
            oracle["inclusion_prob"], abs=1e-9
        )

    def test_json_report_byte_stable(self, tmp_path, seed42_table):
        path = write_fixture_csv(tmp_path, seed42_table)
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        assert main(["aggregate", "--input", str(path), "--json", str(first)]) == 0
        assert main(["aggregate", "--input", str(path), "--json", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_missing_file_exits_2(self, tmp_path, capsys):
        code = main(["aggregate", "--input", str(tmp_path / "nope.csv")])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_empty_body_exits_2(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("label,pred_0\n")
        assert main(["aggregate", "--input", str(path)]) == 2
        assert "no data rows" in capsys.readouterr().err

    def test_located_error_message(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("label,pred_0\n1,0.4\n0,1.5\n")
        assert main(["aggregate", "--input", str(path)]) == 2
        assert "line 3" in capsys.readouterr().err

    def test_single_class_exits_3(self, tmp_path, capsys):
        path = tmp_path / "one_class.csv"
        path.write_text("label,pred_0\n1,0.9\n1,0.8\n1,0.7\n1,0.6\n")
        assert main(["aggregate", "--input", str(path), "--protocol", "transductive"]) == 3

    def test_full_split_fraction_exits_2(self, tmp_path, seed42_table, capsys):
        path = write_fixture_csv(tmp_path, seed42_table)
        code = main(
            ["aggregate", "--input", str(path), "--split-fraction", "1.0"]
        )
        assert code == 2
        assert "evaluation set" in capsys.readouterr().err

    def test_simulate_smoke(self, capsys):
        code = main(
            [
                "simulate",
                "--trials",
                "2",
                "--rows",
                "40",
                "--columns",
                "3",
                "--adversarial",
                "2",
                "--seed",
                "11",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "bma  accuracy:" in out
        assert "lowest inclusion" in out

    def test_simulate_bad_adversarial_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["simulate", "--adversarial", "x,y"])
        assert info.value.code == 2

    def test_simulate_out_of_range_adversarial_exits_2(self, capsys):
        assert main(["simulate", "--trials", "1", "--columns", "2",
                     "--adversarial", "5"]) == 2

    def test_module_entry_point(self, tmp_path, seed42_table):
        path = write_fixture_csv(tmp_path, seed42_table)
        result = subprocess.run(
            [sys.executable, "-m", "ttabma", "aggregate", "--input", str(path)],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "accuracy=" in result.stdout

    def test_round_trip_through_cli_fixture(self, tmp_path, seed42_table):
        path = write_fixture_csv(tmp_path, seed42_table)
        loaded = load_csv(path)
        assert np.array_equal(loaded.predictions, seed42_table.predictions)
