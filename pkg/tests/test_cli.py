import numpy as np

from wadebench import tasks
from wadebench.cli import main


class TestGen:
    def test_writes_dataset(self, tmp_path, capsys):
        out = tmp_path / "data.txt"
        code = main(["gen", "--task", "1", "--seed", "7", "--count", "20",
                     "--out", str(out)])
        assert code == 0
        dataset = tasks.load_dataset(out)
        assert len(dataset.samples) == 20
        assert dataset.spec.task_id == 1

    def test_identical_invocations_identical_files(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        main(["gen", "--task", "5", "--seed", "3", "--count", "10", "--out", str(a)])
        main(["gen", "--task", "5", "--seed", "3", "--count", "10", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_task_exits_nonzero(self, tmp_path, capsys):
        code = main(["gen", "--task", "11", "--seed", "0", "--count", "5",
                     "--out", str(tmp_path / "x.txt")])
        assert code != 0
        assert "error[config]" in capsys.readouterr().err


class TestWade:
    def test_perfect_curve_prints_one(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        path.write_text("step,accuracy\n1,1.0\n")
        assert main(["wade", "--curve", str(path)]) == 0
        assert capsys.readouterr().out.strip() == "1.0"

    def test_hand_derived_curve(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        path.write_text("step,accuracy\n1,0.2\n2,0.5\n3,0.5\n4,0.9\n")
        assert main(["wade", "--curve", str(path)]) == 0
        assert abs(float(capsys.readouterr().out.strip()) - 0.3) < 1e-12

    def test_malformed_csv_exits_nonzero(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        path.write_text("step,accuracy\n2,0.5\n1,0.9\n")
        assert main(["wade", "--curve", str(path)]) == 3
        assert "error[format]" in capsys.readouterr().err

    def test_custom_checkpoints(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        path.write_text("step,accuracy\n1,0.5\n")
        assert main(["wade", "--curve", str(path), "--checkpoints", "0.5"]) == 0
        assert capsys.readouterr().out.strip() == "1.0"


class TestRunAndReport:
    def test_run_plan_file_and_report(self, tmp_path, capsys):
        plan = tmp_path / "plan.txt"
        plan.write_text(
            "# desk-scale smoke plan\n"
            "tasks=1\n"
            "models=esn\n"
            "runs=1\n"
            "sequences=40\n"
            "base_seed=0\n")
        out = tmp_path / "results"
        code = main(["run", "--plan", str(plan), "--out", str(out)])
        assert code == 0
        assert (out / "records.jsonl").exists()
        capsys.readouterr()

        assert main(["report", "--records", str(out / "records.jsonl")]) == 0
        table = capsys.readouterr().out
        assert "esn" in table and "WADE" in table

    def test_flags_override_plan(self, tmp_path, capsys):
        plan = tmp_path / "plan.txt"
        plan.write_text("tasks=1\nmodels=esn\nruns=3\nsequences=40\n")
        out = tmp_path / "results"
        code = main(["run", "--plan", str(plan), "--runs", "2", "--out", str(out)])
        assert code == 0
        lines = (out / "records.jsonl").read_text().strip().splitlines()
        assert len(lines) == 2

    def test_reca_model_flag(self, tmp_path, capsys):
        out = tmp_path / "results"
        code = main(["run", "--task", "1", "--model", "reca-110", "--runs", "1",
                     "--count", "40", "--out", str(out)])
        assert code == 0
        assert "reca-110" in capsys.readouterr().out

    def test_missing_plan_file_is_io_error(self, tmp_path, capsys):
        code = main(["run", "--plan", str(tmp_path / "missing.txt")])
        assert code == 4
        assert "error[io]" in capsys.readouterr().err

    def test_unknown_model_is_config_error(self, tmp_path, capsys):
        code = main(["run", "--task", "1", "--model", "transformer",
                     "--out", str(tmp_path / "r")])
        assert code == 2
        assert "error[config]" in capsys.readouterr().err


class TestRunFlags:
    def test_bare_reca_requires_rule(self, tmp_path, capsys):
        code = main(["run", "--task", "1", "--model", "reca",
                     "--out", str(tmp_path / "r")])
        assert code == 2
        assert "rule" in capsys.readouterr().err

    def test_rule_flag_names_the_model(self, tmp_path, capsys):
        out = tmp_path / "r"
        code = main(["run", "--task", "1", "--model", "reca", "--rule", "90",
                     "--runs", "1", "--count", "40", "--out", str(out)])
        assert code == 0
        assert "reca-90" in capsys.readouterr().out

    def test_cadence_flag(self, tmp_path, capsys):
        out = tmp_path / "r"
        code = main(["run", "--task", "1", "--model", "esn", "--runs", "1",
                     "--count", "40", "--cadence", "2,10,5,20", "--out", str(out)])
        assert code == 0
        import json
        line = (out / "records.jsonl").read_text().splitlines()[0]
        assert json.loads(line)["config"]["cadence"] == [2, 10, 5, 20]

    def test_aggregate_csv_written(self, tmp_path):
        out = tmp_path / "r"
        main(["run", "--task", "1", "--model", "esn", "--runs", "1",
              "--count", "40", "--out", str(out)])
        text = (out / "aggregate.csv").read_text()
        assert text.startswith("task_id,model,runs,")
