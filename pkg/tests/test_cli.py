"""
Command-line tests for makerboard.

These tests run the subcommands in-process and check their output and
exit codes: 0 on success, 1 for errors and failed checks, 2 when Maker
does not win.
"""

import io
import json
import sys

import pytest

from makerboard.main import cli, main


def run(*argv):
    """Run the CLI and return (exit code, output)."""
    out = io.StringIO()
    code = cli(list(argv), out)
    return code, out.getvalue()


class TestConstructionCommands:
    """
    Tests for label, dag and board.
    """

    def test_label(self):
        """
        Test the greedy leveling of the six-cycle.
        """
        code, output = run("label", "--graph", "c6")

        lines = output.splitlines()
        assert code == 0
        assert lines[:6] == ["0 1", "1 2", "2 3", "3 1", "4 2", "5 3"]
        assert lines[-1] == "# r=3 valid=True"

    def test_label_random(self):
        """
        Test that the random leveling reports its Local Lemma parameters.
        """
        code, output = run("label", "--graph", "c6", "--leveling", "lll", "--leveling-seed", "2")

        assert code == 0
        assert "# lll {" in output

    def test_dag(self):
        """
        Test the arcs and bounds of the six-cycle.
        """
        code, output = run("dag", "--graph", "c6")

        lines = output.splitlines()
        assert code == 0
        assert len(lines) == 9
        assert "2 4" in lines
        assert json.loads(lines[-1][2:])["passed"] is True

    def test_board(self):
        """
        Test the board summary at s = 4.
        """
        code, output = run("board", "--graph", "c6", "--s", "4")

        summary = json.loads(output)
        assert code == 0
        assert summary["block_sizes"] == [4, 36, 132, 4, 36, 132]
        assert summary["exact_edges"] == 10848

    def test_board_random_leveling_cubic(self):
        """
        Test that a wide random leveling on a cubic graph reports its bound magnitude.
        """
        code, output = run("board", "--graph", "petersen", "--leveling", "lll", "--s", "2")

        summary = json.loads(output)
        assert code == 0
        assert summary["within_bound"] is True
        assert summary["edge_bound_log10"] > 5000

    def test_leveling_file(self, tmp_path):
        """
        Test that the output of label feeds back in as a leveling file.
        """
        path = tmp_path / "c6.levels"
        _, labels = run("label", "--graph", "c6", "--leveling", "lll", "--leveling-seed", "2")
        path.write_text(labels)

        code, output = run("label", "--graph", "c6", "--leveling-file", str(path))

        assert code == 0
        assert output.splitlines()[:6] == labels.splitlines()[:6]
        assert "# lll" not in output

    def test_board_from_leveling_file(self, tmp_path):
        """
        Test the board of a leveling read from a file.
        """
        path = tmp_path / "c6.levels"
        path.write_text("0 1\n1 2\n2 3\n3 1\n4 2\n5 3\n")

        code, output = run("board", "--graph", "c6", "--leveling-file", str(path), "--s", "4")

        assert code == 0
        assert json.loads(output)["block_sizes"] == [4, 36, 132, 4, 36, 132]

    def test_invalid_leveling_file(self, tmp_path, capsys):
        """
        Test that an invalid or unreadable leveling file exits with 1.
        """
        path = tmp_path / "flat.levels"
        path.write_text("".join(f"{v} 1\n" for v in range(6)))

        code, _ = run("board", "--graph", "c6", "--leveling-file", str(path))
        missing, _ = run("board", "--graph", "c6", "--leveling-file", str(tmp_path / "none"))

        err = capsys.readouterr().err
        assert code == 1
        assert missing == 1
        assert "Same-level pairs" in err
        assert "Cannot read leveling" in err

    def test_dag_random_leveling_cubic(self):
        """
        Test that the descendant bound of a wide leveling is reported as a magnitude.
        """
        code, output = run("dag", "--graph", "petersen", "--leveling", "lll")

        report = json.loads(output.splitlines()[-1][2:])
        assert code == 0
        assert report["descendant_bound_log10"] > 5000


class TestGameCommands:
    """
    Tests for play, verify and experiment.
    """

    def test_play_maker_wins(self):
        """
        Test a won game on one edge.
        """
        code, output = run("play", "--graph", "k2", "--s", "8", "--seed", "3")

        footer = json.loads(output.splitlines()[-1])
        assert code == 0
        assert footer["outcome"]["winner"] == "maker"

    def test_play_round_cap(self):
        """
        Test that a capped game exits with 2.
        """
        code, _ = run("play", "--graph", "c6", "--s", "4", "--round-cap", "2")

        assert code == 2

    def test_play_random_leveling_cubic(self, tmp_path):
        """
        Test a game on the Petersen graph under the random leveling, then its replay.
        """
        path = tmp_path / "game.jsonl"
        code, _ = run(
            "play",
            "--graph",
            "petersen",
            "--leveling",
            "lll",
            "--s",
            "2",
            "--breaker",
            "scripted",
            "--output",
            str(path),
        )

        header = json.loads(path.read_text().splitlines()[0])
        assert code in (0, 2)
        assert header["kind"] == "header"
        assert header["edge_bound_log10"] > 5000
        assert run("verify", str(path))[0] == 0

    def test_experiment_random_leveling_cubic(self):
        """
        Test that experiment runs under the random leveling record no errors.
        """
        _, output = run(
            "experiment",
            "--graph",
            "petersen",
            "--leveling",
            "lll",
            "--s",
            "2",
            "--breaker",
            "scripted",
            "--repetitions",
            "2",
        )

        report = json.loads(output)
        assert report["runs"] == 2
        assert report["errors"] == 0

    def test_play_then_verify(self, tmp_path):
        """
        Test that a recorded game verifies.
        """
        path = tmp_path / "game.jsonl"
        play_code, output = run(
            "play", "--graph", "c6", "--s", "4", "--breaker", "scripted", "--output", str(path)
        )

        code, report = run("verify", str(path))

        assert play_code == 0
        assert output == ""
        assert code == 0
        assert report.startswith("verified: maker wins (scheme_complete) after 40 rounds")
        assert "5 -> v5#0" in report

    def test_verify_mismatch(self, tmp_path, capsys):
        """
        Test that a tampered transcript fails verification.
        """
        path = tmp_path / "game.jsonl"
        run("play", "--graph", "k2", "--s", "8", "--output", str(path))
        lines = path.read_text().splitlines()
        footer = json.loads(lines[-1])
        footer["outcome"]["maker_edges"] += 1
        lines[-1] = json.dumps(footer, separators=(",", ":"))
        path.write_text("\n".join(lines) + "\n")

        code, _ = run("verify", str(path))

        assert code == 1
        assert "diverges" in capsys.readouterr().err

    def test_verify_missing_file(self, tmp_path):
        """
        Test that an unreadable transcript is an error.
        """
        code, _ = run("verify", str(tmp_path / "missing.jsonl"))

        assert code == 1

    def test_experiment(self, tmp_path):
        """
        Test the experiment report and its run records.
        """
        path = tmp_path / "runs.jsonl"
        code, output = run(
            "experiment", "--graph", "k2", "--s", "8", "--repetitions", "2", "--output", str(path)
        )

        report = json.loads(output)
        assert code == 0
        assert report["runs"] == 2
        assert report["wins"] == 2
        assert len(path.read_text().splitlines()) == 2

    def test_empty_experiment(self):
        """
        Test that zero repetitions give an empty report.
        """
        code, output = run("experiment", "--graph", "k2", "--s", "8", "--repetitions", "0")

        assert code == 0
        assert json.loads(output)["runs"] == 0


class TestOracleCommand:
    """
    Tests for the differential suites.
    """

    def test_candidate_suite(self):
        """
        Test one JSON report for the candidate suite.
        """
        code, output = run("oracle", "--suite", "candidate", "--seeds", "2")

        report = json.loads(output)
        assert code == 0
        assert report["suite"] == "candidate"
        assert report["disagreements"] == 0


class TestErrorHandling:
    """
    Tests for error reporting and exit codes.
    """

    def test_invalid_graph(self, capsys):
        """
        Test that an invalid configuration exits with 1 and a message.
        """
        code, output = run("board", "--graph", "cube")

        assert code == 1
        assert output == ""
        assert "error: Invalid configuration" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        """
        Test that a missing config file is reported.
        """
        code, _ = run("play", "--config", str(tmp_path / "run.env"))

        assert code == 1
        assert "does not exist" in capsys.readouterr().err

    def test_config_file(self, tmp_path):
        """
        Test that a config file selects the instance.
        """
        path = tmp_path / "run.env"
        path.write_text("GRAPH=k2\nS=8\n")

        code, output = run("board", "--config", str(path))

        assert code == 0
        assert json.loads(output)["block_sizes"] == [8, 72]

    def test_log_level(self):
        """
        Test that the log level option is accepted before the command.
        """
        code, _ = run("--log-level", "DEBUG", "board", "--graph", "k2", "--s", "2")

        assert code == 0

    def test_missing_command(self):
        """
        Test that argparse rejects a missing subcommand.
        """
        with pytest.raises(SystemExit):
            cli([], io.StringIO())

    def test_main_exits_with_code(self, monkeypatch, capsys):
        """
        Test that the console entry point exits with the command's code.
        """
        monkeypatch.setattr(sys, "argv", ["makerboard", "board", "--graph", "k2", "--s", "2"])

        with pytest.raises(SystemExit) as exc_info:
            main()

        assert exc_info.value.code == 0
        assert json.loads(capsys.readouterr().out)["block_sizes"] == [2, 6]
