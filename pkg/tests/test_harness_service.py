"""
Tests for configuration, transcripts and experiments.
"""

import io
import json

import pytest

from makerboard.models.board import Player
from makerboard.models.exceptions import ConfigError, TranscriptMismatch
from makerboard.models.game import RunConfig, RunRecord
from makerboard.services.harness_service import (
    aggregate,
    breaker_script,
    build_instance,
    experiment,
    load_config,
    parse_transcript,
    play,
    play_lines,
    resolve_s,
    run_single,
    verify,
)

# Breaker always passes: Maker wins the six-cycle at s = 4 in 40 rounds.
PASSING_C6 = RunConfig(graph="c6", s="4", breaker="scripted")


class TestConfig:
    """
    Unit tests for the configuration layer.
    """

    def test_defaults(self):
        """
        Test the default configuration.
        """
        cfg = load_config()

        assert cfg.graph == "c6"
        assert cfg.s == "guarantee"
        assert cfg.breaker == "random"
        assert cfg.workers == 1

    def test_file_and_overrides(self, tmp_path):
        """
        Test that command-line values win over the file.
        """
        path = tmp_path / "run.env"
        path.write_text("GRAPH=k2\nS=32\nBREAKER=scatter\n")

        cfg = load_config(str(path), {"s": "8", "seed": None})

        assert cfg.graph == "k2"
        assert cfg.s == "8"
        assert cfg.breaker == "scatter"
        assert cfg.seed == 0

    def test_unknown_key(self, tmp_path):
        """
        Test that unknown keys are rejected.
        """
        path = tmp_path / "run.env"
        path.write_text("COLOR=red\n")

        with pytest.raises(ConfigError) as exc_info:
            load_config(str(path))
        assert "color" in exc_info.value.detail

    def test_invalid_values(self, tmp_path):
        """
        Test that validation errors become configuration errors.
        """
        with pytest.raises(ConfigError):
            load_config(None, {"breaker": "clever"})
        with pytest.raises(ConfigError):
            load_config(None, {"graph": "cube"})
        with pytest.raises(ConfigError):
            load_config(None, {"s": "0"})
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "missing.env"))

    @pytest.mark.parametrize(
        "mode, d, expected",
        [
            ("guarantee", 0, 32),
            ("guarantee", 1, 32),
            ("guarantee", 2, 128),
            ("guarantee", 3, 4096),
            ("formula", 2, 2048),
            ("7", 3, 7),
        ],
    )
    def test_resolve_s(self, mode, d, expected):
        """
        Test the s modes.
        """
        assert resolve_s(mode, d) == expected

    def test_build_instance(self):
        """
        Test that the guarantee mode sizes the six-cycle board with s = 128.
        """
        instance = build_instance(RunConfig(graph="c6"))

        assert instance.spec.s == 128
        assert instance.leveling.levels == (1, 2, 3, 1, 2, 3)


class TestTranscripts:
    """
    Tests for transcript writing, parsing and verification.
    """

    def setup_method(self):
        """
        Play the passing six-cycle game once.
        """
        self.outcome, self.lines = play_lines(PASSING_C6)
        self.text = "\n".join(self.lines) + "\n"

    def test_transcript_shape(self):
        """
        Test header, one event per move and footer.
        """
        assert len(self.lines) == 82
        assert json.loads(self.lines[0])["kind"] == "header"
        assert json.loads(self.lines[-1])["kind"] == "footer"
        assert self.outcome.winner == Player.MAKER

    def test_parse_transcript(self):
        """
        Test that parsing recovers the configuration and the Breaker moves.
        """
        header, events, footer = parse_transcript(self.text)

        assert header.config == PASSING_C6
        assert header.block_sizes == [4, 36, 132, 4, 36, 132]
        assert header.exact_edges == 10848
        assert len(events) == 80
        assert breaker_script(events) == [None] * 40
        assert footer.outcome.rounds == 40

    def test_verify_matches(self):
        """
        Test that a faithful transcript replays exactly.
        """
        outcome = verify(self.text)

        assert outcome == self.outcome

    def test_verify_detects_tampering(self):
        """
        Test that an edited footer is reported with its line number.
        """
        tampered = self.text.replace('"rounds":40', '"rounds":41')

        with pytest.raises(TranscriptMismatch) as exc_info:
            verify(tampered)
        assert exc_info.value.line_number == 82
        assert "diverges at line 82" in exc_info.value.detail

    def test_malformed_transcripts(self):
        """
        Test parse errors.
        """
        with pytest.raises(ConfigError):
            parse_transcript("")
        with pytest.raises(ConfigError):
            parse_transcript("not json\n")
        with pytest.raises(ConfigError):
            parse_transcript('{"kind": "other"}\n')
        with pytest.raises(ConfigError):
            parse_transcript(self.text.replace('"version":1', '"version":2', 1))

    def test_play_to_file(self, tmp_path):
        """
        Test that play writes the transcript to the configured output.
        """
        path = tmp_path / "game.jsonl"
        cfg = PASSING_C6.model_copy(update={"output": str(path)})

        outcome = play(cfg)

        assert outcome.rounds == 40
        assert len(path.read_text().splitlines()) == 82

    def test_play_to_stream(self):
        """
        Test that play falls back to the given stream.
        """
        out = io.StringIO()

        play(PASSING_C6, out)

        assert out.getvalue() == self.text


class TestExperiment:
    """
    Tests for seeded experiments.
    """

    def test_sequential_experiment(self):
        """
        Test records and aggregates of a small experiment.
        """
        out = io.StringIO()
        cfg = RunConfig(graph="k2", s="8", repetitions=3, seed=10)

        report = experiment(cfg, out)

        records = [RunRecord.model_validate_json(line) for line in out.getvalue().splitlines()]
        assert [record.seed for record in records] == [10, 11, 12]
        assert report.runs == 3
        assert report.wins == 3
        assert report.losses == 0
        assert report.mean_rounds > 0

    @pytest.mark.integration
    def test_parallel_experiment(self, tmp_path):
        """
        Test that worker processes give the same records as a sequential run.
        """
        path = tmp_path / "runs.jsonl"
        cfg = RunConfig(graph="k2", s="8", repetitions=4, workers=2, output=str(path))

        report = experiment(cfg)

        sequential = io.StringIO()
        experiment(cfg.model_copy(update={"workers": 1, "output": None}), sequential)
        assert path.read_text() == sequential.getvalue()
        assert report.wins == 4

    def test_failed_run_is_recorded(self, tmp_path):
        """
        Test that a failing run becomes an error record.
        """
        cfg = RunConfig(graph="k2", s="8", breaker="scripted", script=str(tmp_path / "none"))

        record = run_single(cfg, 0)
        report = aggregate([record])

        assert record.outcome is None
        assert "Cannot read script" in record.error
        assert report.errors == 1
        assert report.runs == 1

    def test_aggregate_sums_audits(self):
        """
        Test that audit counters of every run add up in the report.
        """
        record = run_single(PASSING_C6, 0)
        overrun = record.model_copy(
            update={"outcome": record.outcome.model_copy(update={"length_violations": 2})}
        )

        report = aggregate([record, overrun])

        assert record.outcome.length_violations == 0
        assert report.runs == 2
        assert report.wins == 2
        assert report.length_violations == 2
        assert report.invariant_violations == 0

    def test_interactive_rejected(self):
        """
        Test that experiments refuse the interactive Breaker.
        """
        with pytest.raises(ConfigError):
            experiment(RunConfig(breaker="interactive"))
