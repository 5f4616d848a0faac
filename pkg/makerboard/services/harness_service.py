"""
Harness service.

This module turns a RunConfig into a playable instance and runs games and
experiments on it. Transcripts and experiment records are written one
JSON record per line.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, TextIO, Tuple, Union

from dotenv import dotenv_values
from pydantic import ValidationError

from makerboard.models.board import BoardSpec, Player, StarEdge, parse_edge
from makerboard.models.exceptions import ConfigError, MakerBoardError, TranscriptMismatch
from makerboard.models.game import (
    TRANSCRIPT_VERSION,
    ExperimentReport,
    Outcome,
    RunConfig,
    RunRecord,
    TranscriptEvent,
    TranscriptFooter,
    TranscriptHeader,
)
from makerboard.models.graph import BlockingDag, Leveling, TargetGraph
from makerboard.services.blocking_service import build_blocking_dag
from makerboard.services.board_service import board_summary, build_board_spec, block_parameter
from makerboard.services.breaker_service import BreakerPolicy, ScriptedBreaker, make_policy
from makerboard.services.graph_service import resolve_graph
from makerboard.services.leveling_service import level_greedy, level_lll, parse_leveling
from makerboard.services.maker_service import check_s_guarantee, run_game

logger = logging.getLogger(__name__)

TranscriptRecord = Union[TranscriptHeader, TranscriptEvent, TranscriptFooter]


class Instance(NamedTuple):
    """
    Everything a game is played on.
    """

    graph: TargetGraph
    leveling: Leveling
    dag: BlockingDag
    spec: BoardSpec


def resolve_s(mode: str, d: int) -> int:
    """
    Resolve the s mode of a configuration for degree d.

    "guarantee" is block_parameter(1) for d <= 1 and otherwise the smallest power of
    two passing check_s_guarantee.

    Args:
        mode: "formula", "guarantee" or a positive integer as text
        d: Degree of the target graph

    Returns:
        int: The block parameter

    Raises:
        ConfigError: For a malformed mode
    """
    if mode == "formula":
        return block_parameter(max(d, 1))
    if mode == "guarantee":
        if d <= 1:
            return block_parameter(1)
        s = 2
        while not check_s_guarantee(d, s):
            s *= 2
        return s
    if mode.isdigit() and int(mode) >= 1:
        return int(mode)
    raise ConfigError(f"Unknown s mode '{mode}'")


def build_leveling(g: TargetGraph, cfg: RunConfig) -> Leveling:
    """
    Level g from the leveling file when one is given, else with the chosen algorithm.

    Raises:
        ConfigError: If the leveling file cannot be read
        LevelingError: If the leveling file is malformed
    """
    if cfg.leveling_file is not None:
        try:
            text = Path(cfg.leveling_file).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"Cannot read leveling {cfg.leveling_file}: {exc}") from exc
        return parse_leveling(text, g.n)
    if cfg.leveling == "lll":
        return level_lll(g, cfg.leveling_seed)
    return level_greedy(g)


def build_instance(cfg: RunConfig) -> Instance:
    """
    Resolve graph, leveling, blocking graph and board of a configuration.

    Args:
        cfg: Run configuration

    Returns:
        Instance: The resolved instance

    Raises:
        ConfigError: If guarantee mode resolves to an s failing the check
    """
    g = resolve_graph(cfg.graph)
    l = build_leveling(g, cfg)
    dag = build_blocking_dag(g, l)
    s = resolve_s(cfg.s, g.d)
    if cfg.s == "guarantee" and not check_s_guarantee(max(g.d, 1), s):
        raise ConfigError(f"s = {s} does not pass the guarantee check for d = {g.d}")
    return Instance(g, l, dag, build_board_spec(g, l, dag, s))


def load_config(
    path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None
) -> RunConfig:
    """
    Read a flat key=value file and apply overrides on top.

    Args:
        path: Optional config file
        overrides: Values set on the command line; None values are ignored

    Returns:
        RunConfig: The validated configuration

    Raises:
        ConfigError: On unreadable files, unknown keys or invalid values
    """
    values: Dict[str, Any] = {}
    if path is not None:
        if not Path(path).is_file():
            raise ConfigError(f"Config file {path} does not exist")
        for key, value in dotenv_values(path).items():
            if value is not None:
                values[key.strip().lower()] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    unknown = sorted(set(values) - set(RunConfig.model_fields))
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(f"Invalid configuration: {problems}") from exc


def make_header(cfg: RunConfig, instance: Instance) -> TranscriptHeader:
    """
    Transcript header of a game on an instance.
    """
    summary = board_summary(instance.graph, instance.leveling, instance.spec)
    return TranscriptHeader(
        config=cfg,
        n=summary.n,
        d=summary.d,
        r=summary.r,
        s=summary.s,
        guarantee=check_s_guarantee(max(summary.d, 1), summary.s),
        block_sizes=list(summary.block_sizes),
        exact_edges=summary.exact_edges,
        edge_bound_log10=summary.edge_bound_log10,
    )


def play_lines(
    cfg: RunConfig,
    policy: Optional[BreakerPolicy] = None,
    sink: Optional[TextIO] = None,
) -> Tuple[Outcome, List[str]]:
    """
    Play one game and produce its transcript lines.

    Args:
        cfg: Run configuration
        policy: Breaker policy, built from cfg when omitted
        sink: Stream receiving every line as soon as it is produced

    Returns:
        Tuple[Outcome, List[str]]: The outcome and the transcript lines
    """
    instance = build_instance(cfg)
    policy = policy or make_policy(cfg.breaker, cfg.seed, cfg.script)
    lines: List[str] = []

    def emit(record: TranscriptRecord) -> None:
        line = record.model_dump_json()
        lines.append(line)
        if sink is not None:
            sink.write(line + "\n")

    emit(make_header(cfg, instance))
    outcome = run_game(
        instance.graph,
        instance.leveling,
        instance.dag,
        instance.spec,
        policy,
        round_cap=cfg.round_cap,
        maker_first=cfg.maker_first,
        recorder=emit,
    )
    emit(TranscriptFooter(outcome=outcome))
    return outcome, lines


def play(cfg: RunConfig, out: Optional[TextIO] = None) -> Outcome:
    """
    Play one game, writing the transcript to cfg.output or to out.

    Args:
        cfg: Run configuration
        out: Fallback stream when cfg.output is unset

    Returns:
        Outcome: The game outcome
    """
    if cfg.output is not None:
        with open(cfg.output, "w", encoding="utf-8") as handle:
            outcome, _ = play_lines(cfg, sink=handle)
    else:
        outcome, _ = play_lines(cfg, sink=out)
    return outcome


def parse_transcript(
    text: str,
) -> Tuple[TranscriptHeader, List[TranscriptEvent], TranscriptFooter]:
    """
    Parse transcript lines.

    Args:
        text: Transcript text

    Returns:
        Tuple: Header, events and footer

    Raises:
        ConfigError: On malformed records, a wrong version or missing parts
    """
    header: Optional[TranscriptHeader] = None
    footer: Optional[TranscriptFooter] = None
    events: List[TranscriptEvent] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            kind = json.loads(line).get("kind")
            if kind == "header":
                header = TranscriptHeader.model_validate_json(line)
            elif kind == "event":
                events.append(TranscriptEvent.model_validate_json(line))
            elif kind == "footer":
                footer = TranscriptFooter.model_validate_json(line)
            else:
                raise ConfigError(f"Line {line_number}: unknown record kind {kind!r}")
        except (ValueError, AttributeError) as exc:
            raise ConfigError(f"Line {line_number}: not a transcript record") from exc
    if header is None or footer is None:
        raise ConfigError("Transcript needs a header and a footer")
    if header.version != TRANSCRIPT_VERSION:
        raise ConfigError(f"Unsupported transcript version {header.version}")
    return header, events, footer


def breaker_script(events: Iterable[TranscriptEvent]) -> List[Optional[StarEdge]]:
    """
    Breaker moves of a transcript in order, None for passes.
    """
    return [
        parse_edge(event.edge) if event.edge is not None else None
        for event in events
        if event.player == Player.BREAKER
    ]


def verify(text: str) -> Outcome:
    """
    Replay a transcript and compare it line by line.

    The Breaker moves are replayed through a scripted Breaker; Maker,
    scheme verification and embedding extraction run again from scratch.

    Args:
        text: Recorded transcript

    Returns:
        Outcome: The replayed outcome

    Raises:
        TranscriptMismatch: At the first line that differs
    """
    header, events, _ = parse_transcript(text)
    recorded = [line for line in text.splitlines() if line.strip()]
    _, replayed = play_lines(header.config, ScriptedBreaker(breaker_script(events)))
    outcome = TranscriptFooter.model_validate_json(replayed[-1]).outcome
    for line_number in range(max(len(recorded), len(replayed))):
        expected = recorded[line_number] if line_number < len(recorded) else "<end>"
        actual = replayed[line_number] if line_number < len(replayed) else "<end>"
        if expected != actual:
            raise TranscriptMismatch(line_number + 1, expected, actual)
    logger.info("Transcript verified: %s lines", len(recorded))
    return outcome


def run_single(cfg: RunConfig, index: int) -> RunRecord:
    """
    One experiment run with seed cfg.seed + index; errors are recorded, not raised.

    Args:
        cfg: Experiment configuration
        index: Run index

    Returns:
        RunRecord: The run record
    """
    seed = cfg.seed + index
    run_cfg = cfg.model_copy(update={"seed": seed, "output": None})
    try:
        outcome, _ = play_lines(run_cfg)
    except MakerBoardError as exc:
        logger.warning("Run %s failed: %s", index, exc.detail)
        return RunRecord(index=index, seed=seed, error=exc.detail)
    return RunRecord(index=index, seed=seed, outcome=outcome)


def _run_task(task: Tuple[RunConfig, int]) -> RunRecord:
    return run_single(*task)


def aggregate(records: Iterable[RunRecord]) -> ExperimentReport:
    """
    Sum up run records.

    Args:
        records: Records of an experiment

    Returns:
        ExperimentReport: Aggregate counters
    """
    report = ExperimentReport()
    rounds: List[int] = []
    for record in records:
        report.runs += 1
        if record.outcome is None:
            report.errors += 1
            report.error_messages.append(f"run {record.index}: {record.error}")
            continue
        outcome = record.outcome
        if outcome.winner == Player.MAKER:
            report.wins += 1
        else:
            report.losses += 1
        rounds.append(outcome.rounds)
        report.max_round_cap = max(report.max_round_cap, outcome.round_cap)
        report.invariant_violations += outcome.invariant_violations
        report.attribution_violations += outcome.attribution_violations
        report.quota_violations += outcome.quota_violations
        report.length_violations += outcome.length_violations
    if rounds:
        report.mean_rounds = sum(rounds) / len(rounds)
        report.max_rounds = max(rounds)
    return report


def experiment(cfg: RunConfig, out: Optional[TextIO] = None) -> ExperimentReport:
    """
    Play cfg.repetitions seeded games and aggregate them.

    One RunRecord line per run goes to cfg.output (or out) in run order.

    Args:
        cfg: Experiment configuration
        out: Fallback stream when cfg.output is unset

    Returns:
        ExperimentReport: Aggregate counters

    Raises:
        ConfigError: For the interactive Breaker
    """
    if cfg.breaker == "interactive":
        raise ConfigError("Experiments cannot use the interactive Breaker")
    tasks = [(cfg, index) for index in range(cfg.repetitions)]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_task, tasks))
    else:
        records = [_run_task(task) for task in tasks]

    lines = "".join(record.model_dump_json() + "\n" for record in records)
    if cfg.output is not None:
        Path(cfg.output).write_text(lines, encoding="utf-8")
    elif out is not None:
        out.write(lines)

    report = aggregate(records)
    logger.info(
        "Experiment finished: %s runs, %s wins, %s errors",
        report.runs,
        report.wins,
        report.errors,
    )
    return report
