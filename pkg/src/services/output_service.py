"""
Per-replicate records and summary tables as CSV or JSON.
Column order is fixed; empty cells mean "not applicable" (beta for relay)
or "censored" (rounds, lower_bound).
"""
import csv
import json
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence, TextIO

from services.montecarlo import ExperimentConfig, SummaryStats
from services.protocols import TrialResult

RECORD_COLUMNS = ("algorithm", "n", "p", "alpha", "beta", "replicate", "seed", "rounds", "completed", "lower_bound")
SUMMARY_COLUMNS = ("algorithm", "n", "p", "alpha", "beta", "count", "censored", "min", "q1", "median", "q3", "max", "mean")


@dataclass(frozen=True)
class OutputRecord:
    algorithm: str
    n: int
    p: float
    alpha: float
    beta: Optional[float]
    replicate: int
    seed: int
    rounds: Optional[int]
    completed: int
    lower_bound: Optional[int]

    @classmethod
    def from_trial(cls, cfg: ExperimentConfig, replicate: int, trial: TrialResult) -> "OutputRecord":
        return cls(
            algorithm=cfg.algorithm.value,
            n=cfg.n,
            p=cfg.p,
            alpha=cfg.alpha,
            beta=cfg.beta,
            replicate=replicate,
            seed=trial.seed,
            rounds=trial.rounds_to_allcast,
            completed=1 if trial.completed else 0,
            lower_bound=trial.lower_bound,
        )


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def build_records(cfg: ExperimentConfig, trials: Sequence[TrialResult]) -> list[OutputRecord]:
    return [OutputRecord.from_trial(cfg, i, t) for i, t in enumerate(trials)]


def _summary_row(cfg: ExperimentConfig, summary: SummaryStats) -> list:
    return [
        cfg.algorithm.value, cfg.n, cfg.p, cfg.alpha, cfg.beta,
        summary.count, summary.censored_count,
        summary.min, summary.q1, summary.median, summary.q3, summary.max, summary.mean,
    ]


def write_records_csv(stream: TextIO, records: Iterable[OutputRecord]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RECORD_COLUMNS)
    for rec in records:
        writer.writerow([_cell(getattr(rec, col)) for col in RECORD_COLUMNS])


def write_summary_csv(stream: TextIO, rows: Iterable[tuple[ExperimentConfig, SummaryStats]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for cfg, summary in rows:
        writer.writerow([_cell(v) for v in _summary_row(cfg, summary)])


def write_json(stream: TextIO, records: Sequence[OutputRecord], cfg: ExperimentConfig, summary: SummaryStats) -> None:
    summary_block = dict(zip(SUMMARY_COLUMNS, _summary_row(cfg, summary)))
    body = {"records": [asdict(r) for r in records], "summary": summary_block}
    json.dump(body, stream, indent=2)
    stream.write("\n")
