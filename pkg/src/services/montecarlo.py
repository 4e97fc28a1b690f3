"""
Seeded replicate harness. Replicate i of an experiment draws its own
generator from derive_seed(base_seed, i), so results do not depend on how
replicates are scheduled across workers.

Random numbers: numpy.random.Generator over the PCG64 bit generator
(see requirements.txt for the pinned numpy range). Reproducibility is
promised within this repository, not across implementations.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import repeat
from typing import Callable, Optional, Sequence

import numpy as np

import config
from errors import InvalidParameter, NoCompletedReplicates
from services.graph import GraphProcess
from services.protocols import RelayVariant, TrialResult, default_max_rounds, run_relay, run_rlnc

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
DEFAULT_BETA = 8.0
DEFAULT_REPLICATES = 10000


class Algorithm(str, Enum):
    R1 = "r1"
    R2 = "r2"
    RLNC = "rlnc"


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: Algorithm
    n: int
    p: float
    beta: Optional[float] = None
    alpha: float = 0.0
    replicates: int = DEFAULT_REPLICATES
    base_seed: int = 0
    max_rounds: Optional[int] = None
    strict_decoding: bool = False
    payload_check: bool = False

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if self.n < 2:
            raise InvalidParameter(f"n must be >= 2, got {self.n}")
        if not 0.0 < self.p <= 1.0:
            raise InvalidParameter(f"p must lie in (0, 1], got {self.p}")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameter(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.replicates < 1:
            raise InvalidParameter(f"replicates must be >= 1, got {self.replicates}")
        if not 0 <= self.base_seed <= MASK64:
            raise InvalidParameter(f"seed must be an unsigned 64-bit value, got {self.base_seed}")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise InvalidParameter(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.algorithm is Algorithm.RLNC:
            if self.beta is None:
                object.__setattr__(self, "beta", DEFAULT_BETA)
            elif self.beta <= 0:
                raise InvalidParameter(f"beta must be positive, got {self.beta}")
        elif self.beta is not None:
            raise InvalidParameter("beta requires rlnc")

    @property
    def resolved_max_rounds(self) -> int:
        return self.max_rounds if self.max_rounds is not None else default_max_rounds(self.n, self.p)


@dataclass(frozen=True)
class SummaryStats:
    """Box-plot statistics over completed replicates; None fields when count == 0."""

    count: int
    min: Optional[float]
    q1: Optional[float]
    median: Optional[float]
    q3: Optional[float]
    max: Optional[float]
    mean: Optional[float]
    censored_count: int = 0

    @classmethod
    def empty(cls, censored: int) -> "SummaryStats":
        return cls(0, None, None, None, None, None, None, censored)


@dataclass
class ExperimentOutcome:
    config: ExperimentConfig
    records: list[TrialResult] = field(default_factory=list)
    summary: Optional[SummaryStats] = None


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer: a bijective avalanche mix of 64-bit words."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(base_seed: int, index: int) -> int:
    """Seed of replicate `index`: splitmix64(base_seed + (index + 1) * golden gamma)."""
    return splitmix64(base_seed + (index + 1) * SPLITMIX_GAMMA)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def run_replicate(cfg: ExperimentConfig, index: int) -> TrialResult:
    seed = derive_seed(cfg.base_seed, index)
    rng = make_rng(seed)
    process = GraphProcess.sample(cfg.n, cfg.p, cfg.alpha, rng)
    max_rounds = cfg.resolved_max_rounds
    if cfg.algorithm is Algorithm.RLNC:
        result = run_rlnc(
            cfg.beta,
            process,
            cfg.n,
            max_rounds,
            cfg.strict_decoding,
            rng,
            seed=seed,
            payload_check=cfg.payload_check,
        )
    else:
        result = run_relay(RelayVariant(cfg.algorithm.value), process, cfg.n, max_rounds, rng, seed=seed)
    logger.debug("replicate %d seed=%d rounds=%s lower_bound=%s", index, seed, result.rounds_to_allcast, result.lower_bound)
    return result


def _run_chunk(cfg: ExperimentConfig, indices: range) -> list[TrialResult]:
    return [run_replicate(cfg, i) for i in indices]


def summarize(values: Sequence[Optional[int]]) -> SummaryStats:
    """Quartiles by linear interpolation at (N-1)*{0.25, 0.5, 0.75}; None values are censored."""
    done = [v for v in values if v is not None]
    censored = len(values) - len(done)
    if not done:
        raise NoCompletedReplicates(censored)
    arr = np.asarray(done, dtype=float)
    q1, median, q3 = np.percentile(arr, [25, 50, 75], method="linear")
    return SummaryStats(
        count=len(done),
        min=float(arr.min()),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        max=float(arr.max()),
        mean=float(arr.mean()),
        censored_count=censored,
    )


def run_experiment(cfg: ExperimentConfig, threads: Optional[int] = None) -> tuple[list[TrialResult], SummaryStats]:
    workers = min(config.resolve_threads(threads), cfg.replicates)
    logger.info(
        "experiment %s n=%d p=%g alpha=%g beta=%s replicates=%d seed=%d workers=%d",
        cfg.algorithm.value, cfg.n, cfg.p, cfg.alpha, cfg.beta, cfg.replicates, cfg.base_seed, workers,
    )
    if workers <= 1:
        records = _run_chunk(cfg, range(cfg.replicates))
    else:
        size = max(1, config.CHUNKSIZE)
        chunks = [range(i, min(i + size, cfg.replicates)) for i in range(0, cfg.replicates, size)]
        records = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map preserves submission order
            for part in pool.map(_run_chunk, repeat(cfg), chunks):
                records.extend(part)

    censored = sum(1 for r in records if not r.completed)
    if censored:
        logger.warning("%d of %d replicates censored at %d rounds", censored, len(records), cfg.resolved_max_rounds)
    mismatched = sum(1 for r in records if r.payload_ok is False)
    if mismatched:
        logger.warning("%d replicates decoded payloads that differ from the originals", mismatched)

    try:
        summary = summarize([r.rounds_to_allcast for r in records])
    except NoCompletedReplicates:
        summary = SummaryStats.empty(censored)
    logger.info("experiment done: median=%s q1=%s q3=%s censored=%d", summary.median, summary.q1, summary.q3, censored)
    return records, summary


def sweep(
    configs: Sequence[ExperimentConfig],
    threads: Optional[int] = None,
    on_result: Optional[Callable[[int, ExperimentOutcome], None]] = None,
) -> list[SummaryStats]:
    """Run configs in order; on_result sees each outcome as soon as it is ready."""
    table = []
    for i, cfg in enumerate(configs):
        records, summary = run_experiment(cfg, threads)
        if on_result is not None:
            on_result(i, ExperimentOutcome(cfg, records, summary))
        table.append(summary)
    return table


def percentile(values: Sequence[Optional[int]], q: float) -> float:
    """Upper q-th percentile (0..100), never interpolated; censored values count as +inf."""
    arr = np.asarray([math.inf if v is None else v for v in values], dtype=float)
    return float(np.percentile(arr, q, method="higher"))
