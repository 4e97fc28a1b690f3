"""
simulate and sweep: run experiments and write per-replicate records plus summaries.
"""
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from middleware.validate_args import validate_simulate_args, validate_threads
from services import montecarlo
from services.montecarlo import ExperimentConfig
from services.output_service import build_records, write_json, write_records_csv, write_summary_csv
from services.sweep_config import load_sweep_config

logger = logging.getLogger(__name__)

SWEEP_SUMMARY_NAME = "sweep_summary.csv"


@contextmanager
def open_output(path):
    """Yield a text stream for `path`, or stdout when path is None or '-'."""
    if path in (None, "-"):
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as stream:
        yield stream


def config_from_args(args) -> ExperimentConfig:
    return ExperimentConfig(
        algorithm=args.algorithm,
        n=args.n,
        p=args.p,
        beta=args.beta,
        alpha=args.alpha,
        replicates=args.replicates,
        base_seed=args.seed,
        max_rounds=args.max_rounds,
        strict_decoding=args.strict_decoding,
        payload_check=args.payload_check,
    )


def cmd_simulate(args) -> int:
    err, status = validate_simulate_args(args)
    if err is not None:
        print(f"error: {err}", file=sys.stderr)
        return status

    cfg = config_from_args(args)
    trials, summary = montecarlo.run_experiment(cfg, threads=args.threads)
    records = build_records(cfg, trials)

    if args.format == "json":
        with open_output(args.out) as stream:
            write_json(stream, records, cfg, summary)
        return 0

    with open_output(args.out) as stream:
        write_records_csv(stream, records)
    if args.out in (None, "-"):
        logger.info("summary: %s", summary)
    else:
        with open_output(f"{args.out}.summary.csv") as stream:
            write_summary_csv(stream, [(cfg, summary)])
    return 0


def cmd_sweep(args) -> int:
    err, status = validate_threads(args)
    if err is not None:
        print(f"error: {err}", file=sys.stderr)
        return status

    configs = load_sweep_config(args.config)
    out_dir = Path(args.out_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []

    def write_outcome(index, outcome):
        name = f"exp_{index:03d}_{outcome.config.algorithm.value}.csv"
        with open_output(out_dir / name) as stream:
            write_records_csv(stream, build_records(outcome.config, outcome.records))
        rows.append((outcome.config, outcome.summary))
        logger.info("wrote %s", out_dir / name)

    montecarlo.sweep(configs, threads=args.threads, on_result=write_outcome)
    with open_output(out_dir / SWEEP_SUMMARY_NAME) as stream:
        write_summary_csv(stream, rows)
    logger.info("sweep of %d experiments written to %s", len(configs), out_dir)
    return 0
