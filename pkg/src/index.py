"""
Allcast simulator entry point. Run from project root: python run.py <command> ...
Logs go to stderr; data (records, bounds, oracle values) goes to stdout or --out.
"""
from __future__ import annotations

import argparse
import logging
import sys

import config
from commands.analysis_commands import cmd_bounds, cmd_oracle_kernel, cmd_oracle_parity
from commands.simulate_commands import cmd_simulate, cmd_sweep
from errors import AllcastError
from middleware.validate_args import USAGE_ERROR
from services.montecarlo import DEFAULT_REPLICATES

logging.basicConfig(
    stream=sys.stderr,
    level=getattr(logging, config.LOG_LEVEL, logging.INFO),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="allcast", description="Allcast gossip simulator on random directed graphs")
    sub = p.add_subparsers(dest="cmd", required=True)

    ps = sub.add_parser("simulate", help="Monte Carlo replicates of one configuration")
    ps.add_argument("--algorithm", choices=("r1", "r2", "rlnc"), required=True)
    ps.add_argument("--n", type=int, required=True, help="Number of nodes")
    ps.add_argument("--p", type=float, required=True, help="Edge probability")
    ps.add_argument("--beta", type=float, default=None, help="RLNC inclusion parameter (default 8)")
    ps.add_argument("--alpha", type=float, default=0.0, help="Markov resample probability; 0 = static graph")
    ps.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    ps.add_argument("--seed", type=int, default=0, help="Base seed (unsigned 64-bit)")
    ps.add_argument("--max-rounds", type=int, default=None, help="Censoring cap (default ceil(20 ln n / p^2))")
    ps.add_argument("--strict-decoding", action="store_true", help="RLNC: decode from coded rows only")
    ps.add_argument("--payload-check", action="store_true", help="RLNC: verify decoded payloads")
    ps.add_argument("--format", choices=("csv", "json"), default="csv")
    ps.add_argument("--out", default=None, help="Output file (default stdout)")
    ps.add_argument("--threads", type=int, default=None, help="Worker processes")
    ps.set_defaults(func=cmd_simulate)

    pb = sub.add_parser("bounds", help="Closed-form bounds for (n, p)")
    pb.add_argument("--n", type=int, required=True)
    pb.add_argument("--p", type=float, required=True)
    pb.add_argument("--epsilon", type=float, default=0.0)
    pb.add_argument("--delta", type=float, default=0.1, help="Concentration slack")
    pb.set_defaults(func=cmd_bounds)

    po = sub.add_parser("oracle", help="Exact and bounded kernel probabilities")
    osub = po.add_subparsers(dest="oracle_cmd", required=True)
    pk = osub.add_parser("kernel-prob", help="P(x in kernel of the coefficient matrix)")
    pk.add_argument("--k", type=int, required=True, help="Support size of x")
    pk.add_argument("--m", type=int, required=True, help="Number of coded rows")
    pk.add_argument("--p", type=float, required=True)
    pk.add_argument("--pi", type=float, required=True)
    pk.add_argument("--method", choices=("closed", "enum", "bound-general", "bound-smallk"), default="closed")
    pk.set_defaults(func=cmd_oracle_kernel)
    pp = osub.add_parser("parity", help="P(Binomial(s, pi) is even): an XOR of s Bernoulli(pi) bits is zero")
    pp.add_argument("--s", type=int, required=True)
    pp.add_argument("--pi", type=float, required=True)
    pp.set_defaults(func=cmd_oracle_parity)

    pw = sub.add_parser("sweep", help="Run every experiment of a sweep config file")
    pw.add_argument("--config", required=True, help="Sweep config path")
    pw.add_argument("--out-dir", default=".", help="Directory for per-experiment CSVs")
    pw.add_argument("--threads", type=int, default=None)
    pw.set_defaults(func=cmd_sweep)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AllcastError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except Exception:
        logger.exception("unexpected failure in %s", args.cmd)
        return 1


if __name__ == "__main__":
    sys.exit(main())
