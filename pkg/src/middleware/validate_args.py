"""
Structural validation of CLI flags before any work starts.
Each validator returns (None, None) when the flags are usable, else
(message, exit_code).
"""
USAGE_ERROR = 2
MAX_U64 = (1 << 64) - 1
BOUND_METHODS = ("bound-general", "bound-smallk")


def _fail(message):
    return message, USAGE_ERROR


def _check_common(args):
    if args.n < 2:
        return _fail(f"--n must be at least 2, got {args.n}")
    if not 0.0 < args.p <= 1.0:
        return _fail(f"--p must lie in (0, 1], got {args.p}")
    return None, None


def validate_simulate_args(args):
    """Use for `simulate`. Returns (None, None) or (message, exit_code)."""
    if args.algorithm != "rlnc":
        if args.beta is not None:
            return _fail("beta requires rlnc")
        if args.strict_decoding:
            return _fail("--strict-decoding requires rlnc")
        if args.payload_check:
            return _fail("--payload-check requires rlnc")
    err, status = _check_common(args)
    if err is not None:
        return err, status
    if args.beta is not None and args.beta <= 0:
        return _fail(f"--beta must be positive, got {args.beta}")
    if not 0.0 <= args.alpha <= 1.0:
        return _fail(f"--alpha must lie in [0, 1], got {args.alpha}")
    if args.replicates < 1:
        return _fail(f"--replicates must be at least 1, got {args.replicates}")
    if not 0 <= args.seed <= MAX_U64:
        return _fail(f"--seed must be an unsigned 64-bit value, got {args.seed}")
    if args.max_rounds is not None and args.max_rounds < 1:
        return _fail(f"--max-rounds must be at least 1, got {args.max_rounds}")
    return validate_threads(args)


def validate_threads(args):
    threads = getattr(args, "threads", None)
    if threads is not None and threads < 1:
        return _fail(f"--threads must be at least 1, got {threads}")
    return None, None


def validate_bounds_args(args):
    """Use for `bounds`."""
    err, status = _check_common(args)
    if err is not None:
        return err, status
    if args.epsilon < 0:
        return _fail(f"--epsilon must be non-negative, got {args.epsilon}")
    if not 0.0 < args.delta < 1.0:
        return _fail(f"--delta must lie in (0, 1), got {args.delta}")
    return None, None


def validate_oracle_args(args):
    """Use for `oracle kernel-prob`."""
    if args.k < 0:
        return _fail(f"--k must be non-negative, got {args.k}")
    if args.m < 1:
        return _fail(f"--m must be at least 1, got {args.m}")
    if not 0.0 <= args.p <= 1.0:
        return _fail(f"--p must lie in [0, 1], got {args.p}")
    if not 0.0 <= args.pi <= 1.0:
        return _fail(f"--pi must lie in [0, 1], got {args.pi}")
    if args.method in BOUND_METHODS:
        if args.pi >= 0.5 or args.pi <= 0.0:
            return _fail(f"{args.method} needs 0 < pi < 0.5, got {args.pi}")
        if not 0.0 < args.p < 1.0:
            return _fail(f"{args.method} needs 0 < p < 1, got {args.p}")
    return None, None
