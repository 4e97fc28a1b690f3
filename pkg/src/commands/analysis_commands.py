"""
bounds and oracle: print closed-form bounds and kernel probabilities.
"""
import sys

from middleware.validate_args import validate_bounds_args, validate_oracle_args
from services import analysis
from services.analysis import BoundInputs, KernelParams

# Corollary tail is printed at q = p + f (1 - p) for these f
Q_FRACTIONS = (0.05, 0.1, 0.25, 0.5, 0.75)


def _print_row(name, value):
    print(f"{name:<28}{value}")


def _fmt(value):
    return f"{value:.12g}"


def cmd_bounds(args) -> int:
    err, status = validate_bounds_args(args)
    if err is not None:
        print(f"error: {err}", file=sys.stderr)
        return status

    inputs = BoundInputs(n=args.n, p=args.p, epsilon=args.epsilon, delta=args.delta)
    _print_row("n", inputs.n)
    _print_row("p", inputs.p)
    _print_row("epsilon", inputs.epsilon)
    _print_row("relay_r1_bound", f"{analysis.relay_bound('r1', inputs.n, inputs.p, inputs.epsilon):.4f}")
    _print_row("relay_r2_bound", f"{analysis.relay_bound('r2', inputs.n, inputs.p, inputs.epsilon):.4f}")
    _print_row("rlnc_bound", analysis.rlnc_bound(inputs.p))

    if inputs.p >= 1.0:
        _print_row("corollary_tail", "n/a (no q > p = 1)")
        return 0
    for f in Q_FRACTIONS:
        q = inputs.p + f * (1.0 - inputs.p)
        _print_row(f"corollary_tail q={q:.4g}", _fmt(analysis.corollary_tail(q, inputs.p, inputs.n)))
    conc = analysis.concentration_bounds(inputs.n, inputs.p, inputs.delta)
    _print_row(f"degree_event_fail d={inputs.delta:g}", _fmt(conc.e1_fail_bound))
    _print_row(f"two_hop_event_fail d={inputs.delta:g}", _fmt(conc.e2_fail_bound))
    return 0


def cmd_oracle_kernel(args) -> int:
    err, status = validate_oracle_args(args)
    if err is not None:
        print(f"error: {err}", file=sys.stderr)
        return status

    kp = KernelParams(k=args.k, m=args.m, p=args.p, pi=args.pi)
    if args.method == "closed":
        print(_fmt(analysis.kernel_prob_exact(kp)))
    elif args.method == "enum":
        print(_fmt(analysis.kernel_prob_oracle(kp)))
    else:
        bounds = analysis.kernel_prob_bounds(kp)
        if args.method == "bound-general":
            print(_fmt(bounds.general_bound))
        elif bounds.smallk_bound is None:
            print(f"not applicable (k={kp.k} > k*={bounds.k_star})")
        else:
            print(_fmt(bounds.smallk_bound))
    return 0


def cmd_oracle_parity(args) -> int:
    if args.s < 0 or not 0.0 <= args.pi <= 1.0:
        print("error: parity needs s >= 0 and 0 <= pi <= 1", file=sys.stderr)
        return 2
    print(_fmt(analysis.parity_prob(args.s, args.pi)))
    return 0
