"""
Closed-form probabilities and bounds for allcast on G(n, p): relative entropy
and binomial tails, allcast lower bounds, relay and RLNC round bounds, the
parity probability P(s, pi), the exact kernel probability of a sparse random
GF(2) sub-matrix with its enumeration oracle and inequality bounds.
All logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from errors import InvalidParameter, OracleLimitExceeded
from services.graph import DirectedGraph, in_degrees, two_hop_set

ORACLE_MAX_M = 12
ORACLE_MAX_K = 12
# Binomial weights switch to log-gamma above this k
DIRECT_WEIGHTS_MAX_K = 50


class Side(str, Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class KernelParams:
    """k ones in the test vector, m rows, column activation p, entry probability pi."""

    k: int
    m: int
    p: float
    pi: float

    def __post_init__(self):
        if self.k < 0:
            raise InvalidParameter(f"k must be >= 0, got {self.k}")
        if self.m < 1:
            raise InvalidParameter(f"m must be >= 1, got {self.m}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameter(f"p must lie in [0, 1], got {self.p}")
        if not 0.0 <= self.pi <= 1.0:
            raise InvalidParameter(f"pi must lie in [0, 1], got {self.pi}")


@dataclass(frozen=True)
class BoundInputs:
    """Scalar parameters shared by the bound formulas."""

    n: int
    p: float
    q: Optional[float] = None
    epsilon: float = 0.0
    beta: float = 8.0
    delta: float = 0.1

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter(f"n must be >= 1, got {self.n}")
        if not 0.0 < self.p <= 1.0:
            raise InvalidParameter(f"p must lie in (0, 1], got {self.p}")
        if self.q is not None and not 0.0 <= self.q <= 1.0:
            raise InvalidParameter(f"q must lie in [0, 1], got {self.q}")
        if self.epsilon < 0:
            raise InvalidParameter(f"epsilon must be >= 0, got {self.epsilon}")
        if self.beta <= 0:
            raise InvalidParameter(f"beta must be positive, got {self.beta}")
        if not 0.0 < self.delta < 1.0:
            raise InvalidParameter(f"delta must lie in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class KernelBounds:
    general_bound: float
    smallk_bound: Optional[float]  # None when k > k_star
    k_star: int


@dataclass(frozen=True)
class ConcentrationBounds:
    e1_fail_bound: float
    e2_fail_bound: float
    gamma_degree: float
    gamma_two_hop: float


# --- entropy and binomial tails ---------------------------------------------


def rel_entropy(q: float, p: float) -> float:
    """H(q; p), the KL divergence of Bernoulli(q) from Bernoulli(p); 0 log 0 = 0."""
    if not 0.0 < p < 1.0:
        raise InvalidParameter(f"p must lie in (0, 1), got {p}")
    if not 0.0 <= q <= 1.0:
        raise InvalidParameter(f"q must lie in [0, 1], got {q}")
    h = 0.0
    if q > 0.0:
        h += q * math.log(q / p)
    if q < 1.0:
        h += (1.0 - q) * math.log((1.0 - q) / (1.0 - p))
    return max(h, 0.0)


def binom_tail_bound(n: int, p: float, q: float, side: Side) -> float:
    """Chernoff bound exp(-n H(q; p)) on P(X > nq) (upper) or P(X < nq) (lower)."""
    side = Side(side)
    if side is Side.UPPER and not q > p:
        raise InvalidParameter(f"upper tail needs q > p, got q={q}, p={p}")
    if side is Side.LOWER and not q < p:
        raise InvalidParameter(f"lower tail needs q < p, got q={q}, p={p}")
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    return math.exp(-n * rel_entropy(q, p))


def binom_tail_exact(n: int, p: float, threshold: int) -> float:
    """P(X > threshold) for X ~ Bin(n, p), summed exactly."""
    return sum(math.comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(threshold + 1, n + 1))


# --- allcast lower bounds ----------------------------------------------------


def lower_bound_static(g: DirectedGraph) -> float:
    """
    ceil((n - 1) / min in-degree); math.inf when some node has in-degree 0,
    since allcast is then impossible on the static graph.
    """
    if g.n == 1:
        return 0
    d_min = min(in_degrees(g))
    if d_min == 0:
        return math.inf
    return math.ceil((g.n - 1) / d_min)


def lower_bound_sequence(in_degree_rows: Sequence[Sequence[int]]) -> Optional[int]:
    """
    max over v of the first round T with sum_{t <= T} d_in_t(v) >= n - 1;
    None when some node never gets there within the rows given.
    """
    if len(in_degree_rows) == 0:
        return None
    arr = np.asarray(in_degree_rows, dtype=np.int64)
    if arr.ndim != 2:
        raise InvalidParameter("in-degree rows must all have length n")
    n = arr.shape[1]
    reached = np.cumsum(arr, axis=0) >= n - 1
    if not reached[-1].all():
        return None
    return int(np.argmax(reached, axis=0).max()) + 1


def corollary_tail(q: float, p: float, n: int) -> float:
    """(1/q) exp(-n(n-1) H(q; p)): bound on P(T_all <= 1/q) for any algorithm."""
    if not q > p:
        raise InvalidParameter(f"corollary tail needs q > p, got q={q}, p={p}")
    return math.exp(-n * (n - 1) * rel_entropy(q, p)) / q


def concentration_bounds(n: int, p: float, delta: float) -> ConcentrationBounds:
    """
    Union-bound failure probabilities of the degree event E1 and the two-hop
    event E2. Degrees are Bin(n-1, p) and two-hop counts Bin(n-2, p^2); a
    deviation side that falls outside (0, 1) cannot happen and is dropped.
    """
    if not 0.0 < delta < 1.0:
        raise InvalidParameter(f"delta must lie in (0, 1), got {delta}")
    if not 0.0 < p < 1.0:
        raise InvalidParameter(f"p must lie in (0, 1), got {p}")

    def gamma(mean):
        rates = [rel_entropy((1 - delta) * mean, mean)]
        if (1 + delta) * mean < 1.0:
            rates.append(rel_entropy((1 + delta) * mean, mean))
        return min(rates)

    g1 = gamma(p)
    g2 = rel_entropy((1 - delta) * p * p, p * p)
    e1 = min(1.0, 2 * n * math.exp(-g1 * (n - 1)))
    e2 = min(1.0, n * n * math.exp(-g2 * max(n - 2, 0)))
    return ConcentrationBounds(e1, e2, g1, g2)


# --- relay and coding round bounds ------------------------------------------


def _variant_name(variant) -> str:
    return str(variant.value if isinstance(variant, Enum) else variant).lower()


def relay_bound(variant, n: int, p: float, epsilon: float = 0.0) -> float:
    """2(1+eps) ln(n) / p for R1, the same over p^2 for R2."""
    if n < 2:
        raise InvalidParameter(f"n must be >= 2, got {n}")
    if not 0.0 < p <= 1.0:
        raise InvalidParameter(f"p must lie in (0, 1], got {p}")
    if epsilon < 0:
        raise InvalidParameter(f"epsilon must be >= 0, got {epsilon}")
    base = 2 * (1 + epsilon) * math.log(n) / p
    name = _variant_name(variant)
    if name == "r1":
        return base
    if name == "r2":
        return base / p
    raise InvalidParameter(f"unknown relay variant {variant!r}")


def rlnc_bound(p: float) -> int:
    if not 0.0 < p <= 1.0:
        raise InvalidParameter(f"p must lie in (0, 1], got {p}")
    return math.ceil(1.0 / p - 1e-12) + 2


def relay_miss_prob(g: DirectedGraph, u: int, v: int, t: int) -> float:
    """
    R1 on a static graph: probability that v still lacks u's packet after
    round t. Only w in M_uv ever relay it, each with chance 1/d_in(w) per round.
    """
    if u == v:
        raise InvalidParameter("relay_miss_prob needs distinct nodes")
    if t < 1:
        raise InvalidParameter(f"t must be >= 1, got {t}")
    if g.has_edge(u, v):
        return 0.0
    degrees = in_degrees(g)
    prob = 1.0
    for w in two_hop_set(g, u, v):
        prob *= (1.0 - 1.0 / degrees[w]) ** (t - 1)
    return prob


def relay_failure_union_bound(g: DirectedGraph, t: int) -> float:
    """min(1, sum over ordered pairs of relay_miss_prob)."""
    if t < 1:
        raise InvalidParameter(f"t must be >= 1, got {t}")
    adj = g.adjacency.astype(np.float64)
    d = g.adjacency.sum(axis=0).astype(np.float64)
    # d == 1 relays surely; a large finite penalty keeps 0 * log terms finite
    log_stay = np.where(d > 1, np.log1p(-1.0 / np.maximum(d, 2.0)), -1e6)
    exponent = (adj * log_stay[None, :]) @ adj
    miss = np.exp((t - 1) * exponent)
    miss[g.adjacency] = 0.0
    np.fill_diagonal(miss, 0.0)
    return float(min(1.0, miss.sum()))


# --- parity and kernel probabilities ----------------------------------------


def parity_prob(s: int, pi: float) -> float:
    """P(s, pi) = (1 + (1 - 2 pi)^s) / 2: an XOR of s Bernoulli(pi) bits is zero."""
    if s < 0:
        raise InvalidParameter(f"s must be >= 0, got {s}")
    if not 0.0 <= pi <= 1.0:
        raise InvalidParameter(f"pi must lie in [0, 1], got {pi}")
    return (1.0 + (1.0 - 2.0 * pi) ** s) / 2.0


def parity_prob_recursive(s: int, pi: float) -> float:
    """P(0) = 1, P(s) = (1 - pi) P(s-1) + pi (1 - P(s-1))."""
    prob = 1.0
    for _ in range(s):
        prob = (1.0 - pi) * prob + pi * (1.0 - prob)
    return prob


def _binomial_weight(k: int, s: int, p: float) -> float:
    if k <= DIRECT_WEIGHTS_MAX_K or p in (0.0, 1.0):
        return math.comb(k, s) * p**s * (1.0 - p) ** (k - s)
    log_w = (
        math.lgamma(k + 1)
        - math.lgamma(s + 1)
        - math.lgamma(k - s + 1)
        + s * math.log(p)
        + (k - s) * math.log1p(-p)
    )
    return math.exp(log_w)


def kernel_prob_exact(kp: KernelParams) -> float:
    """sum_s C(k,s) p^s (1-p)^(k-s) P(s, pi)^m."""
    return sum(_binomial_weight(kp.k, s, kp.p) * parity_prob(s, kp.pi) ** kp.m for s in range(kp.k + 1))


def kernel_prob_oracle(kp: KernelParams) -> float:
    """
    Same probability by dynamic programming over the distribution of the
    m-bit column sum, adding one column at a time.
    """
    if kp.m > ORACLE_MAX_M or kp.k > ORACLE_MAX_K:
        raise OracleLimitExceeded(
            f"enumeration limited to m <= {ORACLE_MAX_M} and k <= {ORACLE_MAX_K}, got m={kp.m}, k={kp.k}"
        )
    size = 1 << kp.m
    states = np.arange(size)
    ones = np.array([bin(b).count("1") for b in range(size)])
    column = kp.p * np.power(kp.pi, ones) * np.power(1.0 - kp.pi, kp.m - ones)
    column[0] += 1.0 - kp.p

    dist = np.zeros(size)
    dist[0] = 1.0
    for _ in range(kp.k):
        nxt = np.zeros(size)
        for pattern in np.flatnonzero(column):
            nxt += column[pattern] * dist[states ^ pattern]
        dist = nxt
    return float(dist[0])


def k_star(m: int, pi: float) -> int:
    """Largest k with (1 - 2 pi)^k >= 1/2 and (1 - pi k / 2)^m >= 1/2 (0 if none)."""
    if not 0.0 < pi < 0.5:
        raise InvalidParameter(f"pi must lie in (0, 1/2), got {pi}")
    k = 0
    while (1 - 2 * pi) ** (k + 1) >= 0.5 and (1 - pi * (k + 1) / 2) ** m >= 0.5:
        k += 1
    return k


def kernel_prob_bounds(kp: KernelParams) -> KernelBounds:
    """
    General bound 2^-m [1 + exp(-k p pi) + 2 exp(-(k/m) H(p/2; p))]^m and the
    small-k bound exp(-k m p pi / 4), the latter only for k <= k*.
    """
    if not 0.0 < kp.pi < 0.5:
        raise InvalidParameter(f"kernel bounds need pi in (0, 1/2), got {kp.pi}")
    if not 0.0 < kp.p < 1.0:
        raise InvalidParameter(f"kernel bounds need p in (0, 1), got {kp.p}")
    k, m, p, pi = kp.k, kp.m, kp.p, kp.pi
    inner = 1.0 + math.exp(-k * p * pi) + 2.0 * math.exp(-(k / m) * rel_entropy(p / 2, p))
    general = inner**m / 2**m
    limit = k_star(m, pi)
    smallk = math.exp(-k * m * p * pi / 4) if k <= limit else None
    return KernelBounds(general, smallk, limit)


def sample_kernel_frequency(kp: KernelParams, samples: int, rng: np.random.Generator) -> tuple[float, float]:
    """
    Empirical P(R x_k = 0) over `samples` random m x k matrices drawn with
    the column law above, with its binomial standard error.
    """
    if samples < 1:
        raise InvalidParameter(f"samples must be >= 1, got {samples}")
    active = rng.random((samples, 1, kp.k)) < kp.p
    entries = rng.random((samples, kp.m, kp.k)) < kp.pi
    sums = (entries & active).sum(axis=2)
    hits = np.all(sums % 2 == 0, axis=1)
    freq = float(hits.mean())
    return freq, math.sqrt(max(freq * (1 - freq), 0.0) / samples)
