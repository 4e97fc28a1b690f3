"""
Round-by-round engines for random relaying (R1, R2) and RLNC(beta) over GF(2).

Round 1: every node broadcasts its own packet. Rounds t >= 2: every node
broadcasts once over the current graph. A node completes at the first round
after which it holds (or can decode) all n packets.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from errors import InvalidParameter
from services.analysis import lower_bound_sequence
from services.gf2 import DecoderState
from services.graph import DirectedGraph, GraphMode, GraphProcess

logger = logging.getLogger(__name__)

PI_CAP = 0.5


class RelayVariant(str, Enum):
    R1 = "r1"
    R2 = "r2"


@dataclass(frozen=True)
class RelayNodeState:
    node_id: int
    round1_buffer: frozenset[int]
    known: frozenset[int]


@dataclass(frozen=True)
class RlncNodeState:
    node_id: int
    round1_sources: frozenset[int]
    d_in: int
    pi: float
    decoder: DecoderState
    payload_rows: tuple[int, ...]


@dataclass(frozen=True)
class TrialResult:
    """rounds_to_allcast and per-node entries are None when censored."""

    rounds_to_allcast: Optional[int]
    per_node_completion: tuple[Optional[int], ...]
    lower_bound: Optional[int]
    completed: bool
    seed: int
    payload_ok: Optional[bool] = None


def inclusion_probability(d_in, beta: float):
    """
    pi = min(1/2, beta * ln(d) / d), and 1 when d <= 1 so a single-source
    sender forwards its packet. Accepts a scalar or an array of in-degrees.
    """
    d = np.asarray(d_in, dtype=float)
    safe = np.maximum(d, 2.0)
    pi = np.minimum(PI_CAP, beta * np.log(safe) / safe)
    pi = np.where(d <= 1, 1.0, pi)
    if pi.ndim == 0:
        return float(pi)
    return pi


class _Simulation:
    def __init__(self, process: GraphProcess, rng: np.random.Generator):
        self.process = process
        self.rng = rng
        self.n = process.n
        self.round = 0
        self.completion: list[Optional[int]] = [None] * self.n
        self.in_degree_rows: list[list[int]] = []

    @property
    def done(self) -> bool:
        return all(c is not None for c in self.completion)

    @property
    def stalled(self) -> bool:
        """True once no further round can complete another node."""
        return False

    def step_round(self, graph: DirectedGraph) -> "_Simulation":
        """Apply one synchronous broadcast round over `graph`."""
        if graph.n != self.n:
            raise InvalidParameter(f"graph has {graph.n} nodes, simulation has {self.n}")
        self.round += 1
        self.in_degree_rows.append(graph.adjacency.sum(axis=0).tolist())
        if self.round == 1:
            self._first_round(graph)
        else:
            self._later_round(graph)
        for v in np.flatnonzero(self._complete_mask()).tolist():
            if self.completion[v] is None:
                self.completion[v] = self.round
                self._on_complete(v)
        return self

    def run(self, max_rounds: int) -> "_Simulation":
        if max_rounds < 1:
            raise InvalidParameter(f"max_rounds must be >= 1, got {max_rounds}")
        while self.round < max_rounds and not self.done and not self.stalled:
            graph = self.process.current if self.round == 0 else self.process.advance(self.rng)
            self.step_round(graph)
        return self

    def result(self, seed: int = 0) -> TrialResult:
        completed = self.done
        rounds = max(self.completion) if completed else None
        return TrialResult(
            rounds_to_allcast=rounds,
            per_node_completion=tuple(self.completion),
            lower_bound=lower_bound_sequence(self.in_degree_rows),
            completed=completed,
            seed=seed,
            payload_ok=self._payload_ok(),
        )

    def _first_round(self, graph):
        raise NotImplementedError

    def _later_round(self, graph):
        raise NotImplementedError

    def _complete_mask(self) -> np.ndarray:
        raise NotImplementedError

    def _on_complete(self, v: int) -> None:
        pass

    def _payload_ok(self) -> Optional[bool]:
        return None


class RelaySimulation(_Simulation):
    """
    known[v, w] is True once v holds w's packet. Candidate sets exclude the
    node's own packet; a node with no candidates rebroadcasts its own.
    """

    def __init__(self, variant: RelayVariant, process: GraphProcess, rng: np.random.Generator):
        super().__init__(process, rng)
        self.variant = RelayVariant(variant)
        self.known = np.eye(self.n, dtype=bool)
        self.round1 = np.zeros((self.n, self.n), dtype=bool)
        self.last_broadcast: Optional[np.ndarray] = None
        self._ids = np.arange(self.n)
        self._r1_counts = None
        self._r1_order = None

    def node_state(self, v: int) -> RelayNodeState:
        return RelayNodeState(
            node_id=v,
            round1_buffer=frozenset(np.flatnonzero(self.round1[v]).tolist()),
            known=frozenset(np.flatnonzero(self.known[v]).tolist()),
        )

    def candidates(self) -> np.ndarray:
        """Boolean matrix of each node's current candidate packets."""
        if self.variant is RelayVariant.R1:
            return self.round1
        cand = self.known.copy()
        np.fill_diagonal(cand, False)
        return cand

    def _first_round(self, graph):
        self.round1 = graph.adjacency.T.copy()
        self.known |= self.round1
        self.last_broadcast = self._ids.copy()
        # R1 candidates are frozen from here on
        self._r1_counts = self.round1.sum(axis=1)
        self._r1_order = np.argsort(~self.round1, axis=1, kind="stable")

    def _choose(self) -> np.ndarray:
        if self.variant is RelayVariant.R1:
            counts = self._r1_counts
            pick = self.rng.integers(0, np.maximum(counts, 1))
            choice = self._r1_order[self._ids, pick]
        else:
            cand = self.candidates()
            counts = cand.sum(axis=1)
            pick = self.rng.integers(0, np.maximum(counts, 1))
            choice = np.argmax(np.cumsum(cand, axis=1) > pick[:, None], axis=1)
        return np.where(counts > 0, choice, self._ids)

    def _later_round(self, graph):
        choice = self._choose()
        senders, receivers = np.nonzero(graph.adjacency)
        self.known[receivers, choice[senders]] = True
        self.last_broadcast = choice

    def _complete_mask(self):
        return self.known.all(axis=1)


class RlncSimulation(_Simulation):
    """
    Each node codes over the packets it received in round 1. Non-strict
    decoders start from the own and round-1 unit vectors; strict decoders see
    coded rows only.
    """

    def __init__(
        self,
        beta: float,
        process: GraphProcess,
        rng: np.random.Generator,
        strict: bool = False,
        payload_check: bool = False,
    ):
        if beta <= 0:
            raise InvalidParameter(f"beta must be positive, got {beta}")
        super().__init__(process, rng)
        self.beta = beta
        self.strict = strict
        self.payload_check = payload_check
        self.payloads = rng.integers(0, 2**64, size=self.n, dtype=np.uint64)
        self._payload_words = [int(w) for w in self.payloads]
        self.decoders = [DecoderState(self.n, track_payloads=payload_check) for _ in range(self.n)]
        self.sources = np.zeros((self.n, self.n), dtype=bool)
        self.d_in = np.zeros(self.n, dtype=np.int64)
        self.pi = np.ones(self.n)
        self.last_coefficients: Optional[np.ndarray] = None
        self.last_coded_payloads: Optional[list[int]] = None
        self.payload_mismatches = 0
        # nodes whose reachable columns miss some packet on a static graph
        self.blocked = np.zeros(self.n, dtype=bool)

    def node_state(self, v: int) -> RlncNodeState:
        dec = self.decoders[v]
        return RlncNodeState(
            node_id=v,
            round1_sources=frozenset(np.flatnonzero(self.sources[v]).tolist()),
            d_in=int(self.d_in[v]),
            pi=float(self.pi[v]),
            decoder=dec,
            payload_rows=dec.payload_rows,
        )

    def _first_round(self, graph):
        self.sources = graph.adjacency.T.copy()
        self.d_in = self.sources.sum(axis=1)
        self.pi = inclusion_probability(self.d_in, self.beta)
        if self.process.mode is GraphMode.STATIC:
            self.blocked = ~self._reachable_columns(graph).all(axis=1)
            if self.blocked.any():
                logger.debug("%d nodes can never decode on this static graph", int(self.blocked.sum()))
        if self.strict:
            return
        words = self._payload_words
        for v, dec in enumerate(self.decoders):
            dec.insert_bits(1 << v, words[v])
            for w in np.flatnonzero(self.sources[v]).tolist():
                dec.insert_bits(1 << w, words[w])

    def _reachable_columns(self, graph: DirectedGraph) -> np.ndarray:
        """
        reach[v, w]: some coded row v can ever receive on `graph` has column w,
        i.e. w is a round-1 source of an in-neighbor of v. Non-strict decoders
        also hold their own and round-1 columns.
        """
        # float32 matmul is exact for counts below 2**24
        incoming = graph.adjacency.T.astype(np.float32)
        reach = (incoming @ self.sources.astype(np.float32)) > 0
        if not self.strict:
            reach |= self.sources
            np.fill_diagonal(reach, True)
        return reach

    @property
    def stalled(self) -> bool:
        if self.round == 0 or not self.blocked.any():
            return False
        return all(c is not None or b for c, b in zip(self.completion, self.blocked.tolist()))

    def _code(self) -> tuple[list[int], list[int]]:
        coeffs = (self.rng.random((self.n, self.n)) < self.pi[:, None]) & self.sources
        mixed = np.where(coeffs, self.payloads[None, :], np.uint64(0))
        coded = np.bitwise_xor.reduce(mixed, axis=1)
        packed = np.packbits(coeffs, axis=1, bitorder="little")
        rows = [int.from_bytes(r.tobytes(), "little") for r in packed]
        self.last_coefficients = coeffs
        self.last_coded_payloads = [int(w) for w in coded]
        return rows, self.last_coded_payloads

    def _later_round(self, graph):
        rows, words = self._code()
        incoming = graph.adjacency.T
        for v, dec in enumerate(self.decoders):
            if self.completion[v] is not None:
                continue
            for u in np.flatnonzero(incoming[v]).tolist():
                dec.insert_bits(rows[u], words[u])
                if dec.is_full:
                    break

    def _complete_mask(self):
        return np.fromiter((d.is_full for d in self.decoders), dtype=bool, count=self.n)

    def _on_complete(self, v):
        if not self.payload_check:
            return
        if self.decoders[v].solve() != self._payload_words:
            self.payload_mismatches += 1
            logger.warning("node %d decoded payloads that differ from the originals", v)

    def _payload_ok(self):
        if not self.payload_check:
            return None
        return self.payload_mismatches == 0


def _check_trial_args(process: GraphProcess, n: int, max_rounds: int):
    if n < 2:
        raise InvalidParameter(f"allcast needs n >= 2, got {n}")
    if process.n != n:
        raise InvalidParameter(f"process has {process.n} nodes, expected {n}")
    if max_rounds < 1:
        raise InvalidParameter(f"max_rounds must be >= 1, got {max_rounds}")


def run_relay(
    variant: RelayVariant,
    process: GraphProcess,
    n: int,
    max_rounds: int,
    rng: np.random.Generator,
    seed: int = 0,
) -> TrialResult:
    _check_trial_args(process, n, max_rounds)
    sim = RelaySimulation(variant, process, rng).run(max_rounds)
    return sim.result(seed)


def run_rlnc(
    beta: float,
    process: GraphProcess,
    n: int,
    max_rounds: int,
    strict: bool,
    rng: np.random.Generator,
    seed: int = 0,
    payload_check: bool = False,
) -> TrialResult:
    _check_trial_args(process, n, max_rounds)
    sim = RlncSimulation(beta, process, rng, strict=strict, payload_check=payload_check).run(max_rounds)
    return sim.result(seed)


def default_max_rounds(n: int, p: float) -> int:
    """ceil(10 * 2 ln(n) / p^2): generous enough that R2 practically never censors."""
    if n < 2 or not 0 < p <= 1:
        raise InvalidParameter(f"default_max_rounds needs n >= 2 and p in (0, 1], got n={n}, p={p}")
    return math.ceil(10 * 2 * math.log(n) / (p * p))
