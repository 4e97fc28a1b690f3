import math

import pytest

from errors import InvalidParameter, NoCompletedReplicates
from services import montecarlo
from services.montecarlo import Algorithm, ExperimentConfig, derive_seed, percentile, splitmix64, summarize


def test_summarize_five_values():
    s = summarize([1, 2, 3, 4, 5])
    assert (s.min, s.q1, s.median, s.q3, s.max) == (1, 2, 3, 4, 5)
    assert s.mean == 3
    assert s.count == 5 and s.censored_count == 0


def test_summarize_skips_censored():
    s = summarize([4, None, 2, None])
    assert s.count == 2
    assert s.censored_count == 2
    assert s.median == 3


def test_summarize_all_censored():
    with pytest.raises(NoCompletedReplicates, match="no completed replicates"):
        summarize([None, None])


def test_percentile_counts_censored_as_infinite():
    assert percentile([1, 2, 3, 4], 50) == 3
    assert percentile([1, None, None, None], 50) == math.inf


def test_splitmix_known_value():
    # first output of SplitMix64 seeded with 0
    assert splitmix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF


def test_derive_seed_distinct_and_stable():
    seeds = [derive_seed(42, i) for i in range(1000)]
    assert len(set(seeds)) == 1000
    assert seeds[3] == derive_seed(42, 3)
    assert derive_seed(1, 0) != derive_seed(2, 0)


def test_config_defaults_and_validation():
    cfg = ExperimentConfig("rlnc", 10, 0.5)
    assert cfg.algorithm is Algorithm.RLNC
    assert cfg.beta == 8.0
    assert cfg.resolved_max_rounds == math.ceil(20 * math.log(10) / 0.25)
    with pytest.raises(InvalidParameter, match="beta requires rlnc"):
        ExperimentConfig("r1", 10, 0.5, beta=2.0)
    with pytest.raises(InvalidParameter):
        ExperimentConfig("r1", 1, 0.5)
    with pytest.raises(InvalidParameter):
        ExperimentConfig("r1", 10, 0.0)
    with pytest.raises(ValueError):
        ExperimentConfig("flood", 10, 0.5)


def test_complete_graph_single_replicate():
    records, summary = montecarlo.run_experiment(ExperimentConfig("r2", 8, 1.0, replicates=1), threads=1)
    assert len(records) == 1
    assert summary.min == summary.max == 1


def test_same_config_same_records():
    cfg = ExperimentConfig("rlnc", 20, 0.4, replicates=6, base_seed=7)
    first, _ = montecarlo.run_experiment(cfg, threads=1)
    second, _ = montecarlo.run_experiment(cfg, threads=1)
    assert first == second


def test_records_independent_of_worker_count(monkeypatch):
    monkeypatch.setattr(montecarlo.config, "CHUNKSIZE", 2)
    cfg = ExperimentConfig("r1", 16, 0.5, alpha=0.3, replicates=7, base_seed=11)
    serial, serial_summary = montecarlo.run_experiment(cfg, threads=1)
    parallel, parallel_summary = montecarlo.run_experiment(cfg, threads=3)
    assert serial == parallel
    assert serial_summary == parallel_summary


def test_replicate_seeds_follow_derivation():
    cfg = ExperimentConfig("r1", 10, 0.6, replicates=3, base_seed=5)
    records, _ = montecarlo.run_experiment(cfg, threads=1)
    assert [r.seed for r in records] == [derive_seed(5, i) for i in range(3)]


def test_all_censored_gives_empty_summary():
    cfg = ExperimentConfig("r2", 30, 0.05, replicates=3, max_rounds=1)
    records, summary = montecarlo.run_experiment(cfg, threads=1)
    assert not any(r.completed for r in records)
    assert summary.count == 0 and summary.censored_count == 3
    assert summary.median is None


def test_sweep_reports_each_outcome():
    configs = [ExperimentConfig("r1", 8, 1.0, replicates=2), ExperimentConfig("rlnc", 8, 1.0, replicates=2)]
    seen = []
    table = montecarlo.sweep(configs, threads=1, on_result=lambda i, outcome: seen.append((i, outcome.config)))
    assert [i for i, _ in seen] == [0, 1]
    assert [s.median for s in table] == [1, 1]


@pytest.mark.slow
@pytest.mark.parametrize("n, limit", [(64, 6), (128, 5), (256, 5)])
def test_rlnc_median_near_coding_bound(n, limit):
    cfg = ExperimentConfig("rlnc", n, 0.4, beta=8.0, replicates=1000, base_seed=1, payload_check=True)
    records, summary = montecarlo.run_experiment(cfg)
    assert summary.median <= limit
    assert not any(r.payload_ok is False for r in records)
    for r in records:
        if r.completed:
            assert r.rounds_to_allcast >= r.lower_bound
    if n == 256:
        assert percentile([r.rounds_to_allcast for r in records], 99) <= 7


@pytest.mark.slow
@pytest.mark.parametrize("algorithm", ["r1", "r2"])
def test_relay_upper_percentile_within_bound(algorithm):
    from services.analysis import relay_bound

    cfg = ExperimentConfig(algorithm, 64, 0.4, replicates=200, base_seed=3)
    records, _ = montecarlo.run_experiment(cfg)
    assert percentile([r.rounds_to_allcast for r in records], 90) <= relay_bound(algorithm, 64, 0.4)


@pytest.mark.slow
def test_relay_variants_scale_like_log_n_over_p():
    expected = 2 * math.log(1024) / 0.4
    medians = {}
    for algorithm in ("r1", "r2"):
        _, summary = montecarlo.run_experiment(ExperimentConfig(algorithm, 1024, 0.4, replicates=500, base_seed=9))
        assert 0.7 * expected <= summary.median <= 1.3 * expected
        medians[algorithm] = summary.median
    assert abs(medians["r1"] - medians["r2"]) <= 3


@pytest.mark.slow
def test_rlnc_larger_beta_never_slower():
    medians = [
        montecarlo.run_experiment(ExperimentConfig("rlnc", 64, 0.4, beta=beta, replicates=1000, base_seed=5))[1].median
        for beta in (1.0, 2.0, 4.0)
    ]
    assert medians[0] >= medians[1] >= medians[2]
    assert medians[0] > medians[2]


@pytest.mark.slow
@pytest.mark.parametrize("algorithm, beta", [("r1", None), ("rlnc", 2.0)])
def test_faster_resampling_never_slower(algorithm, beta):
    medians = [
        montecarlo.run_experiment(
            ExperimentConfig(algorithm, 64, 0.4, beta=beta, alpha=alpha, replicates=1000, base_seed=13)
        )[1].median
        for alpha in (0.0, 0.25, 0.5, 1.0)
    ]
    assert medians[-1] <= medians[0]
    for earlier, later in zip(medians, medians[1:]):
        assert later <= earlier + 1


@pytest.mark.slow
@pytest.mark.parametrize("algorithm", ["r1", "r2", "rlnc"])
def test_completed_replicates_meet_lower_bound(algorithm):
    cfg = ExperimentConfig(algorithm, 64, 0.4, alpha=0.5, replicates=300, base_seed=17)
    records, _ = montecarlo.run_experiment(cfg)
    for r in records:
        if r.completed:
            assert r.rounds_to_allcast >= r.lower_bound


@pytest.mark.slow
@pytest.mark.parametrize("algorithm", ["r1", "r2", "rlnc"])
def test_parallel_matches_serial_at_n128(algorithm):
    cfg = ExperimentConfig(algorithm, 128, 0.4, replicates=16, base_seed=21)
    serial, serial_summary = montecarlo.run_experiment(cfg, threads=1)
    parallel, parallel_summary = montecarlo.run_experiment(cfg, threads=4)
    assert serial == parallel
    assert serial_summary == parallel_summary
