import math

import numpy as np
import pytest

from ssac.header import header_len_ecc, header_len_rlnc, header_len_ssac
from ssac.sim import ExperimentConfig, run_experiment, trial_rng, worker_count


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(kind="nope", n_values=(8,))
    with pytest.raises(ValueError):
        ExperimentConfig(kind="full-rank", n_values=(8,), trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(kind="solution-existence", n_values=(8,), k_rule="explicit")
    with pytest.raises(ValueError):
        ExperimentConfig(kind="solution-existence", n_values=(8,), k_rule="weird")


def test_trial_rng_is_deterministic_and_distinct():
    a = trial_rng(1, 16, 2, 5).integers(0, 1 << 30, size=4)
    b = trial_rng(1, 16, 2, 5).integers(0, 1 << 30, size=4)
    c = trial_rng(1, 16, 2, 6).integers(0, 1 << 30, size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_solution_existence_records():
    cfg = ExperimentConfig(
        kind="solution-existence",
        n_values=(16,),
        m_values=(2,),
        q_values=(16, 256),
        trials=40,
        seed=5,
        log_bases=(2.0, math.e),
        collect_trials=True,
    )
    result = run_experiment(cfg)
    assert len(result.records) == 4  # 2 fields x 2 log bases
    for rec in result.records:
        assert rec["k_rule"] == "k-opt"
        assert rec["failures"] + round(rec["success_prob"] * rec["trials"]) == 40
        assert len(rec["trial_successes"]) == 40
        if rec["failures"] == 40:
            assert rec["mean_attempts"] is None
        else:
            assert rec["mean_attempts"] >= 1
    ks = {rec["k"] for rec in result.records}
    assert ks == {6, 4}  # k_opt(2,16) under base 2 and base e


def test_explicit_k_values():
    cfg = ExperimentConfig(
        kind="solution-existence",
        n_values=(8,),
        m_values=(2,),
        q_values=(16,),
        trials=10,
        k_rule="explicit",
        k_values=(3, 5),
    )
    recs = run_experiment(cfg).records
    assert [r["k"] for r in recs] == [3, 5]
    assert all(r["k_rule"] == "explicit" and r["log_base"] is None for r in recs)


def test_k_opt_plus_delta_rule():
    cfg = ExperimentConfig(
        kind="solution-existence",
        n_values=(16,),
        m_values=(2,),
        q_values=(16,),
        trials=5,
        k_rule="k-opt+3",
    )
    recs = run_experiment(cfg).records
    assert recs[0]["k"] == 6 + 3


def test_full_rank_overhead_coupling():
    """Shared trial streams make success monotone per trial, not just on average."""
    cfg = ExperimentConfig(
        kind="full-rank",
        n_values=(16,),
        m_values=(3,),
        q_values=(16,),
        overhead_values=(2, 6, 10),
        trials=120,
        seed=9,
        collect_trials=True,
    )
    recs = run_experiment(cfg).records
    by_overhead = {r["overhead"]: r["trial_successes"] for r in recs}
    for low, high in ((2, 6), (6, 10)):
        for got_low, got_high in zip(by_overhead[low], by_overhead[high]):
            assert got_high >= got_low


def test_full_buffer_makes_recode_near_certain():
    """With k = n random rows the buffer almost always spans every admissible row."""
    cfg = ExperimentConfig(
        kind="solution-existence", n_values=(8,), m_values=(2,), q_values=(16,),
        trials=200, seed=9, k_rule="explicit", k_values=(8,),
    )
    rec = run_experiment(cfg).records[0]
    assert rec["success_prob"] >= 0.97


def test_ci_shrinks_with_trials():
    def halfwidths(trials):
        cfg = ExperimentConfig(
            kind="full-rank", n_values=(16,), m_values=(2,), q_values=(16,),
            overhead_values=(2,), trials=trials, seed=3,
        )
        return [r["ci"] for r in run_experiment(cfg).records]

    narrow = halfwidths(1000)
    wide = halfwidths(250)
    assert all(0 < lo < hi for lo, hi in zip(narrow, wide))

    single = ExperimentConfig(
        kind="full-rank", n_values=(16,), m_values=(2,), q_values=(16,),
        overhead_values=(2,), trials=1, seed=3,
    )
    for rec in run_experiment(single).records:
        assert rec["full_rank_prob"] in (0.0, 1.0)


def test_header_table_matches_length_models():
    cfg = ExperimentConfig(
        kind="header-table", n_values=(16, 128), m_values=(3,), q_values=(256,),
        trials=1,
    )
    recs = run_experiment(cfg).records
    for rec in recs:
        n, m, q = rec["n"], rec["m"], rec["q"]
        assert rec["ssac_bits"] == header_len_ssac(m, n, 2)
        assert rec["rlnc_bits"] == header_len_rlnc(n, q)
        assert rec["ecc_bits"] == header_len_ecc(m, n, q)
        assert rec["rlnc_over_ssac"] == pytest.approx(rec["rlnc_bits"] / rec["ssac_bits"])
    assert recs[1]["ssac_bits"] == 24
    assert recs[1]["rlnc_bits"] == 1024


def test_line_network_depth_zero_equals_full_rank():
    """With no recoding hops the sink sees the raw source packets."""
    common = dict(
        n_values=(8,), m_values=(2,), q_values=(16,),
        overhead_values=(6,), trials=60, seed=13, collect_trials=True,
    )
    line = run_experiment(
        ExperimentConfig(kind="line-network", depth=0, **common)
    ).records[0]
    full = run_experiment(
        ExperimentConfig(kind="full-rank", **common)
    ).records[0]
    assert line["trial_successes"] == full["trial_successes"]
    assert line["decode_prob"] == full["full_rank_prob"]


def test_line_network_records():
    cfg = ExperimentConfig(
        kind="line-network",
        n_values=(8,),
        m_values=(2,),
        q_values=(16,),
        overhead_values=(8,),
        depth=2,
        trials=30,
        seed=3,
        payload_symbols=2,
    )
    rec = run_experiment(cfg).records[0]
    assert rec["source_packets"] == 16
    assert rec["depth"] == 2
    assert 0.0 <= rec["decode_prob"] <= 1.0
    # every hop forwards at most source_packets packets of 10 header bits
    assert rec["mean_header_bits"] <= 16 * 3 * 10


def test_parallel_matches_serial():
    cfg = ExperimentConfig(
        kind="full-rank",
        n_values=(8, 16),
        m_values=(2, 3),
        q_values=(16,),
        overhead_values=(4,),
        trials=60,
        seed=21,
    )
    serial = run_experiment(cfg, workers=1).records
    parallel = run_experiment(cfg, workers=3).records
    assert serial == parallel


def test_metadata_reports_both_bases():
    cfg = ExperimentConfig(
        kind="header-table", n_values=(128,), m_values=(2,), q_values=(16,), trials=1
    )
    meta = run_experiment(cfg).metadata
    entry = meta["k_opt"][0]
    assert entry["base2"] == 12 and entry["base_e"] == 8


def test_worker_count_env(monkeypatch):
    monkeypatch.delenv("SSAC_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("SSAC_THREADS", "4")
    assert worker_count() == 4
    monkeypatch.setenv("SSAC_THREADS", "zebra")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.setenv("SSAC_THREADS", "0")
    with pytest.raises(ValueError):
        worker_count()
