"""Monte-Carlo experiment engine.

Each experiment sweeps a parameter grid and aggregates per-trial
outcomes into one record per grid point.  Trial randomness is derived
from ``(seed, n, m, trial)`` only, deliberately excluding the swept
parameter (field size, buffer size, overhead, hop count): grid points
that differ only in the swept parameter therefore share their random
draws, which pairs the comparisons the statistical checks rely on.
Aggregation never depends on execution order, so records are identical
whether a run is serial or spread over worker processes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .coding import (
    CodingParams,
    InsufficientRankError,
    NodeBuffer,
    RecodeError,
    buffer_from_packets,
    full_rank_probability_trial,
    k_opt,
    random_sparse_vector,
    recode,
    sink_decode,
    source_encode,
)
from .gf import field_for_order
from .header import (
    AllowedSet,
    default_allowed_set,
    header_len_ecc,
    header_len_rlnc,
    header_len_ssac,
)
from .linalg import GfMatrix

EXPERIMENT_KINDS = ("solution-existence", "full-rank", "header-table", "line-network")

#: Stream index reserved for per-grid-point payload data, far above any
#: plausible trial count.
_ORIGINALS_STREAM = 1 << 40


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid and sampling parameters for one experiment run."""

    kind: str
    n_values: tuple[int, ...]
    m_values: tuple[int, ...] = (2,)
    q_values: tuple[int, ...] = (16, 256)
    trials: int = 1000
    seed: int = 0
    k_rule: str = "k-opt"
    k_values: tuple[int, ...] = ()
    log_bases: tuple[float, ...] = (2.0,)
    overhead_values: tuple[int, ...] = (0,)
    depth: int = 1
    payload_symbols: int = 1
    max_attempts: int = 100_000
    poly_by_q: dict = dc_field(default_factory=dict)
    allowed_by_q: dict = dc_field(default_factory=dict)
    collect_trials: bool = False

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.k_rule == "explicit" and not self.k_values:
            raise ValueError("explicit k rule needs k values")
        if not self.k_rule.startswith(("explicit", "k-opt")):
            raise ValueError(f"unknown k rule {self.k_rule!r}")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")


@dataclass
class ExperimentResult:
    kind: str
    records: list[dict]
    metadata: dict


def trial_rng(seed: int, n: int, m: int, trial: int) -> np.random.Generator:
    """The generator assigned to one trial; shared across swept parameters."""
    return np.random.default_rng((seed, n, m, trial))


def _params_for(cfg: ExperimentConfig, q: int, n: int, m: int) -> CodingParams:
    fld = field_for_order(q, cfg.poly_by_q.get(q))
    override = cfg.allowed_by_q.get(q)
    allowed = (
        AllowedSet(fld, override) if override else default_allowed_set(fld)
    )
    return CodingParams(fld, n, m, allowed, max_attempts=cfg.max_attempts)


def _k_specs(cfg: ExperimentConfig, m: int, n: int) -> list[tuple[int, str, float | None]]:
    """Resolved buffer sizes for one (m, n): (k, rule label, log base)."""
    if cfg.k_rule == "explicit":
        return [(k, "explicit", None) for k in cfg.k_values]
    delta = 0
    if cfg.k_rule.startswith("k-opt+"):
        delta = int(cfg.k_rule.split("+", 1)[1])
    return [
        (k_opt(m, n, base) + delta, cfg.k_rule, base) for base in cfg.log_bases
    ]


def _binomial_ci(successes: int, trials: int) -> tuple[float, float]:
    p = successes / trials
    return p, 1.96 * math.sqrt(p * (1.0 - p) / trials)


def _solution_existence_point(cfg: ExperimentConfig, point: dict) -> dict:
    n, m, q, k = point["n"], point["m"], point["q"], point["k"]
    params = _params_for(cfg, q, n, m)
    payloads = GfMatrix.zeros(params.field, k, 1)
    successes = 0
    attempts_total = 0
    outcomes = []
    for t in range(cfg.trials):
        rng = trial_rng(cfg.seed, n, m, t)
        rows = tuple(random_sparse_vector(params, rng) for _ in range(k))
        buffer = NodeBuffer(params, rows, payloads)
        try:
            outcome = recode(buffer, rng)
            successes += 1
            attempts_total += outcome.attempts
            outcomes.append(True)
        except RecodeError:
            outcomes.append(False)
    p, ci = _binomial_ci(successes, cfg.trials)
    record = dict(point)
    record.update(
        trials=cfg.trials,
        success_prob=p,
        ci=ci,
        mean_attempts=attempts_total / successes if successes else None,
        failures=cfg.trials - successes,
        seed=cfg.seed,
    )
    if cfg.collect_trials:
        record["trial_successes"] = outcomes
    return record


def _full_rank_point(cfg: ExperimentConfig, point: dict) -> dict:
    n, m, q, overhead = point["n"], point["m"], point["q"], point["overhead"]
    params = _params_for(cfg, q, n, m)
    successes = 0
    outcomes = []
    for t in range(cfg.trials):
        rng = trial_rng(cfg.seed, n, m, t)
        ok = full_rank_probability_trial(params, overhead, rng)
        successes += ok
        outcomes.append(bool(ok))
    p, ci = _binomial_ci(successes, cfg.trials)
    record = dict(point)
    record.update(trials=cfg.trials, full_rank_prob=p, ci=ci, seed=cfg.seed)
    if cfg.collect_trials:
        record["trial_successes"] = outcomes
    return record


def _line_network_point(cfg: ExperimentConfig, point: dict) -> dict:
    n, m, q, overhead = point["n"], point["m"], point["q"], point["overhead"]
    params = _params_for(cfg, q, n, m)
    k_buf = point["k"]
    source_packets = n + overhead
    org_rng = np.random.default_rng((cfg.seed, n, m, _ORIGINALS_STREAM))
    originals = GfMatrix(
        params.field,
        org_rng.integers(
            0, params.field.order, size=(n, cfg.payload_symbols)
        ).astype(np.uint8),
    )
    header_bits = params.header_bits
    successes = 0
    recode_failures = 0
    header_bits_sum = 0
    outcomes = []
    for t in range(cfg.trials):
        rng = trial_rng(cfg.seed, n, m, t)
        packets = source_encode(params, originals, source_packets, rng)
        sent = len(packets)
        for _ in range(cfg.depth):
            outgoing = []
            for _ in range(len(packets)):
                take = min(k_buf, len(packets))
                chosen = rng.permutation(len(packets))[:take]
                buffer = buffer_from_packets(params, [packets[i] for i in chosen])
                try:
                    outgoing.append(recode(buffer, rng).packet)
                except RecodeError:
                    recode_failures += 1
            packets = outgoing
            sent += len(packets)
            if not packets:
                break
        ok = False
        if packets:
            try:
                ok = sink_decode(params, packets) == originals
            except InsufficientRankError:
                ok = False
        successes += ok
        header_bits_sum += sent * header_bits
        outcomes.append(bool(ok))
    p, ci = _binomial_ci(successes, cfg.trials)
    record = dict(point)
    record.update(
        source_packets=source_packets,
        trials=cfg.trials,
        decode_prob=p,
        ci=ci,
        mean_header_bits=header_bits_sum / cfg.trials,
        failures=recode_failures,
        seed=cfg.seed,
    )
    if cfg.collect_trials:
        record["trial_successes"] = outcomes
    return record


def _grid(cfg: ExperimentConfig) -> list[dict]:
    points = []
    if cfg.kind == "solution-existence":
        for n in cfg.n_values:
            for m in cfg.m_values:
                for q in cfg.q_values:
                    for k, rule, base in _k_specs(cfg, m, n):
                        points.append(
                            dict(n=n, m=m, q=q, k=k, k_rule=rule, log_base=base)
                        )
    elif cfg.kind in ("full-rank", "line-network"):
        for n in cfg.n_values:
            for m in cfg.m_values:
                for q in cfg.q_values:
                    for overhead in cfg.overhead_values:
                        point = dict(n=n, m=m, q=q, overhead=overhead)
                        if cfg.kind == "line-network":
                            point["k"] = _k_specs(cfg, m, n)[0][0]
                            point["depth"] = cfg.depth
                        points.append(point)
    else:  # header-table
        for n in cfg.n_values:
            for m in cfg.m_values:
                for q in cfg.q_values:
                    points.append(dict(n=n, m=m, q=q))
    return points


def _point_worker(args) -> dict:
    cfg, point = args
    runner = {
        "solution-existence": _solution_existence_point,
        "full-rank": _full_rank_point,
        "line-network": _line_network_point,
    }[cfg.kind]
    return runner(cfg, point)


def _header_table_record(cfg: ExperimentConfig, point: dict) -> dict:
    n, m, q = point["n"], point["m"], point["q"]
    q_set_size = len(cfg.allowed_by_q.get(q, ())) or 2
    ssac_bits = header_len_ssac(m, n, q_set_size)
    rlnc_bits = header_len_rlnc(n, q)
    ecc_bits = header_len_ecc(m, n, q)
    return dict(
        point,
        ssac_bits=ssac_bits,
        rlnc_bits=rlnc_bits,
        ecc_bits=ecc_bits,
        rlnc_over_ssac=rlnc_bits / ssac_bits,
        ecc_over_ssac=ecc_bits / ssac_bits,
    )


def worker_count() -> int:
    """Worker processes to use, from the SSAC_THREADS environment variable."""
    raw = os.environ.get("SSAC_THREADS", "1")
    try:
        count = int(raw)
    except ValueError as exc:
        raise ValueError(f"SSAC_THREADS must be an integer, got {raw!r}") from exc
    if count < 1:
        raise ValueError(f"SSAC_THREADS must be at least 1, got {count}")
    return count


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Run the configured sweep and return one record per grid point."""
    points = _grid(cfg)
    if cfg.kind == "header-table":
        records = [_header_table_record(cfg, p) for p in points]
    elif workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_point_worker, [(cfg, p) for p in points]))
    else:
        records = [_point_worker((cfg, p)) for p in points]
    metadata = {
        "kind": cfg.kind,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "k_rule": cfg.k_rule,
        "log_bases": list(cfg.log_bases),
        "max_attempts": cfg.max_attempts,
        "k_opt": [
            {
                "n": n,
                "m": m,
                "base2": k_opt(m, n, 2.0),
                "base_e": k_opt(m, n, math.e),
            }
            for n in cfg.n_values
            for m in cfg.m_values
            if n > m
        ],
    }
    return ExperimentResult(cfg.kind, records, metadata)


def run_solution_existence(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    return run_experiment(cfg, workers)


def run_full_rank(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    return run_experiment(cfg, workers)


def run_header_table(cfg: ExperimentConfig) -> ExperimentResult:
    return run_experiment(cfg)


def run_line_network(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    return run_experiment(cfg, workers)
