"""Replicated exceedance estimation: determinism, sweeps, CSV, heuristics."""

import math

import numpy as np
import pytest

from mixident.empirical import EvalGridSpec
from mixident.laws import RngStream
from mixident.montecarlo import (
    CSV_HEADER,
    PRESET_NAMES,
    Scenario,
    ScenarioResult,
    SweepConfig,
    estimate_K,
    estimate_probability,
    predict_threshold_n,
    preset_config,
    probability_above,
    replication_stats,
    results_csv_lines,
    run_replication,
    run_sweep,
)
from mixident.pushforward import equal_product_pair, mixture_cdf_batch

A_PAIR = equal_product_pair(0.4)

# frozen from the worked pair on the default 101x101 tensor grid
K_WORKED = 0.09351603186261481


def tiny_scenario(**kw):
    args = dict(
        m_a=A_PAIR[0],
        m_b=A_PAIR[1],
        n=200,
        rho=0.25,
        n_reps=12,
        grid=EvalGridSpec(m_points=64),
        master_seed=99,
    )
    args.update(kw)
    return Scenario(**args)


# ---------------------------------------------------------------------------
# scenario construction


def test_scenario_rejects_bad_sizes():
    with pytest.raises(ValueError):
        tiny_scenario(n=0)
    with pytest.raises(ValueError):
        tiny_scenario(n_reps=0)
    with pytest.raises(ValueError):
        tiny_scenario(c=-0.5)


def test_scenario_needs_exactly_one_schedule():
    with pytest.raises(ValueError):
        tiny_scenario(rho=0.25, beta=0.3)
    with pytest.raises(ValueError):
        tiny_scenario(rho=None, beta=None)


def test_scenario_schedule_range():
    with pytest.raises(ValueError):
        tiny_scenario(rho=-0.25)
    # n = 1 makes the schedule level hit the closed endpoint 1
    with pytest.raises(ValueError):
        tiny_scenario(n=1, rho=0.25)
    with pytest.raises(ValueError):
        tiny_scenario(rho=None, beta=1.5)
    # fixed levels may sit on the endpoints
    tiny_scenario(rho=None, beta=0.0)
    tiny_scenario(rho=None, beta=1.0)


def test_beta_n_schedule_and_fixed():
    s = tiny_scenario(n=16, rho=0.5)
    assert s.beta_n == pytest.approx(0.25, abs=1e-15)
    s = tiny_scenario(rho=None, beta=0.3)
    assert s.beta_n == 0.3


def test_scenario_id_format():
    assert tiny_scenario(n=100).scenario_id == "rho0.25-n100"
    assert tiny_scenario(rho=None, beta=0.5, n=50).scenario_id == "beta0.5-n50"


def test_result_estimate_must_be_probability():
    s = tiny_scenario()
    with pytest.raises(ValueError):
        ScenarioResult(s, 1.5, 0.0, 0.0)


# ---------------------------------------------------------------------------
# replication determinism


def test_replication_is_pure_in_its_indices():
    s = tiny_scenario()
    first = run_replication(s, 3)
    again = run_replication(s, 3)
    assert first == again
    assert first != run_replication(s, 4)
    assert first > 0.0


def test_replications_differ_across_scenario_index():
    s0 = tiny_scenario(index=0)
    s1 = tiny_scenario(index=1)
    assert run_replication(s0, 0) != run_replication(s1, 0)


def test_worker_count_does_not_change_stats():
    s = tiny_scenario()
    serial = replication_stats(s, workers=1)
    assert serial.shape == (s.n_reps,)
    for workers in (2, 3):
        np.testing.assert_array_equal(replication_stats(s, workers=workers), serial)


def test_single_observation_replication_by_hand():
    # with one observation and a single quantile grid point the statistic
    # reduces to max(1 - G(x), G(x)) at the drawn corner
    s = tiny_scenario(
        n=1,
        rho=None,
        beta=0.5,
        grid=EvalGridSpec("quantile-tensor", 1),
        master_seed=31,
        index=2,
    )
    got = run_replication(s, 5)

    root = RngStream(s.master_seed).child(s.index, 5)
    from mixident.empirical import draw_sample

    sample = draw_sample(s.m_a, 0.5, 1, root.child(0))
    g = float(
        mixture_cdf_batch(s.m_b, 0.5, sample.points, method="closed")[0]
    )
    assert got == pytest.approx(max(1.0 - g, g), abs=1e-12)


# ---------------------------------------------------------------------------
# exceedance estimates


def test_probability_above_by_hand():
    stats = np.array([0.5, 1.5, 2.5])
    p, se = probability_above(stats, 1.0)
    assert p == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert se == pytest.approx(math.sqrt((2.0 / 3.0) * (1.0 / 3.0) / 3.0), abs=1e-15)
    assert probability_above(stats, 3.0) == (0.0, 0.0)
    # threshold equal to a stat: strict exceedance excludes it
    assert probability_above(stats, 2.5)[0] == 0.0


def test_probability_above_monotone_in_threshold():
    rng = np.random.default_rng(1234)
    for _ in range(20):
        stats = rng.gamma(2.0, 1.0, size=50)
        ps = [probability_above(stats, c)[0] for c in (0.0, 0.5, 1.0, 2.0, 4.0)]
        assert all(a >= b for a, b in zip(ps, ps[1:]))


def test_estimate_probability_extreme_thresholds():
    # the statistic is almost surely positive, so c = 0 is always exceeded
    res = estimate_probability(tiny_scenario(c=0.0))
    assert res.estimate == 1.0
    assert res.stats is None
    res = estimate_probability(tiny_scenario(c=1e9), retain_stats=True)
    assert res.estimate == 0.0
    assert res.stats.shape == (12,)


# ---------------------------------------------------------------------------
# sweeps and presets


def test_sweep_cross_product_and_indices():
    cfg = SweepConfig(
        A_PAIR[0],
        A_PAIR[1],
        rho_list=(0.25, 0.75),
        n_list=(50, 100, 200),
        n_reps=3,
        grid=EvalGridSpec(m_points=16),
    )
    scenarios = cfg.scenarios()
    assert len(scenarios) == 6
    assert [s.index for s in scenarios] == list(range(6))
    assert scenarios[0].rho == 0.25 and scenarios[0].n == 50
    assert scenarios[-1].rho == 0.75 and scenarios[-1].n == 200


def test_sweep_rejects_empty_lists():
    with pytest.raises(ValueError):
        SweepConfig(A_PAIR[0], A_PAIR[1], rho_list=(), n_list=(50,))
    with pytest.raises(ValueError):
        SweepConfig(A_PAIR[0], A_PAIR[1], rho_list=(0.25,), n_list=())


def test_presets_match_published_settings():
    full = preset_config("fig1-left")
    assert full.rho_list == (0.25, 0.35, 0.50, 0.75)
    assert full.n_list == (100, 250, 500, 1000, 2000, 3500, 5000)
    assert full.n_reps == 1000
    assert full.grid.m_points == 1000

    desk = preset_config("fig1-left-desk")
    assert desk.rho_list == full.rho_list
    assert desk.n_list == full.n_list
    assert desk.n_reps == 200
    assert desk.grid.m_points == 500

    right = preset_config("fig1-right")
    assert len(right.rho_list) == 11
    assert right.rho_list[0] == 0.25 and right.rho_list[-1] == 0.75
    assert right.n_list == (50_000,)

    assert set(PRESET_NAMES) >= {"fig1-left", "fig1-right"}
    with pytest.raises(ValueError):
        preset_config("fig2")


def test_preset_overrides():
    cfg = preset_config("fig1-left-desk", n_reps=5, n_list=(50,))
    assert cfg.n_reps == 5
    assert cfg.n_list == (50,)


# ---------------------------------------------------------------------------
# CSV emission


def small_sweep_results(workers=1, retain=False):
    cfg = SweepConfig(
        A_PAIR[0],
        A_PAIR[1],
        rho_list=(0.25,),
        n_list=(50, 100),
        n_reps=6,
        grid=EvalGridSpec(m_points=32),
        master_seed=7,
    )
    return run_sweep(cfg, workers=workers, retain_stats=retain)


def test_csv_schema():
    results = small_sweep_results()
    lines = results_csv_lines(results, {"label": "demo"})
    assert lines[0] == "# label: demo"
    assert lines[1] == CSV_HEADER
    assert len(lines) == 2 + len(results)
    row = lines[2].split(",")
    assert len(row) == len(CSV_HEADER.split(","))
    assert row[0] == "rho0.25-n50"
    assert int(row[3]) == 50
    assert 0.0 <= float(row[8]) <= 1.0
    assert row[-1] == ""  # timing hidden by default


def test_csv_timing_column_opt_in():
    results = small_sweep_results()
    lines = results_csv_lines(results, timing=True)
    assert float(lines[1].split(",")[-1]) > 0.0


def test_csv_byte_identical_across_workers():
    serial = results_csv_lines(small_sweep_results(workers=1))
    threaded = results_csv_lines(small_sweep_results(workers=2))
    assert serial == threaded


# ---------------------------------------------------------------------------
# rate constant and threshold heuristic


def test_estimate_K_worked_pair_frozen():
    k = estimate_K(*A_PAIR)
    assert k == pytest.approx(K_WORKED, rel=1e-9)


def test_estimate_K_zero_for_equal_models():
    assert estimate_K(A_PAIR[0], A_PAIR[0]) == pytest.approx(0.0, abs=1e-12)


def test_estimate_K_matches_small_level_slope():
    from mixident.expansion import mixture_sup_gap

    beta = 0.005
    slope = mixture_sup_gap(A_PAIR[0], A_PAIR[1], beta) / beta
    assert abs(slope - K_WORKED) / K_WORKED < 0.05


def test_estimate_K_requires_matching_backgrounds():
    with pytest.raises(ValueError):
        estimate_K(np.eye(2), np.diag((2.0, 1.0)))


def test_predict_threshold_examples():
    # c/K = 4 at rho = 1/4: the drift passes the threshold at n = 4^4
    assert predict_threshold_n(0.25, 4.0, 1.0) == pytest.approx(256.0, rel=1e-9)
    assert predict_threshold_n(0.25, 1.0, 1.0) == pytest.approx(1.0, abs=1e-12)
    # slower schedules push the crossover far out
    assert predict_threshold_n(0.45, 10.0, 1.0) > 1e12


def test_predict_threshold_solves_drift_equation():
    rng = np.random.default_rng(5150)
    for _ in range(25):
        rho = rng.uniform(0.05, 0.45)
        c = rng.uniform(0.5, 4.0)
        k = rng.uniform(0.05, 2.0)
        n_star = predict_threshold_n(rho, c, k)
        drift = math.sqrt(n_star) * k * n_star ** (-rho)
        assert drift == pytest.approx(c, rel=1e-9)


def test_predict_threshold_rejects_bad_arguments():
    for rho in (0.0, 0.5, 0.75, -0.1):
        with pytest.raises(ValueError):
            predict_threshold_n(rho, 1.0, 1.0)
    with pytest.raises(ValueError):
        predict_threshold_n(0.25, 0.0, 1.0)
    with pytest.raises(ValueError):
        predict_threshold_n(0.25, 1.0, -1.0)
