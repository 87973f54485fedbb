"""Replicated estimation of exceedance probabilities for the statistic.

Each replication draws n observations from the first mixing model at a
contamination level tied to n (schedule beta_n = n^(-rho), or a fixed
level), evaluates the scaled uniform distance against the second model's
analytic mixture CDF on a thinned grid, and the scenario estimate is the
fraction of replications whose statistic strictly exceeds the threshold.

Determinism contract: every replication's randomness is a pure function
of (master seed, scenario index, replication index, purpose), so results
are identical no matter how replications are scheduled across workers.
Scenario CSV output is byte-identical across worker counts; wall-clock
timing is therefore kept out of the CSV unless explicitly requested.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .empirical import EvalGridSpec, build_eval_grid, draw_sample, sup_stat
from .expansion import (
    DEFAULT_MEASURE,
    EvalGrid,
    NuMeasure,
    estimate_sup_gap,
    mixture_sup_gap,
)
from .laws import (
    CENTERED_EXPONENTIAL,
    STANDARD_NORMAL,
    ComponentLaw,
    RngStream,
)
from .pushforward import as_matrix, equal_product_pair, mixture_cdf_batch


@dataclass(frozen=True)
class Scenario:
    """One (contamination schedule, sample size) cell of the experiment."""

    m_a: object
    m_b: object
    n: int
    c: float = 1.0
    rho: float | None = None
    beta: float | None = None
    n_reps: int = 200
    grid: EvalGridSpec = field(default_factory=EvalGridSpec)
    master_seed: int = 0
    index: int = 0
    xi: ComponentLaw = CENTERED_EXPONENTIAL
    zeta: ComponentLaw = STANDARD_NORMAL

    def __post_init__(self):
        object.__setattr__(self, "m_a", as_matrix(self.m_a))
        object.__setattr__(self, "m_b", as_matrix(self.m_b))
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.n_reps < 1:
            raise ValueError(f"need at least one replication, got {self.n_reps}")
        if self.c < 0.0:
            raise ValueError(f"threshold must be nonnegative, got {self.c}")
        if (self.rho is None) == (self.beta is None):
            raise ValueError("set exactly one of rho (schedule) or beta (fixed)")
        if self.rho is not None:
            if self.rho <= 0.0:
                raise ValueError(f"rho must be positive, got {self.rho}")
            if not 0.0 < self.beta_n < 1.0:
                raise ValueError(
                    f"schedule gives beta_n = {self.beta_n}, outside (0, 1)"
                )
        elif not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")

    @property
    def beta_n(self) -> float:
        if self.rho is not None:
            return float(self.n) ** (-self.rho)
        return self.beta

    @property
    def scenario_id(self) -> str:
        tag = f"rho{self.rho:g}" if self.rho is not None else f"beta{self.beta:g}"
        return f"{tag}-n{self.n}"


@dataclass(frozen=True)
class ScenarioResult:
    """Exceedance estimate with its binomial standard error."""

    scenario: Scenario
    estimate: float
    stderr: float
    wall_ms: float
    stats: np.ndarray | None = None

    def __post_init__(self):
        if not 0.0 <= self.estimate <= 1.0:
            raise ValueError("estimate must be a probability")


def run_replication(scenario: Scenario, rep_index: int) -> float:
    """Statistic of one replication; pure in (seed, index, rep_index)."""
    root = RngStream(scenario.master_seed).child(scenario.index, rep_index)
    beta = scenario.beta_n
    sample = draw_sample(
        scenario.m_a, beta, scenario.n, root.child(0),
        xi=scenario.xi, zeta=scenario.zeta,
    )
    grid = build_eval_grid(sample, scenario.grid, root.child(1).generator())

    def target(pts):
        return mixture_cdf_batch(
            scenario.m_b, beta, pts, xi=scenario.xi, zeta=scenario.zeta,
            method="closed",
        )

    return sup_stat(sample, target, grid)


def _rep_block(args) -> tuple[list[int], list[float]]:
    scenario, indices = args
    return indices, [run_replication(scenario, r) for r in indices]


def replication_stats(scenario: Scenario, workers: int = 1) -> np.ndarray:
    """All replication statistics, ordered by replication index."""
    n_reps = scenario.n_reps
    if workers <= 1:
        return np.array([run_replication(scenario, r) for r in range(n_reps)])
    blocks = [
        (scenario, list(range(w, n_reps, workers))) for w in range(workers)
    ]
    out = np.empty(n_reps)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for indices, values in pool.map(_rep_block, blocks):
            out[indices] = values
    return out


def probability_above(stats: np.ndarray, c: float) -> tuple[float, float]:
    """Indicator average of {stat > c} and its binomial standard error."""
    p_hat = float(np.mean(stats > c))
    return p_hat, math.sqrt(p_hat * (1.0 - p_hat) / stats.size)


def estimate_probability(
    scenario: Scenario,
    workers: int = 1,
    retain_stats: bool = False,
) -> ScenarioResult:
    t0 = time.perf_counter()
    stats = replication_stats(scenario, workers=workers)
    p_hat, se = probability_above(stats, scenario.c)
    wall_ms = (time.perf_counter() - t0) * 1e3
    return ScenarioResult(
        scenario, p_hat, se, wall_ms, stats if retain_stats else None
    )


# ---------------------------------------------------------------------------
# sweeps and presets


@dataclass(frozen=True)
class SweepConfig:
    """Cross product of contamination schedules and sample sizes."""

    m_a: object
    m_b: object
    rho_list: tuple[float, ...]
    n_list: tuple[int, ...]
    c: float = 1.0
    n_reps: int = 200
    grid: EvalGridSpec = field(default_factory=lambda: EvalGridSpec(m_points=500))
    master_seed: int = 20260819
    xi: ComponentLaw = CENTERED_EXPONENTIAL
    zeta: ComponentLaw = STANDARD_NORMAL
    label: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "m_a", as_matrix(self.m_a))
        object.__setattr__(self, "m_b", as_matrix(self.m_b))
        object.__setattr__(self, "rho_list", tuple(float(r) for r in self.rho_list))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if not self.rho_list:
            raise ValueError("empty rho list")
        if not self.n_list:
            raise ValueError("empty n list")

    def scenarios(self) -> list[Scenario]:
        out = []
        index = 0
        for rho in self.rho_list:
            for n in self.n_list:
                out.append(
                    Scenario(
                        self.m_a, self.m_b, n, c=self.c, rho=rho,
                        n_reps=self.n_reps, grid=self.grid,
                        master_seed=self.master_seed, index=index,
                        xi=self.xi, zeta=self.zeta,
                    )
                )
                index += 1
        return out


def _preset(name: str, **overrides) -> SweepConfig:
    m_a, m_b = equal_product_pair(0.4)
    base = dict(m_a=m_a, m_b=m_b, c=1.0, label=name)
    if name == "fig1-left":
        base.update(
            rho_list=(0.25, 0.35, 0.50, 0.75),
            n_list=(100, 250, 500, 1000, 2000, 3500, 5000),
            n_reps=1000,
            grid=EvalGridSpec(m_points=1000),
        )
    elif name == "fig1-left-desk":
        base.update(
            rho_list=(0.25, 0.35, 0.50, 0.75),
            n_list=(100, 250, 500, 1000, 2000, 3500, 5000),
            n_reps=200,
            grid=EvalGridSpec(m_points=500),
        )
    elif name == "fig1-right":
        base.update(
            rho_list=tuple(np.round(np.arange(0.25, 0.7501, 0.05), 2)),
            n_list=(50_000,),
            n_reps=1000,
            grid=EvalGridSpec(m_points=1000),
        )
    elif name == "fig1-right-desk":
        base.update(
            rho_list=tuple(np.round(np.arange(0.25, 0.7501, 0.05), 2)),
            n_list=(20_000,),
            n_reps=200,
            grid=EvalGridSpec(m_points=500),
        )
    else:
        raise ValueError(f"unknown preset {name!r}")
    base.update(overrides)
    return SweepConfig(**base)


PRESET_NAMES = ("fig1-left", "fig1-left-desk", "fig1-right", "fig1-right-desk")


def preset_config(name: str, **overrides) -> SweepConfig:
    """Named experiment configurations; *-desk variants shrink the run."""
    return _preset(name, **overrides)


def run_sweep(
    config: SweepConfig,
    workers: int = 1,
    retain_stats: bool = False,
) -> list[ScenarioResult]:
    return [
        estimate_probability(s, workers=workers, retain_stats=retain_stats)
        for s in config.scenarios()
    ]


# ---------------------------------------------------------------------------
# CSV output

CSV_HEADER = (
    "scenario_id,rho,beta,n,c,N,grid_mode,grid_points,estimate,stderr,seed,wall_ms"
)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def results_csv_lines(
    results: list[ScenarioResult],
    metadata: dict | None = None,
    timing: bool = False,
) -> list[str]:
    """CSV content as lines; timing off keeps output byte-reproducible."""
    lines = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append(CSV_HEADER)
    for res in results:
        s = res.scenario
        lines.append(
            ",".join(
                [
                    s.scenario_id,
                    _fmt(s.rho),
                    _fmt(float(s.beta_n)),
                    str(s.n),
                    _fmt(float(s.c)),
                    str(s.n_reps),
                    s.grid.mode.value,
                    str(s.grid.m_points),
                    _fmt(res.estimate),
                    _fmt(res.stderr),
                    str(s.master_seed),
                    _fmt(res.wall_ms) if timing else "",
                ]
            )
        )
    return lines


def write_results_csv(
    results: list[ScenarioResult],
    path,
    metadata: dict | None = None,
    timing: bool = False,
) -> None:
    text = "\n".join(results_csv_lines(results, metadata, timing)) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# divergence-rate constant and the sample-size heuristic


def estimate_K(
    m_a,
    m_b,
    grid: EvalGrid | None = None,
    measure: NuMeasure = DEFAULT_MEASURE,
) -> float:
    """Leading slope K of sup |F_A - F_B| in the contamination level.

    Requires the uncontaminated models to coincide (same second-moment
    structure); the value is the finite-grid estimate norm_c * sup of the
    first-order field gap, matching the small-level slope convention.
    """
    m_a, m_b = as_matrix(m_a), as_matrix(m_b)
    if grid is None:
        grid = EvalGrid.tensor()
    base_gap = mixture_sup_gap(m_a, m_b, 0.0, grid, measure.xi, measure.zeta)
    if base_gap > 1e-8:
        raise ValueError(
            f"uncontaminated models differ by {base_gap:.2e}; K is undefined"
        )
    sup, _ = estimate_sup_gap(m_a, m_b, grid, measure, refine=False)
    return measure.norm_c * sup


def predict_threshold_n(rho: float, c: float, k_const: float) -> float:
    """Heuristic sample size where divergence overtakes the threshold.

    Solves sqrt(n) * K * n^(-rho) = c for n, i.e. the statistic's drift
    reaches c once n exceeds exp(log(c/K) / (1/2 - rho)).
    """
    if not 0.0 < rho < 0.5:
        raise ValueError(f"heuristic needs 0 < rho < 1/2, got {rho}")
    if k_const <= 0.0 or c <= 0.0:
        raise ValueError("need positive threshold and rate constant")
    return math.exp(math.log(c / k_const) / (0.5 - rho))


def scenario_with(config: SweepConfig, **kw) -> SweepConfig:
    """Convenience for CLI overrides on top of a preset."""
    return replace(config, **kw)
