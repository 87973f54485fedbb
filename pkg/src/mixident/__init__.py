"""mixident: numerical lab for mixing-matrix identifiability under contaminated noise."""

from mixident.checks import (
    CHECK_IDS,
    CheckReport,
    CheckRow,
    run_checks,
)
from mixident.empirical import (
    EmpiricalCdf,
    EvalGridSpec,
    GridMode,
    Sample2D,
    build_eval_grid,
    corner_grid,
    draw_sample,
    ecdf_eval_batch,
    sup_stat,
)
from mixident.expansion import (
    DEFAULT_MEASURE,
    EvalGrid,
    GammaTerm,
    NuMeasure,
    divergence_rate_constant,
    estimate_sup_gap,
    gamma_diff_at,
    gamma_diff_batch,
    gamma_k_at,
    gamma_k_batch,
    mixture_sup_gap,
    polynomial_reconstruct,
    refine_sup,
    sup_on_grid,
)
from mixident.laws import (
    CENTERED_EXPONENTIAL,
    STANDARD_EXPONENTIAL,
    STANDARD_NORMAL,
    ComponentKind,
    ComponentLaw,
    ContaminatedLaw,
    RngStream,
    kolmogorov_distance_univ,
)
from mixident.limitfield import (
    LimitLawSample,
    SandwichBounds,
    sandwich_bounds,
    simulate_limit_sup,
)
from mixident.montecarlo import (
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
    write_results_csv,
)
from mixident.pushforward import (
    DEFAULT_QUAD,
    MixingMatrix2,
    QuadConfig,
    as_matrix,
    bvn_cdf,
    equal_product_pair,
    mixture_cdf_batch,
    mixture_pushforward_cdf,
    mixture_weights,
    pure_cdf_batch,
    pure_pushforward_cdf,
)
from mixident.svgplot import AxesSpec, Series, render_line_chart

__version__ = "0.1.0"

__all__ = [
    "AxesSpec",
    "CENTERED_EXPONENTIAL",
    "CHECK_IDS",
    "CheckReport",
    "CheckRow",
    "ComponentKind",
    "ComponentLaw",
    "ContaminatedLaw",
    "DEFAULT_MEASURE",
    "DEFAULT_QUAD",
    "EmpiricalCdf",
    "EvalGrid",
    "EvalGridSpec",
    "GammaTerm",
    "GridMode",
    "LimitLawSample",
    "MixingMatrix2",
    "NuMeasure",
    "QuadConfig",
    "RngStream",
    "Sample2D",
    "SandwichBounds",
    "Scenario",
    "ScenarioResult",
    "Series",
    "STANDARD_EXPONENTIAL",
    "STANDARD_NORMAL",
    "SweepConfig",
    "as_matrix",
    "build_eval_grid",
    "bvn_cdf",
    "corner_grid",
    "divergence_rate_constant",
    "draw_sample",
    "ecdf_eval_batch",
    "equal_product_pair",
    "estimate_K",
    "estimate_probability",
    "estimate_sup_gap",
    "gamma_diff_at",
    "gamma_diff_batch",
    "gamma_k_at",
    "gamma_k_batch",
    "kolmogorov_distance_univ",
    "mixture_cdf_batch",
    "mixture_pushforward_cdf",
    "mixture_sup_gap",
    "mixture_weights",
    "polynomial_reconstruct",
    "predict_threshold_n",
    "preset_config",
    "probability_above",
    "pure_cdf_batch",
    "pure_pushforward_cdf",
    "refine_sup",
    "replication_stats",
    "results_csv_lines",
    "run_checks",
    "run_replication",
    "run_sweep",
    "sandwich_bounds",
    "simulate_limit_sup",
    "sup_on_grid",
    "sup_stat",
    "write_results_csv",
    "__version__",
]
