"""Polynomial structure of the contaminated pushforward CDF.

With coordinates i.i.d. ``beta * xi + (1 - beta) * zeta``, the orthant
probability P(A e <= x) is an exact degree-2 polynomial in beta.  This
module evaluates the coefficient fields of that polynomial, the pairwise
difference of the first-order fields for two mixing matrices, and
uniform-norm estimates of such fields on finite grids.

Coefficients are normalized by the uniform-norm distance between the
contaminant and the background, so the first-order field is O(1) and the
small-contamination divergence rate of two mixtures reads off directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .laws import (
    CENTERED_EXPONENTIAL,
    STANDARD_NORMAL,
    ComponentLaw,
    kolmogorov_distance_univ,
)
from .pushforward import (
    DEFAULT_QUAD,
    QuadConfig,
    as_matrix,
    mixture_cdf_batch,
    pure_cdf_batch,
)

P_DIM = 2  # the analytic engine is two-dimensional throughout


@dataclass(frozen=True)
class NuMeasure:
    """Normalized signed difference between contaminant and background.

    The raw difference of the two CDFs is rescaled by its uniform norm
    ``norm_c``, so the resulting signed measure has uniform norm one.
    """

    xi: ComponentLaw = CENTERED_EXPONENTIAL
    zeta: ComponentLaw = STANDARD_NORMAL
    norm_c: float = field(default=0.0)

    def __post_init__(self):
        if self.xi == self.zeta:
            raise ValueError("contaminant and background must differ")
        if self.norm_c == 0.0:
            object.__setattr__(
                self, "norm_c", kolmogorov_distance_univ(self.xi, self.zeta)
            )
        if not self.norm_c > 0.0:
            raise ValueError("norm_c must be positive")

    def nu_cdf(self, t: float) -> float:
        return (self.xi.cdf(t) - self.zeta.cdf(t)) / self.norm_c

    def nu_cdf_batch(self, t: np.ndarray) -> np.ndarray:
        return (self.xi.cdf_batch(t) - self.zeta.cdf_batch(t)) / self.norm_c


DEFAULT_MEASURE = NuMeasure()


@dataclass(frozen=True, eq=False)
class EvalGrid:
    """Finite set of evaluation points in the plane, shape (n, 2)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise ValueError(f"points must have shape (n >= 1, 2), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        object.__setattr__(self, "points", pts)

    @classmethod
    def tensor(cls, lo: float = -6.0, hi: float = 6.0, n: int = 101) -> "EvalGrid":
        axis = np.linspace(lo, hi, n)
        g1, g2 = np.meshgrid(axis, axis, indexing="ij")
        return cls(np.column_stack([g1.ravel(), g2.ravel()]))

    def __len__(self) -> int:
        return self.points.shape[0]


def _placements(k: int) -> tuple[tuple[int, ...], ...]:
    """All 0/1 coordinate flags of length P_DIM with exactly k ones."""
    out = []
    for ones in combinations(range(P_DIM), k):
        flags = [0] * P_DIM
        for i in ones:
            flags[i] = 1
        out.append(tuple(flags))
    return tuple(out)


@dataclass(frozen=True)
class GammaTerm:
    """Order-k coefficient field of the expansion for one mixing matrix.

    The field is a sum over the C(2, k) placements of the normalized
    difference measure among the background factors.  Each difference
    factor expands bilinearly, so every evaluation reduces to pure
    pushforward CDF calls divided by norm_c**k.
    """

    matrix: object
    order: int
    measure: NuMeasure = DEFAULT_MEASURE

    def __post_init__(self):
        if not 0 <= self.order <= P_DIM:
            raise ValueError(f"order must lie in [0, {P_DIM}], got {self.order}")
        object.__setattr__(self, "matrix", as_matrix(self.matrix))

    @property
    def placements(self) -> tuple[tuple[int, ...], ...]:
        return _placements(self.order)

    def at_batch(
        self,
        points,
        method: str = "closed",
        cfg: QuadConfig = DEFAULT_QUAD,
    ) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        xi, zeta, c = self.measure.xi, self.measure.zeta, self.measure.norm_c
        total = np.zeros(pts.shape[0])
        cache: dict[tuple[int, int], np.ndarray] = {}

        def pure(flags: tuple[int, ...]) -> np.ndarray:
            if flags not in cache:
                comps = tuple(xi if f else zeta for f in flags)
                cache[flags] = pure_cdf_batch(
                    self.matrix, comps, pts, method=method, cfg=cfg
                )
            return cache[flags]

        for placement in self.placements:
            # expand each difference factor: sign is (-1)^(number of
            # difference slots resolved to the background law)
            slots = [i for i, f in enumerate(placement) if f]
            for resolved in range(1 << len(slots)):
                flags = list(placement)
                sign = 1.0
                for j, i in enumerate(slots):
                    if (resolved >> j) & 1:
                        flags[i] = 0
                        sign = -sign
                total += sign * pure(tuple(flags))
        return total / c**self.order

    def at(self, x, method: str = "quad", cfg: QuadConfig = DEFAULT_QUAD) -> float:
        return float(self.at_batch(np.asarray([x], dtype=float), method, cfg)[0])


def gamma_k_at(
    m,
    k: int,
    x,
    measure: NuMeasure = DEFAULT_MEASURE,
    method: str = "quad",
    cfg: QuadConfig = DEFAULT_QUAD,
) -> float:
    """Order-k expansion coefficient field at a single point."""
    return GammaTerm(m, k, measure).at(x, method=method, cfg=cfg)


def gamma_k_batch(
    m,
    k: int,
    points,
    measure: NuMeasure = DEFAULT_MEASURE,
    method: str = "closed",
    cfg: QuadConfig = DEFAULT_QUAD,
) -> np.ndarray:
    """Order-k expansion coefficient field over an (n, 2) point array."""
    return GammaTerm(m, k, measure).at_batch(points, method=method, cfg=cfg)


def polynomial_reconstruct(
    m,
    beta: float,
    x,
    measure: NuMeasure = DEFAULT_MEASURE,
    method: str = "quad",
    cfg: QuadConfig = DEFAULT_QUAD,
) -> float:
    """Rebuild the mixture CDF from the expansion coefficients.

    Evaluates sum_k beta^k * norm_c^k * coefficient_k(x).  Must agree
    with the direct mixture evaluation; the two share the pure CDF
    engine but combine terms along different routes.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    c = measure.norm_c
    total = 0.0
    for k in range(P_DIM + 1):
        total += beta**k * c**k * gamma_k_at(m, k, x, measure, method=method, cfg=cfg)
    return total


def gamma_diff_at(
    m_a,
    m_b,
    x,
    measure: NuMeasure = DEFAULT_MEASURE,
    method: str = "quad",
    cfg: QuadConfig = DEFAULT_QUAD,
) -> float:
    """First-order coefficient gap between two mixing matrices at x."""
    return gamma_k_at(m_a, 1, x, measure, method, cfg) - gamma_k_at(
        m_b, 1, x, measure, method, cfg
    )


def gamma_diff_batch(
    m_a,
    m_b,
    points,
    measure: NuMeasure = DEFAULT_MEASURE,
    method: str = "closed",
    cfg: QuadConfig = DEFAULT_QUAD,
) -> np.ndarray:
    return gamma_k_batch(m_a, 1, points, measure, method, cfg) - gamma_k_batch(
        m_b, 1, points, measure, method, cfg
    )


def sup_on_grid(values) -> float:
    """Max absolute value over a finite evaluation; lower bound of the sup."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("empty grid")
    return float(np.max(np.abs(v)))


def grid_argmax(values, grid: EvalGrid) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.size != len(grid):
        raise ValueError("values and grid length differ")
    return grid.points[int(np.argmax(np.abs(v)))].copy()


def refine_sup(f, x0, step: float, shrink_tol: float = 1e-3, max_iter: int = 200):
    """Compass search maximizing |f| from x0; returns (point, value).

    Deterministic pattern search: probe the four axis directions, move to
    the best improvement, halve the step when none improves, stop when
    the step falls below shrink_tol.
    """
    x = np.asarray(x0, dtype=float).copy()
    best = abs(f(x))
    h = float(step)
    for _ in range(max_iter):
        if h < shrink_tol:
            break
        moved = False
        for d in ((h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)):
            cand = x + d
            val = abs(f(cand))
            if val > best:
                x, best, moved = cand, val, True
                break
        if not moved:
            h *= 0.5
    return x, best


def estimate_sup_gap(
    m_a,
    m_b,
    grid: EvalGrid | None = None,
    measure: NuMeasure = DEFAULT_MEASURE,
    method: str = "closed",
    cfg: QuadConfig = DEFAULT_QUAD,
    refine: bool = True,
):
    """Grid estimate of sup |first-order gap| with local refinement.

    Returns (sup_value, argmax_point).  The grid scan gives a lower
    bound; compass-search refinement around the argmax tightens it.
    """
    if grid is None:
        grid = EvalGrid.tensor()
    vals = gamma_diff_batch(m_a, m_b, grid.points, measure, method, cfg)
    x0 = grid_argmax(vals, grid)
    best = sup_on_grid(vals)
    if not refine:
        return best, x0
    step = float(np.max(grid.points[1:] - grid.points[:-1])) if len(grid) > 1 else 0.1

    def f(x):
        return gamma_diff_at(m_a, m_b, x, measure, method="closed", cfg=cfg)

    x_ref, val = refine_sup(f, x0, step=max(step, 1e-2))
    if val > best:
        return val, x_ref
    return best, x0


def divergence_rate_constant(
    m_a,
    m_b,
    grid: EvalGrid | None = None,
    measure: NuMeasure = DEFAULT_MEASURE,
    method: str = "closed",
    cfg: QuadConfig = DEFAULT_QUAD,
) -> float:
    """Leading small-contamination rate of sup |F_A - F_B|.

    The mixtures drift apart linearly in the contamination level with
    slope norm_c * sup |first-order gap|; this returns that slope.
    """
    sup, _ = estimate_sup_gap(m_a, m_b, grid, measure, method, cfg)
    return measure.norm_c * sup


def mixture_sup_gap(
    m_a,
    m_b,
    beta: float,
    grid: EvalGrid | None = None,
    xi: ComponentLaw = CENTERED_EXPONENTIAL,
    zeta: ComponentLaw = STANDARD_NORMAL,
    method: str = "closed",
    cfg: QuadConfig = DEFAULT_QUAD,
) -> float:
    """Grid sup of |F_A - F_B| at contamination level beta."""
    if grid is None:
        grid = EvalGrid.tensor()
    fa = mixture_cdf_batch(m_a, beta, grid.points, xi, zeta, method=method, cfg=cfg)
    fb = mixture_cdf_batch(m_b, beta, grid.points, xi, zeta, method=method, cfg=cfg)
    return sup_on_grid(fa - fb)
