"""Tests for the contamination-level polynomial expansion."""

import numpy as np
import pytest

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
    grid_argmax,
    mixture_sup_gap,
    polynomial_reconstruct,
    refine_sup,
    sup_on_grid,
)
from mixident.laws import (
    CENTERED_EXPONENTIAL,
    STANDARD_EXPONENTIAL,
    STANDARD_NORMAL,
)
from mixident.pushforward import (
    MixingMatrix2,
    as_matrix,
    equal_product_pair,
    mixture_cdf_batch,
    mixture_pushforward_cdf,
    pure_pushforward_cdf,
)

PHI_AT_MINUS_ONE = 0.15865525393145705
# (F_xi(0) - 1/2) / norm_c, frozen from the laws-module anchors
NU_AT_ZERO = 0.8327524967161627


def random_invertible(rng):
    while True:
        a = rng.normal(size=(2, 2))
        if abs(np.linalg.det(a)) > 0.05:
            return as_matrix(a)


# ---------------------------------------------------------------------------
# normalized difference measure


def test_norm_c_matches_distance_anchor():
    assert abs(DEFAULT_MEASURE.norm_c - PHI_AT_MINUS_ONE) < 1e-9


def test_nu_cdf_anchor_at_zero():
    assert abs(DEFAULT_MEASURE.nu_cdf(0.0) - NU_AT_ZERO) < 1e-12


def test_nu_cdf_has_unit_sup():
    t = np.linspace(-20.0, 20.0, 200_001)
    sup = np.max(np.abs(DEFAULT_MEASURE.nu_cdf_batch(t)))
    assert abs(sup - 1.0) < 1e-6


def test_nu_measure_validates():
    with pytest.raises(ValueError):
        NuMeasure(xi=STANDARD_NORMAL, zeta=STANDARD_NORMAL)
    with pytest.raises(ValueError):
        NuMeasure(norm_c=-0.5)


def test_nu_measure_uncentered_variant():
    m = NuMeasure(xi=STANDARD_EXPONENTIAL)
    assert abs(m.norm_c - 0.5) < 1e-9
    assert m.nu_cdf(0.0) == (0.0 - 0.5) / m.norm_c


# ---------------------------------------------------------------------------
# evaluation grids


def test_tensor_grid_shape():
    g = EvalGrid.tensor(-6.0, 6.0, 101)
    assert len(g) == 101 * 101
    assert g.points.shape == (10201, 2)
    assert g.points[0, 0] == -6.0 and g.points[-1, 1] == 6.0


def test_grid_validates():
    with pytest.raises(ValueError):
        EvalGrid(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        EvalGrid(np.zeros(5))
    with pytest.raises(ValueError):
        EvalGrid(np.array([[0.0, np.inf]]))


# ---------------------------------------------------------------------------
# coefficient fields


def test_order_validation():
    m = MixingMatrix2.identity()
    with pytest.raises(ValueError):
        GammaTerm(m, 3)
    with pytest.raises(ValueError):
        gamma_k_at(m, -1, (0.0, 0.0))


def test_placement_counts():
    m = MixingMatrix2.identity()
    assert len(GammaTerm(m, 0).placements) == 1
    assert len(GammaTerm(m, 1).placements) == 2
    assert len(GammaTerm(m, 2).placements) == 1


def test_order_zero_is_background_cdf():
    m = equal_product_pair(0.4)[0]
    x = (0.4, -0.7)
    got = gamma_k_at(m, 0, x, method="closed")
    want = mixture_pushforward_cdf(m, 0.0, x, method="closed")
    assert got == want


def test_identity_mixing_first_order_factorizes():
    # under identity mixing the two placements agree and each factorizes,
    # so the field at the origin is 2 * nu_cdf(0) * Phi(0) = nu_cdf(0)
    got = gamma_k_at(MixingMatrix2.identity(), 1, (0.0, 0.0), method="closed")
    assert abs(got - NU_AT_ZERO) < 1e-12


def test_first_order_finite_difference_oracle():
    # Richardson extrapolation of (F_beta - F_0) / (beta * norm_c); the
    # exact expansion is linear in beta, so two levels suffice
    c = DEFAULT_MEASURE.norm_c
    x = (0.0, 0.0)
    for m in equal_product_pair(0.4):
        def slope(beta):
            f0 = mixture_pushforward_cdf(m, 0.0, x, method="closed")
            fb = mixture_pushforward_cdf(m, beta, x, method="closed")
            return (fb - f0) / (beta * c)

        rich = 2.0 * slope(0.01) - slope(0.02)
        got = gamma_k_at(m, 1, x, method="closed")
        assert abs(got - rich) < 1e-4


def test_batch_matches_scalar():
    rng = np.random.default_rng(12)
    m = random_invertible(rng)
    pts = rng.normal(size=(10, 2))
    for k in range(3):
        batch = gamma_k_batch(m, k, pts)
        scalar = np.array([gamma_k_at(m, k, p, method="closed") for p in pts])
        np.testing.assert_allclose(batch, scalar, atol=1e-14)


# ---------------------------------------------------------------------------
# reconstruction identity


def test_reconstruct_matches_mixture_at_worked_point():
    m = equal_product_pair(0.4)[0]
    got = polynomial_reconstruct(m, 0.3, (0.5, -0.2), method="closed")
    want = mixture_pushforward_cdf(m, 0.3, (0.5, -0.2), method="closed")
    assert abs(got - want) < 1e-8


def test_reconstruct_degenerate_levels():
    m = equal_product_pair(0.4)[0]
    x = (0.2, 0.1)
    assert polynomial_reconstruct(m, 0.0, x, method="closed") == gamma_k_at(
        m, 0, x, method="closed"
    )
    pure_cont = pure_pushforward_cdf(
        m, (CENTERED_EXPONENTIAL, CENTERED_EXPONENTIAL), x, method="closed"
    )
    assert abs(polynomial_reconstruct(m, 1.0, x, method="closed") - pure_cont) < 1e-8


def test_reconstruct_identity_on_grid():
    m = equal_product_pair(0.4)[0]
    g = EvalGrid.tensor(-6.0, 6.0, 21)
    c = DEFAULT_MEASURE.norm_c
    for beta in (0.0, 0.1, 0.5, 1.0):
        rebuilt = np.zeros(len(g))
        for k in range(3):
            rebuilt += beta**k * c**k * gamma_k_batch(m, k, g.points)
        direct = mixture_cdf_batch(m, beta, g.points)
        assert np.max(np.abs(rebuilt - direct)) < 1e-8


def test_reconstruct_validates_level():
    with pytest.raises(ValueError):
        polynomial_reconstruct(MixingMatrix2.identity(), 1.2, (0.0, 0.0))


def test_first_order_error_halves_with_level():
    # sup-grid distance between the finite-difference slope and the
    # first-order field scales linearly in beta
    m = equal_product_pair(0.4)[0]
    g = EvalGrid.tensor(-6.0, 6.0, 41)
    c = DEFAULT_MEASURE.norm_c
    base = mixture_cdf_batch(m, 0.0, g.points)
    field = gamma_k_batch(m, 1, g.points)

    def sup_dev(beta):
        slope = (mixture_cdf_batch(m, beta, g.points) - base) / (beta * c)
        return np.max(np.abs(slope - field))

    ratio = sup_dev(0.01) / sup_dev(0.02)
    assert 0.35 <= ratio <= 0.65


# ---------------------------------------------------------------------------
# norm bounds on grids


def test_first_order_field_bound():
    # total-variation style bound: each placement contributes at most 2
    g = EvalGrid.tensor(-6.0, 6.0, 101)
    rng = np.random.default_rng(2718)
    mats = [random_invertible(rng) for _ in range(10)] + list(equal_product_pair(0.4))
    for m in mats:
        sup = sup_on_grid(gamma_k_batch(m, 1, g.points))
        assert sup <= 4.0 + 1e-9


def test_single_placement_bound():
    from mixident.pushforward import pure_cdf_batch

    g = EvalGrid.tensor(-6.0, 6.0, 101)
    m = equal_product_pair(0.4)[0]
    c = DEFAULT_MEASURE.norm_c
    single = (
        pure_cdf_batch(m, (STANDARD_NORMAL, CENTERED_EXPONENTIAL), g.points)
        - pure_cdf_batch(m, (STANDARD_NORMAL, STANDARD_NORMAL), g.points)
    ) / c
    assert sup_on_grid(single) <= 2.0 + 1e-9


# ---------------------------------------------------------------------------
# pairwise gap of first-order fields


def test_gap_vanishes_for_equal_matrices():
    m = equal_product_pair(0.4)[0]
    assert gamma_diff_at(m, m, (0.3, 0.4), method="closed") == 0.0


def test_gap_vanishes_under_column_permutation():
    # i.i.d. coordinates: permuting the columns relabels the integration
    # variables, so the whole field is unchanged
    rng = np.random.default_rng(31)
    m = random_invertible(rng)
    swapped = as_matrix(m.as_array()[:, ::-1])
    xs = rng.normal(size=(50, 2)) * 2.0
    gaps = gamma_diff_batch(m, swapped, xs)
    assert np.max(np.abs(gaps)) < 1e-8


def test_worked_pair_gap_is_nonzero():
    # records that the two worked matrices are separated at first order
    m_a, m_b = equal_product_pair(0.4)
    g = EvalGrid.tensor(-6.0, 6.0, 41)
    sup = sup_on_grid(gamma_diff_batch(m_a, m_b, g.points))
    assert sup > 0.01


# ---------------------------------------------------------------------------
# grid sup estimation


def test_sup_on_grid_basics():
    assert sup_on_grid(np.zeros(10)) == 0.0
    assert sup_on_grid([-3.0, 2.0]) == 3.0
    with pytest.raises(ValueError):
        sup_on_grid(np.array([]))


def test_grid_argmax_validates_length():
    g = EvalGrid.tensor(n=5)
    with pytest.raises(ValueError):
        grid_argmax(np.zeros(3), g)


def test_refine_only_improves():
    m_a, m_b = equal_product_pair(0.4)
    g = EvalGrid.tensor(-6.0, 6.0, 41)
    raw, _ = estimate_sup_gap(m_a, m_b, g, refine=False)
    refined, _ = estimate_sup_gap(m_a, m_b, g, refine=True)
    assert refined >= raw
    assert raw == sup_on_grid(gamma_diff_batch(m_a, m_b, g.points))


def test_refine_sup_finds_interior_peak():
    def bump(p):
        return 5.0 * np.exp(-((p[0] - 1.0) ** 2) - (p[1] + 2.0) ** 2)

    x, val = refine_sup(bump, np.array([0.0, 0.0]), step=1.0)
    assert abs(val - 5.0) < 1e-2
    assert abs(x[0] - 1.0) < 5e-2 and abs(x[1] + 2.0) < 5e-2


def test_divergence_rate_matches_small_level_slope():
    # finite-grid convention on both sides: the comparison tests the
    # linearity of the gap in beta, not the grid resolution
    m_a, m_b = equal_product_pair(0.4)
    g = EvalGrid.tensor()
    sup, _ = estimate_sup_gap(m_a, m_b, g, refine=False)
    k_const = DEFAULT_MEASURE.norm_c * sup
    r1 = mixture_sup_gap(m_a, m_b, 0.01, g) / 0.01
    r2 = mixture_sup_gap(m_a, m_b, 0.005, g) / 0.005
    assert abs(r1 - r2) / r1 < 0.05
    assert abs(r2 - k_const) / k_const < 0.05


def test_divergence_rate_constant_scales_sup():
    m_a, m_b = equal_product_pair(0.4)
    g = EvalGrid.tensor(-6.0, 6.0, 21)
    sup, _ = estimate_sup_gap(m_a, m_b, g, refine=False)
    got = divergence_rate_constant(m_a, m_b, g)
    # refinement can only raise the estimate above norm_c * grid sup
    assert got >= DEFAULT_MEASURE.norm_c * sup - 1e-15


def test_equal_product_pair_background_is_identical():
    # same second-moment structure: the pure background pushforwards
    # coincide, so the gap at level zero is numerically zero
    m_a, m_b = equal_product_pair(0.4)
    assert mixture_sup_gap(m_a, m_b, 0.0, EvalGrid.tensor(n=41)) < 1e-12


def test_contaminated_mixtures_do_separate():
    m_a, m_b = equal_product_pair(0.4)
    assert mixture_sup_gap(m_a, m_b, 0.5, EvalGrid.tensor(n=41)) > 1e-4
