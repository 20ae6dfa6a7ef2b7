"""First-commutator demo: [|D|, a] closed forms, scan, and converse."""
import numpy as np
import pytest

from bilop.analysis import calderon_scan, converse_check
from bilop.analysis.calderon import calderon_demo, calderon_ratio
from bilop.errors import InvalidInputError
from bilop.grid import Grid, GridFunction, lp_norm, spectral_derivative


@pytest.fixture(scope="module")
def grid():
    return Grid(dim=1, points_per_axis=512)


def sin_a(grid, freq=1):
    return GridFunction(grid, np.sin(freq * grid.nodes_1d()))


# --------------------------------------------------------- two-mode closed form


@pytest.mark.parametrize("k", [0, 1, 2, 5, 17, 64])
def test_single_mode_commutator_matches_two_mode_closed_form(grid, k):
    # sin(x) e^{ikx} splits into modes k+1 and k-1, each an eigenvector of
    # the |xi| multiplier, so the commutator is exactly
    # [(|k+1|-|k|) e^{i(k+1)x} - (|k-1|-|k|) e^{i(k-1)x}] / (2i)
    x = grid.nodes_1d()
    f = GridFunction(grid, np.exp(1j * k * x))
    out = calderon_demo(sin_a(grid), f)
    up = (abs(k + 1) - abs(k)) * np.exp(1j * (k + 1) * x)
    down = (abs(k - 1) - abs(k)) * np.exp(1j * (k - 1) * x)
    expected = (up - down) / 2j
    assert np.abs(out.values - expected).max() < 1e-10


def test_high_mode_commutator_stays_order_zero(grid):
    # |k+1| - |k| = 1 for k >= 0, so the commutator norm does not grow with
    # k even though |D| itself scales the mode by k
    x = grid.nodes_1d()
    norms = []
    for k in (4, 16, 64, 200):
        f = GridFunction(grid, np.exp(1j * k * x))
        norms.append(lp_norm(calderon_demo(sin_a(grid), f), 2))
    assert max(norms) / min(norms) < 1.0 + 1e-12


def test_constant_multiplier_commutes(grid):
    f = GridFunction(grid, np.exp(1j * 7 * grid.nodes_1d()))
    a = GridFunction(grid, np.full(grid.points_per_axis, 3.0))
    out = calderon_demo(a, f)
    assert np.abs(out.values).max() < 1e-12
    assert calderon_ratio(a, f) == 0.0


def test_demo_is_linear_in_the_multiplier(grid):
    x = grid.nodes_1d()
    f = GridFunction(grid, np.exp(1j * 5 * x) + 0.3 * np.cos(2 * x))
    one = calderon_demo(sin_a(grid), f)
    two = calderon_demo(GridFunction(grid, 2 * np.sin(x)), f)
    assert np.abs(two.values - 2 * one.values).max() < 1e-12


def test_demo_guards(grid):
    other = Grid(dim=1, points_per_axis=256)
    f = GridFunction(other, np.exp(1j * other.nodes_1d()))
    with pytest.raises(InvalidInputError):
        calderon_demo(sin_a(grid), f)
    grid2 = Grid(dim=2, points_per_axis=16)
    g2 = GridFunction(grid2, np.ones(grid2.shape))
    with pytest.raises(InvalidInputError):
        calderon_demo(g2, g2)


def test_ratio_normalization_recomputed_by_hand(grid):
    x = grid.nodes_1d()
    f = GridFunction(grid, np.exp(1j * 9 * x))
    a = sin_a(grid)
    out = calderon_demo(a, f)
    grad_sup = lp_norm(spectral_derivative(a, 0), np.inf)
    expected = lp_norm(out, 2) / (grad_sup * lp_norm(f, 2))
    assert calderon_ratio(a, f) == pytest.approx(expected, rel=1e-14)


# ------------------------------------------------------------------- the scan


def test_scan_ratios_bounded_by_lipschitz_constant(grid):
    rep = calderon_scan(sin_a(grid))
    assert rep.verdict == "PASS"
    assert rep.k_values == tuple(range(1, 65))
    # the classical bound ||[T,a]f||_2 <= C ||a'||_inf ||f||_2 shows up with
    # constant ~1 on the modulated-bump ladder
    assert max(rep.ratios) < 1.0
    assert min(rep.ratios) > 0.5
    assert abs(rep.slope) < 0.05


def test_scan_is_deterministic(grid):
    a = sin_a(grid)
    r1 = calderon_scan(a, family="random-trig", seed=3)
    r2 = calderon_scan(a, family="random-trig", seed=3)
    assert r1.ratios == r2.ratios


# ------------------------------------------------------------------- converse


def test_converse_recovers_gradient_sup(grid):
    rep = converse_check(sin_a(grid))
    assert rep.verdict == "PASS"
    assert rep.gradient_sup == pytest.approx(1.0, abs=1e-12)
    assert rep.relative_gap < 0.01
    assert rep.operator_estimate == pytest.approx(1.0, abs=0.01)


def test_converse_estimates_trace_the_gradient_pointwise(grid):
    # each bump pair reads |(Da)(c)| = |cos c| at its center, smeared by the
    # finite bump width
    rep = converse_check(sin_a(grid))
    for c, e in zip(rep.centers, rep.estimates):
        assert abs(e - abs(np.cos(c))) < 0.1


def test_converse_scales_linearly_in_the_multiplier(grid):
    base = converse_check(sin_a(grid))
    double = converse_check(GridFunction(grid, 2 * np.sin(grid.nodes_1d())))
    assert double.operator_estimate == pytest.approx(
        2 * base.operator_estimate, rel=1e-12)


def test_converse_handles_steeper_multiplier(grid):
    rep = converse_check(sin_a(grid, freq=3))
    assert rep.verdict == "PASS"
    assert rep.gradient_sup == pytest.approx(3.0, abs=1e-12)
    assert rep.relative_gap < 0.05


def test_converse_constant_multiplier_vanishes(grid):
    a = GridFunction(grid, np.full(grid.points_per_axis, 2.5))
    rep = converse_check(a)
    assert rep.verdict == "PASS"
    assert rep.relative_gap < 1e-12
    assert rep.operator_estimate < 1e-12


def test_converse_requires_one_dimension():
    grid2 = Grid(dim=2, points_per_axis=16)
    a = GridFunction(grid2, np.ones(grid2.shape))
    with pytest.raises(InvalidInputError):
        converse_check(a)
