"""Truncated-kernel quadrature: profiles, decay fits, commutator certificates."""

import numpy as np
import pytest

from bilop.errors import DomainError, InvalidInputError, ToleranceError
from bilop.grid import Grid, GridFunction
from bilop.kernel import (
    TruncationProfile,
    certify_cz_commutator_kernel,
    cutoff_profile,
    default_radii,
    fit_kernel_decay,
    kernel_at,
    kernel_slice,
    smooth_step,
)
from bilop.symbols import SymbolClassParams, catalog_symbol, parse_symbol_expr, symbol_from_expr

L = 2 * np.pi
PROFILE = TruncationProfile(level=128.0)


def wrap(u):
    return (u + L / 2) % L - L / 2


def quadrature_1d(mult, u, level=128.0, dxi=0.002, span=2.0):
    # independent single-axis oracle: plain trapezoid over the cutoff window
    xi = np.arange(-span * level, span * level + dxi, dxi)
    return np.trapezoid(cutoff_profile(xi / level) * mult(xi) * np.exp(1j * xi * u), xi) / L


# -------------------------------------------------------------- cutoff shape


def test_cutoff_profile_plateau_and_support():
    s = np.array([-0.5, 0.0, 0.3, 1.0])
    assert np.allclose(cutoff_profile(s), 1.0)
    far = np.array([2.0, 2.5, -2.0, 7.0])
    assert np.allclose(cutoff_profile(far), 0.0)


def test_cutoff_profile_is_even_and_monotone_on_ramp():
    s = np.linspace(1.0, 2.0, 101)
    vals = cutoff_profile(s)
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.allclose(cutoff_profile(-s), vals)


def test_smooth_step_building_block():
    # h(s) = e^{-1/s} on s > 0, identically 0 on s <= 0: all derivatives
    # vanish at 0, which is what makes the glued cutoff smooth
    s = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    got = smooth_step(s)
    assert got[0] == 0.0 and got[1] == 0.0
    assert got[2] == pytest.approx(np.exp(-2.0))
    assert got[3] == pytest.approx(np.exp(-1.0))
    assert np.all(np.diff(got) >= 0)
    assert abs(smooth_step(np.array([1e-3]))[0]) < 1e-300


# ---------------------------------------------------------------- kernel_at


def test_identity_symbol_kernel_factorizes():
    # sigma = 1: K(x,y,z) = F(x-y) F(x-z) with F the 1D cutoff transform
    one = catalog_symbol("one")
    F = lambda u: quadrature_1d(lambda xi: np.ones_like(xi), u)
    for (x, y, z) in [(0.0, 0.7, 5.9), (1.0, 1.5, 0.3), (3.0, 2.6, 3.5)]:
        got = kernel_at(one, PROFILE, x, y, z)
        want = F(wrap(x - y)) * F(wrap(x - z))
        assert abs(got - want) < 1e-8


def test_multiplier_product_symbol_kernel_factorizes():
    node = parse_symbol_expr("1 / (1 + xi^2) * (1 / (1 + eta^2))")
    sig = symbol_from_expr(node, SymbolClassParams(0.0, 1.0, 0.0))
    k = lambda u: quadrature_1d(lambda xi: 1.0 / (1.0 + xi**2), u)
    for (x, y, z) in [(0.0, 0.9, 4.8), (2.0, 1.1, 2.9)]:
        got = kernel_at(sig, PROFILE, x, y, z)
        want = k(wrap(x - y)) * k(wrap(x - z))
        assert abs(got - want) < 1e-8 * abs(want)


def test_kernel_translation_invariance_on_torus():
    # x-independent symbols give convolution kernels; shifting all three
    # points together, even across the period seam, changes nothing
    sig = catalog_symbol("sqrt1")
    base = kernel_at(sig, PROFILE, 0.3, 1.0, 2.2)
    shifted = kernel_at(sig, PROFILE, 2.0, 2.7, 3.9)
    wrapped = kernel_at(sig, PROFILE, 5.3, 6.0, 2.2 + 5.0)
    assert abs(shifted - base) < 1e-10 * abs(base)
    assert abs(wrapped - base) < 1e-10 * abs(base)


def test_kernel_at_rejects_only_the_triple_diagonal():
    # the truncated kernel is finite whenever (y,z) != (x,x); the singular
    # point is where both separations vanish, period wraps included
    sig = catalog_symbol("sqrt1")
    with pytest.raises(DomainError):
        kernel_at(sig, PROFILE, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        kernel_at(sig, PROFILE, 1.0 + L, 1.0, 1.0)
    assert np.isfinite(kernel_at(sig, PROFILE, 1.0, 1.0, 2.0))
    assert np.isfinite(kernel_at(sig, PROFILE, 1.0, 2.0, 2.0))


def test_kernel_quadrature_guard_trips_on_coarse_spacing():
    sig = catalog_symbol("sqrt1")
    with pytest.raises(ToleranceError):
        kernel_at(sig, PROFILE, 0.0, 1.0, 2.0, spacing=4.0)
    # guard can be waived explicitly
    v = kernel_at(sig, PROFILE, 0.0, 1.0, 2.0, spacing=4.0, guard=False)
    assert np.isfinite(v)


def test_kernel_slice_matches_pointwise_values():
    sig = catalog_symbol("sqrt1")
    offsets = [(1.0, 2.0), (0.5, 5.8), (2.5, 4.0)]
    sl = kernel_slice(sig, PROFILE, 0.0, offsets)
    assert sl.offsets == tuple(offsets)
    for (y, z), v in zip(offsets, sl.values):
        assert abs(v - kernel_at(sig, PROFILE, 0.0, y, z)) < 1e-12


def test_kernel_slice_rejects_diagonal_offsets():
    sig = catalog_symbol("sqrt1")
    with pytest.raises(DomainError):
        kernel_slice(sig, PROFILE, 1.0, [(2.0, 3.0), (1.0, 1.0)])


# ---------------------------------------------------------------- decay fits


def test_default_radii_span_the_powerlaw_window():
    radii = default_radii(L)
    assert len(radii) == 11
    assert radii[0] == pytest.approx(L / 256)
    assert radii[-1] == pytest.approx(L / 8)
    assert np.all(np.diff(radii) > 0)


def test_kernel_decay_fit_for_order_one_symbol():
    rep = fit_kernel_decay(catalog_symbol("sqrt1"))
    assert rep.verdict == "BOUNDED"
    assert rep.target == -3.0
    assert rep.exponent_fit <= -3.0 + 0.3
    assert rep.r_squared >= 0.9
    assert rep.stability_ratio < 2.0
    assert set(rep.stability) == {32.0, 64.0, 128.0}


def test_kernel_gradient_decay_gains_one_order():
    rep = fit_kernel_decay(catalog_symbol("sqrt1"), deriv=(0, 1, 0))
    assert rep.target == -4.0
    assert rep.verdict == "BOUNDED"
    assert rep.exponent_fit <= -4.0 + 0.3


def test_decay_fit_radii_must_stay_off_diagonal():
    with pytest.raises(InvalidInputError):
        fit_kernel_decay(catalog_symbol("sqrt1"), radii=(0.0, 0.1))


# ------------------------------------------------------------- certificates


def test_commutator_kernel_certificate_for_lipschitz_multiplier():
    grid = Grid(dim=1, points_per_axis=64)
    a = GridFunction(grid, np.sin(grid.nodes_1d()))
    cert = certify_cz_commutator_kernel(catalog_symbol("sqrt1"), a, slot=1)
    assert cert.verdict == "BOUNDED"
    assert len(cert.octaves) == 3
    assert max(cert.size_sup) / min(cert.size_sup) < 2.0
    assert max(cert.grad_sup) / min(cert.grad_sup) < 2.0


def test_constant_multiplier_certifies_trivially():
    # [T, const] = 0, so every sampled sup is zero and the bound is vacuous
    grid = Grid(dim=1, points_per_axis=64)
    a = GridFunction(grid, np.full(64, 1.5))
    cert = certify_cz_commutator_kernel(catalog_symbol("sqrt1"), a, samples=210)
    assert cert.verdict == "BOUNDED"
    assert max(cert.size_sup) < 1e-14
    assert max(cert.grad_sup) < 1e-14


def test_certificate_scales_linearly_in_multiplier():
    # the commutator kernel is (a(x-u) - a(x)) K(x,y,z): doubling a doubles
    # every sampled sup exactly, since the sample set is seed-pinned
    grid = Grid(dim=1, points_per_axis=64)
    x = grid.nodes_1d()
    a = GridFunction(grid, np.sin(x))
    a2 = GridFunction(grid, 2 * np.sin(x))
    c1 = certify_cz_commutator_kernel(catalog_symbol("sqrt1"), a, samples=210, seed=3)
    c2 = certify_cz_commutator_kernel(catalog_symbol("sqrt1"), a2, samples=210, seed=3)
    assert np.allclose(np.array(c2.size_sup), 2 * np.array(c1.size_sup), rtol=1e-12)
    assert np.allclose(np.array(c2.grad_sup), 2 * np.array(c1.grad_sup), rtol=1e-12)


def test_certificate_slot_validation():
    grid = Grid(dim=1, points_per_axis=64)
    a = GridFunction(grid, np.sin(grid.nodes_1d()))
    with pytest.raises(InvalidInputError):
        certify_cz_commutator_kernel(catalog_symbol("sqrt1"), a, slot=3)
