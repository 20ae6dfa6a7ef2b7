"""Normalized smooth bumps for testing pairings at controlled scales.

The profile is b(s) = e^{-1/(1-s^2)} on |s| < 1.  Derivatives satisfy
b^(k) = P_k / (1-s^2)^{2k} * b with the polynomial recursion

    P_1 = -2s,   P_{k+1} = P_k' (1-s^2)^2 + 4 k s (1-s^2) P_k - 2 s P_k,

so the normalization max_{j <= order} sup |b^(j)| is computed exactly
(up to a fine sampling of (-1, 1)) rather than by finite differences.
A bump of radius t then has derivatives up to `order` bounded by
t^{-j}, the scaling the weak boundedness pairing is calibrated against.
"""
from __future__ import annotations

import numpy as np

from ..errors import DomainError, InvalidInputError
from ..grid import Grid, GridFunction


def _profile_polynomials(order: int):
    polys = [np.polynomial.Polynomial([0.0, -2.0])]
    one_minus = np.polynomial.Polynomial([1.0, 0.0, -1.0])
    s = np.polynomial.Polynomial([0.0, 1.0])
    for k in range(1, order):
        p = polys[-1]
        polys.append(p.deriv() * one_minus ** 2 + 4 * k * s * one_minus * p - 2 * s * p)
    return polys


def raw_profile(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def profile_derivative_bound(order: int) -> float:
    """max over j <= order of sup |b^(j)| on (-1, 1)."""
    if order < 0:
        raise InvalidInputError(f"order must be >= 0, got {order}")
    s = np.linspace(-1 + 1e-9, 1 - 1e-9, 20001)
    base = raw_profile(s)
    best = float(base.max())
    if order >= 1:
        w = 1.0 - s ** 2
        for k, poly in enumerate(_profile_polynomials(order), start=1):
            vals = np.abs(poly(s)) / w ** (2 * k) * base
            best = max(best, float(vals.max()))
    return best


_BOUND_CACHE: dict = {}


def normalized_profile(s, order: int = 4):
    """Bump profile scaled so all derivatives up to `order` are <= 1."""
    c = _BOUND_CACHE.get(order)
    if c is None:
        c = profile_derivative_bound(order)
        _BOUND_CACHE[order] = c
    return raw_profile(s) / c


def bump(grid: Grid, center, radius: float, order: int = 4) -> GridFunction:
    """Periodized normalized bump of the given radius on the grid.

    The radius is capped at a quarter period so the periodization
    cannot overlap itself.
    """
    L = grid.period
    if not 0 < radius <= L / 4:
        raise DomainError(f"bump radius must lie in (0, {L / 4}], got {radius}")
    if grid.spacing * 4 > radius:
        raise InvalidInputError(
            f"bump of radius {radius} needs spacing <= radius/4, grid has {grid.spacing}")
    centers = np.atleast_1d(np.asarray(center, dtype=float))
    if centers.size != grid.dim:
        raise InvalidInputError(f"center must have {grid.dim} components")
    vals = np.ones(grid.shape)
    for d in range(grid.dim):
        x = grid.nodes_1d()
        u = (x - centers[d] + L / 2) % L - L / 2
        prof = normalized_profile(u / radius, order)
        shape = [1] * grid.dim
        shape[d] = grid.points_per_axis
        vals = vals * prof.reshape(shape)
    return GridFunction(grid, vals.astype(complex))
