"""Norm-growth scans over frequency-parameterized input families.

The observable is the ratio ||U(f_k, g_k)||_r / (||f_k||_p ||g_k||_q)
as the frequency parameter k climbs, with (p, q, r) a Holder triple.
A log-log slope near one is the signature of an order-one symbol; a
flat curve is boundedness.  The same families feed the fractional
Leibniz (Kato-Ponce) ratio check, which needs no bilinear machinery —
only the grid's fractional derivative.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..grid import Grid, GridFunction, fractional_derivative, lp_norm
from ..operator import apply, commutator, make_operator
from ..parallel import thread_map
from ..symbols import FAMILY_NAMES
from .bumps import bump

HOLDER_TOL = 1e-12
SLOPE_GROWING = 0.8
SLOPE_BOUNDED = 0.2
RATIO_BUDGET = 4.0
KATO_PONCE_BUDGET = 10.0


def holder_r(p: float, q: float) -> float:
    """r with 1/p + 1/q = 1/r."""
    if p < 1 or q < 1:
        raise InvalidInputError(f"exponents must be >= 1, got ({p}, {q})")
    return 1.0 / (1.0 / p + 1.0 / q)


def check_holder(p: float, q: float, r: float):
    if abs(1.0 / p + 1.0 / q - 1.0 / r) > HOLDER_TOL:
        raise InvalidInputError(
            f"(p, q, r) = ({p}, {q}, {r}) violates 1/p + 1/q = 1/r")


def family_member(name: str, grid: Grid, k: int, seed: int = 0,
                  width: float | None = None, order: int = 2) -> GridFunction:
    """Input with frequency parameter k from one of the named families."""
    if name not in FAMILY_NAMES:
        raise InvalidInputError(f"family must be one of {FAMILY_NAMES}, got {name!r}")
    if k < 1:
        raise InvalidInputError(f"frequency parameter must be >= 1, got {k}")
    L = grid.period
    base = 2 * np.pi / L
    mesh = grid.node_mesh()
    phase_arg = sum(mesh)  # modulate along the diagonal in 2D
    if name == "plane-wave":
        return GridFunction(grid, np.exp(1j * k * base * phase_arg))
    if name == "modulated-bump":
        phi = bump(grid, np.full(grid.dim, L / 2), width or L / 8, order)
        return GridFunction(grid, phi.values * np.exp(1j * k * base * phase_arg))
    # random-trig: random coefficients on the modes 1..k of each axis
    if k >= grid.points_per_axis // 2:
        raise InvalidInputError(f"mode budget {k} exceeds the grid's band")
    rng = np.random.default_rng(1000003 * seed + k)
    coeff = np.zeros(grid.shape, dtype=complex)
    if grid.dim == 1:
        modes = np.concatenate([np.arange(1, k + 1), np.arange(-k, 0)])
        coeff[modes] = rng.standard_normal(modes.size) + 1j * rng.standard_normal(modes.size)
    else:
        m = np.fft.fftfreq(grid.points_per_axis, d=1.0 / grid.points_per_axis)
        m1, m2 = np.meshgrid(m, m, indexing="ij")
        band = (np.maximum(np.abs(m1), np.abs(m2)) <= k) & ((m1 != 0) | (m2 != 0))
        count = int(band.sum())
        coeff[band] = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    vals = np.fft.ifftn(coeff)
    return GridFunction(grid, vals)


@dataclass(frozen=True)
class NormScanReport:
    triple: tuple
    family: str
    k_values: tuple
    ratios: tuple
    slope: float
    max_min_ratio: float
    verdict: str


def _fit_slope(ks, vals) -> float:
    lk = np.log(np.asarray(ks, dtype=float))
    lv = np.log(np.maximum(np.asarray(vals, dtype=float), 1e-300))
    if lk.size < 2:
        return 0.0
    return float(np.polyfit(lk, lv, 1)[0])


def norm_scan(U, p: float, q: float, family: str = "modulated-bump",
              k_values=tuple(range(1, 65)), seed: int = 0) -> NormScanReport:
    r = holder_r(p, q)
    grid = U.grid
    k_values = tuple(int(k) for k in k_values)

    def ratio_at(k):
        f = family_member(family, grid, k, seed=seed)
        g = family_member(family, grid, k, seed=seed + 1)
        out = apply(U, f, g)
        return lp_norm(out, r) / (lp_norm(f, p) * lp_norm(g, q))

    ratios = thread_map(ratio_at, k_values)
    slope = _fit_slope(k_values, ratios)
    top, bot = max(ratios), min(ratios)
    max_min = top / max(bot, 1e-300) if top > 1e-14 else 1.0
    if slope >= SLOPE_GROWING:
        verdict = "GROWING"
    elif slope <= SLOPE_BOUNDED and max_min < RATIO_BUDGET:
        verdict = "BOUNDED"
    else:
        verdict = "INCONCLUSIVE"
    return NormScanReport(triple=(p, q, r), family=family, k_values=k_values,
                          ratios=tuple(float(v) for v in ratios), slope=slope,
                          max_min_ratio=float(max_min), verdict=verdict)


@dataclass(frozen=True)
class SmoothingContrastReport:
    base: NormScanReport
    slot1: NormScanReport
    slot2: NormScanReport
    verdict: str


def smoothing_contrast(sigma, a: GridFunction, p: float = 4.0, q: float = 4.0,
                       family: str = "modulated-bump",
                       k_values=tuple(range(1, 65)), seed: int = 0) -> SmoothingContrastReport:
    """Base operator grows with k while both commutator slots stay flat."""
    grid = a.grid
    T = make_operator(sigma, grid)
    base = norm_scan(T, p, q, family, k_values, seed)
    slot1 = norm_scan(commutator(T, 1, a), p, q, family, k_values, seed)
    slot2 = norm_scan(commutator(T, 2, a), p, q, family, k_values, seed)
    ok = (base.slope >= SLOPE_GROWING
          and slot1.slope <= SLOPE_BOUNDED and slot1.max_min_ratio < RATIO_BUDGET
          and slot2.slope <= SLOPE_BOUNDED and slot2.max_min_ratio < RATIO_BUDGET)
    return SmoothingContrastReport(base=base, slot1=slot1, slot2=slot2,
                                   verdict="PASS" if ok else "FAILED")


@dataclass(frozen=True)
class KatoPonceReport:
    alpha: float
    triple: tuple
    family: str
    k_values: tuple
    ratios: tuple
    slope: float
    budget: float
    verdict: str


def kato_ponce_check(alpha: float, p: float, q: float, r: float, grid: Grid,
                     family: str = "modulated-bump",
                     k_values=tuple(range(1, 65)), seed: int = 0) -> KatoPonceReport:
    """Fractional Leibniz ratio ||D^a(fg)||_r over the sum of cross terms."""
    if alpha <= 0:
        raise InvalidInputError(f"alpha must be positive, got {alpha}")
    check_holder(p, q, r)
    k_values = tuple(int(k) for k in k_values)

    def ratio_at(k):
        f = family_member(family, grid, k, seed=seed)
        g = family_member(family, grid, k, seed=seed + 1)
        prod = GridFunction(grid, f.values * g.values)
        num = lp_norm(fractional_derivative(prod, alpha), r)
        den = (lp_norm(fractional_derivative(f, alpha), p) * lp_norm(g, q)
               + lp_norm(f, p) * lp_norm(fractional_derivative(g, alpha), q))
        return num / den

    ratios = thread_map(ratio_at, k_values)
    slope = _fit_slope(k_values, ratios)
    ok = max(ratios) < KATO_PONCE_BUDGET and slope < SLOPE_BOUNDED
    return KatoPonceReport(alpha=float(alpha), triple=(p, q, r), family=family,
                           k_values=k_values, ratios=tuple(float(v) for v in ratios),
                           slope=slope, budget=KATO_PONCE_BUDGET,
                           verdict="PASS" if ok else "FAILED")
