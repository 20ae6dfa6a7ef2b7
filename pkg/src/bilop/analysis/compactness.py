"""Finite-sample compactness evidence for commutator operators.

Genuine precompactness of {U(f, g) : ||f||_p, ||g||_q <= 1} cannot be
decided on a grid.  What can be measured, in the spirit of the
Frechet-Kolmogorov criterion, is (i) a uniform bound on output norms,
(ii) a translation-equicontinuity curve h -> sup_i ||u_i(.+h) - u_i||_r
over a random input family, and (iii) greedy epsilon-covering counts of
the output set.  The verdict is purely comparative: a smooth,
compactly supported multiplier should dominate a rough bounded one in
both measures on the same inputs, and the strongest statement the
probe ever makes is "consistent with compactness".
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..grid import lp_norm, translate
from ..operator import apply
from ..parallel import thread_map
from .scans import check_holder, family_member

EPS_FRACTIONS = (0.5, 0.2, 0.1)


@dataclass(frozen=True)
class CompactnessProbe:
    multiplier_kind: str
    family_size: int
    triple: tuple
    output_norms: tuple
    shifts: tuple           # translation offsets (in nodes)
    equicontinuity: tuple   # sup_i ||u_i(.+h) - u_i||_r per shift
    covering: dict          # eps fraction -> greedy covering count
    max_norm: float
    outputs: tuple = ()     # raw output functions, kept for paired comparison


def _greedy_covering_count(outputs, eps: float, r: float) -> int:
    centers = []
    for u in outputs:
        if all(lp_norm(type(u)(u.grid, u.values - c.values), r) > eps for c in centers):
            centers.append(u)
    return len(centers)


def compactness_probe(U, multiplier_kind: str, family_size: int = 50,
                      p: float = 4.0, q: float = 4.0, r: float = 2.0,
                      mode_budget: int = 32, shifts=None,
                      seed: int = 0) -> CompactnessProbe:
    if family_size < 50:
        raise InvalidInputError(f"need family_size >= 50, got {family_size}")
    check_holder(p, q, r)
    grid = U.grid
    n_axis = grid.points_per_axis
    if shifts is None:
        shifts = []
        s = 1
        while s <= n_axis // 8:
            shifts.append(s)
            s *= 2
    shifts = tuple(int(s) for s in shifts)

    def output_at(i):
        f = family_member("random-trig", grid, mode_budget, seed=seed + 2 * i)
        g = family_member("random-trig", grid, mode_budget, seed=seed + 2 * i + 1)
        f = type(f)(grid, f.values / lp_norm(f, p))
        g = type(g)(grid, g.values / lp_norm(g, q))
        return apply(U, f, g)

    outputs = thread_map(output_at, range(family_size))
    norms = tuple(lp_norm(u, r) for u in outputs)
    max_norm = float(max(norms))

    curve = []
    for s in shifts:
        shift = (s,) * grid.dim if grid.dim > 1 else s
        worst = 0.0
        for u in outputs:
            moved = translate(u, shift)
            worst = max(worst, lp_norm(type(u)(grid, moved.values - u.values), r))
        curve.append(worst)

    covering = {}
    for frac in EPS_FRACTIONS:
        covering[frac] = _greedy_covering_count(outputs, frac * max_norm, r)

    return CompactnessProbe(multiplier_kind=multiplier_kind,
                            family_size=family_size, triple=(p, q, r),
                            output_norms=norms, shifts=shifts,
                            equicontinuity=tuple(curve), covering=covering,
                            max_norm=max_norm, outputs=tuple(outputs))


@dataclass(frozen=True)
class CompactnessComparison:
    smooth: CompactnessProbe
    rough: CompactnessProbe
    curve_dominated: bool
    shared_covering: dict   # eps fraction -> (smooth count, rough count)
    covering_halved: bool
    verdict: str


def compare_probes(smooth: CompactnessProbe, rough: CompactnessProbe) -> CompactnessComparison:
    """Comparative verdict; the language never claims more than consistency.

    Covering counts are recomputed at a shared epsilon scale (fractions of
    the larger max norm): per-probe scales would shrink epsilon along with
    the outputs and hide exactly the collapse being tested for.
    """
    if smooth.shifts != rough.shifts or smooth.family_size != rough.family_size:
        raise InvalidInputError("probes must share shifts and family size")
    if not smooth.outputs or not rough.outputs:
        raise InvalidInputError("probes must carry their outputs for comparison")
    curve_dominated = all(a <= b + 1e-14 for a, b in
                          zip(smooth.equicontinuity, rough.equicontinuity))
    r = smooth.triple[2]
    scale = max(smooth.max_norm, rough.max_norm)
    shared = {frac: (_greedy_covering_count(smooth.outputs, frac * scale, r),
                     _greedy_covering_count(rough.outputs, frac * scale, r))
              for frac in EPS_FRACTIONS}
    covering_halved = shared[0.2][0] <= shared[0.2][1] / 2
    ok = curve_dominated and covering_halved
    verdict = "consistent with compactness" if ok else "inconclusive"
    return CompactnessComparison(smooth=smooth, rough=rough,
                                 curve_dominated=curve_dominated,
                                 shared_covering=shared,
                                 covering_halved=covering_halved, verdict=verdict)
