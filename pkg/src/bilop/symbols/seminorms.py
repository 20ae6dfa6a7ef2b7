"""Empirical class-seminorm estimation over dyadic frequency shells.

For each derivative triple the ratio

    R(alpha, beta, gamma) = sup |d^alpha_x d^beta_xi d^gamma_eta sigma|
                            * (1 + |xi| + |eta|)^-(m + delta|alpha| - rho(|beta|+|gamma|))

is approximated by sampled maxima over shells max(|xi|,|eta|) in
[2^s, 2^(s+1)); the growth verdict comes from the slope of log2(max)
against s.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from ..parallel import thread_map
from .core import Symbol, absnorm

GROWTH_SLOPE_THRESHOLD = 0.2


@dataclass(frozen=True)
class SeminormEntry:
    alpha: tuple
    beta: tuple
    gamma: tuple
    ratio: float
    slope: float
    verdict: str  # bounded | growing | indeterminate
    shell_max: tuple = field(repr=False, default=())


@dataclass(frozen=True)
class SeminormReport:
    symbol: str
    declared_class: tuple
    box: float
    shells: tuple
    samples: int
    max_order: int
    entries: tuple

    @property
    def all_bounded(self) -> bool:
        return all(e.verdict == "bounded" for e in self.entries)

    def entry(self, alpha, beta, gamma) -> SeminormEntry:
        for e in self.entries:
            if (e.alpha, e.beta, e.gamma) == (alpha, beta, gamma):
                return e
        raise KeyError((alpha, beta, gamma))


def _block_indices(dim: int, max_order: int):
    if dim == 1:
        return [(o,) for o in range(max_order + 1)]
    out = []
    for total in range(max_order + 1):
        for i in range(total + 1):
            out.append((i, total - i))
    return out


def _shell_probes(rng, s: int, samples: int, dim: int, period: float):
    """Probe points with max component magnitude log-uniform in [2^s, 2^(s+1))."""
    r = 2.0 ** (s + rng.uniform(0.0, 1.0, size=samples))
    w = rng.uniform(-1.0, 1.0, size=(samples, 2 * dim))
    peak = np.max(np.abs(w), axis=1)
    peak[peak == 0] = 1.0
    z = w * (r / peak)[:, None]
    x = rng.uniform(0.0, period, size=(samples, dim))
    if dim == 1:
        return x[:, 0], z[:, 0], z[:, 1]
    return ((x[:, 0], x[:, 1]), (z[:, 0], z[:, 1]), (z[:, 2], z[:, 3]))


def estimate_seminorms(sigma: Symbol, max_order: int = 2, box: float = 8192.0,
                       samples: int = 120, seed: int = 0,
                       period: float = 2 * np.pi) -> SeminormReport:
    if max_order > 2 or max_order < 0:
        raise InvalidInputError(f"max_order must be in 0..2, got {max_order}")
    if samples < 100:
        raise InvalidInputError(f"need >= 100 samples per shell, got {samples}")
    if box < 2:
        raise InvalidInputError(f"box must be >= 2, got {box}")
    dim = sigma.dim
    s_max = int(round(np.log2(box))) - 1
    shells = tuple((2.0 ** s, 2.0 ** (s + 1)) for s in range(s_max + 1))

    rng = np.random.default_rng(seed)
    probes = [_shell_probes(rng, s, samples, dim, period) for s in range(s_max + 1)]

    cls = sigma.declared_class
    blocks = _block_indices(dim, max_order)
    triples = [(a, b, g) for a in blocks for b in blocks for g in blocks]
    evaluators = {t: sigma.partial(*t) for t in triples}

    def shell_maxima(probe):
        x, xi, eta = probe
        weight = absnorm(xi, eta, dim)
        out = {}
        for (a, b, g), ev in evaluators.items():
            expo = cls.m + cls.delta * sum(a) - cls.rho * (sum(b) + sum(g))
            with np.errstate(all="ignore"):
                vals = np.abs(np.asarray(ev(x, xi, eta))) * weight ** (-expo)
            finite = np.isfinite(vals)
            out[(a, b, g)] = (float(np.max(vals[finite])) if finite.any() else np.nan,
                              bool(finite.all()))
        return out

    per_shell = thread_map(shell_maxima, probes)

    entries = []
    for t in triples:
        maxima = np.array([per_shell[s][t][0] for s in range(s_max + 1)])
        clean = all(per_shell[s][t][1] for s in range(s_max + 1))
        if not clean or not np.all(np.isfinite(maxima)):
            entries.append(SeminormEntry(*t, ratio=float("nan"), slope=float("nan"),
                                         verdict="indeterminate",
                                         shell_max=tuple(maxima)))
            continue
        positive = maxima > 0
        if positive.sum() >= 2:
            s_idx = np.nonzero(positive)[0]
            slope = float(np.polyfit(s_idx, np.log2(maxima[positive]), 1)[0])
        else:
            slope = 0.0
        verdict = "growing" if slope > GROWTH_SLOPE_THRESHOLD else "bounded"
        entries.append(SeminormEntry(*t, ratio=float(np.max(maxima)), slope=slope,
                                     verdict=verdict, shell_max=tuple(maxima)))

    return SeminormReport(symbol=sigma.name,
                          declared_class=(cls.m, cls.rho, cls.delta),
                          box=float(box), shells=shells, samples=samples,
                          max_order=max_order, entries=tuple(entries))
