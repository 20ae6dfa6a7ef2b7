"""Bilinear operators T_sigma on the grid, commutators, and transposes.

    T(f,g)(x_j) = (1/L^{2n}) sum_{k,l} sigma(x_j, xi_k, eta_l)
                  fhat(xi_k) ghat(eta_l) e^{i x_j (xi_k + eta_l)}

Three application strategies: "direct" evaluates the double frequency
sum per node; "multiplier" (x-independent sigma) folds the sum over
output frequencies; "separable" (sigma = a(x) b(xi) c(eta)) applies two
linear multipliers and one product.  All agree at the nodes exactly up
to roundoff; the fast paths exist because direct costs N^{3n}.

Transposes are materialized as dense trilinear tensors, exact at small
N, with the bilinear dual pairing <u, v> = sum_j u_j v_j dx^n (no
conjugation).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, InvalidInputError
from .grid import Grid, GridFunction
from .symbols.core import Symbol

DIRECT_BUDGET = 2 ** 28
DENSE_BUDGET = 2 ** 24

STRATEGIES = ("direct", "multiplier", "separable")


def _is_x_independent(sigma: Symbol, grid: Grid, probes: int = 20,
                      tol: float = 1e-12) -> bool:
    if sigma.x_independent is not None:
        return bool(sigma.x_independent)
    rng = np.random.default_rng(12345)
    nyq = np.pi * grid.points_per_axis / grid.period

    def draw(scale, count):
        return rng.uniform(-scale, scale, size=count)

    if grid.dim == 1:
        x1 = rng.uniform(0, grid.period, size=probes)
        x2 = rng.uniform(0, grid.period, size=probes)
        xi, eta = draw(nyq, probes), draw(nyq, probes)
        v1 = np.asarray(sigma.eval(x1, xi, eta))
        v2 = np.asarray(sigma.eval(x2, xi, eta))
    else:
        xs = [(rng.uniform(0, grid.period, size=probes),
               rng.uniform(0, grid.period, size=probes)) for _ in range(2)]
        xi = (draw(nyq, probes), draw(nyq, probes))
        eta = (draw(nyq, probes), draw(nyq, probes))
        v1 = np.asarray(sigma.eval(xs[0], xi, eta))
        v2 = np.asarray(sigma.eval(xs[1], xi, eta))
    scale = np.max(np.abs(v1)) + 1.0
    return bool(np.max(np.abs(v1 - v2)) <= tol * scale)


@dataclass(frozen=True)
class BilinearOperator:
    sigma: Symbol
    grid: Grid
    strategy: str

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise InvalidInputError(
                f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.strategy == "multiplier" and not _is_x_independent(self.sigma, self.grid):
            raise InvalidInputError(
                "multiplier strategy needs an x-independent symbol")
        if self.strategy == "separable" and self.sigma.factors is None:
            raise InvalidInputError(
                "separable strategy needs declared factors a(x) b(xi) c(eta)")


def make_operator(sigma: Symbol, grid: Grid, strategy: str | None = None) -> BilinearOperator:
    """Build T_sigma, choosing the cheapest valid strategy when unspecified."""
    if sigma.dim != grid.dim:
        raise InvalidInputError(
            f"symbol dim {sigma.dim} does not match grid dim {grid.dim}")
    if strategy is None:
        if sigma.factors is not None:
            strategy = "separable"
        elif _is_x_independent(sigma, grid):
            strategy = "multiplier"
        else:
            strategy = "direct"
    return BilinearOperator(sigma, grid, strategy)


@dataclass(frozen=True)
class CommutatorOperator:
    """[base, a]_slot, optionally iterated: steps applied left to right."""

    base: BilinearOperator
    steps: tuple  # of (slot, GridFunction)

    def __post_init__(self):
        if not self.steps:
            raise InvalidInputError("commutator needs at least one (slot, multiplier)")
        for slot, mult in self.steps:
            if slot not in (1, 2):
                raise InvalidInputError(f"slot must be 1 or 2, got {slot}")
            if mult.grid != self.base.grid:
                raise InvalidInputError("multiplier grid does not match operator grid")

    @property
    def grid(self) -> Grid:
        return self.base.grid


def commutator(base: BilinearOperator, slot: int, mult: GridFunction,
               *more) -> CommutatorOperator:
    """commutator(T, 1, a) or commutator(T, 1, a, 2, b) for the iterated case."""
    steps = [(slot, mult)]
    if more:
        if len(more) % 2 != 0:
            raise InvalidInputError("extra steps come in (slot, multiplier) pairs")
        for i in range(0, len(more), 2):
            steps.append((int(more[i]), more[i + 1]))
    return CommutatorOperator(base, tuple(steps))


@dataclass(frozen=True)
class DenseBilinearOperator:
    """Trilinear form W[j, p, q]: T(f,g)_j = sum_{p,q} W[j,p,q] f_p g_q."""

    grid: Grid
    tensor: np.ndarray


def _check_inputs(grid: Grid, *fs):
    for f in fs:
        if f.grid != grid:
            raise InvalidInputError("grid mismatch between operator and input")


def pairing(u: GridFunction, v: GridFunction) -> complex:
    """Bilinear dual pairing sum u v dx^n, no conjugation."""
    _check_inputs(u.grid, v)
    return complex(np.sum(u.values * v.values) * u.grid.spacing ** u.grid.dim)


def _apply_direct(op: BilinearOperator, f: GridFunction, g: GridFunction) -> GridFunction:
    grid = op.grid
    n, N, L = grid.dim, grid.points_per_axis, grid.period
    if N ** (3 * n) > DIRECT_BUDGET:
        raise BudgetError(
            f"direct strategy costs N^(3n) = {N ** (3 * n)} > {DIRECT_BUDGET}; "
            f"shrink N (or use an x-independent symbol with the multiplier path)")
    fhat = np.fft.fftn(f.values) * grid.spacing ** n
    ghat = np.fft.fftn(g.values) * grid.spacing ** n
    if n == 1:
        x = grid.nodes_1d()
        xi = grid.frequencies_1d()
        out = np.empty(N, dtype=complex)
        chunk = max(1, DIRECT_BUDGET // (64 * N * N))
        for start in range(0, N, chunk):
            xs = x[start:start + chunk]
            sig = np.asarray(op.sigma.eval(xs[:, None, None],
                                           xi[None, :, None], xi[None, None, :]))
            ef = fhat[None, :] * np.exp(1j * np.outer(xs, xi))
            eg = ghat[None, :] * np.exp(1j * np.outer(xs, xi))
            out[start:start + chunk] = np.einsum("jkl,jk,jl->j", sig, ef, eg)
        return GridFunction(grid, out / L ** 2)
    # n == 2: flatten nodes, frequencies stay as meshes
    x1, x2 = grid.node_mesh()
    xi1, xi2 = grid.frequency_mesh()
    nodes = N * N
    out = np.empty(nodes, dtype=complex)
    xf1, xf2 = x1.ravel(), x2.ravel()
    for j in range(nodes):
        sig = np.asarray(op.sigma.eval(
            (xf1[j], xf2[j]),
            (xi1[:, :, None, None], xi2[:, :, None, None]),
            (xi1[None, None, :, :], xi2[None, None, :, :])))
        phf = np.exp(1j * (xi1 * xf1[j] + xi2 * xf2[j]))
        ef = fhat * phf
        eg = ghat * phf
        out[j] = np.einsum("klmn,kl,mn->", sig, ef, eg)
    return GridFunction(grid, out.reshape(N, N) / L ** 4)


def _apply_multiplier(op: BilinearOperator, f: GridFunction, g: GridFunction) -> GridFunction:
    grid = op.grid
    n, N, L = grid.dim, grid.points_per_axis, grid.period
    fhat = np.fft.fftn(f.values) * grid.spacing ** n
    ghat = np.fft.fftn(g.values) * grid.spacing ** n
    xi = grid.frequencies_1d()
    if n == 1:
        folded = np.zeros(N, dtype=complex)
        k_idx = np.arange(N)
        chunk = max(1, min(N, 2 ** 22 // N))
        zero_x = 0.0
        for start in range(0, N, chunk):
            m_idx = np.arange(start, min(start + chunk, N))
            l_idx = (m_idx[None, :] - k_idx[:, None]) % N
            sig = np.asarray(op.sigma.eval(zero_x, xi[k_idx][:, None], xi[l_idx]))
            folded[m_idx] = np.sum(sig * fhat[k_idx][:, None] * ghat[l_idx], axis=0)
        vals = np.fft.ifft(folded) * N / L ** 2
        return GridFunction(grid, vals)
    # n == 2: fold over both frequency axes
    k1, k2 = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    folded = np.zeros((N, N), dtype=complex)
    zero_x = (0.0, 0.0)
    for m1 in range(N):
        l1 = (m1 - k1) % N
        for m2 in range(N):
            l2 = (m2 - k2) % N
            sig = np.asarray(op.sigma.eval(
                zero_x, (xi[k1], xi[k2]), (xi[l1], xi[l2])))
            folded[m1, m2] = np.sum(sig * fhat[k1, k2] * ghat[l1, l2])
    vals = np.fft.ifftn(folded) * N ** 2 / L ** 4
    return GridFunction(grid, vals)


def _apply_separable(op: BilinearOperator, f: GridFunction, g: GridFunction) -> GridFunction:
    grid = op.grid
    n, N, L = grid.dim, grid.points_per_axis, grid.period
    fa, fb, fc = op.sigma.factors
    fhat = np.fft.fftn(f.values) * grid.spacing ** n
    ghat = np.fft.fftn(g.values) * grid.spacing ** n
    if n == 1:
        xi = grid.frequencies_1d()
        bf = np.fft.ifft(np.asarray(fb(xi)) * fhat) * N / L
        cg = np.fft.ifft(np.asarray(fc(xi)) * ghat) * N / L
        vals = np.asarray(fa(grid.nodes_1d())) * bf * cg
        return GridFunction(grid, vals)
    mesh = grid.frequency_mesh()
    bf = np.fft.ifftn(np.asarray(fb(mesh)) * fhat) * N ** 2 / L ** 2
    cg = np.fft.ifftn(np.asarray(fc(mesh)) * ghat) * N ** 2 / L ** 2
    vals = np.asarray(fa(grid.node_mesh())) * bf * cg
    return GridFunction(grid, vals)


def apply(op, f: GridFunction, g: GridFunction) -> GridFunction:
    """Apply a bilinear, commutator, or dense operator to (f, g)."""
    if isinstance(op, CommutatorOperator):
        return commutator_apply(op, f, g)
    if isinstance(op, DenseBilinearOperator):
        _check_inputs(op.grid, f, g)
        fv = f.values.ravel()
        gv = g.values.ravel()
        out = np.einsum("jpq,p,q->j", op.tensor, fv, gv)
        return GridFunction(op.grid, out.reshape(op.grid.shape))
    _check_inputs(op.grid, f, g)
    if op.strategy == "direct":
        return _apply_direct(op, f, g)
    if op.strategy == "multiplier":
        return _apply_multiplier(op, f, g)
    return _apply_separable(op, f, g)


def commutator_apply(c: CommutatorOperator, f: GridFunction, g: GridFunction) -> GridFunction:
    _check_inputs(c.grid, f, g)

    def run(steps, f, g):
        if not steps:
            return apply(c.base, f, g)
        slot, mult = steps[-1]
        rest = steps[:-1]
        if slot == 1:
            shifted = run(rest, GridFunction(c.grid, mult.values * f.values), g)
        else:
            shifted = run(rest, f, GridFunction(c.grid, mult.values * g.values))
        plain = run(rest, f, g)
        return GridFunction(c.grid, shifted.values - mult.values * plain.values)

    return run(list(c.steps), f, g)


def dense_tensor(op) -> np.ndarray:
    """Materialize W[j,p,q] with T(f,g)_j = sum W[j,p,q] f_p g_q."""
    if isinstance(op, DenseBilinearOperator):
        return op.tensor
    if isinstance(op, CommutatorOperator):
        W = dense_tensor(op.base)
        for slot, mult in op.steps:
            a = mult.values.ravel()
            if slot == 1:
                W = W * (a[None, :, None] - a[:, None, None])
            else:
                W = W * (a[None, None, :] - a[:, None, None])
        return W
    grid = op.grid
    n, N, L = grid.dim, grid.points_per_axis, grid.period
    if N ** (3 * n) > DENSE_BUDGET:
        raise BudgetError(
            f"dense tensor needs N^(3n) = {N ** (3 * n)} > {DENSE_BUDGET} entries; "
            f"shrink N")
    dx = grid.spacing
    if n == 1:
        x = grid.nodes_1d()
        xi = grid.frequencies_1d()
        W = np.empty((N, N, N), dtype=complex)
        for j in range(N):
            sig = np.asarray(op.sigma.eval(x[j], xi[:, None], xi[None, :]))
            phase = np.exp(1j * xi * x[j])
            M = sig * phase[:, None] * phase[None, :]
            W[j] = np.fft.fft2(M)
        return W * (dx ** 2 / L ** 2)
    x1, x2 = grid.node_mesh()
    xi1, xi2 = grid.frequency_mesh()
    nodes = N * N
    W = np.empty((nodes, nodes, nodes), dtype=complex)
    xf1, xf2 = x1.ravel(), x2.ravel()
    for j in range(nodes):
        sig = np.asarray(op.sigma.eval(
            (xf1[j], xf2[j]),
            (xi1[:, :, None, None], xi2[:, :, None, None]),
            (xi1[None, None, :, :], xi2[None, None, :, :])))
        ph = np.exp(1j * (xi1 * xf1[j] + xi2 * xf2[j]))
        M = sig * ph[:, :, None, None] * ph[None, None, :, :]
        W[j] = np.fft.fftn(M).reshape(nodes, nodes)
    return W * (dx ** 4 / L ** 4)


def transpose(op, which: int):
    """Operator U with <op(f,g), h> = <U(h,g), f> (which=1) or <U(f,h), g> (which=2)."""
    if which not in (1, 2):
        raise InvalidInputError(f"which must be 1 or 2, got {which}")
    grid = op.grid
    W = dense_tensor(op)
    axis = 1 if which == 1 else 2
    return DenseBilinearOperator(grid, np.swapaxes(W, 0, axis))


def verify_transpose_identities(T: BilinearOperator, a: GridFunction,
                                trials: int = 20, seed: int = 0,
                                tol: float = 1e-8) -> dict:
    """Check the four commutator/transpose identities on random triples.

    Residuals are weak-form: |<LHS(f,g) - RHS(f,g), h>| normalized by
    ||f||_2 ||g||_2 ||h||_2, maximized over the random triples.
    """
    if trials < 10:
        raise InvalidInputError(f"need >= 10 trials, got {trials}")
    grid = T.grid

    def com(base_tensor, slot, mult):
        v = mult.values.ravel()
        if slot == 1:
            return base_tensor * (v[None, :, None] - v[:, None, None])
        return base_tensor * (v[None, None, :] - v[:, None, None])

    W = dense_tensor(T)
    W1 = np.swapaxes(W, 0, 1)  # T^{*1}
    W2 = np.swapaxes(W, 0, 2)  # T^{*2}

    c1 = com(W, 1, a)
    c2 = com(W, 2, a)
    sides = {
        "slot1_transpose1": (np.swapaxes(c1, 0, 1), -com(W1, 1, a)),
        "slot1_transpose2": (np.swapaxes(c1, 0, 2), com(W2, 1, a) - com(W2, 2, a)),
        "slot2_transpose1": (np.swapaxes(c2, 0, 1), com(W1, 2, a) - com(W1, 1, a)),
        "slot2_transpose2": (np.swapaxes(c2, 0, 2), -com(W2, 2, a)),
    }

    rng = np.random.default_rng(seed)
    nodes = grid.points_per_axis ** grid.dim
    dxn = grid.spacing ** grid.dim

    def rand_fn():
        v = rng.standard_normal(nodes) + 1j * rng.standard_normal(nodes)
        return v

    results = {}
    diffs = {name: lhs - rhs for name, (lhs, rhs) in sides.items()}
    for name in sides:
        results[name] = 0.0
    for _ in range(trials):
        fv, gv, hv = rand_fn(), rand_fn(), rand_fn()
        norm = np.sqrt(np.sum(np.abs(fv) ** 2) * dxn) \
            * np.sqrt(np.sum(np.abs(gv) ** 2) * dxn) \
            * np.sqrt(np.sum(np.abs(hv) ** 2) * dxn)
        for name, D in diffs.items():
            val = np.einsum("jpq,p,q,j->", D, fv, gv, hv) * dxn
            results[name] = max(results[name], abs(val) / norm)

    return {
        "residuals": results,
        "max_residual": max(results.values()),
        "verdict": "PASS" if max(results.values()) <= tol else "FAILED",
        "trials": trials,
        "grid_points": grid.points_per_axis,
    }
