"""Commutator/transpose algebra: the four exchange identities."""

import numpy as np
import pytest

from bilop.errors import InvalidInputError
from bilop.grid import Grid, GridFunction
from bilop.operator import (
    apply,
    commutator,
    make_operator,
    pairing,
    transpose,
    verify_transpose_identities,
)
from bilop.symbols import catalog_symbol, symbol_catalog

RESIDUAL_KEYS = ("slot1_transpose1", "slot1_transpose2", "slot2_transpose1", "slot2_transpose2")


def multiplier(grid):
    x = grid.nodes_1d()
    return GridFunction(grid, np.sin(x) + 0.3 * np.cos(2 * x))


def random_triple(grid, seed):
    rng = np.random.default_rng(seed)

    def one():
        v = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        return GridFunction(grid, v)

    return one(), one(), one()


def test_weak_form_identities_from_first_principles():
    # assemble each side with nothing but commutator application, operator
    # transposition, and the duality pairing - no shared tensor algebra
    grid = Grid(dim=1, points_per_axis=16)
    a = multiplier(grid)
    for name in ("sqrt1", "theta_sqrt1"):
        T = make_operator(catalog_symbol(name), grid)
        T1 = transpose(T, 1)
        T2 = transpose(T, 2)
        for seed in range(5):
            f, g, h = random_triple(grid, seed)
            scale = max(abs(pairing(apply(T, f, g), h)), 1.0)

            lhs1 = pairing(apply(commutator(T, 1, a), f, g), h)
            rhs1 = -pairing(apply(commutator(T1, 1, a), h, g), f)
            assert abs(lhs1 - rhs1) < 1e-10 * scale

            rhs2 = (pairing(apply(commutator(T2, 1, a), f, h), g)
                    - pairing(apply(commutator(T2, 2, a), f, h), g))
            assert abs(lhs1 - rhs2) < 1e-10 * scale

            lhs2 = pairing(apply(commutator(T, 2, a), f, g), h)
            rhs3 = (pairing(apply(commutator(T1, 2, a), h, g), f)
                    - pairing(apply(commutator(T1, 1, a), h, g), f))
            assert abs(lhs2 - rhs3) < 1e-10 * scale

            rhs4 = -pairing(apply(commutator(T2, 2, a), f, h), g)
            assert abs(lhs2 - rhs4) < 1e-10 * scale


@pytest.mark.parametrize("n", [16, 32])
@pytest.mark.parametrize("name", list(symbol_catalog(dim=1)))
def test_identities_hold_for_whole_catalog(name, n):
    grid = Grid(dim=1, points_per_axis=n)
    T = make_operator(catalog_symbol(name), grid)
    rep = verify_transpose_identities(T, multiplier(grid))
    assert rep["verdict"] == "PASS"
    assert rep["max_residual"] < 1e-10
    assert rep["grid_points"] == n


def test_identities_hold_in_2d():
    grid = Grid(dim=2, points_per_axis=8)
    xs, ys = grid.node_mesh()
    a = GridFunction(grid, np.sin(xs) + 0.5 * np.cos(ys))
    T = make_operator(catalog_symbol("sqrt1", dim=2), grid)
    rep = verify_transpose_identities(T, a)
    assert rep["verdict"] == "PASS"
    assert rep["max_residual"] < 1e-10


def test_report_structure():
    grid = Grid(dim=1, points_per_axis=16)
    T = make_operator(catalog_symbol("xi"), grid)
    rep = verify_transpose_identities(T, multiplier(grid), trials=25, seed=4)
    assert set(rep["residuals"]) == set(RESIDUAL_KEYS)
    assert rep["trials"] == 25
    assert rep["max_residual"] == max(rep["residuals"].values())
    assert all(v >= 0 for v in rep["residuals"].values())


def test_trial_floor_enforced():
    grid = Grid(dim=1, points_per_axis=16)
    T = make_operator(catalog_symbol("xi"), grid)
    with pytest.raises(InvalidInputError):
        verify_transpose_identities(T, multiplier(grid), trials=5)


def test_residuals_are_machine_precision_not_merely_small():
    # the identities are exact in exact arithmetic; the discrete check should
    # sit at rounding level, far below the acceptance tolerance
    grid = Grid(dim=1, points_per_axis=32)
    T = make_operator(catalog_symbol("theta_sqrt1"), grid)
    rep = verify_transpose_identities(T, multiplier(grid))
    assert rep["max_residual"] < 1e-12
