"""Cross-group checks: the weighted full-shift cell value is group-free, the
lattice classical sums match closed forms, and finite groups act by their
regular representation with zero defect."""

import math

import numpy as np
import pytest

from soficpressure.groups import (
    FiniteGroup,
    FreeGroup,
    IntegerLattice,
    cyclic_group,
)
from soficpressure.pressure import (
    MapSpaceQuery,
    classical_separated_sum,
    amenable_pressure,
    evaluate_cell,
)
from soficpressure.shiftspace import CoordinateMetric, Observable, full_shift
from soficpressure.sofic import (
    defect_report,
    random_approximation,
    regular_approximation,
    torus_approximation,
)


def _cell(group, sigma, k, coeffs):
    X = full_shift(group, k)
    f = Observable.single_site(group, coeffs)
    q = MapSpaceQuery(F=group.ball(1), delta=0.5, eps=0.5, sigma=sigma,
                      metric=CoordinateMetric(), sft_tolerance=0.0)
    return evaluate_cell(q, X, f)


def test_full_shift_cell_value_is_group_independent():
    coeffs = [0.0, math.log(2)]
    expected = math.log(3)

    free = FreeGroup(2)
    est = _cell(free, random_approximation(free, 8, 2, seed=2), 2, coeffs)
    assert est.map_size == 2 ** 8
    assert est.normalized == pytest.approx(expected, abs=1e-12)

    lattice = IntegerLattice(2)
    est = _cell(lattice, torus_approximation(lattice, 3, 1), 2, coeffs)
    assert est.map_size == 2 ** 9
    assert est.normalized == pytest.approx(expected, abs=1e-12)

    finite = cyclic_group(6)
    est = _cell(finite, regular_approximation(finite), 2, coeffs)
    assert est.map_size == 2 ** 6
    assert est.normalized == pytest.approx(expected, abs=1e-12)


def test_regular_approximation_zero_defect():
    table = np.array([[(i + j) % 5 for j in range(5)] for i in range(5)])
    G = FiniteGroup(table)
    sigma = regular_approximation(G)
    report = defect_report(sigma, G.ball(1))
    assert report.max_defect() == 0.0
    assert sigma.evaluate(2)[3] == G.multiply(2, 3)


def test_lattice_classical_full_shift():
    lattice = IntegerLattice(2)
    X = full_shift(lattice, 2)
    f0 = Observable.single_site(lattice, [0.0, 0.0])
    for n in (1, 2, 3):
        F = lattice.folner(n)
        value = classical_separated_sum(X, f0, F, 1.0)
        assert value == pytest.approx(len(F) * math.log(2), abs=1e-12)
    result = amenable_pressure(X, f0, 3)
    assert math.isnan(result.exact)
    assert all(v == pytest.approx(math.log(2), abs=1e-12)
               for _, v in result.curve)


def test_lattice_classical_weighted():
    lattice = IntegerLattice(2)
    X = full_shift(lattice, 2)
    a = [0.0, 0.4]
    f = Observable.single_site(lattice, a)
    for n in (1, 2):
        F = lattice.folner(n)
        value = classical_separated_sum(X, f, F, 1.0)
        expected = len(F) * math.log(sum(math.exp(x) for x in a))
        assert value == pytest.approx(expected, abs=1e-10)


def test_free_group_entropy_specialization():
    free = FreeGroup(2)
    X = full_shift(free, 3)
    f0 = Observable.single_site(free, [0.0] * 3)
    sigma = random_approximation(free, 7, 2, seed=5)
    est = _cell(free, sigma, 3, [0.0] * 3)
    assert est.map_size == 3 ** 7
    assert est.normalized == pytest.approx(math.log(3), abs=1e-12)
