"""Boundary sizes, degenerate alphabets, maximality of greedy nets, and
assigned-versus-derived bookkeeping."""

import numpy as np
import pytest

from soficpressure.groups import FreeGroup, IntegerLine
from soficpressure.measures import ProductMeasure, SignedCylinderMeasure, \
    pressure_domination_check
from soficpressure.pressure import (
    MapSpaceQuery,
    enumerate_map_space,
    evaluate_cell,
    greedy_separated,
    transfer_cell,
)
from soficpressure.shiftspace import (
    Alphabet,
    CoordinateMetric,
    Observable,
    WeightedWordMetric,
    full_shift,
    golden_mean_shift,
    pointwise_distances,
)
from soficpressure.sofic import (
    cyclic_approximation,
    defect_report,
    random_approximation,
)
from soficpressure import transfer

Z = IntegerLine()
METRIC = CoordinateMetric()


def test_transfer_trace_matches_enumeration_at_tiny_d():
    gm = golden_mean_shift(Z)
    f = Observable.single_site(Z, [0.0, 0.25])
    for d in (1, 2):
        sigma = cyclic_approximation(Z, d, 1)
        q = MapSpaceQuery(F=Z.ball(1), delta=0.5, eps=0.5, sigma=sigma,
                          metric=METRIC, sft_tolerance=0.0)
        est = evaluate_cell(q, gm, f)
        oracle = transfer_cell(gm, f, d, 1, 0.5, 0.5)
        assert est.map_size == oracle.map_size
        assert est.log_partition_sum == pytest.approx(
            oracle.log_partition_sum, abs=1e-12)


def test_single_symbol_alphabet():
    X = full_shift(Z, 1)
    sigma = cyclic_approximation(Z, 6, 1)
    q = MapSpaceQuery(F=Z.ball(1), delta=0.5, eps=0.5, sigma=sigma,
                      metric=METRIC, sft_tolerance=0.0)
    members = list(enumerate_map_space(q, X))
    assert len(members) == 1
    est = evaluate_cell(q, X, Observable.single_site(Z, [0.3]))
    assert est.normalized == pytest.approx(0.3)


def test_greedy_net_is_maximal():
    sigma = random_approximation(FreeGroup(2), 6, 2, seed=8)
    metric = WeightedWordMetric(FreeGroup(2), 3)
    q = MapSpaceQuery(F=FreeGroup(2).ball(1), delta=0.9, eps=0.3,
                      sigma=sigma, metric=metric, mode="generic",
                      sft_tolerance=0.0)
    members = list(enumerate_map_space(q, full_shift(FreeGroup(2), 2)))
    assert members
    kept = greedy_separated(members, 0.3, metric)
    kept_keys = {tuple(m.beta) for m in kept}
    for a in kept:
        for b in kept:
            if tuple(a.beta) != tuple(b.beta):
                assert float(np.max(pointwise_distances(a, b, metric))) >= 0.3
    for phi in members:
        if tuple(phi.beta) in kept_keys:
            continue
        assert any(float(np.max(pointwise_distances(phi, psi, metric))) < 0.3
                   for psi in kept)


def test_defect_report_flags_derived_elements():
    sigma = cyclic_approximation(Z, 10, 1)   # only ball(1) assigned
    report = defect_report(sigma, Z.ball(1))
    # products of ball(1) reach +-2, which must be derived
    assert 2 in report.derived_elements
    assert -2 in report.derived_elements
    assert 1 not in report.derived_elements
    assert report.max_defect() == 0.0


def test_domination_random_product_vectors_pass():
    X = full_shift(Z, 2)
    window = Z.ball(1)
    ind1 = Observable(Z, Alphabet(2), (0,), [0.0, 1.0])
    const = Observable.constant(Z, Alphabet(2), 1.0)

    def pressure_fn(obs):
        system = transfer.build_transfer_system(X, obs)
        return transfer.log_perron(system.weighted)

    rng = np.random.default_rng(9)
    for _ in range(10):
        p1 = float(rng.uniform(0.05, 0.95))
        mu = SignedCylinderMeasure.from_product(
            Z, window, ProductMeasure([p1, 1 - p1]))
        report = pressure_domination_check(mu, [ind1, const], pressure_fn)
        assert report.passed
        assert report.invariance_defect <= 1e-12


def test_log_trace_power_zero_matrix():
    assert transfer.log_trace_power(np.zeros((2, 2)), 4) == float("-inf")


def test_integer_trace_power_exact_big():
    # traces of adjacency powers satisfy the Lucas recurrence exactly, far
    # beyond float precision
    A = np.array([[1, 1], [1, 0]])
    assert transfer.integer_trace_power(A, 10) == 123
    assert transfer.integer_trace_power(A, 128) == \
        transfer.integer_trace_power(A, 127) + \
        transfer.integer_trace_power(A, 126)


def test_weighted_metric_free_group_generic_membership():
    F2 = FreeGroup(2)
    sigma = random_approximation(F2, 5, 2, seed=13)
    metric = WeightedWordMetric(F2, 2)
    q = MapSpaceQuery(F=F2.ball(1), delta=0.8, eps=0.5, sigma=sigma,
                      metric=metric, mode="generic", sft_tolerance=0.0)
    members = list(enumerate_map_space(q, full_shift(F2, 2)))
    # constants are always members; the loose delta keeps the set nonempty
    assert (0,) * 5 in [tuple(m.beta) for m in members]
