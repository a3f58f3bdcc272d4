"""Model spaces, partition sums, cells, schedules, classical pressure."""

import math
from fractions import Fraction

import numpy as np
import pytest

from soficpressure.groups import IntegerLine
from soficpressure.pressure import (
    EmpiricalConstraint,
    EnumerationBudgetError,
    MapSpaceQuery,
    Schedule,
    ScheduleCell,
    amenable_pressure,
    classical_cover_sum,
    classical_separated_sum,
    count_map_space,
    enumerate_map_space,
    evaluate_cell,
    good_index_set,
    greedy_separated,
    log_partition_sum,
    map_membership,
    run_schedule,
    summarize_schedule,
    transfer_cell,
)
from soficpressure.shiftspace import (
    Alphabet,
    CoordinateMetric,
    Labeling,
    Observable,
    Subshift,
    WeightedWordMetric,
    full_shift,
    golden_mean_shift,
)
from soficpressure.sofic import SoficMap, cyclic_approximation

Z = IntegerLine()
METRIC = CoordinateMetric()
LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


def query(sigma, delta=0.5, eps=0.5, radius=1, mode="model", sft=0.0,
          metric=METRIC):
    return MapSpaceQuery(F=Z.ball(radius), delta=delta, eps=eps, sigma=sigma,
                         metric=metric, mode=mode, sft_tolerance=sft)


def corrupted_identity_sigma(d, cycle=3):
    """Cyclic model whose identity permutation is replaced by a short cycle,
    so equivariance mismatches actually occur."""
    base = cyclic_approximation(Z, d, 2)
    assignment = dict(base.assignment)
    e_arr = np.arange(d)
    e_arr[:cycle] = (np.arange(cycle) + 1) % cycle
    assignment[0] = e_arr
    return SoficMap(Z, d, assignment)


def test_membership_full_shift_exact_sigma_everything_passes():
    sigma = cyclic_approximation(Z, 6, 2)
    X = full_shift(Z, 2)
    q = query(sigma, delta=1e-9)
    rng = np.random.default_rng(0)
    for _ in range(20):
        phi = Labeling(sigma, rng.integers(0, 2, size=6))
        assert map_membership(phi, q, X)


def test_membership_threshold_arithmetic():
    d = 8
    sigma = corrupted_identity_sigma(d)
    X = full_shift(Z, 2)
    phi = Labeling(sigma, np.array([0, 1, 0, 0, 0, 0, 0, 0]))
    counts = []
    for s in Z.ball(1):
        u = sigma.evaluate(s)
        v = sigma.evaluate(0)[u]
        counts.append(int((phi.beta[u] != phi.beta[v]).sum()))
    worst = max(counts)
    assert worst >= 1
    just_above = math.sqrt(worst / d) + 1e-9
    just_below = math.sqrt(worst / d) - 1e-9
    assert map_membership(phi, query(sigma, delta=just_above), X)
    assert not map_membership(phi, query(sigma, delta=just_below), X)
    # strictness: mismatch fraction equal to delta^2 is excluded
    exact = math.sqrt(worst / d)
    if abs(Fraction(exact) ** 2 * d - worst) == 0:
        assert not map_membership(phi, query(sigma, delta=exact), X)


def test_membership_monotone_in_F():
    sigma = corrupted_identity_sigma(10)
    X = full_shift(Z, 2)
    rng = np.random.default_rng(1)
    for _ in range(30):
        phi = Labeling(sigma, rng.integers(0, 2, size=10))
        for delta in (0.3, 0.5, 0.8):
            wide = map_membership(phi, query(sigma, delta=delta, radius=2), X)
            narrow = map_membership(phi, query(sigma, delta=delta, radius=1), X)
            if wide:
                assert narrow


def test_enumerate_full_shift_counts():
    sigma = cyclic_approximation(Z, 4, 2)
    X = full_shift(Z, 2)
    members = list(enumerate_map_space(query(sigma), X))
    assert len(members) == 16
    betas = [tuple(m.beta) for m in members]
    assert betas == sorted(betas)          # lexicographic order


def test_enumerate_golden_mean_lucas_count():
    sigma = cyclic_approximation(Z, 4, 2)
    X = golden_mean_shift(Z)
    members = list(enumerate_map_space(query(sigma, sft=0.0), X))
    assert len(members) == 7


def test_enumerate_empty_map_space():
    sigma = cyclic_approximation(Z, 4, 2)
    X = Subshift(Z, Alphabet(2), [((0,), (0,)), ((0, 1), (1, 1))])
    assert list(enumerate_map_space(query(sigma, sft=0.0), X)) == []


def test_corrupted_identity_restricts_members():
    # sigma_e cycles 0 -> 1 -> 2 -> 0; a tiny delta then forces labelings to
    # be constant across {0, 1, 2}, and the violation check reads symbol 0
    # through the corrupted identity permutation
    d = 6
    sigma = corrupted_identity_sigma(d)
    X = golden_mean_shift(Z)
    members = [tuple(int(s) for s in m.beta) for m in
               enumerate_map_space(query(sigma, delta=1e-6, sft=0.0), X)]

    e_arr = [1, 2, 0, 3, 4, 5]
    expected = []
    for code in range(2 ** d):
        beta = [(code >> (d - 1 - j)) & 1 for j in range(d)]
        if not beta[0] == beta[1] == beta[2]:
            continue
        if any(beta[e_arr[i]] == 1 and beta[(i - 1) % d] == 1
               for i in range(d)):
            continue
        expected.append(tuple(beta))
    assert members == expected
    assert (0,) * d in members


def test_budget_exceeded_reported():
    sigma = cyclic_approximation(Z, 16, 2)
    X = full_shift(Z, 2)
    with pytest.raises(EnumerationBudgetError):
        list(enumerate_map_space(query(sigma), X, budget=1000))


def test_greedy_separated_examples():
    sigma = cyclic_approximation(Z, 3, 1)
    X = full_shift(Z, 2)
    members = list(enumerate_map_space(query(sigma), X))
    kept = greedy_separated(members, 0.5, METRIC)
    assert len(kept) == len(members) == 8
    assert greedy_separated(members, 1.5, METRIC) == [members[0]]
    assert greedy_separated(members[:1], 0.5, METRIC) == members[:1]


def test_log_partition_sum_closed_forms():
    sigma = cyclic_approximation(Z, 4, 1)
    X = full_shift(Z, 2)
    members = list(enumerate_map_space(query(sigma), X))
    flat = Observable.single_site(Z, [0.0, 0.0])
    assert log_partition_sum(members, flat) == pytest.approx(math.log(16))

    sigma3 = cyclic_approximation(Z, 3, 1)
    members3 = list(enumerate_map_space(query(sigma3), X))
    weighted = Observable.single_site(Z, [0.0, math.log(2)])
    assert log_partition_sum(members3, weighted) == \
        pytest.approx(math.log(27), abs=1e-12)

    const = Observable.single_site(Z, [1.25, 1.25])
    assert log_partition_sum(members3[:1], const) == pytest.approx(3 * 1.25)
    with pytest.raises(ValueError):
        log_partition_sum([], flat)


def test_log_partition_sum_against_rational_oracle():
    # weights that exponentiate to rationals: f = log(3) / log(5) per symbol
    sigma = cyclic_approximation(Z, 4, 1)
    X = full_shift(Z, 2)
    members = list(enumerate_map_space(query(sigma), X))
    f = Observable.single_site(Z, [math.log(3), math.log(5)])
    exact = Fraction(0)
    for phi in members:
        prod = Fraction(1)
        for s in phi.beta:
            prod *= (3 if s == 0 else 5)
        exact += prod
    got = log_partition_sum(members, f)
    assert abs(got - math.log(exact)) <= 1e-12 * abs(math.log(exact))


def test_evaluate_cell_bernoulli_exact():
    X = full_shift(Z, 2)
    f = Observable.single_site(Z, [0.0, math.log(2)])
    for d in (4, 6, 9):
        sigma = cyclic_approximation(Z, d, 2)
        est = evaluate_cell(query(sigma), X, f)
        assert est.map_size == 2 ** d
        assert est.separated_size == est.map_size
        assert est.normalized == pytest.approx(math.log(3), abs=1e-9)


def test_evaluate_cell_zero_potential_is_entropy():
    X = golden_mean_shift(Z)
    sigma = cyclic_approximation(Z, 8, 2)
    f0 = Observable.single_site(Z, [0.0, 0.0])
    est = evaluate_cell(query(sigma, sft=0.0), X, f0)
    assert est.normalized == pytest.approx(math.log(est.separated_size) / 8)


def test_evaluate_cell_empty_sentinel():
    sigma = cyclic_approximation(Z, 4, 2)
    X = Subshift(Z, Alphabet(2), [((0,), (0,)), ((0, 1), (1, 1))])
    est = evaluate_cell(query(sigma, sft=0.0), X,
                        Observable.single_site(Z, [0.0, 0.0]))
    assert est.map_size == 0
    assert est.normalized == float("-inf")
    assert est.log_partition_sum == float("-inf")


def _model_vs_generic(sigma, X, f, delta, eps, sft):
    qm = query(sigma, delta=delta, eps=eps, sft=sft, mode="model")
    qg = query(sigma, delta=delta, eps=eps, sft=sft, mode="generic")
    model = [tuple(m.beta) for m in enumerate_map_space(qm, X)]
    generic = [tuple(m.beta) for m in enumerate_map_space(qg, X)]
    assert model == generic
    if model:
        members = [Labeling(sigma, np.array(b)) for b in model]
        lps = log_partition_sum(members, f)
        em = evaluate_cell(qm, X, f)
        eg = evaluate_cell(qg, X, f)
        assert em.log_partition_sum == pytest.approx(lps, abs=1e-12)
        assert eg.log_partition_sum == pytest.approx(lps, abs=1e-12)


def test_model_generic_oracle_equivalence():
    f2 = Observable.single_site(Z, [0.1, -0.4])
    f3 = Observable.single_site(Z, [0.1, -0.4, 0.9])
    cases = [
        (cyclic_approximation(Z, 6, 2), full_shift(Z, 2), f2, 0.5, 0.5, 0.0),
        (cyclic_approximation(Z, 6, 2), golden_mean_shift(Z), f2, 0.5, 0.5, 0.0),
        (corrupted_identity_sigma(6), full_shift(Z, 2), f2, 0.45, 0.5, 0.0),
        (corrupted_identity_sigma(6), golden_mean_shift(Z), f2, 0.45, 0.5, 0.25),
        (cyclic_approximation(Z, 5, 2), full_shift(Z, 3), f3, 0.3, 0.5, 0.0),
    ]
    for sigma, X, f, delta, eps, sft in cases:
        _model_vs_generic(sigma, X, f, delta, eps, sft)


def test_monotonicity_in_delta_and_F():
    sigma = corrupted_identity_sigma(8)
    X = golden_mean_shift(Z)
    counts = [count_map_space(query(sigma, delta=delta, sft=0.3), X)
              for delta in (0.2, 0.4, 0.6, 1.0)]
    assert counts == sorted(counts)
    for delta in (0.3, 0.6):
        wide = count_map_space(query(sigma, delta=delta, radius=2, sft=0.3), X)
        narrow = count_map_space(query(sigma, delta=delta, radius=1, sft=0.3), X)
        assert wide <= narrow


def test_monotonicity_in_eps_generic():
    sigma = corrupted_identity_sigma(6)
    X = full_shift(Z, 2)
    metric = WeightedWordMetric(Z, 3)
    f = Observable.single_site(Z, [0.0, 0.2])
    values = []
    for eps in (0.2, 0.4, 0.7, 1.0):
        q = query(sigma, delta=0.9, eps=eps, mode="generic", metric=metric)
        values.append(evaluate_cell(q, X, f).log_partition_sum)
    for lo, hi in zip(values[1:], values[:-1]):
        assert lo <= hi + 1e-12


def test_separated_exactness_invariant():
    sigma = cyclic_approximation(Z, 6, 2)
    X = golden_mean_shift(Z)
    q = query(sigma, eps=1.0, sft=0.0)
    members = list(enumerate_map_space(q, X))
    kept = greedy_separated(members, q.eps, METRIC)
    assert len(kept) == len(members)
    est = evaluate_cell(q, X, Observable.single_site(Z, [0.0, 0.0]))
    assert est.separated_size == est.map_size == len(members)


def test_transfer_oracle_equivalence_small_d():
    f = Observable.single_site(Z, [0.0, 0.37])
    for X in (golden_mean_shift(Z), full_shift(Z, 2)):
        for d in range(3, 21, 3):
            sigma = cyclic_approximation(Z, d, 2)
            est = evaluate_cell(query(sigma, sft=0.0), X, f)
            oracle = transfer_cell(X, f, d, 1, 0.5, 0.5)
            assert est.map_size == oracle.map_size
            if est.map_size:
                rel = abs(est.log_partition_sum - oracle.log_partition_sum)
                rel /= max(1.0, abs(oracle.log_partition_sum))
                assert rel <= 1e-9


def test_transfer_oracle_equivalence_multisite_windows():
    pair = Observable(Z, Alphabet(2), (0, 1), [0.1, -0.3, 0.45, 0.2])
    straddle = Observable(Z, Alphabet(2), (-1, 1),
                          [0.05, 0.6, -0.25, 0.0])
    for X in (golden_mean_shift(Z), full_shift(Z, 2)):
        for f in (pair, straddle):
            for d in (4, 7, 10, 13):
                sigma = cyclic_approximation(Z, d, 2)
                est = evaluate_cell(query(sigma, sft=0.0), X, f)
                oracle = transfer_cell(X, f, d, 1, 0.5, 0.5)
                assert est.map_size == oracle.map_size
                rel = abs(est.log_partition_sum - oracle.log_partition_sum)
                rel /= max(1.0, abs(oracle.log_partition_sum))
                assert rel <= 1e-9


def test_cell_level_inequalities():
    sigma = cyclic_approximation(Z, 8, 2)
    X = golden_mean_shift(Z)
    members = list(enumerate_map_space(query(sigma, sft=0.0), X))
    f = Observable.single_site(Z, [0.3, -0.2])
    g = Observable.single_site(Z, [0.0, 1.0])
    d = 8
    base = log_partition_sum(members, f)

    # constant shift, exact
    shifted = log_partition_sum(members, f.plus_constant(0.7))
    assert abs(shifted - base - 0.7 * d) <= 1e-12 * max(1.0, abs(base))

    # monotone in f
    assert base <= log_partition_sum(
        members, Observable.single_site(Z, [0.35, -0.1])) + 1e-12

    # Holder convexity
    lg = log_partition_sum(members, g)
    for p in (0.1, 0.3, 0.5, 0.7, 0.9):
        mixed = log_partition_sum(members, f.combine(g, p, 1 - p))
        assert mixed <= p * base + (1 - p) * lg + 1e-9

    # scaling
    for c in (0.5, 2.0, 3.0):
        scaled = log_partition_sum(members, f.scaled(c))
        if c >= 1:
            assert scaled <= c * base + 1e-9
        else:
            assert scaled >= c * base - 1e-9

    # |cell(f)| <= cell(|f|)
    assert abs(base) <= log_partition_sum(members, f.abs()) + 1e-12


def test_good_index_set_exact_and_corrupted():
    sigma = cyclic_approximation(Z, 10, 2)
    phi = Labeling(sigma, np.arange(10) % 2)
    assert len(good_index_set(phi, Z.ball(1), 0.25)) == 10

    bad = corrupted_identity_sigma(10)
    psi = Labeling(bad, np.arange(10) % 2)
    lam = good_index_set(psi, Z.ball(1), 0.25)
    assert len(lam) < 10


def test_good_index_membership_bound():
    sigma = corrupted_identity_sigma(8, cycle=4)
    X = full_shift(Z, 2)
    F = Z.ball(1)
    delta = 0.6
    q = query(sigma, delta=delta)
    members = list(enumerate_map_space(q, X))
    assert members
    for phi in members[:64]:
        lam = good_index_set(phi, F, delta)
        assert len(lam) >= (1 - len(F) * delta) * 8 - 1e-9


def test_classical_full_shift_and_weighted():
    X = full_shift(Z, 2)
    f0 = Observable.single_site(Z, [0.0, 0.0])
    for n in (1, 3, 5):
        assert classical_separated_sum(X, f0, Z.folner(n), 1.0) == \
            pytest.approx(n * math.log(2))
    f = Observable.single_site(Z, [0.0, math.log(2)])
    assert math.exp(classical_separated_sum(X, f, Z.folner(2), 1.0)) == \
        pytest.approx(9.0)


def test_classical_cover_equals_separated():
    X = full_shift(Z, 2)
    f = Observable.single_site(Z, [0.2, -0.3])
    for n in (2, 4, 6, 8):
        F = Z.folner(n)
        assert classical_cover_sum(X, f, F, 1.0) == \
            pytest.approx(classical_separated_sum(X, f, F, 1.0), abs=1e-12)


def test_classical_golden_mean_word_count():
    X = golden_mean_shift(Z)
    f0 = Observable.single_site(Z, [0.0, 0.0])
    # extendable binary words of length 4 without adjacent ones: 8 of them
    assert math.exp(classical_separated_sum(X, f0, Z.folner(4), 1.0)) == \
        pytest.approx(8.0)


def test_classical_weighted_golden_mean_brute_force():
    # independent oracle: sum exp(word weight) over admissible words; for
    # this subshift every locally admissible word extends both ways
    import itertools as it
    X = golden_mean_shift(Z)
    a = [0.15, -0.35]
    f = Observable.single_site(Z, a)
    for n in (2, 4, 6, 8):
        brute = 0.0
        for word in it.product(range(2), repeat=n):
            if any(x == 1 and y == 1 for x, y in zip(word, word[1:])):
                continue
            brute += math.exp(sum(a[s] for s in word))
        got = classical_separated_sum(X, f, Z.folner(n), 1.0)
        assert got == pytest.approx(math.log(brute), abs=1e-12)


def test_classical_boundary_window_brute_force():
    # observable reading one step past the separation window: the pattern
    # sum groups hull patterns by their separation-window restriction and
    # maximizes over the boundary coordinate; verify against a hand-rolled
    # brute force over the hull
    import itertools as it
    X = golden_mean_shift(Z)
    f = Observable(Z, Alphabet(2), (0, 1), [0.0, 0.4, -0.2, 0.0])
    for n in (2, 3, 4):
        F = Z.folner(n)
        # weight of x is sum over s in F of table(x_{-s}, x_{1-s});
        # coordinates read: {-(n-1) .. 1}, separation window {-(n-1) .. 0}
        hull = list(range(-(n - 1), 2))
        best = {}
        for patt in it.product(range(2), repeat=len(hull)):
            assign = dict(zip(hull, patt))
            # forbidden pattern: ones at consecutive coordinates
            if any(assign[c] == 1 and assign[c + 1] == 1
                   for c in hull[:-1]):
                continue
            weight = sum(f.value((assign[-s], assign[1 - s]))
                         for s in range(n))
            key = tuple(assign[c] for c in hull[:-1])
            if key not in best or weight > best[key]:
                best[key] = weight
        brute = math.log(sum(math.exp(w) for w in best.values()))
        got = classical_separated_sum(X, f, F, 1.0)
        assert got == pytest.approx(brute, abs=1e-12)


def test_generic_membership_matches_distance_helper():
    from soficpressure.pressure import equivariance_distances
    from soficpressure.sofic import random_approximation
    from soficpressure.groups import FreeGroup

    F2 = FreeGroup(2)
    sigma = random_approximation(F2, 6, 2, seed=21)
    metric = WeightedWordMetric(F2, 3)
    X = full_shift(F2, 2)
    rng = np.random.default_rng(22)
    for _ in range(40):
        phi = Labeling(sigma, rng.integers(0, 2, size=6))
        worst = max(
            math.sqrt(float(np.mean(
                equivariance_distances(phi, s, metric) ** 2)))
            for s in F2.ball(1))
        for delta in (worst * 0.9 + 1e-9, worst * 1.1 + 1e-9):
            q = MapSpaceQuery(F=F2.ball(1), delta=delta, eps=0.5, sigma=sigma,
                              metric=metric, mode="generic", sft_tolerance=0.0)
            assert map_membership(phi, q, X) == (worst < delta)


def test_amenable_pressure_examples():
    X = full_shift(Z, 3)
    a = [0.4, -0.1, 0.7]
    f = Observable.single_site(Z, a)
    result = amenable_pressure(X, f, 6)
    assert result.exact == pytest.approx(math.log(sum(map(math.exp, a))),
                                         abs=1e-12)

    gm = golden_mean_shift(Z)
    f0 = Observable.single_site(Z, [0.0, 0.0])
    result = amenable_pressure(gm, f0, 16)
    assert result.exact == pytest.approx(LOG_PHI, abs=1e-12)
    ns = [n for n, _ in result.curve]
    assert ns == list(range(1, 17))
    assert result.curve[-1][1] == pytest.approx(LOG_PHI, abs=0.02)

    b = 0.5
    fb = Observable.single_site(Z, [0.0, b])
    root = (1 + math.sqrt(1 + 4 * math.exp(b))) / 2   # λ² = λ + e^b
    result = amenable_pressure(gm, fb, 4)
    assert result.exact == pytest.approx(math.log(root), abs=1e-12)


def test_schedule_single_cell_summary():
    X = full_shift(Z, 2)
    f = Observable.single_site(Z, [0.0, 0.1])
    schedule = Schedule(cells=(ScheduleCell(4, 2, 1, 0.5, 0.5),))
    ests, summary = run_schedule(
        schedule, X, f, lambda d, r: cyclic_approximation(Z, d, r), METRIC,
        sft_rule=lambda delta: 0.0)
    assert len(ests) == 1
    assert summary["summary"] == ests[0].normalized
    assert summary["failures"] == []


def test_schedule_full_shift_three_symbols():
    X = full_shift(Z, 3)
    f0 = Observable.single_site(Z, [0.0, 0.0, 0.0])
    cells = tuple(ScheduleCell(d, 2, 1, 0.5, 0.5) for d in (3, 4, 5))
    ests, summary = run_schedule(
        Schedule(cells=cells), X, f0,
        lambda d, r: cyclic_approximation(Z, d, r), METRIC,
        sft_rule=lambda delta: 0.0)
    for est in ests:
        assert est.normalized == pytest.approx(math.log(3), abs=1e-12)
    assert summary["summary"] == pytest.approx(math.log(3), abs=1e-12)


def test_schedule_golden_mean_transfer_engine():
    X = golden_mean_shift(Z)
    f0 = Observable.single_site(Z, [0.0, 0.0])
    cells = tuple(ScheduleCell(d, 2, 1, 0.5, 0.5) for d in (16, 32, 64))
    ests, summary = run_schedule(
        Schedule(cells=cells), X, f0, None, METRIC, engine="transfer")
    assert abs(summary["summary"] - LOG_PHI) <= 1e-6


def test_schedule_tower_reduction():
    # reduction: tail-max over d, min over delta, min over radius, max over eps
    from soficpressure.pressure import PressureEstimate

    def cell(d, radius, delta, eps, value):
        return PressureEstimate(d, radius, delta, eps, "model", 1, 1,
                                value * d, value, 0.0)

    cells = tuple(ScheduleCell(d, 2, r, delta, eps)
                  for r in (1,) for delta in (0.2, 0.5) for eps in (0.4, 0.8)
                  for d in (4, 8))
    sched = Schedule(cells=cells)
    ests = [
        cell(4, 1, 0.2, 0.4, 0.9), cell(8, 1, 0.2, 0.4, 1.0),
        cell(4, 1, 0.5, 0.4, 1.4), cell(8, 1, 0.5, 0.4, 1.2),
        cell(4, 1, 0.2, 0.8, 0.7), cell(8, 1, 0.2, 0.8, 0.8),
        cell(4, 1, 0.5, 0.8, 1.1), cell(8, 1, 0.5, 0.8, 0.9),
    ]
    summary = summarize_schedule(sched, ests)
    # eps 0.4: min(1.0, 1.2) = 1.0; eps 0.8: min(0.8, 0.9) = 0.8; max = 1.0
    assert summary["summary"] == pytest.approx(1.0)


def test_schedule_requires_increasing_d():
    with pytest.raises(ValueError):
        Schedule(cells=(ScheduleCell(8, 2, 1, 0.5, 0.5),
                        ScheduleCell(4, 2, 1, 0.5, 0.5)))


def test_schedule_records_cell_failures_and_continues():
    X = full_shift(Z, 2)
    f = Observable.single_site(Z, [0.0, 0.1])
    cells = tuple(ScheduleCell(d, 2, 1, 0.5, 0.5) for d in (4, 30))
    ests, summary = run_schedule(
        Schedule(cells=cells), X, f,
        lambda d, r: cyclic_approximation(Z, d, r), METRIC,
        sft_rule=lambda delta: 0.0, budget=1 << 12)
    # the d=30 cell blows the budget; the d=4 cell still summarizes
    assert len(ests) == 1 and ests[0].d == 4
    assert len(summary["failures"]) == 1
    assert summary["failures"][0][0].d == 30
    assert "EnumerationBudgetError" in summary["failures"][0][1]
    assert summary["summary"] == ests[0].normalized


def test_empirical_constraint_strict_boundary():
    d = 20
    sigma = cyclic_approximation(Z, d, 2)
    X = full_shift(Z, 2)
    indicator = Observable(Z, Alphabet(2), (0,), [0.0, 1.0])
    con = EmpiricalConstraint(indicator, Fraction(1, 2), Fraction("0.05"))
    q = query(sigma)
    members = list(enumerate_map_space(q, X, constraints=[con]))
    # exactly the type class with ten ones: |9/20 - 1/2| = 0.05 is excluded
    assert len(members) == math.comb(20, 10)
    assert all(int(m.beta.sum()) == 10 for m in members)
