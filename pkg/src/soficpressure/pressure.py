"""Model spaces of approximately equivariant maps, separated-set partition
sums, pressure cells and schedules, and the classical amenable pressure.

A "cell" is one evaluated point of the (d, F, delta, eps) lattice: enumerate
the maps [d] -> X that are delta-approximately equivariant over F (through
their labelings), take a maximal eps-separated subset in the sup pseudometric,
and log-sum-exp the observable sums.  The limit tower over the lattice is not
computable; `run_schedule` evaluates a finite lattice and reduces it with a
documented rule (tail-max over d, min over delta and F, max over eps), and
returns every cell so convergence can be judged from the data.

Two independent evaluation routes exist on purpose:

*  model mode: fast counting path for the 0/1 coordinate pseudometric, with
   exact-rational strict thresholds;
*  generic mode: a verbatim brute force that materializes pullback windows
   and tests the defining inequality per map.

plus, for the integer line with the cyclic model, a transfer-matrix oracle
(`transfer_cell`) that computes the same partition sum as a trace.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import canonical_subset
from .shiftspace import (
    CoordinateMetric,
    Labeling,
    mismatch_row_counts,
    observable_row_sums,
    observable_values,
    pointwise_distances,
    rho,
    violation_fraction,
    violation_row_counts,
)
from . import transfer

__all__ = [
    "MapSpaceQuery",
    "PressureEstimate",
    "Schedule",
    "ScheduleCell",
    "EmpiricalConstraint",
    "EnumerationBudgetError",
    "map_membership",
    "enumerate_map_space",
    "count_map_space",
    "greedy_separated",
    "log_partition_sum",
    "evaluate_cell",
    "transfer_cell",
    "run_schedule",
    "summarize_schedule",
    "good_index_set",
    "equivariance_distances",
    "classical_separated_sum",
    "classical_cover_sum",
    "amenable_pressure",
]

DEFAULT_BUDGET = 1 << 25
NEG_INF = float("-inf")


class EnumerationBudgetError(RuntimeError):
    """Enumeration would scan more labelings than the configured budget."""

    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs {needed} rows, budget is {budget}")
        self.needed = needed
        self.budget = budget


@dataclass(frozen=True)
class MapSpaceQuery:
    """One model-space question: which labelings are delta-equivariant over F."""
    F: tuple
    delta: float
    eps: float
    sigma: object
    metric: object
    mode: str = "model"
    sft_tolerance: float = 0.0

    def __post_init__(self):
        if self.delta <= 0 or self.eps <= 0:
            raise ValueError("delta and eps must be positive")
        if not 0 <= float(self.sft_tolerance) <= 1:
            raise ValueError("sft_tolerance must lie in [0, 1]")
        if self.mode not in ("model", "generic"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "model" and not isinstance(self.metric, CoordinateMetric):
            raise ValueError("model mode requires the coordinate pseudometric")
        object.__setattr__(self, "F", canonical_subset(self.sigma.group, self.F))
        if not self.F:
            raise ValueError("F must be nonempty")


@dataclass(frozen=True)
class PressureEstimate:
    """One evaluated cell of the pressure lattice."""
    d: int
    f_radius: int
    delta: float
    eps: float
    mode: str
    map_size: int
    separated_size: int
    log_partition_sum: float
    normalized: float
    wall_ms: float

    @property
    def is_empty(self):
        return self.map_size == 0


@dataclass(frozen=True)
class EmpiricalConstraint:
    """|(1/d) sum_i g(phi(i)) - target| < delta, strict.

    target and delta may be given as exact Fractions (or decimal strings);
    when the observable's table is integer-valued the comparison is then
    carried out in exact arithmetic, so type-class boundary cases are
    excluded exactly rather than at the mercy of float rounding.
    """
    observable: object
    target: object
    delta: object

    def exact_parts(self):
        try:
            target = Fraction(self.target)
            delta = Fraction(self.delta)
        except (TypeError, ValueError):
            return None
        table = self.observable.table
        if not np.allclose(table, np.round(table), rtol=0, atol=0):
            return None
        return target, delta, np.round(table).astype(np.int64)


def _strict_upper(bound: Fraction):
    """Largest integer strictly below the rational bound."""
    floor = bound.numerator // bound.denominator
    return floor - 1 if bound == floor else floor


def _strict_lower(bound: Fraction):
    """Smallest integer strictly above the rational bound."""
    floor = bound.numerator // bound.denominator
    return floor + 1


def _floor_frac(bound: Fraction):
    return bound.numerator // bound.denominator


def equivariance_distances(labeling, s, metric):
    """rho(phi(sigma_s i), s phi(i)) over i: the per-index equivariance
    defect of a labeling at group element s."""
    sigma = labeling.sigma
    group = sigma.group
    beta = labeling.beta
    arr_s = sigma.evaluate(s)
    dist = np.zeros(labeling.d)
    for weight, s_n in zip(_metric_weights(metric),
                           _metric_elements(metric, group)):
        a = sigma.evaluate(group.multiply(s_n, s))
        b = sigma.evaluate(s_n)[arr_s]
        dist += weight * (beta[a] != beta[b])
    return dist


def _metric_elements(metric, group):
    if isinstance(metric, CoordinateMetric):
        return [group.identity]
    return metric.elements


def _metric_weights(metric):
    if isinstance(metric, CoordinateMetric):
        return [1.0]
    return [2.0 ** -(n + 1) for n in range(metric.depth)]


def map_membership(labeling, query, subshift):
    """Is the labeling's pullback map a member of the model space?

    Model mode counts coordinate mismatches per s with exact strict
    thresholds; generic mode materializes the pullback coordinate windows and
    tests max_s rho_2(s-shift of phi, phi after sigma_s) < delta verbatim.
    Both modes also require the forbidden-pattern violation fraction to stay
    within the configured tolerance.
    """
    if violation_fraction(labeling, subshift) > float(query.sft_tolerance):
        return False
    d = labeling.d
    if query.mode == "model":
        bound = Fraction(query.delta) ** 2 * d
        allow = _strict_upper(bound)
        rows = labeling.beta[None, :]
        for s in query.F:
            if int(mismatch_row_counts(labeling.sigma, s, rows)[0]) > allow:
                return False
        return True
    # generic: build the two coordinate windows per (s, i) and apply the
    # pointwise pseudometric as defined.
    group = labeling.sigma.group
    coords = query.metric.read_coordinates(group)
    for s in query.F:
        arr_s = labeling.sigma.evaluate(s)
        sq = 0.0
        for i in range(d):
            left = {}
            right = {}
            for c in coords:
                # coordinate c of the s-shift of phi(i) is coordinate s^-1 c
                # of phi(i)
                lc = group.multiply(group.inverse(s), c)
                left[c] = int(labeling.beta[
                    labeling.sigma.evaluate_inverse(lc)[i]])
                right[c] = int(labeling.beta[
                    labeling.sigma.evaluate_inverse(c)[arr_s[i]]])
            dval = rho(left, right, query.metric, group)
            sq += dval * dval
        if not sq / d < query.delta * query.delta:
            return False
    return True


def good_index_set(labeling, F, delta, metric=None):
    """Indices where every s in F has equivariance defect below sqrt(delta).

    Members of the model space at the same (F, delta) keep at least a
    (1 - |F| delta) fraction of indices in this set.
    """
    metric = metric if metric is not None else CoordinateMetric()
    threshold = math.sqrt(delta)
    good = np.ones(labeling.d, dtype=bool)
    for s in F:
        good &= equivariance_distances(labeling, s, metric) < threshold
    return np.flatnonzero(good)


# ---------------------------------------------------------------------------
# model-mode scanner: depth-first over symbol prefixes in lexicographic
# order, committed-count pruning at prefix nodes, vectorized leaf blocks.
# ---------------------------------------------------------------------------

_SUFFIX_CACHE = {}


def _suffix_rows(k, length):
    key = (k, length)
    rows = _SUFFIX_CACHE.get(key)
    if rows is None:
        n = k ** length
        codes = np.arange(n)
        rows = np.empty((n, length), dtype=np.int8)
        for j in range(length - 1, -1, -1):
            rows[:, j] = codes % k
            codes //= k
        _SUFFIX_CACHE[key] = rows
    return rows


class _ModelScanner:
    """Shared engine for model-mode enumeration, counting, and reductions."""

    def __init__(self, query, subshift, f=None, constraints=(),
                 budget=DEFAULT_BUDGET):
        sigma = query.sigma
        d = sigma.d
        k = subshift.alphabet.size
        self.query = query
        self.subshift = subshift
        self.sigma = sigma
        self.d = d
        self.k = k
        self.budget = budget
        self.scanned = 0

        # mismatch pairs per s, with the depth at which each pair commits
        self.mismatch = []
        bound = Fraction(query.delta) ** 2 * d
        self.mismatch_allow = _strict_upper(bound)
        ident = sigma.evaluate(sigma.group.identity)
        for s in query.F:
            u = sigma.evaluate(s)
            v = ident[u]
            diff = np.flatnonzero(u != v)
            pairs = np.stack([u[diff], v[diff]], axis=1)
            depth = pairs.max(axis=1) + 1
            self.mismatch.append((pairs, depth))

        # forbidden-pattern factors: (anchor index, column reads, symbols)
        self.sft_allow = _floor_frac(Fraction(query.sft_tolerance) * d)
        self.patterns = []
        for shape, symbols in subshift.forbidden:
            cols = np.stack([sigma.evaluate_inverse(selem) for selem in shape])
            depth = cols.max(axis=0) + 1
            self.patterns.append((cols, np.array(symbols, dtype=np.int64),
                                  depth))

        self.f = f
        self.constraints = []
        for con in constraints:
            exact = con.exact_parts()
            obs = con.observable
            cols = [sigma.evaluate_inverse(w) for w in obs.window]
            if exact is not None:
                target, delta, int_table = exact
                lo = (target - delta) * d
                hi = (target + delta) * d
                self.constraints.append(
                    ("exact", obs, cols, int_table,
                     _strict_lower(lo), _strict_upper(hi)))
            else:
                self.constraints.append(
                    ("float", obs, cols, float(con.target), float(con.delta)))

        # leaf block depth: suffix small enough that a block is ~2^16 rows
        suffix = max(1, int(16 / math.log2(k))) if k > 1 else d
        self.suffix_len = min(d, suffix)
        self.p0 = d - self.suffix_len

    # -- committed factors at a given prefix depth --------------------------

    def _committed_mismatch(self, prefix_arr, p):
        counts = []
        for pairs, depth in self.mismatch:
            sel = depth <= p
            if sel.any():
                sub = pairs[sel]
                counts.append(int((prefix_arr[sub[:, 0]]
                                   != prefix_arr[sub[:, 1]]).sum()))
            else:
                counts.append(0)
        return counts

    def _committed_violations(self, prefix_arr, p):
        total = None
        for cols, symbols, depth in self.patterns:
            sel = np.flatnonzero(depth <= p)
            if sel.size == 0:
                continue
            match = np.ones(sel.size, dtype=bool)
            for row, sym in zip(cols, symbols):
                match &= prefix_arr[row[sel]] == sym
            hit = np.zeros(self.d, dtype=bool)
            hit[sel[match]] = True
            total = hit if total is None else (total | hit)
        return 0 if total is None else int(total.sum())

    # -- leaf evaluation -----------------------------------------------------

    def _leaf(self, prefix):
        suffix = _suffix_rows(self.k, self.suffix_len)
        n = suffix.shape[0]
        self.scanned += n
        if self.scanned > self.budget:
            raise EnumerationBudgetError(self.scanned, self.budget)
        rows = np.empty((n, self.d), dtype=np.int8)
        if prefix:
            rows[:, :self.p0] = np.asarray(prefix, dtype=np.int8)
        rows[:, self.p0:] = suffix

        keep = np.ones(n, dtype=bool)
        for pairs, _depth in self.mismatch:
            if pairs.shape[0] == 0:
                continue
            counts = (rows[:, pairs[:, 0]] != rows[:, pairs[:, 1]]).sum(axis=1)
            keep &= counts <= self.mismatch_allow
        if self.patterns:
            keep &= violation_row_counts(self.subshift, self.sigma,
                                         rows) <= self.sft_allow
        for con in self.constraints:
            if con[0] == "exact":
                _, obs, cols, int_table, lo, hi = con
                idx = np.zeros(rows.shape, dtype=np.int64)
                for col in cols:
                    idx = idx * obs.alphabet.size + rows[:, col]
                sums = int_table[idx].sum(axis=1)
                keep &= (sums >= lo) & (sums <= hi)
            else:
                _, obs, cols, target, delta = con
                sums = observable_row_sums(obs, self.sigma, rows)
                keep &= np.abs(sums / self.d - target) < delta
        rows = rows[keep]
        fsums = None
        if self.f is not None and rows.shape[0]:
            fsums = observable_row_sums(self.f, self.sigma, rows)
        elif self.f is not None:
            fsums = np.empty(0)
        return rows, fsums

    # -- depth-first traversal ----------------------------------------------

    def blocks(self):
        """Yield (rows, fsums) of accepted labelings, lexicographic order."""
        prefix = np.zeros(self.p0, dtype=np.int64)

        def descend(p):
            if p == self.p0:
                yield self._leaf(prefix[:self.p0].tolist())
                return
            for c in range(self.k):
                prefix[p] = c
                counts = self._committed_mismatch(prefix, p + 1)
                if any(cnt > self.mismatch_allow for cnt in counts):
                    continue
                if self.patterns and \
                        self._committed_violations(prefix, p + 1) > self.sft_allow:
                    continue
                yield from descend(p + 1)

        yield from descend(0)


class _StreamLogSumExp:
    """Streaming log-sum-exp with a fixed accumulation order."""

    def __init__(self):
        self.maximum = NEG_INF
        self.total = 0.0

    def add(self, values):
        if values.size == 0:
            return
        m = float(values.max())
        if m > self.maximum:
            if self.total:
                self.total *= math.exp(self.maximum - m)
            self.maximum = m
        self.total += float(np.exp(values - self.maximum).sum())

    def value(self):
        if self.maximum == NEG_INF:
            return NEG_INF
        return self.maximum + math.log(self.total)


def enumerate_map_space(query, subshift, constraints=(), budget=DEFAULT_BUDGET):
    """Stream the members of the model space in lexicographic labeling order.

    Model mode runs the pruned depth-first scan; generic mode is a verbatim
    brute force over all labelings.  Raises EnumerationBudgetError instead of
    silently truncating.
    """
    k = subshift.alphabet.size
    d = query.sigma.d
    if query.mode == "generic":
        if k ** d > budget:
            raise EnumerationBudgetError(k ** d, budget)
        for beta in itertools.product(range(k), repeat=d):
            labeling = Labeling(query.sigma, np.array(beta, dtype=np.int64))
            if not map_membership(labeling, query, subshift):
                continue
            if any(not _constraint_holds(con, labeling) for con in constraints):
                continue
            yield labeling
        return
    scanner = _ModelScanner(query, subshift, constraints=constraints,
                            budget=budget)
    for rows, _ in scanner.blocks():
        for row in rows:
            yield Labeling(query.sigma, row.astype(np.int64))


def _constraint_holds(con, labeling):
    empirical = float(np.mean(observable_values(con.observable, labeling)))
    exact = con.exact_parts()
    if exact is not None:
        target, delta, int_table = exact
        total = Fraction(int(round(empirical * labeling.d)), labeling.d)
        return abs(total - target) < delta
    return abs(empirical - float(con.target)) < float(con.delta)


def count_map_space(query, subshift, constraints=(), budget=DEFAULT_BUDGET):
    """Number of model-space members, without materializing them (model mode
    runs the pruned scan and only counts accepted rows)."""
    if query.mode == "generic":
        return sum(1 for _ in enumerate_map_space(query, subshift,
                                                  constraints=constraints,
                                                  budget=budget))
    scanner = _ModelScanner(query, subshift, constraints=constraints,
                            budget=budget)
    return sum(rows.shape[0] for rows, _ in scanner.blocks())


def greedy_separated(points, eps, metric):
    """Maximal separated subset: scan in order, keep a point iff its sup
    distance to every kept point is at least eps."""
    kept = []
    for phi in points:
        ok = True
        for psi in kept:
            if float(np.max(pointwise_distances(phi, psi, metric))) < eps:
                ok = False
                break
        if ok:
            kept.append(phi)
    return kept


def log_partition_sum(members, f):
    """log sum over members of exp(sum_i f at i), max-shifted."""
    if not members:
        raise ValueError("empty separated set; caller maps this to -inf")
    sums = np.array([float(observable_values(f, phi).sum())
                     for phi in members])
    m = float(sums.max())
    return m + math.log(float(np.exp(sums - m).sum()))


def _exactness_holds(query):
    """With the 0/1 coordinate metric, sigma_e = id and eps in (0, 1], all
    distinct members are pairwise 1-separated, so the full model space is
    itself the maximizing separated set."""
    if not isinstance(query.metric, CoordinateMetric):
        return False
    if not 0 < query.eps <= 1:
        return False
    sigma = query.sigma
    ident = sigma.evaluate(sigma.group.identity)
    return bool(np.array_equal(ident, np.arange(sigma.d)))


def _f_radius(group, F):
    return max(group.word_length(s) for s in F)


def evaluate_cell(query, subshift, f, constraints=(), budget=DEFAULT_BUDGET):
    """Enumerate, separate, and log-sum-exp one pressure cell."""
    start = time.perf_counter()
    d = query.sigma.d
    lse = _StreamLogSumExp()
    count = 0
    if query.mode == "model" and _exactness_holds(query):
        scanner = _ModelScanner(query, subshift, f=f, constraints=constraints,
                                budget=budget)
        for rows, fsums in scanner.blocks():
            count += rows.shape[0]
            lse.add(fsums)
        sep = count
    else:
        members = list(enumerate_map_space(query, subshift,
                                           constraints=constraints,
                                           budget=budget))
        count = len(members)
        kept = greedy_separated(members, query.eps, query.metric)
        sep = len(kept)
        for phi in kept:
            lse.add(np.array([float(observable_values(f, phi).sum())]))
    log_sum = lse.value()
    normalized = NEG_INF if count == 0 else log_sum / d
    wall = (time.perf_counter() - start) * 1000.0
    return PressureEstimate(
        d=d, f_radius=_f_radius(query.sigma.group, query.F),
        delta=query.delta, eps=query.eps, mode=query.mode,
        map_size=count, separated_size=sep,
        log_partition_sum=log_sum, normalized=normalized, wall_ms=wall)


def transfer_cell(subshift, f, d, f_radius, delta, eps):
    """Oracle cell for the integer line with the exact cyclic model: the
    partition sum over the full model space equals the trace of the d-th
    power of the weighted transfer matrix.

    Only valid where the enumeration-free identity holds: coordinate metric,
    zero forbidden-pattern tolerance, eps in (0, 1].
    """
    if not 0 < eps <= 1:
        raise ValueError("transfer oracle requires eps in (0, 1]")
    start = time.perf_counter()
    system = transfer.build_transfer_system(subshift, f)
    if d < system.L:
        raise ValueError(f"d must be at least the state length {system.L}")
    log_sum = transfer.log_trace_power(system.weighted, d)
    count = transfer.integer_trace_power(system.adjacency, d)
    normalized = NEG_INF if count == 0 else log_sum / d
    wall = (time.perf_counter() - start) * 1000.0
    return PressureEstimate(
        d=d, f_radius=f_radius, delta=delta, eps=eps, mode="transfer",
        map_size=int(count), separated_size=int(count),
        log_partition_sum=log_sum, normalized=normalized, wall_ms=wall)


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScheduleCell:
    d: int
    domain_radius: int
    f_radius: int
    delta: float
    eps: float


@dataclass(frozen=True)
class Schedule:
    """A finite realization of the pressure tower.

    The reduction rule: within each (F-radius, delta, eps) slice take the max
    of the normalized values over the top `tail_fraction` of the d-list (a
    limsup proxy), then minimize over delta, minimize over F-radius, and
    maximize over eps.
    """
    cells: tuple
    tail_fraction: float = 0.5

    def __post_init__(self):
        slices = {}
        for cell in self.cells:
            key = (cell.f_radius, cell.delta, cell.eps)
            slices.setdefault(key, []).append(cell.d)
        for key, ds in slices.items():
            if sorted(ds) != list(ds) or len(set(ds)) != len(ds):
                raise ValueError(f"d must be strictly increasing in slice {key}")

    @property
    def rule(self):
        return (f"tail-max over top {self.tail_fraction:g} of d, "
                "min over delta, min over F, max over eps")


def summarize_schedule(schedule, estimates):
    """Apply the documented tower reduction to evaluated cells."""
    slices = {}
    for est in estimates:
        key = (est.f_radius, est.delta, est.eps)
        slices.setdefault(key, []).append(est)
    slice_values = {}
    for key, ests in slices.items():
        ests.sort(key=lambda e: e.d)
        tail = max(1, math.ceil(len(ests) * schedule.tail_fraction))
        slice_values[key] = max(e.normalized for e in ests[-tail:])
    per_eps = {}
    for (f_radius, delta, eps), value in slice_values.items():
        per_eps.setdefault(eps, {}).setdefault(f_radius, {})[delta] = value
    eps_values = {}
    for eps, by_radius in per_eps.items():
        radius_values = [min(by_delta.values()) for by_delta in by_radius.values()]
        eps_values[eps] = min(radius_values)
    summary = max(eps_values.values())
    return {"summary": summary, "per_eps": eps_values,
            "per_slice": slice_values, "rule": schedule.rule}


def run_schedule(schedule, subshift, f, sigma_factory, metric,
                 mode="model", sft_rule=None, budget=DEFAULT_BUDGET,
                 engine="enumerate"):
    """Evaluate every schedule cell and reduce.  Per-cell failures are
    recorded (as exceptions in the cell slot) without aborting the bundle."""
    if sft_rule is None:
        sft_rule = lambda delta: delta * delta
    group = subshift.group
    estimates = []
    failures = []
    for cell in schedule.cells:
        try:
            if engine == "transfer":
                est = transfer_cell(subshift, f, cell.d, cell.f_radius,
                                    cell.delta, cell.eps)
            else:
                sigma = sigma_factory(cell.d, cell.domain_radius)
                query = MapSpaceQuery(
                    F=group.ball(cell.f_radius), delta=cell.delta,
                    eps=cell.eps, sigma=sigma, metric=metric, mode=mode,
                    sft_tolerance=sft_rule(cell.delta))
                est = evaluate_cell(query, subshift, f, budget=budget)
            estimates.append(est)
        except Exception as exc:          # noqa: BLE001 - recorded per cell
            failures.append((cell, repr(exc)))
    summary = summarize_schedule(schedule, estimates) if estimates else \
        {"summary": NEG_INF, "per_eps": {}, "per_slice": {},
         "rule": schedule.rule}
    summary["failures"] = failures
    return estimates, summary


# ---------------------------------------------------------------------------
# classical amenable pressure
# ---------------------------------------------------------------------------

def _int_elements(group, elems):
    if group.kind == "integer-line":
        return [int(g) for g in elems]
    raise ValueError("expected the integer line")


def _pattern_sum_line(subshift, f, F, budget):
    """log of the separated/cover pattern sum over Z.

    Separation coordinates are the inverses of F; the weight of a pattern is
    sum over s in F of the observable read at the s-translate.  When the
    observable reads beyond the separation window, patterns are grouped by
    their restriction to the separation window and the weight is maximized
    over the boundary (one representative per separated point).
    """
    group = subshift.group
    k = subshift.alphabet.size
    U = sorted(int(group.inverse(s)) for s in F)
    reads = sorted({int(group.multiply(group.inverse(s), w))
                    for s in F for w in f.window})
    lo = min(U + reads)
    hi = max(U + reads)
    hull = list(range(lo, hi + 1))
    pos = {c: j for j, c in enumerate(hull)}

    sep_cols = [pos[c] for c in U]
    weight_terms = []          # per s in F: column positions of its window
    for s in F:
        cols = [pos[int(group.multiply(group.inverse(s), w))] for w in f.window]
        weight_terms.append(cols)

    boundary_free = set(reads) <= set(U)
    if boundary_free and U == hull:
        try:
            return _pattern_sum_dp(subshift, f, F, hull, budget)
        except _WindowTooShort:
            pass

    if k ** len(hull) > budget:
        raise EnumerationBudgetError(k ** len(hull), budget)
    sft_cols = []
    for shape, symbols in subshift.forbidden:
        offs = [int(s) for s in shape]
        for anchor in hull:
            cols = [anchor - o for o in offs]
            if all(c in pos for c in cols):
                sft_cols.append(([pos[c] for c in cols], symbols))
    best = {}
    for patt in itertools.product(range(k), repeat=len(hull)):
        if any(all(patt[c] == sym for c, sym in zip(cols, syms))
               for cols, syms in sft_cols):
            continue
        weight = 0.0
        for cols in weight_terms:
            weight += f.value(patt[c] for c in cols)
        key = tuple(patt[c] for c in sep_cols)
        if key not in best or weight > best[key]:
            best[key] = weight
    if not best:
        return NEG_INF
    values = np.array(list(best.values()))
    m = float(values.max())
    return m + math.log(float(np.exp(values - m).sum()))


class _WindowTooShort(Exception):
    """Separation window shorter than the transfer state length."""


def _extendable_states(adjacency):
    """States lying on or between cycles of the transition graph: exactly the
    windows that occur in bi-infinite admissible sequences."""
    n = adjacency.shape[0]
    reach = adjacency.astype(bool).copy()
    # transitive closure (small n)
    for t in range(n):
        reach |= reach[:, t][:, None] & reach[t, :][None, :]
    on_cycle = np.array([reach[i, i] for i in range(n)])
    from_cycle = np.zeros(n, dtype=bool)
    to_cycle = np.zeros(n, dtype=bool)
    for i in range(n):
        from_cycle[i] = on_cycle[i] or bool((on_cycle & reach[:, i]).any())
        to_cycle[i] = on_cycle[i] or bool((on_cycle & reach[i, :]).any())
    return from_cycle & to_cycle


def _pattern_sum_dp(subshift, f, F, hull, budget):
    """Transfer recursion for the pattern sum when every read stays inside
    the separation window: forward DP over the hull positions, restricted to
    states that extend to bi-infinite admissible sequences."""
    system = transfer.build_transfer_system(subshift, f)
    L = system.L
    k = system.k
    n = len(hull)
    ok = _extendable_states(system.adjacency)
    if n < L:
        raise _WindowTooShort

    # initial weights: value factors whose window fits inside the first L
    # positions, admissibility of the prefix via the adjacency on sub-words
    w_offs = [int(w) - int(min(f.window)) for w in f.window]
    span_f = max(w_offs) + 1
    init = np.zeros(k ** L)
    suffix = _suffix_rows(k, L)
    for code in range(k ** L):
        if not ok[code]:
            continue
        word = suffix[code]
        good = True
        for shape, symbols in subshift.forbidden:
            offs = [int(s) - int(min(shape)) for s in shape]
            span = max(offs) + 1
            for anchor in range(span - 1, L):
                if all(word[anchor - o] == sym
                       for o, sym in zip(offs, symbols)):
                    good = False
                    break
            if not good:
                break
        if not good:
            continue
        weight = 0.0
        for anchor in range(span_f - 1, L):
            weight += f.value(word[anchor - o] for o in w_offs)
        init[code] = math.exp(weight)
    vec = init
    T = system.weighted * np.where(ok, 1.0, 0.0)[None, :]
    log_scale = 0.0
    for _ in range(n - L):
        vec = vec @ T
        peak = vec.max()
        if peak > 0 and (peak > 1e250 or peak < 1e-250):
            vec /= peak
            log_scale += math.log(peak)
    total = float(vec.sum())
    if total <= 0:
        return NEG_INF
    return math.log(total) + log_scale


def classical_separated_sum(subshift, f, F, eps, budget=DEFAULT_BUDGET):
    """log K: the maximal separated-sum over points distinguished on the
    coordinates F^-1, with the observable summed over the F-translates.
    Exact for the 0/1 coordinate metric and eps in (0, 1]."""
    if not subshift.group.amenable:
        raise ValueError("classical pressure requires an amenable group")
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1] for the coordinate metric")
    if subshift.group.kind == "integer-line":
        return _pattern_sum_line(subshift, f, F, budget)
    if subshift.group.kind == "integer-lattice":
        return _pattern_sum_box(subshift, f, F, budget)
    raise ValueError("classical sums support Z and Z^r subshifts only")


def classical_cover_sum(subshift, f, F, delta, budget=DEFAULT_BUDGET):
    """log P_1: infimum over covers of order (F, delta) of the sup-weighted
    cell sum.  For the 0/1 coordinate metric and delta in (0, 1] the cylinder
    partition on the F^-1 coordinates attains the infimum, giving the same
    pattern sum as the separated realization."""
    if not subshift.group.amenable:
        raise ValueError("classical pressure requires an amenable group")
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1] for the coordinate metric")
    if subshift.group.kind == "integer-line":
        return _pattern_sum_line(subshift, f, F, budget)
    if subshift.group.kind == "integer-lattice":
        return _pattern_sum_box(subshift, f, F, budget)
    raise ValueError("classical sums support Z and Z^r subshifts only")


def _pattern_sum_box(subshift, f, F, budget):
    """Enumeration fallback for integer lattices at small sides."""
    group = subshift.group
    k = subshift.alphabet.size
    U = [group.inverse(s) for s in F]
    reads = {group.multiply(group.inverse(s), w) for s in F for w in f.window}
    cells = set(U) | reads
    los = [min(c[i] for c in cells) for i in range(group.rank)]
    his = [max(c[i] for c in cells) for i in range(group.rank)]
    hull = list(itertools.product(*[range(lo, hi + 1)
                                    for lo, hi in zip(los, his)]))
    if k ** len(hull) > budget:
        raise EnumerationBudgetError(k ** len(hull), budget)
    pos = {c: j for j, c in enumerate(hull)}
    sep_cols = [pos[c] for c in U]
    weight_terms = [[pos[group.multiply(group.inverse(s), w)]
                     for w in f.window] for s in F]
    sft_cols = []
    for shape, symbols in subshift.forbidden:
        for anchor in hull:
            cols = [tuple(a - o for a, o in zip(anchor, sh)) for sh in shape]
            if all(c in pos for c in cols):
                sft_cols.append(([pos[c] for c in cols], symbols))
    best = {}
    for patt in itertools.product(range(k), repeat=len(hull)):
        if any(all(patt[c] == sym for c, sym in zip(cols, syms))
               for cols, syms in sft_cols):
            continue
        weight = sum(f.value(patt[c] for c in cols) for cols in weight_terms)
        key = tuple(patt[c] for c in sep_cols)
        if key not in best or weight > best[key]:
            best[key] = weight
    if not best:
        return NEG_INF
    values = np.array(list(best.values()))
    m = float(values.max())
    return m + math.log(float(np.exp(values - m).sum()))


@dataclass(frozen=True)
class AmenablePressure:
    exact: float            # log Perron root; nan for lattices of rank >= 2
    curve: tuple            # (n, normalized log K_n) pairs


def amenable_pressure(subshift, f, n_max, budget=DEFAULT_BUDGET):
    """Classical pressure along the canonical Folner sequence.

    Integer line: the exact value (log of the Perron root of the weighted
    transfer matrix) plus the finite-n curve; lattices: finite-n estimates
    only.
    """
    group = subshift.group
    if not group.amenable:
        raise ValueError("classical pressure requires an amenable group")
    curve = []
    for n in range(1, n_max + 1):
        F = group.folner(n)
        try:
            value = classical_separated_sum(subshift, f, F, 1.0, budget=budget)
        except EnumerationBudgetError:
            break
        curve.append((n, value / len(F)))
    if group.kind == "integer-line":
        system = transfer.build_transfer_system(subshift, f)
        exact = transfer.log_perron(system.weighted)
    else:
        exact = float("nan")
    return AmenablePressure(exact=exact, curve=tuple(curve))
