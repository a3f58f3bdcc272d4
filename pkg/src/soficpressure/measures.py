"""Measures on subshifts: product and Markov families, empirical measures of
labelings, model spaces with empirical constraints (measure entropy), the
variational objective and search, and the pressure-domination membership test
for signed cylinder measures.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import canonical_subset
from .pressure import (
    DEFAULT_BUDGET,
    EmpiricalConstraint,
    MapSpaceQuery,
    NEG_INF,
    _exactness_holds,
    count_map_space,
    enumerate_map_space,
    greedy_separated,
)
from .shiftspace import Alphabet, Observable, observable_values

__all__ = [
    "ProductMeasure",
    "MarkovMeasure",
    "EmpiricalMeasure",
    "SignedCylinderMeasure",
    "EntropyEstimate",
    "shannon_entropy",
    "gibbs_measure",
    "cylinder_probability",
    "map_mu_membership",
    "entropy_cell",
    "variational_objective",
    "variational_search",
    "variational_gap",
    "pressure_domination_check",
]


def shannon_entropy(p):
    """Natural-log entropy with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


class ProductMeasure:
    """An i.i.d. measure: one probability vector over the alphabet, cylinder
    values multiply across sites."""

    def __init__(self, p):
        p = np.asarray(p, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("p must be a probability vector")
        if p.min() < 0 or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("entries must be >= 0 and sum to 1 within 1e-12")
        self.p = p

    @property
    def k(self):
        return self.p.size

    def entropy(self):
        return shannon_entropy(self.p)

    def cylinder_probability(self, F, pattern):
        pattern = list(pattern)
        if len(pattern) != len(F):
            raise ValueError("pattern must assign one symbol per site")
        out = 1.0
        for s in pattern:
            out *= float(self.p[int(s)])
        return out

    def expectation(self, f: Observable):
        """Integral of a local observable: pattern-probability weighted table."""
        m = len(f.window)
        total = 0.0
        for pattern in itertools.product(range(self.k), repeat=m):
            total += self.cylinder_probability(f.window, pattern) \
                * f.value(pattern)
        return total

    def expectation_exact(self, f: Observable):
        """Exact rational integral, or None when the table is not integer."""
        table = f.table
        if not np.array_equal(table, np.round(table)):
            return None
        pf = [Fraction(float(x)) for x in self.p]
        m = len(f.window)
        total = Fraction(0)
        for pattern in itertools.product(range(self.k), repeat=m):
            prob = Fraction(1)
            for s in pattern:
                prob *= pf[s]
            total += prob * int(round(f.value(pattern)))
        return total

    def supported_on(self, subshift):
        """True iff every forbidden pattern gets probability zero, i.e. the
        measure actually lives on the subshift."""
        support = {i for i in range(self.k) if self.p[i] > 0}
        for _shape, symbols in subshift.forbidden:
            if all(s in support for s in symbols):
                return False
        return True

    def __repr__(self):
        return f"ProductMeasure({np.array2string(self.p, precision=6)})"


def gibbs_measure(coefficients):
    """Normalized exponential weights exp(a_i) / sum_j exp(a_j)."""
    a = np.asarray(coefficients, dtype=float)
    shifted = np.exp(a - a.max())
    return ProductMeasure(shifted / shifted.sum())


def cylinder_probability(mu, F, pattern):
    return mu.cylinder_probability(F, pattern)


class MarkovMeasure:
    """A stationary Markov chain on the alphabet, for Z-subshifts whose
    forbidden patterns span at most two adjacent sites."""

    def __init__(self, transition, stationary=None):
        P = np.asarray(transition, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError("transition matrix must be square")
        if P.min() < -1e-15 or np.abs(P.sum(axis=1) - 1.0).max() > 1e-10:
            raise ValueError("rows must be probability vectors")
        self.P = np.clip(P, 0.0, None)
        if stationary is None:
            stationary = self._solve_stationary(self.P)
        pi = np.asarray(stationary, dtype=float)
        if np.abs(pi @ self.P - pi).max() > 1e-10:
            raise ValueError("stationary vector fails pi P = pi within 1e-10")
        if pi.min() < -1e-12 or abs(pi.sum() - 1.0) > 1e-10:
            raise ValueError("stationary vector must be a distribution")
        self.pi = np.clip(pi, 0.0, None)
        self.pi /= self.pi.sum()

    @staticmethod
    def _solve_stationary(P):
        n = P.shape[0]
        A = np.vstack([P.T - np.eye(n), np.ones((1, n))])
        b = np.zeros(n + 1)
        b[-1] = 1.0
        pi, *_ = np.linalg.lstsq(A, b, rcond=None)
        return pi

    @property
    def k(self):
        return self.P.shape[0]

    def entropy_rate(self):
        rate = 0.0
        for u in range(self.k):
            row = self.P[u]
            nz = row[row > 0]
            rate += float(self.pi[u]) * float(-(nz * np.log(nz)).sum())
        return rate

    def word_probability(self, word):
        word = [int(s) for s in word]
        prob = float(self.pi[word[0]])
        for u, v in zip(word, word[1:]):
            prob *= float(self.P[u, v])
        return prob

    MAX_HULL = 16

    def expectation(self, f: Observable):
        """Integral via stationary word probabilities on the window's hull."""
        window = [int(w) for w in f.window]
        lo, hi = min(window), max(window)
        hull = list(range(lo, hi + 1))
        if len(hull) > self.MAX_HULL:
            raise ValueError(
                f"window hull of {len(hull)} sites exceeds the Markov "
                f"representation budget ({self.MAX_HULL})")
        cols = [hull.index(w) for w in window]
        total = 0.0
        for word in itertools.product(range(self.k), repeat=len(hull)):
            prob = self.word_probability(word)
            if prob > 0:
                total += prob * f.value(word[c] for c in cols)
        return total

    def supported_on(self, subshift):
        allowed = _markov_allowed(subshift)
        if allowed is None:
            return False
        banned_sites = _banned_symbols(subshift)
        if any(self.pi[s] > 0 for s in banned_sites):
            return False
        return bool(np.all(self.P[~allowed] == 0))

    def __repr__(self):
        return f"MarkovMeasure(k={self.k})"


def _banned_symbols(subshift):
    banned = set()
    for shape, symbols in subshift.forbidden:
        if len(shape) == 1:
            banned.add(symbols[0])
    return banned


def _markov_allowed(subshift):
    """0/1 matrix of admissible adjacent transitions, or None when the
    subshift has constraints a one-step chain cannot express."""
    if subshift.group.kind != "integer-line":
        return None
    k = subshift.alphabet.size
    allowed = np.ones((k, k), dtype=bool)
    for shape, symbols in subshift.forbidden:
        offs = [int(s) for s in shape]
        span = max(offs) - min(offs) + 1
        if span == 1:
            allowed[symbols[0], :] = False
            allowed[:, symbols[0]] = False
        elif span == 2:
            # symbols[0] sits at the smaller coordinate; transitions run in
            # coordinate order, independent of the pullback index convention
            allowed[symbols[0], symbols[1]] = False
        else:
            return None
    return allowed


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Push-forward of the uniform measure on [d] under a labeling's pullback
    map, recorded through finitely many evaluated functionals."""
    labeling: object
    functionals: tuple   # (observable, empirical value) pairs

    @classmethod
    def from_observables(cls, labeling, observables):
        vals = tuple(
            (g, float(np.mean(observable_values(g, labeling))))
            for g in observables)
        return cls(labeling, vals)

    def value(self, index):
        return self.functionals[index][1]


def map_mu_membership(labeling, targets, delta):
    """True iff every stored functional's empirical average is strictly
    within delta of its target.  `targets` is a list of (observable, target)
    pairs; delta may be a Fraction or decimal string for exact boundaries."""
    d = labeling.d
    for g, target in targets:
        con = EmpiricalConstraint(g, target, delta)
        exact = con.exact_parts()
        values = observable_values(g, labeling)
        if exact is not None:
            t, de, int_table = exact
            total = Fraction(int(np.round(values).sum()), d)
            if not abs(total - t) < de:
                return False
        else:
            if not abs(float(np.mean(values)) - float(target)) < float(delta):
                return False
    return True


@dataclass(frozen=True)
class EntropyEstimate:
    d: int
    f_radius: int
    test_family: str
    delta: float
    eps: float
    count: int
    normalized: float
    wall_ms: float = 0.0


def entropy_cell(mu, subshift, F, test_observables, delta, eps, sigma,
                 metric, mode="model", sft_tolerance=0.0,
                 budget=DEFAULT_BUDGET):
    """Separated count of the measure-constrained model space.

    The test family L is realized as empirical constraints |avg - integral| <
    delta; with the coordinate metric, identity permutation at e, and eps in
    (0, 1] the maximal separated count equals the member count exactly.
    """
    start = time.perf_counter()
    constraints = []
    for g in test_observables:
        target = None
        if hasattr(mu, "expectation_exact"):
            target = mu.expectation_exact(g)
        if target is None:
            target = mu.expectation(g)
        constraints.append(EmpiricalConstraint(g, target, delta))
    query = MapSpaceQuery(F=F, delta=float(delta) if not isinstance(delta, str)
                          else float(Fraction(delta)),
                          eps=eps, sigma=sigma, metric=metric, mode=mode,
                          sft_tolerance=sft_tolerance)
    if mode == "model" and _exactness_holds(query):
        count = count_map_space(query, subshift, constraints=constraints,
                                budget=budget)
    else:
        members = list(enumerate_map_space(query, subshift,
                                           constraints=constraints,
                                           budget=budget))
        count = len(greedy_separated(members, eps, metric))
    normalized = NEG_INF if count == 0 else math.log(count) / sigma.d
    wall = (time.perf_counter() - start) * 1000.0
    group = sigma.group
    return EntropyEstimate(
        d=sigma.d, f_radius=max(group.word_length(s) for s in F),
        test_family=f"{len(constraints)} observables",
        delta=float(Fraction(delta)) if isinstance(delta, str) else float(delta),
        eps=eps, count=count, normalized=normalized, wall_ms=wall)


def variational_objective(mu, f: Observable):
    """Entropy term plus the integral of the potential.

    Product measures use the probability-vector entropy; Markov measures the
    classical entropy rate (Z only).
    """
    if isinstance(mu, ProductMeasure):
        return mu.entropy() + mu.expectation(f)
    if isinstance(mu, MarkovMeasure):
        return mu.entropy_rate() + mu.expectation(f)
    raise TypeError(f"unsupported measure type {type(mu).__name__}")


def _admissible_supports(subshift):
    """Support alphabets A such that the full shift over A stays inside the
    subshift, i.e. no forbidden pattern writes only A-symbols."""
    k = subshift.alphabet.size
    out = []
    for size in range(k, 0, -1):
        for support in itertools.combinations(range(k), size):
            sset = set(support)
            if all(not set(symbols) <= sset
                   for _shape, symbols in subshift.forbidden):
                out.append(support)
    return out


def _product_gradient(mu, f):
    """Gradient of the (multilinear) integral with respect to p."""
    k = mu.k
    m = len(f.window)
    grad = np.zeros(k)
    for pattern in itertools.product(range(k), repeat=m):
        value = f.value(pattern)
        if value == 0.0:
            continue
        for j in range(m):
            rest = 1.0
            for l, s in enumerate(pattern):
                if l != j:
                    rest *= float(mu.p[s])
            grad[pattern[j]] += value * rest
    return grad


def _ascend_product(subshift, f, support, iterations):
    """Fixed-point ascent p <- softmax(grad) on a fixed support; exact in one
    step for single-site potentials."""
    k = subshift.alphabet.size
    p = np.zeros(k)
    p[list(support)] = 1.0 / len(support)
    mu = ProductMeasure(p)
    for _ in range(iterations):
        grad = _product_gradient(mu, f)
        new = np.full(k, NEG_INF)
        new[list(support)] = grad[list(support)]
        w = np.exp(new - new.max())
        w /= w.sum()
        if np.abs(w - mu.p).max() < 1e-15:
            mu = ProductMeasure(w)
            break
        mu = ProductMeasure(w)
    return mu


def _markov_candidates(subshift):
    allowed = _markov_allowed(subshift)
    if allowed is None:
        raise ValueError("subshift constraints exceed one-step Markov chains")
    return allowed


def _markov_from_rows(rows):
    P = np.stack(rows)
    return MarkovMeasure(P)


def _ascend_markov(subshift, f, iterations):
    """Deterministic coordinate ascent over admissible transition rows with a
    shrinking mixing grid."""
    allowed = _markov_candidates(subshift)
    k = allowed.shape[0]
    live = [u for u in range(k) if allowed[u].any()]
    rows = []
    for u in range(k):
        row = allowed[u].astype(float)
        rows.append(row / row.sum() if row.sum() else
                    np.full(k, 1.0 / k))
    best = _markov_from_rows(rows)
    best_value = variational_objective(best, f)
    step = 0.5
    for _ in range(iterations):
        improved = False
        for u in live:
            targets = np.flatnonzero(allowed[u])
            if targets.size < 2:
                continue
            for t in targets:
                for direction in (+1.0, -1.0):
                    row = rows[u].copy()
                    row[t] += direction * step
                    if row.min() < 0:
                        continue
                    total = row.sum()
                    if total <= 0:
                        continue
                    row /= total
                    trial_rows = list(rows)
                    trial_rows[u] = row
                    try:
                        trial = _markov_from_rows(trial_rows)
                    except ValueError:
                        continue
                    value = variational_objective(trial, f)
                    if value > best_value + 1e-15:
                        best, best_value = trial, value
                        rows = trial_rows
                        improved = True
        if not improved:
            step *= 0.5
            if step < 1e-12:
                break
    return best, best_value


def variational_search(subshift, f, family="product", budget=200):
    """Deterministic maximization of the variational objective over a
    parametric family of measures supported on the subshift."""
    if family == "product":
        best = None
        best_value = NEG_INF
        for support in _admissible_supports(subshift):
            mu = _ascend_product(subshift, f, support, budget)
            value = variational_objective(mu, f)
            if value > best_value + 1e-15:
                best, best_value = mu, value
        if best is None:
            raise ValueError("no product measure is supported on the subshift")
        return best, best_value
    if family == "markov":
        return _ascend_markov(subshift, f, budget)
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class VariationalGap:
    pressure: float
    best_value: float
    gap: float
    no_invariant_measure: bool = False


def variational_gap(pressure_summary, best_variational):
    """pressure minus the best objective; a -inf pressure is reported as the
    no-invariant-measure case rather than a numeric gap."""
    if pressure_summary == NEG_INF:
        return VariationalGap(pressure_summary, best_variational, float("nan"),
                              no_invariant_measure=True)
    return VariationalGap(pressure_summary, best_variational,
                          pressure_summary - best_variational)


class SignedCylinderMeasure:
    """A finitely additive signed assignment on the cylinder algebra of a
    finite window: one real weight per full-window pattern, cylinder values
    obtained by summation."""

    def __init__(self, group, alphabet, window, weights):
        self.group = group
        self.alphabet = alphabet
        self.window = canonical_subset(group, window)
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if weights.size != alphabet.size ** len(self.window):
            raise ValueError("need one weight per full-window pattern")
        self.weights = weights

    @classmethod
    def from_product(cls, group, window, mu: ProductMeasure):
        window = canonical_subset(group, window)
        k = mu.k
        weights = [mu.cylinder_probability(window, pattern)
                   for pattern in itertools.product(range(k), repeat=len(window))]
        return cls(group, Alphabet(k), window, weights)

    def total_mass(self):
        return float(self.weights.sum())

    def min_atom(self):
        return float(self.weights.min())

    def cylinder_value(self, shape, pattern):
        shape = canonical_subset(self.group, shape)
        positions = [self.window.index(s) for s in shape]
        k = self.alphabet.size
        total = 0.0
        for flat, w in enumerate(self.weights):
            digits = _digits(flat, k, len(self.window))
            if all(digits[p] == int(sym) for p, sym in zip(positions, pattern)):
                total += float(w)
        return total

    def integral(self, f: Observable):
        """Integral of an observable whose window sits inside the measure's
        window."""
        positions = [self.window.index(w) for w in f.window]
        k = self.alphabet.size
        total = 0.0
        for flat, w in enumerate(self.weights):
            digits = _digits(flat, k, len(self.window))
            total += float(w) * f.value(digits[p] for p in positions)
        return total

    def invariance_defect(self, generators=None):
        """sup over tested cylinders A and generators s of |mu(sA) - mu(A)|.

        Tested cylinders: all patterns on the largest sub-window T with
        s T inside the measure window, per generator."""
        group = self.group
        gens = generators if generators is not None else group.generators()
        worst = 0.0
        k = self.alphabet.size
        for s in gens:
            T = [v for v in self.window
                 if group.multiply(s, v) in self.window]
            if not T:
                continue
            sT = [group.multiply(s, v) for v in T]
            for pattern in itertools.product(range(k), repeat=len(T)):
                base = self.cylinder_value(T, pattern)
                # sA is the cylinder on sT carrying the same symbols
                order = sorted(range(len(sT)),
                               key=lambda j: group.sort_key(sT[j]))
                shifted = self.cylinder_value([sT[j] for j in order],
                                              [pattern[j] for j in order])
                worst = max(worst, abs(shifted - base))
        return worst


def _digits(flat, k, length):
    out = []
    for _ in range(length):
        out.append(flat % k)
        flat //= k
    out.reverse()
    return out


@dataclass(frozen=True)
class DominationRow:
    f_id: str
    scale: float
    integral: float
    pressure: float
    margin: float
    passed: bool


@dataclass(frozen=True)
class DominationReport:
    rows: tuple
    total_mass: float
    min_atom: float
    invariance_defect: float
    passed: bool

    @property
    def violations(self):
        return tuple(r for r in self.rows if not r.passed)


def pressure_domination_check(mu: SignedCylinderMeasure, test_functions,
                              pressure_fn, scales=(1, 2, 5, 10, 25),
                              cocycle_shifts=None, tolerance=1e-9):
    """Check integral-vs-pressure domination over a finite function family.

    Every test function f is also scaled to +n f and -n f across the scale
    list, and for every generator shift s the cocycle differences
    n (f after the s-shift - f) are tested against the pressure; a passing
    report is evidence, not proof, of invariant-measure membership.  The
    direct diagnostics (nonnegativity, unit mass, shift-invariance defect)
    are reported alongside.
    """
    group = mu.group
    shifts = cocycle_shifts if cocycle_shifts is not None \
        else group.generators()
    rows = []

    def run(name, obs, scale):
        integral = mu.integral(obs)
        pressure = pressure_fn(obs)
        margin = pressure - integral
        rows.append(DominationRow(name, scale, integral, pressure,
                                  margin, margin >= -tolerance))

    for idx, f in enumerate(test_functions):
        name = f"f{idx}"
        run(name, f, 1.0)
        for n in scales:
            run(name, f.scaled(float(n)), float(n))
            run(name, f.scaled(-float(n)), -float(n))
        for s in shifts:
            shifted = f.shifted(s)
            if not set(shifted.window) <= set(mu.window):
                continue
            cocycle = shifted.combine(f, 1.0, -1.0)
            for n in scales:
                run(f"{name}-cocycle", cocycle.scaled(float(n)), float(n))
                run(f"{name}-cocycle", cocycle.scaled(-float(n)), -float(n))

    mass = mu.total_mass()
    min_atom = mu.min_atom()
    defect = mu.invariance_defect()
    passed = all(r.passed for r in rows) and abs(mass - 1.0) <= 1e-9 \
        and min_atom >= -1e-12
    return DominationReport(tuple(rows), mass, min_atom, defect, passed)
