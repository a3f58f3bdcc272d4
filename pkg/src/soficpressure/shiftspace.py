"""Finite-alphabet subshifts, local observables, and the pseudometrics used
on maps [d] -> X.

Points of the shift are never materialized as infinite configurations.  All
computation runs through labelings beta: [d] -> alphabet, read through the
pullback rule

    coordinate t of the point at index i  =  beta(sigma(t^-1) i),

so a labeling plus a sofic map stands for the d-tuple of pullback points.
For the integer line with the cyclic model this is exactly the d-periodic
sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import Group, canonical_subset

__all__ = [
    "Alphabet",
    "Subshift",
    "Observable",
    "Labeling",
    "full_shift",
    "golden_mean_shift",
    "CoordinateMetric",
    "WeightedWordMetric",
    "pullback_symbol",
    "eval_observable",
    "observable_values",
    "observable_row_sums",
    "rho",
    "rho2",
    "rho_inf",
    "rho_J_inf",
    "pointwise_distances",
    "violation_fraction",
    "violation_row_counts",
    "mismatch_row_counts",
]


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet size must be >= 1")

    @property
    def symbols(self):
        return range(self.size)


class Subshift:
    """A subshift of finite type: alphabet plus forbidden local patterns.

    Each forbidden pattern is a (shape, symbols) pair where shape is a finite
    subset of the group and symbols lists one symbol per shape element (in the
    shape's canonical order).  An empty pattern list is the full shift.  A
    pattern is forbidden at every translate, which is what ranging the anchor
    index over [d] realizes for pullback points.
    """

    def __init__(self, group: Group, alphabet: Alphabet, forbidden=()):
        self.group = group
        self.alphabet = alphabet
        pats = []
        for shape, symbols in forbidden:
            shape = canonical_subset(group, shape)
            symbols = tuple(int(s) for s in symbols)
            if not shape:
                raise ValueError("forbidden pattern shape must be nonempty")
            if len(symbols) != len(shape):
                raise ValueError("pattern symbols must match the shape size")
            if any(not 0 <= s < alphabet.size for s in symbols):
                raise ValueError("pattern symbol outside the alphabet")
            pats.append((shape, symbols))
        self.forbidden = tuple(pats)

    @property
    def is_full_shift(self):
        return not self.forbidden

    def __repr__(self):
        return (f"Subshift(k={self.alphabet.size}, "
                f"{len(self.forbidden)} forbidden patterns)")


def full_shift(group, k):
    return Subshift(group, Alphabet(k), ())


def golden_mean_shift(group):
    """Binary shift forbidding adjacent ones along the first generator."""
    gen = group.generators()[0]
    return Subshift(group, Alphabet(2),
                    [((group.identity, gen), (1, 1))])


class Observable:
    """A local real-valued function: finite support window plus a value for
    every pattern on the window (flat table, row-major in the window's
    canonical element order)."""

    def __init__(self, group: Group, alphabet: Alphabet, window, table):
        self.group = group
        self.alphabet = alphabet
        self.window = canonical_subset(group, window)
        if not self.window:
            raise ValueError("window must be nonempty")
        k = alphabet.size
        table = np.asarray(table, dtype=float).reshape(-1)
        if table.shape != (k ** len(self.window),):
            raise ValueError(
                f"table needs {k ** len(self.window)} entries, got {table.shape[0]}")
        self.table = table

    @classmethod
    def single_site(cls, group, coefficients):
        """f(x) = a_{x_e}: the value of the coefficient at the identity symbol."""
        a = np.asarray(coefficients, dtype=float)
        return cls(group, Alphabet(len(a)), (group.identity,), a)

    @classmethod
    def constant(cls, group, alphabet, value):
        k = alphabet.size
        return cls(group, alphabet, (group.identity,), np.full(k, float(value)))

    @property
    def sup_norm(self):
        return float(np.max(np.abs(self.table)))

    def pattern_index(self, symbols):
        idx = 0
        for s in symbols:
            idx = idx * self.alphabet.size + int(s)
        return idx

    def value(self, symbols):
        return float(self.table[self.pattern_index(symbols)])

    def shifted(self, s):
        """The composition with the shift by s: window moves to s^-1 * window."""
        g = self.group
        new_window = [g.multiply(g.inverse(s), w) for w in self.window]
        # canonical_subset may reorder; permute the table to match.
        order = sorted(range(len(new_window)),
                       key=lambda j: g.sort_key(new_window[j]))
        k = self.alphabet.size
        m = len(self.window)
        table = np.empty_like(self.table)
        for flat in range(k ** m):
            digits = []
            rest = flat
            for _ in range(m):
                digits.append(rest % k)
                rest //= k
            digits.reverse()          # digits in new-window canonical order
            orig = [0] * m
            for newpos, oldpos in enumerate(order):
                orig[oldpos] = digits[newpos]
            table[flat] = self.table[self.pattern_index(orig)]
        return Observable(self.group, self.alphabet,
                          [new_window[j] for j in order], table)

    def combine(self, other, scale_self=1.0, scale_other=1.0):
        """scale_self * self + scale_other * other on the union window."""
        g = self.group
        union = canonical_subset(g, self.window + other.window)
        k = self.alphabet.size
        m = len(union)
        pos_self = [union.index(w) for w in self.window]
        pos_other = [union.index(w) for w in other.window]
        table = np.zeros(k ** m)
        for flat in range(k ** m):
            digits = []
            rest = flat
            for _ in range(m):
                digits.append(rest % k)
                rest //= k
            digits.reverse()
            v = scale_self * self.value(digits[p] for p in pos_self)
            v += scale_other * other.value(digits[p] for p in pos_other)
            table[flat] = v
        return Observable(g, self.alphabet, union, table)

    def scaled(self, c):
        return Observable(self.group, self.alphabet, self.window, c * self.table)

    def plus_constant(self, c):
        return Observable(self.group, self.alphabet, self.window, self.table + c)

    def abs(self):
        return Observable(self.group, self.alphabet, self.window,
                          np.abs(self.table))

    def __repr__(self):
        return f"Observable(window={len(self.window)} sites, k={self.alphabet.size})"


@dataclass(frozen=True)
class Labeling:
    """A function [d] -> alphabet together with its sofic-map context."""
    sigma: object
    beta: np.ndarray

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=np.int64)
        if beta.shape != (self.sigma.d,):
            raise ValueError(
                f"beta has shape {beta.shape}, sigma has d={self.sigma.d}")
        object.__setattr__(self, "beta", beta)

    @property
    def d(self):
        return self.sigma.d


def pullback_symbol(labeling, i, t):
    """Coordinate t of the pullback point at index i: beta(sigma(t^-1) i)."""
    col = labeling.sigma.evaluate_inverse(t)
    return int(labeling.beta[col[i]])


def _window_columns(sigma, window):
    return [sigma.evaluate_inverse(w) for w in window]


def eval_observable(f, labeling, i):
    """Observable applied to the pullback pattern at index i."""
    symbols = (pullback_symbol(labeling, i, w) for w in f.window)
    return f.value(symbols)


def observable_values(f, labeling):
    """Vector of observable values at every index."""
    cols = _window_columns(labeling.sigma, f.window)
    beta = labeling.beta
    idx = np.zeros(labeling.d, dtype=np.int64)
    for col in cols:
        idx = idx * f.alphabet.size + beta[col]
    return f.table[idx]


def observable_row_sums(f, sigma, rows):
    """sum_i f(pullback at i) for every row of a (n, d) labeling matrix."""
    cols = _window_columns(sigma, f.window)
    idx = np.zeros(rows.shape, dtype=np.int64)
    for col in cols:
        idx = idx * f.alphabet.size + rows[:, col]
    return f.table[idx].sum(axis=1)


class CoordinateMetric:
    """rho(x, y) = 1 if the identity coordinates differ, else 0."""

    kind = "coordinate-e"

    def label(self):
        return self.kind

    def weighted_columns(self, sigma):
        return [(1.0, sigma.evaluate_inverse(sigma.group.identity))]

    def read_coordinates(self, group):
        return (group.identity,)

    def point_distance(self, group, x_window, y_window):
        e = group.identity
        if e not in x_window or e not in y_window:
            raise ValueError("windows must cover the identity coordinate")
        return 1.0 if x_window[e] != y_window[e] else 0.0

    def __eq__(self, other):
        return isinstance(other, CoordinateMetric)

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return "CoordinateMetric()"


class WeightedWordMetric:
    """rho'(x, y) = sum_{n=1..depth} 2^-n [coordinate s_n^-1 differs], where
    s_1 = e, s_2, ... is the canonical enumeration of the group."""

    kind = "weighted-word"

    def __init__(self, group, depth):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.group = group
        self.depth = int(depth)
        self.elements = group.enumerate_elements(depth)

    def label(self):
        return f"{self.kind}({self.depth})"

    def weighted_columns(self, sigma):
        if sigma.group != self.group:
            raise ValueError("metric and sofic map use different groups")
        return [(2.0 ** -(n + 1), sigma.evaluate(s))
                for n, s in enumerate(self.elements)]

    def read_coordinates(self, group):
        return tuple(group.inverse(s) for s in self.elements)

    def point_distance(self, group, x_window, y_window):
        total = 0.0
        for n, s in enumerate(self.elements):
            c = group.inverse(s)
            if c not in x_window or c not in y_window:
                raise ValueError(f"windows must cover coordinate {c!r}")
            if x_window[c] != y_window[c]:
                total += 2.0 ** -(n + 1)
        return total

    def __eq__(self, other):
        return (isinstance(other, WeightedWordMetric)
                and other.group == self.group and other.depth == self.depth)

    def __hash__(self):
        return hash((self.kind, self.depth))

    def __repr__(self):
        return f"WeightedWordMetric(depth={self.depth})"


def rho(x_window, y_window, metric, group):
    """Pointwise pseudometric on explicit coordinate windows (dict element ->
    symbol)."""
    return metric.point_distance(group, x_window, y_window)


def pointwise_distances(psi, phi, metric):
    """Array of rho(psi(i), phi(i)) over i, both labelings pulled back
    through the shared sofic map."""
    if psi.sigma is not phi.sigma:
        raise ValueError("labelings must share a sofic map")
    dist = np.zeros(psi.d)
    for weight, col in metric.weighted_columns(psi.sigma):
        dist += weight * (psi.beta[col] != phi.beta[col])
    return dist


def rho2(psi, phi, metric):
    dist = pointwise_distances(psi, phi, metric)
    return float(np.sqrt(np.mean(dist ** 2)))


def rho_inf(psi, phi, metric):
    return float(np.max(pointwise_distances(psi, phi, metric)))


def rho_J_inf(psi, phi, J, metric):
    J = np.asarray(list(J), dtype=np.int64)
    if J.size == 0:
        raise ValueError("J must be nonempty")
    dist = pointwise_distances(psi, phi, metric)
    return float(np.max(dist[J]))


def _pattern_match_columns(subshift, sigma):
    """Per forbidden pattern: (list of pullback columns, symbols)."""
    out = []
    for shape, symbols in subshift.forbidden:
        cols = [sigma.evaluate_inverse(s) for s in shape]
        out.append((cols, symbols))
    return out


def violation_fraction(labeling, subshift):
    """Fraction of indices whose pullback pattern matches some forbidden
    pattern."""
    if subshift.is_full_shift:
        return 0.0
    beta = labeling.beta
    violated = np.zeros(labeling.d, dtype=bool)
    for cols, symbols in _pattern_match_columns(subshift, labeling.sigma):
        match = np.ones(labeling.d, dtype=bool)
        for col, sym in zip(cols, symbols):
            match &= beta[col] == sym
        violated |= match
    return float(np.mean(violated))


def violation_row_counts(subshift, sigma, rows):
    """Number of violating indices for every row of a labeling matrix."""
    n = rows.shape[0]
    if subshift.is_full_shift:
        return np.zeros(n, dtype=np.int64)
    violated = np.zeros(rows.shape, dtype=bool)
    for cols, symbols in _pattern_match_columns(subshift, sigma):
        match = np.ones(rows.shape, dtype=bool)
        for col, sym in zip(cols, symbols):
            match &= rows[:, col] == sym
        violated |= match
    return violated.sum(axis=1)


def mismatch_row_counts(sigma, s, rows):
    """Equivariance mismatch count at group element s for every row:
    positions i with beta(sigma_s i) != beta(sigma_e sigma_s i)."""
    u = sigma.evaluate(s)
    v = sigma.evaluate(sigma.group.identity)[u]
    diff = np.flatnonzero(u != v)
    if diff.size == 0:
        return np.zeros(rows.shape[0], dtype=np.int64)
    return (rows[:, u[diff]] != rows[:, v[diff]]).sum(axis=1)
