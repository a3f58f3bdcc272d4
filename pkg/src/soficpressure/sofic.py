"""Sofic approximations: maps from a group into Sym(d), their defect scores,
good-index sets, and a greedy quasi-tiler.

A SoficMap stores one permutation of {0, ..., d-1} per element of a finite,
inverse-closed domain.  Elements outside the domain are evaluated by
composing generator permutations along the element's word; such evaluations
are "derived" rather than "assigned" and the distinction is visible through
`is_assigned`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import Group, canonical_subset

__all__ = [
    "SoficMap",
    "DefectReport",
    "QuasiTiling",
    "cyclic_approximation",
    "torus_approximation",
    "random_approximation",
    "regular_approximation",
    "defect_report",
    "good_set",
    "quasi_tile",
    "corrupt",
    "serialize_sofic_map",
    "parse_sofic_map",
]


class SoficEvaluationError(ValueError):
    """An element cannot be evaluated from the stored assignment."""


def _check_permutation(arr, d):
    arr = np.asarray(arr, dtype=np.int64)
    if arr.shape != (d,):
        raise ValueError(f"image array has shape {arr.shape}, expected ({d},)")
    seen = np.zeros(d, dtype=bool)
    seen[arr] = True
    if not seen.all():
        raise ValueError("image array is not a bijection of [d]")
    return arr


class SoficMap:
    """A finite assignment of group elements to permutations of [d]."""

    def __init__(self, group: Group, d: int, assignment: dict, seed=None):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.group = group
        self.d = int(d)
        self.seed = seed
        self.assignment = {}
        for g, arr in assignment.items():
            g = group.check_element(g)
            self.assignment[g] = _check_permutation(arr, self.d)
        self.domain = canonical_subset(group, self.assignment)
        e = group.identity
        if e not in self.assignment:
            raise ValueError("domain must contain the identity")
        for g in self.domain:
            if group.inverse(g) not in self.assignment:
                raise ValueError(f"domain is not inverse-closed at {g!r}")
        self._derived = {}

    def is_assigned(self, g):
        return self.group.check_element(g) in self.assignment

    def evaluate(self, g):
        """Permutation images for g: assigned directly, or derived by
        composing generator permutations along g's word."""
        g = self.group.check_element(g)
        arr = self.assignment.get(g)
        if arr is not None:
            return arr
        arr = self._derived.get(g)
        if arr is not None:
            return arr
        out = np.arange(self.d)
        # product g = l_1 l_2 ... l_m acts by composing left-to-right on top.
        for gen, sign in reversed(self.group.letters(g)):
            base = self.assignment.get(gen)
            if base is None:
                raise SoficEvaluationError(
                    f"generator {gen!r} is not assigned; cannot derive {g!r}")
            if sign < 0:
                inv = np.empty(self.d, dtype=np.int64)
                inv[base] = np.arange(self.d)
                base = inv
            out = base[out]
        self._derived[g] = out
        return out

    def evaluate_inverse(self, g):
        return self.evaluate(self.group.inverse(g))

    def __repr__(self):
        return (f"SoficMap(d={self.d}, domain={len(self.domain)} elements, "
                f"group={self.group!r})")


def cyclic_approximation(group, d, domain_radius):
    """Rotation model for Z: sigma_s(a) = a + s mod d on a word ball."""
    if group.kind != "integer-line":
        raise ValueError("cyclic approximation requires the integer line")
    base = np.arange(d)
    assignment = {s: (base + s) % d for s in group.ball(domain_radius)}
    return SoficMap(group, d, assignment)


def torus_approximation(group, side, domain_radius):
    """Quotient model for Z^r: coordinate-wise translation on (Z/side)^r."""
    if group.kind != "integer-lattice":
        raise ValueError("torus approximation requires an integer lattice")
    r = group.rank
    d = side ** r
    coords = np.unravel_index(np.arange(d), (side,) * r)
    assignment = {}
    for s in group.ball(domain_radius):
        shifted = tuple((coords[i] + s[i]) % side for i in range(r))
        assignment[s] = np.ravel_multi_index(shifted, (side,) * r)
    return SoficMap(group, d, assignment)


def random_approximation(group, d, domain_radius, seed):
    """Independent uniform permutation per free generator, extended to the
    ball by composition along reduced words.  Deterministic for a fixed seed."""
    if group.kind != "free":
        raise ValueError("random approximation requires a free group")
    if d < 2:
        raise ValueError("d must be >= 2")
    rng = np.random.default_rng(seed)
    perms = {}
    for gen in group.generators():
        p = rng.permutation(d)
        inv = np.empty(d, dtype=np.int64)
        inv[p] = np.arange(d)
        perms[gen] = p
        perms[group.inverse(gen)] = inv
    assignment = {group.identity: np.arange(d)}
    assignment.update(perms)
    partial = SoficMap(group, d, assignment, seed=seed)
    full = {g: partial.evaluate(g) for g in group.ball(domain_radius)}
    return SoficMap(group, d, full, seed=seed)


def regular_approximation(group):
    """Exact model for a finite group: right multiplication on itself."""
    if group.kind != "finite":
        raise ValueError("regular approximation requires a finite group")
    d = group.order
    # sigma_g(a) = g a; left multiplication makes sigma a homomorphism.
    assignment = {g: group.table[g, :].copy() for g in range(d)}
    return SoficMap(group, d, assignment)


def corrupt(sigma, fraction, seed, elements=None):
    """Return a copy of sigma with a fraction of entries swapped per assigned
    element (keeps every image array a permutation)."""
    rng = np.random.default_rng(seed)
    swaps = max(1, int(round(fraction * sigma.d / 2)))
    new_assignment = {}
    targets = set(elements) if elements is not None else None
    for g in sigma.domain:
        arr = sigma.assignment[g].copy()
        if targets is None or g in targets:
            for _ in range(swaps):
                i, j = rng.integers(0, sigma.d, size=2)
                arr[i], arr[j] = arr[j], arr[i]
        new_assignment[g] = arr
    return SoficMap(sigma.group, sigma.d, new_assignment, seed=sigma.seed)


@dataclass(frozen=True)
class DefectReport:
    multiplicativity_defect: float
    freeness_defect: float
    identity_defect: float
    tested_set: tuple
    derived_elements: tuple = ()   # evaluated by composition, not assigned

    def max_defect(self):
        return max(self.multiplicativity_defect, self.freeness_defect,
                   self.identity_defect)


def defect_report(sigma, tested_set):
    """Worst-pair defect fractions over a finite test set.

    multiplicativity: max over s, t of the fraction of a with
        sigma_s(sigma_t(a)) != sigma_{st}(a);
    freeness: max over distinct s, t of the fraction of a with
        sigma_s(a) == sigma_t(a);
    identity: fraction of a with sigma_e(a) != a.

    Elements (including the products s t) whose permutations had to be
    derived by generator composition rather than read off the assignment are
    listed so "good enough approximation" thresholds can account for them.
    """
    group = sigma.group
    S = canonical_subset(group, tested_set)
    d = sigma.d
    derived = set()
    arrs = {}
    for s in S:
        if not sigma.is_assigned(s):
            derived.add(s)
        arrs[s] = sigma.evaluate(s)
    mult = 0.0
    free = 0.0
    for s in S:
        for t in S:
            st = group.multiply(s, t)
            if not sigma.is_assigned(st):
                derived.add(st)
            composed = arrs[s][arrs[t]]
            mult = max(mult, float(np.mean(composed != sigma.evaluate(st))))
            if s != t:
                free = max(free, float(np.mean(arrs[s] == arrs[t])))
    ident = float(np.mean(sigma.evaluate(group.identity) != np.arange(d)))
    return DefectReport(mult, free, ident, S,
                        canonical_subset(group, derived))


def good_set(sigma, F, T):
    """Indices a where sigma_{st}(a) == sigma_s(sigma_t(a)) for every
    s in F and t in T."""
    group = sigma.group
    good = np.ones(sigma.d, dtype=bool)
    for s in F:
        arr_s = sigma.evaluate(s)
        for t in T:
            arr_t = sigma.evaluate(t)
            st = sigma.evaluate(group.multiply(s, t))
            good &= arr_s[arr_t] == st
    return np.flatnonzero(good)


@dataclass(frozen=True)
class QuasiTiling:
    shapes: tuple
    centers: tuple          # one index tuple per shape
    covered: np.ndarray     # sorted union of all translate images
    d: int

    @property
    def coverage(self):
        return len(self.covered) / self.d

    def translate_images(self, sigma):
        """The image sets sigma(F_k)C_k, one list of arrays per shape."""
        out = []
        for shape, cs in zip(self.shapes, self.centers):
            arrs = [sigma.evaluate(s) for s in shape]
            out.append([np.array([a[c] for a in arrs]) for c in cs])
        return out


def _tiling_ok(sigma, shapes, centers):
    """Verify the two tiling conditions by direct set arithmetic."""
    used = set()
    for shape, cs in zip(shapes, centers):
        arrs = [sigma.evaluate(s) for s in shape]
        images = set()
        for c in cs:
            tile = [int(a[c]) for a in arrs]
            if len(set(tile)) != len(tile):          # injective per center
                return False
            for x in tile:
                if x in images or x in used:          # bijective / disjoint
                    return False
                images.add(x)
        used |= images
    return True


def quasi_tile(sigma, shapes, V, tau, eta):
    """Greedy quasi-tiling: largest shape first, smallest center first.

    Each accepted center c contributes the translate {sigma_s(c) : s in shape};
    a candidate is accepted only if that translate is injective and disjoint
    from everything already placed.  Centers are drawn from V intersected with
    the set of indices where sigma is multiplicative on shape-times-shape
    products, and the output always satisfies the injectivity and disjointness
    conditions by construction.  Coverage is measured and reported; the
    (1 - tau - eta) bound is a property of good approximations, not of
    arbitrary input, so it is asserted by callers, not here.
    """
    if not shapes:
        raise ValueError("shapes must be nonempty")
    V = np.asarray(sorted(set(int(v) for v in V)))
    if len(V) < (1 - tau) * sigma.d:
        raise ValueError("V is too small for the requested tau")
    order = sorted(range(len(shapes)), key=lambda k: (-len(shapes[k]), k))
    covered = np.zeros(sigma.d, dtype=bool)
    centers = [() for _ in shapes]
    for k in order:
        shape = shapes[k]
        arrs = [sigma.evaluate(s) for s in shape]
        good = set(good_set(sigma, shape, shape).tolist())
        chosen = []
        for c in V:
            c = int(c)
            if c not in good:
                continue
            tile = [int(a[c]) for a in arrs]
            if len(set(tile)) != len(tile):
                continue
            if any(covered[x] for x in tile):
                continue
            chosen.append(c)
            covered[tile] = True
        centers[k] = tuple(chosen)
    tiling = QuasiTiling(tuple(tuple(s) for s in shapes), tuple(centers),
                         np.flatnonzero(covered), sigma.d)
    assert _tiling_ok(sigma, tiling.shapes, tiling.centers)
    return tiling


def serialize_sofic_map(sigma):
    """Text format: header `d domain_size`, then one line per domain element:
    canonical word, then the d images."""
    lines = [f"{sigma.d} {len(sigma.domain)}"]
    for g in sigma.domain:
        images = " ".join(str(int(x)) for x in sigma.assignment[g])
        lines.append(f"{sigma.group.format_element(g)} : {images}")
    return "\n".join(lines) + "\n"


def parse_sofic_map(group, text):
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    d, n = (int(x) for x in lines[0].split())
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} assignment lines, got {len(lines) - 1}")
    assignment = {}
    for ln in lines[1:]:
        word, images = ln.split(":")
        g = group.parse_element(word.strip())
        assignment[g] = np.array([int(x) for x in images.split()])
    return SoficMap(group, d, assignment)
