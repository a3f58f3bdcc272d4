"""Symbolic arithmetic for the acting groups.

Four families are supported: the integer line Z, integer lattices Z^r, free
groups F_r, and finite groups given by a multiplication table.  These cover
both the amenable examples (Z, Z^r, finite) and the canonical non-amenable
sofic examples (free groups) while keeping every element in a computable
canonical form:

    Z           int
    Z^r         tuple of r ints
    F_r         freely reduced tuple of nonzero "letters" (+i generator i,
                -i its inverse, 1-based)
    finite      int index into the multiplication table

Finite subsets are plain tuples, duplicate-free, sorted by the group's
canonical key so every downstream enumeration is deterministic.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

__all__ = [
    "Group",
    "IntegerLine",
    "IntegerLattice",
    "FreeGroup",
    "FiniteGroup",
    "canonical_subset",
    "group_from_config",
]

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class Group:
    """Base class: group law, canonical forms, balls, Folner sets."""

    kind = "abstract"
    amenable = False

    @property
    def identity(self):
        raise NotImplementedError

    def check_element(self, g):
        """Raise ValueError if g is not a canonical element of this group."""
        raise NotImplementedError

    def multiply(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def generators(self):
        """Standard generating set (without inverses)."""
        raise NotImplementedError

    def letters(self, g):
        """Decomposition of g as a product of generators and their inverses.

        Returns a list of (generator, +1|-1) pairs whose ordered product is g.
        """
        raise NotImplementedError

    def sort_key(self, g):
        """Total order on canonical forms; fixes the order of finite subsets."""
        raise NotImplementedError

    def enum_key(self, g):
        """Order used by the element enumeration s_1 = e, s_2, ...

        Shells of increasing word length, positives before inverses, so for Z
        the enumeration runs 0, 1, -1, 2, -2, ...
        """
        raise NotImplementedError

    def word_length(self, g):
        raise NotImplementedError

    def ball(self, radius):
        """All elements of word length <= radius, canonically sorted."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        elems = self._ball_elements(radius)
        return canonical_subset(self, elems)

    def _ball_elements(self, radius):
        raise NotImplementedError

    def folner(self, n):
        """n-th canonical Folner set; only defined for amenable kinds."""
        raise NotImplementedError

    def enumerate_elements(self, count):
        """First `count` elements of the canonical enumeration (identity first)."""
        out = []
        radius = 0
        seen = set()
        while len(out) < count:
            shell = [g for g in self._ball_elements(radius) if g not in seen]
            shell.sort(key=self.enum_key)
            for g in shell:
                seen.add(g)
                out.append(g)
                if len(out) == count:
                    break
            radius += 1
        return out

    def format_element(self, g):
        raise NotImplementedError

    def parse_element(self, text):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._signature() == other._signature()

    def __hash__(self):
        return hash((type(self).__name__,) + self._signature())

    def _signature(self):
        return ()

    def __repr__(self):
        return f"{type(self).__name__}()"


class IntegerLine(Group):
    """The group Z with generator 1."""

    kind = "integer-line"
    amenable = True

    @property
    def identity(self):
        return 0

    def check_element(self, g):
        if not isinstance(g, (int, np.integer)):
            raise ValueError(f"not an element of Z: {g!r}")
        return int(g)

    def multiply(self, g, h):
        return self.check_element(g) + self.check_element(h)

    def inverse(self, g):
        return -self.check_element(g)

    def generators(self):
        return [1]

    def letters(self, g):
        g = self.check_element(g)
        sign = 1 if g >= 0 else -1
        return [(1, sign)] * abs(g)

    def sort_key(self, g):
        return g

    def enum_key(self, g):
        return (abs(g), 0 if g > 0 else 1)

    def word_length(self, g):
        return abs(self.check_element(g))

    def _ball_elements(self, radius):
        return range(-radius, radius + 1)

    def folner(self, n):
        if n < 1:
            raise ValueError("n must be >= 1")
        return tuple(range(n))

    def format_element(self, g):
        return str(int(g))

    def parse_element(self, text):
        return int(text)


class IntegerLattice(Group):
    """The lattice Z^rank with the unit vectors as generators."""

    kind = "integer-lattice"
    amenable = True

    def __init__(self, rank):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = int(rank)

    def _signature(self):
        return (self.rank,)

    @property
    def identity(self):
        return (0,) * self.rank

    def check_element(self, g):
        if not (isinstance(g, tuple) and len(g) == self.rank
                and all(isinstance(c, (int, np.integer)) for c in g)):
            raise ValueError(f"not an element of Z^{self.rank}: {g!r}")
        return tuple(int(c) for c in g)

    def multiply(self, g, h):
        g = self.check_element(g)
        h = self.check_element(h)
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        return tuple(-c for c in self.check_element(g))

    def generators(self):
        eye = []
        for i in range(self.rank):
            v = [0] * self.rank
            v[i] = 1
            eye.append(tuple(v))
        return eye

    def letters(self, g):
        g = self.check_element(g)
        out = []
        for i, c in enumerate(g):
            v = [0] * self.rank
            v[i] = 1
            sign = 1 if c >= 0 else -1
            out.extend([(tuple(v), sign)] * abs(c))
        return out

    def sort_key(self, g):
        return g

    def enum_key(self, g):
        return tuple((abs(c), 0 if c > 0 else 1) for c in g)

    def word_length(self, g):
        return sum(abs(c) for c in self.check_element(g))

    def _ball_elements(self, radius):
        # L1 ball: word length in the unit-vector generators.
        for v in itertools.product(range(-radius, radius + 1), repeat=self.rank):
            if sum(abs(c) for c in v) <= radius:
                yield v

    def folner(self, n):
        if n < 1:
            raise ValueError("n must be >= 1")
        return tuple(itertools.product(range(n), repeat=self.rank))

    def format_element(self, g):
        return ",".join(str(c) for c in g)

    def parse_element(self, text):
        parts = text.split(",")
        if len(parts) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates: {text!r}")
        return tuple(int(p) for p in parts)

    def __repr__(self):
        return f"IntegerLattice(rank={self.rank})"


class FreeGroup(Group):
    """The free group F_rank on letters a, b, c, ...

    Elements are freely reduced tuples of nonzero ints: +i is the i-th
    generator (1-based), -i its inverse.  Rank 1 is Z in disguise and counts
    as amenable; rank >= 2 does not.
    """

    kind = "free"

    def __init__(self, rank):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        if rank > len(_LETTERS):
            raise ValueError("rank too large for letter names")
        self.rank = int(rank)

    @property
    def amenable(self):
        return self.rank == 1

    def _signature(self):
        return (self.rank,)

    @property
    def identity(self):
        return ()

    def check_element(self, g):
        if not isinstance(g, tuple):
            raise ValueError(f"not a free-group word: {g!r}")
        for letter in g:
            if not isinstance(letter, (int, np.integer)) or letter == 0 \
                    or abs(letter) > self.rank:
                raise ValueError(f"bad letter {letter!r} in word {g!r}")
        for x, y in zip(g, g[1:]):
            if x == -y:
                raise ValueError(f"word not freely reduced: {g!r}")
        return tuple(int(l) for l in g)

    @staticmethod
    def _reduce(letters):
        out = []
        for l in letters:
            if out and out[-1] == -l:
                out.pop()
            else:
                out.append(l)
        return tuple(out)

    def multiply(self, g, h):
        return self._reduce(self.check_element(g) + self.check_element(h))

    def inverse(self, g):
        return tuple(-l for l in reversed(self.check_element(g)))

    def generators(self):
        return [(i,) for i in range(1, self.rank + 1)]

    def letters(self, g):
        g = self.check_element(g)
        return [((abs(l),), 1 if l > 0 else -1) for l in g]

    def sort_key(self, g):
        return (len(g), g)

    def enum_key(self, g):
        return tuple((abs(l), 0 if l > 0 else 1) for l in g)

    def word_length(self, g):
        return len(self.check_element(g))

    def _ball_elements(self, radius):
        frontier = [()]
        yield ()
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for l in range(1, self.rank + 1):
                    for s in (l, -l):
                        if w and w[-1] == -s:
                            continue
                        nxt.append(w + (s,))
            yield from nxt
            frontier = nxt

    def folner(self, n):
        if self.rank >= 2:
            raise ValueError("free group of rank >= 2 is not amenable")
        if n < 1:
            raise ValueError("n must be >= 1")
        return tuple((1,) * j if j else () for j in range(n))

    def format_element(self, g):
        if not g:
            return "e"
        parts = []
        for l in g:
            name = _LETTERS[abs(l) - 1]
            parts.append(name if l > 0 else name + "^-1")
        return " ".join(parts)

    def parse_element(self, text):
        text = text.strip()
        if text == "e" or text == "":
            return ()
        letters = []
        for token in text.split():
            if token.endswith("^-1"):
                name, sign = token[:-3], -1
            else:
                name, sign = token, 1
            idx = _LETTERS.index(name) + 1
            if idx > self.rank:
                raise ValueError(f"letter {name!r} beyond rank {self.rank}")
            letters.append(sign * idx)
        return self._reduce(letters)

    def __repr__(self):
        return f"FreeGroup(rank={self.rank})"


class FiniteGroup(Group):
    """A finite group given by its multiplication table.

    table[i, j] is the index of the product of elements i and j.  The table
    must be a Latin square with a two-sided identity and inverses.
    """

    kind = "finite"
    amenable = True

    def __init__(self, table):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("multiplication table must be square")
        n = table.shape[0]
        if n < 1 or table.min() < 0 or table.max() >= n:
            raise ValueError("table entries must index elements")
        full = frozenset(range(n))
        for i in range(n):
            if frozenset(table[i]) != full or frozenset(table[:, i]) != full:
                raise ValueError("multiplication table is not a Latin square")
        ident = [i for i in range(n)
                 if all(table[i, j] == j and table[j, i] == j for j in range(n))]
        if len(ident) != 1:
            raise ValueError("table has no two-sided identity")
        self._e = ident[0]
        self._inv = np.empty(n, dtype=np.int64)
        for i in range(n):
            js = np.where(table[i] == self._e)[0]
            if len(js) != 1 or table[js[0], i] != self._e:
                raise ValueError(f"element {i} has no two-sided inverse")
            self._inv[i] = js[0]
        self.table = table
        self.order = n

    def _signature(self):
        return (self.table.tobytes(),)

    @property
    def identity(self):
        return self._e

    def check_element(self, g):
        if not isinstance(g, (int, np.integer)) or not (0 <= g < self.order):
            raise ValueError(f"not an element index in [0, {self.order}): {g!r}")
        return int(g)

    def multiply(self, g, h):
        return int(self.table[self.check_element(g), self.check_element(h)])

    def inverse(self, g):
        return int(self._inv[self.check_element(g)])

    def generators(self):
        return [g for g in range(self.order) if g != self._e]

    def letters(self, g):
        g = self.check_element(g)
        return [] if g == self._e else [(g, 1)]

    def sort_key(self, g):
        return g

    def enum_key(self, g):
        return g

    def word_length(self, g):
        return 0 if self.check_element(g) == self._e else 1

    def _ball_elements(self, radius):
        if radius == 0:
            return [self._e]
        return range(self.order)

    def folner(self, n):
        if n < 1:
            raise ValueError("n must be >= 1")
        return tuple(range(self.order))

    def format_element(self, g):
        return str(int(g))

    def parse_element(self, text):
        return self.check_element(int(text))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def canonical_subset(group, elements):
    """Duplicate-free tuple in the group's canonical order."""
    uniq = {}
    for g in elements:
        uniq[group.check_element(g)] = None
    return tuple(sorted(uniq, key=group.sort_key))


def cyclic_group(n):
    """Convenience constructor: Z/n as a FiniteGroup."""
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n)


def folner_boundary_ratio(group, s, folner_set):
    """|s F  symmetric-difference  F| / |F| for a translate s."""
    fset = set(folner_set)
    shifted = {group.multiply(s, g) for g in fset}
    return Fraction(len(shifted ^ fset), len(fset))


def group_from_config(kind, rank=None, table=None):
    """Build a group from the flat config vocabulary."""
    kind = kind.strip().lower()
    if kind in ("integer-line", "z"):
        return IntegerLine()
    if kind in ("integer-lattice", "lattice"):
        if rank is None:
            raise ValueError("integer-lattice requires rank")
        return IntegerLattice(rank)
    if kind in ("free", "free-group"):
        if rank is None:
            raise ValueError("free group requires rank")
        return FreeGroup(rank)
    if kind == "finite":
        if table is None:
            raise ValueError("finite group requires a multiplication table")
        return FiniteGroup(table)
    raise ValueError(f"unknown group kind: {kind!r}")
