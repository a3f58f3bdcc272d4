"""Weighted transfer matrices for subshifts over the integer line.

This is an oracle component: it computes partition sums over d-periodic
configurations (traces of matrix powers) and the exact pressure (log of the
Perron root) without touching the map-space enumeration path, so the two can
be checked against each other.

Factors are normalized to read backward from their anchor: a forbidden
pattern with shape S placed at anchor j constrains symbols at positions
j - o for offsets o = s - min(S), and an observable with window W anchored
at j reads positions j - o for o = w - min(W).  This matches how pullback
evaluation reads a labeling under the cyclic model, where coordinate t of
the point at index i is the symbol at index i - t.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "TransferSystem",
    "build_transfer_system",
    "log_trace_power",
    "integer_trace_power",
    "log_perron",
]

_STATE_BUDGET = 1 << 14


class TransferSystem:
    """States are words of length L over the alphabet; transitions append one
    symbol and are weighted by exp(observable at the new anchor)."""

    def __init__(self, k, L, weighted, adjacency):
        self.k = k
        self.L = L
        self.weighted = weighted      # float matrix, 0 where forbidden
        self.adjacency = adjacency    # 0/1 int matrix

    @property
    def n_states(self):
        return self.k ** self.L


def _backward_offsets(elements):
    """Offsets o = s - min(S) for an integer shape, ascending."""
    elems = sorted(int(s) for s in elements)
    base = elems[0]
    return [s - base for s in elems]


def build_transfer_system(subshift, observable):
    """Transfer system for a Z-subshift and a local observable."""
    if subshift.group.kind != "integer-line":
        raise ValueError("transfer matrices require the integer line")
    k = subshift.alphabet.size
    factors = []
    for shape, symbols in subshift.forbidden:
        offs = _backward_offsets(shape)
        # shape is canonically sorted ascending, offsets line up with symbols
        factors.append(("forbid", offs, tuple(symbols)))
    w_offs = _backward_offsets(observable.window)
    factors.append(("value", w_offs, observable))

    span = max(max(offs) + 1 for _, offs, _ in factors)
    L = max(span - 1, 1)
    if k ** L > _STATE_BUDGET:
        raise ValueError(f"window span too large: {k}^{L} transfer states")

    n = k ** L
    weighted = np.zeros((n, n))
    adjacency = np.zeros((n, n), dtype=np.int64)

    def digits(code, length):
        out = []
        for _ in range(length):
            out.append(code % k)
            code //= k
        out.reverse()
        return out

    for u in range(n):
        du = digits(u, L)
        for c in range(k):
            dv = du[1:] + [c]
            v = 0
            for s in dv:
                v = v * k + s
            combined = du + [c]          # positions anchor-L .. anchor
            ok = True
            value = 0.0
            for kind, offs, payload in factors:
                read = [combined[L - o] for o in offs]
                if kind == "forbid":
                    if tuple(read) == payload:
                        ok = False
                        break
                else:
                    value = payload.value(read)
            if ok:
                adjacency[u, v] = 1
                weighted[u, v] = np.exp(value)
    return TransferSystem(k, L, weighted, adjacency)


def log_trace_power(matrix, d):
    """log trace(matrix^d) for a nonnegative matrix, scaled to avoid overflow.

    Returns -inf when the trace is zero.
    """
    matrix = np.asarray(matrix, dtype=float)
    scale = matrix.max()
    if scale <= 0:
        return float("-inf")
    power = np.linalg.matrix_power(matrix / scale, d)
    tr = float(np.trace(power))
    if tr <= 0:
        return float("-inf")
    return d * float(np.log(scale)) + float(np.log(tr))


def integer_trace_power(matrix, d):
    """Exact trace(matrix^d) for a small nonnegative integer matrix."""
    n = matrix.shape[0]
    m = [[int(x) for x in row] for row in matrix]

    def matmul(a, b):
        return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)]
                for i in range(n)]

    result = None
    base = m
    e = d
    while e:
        if e & 1:
            result = base if result is None else matmul(result, base)
        e >>= 1
        if e:
            base = matmul(base, base)
    return sum(result[i][i] for i in range(n))


def log_perron(matrix):
    """log of the spectral radius of a nonnegative matrix."""
    eigs = np.linalg.eigvals(np.asarray(matrix, dtype=float))
    radius = float(np.max(np.abs(eigs)))
    if radius <= 0:
        return float("-inf")
    return float(np.log(radius))
