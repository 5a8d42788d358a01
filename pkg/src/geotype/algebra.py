"""Powers and horizontal splitting of geometric types.

The m-th power of a type describes the same dynamics sampled every m steps:
its horizontal cells are the length-m itineraries through the original cells.
Cell counts grow like the entries of the m-th incidence-matrix power, so the
construction works on flat numpy arrays level by level and is guarded by a
cell budget.
"""

from __future__ import annotations

import numpy as np

from .core import (
    GeometricType,
    GeometricTypeError,
    incidence_matrix,
    matrix_power,
    validate,
)

DEFAULT_CELL_LIMIT = 10**6


class CellLimitExceeded(GeometricTypeError):
    """A power construction would exceed the cell budget.

    Recoverable: callers that sweep over powers catch this and report how far
    they got.
    """

    def __init__(self, power: int, needed: int, limit: int):
        super().__init__(
            f"power {power} needs {needed} cells, over the limit of {limit}")
        self.power = power
        self.needed = needed
        self.limit = limit


class Columns:
    """Flat array view of a type: one row per horizontal cell.

    Arrays I, J, K, L, E hold (i, j) -> (k, l, sign) with 1-based values.
    h and v are per-rectangle counts padded so h[i] works directly; blocks[i-1]
    is the first row of rectangle i, blocks[n] the total.  Scanners work on
    this form so that large powers never need to be materialized as tuples.
    """

    __slots__ = ("n", "h", "v", "blocks", "I", "J", "K", "L", "E")

    def __init__(self, n, h, v, blocks, I, J, K, L, E):
        self.n = n
        self.h = h
        self.v = v
        self.blocks = blocks
        self.I = I
        self.J = J
        self.K = K
        self.L = L
        self.E = E


def columns_of(t: GeometricType) -> Columns:
    """Build the flat-array view of an explicit type."""
    n = t.n
    h = np.zeros(n + 1, dtype=np.int64)
    v = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        h[i], v[i] = t.hv[i - 1]
    blocks = np.concatenate(([0], np.cumsum(h[1:])))
    total = int(blocks[-1])
    I = np.repeat(np.arange(1, n + 1), h[1:])
    J = np.arange(total) - blocks[I - 1] + 1
    K = np.empty(total, dtype=np.int64)
    L = np.empty(total, dtype=np.int64)
    E = np.empty(total, dtype=np.int64)
    pos = 0
    for row in t.cells:
        for (k, l, e) in row:
            K[pos] = k
            L[pos] = l
            E[pos] = e
            pos += 1
    return Columns(n, h, v, blocks, I, J.astype(np.int64), K, L, E)


def type_of_columns(c: Columns) -> GeometricType:
    """Materialize a Columns view back into an explicit type."""
    hv = tuple((int(c.h[i]), int(c.v[i])) for i in range(1, c.n + 1))
    cells = []
    K, L, E = c.K, c.L, c.E
    for i in range(1, c.n + 1):
        a, b = int(c.blocks[i - 1]), int(c.blocks[i])
        cells.append(tuple(
            (int(K[p]), int(L[p]), int(E[p])) for p in range(a, b)))
    return GeometricType(hv, tuple(cells))


class PowerBuilder:
    """Incremental constructor for the powers of a type.

    Keeps, for the current power m, one row per length-m itinerary:
    its final target rectangle, the running sign product, and the itinerary's
    rank among all itineraries landing in that rectangle (the vertical order).
    `step()` advances m by one; `columns()` exposes the current power without
    building tuples.

    Orderings are maintained incrementally instead of by sorting: a parent's
    extensions are emitted in increasing j when its sign product is +1 and in
    decreasing j otherwise, which keeps row ids in horizontal order; the
    vertical lists are rebuilt by walking the target's vertical cells in
    order and splicing in each source list forward or reversed according to
    the sign of the connecting cell.
    """

    def __init__(self, t: GeometricType, max_cells: int = DEFAULT_CELL_LIMIT):
        self.max_cells = max_cells
        self.m = 1
        n = t.n
        self.n = n
        h = np.zeros(n + 1, dtype=np.int64)
        v = np.zeros(n + 1, dtype=np.int64)
        for i in range(1, n + 1):
            h[i], v[i] = t.hv[i - 1]
        self.base_h = h
        self.base_v = v
        hmax = int(h.max())
        # Padded lookup tables: XI[i, j] / EPS[i, j] for 1 <= j <= h_i.
        XI = np.zeros((n + 1, hmax + 1), dtype=np.int64)
        EPS = np.zeros((n + 1, hmax + 1), dtype=np.int64)
        for i in range(1, n + 1):
            for j in range(1, int(h[i]) + 1):
                k, _l, e = t.image(i, j)
                XI[i, j] = k
                EPS[i, j] = e
        self.XI = XI
        self.EPS = EPS
        # Vertical cells of each rectangle, in order, with their sources.
        self.pre = []
        for k in range(1, n + 1):
            self.pre.append([t.preimage(k, l) + (t.image(*t.preimage(k, l))[2],)
                             for l in range(1, int(v[k]) + 1)])

        blocks = np.concatenate(([0], np.cumsum(h[1:])))
        total = int(blocks[-1])
        if total > max_cells:
            raise CellLimitExceeded(1, total, max_cells)
        I = np.repeat(np.arange(1, n + 1), h[1:])
        J = (np.arange(total) - blocks[I - 1] + 1).astype(np.int64)
        self.term = XI[I, J]
        self.prod = EPS[I, J]
        self.blocks = blocks
        self.vlists = [
            np.array([blocks[kp - 1] + jp - 1 for (kp, jp, _e) in self.pre[k - 1]],
                     dtype=np.int64)
            for k in range(1, n + 1)
        ]

    def step(self) -> None:
        """Advance from the current power m to m + 1."""
        h, XI, EPS = self.base_h, self.XI, self.EPS
        term, prod = self.term, self.prod
        P = len(term)
        counts = h[term]
        hs = np.zeros(P + 1, dtype=np.int64)
        np.cumsum(counts, out=hs[1:])
        total = int(hs[-1])
        if total > self.max_cells:
            raise CellLimitExceeded(self.m + 1, total, self.max_cells)
        parent = np.repeat(np.arange(P), counts)
        slot = np.arange(total) - hs[parent]
        pterm = term[parent]
        pprod = prod[parent]
        j = np.where(pprod > 0, slot + 1, h[pterm] - slot)
        new_term = XI[pterm, j]
        new_prod = pprod * EPS[pterm, j]

        new_vlists = []
        for k in range(1, self.n + 1):
            parts = []
            for (kp, jp, ep) in self.pre[k - 1]:
                src = self.vlists[kp - 1]
                if ep < 0:
                    src = src[::-1]
                sp = prod[src]
                parts.append(hs[src] + np.where(sp > 0, jp - 1, h[kp] - jp))
            new_vlists.append(np.concatenate(parts))

        self.term = new_term
        self.prod = new_prod
        self.blocks = hs[self.blocks]
        self.vlists = new_vlists
        self.m += 1

    def _vrank(self) -> np.ndarray:
        P = len(self.term)
        vrank = np.zeros(P, dtype=np.int64)
        for vl in self.vlists:
            vrank[vl] = np.arange(1, len(vl) + 1)
        return vrank

    def columns(self) -> Columns:
        n = self.n
        blocks = self.blocks
        hcounts = np.diff(blocks)
        h = np.concatenate(([0], hcounts))
        v = np.zeros(n + 1, dtype=np.int64)
        for k in range(1, n + 1):
            v[k] = len(self.vlists[k - 1])
        total = int(blocks[-1])
        I = np.repeat(np.arange(1, n + 1), hcounts)
        J = (np.arange(total) - blocks[I - 1] + 1).astype(np.int64)
        return Columns(n, h, v, blocks, I, J, self.term, self._vrank(), self.prod)

    def emit(self) -> GeometricType:
        return type_of_columns(self.columns())


def power(t: GeometricType, m: int,
          max_cells: int = DEFAULT_CELL_LIMIT) -> GeometricType:
    """The m-th power of a type (m >= 1); exact, budget-guarded.

    Horizontal cells of the result are length-m itineraries ordered so that
    the result is again a geometric type of the same dynamical system; its
    incidence matrix equals the m-th power of the original one.
    """
    if m < 1:
        raise ValueError(f"power must be >= 1, got {m}")
    b = PowerBuilder(t, max_cells)
    for _ in range(m - 1):
        b.step()
    out = b.emit()
    return out


def iter_power_columns(t: GeometricType, m_max: int,
                       max_cells: int = DEFAULT_CELL_LIMIT):
    """Yield (m, Columns) for m = 1..m_max, stopping early on budget overrun.

    The budget overrun is reported by raising CellLimitExceeded *after* all
    affordable powers have been yielded.
    """
    b = PowerBuilder(t, max_cells)
    yield 1, b.columns()
    for _ in range(m_max - 1):
        b.step()
        yield b.m, b.columns()


def oracle_power_matrix(t: GeometricType, m: int) -> tuple[tuple[int, ...], ...]:
    """Independent check value: the m-th power of the incidence matrix,
    computed purely by exact integer matrix multiplication."""
    return matrix_power(incidence_matrix(t), m)


def horizontal_type(t: GeometricType) -> GeometricType:
    """Split every rectangle into its horizontal cells.

    The result has one rectangle per horizontal cell of the input and is
    always binary (no two cells of one rectangle land in the same target
    rectangle).  Rectangle numbering is by (i, j) in lexicographic order.
    """
    offs = [0]
    for hh, _vv in t.hv:
        offs.append(offs[-1] + hh)

    def label(i, j):
        return offs[i - 1] + j

    hv = []
    cells = []
    for i in range(1, t.n + 1):
        for j in range(1, t.h(i) + 1):
            k, l, e = t.image(i, j)
            hk = t.h(k)
            hv.append((hk, t.v(i)))
            if e > 0:
                row = tuple((label(k, j0), l, 1) for j0 in range(1, hk + 1))
            else:
                row = tuple((label(k, hk + 1 - j0), l, -1) for j0 in range(1, hk + 1))
            cells.append(row)
    out = GeometricType(tuple(hv), tuple(cells))
    validate(out)
    return out
