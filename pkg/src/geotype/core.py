"""Core data model: immutable geometric types, validation, file format, incidence matrices.

A geometric type records, for a family of n abstract rectangles, how many
horizontal and vertical sub-rectangles each one carries, a bijection sending
each horizontal cell (i, j) to a vertical cell (k, l), and a sign telling
whether orientation is preserved (+1) or reversed (-1) on that cell.

Everything here is exact integer combinatorics.  (The one numpy use,
in is_mixing, works on clipped 0/1 support matrices whose entries and
sums stay far below 2**53, so it is exact as well.)  Indices are 1-based
throughout, matching the external file format.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as _np


class GeometricTypeError(ValueError):
    """Base class for all validation and parsing failures."""


class FormatError(GeometricTypeError):
    """Malformed input text (bad token, wrong field count, truncated file)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class RangeViolation(GeometricTypeError):
    """An index or count is outside its declared range."""


class BijectionViolation(GeometricTypeError):
    """The cell map is not a bijection onto the vertical cells."""


class SumMismatch(GeometricTypeError):
    """Total horizontal and vertical cell counts disagree."""


Cell = tuple[int, int, int]  # (k, l, sign)


@dataclass(frozen=True)
class GeometricType:
    """Immutable geometric type.

    hv[i-1] = (h_i, v_i); cells[i-1][j-1] = (k, l, sign) is the image of
    horizontal cell (i, j).  Instances are hashable and compare structurally,
    which is the canonical equality for types (the serialization is unique).
    """

    hv: tuple[tuple[int, int], ...]
    cells: tuple[tuple[Cell, ...], ...]

    def __post_init__(self):
        if len(self.cells) != len(self.hv):
            raise RangeViolation(
                f"{len(self.hv)} rectangles declared but {len(self.cells)} cell rows given")
        for i, ((h, _v), row) in enumerate(zip(self.hv, self.cells), start=1):
            if len(row) != h:
                raise RangeViolation(
                    f"rectangle {i}: h={h} but {len(row)} cell images given")

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.hv)

    def h(self, i: int) -> int:
        return self.hv[i - 1][0]

    def v(self, i: int) -> int:
        return self.hv[i - 1][1]

    def image(self, i: int, j: int) -> Cell:
        """(k, l, sign) for horizontal cell (i, j)."""
        return self.cells[i - 1][j - 1]

    def alpha(self) -> int:
        """Total number of horizontal cells (= vertical cells when valid)."""
        return sum(h for h, _ in self.hv)

    def horizontal_labels(self):
        for i in range(1, self.n + 1):
            for j in range(1, self.h(i) + 1):
                yield (i, j)

    @cached_property
    def _preimage(self) -> dict[tuple[int, int], tuple[int, int]]:
        out = {}
        for i, row in enumerate(self.cells, start=1):
            for j, (k, l, _e) in enumerate(row, start=1):
                out[(k, l)] = (i, j)
        return out

    def preimage(self, k: int, l: int) -> tuple[int, int]:
        """(i, j) with image (k, l).  Valid types make this total."""
        return self._preimage[(k, l)]


def validate(t: GeometricType) -> None:
    """Full structural validation; raises a specific error subclass.

    Checks, in order: positive counts, total-count agreement, in-range
    images, sign domain, and bijectivity of the cell map.
    """
    if t.n < 1:
        raise RangeViolation("a geometric type needs at least one rectangle")
    for i in range(1, t.n + 1):
        h, v = t.hv[i - 1]
        if h < 1 or v < 1:
            raise RangeViolation(f"rectangle {i}: counts must be >= 1, got h={h} v={v}")
    total_h = sum(h for h, _ in t.hv)
    total_v = sum(v for _, v in t.hv)
    if total_h != total_v:
        raise SumMismatch(f"sum of h_i is {total_h} but sum of v_i is {total_v}")
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    for i in range(1, t.n + 1):
        for j in range(1, t.h(i) + 1):
            k, l, e = t.image(i, j)
            if not (1 <= k <= t.n):
                raise RangeViolation(f"cell ({i},{j}): target rectangle {k} out of range")
            if not (1 <= l <= t.v(k)):
                raise RangeViolation(
                    f"cell ({i},{j}): vertical position {l} out of range for rectangle {k} (v={t.v(k)})")
            if e not in (1, -1):
                raise RangeViolation(f"cell ({i},{j}): sign must be +1 or -1, got {e}")
            if (k, l) in seen:
                raise BijectionViolation(
                    f"vertical cell ({k},{l}) hit by both {seen[(k, l)]} and ({i},{j})")
            seen[(k, l)] = (i, j)
    # Surjectivity is now automatic: counts agree and the map is injective.


def is_valid(t: GeometricType) -> bool:
    try:
        validate(t)
        return True
    except GeometricTypeError:
        return False


# -- construction helper ----------------------------------------------------

def make_type(hv, phi) -> GeometricType:
    """Build and validate a type from plain sequences.

    hv: iterable of (h_i, v_i).  phi: mapping (i, j) -> (k, l, sign) or an
    iterable of (i, j, k, l, sign) rows.
    """
    hv = tuple((int(h), int(v)) for h, v in hv)
    table: dict[tuple[int, int], Cell] = {}
    if hasattr(phi, "items"):
        items = ((i, j, k, l, e) for (i, j), (k, l, e) in phi.items())
    else:
        items = phi
    for i, j, k, l, e in items:
        if (i, j) in table:
            raise FormatError(f"duplicate image for cell ({i},{j})")
        table[(i, j)] = (int(k), int(l), int(e))
    rows = []
    for i, (h, _v) in enumerate(hv, start=1):
        row = []
        for j in range(1, h + 1):
            if (i, j) not in table:
                raise FormatError(f"missing image for cell ({i},{j})")
            row.append(table.pop((i, j)))
        rows.append(tuple(row))
    if table:
        extra = next(iter(table))
        raise RangeViolation(f"cell {extra} lies outside the declared h-counts")
    t = GeometricType(hv, tuple(rows))
    validate(t)
    return t


# -- file format -------------------------------------------------------------
#
#   n <int>
#   hv <i> <h_i> <v_i>          (n lines, i = 1..n in order)
#   phi <i> <j> <k> <l> <+1|-1> (sum of h_i lines)
#
# '#' starts a comment; blank lines ignored.  Canonical output sorts phi
# rows by (i, j).

def parse_type(text: str) -> GeometricType:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            rows.append((lineno, stripped.split()))
    if not rows:
        raise FormatError("empty input")

    def intfield(tokens, idx, lineno, what):
        try:
            return int(tokens[idx])
        except (IndexError, ValueError):
            raise FormatError(f"expected integer {what}", lineno, idx + 1) from None

    lineno, tokens = rows[0]
    if tokens[0] != "n" or len(tokens) != 2:
        raise FormatError("first line must be 'n <int>'", lineno)
    n = intfield(tokens, 1, lineno, "rectangle count")
    if n < 1:
        raise RangeViolation(f"line {lineno}: n must be >= 1, got {n}")
    if len(rows) < 1 + n:
        raise FormatError(f"expected {n} 'hv' lines after the header", rows[-1][0])

    hv = []
    for idx in range(n):
        lineno, tokens = rows[1 + idx]
        if tokens[0] != "hv" or len(tokens) != 4:
            raise FormatError("expected 'hv <i> <h_i> <v_i>'", lineno)
        i = intfield(tokens, 1, lineno, "rectangle index")
        if i != idx + 1:
            raise FormatError(f"hv lines must be in order; expected rectangle {idx + 1}, got {i}", lineno)
        h = intfield(tokens, 2, lineno, "h count")
        v = intfield(tokens, 3, lineno, "v count")
        if h < 1 or v < 1:
            raise RangeViolation(f"line {lineno}: counts must be >= 1")
        hv.append((h, v))

    total_h = sum(h for h, _ in hv)
    phi_rows = rows[1 + n:]
    if len(phi_rows) != total_h:
        raise FormatError(
            f"expected {total_h} 'phi' lines, found {len(phi_rows)}",
            phi_rows[-1][0] if phi_rows else rows[-1][0])

    table: dict[tuple[int, int], Cell] = {}
    for lineno, tokens in phi_rows:
        if tokens[0] != "phi" or len(tokens) != 6:
            raise FormatError("expected 'phi <i> <j> <k> <l> <sign>'", lineno)
        i = intfield(tokens, 1, lineno, "i")
        j = intfield(tokens, 2, lineno, "j")
        k = intfield(tokens, 3, lineno, "k")
        l = intfield(tokens, 4, lineno, "l")
        e = intfield(tokens, 5, lineno, "sign")
        if not (1 <= i <= n):
            raise RangeViolation(f"line {lineno}: rectangle {i} out of range")
        if not (1 <= j <= hv[i - 1][0]):
            raise RangeViolation(f"line {lineno}: cell index {j} out of range for rectangle {i}")
        if e not in (1, -1):
            raise RangeViolation(f"line {lineno}: sign must be +1 or -1")
        if (i, j) in table:
            raise FormatError(f"duplicate phi line for cell ({i},{j})", lineno)
        table[(i, j)] = (k, l, e)

    cells = tuple(
        tuple(table[(i, j)] for j in range(1, hv[i - 1][0] + 1))
        for i in range(1, n + 1)
    )
    t = GeometricType(tuple(hv), cells)
    validate(t)
    return t


def serialize_type(t: GeometricType) -> str:
    lines = [f"n {t.n}"]
    for i in range(1, t.n + 1):
        h, v = t.hv[i - 1]
        lines.append(f"hv {i} {h} {v}")
    for i in range(1, t.n + 1):
        for j in range(1, t.h(i) + 1):
            k, l, e = t.image(i, j)
            lines.append(f"phi {i} {j} {k} {l} {'+1' if e > 0 else '-1'}")
    return "\n".join(lines) + "\n"


def load_type(path) -> GeometricType:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_type(fh.read())


def save_type(t: GeometricType, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_type(t))


# -- incidence matrix and friends -------------------------------------------

def incidence_matrix(t: GeometricType) -> tuple[tuple[int, ...], ...]:
    """Entry (i, k): number of horizontal cells of rectangle i sent into rectangle k."""
    n = t.n
    rows = []
    for i in range(1, n + 1):
        counts = [0] * n
        for j in range(1, t.h(i) + 1):
            k, _l, _e = t.image(i, j)
            counts[k - 1] += 1
        rows.append(tuple(counts))
    return tuple(rows)


def matrix_power(a, m: int) -> tuple[tuple[int, ...], ...]:
    """Exact integer matrix power (arbitrary precision)."""
    n = len(a)
    result = tuple(tuple(1 if r == c else 0 for c in range(n)) for r in range(n))
    base = tuple(tuple(int(x) for x in row) for row in a)
    if m < 0:
        raise ValueError("negative power")
    while m:
        if m & 1:
            result = _matmul(result, base)
        m >>= 1
        if m:
            base = _matmul(base, base)
    return result


def _matmul(a, b):
    n = len(a)
    cols = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in cols)
        for row in a
    )


def is_binary(t: GeometricType) -> bool:
    return all(x in (0, 1) for row in incidence_matrix(t) for x in row)


def is_mixing(t: GeometricType) -> tuple[bool, int | None]:
    """Whether A(T)^n is entrywise positive; also the least such power m <= n.

    Positivity of A^m depends only on the 0/1 support of A, so the powers
    are taken over clipped 0/1 matrices in float64 (sums stay below 2**53,
    hence exact).  A repeated support pattern can never become positive
    later, which gives an early exit on non-mixing types.
    """
    base = (_np.array(incidence_matrix(t), dtype=_np.float64) > 0).astype(
        _np.float64
    )
    n = t.n
    cur = base
    seen = set()
    for m in range(1, n + 1):
        if cur.min() > 0:
            return True, m
        digest = hashlib.sha256(_np.ascontiguousarray(cur).tobytes()).digest()
        if digest in seen:
            return False, None
        seen.add(digest)
        if m < n:
            cur = _np.minimum(cur @ base, 1.0)
    return False, None


def inverse(t: GeometricType) -> GeometricType:
    """Swap the roles of horizontal and vertical cells.

    The result maps vertical cell (k, l) back to (i, j) with the original
    sign, and its incidence matrix is the transpose of the original.
    """
    n = t.n
    hv = tuple((v, h) for h, v in t.hv)
    rows = []
    for k in range(1, n + 1):
        row = []
        for l in range(1, t.v(k) + 1):
            i, j = t.preimage(k, l)
            _k, _l, e = t.image(i, j)
            row.append((i, j, e))
        rows.append(tuple(row))
    return GeometricType(hv, tuple(rows))
