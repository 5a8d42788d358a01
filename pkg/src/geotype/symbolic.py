"""Boundary-side symbols: itinerary codes, periodic pairing, orbit enumeration.

Every horizontal rectangle side (lower or upper) of a geometric type follows a
deterministic itinerary: the side maps into a definite side of a definite
rectangle, and iterating that step yields an eventually periodic rectangle
sequence — the side's code.  Vertical sides do the same through the inverse
type.  Periodic codes on the two sides pair up word-by-word, and the paired
objects drive the corner analysis and the singularity census.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .core import (
    GeometricType,
    GeometricTypeError,
    incidence_matrix,
    inverse,
    is_binary,
    is_mixing,
)

__all__ = [
    "BoundaryLabel",
    "BoundaryCode",
    "PeriodicBoundaryCode",
    "PeriodicOrbit",
    "PairingError",
    "boundary_labels",
    "theta",
    "gamma",
    "upsilon",
    "s_boundary_code",
    "u_boundary_code",
    "periodic_boundary_codes",
    "has_corner_property",
    "enumerate_periodic_orbits",
    "make_orbit",
    "is_s_boundary_orbit",
    "is_u_boundary_orbit",
    "primitive_root",
    "least_rotation",
]


class PairingError(GeometricTypeError):
    """A periodic side word has no partner (or no unique one) on the other side."""


class BoundaryLabel(NamedTuple):
    """A horizontal or vertical rectangle side: rectangle index + which side.

    ``eps`` is -1 for the lower/left side and +1 for the upper/right side.
    """

    i: int
    eps: int


def _check_label(t: GeometricType, label) -> BoundaryLabel:
    i, eps = label
    if not 1 <= i <= t.n:
        raise GeometricTypeError(f"label rectangle {i} out of range 1..{t.n}")
    if eps not in (-1, 1):
        raise GeometricTypeError(f"label side {eps} must be -1 or +1")
    return BoundaryLabel(int(i), int(eps))


def boundary_labels(t: GeometricType) -> tuple[BoundaryLabel, ...]:
    """All 2n side labels, lower before upper, rectangle-major order."""
    out = []
    for i in range(1, t.n + 1):
        out.append(BoundaryLabel(i, -1))
        out.append(BoundaryLabel(i, 1))
    return tuple(out)


def theta(t: GeometricType, i: int, eps: int) -> int:
    """Horizontal position whose image hugs the given side: 1 below, h_i above."""
    lab = _check_label(t, (i, eps))
    return 1 if lab.eps == -1 else t.h(lab.i)


def gamma(t: GeometricType, label) -> BoundaryLabel:
    """One itinerary step of a horizontal side.

    The side lands inside the rectangle its edge cell maps to, on the side
    given by the original side twisted with the cell's orientation sign.
    """
    i, eps = _check_label(t, label)
    j = 1 if eps == -1 else t.h(i)
    k, _, e = t.image(i, j)
    return BoundaryLabel(k, eps * e)


def upsilon(t: GeometricType, label) -> BoundaryLabel:
    """One itinerary step of a vertical side (the same map on the inverse type)."""
    return gamma(inverse(t), label)


def _side_orbit(
    t: GeometricType, label: BoundaryLabel
) -> tuple[list[BoundaryLabel], list[BoundaryLabel]]:
    """Label trail until the first repeat, split as (preperiod, cycle).

    There are only 2n labels, so the cycle is entered within 2n steps.
    """
    seen: dict[BoundaryLabel, int] = {}
    trail: list[BoundaryLabel] = []
    cur = label
    while cur not in seen:
        seen[cur] = len(trail)
        trail.append(cur)
        cur = gamma(t, cur)
    split = seen[cur]
    return trail[:split], trail[split:]


def primitive_root(word: Iterable[int]) -> tuple[int, ...]:
    """Shortest word whose repetition gives ``word``."""
    w = tuple(word)
    size = len(w)
    for d in range(1, size + 1):
        if size % d == 0 and w == w[:d] * (size // d):
            return w[:d]
    return w


def least_rotation(word: Iterable[int]) -> tuple[int, ...]:
    """Lexicographically smallest cyclic rotation."""
    w = tuple(word)
    return min(w[r:] + w[:r] for r in range(len(w)))


@dataclass(frozen=True)
class BoundaryCode:
    """Eventually periodic rectangle itinerary of one side label.

    ``preperiod`` and ``period`` are the rectangle indices of the label trail
    before and inside the entered label cycle; together they determine the
    full infinite symbol sequence.  ``side`` is "s-positive" for horizontal
    sides iterated forward and "u-negative" for vertical sides iterated
    through the inverse.
    """

    label: BoundaryLabel
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    side: str

    def symbols(self, count: int) -> tuple[int, ...]:
        """First ``count`` symbols of the infinite sequence."""
        out = list(self.preperiod)
        while len(out) < count:
            out.extend(self.period)
        return tuple(out[:count])

    def normal_form(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Minimal (preperiod, primitive period) of the same infinite sequence.

        Two codes describe the same sequence exactly when their normal forms
        are equal; the label-trail split above need not be sequence-minimal.
        """
        per = list(primitive_root(self.period))
        pre = list(self.preperiod)
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = per[-1:] + per[:-1]
        return tuple(pre), tuple(per)

    def same_sequence(self, other: "BoundaryCode") -> bool:
        return self.normal_form() == other.normal_form()


def s_boundary_code(t: GeometricType, label) -> BoundaryCode:
    """Forward itinerary code of a horizontal side, split at the entered cycle."""
    lab = _check_label(t, label)
    pre, cyc = _side_orbit(t, lab)
    return BoundaryCode(
        lab, tuple(x.i for x in pre), tuple(x.i for x in cyc), "s-positive"
    )


def u_boundary_code(t: GeometricType, label) -> BoundaryCode:
    """Itinerary code of a vertical side, computed on the inverse type."""
    lab = _check_label(t, label)
    pre, cyc = _side_orbit(inverse(t), lab)
    return BoundaryCode(
        lab, tuple(x.i for x in pre), tuple(x.i for x in cyc), "u-negative"
    )


@dataclass(frozen=True, order=True)
class PeriodicBoundaryCode:
    """A fully periodic side itinerary, carried by one side label per side.

    ``word`` is the primitive periodic rectangle word read forward from the
    anchor instant, so ``word[0]`` is the rectangle both carrying labels live
    on.  ``s_eps``/``u_eps`` are the signs of the horizontal and vertical
    carrying sides.  Identity is (word-with-phase, both signs): rotating the
    word gives a different code.
    """

    word: tuple[int, ...]
    s_eps: int
    u_eps: int

    @property
    def anchor(self) -> int:
        return self.word[0]

    @property
    def s_label(self) -> BoundaryLabel:
        return BoundaryLabel(self.word[0], self.s_eps)

    @property
    def u_label(self) -> BoundaryLabel:
        return BoundaryLabel(self.word[0], self.u_eps)

    @property
    def period(self) -> int:
        return len(self.word)

    def u_word(self) -> tuple[int, ...]:
        """The same bi-infinite word read backward from the anchor.

        This is the forward itinerary word of the carrying vertical side.
        """
        p = len(self.word)
        return tuple(self.word[(-m) % p] for m in range(p))


def _require_binary_mixing(t: GeometricType, what: str) -> None:
    if not is_binary(t):
        raise GeometricTypeError(f"{what} needs a binary incidence matrix")
    mixing, _ = is_mixing(t)
    if not mixing:
        raise GeometricTypeError(f"{what} needs a mixing type")


def _periodic_side_words(t: GeometricType) -> dict[BoundaryLabel, tuple[int, ...]]:
    """Labels whose trail is purely periodic, with their primitive words."""
    out: dict[BoundaryLabel, tuple[int, ...]] = {}
    for lab in boundary_labels(t):
        pre, cyc = _side_orbit(t, lab)
        if not pre:
            out[lab] = primitive_root(tuple(x.i for x in cyc))
    return out


def periodic_boundary_codes(t: GeometricType) -> tuple[PeriodicBoundaryCode, ...]:
    """All fully periodic side codes, with their side labels paired up.

    A horizontal side whose itinerary is periodic from the start carries one
    side of a periodic word; the matching vertical side must carry the same
    bi-infinite word read backward from the same anchor rectangle.  The
    pairing must be a bijection between the purely periodic labels of the two
    sides; any miss or ambiguity raises PairingError rather than guessing.
    """
    _require_binary_mixing(t, "periodic boundary codes")
    s_words = _periodic_side_words(t)
    u_words = _periodic_side_words(inverse(t))

    codes: list[PeriodicBoundaryCode] = []
    claimed: dict[BoundaryLabel, BoundaryLabel] = {}
    for a, wa in s_words.items():
        p = len(wa)
        want = tuple(wa[(-m) % p] for m in range(p))
        cands = [b for b, wb in u_words.items() if wb == want]
        if not cands:
            raise PairingError(
                f"no matching u-label for s-label {tuple(a)} with periodic word {wa}"
            )
        if len(cands) > 1:
            raise PairingError(
                f"ambiguous u-partners for s-label {tuple(a)}: "
                f"{sorted(tuple(b) for b in cands)}"
            )
        b = cands[0]
        if b in claimed:
            raise PairingError(
                f"u-label {tuple(b)} claimed by s-labels "
                f"{tuple(claimed[b])} and {tuple(a)}"
            )
        claimed[b] = a
        codes.append(PeriodicBoundaryCode(wa, a.eps, b.eps))
    unmatched = [b for b in u_words if b not in claimed]
    if unmatched:
        raise PairingError(
            f"u-labels without s-partners: {sorted(tuple(b) for b in unmatched)}"
        )
    return tuple(sorted(codes))


def has_corner_property(t: GeometricType) -> bool:
    """Whether every periodic side word is carried on both sides.

    Equivalent to the side pairing succeeding as a full bijection.
    """
    try:
        periodic_boundary_codes(t)
    except PairingError:
        return False
    return True


@dataclass(frozen=True, order=True)
class PeriodicOrbit:
    """A primitive cyclic rectangle word, stored as its least rotation."""

    word: tuple[int, ...]

    @property
    def period(self) -> int:
        return len(self.word)


def make_orbit(t: GeometricType, word: Iterable[int]) -> PeriodicOrbit:
    """Canonicalize a cyclic word and check admissibility and primitivity."""
    w = tuple(int(x) for x in word)
    if not w:
        raise GeometricTypeError("orbit word must be nonempty")
    for x in w:
        if not 1 <= x <= t.n:
            raise GeometricTypeError(f"orbit symbol {x} out of range 1..{t.n}")
    a = incidence_matrix(t)
    for idx in range(len(w)):
        src, dst = w[idx], w[(idx + 1) % len(w)]
        if a[src - 1][dst - 1] < 1:
            raise GeometricTypeError(
                f"orbit word not admissible at step {idx}: {src}->{dst}"
            )
    if primitive_root(w) != w:
        raise GeometricTypeError(f"orbit word {w} is not primitive")
    return PeriodicOrbit(least_rotation(w))


def _coerce_orbit(t: GeometricType, orbit) -> PeriodicOrbit:
    if isinstance(orbit, PeriodicOrbit):
        return orbit
    return make_orbit(t, orbit)


def enumerate_periodic_orbits(
    t: GeometricType, period_bound: int, cap: int = 12
) -> tuple[PeriodicOrbit, ...]:
    """All primitive admissible cyclic words of length <= period_bound.

    One representative per rotation class (the least rotation), returned in
    (length, word) order.  The bound is capped to keep the enumeration's
    exponential growth an explicit opt-in.
    """
    if not is_binary(t):
        raise GeometricTypeError("orbit enumeration needs a binary incidence matrix")
    if period_bound < 1:
        raise GeometricTypeError("period bound must be positive")
    if period_bound > cap:
        raise GeometricTypeError(f"period bound {period_bound} exceeds cap {cap}")
    a = incidence_matrix(t)
    n = t.n
    adj = {
        i: tuple(k for k in range(1, n + 1) if a[i - 1][k - 1])
        for i in range(1, n + 1)
    }
    found: set[PeriodicOrbit] = set()
    for length in range(1, period_bound + 1):
        for start in range(1, n + 1):
            # Canonical representatives start at their minimal symbol, so the
            # search never needs symbols below the start.
            stack: list[tuple[int, ...]] = [(start,)]
            while stack:
                w = stack.pop()
                if len(w) == length:
                    if (
                        a[w[-1] - 1][start - 1]
                        and least_rotation(w) == w
                        and primitive_root(w) == w
                    ):
                        found.add(PeriodicOrbit(w))
                    continue
                for nxt in adj[w[-1]]:
                    if nxt >= start:
                        stack.append(w + (nxt,))
    return tuple(sorted(found, key=lambda o: (len(o.word), o.word)))


def is_s_boundary_orbit(t: GeometricType, orbit) -> bool:
    """Whether the orbit word is the periodic tail of some horizontal side code."""
    orb = _coerce_orbit(t, orbit)
    for lab in boundary_labels(t):
        code = s_boundary_code(t, lab)
        root = primitive_root(code.period)
        if len(root) == len(orb.word) and least_rotation(root) == orb.word:
            return True
    return False


def is_u_boundary_orbit(t: GeometricType, orbit) -> bool:
    """Whether the orbit word, read backward, tails some vertical side code."""
    orb = _coerce_orbit(t, orbit)
    inv = inverse(t)
    return is_s_boundary_orbit(inv, make_orbit(inv, tuple(reversed(orb.word))))
