"""Interval-order machinery and the four refinements (s, u, corner, joint).

Cutting every rectangle along the full-width stable segments of a family of
periodic orbits yields a finer Markov structure whose geometric type is
computable purely combinatorially.  Each rectangle i splits into a stack of
slabs, one more than the number of cut segments it hosts; each horizontal
cell of i meets a contiguous range of slabs and is subdivided so that every
sub-cell maps onto exactly one (slab, vertical strip) pair of the target.

The vertical mirror (u side) is the same construction on the inverse type
with orbit words reversed, and the corner refinement composes the two until
every periodic side itinerary is carried on both sides.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, replace
from math import lcm
from typing import Iterable, NamedTuple, Optional, Union

from .core import (
    GeometricType,
    GeometricTypeError,
    incidence_matrix,
    inverse,
    is_binary,
    is_mixing,
    make_type,
)
from .symbolic import (
    BoundaryLabel,
    PeriodicOrbit,
    _periodic_side_words,
    enumerate_periodic_orbits,
    is_s_boundary_orbit,
    least_rotation,
    make_orbit,
)

__all__ = [
    "ShiftedCode",
    "RefinedRectangle",
    "RefinementBookkeeping",
    "InvariantComparison",
    "unique_j",
    "interchange_delta",
    "interval_order",
    "s_refine",
    "u_refine",
    "corner_refine",
    "bounded_corner_refine",
    "joint_refine",
    "compare_invariants",
    "lift_orbit_through_s_refinement",
    "max_boundary_period",
    "perron_root",
]

OrbitLike = Union[PeriodicOrbit, Iterable[int]]


class ShiftedCode(NamedTuple):
    """One cut segment: a periodic orbit viewed from shift t.

    The segment lives on rectangle ``orbit.word[t]`` and maps onto the
    segment of the advanced shift.
    """

    t: int
    orbit: PeriodicOrbit

    @property
    def host(self) -> int:
        return self.orbit.word[self.t]

    def advance(self) -> "ShiftedCode":
        return ShiftedCode((self.t + 1) % len(self.orbit.word), self.orbit)

    def symbol(self, m: int) -> int:
        w = self.orbit.word
        return w[(self.t + m) % len(w)]


def _as_orbit(t: GeometricType, orbit: OrbitLike) -> PeriodicOrbit:
    word = orbit.word if isinstance(orbit, PeriodicOrbit) else tuple(orbit)
    return make_orbit(t, word)


def unique_j(t: GeometricType, orbit: OrbitLike, shift: int) -> int:
    """The single horizontal cell of rectangle w_t whose image lies in w_{t+1}."""
    if not is_binary(t):
        raise GeometricTypeError("unique_j needs a binary incidence matrix")
    orb = _as_orbit(t, orbit)
    p = len(orb.word)
    src = orb.word[shift % p]
    dst = orb.word[(shift + 1) % p]
    for j in range(1, t.h(src) + 1):
        if t.image(src, j)[0] == dst:
            return j
    raise GeometricTypeError(
        f"no cell of rectangle {src} maps into rectangle {dst}"
    )  # unreachable for admissible orbits


def _as_shifted(t: GeometricType, code) -> ShiftedCode:
    if isinstance(code, ShiftedCode):
        return code
    shift, orbit = code
    orb = _as_orbit(t, orbit)
    return ShiftedCode(shift % len(orb.word), orb)


def _first_disagreement(sc1: ShiftedCode, sc2: ShiftedCode) -> int:
    """Least m >= 1 where the two shifted words differ; error if identical."""
    bound = lcm(len(sc1.orbit.word), len(sc2.orbit.word))
    for m in range(1, bound + 1):
        if sc1.symbol(m) != sc2.symbol(m):
            return m
    raise GeometricTypeError(f"identical codes: {sc1} vs {sc2}")


def interchange_delta(t: GeometricType, first, second) -> int:
    """Orientation sign accumulated before two cut segments first disagree.

    +1 when the segments' vertical order agrees with the cell order at the
    disagreement step, -1 when the intervening flips reverse it.
    """
    sc1 = _as_shifted(t, first)
    sc2 = _as_shifted(t, second)
    if sc1.host != sc2.host:
        raise GeometricTypeError(
            f"shifted codes live on different rectangles: {sc1.host} vs {sc2.host}"
        )
    m = _first_disagreement(sc1, sc2)
    if m == 1:
        return 1
    sign = 1
    for step in range(m - 1):
        src = sc1.symbol(step)
        j = unique_j(t, sc1.orbit, sc1.t + step)
        sign *= t.image(src, j)[2]
    return sign


def _compare_shifted(
    t: GeometricType, jcache: dict, sc1: ShiftedCode, sc2: ShiftedCode
) -> int:
    """-1 when sc1's segment sits below sc2's, +1 above."""
    m = _first_disagreement(sc1, sc2)
    sign = 1
    for step in range(m - 1):
        src = sc1.symbol(step)
        sign *= t.image(src, jcache[ShiftedCode((sc1.t + step) % len(sc1.orbit.word), sc1.orbit)])[2]
    j1 = jcache[ShiftedCode((sc1.t + m - 1) % len(sc1.orbit.word), sc1.orbit)]
    j2 = jcache[ShiftedCode((sc2.t + m - 1) % len(sc2.orbit.word), sc2.orbit)]
    if j1 == j2:
        raise GeometricTypeError(
            "cut comparison tie: distinct codes share a cell at the "
            f"disagreement step ({sc1} vs {sc2})"
        )
    below = (j1 < j2) if sign == 1 else (j1 > j2)
    return -1 if below else 1


def _families(t: GeometricType, orbits: Iterable[OrbitLike]):
    """Dedup the family and split off the side-boundary no-ops."""
    family: list[PeriodicOrbit] = []
    skipped: list[PeriodicOrbit] = []
    seen: set[PeriodicOrbit] = set()
    for w in orbits:
        orb = _as_orbit(t, w)
        if orb in seen:
            continue
        seen.add(orb)
        if is_s_boundary_orbit(t, orb):
            skipped.append(orb)
        else:
            family.append(orb)
    family.sort()
    skipped.sort()
    return family, skipped


def _jcache(t: GeometricType, family) -> dict[ShiftedCode, int]:
    cache: dict[ShiftedCode, int] = {}
    for orb in family:
        p = len(orb.word)
        for shift in range(p):
            src, dst = orb.word[shift], orb.word[(shift + 1) % p]
            for j in range(1, t.h(src) + 1):
                if t.image(src, j)[0] == dst:
                    cache[ShiftedCode(shift, orb)] = j
                    break
            else:
                raise GeometricTypeError(
                    f"orbit {orb.word} loses admissibility at shift {shift}"
                )
    return cache


def _ordered_cuts(t: GeometricType, family, jcache):
    """Per rectangle: its hosted cut segments, bottom to top."""
    hosted: dict[int, list[ShiftedCode]] = {i: [] for i in range(1, t.n + 1)}
    for orb in family:
        for shift in range(len(orb.word)):
            sc = ShiftedCode(shift, orb)
            hosted[sc.host].append(sc)
    cuts = []
    for i in range(1, t.n + 1):
        key = functools.cmp_to_key(
            lambda a, b: _compare_shifted(t, jcache, a, b)
        )
        lst = sorted(hosted[i], key=key)
        if len(lst) <= 32:
            # The comparator must be a strict total order; spot-check it.
            for p in range(len(lst)):
                for q in range(p + 1, len(lst)):
                    if _compare_shifted(t, jcache, lst[p], lst[q]) != -1:
                        raise AssertionError(
                            f"cut order inconsistent on rectangle {i}: "
                            f"{lst[p]} vs {lst[q]}"
                        )
        cuts.append(tuple(lst))
    return tuple(cuts)


def interval_order(t: GeometricType, orbits: Iterable[OrbitLike], i: int):
    """The bottom-to-top stack of cut segments on rectangle i.

    Returns the two box sides as sentinels: position 0 is the lower side,
    the last position the upper side, with the hosted cut segments between.
    """
    if not is_binary(t):
        raise GeometricTypeError("interval order needs a binary incidence matrix")
    if not 1 <= i <= t.n:
        raise GeometricTypeError(f"rectangle {i} out of range 1..{t.n}")
    family, skipped = _families(t, orbits)
    if skipped:
        raise GeometricTypeError(
            f"side-boundary orbits have no interior segment: "
            f"{[o.word for o in skipped]}"
        )
    jcache = _jcache(t, family)
    cuts = _ordered_cuts(t, family, jcache)
    return (BoundaryLabel(i, -1), *cuts[i - 1], BoundaryLabel(i, 1))


@dataclass(frozen=True)
class RefinedRectangle:
    """One output slab: parent rectangle, vertical slot, and its pieces."""

    rectangle: int
    slot: int
    new_label: int
    lower: object  # ShiftedCode or BoundaryLabel box side
    upper: object
    strips: tuple[int, ...]
    cases: tuple[tuple[int, str], ...]  # (parent cell j, case tag)


@dataclass(frozen=True)
class RefinementBookkeeping:
    """Everything needed to relabel back and forth across one refinement."""

    side: str  # "s" or "u"
    orbits: tuple[PeriodicOrbit, ...]
    skipped: tuple[PeriodicOrbit, ...]
    cuts: tuple[tuple[ShiftedCode, ...], ...]  # per source rectangle
    counts: tuple[int, ...]  # slabs per source rectangle
    rows: tuple[RefinedRectangle, ...]

    @functools.cached_property
    def _offsets(self) -> tuple[int, ...]:
        offs = [0]
        for c in self.counts:
            offs.append(offs[-1] + c)
        return tuple(offs)

    def label(self, i: int, s: int) -> int:
        """New label of slab s (1-based, bottom to top) of source rectangle i."""
        if not 1 <= i <= len(self.counts):
            raise GeometricTypeError(f"rectangle {i} out of range")
        if not 1 <= s <= self.counts[i - 1]:
            raise GeometricTypeError(
                f"slot {s} out of range 1..{self.counts[i - 1]} on rectangle {i}"
            )
        return self._offsets[i - 1] + s

    @functools.cached_property
    def _positions(self) -> dict[ShiftedCode, tuple[int, int]]:
        pos = {}
        for i, lst in enumerate(self.cuts, start=1):
            for idx, sc in enumerate(lst, start=1):
                pos[sc] = (i, idx)
        return pos

    def position(self, code) -> tuple[int, int]:
        """(host rectangle, stack position 1..O_i) of a cut segment."""
        sc = code if isinstance(code, ShiftedCode) else ShiftedCode(*code)
        try:
            return self._positions[sc]
        except KeyError:
            raise GeometricTypeError(f"{sc} is not a cut of this refinement") from None

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "orbits": [list(o.word) for o in self.orbits],
            "skipped_boundary_orbits": [list(o.word) for o in self.skipped],
            "rectangles": [
                {"rectangle": r.rectangle, "slot": r.slot, "new_label": r.new_label}
                for r in self.rows
            ],
        }


def s_refine(
    t: GeometricType, orbits: Iterable[OrbitLike]
) -> tuple[GeometricType, RefinementBookkeeping]:
    """Cut along the stable segments of a family of periodic orbits.

    Side-boundary orbits are dropped (their segments already lie on slab
    boundaries).  The output always validates; with an empty effective family
    it equals the input.
    """
    if not is_binary(t):
        raise GeometricTypeError("s-refinement needs a binary incidence matrix")
    family, skipped = _families(t, orbits)
    jcache = _jcache(t, family)
    cuts = _ordered_cuts(t, family, jcache)
    counts = tuple(len(c) + 1 for c in cuts)
    offs = [0]
    for c in counts:
        offs.append(offs[-1] + c)

    def label(i: int, s: int) -> int:
        return offs[i - 1] + s

    hv: list[tuple[int, int]] = []
    phi: list[tuple[int, int, int, int, int]] = []
    rows: list[RefinedRectangle] = []
    for i in range(1, t.n + 1):
        big_o = len(cuts[i - 1])
        for s in range(1, big_o + 2):
            r = label(i, s)
            lower_cut = cuts[i - 1][s - 2] if s >= 2 else None
            upper_cut = cuts[i - 1][s - 1] if s <= big_o else None
            j_lo = jcache[lower_cut] if lower_cut is not None else 1
            j_hi = jcache[upper_cut] if upper_cut is not None else t.h(i)
            if j_lo > j_hi:
                raise AssertionError(
                    f"slab {s} of rectangle {i} spans no cell: {j_lo}..{j_hi}"
                )
            strips = tuple(range(j_lo, j_hi + 1))
            cases: list[tuple[int, str]] = []
            total = 0
            for j in strips:
                k, l, e = t.image(i, j)
                target_o = len(cuts[k - 1])
                low_is_cut = lower_cut is not None and jcache[lower_cut] == j
                up_is_cut = upper_cut is not None and jcache[upper_cut] == j
                if low_is_cut:
                    adv = lower_cut.advance()
                    # the advanced segment must land in the image rectangle
                    if adv.host != k:
                        raise AssertionError(
                            f"cut {lower_cut} advances into rectangle {adv.host},"
                            f" expected {k}"
                        )
                    m_low = _position_of(cuts, adv, k)
                else:
                    m_low = 0 if e == 1 else target_o + 1
                if up_is_cut:
                    adv = upper_cut.advance()
                    if adv.host != k:
                        raise AssertionError(
                            f"cut {upper_cut} advances into rectangle {adv.host},"
                            f" expected {k}"
                        )
                    m_up = _position_of(cuts, adv, k)
                else:
                    m_up = target_o + 1 if e == 1 else 0
                a, b = (m_low, m_up) if e == 1 else (m_up, m_low)
                hbar = b - a
                if hbar < 1:
                    raise AssertionError(
                        f"empty image span for cell ({i},{j}) in slab {s}:"
                        f" markers {a}..{b}"
                    )
                for piece in range(1, hbar + 1):
                    slab = a + piece if e == 1 else b - piece + 1
                    total += 1
                    phi.append((r, total, label(k, slab), l, e))
                if j_lo == j_hi:
                    tag = "I"
                elif not low_is_cut and not up_is_cut:
                    tag = "II"
                else:
                    tag = "III"
                cases.append((j, tag))
            hv.append((total, t.v(i)))
            rows.append(
                RefinedRectangle(
                    rectangle=i,
                    slot=s,
                    new_label=r,
                    lower=lower_cut if lower_cut is not None else BoundaryLabel(i, -1),
                    upper=upper_cut if upper_cut is not None else BoundaryLabel(i, 1),
                    strips=strips,
                    cases=tuple(cases),
                )
            )
    refined = make_type(hv, phi)
    bookkeeping = RefinementBookkeeping(
        side="s",
        orbits=tuple(family),
        skipped=tuple(skipped),
        cuts=cuts,
        counts=counts,
        rows=tuple(rows),
    )
    return refined, bookkeeping


def _position_of(cuts, sc: ShiftedCode, host: int) -> int:
    lst = cuts[host - 1]
    for idx, other in enumerate(lst, start=1):
        if other == sc:
            return idx
    raise AssertionError(f"advanced cut {sc} missing from rectangle {host}")


def u_refine(
    t: GeometricType, orbits: Iterable[OrbitLike]
) -> tuple[GeometricType, RefinementBookkeeping]:
    """Cut along unstable segments: the stable construction on the inverse.

    Orbit words transport to the inverse type by reversal; u-boundary orbits
    are dropped by the mirrored filter automatically.
    """
    inv = inverse(t)
    transported = []
    for w in orbits:
        orb = _as_orbit(t, w)
        transported.append(make_orbit(inv, tuple(reversed(orb.word))))
    refined_inv, bookkeeping = s_refine(inv, transported)
    return inverse(refined_inv), replace(bookkeeping, side="u")


def _boundary_orbit_words(t: GeometricType) -> set[tuple[int, ...]]:
    """Orbit words (least rotation) carried by either side's periodic labels."""
    words = {least_rotation(w) for w in _periodic_side_words(t).values()}
    for w in _periodic_side_words(inverse(t)).values():
        words.add(least_rotation(tuple(reversed(w))))
    return words


def max_boundary_period(t: GeometricType) -> int:
    """Largest primitive period among the type's periodic side itineraries."""
    return max(len(w) for w in _boundary_orbit_words(t))


def corner_refine(t: GeometricType) -> GeometricType:
    """Refine until every periodic side itinerary is carried on both sides.

    Stable cuts first, along every side-periodic word (the ones already on
    the stable side drop out); then unstable cuts along the intermediate
    type's stable-periodic words.  On a type that already has the corner
    property both stages are no-ops.
    """
    if not is_binary(t):
        raise GeometricTypeError("corner refinement needs a binary incidence matrix")
    mixing, _ = is_mixing(t)
    if not mixing:
        raise GeometricTypeError("corner refinement needs a mixing type")
    stage1 = sorted(_boundary_orbit_words(t))
    t1, _ = s_refine(t, stage1)
    stage2 = sorted(
        {least_rotation(w) for w in _periodic_side_words(t1).values()}
    )
    t2, _ = u_refine(t1, stage2)
    return t2


def bounded_corner_refine(t: GeometricType, period_bound: int) -> GeometricType:
    """Cut along all periodic orbits up to a period bound, then corner-refine.

    The bound must dominate every boundary-code period so that the corner
    stage does not reintroduce shorter uncut words.
    """
    if not is_binary(t):
        raise GeometricTypeError("bounded corner refinement needs a binary incidence matrix")
    mixing, _ = is_mixing(t)
    if not mixing:
        raise GeometricTypeError("bounded corner refinement needs a mixing type")
    needed = max_boundary_period(t)
    if period_bound < needed:
        raise GeometricTypeError(
            f"period bound {period_bound} is below the largest boundary-code "
            f"period {needed}"
        )
    orbits = enumerate_periodic_orbits(t, period_bound)
    t1, _ = s_refine(t, orbits)
    return corner_refine(t1)


def joint_refine(
    t_first: GeometricType, t_second: GeometricType
) -> tuple[GeometricType, GeometricType]:
    """Refine two types to the common period bound of their boundary codes."""
    bound = max(max_boundary_period(t_first), max_boundary_period(t_second))
    return (
        bounded_corner_refine(t_first, bound),
        bounded_corner_refine(t_second, bound),
    )


def perron_root(t: GeometricType) -> float:
    """Spectral radius of the incidence matrix (the expansion factor)."""
    import numpy as np

    a = np.array(incidence_matrix(t), dtype=float)
    return float(max(abs(np.linalg.eigvals(a))))


@dataclass(frozen=True)
class InvariantComparison:
    """Necessary-condition comparison of two pseudo-Anosov candidates."""

    left: object  # SingularityReport
    right: object
    left_dilatation: float
    right_dilatation: float
    verdict: str

    def to_json(self) -> dict:
        return {
            "left": self.left.to_json() | {"dilatation": self.left_dilatation},
            "right": self.right.to_json() | {"dilatation": self.right_dilatation},
            "verdict": self.verdict,
        }


def compare_invariants(
    t_first: GeometricType, t_second: GeometricType
) -> InvariantComparison:
    """Compare conjugacy invariants of two types.

    Caller's duty: both types must already be accepted by the pseudo-Anosov
    decision.  Genus, the singular prong census, the spine count and the
    expansion factor are all preserved by conjugacy, so any mismatch proves
    the types realize different maps; agreement is only ever inconclusive.
    """
    from .singular import genus

    left = genus(t_first)
    right = genus(t_second)
    lam1 = perron_root(t_first)
    lam2 = perron_root(t_second)
    distinct = (
        left.genus != right.genus
        or left.prongs != right.prongs
        or left.spine_count != right.spine_count
        or abs(lam1 - lam2) > 1e-9
    )
    return InvariantComparison(
        left=left,
        right=right,
        left_dilatation=lam1,
        right_dilatation=lam2,
        verdict=("necessarily distinct" if distinct else
                 "compatible (inconclusive — strong equivalence not decided)"),
    )


def lift_orbit_through_s_refinement(
    t: GeometricType,
    orbits: Iterable[OrbitLike],
    orbit: OrbitLike,
    refinement: Optional[tuple[GeometricType, RefinementBookkeeping]] = None,
) -> tuple[PeriodicOrbit, PeriodicOrbit]:
    """Follow one cut orbit into the refined alphabet, on both sides.

    The cut segment is a slab boundary; the refined itinerary of its point
    hugs either the slab below or the slab above, switching sides at every
    orientation-reversing step.  With an even number of flips around the
    orbit the two runs close after one period each; with an odd number they
    close after two periods and describe the same refined orbit.
    """
    orb = _as_orbit(t, orbit)
    if refinement is None:
        refinement = s_refine(t, orbits)
    refined, bookkeeping = refinement
    if orb not in bookkeeping.orbits:
        raise GeometricTypeError(
            f"orbit {orb.word} contributed no cuts (side-boundary or absent)"
        )
    p = len(orb.word)
    signs = []
    for shift in range(p):
        j = unique_j(t, orb, shift)
        signs.append(t.image(orb.word[shift], j)[2])
    total = 1
    for e in signs:
        total *= e
    steps = p if total == 1 else 2 * p

    def run(start_upper: bool) -> PeriodicOrbit:
        word = []
        upper = start_upper
        for step in range(steps):
            sc = ShiftedCode(step % p, orb)
            host, pos = bookkeeping.position(sc)
            word.append(bookkeeping.label(host, pos + (1 if upper else 0)))
            if signs[step % p] == -1:
                upper = not upper
        return make_orbit(refined, word)

    return run(False), run(True)
