"""Singularity census: group periodic side codes into point classes, count
prongs and spines, and compute the genus of the carrying surface.

Each fully periodic side code is one quadrant of a periodic point sitting on
partition boundaries.  Two quadrants touch across a stable leaf exactly when
their carrying side labels are identified in the surface.  Every such
identification is seeded by the image of an interior horizontal edge (the
shared edge of two vertically consecutive cells lands on the two seed labels
at once) and keeps holding under iteration, so the full identification set
is the forward closure of the seeds under the side itinerary map.  The
unstable test is the mirrored one on the inverse type.  The identifications
chain the quadrants of one point into a single alternating cycle, so each
class has even size 2k and describes a k-prong point: k = 1 is a spine,
k = 2 a regular point, k >= 3 a genuine singularity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import horizontal_type
from .core import GeometricType, GeometricTypeError, inverse, is_binary
from .refine import corner_refine
from .symbolic import (
    BoundaryLabel,
    PeriodicBoundaryCode,
    gamma,
    has_corner_property,
    periodic_boundary_codes,
)

__all__ = [
    "SingularityClass",
    "SingularityReport",
    "s_adjacent",
    "u_adjacent",
    "singularity_classes",
    "genus",
    "prepare_for_census",
]


@lru_cache(maxsize=64)
def _stable_identifications(
    t: GeometricType,
) -> frozenset[tuple[BoundaryLabel, BoundaryLabel]]:
    """All side-label pairs glued along some stable boundary segment.

    Seeds: for vertically consecutive cells (i, j), (i, j+1) the image of
    their shared edge lies on the lower cell's image side and, at once, on
    the flip of the upper cell's image side.  A glued pair stays glued after
    one more step of the map, so the seed set is closed under the joint side
    itinerary; the closure runs over a finite square of labels and stops as
    soon as nothing new appears.
    """
    seeds: set[tuple[BoundaryLabel, BoundaryLabel]] = set()
    for i in range(1, t.n + 1):
        for j in range(1, t.h(i)):
            k1, _, e1 = t.image(i, j)
            k2, _, e2 = t.image(i, j + 1)
            seeds.add((BoundaryLabel(k1, e1), BoundaryLabel(k2, -e2)))
    closed: set[tuple[BoundaryLabel, BoundaryLabel]] = set()
    frontier = seeds
    while frontier:
        fresh = frontier - closed
        closed |= fresh
        frontier = {(gamma(t, a), gamma(t, b)) for a, b in fresh}
    return frozenset(closed)


def s_adjacent(
    t: GeometricType, a: PeriodicBoundaryCode, b: PeriodicBoundaryCode
) -> bool:
    """Whether two codes meet across a stable identification.

    True when the two carrying horizontal side labels form a glued pair, in
    either order.  Gluings seeded by interior edges far from the periodic
    point still count: they propagate forward to the carrying labels, which
    is what the closure in _stable_identifications records.
    """
    la, lb = a.s_label, b.s_label
    if la == lb:
        return False
    pairs = _stable_identifications(t)
    return (la, lb) in pairs or (lb, la) in pairs


def _u_view(code: PeriodicBoundaryCode) -> PeriodicBoundaryCode:
    """The same code seen from the inverse type's stable side."""
    return PeriodicBoundaryCode(
        word=code.u_word(), s_eps=code.u_eps, u_eps=code.s_eps
    )


@lru_cache(maxsize=64)
def _inverse_cached(t: GeometricType) -> GeometricType:
    return inverse(t)


def u_adjacent(
    t: GeometricType, a: PeriodicBoundaryCode, b: PeriodicBoundaryCode
) -> bool:
    """Stable adjacency of the mirrored codes on the inverse type."""
    return s_adjacent(_inverse_cached(t), _u_view(a), _u_view(b))


@dataclass(frozen=True)
class SingularityClass:
    """One boundary periodic point: its quadrant codes and prong count."""

    codes: tuple[PeriodicBoundaryCode, ...]

    @property
    def size(self) -> int:
        return len(self.codes)

    @property
    def prongs(self) -> int:
        return len(self.codes) // 2

    @property
    def spine(self) -> bool:
        return self.prongs == 1

    @property
    def regular(self) -> bool:
        return self.prongs == 2


def prepare_for_census(t: GeometricType) -> GeometricType:
    """Adapt a type for the singularity census.

    The census needs a binary incidence matrix and the corner property;
    non-binary inputs are cell-split first and non-corner inputs are
    corner-refined.  Both adaptations present the same underlying map.
    """
    if not is_binary(t):
        t = horizontal_type(t)
    if not has_corner_property(t):
        t = corner_refine(t)
    return t


def _partner_map(t: GeometricType, codes, adjacent, kind: str):
    partners = {}
    for a in codes:
        mates = [b for b in codes if b != a and adjacent(t, a, b)]
        if len(mates) != 1:
            detail = [(list(b.word), b.s_eps, b.u_eps) for b in mates]
            raise GeometricTypeError(
                f"code {(list(a.word), a.s_eps, a.u_eps)} has "
                f"{len(mates)} {kind}-partners, expected exactly one: {detail}"
            )
        partners[a] = mates[0]
    # an identification is mutual by construction; check anyway
    for a, b in partners.items():
        if partners[b] != a:
            raise GeometricTypeError(
                f"{kind}-partnering is not an involution at {list(a.word)}"
            )
    return partners


def singularity_classes(t: GeometricType) -> tuple[SingularityClass, ...]:
    """Connected classes of periodic side codes under both adjacencies.

    The input should carry a pseudo-Anosov map (caller's duty — the decision
    procedure is not re-run here); it is adapted via prepare_for_census.
    Every code must have exactly one stable and one unstable partner, the
    classes must be even — violations abort with diagnostics.
    """
    t = prepare_for_census(t)
    codes = periodic_boundary_codes(t)
    s_partner = _partner_map(t, codes, s_adjacent, "s")
    u_partner = _partner_map(t, codes, u_adjacent, "u")

    classes: list[SingularityClass] = []
    seen: set[PeriodicBoundaryCode] = set()
    for start in codes:
        if start in seen:
            continue
        # walk the alternating cycle: s-edge, u-edge, s-edge, ...
        members = [start]
        seen.add(start)
        cur, use_s = start, True
        while True:
            cur = s_partner[cur] if use_s else u_partner[cur]
            use_s = not use_s
            if cur == start and use_s:
                break
            if cur not in seen:
                members.append(cur)
                seen.add(cur)
            if len(members) > len(codes):
                raise GeometricTypeError(
                    "alternating walk failed to close; partner maps inconsistent"
                )
        if len(members) % 2 != 0:
            raise GeometricTypeError(
                f"odd class size {len(members)} at code {list(start.word)}"
            )
        classes.append(SingularityClass(tuple(sorted(members))))
    return tuple(sorted(classes, key=lambda c: c.codes))


@dataclass(frozen=True)
class SingularityReport:
    """Census outcome: classes, non-regular prong multiset, spines, genus."""

    classes: tuple[SingularityClass, ...]
    prongs: tuple[int, ...]  # k for every non-regular class, sorted
    spine_count: int
    euler_characteristic: Fraction
    genus: int

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "euler_characteristic_quarters": int(self.euler_characteristic * 4),
            "classes": [
                {"size": c.size, "prongs": c.prongs, "spine": c.spine}
                for c in self.classes
            ],
            "spine_count": self.spine_count,
            "singular_prongs": list(self.prongs),
        }


def genus(t: GeometricType) -> SingularityReport:
    """Full singularity census plus the genus it forces.

    Each class of size 2k contributes 1 - k/2 to the Euler characteristic
    (regular k = 2 classes contribute nothing); the genus then comes from
    chi = 2 - 2g and must land on a non-negative integer.
    """
    classes = singularity_classes(t)
    chi = Fraction(0)
    for c in classes:
        chi += 1 - Fraction(c.size, 4)
    genus_fraction = (2 - chi) / 2
    if genus_fraction.denominator != 1 or genus_fraction < 0:
        raise GeometricTypeError(
            f"census gives non-realizable genus {genus_fraction} "
            f"(chi = {chi}); class sizes: {[c.size for c in classes]}"
        )
    return SingularityReport(
        classes=classes,
        prongs=tuple(sorted(c.prongs for c in classes if not c.regular)),
        spine_count=sum(1 for c in classes if c.spine),
        euler_characteristic=chi,
        genus=int(genus_fraction),
    )
