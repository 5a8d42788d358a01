"""Literal reference implementations of the obstruction tests.

Each predicate here is a direct transcription of the defining clause lists,
evaluated by exhaustive loops.  They are quadratic (or worse) in the number
of cells and exist as independent oracles: the accelerated scanners in
`paclass` are property-tested against these on random types, and reported
witnesses are re-checked against the clause predicates.
"""

from __future__ import annotations

from .core import GeometricType


def consecutive_pairs(t: GeometricType):
    """All ((i, j), (i, j+1)) with their images: (i, j, lower_image, upper_image)."""
    out = []
    for i in range(1, t.n + 1):
        for j in range(1, t.h(i)):
            out.append((i, j, t.image(i, j), t.image(i, j + 1)))
    return out


# -- first obstruction: nested span with an inner cell escaping sideways ----

def type1_clause(a_low, a_up, b_low, b_up) -> bool:
    """Clause list for one ordered choice of outer pair (a) and inner pair (b).

    The outer pair's two images sit at the extreme positions of a span of at
    least three positions inside one rectangle, with opposite signs arranged
    so both cells approach their shared edge from the same side; one member
    of the inner pair lands strictly inside the span approaching from that
    same side, while its partner lands outside the span entirely.
    """
    ka1, la1, ea1 = a_low
    ka2, la2, ea2 = a_up
    if ka1 != ka2:
        return False
    k = ka1
    l0, l2 = min(la1, la2), max(la1, la2)
    if l2 - l0 < 2:
        return False

    def outside(kb, lb):
        return kb != k or lb < l0 or lb > l2

    def inner(cell, partner, want_sign):
        kb, lb, eb = cell
        kp, lp, _ep = partner
        return (kb == k and l0 < lb < l2 and eb == want_sign
                and outside(kp, lp))

    # Both orderings of the outer images (low-high and high-low) share the
    # same sign patterns.
    if ea1 == 1 and ea2 == -1:
        return inner(b_low, b_up, 1) or inner(b_up, b_low, -1)
    if ea1 == -1 and ea2 == 1:
        return inner(b_low, b_up, -1) or inner(b_up, b_low, 1)
    return False


def satisfies_type1(t: GeometricType):
    """Search every ordered pair of consecutive-cell pairs; return a witness
    ((i, j), (i', j')) or None."""
    pairs = consecutive_pairs(t)
    for (ia, ja, al, au) in pairs:
        for (ib, jb, bl, bu) in pairs:
            if type1_clause(al, au, bl, bu):
                return ((ia, ja), (ib, jb))
    return None


# -- second obstruction: two pairs whose images interleave as a linked cross -

def type2_clause(a_low, a_up, b_low, b_up) -> bool:
    """Clause list for ordered pairs a, b.

    Pair a contributes images (k1, m1) below and (k2, l2) above; pair b must
    contribute (k1, m2) and (k2, l1) with m1 < m2 and l1 < l2 (in one of the
    two member orders), all four labels pairwise distinct, and signs matching
    one of the four allowed patterns.
    """
    k1, m1, ea1 = a_low
    k2, l2, ea2 = a_up
    if k1 == k2 and ea1 == -ea2:
        # Both ends of the pair land on a single boundary component; the
        # second obstruction needs two distinct components.
        return False

    def labels_ok(m2, l1):
        if m1 >= m2 or l1 >= l2:
            return False
        labels = {(k1, m1), (k1, m2), (k2, l1), (k2, l2)}
        return len(labels) == 4

    kb1, lb1, eb1 = b_low
    kb2, lb2, eb2 = b_up

    same = ea1 == ea2
    # b in direct order: lower member carries (k1, m2), upper (k2, l1).
    if kb1 == k1 and kb2 == k2 and labels_ok(lb1, lb2):
        if same:
            if eb1 == ea1 and eb2 == ea1:
                return True
        else:
            if eb1 == ea1 and eb2 == ea2:
                return True
    # b in swapped order: lower member carries (k2, l1), upper (k1, m2).
    if kb1 == k2 and kb2 == k1 and labels_ok(lb2, lb1):
        if same:
            if eb1 == -ea1 and eb2 == -ea1:
                return True
        else:
            if eb1 == -ea2 and eb2 == -ea1:
                return True
    return False


def satisfies_type2(t: GeometricType):
    pairs = consecutive_pairs(t)
    for (ia, ja, al, au) in pairs:
        for (ib, jb, bl, bu) in pairs:
            if type2_clause(al, au, bl, bu):
                return ((ia, ja), (ib, jb))
    return None


# -- third obstruction: two strips leaning on one pinned boundary ------------

def pair_ends(low, up):
    """Boundary components carrying the two ends of a pair's image strip.

    The strip between consecutive cells maps to a strip whose ends lie on
    stable boundary components of the target rectangles: the lower member's
    end on the component its own sign selects, the upper member's end on
    the component the negated sign selects.  Returns ((k, side, position),
    (k', side', position')) with side +1 for the component next to the last
    position of the rectangle and -1 for the one next to position 1.
    """
    ka, la, ea = low
    ku, lu, eu = up
    return ((ka, ea, la), (ku, -eu, lu))


def fixed_boundaries(t: GeometricType):
    """Boundary components pinned under the map, as (k, side, own_position).

    A component is pinned when the end cell beside it maps back into its
    own rectangle preserving orientation; own_position is where that image
    lands.  side is -1 for the component beside cell 1 and +1 for the one
    beside cell h(k); a one-cell row can pin both components at once.
    """
    out = []
    for k in range(1, t.n + 1):
        for side, j in ((-1, 1), (1, t.h(k))):
            kk, ll, ee = t.image(k, j)
            if kk == k and ee == 1:
                out.append((k, side, ll))
    return out


def type3_clause(c1, c2, c3, r_low, r_up, rp_low, rp_up) -> bool:
    """Clause for pinned components c1, c2, c3 (c1 != c2) and pairs r, r'.

    Pair r must have one end on c1 (position l1) and the other on c2 (at
    l2); pair r' one end on c1 (at m1) and the other on c3 (at l3); member
    order within each pair is free.  l1 and m1 must differ and sit strictly
    on the same side of c1's own position; l2 must avoid c2's own position;
    l3 must avoid c3's own position and, when c3 coincides with c2 or c1,
    must fall on the far side of that component's own position relative to
    the earlier end there.
    """
    _k1, _s1, L1 = c1
    _k2, _s2, L2 = c2
    _k3, _s3, L3 = c3

    def readings(low, up, ca, cb):
        end_a, end_b = pair_ends(low, up)
        got = []
        if end_a[:2] == ca[:2] and end_b[:2] == cb[:2]:
            got.append((end_a[2], end_b[2]))
        if end_a[:2] == cb[:2] and end_b[:2] == ca[:2]:
            got.append((end_b[2], end_a[2]))
        return got

    for (l1, l2) in readings(r_low, r_up, c1, c2):
        for (m1, l3) in readings(rp_low, rp_up, c1, c3):
            if l1 == L1 or m1 == L1 or l1 == m1 or (l1 < L1) != (m1 < L1):
                continue
            if l2 == L2:
                continue
            if c3 == c2:
                if not ((l2 < L2 < l3) or (l3 < L2 < l2)):
                    continue
            elif c3 == c1:
                if l3 == L1 or (l3 < L1) == (l1 < L1):
                    continue
            else:
                if l3 == L3:
                    continue
            return True
    return False


def satisfies_type3(t: GeometricType):
    fixed = fixed_boundaries(t)
    pairs = consecutive_pairs(t)
    for c1 in fixed:
        for c2 in fixed:
            if c1 == c2:
                continue
            for c3 in fixed:
                for (ir, jr, rl, ru) in pairs:
                    for (ip, jp, pl, pu) in pairs:
                        if type3_clause(c1, c2, c3, rl, ru, pl, pu):
                            return ((ir, jr), (ip, jp), c1, c2, c3)
    return None


# -- impasse: neighbouring cells folding onto neighbouring positions ---------

def has_impasse(t: GeometricType):
    """A pair of consecutive cells whose images land in the same rectangle at
    adjacent positions with opposite signs; returns (i, j) or None."""
    for (i, j, (k1, l1, e1), (k2, l2, e2)) in consecutive_pairs(t):
        if k1 == k2 and abs(l1 - l2) == 1 and e1 == -e2:
            return (i, j)
    return None


# -- per-case refinement formulas (oracle for the marker-based builder) ------

def s_refine_by_cases(t, orbits):
    """Stable refinement computed through the explicit per-case formulas.

    The production builder derives every piece from two boundary markers
    uniformly; this transcription instead dispatches on the classification
    (slab inside one cell / cell inside slab / one cut boundary) and applies
    the case's own count and placement formulas.  Used as an independent
    cross-check: both paths must emit identical types.
    """
    from .core import GeometricTypeError, is_binary, make_type
    from .refine import _families, _jcache, _ordered_cuts, _position_of

    if not is_binary(t):
        raise GeometricTypeError("s-refinement needs a binary incidence matrix")
    family, _skipped = _families(t, orbits)
    jcache = _jcache(t, family)
    cuts = _ordered_cuts(t, family, jcache)
    counts = [len(c) + 1 for c in cuts]
    offs = [0]
    for c in counts:
        offs.append(offs[-1] + c)

    def label(i, s):
        return offs[i - 1] + s

    def edge_marker(target_o, e, lower_end):
        # Box/cell edges land on the target's extreme markers, twisted by e.
        if lower_end:
            return 0 if e == 1 else target_o + 1
        return target_o + 1 if e == 1 else 0

    hv = []
    phi = []
    for i in range(1, t.n + 1):
        big_o = len(cuts[i - 1])
        for s in range(1, big_o + 2):
            r = label(i, s)
            lower_cut = cuts[i - 1][s - 2] if s >= 2 else None
            upper_cut = cuts[i - 1][s - 1] if s <= big_o else None
            j_lo = jcache[lower_cut] if lower_cut is not None else 1
            j_hi = jcache[upper_cut] if upper_cut is not None else t.h(i)
            total = 0
            for j in range(j_lo, j_hi + 1):
                k, l, e = t.image(i, j)
                target_o = len(cuts[k - 1])
                low_is_cut = lower_cut is not None and jcache[lower_cut] == j
                up_is_cut = upper_cut is not None and jcache[upper_cut] == j
                if j_lo == j_hi:
                    # case I: the slab sits inside this single cell; both slab
                    # boundaries (cuts or box sides) bound the piece.
                    if low_is_cut:
                        s_minus = _position_of(cuts, lower_cut.advance(), k)
                    else:
                        s_minus = edge_marker(target_o, e, lower_end=True)
                    if up_is_cut:
                        s_plus = _position_of(cuts, upper_cut.advance(), k)
                    else:
                        s_plus = edge_marker(target_o, e, lower_end=False)
                    if e == 1:
                        hbar = s_plus - s_minus
                        place = lambda piece: s_minus + piece
                    else:
                        hbar = s_minus - s_plus
                        place = lambda piece: s_minus - piece + 1
                elif not low_is_cut and not up_is_cut:
                    # case II: the whole cell lies inside the slab.
                    hbar = target_o + 1
                    if e == 1:
                        place = lambda piece: piece
                    else:
                        place = lambda piece: target_o + 1 - piece + 1
                elif up_is_cut:
                    # case III, cut above: piece runs from the cell's lower
                    # edge up to the cut.
                    s_plus = _position_of(cuts, upper_cut.advance(), k)
                    if e == 1:
                        hbar = s_plus
                        place = lambda piece: piece
                    else:
                        hbar = target_o + 1 - s_plus
                        place = lambda piece: target_o + 1 - piece + 1
                else:
                    # case III, cut below: piece runs from the cut up to the
                    # cell's upper edge.
                    s_minus = _position_of(cuts, lower_cut.advance(), k)
                    if e == 1:
                        hbar = target_o + 1 - s_minus
                        place = lambda piece: s_minus + piece
                    else:
                        hbar = s_minus
                        place = lambda piece: s_minus - piece + 1
                if hbar < 1:
                    raise AssertionError(
                        f"case formulas give empty piece at ({i},{j}), slab {s}"
                    )
                for piece in range(1, hbar + 1):
                    total += 1
                    phi.append((r, total, label(k, place(piece)), l, e))
            hv.append((total, t.v(i)))
    return make_type(hv, phi)
