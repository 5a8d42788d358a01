#!/usr/bin/env python3
"""Rebuild the golden corpus under tests/goldens/ from first principles.

The small fixtures come from literal tables.  The geometric fixtures are
extracted from exact Markov partitions for the cat map [[2, 1], [1, 0]]^2 =
[[2, 1], [1, 1]] acting on the torus, with every coordinate kept in
Q(phi) = {a + b*phi : a, b rational} (phi the golden ratio); no floating
point goes anywhere near the combinatorics.

* t_aw.gt            -- the classical two-rectangle partition of the torus,
                        found by searching stable/unstable webs through the
                        origin and certified rectangle by rectangle.
* t_sq.gt            -- a half-turn-symmetric partition pushed down to the
                        sphere quotient; the four half-lattice branch points
                        become one-pronged spines.
* t_g2.gt            -- a genus-two branched double cover: the binary torus
                        partition refined along a period-two orbit, then
                        doubled across a mod-2 slit joining the orbit points.
* t_fs_refined_12.gt -- library refinement of t_fs along the orbit (1 2).

Every geometric step re-verifies itself with exact certificates: complement
components of a web must be rectangles, class areas must sum to the area of
a fundamental domain, image strips must tile exactly, combinatorics derived
twice (geometrically and by library code) must agree up to relabelling, and
the finished types must pass the decision procedure and singularity census.
The whole build is deterministic, so rebuilding reproduces every file byte
for byte.

Run from the repository root:  PYTHONPATH=src python3 tools/build_goldens.py
"""

from __future__ import annotations

import json
import math
import sys
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from geotype.algebra import horizontal_type
from geotype.core import (
    GeometricType,
    incidence_matrix,
    is_mixing,
    make_type,
    serialize_type,
)
from geotype.paclass import decide_pseudo_anosov
from geotype.refine import s_refine
from geotype.singular import genus
from geotype.symbolic import make_orbit

F = Fraction


class BuildError(Exception):
    """A geometric certificate failed for the current candidate."""


class Degenerate(Exception):
    """A probe segment touched the web; retry with another probe."""


# --------------------------------------------------------------------------
# Exact arithmetic in Q(phi), phi**2 = phi + 1.
# --------------------------------------------------------------------------

class Q5:
    """a + b*phi with rational a, b.  Totally ordered, hashable, exact."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)

    @staticmethod
    def _co(x):
        if isinstance(x, Q5):
            return x
        if isinstance(x, (int, Fraction)):
            return Q5(x)
        return NotImplemented

    def __add__(self, o):
        o = Q5._co(o)
        return NotImplemented if o is NotImplemented else Q5(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = Q5._co(o)
        return NotImplemented if o is NotImplemented else Q5(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        o = Q5._co(o)
        return NotImplemented if o is NotImplemented else o - self

    def __neg__(self):
        return Q5(-self.a, -self.b)

    def __mul__(self, o):
        o = Q5._co(o)
        if o is NotImplemented:
            return NotImplemented
        # (a + b phi)(c + d phi) = ac + bd + (ad + bc + bd) phi
        return Q5(self.a * o.a + self.b * o.b,
                  self.a * o.b + self.b * o.a + self.b * o.b)

    __rmul__ = __mul__

    def inv(self):
        den = self.a * self.a + self.a * self.b - self.b * self.b
        if den == 0:
            raise ZeroDivisionError("inverting zero in Q(phi)")
        return Q5((self.a + self.b) / den, -self.b / den)

    def __truediv__(self, o):
        o = Q5._co(o)
        return NotImplemented if o is NotImplemented else self * o.inv()

    def _sign(self):
        # value = (s + t*sqrt5)/2 with s = 2a + b, t = b
        s = 2 * self.a + self.b
        t = self.b
        if t == 0:
            return (s > 0) - (s < 0)
        if s == 0:
            return 1 if t > 0 else -1
        if s > 0 and t > 0:
            return 1
        if s < 0 and t < 0:
            return -1
        d = s * s - 5 * t * t  # nonzero: sqrt5 is irrational
        if d == 0:
            raise ArithmeticError("impossible: rational square root of 5")
        if s > 0:  # t < 0
            return 1 if d > 0 else -1
        return -1 if d > 0 else 1  # s < 0, t > 0

    def __eq__(self, o):
        o = Q5._co(o)
        return NotImplemented if o is NotImplemented else (self.a == o.a and self.b == o.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, o):
        return (self - o)._sign() < 0

    def __le__(self, o):
        return (self - o)._sign() <= 0

    def __gt__(self, o):
        return (self - o)._sign() > 0

    def __ge__(self, o):
        return (self - o)._sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * ((1 + 5 ** 0.5) / 2)

    def __repr__(self):
        return f"Q5({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*phi"
        return f"{self.a} + {self.b}*phi"


ZERO = Q5(0)
ONE = Q5(1)
PHI = Q5(0, 1)
LAM = Q5(1, 1)    # phi**2, the expansion factor of the cat map
MU = Q5(2, -1)    # phi**-2, the contraction factor
COVOL = Q5(2, 1)  # phi + 2, covolume of the eigenbasis lattice

PHI_F = (1 + 5 ** 0.5) / 2
COVOL_F = PHI_F + 2


def embed(c1, c2):
    """Eigenline coordinates of the torus point (c1, c2).

    X runs along the unstable eigenline, Y along the stable one; the unit
    square maps to the lattice spanned by (phi, 1) and (1, -phi).
    """
    return Q5(c2, c1), Q5(c1, -c2)


def latvec(m1, m2):
    """The lattice vector with integer coefficients (m1, m2)."""
    return Q5(m2, m1), Q5(m1, -m2)


def lattice_coords(x, y):
    """Coefficients of (x, y) in the lattice basis (exact, usually fractional)."""
    return (PHI * x + y) / COVOL, (x - PHI * y) / COVOL


def as_integer(q):
    """The exact integer value of q, or None."""
    if q.b == 0 and q.a.denominator == 1:
        return int(q.a)
    return None


def q5_floor(z):
    f = math.floor(float(z))
    while Q5(f + 1) <= z:
        f += 1
    while Q5(f) > z:
        f -= 1
    return f


def lattice_in_box(xlo, xhi, ylo, yhi):
    """All lattice vectors (m1, m2, X, Y) with X in [xlo, xhi], Y in [ylo, yhi].

    Float arithmetic only suggests candidate ranges; membership is exact.
    """
    if xlo > xhi or ylo > yhi:
        return []
    fxlo, fxhi = float(xlo), float(xhi)
    fylo, fyhi = float(ylo), float(yhi)
    # m1 = (phi*X + Y)/covol is increasing in both X and Y
    m1lo = math.floor((PHI_F * fxlo + fylo) / COVOL_F) - 2
    m1hi = math.ceil((PHI_F * fxhi + fyhi) / COVOL_F) + 2
    # m2 = (X - phi*Y)/covol is increasing in X, decreasing in Y
    m2lo = math.floor((fxlo - PHI_F * fyhi) / COVOL_F) - 2
    m2hi = math.ceil((fxhi - PHI_F * fylo) / COVOL_F) + 2
    out = []
    for m1 in range(m1lo, m1hi + 1):
        for m2 in range(m2lo, m2hi + 1):
            x, y = latvec(m1, m2)
            if xlo <= x <= xhi and ylo <= y <= yhi:
                out.append((m1, m2, x, y))
    return out


# --------------------------------------------------------------------------
# Rectangles and axis-parallel segments.
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Rect:
    x1: Q5
    x2: Q5
    y1: Q5
    y2: Q5

    @property
    def w(self):
        return self.x2 - self.x1

    @property
    def h(self):
        return self.y2 - self.y1

    @property
    def area(self):
        return self.w * self.h

    def translate(self, dx, dy):
        return Rect(self.x1 + dx, self.x2 + dx, self.y1 + dy, self.y2 + dy)

    def reflect(self):
        """Image under the half turn z -> -z."""
        return Rect(-self.x2, -self.x1, -self.y2, -self.y1)

    def key(self):
        return (self.x1, self.y1, self.x2, self.y2)


@dataclass(frozen=True)
class HSeg:
    y: Q5
    x1: Q5
    x2: Q5

    def translate(self, dx, dy):
        return HSeg(self.y + dy, self.x1 + dx, self.x2 + dx)


@dataclass(frozen=True)
class VSeg:
    x: Q5
    y1: Q5
    y2: Q5

    def translate(self, dx, dy):
        return VSeg(self.x + dx, self.y1 + dy, self.y2 + dy)


def window_translates(hsegs, vsegs, reach):
    """All lattice translates of the web meeting the square [-reach, reach]^2."""
    lim = Q5(reach)
    out_h, out_v = [], []
    for seg in hsegs:
        for m1, m2, ox, oy in lattice_in_box(-lim - seg.x2, lim - seg.x1,
                                             -lim - seg.y, lim - seg.y):
            out_h.append(seg.translate(ox, oy))
    for seg in vsegs:
        for m1, m2, ox, oy in lattice_in_box(-lim - seg.x, lim - seg.x,
                                             -lim - seg.y2, lim - seg.y1):
            out_v.append(seg.translate(ox, oy))
    return out_h, out_v


def complement_rectangles(hsegs, vsegs):
    """Bounded complement components of a segment family, as rectangles.

    Returns (rectangles, bad) where bad counts bounded components that are
    not rectangles (a correctly closed web has none).  Components touching
    the border of the covered region are unbounded for our purposes and are
    dropped.
    """
    xs = sorted({s.x for s in vsegs} | {s.x1 for s in hsegs} | {s.x2 for s in hsegs})
    ys = sorted({s.y for s in hsegs} | {s.y1 for s in vsegs} | {s.y2 for s in vsegs})
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: i for i, y in enumerate(ys)}
    nx, ny = len(xs) - 1, len(ys) - 1  # cell counts
    if nx <= 0 or ny <= 0:
        return [], 0

    def merged(intervals):
        intervals.sort()
        out = []
        for a, b in intervals:
            if out and a <= out[-1][1]:
                if b > out[-1][1]:
                    out[-1][1] = b
            else:
                out.append([a, b])
        return out

    hcov = {}
    for s in hsegs:
        hcov.setdefault(yi[s.y], []).append([xi[s.x1], xi[s.x2]])
    hcov = {k: merged(v) for k, v in hcov.items()}
    vcov = {}
    for s in vsegs:
        vcov.setdefault(xi[s.x], []).append([yi[s.y1], yi[s.y2]])
    vcov = {k: merged(v) for k, v in vcov.items()}

    def covered(cov, line, a, b):
        """Is [a, b] inside one merged interval of cov[line]?"""
        for lo, hi in cov.get(line, ()):
            if lo <= a and b <= hi:
                return True
            if lo > a:
                break
        return False

    seen = [[False] * ny for _ in range(nx)]
    rects, bad = [], 0
    for sx in range(nx):
        for sy in range(ny):
            if seen[sx][sy]:
                continue
            comp = []
            border = False
            area = ZERO
            minx = maxx = sx
            miny = maxy = sy
            dq = deque([(sx, sy)])
            seen[sx][sy] = True
            while dq:
                cx, cy = dq.popleft()
                comp.append((cx, cy))
                area = area + (xs[cx + 1] - xs[cx]) * (ys[cy + 1] - ys[cy])
                minx, maxx = min(minx, cx), max(maxx, cx)
                miny, maxy = min(miny, cy), max(maxy, cy)
                if cx in (0, nx - 1) or cy in (0, ny - 1):
                    border = True
                if cx > 0 and not seen[cx - 1][cy] and not covered(vcov, cx, cy, cy + 1):
                    seen[cx - 1][cy] = True
                    dq.append((cx - 1, cy))
                if cx < nx - 1 and not seen[cx + 1][cy] and not covered(vcov, cx + 1, cy, cy + 1):
                    seen[cx + 1][cy] = True
                    dq.append((cx + 1, cy))
                if cy > 0 and not seen[cx][cy - 1] and not covered(hcov, cy, cx, cx + 1):
                    seen[cx][cy - 1] = True
                    dq.append((cx, cy - 1))
                if cy < ny - 1 and not seen[cx][cy + 1] and not covered(hcov, cy + 1, cx, cx + 1):
                    seen[cx][cy + 1] = True
                    dq.append((cx, cy + 1))
            if border:
                continue
            r = Rect(xs[minx], xs[maxx + 1], ys[miny], ys[maxy + 1])
            if r.area == area:
                rects.append(r)
            else:
                bad += 1
    return rects, bad


def reduced_rect(r):
    """The canonical lattice translate of r (corner in the base cell)."""
    s, t = lattice_coords(r.x1, r.y1)
    ox, oy = latvec(q5_floor(s), q5_floor(t))
    return r.translate(-ox, -oy)


def torus_classes(rects, strict):
    """One canonical representative per lattice class; area must sum to covol."""
    seen = {}
    for r in rects:
        rr = reduced_rect(r)
        k = rr.key()
        if k in seen:
            if seen[k] != rr:
                raise BuildError("distinct boxes share a reduced corner")
        else:
            seen[k] = rr
    reps = sorted(seen.values(), key=Rect.key)
    total = ZERO
    for r in reps:
        total = total + r.area
    if total != COVOL:
        if strict:
            raise BuildError(f"class areas sum to {total}, not the covolume")
        return None
    return reps


def quotient_reps(treps):
    """One torus class per half-turn pair; no class may be self-paired."""
    keyed = {r.key(): r for r in treps}
    used = set()
    kept = []
    for r in treps:  # already sorted
        k = r.key()
        if k in used:
            continue
        rk = reduced_rect(r.reflect()).key()
        if rk not in keyed:
            raise BuildError("half-turn image of a box is not a box")
        if rk == k:
            raise BuildError("a box is fixed by the half turn")
        used.add(k)
        used.add(rk)
        kept.append(keyed[min(k, rk)])
    total = ZERO
    for r in kept:
        total = total + r.area
    if total * 2 != COVOL:
        raise BuildError("quotient classes do not cover half the covolume")
    return kept


# --------------------------------------------------------------------------
# Markov extraction: from certified boxes to a geometric type.
# --------------------------------------------------------------------------

def extract_type(reps, quotient=False):
    """Read the geometric type off certified partition boxes.

    The cat map stretches x by phi**2 and shrinks y by phi**-2.  For each box
    the image strip must be tiled exactly, in the x direction, by full-width
    translates of boxes (composed with the half turn when quotient is set);
    each landing, read back in the target box, must tile it exactly in y.
    Any violation raises BuildError, so success certifies the partition.
    """
    n = len(reps)
    signs = (1, -1) if quotient else (1,)
    pieces = []
    landings = [[] for _ in range(n)]
    for i0, b in enumerate(reps):
        fx1, fx2 = LAM * b.x1, LAM * b.x2
        fy1, fy2 = MU * b.y1, MU * b.y2
        found = []
        for k0, tgt in enumerate(reps):
            for sg in signs:
                base = tgt if sg == 1 else tgt.reflect()
                for m1, m2, ox, oy in lattice_in_box(fx1 - base.x1, fx2 - base.x2,
                                                     fy2 - base.y2, fy1 - base.y1):
                    found.append((base.x1 + ox, base.x2 + ox, k0, sg, (m1, m2), oy))
        found.sort(key=lambda p: (p[0], p[1], p[2], p[3]))
        if not found or found[0][0] != fx1 or found[-1][1] != fx2:
            raise BuildError(f"image strip of box {i0} does not reach its ends")
        for a, c in zip(found, found[1:]):
            if a[1] != c[0]:
                raise BuildError(f"image strip of box {i0} has a gap or overlap")
        pieces.append(found)
        for j0, (x1, x2, k0, sg, m, oy) in enumerate(found):
            if sg == 1:
                slab = (fy1 - oy, fy2 - oy)
            else:
                slab = (oy - fy2, oy - fy1)
            landings[k0].append((slab[0], slab[1], i0, j0, sg))

    lmap = {}
    vcounts = []
    for k0 in range(n):
        b = reps[k0]
        slabs = sorted(landings[k0], key=lambda s: (s[0], s[1], s[2], s[3]))
        if not slabs or slabs[0][0] != b.y1 or slabs[-1][1] != b.y2:
            raise BuildError(f"landings do not reach the ends of box {k0}")
        for a, c in zip(slabs, slabs[1:]):
            if a[1] != c[0]:
                raise BuildError(f"landings in box {k0} have a gap or overlap")
        # Horizontal cells are numbered along the expanding direction, and
        # vertical cells along the contracting one with the opposite
        # handedness: the first landing slab is the one at the top.
        nsl = len(slabs)
        for pos, (_, _, i0, j0, sg) in enumerate(slabs):
            lmap[(i0, j0)] = (k0, nsl - 1 - pos, sg)
        vcounts.append(nsl)

    hv = [(len(pieces[i0]), vcounts[i0]) for i0 in range(n)]
    rows = []
    for i0 in range(n):
        for j0 in range(len(pieces[i0])):
            k0, l0, sg = lmap[(i0, j0)]
            rows.append((i0 + 1, j0 + 1, k0 + 1, l0 + 1, sg))
    return make_type(hv, rows), pieces


def locate_point(reps, x, y):
    """Which box holds the torus point (x, y), and under which translate."""
    hits = []
    for i0, b in enumerate(reps):
        for m1, m2, ox, oy in lattice_in_box(x - b.x2, x - b.x1, y - b.y2, y - b.y1):
            if b.x1 + ox < x < b.x2 + ox and b.y1 + oy < y < b.y2 + oy:
                hits.append((i0, (m1, m2)))
    if len(hits) != 1:
        raise BuildError(f"point ({x}, {y}) is not interior to exactly one box")
    return hits[0]


def torus_type_from_web(hsegs, vsegs, reach, strict):
    """Full pipeline: window, flood fill, classes, extraction."""
    ht, vt = window_translates(hsegs, vsegs, reach)
    rects, bad = complement_rectangles(ht, vt)
    if bad:
        if strict:
            raise BuildError(f"{bad} bounded complement components are not rectangles")
        return None
    try:
        reps = torus_classes(rects, strict)
        if reps is None:
            return None
        t, pieces = extract_type(reps)
    except BuildError:
        if strict:
            raise
        return None
    return t, reps, pieces


# --------------------------------------------------------------------------
# Relabelling and isomorphism of finished types.
# --------------------------------------------------------------------------

def relabel(t, perm):
    """Renumber rectangles; perm[i] is the new 1-based label of rectangle i."""
    inv = {perm[i - 1]: i for i in range(1, t.n + 1)}
    hv = [t.hv[inv[i] - 1] for i in range(1, t.n + 1)]
    rows = []
    for i in range(1, t.n + 1):
        for j in range(1, t.h(i) + 1):
            k, l, e = t.image(i, j)
            rows.append((perm[i - 1], j, perm[k - 1], l, e))
    return make_type(hv, rows)


def isomorphic(t1, t2):
    """A relabelling taking t1 to t2, or None.  Tries identity first."""
    if t1.n != t2.n:
        return None
    n = t1.n
    if t1 == t2:
        return list(range(1, n + 1))
    for perm in permutations(range(1, n + 1)):
        if any(t1.hv[i] != t2.hv[perm[i] - 1] for i in range(n)):
            continue
        if relabel(t1, list(perm)) == t2:
            return list(perm)
    return None


# --------------------------------------------------------------------------
# The two-rectangle torus partition.
# --------------------------------------------------------------------------

CAT = ((2, 1), (1, 1))


def two_rectangle_search():
    """Search stable/unstable webs through the origin for the classical
    two-rectangle partition.

    The web is an unstable arm [-p, q] x {0} and a stable arm {0} x [-r, s].
    Arm ends must land strictly inside a transverse translate (T junctions
    only); with that, every bounded complement component is forced to be a
    rectangle, and the certificates do the rest.  Candidate arm lengths are
    coordinates of small lattice vectors, zero-length arms allowed.
    """
    qc, pc, sc, rc = [(ZERO, None)], [(ZERO, None)], [(ZERO, None)], [(ZERO, None)]
    for m1 in range(-3, 4):
        for m2 in range(-3, 4):
            if (m1, m2) == (0, 0):
                continue
            x, y = latvec(m1, m2)
            if x > ZERO:
                qc.append((x, (m1, m2)))
            if x < ZERO:
                pc.append((-x, (m1, m2)))
            if y > ZERO:
                sc.append((y, (m1, m2)))
            if y < ZERO:
                rc.append((-y, (m1, m2)))

    def closes(p, mp, q, mq, r, mr, s, ms):
        if p + q == ZERO or r + s == ZERO:
            return False
        for m in (mq, mp):  # ends of the unstable arm land on stable material
            if m is None:
                if not (r > ZERO and s > ZERO):
                    return False
            else:
                y = latvec(*m)[1]
                if not (-s < y < r):
                    return False
        for m in (ms, mr):  # ends of the stable arm land on unstable material
            if m is None:
                if not (p > ZERO and q > ZERO):
                    return False
            else:
                x = latvec(*m)[0]
                if not (-q < x < p):
                    return False
        return True

    cands = {}
    for p, mp in pc:
        for q, mq in qc:
            for r, mr in rc:
                for s, ms in sc:
                    if closes(p, mp, q, mq, r, mr, s, ms):
                        cands[(p, q, r, s)] = (p + q + r + s, p, q, r, s)
    order = sorted(cands, key=cands.get)

    for p, q, r, s in order:
        hsegs = [HSeg(ZERO, -p, q)]
        vsegs = [VSeg(ZERO, -r, s)]
        got = torus_type_from_web(hsegs, vsegs, reach=6, strict=False)
        if got is None:
            continue
        t, reps, pieces = got
        if t.n != 2:
            continue
        for perm in ([1, 2], [2, 1]):
            if incidence_matrix(relabel(t, perm)) == CAT:
                break
        else:
            continue
        # reorder the boxes so the extraction itself carries the labels
        inv = {perm[i]: i for i in range(2)}
        reps2 = [reps[inv[i + 1]] for i in range(2)]
        t2, pieces2 = extract_type(reps2)
        if incidence_matrix(t2) != CAT:
            raise BuildError("relabelled extraction lost the target matrix")
        return (p, q, r, s), (hsegs, vsegs), t2, reps2, pieces2
    raise BuildError("no two-rectangle web found")


# --------------------------------------------------------------------------
# Crossing parities against a slit (exact, with degeneracy detection).
# --------------------------------------------------------------------------

def _cross_one(px, py, qx, qy, seg):
    """Crossing count (0/1) of the open segment P->Q with one web segment."""
    if isinstance(seg, VSeg):
        dx = qx - px
        if dx == ZERO:
            if px == seg.x and not (max(py, qy) < seg.y1 or min(py, qy) > seg.y2):
                raise Degenerate
            return 0
        t = (seg.x - px) / dx
        if t <= ZERO or t >= ONE:
            if t == ZERO or t == ONE:
                ystar = py + t * (qy - py)
                if seg.y1 <= ystar <= seg.y2:
                    raise Degenerate
            return 0
        ystar = py + t * (qy - py)
        if ystar == seg.y1 or ystar == seg.y2:
            raise Degenerate
        return 1 if seg.y1 < ystar < seg.y2 else 0
    # horizontal segment
    dy = qy - py
    if dy == ZERO:
        if py == seg.y and not (max(px, qx) < seg.x1 or min(px, qx) > seg.x2):
            raise Degenerate
        return 0
    t = (seg.y - py) / dy
    if t <= ZERO or t >= ONE:
        if t == ZERO or t == ONE:
            xstar = px + t * (qx - px)
            if seg.x1 <= xstar <= seg.x2:
                raise Degenerate
        return 0
    xstar = px + t * (qx - px)
    if xstar == seg.x1 or xstar == seg.x2:
        raise Degenerate
    return 1 if seg.x1 < xstar < seg.x2 else 0


def crossing_parity(p, q, chain):
    """Mod-2 crossing number of segment p->q with all translates of chain."""
    px, py = p
    qx, qy = q
    xlo, xhi = min(px, qx), max(px, qx)
    ylo, yhi = min(py, qy), max(py, qy)
    total = 0
    for seg in chain:
        if isinstance(seg, VSeg):
            sx1, sx2, sy1, sy2 = seg.x, seg.x, seg.y1, seg.y2
        else:
            sx1, sx2, sy1, sy2 = seg.x1, seg.x2, seg.y, seg.y
        for m1, m2, ox, oy in lattice_in_box(xlo - sx2, xhi - sx1,
                                             ylo - sy2, yhi - sy1):
            total += _cross_one(px, py, qx, qy, seg.translate(ox, oy))
    return total % 2


# --------------------------------------------------------------------------
# The web as a graph on the torus; slits for the double cover.
# --------------------------------------------------------------------------

def canon_point(x, y):
    s, t = lattice_coords(x, y)
    ox, oy = latvec(q5_floor(s), q5_floor(t))
    return (x - ox, y - oy)


def torus_graph(hsegs, vsegs, reach, marked):
    """The web as a graph of torus vertices and straight edges.

    Vertices are junctions (plus the marked points); edges are the pieces
    between consecutive cut points, identified modulo the lattice.  Each
    edge keeps one geometric placement for later crossing counts.
    """
    ht, vt = window_translates(hsegs, vsegs, reach)
    edges = {}
    adj = {}

    def add_edge(pa, pb):
        ka, kb = canon_point(*pa), canon_point(*pb)
        sa = (pa[0] - ka[0], pa[1] - ka[1])
        sb = (pb[0] - kb[0], pb[1] - kb[1])
        c1 = tuple(sorted((ka, (pb[0] - sa[0], pb[1] - sa[1]))))
        c2 = tuple(sorted(((pa[0] - sb[0], pa[1] - sb[1]), kb)))
        ekey = min(c1, c2)
        if ekey in edges:
            return
        edges[ekey] = (ka, kb, pa, pb)
        adj.setdefault(ka, []).append(ekey)
        if kb != ka:
            adj.setdefault(kb, []).append(ekey)

    def marked_cuts(seg):
        cuts = set()
        if isinstance(seg, HSeg):
            for mx, my in marked:
                for _, _, ox, _ in lattice_in_box(seg.x1 - mx, seg.x2 - mx,
                                                  seg.y - my, seg.y - my):
                    cuts.add(mx + ox)
        else:
            for mx, my in marked:
                for _, _, _, oy in lattice_in_box(seg.x - mx, seg.x - mx,
                                                  seg.y1 - my, seg.y2 - my):
                    cuts.add(my + oy)
        return cuts

    for seg in ht:
        cuts = {seg.x1, seg.x2} | marked_cuts(seg)
        for v in vt:
            if seg.x1 <= v.x <= seg.x2 and v.y1 <= seg.y <= v.y2:
                cuts.add(v.x)
        run = sorted(cuts)
        for a, b in zip(run, run[1:]):
            add_edge((a, seg.y), (b, seg.y))
    for seg in vt:
        cuts = {seg.y1, seg.y2} | marked_cuts(seg)
        for hg in ht:
            if seg.y1 <= hg.y <= seg.y2 and hg.x1 <= seg.x <= hg.x2:
                cuts.add(hg.y)
        run = sorted(cuts)
        for a, b in zip(run, run[1:]):
            add_edge((seg.x, a), (seg.x, b))

    for lst in adj.values():
        lst.sort()
    return edges, adj


def slit_chain(edges, adj, start_pt, goal_pt):
    """A mod-2 chain of web edges with boundary {start, goal}, corrected to
    the unique homology class left invariant by the cat map.

    The invariance test is concrete: the crossing parity of a straight loop
    and of its literal image under the map must agree, for both lattice
    generators.  Exactly one of the four correction classes passes.
    """
    start = canon_point(*start_pt)
    goal = canon_point(*goal_pt)
    parent = {start: None}
    lift = {start: start}
    dq = deque([start])
    while dq:
        u = dq.popleft()
        for ekey in adj[u]:
            ka, kb, pa, pb = edges[ekey]
            if ka == kb:
                continue
            if u == ka:
                v, d = kb, (pb[0] - pa[0], pb[1] - pa[1])
            else:
                v, d = ka, (pa[0] - pb[0], pa[1] - pb[1])
            if v not in parent:
                parent[v] = (u, ekey)
                lift[v] = (lift[u][0] + d[0], lift[u][1] + d[1])
                dq.append(v)
    if goal not in parent:
        raise BuildError("the web graph does not connect the branch points")

    def path_edges(node):
        out = set()
        while parent[node] is not None:
            u, ekey = parent[node]
            out.symmetric_difference_update({ekey})
            node = u
        return out

    basis = []
    for ekey in sorted(edges):
        ka, kb, pa, pb = edges[ekey]
        if ka != kb:
            pb_of = parent.get(kb)
            if pb_of is not None and pb_of[1] == ekey:
                continue
            pa_of = parent.get(ka)
            if pa_of is not None and pa_of[1] == ekey:
                continue
            induced = (lift[ka][0] + pb[0] - pa[0], lift[ka][1] + pb[1] - pa[1])
            dx, dy = induced[0] - lift[kb][0], induced[1] - lift[kb][1]
        else:
            dx, dy = pb[0] - pa[0], pb[1] - pa[1]
        m1 = as_integer((PHI * dx + dy) / COVOL)
        m2 = as_integer((dx - PHI * dy) / COVOL)
        if m1 is None or m2 is None:
            raise BuildError("edge displacement is not a lattice vector")
        cls = (m1 % 2, m2 % 2)
        if cls == (0, 0):
            continue
        if basis and cls in ((0, 0), basis[0][0]):
            continue
        if ka != kb:
            cyc = path_edges(ka) ^ path_edges(kb) ^ {ekey}
        else:
            cyc = {ekey}
        basis.append((cls, cyc))
        if len(basis) == 2:
            break
    if len(basis) != 2:
        raise BuildError("could not span the homology of the torus in the web")

    base = path_edges(goal)
    candidates = [base,
                  base ^ basis[0][1],
                  base ^ basis[1][1],
                  base ^ basis[0][1] ^ basis[1][1]]

    probes = [(F(1, 7), F(2, 11)), (F(3, 13), F(5, 17)), (F(2, 9), F(1, 13)),
              (F(5, 19), F(3, 23)), (F(7, 23), F(2, 19)), (F(4, 17), F(7, 29))]

    def segments_of(chain):
        segs = []
        for ekey in sorted(chain):
            _, _, pa, pb = edges[ekey]
            if pa[0] == pb[0]:
                y1, y2 = sorted((pa[1], pb[1]))
                segs.append(VSeg(pa[0], y1, y2))
            else:
                x1, x2 = sorted((pa[0], pb[0]))
                segs.append(HSeg(pa[1], x1, x2))
        return segs

    def check_boundary(chain):
        deg = {}
        for ekey in chain:
            ka, kb, _, _ = edges[ekey]
            deg[ka] = deg.get(ka, 0) + 1
            deg[kb] = deg.get(kb, 0) + 1
        odd = {k for k, d in deg.items() if d % 2}
        return odd == {start, goal}

    def invariant(segs):
        for fa, fb in probes:
            z = (Q5(fa), Q5(fb))
            fz = (LAM * z[0], MU * z[1])
            try:
                for gen in ((1, 0), (0, 1)):
                    ox, oy = latvec(*gen)
                    before = crossing_parity(z, (z[0] + ox, z[1] + oy), segs)
                    gx, gy = latvec(2 * gen[0] + gen[1], gen[0] + gen[1])
                    after = crossing_parity(fz, (fz[0] + gx, fz[1] + gy), segs)
                    if before != after:
                        return False
                return True
            except Degenerate:
                continue
        raise BuildError("all invariance probes were degenerate")

    winners = []
    for chain in candidates:
        if not check_boundary(chain):
            raise BuildError("slit candidate has the wrong boundary")
        segs = segments_of(chain)
        if invariant(segs):
            winners.append(segs)
    if len(winners) != 1:
        raise BuildError(f"{len(winners)} slit classes are invariant, expected 1")
    return winners[0]


# --------------------------------------------------------------------------
# Builders for the individual goldens.
# --------------------------------------------------------------------------

def build_small_types():
    t_id = make_type([(1, 1)], [(1, 1, 1, 1, 1)])
    t_hs = make_type([(2, 2)], [(1, 1, 1, 1, 1), (1, 2, 1, 2, -1)])
    t_swap = make_type([(1, 1), (1, 1)], [(1, 1, 2, 1, 1), (2, 1, 1, 1, 1)])
    t_db = make_type([(2, 2)], [(1, 1, 1, 1, 1), (1, 2, 1, 2, 1)])
    t_fs = make_type([(2, 2), (2, 2)],
                     [(1, 1, 1, 1, 1), (1, 2, 2, 1, 1),
                      (2, 1, 1, 2, 1), (2, 2, 2, 2, 1)])

    assert horizontal_type(t_db) == t_fs, "cell-splitting the doubling type"

    checks = [
        (t_id, "double-boundary", None),
        (t_swap, "not-mixing", None),
        (t_hs, "impasse", 1),
        (t_db, "type2", 3),
        (t_fs, "type2", 3),
    ]
    for t, kind, m in checks:
        v = decide_pseudo_anosov(t)
        assert v.status == "not-pseudo-anosov", (kind, v.status)
        assert v.witness.kind == kind, (kind, v.witness.kind)
        if m is not None:
            assert v.witness.m == m, (kind, v.witness.m)

    orb = make_orbit(t_fs, (1, 2))
    t_ref, book = s_refine(t_fs, [orb])
    assert not book.skipped
    expected = make_type(
        [(3, 2), (1, 2), (1, 2), (3, 2)],
        [(1, 1, 1, 1, 1), (1, 2, 2, 1, 1), (1, 3, 3, 1, 1),
         (2, 1, 4, 1, 1),
         (3, 1, 1, 2, 1),
         (4, 1, 2, 2, 1), (4, 2, 3, 2, 1), (4, 3, 4, 2, 1)])
    assert t_ref == expected, "refinement of t_fs along (1 2)"

    return {"t_id": t_id, "t_hs": t_hs, "t_swap": t_swap, "t_db": t_db,
            "t_fs": t_fs, "t_fs_refined_12": t_ref}


def census_summary(rep):
    return sorted((c.size, c.prongs, c.spine) for c in rep.classes)


def build_two_rectangle():
    params, web, t_aw, reps, pieces = two_rectangle_search()
    v = decide_pseudo_anosov(t_aw)
    assert v.status == "pseudo-anosov", v.to_json()
    assert is_mixing(t_aw)[0]
    rep = genus(t_aw)
    assert rep.genus == 1 and rep.spine_count == 0 and not rep.prongs
    assert all(c.size == 4 for c in rep.classes)
    return params, web, t_aw, reps, pieces, rep


def build_refined_binary(web, t_aw, reps, pieces):
    """Cell-split the two-rectangle type geometrically, then refine it along
    the period-two orbit through (2/5, 4/5); cross-check both steps against
    the library's combinatorics."""
    slivers = []
    cut_vsegs = []
    for i0, b in enumerate(reps):
        row = pieces[i0]
        for x1, x2, _, _, _, _ in row:
            slivers.append(Rect(MU * x1, MU * x2, b.y1, b.y2))
        for x1, _, _, _, _, _ in row[1:]:
            cut_vsegs.append(VSeg(MU * x1, b.y1, b.y2))
    total = ZERO
    for r in slivers:
        total = total + r.area
    assert total == COVOL

    t_bin_geom, bin_pieces = extract_type(slivers)
    t_bin = horizontal_type(t_aw)
    perm_bin = isomorphic(t_bin_geom, t_bin)
    assert perm_bin is not None, "geometric cell split disagrees with library"

    # the period-two orbit: (2/5, 4/5) -> (3/5, 1/5) -> back
    p1 = embed(F(2, 5), F(4, 5))
    p2 = embed(F(3, 5), F(1, 5))
    for a, b_ in ((p1, p2), (p2, p1)):
        dx, dy = LAM * a[0] - b_[0], MU * a[1] - b_[1]
        m1, m2 = lattice_coords(dx, dy)
        assert as_integer(m1) is not None and as_integer(m2) is not None

    i_p, m_p = locate_point(slivers, *p1)
    i_q, m_q = locate_point(slivers, *p2)
    word = (perm_bin[i_p], perm_bin[i_q])
    orb = make_orbit(t_bin, word)
    t_ref_lib, book = s_refine(t_bin, [orb])
    assert not book.skipped
    assert t_ref_lib.n == t_bin.n + 2

    hsegs, vsegs = web
    ox1, oy1 = latvec(*m_p)
    ox2, oy2 = latvec(*m_q)
    sb1, sb2 = slivers[i_p], slivers[i_q]
    orbit_cuts = [VSeg(p1[0] - ox1, sb1.y1, sb1.y2),
                  VSeg(p2[0] - ox2, sb2.y1, sb2.y2)]
    ref_h = list(hsegs)
    ref_v = list(vsegs) + cut_vsegs + orbit_cuts
    t_ref_geom, ref_reps, ref_pieces = torus_type_from_web(ref_h, ref_v,
                                                           reach=6, strict=True)
    assert t_ref_geom.n == t_ref_lib.n
    assert is_mixing(t_ref_geom)[0]
    rep = genus(t_ref_geom)
    assert rep.genus == 1 and all(c.size == 4 for c in rep.classes)
    perm_ref = isomorphic(t_ref_geom, t_ref_lib)
    assert perm_ref is not None, "geometric refinement disagrees with library"

    marked = [(p1[0] - ox1, p1[1] - oy1), (p2[0] - ox2, p2[1] - oy2)]
    return {
        "t_bin": t_bin, "perm_bin": perm_bin, "word": word,
        "t_ref_geom": t_ref_geom, "t_ref_lib": t_ref_lib, "perm_ref": perm_ref,
        "ref_web": (ref_h, ref_v), "ref_reps": ref_reps,
        "ref_pieces": ref_pieces, "marked": marked,
    }


def build_double_cover(ref):
    """Double the refined torus partition across an invariant slit joining
    the two orbit points.

    The lifted map changes sheet exactly when the moving point or its image
    steps over the slit, so the sheet bit of a cell is the crossing parity,
    from one fixed base point to any interior point of the cell, against the
    slit together with its preimage.  The slit class chosen by ``slit_chain``
    makes that wall bound, which is what makes the parity route-independent.
    """
    ref_h, ref_v = ref["ref_web"]
    marked = ref["marked"]
    edges, adj = torus_graph(ref_h, ref_v, reach=6, marked=marked)
    slit = slit_chain(edges, adj, marked[0], marked[1])

    reps = ref["ref_reps"]
    pieces = ref["ref_pieces"]
    t_base = ref["t_ref_geom"]

    wall = list(slit)
    for seg in slit:
        if isinstance(seg, VSeg):
            wall.append(VSeg(MU * seg.x, LAM * seg.y1, LAM * seg.y2))
        else:
            wall.append(HSeg(LAM * seg.y, MU * seg.x1, MU * seg.x2))

    fracs = [(F(1, 2), F(1, 2)), (F(1, 3), F(2, 5)), (F(2, 7), F(3, 7)),
             (F(3, 8), F(1, 5)), (F(1, 5), F(4, 9)), (F(4, 11), F(5, 13)),
             (F(5, 12), F(3, 11)), (F(2, 11), F(5, 21))]

    def cell_bits(base):
        bits = {}
        for i0, b in enumerate(reps):
            for j0, (x1, x2, _, _, _, _) in enumerate(pieces[i0]):
                for ga, gb in fracs:
                    z = (MU * (x1 + Q5(ga) * (x2 - x1)), b.y1 + Q5(gb) * b.h)
                    try:
                        bits[(i0 + 1, j0 + 1)] = crossing_parity(base, z, wall)
                        break
                    except Degenerate:
                        continue
                else:
                    raise Degenerate
        return bits

    mono = None
    for fa, fb in [(F(1, 7), F(2, 11)), (F(3, 13), F(5, 17)),
                   (F(2, 9), F(1, 13)), (F(5, 19), F(3, 23))]:
        try:
            mono = cell_bits((Q5(fa), Q5(fb)))
            break
        except Degenerate:
            continue
    if mono is None:
        raise BuildError("no generic base point for the monodromy bits")

    n = t_base.n

    def up(i, sheet):
        return 2 * (i - 1) + sheet + 1

    hv = []
    for i in range(1, n + 1):
        hv.append(t_base.hv[i - 1])
        hv.append(t_base.hv[i - 1])
    rows = []
    for i in range(1, n + 1):
        for j in range(1, t_base.h(i) + 1):
            k, l, e = t_base.image(i, j)
            flip = mono[(i, j)]
            for sheet in (0, 1):
                rows.append((up(i, sheet), j, up(k, sheet ^ flip), l, e))
    t_g2 = make_type(hv, rows)

    deck = []
    for i in range(1, n + 1):
        deck.extend([up(i, 1), up(i, 0)])
    assert relabel(t_g2, deck) == t_g2, "sheet swap must be an automorphism"

    assert is_mixing(t_g2)[0], "the double cover must stay mixing"
    rep = genus(t_g2)
    assert rep.genus == 2, rep.to_json()
    big = [c for c in rep.classes if c.size == 8]
    assert len(big) == 2 and all(c.prongs == 4 and not c.spine for c in big)
    assert all(c.size == 4 for c in rep.classes if c.size != 8)
    return t_g2, mono, len(slit), rep


def build_sphere_quotient(params):
    """Symmetrize the two-rectangle web, repeat it at the four half-lattice
    points, and take the half-turn quotient."""
    p, q, r, s = params
    arm_u = max(p, q)
    arm_s = max(r, s)
    hsegs, vsegs = [], []
    for c1, c2 in ((F(0), F(0)), (F(1, 2), F(0)), (F(0), F(1, 2)), (F(1, 2), F(1, 2))):
        ex, ey = embed(c1, c2)
        hsegs.append(HSeg(ey, ex - arm_u, ex + arm_u))
        vsegs.append(VSeg(ex, ey - arm_s, ey + arm_s))
    ht, vt = window_translates(hsegs, vsegs, reach=6)
    rects, bad = complement_rectangles(ht, vt)
    if bad:
        raise BuildError(f"{bad} components of the symmetrized web are not rectangles")
    treps = torus_classes(rects, strict=True)
    t_up, _ = extract_type(treps)
    assert is_mixing(t_up)[0]
    rep_up = genus(t_up)
    assert rep_up.genus == 1 and all(c.size == 4 for c in rep_up.classes)

    qreps = quotient_reps(treps)
    t_sq, _ = extract_type(qreps, quotient=True)
    assert is_mixing(t_sq)[0]
    rep = genus(t_sq)
    assert rep.genus == 0, rep.to_json()
    spines = [c for c in rep.classes if c.spine]
    assert len(spines) == 4 and all(c.size == 2 for c in spines)
    assert all(c.size == 4 for c in rep.classes if not c.spine)
    assert rep.spine_count == 4
    return t_sq, len(treps), rep


# --------------------------------------------------------------------------
# Main build.
# --------------------------------------------------------------------------

def main():
    out = ROOT / "tests" / "goldens"
    out.mkdir(parents=True, exist_ok=True)
    report = {}

    named = build_small_types()
    print("small types and refinement table verified")

    params, web, t_aw, reps, pieces, rep_aw = build_two_rectangle()
    named["t_aw"] = t_aw
    report["t_aw"] = {
        "web": {"unstable_arm_neg": str(params[0]), "unstable_arm_pos": str(params[1]),
                "stable_arm_neg": str(params[2]), "stable_arm_pos": str(params[3])},
        "boxes": [[str(v) for v in r.key()] for r in reps],
        "incidence": incidence_matrix(t_aw),
        "verdict": decide_pseudo_anosov(t_aw).to_json(),
        "census": rep_aw.to_json(),
    }
    print(f"two-rectangle torus type found: arms "
          f"[-{params[0]}, {params[1]}] x [-{params[2]}, {params[3]}]")

    ref = build_refined_binary(web, t_aw, reps, pieces)
    report["refined_base"] = {
        "cell_split_relabelling": ref["perm_bin"],
        "orbit_word": list(ref["word"]),
        "refined_relabelling": ref["perm_ref"],
        "incidence": incidence_matrix(ref["t_ref_geom"]),
    }
    print("binary cell split and orbit refinement cross-checked against library")

    t_g2, mono, slit_edges, rep_g2 = build_double_cover(ref)
    named["t_g2"] = t_g2
    report["t_g2"] = {
        "monodromy": {f"{i},{j}": bit for (i, j), bit in sorted(mono.items())},
        "slit_edges": slit_edges,
        "incidence": incidence_matrix(t_g2),
        "census": rep_g2.to_json(),
    }
    print(f"genus-two double cover built (slit of {slit_edges} edges)")

    t_sq, upstairs_boxes, rep_sq = build_sphere_quotient(params)
    named["t_sq"] = t_sq
    report["t_sq"] = {
        "upstairs_boxes": upstairs_boxes,
        "boxes": t_sq.n,
        "incidence": incidence_matrix(t_sq),
        "census": rep_sq.to_json(),
    }
    print(f"sphere quotient built ({upstairs_boxes} boxes upstairs, {t_sq.n} below)")

    for name, t in sorted(named.items()):
        path = out / f"{name}.gt"
        path.write_text(serialize_type(t), encoding="utf-8")
        print(f"wrote {path.relative_to(ROOT)}  (n = {t.n})")
    report["files"] = {name: {"n": t.n} for name, t in sorted(named.items())}
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
    print("wrote tests/goldens/report.json")


if __name__ == "__main__":
    main()
