"""Scratch smoke checks for refine/singular (not part of the test suite)."""
import random
import sys

sys.path.insert(0, "src")

from geotype.core import (make_type, inverse, is_binary, is_mixing,
                          incidence_matrix, serialize_type)
from geotype.algebra import horizontal_type, power
from geotype import symbolic as sym
from geotype import refine as rf
from geotype import reference as ref
from geotype import paclass as pc
from geotype import singular as sg

T_FS = make_type([(2, 2), (2, 2)],
                 [(1, 1, 1, 1, 1), (1, 2, 2, 1, 1),
                  (2, 1, 1, 2, 1), (2, 2, 2, 2, 1)])

# unique_j worked examples
assert rf.unique_j(T_FS, (1, 2), 0) == 2
assert rf.unique_j(T_FS, (1, 2), 1) == 1
assert rf.unique_j(T_FS, (1,), 0) == 1

# interchange_delta worked example
assert rf.interchange_delta(T_FS, (0, (1, 2)), (0, (1,))) == 1

# interval_order: rectangle 1 with W={(12)} has exactly one cut
order = rf.interval_order(T_FS, [(1, 2)], 1)
assert order[0] == (1, -1) and order[-1] == (1, 1) and len(order) == 3
assert order[1] == rf.ShiftedCode(0, sym.PeriodicOrbit((1, 2)))

# s_refine(T_FS, {(12)}) against the hand-derived table
refined, bk = rf.s_refine(T_FS, [(1, 2)])
assert refined.hv == ((3, 2), (1, 2), (1, 2), (3, 2)), refined.hv
expect_phi = {
    (1, 1): (1, 1, 1), (1, 2): (2, 1, 1), (1, 3): (3, 1, 1),
    (2, 1): (4, 1, 1),
    (3, 1): (1, 2, 1),
    (4, 1): (2, 2, 1), (4, 2): (3, 2, 1), (4, 3): (4, 2, 1),
}
for (r, j), img in expect_phi.items():
    assert refined.image(r, j) == img, ((r, j), refined.image(r, j))
assert len(bk.rows) == 4
assert [r.new_label for r in bk.rows] == [1, 2, 3, 4]
assert bk.label(1, 1) == 1 and bk.label(2, 2) == 4
assert bk.position(rf.ShiftedCode(0, sym.PeriodicOrbit((1, 2)))) == (1, 1)

# N = n + P for a single non-boundary orbit
assert refined.n == T_FS.n + 2

# no-op paths
t_same, bk2 = rf.s_refine(T_FS, [(1,)])     # boundary orbit -> skipped
assert t_same == T_FS and bk2.skipped and not bk2.orbits
t_same, _ = rf.s_refine(T_FS, [])
assert t_same == T_FS

# per-case oracle equality on the worked example
assert ref.s_refine_by_cases(T_FS, [(1, 2)]) == refined

# u_refine mirror identity
ur, _ = rf.u_refine(T_FS, [(1, 2)])
inv_s, _ = rf.s_refine(inverse(T_FS), [tuple(reversed((1, 2)))])
assert ur == inverse(inv_s)

# corner_refine fixed point
assert rf.corner_refine(T_FS) == T_FS
assert sym.has_corner_property(T_FS)

# lift through the refinement: two period-2 orbits
lo, hi = rf.lift_orbit_through_s_refinement(T_FS, [(1, 2)], (1, 2))
assert lo.word == (1, 3) and hi.word == (2, 4), (lo, hi)

# --- candidate hyperbolic-torus table: full pipeline exercise ---------------
T_CAND = make_type(
    [(3, 3), (2, 2)],
    [(1, 1, 1, 1, 1), (1, 2, 1, 2, 1), (1, 3, 2, 1, 1),
     (2, 1, 1, 3, 1), (2, 2, 2, 2, 1)])
print("candidate matrix:", incidence_matrix(T_CAND))
v = pc.decide_pseudo_anosov(T_CAND)
print("candidate verdict:", v)

if v.status == "pseudo-anosov":
    tb = horizontal_type(T_CAND)
    assert is_binary(tb)
    print("binarized n:", tb.n)
    print("corner?", sym.has_corner_property(tb))
    rep = sg.genus(T_CAND)
    print("genus report:", rep.genus, [c.size for c in rep.classes],
          "spines:", rep.spine_count)
    cmp_rep = rf.compare_invariants(T_CAND, T_CAND)
    print("self-compare:", cmp_rep.verdict)

# random refinement cross-checks: production vs per-case oracle
def random_type(rng, nmax=3, hmax=3):
    n = rng.randint(1, nmax)
    h = [rng.randint(1, hmax) for _ in range(n)]
    total = sum(h)
    while True:
        cuts = sorted(rng.sample(range(1, total), n - 1)) if n > 1 else []
        vv = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        if all(x >= 1 for x in vv):
            break
    vlabels = [(k + 1, l + 1) for k in range(n) for l in range(vv[k])]
    rng.shuffle(vlabels)
    phi = []
    pos = 0
    for i in range(n):
        for j in range(h[i]):
            k, l = vlabels[pos]
            pos += 1
            phi.append((i + 1, j + 1, k, l, rng.choice([1, -1])))
    return make_type(list(zip(h, vv)), phi)

rng = random.Random(11)
tested = 0
for trial in range(300):
    t0 = random_type(rng)
    tb = t0 if is_binary(t0) else horizontal_type(t0)
    try:
        orbs = sym.enumerate_periodic_orbits(tb, 3)
    except Exception:
        continue
    usable = [o for o in orbs if not sym.is_s_boundary_orbit(tb, o)]
    if not usable:
        continue
    fam = usable[: rng.randint(1, min(3, len(usable)))]
    got, bkx = rf.s_refine(tb, fam)
    oracle = ref.s_refine_by_cases(tb, fam)
    assert got == oracle, serialize_type(tb)
    assert got.n == tb.n + sum(o.period for o in fam)
    # per-rectangle vertical counts survive
    for row in bkx.rows:
        assert got.v(row.new_label) == tb.v(row.rectangle)
    tested += 1
print(f"random refinement cross-checks OK ({tested} families)")
print("REFINE/SINGULAR SMOKE OK")
