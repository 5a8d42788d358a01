"""Scratch smoke checks for core/algebra/paclass (not part of the test suite)."""
import random
import sys

sys.path.insert(0, "src")

from geotype.core import (GeometricType, make_type, validate, serialize_type,
                          parse_type, incidence_matrix, inverse, is_mixing,
                          is_binary)
from geotype.algebra import power, horizontal_type, oracle_power_matrix, columns_of
from geotype import reference as ref
from geotype import paclass as pc

T_ID = make_type([(1, 1)], [(1, 1, 1, 1, 1)])
T_HS = make_type([(2, 2)], [(1, 1, 1, 1, 1), (1, 2, 1, 2, -1)])
T_SWAP = make_type([(1, 1), (1, 1)], [(1, 1, 2, 1, 1), (2, 1, 1, 1, 1)])
T_DB = make_type([(2, 2)], [(1, 1, 1, 1, 1), (1, 2, 1, 2, 1)])
T_FS = make_type([(2, 2), (2, 2)],
                 [(1, 1, 1, 1, 1), (1, 2, 2, 1, 1),
                  (2, 1, 1, 2, 1), (2, 2, 2, 2, 1)])

# round trip
for t in (T_ID, T_HS, T_SWAP, T_DB, T_FS):
    assert parse_type(serialize_type(t)) == t

# inverse involution
for t in (T_ID, T_HS, T_SWAP, T_DB, T_FS):
    assert inverse(inverse(t)) == t

# hrefine golden
assert horizontal_type(T_DB) == T_FS, horizontal_type(T_DB)

# power worked example: T_DB^2
p2 = power(T_DB, 2)
print("T_DB^2:", p2.hv, p2.cells)
assert p2.hv == ((4, 4),)
expect = {}
for j0 in (1, 2):
    for j1 in (1, 2):
        expect[2 * (j0 - 1) + j1] = 2 * (j1 - 1) + j0
assert all(p2.image(1, j) == (1, expect[j], 1) for j in range(1, 5)), p2.cells
validate(p2)

# power(t,1) identity
for t in (T_ID, T_HS, T_SWAP, T_DB, T_FS):
    assert power(t, 1) == t

# mixing
assert is_mixing(T_DB) == (True, 1)
assert is_mixing(T_SWAP) == (False, None)
assert is_mixing(T_ID) == (True, 1)

# power-matrix oracle on randoms
def random_type(rng, nmax=4, hmax=3):
    n = rng.randint(1, nmax)
    h = [rng.randint(1, hmax) for _ in range(n)]
    total = sum(h)
    # split total into n positive v parts
    while True:
        cuts = sorted(rng.sample(range(1, total), n - 1)) if n > 1 else []
        v = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        if all(x >= 1 for x in v):
            break
    vlabels = [(k + 1, l + 1) for k in range(n) for l in range(v[k])]
    rng.shuffle(vlabels)
    phi = []
    pos = 0
    for i in range(n):
        for j in range(h[i]):
            k, l = vlabels[pos]
            pos += 1
            phi.append((i + 1, j + 1, k, l, rng.choice([1, -1])))
    return make_type(list(zip(h, v)), phi)

rng = random.Random(7)
for trial in range(120):
    t = random_type(rng)
    for m in (1, 2, 3, 4):
        pt = power(t, m)
        validate(pt)
        assert incidence_matrix(pt) == oracle_power_matrix(t, m), (t, m)
        assert inverse(power(t, m)) == power(inverse(t), m), (t, m)
print("power-matrix oracle OK")

# scanner equivalence vs reference
mismatch = 0
for trial in range(400):
    t = random_type(rng, nmax=3, hmax=3)
    c = columns_of(t)
    a1, r1 = pc._scan_type1(c) is not None, ref.satisfies_type1(t) is not None
    a2, r2 = pc._scan_type2(c) is not None, ref.satisfies_type2(t) is not None
    a3, r3 = pc._scan_type3(c) is not None, ref.satisfies_type3(t) is not None
    ai, ri = pc._impasse_scan(c) is not None, ref.has_impasse(t) is not None
    if (a1, a2, a3, ai) != (r1, r2, r3, ri):
        mismatch += 1
        print("MISMATCH", (a1, a2, a3, ai), (r1, r2, r3, ri))
        print(serialize_type(t))
        if mismatch > 3:
            break
assert mismatch == 0
print("scanner equivalence OK")

# decide pipeline on tiny goldens
v = pc.decide_pseudo_anosov(T_ID)
print("T_ID:", v)
assert v.status == "not-pseudo-anosov" and v.witness.kind == "double-boundary"
assert list(v.witness.indices) == [1]

v = pc.decide_pseudo_anosov(T_SWAP)
print("T_SWAP:", v)
assert v.status == "not-pseudo-anosov" and v.witness.kind == "not-mixing"

v = pc.decide_pseudo_anosov(T_HS)
print("T_HS:", v)
assert v.status == "not-pseudo-anosov" and v.witness.kind == "impasse" and v.witness.m == 1

v = pc.decide_pseudo_anosov(T_DB)
print("T_DB:", v)
assert v.status == "not-pseudo-anosov" and v.witness.kind in ("type1", "type2", "type3")
assert v.witness.m <= 6

print("ALL SMOKE OK")
