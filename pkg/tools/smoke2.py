"""Scratch smoke checks for symbolic (not part of the test suite)."""
import sys

sys.path.insert(0, "src")

from geotype.core import make_type, inverse
from geotype import symbolic as sym

T_ID = make_type([(1, 1)], [(1, 1, 1, 1, 1)])
T_HS = make_type([(2, 2)], [(1, 1, 1, 1, 1), (1, 2, 1, 2, -1)])
T_SWAP = make_type([(1, 1), (1, 1)], [(1, 1, 2, 1, 1), (2, 1, 1, 1, 1)])
T_FS = make_type([(2, 2), (2, 2)],
                 [(1, 1, 1, 1, 1), (1, 2, 2, 1, 1),
                  (2, 1, 1, 2, 1), (2, 2, 2, 2, 1)])

# theta
assert sym.theta(T_HS, 1, -1) == 1
assert sym.theta(T_HS, 1, +1) == 2
assert sym.theta(T_ID, 1, +1) == 1

# gamma worked examples
assert sym.gamma(T_HS, (1, +1)) == (1, -1)
assert sym.gamma(T_HS, (1, -1)) == (1, -1)
assert sym.gamma(T_FS, (1, +1)) == (2, +1)
assert sym.gamma(T_FS, (2, +1)) == (2, +1)

# upsilon worked examples
assert sym.upsilon(T_HS, (1, +1)) == (1, -1)
assert sym.upsilon(T_FS, (1, -1)) == (1, -1)
assert sym.upsilon(T_ID, (1, +1)) == (1, +1)

# codes
c = sym.s_boundary_code(T_HS, (1, +1))
assert (c.preperiod, c.period) == ((1,), (1,)), c
c = sym.s_boundary_code(T_FS, (1, +1))
assert (c.preperiod, c.period) == ((1,), (2,)), c
c = sym.s_boundary_code(T_ID, (1, -1))
assert (c.preperiod, c.period) == ((), (1,)), c

# normal form: preperiod [1], period [1] is the sequence 1,1,1,... = ([], [1])
c = sym.s_boundary_code(T_HS, (1, +1))
assert c.normal_form() == ((), (1,)), c.normal_form()
c = sym.s_boundary_code(T_FS, (1, +1))
assert c.normal_form() == ((1,), (2,))

# periodic codes of T_FS
codes = sym.periodic_boundary_codes(T_FS)
assert len(codes) == 2, codes
by_word = {c.word: c for c in codes}
assert by_word[(2,)].s_eps == +1 and by_word[(2,)].u_eps == +1
assert by_word[(1,)].s_eps == -1 and by_word[(1,)].u_eps == -1
assert sym.has_corner_property(T_FS)

# inverse symmetry of code words (T_FS is self-inverse, words are fixed points)
inv_codes = sym.periodic_boundary_codes(inverse(T_FS))
assert {c.word for c in inv_codes} == {tuple(reversed(c.word)) for c in codes}

# orbit enumeration
orbs = sym.enumerate_periodic_orbits(T_FS, 1)
assert [o.word for o in orbs] == [(1,), (2,)], orbs
orbs = sym.enumerate_periodic_orbits(T_FS, 2)
assert [o.word for o in orbs] == [(1,), (2,), (1, 2)], orbs
orbs = sym.enumerate_periodic_orbits(T_SWAP, 2)
assert [o.word for o in orbs] == [(1, 2)], orbs

# orbit/trace consistency on T_FS: A = [[1,1],[1,1]], trace(A^m) = 2^m? no:
# A^m = 2^(m-1) * [[1,1],[1,1]], trace = 2^m.
from geotype.core import incidence_matrix, matrix_power
for m in (1, 2, 3, 4, 5, 6):
    tr = sum(matrix_power(incidence_matrix(T_FS), m)[d][d] for d in range(2))
    tot = 0
    for o in sym.enumerate_periodic_orbits(T_FS, m):
        if m % o.period == 0:
            tot += o.period
    assert tot == tr, (m, tot, tr)

# boundary orbit filters
assert sym.is_s_boundary_orbit(T_FS, (1,))
assert sym.is_s_boundary_orbit(T_FS, (2,))
assert not sym.is_s_boundary_orbit(T_FS, (1, 2))
assert sym.is_u_boundary_orbit(T_FS, (1,))
assert not sym.is_u_boundary_orbit(T_FS, (1, 2))

print("SYMBOLIC SMOKE OK")
