"""Property-based tests over randomly generated valid types."""

from __future__ import annotations

from hypothesis import given, settings, strategies as st

from geotype import (
    incidence_matrix,
    inverse,
    horizontal_type,
    is_binary,
    matrix_power,
    parse_type,
    power,
    serialize_type,
)
from geotype.paclass import (
    _impasse_scan,
    _scan_type1,
    _scan_type2,
    _scan_type3,
    columns_of,
)
from geotype import make_type
from geotype.reference import (
    has_impasse,
    satisfies_type1,
    satisfies_type2,
    satisfies_type3,
)


@st.composite
def geometric_types(draw, max_n: int = 4, max_h: int = 3):
    """A uniformly scrambled valid type, mirroring conftest.random_type."""
    n = draw(st.integers(1, max_n))
    h = [draw(st.integers(1, max_h)) for _ in range(n)]
    total = sum(h)
    if n == 1:
        v = [total]
    else:
        cuts = sorted(
            draw(
                st.sets(
                    st.integers(1, total - 1), min_size=n - 1, max_size=n - 1
                )
            )
        )
        v = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    slots = [(k, l) for k in range(1, n + 1) for l in range(1, v[k - 1] + 1)]
    perm = draw(st.permutations(range(total)))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=total, max_size=total))
    rows = []
    idx = 0
    for i in range(1, n + 1):
        for j in range(1, h[i - 1] + 1):
            k, l = slots[perm[idx]]
            rows.append((i, j, k, l, signs[idx]))
            idx += 1
    return make_type(zip(h, v), rows)


@given(geometric_types())
def test_serialize_parse_round_trip(t):
    assert parse_type(serialize_type(t)) == t


@given(geometric_types())
def test_inverse_is_involutive(t):
    assert inverse(inverse(t)) == t


@given(geometric_types())
def test_inverse_transposes_incidence(t):
    assert incidence_matrix(inverse(t)) == tuple(zip(*incidence_matrix(t)))


@given(geometric_types(), st.integers(2, 4))
def test_power_matches_matrix_power(t, m):
    assert incidence_matrix(power(t, m)) == matrix_power(incidence_matrix(t), m)


@given(geometric_types(), st.integers(2, 3))
def test_power_commutes_with_inverse(t, m):
    assert inverse(power(t, m)) == power(inverse(t), m)


@given(geometric_types())
def test_horizontal_type_is_binary_with_split_count(t):
    split = horizontal_type(t)
    assert is_binary(split)
    assert split.n == sum(t.h(i) for i in range(1, t.n + 1))


@settings(deadline=None)
@given(geometric_types(max_n=3), st.integers(1, 2))
def test_scans_agree_with_reference_search(t, m):
    tp = power(t, m)
    c = columns_of(tp)
    assert (_impasse_scan(c) is not None) == (has_impasse(tp) is not None)
    assert (_scan_type1(c) is not None) == (satisfies_type1(tp) is not None)
    assert (_scan_type2(c) is not None) == (satisfies_type2(tp) is not None)
    assert (_scan_type3(c) is not None) == (satisfies_type3(tp) is not None)
