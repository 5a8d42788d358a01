"""Power, inverse/power algebra, horizontal cell-splitting, cell limits."""

from __future__ import annotations

import pytest

from geotype import (
    CellLimitExceeded,
    incidence_matrix,
    inverse,
    horizontal_type,
    is_binary,
    make_type,
    matrix_power,
    power,
    serialize_type,
)

from conftest import golden, golden_bytes, random_corpus


def test_power_zero_and_one():
    t = golden("t_aw")
    with pytest.raises(ValueError):
        power(t, 0)
    assert power(t, 1) == t


def test_power_worked_example_doubling():
    """Square of the doubling-map type, derived from the map x -> 2x with
    slabs stacked top-first: quarter-cells (by increasing x) visit the
    itineraries 11, 12, 21, 22 and land at heights 1, 3, 2, 4."""
    t_db = golden("t_db")
    expected = make_type(
        [(4, 4)],
        [(1, 1, 1, 1, 1), (1, 2, 1, 3, 1), (1, 3, 1, 2, 1), (1, 4, 1, 4, 1)],
    )
    assert power(t_db, 2) == expected


def test_power_worked_example_orientation_reversing():
    """Square of the horseshoe type, derived from the fold (2 - 2x on the
    right half, heights flipped): the second rectangle pass reverses the
    child order, so the x-order of quarter-cells reads 11, 12, 22, 21, with
    images at heights 1, 4, 3, 2 and signs +, -, +, -."""
    t_hs = golden("t_hs")
    expected = make_type(
        [(4, 4)],
        [
            (1, 1, 1, 1, 1),
            (1, 2, 1, 4, -1),
            (1, 3, 1, 3, 1),
            (1, 4, 1, 2, -1),
        ],
    )
    assert power(t_hs, 2) == expected


def test_power_matrix_oracle_on_random_corpus():
    for t in random_corpus(seed=201, count=60):
        a = incidence_matrix(t)
        for m in (2, 3):
            assert incidence_matrix(power(t, m)) == matrix_power(a, m)


def test_power_composes():
    for t in random_corpus(seed=202, count=40, max_n=3):
        assert power(power(t, 2), 2) == power(t, 4)
        assert power(power(t, 3), 2) == power(power(t, 2), 3)


def test_power_commutes_with_inverse():
    for t in random_corpus(seed=203, count=40):
        for m in (2, 3):
            assert inverse(power(t, m)) == power(inverse(t), m)


def test_power_cell_limit():
    t_db = golden("t_db")  # 2^m cells at power m
    with pytest.raises(CellLimitExceeded):
        power(t_db, 25, max_cells=1000)
    # the limit is about the result size, not the exponent
    assert power(t_db, 9, max_cells=512).h(1) == 512
    with pytest.raises(CellLimitExceeded):
        power(t_db, 9, max_cells=511)


# -- horizontal refinement -----------------------------------------------------

def test_horizontal_type_worked_example():
    """Splitting the doubling type must give the stored two-symbol full
    shift, byte for byte."""
    split = horizontal_type(golden("t_db"))
    assert serialize_type(split).encode() == golden_bytes("t_fs")


def test_horizontal_type_binary_and_counts():
    for t in random_corpus(seed=204, count=80):
        split = horizontal_type(t)
        assert is_binary(split)
        assert split.n == sum(t.h(i) for i in range(1, t.n + 1))


def test_horizontal_type_preserves_periodic_point_counts():
    """Cell splitting presents the same map, so every power of the incidence
    matrix keeps its trace (periodic points of each period are preserved)."""
    for t in random_corpus(seed=205, count=50):
        a = incidence_matrix(t)
        b = incidence_matrix(horizontal_type(t))
        for m in range(1, 7):
            tr_a = sum(matrix_power(a, m)[i][i] for i in range(len(a)))
            tr_b = sum(matrix_power(b, m)[i][i] for i in range(len(b)))
            assert tr_a == tr_b


def test_horizontal_type_fixes_binary_single_cell_rows():
    # A type that is already one-cell-per-rectangle splits to itself.
    t = golden("t_id")
    assert horizontal_type(t) == t
