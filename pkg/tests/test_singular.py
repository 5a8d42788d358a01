"""Singularity census: adjacency, class structure, genus, invariance."""

from __future__ import annotations

from fractions import Fraction

import pytest

from geotype import (
    GeometricTypeError,
    corner_refine,
    genus,
    periodic_boundary_codes,
    power,
    prepare_for_census,
    s_adjacent,
    s_refine,
    singularity_classes,
    u_adjacent,
)

from conftest import golden


def test_genus_worked_example_torus():
    """The golden-ratio automorphism lives on the torus: no singular points,
    one regular boundary-periodic point of four quadrants."""
    rep = genus(golden("t_aw"))
    assert rep.genus == 1
    assert rep.euler_characteristic == 0
    assert rep.spine_count == 0
    assert [c.size for c in rep.classes] == [4]
    assert [c.prongs for c in rep.classes] == [2]
    assert rep.prongs == ()  # no non-regular points


def test_genus_worked_example_sphere():
    """The quotient by the point reflection is the sphere with four one-prong
    points (the pillowcase picture): chi = 2, genus 0."""
    rep = genus(golden("t_sq"))
    assert rep.genus == 0
    assert rep.euler_characteristic == 2
    assert rep.spine_count == 4
    assert sorted(c.size for c in rep.classes if c.spine) == [2, 2, 2, 2]
    assert rep.prongs == (1, 1, 1, 1)


def test_genus_worked_example_double_cover():
    """The branched double cover of the torus over two fixed points has two
    four-prong branch points and chi = -2: genus 2."""
    rep = genus(golden("t_g2"))
    assert rep.genus == 2
    assert rep.euler_characteristic == -2
    assert rep.prongs == (4, 4)
    assert rep.spine_count == 0
    assert sorted(c.size for c in rep.classes if c.prongs == 4) == [8, 8]


def test_census_classes_partition_the_codes_with_even_sizes():
    for name in ("t_aw", "t_sq", "t_g2"):
        prepared = prepare_for_census(golden(name))
        classes = singularity_classes(prepared)
        codes = periodic_boundary_codes(prepared)
        sizes = [c.size for c in classes]
        assert all(size % 2 == 0 for size in sizes)
        assert sum(sizes) == len(codes)
        seen = [code for c in classes for code in c.codes]
        assert len(seen) == len(set(seen)) == len(codes)


def test_partner_uniqueness_on_prepared_goldens():
    for name in ("t_aw", "t_sq", "t_g2"):
        prepared = prepare_for_census(golden(name))
        codes = periodic_boundary_codes(prepared)
        for a in codes:
            s_mates = [b for b in codes if b != a and s_adjacent(prepared, a, b)]
            u_mates = [b for b in codes if b != a and u_adjacent(prepared, a, b)]
            assert len(s_mates) == 1, (name, a)
            assert len(u_mates) == 1, (name, a)
            # mutual
            assert s_adjacent(prepared, s_mates[0], a)
            assert u_adjacent(prepared, u_mates[0], a)
            # a quadrant never borders itself
            assert not s_adjacent(prepared, a, a)
            assert not u_adjacent(prepared, a, a)


def test_euler_characteristic_formula():
    # chi = sum over classes of (1 - prongs/2), via quarters
    for name in ("t_aw", "t_sq", "t_g2"):
        rep = genus(golden(name))
        chi = sum(Fraction(1) - Fraction(c.prongs, 2) for c in rep.classes)
        assert rep.euler_characteristic == chi
        assert rep.genus == (2 - chi) / 2


def test_genus_invariant_under_power():
    for name in ("t_aw", "t_sq", "t_g2"):
        base = genus(golden(name))
        squared = genus(power(golden(name), 2))
        assert squared.genus == base.genus
        assert squared.prongs == base.prongs
        assert squared.spine_count == base.spine_count


def test_genus_invariant_under_refinement():
    from geotype import enumerate_periodic_orbits, is_s_boundary_orbit

    t = prepare_for_census(golden("t_aw"))
    base = genus(t)
    orbit = next(
        o
        for o in enumerate_periodic_orbits(t, 3)
        if not is_s_boundary_orbit(t, o)
    )
    refined, _ = s_refine(t, [orbit])
    again = genus(refined)
    assert (again.genus, again.prongs, again.spine_count) == (
        base.genus,
        base.prongs,
        base.spine_count,
    )
    cornered = genus(corner_refine(t))
    assert (cornered.genus, cornered.prongs) == (base.genus, base.prongs)


def test_census_rejects_unrealizable_types():
    # the two-symbol full shift presents a non-invertible map; its census
    # cannot close up into a surface and must say so rather than guess
    with pytest.raises(GeometricTypeError, match="non-realizable"):
        genus(golden("t_fs"))


def test_report_json_shape():
    data = genus(golden("t_aw")).to_json()
    assert data == {
        "genus": 1,
        "euler_characteristic_quarters": 0,
        "classes": [{"size": 4, "prongs": 2, "spine": False}],
        "spine_count": 0,
        "singular_prongs": [],
    }
