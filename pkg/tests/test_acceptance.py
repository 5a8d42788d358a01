"""End-to-end acceptance checks at desk scale.

Each test pins one finished-library contract: exact matrix-algebra oracles,
decision verdicts under stated time budgets, boundary-code combinatorics,
refinement counting, census stability across presentations, and the joint
comparison pipeline.  Random corpora are seeded, so every run checks the
same instances.
"""

from __future__ import annotations

import time

import pytest

from geotype import (
    CellLimitExceeded,
    boundary_labels,
    corner_refine,
    compare_invariants,
    decide_pseudo_anosov,
    enumerate_periodic_orbits,
    gamma,
    genus,
    has_corner_property,
    horizontal_type,
    incidence_matrix,
    inverse,
    is_binary,
    is_mixing,
    is_s_boundary_orbit,
    joint_refine,
    load_type,
    matrix_power,
    periodic_boundary_codes,
    power,
    prepare_for_census,
    s_adjacent,
    s_boundary_code,
    s_refine,
    serialize_type,
    singularity_classes,
    u_adjacent,
)

from conftest import GOLDEN_DIR, golden, golden_bytes, random_corpus

CORPUS_SEED = 90210
CORPUS_SIZE = 220  # >= 200 random valid types with n <= 4 and h_i <= 3


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(seed=CORPUS_SEED, count=CORPUS_SIZE, max_n=4, max_h=3)


def _pa_goldens():
    """Pseudo-Anosov goldens, binarized where an operation demands it.

    The cat-map type is certified by the decision procedure; the sphere
    quotient and the double cover are certified by their constructions
    (running the full 6n-power sweep on 38- and 14-rectangle types would
    dwarf the cell budget, and nothing in it would be news).
    """
    return {
        "t_aw": golden("t_aw"),
        "t_sq": golden("t_sq"),
        "t_g2": golden("t_g2"),
    }


def _binary_form(t):
    return t if is_binary(t) else horizontal_type(t)


def test_power_matches_exact_matrix_powers_within_ten_seconds(corpus):
    """Every small power of every corpus type reproduces the exact integer
    matrix power of its incidence matrix, in under ten seconds total."""
    start = time.perf_counter()
    for t in corpus:
        a = incidence_matrix(t)
        for m in (1, 2, 3, 4):
            assert incidence_matrix(power(t, m)) == matrix_power(a, m)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"power oracle sweep took {elapsed:.2f}s"


def test_inverse_algebra_on_the_same_corpus(corpus):
    """Reversing twice is the identity, and reversing commutes with powers,
    as exact equalities of canonical objects."""
    for t in corpus:
        assert inverse(inverse(t)) == t
        for m in (2, 3, 4):
            assert inverse(power(t, m)) == power(inverse(t), m)
        assert serialize_type(inverse(inverse(t))) == serialize_type(t)


def test_horizontal_split_is_binary_and_counts_cells(corpus):
    """Cell splitting always yields a binary incidence matrix on one
    rectangle per original cell; the split of the stored doubling type
    reproduces the stored full-shift file byte for byte."""
    for t in corpus:
        split = horizontal_type(t)
        assert is_binary(split)
        assert split.n == sum(t.h(i) for i in range(1, t.n + 1))
    split = horizontal_type(load_type(GOLDEN_DIR / "t_db.gt"))
    assert serialize_type(split).encode() == golden_bytes("t_fs")


def test_decision_verdicts_on_goldens_within_one_second_each():
    """The five stored verdict cases each resolve in under a second with
    the pinned classification, and the iterate sweeps respect their stated
    bounds: impasses are found within 2n+1 powers, obstructions within 6n
    powers, and an acceptance exhausts exactly the 6n-power sweep."""
    expectations = {
        "t_id": ("not-pseudo-anosov", "double-boundary"),
        "t_swap": ("not-pseudo-anosov", "not-mixing"),
        "t_hs": ("not-pseudo-anosov", "impasse"),
        "t_db": ("not-pseudo-anosov", None),
        "t_aw": ("pseudo-anosov", None),
    }
    for name, (status, kind) in expectations.items():
        t = golden(name)
        start = time.perf_counter()
        verdict = decide_pseudo_anosov(t)
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"decide({name}) took {elapsed:.2f}s"
        assert verdict.status == status, name
        witness = verdict.witness
        if kind is not None:
            assert witness.kind == kind, name
        if name == "t_hs":
            assert witness.m == 1
        if name == "t_db":
            assert witness.kind in ("type1", "type2", "type3")
            assert witness.m <= 6 * t.n
        if witness is not None and witness.kind == "impasse":
            assert witness.m <= 2 * t.n + 1
        if status == "pseudo-anosov":
            assert verdict.iterates_checked == 6 * t.n


def _expanded(code, length):
    word = list(code.preperiod)
    cycle = list(code.period)
    while len(word) < length:
        word.extend(cycle)
    return tuple(word[:length])


def _codes_pairwise_distinct(t):
    codes = [s_boundary_code(t, lab) for lab in boundary_labels(t)]
    assert len(codes) == 2 * t.n
    horizon = 2 * max(len(c.preperiod) for c in codes) + 2 * max(
        len(c.period) for c in codes
    )
    expanded = {_expanded(c, horizon + 1) for c in codes}
    assert len(expanded) == 2 * t.n, "positive codes must be pairwise distinct"


def test_boundary_codes_cycle_fast_and_separate_on_accepted_types(corpus):
    """Every side itinerary falls into its cycle within 2n steps on every
    corpus type; on types the decision procedure accepts (and on the
    construction-certified goldens) the 2n positive codes are distinct."""
    for t in list(corpus) + [golden(n) for n in ("t_id", "t_hs", "t_aw")]:
        bound = 2 * t.n
        for lab in boundary_labels(t):
            seen = {}
            cur = lab
            step = 0
            while cur not in seen:
                seen[cur] = step
                cur = gamma(t, cur)
                step += 1
            assert seen[cur] <= bound, (t, lab)
    accepted = [golden("t_aw")]
    for t in corpus:
        try:
            verdict = decide_pseudo_anosov(t, max_cells=150000)
        except CellLimitExceeded:
            continue
        if verdict.status == "pseudo-anosov":
            accepted.append(t)
    # the construction-certified goldens join the distinctness check
    accepted += [golden("t_sq"), golden("t_g2")]
    for t in accepted:
        _codes_pairwise_distinct(t)


def test_refinement_adds_one_rectangle_per_orbit_point():
    """Cutting along a non-boundary orbit of period P grows an n-rectangle
    type to exactly n + P rectangles, and the result validates with
    consistent row and column sums."""
    refined_count = 0
    for name, t in _pa_goldens().items():
        t = _binary_form(t)
        orbits = [
            o
            for o in enumerate_periodic_orbits(t, 3)
            if not is_s_boundary_orbit(t, o)
        ]
        for orbit in orbits:
            refined, _ = s_refine(t, [orbit])
            assert refined.n == t.n + len(orbit.word), (name, orbit)
            a = incidence_matrix(refined)
            for i in range(1, refined.n + 1):
                assert sum(a[i - 1]) == refined.h(i)
            for k in range(1, refined.n + 1):
                assert sum(row[k - 1] for row in a) == refined.v(k)
            refined_count += 1
    assert refined_count > 10  # the sweep must not be vacuous


def test_corner_refinement_reaches_a_fixed_point():
    """Corner refinement lands on a type with the corner property on every
    pseudo-Anosov golden and is idempotent there."""
    for name, t in _pa_goldens().items():
        refined = corner_refine(_binary_form(t))
        assert has_corner_property(refined), name
        assert corner_refine(refined) == refined, name


def test_genus_oracles_within_one_second_each():
    """The torus golden has genus one with only size-four regular classes;
    the sphere golden has genus zero with exactly four size-two spines."""
    start = time.perf_counter()
    torus = genus(golden("t_aw"))
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    assert torus.genus == 1
    assert all(c.size == 4 for c in torus.classes)

    start = time.perf_counter()
    sphere = genus(golden("t_sq"))
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    assert sphere.genus == 0
    spines = [c for c in sphere.classes if c.spine]
    assert len(spines) == 4
    assert all(c.size == 2 for c in spines)


def test_census_is_invariant_under_power_refinement_and_cornering():
    """Genus and the prong multiset survive taking powers (m <= 3), cutting
    along short orbits (period <= 3), and corner refinement, on every
    pseudo-Anosov golden."""
    for name, t in _pa_goldens().items():
        base = genus(t)
        signature = (base.genus, base.prongs)
        for m in (2, 3):
            rep = genus(power(t, m))
            assert (rep.genus, rep.prongs) == signature, (name, "power", m)
        binary = _binary_form(t)
        orbits = [
            o
            for o in enumerate_periodic_orbits(binary, 3)
            if not is_s_boundary_orbit(binary, o)
        ]
        for orbit in orbits[:2]:
            rep = genus(s_refine(binary, [orbit])[0])
            assert (rep.genus, rep.prongs) == signature, (name, "cut", orbit)
        rep = genus(corner_refine(binary))
        assert (rep.genus, rep.prongs) == signature, (name, "corner")


def test_census_class_structure_on_pa_goldens():
    """Classes have even sizes summing to the full code count, and every
    code has exactly one stable and one unstable partner."""
    for name, t in _pa_goldens().items():
        prepared = prepare_for_census(t)
        classes = singularity_classes(prepared)
        codes = periodic_boundary_codes(prepared)
        assert sum(c.size for c in classes) == len(codes)
        assert all(c.size % 2 == 0 for c in classes)
        for a in codes:
            assert sum(
                1 for b in codes if b != a and s_adjacent(prepared, a, b)
            ) == 1
            assert sum(
                1 for b in codes if b != a and u_adjacent(prepared, a, b)
            ) == 1


def test_orbit_enumeration_matches_trace_oracle(corpus):
    """On binary mixing types, weighted primitive-orbit counts reproduce the
    exact traces of matrix powers up to m = 6."""
    pool = [t for t in corpus if is_binary(t) and is_mixing(t)[0]]
    pool += [_binary_form(golden(name)) for name in ("t_fs", "t_sq", "t_g2")]
    pool = [t for t in pool if is_mixing(t)[0]]
    assert len(pool) > 20
    for t in pool:
        orbs = enumerate_periodic_orbits(t, 6, cap=12)
        per_period: dict[int, int] = {}
        for o in orbs:
            per_period[len(o.word)] = per_period.get(len(o.word), 0) + 1
        a = incidence_matrix(t)
        for m in range(1, 7):
            lhs = sum(d * per_period.get(d, 0) for d in range(1, m + 1) if m % d == 0)
            rhs = sum(matrix_power(a, m)[i][i] for i in range(t.n))
            assert lhs == rhs, (t, m)


def test_joint_pipeline_end_to_end_under_five_seconds():
    """Jointly refining the cat-map type with one of its own cuts yields two
    corner-property types that compare as compatible; against the genus-two
    golden the comparison must separate them.  All within five seconds."""
    start = time.perf_counter()
    base = _binary_form(golden("t_aw"))
    orbit = next(
        o
        for o in enumerate_periodic_orbits(base, 3)
        if not is_s_boundary_orbit(base, o)
    )
    cut, _ = s_refine(base, [orbit])
    left, right = joint_refine(base, cut)
    assert has_corner_property(left) and has_corner_property(right)
    same = compare_invariants(left, right)
    assert same.verdict.startswith("compatible")
    different = compare_invariants(golden("t_aw"), golden("t_g2"))
    assert different.verdict == "necessarily distinct"
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"joint pipeline took {elapsed:.2f}s"
