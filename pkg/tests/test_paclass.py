"""Decision procedure: verdicts, witnesses, sweep bounds, determinism."""

from __future__ import annotations

import json
import random

import numpy as np
import pytest

from geotype import (
    CellLimitExceeded,
    decide_pseudo_anosov,
    inverse,
    is_mixing,
    power,
)
from geotype.paclass import (
    _impasse_scan,
    _scan_type1,
    _scan_type2,
    _scan_type3,
    columns_of,
    count_smaller_to_right,
)
from geotype.reference import (
    fixed_boundaries,
    has_impasse,
    satisfies_type1,
    satisfies_type2,
    satisfies_type3,
    type1_clause,
    type2_clause,
    type3_clause,
)

from conftest import golden, random_corpus, random_type


def test_golden_verdicts_are_pinned():
    cases = {
        "t_id": ("not-pseudo-anosov", "double-boundary", 0),
        "t_swap": ("not-pseudo-anosov", "not-mixing", 0),
        "t_hs": ("not-pseudo-anosov", "impasse", 1),
        "t_db": ("not-pseudo-anosov", "type2", 3),
        "t_aw": ("pseudo-anosov", None, None),
    }
    for name, (status, kind, m) in cases.items():
        v = decide_pseudo_anosov(golden(name))
        assert v.status == status, name
        if kind is None:
            assert v.witness is None
        else:
            assert v.witness.kind == kind, name
            assert v.witness.m == m, name


def test_accepted_type_sweeps_the_full_obstruction_range():
    t = golden("t_aw")
    v = decide_pseudo_anosov(t)
    assert v.status == "pseudo-anosov"
    assert v.iterates_checked == 6 * t.n


def test_sweep_bounds_are_respected_on_random_corpus():
    for t in random_corpus(seed=301, count=120, max_n=3):
        v = decide_pseudo_anosov(t, max_cells=200000)
        if v.witness is None:
            assert v.status == "pseudo-anosov"
            assert v.iterates_checked == 6 * t.n
        elif v.witness.kind == "impasse":
            assert 1 <= v.witness.m <= 2 * t.n + 1
        elif v.witness.kind in ("type1", "type2", "type3"):
            assert 1 <= v.witness.m <= 6 * t.n
        else:
            assert v.witness.kind in ("double-boundary", "not-mixing")
            assert v.witness.m == 0


def _verify_witness(t, v):
    """Re-evaluate the verdict's evidence against the clause transcriptions."""
    w = v.witness
    if w is None:
        assert v.status == "pseudo-anosov"
        return
    if w.kind == "not-mixing":
        assert is_mixing(t) == (False, None)
        return
    if w.kind == "double-boundary":
        side = w.extra["side"]
        s = t if side == "s" else inverse(t)
        cycle = list(w.indices)
        assert cycle, "cycle must be non-empty"
        for pos, k in enumerate(cycle):
            assert s.h(k) == 1
            assert s.image(k, 1)[0] == cycle[(pos + 1) % len(cycle)]
        return
    tp = power(t, w.m)
    if w.kind == "impasse":
        ((i, j),) = w.indices
        k1, l1, e1 = tp.image(i, j)
        k2, l2, e2 = tp.image(i, j + 1)
        assert k1 == k2 and abs(l1 - l2) == 1 and e1 == -e2
        return
    (ia, ja), (ib, jb) = w.indices
    a_low, a_up = tp.image(ia, ja), tp.image(ia, ja + 1)
    b_low, b_up = tp.image(ib, jb), tp.image(ib, jb + 1)
    if w.kind == "type1":
        assert type1_clause(a_low, a_up, b_low, b_up)
    elif w.kind == "type2":
        assert type2_clause(a_low, a_up, b_low, b_up)
    else:
        assert w.kind == "type3"
        pinned = fixed_boundaries(tp)
        by_id = {(k, side): (k, side, pos) for (k, side, pos) in pinned}
        c1, c2, c3 = (by_id[ks] for ks in w.extra["fixed_boundaries"])
        assert type3_clause(c1, c2, c3, a_low, a_up, b_low, b_up)


def test_witnesses_self_verify_on_goldens_and_random_corpus():
    kinds = set()
    for name in ("t_id", "t_swap", "t_hs", "t_db", "t_aw"):
        t = golden(name)
        v = decide_pseudo_anosov(t)
        _verify_witness(t, v)
        kinds.add(v.witness.kind if v.witness else "accepted")
    rng = random.Random(302)
    for _ in range(150):
        t = random_type(rng, max_n=3)
        v = decide_pseudo_anosov(t, max_cells=200000)
        _verify_witness(t, v)
        kinds.add(v.witness.kind if v.witness else "accepted")
    # the corpus should exercise most verdict shapes
    assert {"accepted", "impasse", "type2", "double-boundary"} <= kinds


def test_scans_match_reference_search_on_random_corpus():
    for t in random_corpus(seed=303, count=100, max_n=3):
        for m in (1, 2):
            tp = power(t, m)
            c = columns_of(tp)
            assert (_impasse_scan(c) is not None) == (has_impasse(tp) is not None)
            assert (_scan_type1(c) is not None) == (satisfies_type1(tp) is not None)
            assert (_scan_type2(c) is not None) == (satisfies_type2(tp) is not None)
            assert (_scan_type3(c) is not None) == (satisfies_type3(tp) is not None)


def test_parallel_jobs_give_identical_verdicts():
    names = ("t_id", "t_swap", "t_hs", "t_db", "t_aw")
    for name in names:
        t = golden(name)
        v1 = decide_pseudo_anosov(t)
        v3 = decide_pseudo_anosov(t, jobs=3)
        assert json.dumps(v1.to_json(), sort_keys=True) == json.dumps(
            v3.to_json(), sort_keys=True
        )
    for t in random_corpus(seed=304, count=25, max_n=3):
        v1 = decide_pseudo_anosov(t, max_cells=100000)
        v3 = decide_pseudo_anosov(t, max_cells=100000, jobs=3)
        assert v1.to_json() == v3.to_json()


def test_cell_limit_aborts_the_sweep():
    with pytest.raises(CellLimitExceeded):
        decide_pseudo_anosov(golden("t_aw"), max_cells=100)


def test_count_smaller_to_right_brute_force_oracle():
    rng = np.random.default_rng(305)
    for _ in range(200):
        size = int(rng.integers(0, 30))
        vals = rng.integers(0, 7, size=size).astype(np.int64)
        got = count_smaller_to_right(vals)
        want = [int(np.sum(vals[i + 1:] < vals[i])) for i in range(size)]
        assert got.tolist() == want


def test_verdict_report_shape():
    v = decide_pseudo_anosov(golden("t_hs"))
    data = v.to_json()
    assert data == {
        "status": "not-pseudo-anosov",
        "witness": {"kind": "impasse", "m": 1, "indices": [[1, 1]], "extra": {}},
        "iterates_checked": 1,
    }
