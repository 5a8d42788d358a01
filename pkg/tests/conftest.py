"""Shared fixtures and generators for the test suite.

The golden corpus under tests/goldens/ was produced by tools/build_goldens.py
from exact geometric constructions (unit-square Markov maps, a golden-ratio
torus automorphism, its branched double cover, and the sphere quotient); the
construction itself certifies the expected invariants recorded in the tests.
"""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from geotype import GeometricType, load_type, make_type

GOLDEN_DIR = Path(__file__).resolve().parent / "goldens"

GOLDEN_NAMES = (
    "t_id",
    "t_swap",
    "t_hs",
    "t_db",
    "t_fs",
    "t_fs_refined_12",
    "t_aw",
    "t_sq",
    "t_g2",
)

# Goldens certified pseudo-Anosov: the cat-map type by the decision
# procedure, the double cover and sphere quotient by construction.
PA_GOLDEN_NAMES = ("t_aw", "t_sq", "t_g2")


def golden(name: str) -> GeometricType:
    return load_type(GOLDEN_DIR / f"{name}.gt")


def golden_bytes(name: str) -> bytes:
    return (GOLDEN_DIR / f"{name}.gt").read_bytes()


@pytest.fixture(scope="session")
def goldens() -> dict[str, GeometricType]:
    return {name: golden(name) for name in GOLDEN_NAMES}


def random_type(rng: random.Random, max_n: int = 4, max_h: int = 3) -> GeometricType:
    """One scrambled valid type: random cell counts, a random composition of
    the total into vertical counts, a random bijection of cells onto slots,
    and random signs.  Every output passes full validation by construction.
    """
    n = rng.randint(1, max_n)
    h = [rng.randint(1, max_h) for _ in range(n)]
    total = sum(h)
    if n == 1:
        v = [total]
    else:
        cuts = sorted(rng.sample(range(1, total), n - 1))
        v = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    slots = [(k, l) for k in range(1, n + 1) for l in range(1, v[k - 1] + 1)]
    rng.shuffle(slots)
    rows = []
    idx = 0
    for i in range(1, n + 1):
        for j in range(1, h[i - 1] + 1):
            k, l = slots[idx]
            idx += 1
            rows.append((i, j, k, l, rng.choice((1, -1))))
    return make_type(zip(h, v), rows)


def random_corpus(
    seed: int, count: int, max_n: int = 4, max_h: int = 3
) -> list[GeometricType]:
    rng = random.Random(seed)
    return [random_type(rng, max_n, max_h) for _ in range(count)]
