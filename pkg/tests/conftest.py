import os
import random
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from failover.graph import Graph, edge_list

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# Netrail as drawn: v1..v7 become 0..6
NETRAIL_EDGES = [(1, 2), (2, 3), (3, 4), (4, 5), (4, 1), (5, 1), (1, 6), (2, 6), (1, 7), (2, 7)]


def netrail() -> Graph:
    return edge_list([(a - 1, b - 1) for a, b in NETRAIL_EDGES], 7, "Netrail")


@pytest.fixture
def netrail_graph():
    return netrail()


@st.composite
def graphs(draw, min_n=2, max_n=7, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [e for e, k in zip(pairs, keep) if k]
    if connected:
        # thread a random spanning path so the graph is connected
        order = draw(st.permutations(range(n)))
        edges = sorted(set(edges) | {tuple(sorted(p)) for p in zip(order, order[1:])})
    return edge_list(edges, n)


def random_outerplanar(rng: random.Random, n: int, keep: float = 0.8) -> Graph:
    """Chords of a recursively split polygon, thinned and relabeled."""
    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)} if n > 2 else {(0, 1)}

    def split(poly):
        if len(poly) < 4:
            return
        i = rng.randrange(2, len(poly) - 1)
        edges.add(tuple(sorted((poly[0], poly[i]))))
        split(poly[: i + 1])
        split(poly[i:] + [poly[0]])

    if n > 3:
        split(list(range(n)))
    kept = [e for e in sorted(edges) if e[0] != e[1] and rng.random() < keep]
    perm = list(range(n))
    rng.shuffle(perm)
    return edge_list([(perm[u], perm[v]) for u, v in kept], n)


@st.composite
def outerplanar_graphs(draw, max_n=8):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(2, max_n))
    return random_outerplanar(random.Random(seed), n, draw(st.sampled_from([0.6, 0.8, 1.0])))
