import random

import pytest

from quantree.tree import RootedTree, make_snowflake

# root 0: two leaves and an inner vertex 3; 3 has children 4 (two leaves) and 5 (three leaves)
ELEVEN_EDGES = ((0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (4, 6), (4, 7), (5, 8), (5, 9), (5, 10))


def eleven_tree() -> RootedTree:
    return RootedTree(11, 0, ELEVEN_EDGES)


def path(p: int, root: int = 0) -> RootedTree:
    return RootedTree(p, root, tuple((i, i + 1) for i in range(p - 1)))


def star(leaves: int) -> RootedTree:
    return RootedTree(leaves + 1, 0, tuple((0, i) for i in range(1, leaves + 1)))


def relabel(t: RootedTree, rng: random.Random) -> RootedTree:
    perm = list(range(t.p))
    rng.shuffle(perm)
    return RootedTree(t.p, perm[t.root], tuple((perm[a], perm[b]) for a, b in t.edges))


@pytest.fixture
def eleven():
    return eleven_tree()


@pytest.fixture
def example_trees():
    """Small zoo used for round trips through the CLI."""
    return {
        "P2": path(2),
        "P3_end": path(3),
        "P3_center": path(3, 1),
        "star3": star(3),
        "eleven": eleven_tree(),
        "snow_34": make_snowflake([3, 4]),
        "snow_222": make_snowflake([2, 2, 2]),
        "P6_mid": path(6, 2),
    }
