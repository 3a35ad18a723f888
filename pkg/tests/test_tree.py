import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import eleven_tree, path, relabel, star
from quantree.errors import BoundExceededError, InconsistentInputError, ParseError
from quantree.tree import (
    RootedTree,
    canonical_code,
    enumerate_trees,
    make_snowflake,
    principal_subforest,
    random_tree,
    tree_centers,
)


def test_invalid_trees_rejected():
    with pytest.raises(ValueError):
        RootedTree(3, 0, ((0, 1),))
    with pytest.raises(ValueError):
        RootedTree(4, 0, ((0, 1), (1, 2), (2, 0)))
    with pytest.raises(ValueError):
        RootedTree(2, 5, ((0, 1),))


def test_subforest_of_path():
    f = principal_subforest(path(3))
    assert len(f.components) == 1
    assert f.components[0].vertices == (1, 2)
    assert f.degree_in_T[1] == 2 and f.degree_in_T[2] == 1
    assert f.forest_degree(1) == 1


def test_subforest_of_star():
    f = principal_subforest(star(3))
    assert len(f.components) == 3
    assert all(len(c.vertices) == 1 for c in f.components)
    assert all(f.degree_in_T[v] == 1 for v in (1, 2, 3))


def test_subforest_of_eleven():
    f = principal_subforest(eleven_tree())
    sizes = sorted(len(c.vertices) for c in f.components)
    assert sizes == [1, 1, 8]
    big = max(f.components, key=lambda c: len(c.vertices))
    assert f.degree_in_T[big.root] == 3
    assert f.forest_degree(big.root) == 2


def test_subforest_single_vertex():
    with pytest.raises(InconsistentInputError, match="no edges to delete"):
        principal_subforest(RootedTree(1, 0, ()))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32))
def test_subforest_invariants(p, seed):
    t = random_tree(p, random.Random(seed))
    assert sum(t.degrees) == 2 * (p - 1)
    if p < 2:
        return
    f = principal_subforest(t)
    assert len(f.components) == t.degree(t.root)
    assert sum(len(c.vertices) for c in f.components) == p - 1
    tops = {c.root for c in f.components}
    for c in f.components:
        for v in c.vertices:
            assert f.degree_in_T[v] - f.forest_degree(v) == (1 if v in tops else 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.integers(0, 2**32))
def test_codes_invariant_under_relabeling(p, seed):
    rng = random.Random(seed)
    t = random_tree(p, rng)
    u = relabel(t, rng)
    assert canonical_code(t, "rooted") == canonical_code(u, "rooted")
    assert canonical_code(t, "unrooted") == canonical_code(u, "unrooted")


def test_code_examples():
    a = star(3)
    b = RootedTree(4, 2, ((2, 0), (1, 2), (2, 3)))
    assert canonical_code(a) == canonical_code(b)
    end, mid = path(3), path(3, 1)
    assert canonical_code(end) != canonical_code(mid)
    assert canonical_code(end, "unrooted") == canonical_code(mid, "unrooted")
    assert canonical_code(path(4), "unrooted") != canonical_code(star(3), "unrooted")


def test_centers():
    assert tree_centers(path(5)) == [2]
    assert sorted(tree_centers(path(4))) == [1, 2]


@pytest.mark.parametrize("p", range(1, 11))
def test_free_counts_match_networkx(p):
    ours = {canonical_code(t, "unrooted") for t in enumerate_trees(p, "free")}
    assert len(ours) == len(list(enumerate_trees(p, "free")))
    assert len(ours) == sum(1 for _ in nx.nonisomorphic_trees(p)) if p > 1 else len(ours) == 1


@pytest.mark.parametrize("p,count", list(enumerate([1, 1, 2, 4, 9, 20, 48, 115, 286], start=1)))
def test_rooted_counts(p, count):
    trees = list(enumerate_trees(p, "rooted"))
    assert len(trees) == count
    assert len({canonical_code(t) for t in trees}) == count


def test_rooted_counts_brute_force():
    # every labeled tree on 6 vertices with every root, deduplicated
    from itertools import product
    seen = set()
    for seq in product(range(6), repeat=4):
        g = nx.from_prufer_sequence(list(seq))
        edges = tuple(tuple(e) for e in g.edges)
        for r in range(6):
            seen.add(canonical_code(RootedTree(6, r, edges)))
    assert len(seen) == 20


def test_enumerate_examples_and_bound():
    assert len(list(enumerate_trees(4, "free"))) == 2
    assert len(list(enumerate_trees(7, "free"))) == 11
    assert len(list(enumerate_trees(1, "rooted"))) == 1
    with pytest.raises(BoundExceededError):
        list(enumerate_trees(13, "free"))


def test_snowflakes():
    s = make_snowflake([1, 1, 1])
    assert canonical_code(s) == canonical_code(star(3))
    s = make_snowflake([3, 4])
    assert s.p == 8 and s.degree(s.root) == 2
    assert sorted(s.degree(c) for c in s.children[s.root]) == [3, 4]
    spider = RootedTree(7, 0, ((0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)))
    assert canonical_code(make_snowflake([2, 2, 2])) == canonical_code(spider)
    with pytest.raises(ValueError):
        make_snowflake([])


def test_json_round_trip_and_errors():
    t = eleven_tree()
    assert RootedTree.from_json(json.dumps(t.to_json())) == t
    with pytest.raises(ParseError):
        RootedTree.from_json("{not json")
    with pytest.raises(ParseError):
        RootedTree.from_json({"p": 2, "edges": [[0, 1]]})
    with pytest.raises(ParseError):
        RootedTree.from_json({"p": 3, "root": 0, "edges": [[0, 1]]})


def test_dot_marks_root():
    dot = path(3, 1).to_dot()
    assert dot.startswith("graph T {")
    assert '1 [label="1", shape=doublecircle, root=true];' in dot
    assert dot.count("--") == 2


def test_from_shape_and_reroot():
    t = eleven_tree()
    u = RootedTree.from_shape(t.shape())
    assert u.root == 0 and canonical_code(u) == canonical_code(t)
    assert canonical_code(t.rerooted(3), "unrooted") == canonical_code(t, "unrooted")
