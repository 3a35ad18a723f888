"""Rooted trees, canonical codes, enumeration and snowflake construction.

Internally a rooted shape is a nested tuple: a vertex is the sorted tuple of
its children's shapes, so a leaf is ``()``.  Sorted nested tuples are a
canonical form for rooted trees, which makes them usable as dict keys.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Literal

from .errors import BoundExceededError, InconsistentInputError, ParseError

Shape = tuple  # recursive: tuple[Shape, ...]

DEFAULT_ENUMERATION_BOUND = 12


@dataclass(frozen=True)
class RootedTree:
    p: int
    root: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(tuple(int(x) for x in e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.p < 1:
            raise ValueError("a tree needs at least one vertex")
        if not 0 <= self.root < self.p:
            raise ValueError(f"root {self.root} is not a vertex id in [0, {self.p})")
        if len(edges) != self.p - 1:
            raise ValueError(f"{len(edges)} edges for {self.p} vertices; a tree has p-1")
        for a, b in edges:
            if not (0 <= a < self.p and 0 <= b < self.p) or a == b:
                raise ValueError(f"bad edge {(a, b)}")
        seen = {self.root}
        stack = [self.root]
        adj = self.adjacency
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.p:
            raise ValueError("edges do not form a connected tree")

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.p)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(n) for n in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        """Children lists when edges are directed away from the root."""
        kids: list[tuple[int, ...]] = [()] * self.p
        parent = {self.root: None}
        order = deque([self.root])
        while order:
            v = order.popleft()
            cs = tuple(w for w in self.adjacency[v] if w != parent[v])
            kids[v] = cs
            for w in cs:
                parent[w] = v
                order.append(w)
        return tuple(kids)

    def depths(self) -> dict[int, int]:
        out = {self.root: 0}
        order = deque([self.root])
        while order:
            v = order.popleft()
            for w in self.children[v]:
                out[w] = out[v] + 1
                order.append(w)
        return out

    def rerooted(self, root: int) -> "RootedTree":
        return RootedTree(self.p, root, self.edges)

    # -- shapes ---------------------------------------------------------------
    def shape(self) -> Shape:
        return _shape_of(self.children, self.root)

    def subtree_shape(self, v: int) -> Shape:
        return _shape_of(self.children, v)

    @classmethod
    def from_shape(cls, shape: Shape) -> "RootedTree":
        """Build a tree with BFS numbering, root 0."""
        edges = []
        order = deque([(shape, 0)])
        nxt = 1
        while order:
            s, v = order.popleft()
            for child in s:
                edges.append((v, nxt))
                order.append((child, nxt))
                nxt += 1
        return cls(nxt, 0, tuple(edges))

    def canonical(self) -> "RootedTree":
        """Canonically labeled representative of this rooted shape."""
        return RootedTree.from_shape(self.shape())

    # -- formats ----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"p": self.p, "root": self.root, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "RootedTree":
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ParseError(f"tree JSON: {e}") from None
        try:
            return cls(int(data["p"]), int(data["root"]), tuple(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError) as e:
            raise ParseError(f"tree JSON must have p, root, edges: {e}") from None
        except ValueError as e:
            raise ParseError(f"invalid tree: {e}") from None

    def to_dot(self, name: str = "T") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.p):
            attrs = f'label="{v}"'
            if v == self.root:
                attrs += ", shape=doublecircle, root=true"
            lines.append(f"  {v} [{attrs}];")
        for a, b in self.edges:
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _shape_of(children, v) -> Shape:
    # iterative post-order; recursion depth would be p for paths
    out: dict[int, Shape] = {}
    stack = [(v, False)]
    while stack:
        u, done = stack.pop()
        if done:
            out[u] = tuple(sorted(out[c] for c in children[u]))
        else:
            stack.append((u, True))
            stack.extend((c, False) for c in children[u])
    return out[v]


@lru_cache(maxsize=None)
def shape_size(shape: Shape) -> int:
    return 1 + sum(shape_size(c) for c in shape)


@lru_cache(maxsize=None)
def shape_code(shape: Shape) -> str:
    """AHU parenthesis code."""
    return "(" + "".join(sorted(shape_code(c) for c in shape)) + ")"


# ---------------------------------------------------------------------------
# Principal subforest
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ForestComponent:
    root: int  # the neighbour of the deleted root
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DegreeLabeledForest:
    """The forest left after deleting the root; degrees still counted in the full tree."""

    components: tuple[ForestComponent, ...]
    degree_in_T: dict = field(hash=False)
    children: tuple[tuple[int, ...], ...] = field(hash=False, repr=False)

    def forest_degree(self, v: int) -> int:
        for comp in self.components:
            if v in comp.vertices:
                return sum(v in e for e in comp.edges)
        raise KeyError(v)


def principal_subforest(t: RootedTree) -> DegreeLabeledForest:
    if t.p < 2:
        raise InconsistentInputError("no edges to delete: single-vertex tree")
    comps = []
    for c in t.children[t.root]:
        verts = []
        stack = [c]
        while stack:
            v = stack.pop()
            verts.append(v)
            stack.extend(t.children[v])
        vs = set(verts)
        edges = tuple(e for e in t.edges if e[0] in vs and e[1] in vs)
        comps.append(ForestComponent(c, tuple(sorted(verts)), edges))
    degs = {v: t.degree(v) for v in range(t.p) if v != t.root}
    return DegreeLabeledForest(tuple(comps), degs, t.children)


# ---------------------------------------------------------------------------
# Canonical codes
# ---------------------------------------------------------------------------

def tree_centers(t: RootedTree) -> list[int]:
    """One or two centers, found by repeatedly stripping leaves."""
    if t.p <= 2:
        return list(range(t.p))
    deg = list(t.degrees)
    layer = [v for v in range(t.p) if deg[v] == 1]
    remaining = t.p
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in t.adjacency[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def canonical_code(t: RootedTree, mode: Literal["rooted", "unrooted"] = "rooted") -> str:
    if mode == "rooted":
        return shape_code(t.shape())
    if mode in ("unrooted", "free"):
        return min(shape_code(t.rerooted(c).shape()) for c in tree_centers(t))
    raise ValueError(f"unknown mode {mode!r}")


def free_shape(t: RootedTree) -> Shape:
    """Rooted shape at the center minimising the code; a canonical free-tree key."""
    return min((t.rerooted(c).shape() for c in tree_centers(t)), key=shape_code)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _attach_leaf_everywhere(shape: Shape) -> set[Shape]:
    out = {tuple(sorted(shape + ((),)))}
    for i, c in enumerate(shape):
        if i and shape[i - 1] == c:
            continue
        for grown in _attach_leaf_everywhere(c):
            out.add(tuple(sorted(shape[:i] + (grown,) + shape[i + 1:])))
    return out


@lru_cache(maxsize=None)
def rooted_shapes(p: int) -> tuple[Shape, ...]:
    """All rooted shapes on p vertices (generate by leaf attachment, dedupe canonically)."""
    if p < 1:
        return ()
    if p == 1:
        return ((),)
    found: set[Shape] = set()
    for s in rooted_shapes(p - 1):
        found |= _attach_leaf_everywhere(s)
    return tuple(sorted(found, key=shape_code))


@lru_cache(maxsize=None)
def free_shapes(p: int) -> tuple[Shape, ...]:
    found = {free_shape(RootedTree.from_shape(s)) for s in rooted_shapes(p)}
    return tuple(sorted(found, key=shape_code))


def enumerate_trees(
    p: int,
    mode: Literal["rooted", "free"] = "free",
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> Iterator[RootedTree]:
    """One representative per isomorphism class, ordered by canonical code."""
    if p < 1:
        raise ValueError("p must be positive")
    if p > bound:
        raise BoundExceededError(f"p={p} exceeds enumeration bound {bound}")
    if mode == "rooted":
        shapes = rooted_shapes(p)
    elif mode in ("free", "unrooted"):
        shapes = free_shapes(p)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for s in shapes:
        yield RootedTree.from_shape(s)


def make_snowflake(arm_degrees) -> RootedTree:
    """Center root with one arm vertex per entry d, each carrying d-1 leaves."""
    arms = sorted(int(d) for d in arm_degrees)
    if not arms:
        raise ValueError("snowflake needs at least one arm")
    if arms[0] < 1:
        raise ValueError("arm degrees must be positive")
    return RootedTree.from_shape(tuple(sorted(((),) * (d - 1) for d in arms)))


def random_tree(p: int, rng: random.Random) -> RootedTree:
    """Uniform labeled tree via a random Pruefer sequence, with a random root."""
    if p == 1:
        return RootedTree(1, 0, ())
    if p == 2:
        return RootedTree(2, rng.randrange(2), ((0, 1),))
    seq = [rng.randrange(p) for _ in range(p - 2)]
    degree = [1] * p
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(p) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = [v for v in range(p) if degree[v] == 1]
    edges.append((u, w))
    return RootedTree(p, rng.randrange(p), tuple(edges))
