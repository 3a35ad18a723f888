"""Recover rooted tree shapes from the reduced ratio R = psi/psi^.

The expansion works top-down.  At a vertex with branch value T (sign-free
convention: T = -d z - sum_c 1/T_c, leaf T = -z):

1. the degree d is read from the behaviour T ~ -d z at infinity;
2. lim z (T + d z) equals the sum of 1/d_c over the children, so the child
   degrees form a unit-fraction multiset;
3. the remainder G = -(T + d z) = sum_c 1/T_c is split into child branches;
4. each child branch is expanded the same way.

Every 1/T_c is a Herglotz function (simple real poles, positive residues), so
poles never cancel when siblings are summed: the reduced denominator of each
1/T_c divides the reduced denominator of G.  Splitting uses that filter over
a memoized library of subtree branch values, which keeps the search complete
when siblings share poles, where plain partial fractions are ambiguous.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .charpoly import compute_psi, compute_psi_hat, compute_ratio, inverse_tail_of_shape, ratio_of_shape, tail_of_shape
from .errors import InconsistentInputError
from .exactalg import ONE, Z, Polynomial, RationalFunction
from .tree import DEFAULT_ENUMERATION_BOUND, RootedTree, Shape, canonical_code, rooted_shapes, shape_code, shape_size


# ---------------------------------------------------------------------------
# Limits at infinity
# ---------------------------------------------------------------------------

def root_degree_from_ratio(R: RationalFunction) -> int:
    """d = lim -R/z as z -> oo; must be a positive integer."""
    if R.num.degree != R.den.degree + 1:
        raise InconsistentInputError("not a valid quantum-tree ratio: deg num must be deg den + 1")
    d = -R.num.lc / R.den.lc
    if d.denominator != 1 or d < 1:
        raise InconsistentInputError(f"not a valid quantum-tree ratio: root degree limit {d}")
    return int(d)


def child_reciprocal_sum(F: RationalFunction, d: int, sign: int) -> Fraction:
    """Sum of 1/d_child for a branch value F = sign*d*z + sum_c 1/F_c."""
    rest = F - RationalFunction(Polynomial([0, sign * d]))
    if rest.is_zero():
        return Fraction(0)
    if rest.num.degree >= rest.den.degree:
        raise InconsistentInputError("branch remainder is not proper")
    if rest.num.degree < rest.den.degree - 1:
        return Fraction(0)
    return -sign * rest.num.lc / rest.den.lc


# ---------------------------------------------------------------------------
# Unit fractions
# ---------------------------------------------------------------------------

def egyptian_multisets(r, count: int, d_max: int) -> list[tuple[int, ...]]:
    """All d_1 <= ... <= d_count <= d_max with sum 1/d_i == r."""
    r = Fraction(r)
    out: list[tuple[int, ...]] = []

    def dfs(rem: Fraction, left: int, lo: int, acc: list[int]):
        if left == 0:
            if rem == 0:
                out.append(tuple(acc))
            return
        if rem <= 0:
            return
        # 1/d <= rem  and  left/d >= rem
        start = max(lo, -(-rem.denominator // rem.numerator))
        stop = min(d_max, int(left / rem))
        for d in range(start, stop + 1):
            acc.append(d)
            dfs(rem - Fraction(1, d), left - 1, d, acc)
            acc.pop()

    dfs(r, count, 1, [])
    return out


# ---------------------------------------------------------------------------
# Branch library and splitting
# ---------------------------------------------------------------------------

# Largest subtree kept in the branch library.  Splitting draws all siblings but
# one group of identical ones from the library; that group is determined by
# the remainder.  The search is therefore complete whenever at most one
# distinct sibling branch per vertex exceeds this size, which always holds for
# p_max <= 2 * LIBRARY_MAX_SIZE + 2.
LIBRARY_MAX_SIZE = DEFAULT_ENUMERATION_BOUND - 1
COMPLETE_UP_TO = 2 * LIBRARY_MAX_SIZE + 2


@dataclass(frozen=True)
class Branch:
    tail: RationalFunction       # T, sign-free
    inverse: RationalFunction    # 1/T
    degree: int
    min_size: int


@lru_cache(maxsize=None)
def _library(degree: int, max_size: int) -> tuple[Branch, ...]:
    """Distinct branch values of non-root subtrees with this top degree and <= max_size vertices.

    Sorted by (min_size, text); lists for different max_size share prefixes.
    """
    seen: dict[RationalFunction, Branch] = {}
    for n in range(degree, max_size + 1):
        for s in rooted_shapes(n):
            if len(s) != degree - 1:
                continue
            inv = inverse_tail_of_shape(s)
            if inv not in seen:
                seen[inv] = Branch(tail_of_shape(s), inv, degree, n)
    return tuple(sorted(seen.values(), key=lambda b: (b.min_size, str(b.inverse))))


def _library_fills(G: RationalFunction, degrees: tuple[int, ...], budget: int):
    """Yield (branches, remainder) for every multiset of library branches, one per degree entry.

    Each chosen 1/T must have its poles among the poles of the running
    remainder (no cancellation between Herglotz summands).
    """
    k = len(degrees)
    tail_min = [sum(degrees[i:]) for i in range(k + 1)]

    def rec(i, rem, used, chosen, last):
        if i == k:
            yield tuple(chosen), rem
            return
        if rem.is_zero():
            return
        d = degrees[i]
        room = min(budget - used - tail_min[i + 1], LIBRARY_MAX_SIZE)
        if room < d:
            return
        options = _library(d, room)
        start = last if i > 0 and degrees[i - 1] == d else 0
        den = rem.den
        for idx in range(start, len(options)):
            b = options[idx]
            if not b.inverse.den.divides(den):
                continue
            chosen.append(b)
            yield from rec(i + 1, rem - b.inverse, used + b.min_size, chosen, idx)
            chosen.pop()

    yield from rec(0, G, 0, [], 0)


def _determined_branch(rem: RationalFunction, mult: int, degree: int) -> Branch | None:
    """The branch of ``mult`` identical siblings summing to ``rem``, if it has the right degree."""
    if rem.is_zero():
        return None
    tail = rem.reciprocal() * mult
    if tail.num.degree != tail.den.degree + 1 or tail.num.lc / tail.den.lc != -degree:
        return None
    return Branch(tail, rem * Fraction(1, mult), degree, degree)


def _split(G: RationalFunction, degrees: tuple[int, ...], budget: int) -> list[tuple[Branch, ...]]:
    """All ways to write G = sum_j 1/T_j with T_j ~ -degrees[j] z, sizes fitting ``budget``.

    One group of equal-degree siblings (multiplicity mu) is taken from the
    remainder; the others come from the library.
    """
    found: dict[tuple, tuple[Branch, ...]] = {}
    for d_star in sorted(set(degrees)):
        for mu in range(1, degrees.count(d_star) + 1):
            rest = list(degrees)
            for _ in range(mu):
                rest.remove(d_star)
            for combo, rem in _library_fills(G, tuple(rest), budget - mu * d_star):
                b = _determined_branch(rem, mu, d_star)
                if b is None:
                    continue
                if any(c.inverse == b.inverse for c in combo):
                    b = next(c for c in combo if c.inverse == b.inverse)
                full = tuple(sorted(combo + (b,) * mu, key=lambda c: (c.degree, str(c.inverse))))
                key = tuple((c.degree, c.inverse) for c in full)
                if key not in found or sum(c.min_size for c in full) < sum(c.min_size for c in found[key]):
                    found[key] = full
    return [found[k] for k in sorted(found, key=str)]


def decompose_branches(G: RationalFunction, degrees, sign: int, budget: int | None = None):
    """Split G = sum_j 1/F_j with F_j ~ -sign*d_j*z, in the alternating-sign convention.

    ``sign`` is the sign of the parent vertex.  Returns a list of decompositions,
    each a list of (multiplicity, F_j) pairs; identical branches are grouped.
    ``budget`` bounds the total number of vertices below the parent.
    """
    degrees = tuple(sorted(int(d) for d in degrees))
    if budget is None:
        budget = LIBRARY_MAX_SIZE
    G_int = G if sign == 1 else -G
    results = []
    for combo in _split(G_int, degrees, budget):
        grouped: dict[RationalFunction, int] = {}
        for b in combo:
            grouped[b.tail] = grouped.get(b.tail, 0) + 1
        results.append([(m, t if sign == 1 else -t) for t, m in grouped.items()])
    return results


# ---------------------------------------------------------------------------
# Recursive expansion
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _expand(T: RationalFunction, degree: int, is_root: bool, budget: int) -> frozenset:
    """Shapes (with <= budget vertices) whose top vertex has branch value T and this degree."""
    k = degree if is_root else degree - 1
    G = -(T + RationalFunction(Polynomial([0, degree])))
    if k == 0:
        return frozenset({()}) if G.is_zero() and budget >= 1 else frozenset()
    if G.is_zero() or budget < 1 + k:
        return frozenset()
    if G.num.degree != G.den.degree - 1:
        return frozenset()
    r = -G.num.lc / G.den.lc
    shapes = set()
    d_max = budget - 1 - (k - 1)
    for degs in egyptian_multisets(r, k, d_max):
        if sum(degs) > budget - 1:
            continue
        for combo in _split(G, degs, budget - 1):
            mins = [b.min_size for b in combo]
            total_min = sum(mins)
            options = []
            for b, m in zip(combo, mins):
                sub = _expand(b.tail, b.degree, False, budget - 1 - (total_min - m))
                if not sub:
                    break
                options.append(sorted(sub, key=shape_code))
            else:
                for pick in itertools.product(*options):
                    if 1 + sum(shape_size(s) for s in pick) <= budget:
                        shapes.add(tuple(sorted(pick)))
    return frozenset(shapes)


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceRecord:
    vertex: int
    depth: int
    sign: int
    degree: int
    reciprocal_sum: Fraction
    child_degrees: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "depth": self.depth,
            "sign": self.sign,
            "degree": self.degree,
            "reciprocal_sum": str(self.reciprocal_sum),
            "child_degrees": list(self.child_degrees),
        }


@dataclass(frozen=True)
class ExpansionTrace:
    records: tuple[TraceRecord, ...]
    text: str

    def to_json(self) -> dict:
        return {"records": [r.to_json() for r in self.records], "fraction": self.text}


def expansion_trace(t: RootedTree) -> ExpansionTrace:
    """Per-vertex record of the branched-fraction expansion of t (BFS order)."""
    depth = t.depths()
    degs = t.degrees
    records = []
    for v in sorted(range(t.p), key=lambda v: (depth[v], v)):
        kids = t.children[v]
        records.append(TraceRecord(
            vertex=v,
            depth=depth[v],
            sign=-1 if depth[v] % 2 == 0 else 1,
            degree=degs[v],
            reciprocal_sum=sum((Fraction(1, degs[c]) for c in kids), Fraction(0)),
            child_degrees=tuple(sorted(degs[c] for c in kids)),
        ))
    return ExpansionTrace(tuple(records), render_branched_fraction(t))


def render_branched_fraction(t: RootedTree) -> str:
    """Text like ``-3z + 2/z + 1/(3z + 1/(-3z - 2/z) + ...)``."""
    depth = t.depths()
    degs = t.degrees

    def lead(v):
        sign = -1 if depth[v] % 2 == 0 else 1
        d = sign * degs[v]
        return ("-" if d < 0 else "") + ("z" if abs(d) == 1 else f"{abs(d)}z")

    def body(v):
        parts = [lead(v)]
        leaves = [c for c in t.children[v] if not t.children[c]]
        inner = [c for c in t.children[v] if t.children[c]]
        if leaves:
            leaf_sign = 1 if depth[v] % 2 == 0 else -1
            parts.append(("+ " if leaf_sign > 0 else "- ") + f"{len(leaves)}/z")
        for c in sorted(inner, key=lambda c: (degs[c], shape_code(t.subtree_shape(c)))):
            parts.append(f"+ 1/({body(c)})")
        return " ".join(parts)

    return body(t.root)


# ---------------------------------------------------------------------------
# Public inversion API
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CandidateShape:
    tree: RootedTree
    trace: ExpansionTrace = field(compare=False)
    verified: bool = True

    @property
    def code(self) -> str:
        return canonical_code(self.tree, "rooted")

    def to_json(self, with_trace: bool = True) -> dict:
        out = {"tree": self.tree.to_json(), "code": self.code, "verified": self.verified}
        if with_trace:
            out["trace"] = self.trace.to_json()
        return out


def _candidate(shape: Shape, R: RationalFunction) -> CandidateShape:
    tree = RootedTree.from_shape(shape)
    return CandidateShape(tree, expansion_trace(tree), compute_ratio(tree) == R)


def invert_ratio(R: RationalFunction, d0: int, p_max: int, exhaustive: bool = False) -> list[CandidateShape]:
    """Every rooted shape with <= p_max vertices whose reduced ratio equals R.

    With ``exhaustive=True`` the result comes from filtering all rooted trees
    instead of the branched-fraction expansion (slow; used as a cross-check).
    Results are sorted by rooted canonical code.
    """
    if p_max < 2:
        raise InconsistentInputError("p_max must be at least 2")
    if root_degree_from_ratio(R) != d0:
        raise InconsistentInputError(f"ratio implies root degree {root_degree_from_ratio(R)}, not {d0}")
    if exhaustive:
        shapes = exhaustive_inverse(R, p_max)
    else:
        shapes = _expand(R, d0, True, p_max)
    out = [_candidate(s, R) for s in shapes]
    bad = [c for c in out if not c.verified]
    if bad:  # would indicate a bug in the expansion, never silently drop
        raise AssertionError(f"unverified candidates {[c.code for c in bad]}")
    return sorted(out, key=lambda c: c.code)


def invert_polynomials(psi: Polynomial, psi_hat: Polynomial, d0: int | None = None) -> list[CandidateShape]:
    """Shapes whose psi and psi^ match the given polynomials up to constant factors.

    Unlike the reduced ratio, the pair fixes p = deg psi, so trees that only
    share the reduced ratio (with fewer vertices) are excluded.
    """
    p = psi.degree
    if psi_hat.degree != p - 1:
        raise InconsistentInputError(f"deg psi^ must be deg psi - 1 = {p - 1}, got {psi_hat.degree}")
    R = RationalFunction(psi, psi_hat)
    if d0 is None:
        d0 = root_degree_from_ratio(R)
    A, B = psi.monic(), psi_hat.monic()
    return [
        c for c in invert_ratio(R, d0, p)
        if c.tree.p == p and compute_psi(c.tree).monic() == A and compute_psi_hat(c.tree).monic() == B
    ]


def exhaustive_inverse(R: RationalFunction, p_max: int) -> frozenset:
    return frozenset(s for n in range(2, p_max + 1) for s in rooted_shapes(n) if ratio_of_shape(s) == R)


# ---------------------------------------------------------------------------
# Snowflakes
# ---------------------------------------------------------------------------

def partial_fractions(num: Polynomial, factors: list[Polynomial]) -> list[Polynomial]:
    """Numerators N_i with num / prod(factors) = sum N_i / factors_i (factors pairwise coprime).

    Requires deg num < deg prod(factors).
    """
    total = ONE
    for f in factors:
        total = total * f
    out = []
    for f in factors:
        cofactor = total.exact_div(f)
        inv = _inverse_mod(cofactor, f)
        out.append((num * inv).divrem(f)[1])
    return out


def _inverse_mod(a: Polynomial, m: Polynomial) -> Polynomial:
    r0, r1 = m, a.divrem(m)[1]
    s0, s1 = Polynomial(), ONE
    while r1:
        q, r = r0.divrem(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise InconsistentInputError("factors are not coprime")
    return s0.scale(1 / r0.lc)


def invert_snowflake(R: RationalFunction, d0: int) -> CandidateShape:
    """Closed-form inversion for snowflakes rooted at the center.

    G = R + d0 z = sum_k z / (d_k z^2 - d_k + 1); the distinct arm quadratics are
    found by trial division of G's reduced denominator, and their multiplicities
    from the partial-fraction numerators mu * z (leaf arms: mu / z).
    """
    from .tree import make_snowflake

    if root_degree_from_ratio(R) != d0:
        raise InconsistentInputError("ratio does not match d0")
    G = R + RationalFunction(Polynomial([0, d0]))
    den = G.den
    factors: list[Polynomial] = []
    arm_of: list[int] = []
    if den(0) == 0:
        if den.divrem(Polynomial([0, 0, 1]))[1].is_zero():
            raise InconsistentInputError("not a snowflake ratio: repeated pole at 0")
        factors.append(Z)
        arm_of.append(1)
        den = den.exact_div(Z)
    d = 2
    while den.degree > 0 and d <= abs(den.lc) + 1:
        q = Polynomial([-(d - 1), 0, d])
        qq, rr = den.divrem(q)
        if rr.is_zero():
            factors.append(q)
            arm_of.append(d)
            den = qq
        d += 1
    if den.degree != 0:
        raise InconsistentInputError("not a snowflake ratio: denominator does not split into d z^2 - (d-1)")
    scale = 1 / den.lc
    nums = partial_fractions(G.num.scale(scale), factors)
    arms: list[int] = []
    for f, arm, n in zip(factors, arm_of, nums):
        expect_deg = 0 if arm == 1 else 1
        if n.degree != expect_deg or (arm > 1 and n.coeffs[0] != 0):
            raise InconsistentInputError("not a snowflake ratio: unexpected branch numerator")
        # each arm contributes numerator z (or 1 for a leaf arm over z)
        mu = n.lc
        if mu.denominator != 1 or mu < 1:
            raise InconsistentInputError("not a snowflake ratio: non-integral arm multiplicity")
        arms.extend([arm] * int(mu))
    if len(arms) != d0:
        raise InconsistentInputError("not a snowflake ratio: arm count differs from d0")
    tree = make_snowflake(arms)
    cand = CandidateShape(tree, expansion_trace(tree), compute_ratio(tree) == R)
    if not cand.verified:
        raise InconsistentInputError("not a snowflake ratio: forward check failed")
    return cand


def snowflake_arms(tree: RootedTree) -> tuple[int, ...] | None:
    """Arm-degree multiset if ``tree`` is a snowflake rooted at its center, else None."""
    arms = []
    for c in tree.children[tree.root]:
        if any(tree.children[g] for g in tree.children[c]):
            return None
        arms.append(tree.degree(c))
    return tuple(sorted(arms))
