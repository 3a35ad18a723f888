"""Characteristic polynomials psi = det(-zD + A), psi~, psi^ and the ratio R = psi/psi^.

Determinants are never formed as matrices.  For a vertex v with children
c_1..c_k (degrees always taken in the full tree), the subtree determinant is

    phi_v = -d(v) z prod phi_c  -  sum_j (prod_{i!=j} phi_{c_i}) (prod_{g child of c_j} phi_g)

which is the first-row expansion of the tridiagonal-like tree matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exactalg import ONE, Z, Polynomial, RationalFunction
from .tree import RootedTree, Shape, principal_subforest

ONE_MINUS_Z2 = Polynomial([1, 0, -1])


def _subtree_dets(children, degree, top) -> dict[int, Polynomial]:
    """phi_v for every v in the subtree hanging from ``top``."""
    order = []
    stack = [top]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(children[v])
    phi: dict[int, Polynomial] = {}
    for v in reversed(order):
        kids = children[v]
        prod_all = ONE
        for c in kids:
            prod_all = prod_all * phi[c]
        total = Polynomial([0, -degree[v]]) * prod_all
        for j, c in enumerate(kids):
            term = ONE
            for i, other in enumerate(kids):
                if i != j:
                    term = term * phi[other]
            for g in children[c]:
                term = term * phi[g]
            total = total - term
        phi[v] = total
    return phi


def compute_psi(t: RootedTree) -> Polynomial:
    """det(-zD + A), sign as the determinant gives it (not canonicalized)."""
    return _subtree_dets(t.children, t.degrees, t.root)[t.root]


def compute_psi_tilde(psi: Polynomial) -> Polynomial:
    """psi / (1 - z^2); raises if the division is not exact."""
    return psi.exact_div(ONE_MINUS_Z2)


def compute_psi_hat(t: RootedTree) -> Polynomial:
    """Product over principal-subforest components of det(-z D^ + A^), degrees from t."""
    forest = principal_subforest(t)
    degs = t.degrees
    out = ONE
    for comp in forest.components:
        out = out * _subtree_dets(forest.children, degs, comp.root)[comp.root]
    return out


def compute_ratio(t: RootedTree) -> RationalFunction:
    """Reduced psi/psi^; behaves like -d(root) z at infinity."""
    return RationalFunction(compute_psi(t), compute_psi_hat(t))


@dataclass(frozen=True)
class CharPolyBundle:
    psi: Polynomial
    psi_tilde: Polynomial
    psi_hat: Polynomial
    ratio: RationalFunction

    def to_json(self) -> dict:
        def enc(p: Polynomial):
            return {"coeffs": p.to_list(), "text": p.to_string()}

        return {
            "psi": enc(self.psi),
            "psi_tilde": enc(self.psi_tilde),
            "psi_hat": enc(self.psi_hat),
            "ratio_num": enc(self.ratio.num),
            "ratio_den": enc(self.ratio.den),
            "sign_convention": "det(-zD+A); canonical forms are primitive with positive leading coefficient",
            "canonical": {
                "psi": enc(self.psi.canonical()),
                "psi_tilde": enc(self.psi_tilde.canonical()),
                "psi_hat": enc(self.psi_hat.canonical()),
            },
        }


def charpoly_bundle(t: RootedTree) -> CharPolyBundle:
    psi = compute_psi(t)
    psi_hat = compute_psi_hat(t) if t.p >= 2 else ONE
    return CharPolyBundle(psi, compute_psi_tilde(psi), psi_hat, RationalFunction(psi, psi_hat))


# ---------------------------------------------------------------------------
# Branched continued fraction (forward direction)
# ---------------------------------------------------------------------------

def evaluate_branched_fraction(t: RootedTree) -> RationalFunction:
    """Evaluate F_root, where F_v = s_k d(v) z + sum_c 1/F_c and s_k = (-1)^(k+1) at depth k.

    A leaf at depth k contributes F = s_k z.  The result equals compute_ratio(t).
    """
    depth = t.depths()
    degs = t.degrees
    order = sorted(range(t.p), key=lambda v: -depth[v])
    value: dict[int, RationalFunction] = {}
    for v in order:
        sign = -1 if depth[v] % 2 == 0 else 1
        f = RationalFunction(Polynomial([0, sign * degs[v]]))
        for c in t.children[v]:
            f = f + value[c].reciprocal()
        value[v] = f
    return value[t.root]


@lru_cache(maxsize=None)
def tail_of_shape(shape: Shape) -> RationalFunction:
    """T for a non-root vertex with this subtree: T = -d z - sum 1/T_c, d = children + 1.

    The alternating-sign branch value at depth k is (-1)^k T.
    """
    out = RationalFunction(Polynomial([0, -(len(shape) + 1)]))
    for c in shape:
        out = out - inverse_tail_of_shape(c)
    return out


@lru_cache(maxsize=None)
def inverse_tail_of_shape(shape: Shape) -> RationalFunction:
    return tail_of_shape(shape).reciprocal()


@lru_cache(maxsize=None)
def ratio_of_shape(shape: Shape) -> RationalFunction:
    """compute_ratio for the tree with this rooted shape, via memoized subtree tails."""
    out = RationalFunction(Polynomial([0, -len(shape)]))
    for c in shape:
        out = out - inverse_tail_of_shape(c)
    return out


__all__ = [
    "CharPolyBundle",
    "ONE_MINUS_Z2",
    "Z",
    "charpoly_bundle",
    "compute_psi",
    "compute_psi_hat",
    "compute_psi_tilde",
    "compute_ratio",
    "evaluate_branched_fraction",
    "inverse_tail_of_shape",
    "ratio_of_shape",
    "tail_of_shape",
]
