"""Exhaustive cospectrality census over free trees."""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field

from .charpoly import compute_psi, compute_psi_hat, compute_psi_tilde
from .errors import BoundExceededError
from .tree import RootedTree, canonical_code, enumerate_trees

CENSUS_BOUND = 10


def neumann_fingerprint(t: RootedTree) -> tuple:
    """Canonical psi~: what the Neumann spectrum determines."""
    return compute_psi_tilde(compute_psi(t)).canonical().coeffs


def two_spectra_fingerprint(t: RootedTree) -> tuple:
    """(canonical psi~, sorted canonical psi^ over every choice of root)."""
    hats = sorted(compute_psi_hat(t.rerooted(v)).canonical().coeffs for v in range(t.p))
    return neumann_fingerprint(t), tuple(hats)


@dataclass
class CensusLevel:
    p: int
    classes: int
    collisions: list[list[str]] = field(default_factory=list)
    two_spectra_collisions: list[list[str]] | None = None
    seconds: float = 0.0  # not serialized, so reports stay byte-identical

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "classes": self.classes,
            "collisions": self.collisions,
        }
        if self.two_spectra_collisions is not None:
            out["two_spectra_collisions"] = self.two_spectra_collisions
        return out


@dataclass
class CensusReport:
    p_max: int
    levels: list[CensusLevel]

    @property
    def total_collisions(self) -> int:
        return sum(len(lv.collisions) for lv in self.levels)

    def to_json(self) -> dict:
        return {
            "p_max": self.p_max,
            "total_collisions": self.total_collisions,
            "levels": [lv.to_json() for lv in self.levels],
        }


def _groups(trees, key) -> list[list[str]]:
    buckets = defaultdict(list)
    for t in trees:
        buckets[key(t)].append(canonical_code(t, "unrooted"))
    return sorted(sorted(g) for g in buckets.values() if len(g) > 1)


def census(p_max: int, p_min: int = 1, two_spectra: bool = False) -> CensusReport:
    """Group all free trees with p_min <= p <= p_max by canonical psi~ and report collisions."""
    if p_max > CENSUS_BOUND:
        raise BoundExceededError(f"census is desk-scale: p_max <= {CENSUS_BOUND}")
    levels = []
    for p in range(p_min, p_max + 1):
        start = time.perf_counter()
        trees = list(enumerate_trees(p, "free"))
        level = CensusLevel(p, len(trees), _groups(trees, neumann_fingerprint))
        if two_spectra and p >= 2:
            level.two_spectra_collisions = _groups(trees, two_spectra_fingerprint)
        level.seconds = time.perf_counter() - start
        levels.append(level)
    return CensusReport(p_max, levels)
