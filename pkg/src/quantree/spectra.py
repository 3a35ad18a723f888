"""Neumann/Dirichlet spectra of equilateral trees with zero potential, and the way back.

With q = 0 on every edge, c(sqrt(lam), l) = cos(sqrt(lam) l) and
s(sqrt(lam), l) = sin(sqrt(lam) l)/sqrt(lam).  Writing mu = sqrt(lam):

* Neumann eigenvalues are the zeros of sin(mu l) (one per multiple of pi) and of
  psi~(cos(mu l)), plus lam = 0 for the constant eigenfunction;
* Dirichlet eigenvalues (root clamped) are the zeros of psi^(cos(mu l)).

Going back, every eigenvalue is reduced to a phase mu*l mod 2*pi.  Phases
repeat period after period; the cosine of each phase cluster is one of the
roots of psi (Neumann) or psi^ (Dirichlet), with the per-period count as its
multiplicity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .charpoly import compute_psi, compute_psi_hat, compute_psi_tilde
from .errors import InconsistentInputError, ParseError, QuantreeError
from .exactalg import Polynomial, RationalFunction, isolate_real_roots, snap_to_rational
from .invert import CandidateShape, invert_ratio
from .tree import RootedTree

Problem = Literal["neumann", "dirichlet"]

TWO_PI = 2 * math.pi
DEFAULT_PERIODS = 25
DEFAULT_TOL = 1e-6
DEFAULT_MAX_DENOMINATOR = 10**6
_ROOT_PRECISION = Fraction(1, 10**20)


@dataclass(frozen=True)
class Spectrum:
    l: float
    problem: str
    entries: tuple[tuple[float, int], ...]  # (lambda, multiplicity), strictly increasing

    def __post_init__(self):
        if self.l <= 0:
            raise ValueError("edge length must be positive")
        if self.problem not in ("neumann", "dirichlet"):
            raise ValueError(f"unknown problem {self.problem!r}")
        prev = -math.inf
        for lam, m in self.entries:
            if lam < 0 or m < 1 or lam <= prev:
                raise ValueError("eigenvalues must be nonnegative, strictly increasing, multiplicity >= 1")
            prev = lam

    def __len__(self) -> int:
        return sum(m for _, m in self.entries)

    def values(self) -> list[float]:
        """Eigenvalues repeated by multiplicity."""
        return [lam for lam, m in self.entries for _ in range(m)]

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "problem": self.problem,
            "eigenvalues": [{"value": lam, "multiplicity": m} for lam, m in self.entries],
        }

    @classmethod
    def from_json(cls, data) -> "Spectrum":
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ParseError(f"spectrum JSON: {e}") from None
        try:
            entries = tuple((float(e["value"]), int(e.get("multiplicity", 1))) for e in data["eigenvalues"])
            return cls(float(data["l"]), str(data["problem"]), entries)
        except (KeyError, TypeError) as e:
            raise ParseError(f"spectrum JSON must have l, problem, eigenvalues: {e}") from None
        except ValueError as e:
            raise ParseError(f"invalid spectrum: {e}") from None


@dataclass(frozen=True)
class ConstantMultiset:
    """Cosines of the phase clusters with their per-period multiplicities."""

    problem: str
    entries: tuple[tuple[float, int], ...]  # ascending values in [-1, 1]
    periods_used: int

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def values(self) -> list[float]:
        return [c for c, m in self.entries for _ in range(m)]


def _roots_with_multiplicity(pol: Polynomial) -> list[tuple[float, int]]:
    iso = isolate_real_roots(pol, precision=_ROOT_PRECISION)
    return [(float((lo + hi) / 2), m) for lo, hi, m in iso.intervals]


def synthesize_spectrum(
    t: RootedTree,
    problem: Problem,
    l: float = 1.0,
    periods: int = DEFAULT_PERIODS,
    potential=None,
) -> Spectrum:
    """All eigenvalues with sqrt(lam)*l in (0, 2*pi*periods] (plus lam=0 for Neumann)."""
    if potential is not None and potential != 0:
        raise QuantreeError("only the zero potential is supported for synthesis")
    if periods < 1:
        raise ValueError("periods must be >= 1")
    if problem == "neumann":
        roots = _roots_with_multiplicity(compute_psi_tilde(compute_psi(t))) if t.p > 2 else []
    elif problem == "dirichlet":
        if t.p < 2:
            raise InconsistentInputError("a single vertex has no Dirichlet problem")
        roots = _roots_with_multiplicity(compute_psi_hat(t))
    else:
        raise ValueError(f"unknown problem {problem!r}")

    phases: list[tuple[float, int]] = []
    for alpha, m in roots:
        theta = math.acos(max(-1.0, min(1.0, alpha)))
        for k in range(periods):
            phases.append((TWO_PI * k + theta, m))
            phases.append((TWO_PI * (k + 1) - theta, m))
    if problem == "neumann":
        phases.extend((math.pi * j, 1) for j in range(1, 2 * periods + 1))
        phases.append((0.0, 1))
    phases.sort()
    entries = []
    for x, m in phases:
        lam = (x / l) ** 2
        if entries and entries[-1][0] == lam:
            entries[-1] = (lam, entries[-1][1] + m)
        else:
            entries.append((lam, m))
    return Spectrum(float(l), problem, tuple(entries))


def per_period_counts(s: Spectrum, tol: float = DEFAULT_TOL) -> list[int]:
    """Eigenvalue count (with multiplicity) in each window sqrt(lam) l in (2 pi k, 2 pi (k+1)]."""
    counts: dict[int, int] = {}
    for lam, m in s.entries:
        x = math.sqrt(lam) * s.l
        if x <= tol:
            continue
        k = math.ceil(x / TWO_PI - tol / TWO_PI) - 1
        counts[k] = counts.get(k, 0) + m
    return [counts.get(k, 0) for k in range(max(counts) + 1)] if counts else []


def extract_constants(s: Spectrum, tol: float = DEFAULT_TOL, skip_periods: int = 1) -> ConstantMultiset:
    """Cluster phases sqrt(lam) l mod 2 pi across periods and return their cosines."""
    windows: dict[int, list[tuple[float, int]]] = {}
    for lam, m in s.entries:
        x = math.sqrt(lam) * s.l
        if x <= tol:
            continue
        k = math.ceil(x / TWO_PI - tol / TWO_PI) - 1
        phase = x - TWO_PI * k
        if phase > TWO_PI - tol:
            phase -= TWO_PI  # lattice point at the window's right end
        windows.setdefault(k, []).append((phase, m))
    if not windows:
        raise InconsistentInputError("empty spectrum")
    last = max(windows)
    used = [k for k in range(skip_periods, last + 1)]
    if len(used) < 3:
        raise InconsistentInputError("need at least 3 full periods after the skipped ones")

    pts = sorted((ph, m, k) for k in used for ph, m in windows.get(k, []))
    clusters: list[list[tuple[float, int, int]]] = []
    for pt in pts:
        if clusters and pt[0] - clusters[-1][-1][0] <= tol:
            clusters[-1].append(pt)
        else:
            clusters.append([pt])
    # wrap-around: a cluster just below 2 pi belongs with the one at 0
    if len(clusters) > 1 and clusters[-1][-1][0] - TWO_PI >= clusters[0][0][0] - tol:
        clusters[0] = [(ph - TWO_PI, m, k) for ph, m, k in clusters.pop()] + clusters[0]

    summary = []
    for cl in clusters:
        per_window: dict[int, int] = {}
        for _, m, k in cl:
            per_window[k] = per_window.get(k, 0) + m
        counts = {per_window.get(k, 0) for k in used}
        if len(counts) != 1:
            raise InconsistentInputError("data not equilateral-consistent: unstable phase cluster")
        mean = sum(ph * m for ph, m, _ in cl) / sum(m for _, m, _ in cl)
        summary.append((mean, counts.pop()))

    lower = [(ph, m) for ph, m in summary if ph <= math.pi + tol]
    upper = [(ph, m) for ph, m in summary if ph > math.pi + tol]
    mirrors = sorted(((TWO_PI - ph, m) for ph, m in upper))
    interior = [(ph, m) for ph, m in lower if tol < ph < math.pi - tol]
    if len(mirrors) != len(interior) or any(
        abs(a[0] - b[0]) > tol or a[1] != b[1] for a, b in zip(sorted(interior), mirrors)
    ):
        raise InconsistentInputError("data not equilateral-consistent: unpaired phase clusters")

    entries = []
    for (ph, m) in lower:
        if abs(ph) <= tol:
            c = 1.0
        elif abs(ph - math.pi) <= tol:
            c = -1.0
        else:
            partner = min(mirrors, key=lambda q: abs(q[0] - ph))[0]
            c = math.cos((ph + partner) / 2)
        entries.append((c, m))
    entries.sort()
    return ConstantMultiset(s.problem, tuple(entries), len(used))


def infer_p(neumann_constants: ConstantMultiset) -> int:
    """Vertex count: total multiplicity of the Neumann constants (which include +1 and -1 once each)."""
    if neumann_constants.problem != "neumann":
        raise InconsistentInputError("p is inferred from Neumann constants")
    ends = {c: m for c, m in neumann_constants.entries if abs(c) == 1.0}
    if ends.get(1.0) != 1 or ends.get(-1.0) != 1:
        raise InconsistentInputError("Neumann constants must contain +1 and -1 exactly once")
    return neumann_constants.total


def snap_monic_polynomial(
    values: Sequence[float],
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    tol: float = 1e-8,
) -> Polynomial:
    """Exact monic polynomial with the given (float) roots.

    The roots themselves may be irrational; the coefficients of a tree's
    characteristic polynomial are rational, so those are what get snapped.
    The result is checked by isolating its roots again.
    """
    coeffs = [1.0]
    for r in values:
        nxt = [0.0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] -= r * c
            nxt[i + 1] += c
        coeffs = nxt
    try:
        exact = Polynomial(snap_to_rational(c, max_denominator, tol) for c in coeffs)
    except InconsistentInputError:
        raise InconsistentInputError("insufficient precision: increase K") from None
    back = sorted(isolate_real_roots(exact, precision=Fraction(1, 10**12)).roots()) if values else []
    if len(back) != len(values) or any(abs(a - b) > 1e-6 for a, b in zip(back, sorted(values))):
        raise InconsistentInputError("insufficient precision: increase K")
    return exact


def build_ratio(alphas: ConstantMultiset, betas: ConstantMultiset, d0: int, **snap) -> RationalFunction:
    """R = d0 prod(-z + alpha) / prod(-z + beta), reduced."""
    if alphas.total != betas.total + 1:
        raise InconsistentInputError(
            f"{alphas.total} Neumann constants need {alphas.total - 1} Dirichlet constants, got {betas.total}")
    A = snap_monic_polynomial(alphas.values(), **snap)
    B = snap_monic_polynomial(betas.values(), **snap)
    # (-1)^p A / ((-1)^(p-1) B) = -A/B
    return RationalFunction(A.scale(-d0), B)


@dataclass(frozen=True)
class Recovery:
    d0: int
    candidate: CandidateShape

    def to_json(self, with_trace: bool = True) -> dict:
        out = self.candidate.to_json(with_trace)
        out["d0"] = self.d0
        return out


def recover_shape_from_spectra(
    neumann: Spectrum,
    dirichlet: Spectrum,
    d0: int | Literal["search"],
    tol: float = DEFAULT_TOL,
) -> list[Recovery]:
    """Spectra -> constants -> p -> exact ratio -> every consistent tree shape.

    Candidates must also reproduce psi and psi^ up to a constant factor, since
    both spectra fix those polynomials and not just their reduced ratio.
    """
    if neumann.problem != "neumann" or dirichlet.problem != "dirichlet":
        raise InconsistentInputError("expected one Neumann and one Dirichlet spectrum")
    if not math.isclose(neumann.l, dirichlet.l, rel_tol=1e-12):
        raise InconsistentInputError("spectra were computed for different edge lengths")
    alphas = extract_constants(neumann, tol)
    betas = extract_constants(dirichlet, tol)
    p = infer_p(alphas)
    A = snap_monic_polynomial(alphas.values())
    B = snap_monic_polynomial(betas.values())
    if B.degree != p - 1:
        raise InconsistentInputError(f"Dirichlet data has {B.degree} constants, expected {p - 1}")
    choices = range(1, p) if d0 == "search" else [int(d0)]
    out = []
    for d in choices:
        R = RationalFunction(A.scale(-d), B)
        for cand in invert_ratio(R, d, p):
            t = cand.tree
            if t.p == p and compute_psi(t).monic() == A and compute_psi_hat(t).monic() == B:
                out.append(Recovery(d, cand))
    return out
