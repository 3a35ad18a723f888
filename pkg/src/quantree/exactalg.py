"""Exact univariate polynomials and rational functions over the rationals.

Coefficients are stored as ascending tuples of :class:`fractions.Fraction`.
Everything here is immutable and hashable so values can be used as dict keys
(fingerprints, memo tables).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as _fold
from typing import Iterable, Sequence

from .errors import InconsistentInputError, ParseError


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("float coefficients are not exact; pass Fraction or int")
    return Fraction(c)


class Polynomial:
    """Dense univariate polynomial in ``z`` with rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [_to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, n: int, c=1) -> "Polynomial":
        return cls([0] * n + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        """Monic product of (z - r)."""
        out = cls([1])
        for r in roots:
            out = out * cls([-_to_fraction(r), 1])
        return out

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()!r})"

    def __str__(self) -> str:
        return self.to_string()

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other) -> "Polynomial":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Polynomial":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        out = Polynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "Polynomial":
        c = _to_fraction(c)
        return Polynomial(a * c for a in self.coeffs)

    def divrem(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lc = other.lc
        if len(rem) - 1 < db:
            return Polynomial(), self
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:db])

    def __divmod__(self, other):
        return self.divrem(other)

    def __floordiv__(self, other) -> "Polynomial":
        return self.divrem(other)[0]

    def __mod__(self, other) -> "Polynomial":
        return self.divrem(other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divrem(other)
        if r:
            raise InconsistentInputError(f"{self} is not divisible by {other}")
        return q

    def divides(self, other: "Polynomial") -> bool:
        """True if ``self`` divides ``other``."""
        return not other.divrem(self)[1]

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def reflect(self) -> "Polynomial":
        """p(-z)."""
        return Polynomial(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def compose_linear(self, a, b) -> "Polynomial":
        """p(a*z + b)."""
        out = Polynomial()
        lin = Polynomial([b, a])
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    # -- normal forms -------------------------------------------------------
    def content(self) -> Fraction:
        """Positive rational c with self / c primitive over the integers."""
        if not self.coeffs:
            return Fraction(0)
        num = _fold(math.gcd, (abs(c.numerator) for c in self.coeffs))
        den = _fold(math.lcm, (c.denominator for c in self.coeffs))
        return Fraction(num, den)

    def canonical(self) -> "Polynomial":
        """Primitive integer coefficients with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return self.scale(1 / c)

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        return self.scale(1 / self.lc)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # -- serialization ------------------------------------------------------
    def to_list(self) -> list:
        """Ascending coefficients; ints where integral, "a/b" strings otherwise."""
        return [int(c) if c.denominator == 1 else str(c) for c in self.coeffs]

    def to_string(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}{mono}" if a.denominator == 1 else f"({a}){mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += sign + body
        return out


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([x])


Z = Polynomial([0, 1])
ONE = Polynomial([1])
ZERO = Polynomial()


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero if both inputs are zero)."""
    while b:
        a, b = b, a.divrem(b)[1]
    return a.monic()


def poly_gcd_canonical(a: Polynomial, b: Polynomial) -> Polynomial:
    return poly_gcd(a, b).canonical()


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: [(a_i, i)] with p = lc * prod a_i^i, a_i squarefree and coprime."""
    if p.degree <= 0:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree <= 0:
        return ONE
    return p.exact_div(poly_gcd(p, p.derivative())).monic()


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation
# ---------------------------------------------------------------------------

def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while seq[-1]:
        seq.append(-(seq[-2].divrem(seq[-1])[1]))
    return seq[:-1]


def _sign_changes(seq: Sequence[Polynomial], x: Fraction) -> int:
    signs = [s for s in (q(x) for q in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def sturm_count(p: Polynomial, lo, hi, seq=None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    if seq is None:
        seq = sturm_sequence(squarefree_part(p))
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def cauchy_bound(p: Polynomial) -> Fraction:
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RootIsolation:
    """Disjoint rational intervals (lo, hi], each holding one distinct real root."""

    intervals: tuple[tuple[Fraction, Fraction, int], ...]

    @property
    def midpoints(self) -> list[Fraction]:
        return [(lo + hi) / 2 for lo, hi, _ in self.intervals]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, _, m in self.intervals]

    def roots(self) -> list[float]:
        """Float midpoints repeated by multiplicity, ascending."""
        out = []
        for (lo, hi, m) in self.intervals:
            out.extend([float((lo + hi) / 2)] * m)
        return out

    def __len__(self) -> int:
        return sum(self.multiplicities)


def _isolate_squarefree(f: Polynomial, lo: Fraction, hi: Fraction, precision: Fraction):
    seq = sturm_sequence(f)
    out = []
    stack = [(lo, hi, sturm_count(f, lo, hi, seq))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(_refine(f, a, b, precision))
            continue
        m = (a + b) / 2
        stack.append((a, m, sturm_count(f, a, m, seq)))
        stack.append((m, b, sturm_count(f, m, b, seq)))
    out.sort()
    return out


def _refine(f: Polynomial, a: Fraction, b: Fraction, precision: Fraction):
    # Unique root in (a, b]; bisect on sign of f.
    fb = f(b)
    if fb == 0:
        return (b - precision / 4, b)
    while b - a > precision:
        m = (a + b) / 2
        fm = f(m)
        if fm == 0:
            return (m - precision / 4, m)
        if (fm > 0) == (fb > 0):
            b, fb = m, fm
        else:
            a = m
    return (a, b)


def isolate_real_roots(
    pol: Polynomial,
    interval: tuple | None = None,
    precision=Fraction(1, 10**12),
) -> RootIsolation:
    """Isolate every real root of ``pol`` in ``interval`` (default: all reals).

    Multiplicities come from the squarefree decomposition; each factor is
    isolated with its own Sturm sequence and refined by bisection until the
    interval width is at most ``precision``.
    """
    if pol.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    precision = Fraction(precision)
    if interval is None:
        bound = cauchy_bound(pol)
        lo, hi = -bound - 1, bound
    else:
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        # closed interval requested; Sturm counts are on (lo, hi]
        if pol(lo) == 0:
            lo = lo - precision
    found = []
    for factor, mult in squarefree_decomposition(pol):
        for a, b in _isolate_squarefree(factor, lo, hi, precision):
            found.append((a, b, mult))
    found.sort()
    return RootIsolation(tuple(found))


def count_real_roots(pol: Polynomial, lo, hi) -> int:
    """Distinct real roots in (lo, hi]."""
    return sturm_count(pol, lo, hi)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

class RationalFunction:
    """Reduced fraction num/den; den is primitive-integral with positive lc."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial = ONE, *, _reduced: bool = False):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                num, den = ZERO, ONE
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
            c = den.content()
            if den.lc < 0:
                c = -c
            num, den = num.scale(1 / c), den.scale(1 / c)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, ONE)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            if isinstance(other, (Polynomial, int, Fraction)):
                other = RationalFunction(_as_poly(other))
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num})/({self.den}))"

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _as_rf(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> "RationalFunction":
        return self * _as_rf(other).reciprocal()

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_rf(other) * self.reciprocal()

    def is_proper(self) -> bool:
        return self.num.degree < self.den.degree

    def limit_at_infinity_ratio(self, power: int) -> Fraction:
        """lim z^power * self as z -> oo; raises if the limit is not finite and nonzero-safe."""
        shift = self.num.degree - self.den.degree + power
        if self.num.is_zero() or shift < 0:
            return Fraction(0)
        if shift > 0:
            raise InconsistentInputError("limit at infinity is not finite")
        return self.num.lc / self.den.lc

    def eval(self, x):
        return self.num(x) / self.den(x)


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction(_as_poly(x))


def reduce(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Lowest-terms fraction with canonical denominator."""
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# Snapping floats to rationals
# ---------------------------------------------------------------------------

def convergents(x: float, max_denominator: int):
    """Continued-fraction convergents of ``x`` with denominator <= bound."""
    f = Fraction(x)
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        a = math.floor(f)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_denominator:
            return
        yield Fraction(h1, k1)
        frac = f - a
        if frac == 0:
            return
        f = 1 / frac


def snap_to_rational(x: float, max_denominator: int = 10**6, tol: float = 1e-9) -> Fraction:
    """Smallest-denominator convergent of ``x`` lying within ``tol``.

    Taking the first convergent that fits (rather than the closest fraction
    under the bound) avoids locking onto spurious large-denominator values
    when ``x`` carries floating noise.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    for c in convergents(x, max_denominator):
        if abs(float(c) - x) <= tol:
            return c
    raise InconsistentInputError(f"{x!r} is not rationalizable with denominator <= {max_denominator}")


# ---------------------------------------------------------------------------
# Text / JSON formats
# ---------------------------------------------------------------------------

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?|\(\s*\d+\s*/\s*\d+\s*\))\s*\*?\s*)?
        (?:(?P<var>[zZ])\s*(?:(?:\^|\*\*)\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_polynomial(text) -> Polynomial:
    """Parse "-108z^6+258z^4-202z^2+52", "3/2 z - 1", or a JSON coefficient list.

    Grammar: term (sign term)*; term := [coef]['*'] [z['^'n]] with at least one
    of coef or z present. Coefficients are integers or a/b rationals.
    """
    if isinstance(text, (list, tuple)):
        try:
            return Polynomial(_coef_from_json(c) for c in text)
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise ParseError(f"bad coefficient list {text!r}: {e}") from None
    s = str(text).replace("−", "-").strip()
    if s.startswith("["):
        import json
        try:
            return parse_polynomial(json.loads(s))
        except json.JSONDecodeError as e:
            raise ParseError(f"bad JSON coefficient list: {e}") from None
    if not s:
        raise ParseError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("var") is None):
            raise ParseError(f"cannot parse polynomial at {s[pos:]!r}")
        if not first and m.group("sign") is None:
            raise ParseError(f"missing operator before {s[pos:]!r}")
        first = False
        sign = -1 if m.group("sign") == "-" else 1
        raw = m.group("coef")
        c = Fraction(raw.strip("() ").replace(" ", "")) if raw else Fraction(1)
        if m.group("var") is None:
            e = 0
        else:
            e = int(m.group("exp")) if m.group("exp") else 1
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = m.end()
    n = max(coeffs) + 1
    return Polynomial(coeffs.get(i, 0) for i in range(n))


def _coef_from_json(c) -> Fraction:
    if isinstance(c, bool):
        raise TypeError("boolean coefficient")
    if isinstance(c, float):
        if not c.is_integer():
            raise ValueError(f"non-integral float {c!r}; use an 'a/b' string")
        return Fraction(int(c))
    return Fraction(c)
