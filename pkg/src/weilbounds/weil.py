"""Real Weil polynomials over a fixed finite field.

A real Weil polynomial h of degree g is tied to the Weil polynomial
f(x) = x^g h(x + q/x).  From h we read off the trace, the defect relative to
the Weil-Serre bound, the point counts over every extension field and the
number of closed points of each degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .exact import (
    DomainError,
    IntPoly,
    count_real_roots,
    count_real_roots_in,
    divisors,
    factor,
    floor_two_sqrt,
    is_prime,
    mobius,
    newton_polygon,
    power_sums,
    prime_power,
    radical,
)


@dataclass(frozen=True)
class FieldContext:
    q: int
    p: int = 0
    a: int = 0
    m: int = 0

    def __post_init__(self):
        p, a = prime_power(self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "m", floor_two_sqrt(self.q))

    def ws_bound(self, g: int) -> int:
        """Weil-Serre upper bound q + 1 + g*m."""
        return self.q + 1 + g * self.m

    @property
    def is_square(self) -> bool:
        return self.a % 2 == 0

    @property
    def sqrt_q(self) -> int:
        if not self.is_square:
            raise DomainError(f"{self.q} is not a square")
        return self.p ** (self.a // 2)

    def ext_m(self, d: int) -> int:
        return floor_two_sqrt(self.q ** d)


def context(q: int) -> FieldContext:
    return FieldContext(q)


@dataclass(frozen=True)
class RealWeilPoly:
    """A factored real Weil polynomial candidate.

    ``factors`` holds (irreducible monic factor, multiplicity) pairs in
    graded-lexicographic order of the factors.
    """

    ctx: FieldContext
    factors: tuple

    def __post_init__(self):
        merged: dict = {}
        for fac, mult in self.factors:
            if not isinstance(fac, IntPoly):
                fac = IntPoly(fac)
            fac.require_monic()
            if mult <= 0:
                raise DomainError("multiplicities must be positive")
            merged[fac] = merged.get(fac, 0) + mult
        object.__setattr__(
            self, "factors", tuple(sorted(merged.items(), key=lambda t: t[0].sort_key()))
        )

    @classmethod
    def from_poly(cls, ctx: FieldContext, h: IntPoly) -> "RealWeilPoly":
        return cls(ctx, tuple(factor(h)))

    @cached_property
    def poly(self) -> IntPoly:
        out = IntPoly((1,))
        for fac, mult in self.factors:
            out = out * fac ** mult
        return out

    @property
    def degree(self) -> int:
        return sum(f.degree * k for f, k in self.factors)

    genus = degree

    def multiplicity(self, fac: IntPoly) -> int:
        for f, k in self.factors:
            if f == fac:
                return k
        return 0

    def __str__(self):
        parts = []
        for f, k in self.factors:
            s = str(f) if f.degree == 1 and len(self.factors) == 1 and k == 1 else f"({f})"
            parts.append(s if k == 1 else f"{s}^{k}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class PlaceCounts:
    extension_counts: tuple  # N_1..N_n
    place_counts: tuple  # a_1..a_n


# ---------------------------------------------------------------------------

def _as_poly(h) -> IntPoly:
    return h.poly if isinstance(h, RealWeilPoly) else h


def weil_from_real(h: IntPoly, q: int) -> IntPoly:
    """f(x) = x^g h(x + q/x) = sum c_i (x^2 + q)^i x^(g-i)."""
    g = h.degree
    base = IntPoly((q, 0, 1))
    out = IntPoly()
    power = IntPoly((1,))
    for i, c in enumerate(h.coeffs):
        if c:
            out = out + power * IntPoly([0] * (g - i) + [c])
        power = power * base
    return out


def to_weil(h: RealWeilPoly) -> IntPoly:
    return weil_from_real(h.poly, h.ctx.q)


def trace_and_defect(h: RealWeilPoly) -> tuple[int, int, int]:
    """(trace, defect, N1) with N1 = q + 1 - trace and defect = m*g + trace."""
    t = h.poly.trace() if h.degree else 0
    return t, h.ctx.m * h.degree + t, h.ctx.q + 1 - t


def extension_counts(h: IntPoly, q: int, n: int) -> list[int]:
    """N_1..N_n: point counts over F_{q^d} predicted by the real Weil polynomial."""
    f = weil_from_real(h, q)
    if f.degree == 0:
        return [q ** d + 1 for d in range(1, n + 1)]
    sums = power_sums(f, n)
    return [q ** d + 1 - sums[d - 1] for d in range(1, n + 1)]


def places_from_counts(counts: Sequence[int]) -> list[int]:
    """Moebius inversion: a_d = (1/d) sum_{e | d} mu(d/e) N_e."""
    out = []
    for d in range(1, len(counts) + 1):
        s = sum(mobius(d // e) * counts[e - 1] for e in divisors(d))
        if s % d:
            raise ArithmeticError(f"non-integral place count at degree {d}")
        out.append(s // d)
    return out


def place_counts(h, n: Optional[int] = None, q: Optional[int] = None) -> PlaceCounts:
    """Extension point counts and degree-d place counts for d = 1..n (default n = g)."""
    if isinstance(h, RealWeilPoly):
        q = h.ctx.q
    poly = _as_poly(h)
    if q is None:
        raise DomainError("q is required for a bare polynomial")
    if n is None:
        n = max(poly.degree, 1)
    counts = extension_counts(poly, q, n)
    places = places_from_counts(counts)
    for k in range(1, n + 1):
        assert counts[k - 1] == sum(d * places[d - 1] for d in divisors(k))
    return PlaceCounts(tuple(counts), tuple(places))


def _square_root_image(phi: IntPoly) -> IntPoly:
    """Polynomial whose roots are the squares of the roots of phi (up to sign)."""
    even = IntPoly(phi.coeffs[0::2])
    odd = IntPoly(phi.coeffs[1::2])
    return even * even - IntPoly.x() * odd * odd


def roots_admissible(phi: IntPoly, q: int) -> bool:
    """True iff every root y of phi is real with y^2 <= 4q (exact)."""
    r = radical(phi)
    if r.degree <= 0:
        return True
    if count_real_roots(r) != r.degree:
        return False
    sq = _square_root_image(r)
    beyond = count_real_roots_in(sq, 4 * q, "+inf")
    if sq(4 * q) == 0:
        beyond -= 1
    return beyond == 0


@dataclass(frozen=True)
class Validity:
    valid: bool
    check: str = ""
    degree: int = 0
    detail: str = ""

    def __bool__(self):
        return self.valid


VALID = Validity(True)


def validate(h: RealWeilPoly, monotone: bool = True, upto: Optional[int] = None) -> Validity:
    """Numerical screening of a candidate; returns the first failing check."""
    q, g = h.ctx.q, h.degree
    for fac, _ in h.factors:
        if not roots_admissible(fac, q):
            return Validity(False, "roots", 0, f"{fac} has a root outside [-2 sqrt q, 2 sqrt q]")
    n = upto or g
    if n < 1:
        return VALID
    pc = place_counts(h, n)
    for d, a_d in enumerate(pc.place_counts, 1):
        if a_d < 0:
            return Validity(False, "places", d, f"a_{d} = {a_d} < 0")
    for d, nd in enumerate(pc.extension_counts, 1):
        qd = q ** d
        md = floor_two_sqrt(qd)
        if not (qd + 1 - g * md <= nd <= qd + 1 + g * md):
            return Validity(False, "extension-bound", d, f"N_{d} = {nd} outside Weil-Serre range")
    if monotone:
        for d in range(2, n + 1):
            for e in divisors(d)[:-1]:
                if pc.extension_counts[e - 1] > pc.extension_counts[d - 1]:
                    return Validity(False, "monotone", d, f"N_{e} > N_{d}")
    return VALID


def p_rank(h) -> int:
    """Number of unit roots (slope 0) of the Weil polynomial at p."""
    if isinstance(h, RealWeilPoly):
        poly, ctx = h.poly, h.ctx
    else:
        raise DomainError("p_rank needs a RealWeilPoly")
    if poly.degree == 0:
        return 0
    f = weil_from_real(poly, ctx.q)
    np_ = newton_polygon(f, ctx.p)
    return sum(mult for slope, mult in np_.slopes if slope == 0)


def p_rank_of(poly: IntPoly, ctx: FieldContext) -> int:
    if poly.degree == 0:
        return 0
    np_ = newton_polygon(weil_from_real(poly, ctx.q), ctx.p)
    return sum(mult for slope, mult in np_.slopes if slope == 0)


def point_count(poly: IntPoly, q: int) -> int:
    """N_1 = q + 1 - trace."""
    return q + 1 - (poly.trace() if poly.degree else 0)
