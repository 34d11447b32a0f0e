"""Explicit elliptic and genus-2 models over small fields."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

from ..exact import DomainError
from .fields import GF, PolyRing

INFINITY = None  # the point at infinity of a Weierstrass model


def _solve_quadratic(F: GF, b: int, c: int) -> list[int]:
    """Roots of y^2 + b*y = c in F (sorted)."""
    if F.p != 2:
        two = F.from_int(2)
        disc = F.add(F.mul(b, b), F.mul(F.from_int(4), c))
        r = F.sqrt(disc)
        if r is None:
            return []
        half = F.inv(two)
        roots = {F.mul(F.sub(r, b), half), F.mul(F.sub(F.neg(r), b), half)}
        return sorted(roots)
    if b == 0:
        return [F.sqrt(c)]
    # y = b*u with u^2 + u = c / b^2
    target = F.div(c, F.mul(b, b))
    table = _artin_schreier_table(F)
    u = table.get(target)
    if u is None:
        return []
    return sorted({F.mul(b, u), F.mul(b, F.add(u, 1))})


_AS_TABLES: dict = {}


def _artin_schreier_table(F: GF) -> dict[int, int]:
    key = (F.q, F.modulus)
    tab = _AS_TABLES.get(key)
    if tab is None:
        tab = {}
        for u in range(F.q):
            tab.setdefault(F.add(F.mul(u, u), u), u)
        _AS_TABLES[key] = tab
    return tab


class EllipticModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F.

    Points are (x, y) tuples of field ints; the point at infinity is None.
    """

    def __init__(self, F: GF, a1: int, a2: int, a3: int, a4: int, a6: int):
        self.F = F
        self.a = (a1, a2, a3, a4, a6)
        if self.discriminant() == 0:
            raise DomainError("singular Weierstrass model")
        self._points: Optional[list] = None

    def __repr__(self):
        return f"EllipticModel(GF({self.F.q}), a={self.a})"

    def b_invariants(self):
        F = self.F
        a1, a2, a3, a4, a6 = self.a
        m, ad = F.mul, F.add
        b2 = ad(m(a1, a1), m(F.from_int(4), a2))
        b4 = ad(m(F.from_int(2), a4), m(a1, a3))
        b6 = ad(m(a3, a3), m(F.from_int(4), a6))
        b8 = F.sub(F.add(F.add(m(m(a1, a1), a6), m(F.from_int(4), m(a2, a6))), m(a2, m(a3, a3))),
                   F.add(m(a1, m(a3, a4)), m(a4, a4)))
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        F = self.F
        b2, b4, b6, b8 = self.b_invariants()
        m = F.mul
        t1 = F.neg(m(m(b2, b2), b8))
        t2 = F.neg(m(F.from_int(8), m(m(b4, b4), b4)))
        t3 = F.neg(m(F.from_int(27), m(b6, b6)))
        t4 = m(F.from_int(9), m(m(b2, b4), b6))
        return F.add(F.add(t1, t2), F.add(t3, t4))

    def j_invariant(self) -> int:
        F = self.F
        b2, b4, _, _ = self.b_invariants()
        c4 = F.sub(F.mul(b2, b2), F.mul(F.from_int(24), b4))
        return F.div(F.mul(c4, F.mul(c4, c4)), self.discriminant())

    def _rhs(self, x: int) -> int:
        F = self.F
        _, a2, _, a4, a6 = self.a
        return F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6)

    def _lin(self, x: int) -> int:
        a1, _, a3, _, _ = self.a
        return self.F.add(self.F.mul(a1, x), a3)

    def contains(self, P) -> bool:
        if P is INFINITY:
            return True
        x, y = P
        F = self.F
        lhs = F.add(F.mul(y, y), F.mul(self._lin(x), y))
        return lhs == self._rhs(x)

    def ys_over(self, x: int) -> list[int]:
        return _solve_quadratic(self.F, self._lin(x), self._rhs(x))

    def points(self) -> list:
        """All rational points, infinity first, then affine points sorted."""
        if self._points is None:
            pts = [INFINITY]
            for x in range(self.F.q):
                for y in self.ys_over(x):
                    pts.append((x, y))
            self._points = pts
        return self._points

    def affine_points(self) -> list:
        return self.points()[1:]

    def count(self) -> int:
        return len(self.points())

    def trace(self) -> int:
        return self.F.q + 1 - self.count()

    def neg(self, P):
        if P is INFINITY:
            return INFINITY
        x, y = P
        F = self.F
        return (x, F.sub(F.neg(y), self._lin(x)))

    def is_two_torsion(self, P) -> bool:
        return P is INFINITY or self.neg(P) == P

    def tangent_slope(self, P) -> int:
        """dy/dx at an affine point that is not 2-torsion."""
        F = self.F
        a1, a2, a3, a4, _ = self.a
        x, y = P
        num = F.sub(F.add(F.add(F.mul(F.from_int(3), F.mul(x, x)), F.mul(F.from_int(2), F.mul(a2, x))), a4),
                    F.mul(a1, y))
        den = F.add(F.add(F.mul(F.from_int(2), y), F.mul(a1, x)), a3)
        if den == 0:
            raise DomainError("vertical tangent at a 2-torsion point")
        return F.div(num, den)

    def add(self, P, Q):
        if P is INFINITY:
            return Q
        if Q is INFINITY:
            return P
        F = self.F
        a1, a2, a3, a4, a6 = self.a
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if F.add(F.add(y1, y2), self._lin(x2)) == 0:
                return INFINITY
            lam = self.tangent_slope(P)
        else:
            lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
        nu = F.sub(y1, F.mul(lam, x1))
        x3 = F.sub(F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(a1, lam)), a2), x1), x2)
        y3 = F.sub(F.sub(F.neg(F.mul(F.add(lam, a1), x3)), nu), a3)
        return (x3, y3)

    def mul(self, k: int, P):
        if k < 0:
            return self.mul(-k, self.neg(P))
        out, base = INFINITY, P
        while k:
            if k & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            k >>= 1
        return out

    def coset_representatives(self, k: int, allow: Callable = lambda P: True) -> list:
        """One point per class of E(F)/kE(F), the first allowed point in point order."""
        pts = self.points()
        image = {self.mul(k, P) for P in pts}
        reps, covered = [], set()
        for P in pts:
            if P in covered:
                continue
            coset = {self.add(P, R) for R in image}
            chosen = next((R for R in pts if R in coset and allow(R)), None)
            if chosen is None:
                raise DomainError("a coset has no allowed representative")
            reps.append(chosen)
            covered |= coset
        return reps

    def base_change(self, big: GF) -> "EllipticModel":
        emb = big.embedding_from(self.F)
        return EllipticModel(big, *(emb[c] for c in self.a))

    def frobenius_conjugate(self) -> "EllipticModel":
        return EllipticModel(self.F, *(self.F.frobenius(c) for c in self.a))


def weil_count(q: int, trace: int, d: int) -> int:
    """#E(F_{q^d}) for an elliptic curve with Frobenius trace `trace` over F_q."""
    s_prev, s = 2, trace
    for _ in range(d - 1):
        s_prev, s = s, trace * s - q * s_prev
    return q**d + 1 - s


@dataclass
class Genus2Model:
    """y^2 = f(x) with f a sextic over F (odd characteristic).

    The two points at infinity are ("inf", +1) and ("inf", -1); the sign is
    the value of y/x^3 there divided by a fixed square root of the leading
    coefficient, so ("inf", +1) is where y/x^3 - sqrt(lead) vanishes.
    """

    F: GF
    f: tuple
    automorphism: Optional[Callable] = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.F.p == 2:
            raise DomainError("genus-2 models here need odd characteristic")
        R = PolyRing(self.F)
        self.f = R.trim(self.f)
        if len(self.f) - 1 not in (5, 6):
            raise DomainError("need a quintic or sextic")
        if len(R.gcd(self.f, R.derivative(self.f))) > 1:
            raise DomainError("f must be squarefree")
        self.ring = R

    @property
    def lead(self) -> int:
        return self.f[-1]

    def infinite_points(self) -> list:
        if len(self.f) - 1 == 5:
            return [("inf", 0)]
        if self.F.is_square(self.lead):
            return [("inf", 1), ("inf", -1)]
        return []

    def affine_points(self) -> list:
        out = []
        for x in range(self.F.q):
            v = self.ring.evaluate(self.f, x)
            r = self.F.sqrt(v)
            if r is None:
                continue
            out.extend(sorted({(x, r), (x, self.F.neg(r))}))
        return out

    def points(self) -> list:
        return self.infinite_points() + self.affine_points()

    def count(self) -> int:
        return len(self.points())

    def base_change(self, big: GF) -> "Genus2Model":
        emb = big.embedding_from(self.F)
        return Genus2Model(big, tuple(emb[c] for c in self.f))


def reference_genus2_q3() -> Genus2Model:
    """y^2 = x^6 + x^5 + x^4 + x^2 - x + 1 over F_3 with its order-8 automorphism."""
    F = GF(3)
    f = (1, 2, 1, 0, 1, 1, 1)

    def auto(P):
        # (x, y) -> ((1 + x)/(1 - x), y/(1 - x)^3), extended to the points at infinity
        if P[0] == "inf":
            # limits: (1 + x)/(1 - x) -> -1 and y/(1 - x)^3 = (y/x^3)(x/(1 - x))^3 -> -sign
            return (F.neg(1), F.neg(F.from_int(P[1])))
        x, y = P
        d = F.sub(1, x)
        if d == 0:
            # x = 1 goes to infinity; y/(1-x)^3 over ((1+x)/(1-x))^3 = y/(1+x)^3 = y/8 = -y
            s = F.mul(y, F.inv(F.pow(F.add(1, x), 3)))
            return ("inf", 1 if s == 1 else -1)
        return (F.div(F.add(1, x), d), F.div(y, F.pow(d, 3)))

    return Genus2Model(F, f, auto)
