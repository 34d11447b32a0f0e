"""Exact integer and integer-polynomial arithmetic.

Everything here works on Python ints and ``fractions.Fraction``; there is no
floating point anywhere in this module.  Polynomials are immutable and store
their coefficients constant term first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


class DomainError(ValueError):
    """Raised when an operation receives input outside its domain."""


# ---------------------------------------------------------------------------
# integers

def floor_two_sqrt(n: int) -> int:
    """floor(2*sqrt(n)), computed exactly."""
    if n < 0:
        raise DomainError("negative argument")
    return math.isqrt(4 * n)


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise DomainError("valuation of zero is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed bases, exact below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, a) with q = p**a, or raise DomainError."""
    if q < 2:
        raise DomainError(f"{q} is not a prime power")
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            a = valuation(q, p)
            if p ** a != q or not is_prime(p):
                raise DomainError(f"{q} is not a prime power")
            return p, a
    return q, 1


def factor_integer(n: int) -> dict[int, int]:
    """Trial-division factorization of a positive integer (small inputs only)."""
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def integer_radical(n: int) -> int:
    """Product of the distinct primes dividing n (radical(0) is 0, radical(+-1) is 1)."""
    if n == 0:
        return 0
    return math.prod(factor_integer(n))


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    fac = factor_integer(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# polynomials

def _strip(coeffs: Iterable[int]) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPoly:
    """Dense polynomial with integer coefficients, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _strip(coeffs)
        for a in c:
            if not isinstance(a, int):
                raise TypeError(f"non-integer coefficient {a!r}")
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    # constructors
    @classmethod
    def x(cls) -> "IntPoly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def linear(cls, c: int) -> "IntPoly":
        """The polynomial x + c."""
        return cls((c, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPoly":
        out = cls((1,))
        for r in roots:
            out = out * cls((-r, 1))
        return out

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def require_monic(self) -> None:
        if not self.is_monic():
            raise DomainError(f"polynomial {self} is not monic")

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def trace(self) -> int:
        """Minus the coefficient of x^(n-1) of a monic degree-n polynomial."""
        self.require_monic()
        return -self.coeff(self.degree - 1)

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power")
        out, base = IntPoly((1,)), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x: Number) -> Number:
        acc: Number = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly(i * a for i, a in enumerate(self.coeffs) if i)

    def shift(self, c: int) -> "IntPoly":
        """Return p(x + c)."""
        out = [0] * len(self.coeffs)
        # Horner in the shifted variable
        for a in reversed(self.coeffs):
            for i in range(len(out) - 1, 0, -1):
                out[i] = out[i - 1] + c * out[i]
            out[0] = a + c * out[0]
        return IntPoly(out)

    def reversed_sign(self) -> "IntPoly":
        """Return p(-x)."""
        return IntPoly(a if i % 2 == 0 else -a for i, a in enumerate(self.coeffs))

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPoly":
        """Divide by the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.coeffs[-1] < 0:
            c = -c
        return IntPoly(a // c for a in self.coeffs)

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly((other,))
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def sort_key(self):
        """Graded lexicographic key: degree first, then coefficients from the top."""
        return (self.degree, tuple(reversed(self.coeffs)))

    def __lt__(self, other: "IntPoly"):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if i == 0:
                body = str(mag)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _coerce(p) -> IntPoly:
    if isinstance(p, IntPoly):
        return p
    if isinstance(p, int):
        return IntPoly((p,))
    raise TypeError(f"cannot use {p!r} as a polynomial")


def _nonzero(*polys: IntPoly) -> None:
    for p in polys:
        if p.is_zero():
            raise DomainError("zero polynomial not allowed here")


# ---------------------------------------------------------------------------
# division, gcd, resultant

def pseudo_remainder(a: IntPoly, b: IntPoly) -> IntPoly:
    """prem(a, b): remainder of lc(b)^(deg a - deg b + 1) * a divided by b."""
    _nonzero(b)
    if a.degree < b.degree:
        return a
    r = list(a.coeffs)
    db, lb = b.degree, b.lc
    bc = b.coeffs
    for k in range(a.degree, db - 1, -1):
        lead = r[k]
        r = [lb * c for c in r]
        if lead:
            shift = k - db
            for i, c in enumerate(bc):
                r[i + shift] -= lead * c
        r.pop()
    return IntPoly(r)


def exact_quotient(a: IntPoly, b: IntPoly) -> IntPoly:
    """Quotient a / b when b divides a in Z[x]; raises if it does not."""
    _nonzero(b)
    if a.is_zero():
        return a
    if a.degree < b.degree:
        raise DomainError("division is not exact")
    r = list(a.coeffs)
    db, lb = b.degree, b.lc
    q = [0] * (a.degree - db + 1)
    for k in range(a.degree, db - 1, -1):
        lead = r[k]
        if lead % lb:
            raise DomainError("division is not exact")
        t = lead // lb
        q[k - db] = t
        if t:
            for i, c in enumerate(b.coeffs):
                r[i + k - db] -= t * c
    if any(r[:db]):
        raise DomainError("division is not exact")
    return IntPoly(q)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Greatest common divisor in Z[x] by the primitive remainder sequence.

    The result has positive leading coefficient; its content is the gcd of the
    contents of a and b.
    """
    if a.is_zero():
        return b.primitive() * b.content() if not b.is_zero() else b
    if b.is_zero():
        return a.primitive() * a.content()
    c = math.gcd(a.content(), b.content())
    a, b = a.primitive(), b.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        r = pseudo_remainder(a, b)
        a, b = b, (r.primitive() if not r.is_zero() else r)
    return a.primitive() * c


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Res(f, g) = lc(f)^deg(g) * prod g(alpha) over the roots alpha of f.

    Subresultant pseudo-remainder sequence; all divisions are exact integer
    divisions.
    """
    _nonzero(f, g)
    A, B = f, g
    if A.degree == 0:
        return A.lc ** B.degree
    if B.degree == 0:
        return B.lc ** A.degree
    a, b = A.content(), B.content()
    A = IntPoly(c // a for c in A.coeffs)
    B = IntPoly(c // b for c in B.coeffs)
    t = a ** B.degree * b ** A.degree
    s = 1
    if A.degree < B.degree:
        A, B = B, A
        if A.degree % 2 and B.degree % 2:
            s = -1
    g_, h = 1, 1
    while B.degree > 0:
        delta = A.degree - B.degree
        if A.degree % 2 and B.degree % 2:
            s = -s
        R = pseudo_remainder(A, B)
        A = B
        div = g_ * h ** delta
        B = IntPoly(_exact_div(c, div) for c in R.coeffs)
        if B.is_zero():
            return 0
        g_ = A.lc
        h = _exact_div(g_ ** delta, h ** (delta - 1)) if delta else h
    hfinal = B.lc ** A.degree
    if A.degree > 1:
        hfinal = _exact_div(hfinal, h ** (A.degree - 1))
    return s * t * hfinal


def _exact_div(n: int, d: int) -> int:
    q, r = divmod(n, d)
    if r:
        raise ArithmeticError("inexact division in subresultant sequence")
    return q


def radical(f: IntPoly) -> IntPoly:
    """Squarefree part f / gcd(f, f'), primitive with positive leading coefficient."""
    _nonzero(f)
    if f.degree <= 0:
        return IntPoly((1,))
    g = poly_gcd(f, f.derivative()).primitive()
    return exact_quotient(f.primitive(), g).primitive()


# ---------------------------------------------------------------------------
# Sturm sequences

@dataclass(frozen=True)
class SturmChain:
    chain: tuple

    @classmethod
    def of(cls, f: IntPoly) -> "SturmChain":
        """Sturm chain of a squarefree polynomial (scaled by positive constants only)."""
        _nonzero(f)
        seq = [f, f.derivative()]
        while not seq[-1].is_zero() and seq[-1].degree > 0:
            a, b = seq[-2], seq[-1]
            r = pseudo_remainder(a, b)
            # prem multiplies by lc(b)^(k); undo a negative factor to keep signs
            k = a.degree - b.degree + 1
            if b.lc < 0 and k % 2:
                r = -r
            if r.is_zero():
                break
            r = -r
            seq.append(IntPoly(c // r.content() for c in r.coeffs))
        return cls(tuple(p for p in seq if not p.is_zero()))

    def variations(self, x: Union[Number, str]) -> int:
        signs = []
        for p in self.chain:
            if x == "+inf":
                v = p.lc
            elif x == "-inf":
                v = p.lc if p.degree % 2 == 0 else -p.lc
            else:
                v = p(x)
            if v:
                signs.append(v > 0)
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_real_roots_in(f: IntPoly, a: Union[Number, str], b: Union[Number, str]) -> int:
    """Number of distinct real roots of f in the closed interval [a, b].

    Endpoints may be rationals or the strings "-inf" / "+inf".
    """
    _nonzero(f)
    r = radical(f)
    if r.degree <= 0:
        return 0
    if a not in ("-inf",) and b not in ("+inf",) and Fraction(a) > Fraction(b):
        raise DomainError("empty interval")
    chain = SturmChain.of(r)
    n = chain.variations(a) - chain.variations(b)
    if a != "-inf" and r(a) == 0:
        n += 1
    return n


def count_real_roots(f: IntPoly) -> int:
    return count_real_roots_in(f, "-inf", "+inf")


def all_roots_real_in(f: IntPoly, a: Union[Number, str], b: Union[Number, str]) -> bool:
    """True iff every complex root of f is real and lies in [a, b]."""
    r = radical(f)
    if r.degree <= 0:
        return True
    return count_real_roots_in(r, a, b) == r.degree


# ---------------------------------------------------------------------------
# power sums

def power_sums(f: IntPoly, k: int) -> list[int]:
    """Power sums p_1..p_k of the roots of a monic polynomial (Newton identities)."""
    f.require_monic()
    n = f.degree
    a = [f.coeff(n - i) for i in range(n + 1)]  # a[0] = 1, a[i] = coeff of x^(n-i)
    p = [n]
    for j in range(1, k + 1):
        s = j * a[j] if j <= n else 0
        for i in range(1, min(j - 1, n) + 1):
            s += a[i] * p[j - i]
        p.append(-s)
    return p[1:]


def from_power_sums(sums: Sequence[int], n: int) -> IntPoly:
    """Monic degree-n polynomial whose roots have power sums p_1..p_n."""
    a = [Fraction(1)]
    for j in range(1, n + 1):
        s = Fraction(sums[j - 1])
        for i in range(1, j):
            s += a[i] * sums[j - i - 1]
        a.append(-s / j)
    if any(c.denominator != 1 for c in a):
        raise DomainError("power sums do not come from an integer polynomial")
    return IntPoly(int(c) for c in reversed(a))


# ---------------------------------------------------------------------------
# Newton polygons

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v_p(c_i)).

    ``slopes`` lists root valuations (the negated hull slopes) in ascending
    order, each with its multiplicity.
    """

    p: int
    vertices: tuple
    slopes: tuple

    def segments(self):
        """Hull segments left to right as ((i0, v0), (i1, v1))."""
        return list(zip(self.vertices, self.vertices[1:]))


def newton_polygon(f: IntPoly, p: int) -> NewtonPolygon:
    _nonzero(f)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if f.coeff(0) == 0:
        raise DomainError("split off the zero root before taking the Newton polygon")
    pts = [(i, valuation(c, p)) for i, c in enumerate(f.coeffs) if c]
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        slopes.append((Fraction(y0 - y1, x1 - x0), x1 - x0))
    slopes.sort()
    return NewtonPolygon(p, tuple(hull), tuple(slopes))


# ---------------------------------------------------------------------------
# factorization over Q

def factor(f: IntPoly) -> list[tuple[IntPoly, int]]:
    """Irreducible factorization of a monic integer polynomial.

    Delegates to sympy; factors are returned monic and sorted.
    """
    f.require_monic()
    if f.degree == 0:
        return []
    from sympy import Poly, symbols

    x = symbols("x")
    _, facs = Poly(list(reversed(f.coeffs)), x).factor_list()
    out = []
    for fac, mult in facs:
        c = [int(v) for v in reversed(fac.all_coeffs())]
        p = IntPoly(c)
        if p.lc < 0:
            p = -p
        if not p.is_monic():
            raise DomainError("factor of a monic polynomial is not monic")
        out.append((p, int(mult)))
    out.sort(key=lambda t: t[0].sort_key())
    return out
