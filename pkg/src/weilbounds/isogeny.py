"""Honda-Tate data for irreducible real Weil factors.

The exponent of an irreducible factor h0 is the least e such that h0^e is the
real Weil polynomial of an abelian variety.  It is read off from the local
invariants v(pi) [K_v : Q_p] / v(q) at the places v above p, which we obtain
from the Newton polygon of the Weil polynomial and, when a slope segment is
not obviously irreducible, from the factorization of its residual polynomial
over F_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .exact import DomainError, IntPoly, factor, newton_polygon, valuation
from .weil import FieldContext, roots_admissible, weil_from_real


class _Unknown:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Unknown"

    def __bool__(self):
        return False


Unknown = _Unknown()
Exponent = Union[int, _Unknown]


# ---------------------------------------------------------------------------
# elliptic curves

def elliptic_trace_admissible(ctx: FieldContext, t: int) -> bool:
    """Is t the Frobenius trace of some elliptic curve over F_q?"""
    q, p, a = ctx.q, ctx.p, ctx.a
    if t * t > 4 * q:
        raise DomainError(f"|{t}| exceeds 2 sqrt {q}")
    if t % p:
        return True
    if a % 2 == 0:
        s = p ** (a // 2)
        if abs(t) == 2 * s:
            return True
        if p % 3 != 1 and abs(t) == s:
            return True
        if p % 4 != 1 and t == 0:
            return True
        return False
    if t == 0:
        return True
    return p in (2, 3) and abs(t) == p ** ((a + 1) // 2)


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, constant first)

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, p):
    return _trim([c % p for c in a])


def _psub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _trim(a)
    return _trim(q), a


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base, e, mod, p):
    out = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            out = _pdivmod(_pmul(out, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return out


def squarefree_mod_p(a, p) -> bool:
    a = _pmod(a, p)
    if len(a) <= 2:
        return True
    d = _trim([(i * c) % p for i, c in enumerate(a)][1:])
    if not d:
        return False
    return len(_pgcd(a, d, p)) == 1


def distinct_degree_degrees(a, p) -> list[int]:
    """Degrees of the irreducible factors of a squarefree polynomial over F_p."""
    g = _pmod(a, p)
    inv = pow(g[-1], -1, p)
    g = [c * inv % p for c in g]
    degs: list[int] = []
    h = [0, 1]
    i = 1
    while len(g) - 1 >= 2 * i:
        h = _ppowmod(h, p, g, p)
        d = _pgcd(g, _psub(h, [0, 1], p), p)
        if len(d) > 1:
            degs += [i] * ((len(d) - 1) // i)
            g = _pdivmod(g, d, p)[0]
            h = _pdivmod(h, g, p)[1]
        i += 1
    if len(g) > 1:
        degs.append(len(g) - 1)
    return sorted(degs)


# ---------------------------------------------------------------------------
# local invariants

def _residual_polynomial(f: IntPoly, p: int, seg, u: int, w: int) -> list[int]:
    (i0, v0), (i1, _) = seg
    out = []
    for j in range((i1 - i0) // w + 1):
        c = f.coeff(i0 + j * w)
        target = v0 - j * u
        if c and valuation(c, p) == target:
            out.append((c // p ** target) % p)
        else:
            out.append(0)
    return out


def local_invariants(f0: IntPoly, ctx: FieldContext):
    """Invariants (mod 1) at the places above p of Q(pi), f0 irreducible.

    Returns a list of (slope, local degree, invariant) or Unknown.
    """
    np_ = newton_polygon(f0, ctx.p)
    out = []
    for seg in np_.segments():
        (i0, v0), (i1, v1) = seg
        length = i1 - i0
        s = Fraction(v0 - v1, length)
        u, w = s.numerator, s.denominator
        if Fraction(u, ctx.a).denominator == 1:
            # every place on this segment has integral invariant
            out.append((s, length, Fraction(0)))
            continue
        if length == w:
            out.append((s, w, (s * w / ctx.a) % 1))
            continue
        res = _residual_polynomial(f0, ctx.p, seg, u, w)
        if not squarefree_mod_p(res, ctx.p):
            return Unknown
        for d in distinct_degree_degrees(res, ctx.p):
            out.append((s, w * d, (s * w * d / ctx.a) % 1))
    return out


@lru_cache(maxsize=4096)
def _is_irreducible(coeffs: tuple) -> bool:
    f = IntPoly(coeffs)
    if f.degree <= 1:
        return f.degree == 1
    facs = factor(f)
    return len(facs) == 1 and facs[0][1] == 1


@lru_cache(maxsize=65536)
def _exponent_cached(coeffs: tuple, q: int) -> Exponent:
    ctx = FieldContext(q)
    h0 = IntPoly(coeffs)
    if h0.degree == 1:
        t = -h0.coeff(0)
        if t * t == 4 * q or elliptic_trace_admissible(ctx, t):
            return 1
    if h0.degree == 2 and h0.coeff(1) == 0 and h0.coeff(0) == -4 * q:
        # roots +-2 sqrt q with q not a square: Frobenius is +-sqrt q
        return 1
    f0 = weil_from_real(h0, q)
    inv = local_invariants(f0, ctx)
    if inv is Unknown:
        return Unknown
    e = 1
    for _, _, x in inv:
        e = e * x.denominator // math.gcd(e, x.denominator)
    return e


def honda_tate_exponent(h0: IntPoly, ctx: FieldContext) -> Exponent:
    """Least e with h0^e a real Weil polynomial of an abelian variety, or Unknown."""
    h0.require_monic()
    if not roots_admissible(h0, ctx.q):
        raise DomainError(f"{h0} has roots outside the Weil interval")
    if not _is_irreducible(h0.coeffs):
        raise DomainError(f"{h0} is not irreducible")
    return _exponent_cached(h0.coeffs, ctx.q)


def is_ordinary(h0: IntPoly, ctx: FieldContext) -> bool:
    f0 = weil_from_real(h0, ctx.q)
    return f0.coeff(h0.degree) % ctx.p != 0


@dataclass(frozen=True)
class IsogenyFactor:
    h0: IntPoly
    ctx: FieldContext
    exponent: Exponent
    ordinary: bool

    @classmethod
    def of(cls, h0: IntPoly, ctx: FieldContext) -> "IsogenyFactor":
        return cls(h0, ctx, honda_tate_exponent(h0, ctx), is_ordinary(h0, ctx))

    def allows(self, multiplicity: int):
        """True/False if decidable, Unknown otherwise."""
        if self.exponent is Unknown:
            return Unknown
        return multiplicity % self.exponent == 0


# ---------------------------------------------------------------------------
# exceptional prime powers

def defect0(ctx: FieldContext) -> int:
    """Defect-0 dimension: the least delta with (x + m)^delta a real Weil polynomial."""
    if ctx.is_square or ctx.q < 4:
        return 1
    nu_m = valuation(ctx.m, ctx.p)
    return ctx.a // math.gcd(ctx.a, nu_m)


def exceptional_scan(max_exponent: int) -> list[tuple[int, int]]:
    """Odd powers q = 2^k <= 2^max_exponent whose defect-0 dimension exceeds 1."""
    out = []
    for k in range(1, max_exponent + 1, 2):
        ctx = FieldContext(2 ** k)
        d = defect0(ctx)
        if d > 1:
            out.append((ctx.q, d))
    return out


def exceptional_defect_bound(ctx: FieldContext, g: int) -> int:
    """Lower bound ceil(r/2) on the defect of a genus-g curve, r = g mod delta."""
    if g < 1:
        raise DomainError("genus must be positive")
    r = g % defect0(ctx)
    return (r + 1) // 2
