"""Small finite fields with log/antilog tables, and polynomials over them.

Elements of F_q (q = p^n) are plain ints 0..q-1: the base-p digits of the int
are the coefficients of the residue class modulo the defining polynomial,
constant term first.  The class of x is always a generator of the
multiplicative group, so every field here comes with discrete-log tables.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from ..exact import DomainError, prime_power

MAX_ORDER = 1 << 16

# Primitive defining polynomials, coefficients constant-first.  These are the
# Conway polynomials for the listed orders; anything else falls back to the
# lexicographically first primitive polynomial.
DEFINING_POLYNOMIALS = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    16: (1, 1, 0, 0, 1),
    32: (1, 0, 1, 0, 0, 1),
    64: (1, 1, 0, 1, 1, 0, 1),
    128: (1, 1, 0, 0, 0, 0, 0, 1),
    256: (1, 0, 1, 1, 1, 0, 0, 0, 1),
    512: (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    1024: (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    9: (2, 2, 1),
    27: (1, 2, 0, 1),
    81: (2, 0, 0, 2, 1),
    243: (1, 2, 0, 0, 0, 1),
    729: (2, 2, 1, 0, 2, 0, 1),
    25: (2, 4, 1),
    125: (3, 3, 0, 1),
    49: (3, 6, 1),
}


def _digits(v: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _from_digits(ds: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _times_x(ds: list[int], modulus: Sequence[int], p: int) -> list[int]:
    n = len(ds)
    top = ds[-1]
    shifted = [0] + ds[:-1]
    if top:
        for i in range(n):
            shifted[i] = (shifted[i] - top * modulus[i]) % p
    return shifted


def _is_primitive(modulus: Sequence[int], p: int) -> bool:
    n = len(modulus) - 1
    q = p**n
    ds = [0] * n
    ds[0] = 1
    seen_one_at = None
    for k in range(1, q):
        ds = _times_x(ds, modulus, p) if n > 1 else [(ds[0] * (-modulus[0])) % p]
        if ds == [1] + [0] * (n - 1):
            seen_one_at = k
            break
    return seen_one_at == q - 1


def _first_primitive(p: int, n: int) -> tuple[int, ...]:
    for code in range(p**n):
        modulus = tuple(_digits(code, p, n)) + (1,)
        if modulus[0] and _is_primitive(modulus, p):
            return modulus
    raise DomainError(f"no primitive polynomial of degree {n} over F_{p}")


class GF:
    """The field with q elements, q a prime power at most 2^16."""

    def __init__(self, q: int, modulus: Optional[Sequence[int]] = None):
        p, n = prime_power(q)
        if q > MAX_ORDER:
            raise DomainError(f"field order {q} exceeds {MAX_ORDER}")
        self.q, self.p, self.n = q, p, n
        if modulus is None:
            modulus = DEFINING_POLYNOMIALS.get(q)
            if modulus is None:
                modulus = _first_primitive(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise DomainError("defining polynomial must be monic of degree n")
        self.modulus = modulus
        exp = [0] * (2 * (q - 1))
        log = [-1] * q
        ds = [1] + [0] * (n - 1)
        for k in range(q - 1):
            v = _from_digits(ds, p)
            if log[v] != -1:
                raise DomainError(f"defining polynomial {modulus} is not primitive")
            exp[k] = v
            log[v] = k
            ds = _times_x(ds, modulus, p) if n > 1 else [(ds[0] * (-modulus[0])) % p]
        for k in range(q - 1, 2 * (q - 1)):
            exp[k] = exp[k - (q - 1)]
        self.exp = exp
        self.log = log
        self.generator = exp[1]
        self._neg = [_from_digits([(-d) % p for d in _digits(v, p, n)], p) for v in range(q)]
        self._add_np = None
        self._mul_np = None

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))

    # -- scalar arithmetic --------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % self.p
        p = self.p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def zech(self, k: int) -> Optional[int]:
        """log(1 + g^k), or None when 1 + g^k = 0."""
        v = self.add(1, self.exp[k % (self.q - 1)])
        return None if v == 0 else self.log[v]

    def from_int(self, k: int) -> int:
        return k % self.p

    def is_square(self, a: int) -> bool:
        return a == 0 or self.p == 2 or self.log[a] % 2 == 0

    def chi(self, a: int) -> int:
        """Quadratic character (q odd): 0, 1 or -1."""
        if a == 0:
            return 0
        return 1 if self.log[a] % 2 == 0 else -1

    def sqrt(self, a: int) -> Optional[int]:
        if a == 0:
            return 0
        k = self.log[a]
        if self.p == 2:
            return self.exp[(k * (self.q // 2)) % (self.q - 1)]
        if k % 2:
            return None
        return self.exp[k // 2]

    def trace(self, a: int) -> int:
        """Absolute trace to the prime field, as an int mod p."""
        t, x = 0, a
        for _ in range(self.n):
            t = self.add(t, x)
            x = self.frobenius(x)
        return t

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def sum(self, values: Iterable[int]) -> int:
        out = 0
        for v in values:
            out = self.add(out, v)
        return out

    # -- vectorised tables --------------------------------------------------
    def add_table(self) -> np.ndarray:
        if self._add_np is None:
            if self.q > 1024:
                raise DomainError("table arithmetic is limited to q <= 1024")
            idx = np.arange(self.q)
            if self.p == 2:
                tab = idx[:, None] ^ idx[None, :]
            else:
                tab = np.zeros((self.q, self.q), dtype=np.int64)
                place = 1
                a, b = idx[:, None].copy(), idx[None, :].copy()
                for _ in range(self.n):
                    tab = tab + ((a % self.p + b % self.p) % self.p) * place
                    a, b = a // self.p, b // self.p
                    place *= self.p
            self._add_np = tab.astype(np.int32)
        return self._add_np

    def mul_table(self) -> np.ndarray:
        if self._mul_np is None:
            if self.q > 1024:
                raise DomainError("table arithmetic is limited to q <= 1024")
            tab = np.zeros((self.q, self.q), dtype=np.int32)
            for a in range(1, self.q):
                for b in range(1, self.q):
                    tab[a, b] = self.exp[self.log[a] + self.log[b]]
            self._mul_np = tab
        return self._mul_np

    def embedding_from(self, small: "GF"):
        """An injective ring map small -> self, as a lookup list."""
        if small.p != self.p or self.n % small.n:
            raise DomainError(f"{small} does not embed in {self}")
        ring = PolyRing(self)
        mod = tuple(small.modulus)
        for beta in range(self.q):
            if ring.evaluate(mod, beta) == 0 and beta != 0:
                break
        else:  # pragma: no cover - a root always exists
            raise DomainError("no root of the defining polynomial found")
        table = []
        for v in range(small.q):
            table.append(ring.evaluate(tuple(_digits(v, small.p, small.n)), beta))
        return table


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    """Shared instance of the default field of order q."""
    return GF(q)


class FqElem:
    """Boxed element with operator overloading; convenient, not fast."""

    __slots__ = ("F", "v")

    def __init__(self, F: GF, v: int):
        self.F, self.v = F, v

    def _wrap(self, other):
        if isinstance(other, FqElem):
            if other.F != self.F:
                raise DomainError("elements of different fields")
            return other.v
        return self.F.from_int(int(other))

    def __add__(self, o):
        return FqElem(self.F, self.F.add(self.v, self._wrap(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FqElem(self.F, self.F.sub(self.v, self._wrap(o)))

    def __rsub__(self, o):
        return FqElem(self.F, self.F.sub(self._wrap(o), self.v))

    def __neg__(self):
        return FqElem(self.F, self.F.neg(self.v))

    def __mul__(self, o):
        return FqElem(self.F, self.F.mul(self.v, self._wrap(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FqElem(self.F, self.F.div(self.v, self._wrap(o)))

    def __pow__(self, k: int):
        return FqElem(self.F, self.F.pow(self.v, k))

    def __eq__(self, o):
        if isinstance(o, FqElem):
            return self.F == o.F and self.v == o.v
        if isinstance(o, int):
            return self.v == self.F.from_int(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.F.q, self.v))

    def __repr__(self):
        return f"FqElem({self.F.q}, {self.v})"

    def frobenius(self) -> "FqElem":
        return FqElem(self.F, self.F.frobenius(self.v))


_default_seed = 0


def set_default_seed(seed: int) -> None:
    """Seed used by equal-degree splitting in rings created without an explicit generator."""
    global _default_seed
    _default_seed = int(seed)


class PolyRing:
    """Univariate polynomials over a GF, as tuples constant-first, no trailing zeros."""

    def __init__(self, F: GF, rng: Optional[random.Random] = None):
        self.F = F
        self.rng = rng if rng is not None else random.Random(_default_seed)

    @staticmethod
    def trim(a: Sequence[int]) -> tuple[int, ...]:
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        return tuple(a)

    @staticmethod
    def degree(a: Sequence[int]) -> int:
        return len(a) - 1

    def add(self, a, b):
        F = self.F
        n = max(len(a), len(b))
        return self.trim(F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n))

    def neg(self, a):
        return tuple(self.F.neg(c) for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, a, c: int):
        if c == 0:
            return ()
        return tuple(self.F.mul(x, c) for x in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        F = self.F
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return self.trim(out)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        r = list(a)
        db = len(b) - 1
        inv_lead = F.inv(b[-1])
        quo = [0] * max(len(a) - db, 0)
        for k in range(len(a) - 1 - db, -1, -1):
            c = r[k + db]
            if c == 0:
                continue
            c = F.mul(c, inv_lead)
            quo[k] = c
            for j, y in enumerate(b):
                if y:
                    r[k + j] = F.sub(r[k + j], F.mul(c, y))
        return self.trim(quo), self.trim(r[:db] if db > 0 else [])

    def mod(self, a, b):
        return self.divmod(a, b)[1]

    def monic(self, a):
        if not a:
            return ()
        return self.scale(a, self.F.inv(a[-1]))

    def gcd(self, a, b):
        a, b = self.trim(a), self.trim(b)
        while b:
            a, b = b, self.mod(a, b)
        return self.monic(a)

    def derivative(self, a):
        return self.trim(self.F.mul(self.F.from_int(i), c) for i, c in enumerate(a) if i > 0)

    def evaluate(self, a, x: int) -> int:
        F = self.F
        v = 0
        for c in reversed(a):
            v = F.add(F.mul(v, x), c)
        return v

    def power_mod(self, a, k: int, m):
        out = (1,)
        base = self.mod(a, m)
        while k:
            if k & 1:
                out = self.mod(self.mul(out, base), m)
            base = self.mod(self.mul(base, base), m)
            k >>= 1
        return out

    def pth_root(self, a):
        """Inverse of Frobenius on a polynomial whose derivative vanishes."""
        F = self.F
        p = F.p
        out = []
        for i in range(0, len(a), p):
            out.append(F.pow(a[i], F.q // p))
        return self.trim(out)

    def squarefree(self, a) -> dict[int, tuple[int, ...]]:
        """Monic squarefree parts keyed by multiplicity: a = lead * prod part^k."""
        a = self.monic(a)
        out: dict[int, tuple[int, ...]] = {}
        if len(a) <= 1:
            return out
        p = self.F.p
        self._sqf_into(a, 1, out, p)
        return out

    def _sqf_into(self, a, weight, out, p):
        # Yun-style decomposition with the characteristic-p correction.
        da = self.derivative(a)
        c = self.gcd(a, da)
        w = self.divmod(a, c)[0]
        i = 1
        while len(w) > 1:
            y = self.gcd(w, c)
            z = self.divmod(w, y)[0]
            if len(z) > 1:
                k = i * weight
                out[k] = self.monic(self.mul(out[k], z)) if k in out else z
            w = y
            c = self.divmod(c, y)[0]
            i += 1
        if len(c) > 1:
            self._sqf_into(self.pth_root(c), weight * p, out, p)

    def distinct_degree(self, a) -> list[tuple[int, tuple[int, ...]]]:
        """Split a monic squarefree polynomial by the degree of its irreducible factors."""
        F = self.F
        out = []
        xq = (0, 1)
        rest = self.monic(a)
        d = 0
        while len(rest) - 1 >= 2 * (d + 1):
            d += 1
            xq = self.power_mod(xq, F.q, rest)
            g = self.gcd(rest, self.sub(xq, (0, 1)))
            if len(g) > 1:
                out.append((d, g))
                rest = self.divmod(rest, g)[0]
                xq = self.mod(xq, rest) if len(rest) > 1 else ()
        if len(rest) > 1:
            out.append((len(rest) - 1, rest))
        return out

    def equal_degree(self, a, d: int) -> list[tuple[int, ...]]:
        """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
        n = len(a) - 1
        if n == d:
            return [self.monic(a)]
        F = self.F
        while True:
            r = self.trim(self.rng.randrange(F.q) for _ in range(n))
            if len(r) <= 1:
                continue
            if F.p == 2:
                t, x = r, r
                for _ in range(F.n * d - 1):
                    x = self.mod(self.mul(x, x), a)
                    t = self.add(t, x)
                g = self.gcd(a, t)
            else:
                g = self.gcd(a, self.sub(self.power_mod(r, (F.q**d - 1) // 2, a), (1,)))
            if 1 < len(g) < len(a):
                return (self.equal_degree(g, d)
                        + self.equal_degree(self.divmod(a, g)[0], d))

    def factor(self, a) -> list[tuple[tuple[int, ...], int]]:
        """Monic irreducible factors with multiplicity, sorted."""
        out = []
        for k, part in self.squarefree(a).items():
            for d, chunk in self.distinct_degree(part):
                for f in self.equal_degree(chunk, d):
                    out.append((f, k))
        out.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
        return out

    def roots(self, a) -> list[int]:
        return sorted(x for x in range(self.F.q) if self.evaluate(a, x) == 0)
