"""Genus-4 Artin-Schreier covers z^2 + z = f of y^2 + xy = x^3 + x^2 + a^7 over F_32.

Two ramification configurations are possible for a cover with an odd number
of points: a single rational point with differential exponent 6 (moved to
infinity), or three points with exponent 2, one of them rational and moved
to infinity.  Normal forms:

  single point:  f = (al*x + be)*y + (ga*x + de),  al != 0, de in {0, 1}
  three points:  f = al*x + b*u1 + c*u2 + de,      u_i = (y - y_i')/(x - x_i)

where u_i has a simple pole at P_i = (x_i, y_i) only, y_i' being the
y-coordinate of -P_i, and P_1, P_2 avoid the 2-torsion point.  When P_1 and P_2
are not rational they are conjugate over F_32 and c = b^32.  A rational point
away from the poles carries two points of the cover when Tr f(P) = 0 and none
otherwise; a ramified rational point carries one.

All arithmetic takes place in F_1024, which contains F_32 and the coordinates
of the conjugate pairs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .curves import INFINITY, EllipticModel
from .fields import GF, field
from .search import SearchResult

TARGET = 75


def reference_curve() -> EllipticModel:
    F = field(32)
    a = F.generator  # root of the defining polynomial x^5 + x^2 + 1
    return EllipticModel(F, 1, 1, 0, 0, F.pow(a, 7))


class Laurent:
    """Truncated Laurent series sum c_i t^(val + i), known to absolute order `prec`."""

    __slots__ = ("F", "val", "c", "prec")

    def __init__(self, F: GF, val: int, coeffs, prec: int):
        self.F = F
        coeffs = list(coeffs)[: max(prec - val, 0)]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            val += 1
        self.val, self.c, self.prec = val, coeffs, prec

    def coeff(self, k: int) -> int:
        if k >= self.prec:
            raise ValueError("coefficient beyond known precision")
        i = k - self.val
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __add__(self, other: "Laurent") -> "Laurent":
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val) if (self.c or other.c) else prec
        out = [self.F.add(self.coeff(k) if k < self.prec else 0, other.coeff(k) if k < other.prec else 0)
               for k in range(lo, prec)]
        return Laurent(self.F, lo, out, prec)

    def __mul__(self, other: "Laurent") -> "Laurent":
        F = self.F
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = max(prec - val, 0)
        out = [0] * n
        for i, a in enumerate(self.c[:n]):
            if a:
                for j, b in enumerate(other.c[: n - i]):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Laurent(F, val, out, prec)

    def scale(self, s: int) -> "Laurent":
        return Laurent(self.F, self.val, [self.F.mul(s, a) for a in self.c], self.prec)

    def inverse(self) -> "Laurent":
        F = self.F
        if not self.c:
            raise ZeroDivisionError("series is zero to known precision")
        n = self.prec - self.val  # relative precision
        inv0 = F.inv(self.c[0])
        out = [inv0]
        for k in range(1, n):
            s = 0
            for j in range(1, min(k, len(self.c) - 1) + 1):
                s = F.add(s, F.mul(self.c[j], out[k - j]))
            out.append(F.neg(F.mul(s, inv0)))
        return Laurent(F, -self.val, out, n - self.val)

    @classmethod
    def const(cls, F, a: int, prec: int) -> "Laurent":
        return cls(F, 0, [a], prec)


def expansion_at_infinity(E: EllipticModel, prec: int = 8):
    """(x, y) as Laurent series in t = -x/y at the point at infinity."""
    F = E.F
    a1, a2, a3, a4, a6 = E.a
    n = prec + 6
    z = Laurent(F, 1, [1], n)
    w = Laurent(F, 3, [1], n)
    # w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3, iterated to a fixed point
    z2 = z * z
    z3 = z2 * z
    for _ in range(n):
        w2 = w * w
        w = (z3 + (z * w).scale(a1) + (z2 * w).scale(a2) + w2.scale(a3)
             + (z * w2).scale(a4) + (w2 * w).scale(a6))
    winv = w.inverse()
    x = z * winv
    y = winv.scale(F.neg(1))
    return x, y


@dataclass
class _Tally:
    enumerated: int = 0
    unramified_infinity: int = 0
    counted: int = 0
    best: int = -1


def _trace_bits(F: GF, values) -> int:
    """Bitmask over points of Tr_{F_32/F_2}(v) for v in F_32 (given inside F_1024)."""
    mask = 0
    for i, v in enumerate(values):
        if _tr32(F, v):
            mask |= 1 << i
    return mask


def _tr32(F: GF, v: int) -> int:
    t, x = 0, v
    for _ in range(5):
        t ^= x
        x = F.mul(x, x)
    if t not in (0, 1):
        raise ValueError("value is not in the subfield F_32")
    return t


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr.astype(np.uint64)).astype(np.int64)


class _Setup:
    def __init__(self):
        self.E32 = reference_curve()
        self.K = field(1024)
        self.emb = self.K.embedding_from(self.E32.F)
        self.E = self.E32.base_change(self.K)
        K = self.K
        self.sub = sorted(self.emb)  # F_32 inside F_1024
        self.sub_nonzero = [v for v in self.sub if v]
        self.rational = [P for P in self.E.affine_points() if self._is_rational(P)]
        self.x_series, self.y_series = expansion_at_infinity(self.E, 6)
        self.sqrt = {v: K.sqrt(v) for v in self.sub}

    def _is_rational(self, P) -> bool:
        K = self.K
        return K.pow(P[0], 32) == P[0] and K.pow(P[1], 32) == P[1]

    def conj(self, P):
        return (self.K.pow(P[0], 32), self.K.pow(P[1], 32))

    def pole_function_values(self, Pi, pts):
        """Values of u = (y - y')/(x - x_i) at pts, with y' the y of -P_i (None at P_i)."""
        K, E = self.K, self.E
        xi = Pi[0]
        yneg = E.neg(Pi)[1]
        out = []
        for P in pts:
            if P == Pi:
                out.append(None)
            elif P[0] == xi:
                out.append(E.tangent_slope(P))  # P = -P_i: the limit is the tangent slope
            else:
                out.append(K.div(K.sub(P[1], yneg), K.sub(P[0], xi)))
        return out

    def pole_function_series(self, Pi):
        K = self.K
        yneg = self.E.neg(Pi)[1]
        num = self.y_series + Laurent.const(K, K.neg(yneg), self.y_series.prec)
        den = self.x_series + Laurent.const(K, K.neg(Pi[0]), self.x_series.prec)
        return num * den.inverse()


def _single_point_family(S: _Setup, tally: _Tally, target: int, witnesses: list):
    K = S.K
    pts = S.rational
    full = (1 << len(pts)) - 1
    m_al = np.array([_trace_bits(K, [K.mul(al, K.mul(x, y)) for x, y in pts]) for al in S.sub_nonzero],
                    dtype=np.uint64)
    m_be = np.array([_trace_bits(K, [K.mul(be, y) for x, y in pts]) for be in S.sub], dtype=np.uint64)
    m_ga = np.array([_trace_bits(K, [K.mul(ga, x) for x, y in pts]) for ga in S.sub], dtype=np.uint64)
    mask = m_al[:, None, None] ^ m_be[None, :, None] ^ m_ga[None, None, :]
    for de in (0, 1):
        m = mask ^ np.uint64(full) if de else mask
        zeros = len(pts) - _popcount(m)
        points = 1 + 2 * zeros  # infinity is the only ramified point
        tally.enumerated += points.size
        tally.counted += points.size
        tally.best = max(tally.best, int(points.max()))
        for idx in np.argwhere(points >= target):
            i, j, k = (int(t) for t in idx)
            witnesses.append({"family": "single ramified point",
                              "al": S.sub_nonzero[i], "be": S.sub[j], "ga": S.sub[k], "de": de,
                              "points": int(points[i, j, k])})


def _pair_family(S: _Setup, P1, P2, rational_pair: bool, tally: _Tally, target: int, witnesses: list):
    K = S.K
    poles = {P1, P2}
    pts = [P for P in S.rational if P not in poles]
    full = np.uint64((1 << len(pts)) - 1)
    ramified_rational = 1 + (2 if rational_pair else 0)  # infinity plus the rational poles
    u1 = S.pole_function_values(P1, pts)
    u2 = S.pole_function_values(P2, pts)
    s1, s2 = S.pole_function_series(P1), S.pole_function_series(P2)
    x_m1, u1_m1, u2_m1 = S.x_series.coeff(-1), s1.coeff(-1), s2.coeff(-1)
    alphas = S.sub
    m_al = np.array([_trace_bits(K, [K.mul(al, x) for x, _ in pts]) for al in alphas], dtype=np.uint64)
    r_al = np.array([K.add(K.mul(al, x_m1), S.sqrt[al]) for al in alphas], dtype=np.int64)
    if rational_pair:
        bs = S.sub_nonzero
        m_b = np.array([_trace_bits(K, [K.mul(b, v) for v in u1]) for b in bs], dtype=np.uint64)
        m_c = np.array([_trace_bits(K, [K.mul(c, v) for v in u2]) for c in bs], dtype=np.uint64)
        r_b = np.array([K.mul(b, u1_m1) for b in bs], dtype=np.int64)
        r_c = np.array([K.mul(c, u2_m1) for c in bs], dtype=np.int64)
        mask = m_al[:, None, None] ^ m_b[None, :, None] ^ m_c[None, None, :]
        resid = r_al[:, None, None] ^ r_b[None, :, None] ^ r_c[None, None, :]
        labels = (alphas, bs, bs)
    else:
        bs = list(range(1, K.q))
        vals = []
        for b in bs:
            row = []
            for v in u1:
                t = K.mul(b, v)
                row.append(K.add(t, K.pow(t, 32)))
            vals.append(row)
        m_b = np.array([_trace_bits(K, row) for row in vals], dtype=np.uint64)
        r_b = np.array([K.add(K.mul(b, u1_m1), K.mul(K.pow(b, 32), u2_m1)) for b in bs], dtype=np.int64)
        mask = m_al[:, None] ^ m_b[None, :]
        resid = r_al[:, None] ^ r_b[None, :]
        labels = (alphas, bs)
    ramified = resid != 0
    for de in (0, 1):
        m = mask ^ full if de else mask
        zeros = len(pts) - _popcount(m)
        points = ramified_rational + 2 * zeros
        tally.enumerated += points.size
        tally.unramified_infinity += int((~ramified).sum())
        good = np.where(ramified, points, -1)
        tally.counted += int(ramified.sum())
        tally.best = max(tally.best, int(good.max()))
        for idx in np.argwhere(good >= target):
            idx = tuple(int(t) for t in idx)
            witnesses.append({"family": "three ramified points", "P1": list(P1), "P2": list(P2),
                              "coefficients": [lab[i] for lab, i in zip(labels, idx)], "de": de,
                              "points": int(good[idx])})


def artin_schreier_search_q32(target: int = TARGET) -> SearchResult:
    """Exhaust both ramification configurations and record the best point count."""
    start = time.time()
    S = _Setup()
    witnesses: list = []
    single, rat, conj = _Tally(), _Tally(), _Tally()
    _single_point_family(S, single, target, witnesses)
    usable = [P for P in S.rational if not S.E.is_two_torsion(P)]
    for i, P1 in enumerate(usable):
        for P2 in usable[i + 1:]:
            _pair_family(S, P1, P2, True, rat, target, witnesses)
    seen = set()
    nonrational = [P for P in S.E.affine_points() if not S._is_rational(P)]
    pairs = 0
    for P1 in nonrational:
        P2 = S.conj(P1)
        key = min(P1, P2)
        if key in seen:
            continue
        seen.add(key)
        pairs += 1
        _pair_family(S, key, max(P1, P2), False, conj, target, witnesses)
    best = max(t.best for t in (single, rat, conj))
    families = {
        "single ramified point": single.enumerated,
        "three ramified points, rational pair": rat.enumerated,
        "three ramified points, conjugate pair": conj.enumerated,
    }
    stages = {
        "enumerated": sum(families.values()),
        "skipped: unramified at infinity (genus 3)": rat.unramified_infinity + conj.unramified_infinity,
        "counted exactly": single.counted + rat.counted + conj.counted,
        "rational pole pairs": len(usable) * (len(usable) - 1) // 2,
        "conjugate pole pairs": pairs,
    }
    return SearchResult(
        preset="q32g4", q=32, genus=4, target=target, families=families, stages=stages,
        max_points=best, bound_on_rest=None, witnesses=witnesses, elapsed=time.time() - start,
        notes=["every genus-4 member is counted exactly; no overestimate is used"],
    )
