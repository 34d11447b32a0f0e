"""Exact arithmetic in O_K, K = Q(sqrt(-3), sqrt(5)), and reduction of unimodular
totally positive 2x2 Hermitian matrices over O_K to the identity.

O_K = Z[zeta, phi] with zeta^2 + zeta + 1 = 0 and phi^2 = phi + 1.  Complex
conjugation sends zeta to -1 - zeta and fixes phi; the other generator of the
Galois group sends phi to 1 - phi and fixes zeta.  Real quantities (norms of
complex embeddings, ratios of real embeddings) live in Q(sqrt 5) and are
compared exactly through KPlusElem.sign().
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact import DomainError


class InternalError(RuntimeError):
    """Raised when a step the reduction relies on fails; indicates a bug."""


# -- Q(sqrt 5) --------------------------------------------------------------

@dataclass(frozen=True)
class KPlusElem:
    """u + v*phi in Q(sqrt 5), with phi = (1 + sqrt 5)/2 taken as a positive real."""

    u: Fraction
    v: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    def __add__(self, o):
        o = _kp(o)
        return KPlusElem(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return KPlusElem(-self.u, -self.v)

    def __sub__(self, o):
        return self + (-_kp(o))

    def __rsub__(self, o):
        return _kp(o) - self

    def __mul__(self, o):
        o = _kp(o)
        # (u1 + v1 phi)(u2 + v2 phi) with phi^2 = phi + 1
        return KPlusElem(self.u * o.u + self.v * o.v, self.u * o.v + self.v * o.u + self.v * o.v)

    __rmul__ = __mul__

    def conj(self) -> "KPlusElem":
        """Galois conjugate: phi -> 1 - phi."""
        return KPlusElem(self.u + self.v, -self.v)

    def norm(self) -> Fraction:
        return (self * self.conj()).u

    def inverse(self) -> "KPlusElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return KPlusElem(c.u / n, c.v / n)

    def __truediv__(self, o):
        return self * _kp(o).inverse()

    def sign(self) -> int:
        """Sign of u + v*phi as a real number, decided with integers only."""
        # u + v phi = (A + B sqrt 5)/2 with A = 2u + v, B = v
        A, B = 2 * self.u + self.v, self.v
        if A >= 0 and B >= 0:
            return 0 if A == 0 and B == 0 else 1
        if A <= 0 and B <= 0:
            return -1
        big = A * A - 5 * B * B  # never zero here since sqrt 5 is irrational
        if big > 0:
            return 1 if A > 0 else -1
        return 1 if B > 0 else -1

    def is_integral(self) -> bool:
        return self.u.denominator == 1 and self.v.denominator == 1

    def __float__(self):
        return float(self.u) + float(self.v) * (1 + math.sqrt(5)) / 2


def _kp(x) -> KPlusElem:
    if isinstance(x, KPlusElem):
        return x
    return KPlusElem(Fraction(x))


PHI_REAL = KPlusElem(0, 1)


def totally_positive(x: KPlusElem) -> bool:
    return x.sign() > 0 and x.conj().sign() > 0


def compare(a: KPlusElem, b: KPlusElem) -> int:
    """Sign of a - b as real numbers."""
    return (a - b).sign()


# -- O_K --------------------------------------------------------------------

def _zmul(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    """(a + b zeta)(c + d zeta) in Z[zeta]."""
    return a * c - b * d, a * d + b * c - b * d


@dataclass(frozen=True)
class OKElem:
    """a + b*zeta + c*phi + d*zeta*phi with integer coordinates."""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0

    @classmethod
    def of(cls, x) -> "OKElem":
        if isinstance(x, OKElem):
            return x
        if isinstance(x, int):
            return cls(x)
        raise TypeError(f"cannot coerce {x!r}")

    def parts(self):
        """(x1, x2) in Z[zeta]^2 with self = x1 + x2 phi."""
        return (self.a, self.b), (self.c, self.d)

    def __add__(self, o):
        o = OKElem.of(o)
        return OKElem(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return OKElem(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, o):
        return self + (-OKElem.of(o))

    def __rsub__(self, o):
        return OKElem.of(o) - self

    def __mul__(self, o):
        o = OKElem.of(o)
        (x1, x2), (y1, y2) = self.parts(), o.parts()
        p11 = _zmul(*x1, *y1)
        p22 = _zmul(*x2, *y2)
        p12 = _zmul(*x1, *y2)
        p21 = _zmul(*x2, *y1)
        # (x1 + x2 phi)(y1 + y2 phi) = x1 y1 + x2 y2 + (x1 y2 + x2 y1 + x2 y2) phi
        return OKElem(p11[0] + p22[0], p11[1] + p22[1],
                      p12[0] + p21[0] + p22[0], p12[1] + p21[1] + p22[1])

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            inv = self.unit_inverse()
            if inv is None:
                raise DomainError("negative power of a non-unit")
            return inv ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "OKElem":
        """Complex conjugation: zeta -> -1 - zeta."""
        return OKElem(self.a - self.b, -self.b, self.c - self.d, -self.d)

    def galois(self) -> "OKElem":
        """phi -> 1 - phi."""
        return OKElem(self.a + self.c, self.b + self.d, -self.c, -self.d)

    def is_real(self) -> bool:
        return self.b == 0 and self.d == 0

    def kplus(self) -> KPlusElem:
        if not self.is_real():
            raise DomainError(f"{self} is not in the real subring")
        return KPlusElem(self.a, self.c)

    def hermitian_norm(self) -> KPlusElem:
        """x * conj(x), an element of the real subring."""
        return (self * self.conj()).kplus()

    def norm(self) -> int:
        """Norm to Q."""
        n = self.hermitian_norm().norm()
        assert n.denominator == 1
        return int(n)

    def unit_inverse(self) -> Optional["OKElem"]:
        n = self.norm()
        if abs(n) != 1:
            return None
        rest = self.conj() * self.galois() * self.galois().conj()
        return rest * n

    def is_zero(self) -> bool:
        return self == ZERO

    def __repr__(self):
        terms = []
        for coef, name in ((self.a, ""), (self.b, "z"), (self.c, "p"), (self.d, "zp")):
            if coef:
                terms.append(f"{coef}{'*' + name if name else ''}")
        return "OK(" + (" + ".join(terms) if terms else "0") + ")"


ZERO = OKElem()
ONE = OKElem(1)
ZETA = OKElem(0, 1)
PHI = OKElem(0, 0, 1)
PHI_INV = OKElem(-1, 0, 1)  # phi - 1


def _round_zeta(s: Fraction, t: Fraction) -> tuple[int, int]:
    """Nearest point of Z[zeta] to s + t*zeta under N(x) = s^2 - st + t^2."""
    s0, t0 = round(s), round(t)
    best = None
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            ds, dt = s - (s0 + i), t - (t0 + j)
            n = ds * ds - ds * dt + dt * dt
            key = (n, abs(i) + abs(j), i, j)
            if best is None or key < best[0]:
                best = (key, (s0 + i, t0 + j))
    if best[0][0] > Fraction(1, 3):
        raise InternalError("hexagonal rounding left a remainder of norm above 1/3")
    return best[1]


NORM_BOUND = Fraction(5, 9)
EMBEDDING_BOUND = PHI_REAL * PHI_REAL * PHI_REAL * PHI_REAL * Fraction(1, 3)  # phi^4/3


def satisfies_division_bounds(r: OKElem, d: OKElem) -> bool:
    if r.norm() > NORM_BOUND * d.norm():
        return False
    rn, dn = r.hermitian_norm(), d.hermitian_norm()
    # first embedding: phi positive; second: Galois conjugate values, same real constant
    if compare(EMBEDDING_BOUND * dn, rn) < 0:
        return False
    if compare(EMBEDDING_BOUND * dn.conj(), rn.conj()) < 0:
        return False
    return True


def euclid_div(n: OKElem, d: OKElem) -> tuple[OKElem, OKElem]:
    """q, r with n = q d + r and both remainder bounds, verified exactly."""
    n, d = OKElem.of(n), OKElem.of(d)
    if d.is_zero():
        raise DomainError("division by zero")
    N = d.norm()
    # n/d = n * (product of the other conjugates of d) / N(d)
    num = n * d.conj() * d.galois() * d.galois().conj()
    (x1s, x1t), (x2s, x2t) = num.parts()
    y1 = _round_zeta(Fraction(x1s, N), Fraction(x1t, N))
    y2 = _round_zeta(Fraction(x2s, N), Fraction(x2t, N))
    q = OKElem(y1[0], y1[1], y2[0], y2[1])
    r = n - q * d
    if not satisfies_division_bounds(r, d):
        raise InternalError(f"division bounds fail for {n} / {d}")
    return q, r


# -- 2x2 matrices -----------------------------------------------------------

@dataclass(frozen=True)
class Mat2:
    m11: OKElem
    m12: OKElem
    m21: OKElem
    m22: OKElem

    @classmethod
    def of(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(OKElem.of(a), OKElem.of(b), OKElem.of(c), OKElem.of(d))

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.m11 * o.m11 + self.m12 * o.m21, self.m11 * o.m12 + self.m12 * o.m22,
                    self.m21 * o.m11 + self.m22 * o.m21, self.m21 * o.m12 + self.m22 * o.m22)

    def star(self) -> "Mat2":
        return Mat2(self.m11.conj(), self.m21.conj(), self.m12.conj(), self.m22.conj())

    def galois(self) -> "Mat2":
        return Mat2(self.m11.galois(), self.m12.galois(), self.m21.galois(), self.m22.galois())

    def det(self) -> OKElem:
        return self.m11 * self.m22 - self.m12 * self.m21

    def rows(self):
        return ((self.m11, self.m12), (self.m21, self.m22))


IDENTITY = Mat2(ONE, ZERO, ZERO, ONE)
SWAP = Mat2(ZERO, ONE, ONE, ZERO)


@dataclass(frozen=True)
class HermMat2:
    """[[alpha, conj(beta)], [beta, gamma]] with alpha, gamma real."""

    alpha: OKElem
    beta: OKElem
    gamma: OKElem

    def __post_init__(self):
        if not (self.alpha.is_real() and self.gamma.is_real()):
            raise DomainError("diagonal entries must lie in the real subring")

    @classmethod
    def from_matrix(cls, M: Mat2) -> "HermMat2":
        if M.m12 != M.m21.conj() or not M.m11.is_real() or not M.m22.is_real():
            raise DomainError("matrix is not Hermitian")
        return cls(M.m11, M.m21, M.m22)

    def matrix(self) -> Mat2:
        return Mat2(self.alpha, self.beta.conj(), self.beta, self.gamma)

    def det(self) -> KPlusElem:
        return (self.alpha * self.gamma - self.beta * self.beta.conj()).kplus()

    def congruent(self, C: Mat2) -> "HermMat2":
        return HermMat2.from_matrix(C.star() * self.matrix() * C)

    def is_totally_positive(self) -> bool:
        return totally_positive(self.alpha.kplus()) and totally_positive(self.det())

    def is_identity(self) -> bool:
        return self.alpha == ONE and self.beta == ZERO and self.gamma == ONE


def diag(x, y) -> Mat2:
    return Mat2(OKElem.of(x), ZERO, ZERO, OKElem.of(y))


@dataclass
class Reduction:
    U: Mat2
    result: HermMat2
    steps: list  # (label, norm of alpha) per applied congruence
    visited_alpha_norms: list


TERMINAL_ALPHAS = (OKElem(2, 0, 1, 0), OKElem(3, 0, -1, 0))  # 2 + phi and its conjugate 2 + phibar = 3 - phi
FINAL_STEP = Mat2.of(((OKElem(1, 0, -1, 0), 1), (PHI, -1)))  # takes [[2+phi, 2], [2, 3-phi]] to I


def _unit_power(x: KPlusElem, base: KPlusElem, limit: int = 10_000) -> int:
    """k with x = base^k, for a unit x and base phi^2."""
    k, cur = 0, KPlusElem(1)
    if x == cur:
        return 0
    up, down = cur, cur
    inv = base.inverse()
    for step in range(1, limit):
        up, down = up * base, down * inv
        if up == x:
            return step
        if down == x:
            return -step
    raise DomainError("determinant is not a power of phi^2")


def reduce(A: HermMat2, max_steps: Optional[int] = None) -> Reduction:
    """Find U over O_K with U* A U = I, following the norm-descent argument."""
    if not A.is_totally_positive():
        raise DomainError("matrix is not totally positive")
    det = A.det()
    if not det.is_integral() or abs(det.norm()) != 1:
        raise DomainError("determinant is not a unit")
    if max_steps is None:
        max_steps = 50 + 20 * max(1, int(A.alpha.kplus().norm()).bit_length())
    U = IDENTITY
    steps: list = []
    visited: list = []
    cur = A

    def apply(C: Mat2, label: str):
        nonlocal U, cur
        U = U * C
        cur = cur.congruent(C)
        steps.append((label, int(cur.alpha.kplus().norm())))

    phi2 = KPlusElem(1, 1)  # phi^2 = phi + 1
    i = _unit_power(det, phi2)
    if i:
        apply(diag(PHI_INV ** i if i > 0 else PHI ** (-i), ONE), "normalise determinant")
    if cur.det() != KPlusElem(1):
        raise InternalError("determinant normalisation failed")
    for _ in range(max_steps):
        alpha = cur.alpha.kplus()
        visited.append(int(alpha.norm()))
        # balance the two real embeddings of alpha
        k = 0
        a1, a2 = alpha, alpha.conj()
        while compare(a1, phi2 * a2) > 0:
            a1, a2, k = a1 * phi2.inverse(), a2 * phi2.conj().inverse(), k - 1
        while compare(a1 * phi2, a2) < 0:
            a1, a2, k = a1 * phi2, a2 * phi2.conj(), k + 1
        if k:
            apply(diag(PHI ** k if k > 0 else PHI_INV ** (-k), PHI_INV ** k if k > 0 else PHI ** (-k)),
                  "balance embeddings")
        if cur.alpha == ONE:
            q, _ = euclid_div(cur.beta, ONE)
            if not q.is_zero():
                apply(Mat2(ONE, -q.conj(), ZERO, ONE), "clear beta")
            if not cur.is_identity():
                raise InternalError("alpha = 1 did not lead to the identity")
            return Reduction(U, cur, steps, visited)
        q, r = euclid_div(cur.beta, cur.alpha)
        if not q.is_zero():
            apply(Mat2(ONE, -q.conj(), ZERO, ONE), "euclidean step")
            if cur.beta != r:
                raise InternalError("euclidean step did not produce the remainder")
        na, ng = cur.alpha.kplus().norm(), cur.gamma.kplus().norm()
        if ng < na:
            apply(SWAP, "swap")
            continue
        if cur.alpha == OKElem(2) or cur.alpha in TERMINAL_ALPHAS:
            for label, C in terminal_moves(cur):
                apply(C, label)
            if not cur.is_identity():
                raise InternalError("terminal congruences did not give the identity")
            return Reduction(U, cur, steps, visited)
        raise InternalError(f"no reduction available at alpha = {cur.alpha}")
    raise InternalError("iteration bound exceeded")


UNITS6 = [ONE, ZETA, ZETA * ZETA, -ONE, -ZETA, -(ZETA * ZETA)]


def _exact_quotient(x: OKElem, d: OKElem) -> Optional[OKElem]:
    N = d.norm()
    num = x * d.conj() * d.galois() * d.galois().conj()
    if any(c % N for c in (num.a, num.b, num.c, num.d)):
        return None
    return OKElem(num.a // N, num.b // N, num.c // N, num.d // N)


def _twist_to(A: HermMat2, target: OKElem) -> list[tuple[str, Mat2]]:
    """Congruences making beta equal to target: a root-of-unity twist, then a translation."""
    for u in UNITS6:
        # diag(1, u) sends beta to conj(u) beta
        quo = _exact_quotient(A.beta * u.conj() - target, A.alpha)
        if quo is not None:
            moves = []
            if u != ONE:
                moves.append(("root of unity twist", diag(ONE, u)))
            if not quo.is_zero():
                moves.append(("translate beta", Mat2(ONE, -quo.conj(), ZERO, ONE)))
            return moves
    raise InternalError(f"beta has no unit residue class modulo {A.alpha}")


def terminal_moves(A: HermMat2) -> list[tuple[str, Mat2]]:
    """Closing congruences for alpha in {2, 2 + phi, 3 - phi} and det 1.

    alpha = 2: make beta = 1, after which gamma = 1, then swap and clear beta.
    alpha = 2 + phi (or its conjugate): make beta = 2 and apply a fixed matrix.
    """
    if A.det() != KPlusElem(1):
        raise DomainError("terminal step needs determinant 1")
    if A.alpha == OKElem(2):
        # beta = 1 forces gamma = 1; [[2, 1], [1, 1]] then closes in two fixed moves
        return _twist_to(A, ONE) + [("swap", SWAP), ("clear beta", Mat2(ONE, -ONE, ZERO, ONE))]
    if A.alpha in TERMINAL_ALPHAS:
        final = FINAL_STEP if A.alpha == TERMINAL_ALPHAS[0] else FINAL_STEP.galois()
        return _twist_to(A, OKElem(2)) + [("final congruence", final)]
    raise DomainError(f"alpha = {A.alpha} is not a terminal value")


def terminal_reduction(A: HermMat2) -> tuple[Mat2, HermMat2]:
    U = IDENTITY
    for _, C in terminal_moves(A):
        U = U * C
    return U, A.congruent(U)


def example_matrix() -> HermMat2:
    """[[2 + phi, 2], [2, 3 - phi]]."""
    return HermMat2(OKElem(2, 0, 1, 0), OKElem(2), OKElem(3, 0, -1, 0))


def random_unimodular(rng: random.Random, length: int = 6, size: int = 2) -> Mat2:
    """Product of random elementary, unit-diagonal and swap matrices."""
    C = IDENTITY
    for _ in range(length):
        kind = rng.randrange(4)
        if kind == 0:
            x = OKElem(*(rng.randint(-size, size) for _ in range(4)))
            C = C * Mat2(ONE, x, ZERO, ONE)
        elif kind == 1:
            x = OKElem(*(rng.randint(-size, size) for _ in range(4)))
            C = C * Mat2(ONE, ZERO, x, ONE)
        elif kind == 2:
            u = rng.choice(UNITS6) * (PHI ** rng.randint(0, 2) if rng.random() < 0.5 else PHI_INV ** rng.randint(0, 2))
            C = C * diag(u, rng.choice(UNITS6))
        else:
            C = C * SWAP
    return C
