import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weilbounds.exact import (
    DomainError,
    IntPoly,
    all_roots_real_in,
    count_real_roots,
    count_real_roots_in,
    divisors,
    exact_quotient,
    factor,
    factor_integer,
    floor_two_sqrt,
    from_power_sums,
    is_prime,
    mobius,
    newton_polygon,
    poly_gcd,
    power_sums,
    prime_power,
    radical,
    resultant,
    valuation,
)

X = sympy.symbols("x")


def to_sympy(f: IntPoly):
    return sympy.Poly(list(reversed(f.coeffs)), X)


def sylvester_det(f: IntPoly, g: IntPoly) -> int:
    """Res(f, g) as the determinant of the Sylvester matrix, by fraction-exact elimination."""
    m, n = f.degree, g.degree
    size = m + n
    fc, gc = list(reversed(f.coeffs)), list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    M = [[Fraction(v) for v in r] for r in rows]
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, size):
            if M[r][c]:
                fac = M[r][c] / M[c][c]
                M[r] = [a - fac * b for a, b in zip(M[r], M[c])]
    assert det.denominator == 1
    return int(det)


def random_poly(rng, deg, lo=-9, hi=9, monic=False):
    c = [rng.randint(lo, hi) for _ in range(deg)]
    lead = 1 if monic else rng.choice([v for v in range(lo, hi + 1) if v])
    return IntPoly(c + [lead])


# -- integers ---------------------------------------------------------------

def test_floor_two_sqrt_small():
    for n in range(0, 5000):
        m = floor_two_sqrt(n)
        assert m * m <= 4 * n < (m + 1) ** 2


def test_prime_power_and_errors():
    assert prime_power(128) == (2, 7)
    assert prime_power(27) == (3, 3)
    assert prime_power(9) == (3, 2)
    for bad in (0, 1, 6, 12, 100):
        with pytest.raises(DomainError):
            prime_power(bad)


def test_is_prime_matches_sympy():
    for n in range(-5, 3000):
        assert is_prime(n) == sympy.isprime(n)
    for n in (2**61 - 1, 2**89 - 1, 10**18 + 9, 10**18 + 7):
        assert is_prime(n) == sympy.isprime(n)


def test_integer_helpers():
    assert valuation(48, 2) == 4
    assert factor_integer(360) == {2: 3, 3: 2, 5: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


# -- resultants -------------------------------------------------------------

def test_resultant_against_sylvester_oracle():
    rng = random.Random(2024)
    for _ in range(1200):
        f = random_poly(rng, rng.randint(1, 6))
        g = random_poly(rng, rng.randint(1, 6))
        assert resultant(f, g) == sylvester_det(f, g)


def test_resultant_against_root_product():
    # lc(f)^deg(g) * prod g(alpha), evaluated numerically; sympy's resultant is not
    # used as an oracle because it flips the sign for some non-monic inputs
    import numpy as np

    rng = random.Random(7)
    for _ in range(300):
        f = random_poly(rng, rng.randint(1, 5), -20, 20)
        g = random_poly(rng, rng.randint(1, 5), -20, 20)
        roots = np.roots(list(reversed(f.coeffs)))
        approx = f.lc ** g.degree * np.prod([np.polyval(list(reversed(g.coeffs)), r) for r in roots])
        exact = resultant(f, g)
        assert abs(approx.real - exact) <= 1e-6 * max(1.0, abs(exact))


def test_resultant_multiplicativity_and_evaluation_product():
    rng = random.Random(11)
    for _ in range(1000):
        f = random_poly(rng, rng.randint(1, 4), monic=True)
        g1 = random_poly(rng, rng.randint(1, 4))
        g2 = random_poly(rng, rng.randint(1, 4))
        assert resultant(f, g1 * g2) == resultant(f, g1) * resultant(f, g2)
        # for f with integer roots the resultant is the product of g over the roots
        roots = [rng.randint(-6, 6) for _ in range(rng.randint(1, 4))]
        h = IntPoly.from_roots(roots)
        prod = 1
        for r in roots:
            prod *= g1(r)
        assert resultant(h, g1) == prod


def test_resultant_rejects_zero():
    with pytest.raises(DomainError):
        resultant(IntPoly(), IntPoly((1, 1)))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=6),
       st.lists(st.integers(-30, 30), min_size=2, max_size=6))
def test_resultant_antisymmetry(a, b):
    if a[-1] == 0 or b[-1] == 0:
        return
    f, g = IntPoly(a), IntPoly(b)
    sign = -1 if (f.degree * g.degree) % 2 else 1
    assert resultant(f, g) == sign * resultant(g, f)


# -- gcd, radical, quotient ---------------------------------------------------

def test_gcd_radical_and_exact_quotient():
    rng = random.Random(5)
    for _ in range(300):
        a = random_poly(rng, rng.randint(1, 3), monic=True)
        b = random_poly(rng, rng.randint(1, 3), monic=True)
        c = random_poly(rng, rng.randint(1, 3), monic=True)
        g = poly_gcd(a * c, b * c)
        want = sympy.gcd(to_sympy(a * c), to_sympy(b * c))
        assert to_sympy(g).monic() == want.monic()
        assert exact_quotient(a * c, c) == a
        r = radical(a * a * b)
        assert to_sympy(r).monic() == sympy.sqf_part(to_sympy(a * a * b)).monic()
    with pytest.raises(DomainError):
        exact_quotient(IntPoly((1, 0, 1)), IntPoly((1, 1)))


# -- real roots -------------------------------------------------------------

def test_sturm_counts_match_sympy():
    rng = random.Random(3)
    for _ in range(300):
        f = random_poly(rng, rng.randint(1, 7))
        real = sympy.real_roots(to_sympy(f))
        assert count_real_roots(f) == len(set(real))
        a, b = sorted((rng.randint(-8, 8), rng.randint(-8, 8)))
        inside = {r for r in real if a <= r <= b}  # closed interval
        assert count_real_roots_in(f, a, b) == len(inside)


def test_all_roots_real_in_interval():
    f = IntPoly.from_roots([1, 2, 3])
    assert all_roots_real_in(f, 0, 4)
    assert not all_roots_real_in(f, 1.5, 4)
    assert not all_roots_real_in(IntPoly((1, 0, 1)), -10, 10)


# -- power sums and Newton polygons -------------------------------------------

@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_power_sums_roundtrip(roots):
    f = IntPoly.from_roots(roots)
    sums = power_sums(f, len(roots))
    assert sums == [sum(r ** k for r in roots) for k in range(1, len(roots) + 1)]
    assert from_power_sums(sums, len(roots)) == f


def test_newton_polygon_slopes():
    # x^2 + 2x + 4 over Q_2: both roots have valuation 1
    np2 = newton_polygon(IntPoly((4, 2, 1)), 2)
    assert np2.slopes == ((Fraction(1), 2),)
    # x^2 + x + 4: valuations 0 and 2
    assert newton_polygon(IntPoly((4, 1, 1)), 2).slopes == ((Fraction(0), 1), (Fraction(2), 1))
    # x^3 + 2: one segment of slope 1/3
    assert newton_polygon(IntPoly((2, 0, 0, 1)), 2).slopes == ((Fraction(1, 3), 3),)
    with pytest.raises(DomainError):
        newton_polygon(IntPoly((0, 1)), 2)


def test_factor_products():
    rng = random.Random(9)
    for _ in range(50):
        parts = [random_poly(rng, rng.randint(1, 3), monic=True) for _ in range(3)]
        f = parts[0] * parts[1] * parts[2]
        prod = IntPoly((1,))
        for p, k in factor(f):
            assert p.is_monic()
            prod = prod * p ** k
        assert prod == f
