import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from weilbounds.exact import DomainError, IntPoly, divisors
from weilbounds.isogeny import (
    Unknown,
    defect0,
    elliptic_trace_admissible,
    exceptional_defect_bound,
    exceptional_scan,
    honda_tate_exponent,
    is_ordinary,
)
from weilbounds.weil import (
    FieldContext,
    RealWeilPoly,
    context,
    p_rank,
    place_counts,
    roots_admissible,
    to_weil,
    trace_and_defect,
    validate,
    weil_from_real,
)

Q_VALUES = (2, 3, 4, 5, 7, 8, 9, 16, 27, 32, 64, 128)


def real_weil(q, *factors):
    return RealWeilPoly(context(q), tuple((IntPoly(c), k) for c, k in factors))


def random_real_weil(rng, q):
    """Product of linear factors x + t with |t| <= 2 sqrt q and a few quadratics."""
    ctx = context(q)
    facs = []
    for _ in range(rng.randint(1, 4)):
        t = rng.randint(-ctx.m, ctx.m)
        facs.append((IntPoly((t, 1)), rng.randint(1, 2)))
    return RealWeilPoly(ctx, tuple(facs))


def test_field_context():
    ctx = context(128)
    assert (ctx.p, ctx.a, ctx.m) == (2, 7, 22)
    assert ctx.ws_bound(4) == 128 + 1 + 4 * 22
    assert context(9).is_square and not context(8).is_square
    with pytest.raises(DomainError):
        FieldContext(10)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(Q_VALUES), st.integers(0, 10**6))
def test_functional_equation(q, seed):
    h = random_real_weil(random.Random(seed), q)
    f = to_weil(h)
    g = h.degree
    assert f.degree == 2 * g and f.is_monic()
    for i in range(g + 1):
        assert f.coeff(i) == q ** (g - i) * f.coeff(2 * g - i)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(Q_VALUES), st.integers(0, 10**6))
def test_extension_counts_are_sums_over_places(q, seed):
    h = random_real_weil(random.Random(seed), q)
    pc = place_counts(h, 6)
    for n in range(1, 7):
        assert pc.extension_counts[n - 1] == sum(d * pc.place_counts[d - 1] for d in divisors(n))


def test_place_counts_sample_vectors():
    # vectors for the q = 4, g = 5, N = 18 candidates
    cases = [
        (((3, 1), 3), ((2, 4, 1), 1), (18, 0, 4, 81, 164)),
        (((3, 1), 2), ((7, 14, 7, 1), 1), (18, 0, 5, 74, 187)),
        (((1, 1), 1), ((3, 1), 4), (18, 1, 0, 86, 168)),
    ]
    for *facs, want in cases:
        assert place_counts(real_weil(4, *facs)).place_counts == want


def test_trace_and_defect():
    h = real_weil(4, ((3, 1), 3), ((2, 4, 1), 1))
    t, d, n1 = trace_and_defect(h)
    assert (t, d, n1) == (-13, 4 * 5 - 13, 18)


def test_roots_admissible_and_validate():
    assert roots_admissible(IntPoly((4, 1)), 4)  # root -4 = -2 sqrt 4
    assert not roots_admissible(IntPoly((5, 1)), 4)
    assert not roots_admissible(IntPoly((1, 0, 1)), 4)  # complex roots
    bad = real_weil(2, ((2, 1), 3))  # N_1 = 9 but N_2 = 5, so a_2 = -2
    v = validate(bad)
    assert not v and (v.check, v.degree) == ("places", 2)
    good = real_weil(4, ((3, 1), 3), ((2, 4, 1), 1))
    assert validate(good)


def test_weil_from_real_roundtrip_on_elliptic():
    # y = -t gives x^2 - t x + q
    f = weil_from_real(IntPoly((3, 1)), 4)
    assert f == IntPoly((4, 3, 1))


def test_p_rank():
    assert p_rank(real_weil(4, ((3, 1), 1))) == 1  # ordinary elliptic curve
    assert p_rank(real_weil(4, ((3, 1), 2), ((1, 1), 1))) == 3
    assert p_rank(real_weil(4, ((4, 1), 1))) == 0  # supersingular
    assert is_ordinary(IntPoly((3, 1)), context(4))


# -- Honda-Tate -------------------------------------------------------------

@pytest.mark.parametrize("coeffs,q,expected", [
    ((22, 1), 128, 7),
    ((2, 4, 1), 4, 2),
    ((6, 1), 16, 4),
    ((3, 1), 4, 1),
])
def test_honda_tate_exponents(coeffs, q, expected):
    assert honda_tate_exponent(IntPoly(coeffs), context(q)) == expected


def test_elliptic_traces():
    assert elliptic_trace_admissible(context(16), 6) is False
    assert elliptic_trace_admissible(context(16), 8)
    assert elliptic_trace_admissible(context(16), 4)  # sqrt q, p = 2 is not 1 mod 3
    assert elliptic_trace_admissible(context(8), 0)
    assert elliptic_trace_admissible(context(8), 4)  # 2^((3+1)/2)
    assert not elliptic_trace_admissible(context(8), 2)
    with pytest.raises(DomainError):
        elliptic_trace_admissible(context(4), 5)


def test_elliptic_traces_match_brute_force_over_small_fields():
    from weilbounds.ffsearch import EllipticModel, field

    for q in (2, 3, 4, 5, 7, 8, 9):
        F = field(q)
        seen = set()
        for coeffs in itertools.product(range(q), repeat=5):
            try:
                E = EllipticModel(F, *coeffs)
            except DomainError:
                continue
            seen.add(E.trace())
        ctx = context(q)
        allowed = {t for t in range(-ctx.m, ctx.m + 1) if elliptic_trace_admissible(ctx, t)}
        assert seen == allowed, q


def test_honda_tate_rejects_bad_input():
    with pytest.raises(DomainError):
        honda_tate_exponent(IntPoly((9, 1)), context(4))
    with pytest.raises(DomainError):
        honda_tate_exponent(IntPoly((2, 3, 1)), context(4))  # (x+1)(x+2)


def test_no_unknown_on_small_factors():
    for q in (4, 8, 16, 9, 3):
        ctx = context(q)
        for t in range(-ctx.m, ctx.m + 1):
            assert honda_tate_exponent(IntPoly((t, 1)), ctx) is not Unknown


# -- exceptional fields ----------------------------------------------------------

def test_defect0():
    assert defect0(context(128)) == 7
    for q in (4, 9, 16, 25, 49, 64, 81, 256):
        assert defect0(context(q)) == 1
    assert [q for q, _ in exceptional_scan(13)] == [128, 2048]
    assert exceptional_defect_bound(context(128), 4) == 2
    assert exceptional_defect_bound(context(128), 7) == 0
    with pytest.raises(DomainError):
        exceptional_defect_bound(context(128), 0)
