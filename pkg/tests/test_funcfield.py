import random

import pytest

from mwlattice.funcfield import (Poly, RatFn, _mul_fft, _mul_schoolbook,
                                 format_poly, parse_poly)
from mwlattice.gf import make_field

F9 = make_field(3, 2)
F729 = make_field(3, 6)


def rand_poly(ctx, deg, rng):
    return Poly(ctx, [rng.randrange(ctx.q) for _ in range(deg + 1)])


def test_zero_polynomial_sentinel():
    z = Poly.zero(F9)
    assert z.degree == -1
    assert z.is_zero()
    assert Poly(F9, [0, 0, 0]).degree == -1


def test_canonical_form_strips_trailing_zeros():
    p = Poly(F9, [1, 2, 0, 0])
    assert p.degree == 1
    assert p.c == [1, 2]


def test_ratfn_t_over_t_is_one():
    t = Poly.t(F9)
    assert RatFn(t, t) == RatFn.const(F9, 1)


def test_ratfn_gcd_cancellation():
    t = Poly.t(F9)
    one = Poly.const(F9, 1)
    r = RatFn(t * t - one, t - one)
    assert r == RatFn.from_poly(t + one)
    assert r.den.lc() == 1


def test_ratfn_denominator_monic_and_coprime():
    t = Poly.t(F9)
    r = RatFn(t + 1, (t * t).scale(2))
    assert r.den.lc() == 1
    assert r.num.gcd(r.den).degree == 0


def test_ratfn_zero_denominator_raises():
    with pytest.raises(ZeroDivisionError):
        RatFn(Poly.t(F9), Poly.zero(F9))
    with pytest.raises(ZeroDivisionError):
        RatFn.from_poly(Poly.t(F9)) / RatFn.from_poly(Poly.zero(F9))


def test_product_degree_additive():
    rng = random.Random(12)
    for _ in range(50):
        f = rand_poly(F9, rng.randrange(0, 12), rng)
        g = rand_poly(F9, rng.randrange(0, 12), rng)
        if f.is_zero() or g.is_zero():
            continue
        assert (f * g).degree == f.degree + g.degree
        rf = RatFn(f, g)
        rg = RatFn(g, f)
        prod = rf * rg
        assert prod == RatFn.const(F9, 1)


def test_map_degree():
    t = Poly.t(F9)
    assert RatFn.from_poly(t * t).map_degree() == 2
    assert RatFn(Poly.const(F9, 1), t * t * t).map_degree() == 3
    assert RatFn.const(F9, 2).map_degree() == 0
    assert RatFn.from_poly(Poly.zero(F9)).map_degree() == 0


def test_field_axioms_for_ratfn():
    rng = random.Random(3)
    vals = []
    for _ in range(6):
        num = rand_poly(F9, rng.randrange(0, 4), rng)
        den = rand_poly(F9, rng.randrange(0, 3), rng)
        if den.is_zero():
            den = Poly.const(F9, 1)
        vals.append(RatFn(num, den))
    for a in vals:
        for b in vals:
            assert a + b == b + a
            assert a * b == b * a
            assert a - b == -(b - a)
            if not b.is_zero():
                assert (a / b) * b == a


def test_divmod_roundtrip():
    rng = random.Random(7)
    for _ in range(40):
        a = rand_poly(F9, rng.randrange(0, 15), rng)
        b = rand_poly(F9, rng.randrange(0, 8), rng)
        if b.is_zero():
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_gcd_properties():
    rng = random.Random(8)
    for _ in range(25):
        a = rand_poly(F9, rng.randrange(1, 8), rng)
        b = rand_poly(F9, rng.randrange(1, 8), rng)
        c = rand_poly(F9, rng.randrange(1, 5), rng)
        if c.is_zero():
            continue
        g = (a * c).gcd(b * c)
        assert g % c.monic() == Poly.zero(F9)


def test_schoolbook_equals_fft():
    rng = random.Random(31)
    for ctx in (F9, F729):
        for _ in range(4):
            a = rand_poly(ctx, rng.randrange(40, 300), rng)
            b = rand_poly(ctx, rng.randrange(40, 300), rng)
            assert _mul_schoolbook(ctx, a.c, b.c) == _mul_fft(ctx, a.c, b.c)


def test_fft_large_degree_exact():
    rng = random.Random(77)
    a = rand_poly(F729, 4000, rng)
    b = rand_poly(F729, 4000, rng)
    prod = a * b  # dispatches to FFT
    # spot-check coefficients against the direct convolution definition
    for k in (0, 1, 4000, 7995, 8000):
        acc = 0
        for i in range(max(0, k - b.degree), min(k, a.degree) + 1):
            acc = F729.add_codes(acc, F729.mul_codes(a[i], b[k - i]))
        assert prod[k] == acc


def test_subs_scaled_t():
    ctx = F9
    t = Poly.t(ctx)
    f = t * t * t + t.scale(2) + Poly.const(ctx, 1)
    c = ctx.gen()
    g = f.subs_scaled_t(c)
    for x in ctx.elements():
        assert g.evaluate(x) == f.evaluate(c * x)


def test_parse_poly_expressions():
    t = Poly.t(F9)
    assert parse_poly(F9, "t^2") == t * t
    assert parse_poly(F9, "-t^3 + t") == -(t ** 3) + t
    assert parse_poly(F9, "[0,0,1]") == t * t
    assert parse_poly(F9, "2*t^4 + 1") == (t ** 4).scale(2) + Poly.const(F9, 1)
    gexp = parse_poly(F9, "g^2*t")
    assert gexp == t.scale(F9.gen() ** 2)


def test_parse_format_roundtrip():
    rng = random.Random(13)
    for _ in range(20):
        f = rand_poly(F9, rng.randrange(0, 6), rng)
        assert parse_poly(F9, format_poly(f)) == f


def test_poly_pow():
    t = Poly.t(F9)
    assert (t + 1) ** 3 == t ** 3 + Poly.const(F9, 1)  # Frobenius in char 3
