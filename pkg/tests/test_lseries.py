import math
import random
from fractions import Fraction

import pytest

from mwlattice.lseries import (LPoly, analytic_rank, expected_l, inverse_root_magnitudes,
                               l_from_sums, local_factor, squarefree_decomposition,
                               sums_from_l, verify_rank_formula)


def binomial_oracle(a, d):
    """Coefficients of (1 + a T)^d, straight from the binomial theorem."""
    return tuple(math.comb(d, k) * a**k for k in range(d + 1))


def test_l_from_sums_binomial_case():
    # S_j = -6 * 9^j exponentiates to (1 - 9T)^6
    sums = [-6 * 9**j for j in range(1, 7)]
    lp = l_from_sums(sums, 9)
    assert lp.coeffs == binomial_oracle(-9, 6)
    assert lp.coeffs == (1, -54, 1215, -14580, 98415, -354294, 531441)


def test_l_from_sums_trivial_cases():
    assert l_from_sums([0, 0, 0], 9).coeffs == (1, 0, 0, 0)
    # S_j = -1 for all j: log(1 - T), so L = 1 - T
    assert l_from_sums([-1, -1, -1, -1], 5).coeffs == (1, -1, 0, 0, 0)


def test_l_from_sums_integrality_enforced():
    with pytest.raises(ArithmeticError):
        l_from_sums([1, 0], 9)  # exp(T) has coefficient 1/2 at order 2


def test_exp_log_roundtrip_random():
    rng = random.Random(42)
    for _ in range(25):
        d = rng.randrange(1, 7)
        coeffs = [1] + [rng.randrange(-30, 30) for _ in range(d)]
        lp = LPoly(7, tuple(coeffs))
        sums = sums_from_l(lp, d + 3)
        back = l_from_sums(sums, 7)
        assert back.coeffs[: d + 1] == tuple(coeffs)
        assert all(c == 0 for c in back.coeffs[d + 1:])


def test_expected_l_values_and_degree():
    e1 = expected_l(1)
    assert e1.coeffs == binomial_oracle(-9, 6)
    e2 = expected_l(2)
    assert e2.degree == 18
    assert e2.coeffs == binomial_oracle(-81, 18)
    # degree = conductor degree - 4 = (2 (3^n + 3) - 2) - 4
    for n in (1, 2, 3):
        assert expected_l(n).degree == 2 * 3**n == (2 * (3**n + 3) - 2) - 4


def test_local_factor_shapes():
    assert local_factor(0, 1, True, 9) == [1, 0, 9]
    assert local_factor(0, 1, False, 9) == [1]
    assert local_factor(1, 1, False, 9) == [1, -1]
    assert local_factor(-1, 2, False, 9) == [1, 0, 1]
    assert local_factor(3, 1, True, 9) == [1, -3, 9]


def test_local_factor_hasse_violation():
    with pytest.raises(ValueError):
        local_factor(7, 1, True, 9)  # |a| = 7 > 2*sqrt(9)
    with pytest.raises(ValueError):
        local_factor(2, 1, False, 9)


def test_analytic_rank_examples():
    rank, special = analytic_rank(expected_l(1))
    assert (rank, special) == (6, 1)
    assert analytic_rank(LPoly(9, (1,))) == (0, 1)
    assert analytic_rank(LPoly(9, (1, -9))) == (1, 1)
    for n in (1, 2, 3, 4):
        assert analytic_rank(expected_l(n))[0] == 2 * 3**n


def test_analytic_rank_nontrivial_special_value():
    # L = (1 - 9T)(1 - T): rank 1, special value 1 - 1/9 = 8/9
    rank, special = analytic_rank(LPoly(9, (1, -10, 9)))
    assert rank == 1
    assert special == Fraction(8, 9)


def test_squarefree_decomposition():
    # (1 - 9T)^6: one factor of multiplicity 6
    parts = squarefree_decomposition(list(expected_l(1).coeffs))
    assert len(parts) == 1
    mult, factor = parts[0]
    assert mult == 6 and len(factor) == 2
    root = -factor[0] / factor[1]
    assert root == Fraction(1, 9)


def test_inverse_root_magnitudes_weil():
    mags = inverse_root_magnitudes(expected_l(1))
    assert sum(mult for _, mult in mags) == 6
    for mag, _ in mags:
        assert abs(mag - 9) < 1e-9
    mags2 = inverse_root_magnitudes(expected_l(2))
    for mag, _ in mags2:
        assert abs(mag - 81) < 1e-9


def test_verify_rank_formula_n1_full():
    rep = verify_rank_formula(1, 6)
    assert rep.ok
    assert rep.polynomial_ok
    assert rep.l_coeffs == expected_l(1).coeffs
    assert all(c.ok for c in rep.checks)
    assert {c.j for c in rep.checks} == set(range(1, 7))


def test_verify_rank_formula_partials():
    assert verify_rank_formula(2, 2).ok
    assert verify_rank_formula(3, 1).ok


def test_verify_rank_formula_rejects_bad_input():
    with pytest.raises(ValueError):
        verify_rank_formula(1, 0)
    from mwlattice.gf import make_field
    with pytest.raises(ValueError):
        verify_rank_formula(1, 1, b=make_field(3, 1).element(2))


def test_lpoly_requires_unit_constant():
    with pytest.raises(ValueError):
        LPoly(9, (0, 1))
