import math
from fractions import Fraction

import mpmath
import pytest

from mwlattice.density import (BEST_KNOWN_LOG2_DENSITY, REFERENCE_LOG2_DENSITY,
                               Log2Form, center_density_lower, density_table,
                               invariants, min_norm_lower, narrow_vs_full_ratio,
                               regulator_upper, sha_regulator_constraint)


def mp_value(form, dps=60):
    with mpmath.workdps(dps):
        acc = mpmath.mpf(form.const.numerator) / form.const.denominator
        for prime, e in form.terms.items():
            acc += mpmath.mpf(e.numerator) / e.denominator * mpmath.log(prime, 2)
        return acc


def test_invariants_small_n():
    i1 = invariants(1)
    assert (i1.delta_degree, i1.conductor_degree, i1.tamagawa_product) == (12, 10, 3)
    assert i1.rank == 6 and i1.torsion_order == 1
    assert i1.height_log3_exponent == 2  # H = |k|^(delta/12) = 9
    assert i1.rank_source == "verified-full"
    i2 = invariants(2)
    assert (i2.delta_degree, i2.conductor_degree, i2.rank) == (24, 22, 18)
    assert i2.height_log3_exponent == 8
    i3 = invariants(3)
    assert (i3.delta_degree, i3.rank) == (60, 54)
    assert invariants(5).rank_source == "formula"


def test_regulator_upper():
    assert regulator_upper(1).value == Fraction(1, 3)
    assert regulator_upper(2).value == 27
    # log2 of the bound is (n(3^n+3)/3 - 2n - 1) log2(3)
    for n in (1, 2, 3, 4):
        e = n * (3**n + 3) // 3 - 2 * n - 1
        assert regulator_upper(n).log3_exponent == e
        assert regulator_upper(n).log2 == Log2Form(terms={3: Fraction(e)})


def test_sha_regulator_constraint_matches_regulator_bound():
    for n in (1, 2, 3, 4):
        assert sha_regulator_constraint(n) == regulator_upper(n).value
    assert sha_regulator_constraint(1) == Fraction(1, 3)
    assert sha_regulator_constraint(2) == 27


def test_min_norm_lower():
    assert min_norm_lower(1) == 2
    assert min_norm_lower(2) == 4
    assert min_norm_lower(3) == 10
    for n in range(1, 7):
        assert min_norm_lower(n) == Fraction(invariants(n).delta_degree, 6)


def test_center_density_pipelines_agree_exactly():
    # center_density_lower raises internally if the closed form and the
    # step-by-step pipeline differ; run it for n = 1..6
    for n in range(1, 7):
        rep = center_density_lower(n)
        assert rep.rank == 2 * 3**n


def test_center_density_n1_exact_form():
    rep = center_density_lower(1)
    # log2(sqrt(3)/24) = -3 - (1/2) log2 3; also delta(E6) = 1/(8 sqrt 3)
    assert rep.log2_center_density == Log2Form(Fraction(-3), {3: Fraction(-1, 2)})
    assert rep.log2_center_density.as_radical_str() == "sqrt(3)/24"
    assert float(1 / (8 * mpmath.sqrt(3))) == pytest.approx(
        2.0 ** rep.log2_value, rel=1e-12)


def test_reference_table_values_to_4_significant_decimals():
    for n, ref in REFERENCE_LOG2_DENSITY.items():
        rep = center_density_lower(n)
        tol = 10.0 ** (math.floor(math.log10(abs(ref))) - 4)
        assert abs(rep.log2_value - ref) <= tol, (n, rep.log2_value, ref)


def test_log2form_float_matches_high_precision():
    for n in range(1, 7):
        form = center_density_lower(n).log2_center_density
        assert abs(form.to_float() - float(mp_value(form))) < 1e-9


def test_log2form_algebra():
    a = Log2Form.log2_of(Fraction(3, 4))
    b = Log2Form.log2_of(Fraction(4, 3))
    assert a + b == Log2Form()
    assert Log2Form.log2_of(12) == Log2Form(Fraction(2), {3: Fraction(1)})
    assert 2 * Log2Form.log2_of(3) == Log2Form.log2_of(9)


def test_density_table_shape():
    rows = density_table(6)
    assert [r["rank"] for r in rows] == [6, 18, 54, 162, 486, 1458]
    for row in rows:
        r = row["rank"]
        assert row["asymptotic_reference"] == pytest.approx(
            (0.5 - 1 / 12) * r * math.log2(r))
        assert row["best_known"] == BEST_KNOWN_LOG2_DENSITY[row["n"]][0]
    with pytest.raises(ValueError):
        density_table(9)


def test_improvement_pattern_matches_catalogue():
    # bound ties the known record in dims 6 and 54, beats it in 162 and 486,
    # trails other constructions in dims 18 and 1458
    rows = {r["n"]: r for r in density_table(6)}
    assert rows[1]["log2_density_bound"] == pytest.approx(rows[1]["best_known"], abs=1e-4)
    assert rows[3]["log2_density_bound"] == pytest.approx(rows[3]["best_known"], abs=1e-3)
    assert rows[4]["log2_density_bound"] > rows[4]["best_known"]
    assert rows[5]["log2_density_bound"] > rows[5]["best_known"]
    assert rows[2]["log2_density_bound"] < rows[2]["best_known"]
    assert rows[6]["log2_density_bound"] < rows[6]["best_known"]


def test_narrow_vs_full_ratio():
    r1 = narrow_vs_full_ratio(1)
    assert r1.bound_exact == Fraction(8, 9)
    r3 = narrow_vs_full_ratio(3)
    assert r3.bound_exact == 3 * (Fraction(28, 30)) ** 27
    assert r3.bound_float == pytest.approx(0.4657086, abs=1e-6)
    # monotone decrease toward 3 e^-2
    limit = 3 * math.exp(-2)
    values = [narrow_vs_full_ratio(n).bound_float for n in range(1, 9)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(v > limit for v in values)
    assert abs(values[-1] - limit) < 0.01


def test_invariants_rejects_bad_n():
    with pytest.raises(ValueError):
        invariants(0)
