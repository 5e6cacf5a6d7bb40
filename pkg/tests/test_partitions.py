from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partlab import arith
from partlab.partitions import (
    DiffTable, PartSet, UndefinedRatio, brute_force_count, diff_table, forward_difference,
    generate_table, has_property_pk, monotonicity_scan, partial_sum_ratio, prefix_sums, rho,
    scan_values, series_inverse_holds,
)

# hand-enumerated for p = 5: residues {1, 4}, non-residues {2, 3}
PLUS_5 = [1, 1, 1, 1, 2, 2, 3, 3, 4, 5, 6, 7]
MINUS_5 = [1, 0, 1, 1, 1, 1, 2, 2, 3, 3, 4, 4]
PLUS_EXCL1_5 = [1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1]
CLASSICAL = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


@pytest.mark.parametrize("pset, expected", [
    (PartSet.plus(5), PLUS_5), (PartSet.minus(5), MINUS_5),
    (PartSet.plus_excl1(5), PLUS_EXCL1_5), (PartSet.classical(), CLASSICAL),
])
def test_frozen_small_tables(pset, expected):
    assert list(generate_table(pset, len(expected) - 1).coeffs) == expected


def test_known_classical_value():
    assert generate_table(PartSet.classical(), 200)[200] == 3972999029388


@pytest.mark.parametrize("p", [5, 13, 17])
@pytest.mark.parametrize("name", ["plus", "minus", "plus-excl1"])
def test_generator_matches_brute_force(p, name):
    ps = PartSet.from_name(name, p)
    table = generate_table(ps, 40)
    assert all(table[n] == brute_force_count(ps, n) for n in range(41))


def test_brute_force_refuses_large_n():
    with pytest.raises(ValueError):
        brute_force_count(PartSet.plus(5), 61)


def test_partset_rejects_bad_modulus():
    with pytest.raises(ValueError):
        PartSet.plus(7)
    with pytest.raises(ValueError):
        PartSet.from_name("plus")
    with pytest.raises(ValueError):
        PartSet.from_name("odd", 5)


def test_partset_membership():
    ps = PartSet.plus(13)
    assert ps.parts(13) == [1, 3, 4, 9, 10, 12]
    assert 14 in ps and 13 not in ps and 0 not in ps
    assert 1 not in PartSet.plus_excl1(13) and 14 in PartSet.plus_excl1(13)


@pytest.mark.parametrize("pset", [PartSet.plus(5), PartSet.minus(13), PartSet.plus_excl1(5),
                                  PartSet.classical()])
def test_series_inverse_identity(pset):
    assert series_inverse_holds(generate_table(pset, 500))


def test_series_inverse_detects_corruption():
    t = generate_table(PartSet.plus(5), 50)
    bad = type(t)(t.pset, t.N, t.coeffs[:30] + (t.coeffs[30] + 1,) + t.coeffs[31:])
    assert not series_inverse_holds(bad)


@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=40))
def test_difference_and_prefix_are_inverse(xs):
    assert prefix_sums(forward_difference(xs)) == xs
    assert forward_difference(prefix_sums(xs)) == xs


@settings(max_examples=30, deadline=None)
@given(st.integers(-4, 4), st.integers(0, 300))
def test_diff_table_telescopes(k, n):
    t = generate_table(PartSet.plus(13), 300)
    lo, hi = diff_table(t, k), diff_table(t, k + 1)
    assert hi[n] == lo[n] - lo[n - 1]


def test_diff_table_bound():
    t = generate_table(PartSet.plus(5), 20)
    with pytest.raises(ValueError):
        diff_table(t, 17)
    assert diff_table(t, 3, max_abs_k=3).k == 3


def test_negative_index_is_zero():
    dt = diff_table(generate_table(PartSet.plus(5), 10), 0)
    assert dt[-1] == 0 and dt[-5] == 0


def test_first_difference_of_plus_counts_plus_excl1(tables_5):
    # removing part 1 multiplies the generating function by (1 - X)
    d1 = diff_table(tables_5["plus"], 1)
    assert d1.values == tables_5["plus-excl1"].coeffs


def test_rho_examples():
    t = generate_table(PartSet.plus(5), 20)
    d0, d1 = diff_table(t, 0), diff_table(t, 1)
    assert rho(d0, d1, 4) == Fraction(1, 2)
    assert rho(d0, d1, 9) == Fraction(1, 5)
    m = generate_table(PartSet.minus(5), 20)
    with pytest.raises(UndefinedRatio):
        rho(diff_table(m, 1), diff_table(m, 2), 3)  # p^(1)(3) = 1 - 1 = 0
    with pytest.raises(ValueError):
        rho(d0, d0, 3)


def _scan_oracle(values: DiffTable):
    last, undefined = None, []
    for n in range(values.N):
        if values[n] == 0 or values[n + 1] == 0:
            undefined.append(n)
            continue
        r0 = Fraction(values[n] - values[n - 1], values[n])
        r1 = Fraction(values[n + 1] - values[n], values[n + 1])
        if not r0 > r1:
            last = n
    return last, tuple(undefined)


@pytest.mark.parametrize("name, p, k", [("plus", 5, 0), ("minus", 5, -1), ("plus", 13, 2),
                                        ("minus", 13, 1), ("classical", None, 0)])
def test_scan_sign_rule_matches_fractions(name, p, k):
    dt = diff_table(generate_table(PartSet.from_name(name, p), 400), k)
    rep = scan_values(dt)
    assert (rep.last_violation, rep.undefined) == _scan_oracle(dt)


def test_classical_scan_threshold():
    rep = monotonicity_scan(PartSet.classical(), 0, 2000)
    assert rep.last_violation == 25
    assert rep.threshold == 26


def test_scan_threshold_supports_rho_decreasing(tables_5):
    for k in (-2, -1, 0, 1, 2):
        rep = scan_values(diff_table(tables_5["plus"], k))
        assert rep.threshold <= 5000


def test_scan_reports_undefined_indices():
    rep = monotonicity_scan(PartSet.minus(5), 1, 50)
    assert 3 in rep.undefined
    assert rep.threshold > max(rep.undefined)


@pytest.mark.parametrize("k", [-3, -1])
def test_pk_trivial_for_negative_k(k):
    assert has_property_pk(PartSet.plus(5), k, 1)


def test_pk_examples():
    assert has_property_pk(PartSet.plus(5), 1, 6)  # {1,4,6,9,11,14}
    assert has_property_pk(PartSet.classical(), 2, 6)
    # minus/5 starts 2, 3, 7, 8: dropping 3 and 7 leaves 2, 8, 12, 13, ... gcd still 1
    assert has_property_pk(PartSet.minus(5), 2, 8)
    # parts {2, 4, 6} only share the factor 2
    evens = PartSet(modulus=2, allowed_residues=frozenset({0}), name="even")
    assert not has_property_pk(evens, 0, 3)
    with pytest.raises(ValueError):
        has_property_pk(PartSet.plus(5), 3, 4)


@pytest.mark.parametrize("p", [5, 13])
def test_partial_sum_ratio_tends_to_one(p):
    t = generate_table(PartSet.plus(p), 10_010)
    pre = diff_table(t, -1)
    for h in (1, 2, 3):
        devs = [partial_sum_ratio(pre, n, h) - 1 for n in (100, 1000, 10_000)]
        assert all(d > 0 for d in devs)
        assert devs[0] > devs[1] > devs[2]


def test_rho_tends_to_zero(tables_5):
    d0, d1 = diff_table(tables_5["plus"], 0), diff_table(tables_5["plus"], 1)
    vals = [rho(d0, d1, n) for n in (100, 1000, 9999)]
    assert vals[0] > vals[1] > vals[2] > 0
    assert vals[2] < Fraction(1, 50)


def test_table_csv_export():
    text = generate_table(PartSet.plus(5), 5).to_csv()
    assert text.splitlines() == ["n,p(n)", "0,1", "1,1", "2,1", "3,1", "4,2", "5,2"]


@pytest.mark.parametrize("p", arith.admissible_primes(60))
def test_plus_eventually_dominates_minus(p):
    plus, minus = generate_table(PartSet.plus(p), 3000), generate_table(PartSet.minus(p), 3000)
    assert all(minus[n] < plus[n] for n in range(1500, 3001))
