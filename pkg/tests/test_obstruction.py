"""Eligibility profiles, scans, and brute-force verification of forced
exponents."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factcert import arith, obstruction
from factcert.forms import BUNDLED_FORMS, BinaryForm, UnivariatePoly
from factcert.obstruction import (
    obstruction_profile,
    scan_obstruction_primes,
    verify_forced_exponent,
)

MULTIPLICITY_FORM = BinaryForm(
    (1, -2, 2, -2, 1),
    factors=((BinaryForm((1, -1)), 2), (BinaryForm((1, 0, 1)), 1)),
    factor_constant=1,
)


def _legendre_symbol(a: int, q: int) -> int:
    a %= q
    if a == 0:
        return 0
    r = pow(a, (q - 1) // 2, q)
    return 1 if r == 1 else -1


def test_sum_of_squares_profile_small_primes():
    f = BUNDLED_FORMS["x2+y2"]
    p3 = obstruction_profile(f, 3)
    assert p3.eligible and p3.forced_exponent == 2
    assert p3.reason == "NO_ROOT_MOD_Q"
    p5 = obstruction_profile(f, 5)
    assert not p5.eligible
    p2 = obstruction_profile(f, 2)
    assert not p2.eligible
    assert p2.excluded_reason is not None


def test_eligibility_matches_kronecker_for_pell_forms():
    # x^2 - D y^2 is rootless mod q exactly when D is a non-residue
    for d in (2, 3, 5, 7, 11):
        f = BinaryForm((1, 0, -d))
        for q in arith.cached_sieve(200).primes:
            profile = obstruction_profile(f, q)
            if q == 2 or d % q == 0:
                assert not profile.eligible, (d, q)
                continue
            expected = _legendre_symbol(d, q) == -1
            assert profile.eligible is expected, (d, q)


def test_eligibility_matches_brute_roots():
    # native root detection vs literal residue enumeration
    rng_forms = [
        BinaryForm((1, 1, 3)),
        BinaryForm((2, 0, 3)),
        BinaryForm((1, 0, 0, 2)),
        BinaryForm((1, 0, 0, 0, 3)),
    ]
    for f in rng_forms:
        d = f.degree
        for q in (3, 5, 7, 11, 13):
            has_root = any(
                f.evaluate(x, y) % q == 0
                for x in range(q)
                for y in range(q)
                if (x, y) != (0, 0)
            )
            profile = obstruction_profile(f, q)
            if profile.excluded_reason is not None:
                continue
            assert profile.eligible is (not has_root), (f.coeffs, q)


def test_univariate_profiles():
    p = UnivariatePoly((1, 0, -2))  # x^2 - 2
    prof7 = obstruction_profile(p, 7)
    assert prof7.univariate
    # 2 is a QR mod 7 (3^2=2), so 7 divides some value: ineligible
    assert not prof7.eligible
    prof5 = obstruction_profile(p, 5)
    # 2 is not a QR mod 5: no value of x^2-2 is divisible by 5 at all
    assert prof5.eligible
    assert prof5.unbounded
    assert prof5.forced_exponent is None


def test_scan_x2_y2_3_to_100():
    scan = scan_obstruction_primes(BUNDLED_FORMS["x2+y2"], 3, 100)
    assert scan.eligible_primes == (3, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83)
    assert scan.total_primes == 24


def test_scan_density_sum_of_squares_to_1e4():
    scan = scan_obstruction_primes(BUNDLED_FORMS["x2+y2"], 2, 10**4)
    assert 0.48 <= scan.density <= 0.52


def test_every_bundled_form_scan_nonempty():
    for name, f in BUNDLED_FORMS.items():
        scan = scan_obstruction_primes(f, 3, 100)
        assert scan.eligible_primes, name


def test_verify_forced_exponent_no_root_forms():
    for q in (3, 7, 11, 19):
        assert verify_forced_exponent(BUNDLED_FORMS["x2+y2"], q)
    for q in (7, 13):
        assert verify_forced_exponent(BUNDLED_FORMS["x3+2y3"], q)


def test_verify_forced_exponent_multiplicity_rule():
    # linear-factor multiplicity profiles have q root classes, so keep q small
    for q in (3, 7, 11, 19, 23):
        profile = obstruction_profile(MULTIPLICITY_FORM, q)
        assert profile.eligible
        assert profile.reason == "LINEAR_FACTOR_MULTIPLICITY"
        assert verify_forced_exponent(MULTIPLICITY_FORM, q)


def test_verify_forced_exponent_declared_square():
    for q in (3, 7, 11):
        assert verify_forced_exponent(BUNDLED_FORMS["x4+2x2y2+y4"], q)


def test_verify_vacuous_for_ineligible():
    assert verify_forced_exponent(BUNDLED_FORMS["x2+y2"], 5)


def test_verify_rejects_large_prime():
    with pytest.raises(ValueError):
        verify_forced_exponent(BUNDLED_FORMS["x2+y2"], 211)


def test_degree_one_targets_rejected():
    with pytest.raises(ValueError):
        obstruction_profile(BinaryForm((1, 1)), 7)


@given(q=st.sampled_from((3, 7, 11, 19, 23, 31)))
@settings(max_examples=20, deadline=None)
def test_forced_exponent_divides_valuations_in_samples(q):
    # every represented value of x2+y2 has even valuation at eligible primes;
    # sample rather than sweep, the full sweep lives in verify_forced_exponent
    f = BUNDLED_FORMS["x2+y2"]
    profile = obstruction_profile(f, q)
    assert profile.eligible
    for x in range(0, 3 * q, 5):
        for y in range(1, 3 * q, 7):
            val = f.evaluate(x, y)
            v = 0
            while val % q == 0:
                val //= q
                v += 1
            assert v % 2 == 0, (x, y, q)


def test_excluded_reasons_present():
    f = BinaryForm((3, 0, 3))  # content 3
    profile = obstruction_profile(f, 3)
    assert not profile.eligible
    assert profile.excluded_reason is not None
