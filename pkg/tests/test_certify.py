"""Certificate construction, serialization stability, and adversarial
rechecks."""

import json
import math

import pytest

from factcert import certify
from factcert.certify import (
    Certificate,
    Equation,
    ZeroLeftSideError,
    certify_cell,
    in_hypothesis_region,
    left_valuation,
    left_value,
    recheck,
    window_prime_report,
    window_primes,
)

SUM_SQUARES = Equation.sum_binary(1, 1, (1, 0, 1))
SUM_X2 = Equation.sum_univariate(1, 1, (1, 0, 0))
PROD_X2 = Equation.product_univariate(1, (1, 0, 0))


def test_left_value_shapes():
    assert left_value(SUM_SQUARES, (5, 4)) == 144
    assert left_value(SUM_X2, (4, 1)) == 25
    assert left_value(PROD_X2, (9,)) == 945
    assert left_value(PROD_X2, (9, 4)) == 945 * 8


def test_left_valuation_matches_integer():
    for cell in ((5, 4), (10, 7), (12, 0)):
        value = left_value(SUM_SQUARES, cell)
        for q in (2, 3, 5, 7, 11):
            res = left_valuation(SUM_SQUARES, cell, q)
            v = 0
            t = abs(value)
            while t % q == 0:
                t //= q
                v += 1
            assert res.exact and res.value == v


def test_window_primes_contents():
    # primes in (m/2, m], descending
    assert window_primes(20) == [19, 17, 13, 11]
    assert window_primes(7) == [7, 5]
    assert window_primes(3) == [3, 2]
    assert window_primes(1) == []


def test_certify_cell_window_first():
    cert = certify_cell(SUM_X2, (10, 7))
    assert cert is not None
    assert cert.prime in (5, 7)
    assert "window_prime" in cert.notes
    assert recheck(cert)


def test_certify_prod_dfact_nine():
    # 9!! = 945 = 3^3 * 5 * 7; the window over (4.5, 9] tries 7 first and
    # v_7 = 1 is odd, so the window prime wins
    cert = certify_cell(PROD_X2, (9,))
    assert cert is not None
    assert cert.prime == 7
    assert cert.valuation == 1
    assert cert.rule == "V_NOT_MULTIPLE"
    assert recheck(cert)
    assert recheck(cert, deep=True)


def test_certificate_json_field_order_frozen():
    cert = certify_cell(SUM_X2, (10, 7))
    data = cert.to_dict()
    expected_prefix = [
        "family", "A", "B", "cell", "form_coeffs", "scaling", "prime",
        "valuation", "forced_exponent", "rule", "checker_version",
    ]
    assert list(data)[: len(expected_prefix)] == expected_prefix


def test_certificate_round_trip():
    cert = certify_cell(SUM_X2, (12, 5))
    assert cert is not None
    blob = json.dumps(cert.to_dict())
    back = Certificate.from_dict(json.loads(blob))
    assert back == cert
    assert recheck(back)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(valuation=d["valuation"] + 1),
        lambda d: d.update(prime=4),
        lambda d: d.update(prime=13),
        lambda d: d.update(rule="V_LESS_THAN_E"
                           if d["rule"] == "V_NOT_MULTIPLE" else "V_NOT_MULTIPLE"),
        # (12, 10) has v_5 = 2, clashing with the odd valuation claimed at (10, 7)
        lambda d: d.update(cell=[12, 10]),
        lambda d: d.update(forced_exponent=5),
        lambda d: d.update(form_coeffs=[1, 0, 1]),
    ],
)
def test_recheck_rejects_tampering(mutate):
    cert = certify_cell(SUM_X2, (10, 7))
    data = cert.to_dict()
    mutate(data)
    try:
        tampered = Certificate.from_dict(data)
    except (ValueError, KeyError):
        return  # malformed enough to fail at parse time: acceptable rejection
    assert not recheck(tampered)


def test_zero_left_side_raises():
    eq = Equation.sum_binary(1, -1, (1, 0, 1))
    with pytest.raises(ZeroLeftSideError):
        certify_cell(eq, (4, 4))


def test_no_certificate_for_representable_value():
    # 5! + 4! = 144 = x^2 has a solution; no sound certificate can exist
    assert certify_cell(SUM_X2, (5, 4)) is None


def test_in_hypothesis_region():
    assert in_hypothesis_region(SUM_SQUARES, (10, 5))
    assert not in_hypothesis_region(SUM_SQUARES, (10, 2))
    eq = Equation.sum_binary(1, 3, (1, 0, 1))
    assert not in_hypothesis_region(eq, (10, 6))
    assert in_hypothesis_region(eq, (10, 7))
    assert in_hypothesis_region(PROD_X2, (3,))


def test_window_prime_report_fields():
    rep = window_prime_report(SUM_SQUARES.form, 100)
    assert rep.m == 100
    assert all(50 < q <= 100 for q in rep.relaxed_primes)
    assert set(rep.relaxed_eligible) <= set(rep.relaxed_primes)
    assert all(q % 4 == 3 for q in rep.relaxed_eligible)


def test_certificates_only_at_eligible_primes():
    for n in range(3, 16):
        for m in range(1, n):
            try:
                cert = certify_cell(SUM_SQUARES, (n, m))
            except ZeroLeftSideError:
                continue
            if cert is None:
                continue
            from factcert.obstruction import obstruction_profile

            profile = obstruction_profile(SUM_SQUARES.form, cert.prime)
            assert profile.eligible
            assert cert.forced_exponent == profile.forced_exponent
            assert recheck(cert)
