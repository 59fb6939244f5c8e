"""Exact solving, grid classification, checkpointing, and parallel
determinism."""

import dataclasses
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factcert import solver
from factcert.certify import Equation
from factcert.forms import BUNDLED_POLYS, BinaryForm, UnivariatePoly
from factcert.solver import (
    CellStatus,
    SearchAborted,
    SearchTask,
    classify_cell,
    integer_root,
    possible_square_mod,
    represent_definite_quadratic,
    run_search,
    solution_sup_bound,
    square_filter,
)

SUM_X2 = Equation.sum_univariate(1, 1, (1, 0, 0))
SUM_SQUARES = Equation.sum_binary(1, 1, (1, 0, 1))


# ---------------------------------------------------------------------------
# Exact pieces
# ---------------------------------------------------------------------------


def test_integer_root_against_scan_on_bundled_polys():
    for name, poly in BUNDLED_POLYS.items():
        for v in range(-60, 700):
            fast = sorted(integer_root(poly, v))
            slow = sorted(x for x in range(-800, 801) if poly.evaluate(x) == v)
            assert fast == slow, (name, v)


@given(
    coeffs=st.lists(st.integers(-8, 8), min_size=3, max_size=5).filter(
        lambda c: c[0] != 0
    ),
    x=st.integers(-200, 200),
)
@settings(max_examples=300, deadline=None)
def test_integer_root_finds_planted_roots(coeffs, x):
    poly = UnivariatePoly(tuple(coeffs))
    v = poly.evaluate(x)
    assert x in integer_root(poly, v)


def test_integer_root_factorial_scale_targets():
    # the root hunt must stay exact and fast when targets have thousands of
    # bits; off-by-one around huge perfect powers is the classic failure
    square = UnivariatePoly((1, 0, 0))
    r = math.isqrt(math.factorial(400))
    assert integer_root(square, r * r) == [-r, r]
    assert integer_root(square, r * r - 1) == []
    assert integer_root(square, r * r + 2 * r) == []
    assert integer_root(square, (r + 1) ** 2) == [-(r + 1), r + 1]
    cubic = UnivariatePoly((1, 0, 0, -2))
    big = 10**40 + 7
    assert integer_root(cubic, big**3 - 2) == [big]
    assert integer_root(cubic, big**3 - 1) == []


def test_represent_definite_quadratic_vs_naive():
    targets = (BinaryForm((1, 0, 1)), BinaryForm((1, 1, 1)), BinaryForm((2, 0, 3)))
    for form in targets:
        a, b, c = form.coeffs
        representable = set()
        for x in range(-110, 111):
            for y in range(-110, 111):
                val = form.evaluate(x, y)
                if 0 < val <= 10**4:
                    representable.add(val)
        for n in range(1, 10**4 + 1):
            pair = represent_definite_quadratic(form, n)
            if n in representable:
                assert pair is not None, (form.coeffs, n)
                assert form.evaluate(*pair) == n
            else:
                assert pair is None, (form.coeffs, n)


def test_solution_sup_bound_contains_solutions():
    form = BinaryForm((1, 0, -2))  # indefinite, factorizes over Z[sqrt 2]? no: bound path
    target = 7 * 4
    sup = solution_sup_bound(form, target)
    if sup is not None:
        for x in range(-sup, sup + 1):
            for y in range(-sup, sup + 1):
                if form.evaluate(x, y) == target:
                    assert max(abs(x), abs(y)) <= sup


def test_square_filter_never_rejects_squares():
    primes = (3, 5, 7, 11, 13)
    for n in range(2, 20):
        for m in range(1, n):
            value = math.factorial(n) + math.factorial(m)
            s = math.isqrt(value)
            if s * s == value:
                assert not square_filter(SUM_X2, (n, m), primes), (n, m)


def test_possible_square_mod():
    for p in (3, 5, 7, 11):
        squares = {(x * x) % p for x in range(p)}
        for r in range(p):
            assert possible_square_mod(r, p) is (r in squares)


# ---------------------------------------------------------------------------
# Grid classification
# ---------------------------------------------------------------------------


def test_x2_grid_to_30_fully_classified():
    task = SearchTask(equation=SUM_X2, n_max=30)
    report = run_search(task)
    assert report.totals.get("UNKNOWN", 0) == 0
    sols = {r.cell: r.witness for r in report.solutions}
    assert sols == {(4, 1): (5,), (5, 1): (11,), (5, 4): (12,), (7, 1): (71,)}


def test_single_factorial_brocard_prefix():
    eq = Equation.sum_univariate(1, 1, (1, 0, -1))
    task = SearchTask(equation=eq, n_max=100, single_factorial=True)
    report = run_search(task)
    sols = {r.cell[0] for r in report.solutions}
    assert sols == {4, 5, 7}
    assert report.totals.get("UNKNOWN", 0) == 0


def test_single_factorial_matches_brute_small():
    eq = Equation.sum_univariate(1, 1, (1, 0, -1))
    for n in range(1, 13):
        res = classify_cell(
            SearchTask(equation=eq, n_max=13, single_factorial=True), (n,)
        )
        value = math.factorial(n)
        brute = [x for x in range(-4000, 4001) if x * x - 1 == value]
        if brute:
            assert res.status is CellStatus.SOLUTION
            assert res.witness[0] in brute
        else:
            assert res.status is CellStatus.NONE_EXHAUSTIVE


def test_diagonal_cells():
    eq = Equation.sum_binary(1, -1, (1, 0, 1))
    task = SearchTask(equation=eq, n_max=6, m_min=0, include_diagonal=True)
    report = run_search(task)
    by_cell = {r.cell: r for r in report.results}
    assert by_cell[(4, 4)].status is CellStatus.DEGENERATE
    assert "identically_zero" in by_cell[(4, 4)].note


def test_double_factorial_squares_to_100():
    eq = Equation.product_univariate(1, (1, 0, 0))
    task = SearchTask(equation=eq, prod_bounds=(100,))
    report = run_search(task)
    sols = {r.cell[0] for r in report.solutions}
    assert sols == {0, 1}
    assert report.totals.get("UNKNOWN", 0) == 0


def test_prod_range_guard():
    eq = Equation.product_univariate(1, (1, 0))
    with pytest.raises(ValueError):
        SearchTask(equation=eq, prod_bounds=(10, 10))
    SearchTask(equation=eq, prod_bounds=(10, 10), range_override=True)


def test_no_certified_solution_conflict_small_grid():
    task = SearchTask(equation=SUM_SQUARES, n_max=12, m_min=1)
    report = run_search(task)
    for r in report.results:
        if r.status is CellStatus.CERTIFIED:
            assert r.certificate is not None
            assert r.witness is None
        if r.status is CellStatus.SOLUTION:
            assert r.certificate is None


def test_statuses_partition_and_order_is_stable():
    task = SearchTask(equation=SUM_X2, n_max=12)
    report = run_search(task)
    cells = [r.cell for r in report.results]
    assert cells == sorted(cells, key=lambda t: (sum(t), t))
    assert sum(report.totals.values()) == len(report.results)


# ---------------------------------------------------------------------------
# Checkpoints and workers
# ---------------------------------------------------------------------------


def _report_blob(report) -> str:
    return json.dumps([r.to_dict() for r in report.results], sort_keys=True)


def test_checkpoint_resume_equals_uninterrupted(tmp_path):
    ck = tmp_path / "ck.json"
    task = SearchTask(
        equation=SUM_X2, n_max=16, checkpoint_path=str(ck),
        checkpoint_interval=10, abort_after_cells=35,
    )
    with pytest.raises(SearchAborted):
        run_search(task)
    assert ck.exists()
    resumed = run_search(dataclasses.replace(task, abort_after_cells=None))
    plain = run_search(SearchTask(equation=SUM_X2, n_max=16))
    assert _report_blob(resumed) == _report_blob(plain)


def test_checkpoint_task_hash_guard(tmp_path):
    ck = tmp_path / "ck.json"
    task = SearchTask(
        equation=SUM_X2, n_max=14, checkpoint_path=str(ck),
        checkpoint_interval=5, abort_after_cells=12,
    )
    with pytest.raises(SearchAborted):
        run_search(task)
    other = SearchTask(equation=SUM_X2, n_max=15, checkpoint_path=str(ck))
    with pytest.raises(ValueError):
        run_search(other)


def test_workers_do_not_change_results():
    base = run_search(SearchTask(equation=SUM_X2, n_max=18))
    quad = run_search(SearchTask(equation=SUM_X2, n_max=18, workers=4))
    assert _report_blob(base) == _report_blob(quad)
