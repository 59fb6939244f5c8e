"""Explicit representation search and the cell-classification harness.

The opposite side of the certificate coin: certificates prove a cell has no
representation, this module finds representations (or proves their absence
by exhaustive enumeration where a rigorous enumeration bound exists) and
runs the (n, m)-grid search that assigns every cell exactly one status.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import arith
from .certify import (
    DEFAULT_PRIME_BUDGET,
    Certificate,
    Equation,
    certify_cell,
    in_hypothesis_region,
    left_is_zero,
    left_value,
)
from .forms import (
    BinaryForm,
    UnivariatePoly,
    _degree,
    _derivative,
    _eval_int,
    _trim,
    is_positive_definite,
    quadratic_discriminant,
)

DEFAULT_BALL_CAP = 2_000_000
# Per-slice exact solving makes general-form enumeration ~100x pricier per
# radius step than the definite-quadratic loop, so without a rigorous
# solution bound the harness caps the radius here instead of at ball_cap.
GENERAL_ENUM_CAP = 10_000


# ---------------------------------------------------------------------------
# Exact univariate solving
# ---------------------------------------------------------------------------


def _nth_root_floor(x: int, d: int) -> int:
    """floor(x ** (1/d)) for x >= 0, exact integer Newton iteration."""
    if x < 0 or d < 1:
        raise ValueError("need x >= 0 and d >= 1")
    if x == 0:
        return 0
    if d == 1:
        return x
    r = 1 << ((x.bit_length() + d - 1) // d)
    while True:
        nr = ((d - 1) * r + x // r ** (d - 1)) // d
        if nr >= r:
            return r
        r = nr


def _probe_point(lo: int, hi: int) -> int:
    """Strictly interior probe; geometric for brackets spanning many octaves.

    Roots of factorial-sized targets sit at half the bit length of the Cauchy
    bound, so arithmetic midpoints would burn thousands of big-integer
    evaluations before reaching them; bisecting the bit length instead gets
    within a factor of two in O(log bits) probes.
    """
    if lo >= 0 and hi.bit_length() - lo.bit_length() >= 2:
        mid = 1 << ((lo.bit_length() + hi.bit_length()) // 2)
    elif hi <= 0 and (-lo).bit_length() - (-hi).bit_length() >= 2:
        mid = -(1 << (((-hi).bit_length() + (-lo).bit_length()) // 2))
    elif lo < 0 < hi:
        mid = 0
    else:
        mid = (lo + hi) // 2
    return mid if lo < mid < hi else (lo + hi) // 2


def _real_root_floors(coeffs: Sequence[int]) -> list[int]:
    """Integers covering every real root: each root r has floor(r) in the list.

    May contain extra values (floors of critical points); callers test
    candidates exactly.  Recursion depth equals the degree: monotone pieces
    between derivative roots admit integer bisection, and any interval [c,
    c+1] holding a critical point is reported wholesale, which also covers
    double roots and same-sign root pairs.  Probes interleave Newton steps
    with bisection: the bracket shrinks on sign tests alone, so a bad Newton
    guess costs one evaluation, never correctness.
    """
    coeffs = _trim(tuple(coeffs))
    d = _degree(coeffs)
    if d <= 0:
        return []
    if d == 1:
        a, b = coeffs
        return [(-b) // a]
    lead = abs(coeffs[0])
    bound = 2 + max(abs(c) for c in coeffs[1:]) // lead
    deriv = _derivative(coeffs)
    crit = _real_root_floors(deriv)
    out = set(crit)
    breaks = sorted(
        {max(-bound, min(bound, p)) for c in crit for p in (c, c + 1)}
        | {-bound, bound}
    )
    values = [_eval_int(coeffs, b) for b in breaks]
    for i in range(len(breaks) - 1):
        lo, hi = breaks[i], breaks[i + 1]
        flo, fhi = values[i], values[i + 1]
        if flo == 0:
            out.add(lo)
        if fhi == 0:
            out.add(hi)
        if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
            continue
        guess = None
        take_guess = False
        while hi - lo > 1:
            take_guess = not take_guess
            chained = take_guess and guess is not None and lo < guess < hi
            if chained:
                mid = guess
                guess = None
            else:
                mid = _probe_point(lo, hi)
            fm = _eval_int(coeffs, mid)
            if fm == 0:
                out.add(mid)
                break
            if chained:
                # Newton iterates land beside the root within a few steps;
                # one neighbor evaluation then closes the cell exactly
                if (fm > 0) == (flo > 0):
                    fn = _eval_int(coeffs, mid + 1)
                    if fn == 0 or (fn > 0) != (flo > 0):
                        out.add(mid)
                        break
                    lo = mid + 1
                else:
                    fn = _eval_int(coeffs, mid - 1)
                    if fn == 0 or (fn > 0) == (flo > 0):
                        out.add(mid - 1)
                        break
                    hi = mid - 1
            elif (fm > 0) == (flo > 0):
                lo = mid
            else:
                hi = mid
            if guess is None:
                fpm = _eval_int(deriv, mid)
                if fpm != 0:
                    step = fm // fpm
                    if step != 0 and lo < mid - step < hi:
                        guess = mid - step
        else:
            out.add(lo)
    return sorted(out)


def integer_root(f: UnivariatePoly, target: int) -> list[int]:
    """All integers x with f(x) == target, sorted ascending.  Complete."""
    if f.degree < 1:
        raise ValueError("need degree >= 1")
    g = tuple(f.coeffs[:-1]) + (f.coeffs[-1] - target,)
    candidates = _real_root_floors(g)
    return sorted(
        {k for c in candidates for k in (c, c + 1) if _eval_int(g, k) == 0}
    )


# ---------------------------------------------------------------------------
# Binary form representation
# ---------------------------------------------------------------------------


def represent_definite_quadratic(
    form: BinaryForm, target: int
) -> tuple[int, int] | None:
    """A representation f(x,y) = target, or None with exhaustive certainty.

    Writing 4c*f = (bx+2cy)^2 + |disc| x^2 bounds |x| by sqrt(4c*target /
    |disc|); x runs down from the bound (WLOG x >= 0 since (-x,-y) represents
    the same value) and y is solved exactly from the quadratic formula.
    """
    if not is_positive_definite(form):
        raise ValueError("needs a positive definite quadratic form")
    if target < 0:
        raise ValueError("a positive definite form cannot represent a negative")
    if target == 0:
        return (0, 0)
    a, b, c = form.coeffs
    neg_disc = 4 * a * c - b * b
    for x in range(math.isqrt(4 * c * target // neg_disc) + 1, -1, -1):
        dd = 4 * c * target - neg_disc * x * x
        if dd < 0:
            continue
        s = math.isqrt(dd)
        if s * s != dd:
            continue
        for root in (s, -s):
            num = -b * x + root
            if num % (2 * c) == 0:
                return (x, num // (2 * c))
    return None


class BallVerdict(enum.Enum):
    NONE_IN_BALL = "NONE_IN_BALL"
    UNKNOWN_BEYOND_BALL = "UNKNOWN_BEYOND_BALL"


NONE_IN_BALL = BallVerdict.NONE_IN_BALL
UNKNOWN_BEYOND_BALL = BallVerdict.UNKNOWN_BEYOND_BALL


def _definite_quadratic_floor(g: BinaryForm) -> Fraction:
    """lam with |g(x,y)| >= lam * (x^2 + y^2) for a definite quadratic g."""
    a, b, c = g.coeffs
    return Fraction(abs(b * b - 4 * a * c), 8 * max(abs(a), abs(c)))


def solution_sup_bound(form: BinaryForm, target: int) -> int | None:
    """Rigorous cap on max(|x|,|y|) over all solutions of f(x,y) = target.

    Available when every irreducible factor is linear or a definite
    quadratic: linear factors contribute |L| >= 1 away from their zero line
    (where f = 0 != target), definite quadratics contribute lam*(x^2+y^2).
    None when no such bound exists (indefinite or unknown factorization).
    """
    if target == 0:
        return None
    if is_positive_definite(form):
        a, b, c = form.coeffs
        return math.isqrt(4 * max(a, c) * abs(target) // (4 * a * c - b * b)) + 1
    work = form
    if work.factors is None and work.degree <= 4:
        work = work.with_found_factors()
    if work.factors is None:
        return None
    lam = Fraction(abs(work.factor_constant))
    d_def = 0
    for g, e in work.factors:
        if g.degree == 1:
            continue
        if g.degree == 2 and quadratic_discriminant(g) < 0:
            lam *= _definite_quadratic_floor(g) ** e
            d_def += 2 * e
            continue
        return None
    if d_def == 0:
        return None
    cap = Fraction(abs(target)) / lam
    return _nth_root_floor(cap.numerator // cap.denominator + 1, d_def) + 1


def represent_general_form(
    form: BinaryForm, target: int, ball: int
) -> tuple[int, int] | BallVerdict:
    """Bounded search for f(x,y) = target over |x| <= ball, exact in y.

    Each x-slice is solved completely (integer_root), so a hit can report y
    beyond the ball.  NONE_IN_BALL is returned when nothing was found and a
    rigorous solution bound fits inside the ball (a genuine proof of
    non-representability); UNKNOWN_BEYOND_BALL otherwise.
    """
    if ball < 1:
        raise ValueError("ball must be positive")
    if target == 0:
        return (0, 0)
    if target % form.content():
        # content divides every represented value; exhaustive at any radius
        return NONE_IN_BALL
    d = form.degree
    best: tuple[int, int] | None = None
    for x in range(0, ball + 1):
        for sx in ((x,) if x == 0 else (x, -x)):
            # f(sx, y) as a univariate in y, descending
            sliced = _trim(
                tuple(form.coeffs[i] * sx ** (d - i) for i in range(d, -1, -1))
            )
            if _degree(sliced) < 1:
                if sliced and sliced[0] == target:
                    return (sx, 0)
                continue
            roots = integer_root(UnivariatePoly(sliced), target)
            if roots:
                y = min(roots, key=lambda r: (abs(r), r < 0))
                return (sx, y)
    sup = solution_sup_bound(form, target)
    if sup is not None and sup <= ball:
        return NONE_IN_BALL
    return UNKNOWN_BEYOND_BALL


# ---------------------------------------------------------------------------
# Quadratic-residue pre-filter
# ---------------------------------------------------------------------------


def possible_square_mod(residue: int, p: int) -> bool:
    """Euler criterion; True when residue can be a square mod p."""
    if p == 2:
        return True
    r = residue % p
    return r == 0 or pow(r, (p - 1) // 2, p) == 1


def square_filter_value(value: int, p_list: Sequence[int]) -> bool:
    """True = rejected: value is a quadratic non-residue mod some listed p."""
    return any(not possible_square_mod(value, p) for p in p_list)


def _factorial_mod(n: int, p: int) -> int:
    if n >= p:
        return 0
    r = 1
    for k in range(2, n + 1):
        r = r * k % p
    return r


def square_filter(eq: Equation, cell: Sequence[int], p_list: Sequence[int]) -> bool:
    """Reject a sum cell as a non-square by modular arithmetic only.

    The target must be x^2 or x^2 + constant; the left side residue is built
    from factorials mod p, never from the big integer.  True means rejected
    (provably not representable); False says nothing.
    """
    if eq.poly is None:
        raise ValueError("square filter needs a univariate target")
    coeffs = eq.poly.coeffs
    if len(coeffs) != 3 or coeffs[0] != 1 or coeffs[1] != 0:
        raise ValueError("square filter needs target x^2 or x^2 + constant")
    shift = coeffs[2]
    cell = eq.normalize_cell(cell)
    n, m = cell
    for p in p_list:
        if p == 2:
            continue
        if not arith.is_prime(p):
            raise ValueError(f"filter modulus {p} is not prime")
        t = (eq.a * _factorial_mod(n, p) + eq.b * _factorial_mod(m, p) - shift) % p
        if not possible_square_mod(t, p):
            return True
    return False


# ---------------------------------------------------------------------------
# The search harness
# ---------------------------------------------------------------------------


class CellStatus(enum.Enum):
    SOLUTION = "SOLUTION"
    CERTIFIED = "CERTIFIED"
    NONE_EXHAUSTIVE = "NONE_EXHAUSTIVE"
    DEGENERATE = "DEGENERATE"
    UNKNOWN = "UNKNOWN"


class SearchAborted(RuntimeError):
    """Raised by the abort_after_cells test hook after a checkpoint write."""


@dataclass(frozen=True)
class CellResult:
    cell: tuple[int, ...]
    status: CellStatus
    witness: tuple[int, ...] | None = None
    certificate: Certificate | None = None
    note: str = ""
    hypothesis: bool | None = None

    def to_dict(self) -> dict:
        return {
            "cell": list(self.cell),
            "status": self.status.value,
            "witness": None if self.witness is None else list(self.witness),
            "certificate": None
            if self.certificate is None
            else self.certificate.to_dict(),
            "note": self.note,
            "hypothesis": self.hypothesis,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CellResult":
        cert = data.get("certificate")
        wit = data.get("witness")
        return cls(
            cell=tuple(int(c) for c in data["cell"]),
            status=CellStatus(data["status"]),
            witness=None if wit is None else tuple(int(w) for w in wit),
            certificate=None if cert is None else Certificate.from_dict(cert),
            note=data.get("note", ""),
            hypothesis=data.get("hypothesis"),
        )


@dataclass(frozen=True)
class SearchTask:
    """One classification run: equation, cell ranges, and work budgets.

    Sum families walk cells (n, m) with m_min <= m < n <= n_max (plus the
    diagonal when include_diagonal is set, where the equation reduces to the
    (a+b)*n! family).  single_factorial walks (n,) cells solving n! =
    poly(x) exactly.  Product families walk multisets bounded by
    prod_bounds.  Budgets: prime_budget and rho_steps feed the certifier,
    ball_cap limits enumeration radii.
    """

    equation: Equation
    n_max: int | None = None
    m_min: int = 1
    m_max: int | None = None
    prod_bounds: tuple[int, ...] | None = None
    single_factorial: bool = False
    include_diagonal: bool = False
    prime_budget: int = DEFAULT_PRIME_BUDGET
    ball_cap: int = DEFAULT_BALL_CAP
    rho_steps: int = 200_000
    checkpoint_path: str | None = None
    checkpoint_interval: int = 200
    cross_check: bool = True
    range_override: bool = False
    abort_after_cells: int | None = None
    workers: int = 1

    def __post_init__(self):
        if self.prime_budget < 1 or self.ball_cap < 1 or self.checkpoint_interval < 1:
            raise ValueError("budgets and checkpoint interval must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        eq = self.equation
        if eq.is_sum:
            if self.n_max is None or self.n_max < 1:
                raise ValueError("sum families need a positive n_max")
            if self.m_min < 0:
                raise ValueError("m_min must be nonnegative")
            if self.single_factorial and eq.poly is None:
                raise ValueError("single-factorial mode needs a univariate target")
        else:
            if self.prod_bounds is None or not self.prod_bounds:
                raise ValueError("product families need prod_bounds")
            if any(b < 0 for b in self.prod_bounds):
                raise ValueError("prod_bounds entries must be nonnegative")
            if self.single_factorial:
                raise ValueError("single-factorial mode is a sum-family feature")
            r = len(self.prod_bounds)
            if (
                r >= 2
                and eq.poly is not None
                and eq.poly.degree <= r
                and not self.range_override
            ):
                raise ValueError(
                    "univariate degree <= number of double-factorial arguments "
                    "usually has infinitely many solutions; pass "
                    "range_override=True to search the range anyway"
                )

    def fingerprint(self) -> str:
        eq = self.equation
        target = eq.target
        desc = {
            "family": eq.family.value,
            "a": eq.a,
            "b": eq.b,
            "coeffs": list(target.coeffs),
            "scaling": eq.scaling,
            "irreducible_declared": isinstance(target, BinaryForm)
            and target.irreducible_declared,
            "factors": None
            if not isinstance(target, BinaryForm) or target.factors is None
            else [[list(g.coeffs), e] for g, e in target.factors],
            "n_max": self.n_max,
            "m_min": self.m_min,
            "m_max": self.m_max,
            "prod_bounds": None if self.prod_bounds is None else list(self.prod_bounds),
            "single_factorial": self.single_factorial,
            "include_diagonal": self.include_diagonal,
            "prime_budget": self.prime_budget,
            "ball_cap": self.ball_cap,
            "rho_steps": self.rho_steps,
        }
        blob = json.dumps(desc, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def cells(self) -> list[tuple[int, ...]]:
        eq = self.equation
        if not eq.is_sum:
            ranges = [range(0, b + 1) for b in self.prod_bounds]
            seen = {tuple(sorted(t, reverse=True)) for t in itertools.product(*ranges)}
            return sorted(seen, key=lambda t: (sum(t), t))
        if self.single_factorial:
            return [(n,) for n in range(1, self.n_max + 1)]
        out = []
        for n in range(self.m_min + 1, self.n_max + 1):
            top = n - 1 if self.m_max is None else min(self.m_max, n - 1)
            for m in range(self.m_min, top + 1):
                out.append((n, m))
        if self.include_diagonal:
            lo = max(self.m_min, 0)
            hi = self.n_max if self.m_max is None else min(self.m_max, self.n_max)
            out.extend((n, n) for n in range(lo, hi + 1))
        return sorted(out, key=lambda t: (sum(t), t))


@dataclass(frozen=True)
class SearchReport:
    task_hash: str
    family: str
    results: tuple[CellResult, ...]
    totals: dict
    elapsed: float

    @property
    def solutions(self) -> list[CellResult]:
        return [r for r in self.results if r.status is CellStatus.SOLUTION]

    @property
    def unknown_fraction(self) -> float:
        if not self.results:
            return 0.0
        return self.totals.get(CellStatus.UNKNOWN.value, 0) / len(self.results)

    def to_dict(self) -> dict:
        return {
            "task_hash": self.task_hash,
            "family": self.family,
            "totals": dict(self.totals),
            "elapsed_seconds": round(self.elapsed, 3),
            "cells": [r.to_dict() for r in self.results],
        }


def _solve_exact(
    eq: Equation, target_value: int, ball_cap: int
) -> tuple[CellStatus, tuple[int, ...] | None, str]:
    """(status, witness, note) for one left-side value, certificates aside."""
    target = eq.target
    if isinstance(target, UnivariatePoly):
        roots = integer_root(target, target_value)
        if roots:
            x = min(roots, key=lambda r: (abs(r), r < 0))
            return CellStatus.SOLUTION, (x,), ""
        return CellStatus.NONE_EXHAUSTIVE, None, "exact_univariate"
    if is_positive_definite(target):
        if target_value < 0:
            return CellStatus.NONE_EXHAUSTIVE, None, "sign_mismatch"
        a, b, c = target.coeffs
        bound = math.isqrt(4 * c * target_value // (4 * a * c - b * b)) + 1
        if bound > ball_cap:
            return CellStatus.UNKNOWN, None, "enumeration_bound_exceeds_cap"
        pair = represent_definite_quadratic(target, target_value)
        if pair is not None:
            return CellStatus.SOLUTION, pair, ""
        return CellStatus.NONE_EXHAUSTIVE, None, "exhaustive_definite"
    sup = solution_sup_bound(target, target_value)
    if sup is not None and sup <= ball_cap:
        ball = sup
    else:
        ball = min(ball_cap, GENERAL_ENUM_CAP)
    verdict = represent_general_form(target, target_value, ball)
    if isinstance(verdict, tuple):
        return CellStatus.SOLUTION, verdict, ""
    if verdict is NONE_IN_BALL:
        return CellStatus.NONE_EXHAUSTIVE, None, "exhaustive_in_bound"
    return CellStatus.UNKNOWN, None, "ball_exhausted"


def _verify_witness(eq: Equation, cell, witness, diagonal: bool, single: bool):
    target = eq.target
    if single:
        expected = math.factorial(cell[0])
    elif diagonal:
        expected = (eq.a + eq.b) * math.factorial(cell[0])
    else:
        expected = left_value(eq, cell)
    got = (
        target.evaluate(*witness)
        if isinstance(target, BinaryForm)
        else target.evaluate(witness[0])
    )
    if got != expected:
        raise AssertionError(
            f"witness {witness} fails direct evaluation at cell {cell}"
        )


def classify_cell(task: SearchTask, cell: tuple[int, ...]) -> CellResult:
    """Assign one status to one cell.  Statuses are mutually exclusive.

    Order: degenerate screens, then the certifier (a certificate is cheaper
    than enumeration and proves more), then exact solving.  cross_check
    re-solves certified cells where exact solving is affordable and insists
    on no solution; a violation is a soundness bug, so it raises.
    """
    eq = task.equation

    if task.single_factorial:
        value = math.factorial(cell[0])
        status, witness, note = _solve_exact(eq, value, task.ball_cap)
        if status is CellStatus.SOLUTION:
            _verify_witness(eq, cell, witness, diagonal=False, single=True)
        return CellResult(cell, status, witness=witness, note=note)

    hyp = in_hypothesis_region(eq, cell)

    if eq.is_sum and cell[0] == cell[1]:
        if eq.a + eq.b == 0:
            return CellResult(
                cell,
                CellStatus.DEGENERATE,
                note="identically_zero_family",
                hypothesis=hyp,
            )
        value = (eq.a + eq.b) * math.factorial(cell[0])
        status, witness, note = _solve_exact(eq, value, task.ball_cap)
        if status is CellStatus.SOLUTION:
            _verify_witness(eq, cell, witness, diagonal=True, single=False)
        return CellResult(
            cell,
            status,
            witness=witness,
            note=("diagonal_reduced " + note).strip(),
            hypothesis=hyp,
        )

    if left_is_zero(eq, cell):
        return CellResult(
            cell, CellStatus.DEGENERATE, note="zero_left_side", hypothesis=hyp
        )

    cert = certify_cell(
        eq,
        cell,
        prime_budget=task.prime_budget,
        rho_steps=task.rho_steps,
    )
    if cert is not None:
        if task.cross_check:
            _cross_check_certificate(task, eq, cell, cert)
        return CellResult(
            cell, CellStatus.CERTIFIED, certificate=cert, hypothesis=hyp
        )

    value = left_value(eq, cell)
    status, witness, note = _solve_exact(eq, value, task.ball_cap)
    if status is CellStatus.SOLUTION:
        _verify_witness(eq, cell, witness, diagonal=False, single=False)
    return CellResult(cell, status, witness=witness, note=note, hypothesis=hyp)


def _cross_check_certificate(task, eq, cell, cert) -> None:
    """Assert no solution exists where checking is cheap; soundness guard."""
    target = eq.target
    value = left_value(eq, cell)
    if isinstance(target, UnivariatePoly):
        if integer_root(target, value):
            raise AssertionError(
                f"certified cell {cell} has a solution: certificate unsound"
            )
        return
    if is_positive_definite(target) and value >= 0:
        a, b, c = target.coeffs
        bound = math.isqrt(4 * c * value // (4 * a * c - b * b)) + 1
        if bound <= task.ball_cap:
            if represent_definite_quadratic(target, value) is not None:
                raise AssertionError(
                    f"certified cell {cell} has a solution: certificate unsound"
                )


def _write_checkpoint(path: str, task_hash: str, results: list[CellResult]) -> None:
    payload = {
        "task_hash": task_hash,
        "frontier": len(results),
        "results": [r.to_dict() for r in results],
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def _load_checkpoint(path: str, task_hash: str) -> list[CellResult]:
    if not os.path.exists(path):
        return []
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("task_hash") != task_hash:
        raise ValueError(
            "checkpoint belongs to a different task (hash mismatch); "
            "delete it or point the task elsewhere"
        )
    return [CellResult.from_dict(d) for d in payload["results"]]


def run_search(task: SearchTask) -> SearchReport:
    """Classify every cell in the task's range; resumable and deterministic.

    Results are produced in ascending (sum, cell) order regardless of worker
    count.  With a checkpoint path, progress is flushed atomically every
    checkpoint_interval cells and completed prefixes are never recomputed.
    """
    t0 = time.perf_counter()
    task_hash = task.fingerprint()
    cells = task.cells()
    done: list[CellResult] = []
    if task.checkpoint_path:
        done = _load_checkpoint(task.checkpoint_path, task_hash)
        for have, want in zip(done, cells):
            if have.cell != want:
                raise ValueError("checkpoint cell order does not match the task")
        if len(done) > len(cells):
            raise ValueError("checkpoint covers more cells than the task")

    processed_new = 0
    idx = len(done)
    pool = ThreadPoolExecutor(task.workers) if task.workers > 1 else None
    try:
        while idx < len(cells):
            chunk_len = min(task.checkpoint_interval, len(cells) - idx)
            if task.abort_after_cells is not None:
                room = task.abort_after_cells - processed_new
                if room <= 0:
                    if task.checkpoint_path:
                        _write_checkpoint(task.checkpoint_path, task_hash, done)
                    raise SearchAborted(
                        f"aborted after {processed_new} cells (test hook)"
                    )
                chunk_len = min(chunk_len, room)
            chunk = cells[idx : idx + chunk_len]
            if pool is not None:
                results = list(pool.map(lambda c: classify_cell(task, c), chunk))
            else:
                results = [classify_cell(task, c) for c in chunk]
            done.extend(results)
            idx += chunk_len
            processed_new += chunk_len
            if task.checkpoint_path:
                _write_checkpoint(task.checkpoint_path, task_hash, done)
    finally:
        if pool is not None:
            pool.shutdown()

    totals = {status.value: 0 for status in CellStatus}
    for r in done:
        totals[r.status.value] += 1
    return SearchReport(
        task_hash=task_hash,
        family=task.equation.family.value,
        results=tuple(done),
        totals=totals,
        elapsed=time.perf_counter() - t0,
    )
