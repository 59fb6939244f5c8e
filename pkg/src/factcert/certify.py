"""Prime certificates of non-representability for factorial-type equations.

A certificate names one prime q and explains why the valuation v_q of the
left side is incompatible with every value the right side can take.  Two
rules cover all eligible primes:

  V_LESS_THAN_E   the right side only takes valuations in {0, E, E+1, ...}
                  at q (rootless target), so 0 < v < E is impossible; for a
                  rootless univariate target E is infinite and any v > 0
                  certifies.
  V_NOT_MULTIPLE  the right side only takes valuations that are multiples
                  of the linear-factor multiplicity e (below the total
                  degree, for binary targets), so v % e != 0 certifies.

Certificates are plain data: rechecking one recomputes the valuation and the
eligibility profile from scratch and re-evaluates the rule.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Sequence

from . import arith, obstruction, valuation
from .forms import BinaryForm, UnivariatePoly
from .obstruction import REASON_LINEAR_MULTIPLICITY, REASON_NO_ROOT
from .valuation import FactorialKind, FactorialSpec, _cofactor_is_zero

CHECKER_VERSION = "1.0"

RULE_BELOW_EXPONENT = "V_LESS_THAN_E"
RULE_NOT_MULTIPLE = "V_NOT_MULTIPLE"

DEFAULT_PRIME_BUDGET = 10_000
# Beyond this gap, materializing the cofactor (m+1)...(n) * A + B for the
# factorization fallback costs more than the certificate is worth.
RHO_COFACTOR_GAP_LIMIT = 6_000
RECHECK_EXACT_LIMIT = 2_000


class ZeroLeftSideError(ValueError):
    """Raised when the left side is identically zero at the given cell."""


class Family(enum.Enum):
    SUM_FACT_BINARY = "SUM_FACT_BINARY"
    SUM_FACT_UNI = "SUM_FACT_UNI"
    PROD_DFACT_BINARY = "PROD_DFACT_BINARY"
    PROD_DFACT_UNI = "PROD_DFACT_UNI"

    @property
    def is_sum(self) -> bool:
        return self in (Family.SUM_FACT_BINARY, Family.SUM_FACT_UNI)

    @property
    def is_binary(self) -> bool:
        return self in (Family.SUM_FACT_BINARY, Family.PROD_DFACT_BINARY)


@dataclass(frozen=True)
class Equation:
    """One fixed equation shape: left side family plus right-side target.

    Sum families read  a*n! + b*m! = target(...)  over cells (n, m) with
    n >= m >= 0; product families read  b * n1!! * ... * nr!! = target(...)
    over tuples of double-factorial arguments.  scaling records the factor
    both sides were multiplied by to clear rational target coefficients, so
    reports can refer back to the original statement.
    """

    family: Family
    a: int = 1
    b: int = 1
    form: BinaryForm | None = None
    poly: UnivariatePoly | None = None
    scaling: int = 1

    def __post_init__(self):
        if self.family.is_sum:
            if self.a == 0 or self.b == 0:
                raise ValueError("sum family needs nonzero a and b")
        else:
            if self.b == 0:
                raise ValueError("product family needs nonzero b")
            if self.a != 1:
                raise ValueError("product family does not use a; leave it at 1")
        if self.family.is_binary:
            if self.form is None or self.poly is not None:
                raise ValueError("binary family needs form set and poly unset")
        else:
            if self.poly is None or self.form is not None:
                raise ValueError("univariate family needs poly set and form unset")
        if self.scaling < 1:
            raise ValueError("scaling must be a positive integer")

    @property
    def is_sum(self) -> bool:
        return self.family.is_sum

    @property
    def target(self) -> BinaryForm | UnivariatePoly:
        return self.form if self.form is not None else self.poly

    @classmethod
    def sum_binary(cls, a: int, b: int, coeffs, **form_kwargs) -> "Equation":
        ints, mult = _cleared(coeffs)
        return cls(
            family=Family.SUM_FACT_BINARY,
            a=a * mult,
            b=b * mult,
            form=BinaryForm(ints, **form_kwargs),
            scaling=mult,
        )

    @classmethod
    def sum_univariate(cls, a: int, b: int, coeffs) -> "Equation":
        ints, mult = _cleared(coeffs)
        return cls(
            family=Family.SUM_FACT_UNI,
            a=a * mult,
            b=b * mult,
            poly=UnivariatePoly(ints),
            scaling=mult,
        )

    @classmethod
    def product_binary(cls, b: int, coeffs, **form_kwargs) -> "Equation":
        ints, mult = _cleared(coeffs)
        return cls(
            family=Family.PROD_DFACT_BINARY,
            b=b * mult,
            form=BinaryForm(ints, **form_kwargs),
            scaling=mult,
        )

    @classmethod
    def product_univariate(cls, b: int, coeffs) -> "Equation":
        ints, mult = _cleared(coeffs)
        return cls(
            family=Family.PROD_DFACT_UNI,
            b=b * mult,
            poly=UnivariatePoly(ints),
            scaling=mult,
        )

    def normalize_cell(self, cell: Sequence[int]) -> tuple[int, ...]:
        out = tuple(int(c) for c in cell)
        if self.is_sum:
            if len(out) != 2:
                raise ValueError("sum cells are pairs (n, m)")
            n, m = out
            if m < 0 or n < m:
                raise ValueError("sum cells need n >= m >= 0")
        else:
            if not out:
                raise ValueError("product cells need at least one argument")
            if any(c < 0 for c in out):
                raise ValueError("double-factorial arguments must be nonnegative")
        return out


def _cleared(coeffs) -> tuple[tuple[int, ...], int]:
    from .forms import clear_denominators

    return clear_denominators(coeffs)


def left_is_zero(eq: Equation, cell: Sequence[int]) -> bool:
    """Exact zero test for the left side at a cell, without big factorials."""
    cell = eq.normalize_cell(cell)
    if not eq.is_sum:
        return False
    n, m = cell
    return _cofactor_is_zero(eq.a, eq.b, n, m)


def left_value(eq: Equation, cell: Sequence[int]) -> int:
    """The left side as an exact integer.  Intended for small cells only."""
    cell = eq.normalize_cell(cell)
    if eq.is_sum:
        n, m = cell
        return eq.a * math.factorial(n) + eq.b * math.factorial(m)
    return eq.b * math.prod(valuation.double_factorial_exact(c) for c in cell)


def left_valuation(
    eq: Equation,
    cell: Sequence[int],
    q: int,
    cap_margin: int = valuation.DEFAULT_CAP_MARGIN,
) -> valuation.ValuationResult:
    cell = eq.normalize_cell(cell)
    if eq.is_sum:
        n, m = cell
        return valuation.combined_valuation(eq.a, eq.b, n, m, q, cap_margin)
    specs = [FactorialSpec(FactorialKind.DOUBLE_FACTORIAL, c) for c in cell]
    return valuation.ValuationResult(
        prime=q, value=valuation.product_valuation(eq.b, specs, q), exact=True
    )


@dataclass(frozen=True)
class Certificate:
    """Self-contained non-representability witness for one cell."""

    family: Family
    a: int
    b: int
    cell: tuple[int, ...]
    form_coeffs: tuple[int, ...]
    scaling: int
    prime: int
    valuation: int
    forced_exponent: int | None
    rule: str
    checker_version: str = CHECKER_VERSION
    factor_list: tuple[tuple[tuple[int, ...], int], ...] | None = None
    factor_constant: int | None = None
    irreducible_declared: bool = False
    notes: tuple[str, ...] = ()

    def equation(self) -> Equation:
        if self.family.is_binary:
            factors = None
            if self.factor_list is not None:
                factors = tuple(
                    (BinaryForm(tuple(c)), int(mult)) for c, mult in self.factor_list
                )
            form = BinaryForm(
                self.form_coeffs,
                factors=factors,
                factor_constant=self.factor_constant,
                irreducible_declared=self.irreducible_declared,
            )
            return Equation(
                family=self.family,
                a=self.a,
                b=self.b,
                form=form,
                scaling=self.scaling,
            )
        return Equation(
            family=self.family,
            a=self.a,
            b=self.b,
            poly=UnivariatePoly(self.form_coeffs),
            scaling=self.scaling,
        )

    def to_dict(self) -> dict:
        # Field order is part of the certificate format; keep it frozen.
        out: dict = {"family": self.family.value}
        if self.family.is_sum:
            out["A"] = self.a
            out["B"] = self.b
        else:
            out["b"] = self.b
        out["cell"] = list(self.cell)
        out["form_coeffs"] = list(self.form_coeffs)
        out["scaling"] = self.scaling
        out["prime"] = self.prime
        out["valuation"] = self.valuation
        out["forced_exponent"] = self.forced_exponent
        out["rule"] = self.rule
        out["checker_version"] = self.checker_version
        if self.factor_list is not None:
            out["factor_list"] = [[list(c), m] for c, m in self.factor_list]
            out["factor_constant"] = self.factor_constant
        if self.irreducible_declared:
            out["irreducible_declared"] = True
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        family = Family(data["family"])
        if family.is_sum:
            a, b = int(data["A"]), int(data["B"])
        else:
            a, b = 1, int(data["b"])
        factor_list = None
        if data.get("factor_list") is not None:
            factor_list = tuple(
                (tuple(int(x) for x in c), int(m)) for c, m in data["factor_list"]
            )
        fc = data.get("factor_constant")
        fe = data.get("forced_exponent")
        return cls(
            family=family,
            a=a,
            b=b,
            cell=tuple(int(c) for c in data["cell"]),
            form_coeffs=tuple(int(c) for c in data["form_coeffs"]),
            scaling=int(data["scaling"]),
            prime=int(data["prime"]),
            valuation=int(data["valuation"]),
            forced_exponent=None if fe is None else int(fe),
            rule=str(data["rule"]),
            checker_version=str(data["checker_version"]),
            factor_list=factor_list,
            factor_constant=None if fc is None else int(fc),
            irreducible_declared=bool(data.get("irreducible_declared", False)),
            notes=tuple(data.get("notes", ())),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def _rule_outcome(profile: obstruction.ObstructionProfile, v: int) -> str | None:
    """Which rule (if any) the pair (profile, v) satisfies."""
    if v <= 0 or not profile.eligible:
        return None
    if profile.unbounded:
        return RULE_BELOW_EXPONENT
    e = profile.forced_exponent
    if profile.reason == REASON_NO_ROOT:
        return RULE_BELOW_EXPONENT if v < e else None
    if v % e == 0:
        return None
    if not profile.univariate and v >= profile.total_degree:
        return None
    return RULE_NOT_MULTIPLE


def _certificate(
    eq: Equation,
    cell: tuple[int, ...],
    profile: obstruction.ObstructionProfile,
    v: int,
    rule: str,
    notes: tuple[str, ...],
) -> Certificate:
    target = eq.target
    factor_list = None
    factor_constant = None
    irreducible_declared = False
    if isinstance(target, BinaryForm):
        irreducible_declared = target.irreducible_declared
        if target.factors is not None:
            factor_list = tuple((f.coeffs, mult) for f, mult in target.factors)
            factor_constant = target.factor_constant
    return Certificate(
        family=eq.family,
        a=eq.a,
        b=eq.b,
        cell=cell,
        form_coeffs=target.coeffs,
        scaling=eq.scaling,
        prime=profile.q,
        valuation=v,
        forced_exponent=profile.forced_exponent,
        rule=rule,
        factor_list=factor_list,
        factor_constant=factor_constant,
        irreducible_declared=irreducible_declared,
        notes=notes,
    )


def window_primes(anchor: int) -> list[int]:
    """Primes p with anchor/2 < p <= anchor, largest first.

    Such p divide anchor! exactly once, which is what makes them the cheapest
    certificate candidates: the factorial part contributes valuation 1 and
    only the small cofactor can push it higher.
    """
    if anchor < 2:
        return []
    table = arith.cached_sieve(anchor)
    return list(reversed(table.in_range(anchor // 2 + 1, anchor)))


def certify_cell(
    eq: Equation,
    cell: Sequence[int],
    *,
    prime_budget: int = DEFAULT_PRIME_BUDGET,
    cap_margin: int = valuation.DEFAULT_CAP_MARGIN,
    rho_steps: int = 200_000,
) -> Certificate | None:
    """Search for a certificate at one cell; None when no tried prime works.

    Candidate order: primes in (anchor/2, anchor] descending (anchor = m for
    sum cells, max argument for product cells), then the first prime_budget
    primes ascending, then for sum cells the prime factors of the cofactor
    a*(m+1)*...*n + b found by budgeted factorization.  The order only
    affects which certificate is found first, never its validity.
    """
    cell = eq.normalize_cell(cell)
    if left_is_zero(eq, cell):
        raise ZeroLeftSideError(f"left side is zero at cell {cell}")
    if prime_budget < 1:
        raise ValueError("prime_budget must be positive")
    target = eq.target
    anchor = cell[1] if eq.is_sum else max(cell)

    tried: set[int] = set()

    def _attempt(q: int, notes: tuple[str, ...]) -> Certificate | None:
        tried.add(q)
        profile = obstruction.obstruction_profile(target, q)
        if not profile.eligible:
            return None
        res = left_valuation(eq, cell, q, cap_margin)
        if not res.exact:
            return None
        rule = _rule_outcome(profile, res.value)
        if rule is None:
            return None
        return _certificate(eq, cell, profile, res.value, rule, notes)

    for q in window_primes(anchor):
        cert = _attempt(q, ("window_prime",))
        if cert is not None:
            return cert

    ascending = arith.first_primes(prime_budget)
    for q in ascending:
        if q in tried:
            continue
        cert = _attempt(q, ())
        if cert is not None:
            return cert
    max_scanned = ascending[-1]

    if not eq.is_sum:
        # Every prime in the left side divides some n_i!! or b; the scan above
        # covered everything up to max(anchor, budget), so only large prime
        # factors of b remain.
        for q in sorted(arith.factor(eq.b).exponents):
            if q > max_scanned and q not in tried:
                cert = _attempt(q, ("multiplier_factor",))
                if cert is not None:
                    return cert
        return None

    n, m = cell
    if rho_steps <= 0 or n - m > RHO_COFACTOR_GAP_LIMIT:
        return None
    cofactor = eq.a * math.prod(range(m + 1, n + 1)) + eq.b
    exponents, _leftover = arith.partial_factor(abs(cofactor), rho_steps=rho_steps)
    for q in sorted(exponents):
        if q <= max_scanned or q in tried:
            continue
        profile = obstruction.obstruction_profile(target, q)
        if not profile.eligible:
            continue
        # q > max_scanned >= all window primes, so q does not divide m! and
        # the full valuation is just its exponent in the cofactor.
        v = exponents[q] + valuation.legendre_valuation(m, q)
        rule = _rule_outcome(profile, v)
        if rule is not None:
            return _certificate(eq, cell, profile, v, rule, ("cofactor_factor",))
    return None


def recheck(cert: Certificate, *, deep: bool = False) -> bool:
    """Re-derive everything a certificate claims; False on any mismatch.

    Recomputes the left-side valuation (exactly, from the integer itself,
    when the cell is small enough), rebuilds the eligibility profile, and
    re-evaluates the rule.  deep=True additionally brute-forces the forced
    exponent over residues when the prime is within the exhaustive budget.
    Malformed data counts as failure, not as an error.
    """
    try:
        eq = cert.equation()
        cell = eq.normalize_cell(cert.cell)
        q = cert.prime
        if not arith.is_prime(q):
            return False
        if cert.checker_version != CHECKER_VERSION:
            return False
        if cert.rule not in (RULE_BELOW_EXPONENT, RULE_NOT_MULTIPLE):
            return False
        if left_is_zero(eq, cell):
            return False

        if eq.is_sum and cell[0] <= RECHECK_EXACT_LIMIT:
            big = left_value(eq, cell)
            if big == 0:
                return False
            v, t = 0, abs(big)
            while t % q == 0:
                t //= q
                v += 1
        else:
            res = left_valuation(eq, cell, q)
            if not res.exact:
                return False
            v = res.value
        if v != cert.valuation:
            return False

        profile = obstruction.obstruction_profile(eq.target, q)
        if not profile.eligible:
            return False
        if profile.forced_exponent != cert.forced_exponent:
            return False
        if _rule_outcome(profile, v) != cert.rule:
            return False
        if deep and isinstance(eq.target, BinaryForm):
            if q <= obstruction.VERIFY_PRIME_LIMIT:
                if not obstruction.verify_forced_exponent(eq.target, q):
                    return False
        return True
    except (ValueError, TypeError, KeyError, ArithmeticError):
        return False


def in_hypothesis_region(eq: Equation, cell: Sequence[int]) -> bool:
    """Whether the cell sits where the asymptotic argument applies.

    For sum cells that means m > 2*max(|a|, |b|); for product cells the
    largest argument plays the role of m against |b|.  Outside the region
    certificates are still valid, the annotation only marks where the
    finiteness argument predicts they exist.
    """
    cell = eq.normalize_cell(cell)
    if eq.is_sum:
        return cell[1] > 2 * max(abs(eq.a), abs(eq.b))
    return max(cell) > 2 * abs(eq.b)


@dataclass(frozen=True)
class WindowPrimeReport:
    """Prime availability in the certificate window above m/2.

    The claim interval (m/2, m/2 + m/(12 ln m)) is where a prime is
    guaranteed asymptotically; the relaxed interval (m/2, m] is what the
    search actually uses.  below_asymptotic marks m too small for the claim
    interval to contain any integer at all.
    """

    m: int
    claim_lo: float
    claim_hi: float
    claim_integers: tuple[int, ...]
    claim_primes: tuple[int, ...]
    claim_eligible: tuple[int, ...]
    relaxed_primes: tuple[int, ...]
    relaxed_eligible: tuple[int, ...]
    below_asymptotic: bool
    claim_empty: bool


def window_prime_report(target, m: int) -> WindowPrimeReport:
    if m < 10:
        raise ValueError("window analysis needs m >= 10")
    lo = m / 2
    hi = m / 2 + m / (12 * math.log(m))
    first = math.floor(lo) + 1
    last = math.ceil(hi) - 1
    integers = tuple(range(first, last + 1))
    claim_primes = tuple(k for k in integers if arith.is_prime(k))
    claim_eligible = tuple(
        q for q in claim_primes if obstruction.obstruction_profile(target, q).eligible
    )
    relaxed = tuple(window_primes(m)[::-1])
    relaxed_eligible = tuple(
        q for q in relaxed if obstruction.obstruction_profile(target, q).eligible
    )
    return WindowPrimeReport(
        m=m,
        claim_lo=lo,
        claim_hi=hi,
        claim_integers=integers,
        claim_primes=claim_primes,
        claim_eligible=claim_eligible,
        relaxed_primes=relaxed,
        relaxed_eligible=relaxed_eligible,
        below_asymptotic=not integers,
        claim_empty=not claim_eligible,
    )
