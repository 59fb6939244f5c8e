"""Prime tables, integer factorization, radicals, and primorial growth checks."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import mpmath

# Sieving beyond this allocates too much for a desk tool; callers can raise it.
DEFAULT_SIEVE_BUDGET = 200_000_000

# Residue thresholds below are exact methods either way; the split is cost only.
_SMALL_TRIAL_BOUND = 100_000

_LOG_PRECISION_BITS = 96  # primorial/radical sums need better than double


class SieveBudgetError(MemoryError):
    """Requested sieve limit exceeds the configured memory budget."""


@dataclass(frozen=True)
class PrimeTable:
    """Primes up to an inclusive limit, with membership testing."""

    limit: int
    primes: tuple[int, ...]
    _members: frozenset[int] = field(repr=False, default=frozenset())

    def __contains__(self, n: int) -> bool:
        return n in self._members

    def in_range(self, lo: int, hi: int) -> list[int]:
        """Primes p with lo <= p <= hi (hi must not exceed the table limit)."""
        if hi > self.limit:
            raise ValueError(f"range end {hi} exceeds table limit {self.limit}")
        import bisect

        i = bisect.bisect_left(self.primes, lo)
        j = bisect.bisect_right(self.primes, hi)
        return list(self.primes[i:j])


@dataclass(frozen=True)
class FactorizationSketch:
    """Sign and prime -> exponent map; exponents are always exact."""

    sign: int
    exponents: dict[int, int]

    def value(self) -> int:
        v = self.sign
        for p, e in self.exponents.items():
            v *= p**e
        return v


def sieve(limit: int, budget: int = DEFAULT_SIEVE_BUDGET) -> PrimeTable:
    """Eratosthenes table of all primes <= limit."""
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    if limit > budget:
        raise SieveBudgetError(f"sieve limit {limit} exceeds budget {budget}")
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start::p] = bytearray((limit - start) // p + 1)
    primes = tuple(i for i in range(limit + 1) if flags[i])
    return PrimeTable(limit=limit, primes=primes, _members=frozenset(primes))


@functools.lru_cache(maxsize=8)
def cached_sieve(limit: int) -> PrimeTable:
    """Memoized sieve for the hot paths (trial division, prime scans)."""
    return sieve(limit)


def nth_prime_upper_bound(n: int) -> int:
    """Safe sieving bound containing at least the first n primes."""
    if n < 6:
        return 15
    x = float(n)
    return int(x * (math.log(x) + math.log(math.log(x)))) + 10


def first_primes(n: int) -> list[int]:
    """The first n primes, ascending."""
    table = cached_sieve(nth_prime_upper_bound(n))
    if len(table.primes) < n:  # bound above is proven; guard anyway
        table = sieve(2 * table.limit)
    return list(table.primes[:n])


# ---------------------------------------------------------------------------
# Primality and factorization
# ---------------------------------------------------------------------------

# Deterministic Miller-Rabin witness set for n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Primality test: deterministic below 3.3e24, strong-probable above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < _MR_DETERMINISTIC_LIMIT:
        bases = _MR_BASES
    else:
        # 64 pseudorandom bases derived from n itself: reproducible runs.
        rng_state = n
        bases = []
        for _ in range(64):
            rng_state = (rng_state * 6364136223846793005 + 1442695040888963407) % 2**64
            bases.append(2 + rng_state % (n - 3))
    for a in bases:
        a %= n
        if a < 2:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, seed: int = 1) -> int:
    """Brent-cycle Pollard rho; returns a nontrivial factor of composite n."""
    if n % 2 == 0:
        return 2
    # Deterministic parameter schedule so repeated runs agree.
    c = seed
    while True:
        y, m, g, r, q = 2 + c, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def factor(a: int, trial_bound: int = _SMALL_TRIAL_BOUND) -> FactorizationSketch:
    """Full factorization of a nonzero integer.

    Trial division by sieved primes up to trial_bound, then Pollard-Brent on
    the remaining cofactors.  Every reported prime passes is_prime.
    """
    if a == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if a < 0 else 1
    n = abs(a)
    exps: dict[int, int] = {}
    if n > 1:
        for p in cached_sieve(min(trial_bound, max(2, math.isqrt(n) + 1))).primes:
            if p * p > n:
                break
            while n % p == 0:
                exps[p] = exps.get(p, 0) + 1
                n //= p
        stack = [n] if n > 1 else []
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                exps[m] = exps.get(m, 0) + 1
                continue
            d = _pollard_brent(m)
            stack.append(d)
            stack.append(m // d)
    return FactorizationSketch(sign=sign, exponents=dict(sorted(exps.items())))


def _pollard_brent_budgeted(n: int, max_steps: int) -> int | None:
    """Like _pollard_brent but gives up after roughly max_steps squarings."""
    if n % 2 == 0:
        return 2
    steps = 0
    c = 1
    while steps < max_steps:
        y, m, g, r, q = 2 + c, 128, 1, 1, 1
        x = ys = y
        while g == 1 and steps < max_steps:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            steps += r
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                steps += min(m, r - k)
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                steps += 1
        if 1 < g < n:
            return g
        c += 1
    return None


def partial_factor(
    a: int, trial_bound: int = _SMALL_TRIAL_BOUND, rho_steps: int = 200_000
) -> tuple[dict[int, int], list[int]]:
    """Best-effort factorization under a work budget.

    Returns (prime_exponents, unfactored_cofactors).  The cofactors are
    composite pieces the rho budget could not split; the product of all
    reported primes (with multiplicity) and cofactors equals abs(a).
    """
    if a == 0:
        raise ValueError("cannot factor 0")
    n = abs(a)
    exps: dict[int, int] = {}
    leftovers: list[int] = []
    if n > 1:
        for p in cached_sieve(min(trial_bound, max(2, math.isqrt(n) + 1))).primes:
            if p * p > n:
                break
            while n % p == 0:
                exps[p] = exps.get(p, 0) + 1
                n //= p
        stack = [n] if n > 1 else []
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                exps[m] = exps.get(m, 0) + 1
                continue
            d = _pollard_brent_budgeted(m, rho_steps)
            if d is None:
                leftovers.append(m)
                continue
            stack.append(d)
            stack.append(m // d)
    return dict(sorted(exps.items())), sorted(leftovers)


def radical(a: int) -> int:
    """Product of the distinct primes dividing a; radical(1) == 1."""
    if a == 0:
        raise ValueError("radical of 0 is undefined")
    return math.prod(factor(a).exponents.keys()) if abs(a) > 1 else 1


# ---------------------------------------------------------------------------
# Primorial growth (theta function) checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimorialCheck:
    """One point of the primorial-vs-4^a comparison, in natural-log space."""

    a: int
    log_primorial: float
    log_rhs: float
    holds: bool


def log_primorial(a: int) -> float:
    """Sum of ln p over primes p <= a, accumulated at 96-bit precision."""
    with mpmath.workprec(_LOG_PRECISION_BITS):
        total = mpmath.mpf(0)
        for p in cached_sieve(max(a, 2)).primes:
            if p > a:
                break
            total += mpmath.log(p)
        return float(total)


def primorial_bound_check(limit: int) -> list[PrimorialCheck]:
    """Check primorial(a) < 4^a for every a in [2, limit].

    Runs in log space: materializing the products would mean thousands of
    digits per entry with nothing gained, since the inequality has wide slack.
    """
    if limit < 2:
        raise ValueError("limit must be at least 2")
    table = cached_sieve(limit)
    out = []
    with mpmath.workprec(_LOG_PRECISION_BITS):
        log4 = mpmath.log(4)
        total = mpmath.mpf(0)
        idx = 0
        for a in range(2, limit + 1):
            while idx < len(table.primes) and table.primes[idx] <= a:
                total += mpmath.log(table.primes[idx])
                idx += 1
            rhs = a * log4
            out.append(
                PrimorialCheck(
                    a=a,
                    log_primorial=float(total),
                    log_rhs=float(rhs),
                    holds=bool(total < rhs),
                )
            )
    return out
