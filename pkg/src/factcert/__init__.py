"""Exact prime valuations of factorial-type integers, divisibility
certificates against representation by integer forms, bounded solution
searches, and numeric bound extraction.

The package is organized as a pipeline: `arith` and `valuation` compute with
primes and valuations without materializing huge integers, `forms` and
`obstruction` decide which primes obstruct a target form or polynomial,
`certify` turns one (cell, prime) pair into a recheckable certificate,
`solver` classifies every cell of a finite search range, `bounds` extracts
numeric index bounds from Stirling-type inequalities, and `cli` fronts it
all on the command line.
"""

from .arith import (
    FactorizationSketch,
    PrimeTable,
    PrimorialCheck,
    SieveBudgetError,
    cached_sieve,
    factor,
    first_primes,
    is_prime,
    log_primorial,
    partial_factor,
    primorial_bound_check,
    radical,
    sieve,
)
from .valuation import (
    FactorialKind,
    FactorialSpec,
    ValuationResult,
    combined_valuation,
    double_factorial_exact,
    double_factorial_sketch,
    double_factorial_valuation,
    factorial_sketch,
    legendre_valuation,
    product_valuation,
    rising_product_mod,
)
from .forms import (
    BUNDLED_FORMS,
    BUNDLED_POLYS,
    BinaryForm,
    DepressedForm,
    FormDataError,
    UnivariatePoly,
    clear_denominators,
    depress,
    distinct_root_count,
    is_monomial_after_depression,
    sandwich_threshold,
)
from .obstruction import (
    ObstructionProfile,
    ObstructionScan,
    obstruction_profile,
    scan_obstruction_primes,
    verify_forced_exponent,
)
from .certify import (
    Certificate,
    Equation,
    Family,
    ZeroLeftSideError,
    certify_cell,
    left_valuation,
    left_value,
    recheck,
    window_prime_report,
    window_primes,
)
from .solver import (
    CellResult,
    CellStatus,
    SearchReport,
    SearchTask,
    classify_cell,
    integer_root,
    represent_definite_quadratic,
    run_search,
    solution_sup_bound,
)
from .bounds import (
    AbcParams,
    BoundReport,
    BoundScanError,
    MonomialTargetError,
    RadicalFactorialBound,
    StirlingInequality,
    StirlingKind,
    conditional_bound_pipeline,
    radical_bound_factorial,
    stirling_bound,
    stirling_frontier,
    stirling_margin,
)

__version__ = "0.1.0"

__all__ = [
    "AbcParams",
    "BUNDLED_FORMS",
    "BUNDLED_POLYS",
    "BinaryForm",
    "BoundReport",
    "BoundScanError",
    "CellResult",
    "CellStatus",
    "Certificate",
    "DepressedForm",
    "Equation",
    "FactorialKind",
    "FactorialSpec",
    "FactorizationSketch",
    "Family",
    "FormDataError",
    "MonomialTargetError",
    "ObstructionProfile",
    "ObstructionScan",
    "PrimeTable",
    "PrimorialCheck",
    "RadicalFactorialBound",
    "SearchReport",
    "SearchTask",
    "SieveBudgetError",
    "StirlingInequality",
    "StirlingKind",
    "UnivariatePoly",
    "ValuationResult",
    "ZeroLeftSideError",
    "cached_sieve",
    "certify_cell",
    "classify_cell",
    "clear_denominators",
    "combined_valuation",
    "conditional_bound_pipeline",
    "depress",
    "distinct_root_count",
    "double_factorial_exact",
    "double_factorial_sketch",
    "double_factorial_valuation",
    "factor",
    "factorial_sketch",
    "first_primes",
    "integer_root",
    "is_monomial_after_depression",
    "is_prime",
    "left_valuation",
    "left_value",
    "legendre_valuation",
    "log_primorial",
    "obstruction_profile",
    "partial_factor",
    "primorial_bound_check",
    "product_valuation",
    "radical",
    "radical_bound_factorial",
    "recheck",
    "represent_definite_quadratic",
    "rising_product_mod",
    "run_search",
    "sandwich_threshold",
    "scan_obstruction_primes",
    "sieve",
    "solution_sup_bound",
    "stirling_bound",
    "stirling_frontier",
    "stirling_margin",
    "verify_forced_exponent",
    "window_prime_report",
    "window_primes",
]
