"""One-page desk check: rerun the headline computations and print a digest.

Covers the three bundled presets, the obstruction landscape of the bundled
forms, a radical-growth spot check, and one conditional bound pipeline, all
at sizes that finish in well under a minute.  Useful as a smoke test after
touching any of the underlying modules.

Usage:
    python scripts/desk_report.py
"""

import sys
import time
from fractions import Fraction

from factcert import (
    BUNDLED_FORMS,
    BUNDLED_POLYS,
    AbcParams,
    conditional_bound_pipeline,
    radical_bound_factorial,
    run_search,
    scan_obstruction_primes,
)
from factcert.bounds import MonomialTargetError
from factcert.cli import PRESETS


def main() -> int:
    t0 = time.time()
    failures = 0

    print("== presets ==")
    for name in sorted(PRESETS):
        task, expected = PRESETS[name]()
        report = run_search(task)
        found = {r.cell: r.witness for r in report.solutions}
        unknown = report.totals.get("UNKNOWN", 0)
        ok = found == expected and unknown == 0
        failures += 0 if ok else 1
        verdict = "ok " if ok else "FAIL"
        print(
            f"  {verdict} {name}: {len(report.results)} cells, "
            f"{len(found)} solutions, {unknown} unknown"
        )

    print("== bundled form obstruction scans [3, 100] ==")
    for token, form in BUNDLED_FORMS.items():
        scan = scan_obstruction_primes(form, 3, 100)
        k = len(scan.eligible_primes)
        ok = k > 0
        failures += 0 if ok else 1
        print(
            f"  {'ok ' if ok else 'FAIL'} {token}: {k} eligible "
            f"(density {scan.density:.3f})"
        )

    print("== radical growth vs envelope ==")
    for m in (10, 100, 1000):
        rb = radical_bound_factorial(m)
        ok = rb.below
        failures += 0 if ok else 1
        print(
            f"  {'ok ' if ok else 'FAIL'} m={m}: log rad {rb.theta_log:.2f} "
            f"vs envelope {rb.envelope_log:.2f} (margin {rb.margin:.2f})"
        )

    print("== conditional pipeline ==")
    for token in ("x^2-1", "x^3-2"):
        poly = BUNDLED_POLYS[token]
        try:
            rep = conditional_bound_pipeline(
                poly, AbcParams(epsilon=Fraction(1, 2 * poly.degree))
            )
            print(f"  ok  {token}: m_max={rep.m_max}  (epsilon={rep.epsilon})")
        except MonomialTargetError:
            print(f"  ok  {token}: monomial target, certifier route")

    dt = time.time() - t0
    print(f"== done in {dt:.1f}s, {failures} failures ==")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
