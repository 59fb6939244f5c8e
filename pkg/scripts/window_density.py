"""How often does the certificate window actually contain an eligible prime?

The finiteness argument wants, for each large m, one eligible prime in the
narrow claim interval (m/2, m/2 + m/(12 ln m)).  The search relaxes this to
(m/2, m], which is far more forgiving.  This script measures both empirically
for a chosen target: the fraction of m in a range whose windows are nonempty,
the average number of eligible primes per window, and the largest m where the
narrow window comes up empty.

Usage:
    python scripts/window_density.py [--form x2+y2] [--lo 10] [--hi 2000]
"""

import argparse
import sys

from factcert import BUNDLED_FORMS
from factcert.certify import window_prime_report
from factcert.cli import CLIInputError, parse_form_token
from factcert.forms import BinaryForm, clear_denominators


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--form", default="x2+y2")
    ap.add_argument("--lo", type=int, default=10)
    ap.add_argument("--hi", type=int, default=2000)
    args = ap.parse_args()

    if args.lo < 10 or args.hi < args.lo:
        print("need 10 <= lo <= hi", file=sys.stderr)
        return 1
    try:
        token = args.form.replace(" ", "").lower()
        target = BUNDLED_FORMS.get(token)
        if target is None:
            ints, _ = clear_denominators(parse_form_token(args.form))
            target = BinaryForm(ints)
    except (CLIInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    total = 0
    claim_nonempty = 0
    relaxed_nonempty = 0
    eligible_count = 0
    last_claim_gap = None
    last_relaxed_gap = None
    for m in range(args.lo, args.hi + 1):
        rep = window_prime_report(target, m)
        total += 1
        if rep.claim_eligible:
            claim_nonempty += 1
        else:
            last_claim_gap = m
        if rep.relaxed_eligible:
            relaxed_nonempty += 1
            eligible_count += len(rep.relaxed_eligible)
        else:
            last_relaxed_gap = m

    print(f"target {args.form}  m in [{args.lo}, {args.hi}]  ({total} values)")
    print(
        f"narrow claim window nonempty: {claim_nonempty}/{total} "
        f"({claim_nonempty / total:.4f})"
    )
    print(
        f"relaxed (m/2, m] window nonempty: {relaxed_nonempty}/{total} "
        f"({relaxed_nonempty / total:.4f})"
    )
    if relaxed_nonempty:
        print(
            "mean eligible primes per nonempty relaxed window: "
            f"{eligible_count / relaxed_nonempty:.2f}"
        )
    print(f"largest m with empty narrow window: {last_claim_gap}")
    print(f"largest m with empty relaxed window: {last_relaxed_gap}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
