#!/usr/bin/env python3
"""Coefficient growth of the level-0 series against the ratio limit 4/A^2."""

import argparse

from tronquee.coeffs import action, level0_coeffs, ratio_diagnostic, ratio_limit
from tronquee.mpkernel import PrecisionContext


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--terms", type=int, default=200)
    ap.add_argument("--digits", type=int, default=30)
    args = ap.parse_args()

    ctx = PrecisionContext(args.digits)
    mp = ctx.mp
    r = ratio_diagnostic(level0_coeffs(args.terms + 2), args.terms, ctx)
    lim = ratio_limit(ctx)
    print(f"A = {mp.nstr(action(ctx), args.digits)}")
    print(f"limit 4/A^2 = {mp.nstr(lim, 15)}")
    print(f"{'n':>5}  {'r_n':>22}  {'rel. dev':>10}")
    n = 10
    while n <= args.terms:
        v = r[n - 1]
        print(f"{n:5d}  {mp.nstr(v, 18):>22}  {mp.nstr(abs(v - lim) / lim, 3):>10}")
        n *= 2


if __name__ == "__main__":
    main()
