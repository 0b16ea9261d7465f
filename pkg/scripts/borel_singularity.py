#!/usr/bin/env python3
"""Nearest Borel-plane singularity for a ladder of diagonal Pade orders."""

import argparse
import time

from tronquee.borel import level0_borel_model, nearest_singularity
from tronquee.coeffs import action
from tronquee.mpkernel import PrecisionContext


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--terms", type=int, default=100)
    ap.add_argument("--digits", type=int, default=150)
    ap.add_argument("--orders", type=int, nargs="+", default=[20, 30, 40, 49])
    args = ap.parse_args()

    ctx = PrecisionContext(args.digits)
    mp = ctx.mp
    A = action(ctx)
    for m in args.orders:
        if 2 * m + 1 > args.terms:
            print(f"[{m}/{m}] skipped: needs {2 * m + 1} terms")
            continue
        t = time.time()
        model = level0_borel_model(args.terms, m, m, ctx)
        z = nearest_singularity(model, ctx)
        print(f"[{m}/{m}]  sqrt(sigma*) = {mp.nstr(z, 12)}  rel. dev {mp.nstr(abs(z - A) / A, 3)}  "
              f"poles kept {sum(not p.spurious for p in model.poles)}/{len(model.poles)}  ({time.time() - t:.1f}s)")


if __name__ == "__main__":
    main()
