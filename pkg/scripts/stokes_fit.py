#!/usr/bin/env python3
"""Measure the exponentially small jump between lateral Borel sums on arg x = pi."""

import argparse
import time

from tronquee.borel import level0_borel_model, stokes_jump_and_fit
from tronquee.coeffs import action
from tronquee.mpkernel import PrecisionContext


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=200)
    ap.add_argument("--terms", type=int, default=100)
    ap.add_argument("--pade", type=int, default=40)
    ap.add_argument("--quad-digits", type=int, default=60)
    ap.add_argument("--x", type=float, nargs="+", default=[-8, -10, -12, -14, -17, -20])
    args = ap.parse_args()

    t = time.time()
    ctx = PrecisionContext(args.digits)
    mp = ctx.mp
    model = level0_borel_model(args.terms, args.pade, args.pade, ctx)
    fit = stokes_jump_and_fit(args.x, model, ctx, quad_digits=args.quad_digits)
    for x, j in zip(args.x, fit.jumps):
        print(f"x = {x:7.2f}   jump = {mp.nstr(j, 12)}")
    A = action(ctx)
    amp = mp.power(2, mp.mpf(-11) / 8) * mp.power(3, mp.mpf(-1) / 8) / mp.sqrt(mp.pi)
    print(f"A fit  {mp.nstr(fit.A_fit, 10)}   exact {mp.nstr(A, 10)}   rel {mp.nstr(abs(fit.A_fit - A) / A, 3)}")
    print(f"p fit  {mp.nstr(fit.p_fit, 8)}   expected -0.125")
    print(f"|c|    {mp.nstr(abs(fit.c_fit), 8)}   expected {mp.nstr(amp, 8)}")
    print(f"{time.time() - t:.1f}s")


if __name__ == "__main__":
    main()
