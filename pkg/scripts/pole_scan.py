#!/usr/bin/env python3
"""Scan the negative real axis for poles of the lateral-sum solution, then find a planted one."""

import argparse
import time

from tronquee.borel import laplace_lateral, level0_borel_model
from tronquee.mpkernel import PrecisionContext
from tronquee.taylor import double_pole_data, scan_poles, trace_ray


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=60)
    ap.add_argument("--knots", type=float, nargs="+", default=[-50, -40, -30, -20, -10, -5])
    args = ap.parse_args()

    t = time.time()
    model = level0_borel_model(100, 40, 40, PrecisionContext(150))
    ctx = PrecisionContext(args.digits)
    mp = ctx.mp
    # inward integration magnifies rounding by e^{A dw}; restarting at each knot keeps it bounded
    for a, b in zip(args.knots, args.knots[1:]):
        s = laplace_lateral(model, a, "above", ctx)
        found = scan_poles(a, b, s.value, s.derivative, ctx)
        print(f"[{a:6.1f}, {b:6.1f}]  poles: {[mp.nstr(p.location, 8) for p in found]}")

    pole = mp.mpc("-3.2", "0.15")
    x0 = pole + mp.mpf("0.4")
    y, yp = double_pole_data(pole, "0.7", x0, ctx)
    tr = trace_ray(x0, -2, y, yp, ctx)
    print(f"planted pole at {mp.nstr(pole, 6)}")
    for rep in scan_poles(-2, "-4.5", tr.y, tr.yprime, ctx):
        tag = "planted" if abs(rep.location - pole) < 1e-6 else "further pole of the same solution"
        print(f"  found {mp.nstr(rep.location, 15)}, leading coefficient {mp.nstr(rep.leading_coefficient, 12)}  ({tag})")
    print(f"{time.time() - t:.1f}s")


if __name__ == "__main__":
    main()
