#!/usr/bin/env python3
"""Closed-form vs quadrature residue data and the reconstructed coefficients across phi."""

import argparse
import time

from tronquee.cli import parse_angle
from tronquee.coeffs import amplitude_from_stokes
from tronquee.mpkernel import PrecisionContext, parse_complex
from tronquee.rh.phase import make_gcontext
from tronquee.rh.residues import chi_expansion, reconstruct, z_expansion


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=50)
    ap.add_argument("--phi", nargs="+", default=["3pi/5", "4pi/5", "pi"])
    ap.add_argument("--s-minus1", default="0+1i")
    args = ap.parse_args()

    ctx = PrecisionContext(args.digits)
    mp = ctx.mp
    s = parse_complex(args.s_minus1, ctx)
    amp = amplitude_from_stokes(s, ctx)
    want = {"y01": -mp.sqrt(6) / 48, "h01": mp.sqrt(6) / 32, "y10": amp.y10, "h10": amp.h10}
    for text in args.phi:
        t = time.time()
        gc = make_gcontext(parse_angle(text, ctx), ctx)
        zx = z_expansion(gc)
        cx = chi_expansion(gc, s)
        out = reconstruct(gc, s, verify=False)
        errs = "  ".join(f"{k} {mp.nstr(abs(out[k] - want[k]) / abs(want[k]), 2)}" for k in want)
        print(f"phi = {text:6s} lambda0 = {mp.nstr(gc.lambda0, 8)}  Z quad {mp.nstr(zx['quadrature_error'], 2)}  "
              f"chi quad {mp.nstr(cx['quadrature_error'], 2)}  |  {errs}  ({time.time() - t:.1f}s)")


if __name__ == "__main__":
    main()
