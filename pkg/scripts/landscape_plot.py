#!/usr/bin/env python3
"""Sign of Re g in the lambda plane with the steepest lines through the stationary points."""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from tronquee.cli import parse_angle  # noqa: E402
from tronquee.mpkernel import PrecisionContext  # noqa: E402
from tronquee.rh.phase import landscape_raster, make_gcontext, stationary_directions, steepest_path  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--phi", default="pi")
    ap.add_argument("--resolution", type=int, default=121)
    ap.add_argument("--out", default="landscape.png")
    args = ap.parse_args()

    ctx = PrecisionContext(20)
    gc = make_gcontext(parse_angle(args.phi, ctx), ctx)
    rows = landscape_raster(gc, (-2, 2, -2, 2), (args.resolution, args.resolution))
    n = args.resolution
    grid = [[0.0] * n for _ in range(n)]
    for k, (_, _, s) in enumerate(rows):
        grid[k // n][k % n] = s
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(grid, origin="lower", extent=(-2, 2, -2, 2), cmap="RdBu_r", vmin=-1.5, vmax=1.5)
    for point, start in (("lambda0", gc.lambda0), ("minus2lambda0", -2 * gc.lambda0)):
        for kind, colour in (("descent", "k"), ("ascent", "0.5")):
            for h in stationary_directions(gc, point, kind):
                path = steepest_path(gc, start, h, kind=kind, length=3.0, max_abs=2.9)
                ax.plot([float(p.real) for p in path.points], [float(p.imag) for p in path.points], colour, lw=1)
    ax.plot([float(gc.lambda0.real), float(-2 * gc.lambda0.real)], [float(gc.lambda0.imag), float(-2 * gc.lambda0.imag)], "ko")
    ax.set_xlim(-2, 2)
    ax.set_ylim(-2, 2)
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title(f"sign Re g, phi = {args.phi}")
    fig.savefig(args.out, dpi=120, bbox_inches="tight")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
