"""Command-line front end: every computation as a subcommand emitting JSON or CSV.

JSON output is one object ``{"command", "params", "digits", "rows"}`` where
``rows`` is a list of flat objects.  CSV output is a header row (the union of
row keys, in first-seen order) followed by one line per row.  Every row
carries a ``digits`` field.  Numbers are written as decimal strings so no
precision is lost in transit.

Exit codes: 0 success, 1 computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import ComputationError, DomainError
from .mpkernel import PrecisionContext, parse_complex

SUBCOMMANDS = (
    "coeffs", "hamiltonian", "instanton", "ratio", "borel", "stokes-fit", "ode-check",
    "landscape", "paths", "parametrix-check", "z-expansion", "chi-expansion", "reconstruct", "selftest",
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    digits: int = 60
    terms: int = 100
    phi: str = "pi"
    x: list = field(default_factory=list)
    x_from: float | None = None
    x_to: float | None = None
    x_count: int | None = None
    s_minus1: str = "0+1i"
    pade: tuple = (40, 40)
    epsilon: float = 0.15
    nodes: int | None = None
    delta: float | None = None
    output: str = "json"
    level: int = 1
    window: tuple = (-2.0, 2.0, -2.0, 2.0)
    resolution: tuple = (41, 41)
    step: float = 0.05
    length: float = 3.0

    def __post_init__(self):
        if self.digits < 15:
            raise UsageError("--digits must be >= 15")
        if self.terms < 1:
            raise UsageError("--terms must be >= 1")
        if self.output not in ("json", "csv"):
            raise UsageError("--output must be json or csv")

    def context(self) -> PrecisionContext:
        return PrecisionContext(self.digits)

    def phi_value(self, ctx):
        mp = ctx.mp
        phi = parse_angle(self.phi, ctx)
        slack = mp.mpf(10) ** (-ctx.digits + 5)
        if phi < 3 * mp.pi / 5 - slack or phi > mp.pi + slack:
            raise UsageError("--phi must lie in [3pi/5, pi]")
        return phi

    def x_samples(self, ctx, default):
        if self.x:
            return [ctx.mp.mpf(v) for v in self.x]
        if self.x_from is not None or self.x_to is not None:
            if self.x_from is None or self.x_to is None or not self.x_count or self.x_count < 1:
                raise UsageError("--x-from, --x-to and --x-count go together")
            a, b, n = ctx.mp.mpf(self.x_from), ctx.mp.mpf(self.x_to), self.x_count
            return [a] if n == 1 else [a + (b - a) * k / (n - 1) for k in range(n)]
        return [ctx.mp.mpf(v) for v in default]


_ANGLE = re.compile(r"^([+-]?\d*\.?\d*)\*?pi(?:/(\d+(?:\.\d*)?))?$")


def parse_angle(text: str, ctx):
    """Radians as a decimal, or multiples like ``pi``, ``3pi/5``, ``0.8*pi``."""
    mp = ctx.mp
    s = str(text).strip().replace(" ", "")
    m = _ANGLE.match(s)
    if m:
        k = m.group(1)
        coef = mp.mpf(1) if k in ("", "+") else mp.mpf(-1) if k == "-" else mp.mpf(k)
        den = mp.mpf(m.group(2)) if m.group(2) else mp.mpf(1)
        return coef * mp.pi / den
    try:
        return mp.mpf(s)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse angle {text!r}") from exc


# ----------------------------------------------------------------------------
# formatting


def _num(v, ctx):
    mp = ctx.mp
    return mp.nstr(mp.mpf(v), ctx.digits, strip_zeros=False) if v is not None else ""


def _cx(prefix, v, ctx):
    mp = ctx.mp
    v = mp.mpc(v)
    return {f"{prefix}_re": _num(v.real, ctx), f"{prefix}_im": _num(v.imag, ctx)}


def emit(command, params, rows, digits, fmt, stream):
    rows = [dict(r, digits=digits) for r in rows]
    if fmt == "json":
        json.dump({"command": command, "params": params, "digits": digits, "rows": rows}, stream, indent=1)
        stream.write("\n")
        return
    keys: list = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    w = csv.DictWriter(stream, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)


# ----------------------------------------------------------------------------
# subcommands


def cmd_coeffs(cfg, ctx):
    from .coeffs import level0_coeffs

    return [
        {"n": n, "q": str(c.q), "half_power": c.half_power, "decimal": _num(c.to_mp(ctx), ctx)}
        for n, c in enumerate(level0_coeffs(cfg.terms))
    ]


def cmd_hamiltonian(cfg, ctx):
    from .coeffs import hamiltonian_coeffs, level0_coeffs

    h = hamiltonian_coeffs(level0_coeffs(cfg.terms))
    return [{"n": n, "q": str(c.q), "half_power": c.half_power, "decimal": _num(c.to_mp(ctx), ctx)} for n, c in enumerate(h)]


def cmd_instanton(cfg, ctx):
    from .coeffs import instanton_coeffs, level0_series

    if cfg.level not in (1, 2):
        raise UsageError("--level must be 1 or 2")
    ser = instanton_coeffs(cfg.level, cfg.terms, level0_series(cfg.terms + 2), ctx)
    rows = [{"kind": "rate", "action": _num(ser.action, ctx), "prefactor_power": str(ser.prefactor_power)}]
    for j, c in enumerate(ser.coeffs):
        rows.append({"kind": "coefficient", "j": j, **_cx("value", c, ctx)})
    return rows


def cmd_ratio(cfg, ctx):
    from .coeffs import level0_coeffs, ratio_diagnostic, ratio_limit

    if cfg.terms < 10:
        raise UsageError("ratio needs --terms >= 10")
    lim = ratio_limit(ctx)
    r = ratio_diagnostic(level0_coeffs(cfg.terms + 1), cfg.terms, ctx)
    return [
        {"n": n, "ratio": _num(v, ctx), "limit": _num(lim, ctx), "rel_dev": _num(abs(v - lim) / lim, ctx)}
        for n, v in enumerate(r, start=1)
    ]


def cmd_borel(cfg, ctx):
    from .borel import level0_borel_model, nearest_singularity
    from .coeffs import action

    L, M = cfg.pade
    model = level0_borel_model(cfg.terms, L, M, ctx)
    rows = []
    for i, p in enumerate(model.poles):
        rows.append({"kind": "pole", "index": i, **_cx("sigma", p.sigma, ctx),
                     "residue_abs": _num(abs(p.residue), ctx), "spurious": int(p.spurious)})
    z = nearest_singularity(model, ctx)
    A = action(ctx)
    rows.append({"kind": "nearest", **_cx("sqrt_sigma", z, ctx), "action": _num(A, ctx),
                 "rel_err": _num(abs(z - A) / A, ctx)})
    return rows


def cmd_stokes_fit(cfg, ctx):
    from .borel import level0_borel_model, stokes_jump_and_fit
    from .coeffs import action, amplitude_from_stokes

    xs = cfg.x_samples(ctx, [-8, -10, -12, -14, -17, -20])
    L, M = cfg.pade
    model = level0_borel_model(cfg.terms, L, M, ctx)
    fit = stokes_jump_and_fit(xs, model, ctx, epsilon=cfg.epsilon)
    rows = [{"kind": "jump", "x": _num(x.real, ctx), **_cx("jump", J, ctx)} for x, J in zip(fit.window, fit.jumps)]
    A = action(ctx)
    ref = abs(amplitude_from_stokes(1j, ctx).y10)
    rows.append({"kind": "fit", "A_fit": _num(fit.A_fit, ctx), "A_ref": _num(A, ctx),
                 "p_fit": _num(fit.p_fit, ctx), "p_ref": "-0.125",
                 **_cx("c_fit", fit.c_fit, ctx), "c_abs_ref": _num(ref, ctx)})
    return rows


def cmd_ode_check(cfg, ctx):
    from .borel import level0_borel_model, laplace_lateral
    from .taylor import integrate_ray

    xs = cfg.x_samples(ctx, [-30, -10])
    if len(xs) != 2:
        raise UsageError("ode-check takes exactly two x values (start, end)")
    L, M = cfg.pade
    # the Pade solve loses digits to conditioning; build it well above the sums
    model = level0_borel_model(cfg.terms, L, M, PrecisionContext(max(150, 2 * cfg.digits)))
    a = laplace_lateral(model, xs[0], "above", ctx, cfg.epsilon)
    b = laplace_lateral(model, xs[1], "above", ctx, cfg.epsilon)
    y, yp = integrate_ray(xs[0], xs[1], a.value, a.derivative, ctx)
    diff = max(abs(y - b.value), abs(yp - b.derivative))
    return [
        {"kind": "lateral_start", "x": _num(xs[0], ctx), **_cx("y", a.value, ctx), **_cx("yp", a.derivative, ctx)},
        {"kind": "taylor_end", "x": _num(xs[1], ctx), **_cx("y", y, ctx), **_cx("yp", yp, ctx)},
        {"kind": "lateral_end", "x": _num(xs[1], ctx), **_cx("y", b.value, ctx), **_cx("yp", b.derivative, ctx)},
        {"kind": "difference", "abs_diff": _num(diff, ctx)},
    ]


def _gc(cfg, ctx):
    from .rh.phase import make_gcontext

    return make_gcontext(cfg.phi_value(ctx), ctx)


def cmd_landscape(cfg, ctx):
    from .rh.phase import landscape_raster

    gc = _gc(cfg, ctx)
    return [{"x": _num(x, ctx), "y": _num(y, ctx), "sign": s}
            for x, y, s in landscape_raster(gc, cfg.window, cfg.resolution)]


def cmd_paths(cfg, ctx):
    from .rh.phase import stationary_directions, steepest_path

    gc = _gc(cfg, ctx)
    rows = []
    pid = 0
    for name, start in (("minus2lambda0", -2 * gc.lambda0), ("lambda0", gc.lambda0)):
        for kind in ("descent", "ascent"):
            for th in stationary_directions(gc, name, kind):
                path = steepest_path(gc, start, th, kind, step=cfg.step, length=cfg.length)
                for i, p in enumerate(path.points):
                    rows.append({"path": pid, "origin": name, "kind": kind, "index": i,
                                 "re": _num(p.real, ctx), "im": _num(p.imag, ctx)})
                pid += 1
    return rows


def cmd_parametrix_check(cfg, ctx):
    from .rh.models import airy_jump_residual, airy_remainder_slope, erf_jump_residual

    mp = ctx.mp
    n = cfg.nodes or 50
    s = parse_complex(cfg.s_minus1, ctx)
    radii = [mp.mpf("0.2") + mp.mpf(6) * k / (n - 1) for k in range(n)] if n > 1 else [mp.mpf(1)]
    tol = mp.mpf(10) ** (-(ctx.digits - 8))
    rows = []
    for ray in ("pos", "up", "down", "neg"):
        worst = max(airy_jump_residual(ray, r, ctx) for r in radii)
        rows.append({"check": f"airy_jump_{ray}", "value": _num(worst, ctx), "target": _num(tol, ctx), "pass": int(worst <= tol)})
    ys = [mp.mpf(-5) + mp.mpf(10) * k / (n - 1) for k in range(n)] if n > 1 else [mp.mpf(1)]
    worst = max(erf_jump_residual(y, s, ctx) for y in ys)
    rows.append({"check": "erfc_jump", "value": _num(worst, ctx), "target": _num(tol, ctx), "pass": int(worst <= tol)})
    K = 3
    slope = airy_remainder_slope(K, ctx)
    want = -mp.mpf(3 * (K + 1)) / 2
    rows.append({"check": "airy_remainder_slope_K3", "value": _num(slope, ctx), "target": _num(want, ctx),
                 "pass": int(abs(slope - want) <= abs(want) * mp.mpf("0.05"))})
    return rows


def _laurent_rows(label, data, gc, ctx):
    from .rh.residues import _power

    num = data.numeric(gc.lambda0, gc.mp, _power(gc))
    rows = []
    names = ("11", "12", "21", "22")
    for n in sorted(data.terms):
        m = data.terms[n]
        vals = num.terms[n].entries()
        for k, (i, j) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
            if m[i][j] == 0:
                continue
            rows.append({"object": label, "order": n, "entry": names[k], "rational": str(m[i][j]),
                         "lambda0_power": str(data.lambda0_power(i, j, n)), **_cx("value", vals[k], ctx)})
    return rows


def cmd_z_expansion(cfg, ctx):
    from .rh.residues import z_expansion

    gc = _gc(cfg, ctx)
    zx = z_expansion(gc, n=cfg.nodes, delta=cfg.delta)
    ze = zx["exact"]
    rows = _laurent_rows("Z1", ze.z1_outside, gc, ctx) + _laurent_rows("Z2", ze.z2_outside, gc, ctx)
    for t_order, key in ((1, "zsup_t1"), (2, "zsup_t2")):
        m = zx[key]
        for name, v in zip(("11", "12", "21", "22"), m.entries()):
            rows.append({"object": f"Zsup_t^-{t_order}", "entry": name, **_cx("value", v, ctx)})
    rows.append({"object": "quadrature_rel_err", **_cx("value", zx["quadrature_error"], ctx)})
    return rows


def cmd_chi_expansion(cfg, ctx):
    from .rh.residues import chi_expansion

    gc = _gc(cfg, ctx)
    s = parse_complex(cfg.s_minus1, ctx)
    cx = chi_expansion(gc, s, n=cfg.nodes, delta=cfg.delta)
    rows = []
    for label, key in (("chi11_residue", "chi11_residue"), ("chi21_residue", "chi21_residue")):
        for name, v in zip(("11", "12", "21", "22"), cx[key].entries()):
            rows.append({"object": label, "entry": name, **_cx("value", v, ctx)})
    rows.append({"object": "quadrature_rel_err", **_cx("value", cx["quadrature_error"], ctx)})
    return rows


def cmd_reconstruct(cfg, ctx):
    from .coeffs import amplitude_from_stokes
    from .rh.residues import reconstruct

    mp = ctx.mp
    gc = _gc(cfg, ctx)
    s = parse_complex(cfg.s_minus1, ctx)
    r = reconstruct(gc, s, n=cfg.nodes, delta=cfg.delta)
    amp = amplitude_from_stokes(s, ctx)
    ref = {"y01": -mp.sqrt(6) / 48, "h01": mp.sqrt(6) / 32, "y10": amp.y10, "h10": amp.h10}
    rows = []
    for name in ("y01", "h01", "y10", "h10"):
        err = abs(r[name] - ref[name]) / abs(ref[name]) if ref[name] != 0 else abs(r[name])
        rows.append({"name": name, **_cx("value", r[name], ctx), **_cx("expected", ref[name], ctx),
                     "rel_err": _num(err, ctx)})
    return rows


def cmd_selftest(cfg, ctx):
    from .selftest import run_selftest

    return [{"check": name, "pass": int(ok), "detail": detail} for name, ok, detail in run_selftest(min(cfg.digits, 40))]


HANDLERS = {
    "coeffs": cmd_coeffs, "hamiltonian": cmd_hamiltonian, "instanton": cmd_instanton, "ratio": cmd_ratio,
    "borel": cmd_borel, "stokes-fit": cmd_stokes_fit, "ode-check": cmd_ode_check, "landscape": cmd_landscape,
    "paths": cmd_paths, "parametrix-check": cmd_parametrix_check, "z-expansion": cmd_z_expansion,
    "chi-expansion": cmd_chi_expansion, "reconstruct": cmd_reconstruct, "selftest": cmd_selftest,
}


# ----------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--digits", type=int, default=60)
    common.add_argument("--terms", type=int, default=100)
    common.add_argument("--phi", default="pi", help="radians; accepts pi, 3pi/5, 0.8*pi")
    common.add_argument("--x", type=float, action="append", default=[])
    common.add_argument("--x-from", type=float)
    common.add_argument("--x-to", type=float)
    common.add_argument("--x-count", type=int)
    common.add_argument("--s-minus1", default="0+1i", help='complex literal "a+bi"')
    common.add_argument("--pade", type=int, nargs=2, metavar=("L", "M"), default=[40, 40])
    common.add_argument("--epsilon", type=float, default=0.15)
    common.add_argument("--nodes", type=int)
    common.add_argument("--delta", type=float, help="disc radius as a fraction of |lambda_0|")
    common.add_argument("--output", choices=["json", "csv"], default="json")
    common.add_argument("--out-file")
    common.add_argument("--level", type=int, default=1)
    common.add_argument("--window", type=float, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"),
                        default=[-2.0, 2.0, -2.0, 2.0])
    common.add_argument("--resolution", type=int, nargs=2, metavar=("NX", "NY"), default=[41, 41])
    common.add_argument("--step", type=float, default=0.05)
    common.add_argument("--length", type=float, default=3.0)
    parser = _Parser(prog="tronquee", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(ns) -> RunConfig:
    return RunConfig(
        digits=ns.digits, terms=ns.terms, phi=ns.phi, x=list(ns.x), x_from=ns.x_from, x_to=ns.x_to,
        x_count=ns.x_count, s_minus1=ns.s_minus1, pade=tuple(ns.pade), epsilon=ns.epsilon, nodes=ns.nodes,
        delta=ns.delta, output=ns.output, level=ns.level, window=tuple(ns.window),
        resolution=tuple(ns.resolution), step=ns.step, length=ns.length,
    )


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
        if ns.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(SUBCOMMANDS))
        cfg = config_from_args(ns)
        ctx = cfg.context()
        rows = HANDLERS[ns.command](cfg, ctx)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except (ComputationError, ZeroDivisionError, OverflowError) as exc:
        print(f"computation error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(cfg).items()}
    buf = io.StringIO()
    emit(ns.command, params, rows, cfg.digits, cfg.output, buf)
    if ns.out_file:
        with open(ns.out_file, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    if ns.command == "selftest" and not all(r["pass"] for r in rows):
        return 1
    return 0


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
