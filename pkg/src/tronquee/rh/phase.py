"""Phase function theta, the g-function, stationary points, landscapes and paths.

With u = lambda + 2 lambda_0 and principal branches in u,

    g(lambda) = (4/5) u^{5/2} - 4 lambda_0 u^{3/2},   lambda_0 = e^{i(phi - pi)/2} / sqrt 6,

so g' = 2 u^{1/2} (u - 3 lambda_0) vanishes at -2 lambda_0 and at lambda_0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..coeffs import action
from ..errors import BranchError, DomainError, TracingError
from ..mpkernel import PrecisionContext, pow_principal, to_cx


@dataclass(frozen=True)
class GContext:
    phi: object
    lambda0: object
    g0: object
    prec: PrecisionContext

    @property
    def mp(self):
        return self.prec.mp


def make_gcontext(phi, ctx: PrecisionContext) -> GContext:
    """Build the g-function data for arg x = phi in [3 pi/5, pi]."""
    mp = ctx.mp
    phi = mp.mpf(phi)
    slack = mp.mpf(10) ** (-ctx.digits + 5)
    if phi < 3 * mp.pi / 5 - slack or phi > mp.pi + slack:
        raise DomainError("phi must lie in [3 pi/5, pi]")
    lam0 = mp.expj((phi - mp.pi) / 2) / mp.sqrt(6)
    g0 = -(24 * mp.sqrt(3) / 5) * pow_principal(lam0, Fraction(5, 2), ctx)
    gc = GContext(phi=phi, lambda0=lam0, g0=g0, prec=ctx)
    tol = mp.mpf(10) ** (-(ctx.digits - 5))
    if abs(g_eval(gc, -2 * lam0)) > tol:
        raise DomainError("g(-2 lambda_0) does not vanish")
    if abs(g_eval(gc, lam0) - g0) > tol:
        raise DomainError("g(lambda_0) disagrees with g_0")
    # 2 t g0 = -A (-x)^{5/4} with t = |x|^{5/4}: compare at |x| = 1
    w = mp.expj(mp.mpf(5) / 4 * (phi - mp.pi))
    if abs(2 * g0 + action(ctx) * w) > tol:
        raise DomainError("2 g_0 disagrees with -A (-x)^{5/4}")
    return gc


def _u_roots(gc: GContext, lam, side):
    mp = gc.mp
    u = mp.mpc(lam) + 2 * gc.lambda0
    on_cut = abs(mp.im(u)) <= abs(u) * gc.prec.tol and mp.re(u) < 0
    if on_cut:
        if side is None:
            raise BranchError("g evaluated on its branch cut; pass side='+' or '-'")
        r = mp.sqrt(-mp.re(u))
        su = mp.mpc(0, r) if side == "+" else mp.mpc(0, -r)
        return mp.mpc(mp.re(u), 0), su
    return u, mp.sqrt(u)


def g_eval(gc: GContext, lam, side=None):
    """g(lambda); on the cut through -2 lambda_0 a side ('+' above) must be given."""
    u, su = _u_roots(gc, lam, side)
    return (mp_c(gc, 4) / 5) * u * u * su - 4 * gc.lambda0 * u * su


def g_prime(gc: GContext, lam, side=None):
    u, su = _u_roots(gc, lam, side)
    return 2 * su * (u - 3 * gc.lambda0)


def mp_c(gc, v):
    return gc.mp.mpf(v)


def theta_eval(phi, lam, ctx: PrecisionContext):
    """theta(lambda) = (4/5) lambda^{5/2} + e^{i phi} lambda^{1/2}, principal branches."""
    mp = ctx.mp
    lam = to_cx(lam, ctx)
    s = mp.sqrt(lam)
    return mp.mpf(4) / 5 * lam * lam * s + mp.expj(mp.mpf(phi)) * s


def stationary_points(gc: GContext):
    """(lambda_+, lambda_-) of theta and lambda_0 of g."""
    mp = gc.mp
    lp = mp.expj((gc.phi - mp.pi) / 2) / 2
    tol = mp.mpf(10) ** (-(gc.prec.digits - 5))
    if abs(g_prime(gc, gc.lambda0)) > tol:
        raise DomainError("g' does not vanish at lambda_0")
    return lp, -lp, gc.lambda0


def landscape_raster(gc: GContext, window, resolution):
    """Rows (Re lambda, Im lambda, sign Re g) on a uniform grid.

    ``window`` = (xmin, xmax, ymin, ymax), ``resolution`` = (nx, ny).  Points on
    the cut use the upper boundary value.
    """
    mp = gc.mp
    xmin, xmax, ymin, ymax = (mp.mpf(v) for v in window)
    nx, ny = resolution
    if nx < 2 or ny < 2:
        raise DomainError("resolution must be at least 2 x 2")
    tol = gc.prec.tol * 100
    rows = []
    for j in range(ny):
        y = ymin + (ymax - ymin) * j / (ny - 1)
        for i in range(nx):
            x = xmin + (xmax - xmin) * i / (nx - 1)
            lam = mp.mpc(x, y)
            if abs(lam + 2 * gc.lambda0) == 0:
                sign = 0
            else:
                v = mp.re(g_eval(gc, lam, side="+"))
                sign = 0 if abs(v) <= tol * max(1, abs(lam) ** 2.5) else (1 if v > 0 else -1)
            rows.append((x, y, sign))
    return rows


# ----------------------------------------------------------------------------
# steepest descent / ascent lines


def stationary_directions(gc: GContext, point: str, kind: str = "descent"):
    """Exact initial headings of the steepest lines leaving a stationary point.

    Near lambda_0, g - g0 ~ sqrt(3 lambda_0) (lambda - lambda_0)^2 (two lines
    of each kind); near -2 lambda_0, g ~ -4 lambda_0 u^{3/2} (three of each).
    Headings are returned as angles in (-pi, pi], sorted.
    """
    mp = gc.mp
    if kind not in ("descent", "ascent"):
        raise DomainError("kind must be 'descent' or 'ascent'")
    target = mp.pi if kind == "descent" else mp.mpf(0)  # arg of g - g(point)
    out = []
    if point == "lambda0":
        c = mp.sqrt(3 * gc.lambda0)
        for m in range(2):
            out.append((target - mp.arg(c) + 2 * mp.pi * m) / 2)
    elif point == "minus2lambda0":
        c = -4 * gc.lambda0
        for m in range(-2, 3):
            th = (target - mp.arg(c) + 2 * mp.pi * m) * 2 / 3
            if -mp.pi < th <= mp.pi:
                out.append(th)
    else:
        raise DomainError("point must be 'lambda0' or 'minus2lambda0'")
    norm = []
    for th in out:
        while th <= -mp.pi:
            th += 2 * mp.pi
        while th > mp.pi:
            th -= 2 * mp.pi
        norm.append(th)
    return sorted(norm)


@dataclass(frozen=True)
class SteepestPath:
    points: list
    level: object  # Im g held fixed
    segments: list  # index ranges [i0, i1] with monotone Re g


def steepest_path(gc: GContext, start, heading, kind="descent", step=0.02, length=3.0, max_abs=10.0) -> SteepestPath:
    """Trace Im g = Im g(start) from ``start`` leaving at angle ``heading``.

    Predictor: one step along -conj(g')/|g'| (descent) or +conj(g')/|g'|
    (ascent).  Corrector: Newton steps normal to the level line.  When the
    line runs into the other stationary point it is continued straight
    through it; Re g is monotone on each piece and the switch is recorded.
    """
    mp = gc.mp
    start = mp.mpc(start)
    h = mp.mpf(step)
    sign = -1 if kind == "descent" else 1
    level = mp.im(g_eval(gc, start, side="+"))
    tol = mp.mpf(10) ** (-(gc.prec.digits - 8))
    stationary = [gc.lambda0, -2 * gc.lambda0]
    pts = [start]
    x = start + h * mp.expj(heading)
    x = _correct(gc, x, level, tol)
    pts.append(x)
    segments = []
    seg_start = 0
    travelled = h
    visited = [start]
    while travelled < length and abs(x) < max_abs:
        gp = g_prime(gc, x, side="+")
        near = [p for p in stationary if abs(p - x) < 1.5 * h and all(abs(p - v) > h / 2 for v in visited)]
        if near:
            p = near[0]
            visited.append(p)
            d = (p - pts[-2]) / abs(p - pts[-2])
            pts[-1] = p
            segments.append((seg_start, len(pts) - 1))
            seg_start = len(pts) - 1
            x = _correct(gc, p + h * d, level, tol)
            pts.append(x)
            sign = -sign
            travelled += h
            continue
        if abs(gp) == 0:
            raise TracingError("hit a stationary point away from the known ones")
        d = sign * mp.conj(gp) / abs(gp)
        # keep heading consistent with the previous step
        prev = pts[-1] - pts[-2]
        if mp.re(d * mp.conj(prev)) < 0:
            d = -d
        x = _correct(gc, x + h * d, level, tol)
        pts.append(x)
        travelled += h
    segments.append((seg_start, len(pts) - 1))
    path = SteepestPath(points=pts, level=level, segments=segments)
    _assert_monotone(gc, path)
    return path


def _correct(gc, x, level, tol, iters=30):
    mp = gc.mp
    for _ in range(iters):
        val = g_eval(gc, x, side="+")
        err = mp.im(val) - level
        if abs(err) <= tol * max(1, abs(val)):
            return x
        gp = g_prime(gc, x, side="+")
        if abs(gp) == 0:
            break
        x = x + (-err / abs(gp)) * (mp.mpc(0, 1) * mp.conj(gp) / abs(gp))
    raise TracingError("level-line corrector did not converge")


def _assert_monotone(gc, path: SteepestPath):
    mp = gc.mp
    slack = mp.mpf(10) ** (-(gc.prec.digits - 8))
    for i0, i1 in path.segments:
        vals = [mp.re(g_eval(gc, p, side="+")) for p in path.points[i0:i1 + 1]]
        if len(vals) < 2:
            continue
        inc = all(b >= a - slack for a, b in zip(vals, vals[1:]))
        dec = all(b <= a + slack for a, b in zip(vals, vals[1:]))
        if not (inc or dec):
            raise TracingError("Re g is not monotone along a traced segment")


# ----------------------------------------------------------------------------
# conformal map at -2 lambda_0


def conformal_f(gc: GContext, lam):
    """f = (-3g/2)^{2/3} written in the analytic form (6 l0)^{2/3} u (1 - u/(5 l0))^{2/3}.

    -3g/2 = 6 lambda_0 u^{3/2} (1 - u/(5 lambda_0)), so this is the branch that is
    analytic at u = 0 with f'(-2 lambda_0) = (6 lambda_0)^{2/3}.  Valid for
    |u| < 5 |lambda_0|.
    """
    mp = gc.mp
    u = mp.mpc(lam) + 2 * gc.lambda0
    if abs(u) >= 5 * abs(gc.lambda0):
        raise DomainError("conformal_f is only used inside |lambda + 2 lambda_0| < 5 |lambda_0|")
    third = Fraction(2, 3)
    return pow_principal(6 * gc.lambda0, third, gc.prec) * u * pow_principal(1 - u / (5 * gc.lambda0), third, gc.prec)
