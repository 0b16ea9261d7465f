"""Taylor-series integration of y'' = 6y^2 + x in the complex plane.

Local solutions are power series about a centre c,

    y(c + t) = sum_j c_j t^j,   (j+2)(j+1) c_{j+2} = 6 sum_m c_m c_{j-m} + c [j=0] + [j=1],

stepped along straight segments.  The step is the smaller of half the
estimated radius of convergence and the length at which the last two kept
terms fall below the per-step tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ComputationError, DataError, NumericOverflowError, PoleEncountered
from .mpkernel import PrecisionContext, to_cx

STEP_SAFETY = 0.5
COLLAPSE_FRACTION = 1e-3
MAX_STEPS = 200000
OVERFLOW_LIMIT = 1e100


@dataclass(frozen=True)
class TaylorDisk:
    center: object
    coeffs: list
    radius_est: object

    def evaluate(self, x):
        """(y, y') at x by Horner's rule."""
        t = x - self.center
        c = self.coeffs
        y = c[-1]
        dy = 0 * y
        for j in range(len(c) - 2, -1, -1):
            dy = dy * t + y
            y = y * t + c[j]
        return y, dy


@dataclass(frozen=True)
class RaySegment:
    start: object
    end: object
    steps: list = field(default_factory=list)


@dataclass(frozen=True)
class RayTrace:
    segment: RaySegment
    y: object
    yprime: object
    error_bound: object


def default_order(ctx: PrecisionContext) -> int:
    return max(24, ctx.digits // 2)


def _radius(coeffs, mp):
    K = len(coeffs) - 1
    lo = max(2, (3 * K) // 4)
    best = None
    for j in range(lo, K + 1):
        a = abs(coeffs[j])
        if a == 0:
            continue
        r = a ** (-mp.mpf(1) / j)
        best = r if best is None else min(best, r)
    return mp.inf if best is None else best


def taylor_coefficients(center, y, yprime, K: int, mp) -> list:
    c = [mp.mpc(y), mp.mpc(yprime)]
    for j in range(K - 1):
        acc = 6 * sum((c[m] * c[j - m] for m in range(j + 1)), mp.mpc(0))
        if j == 0:
            acc += center
        elif j == 1:
            acc += 1
        c.append(acc / ((j + 2) * (j + 1)))
    return c


def local_taylor(center, y, yprime, K: int, ctx: PrecisionContext) -> TaylorDisk:
    """Taylor coefficients c_0..c_K of the solution through (center, y, y')."""
    if K < 8:
        raise DataError("Taylor order K must be >= 8")
    mp = ctx.mp
    center = to_cx(center, ctx)
    c = taylor_coefficients(center, to_cx(y, ctx), to_cx(yprime, ctx), K, mp)
    return TaylorDisk(center=center, coeffs=c, radius_est=_radius(c, mp))


def recurrence_residual(disk: TaylorDisk, mp) -> object:
    """Largest relative defect of the Taylor recurrence over the stored orders."""
    c = disk.coeffs
    worst = mp.mpf(0)
    for j in range(len(c) - 2):
        conv = [c[m] * c[j - m] for m in range(j + 1)]
        rhs = 6 * sum(conv, mp.mpc(0)) + (disk.center if j == 0 else 0) + (1 if j == 1 else 0)
        lhs = (j + 2) * (j + 1) * c[j + 2]
        scale = abs(lhs) + 6 * sum(abs(v) for v in conv) + (abs(disk.center) if j == 0 else 0) + (1 if j == 1 else 0)
        if scale:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def _step(disk, remaining, tol, mp, safety):
    c = disk.coeffs
    K = len(c) - 1
    h = min(abs(remaining), safety * disk.radius_est)
    for j in (K - 1, K):
        a = abs(c[j])
        if a:
            h = min(h, (tol / (4 * K * a)) ** (mp.mpf(1) / (j - 1)))
    ratio = h / disk.radius_est if disk.radius_est != mp.inf else 0
    err = 2 * (abs(c[K - 1]) * h ** (K - 1) + abs(c[K]) * h ** K) / (1 - min(ratio, mp.mpf(0.9)))
    return h, err * max(1, K / h) if h else err


def trace_ray(start, end, y, yprime, ctx: PrecisionContext, K: int | None = None,
              safety=STEP_SAFETY, keep_disks: bool = False) -> RayTrace:
    """Integrate along the straight segment start -> end."""
    mp = ctx.mp
    start, end = to_cx(start, ctx), to_cx(end, ctx)
    y, yprime = to_cx(y, ctx), to_cx(yprime, ctx)
    K = default_order(ctx) if K is None else K
    if K < 8:
        raise DataError("Taylor order K must be >= 8")
    length = abs(end - start)
    tol = mp.mpf(10) ** (-(ctx.digits + 5))
    disks = []
    total_err = mp.mpf(0)
    x = start
    if length == 0:
        return RayTrace(RaySegment(start, end, disks), y, yprime, total_err)
    direction = (end - start) / length
    travelled = mp.mpf(0)
    for _ in range(MAX_STEPS):
        remaining = length - travelled
        if remaining <= length * mp.mpf(10) ** (-ctx.dps + 2):
            break
        c = taylor_coefficients(x, y, yprime, K, mp)
        disk = TaylorDisk(center=x, coeffs=c, radius_est=_radius(c, mp))
        if keep_disks:
            disks.append(disk)
        if disk.radius_est < COLLAPSE_FRACTION * length:
            raise PoleEncountered(
                f"radius of convergence collapsed near x = {mp.nstr(x, 8)}",
                location=x + pole_offset(disk, mp),
                state=(x, y, yprime),
            )
        h, err = _step(disk, remaining, tol, mp, safety)
        if h >= remaining:
            h = remaining
            xn = end
        else:
            xn = x + h * direction
        y, yprime = disk.evaluate(xn)
        if not (mp.isfinite(y) and mp.isfinite(yprime)) or abs(y) > OVERFLOW_LIMIT:
            raise NumericOverflowError(f"solution overflowed near x = {mp.nstr(xn, 8)}")
        total_err += err
        travelled += h
        x = xn
    else:
        raise ComputationError("step budget exhausted along the segment")
    return RayTrace(RaySegment(start, end, disks), y, yprime, total_err)


def integrate_ray(start, end, y, yprime, ctx: PrecisionContext, K: int | None = None):
    """(y, y') at ``end`` given (y, y') at ``start``."""
    tr = trace_ray(start, end, y, yprime, ctx, K=K)
    return tr.y, tr.yprime


def hamiltonian(x, y, yprime):
    """H = (y')^2/2 - 2y^3 - xy; along solutions dH/dx = -y."""
    return yprime * yprime / 2 - 2 * y ** 3 - x * y


# ----------------------------------------------------------------------------
# Z5 symmetry


def z5_map(disk: TaylorDisk, ctx: PrecisionContext) -> TaylorDisk:
    """v(x) = w^{-2} y(x / w), w = e^{2 pi i/5}, as a disk centred at w * center."""
    mp = ctx.mp
    om = mp.expjpi(mp.mpf(2) / 5)
    inv = 1 / om
    coeffs = []
    f = inv * inv
    for cj in disk.coeffs:
        coeffs.append(f * cj)
        f *= inv
    return TaylorDisk(center=om * disk.center, coeffs=coeffs, radius_est=disk.radius_est)


def z5_symmetry_check(disk: TaylorDisk, ctx: PrecisionContext):
    """Recurrence residual of the rotated disk; rounding level when the symmetry holds."""
    return recurrence_residual(z5_map(disk, ctx), ctx.mp)


# ----------------------------------------------------------------------------
# poles


def pole_offset(disk: TaylorDisk, mp):
    """Offset to the nearest singularity assuming it is a double pole.

    For y = (a - x)^{-2} the coefficients about c are (j+1)/d^{j+2}, d = a - c,
    so d = c_j / c_{j+1} * (j+2)/(j+1).
    """
    c = disk.coeffs
    j = len(c) - 2
    if c[j + 1] == 0:
        return mp.inf
    return c[j] / c[j + 1] * mp.mpf(j + 2) / (j + 1)


def _pole_candidate(disk, mp):
    c = disk.coeffs
    K = len(c) - 1
    if c[K] == 0 or c[K - 1] == 0:
        return None
    d1 = c[K - 1] / c[K] * mp.mpf(K + 1) / K
    d0 = c[K - 2] / c[K - 1] * mp.mpf(K) / (K - 1)
    if abs(d1 - d0) > mp.mpf("0.02") * abs(d1):
        return None
    return disk.center + d1


def laurent_double_pole(a, h, order: int, ctx: PrecisionContext) -> list:
    """Laurent coefficients b_{-2..order} of the PI solution with a pole at a.

    b_{-2} = 1, b_2 = -a/10, b_3 = -1/6 and b_4 = h is the free constant.
    """
    mp = ctx.mp
    a = to_cx(a, ctx)
    b = {-2: mp.mpc(1)}
    for k in range(-1, order + 1):
        if k == 4:
            b[k] = to_cx(h, ctx)
            continue
        conv = sum((b[i] * b[k - 2 - i] for i in range(k + 1) if i in b and (k - 2 - i) in b and i != -2 and k - 2 - i != -2), mp.mpc(0))
        # the two terms pairing b_{-2} with b_k are moved to the left side
        rhs = 6 * conv + (a if k == 2 else 0) + (1 if k == 3 else 0)
        b[k] = rhs / (k * (k - 1) - 12)
    return [b[k] for k in range(-2, order + 1)]


def double_pole_data(a, h, x0, ctx: PrecisionContext, order: int = 60):
    """(y, y') at x0 from the Laurent series about a pole at a (|x0 - a| small)."""
    mp = ctx.mp
    b = laurent_double_pole(a, h, order, ctx)
    t = to_cx(x0, ctx) - to_cx(a, ctx)
    y = mp.mpc(0)
    dy = mp.mpc(0)
    for idx, bk in enumerate(b):
        k = idx - 2
        y += bk * t ** k
        if k:
            dy += k * bk * t ** (k - 1)
    return y, dy


@dataclass(frozen=True)
class PoleReport:
    location: object
    leading_coefficient: object
    fit_residual: object


def refine_pole(x, y, yprime, guess, ctx: PrecisionContext, final_distance=1e-3) -> PoleReport:
    """Walk towards a double pole and sharpen it with a = x + 2y/y'.

    Near a pole y^{-1/2} = (x - a)(1 + O((x - a)^4)), so the Newton step on
    y^{-1/2} is accurate to fifth order in the distance.
    """
    mp = ctx.mp
    a = guess
    r = abs(x - a)
    target = mp.mpf(final_distance)
    while r > target:
        r = max(r / 4, target)
        dest = a + r * (x - a) / abs(x - a)
        tr = trace_ray(x, dest, y, yprime, ctx)
        x, y, yprime = dest, tr.y, tr.yprime
        a = x + 2 * y / yprime
    t = x - a
    lead = y * t * t
    # Laurent form with b_2 = -a/10, b_3 = -1/6 (b_4 contributes at t^6)
    model = 1 - a * t ** 4 / 10 - t ** 5 / 6
    return PoleReport(location=a, leading_coefficient=lead, fit_residual=abs(lead - model))


def _line_geometry(p, x, direction, mp):
    t = mp.re((p - x) * mp.conj(direction))
    return t, abs(p - (x + t * direction))


def _arc(x, y, yprime, centre, x_out, ctx, pieces=16):
    mp = ctx.mp
    r = abs(x - centre)
    th0 = mp.arg(x - centre)
    dth = mp.arg((x_out - centre) / (x - centre))
    for k in range(1, pieces + 1):
        nxt = centre + r * mp.expj(th0 + dth * k / pieces) if k < pieces else x_out
        tr = trace_ray(x, nxt, y, yprime, ctx)
        x, y, yprime = nxt, tr.y, tr.yprime
    return x, y, yprime


def scan_poles(start, end, y, yprime, ctx: PrecisionContext, margin=0.5, max_poles: int = 50) -> list:
    """Validated double poles within ``margin`` of the segment, as PoleReport."""
    mp = ctx.mp
    start, end = to_cx(start, ctx), to_cx(end, ctx)
    y, yprime = to_cx(y, ctx), to_cx(yprime, ctx)
    margin = mp.mpf(margin)
    found: list[PoleReport] = []
    rejected: list = []
    K = default_order(ctx)
    tol = mp.mpf(10) ** (-(ctx.digits + 5))
    x = start
    length = abs(end - start)
    if length == 0:
        return found
    direction = (end - start) / length
    for _ in range(MAX_STEPS):
        remaining = abs(end - x)
        if remaining <= length * mp.mpf(10) ** (-ctx.dps + 2) or len(found) >= max_poles:
            break
        c = taylor_coefficients(x, y, yprime, K, mp)
        disk = TaylorDisk(center=x, coeffs=c, radius_est=_radius(c, mp))
        cand = _pole_candidate(disk, mp)
        if cand is not None:
            known = any(abs(cand - p) < abs(cand - x) / 10 for p in [f.location for f in found] + rejected)
            t, d = _line_geometry(cand, x, direction, mp)
            if not known and -margin < t < remaining + margin and d < margin:
                try:
                    rep = refine_pole(x, y, yprime, cand, ctx)
                except (PoleEncountered, NumericOverflowError):
                    rep = None
                if rep is not None and abs(rep.leading_coefficient - 1) < mp.mpf("1e-2"):
                    found.append(rep)
                else:
                    rejected.append(cand)
                continue
        # an accepted pole ahead and close to the line is passed on an arc of radius margin
        ahead = None
        for p in found:
            t, d = _line_geometry(p.location, x, direction, mp)
            if t > 0 and d < margin and abs(p.location - x) <= 2 * margin:
                ahead = (p.location, t, d)
                break
        if ahead is not None:
            a, t, d = ahead
            half = mp.sqrt(margin * margin - d * d) if d < margin else mp.mpf(0)
            if t + half >= remaining:
                break  # end point sits inside the exclusion circle
            x_in, x_out = x + (t - half) * direction, x + (t + half) * direction
            if t - half > 0:
                tr = trace_ray(x, x_in, y, yprime, ctx)
                x, y, yprime = x_in, tr.y, tr.yprime
            x, y, yprime = _arc(x, y, yprime, a, x_out, ctx)
            continue
        h, _ = _step(disk, remaining, tol, mp, STEP_SAFETY)
        xn = end if h >= remaining else x + h * direction
        y, yprime = disk.evaluate(xn)
        if not (mp.isfinite(y) and mp.isfinite(yprime)) or abs(y) > OVERFLOW_LIMIT:
            raise NumericOverflowError(f"solution overflowed near x = {mp.nstr(xn, 8)}")
        x = xn
    return found


def pole_scan(start, end, y, yprime, ctx: PrecisionContext, margin=0.5) -> list:
    """Locations of double poles met along the segment (empty when pole-free)."""
    return [p.location for p in scan_poles(start, end, y, yprime, ctx, margin=margin)]
