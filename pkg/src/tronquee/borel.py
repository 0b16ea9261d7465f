"""Borel-Pade-Laplace summation of the level-0 series and the lateral Stokes jump.

Variables: s = -x, w = s^{5/4}.  The level-0 series is
(s/6)^{1/2} (1 + sum_{n>=1} y_{0,n} w^{-2n}); the Laplace dual of w^{-2n} is
zeta^{2n-1}/(2n-1)!, so the Borel function is B(zeta) = zeta * G(zeta^2) with

    G(sigma) = sum_{n>=1} y_{0,n} sigma^{n-1} / (2n-1)!.

G is approximated by a Pade approximant in sigma.  The first singularity of
B sits at zeta = A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (ContourError, DataError, DegeneracyError, DomainError,
                     InconclusiveError, SignalUnderflowError)
from .mpkernel import PrecisionContext, neg_x_power, to_cx

DEFAULT_EPSILON = 0.15
GL_NODES = 24
MAX_PANEL_DEPTH = 24
# absolute accuracy target for the lateral sums inside the Stokes fit
STOKES_QUAD_DIGITS = 60


@dataclass(frozen=True)
class PadePole:
    sigma: object
    residue: object
    spurious: bool

    @property
    def zeta(self):
        """The pole seen in the zeta plane (principal square root)."""
        return self.sigma.context.sqrt(self.sigma)


@dataclass(frozen=True)
class BorelPadeModel:
    sigma_coeffs: list
    pade_num: list
    pade_den: list
    poles: list = field(default_factory=list)
    L: int = 0
    M: int = 0

    def G(self, sigma, mp):
        num = mp.polyval(self.pade_num[::-1], sigma)
        den = mp.polyval(self.pade_den[::-1], sigma)
        return num / den

    def B(self, zeta, mp):
        return zeta * self.G(zeta * zeta, mp)

    def reexpansion(self, order: int, mp) -> list:
        """Taylor coefficients of num/den through ``order``."""
        out = []
        den = self.pade_den
        for k in range(order + 1):
            acc = self.pade_num[k] if k < len(self.pade_num) else mp.mpf(0)
            for j in range(1, min(k, len(den) - 1) + 1):
                acc -= den[j] * out[k - j]
            out.append(acc / den[0])
        return out

    def genuine_poles(self):
        return [p for p in self.poles if not p.spurious]


@dataclass(frozen=True)
class LateralSum:
    x: object
    side: str
    value: object
    derivative: object
    tail_bound: object


@dataclass(frozen=True)
class StokesFit:
    A_fit: object
    p_fit: object
    c_fit: object
    window: list
    jumps: list = field(default_factory=list)


def borel_transform(y_coeffs, N: int, ctx: PrecisionContext) -> list:
    """sigma_coeffs[n-1] = y_{0,n} / (2n-1)! for n = 1..N."""
    if N < 20:
        raise DataError("Borel transform needs N >= 20")
    if len(y_coeffs) < N + 1:
        raise DataError(f"need y_0,0..{N}, got {len(y_coeffs)} coefficients")
    mp = ctx.mp
    out = []
    fact = mp.mpf(1)  # (2n-1)!
    for n in range(1, N + 1):
        if n > 1:
            fact *= (2 * n - 2) * (2 * n - 1)
        c = y_coeffs[n]
        if hasattr(c, "to_mp"):
            c = c.to_mp(ctx)
        elif isinstance(c, Fraction):
            c = mp.mpf(c.numerator) / c.denominator
        out.append(mp.mpmathify(c) / fact)
    return out


def pade(sigma_coeffs, L: int, M: int, ctx: PrecisionContext, spurious_threshold=None) -> BorelPadeModel:
    """[L/M] Pade approximant with den(0) = 1, plus its poles and residues.

    Poles whose residue magnitude falls below ``spurious_threshold`` (default
    10^{-digits/2}) are flagged spurious: they are pole-zero doublets rather
    than structure of the underlying function.
    """
    mp = ctx.mp
    if L < 0 or M < 0:
        raise DataError("Pade orders must be non-negative")
    if L + M + 1 > len(sigma_coeffs):
        raise DataError(f"[{L}/{M}] needs {L + M + 1} coefficients, got {len(sigma_coeffs)}")
    a = [mp.mpmathify(c) for c in sigma_coeffs]
    if M == 0:
        q = [mp.mpf(1)]
    else:
        mat = mp.matrix(M, M)
        rhs = mp.matrix(M, 1)
        for k in range(1, M + 1):
            for j in range(1, M + 1):
                idx = L + k - j
                mat[k - 1, j - 1] = a[idx] if idx >= 0 else 0
            rhs[k - 1] = -a[L + k]
        try:
            sol = mp.lu_solve(mat, rhs)
        except ZeroDivisionError as exc:
            raise DegeneracyError(f"Pade [{L}/{M}] system is singular; reduce L, M") from exc
        q = [mp.mpf(1)] + [sol[i] for i in range(M)]
    p = [sum((q[j] * a[i - j] for j in range(min(i, M) + 1)), mp.mpf(0)) for i in range(L + 1)]

    if spurious_threshold is None:
        spurious_threshold = mp.mpf(10) ** (-(ctx.digits // 2))
    poles = []
    if M > 0:
        qr = q[::-1]
        while len(qr) > 1 and qr[0] == 0:
            qr = qr[1:]
        if len(qr) > 1:
            try:
                roots = mp.polyroots(qr, maxsteps=200, extraprec=max(2 * ctx.dps, 100))
            except mp.NoConvergence as exc:
                raise DegeneracyError(f"denominator roots of [{L}/{M}] did not converge") from exc
            dq = [k * q[k] for k in range(1, len(q))]
            for r in sorted(roots, key=abs):
                res = mp.polyval(p[::-1], r) / mp.polyval(dq[::-1], r)
                poles.append(PadePole(sigma=mp.mpc(r), residue=mp.mpc(res), spurious=abs(res) < spurious_threshold))
    return BorelPadeModel(sigma_coeffs=a, pade_num=p, pade_den=q, poles=poles, L=L, M=M)


def nearest_singularity(model: BorelPadeModel, ctx: PrecisionContext):
    """sqrt(sigma*) of the smallest non-spurious pole: the Borel singularity estimate."""
    good = model.genuine_poles()
    if not good:
        raise InconclusiveError("every Pade pole is flagged spurious")
    best = min(good, key=lambda p: abs(p.sigma))
    return ctx.mp.sqrt(best.sigma)


# ----------------------------------------------------------------------------
# Gauss-Legendre quadrature along a ray


_GL_CACHE: dict = {}


def gauss_legendre(n: int, mp):
    """Nodes and weights on [-1, 1] by Newton iteration on P_n."""
    key = (n, mp.prec)
    hit = _GL_CACHE.get(key)
    if hit is not None:
        return hit
    eps = mp.mpf(2) ** (-mp.prec + 4)
    xs, ws = [], []
    for k in range(1, n + 1):
        x = mp.cos(mp.pi * (4 * k - 1) / (4 * n + 2))
        for _ in range(100):
            p0, p1 = mp.mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < eps:
                break
        p0, p1 = mp.mpf(1), x
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - 1)
        xs.append(x)
        ws.append(2 / ((1 - x * x) * dp * dp))
    _GL_CACHE[key] = (xs, ws)
    return xs, ws


def _adaptive_ray(fvec, R, direction, mp, tol, nodes=GL_NODES):
    """Integrate a vector-valued f along zeta = r*direction for r in [0, R].

    Each panel is accepted when its Gauss-Legendre value agrees with the sum
    over its two halves.  Returns (values, error estimate).
    """
    xs, ws = gauss_legendre(nodes, mp)

    def gl(a, b):
        h = (b - a) / 2
        m = (a + b) / 2
        acc = None
        for x, wt in zip(xs, ws):
            vals = fvec((m + h * x) * direction)
            if acc is None:
                acc = [wt * v for v in vals]
            else:
                for i, v in enumerate(vals):
                    acc[i] += wt * v
        return [v * h * direction for v in acc]

    total = None
    err = mp.mpf(0)
    # start from unit-ish panels so poles near the ray get resolved
    npan = max(8, int(mp.ceil(R)))
    edges = [R * k / npan for k in range(npan + 1)]
    stack = [(edges[i], edges[i + 1], gl(edges[i], edges[i + 1]), 0) for i in range(npan)]
    while stack:
        a, b, whole, depth = stack.pop()
        m = (a + b) / 2
        left, right = gl(a, m), gl(m, b)
        split = [l + r for l, r in zip(left, right)]
        diff = max(abs(u - v) for u, v in zip(whole, split))
        if diff <= tol or depth >= MAX_PANEL_DEPTH:
            if total is None:
                total = split
            else:
                total = [t + s for t, s in zip(total, split)]
            err += diff
        else:
            stack.append((a, m, left, depth + 1))
            stack.append((m, b, right, depth + 1))
    return total, err


def _ray_clearance(model, direction, mp):
    """Smallest distance from a pole of B (zeta plane) to the ray {r*direction}."""
    best = None
    for pole in model.poles:
        z0 = mp.sqrt(pole.sigma)
        for z in (z0, -z0):
            t = mp.re(z * mp.conj(direction))
            d = abs(z) if t <= 0 else abs(z - t * direction)
            best = d if best is None else min(best, d)
    return best


def laplace_lateral(model: BorelPadeModel, x, side: str, ctx: PrecisionContext,
                    epsilon=DEFAULT_EPSILON, nodes: int = GL_NODES, check_poles: bool = True,
                    quad_digits: int | None = None) -> LateralSum:
    """Lateral Laplace sum of the level-0 series at x, with zeta-ray at angle +-epsilon.

    ``side='above'`` rotates the ray by +epsilon.  The value is
    (s/6)^{1/2} (1 + I) with I = int e^{-w zeta} B(zeta) d zeta; the derivative
    uses dI/dw = int (-zeta) e^{-w zeta} B d zeta.

    ``quad_digits`` (default ``ctx.digits``) sets the absolute accuracy the
    quadrature and the cutoff aim for; arithmetic stays at ``ctx`` precision.
    """
    if side not in ("above", "below"):
        raise DomainError("side must be 'above' or 'below'")
    mp = ctx.mp
    x = to_cx(x, ctx)
    if abs(x) < 5:
        raise DomainError("lateral sums are only used for |x| >= 5")
    s = -x
    if abs(mp.im(s)) > abs(mp.re(s)) or mp.re(s) <= 0:
        raise DomainError("x must lie near the ray arg x = pi")
    eps = mp.mpf(epsilon)
    direction = mp.expj(eps if side == "above" else -eps)
    w = neg_x_power(x, Fraction(5, 4), ctx)
    A = mp.power(2, mp.mpf(11) / 4) * mp.power(3, mp.mpf(1) / 4) / 5
    if check_poles:
        clearance = _ray_clearance(model, direction, mp)
        if clearance is not None and clearance < eps * A / 10:
            raise ContourError(f"a Pade pole lies within {mp.nstr(clearance, 5)} of the integration ray; change epsilon")
    decay = mp.re(w * direction)
    if decay <= 0:
        raise DomainError("integration ray does not decay for this x")
    qd = ctx.digits if quad_digits is None else min(int(quad_digits), ctx.digits)
    R = (qd + ctx.guard + 5) * mp.log(10) / decay
    tol = mp.mpf(10) ** (-(qd + 3)) / max(1, int(mp.ceil(R)))

    def f(z):
        e = mp.exp(-w * z) * model.B(z, mp)
        return [e, -z * e]

    (I, dI), quad_err = _adaptive_ray(f, R, direction, mp, tol, nodes)
    # crude certificate for the discarded tail: |B| grows at most polynomially
    # (deg num - deg den in sigma, plus one power of zeta); bound it at R and 2R
    bmax = max(abs(model.B(R * direction, mp)), abs(model.B(2 * R * direction, mp)), 1)
    tail = 2 * bmax * (1 + R) * mp.exp(-decay * R) / decay
    pref = mp.sqrt(s / 6)
    value = pref * (1 + I)
    dvalue_ds = (pref / (2 * s)) * (1 + I) + pref * dI * (mp.mpf(5) / 4) * neg_x_power(x, Fraction(1, 4), ctx)
    bound = abs(pref) * (tail + quad_err) * (1 + abs(w))
    return LateralSum(x=x, side=side, value=value, derivative=-dvalue_ds, tail_bound=bound)


def stokes_jump_and_fit(xs, model: BorelPadeModel, ctx: PrecisionContext, epsilon=DEFAULT_EPSILON,
                        quad_digits: int | None = STOKES_QUAD_DIGITS) -> StokesFit:
    """Fit ln|jump| = -A (-x)^{5/4} + p ln(-x) + ln|c| on samples along arg x = pi.

    The jumps are tiny (about 1e-33 at x = -20), so the quadrature only has to
    resolve them absolutely: ``quad_digits`` bounds its accuracy target while
    the Pade model keeps full precision.  The underflow check still guards
    every sample.
    """
    mp = ctx.mp
    if len(xs) < 4:
        raise DataError("need at least 4 sample points")
    xs = [to_cx(x, ctx) for x in xs]
    for x in xs:
        if abs(mp.im(x)) > ctx.tol or mp.re(x) > -5:
            raise DataError("sample points must lie on arg x = pi with |x| >= 5")
    mags = sorted(abs(x) for x in xs)
    if mags[0] > 8 or mags[-1] < 20:
        raise DataError("samples must span at least |x| in [8, 20]")
    jumps = []
    rows = []
    for x in xs:
        up = laplace_lateral(model, x, "above", ctx, epsilon, quad_digits=quad_digits)
        dn = laplace_lateral(model, x, "below", ctx, epsilon, quad_digits=quad_digits)
        J = up.value - dn.value
        bound = up.tail_bound + dn.tail_bound
        if abs(J) < 10 * bound:
            raise SignalUnderflowError(f"jump at x = {mp.nstr(x, 6)} is below 10x the error bound; raise digits")
        jumps.append(J)
        s = -mp.re(x)
        rows.append(([-mp.power(s, mp.mpf(5) / 4), mp.log(s), mp.mpf(1)], mp.log(abs(J))))
    # normal equations for three unknowns
    AtA = mp.matrix(3, 3)
    Atb = mp.matrix(3, 1)
    for r, b in rows:
        for i in range(3):
            Atb[i] += r[i] * b
            for j in range(3):
                AtA[i, j] += r[i] * r[j]
    sol = mp.lu_solve(AtA, Atb)
    A_fit, p_fit, lnc = sol[0], sol[1], sol[2]
    phase = sum((J / abs(J) for J in jumps), mp.mpc(0))
    c_fit = mp.exp(lnc) * phase / abs(phase)
    return StokesFit(A_fit=A_fit, p_fit=p_fit, c_fit=c_fit, window=xs, jumps=jumps)


def level0_borel_model(N: int, L: int, M: int, ctx: PrecisionContext) -> BorelPadeModel:
    """Convenience: exact level-0 coefficients through N, transformed and Pade'd."""
    from .coeffs import level0_coeffs

    y = level0_coeffs(N)
    return pade(borel_transform(y, N, ctx), L, M, ctx)
