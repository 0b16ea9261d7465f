"""Perturbative, Hamiltonian and instanton coefficients of the tronquee solutions.

Level 0 is exact: every coefficient is a rational multiple of 6^{-n/2}.
With s = -x the solution reads

    y(x) ~ (s/6)^{1/2} sum_n y_{0,n} s^{-5n/2}
           + s^{1/2} sum_{k>=1} C^k s^{-5k/8} e^{-k A s^{5/4}} sum_n yhat_{k,n} s^{-5n/4}

and the Hamiltonian H = z^2/2 - 2y^3 - xy (z = y_x) reads
4 (s/6)^{3/2} sum_n h_{0,n} s^{-5n/2}.

Instanton coefficients are carried numerically because they mix powers of A
and sqrt(6) with rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DataError, StructuralError
from .mpkernel import PrecisionContext, neg_x_power, to_cx


@dataclass(frozen=True)
class QSqrt6:
    """Exact element a + b*sqrt(6) of the field Q(sqrt 6)."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def lift(v) -> "QSqrt6":
        return v if isinstance(v, QSqrt6) else QSqrt6(Fraction(v))

    def __add__(self, other):
        o = QSqrt6.lift(other)
        return QSqrt6(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt6(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-QSqrt6.lift(other))

    def __rsub__(self, other):
        return QSqrt6.lift(other) - self

    def __mul__(self, other):
        o = QSqrt6.lift(other)
        return QSqrt6(self.a * o.a + 6 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self):
        return QSqrt6(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 6 * self.b * self.b

    def __truediv__(self, other):
        o = QSqrt6.lift(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 6)")
        p = self * o.conjugate()
        return QSqrt6(p.a / n, p.b / n)

    def __rtruediv__(self, other):
        return QSqrt6.lift(other) / self

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSqrt6(Fraction(other))
        if not isinstance(other, QSqrt6):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def to_mp(self, ctx: PrecisionContext):
        mp = ctx.mp
        return _frac(self.a, mp) + _frac(self.b, mp) * mp.sqrt(6)


SQRT6 = QSqrt6(0, 1)


def _frac(q: Fraction, mp):
    return mp.mpf(q.numerator) / q.denominator


def six_power_half(n: int) -> QSqrt6:
    """6^{n/2} for any integer n, exactly."""
    if n % 2 == 0:
        return QSqrt6(Fraction(6) ** (n // 2))
    return QSqrt6(0, Fraction(6) ** ((n - 1) // 2))


@dataclass(frozen=True)
class Surd6Rational:
    """Exact value q * 6^{-half_power/2}."""

    q: Fraction
    half_power: int

    def to_field(self) -> QSqrt6:
        return six_power_half(-self.half_power) * self.q

    def to_mp(self, ctx: PrecisionContext):
        mp = ctx.mp
        return _frac(self.q, mp) * mp.power(6, -mp.mpf(self.half_power) / 2)

    def __str__(self):
        return f"{self.q} * 6^(-{self.half_power}/2)"


@dataclass(frozen=True)
class Level0Series:
    y: list
    h: list = field(default_factory=list)

    def __post_init__(self):
        if self.y and self.y[0].q != 1:
            raise DataError("level-0 series must start with y_{0,0} = 1")
        if self.h and self.h[0].q != 1:
            raise DataError("Hamiltonian series must start with h_{0,0} = 1")


@dataclass(frozen=True)
class InstantonSeries:
    level: int
    coeffs: list
    action: object
    prefactor_power: Fraction

    def evaluate(self, x, C, ctx: PrecisionContext):
        """C^k (-x)^{p} e^{-k A (-x)^{5/4}} sum_n yhat_{k,n} (-x)^{-5n/4}."""
        mp = ctx.mp
        C = to_cx(C, ctx)
        w = neg_x_power(x, Fraction(5, 4), ctx)
        inv = 1 / w
        total = mp.mpc(0)
        pw = mp.mpc(1)
        for c in self.coeffs:
            total += c * pw
            pw *= inv
        pref = neg_x_power(x, self.prefactor_power, ctx)
        return C ** self.level * pref * mp.exp(-self.level * self.action * w) * total


@dataclass(frozen=True)
class TransseriesAmplitude:
    s_minus1: object
    y10: object
    h10: object
    C: object


# --------------------------------------------------------------------------
# level 0


def _level0_rationals(N: int) -> list[Fraction]:
    # y_{0,n} = q_n 6^{-n/2};  the recursion for q_n is then purely rational:
    # q_{n+1} = (25 n^2 - 1)/8 q_n - 1/2 sum_{m=1}^{n} q_m q_{n+1-m}
    q = [Fraction(1)]
    for n in range(N):
        conv = sum((q[m] * q[n + 1 - m] for m in range(1, n + 1)), Fraction(0))
        q.append(Fraction(25 * n * n - 1, 8) * q[n] - conv / 2)
    return q


def level0_coeffs(N: int) -> list[Surd6Rational]:
    """Exact y_{0,0..N}.

    The convolution in the recursion runs over m = 1..n; that is the reading
    that reproduces y_{0,1} = -sqrt(6)/48.
    """
    if N < 1:
        raise DataError("N must be >= 1")
    return [Surd6Rational(q, n) for n, q in enumerate(_level0_rationals(N))]


def _poly_mul(a, b, N):
    out = [Fraction(0)] * (N + 1)
    for i, ai in enumerate(a[: N + 1]):
        if ai:
            for j, bj in enumerate(b[: N + 1 - i]):
                out[i + j] += ai * bj
    return out


def hamiltonian_coeffs(level0_y: list[Surd6Rational]) -> list[Surd6Rational]:
    """Exact h_{0,0..N} matching the order of ``level0_y``.

    With tau = 6^{-1/2} s^{-5/2} and Y(tau) = sum q_n tau^n the normalised
    Hamiltonian is 3Y/2 - Y^3/2 + (3/4) tau (Y/2 - (5/2) tau Y')^2, where Y' is
    the termwise derivative of the y-series.
    """
    N = len(level0_y) - 1
    Y = [c.q for c in level0_y]
    dY = [n * Y[n] for n in range(len(Y))]  # tau * Y'
    inner = [Y[n] / 2 - Fraction(5, 2) * dY[n] for n in range(N + 1)]
    sq = _poly_mul(inner, inner, N)
    Y3 = _poly_mul(_poly_mul(Y, Y, N), Y, N)
    h = []
    for n in range(N + 1):
        val = Fraction(3, 2) * Y[n] - Y3[n] / 2
        if n >= 1:
            val += Fraction(3, 4) * sq[n - 1]
        h.append(Surd6Rational(val, n))
    return h


def level0_series(N: int) -> Level0Series:
    y = level0_coeffs(N)
    return Level0Series(y=y, h=hamiltonian_coeffs(y))


# exact generalised power series in s with Q(sqrt6) coefficients; used for the
# residual checks below (independent of the rational recursions above)


def _series_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            out[e] = out.get(e, QSqrt6()) + ca * cb
    return out


def _series_diff(a: dict) -> dict:
    return {e - 1: c * e for e, c in a.items() if e != 0}


def _series_add(*terms: dict) -> dict:
    out: dict = {}
    for t in terms:
        for e, c in t.items():
            out[e] = out.get(e, QSqrt6()) + c
    return out


def _scale(a: dict, k) -> dict:
    return {e: c * k for e, c in a.items()}


def y_series_in_s(level0_y) -> dict:
    """Truncated series of y(x) as {exponent of s: coefficient}."""
    c = six_power_half(-1)
    return {Fraction(1, 2) - Fraction(5 * n, 2): c * t.to_field() for n, t in enumerate(level0_y)}


def ode_residual(level0_y) -> dict:
    """Exact y_ss - 6 y^2 + s for the truncated series (s = -x).

    Returns only the non-vanishing terms as {exponent: coefficient}.
    """
    y = y_series_in_s(level0_y)
    res = _series_add(_series_diff(_series_diff(y)), _scale(_series_mul(y, y), -6), {Fraction(1): QSqrt6(1)})
    return {e: c for e, c in res.items() if c}


def hamiltonian_identity_residual(level0_y, level0_h) -> dict:
    """Exact dH/dx + y for the truncated series; zero term by term when consistent."""
    norm = QSqrt6(4) * six_power_half(-3)
    H = {Fraction(3, 2) - Fraction(5 * n, 2): norm * t.to_field() for n, t in enumerate(level0_h)}
    dH_dx = _scale(_series_diff(H), -1)  # d/dx = -d/ds
    res = _series_add(dH_dx, y_series_in_s(level0_y))
    return {e: c for e, c in res.items() if c}


# --------------------------------------------------------------------------
# instanton levels

INSTANTON_POWER = Fraction(-1, 8)


def paper_action_squared() -> QSqrt6:
    """(2^{11/4} 3^{1/4} / 5)^2 = 2^{11/2} 3^{1/2} / 25, written as a surd."""
    # 2^{11/2} 3^{1/2} = 2^5 * (2*3)^{1/2}
    return QSqrt6(0, Fraction(2**5, 25))


def level1_indicial(ctx: PrecisionContext):
    """Action and prefactor power from the dominant balance of u'' = 12 y_0 u.

    Substituting u = s^p e^{-A s^{5/4}} (...) the leading order gives
    (5A/4)^2 = 12/sqrt(6); the next order vanishes identically only for
    2p + 1/4 = 0.  Returns (A, p, A^2 exact).
    """
    a_sq = (QSqrt6(12) / SQRT6) / QSqrt6(Fraction(25, 16))
    if a_sq != paper_action_squared():
        raise StructuralError("dominant balance disagrees with the closed-form action")
    p = Fraction(-1, 4) / 2
    mp = ctx.mp
    A = mp.sqrt(a_sq.to_mp(ctx))
    closed = mp.power(2, mp.mpf(11) / 4) * mp.power(3, mp.mpf(1) / 4) / 5
    if abs(A - closed) > ctx.tol * A:
        raise StructuralError("numeric action disagrees with the closed form")
    return A, p, a_sq


def action(ctx: PrecisionContext):
    mp = ctx.mp
    return mp.power(2, mp.mpf(11) / 4) * mp.power(3, mp.mpf(1) / 4) / 5


def _solve_level(k, N, level0: Level0Series, ctx, rate=None, power=None, source=None):
    mp = ctx.mp
    A = action(ctx)
    a = k * A if rate is None else mp.mpf(rate)
    p = (Fraction(1, 2) - Fraction(5 * k, 8)) if power is None else Fraction(power)
    y = [t.to_mp(ctx) for t in level0.y]
    twelve = 12 / mp.sqrt(6)
    c54 = 5 * a / 4

    def gamma(n):
        return mp.mpf(p.numerator) / p.denominator - mp.mpf(5 * n) / 4

    lead = c54 * c54 - twelve
    small = ctx.tol * 100
    d = []
    if source is None:
        # homogeneous problem: leading order must be degenerate and the
        # first-order factor must vanish at n = 0, leaving yhat_0 free
        if abs(lead) > small:
            raise StructuralError("leading balance does not vanish: wrong exponential rate")
        if abs(2 * gamma(0) + mp.mpf(1) / 4) > small:
            raise StructuralError("first-order indicial factor does not vanish: wrong prefactor power")
        d.append(mp.mpf(1))
        for j in range(1, N + 1):
            fac = -c54 * (2 * gamma(j) + mp.mpf(1) / 4)
            if abs(fac) < small:
                raise StructuralError(f"vanishing indicial factor at order {j}")
            rhs = -gamma(j - 1) * (gamma(j - 1) - 1) * d[j - 1]
            m = 1
            while j + 1 - 2 * m >= 0:
                rhs += twelve * y[m] * d[j + 1 - 2 * m]
                m += 1
            d.append(rhs / fac)
        return d, a, p
    if abs(lead) < small:
        raise StructuralError("inhomogeneous level has a degenerate leading factor")
    for j in range(N + 1):
        rhs = source[j]
        if j >= 1:
            rhs += c54 * (2 * gamma(j - 1) + mp.mpf(1) / 4) * d[j - 1]
        if j >= 2:
            rhs -= gamma(j - 2) * (gamma(j - 2) - 1) * d[j - 2]
        m = 1
        while j - 2 * m >= 0:
            rhs += twelve * y[m] * d[j - 2 * m]
            m += 1
        d.append(rhs / lead)
    return d, a, p


def instanton_coeffs(k: int, N: int, level0: Level0Series, ctx: PrecisionContext,
                     rate=None, power=None) -> InstantonSeries:
    """Normalised coefficients yhat_{k,0..N} for k = 1 or 2.

    Level 1 solves the homogeneous linearisation u'' = 12 y_0 u with
    yhat_{1,0} = 1, so that y_{1,n} = C yhat_{1,n}.  Level 2 solves
    u'' = 12 y_0 u + 6 u_1^2 with the level-1 series at C = 1; its coefficients
    scale as C^2.  ``rate``/``power`` override the exponential rate and
    prefactor power, which is only useful to probe the degeneracy checks.
    """
    if k not in (1, 2):
        raise DataError("only levels k = 1, 2 are generated")
    if N < 1:
        raise DataError("N must be >= 1")
    if len(level0.y) < N + 2:
        raise DataError(f"level-0 series needs at least N+2 = {N + 2} coefficients")
    mp = ctx.mp
    if k == 1:
        coeffs, a, p = _solve_level(1, N, level0, ctx, rate=rate, power=power)
    else:
        c1, _, _ = _solve_level(1, N, level0, ctx)
        src = [6 * sum((c1[m] * c1[j - m] for m in range(j + 1)), mp.mpf(0)) for j in range(N + 1)]
        coeffs, a, p = _solve_level(2, N, level0, ctx, rate=rate, power=power, source=src)
    return InstantonSeries(level=k, coeffs=[mp.mpc(c) for c in coeffs], action=a / k, prefactor_power=p)


def amplitude_from_stokes(s_minus1, ctx: PrecisionContext) -> TransseriesAmplitude:
    """y_{1,0} and h_{1,0} as functions of the Stokes multiplier s_{-1}."""
    mp = ctx.mp
    s = to_cx(s_minus1, ctx)
    rpi = mp.sqrt(mp.pi)
    y10 = mp.power(2, mp.mpf(-11) / 8) * mp.power(3, mp.mpf(-1) / 8) * s / rpi
    h10 = -mp.power(2, mp.mpf(-17) / 8) * mp.power(3, mp.mpf(-3) / 8) * s / rpi
    return TransseriesAmplitude(s_minus1=s, y10=y10, h10=h10, C=y10)


def ratio_limit(ctx: PrecisionContext):
    """25/(8 sqrt 6), which equals 4/A^2."""
    mp = ctx.mp
    return 25 / (8 * mp.sqrt(6))


def ratio_diagnostic(level0_y, N: int, ctx: PrecisionContext) -> list:
    """r_n = y_{0,n+1} / (n^2 y_{0,n}) for n = 1..N (element n-1 is r_n)."""
    if N < 10:
        raise DataError("ratio diagnostic needs N >= 10")
    if len(level0_y) < N + 2:
        raise DataError("need coefficients through y_{0,N+1}")
    out = []
    for n in range(1, N + 1):
        if level0_y[n].q == 0:
            raise DataError(f"y_0,{n} vanishes; ratio undefined")
        # ratio of q's carries one factor 6^{-1/2}
        r = (level0_y[n + 1].q / level0_y[n].q) / (n * n)
        out.append(Surd6Rational(r, 1).to_mp(ctx))
    return out


def binomial_series(alpha: Fraction, N: int) -> list[Fraction]:
    """Coefficients of (1 + t)^alpha through t^N."""
    out = [Fraction(1)]
    for j in range(1, N + 1):
        out.append(out[-1] * (alpha - j + 1) / j)
    return out


__all__ = [
    "QSqrt6",
    "Surd6Rational",
    "Level0Series",
    "InstantonSeries",
    "TransseriesAmplitude",
    "level0_coeffs",
    "hamiltonian_coeffs",
    "level0_series",
    "ode_residual",
    "hamiltonian_identity_residual",
    "level1_indicial",
    "instanton_coeffs",
    "amplitude_from_stokes",
    "ratio_diagnostic",
    "ratio_limit",
    "action",
]
