"""coeff-engine: exact level-0/Hamiltonian series, action, ratio, instanton levels."""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from tronquee.coeffs import (
    QSqrt6,
    Surd6Rational,
    action,
    amplitude_from_stokes,
    hamiltonian_coeffs,
    hamiltonian_identity_residual,
    instanton_coeffs,
    level0_coeffs,
    level0_series,
    level1_indicial,
    ode_residual,
    paper_action_squared,
    ratio_diagnostic,
    ratio_limit,
)
from tronquee.errors import DataError, StructuralError
from tronquee.mpkernel import PrecisionContext


@pytest.fixture(scope="module")
def sympy_oracle():
    """Solve y'' = 6y^2 + x with y = sqrt(s/6)(1 + c1 s^{-5/2} + c2 s^{-5}) by brute substitution.

    s = -x = r^2 keeps every power integral; H is then expanded directly.
    """
    r = sp.symbols("r", positive=True)
    c1, c2 = sp.symbols("c1 c2")
    y = r / sp.sqrt(6) * (1 + c1 * r**-5 + c2 * r**-10)

    def d_ds(f):
        return sp.diff(f, r) / (2 * r)

    # the r^2 terms cancel identically; the next two orders (r^-3, r^-8) fix c1, c2
    poly = sp.Poly(sp.expand((d_ds(d_ds(y)) - 6 * y**2 + r**2) * r**30), r)
    eqs = [poly.coeff_monomial(r**k) for k in (27, 22)]
    sol = sp.solve(eqs, [c1, c2], dict=True)
    assert len(sol) == 1
    sol = sol[0]
    ys = y.subs(sol)
    yx = -d_ds(ys)  # d/dx = -d/ds
    H = yx**2 / 2 - 2 * ys**3 + r**2 * ys
    h = sp.expand(sp.simplify(H / (4 * (r**2 / 6) ** sp.Rational(3, 2))))
    hser = sp.series(h, r, sp.oo, 12).removeO()
    return {
        "y1": sp.nsimplify(sol[c1]),
        "y2": sp.nsimplify(sol[c2]),
        "h0": sp.nsimplify(hser.coeff(r, 0)),
        "h1": sp.nsimplify(hser.coeff(r, -5)),
    }


# ---------------------------------------------------------------- level 0


def test_first_coefficients_exact():
    y = level0_coeffs(3)
    assert y[0] == Surd6Rational(Fraction(1), 0)
    assert y[1].q == Fraction(-1, 8) and y[1].half_power == 1
    # -sqrt6/48 = -1/(8 sqrt6)
    assert y[1].to_field() == QSqrt6(0, Fraction(-1, 48))
    assert y[2].to_field() == QSqrt6(Fraction(-49, 768))


def test_against_sympy_oracle(sympy_oracle):
    y = level0_coeffs(2)
    h = hamiltonian_coeffs(y)
    s6 = sp.sqrt(6)

    def val(c):
        f = c.to_field()
        return sp.Rational(f.a.numerator, f.a.denominator) + sp.Rational(f.b.numerator, f.b.denominator) * s6

    assert sp.simplify(val(y[1]) - sympy_oracle["y1"]) == 0
    assert sp.simplify(val(y[2]) - sympy_oracle["y2"]) == 0
    assert sp.simplify(val(h[0]) - sympy_oracle["h0"]) == 0
    assert sp.simplify(val(h[1]) - sympy_oracle["h1"]) == 0


def test_hamiltonian_first_terms():
    h = hamiltonian_coeffs(level0_coeffs(3))
    assert h[0].q == 1
    assert h[1].to_field() == QSqrt6(0, Fraction(1, 32))


def test_half_power_equals_index():
    assert all(c.half_power == n for n, c in enumerate(level0_coeffs(40)))


def test_ode_residual_through_guaranteed_order():
    N = 12
    res = ode_residual(level0_coeffs(N))
    assert res, "truncation must leave a residual"
    assert all(e < 1 - Fraction(5 * N, 2) for e in res)


def test_hamiltonian_identity_exact():
    s = level0_series(12)
    assert hamiltonian_identity_residual(s.y, s.h) == {}


@given(st.integers(1, 12))
def test_residual_order_tracks_truncation(N):
    # the first surviving term is the one y_{0,N+1} would have cancelled
    res = ode_residual(level0_coeffs(N))
    assert max(res) == Fraction(-3, 2) - Fraction(5 * N, 2)


def test_level0_requires_positive_N():
    with pytest.raises(DataError):
        level0_coeffs(0)


def test_corrupted_coefficient_breaks_identities():
    y = level0_coeffs(6)
    y[3] = Surd6Rational(y[3].q + 1, 3)
    assert any(e >= 1 - Fraction(30, 2) for e in ode_residual(y))


# ---------------------------------------------------------------- action, ratio


def test_action_exact_and_numeric():
    ctx = PrecisionContext(60)
    A, p, a_sq = level1_indicial(ctx)
    assert a_sq == paper_action_squared() == QSqrt6(0, Fraction(32, 25))
    assert p == Fraction(-1, 8)
    hi = level1_indicial(PrecisionContext(90))[0]
    assert abs(A - hi) < ctx.mp.mpf(10) ** -55
    assert ctx.mp.nstr(A, 12) == "1.77069107152"


def test_ratio_limit_is_four_over_A_squared():
    ctx = PrecisionContext(40)
    assert abs(ratio_limit(ctx) - 4 / action(ctx) ** 2) < ctx.tol


def test_ratio_positive_and_converging():
    ctx = PrecisionContext(30)
    r = ratio_diagnostic(level0_coeffs(102), 100, ctx)
    lim = ratio_limit(ctx)
    assert all(v > 0 for v in r)
    assert abs(r[99] - lim) / lim <= 0.01
    assert abs(r[99] - lim) < abs(r[19] - lim)


def test_ratio_guards():
    ctx = PrecisionContext(30)
    with pytest.raises(DataError):
        ratio_diagnostic(level0_coeffs(20), 5, ctx)
    with pytest.raises(DataError):
        ratio_diagnostic(level0_coeffs(10), 10, ctx)


# ---------------------------------------------------------------- instantons


def _level_residual(k, ctx, s, N=12, C=1):
    """Residual of the level-k equation at s = -x using numerical differentiation."""
    mp = ctx.mp
    lvl0 = level0_series(N + 2)
    y0c = [c.to_mp(ctx) for c in lvl0.y]
    ser1 = instanton_coeffs(1, N, lvl0, ctx)

    def y0(s):
        return mp.sqrt(s / 6) * sum(c * s ** (-mp.mpf(5) * n / 2) for n, c in enumerate(y0c))

    def u(ser, s):
        return ser.evaluate(-s, C, ctx)

    if k == 1:
        f = lambda s: u(ser1, s)  # noqa: E731
        rhs = 12 * y0(s) * f(s)
    else:
        ser2 = instanton_coeffs(2, N, lvl0, ctx)
        f = lambda s: u(ser2, s)  # noqa: E731
        rhs = 12 * y0(s) * f(s) + 6 * u(ser1, s) ** 2
    return abs(mp.diff(f, s, 2) - rhs) / abs(rhs)


@pytest.mark.parametrize("k", [1, 2])
def test_instanton_residual_decays(k):
    ctx = PrecisionContext(40)
    r1 = _level_residual(k, ctx, ctx.mp.mpf(20))
    r2 = _level_residual(k, ctx, ctx.mp.mpf(40))
    assert r1 < 1e-12 and r2 < r1 / 100


def test_instanton_normalisation_and_rate():
    ctx = PrecisionContext(40)
    ser = instanton_coeffs(1, 8, level0_series(10), ctx)
    assert ser.coeffs[0] == 1
    assert ser.prefactor_power == Fraction(-1, 8)
    assert abs(ser.action - action(ctx)) < ctx.tol
    ser2 = instanton_coeffs(2, 8, level0_series(10), ctx)
    assert abs(ser2.action - action(ctx)) < ctx.tol


def test_level2_is_quadratic_in_C():
    ctx = PrecisionContext(30)
    ser = instanton_coeffs(2, 6, level0_series(8), ctx)
    x = ctx.mp.mpf(-9)
    assert abs(ser.evaluate(x, 2, ctx) / ser.evaluate(x, 1, ctx) - 4) < ctx.tol * 10


def test_wrong_rate_or_power_is_structural():
    ctx = PrecisionContext(30)
    lvl = level0_series(10)
    with pytest.raises(StructuralError):
        instanton_coeffs(1, 5, lvl, ctx, rate=1.7)
    with pytest.raises(StructuralError):
        instanton_coeffs(1, 5, lvl, ctx, power=Fraction(-1, 4))


def test_instanton_input_guards():
    ctx = PrecisionContext(30)
    with pytest.raises(DataError):
        instanton_coeffs(3, 5, level0_series(10), ctx)
    with pytest.raises(DataError):
        instanton_coeffs(1, 10, level0_series(10), ctx)


# ---------------------------------------------------------------- amplitude


def test_amplitude_examples():
    ctx = PrecisionContext(40)
    mp = ctx.mp
    z = amplitude_from_stokes(0, ctx)
    assert z.y10 == 0 and z.h10 == 0
    a = amplitude_from_stokes(1j, ctx)
    assert abs(a.y10 - 0.18962j) < 1e-5
    want = -1j * mp.power(2, mp.mpf(-17) / 8) * mp.power(3, mp.mpf(-3) / 8) / mp.sqrt(mp.pi)
    assert abs(a.h10 - want) < ctx.tol


@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_amplitude_linear(s, t):
    ctx = PrecisionContext(30)
    mp = ctx.mp
    a, b, ab = (amplitude_from_stokes(v, ctx) for v in (s, t, mp.mpc(s) + mp.mpc(t)))
    assert abs(ab.y10 - a.y10 - b.y10) < ctx.tol * 100
    assert abs(ab.h10 - a.h10 - b.h10) < ctx.tol * 100
