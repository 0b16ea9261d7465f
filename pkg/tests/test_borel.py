"""borel-lab: transform, Pade, singularity estimate, lateral Laplace sums."""

import pytest
from hypothesis import given, settings, strategies as st

from tronquee.borel import (
    BorelPadeModel,
    borel_transform,
    gauss_legendre,
    laplace_lateral,
    level0_borel_model,
    nearest_singularity,
    pade,
    stokes_jump_and_fit,
)
from tronquee.coeffs import action, level0_coeffs
from tronquee.errors import ContourError, DataError, DegeneracyError, DomainError, InconclusiveError
from tronquee.mpkernel import PrecisionContext, neg_x_power


@pytest.fixture(scope="module")
def ctx():
    return PrecisionContext(40)


@pytest.fixture(scope="module")
def pi_model():
    # a mid-sized model: quick to build, good to ~20 digits near the ray
    return level0_borel_model(60, 24, 24, PrecisionContext(80))


def test_transform_first_coefficient(ctx):
    s = borel_transform(level0_coeffs(25), 25, ctx)
    mp = ctx.mp
    assert abs(s[0] - (-mp.sqrt(6) / 48)) < ctx.tol
    assert len(s) == 25


def test_transform_zero_series(ctx):
    assert all(c == 0 for c in borel_transform([0] * 21, 20, ctx))


def test_transform_guards(ctx):
    with pytest.raises(DataError):
        borel_transform(level0_coeffs(10), 10, ctx)
    with pytest.raises(DataError):
        borel_transform(level0_coeffs(20), 25, ctx)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_laplace_dual_round_trip(n):
    ctx = PrecisionContext(35)
    mp = ctx.mp
    w = mp.mpf("2.7")
    val = mp.quad(lambda z: mp.exp(-w * z) * z ** (2 * n - 1) / mp.factorial(2 * n - 1), [0, 5, 20, mp.inf])
    assert abs(val - w ** (-2 * n)) < mp.mpf(10) ** -30


def test_gauss_legendre_exact_for_polynomials(ctx):
    xs, ws = gauss_legendre(24, ctx.mp)
    assert abs(sum(ws) - 2) < ctx.tol
    assert abs(sum(w * x**46 for x, w in zip(xs, ws)) - ctx.mp.mpf(2) / 47) < ctx.tol


# ---------------------------------------------------------------- Pade


def test_pade_geometric(ctx):
    m = pade([1] * 10, 0, 1, ctx)
    assert abs(m.pade_num[0] - 1) < ctx.tol and abs(m.pade_den[1] + 1) < ctx.tol
    assert len(m.poles) == 1 and abs(m.poles[0].sigma - 1) < ctx.tol


def test_pade_exponential_1_1(ctx):
    mp = ctx.mp
    m = pade([1 / mp.factorial(k) for k in range(4)], 1, 1, ctx)
    assert abs(m.pade_num[1] - mp.mpf(1) / 2) < ctx.tol
    assert abs(m.pade_den[1] + mp.mpf(1) / 2) < ctx.tol


@settings(max_examples=15)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=7, max_size=7), st.integers(0, 3))
def test_pade_reexpansion(coeffs, L):
    ctx = PrecisionContext(30)
    mp = ctx.mp
    M = 6 - L
    try:
        m = pade(coeffs, L, M, ctx)
    except DegeneracyError:
        return
    assert m.pade_den[0] == 1
    back = m.reexpansion(L + M, mp)
    scale = max(1, max(abs(c) for c in coeffs))
    # the linear solve can be ill-conditioned for random data; require agreement at half precision
    assert all(abs(b - c) <= mp.mpf(10) ** -12 * scale * (1 + max(abs(q) for q in m.pade_den)) for b, c in zip(back, coeffs))


def test_pade_singular_system(ctx):
    with pytest.raises(DegeneracyError):
        pade([1, 0, 0, 0, 0], 1, 2, ctx)


def test_pade_order_guard(ctx):
    with pytest.raises(DataError):
        pade([1, 2, 3], 2, 2, ctx)


def test_manufactured_pole(ctx):
    # G = 1/(1 - sigma/4): pole at sigma = 4, so sqrt(sigma*) = 2
    m = pade([ctx.mp.mpf(4) ** -k for k in range(8)], 0, 1, ctx)
    assert abs(nearest_singularity(m, ctx) - 2) < ctx.mp.mpf(10) ** -30


def test_all_spurious_is_inconclusive(ctx):
    m = pade([ctx.mp.mpf(4) ** -k for k in range(8)], 0, 1, ctx, spurious_threshold=1e6)
    with pytest.raises(InconclusiveError):
        nearest_singularity(m, ctx)


def test_pi_singularity_near_action(pi_model):
    c = PrecisionContext(80)
    z = nearest_singularity(pi_model, c)
    assert abs(z - action(c)) / action(c) < 2e-3


def test_pi_singularity_stable_across_orders():
    c = PrecisionContext(150)
    a = nearest_singularity(level0_borel_model(100, 35, 35, c), c)
    b = nearest_singularity(level0_borel_model(100, 45, 45, c), c)
    assert abs(a - b) / abs(b) <= 1e-3


# ---------------------------------------------------------------- Laplace


def test_lateral_manufactured_B(ctx):
    # G = 1 so B(zeta) = zeta and the integral is exactly 1/w^2
    mp = ctx.mp
    m = BorelPadeModel(sigma_coeffs=[mp.mpf(1)], pade_num=[mp.mpf(1)], pade_den=[mp.mpf(1)])
    x = mp.mpf(-9)
    w = neg_x_power(x, 1.25, ctx)
    want = mp.sqrt(-x / 6) * (1 + 1 / w**2)
    for side in ("above", "below"):
        v = laplace_lateral(m, x, side, ctx)
        assert abs(v.value - want) < mp.mpf(10) ** -35


def test_lateral_conjugate_pair(pi_model):
    c = PrecisionContext(30)
    up = laplace_lateral(pi_model, -8, "above", c)
    dn = laplace_lateral(pi_model, -8, "below", c)
    mp = c.mp
    assert abs(up.value - mp.conj(dn.value)) < up.tail_bound + dn.tail_bound + mp.mpf(10) ** -25
    jump = up.value - dn.value
    assert abs(mp.re(jump)) < abs(mp.im(jump)) * 1e-6


def test_lateral_derivative_finite_difference(pi_model):
    c = PrecisionContext(30)
    mp = c.mp
    h = mp.mpf("1e-6")
    x = mp.mpf(-12)
    d = laplace_lateral(pi_model, x, "above", c).derivative
    fd = (laplace_lateral(pi_model, x + h, "above", c).value - laplace_lateral(pi_model, x - h, "above", c).value) / (2 * h)
    assert abs(d - fd) < 1e-10


def test_lateral_node_doubling(pi_model):
    c = PrecisionContext(30)
    a = laplace_lateral(pi_model, -10, "above", c)
    b = laplace_lateral(pi_model, -10, "above", c, nodes=48)
    assert abs(a.value - b.value) <= max(a.tail_bound, c.mp.mpf(10) ** -28)


def test_lateral_pole_guard(ctx):
    mp = ctx.mp
    # a single pole placed on the +0.15 rad ray in the zeta plane
    z0 = 2 * mp.expj(mp.mpf("0.15"))
    m = pade([(z0 * z0) ** -k for k in range(6)], 0, 1, ctx)
    with pytest.raises(ContourError):
        laplace_lateral(m, -9, "above", ctx)


def test_lateral_domain_guards(pi_model, ctx):
    with pytest.raises(DomainError):
        laplace_lateral(pi_model, -3, "above", ctx)
    with pytest.raises(DomainError):
        laplace_lateral(pi_model, 9, "above", ctx)
    with pytest.raises(DomainError):
        laplace_lateral(pi_model, -9, "left", ctx)


def test_stokes_fit_guards(pi_model, ctx):
    with pytest.raises(DataError):
        stokes_jump_and_fit([-8, -10, -20], pi_model, ctx)
    with pytest.raises(DataError):
        stokes_jump_and_fit([-10, -12, -14, -16], pi_model, ctx)
    with pytest.raises(DataError):
        stokes_jump_and_fit([-8, 10j, -14, -20], pi_model, ctx)
