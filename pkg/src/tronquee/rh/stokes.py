"""Stokes multipliers: cyclic closure and the gamma_1 jump factorisation."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DataError
from ..mpkernel import PrecisionContext, to_cx
from .linalg import Matrix2


@dataclass(frozen=True)
class StokesData:
    s: dict  # k mod 5 -> multiplier

    def __getitem__(self, k: int):
        return self.s[k % 5]

    def constraint_residual(self):
        """max_k |1 + s_k s_{k+1} + i s_{k+3}|."""
        return max(abs(1 + self[k] * self[k + 1] + 1j * self[k + 3]) for k in range(5))


def stokes_closure(s0, s1, ctx: PrecisionContext) -> StokesData:
    """All multipliers from (s_0, s_1) through 1 + s_k s_{k+1} = -i s_{k+3}."""
    mp = ctx.mp
    s0, s1 = to_cx(s0, ctx), to_cx(s1, ctx)
    i = mp.mpc(0, 1)
    s3 = i * (1 + s0 * s1)
    if abs(s3) <= ctx.tol:
        # k = 3 then reads 1 = -i s_1, leaving s_4 undetermined
        raise DataError("s_0 s_1 = -1 leaves the multipliers undetermined or inconsistent")
    s4 = (-i * s1 - 1) / s3
    s2 = i * (1 + s4 * s0)
    data = StokesData({0: s0, 1: s1, 2: s2, 3: s3, 4: s4})
    scale = max(1, max(abs(v) for v in data.s.values()) ** 2)
    if data.constraint_residual() > ctx.tol * 100 * scale:
        raise DataError("Stokes multipliers violate the cyclic relations")
    if abs(s0) <= ctx.tol and abs(s1 + s4 - i) > ctx.tol * 100 * scale:
        raise DataError("s_0 = 0 requires s_1 + s_{-1} = i")
    return data


def s_minus1(data: StokesData):
    return data[-1]


def jump_factorization_check(data: StokesData, ctx: PrecisionContext):
    """max-norm residual of S_1 = S_{-1}^{-1} [[1, i], [0, 1]] (upper-triangular S_odd)."""
    mp = ctx.mp
    if abs(data[0]) > ctx.tol:
        raise DataError("the factorisation is stated for s_0 = 0")
    one, zero, i = mp.mpc(1), mp.mpc(0), mp.mpc(0, 1)
    S1 = Matrix2(one, data[1], zero, one)
    Sm1 = Matrix2(one, data[-1], zero, one)
    rhs = Sm1.inverse() @ Matrix2(one, i, zero, one)
    return (S1 - rhs).norm()
