"""2x2 matrices, numeric Laurent matrices and exact homogeneous Laurent data.

The matrix norm used throughout the RH code is the largest absolute entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import DomainError


@dataclass(frozen=True)
class Matrix2:
    a: object
    b: object
    c: object
    d: object

    @staticmethod
    def identity(mp):
        one, zero = mp.mpc(1), mp.mpc(0)
        return Matrix2(one, zero, zero, one)

    @staticmethod
    def zero(mp):
        z = mp.mpc(0)
        return Matrix2(z, z, z, z)

    @staticmethod
    def diag(p, q, mp):
        return Matrix2(p, mp.mpc(0), mp.mpc(0), q)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __add__(self, o):
        return Matrix2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        return Matrix2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Matrix2(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, o):
        return Matrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def scale(self, k):
        return Matrix2(k * self.a, k * self.b, k * self.c, k * self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def inverse(self):
        dt = self.det()
        if dt == 0:
            raise DomainError("singular 2x2 matrix")
        return Matrix2(self.d / dt, -self.b / dt, -self.c / dt, self.a / dt)

    def norm(self):
        return max(abs(e) for e in self.entries())

    def is_finite(self, mp):
        return all(mp.isfinite(e) for e in self.entries())

    def as_rows(self):
        return [[self.a, self.b], [self.c, self.d]]


def sigma3_power(z, mp):
    """z^{sigma3} for a scalar already raised to the wanted power."""
    return Matrix2(z, mp.mpc(0), mp.mpc(0), 1 / z)


@dataclass(frozen=True)
class LaurentMatrix2:
    """sum_n terms[n] (lambda - center)^n over the stored orders."""

    center: object
    terms: dict = field(default_factory=dict)

    @property
    def pole_order(self) -> int:
        neg = [n for n, m in self.terms.items() if n < 0 and any(e != 0 for e in m.entries())]
        return -min(neg) if neg else 0

    def coefficient(self, n, mp):
        return self.terms.get(n, Matrix2.zero(mp))

    def principal_part(self, lam, mp):
        u = lam - self.center
        out = Matrix2.zero(mp)
        for n, m in self.terms.items():
            if n < 0:
                out = out + m.scale(u ** n)
        return out

    def evaluate(self, lam, mp):
        u = lam - self.center
        out = Matrix2.zero(mp)
        for n, m in self.terms.items():
            out = out + m.scale(u ** n)
        return out


# ----------------------------------------------------------------------------
# exact homogeneous Laurent data in u = lambda + 2 lambda_0
#
# Every closed-form object here has the structure: entry (a, b) of the
# coefficient of u^n is a rational number times lambda_0^{w + r_a - r_b - n},
# with r = (1/4, -1/4) and a weight w fixed per object.  Products add weights.


_R = (Fraction(1, 4), Fraction(-1, 4))


def _zero2():
    return ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)))


@dataclass(frozen=True)
class HomogeneousLaurent:
    weight: Fraction
    terms: dict  # order -> ((q11, q12), (q21, q22)) Fractions
    top: int  # coefficients are exact for orders <= top

    def lambda0_power(self, a: int, b: int, n: int) -> Fraction:
        return self.weight + _R[a] - _R[b] - n

    @property
    def low(self) -> int:
        nz = [n for n, m in self.terms.items() if any(q for row in m for q in row)]
        return min(nz) if nz else 0

    def coefficient(self, n):
        return self.terms.get(n, _zero2())

    def __add__(self, other):
        if self.weight != other.weight:
            raise DomainError("adding homogeneous data of different weight")
        top = min(self.top, other.top)
        out = {}
        for n in set(self.terms) | set(other.terms):
            if n > top:
                continue
            p, q = self.coefficient(n), other.coefficient(n)
            out[n] = tuple(tuple(p[i][j] + q[i][j] for j in range(2)) for i in range(2))
        return HomogeneousLaurent(self.weight, out, top)

    def __neg__(self):
        return HomogeneousLaurent(self.weight, {n: tuple(tuple(-q for q in row) for row in m) for n, m in self.terms.items()}, self.top)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        top = min(self.top + other.low, other.top + self.low)
        out = {}
        for n1, m1 in self.terms.items():
            for n2, m2 in other.terms.items():
                n = n1 + n2
                if n > top:
                    continue
                acc = out.get(n, _zero2())
                acc = tuple(
                    tuple(acc[i][j] + m1[i][0] * m2[0][j] + m1[i][1] * m2[1][j] for j in range(2))
                    for i in range(2)
                )
                out[n] = acc
        return HomogeneousLaurent(self.weight + other.weight, out, top)

    def principal(self):
        return HomogeneousLaurent(self.weight, {n: m for n, m in self.terms.items() if n < 0}, self.top)

    def regular(self):
        return HomogeneousLaurent(self.weight, {n: m for n, m in self.terms.items() if n >= 0}, self.top)

    def numeric(self, lambda0, mp, power) -> LaurentMatrix2:
        """LaurentMatrix2 about -2 lambda_0; ``power(z, q)`` evaluates z^q."""
        terms = {}
        for n, m in self.terms.items():
            ent = []
            for i in range(2):
                for j in range(2):
                    q = m[i][j]
                    if q == 0:
                        ent.append(mp.mpc(0))
                    else:
                        ent.append(mp.mpf(q.numerator) / q.denominator * power(lambda0, self.lambda0_power(i, j, n)))
            terms[n] = Matrix2(*ent)
        return LaurentMatrix2(center=-2 * lambda0, terms=terms)

    def matches(self, n: int, rows, scale: Fraction = Fraction(1)) -> bool:
        """Exact comparison of the order-n coefficient with ``scale * rows``."""
        m = self.coefficient(n)
        return all(m[i][j] == scale * Fraction(rows[i][j]) for i in range(2) for j in range(2))
