"""Square matrices of Weil elements.

Inverses exploit nilpotency: the constant part is inverted over the
rationals by Gaussian elimination and the nilpotent remainder by a finite
Neumann series, so everything stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .weil import Scalar, WeilAlgebra, WeilElement

Rational = Sequence[Sequence[Scalar]]


class SingularMatrix(ZeroDivisionError):
    """Constant part of the matrix is not invertible over the rationals."""


class Matrix:
    """Immutable square matrix whose entries share one Weil algebra."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[WeilElement]]):
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @staticmethod
    def identity(n: int, alg: WeilAlgebra) -> "Matrix":
        one, zero = alg.one, alg.zero
        return Matrix(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
        )

    @staticmethod
    def zero(n: int, alg: WeilAlgebra) -> "Matrix":
        z = alg.zero
        return Matrix(tuple(tuple(z for _ in range(n)) for _ in range(n)))

    @staticmethod
    def from_rational(rows: Rational, alg: WeilAlgebra) -> "Matrix":
        return Matrix(tuple(tuple(alg.scalar(v) for v in r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def algebra(self) -> WeilAlgebra:
        return self.rows[0][0].algebra

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.size == other.size and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __neg__(self) -> "Matrix":
        return Matrix(tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, other):
        if isinstance(other, Matrix):
            n = self.size
            if other.size != n:
                raise ValueError("size mismatch")
            cols = tuple(zip(*other.rows))
            return Matrix(
                tuple(
                    tuple(_dot(row, col) for col in cols) for row in self.rows
                )
            )
        # scalar or WeilElement
        return Matrix(tuple(tuple(a * other for a in r) for r in self.rows))

    def __rmul__(self, other):
        # scalars commute with everything we store
        return Matrix(tuple(tuple(a * other for a in r) for r in self.rows))

    def map(self, fn: Callable[[WeilElement], WeilElement]) -> "Matrix":
        return Matrix(tuple(tuple(fn(a) for a in r) for r in self.rows))

    def trace(self) -> WeilElement:
        t = self.rows[0][0]
        for i in range(1, self.size):
            t = t + self.rows[i][i]
        return t

    def det(self) -> WeilElement:
        n = self.size
        r = self.rows
        if n == 1:
            return r[0][0]
        if n == 2:
            return r[0][0] * r[1][1] - r[0][1] * r[1][0]
        if n == 3:
            return (
                r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
            )
        raise NotImplementedError("determinant only needed for sizes <= 3")

    def constant_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(a.constant_term() for a in r) for r in self.rows)

    def coefficient(self, names: Iterable[str]) -> "Matrix":
        names = tuple(names)
        return self.map(lambda a: a.coefficient(names))

    def is_identity(self) -> bool:
        alg = self.algebra
        one, zero = alg.one, alg.zero
        return all(
            a == (one if i == j else zero)
            for i, r in enumerate(self.rows)
            for j, a in enumerate(r)
        )

    def inverse(self) -> "Matrix":
        alg = self.algebra
        n = self.size
        c_inv = _rational_inverse(self.constant_matrix())
        c_inv_m = Matrix.from_rational(c_inv, alg)
        # self = C (I + U) with U nilpotent; inverse = (sum (-U)^k) C^{-1}
        u = c_inv_m * self - Matrix.identity(n, alg)
        acc = Matrix.identity(n, alg)
        power = u
        sign = -1
        while not _is_zero_matrix(power):
            acc = acc + power * sign
            power = power * u
            sign = -sign
        return acc * c_inv_m

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in r) for r in self.rows)
        return f"Matrix[{body}]"


def _dot(row, col):
    acc = None
    for a, b in zip(row, col):
        if not a._c or not b._c:
            continue  # zero entries dominate the structured matrices here
        term = a * b
        acc = term if acc is None else acc + term
    return acc if acc is not None else row[0].algebra.zero


def _is_zero_matrix(m: Matrix) -> bool:
    return all(a.is_zero() for r in m.rows for a in r)


def _rational_inverse(rows: tuple[tuple[Fraction, ...], ...]):
    n = len(rows)
    a = [list(r) for r in rows]
    b = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix("constant part is singular")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        b[col] = [v * inv for v in b[col]]
        for r in range(n):
            if r == col or a[r][col] == 0:
                continue
            f = a[r][col]
            a[r] = [v - f * w for v, w in zip(a[r], a[col])]
            b[r] = [v - f * w for v, w in zip(b[r], b[col])]
    return tuple(tuple(r) for r in b)
