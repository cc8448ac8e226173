"""Multivariate polynomials with rational coefficients.

Used for base-dependent data (sections, vertical connection coefficients).
Evaluation accepts Weil-valued coordinates, so polynomial data can be read
off exactly at rationally-centred points with nilpotent displacements.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .matrices import Matrix
from .weil import Scalar, WeilElement


class Poly:
    """Polynomial in `nvars` variables; terms keyed by exponent tuples."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Scalar] = ()):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in dict(terms).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError("exponent tuple has wrong length")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @staticmethod
    def const(nvars: int, c: Scalar) -> "Poly":
        return Poly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def var(nvars: int, i: int) -> "Poly":
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return Poly(nvars, {exps: Fraction(1)})

    def __add__(self, other: "Poly") -> "Poly":
        merged = dict(self.terms)
        for e, c in other.terms.items():
            merged[e] = merged.get(e, Fraction(0)) + c
        return Poly(self.nvars, merged)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def partial(self, i: int) -> "Poly":
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = tuple(v - 1 if j == i else v for j, v in enumerate(e))
            out[e2] = out.get(e2, Fraction(0)) + c * e[i]
        return Poly(self.nvars, out)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, coords: Sequence[WeilElement]) -> WeilElement:
        if len(coords) != self.nvars:
            raise ValueError("coordinate count mismatch")
        alg = coords[0].algebra
        # cache powers of each coordinate
        powers: list[list[WeilElement]] = [[alg.one, x] for x in coords]
        out = alg.zero
        for exps, c in sorted(self.terms.items()):
            term = alg.scalar(c)
            for i, k in enumerate(exps):
                while len(powers[i]) <= k:
                    powers[i].append(powers[i][-1] * coords[i])
                if k:
                    term = term * powers[i][k]
            out = out + term
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for exps, c in sorted(self.terms.items()):
            mono = "*".join(
                f"x{i + 1}" + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(exps)
                if k
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(bits) + ")"


class PolyMatrix:
    """Square matrix of polynomials; evaluates to a `Matrix`."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[Poly]]):
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @staticmethod
    def zero(size: int, nvars: int) -> "PolyMatrix":
        z = Poly(nvars, {})
        return PolyMatrix(tuple(tuple(z for _ in range(size)) for _ in range(size)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def __call__(self, coords: Sequence[WeilElement]) -> Matrix:
        return Matrix(tuple(tuple(p(coords) for p in r) for r in self.rows))

    def partial(self, i: int) -> "PolyMatrix":
        return PolyMatrix(tuple(tuple(p.partial(i) for p in r) for r in self.rows))

    def trace_is_zero(self) -> bool:
        acc = Poly(self.rows[0][0].nvars, {})
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return not acc.terms
