"""Exact arithmetic with square-zero polynomial generators.

Elements live in quotients of R[g1, ..., gn] by the relations gi^2 = 0,
optionally together with an extra set of square-free monomials identified
with zero.  Every element is a finite table of rational coefficients
indexed by subsets of the generator list, so equality, substitution and
restriction are all decidable and exact.

Monomials are encoded as bit masks over the algebra's generator ordering.
Internally a single common denominator is factored out of each element and
the coefficient table holds plain integers; this keeps the hot product
loops in machine-integer arithmetic instead of `Fraction` calls.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class AlgebraMismatch(ValueError):
    """Raised when a binary operation mixes distinct quotient algebras."""


class SubstitutionError(ValueError):
    """Raised when a generator image is not square-zero in the target."""


class NotInvertible(ZeroDivisionError):
    """Raised when the constant term vanishes, so no inverse exists."""


def _close_upward(masks: frozenset[int], full: int) -> frozenset[int]:
    # killing a monomial kills every multiple of it
    out = set()
    for m in masks:
        rest = full & ~m
        sub = rest
        while True:
            out.add(m | sub)
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return frozenset(out)


_ALGEBRA_CACHE: dict[tuple, "WeilAlgebra"] = {}


def algebra(names: Iterable[str], killed: Iterable[Iterable[str]] = ()) -> "WeilAlgebra":
    """Construct (or fetch) the quotient algebra on the given generators.

    `killed` lists square-free monomials, each given as an iterable of
    generator names, that are identified with zero.
    """
    names = tuple(names)
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate generator names: {names}")
    index = {g: i for i, g in enumerate(names)}
    masks = []
    for mono in killed:
        mask = 0
        for g in mono:
            mask |= 1 << index[g]
        if mask:
            masks.append(mask)
    full = (1 << len(names)) - 1
    closed = _close_upward(frozenset(masks), full)
    key = (names, closed)
    alg = _ALGEBRA_CACHE.get(key)
    if alg is None:
        alg = WeilAlgebra(names, closed)
        _ALGEBRA_CACHE[key] = alg
    return alg


class WeilAlgebra:
    """R[g1,...,gn] / (gi^2 = 0, killed monomials).  Use `algebra()` to build."""

    __slots__ = ("names", "killed", "_index", "_one", "_zero")

    def __init__(self, names: tuple[str, ...], killed: frozenset[int]):
        self.names = names
        self.killed = killed
        self._index = {g: i for i, g in enumerate(names)}
        self._zero = WeilElement(self, {}, 1)
        self._one = WeilElement(self, {0: 1}, 1)

    def __repr__(self):
        if not self.killed:
            return f"WeilAlgebra({', '.join(self.names)})"
        dead = sorted(self.mono_names(m) for m in self.killed)
        return f"WeilAlgebra({', '.join(self.names)}; killed={dead})"

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, WeilAlgebra)
            and self.names == other.names
            and self.killed == other.killed
        )

    def __hash__(self):
        return hash((self.names, self.killed))

    # -- mask helpers ------------------------------------------------------

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for g in names:
            bit = 1 << self._index[g]
            if m & bit:
                raise ValueError(f"repeated generator in monomial: {g}")
            m |= bit
        return m

    def mono_names(self, mask: int) -> tuple[str, ...]:
        return tuple(g for i, g in enumerate(self.names) if mask >> i & 1)

    def gen_bit(self, name: str) -> int:
        return 1 << self._index[name]

    # -- element constructors ---------------------------------------------

    @property
    def zero(self) -> "WeilElement":
        return self._zero

    @property
    def one(self) -> "WeilElement":
        return self._one

    def scalar(self, q: Scalar) -> "WeilElement":
        if type(q) is int:
            return WeilElement(self, {0: q} if q else {}, 1)
        q = Fraction(q)
        if not q:
            return self._zero
        return WeilElement(self, {0: q.numerator}, q.denominator)

    def gen(self, name: str) -> "WeilElement":
        bit = 1 << self._index[name]
        if bit in self.killed:
            return self._zero
        return WeilElement(self, {bit: 1}, 1)

    def term(self, coeff: Scalar, names: Iterable[str]) -> "WeilElement":
        mask = self.mask(names)
        coeff = Fraction(coeff)
        if coeff == 0 or mask in self.killed:
            return self._zero
        return WeilElement(self, {mask: coeff.numerator}, coeff.denominator)

    def element(self, table: Mapping[Iterable[str], Scalar]) -> "WeilElement":
        out = self._zero
        for names, coeff in table.items():
            out = out + self.term(coeff, names)
        return out

    # -- derived algebras ---------------------------------------------------

    def kill(self, monomials: Iterable[Iterable[str]]) -> "WeilAlgebra":
        extra = [tuple(m) for m in monomials]
        if not extra:
            return self
        old = [self.mono_names(m) for m in self.killed]
        return algebra(self.names, old + extra)

    def extend(self, *new_names: str) -> "WeilAlgebra":
        missing = [g for g in new_names if g not in self._index]
        if not missing:
            return self
        old = [self.mono_names(m) for m in self.killed]
        return algebra(self.names + tuple(missing), old)

    def union(self, other: "WeilAlgebra") -> "WeilAlgebra":
        if other is self:
            return self
        merged = self.extend(*other.names)
        extra = [other.mono_names(m) for m in other.killed]
        return merged.kill(extra)

    def fresh_name(self, base: str = "e") -> str:
        if base not in self._index:
            return base
        k = 1
        while f"{base}{k}" in self._index:
            k += 1
        return f"{base}{k}"


def _build(alg: WeilAlgebra, table: dict[int, int], den: int) -> "WeilElement":
    """Normalize to canonical form: positive denominator coprime to the
    content of the coefficient table, zero entries dropped."""
    table = {m: v for m, v in table.items() if v}
    if not table:
        return alg._zero
    if den == 1:
        return WeilElement(alg, table, 1)
    if den < 0:
        den = -den
        table = {m: -v for m, v in table.items()}
    g = den
    for v in table.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        den //= g
        table = {m: v // g for m, v in table.items()}
    return WeilElement(alg, table, den)


class WeilElement:
    """An element of a `WeilAlgebra`; immutable after construction."""

    __slots__ = ("algebra", "_c", "_den")

    def __init__(self, alg: WeilAlgebra, coeffs: dict[int, int], den: int):
        self.algebra = alg
        self._c = coeffs
        self._den = den

    # -- inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> dict[tuple[str, ...], Fraction]:
        """Coefficient table keyed by monomial name tuples (a copy)."""
        return {
            self.algebra.mono_names(m): Fraction(v, self._den)
            for m, v in sorted(self._c.items())
        }

    def constant_term(self) -> Fraction:
        return Fraction(self._c.get(0, 0), self._den)

    def is_zero(self) -> bool:
        return not self._c

    def is_scalar(self) -> bool:
        return all(m == 0 for m in self._c)

    def coefficient(self, names: Iterable[str]) -> "WeilElement":
        """Cofactor of the given monomial: sum over keys containing it of
        coeff * (key minus monomial).  `coefficient(())` returns self."""
        mask = self.algebra.mask(names)
        out = {m & ~mask: v for m, v in self._c.items() if m & mask == mask}
        return _build(self.algebra, out, self._den)

    def drop(self, names: Iterable[str]) -> "WeilElement":
        """Evaluate the listed generators at zero (a fast substitution)."""
        mask = self.algebra.mask(names)
        out = {m: v for m, v in self._c.items() if not m & mask}
        if len(out) == len(self._c):
            return self
        return _build(self.algebra, out, self._den)

    def rename(self, mapping: Mapping[str, str]) -> "WeilElement":
        """Simultaneous generator renaming (a bijective substitution).

        Keys that would repeat a generator after renaming are rejected;
        images must survive in the algebra."""
        alg = self.algebra
        bits = {alg.gen_bit(old): alg.gen_bit(new) for old, new in mapping.items()}
        moved = 0
        for b in bits:
            moved |= b
        out: dict[int, int] = {}
        for m, v in self._c.items():
            new = m & ~moved
            for old_bit, new_bit in bits.items():
                if m & old_bit:
                    if new & new_bit:
                        raise SubstitutionError("renaming collides inside a monomial")
                    new |= new_bit
            if new in alg.killed:
                continue
            if new in out:
                out[new] = out[new] + v
            else:
                out[new] = v
        return _build(alg, out, self._den)

    def scale_gen(self, name: str, a: Scalar) -> "WeilElement":
        """Substitute one generator by a rational multiple of itself."""
        bit = self.algebra.gen_bit(name)
        if a == 1:
            return self
        if a == 0:
            return self.drop((name,))
        q = Fraction(a)
        out = {
            m: (v * q.numerator if m & bit else v * q.denominator)
            for m, v in self._c.items()
        }
        return _build(self.algebra, out, self._den * q.denominator)

    def involves(self, names: Iterable[str]) -> bool:
        mask = self.algebra.mask(names)
        return any(m & mask for m in self._c)

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other) -> "WeilElement | None":
        if isinstance(other, WeilElement):
            if other.algebra != self.algebra:
                raise AlgebraMismatch(
                    f"cannot combine {self.algebra!r} with {other.algebra!r}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        return None

    def __add__(self, other):
        if type(other) is not WeilElement:
            other = self._coerce(other)
            if other is None:
                return NotImplemented
        elif other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatch(
                f"cannot combine {self.algebra!r} with {other.algebra!r}"
            )
        if not other._c:
            return self
        if not self._c:
            return other
        d1, d2 = self._den, other._den
        if d1 == d2:
            out = dict(self._c)
            for m, v in other._c.items():
                out[m] = out.get(m, 0) + v
            return _build(self.algebra, out, d1)
        g = gcd(d1, d2)
        s1, s2 = d2 // g, d1 // g
        out = {m: v * s1 for m, v in self._c.items()}
        for m, v in other._c.items():
            out[m] = out.get(m, 0) + v * s2
        return _build(self.algebra, out, d1 * s1)

    __radd__ = __add__

    def __neg__(self):
        return WeilElement(
            self.algebra, {m: -v for m, v in self._c.items()}, self._den
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if type(other) is not WeilElement:
            if type(other) is int:
                if other == 0:
                    return self.algebra._zero
                if other == 1:
                    return self
                return _build(
                    self.algebra, {m: v * other for m, v in self._c.items()}, self._den
                )
            if isinstance(other, Fraction):
                return _build(
                    self.algebra,
                    {m: v * other.numerator for m, v in self._c.items()},
                    self._den * other.denominator,
                )
            other = self._coerce(other)
            if other is None:
                return NotImplemented
        elif other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatch(
                f"cannot combine {self.algebra!r} with {other.algebra!r}"
            )
        if not self._c or not other._c:
            return self.algebra._zero
        killed = self.algebra.killed
        out: dict[int, int] = {}
        get = out.get
        items2 = list(other._c.items())
        if killed:
            for m1, v1 in self._c.items():
                for m2, v2 in items2:
                    if m1 & m2:
                        continue  # repeated generator: square-zero
                    m = m1 | m2
                    if m in killed:
                        continue
                    out[m] = get(m, 0) + v1 * v2
        else:
            for m1, v1 in self._c.items():
                for m2, v2 in items2:
                    if m1 & m2:
                        continue
                    m = m1 | m2
                    out[m] = get(m, 0) + v1 * v2
        return _build(self.algebra, out, self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, WeilElement):
            return self * other.invert()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = self.algebra.one
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def invert(self) -> "WeilElement":
        """Exact two-sided inverse via the finite geometric series of the
        nilpotent part."""
        c0 = self.constant_term()
        if c0 == 0:
            raise NotInvertible(f"no constant term in {self}")
        # self = c0 (1 + u) with u nilpotent
        u = _build(
            self.algebra,
            {m: v * c0.denominator for m, v in self._c.items() if m != 0},
            self._den * c0.numerator,
        )
        inv = self.algebra.one
        power = u
        sign = -1
        while not power.is_zero():
            inv = inv + power * sign
            power = power * u
            sign = -sign
        return inv * (Fraction(1) / c0)

    # -- quotients and substitution ------------------------------------------

    def restrict(self, kill: Iterable[Iterable[str]]) -> "WeilElement":
        """Image in the quotient by the extra killed monomials."""
        target = self.algebra.kill(kill)
        if target is self.algebra:
            return self
        out = {m: v for m, v in self._c.items() if m not in target.killed}
        return _build(target, out, self._den)

    def convert(self, target: WeilAlgebra) -> "WeilElement":
        """Re-express in another algebra containing the same generator names.

        Every monomial in the support must exist (and survive) there."""
        if target is self.algebra or target == self.algebra:
            return WeilElement(target, dict(self._c), self._den)
        out: dict[int, int] = {}
        for m, v in self._c.items():
            mask = target.mask(self.algebra.mono_names(m))
            if mask in target.killed:
                raise AlgebraMismatch(
                    f"monomial {self.algebra.mono_names(m)} is killed in {target!r}"
                )
            out[mask] = v
        return WeilElement(target, out, self._den)

    def subs(
        self,
        mapping: Mapping[str, "WeilElement | Scalar"],
        into: WeilAlgebra | None = None,
    ) -> "WeilElement":
        """Ring homomorphism determined by generator images.

        Each image must be 0 or a WeilElement of the target algebra whose
        square is exactly zero; unmapped generators keep their names."""
        target = into if into is not None else self.algebra
        images: dict[int, WeilElement] = {}
        for name, img in mapping.items():
            i = self.algebra._index[name]
            if isinstance(img, (int, Fraction)):
                if img != 0:
                    raise SubstitutionError(
                        f"constant image {img} for {name} is not square-zero"
                    )
                images[i] = target.zero
                continue
            if img.algebra != target:
                raise AlgebraMismatch(
                    f"image of {name} lives in {img.algebra!r}, not the target"
                )
            if not (img * img).is_zero():
                raise SubstitutionError(f"image of {name} is not square-zero")
            images[i] = img
        out = target.zero
        for m, v in self._c.items():
            term = target.scalar(Fraction(v, self._den))
            for i, g in enumerate(self.algebra.names):
                if not (m >> i & 1):
                    continue
                img = images.get(i)
                term = term * (target.gen(g) if img is None else img)
                if term.is_zero():
                    break
            out = out + term
        return out

    # -- comparison and display ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, WeilElement):
            return NotImplemented
        if other.algebra != self.algebra:
            raise AlgebraMismatch(
                f"cannot compare across {self.algebra!r} and {other.algebra!r}"
            )
        return self._den == other._den and self._c == other._c

    def __hash__(self):
        return hash((self.algebra, self._den, tuple(sorted(self._c.items()))))

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for m in sorted(self._c, key=lambda m: (bin(m).count("1"), m)):
            c = Fraction(self._c[m], self._den)
            names = "*".join(self.algebra.mono_names(m))
            if m == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(names)
            elif c == -1:
                parts.append(f"-{names}")
            else:
                parts.append(f"{c}*{names}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"WeilElement({self})"
