"""Tangent calculus over the groupoid models.

A micro-n-cube is an arrow-valued table indexed by n designated square-zero
generators: at the origin it is an identity arrow and its source never
moves.  Degree one gives tangents; degree two the microsquares that the
connection and curvature machinery consumes.

Two views of a tangent coexist here.  `Microcube` keeps the full arrow
(needed for slicing, permuting and word building); `TangentData` keeps the
linearization (anchor, boundary velocity, vertical matrix), which is the
right shape for fiberwise-linear bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .matrices import Matrix
from .models import (
    Arrow,
    CompositionError,
    GroupoidModel,
    Point,
    compose,
    compose_all,
    invert,
)
from .polynomials import Poly, PolyMatrix
from .weil import Scalar, WeilAlgebra, WeilElement


class CubeError(ValueError):
    """A would-be microcube violates the defining invariants."""


class DifferenceError(ValueError):
    """Precondition of a difference construction fails."""


# ---------------------------------------------------------------------------
# microcubes


@dataclass(frozen=True)
class Microcube:
    """An n-cube of arrows: identity at the origin, source pinned."""

    arrow: Arrow
    args: tuple[str, ...]

    @property
    def degree(self) -> int:
        return len(self.args)

    @property
    def anchor(self) -> Point:
        return self.arrow.source

    @property
    def algebra(self) -> WeilAlgebra:
        return self.arrow.algebra

    @property
    def model(self) -> GroupoidModel:
        return self.arrow.model


def arrow_map(a: Arrow, fn: Callable[[WeilElement], WeilElement]) -> Arrow:
    return Arrow(
        a.model,
        a.grp,
        tuple(fn(c) for c in a.source),
        tuple(fn(c) for c in a.target),
        a.body.map(fn),
    )


def arrow_drop(a: Arrow, names: Sequence[str]) -> Arrow:
    return arrow_map(a, lambda w: w.drop(names))


def arrow_restrict(a: Arrow, kill) -> Arrow:
    return arrow_map(a, lambda w: w.restrict(kill))


def make_microcube(arrow: Arrow, args: Sequence[str]) -> Microcube:
    """Validate the cube invariants and wrap the arrow."""
    args = tuple(args)
    if len(set(args)) != len(args):
        raise CubeError(f"repeated cube arguments: {args}")
    alg = arrow.algebra
    for g in args:
        if g not in alg.names:
            raise CubeError(f"argument {g} not in the ambient algebra")
    for c in arrow.source:
        if c.involves(args):
            raise CubeError("source must not depend on the cube arguments")
    at_zero = arrow_drop(arrow, args)
    if at_zero.target != arrow.source or not at_zero.body.is_identity():
        raise CubeError("cube is not an identity arrow at the origin")
    arrow.model.check(arrow)
    return Microcube(arrow, args)


def zero_tangent(
    model: GroupoidModel, grp: str, x: Point, alg: WeilAlgebra
) -> "TangentData":
    n = model.spec(grp).size
    zero = alg.zero
    return TangentData(model, grp, x, tuple(zero for _ in x), Matrix.zero(n, alg))


# ---------------------------------------------------------------------------
# slicing and reparametrization


def slice_cube(cube: Microcube, i: int, e) -> Microcube:
    """Freeze argument i at e and renormalize by the frozen arrow.

    `e` is 0 or a generator name; passing the argument's own name keeps it
    as a symbolic parameter of the resulting lower cube."""
    return slice_multi(cube, {i: e})


def slice_cube2(cube: Microcube, i: int, j: int, e1, e2) -> Microcube:
    if not i < j:
        raise CubeError("slice positions must be increasing")
    return slice_multi(cube, {i: e1, j: e2})


def slice_multi(cube: Microcube, frozen: dict[int, object]) -> Microcube:
    args = cube.args
    for i in frozen:
        if not 1 <= i <= len(args):
            raise CubeError(f"slice index {i} out of range")
    remaining = tuple(g for k, g in enumerate(args, 1) if k not in frozen)
    alg = cube.algebra
    rename: dict[str, str] = {}
    zeroed: list[str] = []
    for i, e in frozen.items():
        g = args[i - 1]
        if e == 0:
            zeroed.append(g)
        elif isinstance(e, str):
            if e not in alg.names:
                raise CubeError(f"generator {e} not in the ambient algebra")
            if e in remaining:
                raise CubeError(f"generator collision with remaining argument {e}")
            if e != g:
                rename[g] = e
        else:
            raise CubeError("frozen value must be 0 or a generator name")
    a = cube.arrow
    if rename:
        a = arrow_map(a, lambda w: w.rename(rename))
    if zeroed:
        a = arrow_drop(a, zeroed)
    if not remaining:
        raise CubeError("cannot slice away every argument")
    if all(e == 0 for e in frozen.values()):
        # frozen arrow is the identity; no correction factor needed
        return make_microcube(a, remaining)
    corr = arrow_drop(a, remaining)
    return make_microcube(compose(a, invert(corr)), remaining)


def edge(cube: Microcube, i: int) -> Microcube:
    """The degree-one cube along argument i (all other arguments at zero)."""
    if not 1 <= i <= cube.degree:
        raise CubeError(f"edge index {i} out of range")
    others = [g for k, g in enumerate(cube.args, 1) if k != i]
    return make_microcube(arrow_drop(cube.arrow, others), (cube.args[i - 1],))


def permute(cube: Microcube, theta: Sequence[int]) -> Microcube:
    """Precompose with the coordinate permutation theta (1-based images)."""
    args = cube.args
    if sorted(theta) != list(range(1, len(args) + 1)):
        raise CubeError(f"not a permutation of 1..{len(args)}: {theta}")
    mapping = {args[k]: args[theta[k] - 1] for k in range(len(args))}
    return make_microcube(arrow_map(cube.arrow, lambda w: w.rename(mapping)), args)


def transpose(cube: Microcube) -> Microcube:
    """Swap the two arguments of a microsquare."""
    if cube.degree != 2:
        raise CubeError("transpose expects a microsquare")
    return permute(cube, (2, 1))


def perm_sign(theta: Sequence[int]) -> int:
    sign = 1
    for i in range(len(theta)):
        for j in range(i + 1, len(theta)):
            if theta[i] > theta[j]:
                sign = -sign
    return sign


def tau(cube: Microcube, keep: int) -> Microcube:
    """Zero every argument except the kept one; the degree is unchanged."""
    if not 1 <= keep <= cube.degree:
        raise CubeError(f"tau index {keep} out of range")
    others = [g for k, g in enumerate(cube.args, 1) if k != keep]
    return make_microcube(arrow_drop(cube.arrow, others), cube.args)


def scale_arg(cube: Microcube, i: int, a: Scalar) -> Microcube:
    """Rescale argument i by the rational a."""
    if not 1 <= i <= cube.degree:
        raise CubeError(f"scale index {i} out of range")
    g = cube.args[i - 1]
    return make_microcube(
        arrow_map(cube.arrow, lambda w: w.scale_gen(g, a)), cube.args
    )


# ---------------------------------------------------------------------------
# tangent data


@dataclass(frozen=True)
class TangentData:
    """Linear data of a tangent: d |-> (anchor + d*direction, I + d*vert)."""

    model: GroupoidModel
    grp: str
    anchor: Point
    direction: Point
    vert: Matrix

    @property
    def algebra(self) -> WeilAlgebra:
        return self.vert.algebra

    def arrow_at(self, w: WeilElement) -> Arrow:
        """The arrow at parameter value w (any square-zero element)."""
        n = self.vert.size
        target = tuple(c + w * d for c, d in zip(self.anchor, self.direction))
        body = Matrix.identity(n, self.algebra) + self.vert * w
        return Arrow(self.model, self.grp, self.anchor, target, body)

    def tangent(self, arg: str, alg: WeilAlgebra | None = None) -> Microcube:
        """Reconstruct the degree-one cube in the named generator."""
        alg = (alg or self.algebra).extend(arg)
        td = self.convert(alg)
        return make_microcube(td.arrow_at(alg.gen(arg)), (arg,))

    def convert(self, alg: WeilAlgebra) -> "TangentData":
        if alg == self.algebra:
            return self
        return TangentData(
            self.model,
            self.grp,
            tuple(c.convert(alg) for c in self.anchor),
            tuple(c.convert(alg) for c in self.direction),
            self.vert.map(lambda w: w.convert(alg)),
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.direction) and all(
            w.is_zero() for row in self.vert.rows for w in row
        )

    def _check_mate(self, other: "TangentData"):
        if self.model is not other.model or self.grp != other.grp:
            raise CompositionError("tangents from different bundles")
        if self.anchor != other.anchor:
            raise CompositionError("tangents anchored at different points")

    def __add__(self, other: "TangentData") -> "TangentData":
        self._check_mate(other)
        return TangentData(
            self.model,
            self.grp,
            self.anchor,
            tuple(a + b for a, b in zip(self.direction, other.direction)),
            self.vert + other.vert,
        )

    def __sub__(self, other: "TangentData") -> "TangentData":
        self._check_mate(other)
        return TangentData(
            self.model,
            self.grp,
            self.anchor,
            tuple(a - b for a, b in zip(self.direction, other.direction)),
            self.vert - other.vert,
        )

    def scale(self, a: Scalar) -> "TangentData":
        return TangentData(
            self.model,
            self.grp,
            self.anchor,
            tuple(c * a for c in self.direction),
            self.vert * a,
        )

    def __neg__(self) -> "TangentData":
        return self.scale(-1)

    def same_as(self, other: "TangentData") -> bool:
        if self.model is not other.model or self.grp != other.grp:
            return False
        alg = self.algebra.union(other.algebra)
        a, b = self.convert(alg), other.convert(alg)
        return (
            a.anchor == b.anchor
            and a.direction == b.direction
            and a.vert == b.vert
        )


def tangent_add(t1: TangentData, t2: TangentData) -> TangentData:
    return t1 + t2


def tangent_scale(a: Scalar, t: TangentData) -> TangentData:
    return t.scale(a)


def from_tangent(t: Microcube) -> TangentData:
    """Extract the linearization of a degree-one cube."""
    if t.degree != 1:
        raise CubeError("expected a degree-one cube")
    d = t.args[0]
    direction = tuple(c.coefficient((d,)) for c in t.arrow.target)
    vert = t.arrow.body.coefficient((d,))
    return TangentData(t.model, t.arrow.grp, t.anchor, direction, vert)


def project_tangent(td: TangentData) -> TangentData:
    if td.grp != "H":
        raise CompositionError("project expects an H-tangent")
    return TangentData(
        td.model, "G", td.anchor, td.direction, td.model.project_vert(td.vert)
    )


def include_tangent(td: TangentData) -> TangentData:
    if td.grp != "L":
        raise CompositionError("include expects an L-tangent")
    return TangentData(td.model, "H", td.anchor, td.direction, td.vert)


def as_kernel_tangent(td: TangentData) -> TangentData:
    """Recognize a vertical H-tangent as a tangent of the kernel bundle."""
    if not all(c.is_zero() for c in td.direction):
        raise CompositionError("tangent has a nonzero base velocity")
    out = TangentData(td.model, "L", td.anchor, td.direction, td.vert)
    # the reconstructed arrow must satisfy the kernel group equations
    name = td.algebra.fresh_name("chk")
    probe = td.algebra.extend(name)
    td.model.check(out.convert(probe).arrow_at(probe.gen(name)))
    return out


# ---------------------------------------------------------------------------
# squares from tangents, differences


def degenerate_square(
    td: TangentData, args: tuple[str, str], alg: WeilAlgebra | None = None
) -> Microcube:
    """The microsquare t(d1*d2) concentrated in the top coefficient."""
    alg = (alg or td.algebra).extend(*args)
    t = td.convert(alg)
    w = alg.gen(args[0]) * alg.gen(args[1])
    return make_microcube(t.arrow_at(w), args)


def _shared_slice_equal(g1: Microcube, g2: Microcube, names: Sequence[str]) -> bool:
    a = arrow_drop(g1.arrow, names)
    b = arrow_drop(g2.arrow, names)
    return a == b


def _axis_diff(g2: Microcube, g1: Microcube, axis: int) -> Microcube:
    if g1.args != g2.args or g1.degree != 2:
        raise DifferenceError("differences need two microsquares on the same arguments")
    d = g1.args[axis - 1]
    if not _shared_slice_equal(g1, g2, (d,)):
        raise DifferenceError(f"squares disagree at {d} = 0")
    # subtract the coefficients of every monomial containing d, keep the rest
    def mix(w1: WeilElement, w2: WeilElement) -> WeilElement:
        return w2 - w1 + w1.drop((d,))

    a1, a2 = g1.arrow, g2.arrow
    out = Arrow(
        a1.model,
        a1.grp,
        a1.source,
        tuple(mix(c1, c2) for c1, c2 in zip(a1.target, a2.target)),
        Matrix(
            tuple(
                tuple(mix(w1, w2) for w1, w2 in zip(r1, r2))
                for r1, r2 in zip(a1.body.rows, a2.body.rows)
            )
        ),
    )
    return make_microcube(out, g1.args)


def diff1(g2: Microcube, g1: Microcube) -> Microcube:
    """Difference in the first slot; needs agreement on (0, .)."""
    return _axis_diff(g2, g1, 1)


def diff2(g2: Microcube, g1: Microcube) -> Microcube:
    """Difference in the second slot; needs agreement on (., 0)."""
    return _axis_diff(g2, g1, 2)


def strong_diff(g2: Microcube, g1: Microcube) -> TangentData:
    """Second-order discrepancy of two microsquares agreeing off the top
    coefficient; the result is a tangent at the common anchor."""
    if g1.args != g2.args or g1.degree != 2:
        raise DifferenceError("strong difference needs two microsquares on the same arguments")
    top = g1.args
    if arrow_restrict(g1.arrow, [top]) != arrow_restrict(g2.arrow, [top]):
        raise DifferenceError("squares disagree below the top coefficient")
    delta = compose(g2.arrow, invert(g1.arrow))  # both squares start at the anchor
    for d in top:
        if not arrow_drop(delta, (d,)).is_identity():
            raise DifferenceError("difference has unexpected lower-order terms")
    vert = delta.body.coefficient(top)
    direction = tuple(
        (t - s).coefficient(top) for t, s in zip(g2.arrow.target, g1.arrow.target)
    )
    # multiplying the correction from the other side must give the same data
    other = (g1.arrow.body.inverse() * g2.arrow.body).coefficient(top)
    if other != vert:
        raise DifferenceError("left/right factorizations disagree")
    return TangentData(g1.model, g1.arrow.grp, g1.anchor, direction, vert)


# ---------------------------------------------------------------------------
# sections and bisections


class Section:
    """A field of tangents over the base, evaluable at Weil-valued points."""

    model: GroupoidModel
    grp: str

    def at(self, x: Point, alg: WeilAlgebra) -> TangentData:
        raise NotImplementedError

    def __add__(self, other: "Section") -> "Section":
        return _SumSection(self, other)


class ConstantSection(Section):
    """One-point base: the section is a single Lie-coefficient matrix."""

    def __init__(self, model: GroupoidModel, grp: str, vert_rows):
        self.model = model
        self.grp = grp
        self.vert_rows = tuple(tuple(Fraction(v) for v in r) for r in vert_rows)

    def at(self, x: Point, alg: WeilAlgebra) -> TangentData:
        return TangentData(
            self.model, self.grp, x, (), Matrix.from_rational(self.vert_rows, alg)
        )


class PolySection(Section):
    """Coordinate base: velocity polynomials plus an optional vertical part."""

    def __init__(
        self,
        model: GroupoidModel,
        grp: str,
        velocity: Sequence[Poly],
        vertical: PolyMatrix | None = None,
    ):
        if len(velocity) != model.base_dim:
            raise ValueError("velocity arity must match the base dimension")
        self.model = model
        self.grp = grp
        self.velocity = tuple(velocity)
        self.vertical = vertical

    def at(self, x: Point, alg: WeilAlgebra) -> TangentData:
        direction = tuple(p(x) for p in self.velocity)
        size = self.model.spec(self.grp).size
        if self.vertical is None:
            vert = Matrix.identity(size, alg) - Matrix.identity(size, alg)
        else:
            vert = self.vertical(x)
        return TangentData(self.model, self.grp, x, direction, vert)


class _SumSection(Section):
    def __init__(self, a: Section, b: Section):
        if a.model is not b.model or a.grp != b.grp:
            raise CompositionError("cannot add sections of different bundles")
        self.model, self.grp = a.model, a.grp
        self.parts = (a, b)

    def at(self, x: Point, alg: WeilAlgebra) -> TangentData:
        a, b = self.parts
        return a.at(x, alg) + b.at(x, alg)


def bisection_at(sec: Section, w: WeilElement, x: Point) -> Arrow:
    """Evaluate the bisection at parameter w at the point x."""
    return sec.at(x, w.algebra).arrow_at(w)


def bisection_product(
    second: Section,
    first: Section,
    x: Point,
    args: tuple[str, str],
    alg: WeilAlgebra,
) -> Microcube:
    """The microsquare (d1, d2) |-> second_{d2} * first_{d1} at x, where *
    composes bisections through the moved base point."""
    d1, d2 = args
    a1 = bisection_at(first, alg.gen(d1), x)
    a2 = bisection_at(second, alg.gen(d2), a1.target)
    return make_microcube(compose(a2, a1), args)


def _commutator_word(
    t1_at: Callable[[Point], TangentData],
    t2_at: Callable[[Point], TangentData],
    x: Point,
    alg: WeilAlgebra,
    u: str,
    v: str,
) -> Arrow:
    gu, gv = alg.gen(u), alg.gen(v)
    a1 = t1_at(x).arrow_at(gu)
    a2 = t2_at(a1.target).arrow_at(gv)
    a3 = t1_at(a2.target).arrow_at(-gu)
    a4 = t2_at(a3.target).arrow_at(-gv)
    return compose_all(a4, a3, a2, a1)


def _extract_square_tangent(
    word: Arrow, x: Point, u: str, v: str, base_alg: WeilAlgebra
) -> TangentData:
    """Read the unique tangent with value `word` at the product monomial."""
    for d in (u, v):
        if not arrow_drop(word, (d,)).is_identity():
            raise CubeError("word has residual low-order coefficients")
    vert = word.body.coefficient((u, v))
    direction = tuple(
        (t - s).coefficient((u, v)) for t, s in zip(word.target, word.source)
    )
    out = TangentData(
        word.model,
        word.grp,
        tuple(c.convert(base_alg) for c in x),
        tuple(c.convert(base_alg) for c in direction),
        vert.map(lambda w: w.convert(base_alg)),
    )
    return out


def bracket_sections(
    t1: Section, t2: Section, x: Point, alg: WeilAlgebra
) -> TangentData:
    """Lie bracket of two sections at x via the four-letter bisection word."""
    u = alg.fresh_name("u")
    ext = alg.extend(u)
    v = ext.fresh_name("v")
    ext = ext.extend(v)
    xe = tuple(c.convert(ext) for c in x)
    word = _commutator_word(
        lambda p: t1.at(p, ext), lambda p: t2.at(p, ext), xe, ext, u, v
    )
    return _extract_square_tangent(word, x, u, v, alg)


def bracket(t1: TangentData, t2: TangentData) -> TangentData:
    """Lie bracket of two tangents at a shared anchor.

    Needs the four evaluations to compose, which holds over a one-point
    base and for vertical tangents; anchored sections handle the rest."""
    t1._check_mate(t2)
    alg = t1.algebra
    u = alg.fresh_name("u")
    ext = alg.extend(u)
    v = ext.fresh_name("v")
    ext = ext.extend(v)
    a, b = t1.convert(ext), t2.convert(ext)
    word = _commutator_word(lambda p: a, lambda p: b, a.anchor, ext, u, v)
    return _extract_square_tangent(word, t1.anchor, u, v, alg)
