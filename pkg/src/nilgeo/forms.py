"""Kernel-valued differential forms and the covariant exterior derivative.

A form of degree n eats micro-n-cubes of the downstairs groupoid and
returns kernel tangents at the same anchor.  Validation checks the
homogeneity and alternation laws pointwise-exactly on supplied samples.

The degree-raising derivative builds, for each cube argument, the value on
the frozen slice times the conjugated, reversed value on the moved slice,
inverts the odd-numbered factors and multiplies ascending; the result is
read off the coefficient of the full product monomial, and the vanishing
of every other coefficient is asserted on each evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Sequence

from .connection import Connection, curvature
from .matrices import Matrix
from .microcalc import (
    Microcube,
    TangentData,
    arrow_drop,
    edge,
    from_tangent,
    include_tangent,
    permute,
    perm_sign,
    scale_arg,
    slice_cube,
)
from .models import GroupoidModel, compose, compose_all, invert
from .polynomials import PolyMatrix


class FormError(ValueError):
    """A form value or derivative word violated its structural contract."""


@dataclass(frozen=True)
class Form:
    """Degree-n evaluator from downstairs micro-n-cubes to kernel tangents."""

    model: GroupoidModel
    degree: int
    fn: Callable[[Microcube], TangentData]

    def __call__(self, cube: Microcube) -> TangentData:
        if cube.degree != self.degree:
            raise FormError(f"form of degree {self.degree} fed a {cube.degree}-cube")
        value = self.fn(cube)
        if value.grp != "L":
            raise FormError("form value must be a kernel tangent")
        if value.anchor != tuple(c.convert(value.algebra) for c in cube.anchor):
            raise FormError("form value sits over the wrong fiber")
        return value


def zero_form(model: GroupoidModel, degree: int) -> Form:
    def fn(cube: Microcube) -> TangentData:
        alg = cube.algebra
        size = model.spec("L").size
        zero = alg.zero
        return TangentData(
            model, "L", cube.anchor, tuple(zero for _ in cube.anchor), Matrix.zero(size, alg)
        )

    return Form(model, degree, fn)


def curvature_form(conn: Connection) -> Form:
    return Form(conn.model, 2, lambda cube: curvature(conn, cube))


def gauge_one_form(model: GroupoidModel, coeffs: Sequence[PolyMatrix]) -> Form:
    """One-form on a coordinate base from per-axis coefficient matrices."""
    if len(coeffs) != model.base_dim:
        raise FormError("one coefficient matrix per base axis")

    def fn(t: Microcube) -> TangentData:
        td = from_tangent(t)
        alg = td.algebra
        size = model.spec("L").size
        vert = Matrix.zero(size, alg)
        for pm, v in zip(coeffs, td.direction):
            if not v.is_zero():
                vert = vert + pm(td.anchor) * v
        zero = alg.zero
        return TangentData(
            model, "L", td.anchor, tuple(zero for _ in td.anchor), vert
        )

    return Form(model, 1, fn)


def splitting_one_form(model: GroupoidModel, images: Sequence) -> Form:
    """One-form on a one-point model: a linear map from downstairs tangent
    coordinates into the kernel's coefficient matrices."""

    imgs = tuple(
        tuple(tuple(Fraction(v) for v in row) for row in img) for img in images
    )

    def fn(t: Microcube) -> TangentData:
        td = from_tangent(t)
        alg = td.algebra
        coords = model.g_coords(td.vert)
        if len(coords) != len(imgs):
            raise FormError("one image per downstairs direction required")
        vert = Matrix.zero(model.spec("L").size, alg)
        for c, img in zip(coords, imgs):
            if not c.is_zero():
                vert = vert + Matrix.from_rational(img, alg) * c
        return TangentData(model, "L", td.anchor, (), vert)

    return Form(model, 1, fn)


DEFAULT_SCALARS = (0, 1, -1, 2, Fraction(1, 2))


def validate_form(
    form: Form,
    samples: Sequence[Microcube],
    scalars: Sequence = DEFAULT_SCALARS,
) -> list[str]:
    """Check homogeneity in every slot and full alternation on each sample;
    returns human-readable violation entries (empty means the form passed)."""
    violations: list[str] = []
    for k, cube in enumerate(samples):
        base = form(cube)
        for i in range(1, form.degree + 1):
            for a in scalars:
                got = form(scale_arg(cube, i, a))
                if not got.same_as(base.scale(a)):
                    violations.append(f"sample {k}: homogeneity fails in slot {i} at a={a}")
        for theta in permutations(range(1, form.degree + 1)):
            got = form(permute(cube, theta))
            if not got.same_as(base.scale(perm_sign(theta))):
                violations.append(f"sample {k}: alternation fails for {theta}")
    return violations


def d_nabla(conn: Connection, form: Form) -> Form:
    """Covariant exterior derivative; degrees one and two are the supported
    inputs (the evaluator itself is uniform in the degree)."""
    if form.degree < 1:
        raise FormError("derivative needs a form of degree at least one")

    def fn(cube: Microcube) -> TangentData:
        return _derivative_value(conn, form, cube)

    return Form(form.model, form.degree + 1, fn)


def _derivative_value(conn: Connection, form: Form, cube: Microcube) -> TangentData:
    args = cube.args
    alg = cube.algebra
    model = cube.model
    total = None
    for i in range(1, cube.degree + 1):
        others = tuple(g for k, g in enumerate(args, 1) if k != i)
        mono = alg.term(1, others)
        lifted_edge = conn.apply(from_tangent(edge(cube, i)))
        gi = lifted_edge.arrow_at(alg.gen(args[i - 1]))
        v0 = include_tangent(form(slice_cube(cube, i, 0)))
        vi = include_tangent(form(slice_cube(cube, i, args[i - 1])))
        inner = compose_all(invert(gi), vi.arrow_at(-mono), gi)
        if not model.kernel_test(inner):
            raise FormError("conjugated form value left the kernel")
        factor = compose(v0.arrow_at(mono), inner)
        if i % 2 == 1:
            factor = invert(factor)
        total = factor if total is None else compose(total, factor)
    for g in args:
        if not arrow_drop(total, (g,)).is_identity():
            raise FormError("derivative word has residual non-top coefficients")
    if not model.kernel_test(total):
        raise FormError("derivative word is not kernel-valued")
    vert = total.body.coefficient(args)
    zero = alg.zero
    return TangentData(model, "L", cube.anchor, tuple(zero for _ in cube.anchor), vert)
