"""Connections on the exact sequence L -> H -> G and their curvature.

A connection is fiberwise-linear lift data: a splitting matrix on the
downstairs tangent coordinates (one-point models) or vertical coefficient
polynomials over the base (gauge models).  The lift of a microsquare, the
curvature word and its strong-difference characterization all reduce to
exact Weil-matrix words.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .matrices import Matrix
from .microcalc import (
    Microcube,
    Section,
    TangentData,
    as_kernel_tangent,
    bisection_product,
    bracket_sections,
    from_tangent,
    make_microcube,
    arrow_drop,
    slice_cube,
    strong_diff,
    transpose,
)
from .models import (
    GroupoidModel,
    Point,
    TrivialGaugeModel,
    compose,
    compose_all,
    invert,
)
from .polynomials import Poly, PolyMatrix
from .weil import WeilAlgebra, algebra


class ConnectionError_(ValueError):
    """Connection data violates the section or linearity contract."""


class CurvatureError(ValueError):
    """The curvature word came out structurally wrong (broken model data)."""


class SplittingConnection:
    """One-point models: a linear right inverse of the projection on
    tangent coordinates, given by images of the coordinate directions."""

    def __init__(self, model: GroupoidModel, images: Sequence):
        self.model = model
        self.images = tuple(
            tuple(tuple(Fraction(v) for v in row) for row in img) for img in images
        )
        basis = model.lie_basis("G")
        if len(self.images) != len(basis):
            raise ConnectionError_("one image per downstairs direction required")
        alg0 = algebra([])
        for img, b in zip(self.images, basis):
            down = model.project_vert(Matrix.from_rational(img, alg0))
            if down != Matrix.from_rational(b, alg0):
                raise ConnectionError_("images do not split the projection")

    def apply(self, td: TangentData) -> TangentData:
        if td.grp != "G":
            raise ConnectionError_("connections lift G-tangents")
        alg = td.algebra
        coords = self.model.g_coords(td.vert)
        vert = Matrix.zero(self.model.spec("H").size, alg)
        for c, img in zip(coords, self.images):
            if not c.is_zero():
                vert = vert + Matrix.from_rational(img, alg) * c
        return TangentData(self.model, "H", td.anchor, td.direction, vert)


class GaugeConnection:
    """Gauge models: vertical coefficient matrices, polynomial in the base
    point.  The lift of a velocity v at x has body I - d * (sum_i A_i(x) v_i),
    the parallel-transport convention that lines the curvature up with the
    classical coefficient formula dA + A^A on coordinate squares."""

    def __init__(self, model: TrivialGaugeModel, coeffs: Sequence[PolyMatrix]):
        if not isinstance(model, TrivialGaugeModel):
            raise ConnectionError_("vertical coefficients need a gauge model")
        if len(coeffs) != model.base_dim:
            raise ConnectionError_("one coefficient matrix per base axis")
        size = model.spec("H").size
        for pm in coeffs:
            if pm.size != size:
                raise ConnectionError_("coefficient size must match the structure group")
            if model.structure == "sl2" and not pm.trace_is_zero():
                raise ConnectionError_("sl2 coefficients must be traceless")
        self.model = model
        self.coeffs = tuple(coeffs)
        self._at: dict = {}

    def _coefficients_at(self, x):
        # anchors repeat heavily across slices of one cube
        cached = self._at.get(x)
        if cached is None:
            cached = tuple(pm(x) for pm in self.coeffs)
            self._at[x] = cached
        return cached

    def apply(self, td: TangentData) -> TangentData:
        if td.grp != "G":
            raise ConnectionError_("connections lift G-tangents")
        alg = td.algebra
        size = self.model.spec("H").size
        vert = Matrix.zero(size, alg)
        for mat, v in zip(self._coefficients_at(td.anchor), td.direction):
            if not v.is_zero():
                vert = vert - mat * v
        return TangentData(self.model, "H", td.anchor, td.direction, vert)


Connection = SplittingConnection | GaugeConnection


class LiftedSection(Section):
    """The H-section obtained by lifting a G-section through a connection."""

    def __init__(self, conn: Connection, base: Section):
        if base.grp != "G":
            raise ConnectionError_("only G-sections lift")
        self.model = base.model
        self.grp = "H"
        self.conn = conn
        self.base = base

    def at(self, x: Point, alg: WeilAlgebra) -> TangentData:
        return self.conn.apply(self.base.at(x, alg))


# ---------------------------------------------------------------------------
# named presets


def preset_names(model: GroupoidModel) -> tuple[str, ...]:
    if model.name == "heisenberg":
        return ("standard",)
    if model.name == "direct_product":
        return ("standard",)
    if model.name.startswith("trivial_gauge[scalar]"):
        return ("x1dx2",)
    return ("standard",)


def preset_connection(model: GroupoidModel, name: str = "standard") -> Connection:
    if model.name == "heisenberg" and name == "standard":
        return SplittingConnection(
            model,
            (
                ((0, 1, 0), (0, 0, 0), (0, 0, 0)),
                ((0, 0, 0), (0, 0, 1), (0, 0, 0)),
            ),
        )
    if model.name == "direct_product" and name == "standard":
        images = []
        for i in range(2):
            for j in range(2):
                rows = [[Fraction(0)] * 3 for _ in range(3)]
                rows[i][j] = Fraction(1)
                if i == j:
                    rows[2][2] = Fraction(1)
                images.append(tuple(tuple(r) for r in rows))
        return SplittingConnection(model, images)
    if isinstance(model, TrivialGaugeModel):
        z = Poly(2, {})
        x1 = Poly.var(2, 0)
        x2 = Poly.var(2, 1)
        if model.structure == "scalar" and name in ("x1dx2", "standard"):
            return GaugeConnection(
                model, (PolyMatrix(((z,),)), PolyMatrix(((x1,),)))
            )
        if model.structure == "gl2" and name == "standard":
            a1 = PolyMatrix(((z, x2), (z, z)))
            a2 = PolyMatrix(((z, z), (x1, z)))
            return GaugeConnection(model, (a1, a2))
        if model.structure == "sl2" and name == "standard":
            a1 = PolyMatrix(((x2, z), (z, -1 * x2)))
            a2 = PolyMatrix(((z, x1), (z, z)))
            return GaugeConnection(model, (a1, a2))
    raise KeyError(f"no preset {name!r} for model {model.name}")


# ---------------------------------------------------------------------------
# lift to microsquares


def nabla_tangent(conn: Connection, t: Microcube) -> Microcube:
    """Lift a degree-one cube fiberwise."""
    return conn.apply(from_tangent(t)).tangent(t.args[0], t.algebra)


def lift(conn: Connection, cube: Microcube) -> Microcube:
    """Lift a microsquare: the d2-edge moved to the d1-frozen fiber,
    composed with the lift of the bottom edge."""
    if cube.degree != 2:
        raise CurvatureError("lift expects a microsquare")
    d1, d2 = cube.args
    alg = cube.algebra
    t1 = conn.apply(from_tangent(slice_cube(cube, 1, d1)))
    t2 = conn.apply(from_tangent(slice_cube(cube, 2, 0)))
    arrow = compose(t1.arrow_at(alg.gen(d2)), t2.arrow_at(alg.gen(d1)))
    return make_microcube(arrow, cube.args)


# ---------------------------------------------------------------------------
# curvature


def curvature(conn: Connection, cube: Microcube) -> TangentData:
    """The kernel-valued tangent measuring the holonomy defect of the lift
    around a microsquare; unique through the top coefficient of the word."""
    if cube.degree != 2:
        raise CurvatureError("curvature expects a microsquare")
    d1, d2 = cube.args
    alg = cube.algebra
    g1, g2 = alg.gen(d1), alg.gen(d2)
    a_bottom0 = conn.apply(from_tangent(slice_cube(cube, 2, 0))).arrow_at(g1)
    a_side1 = conn.apply(from_tangent(slice_cube(cube, 1, d1))).arrow_at(g2)
    a_bottom2 = conn.apply(from_tangent(slice_cube(cube, 2, d2))).arrow_at(g1)
    a_side0 = conn.apply(from_tangent(slice_cube(cube, 1, 0))).arrow_at(g2)
    word = compose_all(invert(a_bottom0), invert(a_side1), a_bottom2, a_side0)
    for d in (d1, d2):
        if not arrow_drop(word, (d,)).is_identity():
            raise CurvatureError("curvature word has nonidentity edge values")
    model = cube.model
    if not model.kernel_test(word):
        raise CurvatureError("curvature residue is not kernel-valued")
    if word.source != cube.anchor or word.target != cube.anchor:
        raise CurvatureError("curvature word is not a loop at the anchor")
    vert = word.body.coefficient((d1, d2))
    zero = alg.zero
    return TangentData(
        model, "L", cube.anchor, tuple(zero for _ in cube.anchor), vert
    )


def curvature_via_strong_diff(conn: Connection, cube: Microcube) -> TangentData:
    """Equivalent computation: transpose-lift-transpose against the plain
    lift, compared by strong difference."""
    lifted = lift(conn, cube)
    other = transpose(lift(conn, transpose(cube)))
    return as_kernel_tangent(strong_diff(other, lifted))


# ---------------------------------------------------------------------------
# the structure equation


def structure_equation(
    conn: Connection,
    x_sec: Section,
    y_sec: Section,
    x: Point,
    alg: WeilAlgebra,
    check_product_lift: bool = True,
):
    """Both sides of the curvature structure equation at the point x.

    Left: curvature of the bisection square of the two sections.
    Right: lift of the section bracket minus the bracket of the lifts.
    Returns the pair of kernel tangents (exactly comparable)."""
    d1 = alg.fresh_name("s1")
    ext = alg.extend(d1)
    d2 = ext.fresh_name("s2")
    ext = ext.extend(d2)
    xe = tuple(c.convert(ext) for c in x)
    square = bisection_product(y_sec, x_sec, xe, (d1, d2), ext)
    lhs = curvature(conn, square).convert(alg)

    xy = bracket_sections(x_sec, y_sec, x, alg)
    lift_x = LiftedSection(conn, x_sec)
    lift_y = LiftedSection(conn, y_sec)
    rhs_h = conn.apply(xy) - bracket_sections(lift_x, lift_y, x, alg)
    rhs = as_kernel_tangent(rhs_h)

    if check_product_lift:
        # the lift distributes over the bisection square
        lifted_square = lift(conn, square)
        product_of_lifts = bisection_product(lift_y, lift_x, xe, (d1, d2), ext)
        if lifted_square.arrow != product_of_lifts.arrow:
            raise CurvatureError("lift does not distribute over the bisection square")
    return lhs, rhs
