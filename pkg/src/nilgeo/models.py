"""Concrete groupoids over Weil-valued points.

Three families ship, each packaged with the short exact sequence
L -> H -> G that the connection calculus runs on:

* ``heisenberg``      - 3x3 unipotent matrices over a one-point base; G is
                        the two-parameter abelianization, L the centre.
* ``direct_product``  - H = GL2 x GL1 block matrices with first-block
                        projection; a guaranteed-flat control.
* ``trivial_gauge``   - the gauge groupoid M x K x M over a 2-dimensional
                        coordinate base; G is the pair groupoid, L the
                        bundle of K-loops.  K is scalars, GL2 or SL2.

An arrow is (source point, target point, matrix body); both points are
coordinate tuples of Weil elements (empty over a one-point base).
Composition follows function order: ``compose(g, h)`` applies h first and
needs the source of g to equal the target of h exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matrices import Matrix
from .weil import WeilAlgebra, WeilElement

Point = tuple[WeilElement, ...]


class CompositionError(ValueError):
    """Source/target bookkeeping failed for a groupoid operation."""


class MembershipError(ValueError):
    """A matrix body does not satisfy its group's defining equations."""


# ---------------------------------------------------------------------------
# matrix group specifications


class GeneralLinear:
    """Invertible matrices: the determinant must be a unit."""

    def __init__(self, size: int):
        self.size = size
        self.name = f"GL{size}"

    def contains(self, m: Matrix) -> bool:
        if m.size != self.size:
            return False
        return _rational_det(m.constant_matrix()) != 0

    def lie_basis(self):
        return tuple(
            _unit_matrix(self.size, i, j)
            for i in range(self.size)
            for j in range(self.size)
        )


class UnitDeterminant:
    """Matrices of determinant exactly one."""

    def __init__(self, size: int):
        self.size = size
        self.name = f"SL{size}"

    def contains(self, m: Matrix) -> bool:
        if m.size != self.size:
            return False
        return m.det() == m.algebra.one

    def lie_basis(self):
        if self.size != 2:
            raise NotImplementedError
        return (
            ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(-1))),
            _unit_matrix(2, 0, 1),
            _unit_matrix(2, 1, 0),
        )


class PatternGroup:
    """Identity matrix plus free entries at fixed positions.

    Only patterns closed under multiplication are used here (strictly
    upper-triangular supports), so membership is a per-entry check.
    """

    def __init__(self, name: str, size: int, free: Sequence[tuple[int, int]]):
        self.size = size
        self.name = name
        self.free = tuple(free)

    def contains(self, m: Matrix) -> bool:
        if m.size != self.size:
            return False
        alg = m.algebra
        free = set(self.free)
        for i in range(self.size):
            for j in range(self.size):
                if (i, j) in free:
                    continue
                want = alg.one if i == j else alg.zero
                if m[i, j] != want:
                    return False
        return True

    def lie_basis(self):
        return tuple(_unit_matrix(self.size, i, j) for i, j in self.free)


class BlockDiagonal:
    """Block matrix diag(A, B) with each block constrained separately."""

    def __init__(self, first, second):
        self.first = first
        self.second = second
        self.size = first.size + second.size
        self.name = f"{first.name}x{second.name}"

    def contains(self, m: Matrix) -> bool:
        if m.size != self.size:
            return False
        k = self.first.size
        zero = m.algebra.zero
        for i in range(self.size):
            for j in range(self.size):
                if (i < k) != (j < k) and m[i, j] != zero:
                    return False
        a = Matrix(tuple(tuple(m[i, j] for j in range(k)) for i in range(k)))
        b = Matrix(
            tuple(
                tuple(m[i, j] for j in range(k, self.size))
                for i in range(k, self.size)
            )
        )
        return self.first.contains(a) and self.second.contains(b)

    def lie_basis(self):
        k = self.first.size
        out = []
        for block, offset in ((self.first, 0), (self.second, k)):
            for base in block.lie_basis():
                rows = [[Fraction(0)] * self.size for _ in range(self.size)]
                for i, row in enumerate(base):
                    for j, v in enumerate(row):
                        rows[offset + i][offset + j] = Fraction(v)
                out.append(tuple(tuple(r) for r in rows))
        return tuple(out)


class FixedIdentity:
    """The one-element group {I}."""

    def __init__(self, size: int):
        self.size = size
        self.name = f"I{size}"

    def contains(self, m: Matrix) -> bool:
        return m.size == self.size and m.is_identity()

    def lie_basis(self):
        return ()


def _unit_matrix(n, i, j):
    return tuple(
        tuple(Fraction(1) if (r, c) == (i, j) else Fraction(0) for c in range(n))
        for r in range(n)
    )


def _rational_det(rows) -> Fraction:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        return (
            rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
            - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
            + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
        )
    raise NotImplementedError


# ---------------------------------------------------------------------------
# arrows


@dataclass(frozen=True)
class Arrow:
    """Groupoid arrow: matrix body travelling from source to target."""

    model: "GroupoidModel"
    grp: str  # which groupoid of the exact sequence: "H", "G" or "L"
    source: Point
    target: Point
    body: Matrix

    @property
    def algebra(self) -> WeilAlgebra:
        return self.body.algebra

    def is_identity(self) -> bool:
        return self.source == self.target and self.body.is_identity()


def compose(g: Arrow, h: Arrow) -> Arrow:
    """g after h; defined only when the source of g is the target of h."""
    if g.model is not h.model or g.grp != h.grp:
        raise CompositionError("arrows from different groupoids")
    if g.source != h.target:
        raise CompositionError("source/target mismatch")
    return Arrow(g.model, g.grp, h.source, g.target, g.body * h.body)


def compose_all(*arrows: Arrow) -> Arrow:
    """Compose right-to-left: the last argument is applied first."""
    out = arrows[-1]
    for a in reversed(arrows[:-1]):
        out = compose(a, out)
    return out


def invert(g: Arrow) -> Arrow:
    return Arrow(g.model, g.grp, g.target, g.source, g.body.inverse())


# ---------------------------------------------------------------------------
# groupoid models


class GroupoidModel:
    """Shared behaviour; concrete models fix the exact-sequence data."""

    name: str
    base_dim: int

    def spec(self, grp: str):
        return {"H": self._h, "G": self._g, "L": self._l}[grp]

    def identity(self, grp: str, x: Point, alg: WeilAlgebra) -> Arrow:
        return Arrow(self, grp, x, x, Matrix.identity(self.spec(grp).size, alg))

    def validate(self, arrow: Arrow) -> bool:
        """Exact membership: defining equations hold identically and the
        base coordinates have the right arity (L-arrows are loops)."""
        if len(arrow.source) != self.base_dim or len(arrow.target) != self.base_dim:
            return False
        if arrow.grp == "L" and arrow.source != arrow.target:
            return False
        return self.spec(arrow.grp).contains(arrow.body)

    def check(self, arrow: Arrow) -> Arrow:
        if not self.validate(arrow):
            raise MembershipError(
                f"invalid {arrow.grp}-arrow in {self.name}: {arrow.body!r}"
            )
        return arrow

    def kernel_test(self, h: Arrow) -> bool:
        """True when the arrow projects to an identity arrow downstairs."""
        return self.project(h).is_identity()

    def include(self, l: Arrow) -> Arrow:
        """The canonical injection of the kernel; bodies embed unchanged."""
        if l.grp != "L":
            raise CompositionError("include expects an L-arrow")
        self.check(l)
        return Arrow(self, "H", l.source, l.target, l.body)

    def as_kernel(self, h: Arrow) -> Arrow:
        """Inverse of `include` on its image."""
        if not self.kernel_test(h):
            raise MembershipError("arrow is not in the kernel")
        return self.check(Arrow(self, "L", h.source, h.target, h.body))

    # subclasses: project, project_vert, g_coords, lie_basis, label


class HeisenbergModel(GroupoidModel):
    """Central extension over a point: unipotent 3x3 upper-triangular H."""

    base_dim = 0
    name = "heisenberg"

    def __init__(self):
        self._h = PatternGroup("unipotent3", 3, ((0, 1), (1, 2), (0, 2)))
        self._g = PatternGroup("two-param-abelian", 3, ((0, 1), (0, 2)))
        self._l = PatternGroup("centre", 3, ((0, 2),))

    def project(self, h: Arrow) -> Arrow:
        if h.grp != "H":
            raise CompositionError("project expects an H-arrow")
        alg = h.algebra
        b = h.body
        rows = (
            (alg.one, b[0, 1], b[1, 2]),
            (alg.zero, alg.one, alg.zero),
            (alg.zero, alg.zero, alg.one),
        )
        return Arrow(self, "G", h.source, h.target, Matrix(rows))

    def project_vert(self, w: Matrix) -> Matrix:
        alg = w.algebra
        z = alg.zero
        return Matrix(((z, w[0, 1], w[1, 2]), (z, z, z), (z, z, z)))

    def g_coords(self, vert: Matrix) -> tuple[WeilElement, ...]:
        return (vert[0, 1], vert[0, 2])

    def lie_basis(self, grp: str):
        return self.spec(grp).lie_basis()


class DirectProductModel(GroupoidModel):
    """H = GL2 x GL1 with first-block projection; every splitting induced
    by a Lie morphism into the scalar factor is flat."""

    base_dim = 0
    name = "direct_product"

    def __init__(self):
        self._h = BlockDiagonal(GeneralLinear(2), GeneralLinear(1))
        self._g = GeneralLinear(2)
        self._l = BlockDiagonal(FixedIdentity(2), GeneralLinear(1))

    def project(self, h: Arrow) -> Arrow:
        if h.grp != "H":
            raise CompositionError("project expects an H-arrow")
        b = h.body
        rows = ((b[0, 0], b[0, 1]), (b[1, 0], b[1, 1]))
        return Arrow(self, "G", h.source, h.target, Matrix(rows))

    def project_vert(self, w: Matrix) -> Matrix:
        return Matrix(((w[0, 0], w[0, 1]), (w[1, 0], w[1, 1])))

    def g_coords(self, vert: Matrix) -> tuple[WeilElement, ...]:
        return (vert[0, 0], vert[0, 1], vert[1, 0], vert[1, 1])

    def lie_basis(self, grp: str):
        return self.spec(grp).lie_basis()


class TrivialGaugeModel(GroupoidModel):
    """Gauge groupoid M x K x M over a coordinate base M of dimension 2."""

    base_dim = 2

    STRUCTURE_GROUPS = ("scalar", "gl2", "sl2")

    def __init__(self, structure: str = "scalar"):
        if structure not in self.STRUCTURE_GROUPS:
            raise ValueError(f"unknown structure group {structure!r}")
        self.structure = structure
        self.name = f"trivial_gauge[{structure}]"
        self._h = {
            "scalar": GeneralLinear(1),
            "gl2": GeneralLinear(2),
            "sl2": UnitDeterminant(2),
        }[structure]
        self._g = FixedIdentity(1)
        self._l = self._h

    def project(self, h: Arrow) -> Arrow:
        if h.grp != "H":
            raise CompositionError("project expects an H-arrow")
        return Arrow(self, "G", h.source, h.target, Matrix.identity(1, h.algebra))

    def project_vert(self, w: Matrix) -> Matrix:
        return Matrix(((w.algebra.zero,),))

    def g_coords(self, vert: Matrix) -> tuple[WeilElement, ...]:
        return ()

    def lie_basis(self, grp: str):
        if grp == "G":
            return ()
        return self._h.lie_basis()


# ---------------------------------------------------------------------------
# registry

MODEL_NAMES = ("heisenberg", "direct_product", "trivial_gauge")

_INSTANCES: dict[str, GroupoidModel] = {}


def build_model(name: str, structure_group: str | None = None) -> GroupoidModel:
    if name == "heisenberg":
        key = name
    elif name == "direct_product":
        key = name
    elif name == "trivial_gauge":
        structure_group = structure_group or "scalar"
        key = f"trivial_gauge[{structure_group}]"
    else:
        raise KeyError(
            f"unknown model {name!r}; registry has: {', '.join(MODEL_NAMES)}"
        )
    inst = _INSTANCES.get(key)
    if inst is None:
        if name == "heisenberg":
            inst = HeisenbergModel()
        elif name == "direct_product":
            inst = DirectProductModel()
        else:
            inst = TrivialGaugeModel(structure_group)
        _INSTANCES[key] = inst
    return inst


def all_models() -> tuple[GroupoidModel, ...]:
    """Every shipped configuration, in a fixed order."""
    return (
        build_model("heisenberg"),
        build_model("direct_product"),
        build_model("trivial_gauge", "scalar"),
        build_model("trivial_gauge", "gl2"),
        build_model("trivial_gauge", "sl2"),
    )
