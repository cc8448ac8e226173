"""Cube holonomy: edge arrows, face loops and the two Bianchi identities.

A degree-three cube downstairs determines eight fiber points, labelled

    O at the origin, A/B/C one step along each axis, D/E/F two steps
    (D = 1+2, E = 1+3, F = 2+3) and G at the far corner.

Each of the twelve cube edges lifts through the connection to an arrow
between adjacent fiber points; the reversed letter is the inverse arrow.
Face loops multiply four edges around a face.  The abstract identity says
a specific 30-letter word in the edges reduces to nothing; its symbolic
form is free cancellation, its numeric form an exact matrix identity.
The classical identity is the vanishing of the derived curvature form,
checked together with the commutation facts the reduction rides on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .connection import Connection, curvature
from .forms import curvature_form, d_nabla
from .matrices import Matrix
from .microcalc import (
    Microcube,
    from_tangent,
    include_tangent,
    slice_cube,
    slice_cube2,
)
from .models import Arrow, Point, compose, compose_all, invert
from .weil import WeilElement

# vertex name -> set of axes (1..3) that are "switched on" at that corner
VERTEX_AXES: dict[str, frozenset[int]] = {
    "O": frozenset(),
    "A": frozenset({1}),
    "B": frozenset({2}),
    "C": frozenset({3}),
    "D": frozenset({1, 2}),
    "E": frozenset({1, 3}),
    "F": frozenset({2, 3}),
    "G": frozenset({1, 2, 3}),
}

VERTICES = tuple(VERTEX_AXES)

# the six faces, oriented as the loop identities use them
FACES = (
    ("O", "A", "D", "B"),
    ("O", "B", "F", "C"),
    ("O", "C", "E", "A"),
    ("G", "D", "A", "E"),
    ("G", "E", "C", "F"),
    ("G", "F", "B", "D"),
)


class CubeBuildError(ValueError):
    """Edge arrows failed their endpoint bookkeeping."""


class WordError(ValueError):
    """A vertex word is not walkable on the cube."""


def _adjacent(x: str, y: str) -> bool:
    return len(VERTEX_AXES[x] ^ VERTEX_AXES[y]) == 1


@dataclass(frozen=True)
class CubeLabeling:
    """All twenty-four directed edge arrows of one lifted cube."""

    conn: Connection
    cube: Microcube
    edges: dict[tuple[str, str], Arrow]
    points: dict[str, Point]

    def edge_arrow(self, x: str, y: str) -> Arrow:
        return self.edges[(x, y)]


def vertex_point(cube: Microcube, vertex: str) -> Point:
    off = [g for k, g in enumerate(cube.args, 1) if k not in VERTEX_AXES[vertex]]
    return tuple(c.drop(off) for c in cube.arrow.target)


def build_cube(conn: Connection, cube: Microcube) -> CubeLabeling:
    """Lift the twelve edges; each edge from X to Y freezes the two axes
    not being walked (at their X-values) and lifts the remaining slice."""
    if cube.degree != 3:
        raise CubeBuildError("the cube machinery wants a degree-three cube")
    args = cube.args
    alg = cube.algebra
    points = {v: vertex_point(cube, v) for v in VERTICES}
    edges: dict[tuple[str, str], Arrow] = {}
    for x in VERTICES:
        for y in VERTICES:
            extra = VERTEX_AXES[y] - VERTEX_AXES[x]
            if VERTEX_AXES[x] <= VERTEX_AXES[y] and len(extra) == 1:
                (k,) = extra
                i, j = sorted(set((1, 2, 3)) - {k})
                e_i = args[i - 1] if i in VERTEX_AXES[x] else 0
                e_j = args[j - 1] if j in VERTEX_AXES[x] else 0
                t = slice_cube2(cube, i, j, e_i, e_j)
                lifted = conn.apply(from_tangent(t))
                arrow = lifted.arrow_at(alg.gen(args[k - 1]))
                cube.model.check(arrow)
                if arrow.source != points[x] or arrow.target != points[y]:
                    raise CubeBuildError(f"edge {x}{y} endpoints disagree")
                edges[(x, y)] = arrow
                edges[(y, x)] = invert(arrow)
    return CubeLabeling(conn, cube, edges, points)


def face_loop(labeling: CubeLabeling, cycle: Sequence[str]) -> Arrow:
    """Walk the four-vertex cycle X -> Y -> Z -> W -> X around one face."""
    x, y, z, w = cycle
    quad = {x, y, z, w}
    if len(quad) != 4 or not any(quad == set(f) for f in FACES):
        raise WordError(f"{cycle} does not round a face")
    pairs = ((x, y), (y, z), (z, w), (w, x))
    if not all(_adjacent(a, b) for a, b in pairs):
        raise WordError(f"{cycle} does not walk edges")
    return compose_all(
        labeling.edge_arrow(w, x),
        labeling.edge_arrow(z, w),
        labeling.edge_arrow(y, z),
        labeling.edge_arrow(x, y),
    )


def face_words(cycle: Sequence[str]) -> list[tuple[str, str]]:
    x, y, z, w = cycle
    return [(w, x), (z, w), (y, z), (x, y)]


# ---------------------------------------------------------------------------
# edge words and free reduction


def reduce_word(word: Sequence[tuple[str, str]]) -> tuple[tuple[str, str], ...]:
    """Freely cancel adjacent letter/inverse pairs; confluent in any order."""
    stack: list[tuple[str, str]] = []
    for letter in word:
        if stack and stack[-1] == (letter[1], letter[0]):
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def abstract_word() -> tuple[tuple[str, str], ...]:
    """The cube-holonomy word: conjugated far-face loops against the
    near-face loops, spelled in directed edge letters."""
    word: list[tuple[str, str]] = [("A", "O"), ("D", "A"), ("G", "D")]
    word += face_words(("G", "F", "B", "D"))
    word += face_words(("G", "E", "C", "F"))
    word += face_words(("G", "D", "A", "E"))
    word += [("D", "G"), ("A", "D"), ("O", "A")]
    word += face_words(("O", "C", "E", "A"))
    word += face_words(("O", "B", "F", "C"))
    word += face_words(("O", "A", "D", "B"))
    return tuple(word)


@dataclass(frozen=True)
class AbstractReport:
    symbolic_empty: bool
    numeric_identity: bool
    residue: tuple[tuple[str, str], ...]


def verify_abstract_bianchi(labeling: CubeLabeling) -> AbstractReport:
    word = abstract_word()
    residue = reduce_word(word)
    numeric = compose_all(*[labeling.edge_arrow(*p) for p in word])
    o = labeling.points["O"]
    ok = numeric.source == o and numeric.target == o and numeric.body.is_identity()
    return AbstractReport(residue == (), ok, residue)


def corrupt_edge(
    labeling: CubeLabeling, pair: tuple[str, str], vert_rows
) -> CubeLabeling:
    """Replace one directed edge with a top-degree perturbation of itself,
    leaving its reverse untouched: the letters still cancel symbolically,
    but the matrices no longer do."""
    cube = labeling.cube
    alg = cube.algebra
    top = alg.term(1, cube.args)
    old = labeling.edges[pair]
    bump = Matrix.identity(old.body.size, alg) + Matrix.from_rational(vert_rows, alg) * top
    new_edges = dict(labeling.edges)
    new_edges[pair] = Arrow(old.model, old.grp, old.source, old.target, old.body * bump)
    cube.model.check(new_edges[pair])
    return CubeLabeling(labeling.conn, cube, new_edges, labeling.points)


# ---------------------------------------------------------------------------
# face curvature and the classical identity


def _omega_arrow(conn: Connection, square: Microcube, w: WeilElement) -> Arrow:
    return include_tangent(curvature(conn, square)).arrow_at(w)


def face_curvature_checks(labeling: CubeLabeling) -> list[tuple[str, bool]]:
    """The three base-face loops against the curvature of the matching
    frozen slices, with the orientation signs the loop word forces."""
    conn, cube = labeling.conn, labeling.cube
    alg = cube.algebra
    d1, d2, d3 = cube.args
    checks = []
    for name, cycle, axis, mono, sign in (
        ("OADB", ("O", "A", "D", "B"), 3, (d1, d2), -1),
        ("OBFC", ("O", "B", "F", "C"), 1, (d2, d3), -1),
        ("OCEA", ("O", "C", "E", "A"), 2, (d1, d3), 1),
    ):
        loop = face_loop(labeling, cycle)
        value = _omega_arrow(
            conn, slice_cube(cube, axis, 0), alg.term(sign, mono)
        )
        checks.append((name, loop == value))
    return checks


def _commute(a: Arrow, b: Arrow) -> bool:
    return compose(a, b) == compose(b, a)


@dataclass(frozen=True)
class ClassicalReport:
    derivative_zero: bool
    commutations: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return self.derivative_zero and all(v for _, v in self.commutations)


def verify_classical_bianchi(conn: Connection, cube: Microcube) -> ClassicalReport:
    """Evaluate the derived curvature form on the cube (it must vanish) and
    assert the commutations of conjugated curvature values that let the
    edge word be rearranged into cancelling blocks."""
    value = d_nabla(conn, curvature_form(conn))(cube)
    derivative_zero = value.is_zero()

    labeling = build_cube(conn, cube)
    alg = cube.algebra
    d1, d2, d3 = cube.args

    def conj(g: Arrow, loop: Arrow) -> Arrow:
        return compose_all(invert(g), loop, g)

    f1 = _omega_arrow(conn, slice_cube(cube, 1, 0), alg.term(-1, (d2, d3)))
    f2 = _omega_arrow(conn, slice_cube(cube, 2, 0), alg.term(1, (d1, d3)))
    f3 = _omega_arrow(conn, slice_cube(cube, 3, 0), alg.term(-1, (d1, d2)))
    c1 = conj(
        labeling.edge_arrow("O", "A"),
        _omega_arrow(conn, slice_cube(cube, 1, d1), alg.term(1, (d2, d3))),
    )
    c2 = conj(
        labeling.edge_arrow("O", "B"),
        _omega_arrow(conn, slice_cube(cube, 2, d2), alg.term(-1, (d1, d3))),
    )
    c3 = conj(
        labeling.edge_arrow("O", "C"),
        _omega_arrow(conn, slice_cube(cube, 3, d3), alg.term(1, (d1, d2))),
    )
    named = {"w1": f1, "c1": c1, "w2": f2, "c2": c2, "w3": f3, "c3": c3}
    commutations = []
    keys = list(named)
    for i, a in enumerate(keys):
        for b in keys[i + 1 :]:
            commutations.append((f"{a}~{b}", _commute(named[a], named[b])))

    # the nested conjugation pattern: the far-face value carried back to C
    inner = conj(
        invert(labeling.edge_arrow("A", "E")),
        _omega_arrow(conn, slice_cube(cube, 1, d1), alg.term(-1, (d2, d3))),
    )
    nested = conj(labeling.edge_arrow("C", "E"), inner)
    far = _omega_arrow(conn, slice_cube(cube, 3, d3), alg.term(1, (d1, d2)))
    commutations.append(("nested~far", _commute(nested, far)))
    return ClassicalReport(derivative_zero, tuple(commutations))
