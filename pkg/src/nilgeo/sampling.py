"""Seeded random generation of test data.

Everything is drawn from an explicit `random.Random` in a fixed order, so
a seed fully determines every sampled element, cube, section and
connection: runs are bit-reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd
from typing import Sequence

from .connection import GaugeConnection, SplittingConnection
from .matrices import Matrix
from .microcalc import ConstantSection, Microcube, PolySection, Section, make_microcube
from .models import (
    Arrow,
    BlockDiagonal,
    FixedIdentity,
    GeneralLinear,
    GroupoidModel,
    PatternGroup,
    Point,
    TrivialGaugeModel,
    UnitDeterminant,
)
from .polynomials import Poly, PolyMatrix
from .weil import WeilAlgebra, WeilElement, _build as weil_build

DENOMINATORS = (1, 1, 1, 2, 3)


def sample_rational(rng: random.Random, bound: Fraction = Fraction(2)) -> Fraction:
    den = rng.choice(DENOMINATORS)
    top = int(bound * den)
    return Fraction(rng.randint(-top, top), den)


def sample_weil(
    rng: random.Random, alg: WeilAlgebra, bound: Fraction = Fraction(2)
) -> WeilElement:
    draws = {}
    den = 1
    for mask in range(1 << len(alg.names)):
        if mask in alg.killed:
            continue
        q = sample_rational(rng, bound)
        if q:
            draws[mask] = q
            den = den * q.denominator // gcd(den, q.denominator)
    table = {m: q.numerator * (den // q.denominator) for m, q in draws.items()}
    return weil_build(alg, table, den)


def sample_lie_rows(
    rng: random.Random, model: GroupoidModel, grp: str, bound: Fraction = Fraction(2)
):
    """Random rational matrix in the layer's coefficient pattern."""
    basis = model.lie_basis(grp)
    size = model.spec(grp).size
    rows = [[Fraction(0)] * size for _ in range(size)]
    for b in basis:
        q = sample_rational(rng, bound)
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                rows[i][j] += q * v
    return tuple(tuple(r) for r in rows)


def sample_vert(
    rng: random.Random,
    model: GroupoidModel,
    grp: str,
    alg: WeilAlgebra,
    bound: Fraction = Fraction(2),
) -> Matrix:
    return Matrix.from_rational(sample_lie_rows(rng, model, grp, bound), alg)


def sample_point(
    rng: random.Random,
    model: GroupoidModel,
    alg: WeilAlgebra,
    bound: Fraction = Fraction(2),
) -> Point:
    return tuple(alg.scalar(sample_rational(rng, bound)) for _ in range(model.base_dim))


def _constant_member(rng: random.Random, spec, bound: Fraction):
    """Random rational matrix satisfying the spec, built by closure."""
    n = spec.size
    if isinstance(spec, FixedIdentity):
        return tuple(
            tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
            for i in range(n)
        )
    if isinstance(spec, PatternGroup):
        rows = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        for i, j in spec.free:
            rows[i][j] = sample_rational(rng, bound)
        return tuple(tuple(r) for r in rows)
    if isinstance(spec, GeneralLinear):
        while True:
            rows = tuple(
                tuple(sample_rational(rng, bound) for _ in range(n)) for _ in range(n)
            )
            from .models import _rational_det

            if _rational_det(rows) != 0:
                return rows
    if isinstance(spec, UnitDeterminant):
        # product of shears keeps the determinant pinned at one
        a, b, c = (sample_rational(rng, bound) for _ in range(3))
        return (
            (1 + a * b, a + c + a * b * c),
            (b, 1 + b * c),
        )
    if isinstance(spec, BlockDiagonal):
        first = _constant_member(rng, spec.first, bound)
        second = _constant_member(rng, spec.second, bound)
        k = spec.first.size
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(k):
            for j in range(k):
                rows[i][j] = first[i][j]
        for i in range(n - k):
            for j in range(n - k):
                rows[k + i][k + j] = second[i][j]
        return tuple(tuple(r) for r in rows)
    raise TypeError(f"no sampler for spec {spec!r}")


def sample_body(
    rng: random.Random,
    model: GroupoidModel,
    grp: str,
    alg: WeilAlgebra,
    bound: Fraction = Fraction(2),
) -> Matrix:
    """Random group member over the full ambient algebra: a random constant
    member times one perturbation per ambient monomial."""
    spec = model.spec(grp)
    body = Matrix.from_rational(_constant_member(rng, spec, bound), alg)
    size = spec.size
    if model.lie_basis(grp):
        for mask in range(1, 1 << len(alg.names)):
            if mask in alg.killed:
                continue
            mono = alg.term(1, alg.mono_names(mask))
            body = body * (
                Matrix.identity(size, alg)
                + sample_vert(rng, model, grp, alg, bound) * mono
            )
    return body


def sample_arrow(
    rng: random.Random,
    model: GroupoidModel,
    grp: str,
    alg: WeilAlgebra,
    x: Point | None = None,
    y: Point | None = None,
    bound: Fraction = Fraction(2),
) -> Arrow:
    """Random arrow; endpoints may be any Weil-valued points."""
    if x is None:
        x = tuple(sample_weil(rng, alg, bound) for _ in range(model.base_dim))
    if y is None:
        y = tuple(sample_weil(rng, alg, bound) for _ in range(model.base_dim))
    if grp == "L":
        y = x
    return model.check(Arrow(model, grp, x, y, sample_body(rng, model, grp, alg, bound)))


def sample_microcube(
    rng: random.Random,
    model: GroupoidModel,
    grp: str,
    args: Sequence[str],
    alg: WeilAlgebra,
    x: Point | None = None,
    bound: Fraction = Fraction(2),
) -> Microcube:
    """Random cube built as a product of per-monomial perturbations, so
    membership holds by group closure."""
    args = tuple(args)
    if x is None:
        x = sample_point(rng, model, alg, bound)
    size = model.spec(grp).size
    body = Matrix.identity(size, alg)
    target = list(x)
    masks = [m for m in range(1, 1 << len(args)) if _names(args, m)]
    masks.sort(key=lambda m: (bin(m).count("1"), m))
    has_lie = bool(model.lie_basis(grp))
    for m in masks:
        mono = alg.term(1, _names(args, m))
        if has_lie:
            body = body * (
                Matrix.identity(size, alg) + sample_vert(rng, model, grp, alg, bound) * mono
            )
        for k in range(model.base_dim):
            target[k] = target[k] + mono * sample_rational(rng, bound)
    arrow = Arrow(model, grp, x, tuple(target), body)
    return make_microcube(arrow, args)


def _names(args, mask):
    return tuple(g for i, g in enumerate(args) if mask >> i & 1)


def perturbed_square(
    rng: random.Random, base: Microcube, bound: Fraction = Fraction(2)
) -> Microcube:
    """A square agreeing with `base` except in the top coefficient: the
    compatible partner for difference constructions."""
    alg = base.algebra
    model = base.model
    grp = base.arrow.grp
    top = alg.term(1, base.args)
    size = model.spec(grp).size
    bump = Matrix.identity(size, alg)
    if model.lie_basis(grp):
        bump = bump + sample_vert(rng, model, grp, alg, bound) * top
    tgt = list(base.arrow.target)
    for k in range(model.base_dim):
        tgt[k] = tgt[k] + top * sample_rational(rng, bound)
    old = base.arrow
    arrow = Arrow(model, grp, old.source, tuple(tgt), bump * old.body)
    return make_microcube(arrow, base.args)


def sample_poly(
    rng: random.Random, nvars: int, degree: int, bound: Fraction = Fraction(2)
) -> Poly:
    terms = {}
    for exps in _exponents(nvars, degree):
        q = sample_rational(rng, bound)
        if q:
            terms[exps] = q
    return Poly(nvars, terms)


def _exponents(nvars, degree):
    if nvars == 0:
        return [()]
    out = []
    for head in range(degree + 1):
        for tail in _exponents(nvars - 1, degree - head):
            out.append((head,) + tail)
    return out


def sample_poly_matrix(
    rng: random.Random,
    model: GroupoidModel,
    grp: str,
    degree: int,
    bound: Fraction = Fraction(2),
) -> PolyMatrix:
    """Polynomial matrix valued in the layer's coefficient pattern."""
    basis = model.lie_basis(grp)
    size = model.spec(grp).size
    nvars = model.base_dim
    rows = [[Poly(nvars, {}) for _ in range(size)] for _ in range(size)]
    for b in basis:
        p = sample_poly(rng, nvars, degree, bound)
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                if v:
                    rows[i][j] = rows[i][j] + p * v
    return PolyMatrix(rows)


def sample_section(
    rng: random.Random,
    model: GroupoidModel,
    grp: str = "G",
    degree: int = 2,
    bound: Fraction = Fraction(2),
) -> Section:
    if model.base_dim == 0:
        return ConstantSection(model, grp, sample_lie_rows(rng, model, grp, bound))
    velocity = tuple(
        sample_poly(rng, model.base_dim, degree, bound) for _ in range(model.base_dim)
    )
    vertical = None
    if grp == "H":
        vertical = sample_poly_matrix(rng, model, "H", degree, bound)
    return PolySection(model, grp, velocity, vertical)


def sample_connection(
    rng: random.Random,
    model: GroupoidModel,
    bound: Fraction = Fraction(2),
    degree: int = 2,
):
    if isinstance(model, TrivialGaugeModel):
        coeffs = [
            sample_poly_matrix(rng, model, "H", degree, bound)
            for _ in range(model.base_dim)
        ]
        return GaugeConnection(model, coeffs)
    if model.name == "heisenberg":
        lam = sample_rational(rng, bound)
        mu = sample_rational(rng, bound)
        images = (
            ((0, 1, lam), (0, 0, 0), (0, 0, 0)),
            ((0, 0, mu), (0, 0, 1), (0, 0, 0)),
        )
        return SplittingConnection(model, images)
    if model.name == "direct_product":
        c = sample_rational(rng, bound)
        images = []
        for i in range(2):
            for j in range(2):
                rows = [[Fraction(0)] * 3 for _ in range(3)]
                rows[i][j] = Fraction(1)
                rows[2][2] = c if i == j else Fraction(0)
                images.append(tuple(tuple(r) for r in rows))
        return SplittingConnection(model, images)
    raise KeyError(f"no connection sampler for model {model.name}")
