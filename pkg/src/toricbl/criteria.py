"""Finite-generation criteria on abstract class lattices.

All cone computations are exact: a cone of classes positive on the ample
class is sliced by ``{x : x . A = 1}`` and handled as a polygon (rank 3) or
an interval (rank 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import bilinear, inverse, matvec
from .polytope import convex_hull


@dataclass(frozen=True)
class ClassLattice:
    """Rank, symmetric intersection matrix and a class with positive square."""

    form: tuple[tuple[Fraction, ...], ...]
    ample: tuple

    def __post_init__(self):
        F = self.form
        if any(F[i][j] != F[j][i] for i in range(len(F)) for j in range(len(F))):
            raise ValueError("intersection matrix is not symmetric")
        if self.dot(self.ample, self.ample) <= 0:
            raise ValueError("distinguished class must have positive square")

    @property
    def rank(self) -> int:
        return len(self.form)

    def dot(self, x, y) -> Fraction:
        return Fraction(bilinear(self.form, x, y))

    def square(self, x) -> Fraction:
        return self.dot(x, x)


@dataclass(frozen=True)
class CurveTuple:
    """Classes of irreducible curves; order matters only where stated."""

    classes: tuple[tuple, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.classes:
            raise ValueError("empty curve tuple")
        if self.labels and len(self.labels) != len(self.classes):
            raise ValueError("labels do not match classes")

    def __len__(self):
        return len(self.classes)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(self.classes[i])

    def without(self, i: int) -> "CurveTuple":
        return CurveTuple(
            self.classes[:i] + self.classes[i + 1:],
            self.labels[:i] + self.labels[i + 1:] if self.labels else (),
        )


@dataclass(frozen=True)
class EffCone:
    rays: tuple[tuple, ...]  # extremal rays in cyclic order
    indices: tuple[int, ...]  # their positions in the input tuple


class _Slice:
    """Affine chart ``x -> x / (x . A)`` of the cone of classes positive on ``A``."""

    def __init__(self, cl: ClassLattice):
        self.cl = cl
        self.ell = matvec(cl.form, cl.ample)  # x . A == ell . x
        self.drop = next(k for k, v in enumerate(self.ell) if v != 0)

    def level(self, x) -> Fraction:
        return sum(Fraction(a) * b for a, b in zip(self.ell, x))

    def point(self, x) -> tuple[Fraction, ...]:
        h = self.level(x)
        if h <= 0:
            raise ValueError(f"class {tuple(x)} is not positive on the ample class")
        return tuple(Fraction(c) / h for k, c in enumerate(x) if k != self.drop)


def _slice_polygon(cl: ClassLattice, classes: Sequence) -> tuple[_Slice, list, list[int]]:
    sl = _Slice(cl)
    pts = [sl.point(x) for x in classes]
    hull = convex_hull(pts)
    idx = [pts.index(v) for v in hull]
    return sl, hull, idx


def cone_contains(cl: ClassLattice, gens: Sequence, x) -> bool:
    """Exact membership ``x in Cone(gens)`` for generators positive on the ample class."""
    if not any(x):
        return True
    sl = _Slice(cl)
    if sl.level(x) <= 0:
        return False
    pts = [sl.point(g) for g in gens]
    p = sl.point(x)
    if cl.rank == 1:
        return bool(pts)
    if cl.rank == 2:
        return bool(pts) and min(pts)[0] <= p[0] <= max(pts)[0]
    if cl.rank != 3:
        raise NotImplementedError("cone membership is implemented for rank at most 3")
    hull = convex_hull(pts)
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        a, b = hull
        cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        return cross == 0 and min(a, b) <= p <= max(a, b)
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        if (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) < 0:
            return False
    return True


def _nsd_pair(cl: ClassLattice, x, y) -> bool:
    a, b, c = cl.square(x), cl.dot(x, y), cl.square(y)
    return a <= 0 and c <= 0 and a * c - b * b >= 0


def extremal_rays(cl: ClassLattice, tup: CurveTuple) -> EffCone:
    """Extremal rays of Cone(tuple) for rank 3, cyclically ordered."""
    if cl.rank != 3:
        raise ValueError("extremal ray ordering needs rank 3")
    _, hull, idx = _slice_polygon(cl, tup.classes)
    if len(hull) < 3:
        raise ValueError("tuple cone is not 3-dimensional")
    # rotate so the cycle starts at the earliest tuple position
    k = idx.index(min(idx))
    idx = idx[k:] + idx[:k]
    if len(idx) > 2 and idx[1] > idx[-1]:
        idx = [idx[0]] + idx[1:][::-1]
    return EffCone(tuple(tup.classes[i] for i in idx), tuple(idx))


def chain_eff_test(cl: ClassLattice, tup: CurveTuple) -> EffCone | None:
    """Eff = Cone(tuple) when the form is negative semi-definite on every facet."""
    if cl.rank != 3:
        raise ValueError(f"chain test needs rank 3, got {cl.rank}")
    cone = extremal_rays(cl, tup)
    r = cone.rays
    for i in range(len(r)):
        if not _nsd_pair(cl, r[i], r[(i + 1) % len(r)]):
            return None
    return cone


def _cross(x, y):
    return (
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    )


def dual_rays(cl: ClassLattice, cone: EffCone) -> list[tuple[Fraction, ...]]:
    """Rays of ``{D : D . C >= 0 for C in cone}``, one per facet."""
    Finv = inverse([list(row) for row in cl.form])
    out = []
    r = cone.rays
    for i in range(len(r)):
        x, y = r[i], r[(i + 1) % len(r)]
        d = matvec(Finv, _cross(x, y))
        if any(cl.dot(d, z) < 0 for z in r):
            d = [-t for t in d]
        out.append(_primitive_rational(d))
    return out


def _primitive_rational(v) -> tuple[Fraction, ...]:
    from math import gcd

    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(Fraction(x // g) for x in ints) if g else tuple(Fraction(0) for _ in v)


@dataclass(frozen=True)
class PseudoReport:
    ok: bool
    light_cone_inside: bool
    failures: tuple[tuple[tuple, str], ...]  # (nef ray, label of the curve whose removal breaks it)

    def __bool__(self):
        return self.ok


def verify_pseudogenerating(cl: ClassLattice, tup: CurveTuple, nef_rays: Sequence) -> PseudoReport:
    """Check both conditions of a pseudogenerating tuple.

    (i) the light cone lies in Cone(tuple): the ample class is inside and the
    form is negative semi-definite on every facet; (ii) every nef ray lies in
    Cone(tuple minus C) for each C of the tuple orthogonal to it.
    """
    if cl.rank == 3:
        cone = extremal_rays(cl, tup)
        r = cone.rays
        facets_ok = all(_nsd_pair(cl, r[i], r[(i + 1) % len(r)]) for i in range(len(r)))
    elif cl.rank == 2:
        sl = _Slice(cl)
        pts = sorted((sl.point(x)[0], x) for x in tup.classes)
        facets_ok = cl.square(pts[0][1]) <= 0 and cl.square(pts[-1][1]) <= 0
    else:
        raise NotImplementedError("pseudogenerating check implemented for rank 2 and 3")
    inside = facets_ok and cone_contains(cl, tup.classes, cl.ample)
    failures = []
    for D in nef_rays:
        for i, C in enumerate(tup.classes):
            if cl.dot(D, C) == 0 and not cone_contains(cl, tup.without(i).classes, D):
                failures.append((tuple(D), tup.label(i)))
    return PseudoReport(inside and not failures, inside, tuple(failures))


def orthogonal_pairs_test(cl: ClassLattice, curves: Sequence):
    """Two pairs ``(C, D)`` with ``C . D = 0`` on opposite sides of the ample class.

    A class may pair with itself (two distinct fibres of a pencil).  Returns
    ``None`` when no such configuration exists.
    """
    if cl.rank != 2:
        raise ValueError("orthogonal pairs test needs rank 2")
    a = cl.ample
    sides: dict[int, tuple] = {}
    curves = [tuple(c) for c in curves]
    for i, C in enumerate(curves):
        for D in curves[i:]:
            if cl.dot(C, D) != 0:
                continue
            m = min((C, D), key=cl.square)
            side = a[0] * m[1] - a[1] * m[0]
            if side == 0:
                continue
            sides.setdefault(1 if side > 0 else -1, (C, D))
    if 1 in sides and -1 in sides:
        return sides[1], sides[-1]
    return None


__all__ = [
    "ClassLattice",
    "CurveTuple",
    "EffCone",
    "PseudoReport",
    "chain_eff_test",
    "cone_contains",
    "dual_rays",
    "extremal_rays",
    "orthogonal_pairs_test",
    "verify_pseudogenerating",
]
