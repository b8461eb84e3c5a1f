"""Lattice polygons, rational cones and complete fans in the plane.

Width computations follow the polar-body characterization: the width of a
lattice polygon is the smallest dilation of the polar of the difference body
``P - P`` that contains a nonzero lattice point, and the width directions are
exactly the nonzero lattice points of that dilation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import ceil, floor, gcd
from typing import Iterable, Sequence

from .exact import LatticeVector, det2, ext_gcd, perp, primitive

Point = tuple  # (Fraction | int, Fraction | int)


def _frac_point(p) -> tuple[Fraction, Fraction]:
    return Fraction(p[0]), Fraction(p[1])


def convex_hull(points: Iterable[Sequence]) -> list[tuple[Fraction, Fraction]]:
    """Counterclockwise strictly convex hull (monotone chain)."""
    pts = sorted(set(_frac_point(p) for p in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


@dataclass(frozen=True)
class Polygon:
    """Convex polygon with rational vertices in counterclockwise order.

    An empty vertex tuple is the empty polygon.
    """

    vertices: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def hull(cls, points: Iterable[Sequence]) -> "Polygon":
        return cls(tuple(convex_hull(points)))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def dim(self) -> int:
        return min(len(self.vertices), 3) - 1

    @property
    def is_lattice(self) -> bool:
        return all(x.denominator == 1 and y.denominator == 1 for x, y in self.vertices)

    def int_vertices(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in self.vertices]

    def support(self, v: Sequence) -> Fraction:
        """``max <P, v>``."""
        return max(x * v[0] + y * v[1] for x, y in self.vertices)

    def width_in(self, v: Sequence) -> Fraction:
        vals = [x * v[0] + y * v[1] for x, y in self.vertices]
        return max(vals) - min(vals)

    def halfplanes(self) -> list[tuple[tuple[Fraction, Fraction], Fraction]]:
        """Inequalities ``<n, x> <= c`` cutting out a 2-dimensional polygon."""
        if self.dim != 2:
            raise ValueError("halfplanes need a 2-dimensional polygon")
        out = []
        vs = self.vertices
        for i, p in enumerate(vs):
            q = vs[(i + 1) % len(vs)]
            n = (q[1] - p[1], p[0] - q[0])  # outward normal for ccw order
            out.append((n, n[0] * p[0] + n[1] * p[1]))
        return out

    def contains(self, x: Sequence) -> bool:
        x = _frac_point(x)
        if self.is_empty:
            return False
        if self.dim == 0:
            return x == self.vertices[0]
        if self.dim == 1:
            a, b = self.vertices
            d = (b[0] - a[0], b[1] - a[1])
            w = (x[0] - a[0], x[1] - a[1])
            if det2(d, w) != 0:
                return False
            t = (w[0] * d[0] + w[1] * d[1]) / (d[0] * d[0] + d[1] * d[1])
            return 0 <= t <= 1
        return all(n[0] * x[0] + n[1] * x[1] <= c for n, c in self.halfplanes())

    def lattice_points(self) -> list[tuple[int, int]]:
        if self.is_empty:
            return []
        if self.dim == 0:
            x, y = self.vertices[0]
            return [(int(x), int(y))] if x.denominator == y.denominator == 1 else []
        if self.dim == 1:
            return _segment_lattice_points(*self.vertices)
        ys = [v[1] for v in self.vertices]
        return lattice_points_in(self.halfplanes(), min(ys), max(ys))

    def scaled(self, k) -> "Polygon":
        k = Fraction(k)
        if k <= 0:
            raise ValueError("scale must be positive")
        return Polygon(tuple((k * x, k * y) for x, y in self.vertices))

    def __neg__(self) -> "Polygon":
        return Polygon.hull((-x, -y) for x, y in self.vertices)


def _segment_lattice_points(a, b) -> list[tuple[int, int]]:
    (ax, ay), (bx, by) = a, b
    if ax == bx:
        if ax.denominator != 1:
            return []
        lo, hi = sorted((ay, by))
        return [(int(ax), y) for y in range(ceil(lo), floor(hi) + 1)]
    lo, hi = sorted((ax, bx))
    slope = (by - ay) / (bx - ax)
    out = []
    for x in range(ceil(lo), floor(hi) + 1):
        y = ay + (x - ax) * slope
        if y.denominator == 1:
            out.append((x, int(y)))
    return out


def lattice_points_in(halfplanes, ymin, ymax) -> list[tuple[int, int]]:
    """Integer points satisfying every ``<n, x> <= c`` with ``ymin <= y <= ymax``.

    Row sweep with exact floor/ceil; the halfplanes must bound ``x`` on each row.
    """
    pts = []
    for y in range(ceil(ymin), floor(ymax) + 1):
        lo, hi = None, None
        ok = True
        for (nx, ny), c in halfplanes:
            rhs = Fraction(c) - ny * y
            if nx > 0:
                b = floor(rhs / nx)
                hi = b if hi is None else min(hi, b)
            elif nx < 0:
                b = ceil(rhs / nx)
                lo = b if lo is None else max(lo, b)
            elif rhs < 0:
                ok = False
                break
        if not ok:
            continue
        if lo is None or hi is None:
            raise ValueError("unbounded row in lattice point enumeration")
        pts.extend((x, y) for x in range(lo, hi + 1))
    return pts


def minkowski_diff_polar(delta: Polygon) -> tuple[Polygon, Polygon]:
    """Return ``(P - P, polar(P - P))`` for a full-dimensional polygon."""
    if delta.dim != 2:
        raise ValueError("polar of P - P needs a 2-dimensional polygon")
    vs = delta.vertices
    pm = Polygon.hull((a[0] - b[0], a[1] - b[1]) for a in vs for b in vs)
    polar = []
    for n, c in pm.halfplanes():
        polar.append((n[0] / c, n[1] / c))
    return pm, Polygon.hull(polar)


def width_data(delta: Polygon) -> tuple[int | Fraction, frozenset[LatticeVector]]:
    """Lattice width and the set of width directions (closed under negation)."""
    if delta.is_empty or delta.dim == 0:
        raise ValueError("width is undefined for an empty polygon or a point")
    if delta.dim == 1:
        a, b = delta.vertices
        d = b[0] - a[0], b[1] - a[1]
        den = d[0].denominator * d[1].denominator
        v = perp(primitive((int(d[0] * den), int(d[1] * den))))
        return 0, frozenset({v, -v})
    pm, polar = minkowski_diff_polar(delta)
    bound = min(pm.support((1, 0)), pm.support((0, 1)))
    scaled = polar.scaled(bound)
    ys = [p[1] for p in scaled.vertices]
    cands = lattice_points_in(
        [((w[0], w[1]), bound) for w in pm.vertices], min(ys), max(ys)
    )
    best, dirs = None, []
    for v in cands:
        if v == (0, 0):
            continue
        h = pm.support(v)
        if best is None or h < best:
            best, dirs = h, [v]
        elif h == best:
            dirs.append(v)
    lw = int(best) if best.denominator == 1 else best
    return lw, frozenset(LatticeVector(v) for v in dirs)


def width_profile(delta: Polygon, box: int) -> dict[LatticeVector, int]:
    """``lw_v(delta)`` for every primitive ``v`` with ``|v|_inf <= box`` (lattice polygons)."""
    import numpy as np

    from . import _kernels

    if not delta.is_lattice:
        raise ValueError("width profile needs a lattice polygon")
    dirs = [
        (a, b)
        for a in range(-box, box + 1)
        for b in range(-box, box + 1)
        if (a, b) != (0, 0) and gcd(a, b) == 1
    ]
    verts = delta.int_vertices()
    if _kernels.fits_int64([4 * abs(c) * box for v in verts for c in v]):
        w = _kernels.widths(np.array(verts, dtype=np.int64), np.array(dirs, dtype=np.int64))
        return {LatticeVector(d): int(x) for d, x in zip(dirs, w)}
    return {LatticeVector(d): int(delta.width_in(d)) for d in dirs}


def lattice_width(delta: Polygon):
    return width_data(delta)[0]


def six_direction_check(wd: Iterable[Sequence[int]]):
    """For exactly six width directions return ``(u, v, w)`` with ``u + v + w == 0``."""
    wd = {LatticeVector(v) for v in wd}
    if len(wd) != 6:
        return None
    reps = sorted({max(v, -v) for v in wd})
    if len(reps) != 3:
        return None
    u, v, w = reps
    for su in (1, -1):
        for sv in (1, -1):
            for sw in (1, -1):
                if su * u + sv * v + sw * w == LatticeVector((0, 0)):
                    return su * u, sv * v, sw * w
    return None


# ---------------------------------------------------------------------------
# cones and fans


def _angle_cmp(u, v) -> int:
    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return hu - hv
    d = det2(u, v)
    return -1 if d > 0 else (1 if d < 0 else 0)


def sort_by_angle(vectors: Iterable[Sequence[int]]) -> list[LatticeVector]:
    """Counterclockwise order starting from the positive x-axis."""
    return sorted((LatticeVector(v) for v in vectors), key=cmp_to_key(_angle_cmp))


@dataclass(frozen=True)
class Cone2D:
    """Rational cone spanned by at most two primitive rays.

    ``ray_b`` may be ``None`` (a ray); both ``None`` is the zero cone.
    """

    ray_a: LatticeVector | None
    ray_b: LatticeVector | None = None

    def __post_init__(self):
        a, b = self.ray_a, self.ray_b
        if a is not None:
            object.__setattr__(self, "ray_a", LatticeVector(a))
            if not self.ray_a.is_primitive:
                raise ValueError(f"ray {tuple(a)} is not primitive")
        if b is not None:
            if a is None:
                raise ValueError("second ray given without the first")
            object.__setattr__(self, "ray_b", LatticeVector(b))
            if not self.ray_b.is_primitive:
                raise ValueError(f"ray {tuple(b)} is not primitive")
            if det2(self.ray_a, self.ray_b) <= 0:
                raise ValueError("cone rays must satisfy det(ray_a, ray_b) > 0")

    @property
    def dim(self) -> int:
        return (self.ray_a is not None) + (self.ray_b is not None)

    def contains(self, v: Sequence) -> bool:
        if self.dim == 0:
            return tuple(v) == (0, 0)
        a = self.ray_a
        if self.dim == 1:
            return det2(a, v) == 0 and a[0] * v[0] + a[1] * v[1] >= 0
        return det2(a, v) >= 0 and det2(v, self.ray_b) >= 0


def hilbert_basis(c: Cone2D) -> frozenset[LatticeVector]:
    """Minimal generating set of the monoid ``c ∩ Z^2``.

    Walks from ``ray_a`` towards ``ray_b``: each next element is the lattice
    point at determinant one from the current one that lies closest to
    ``ray_b`` (the Hirzebruch-Jung sequence).
    """
    if c.dim == 0:
        return frozenset()
    if c.dim == 1:
        return frozenset({c.ray_a})
    u, b = c.ray_a, c.ray_b
    out = [u]
    d = det2(u, b)
    while d > 1:
        _, x, y = ext_gcd(u[0], u[1])
        w = LatticeVector((-y, x))  # det(u, w) == 1
        k = -(det2(w, b) // d)  # ceil(-det(w, b) / d)
        u = w + k * u
        out.append(u)
        d = det2(u, b)
    out.append(b)
    return frozenset(out)


@dataclass(frozen=True)
class Fan:
    """Complete-or-not fan in the plane given by primitive rays.

    Rays are stored in counterclockwise order starting from the positive
    x-axis; the maximal cones are the consecutive pairs.
    """

    rays: tuple[LatticeVector, ...]

    def __init__(self, rays: Iterable[Sequence[int]]):
        rs = [LatticeVector(r) for r in rays]
        for r in rs:
            if len(r) != 2:
                raise ValueError(f"ray {tuple(r)} is not a 2D vector")
            if not any(r):
                raise ValueError("zero ray")
            if not r.is_primitive:
                raise ValueError(f"ray {tuple(r)} is not primitive")
        if len(set(rs)) != len(rs):
            raise ValueError("repeated ray")
        object.__setattr__(self, "rays", tuple(sort_by_angle(rs)))

    def __len__(self):
        return len(self.rays)

    @property
    def is_complete(self) -> bool:
        r = self.rays
        if len(r) < 3:
            return False
        return all(det2(r[i], r[(i + 1) % len(r)]) > 0 for i in range(len(r)))

    def cones(self) -> list[Cone2D]:
        r = self.rays
        return [Cone2D(r[i], r[(i + 1) % len(r)]) for i in range(len(r))]

    def cone_index_containing(self, v: Sequence) -> int:
        """Index ``i`` of a maximal cone ``(rays[i], rays[i+1])`` containing ``v``."""
        r = self.rays
        for i in range(len(r)):
            a, b = r[i], r[(i + 1) % len(r)]
            if det2(a, v) >= 0 and det2(v, b) >= 0 and det2(a, b) > 0:
                return i
        raise ValueError(f"{tuple(v)} is not covered by the fan")

    def normal_form(self) -> tuple[tuple[int, int], ...]:
        """Canonical ray tuple of the GL2(Z) orbit of the fan.

        Each choice of a ray and a rotation sense fixes a unique matrix sending
        that ray to ``(1, 0)`` and its neighbour to ``(x, y)`` with
        ``0 <= x < y``; the least resulting ray tuple is the normal form.
        """
        from .exact import ext_gcd

        r = self.rays
        n = len(r)
        best = None
        for i in range(n):
            a, b = r[i]
            _, s, t = ext_gcd(a, b)
            for step in (1, -1):
                rows = [[s, t], [-b, a]]
                nx = r[(i + step) % n]
                x, y = rows[0][0] * nx[0] + rows[0][1] * nx[1], rows[1][0] * nx[0] + rows[1][1] * nx[1]
                if y < 0:
                    rows[1] = [-rows[1][0], -rows[1][1]]
                    y = -y
                if y > 0:
                    k = x // y
                    rows[0] = [rows[0][0] - k * rows[1][0], rows[0][1] - k * rows[1][1]]
                img = sort_by_angle(
                    (rows[0][0] * u[0] + rows[0][1] * u[1], rows[1][0] * u[0] + rows[1][1] * u[1]) for u in r
                )
                key = tuple(tuple(v) for v in img)
                if best is None or key < best:
                    best = key
        return best


def complete_fans(max_rays: int, bound: int, min_rays: int = 3) -> list["Fan"]:
    """Complete fans with ray coordinates in ``[-bound, bound]``, one per GL2(Z) class."""
    from itertools import combinations
    from math import gcd

    prim = sort_by_angle(
        (x, y)
        for x in range(-bound, bound + 1)
        for y in range(-bound, bound + 1)
        if (x, y) != (0, 0) and gcd(x, y) == 1
    )
    n = len(prim)
    seen: dict = {}
    for k in range(min_rays, max_rays + 1):
        for combo in combinations(range(n), k):
            rs = [prim[j] for j in combo]  # already in angular order
            if all(det2(rs[j], rs[(j + 1) % k]) > 0 for j in range(k)):
                f = Fan(rs)
                seen.setdefault(f.normal_form(), f)
    return [Fan(key) for key in sorted(seen, key=lambda t: (len(t), t))]


def parse_points(text: str, what: str = "point") -> list[tuple[int, int]]:
    """Parse one ``x y`` integer pair per line; ``#`` starts a comment."""
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two integers per {what}, got {raw!r}")
        try:
            pts.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: not an integer pair: {raw!r}") from None
    return pts
