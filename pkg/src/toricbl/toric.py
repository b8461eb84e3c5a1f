"""Complete toric surfaces: class group, intersection form, nef cone and
one-parameter-subgroup curve classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .exact import (
    IntMatrix,
    LatticeVector,
    bilinear,
    det2,
    hermite_normal_form,
    inverse,
    matmul,
    primitive,
    rational_rank,
    same_row_lattice,
    smith_normal_form,
    solve,
)
from .polytope import Fan, Polygon, hilbert_basis, lattice_points_in


@dataclass(frozen=True)
class DivisorClass:
    """Class in Cl(P): coordinates of the free part plus torsion residues.

    Numerical classes (curve classes) may have rational free coordinates.
    """

    free_part: tuple
    torsion_part: tuple = ()

    def __add__(self, other):
        return DivisorClass(
            tuple(a + b for a, b in zip(self.free_part, other.free_part)),
            self.torsion_part if not other.torsion_part else tuple(
                a + b for a, b in zip(self.torsion_part, other.torsion_part)
            ),
        )

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, k):
        return DivisorClass(tuple(k * a for a in self.free_part), tuple(k * a for a in self.torsion_part))

    def numerical(self) -> "DivisorClass":
        return DivisorClass(self.free_part)


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric rational bilinear form on the free part of Cl_Q."""

    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def pair(self, a, b) -> Fraction:
        a = getattr(a, "free_part", a)
        b = getattr(b, "free_part", b)
        return bilinear(self.matrix, a, b)

    def square(self, a) -> Fraction:
        return self.pair(a, a)

    def signature(self) -> tuple[int, int]:
        """Counts of positive and negative eigenvalues (exact, via LDL pivots)."""
        A = [[Fraction(x) for x in row] for row in self.matrix]
        n = len(A)
        pos = neg = 0
        # symmetric Gaussian elimination with 2x2 fallback when a zero pivot appears
        idx = list(range(n))
        while idx:
            k = next((i for i in idx if A[i][i] != 0), None)
            if k is None:
                pair = next(((i, j) for i in idx for j in idx if i < j and A[i][j] != 0), None)
                if pair is None:
                    break
                i, j = pair
                # replace e_i by e_i + e_j to create a nonzero diagonal entry
                for t in range(n):
                    A[i][t] += A[j][t]
                for t in range(n):
                    A[t][i] += A[t][j]
                continue
            p = A[k][k]
            pos += p > 0
            neg += p < 0
            idx.remove(k)
            for i in idx:
                f = A[i][k] / p
                if f:
                    for j in idx:
                        A[i][j] -= f * A[k][j]
        return pos, neg


@dataclass(frozen=True, eq=False)
class ToricSurface:
    """Complete toric surface determined by a complete fan.

    ``grading`` rows form a basis of the relation lattice
    ``{w : sum_i w_i u_i = 0}``, which is the dual of the free part of
    Cl(P); column ``i`` is the class of the invariant divisor ``D_i``.
    """

    fan: Fan
    grading: IntMatrix
    torsion: tuple[int, ...]
    torsion_rows: tuple[tuple[int, ...], ...]
    positive_relation: tuple[int, ...] = field(repr=False)

    @property
    def rays(self) -> tuple[LatticeVector, ...]:
        return self.fan.rays

    @property
    def r(self) -> int:
        return len(self.fan.rays)

    @property
    def class_rank(self) -> int:
        return self.r - 2

    @property
    def ray_classes(self) -> list[DivisorClass]:
        return [self.divisor_class(e) for e in _unit_vectors(self.r)]

    def divisor_class(self, a: Sequence[int]) -> DivisorClass:
        """Class of ``sum a_i D_i``."""
        free = tuple(sum(g * x for g, x in zip(row, a)) for row in self.grading.rows())
        tors = tuple(
            sum(u * x for u, x in zip(row, a)) % d for row, d in zip(self.torsion_rows, self.torsion)
        )
        return DivisorClass(free, tors)

    @cached_property
    def section(self) -> list[list[Fraction]]:
        """Rational ``r x (r-2)`` matrix ``B`` with ``grading @ B == I``."""
        G = self.grading.tolist()
        GGt = matmul(G, list(map(list, zip(*G))))
        inv = inverse(GGt)
        return matmul(list(map(list, zip(*G))), inv)

    @cached_property
    def divisor_form(self) -> list[list[Fraction]]:
        """Intersection numbers ``D_i . D_j`` of the invariant divisors."""
        u = self.rays
        r = self.r
        Q = [[Fraction(0)] * r for _ in range(r)]
        for i in range(r):
            j = (i + 1) % r
            Q[i][j] = Q[j][i] = Fraction(1, det2(u[i], u[j]))
        for i in range(r):
            prev, nxt = (i - 1) % r, (i + 1) % r
            # 0 = sum_k <m, u_k> D_k . D_i with m = u_i
            m = u[i]
            s = (m[0] * u[prev][0] + m[1] * u[prev][1]) * Q[prev][i] + (
                m[0] * u[nxt][0] + m[1] * u[nxt][1]
            ) * Q[nxt][i]
            Q[i][i] = -s / (m[0] * m[0] + m[1] * m[1])
        return Q

    @cached_property
    def form(self) -> IntersectionForm:
        B = self.section
        Bt = list(map(list, zip(*B)))
        F = matmul(matmul(Bt, self.divisor_form), B)
        return IntersectionForm(tuple(tuple(row) for row in F))

    def pair(self, a, b) -> Fraction:
        return self.form.pair(a, b)

    def cone_vertex(self, i: int, a: Sequence) -> tuple[Fraction, Fraction]:
        """Vertex ``m`` of the polytope of ``sum a_k D_k`` for maximal cone ``i``."""
        u, v = self.rays[i], self.rays[(i + 1) % self.r]
        j = (i + 1) % self.r
        x = solve([list(u), list(v)], [-a[i], -a[j]])
        return x[0], x[1]

    @cached_property
    def nef_rays(self) -> list[DivisorClass]:
        """Extremal rays of Nef(P) = {D : D . D_i >= 0 for all i}."""
        k = self.class_rank
        rc = [c.free_part for c in self.ray_classes]
        F = self.form.matrix
        normals = [[sum(F[a][b] * c[b] for b in range(k)) for a in range(k)] for c in rc]
        return [DivisorClass(tuple(x)) for x in _extreme_rays(normals, k)]

    @cached_property
    def ample_class(self) -> DivisorClass:
        """An integral class in the interior of the nef cone."""
        tot = [0] * self.class_rank
        for ray in self.nef_rays:
            den = 1
            for x in ray.free_part:
                den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
            tot = [t + int(x * den) for t, x in zip(tot, ray.free_part)]
        return DivisorClass(tuple(tot))

    def is_nef(self, D) -> bool:
        return all(self.pair(D, c) >= 0 for c in self.ray_classes)

    def is_ample(self, D) -> bool:
        return all(self.pair(D, c) > 0 for c in self.ray_classes)

    def representative(self, D) -> list[Fraction]:
        """Ray coefficients (rational) of a divisor with numerical class ``D``."""
        D = getattr(D, "free_part", D)
        return [sum(b * d for b, d in zip(row, D)) for row in self.section]

    def lw_functional(self, v: Sequence[int]) -> list[Fraction]:
        """Coefficients ``l`` with ``l . a == lw_v(polytope of a)`` for nef ``a``.

        Uses the vertices of the polytope whose inner normal cones contain
        ``v`` and ``-v``.
        """
        v = LatticeVector(v)
        ip = self.fan.cone_index_containing(v)
        im = self.fan.cone_index_containing(-v)
        r = self.r
        coeffs = [Fraction(0)] * r
        for idx, sgn in ((im, 1), (ip, -1)):
            u, w = self.rays[idx], self.rays[(idx + 1) % r]
            j = (idx + 1) % r
            # m = solve(rows u, w; -a_idx, -a_j);  <m, v> is linear in a
            d = det2(u, w)
            # inverse of [[u0,u1],[w0,w1]] is [[w1,-u1],[-w0,u0]]/d
            mx_i, my_i = Fraction(-w[1], d), Fraction(w[0], d)  # coefficient of a_idx
            mx_j, my_j = Fraction(u[1], d), Fraction(-u[0], d)  # coefficient of a_j
            coeffs[idx] += sgn * (mx_i * v[0] + my_i * v[1])
            coeffs[j] += sgn * (mx_j * v[0] + my_j * v[1])
        return coeffs

    def curve_functional(self, v: Sequence[int]) -> tuple[Fraction, ...]:
        """``lam`` with ``C_v . D == lam . D`` for classes ``D`` in grading coordinates."""
        ell = self.lw_functional(v)
        for m in ((1, 0), (0, 1)):
            img = [m[0] * u[0] + m[1] * u[1] for u in self.rays]
            if sum(a * b for a, b in zip(ell, img)) != 0:
                raise ArithmeticError(
                    f"width functional for {tuple(v)} does not descend to Cl(P)"
                )
        B = self.section
        return tuple(sum(ell[i] * B[i][c] for i in range(self.r)) for c in range(self.class_rank))


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


def _unit_vectors(n):
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


def _extreme_rays(normals: list[list[Fraction]], k: int) -> list[tuple[Fraction, ...]]:
    """Extreme rays of the pointed cone ``{x : n . x >= 0 for n in normals}``."""
    if k == 1:
        return [(Fraction(1),)] if all(n[0] >= 0 for n in normals) else [(Fraction(-1),)]
    rays = []
    seen = set()
    for combo in combinations(range(len(normals)), k - 1):
        rows = [normals[i] for i in combo]
        if rational_rank([[x * _den(rows) for x in row] for row in rows]) != k - 1:
            continue
        x = _kernel_vector(rows, k)
        for cand in (x, tuple(-t for t in x)):
            if all(sum(a * b for a, b in zip(n, cand)) >= 0 for n in normals):
                key = _normalize_ray(cand)
                if key not in seen:
                    seen.add(key)
                    rays.append(key)
    return sorted(rays)


def _den(rows):
    d = 1
    for row in rows:
        for x in row:
            x = Fraction(x)
            d = d * x.denominator // _gcd(d, x.denominator)
    return d


def _kernel_vector(rows, k) -> tuple[Fraction, ...]:
    # 1-dimensional kernel of a (k-1) x k matrix via signed minors
    out = []
    for j in range(k):
        minor = [[row[c] for c in range(k) if c != j] for row in rows]
        from .exact import determinant

        out.append((-1) ** j * determinant(minor))
    return tuple(out)


def _normalize_ray(x) -> tuple:
    """Scale to a primitive integer vector."""
    den = 1
    for t in x:
        den = den * Fraction(t).denominator // _gcd(den, Fraction(t).denominator)
    ints = [int(t * den) for t in x]
    g = 0
    for t in ints:
        g = _gcd(g, t)
    return tuple(t // g for t in ints)


def positive_relation(rays: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Strictly positive integer ``w`` with ``sum w_i u_i == 0`` for a complete fan."""
    rays = [LatticeVector(u) for u in rays]
    fan = Fan(rays)
    order = {tuple(u): i for i, u in enumerate(rays)}
    w = [Fraction(0)] * len(rays)
    for i, u in enumerate(rays):
        idx = fan.cone_index_containing(-u)
        a, b = fan.rays[idx], fan.rays[(idx + 1) % len(fan.rays)]
        # -u = s a + t b with s, t >= 0
        d = det2(a, b)
        s = Fraction(det2(-u, b), d)
        t = Fraction(det2(a, -u), d)
        w[i] += 1
        w[order[tuple(a)]] += s
        w[order[tuple(b)]] += t
    den = _den([w])
    ints = [int(x * den) for x in w]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    return tuple(x // g for x in ints)


def build_surface(fan: Fan | Sequence[Sequence[int]], grading=None) -> ToricSurface:
    """Class group data of the toric surface of a complete fan.

    ``grading`` optionally fixes the basis of the free part of Cl(P); it
    must have the same row lattice as the relation lattice.
    """
    if not isinstance(fan, Fan):
        fan = Fan(fan)
    if not fan.is_complete:
        raise ValueError("fan is not complete")
    P = IntMatrix(fan.rays)  # r x 2
    U, S, _ = smith_normal_form(P)
    divisors = [S[i, i] for i in range(2)]
    if 0 in divisors:
        raise ValueError("rays do not span the plane")
    relations = IntMatrix([U.row(i) for i in range(2, U.nrows)])
    canonical = hermite_normal_form(relations)
    if grading is None:
        G = canonical
    else:
        G = IntMatrix(grading)
        if not same_row_lattice(G, canonical):
            raise ValueError("grading rows do not span the relation lattice of the fan")
    torsion = tuple(d for d in divisors if d > 1)
    torsion_rows = tuple(U.row(i) for i in range(2) if divisors[i] > 1)
    return ToricSurface(fan, G, torsion, torsion_rows, positive_relation(fan.rays))


def intersection_form(s: ToricSurface) -> IntersectionForm:
    return s.form


def riemann_roch_polytope(s: ToricSurface, a: Sequence) -> Polygon:
    """``{m : <m, u_i> >= -a_i}``; the empty polygon when infeasible."""
    rays = s.rays
    halfplanes = [((-Fraction(u[0]), -Fraction(u[1])), Fraction(ai)) for u, ai in zip(rays, a)]
    pts = []
    for i, j in combinations(range(len(rays)), 2):
        if det2(rays[i], rays[j]) == 0:
            continue
        x = solve([list(rays[i]), list(rays[j])], [-a[i], -a[j]])
        if all(n[0] * x[0] + n[1] * x[1] <= c for n, c in halfplanes):
            pts.append(tuple(x))
    return Polygon.hull(pts)


def polytope_lattice_points(s: ToricSurface, a: Sequence) -> list[tuple[int, int]]:
    """Lattice points of the Riemann-Roch polytope, i.e. the exponent fiber of ``a``."""
    P = riemann_roch_polytope(s, a)
    if P.is_empty:
        return []
    ys = [v[1] for v in P.vertices]
    halfplanes = [((-u[0], -u[1]), ai) for u, ai in zip(s.rays, a)]
    return lattice_points_in(halfplanes, min(ys), max(ys))


def one_param_class(s: ToricSurface, v: Sequence[int]) -> DivisorClass:
    """Numerical class of the closure of the one-parameter subgroup ``v``."""
    v = LatticeVector(v)
    if not any(v) or not v.is_primitive:
        raise ValueError(f"{tuple(v)} is not a primitive nonzero vector")
    lam = s.curve_functional(v)
    F = [list(row) for row in s.form.matrix]
    return DivisorClass(tuple(solve(F, lam)))


def hbs_pm(s: ToricSurface) -> frozenset[LatticeVector]:
    hb = set()
    for c in s.fan.cones():
        hb |= hilbert_basis(c)
    return frozenset(v for v in hb if -v in hb)


def read_fan(text: str) -> Fan:
    from .polytope import parse_points

    pts = parse_points(text, "ray")
    if not pts:
        raise ValueError("no rays given")
    return Fan(pts)


__all__ = [
    "DivisorClass",
    "IntersectionForm",
    "ToricSurface",
    "build_surface",
    "hbs_pm",
    "intersection_form",
    "one_param_class",
    "positive_relation",
    "primitive",
    "read_fan",
    "riemann_roch_polytope",
]
