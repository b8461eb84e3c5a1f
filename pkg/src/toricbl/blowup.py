"""The blow-up of a toric surface at a general point of the torus.

Direction sets:

* ``Neg``: directions whose curve has strict transform of negative square,
* ``wd``: directions realising the lattice width of some ample polytope,
* ``Lib``: directions of a minimal binomial basis of the lattice ideal,

computed by independent means (intersection numbers, exact feasibility, Markov
bases) so the chain ``Neg <= wd <= Lib`` is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .exact import Ineq, LatticeVector, bilinear, fm_feasible, integer_kernel, inverse
from .ideal import lib_directions
from .polytope import lattice_points_in
from .toric import DivisorClass, ToricSurface, hbs_pm, one_param_class

CI_BOX = 3


@dataclass(frozen=True)
class BlowupClass:
    """``pi^* base - e_mult * E``; ``base`` in free grading coordinates."""

    base: tuple
    e_mult: int

    def pair(self, s: ToricSurface, other: "BlowupClass") -> Fraction:
        return s.pair(self.base, other.base) - self.e_mult * other.e_mult


def exceptional(s: ToricSurface) -> BlowupClass:
    return BlowupClass(tuple(0 for _ in range(s.class_rank)), -1)


def strict_transform(s: ToricSurface, v: Sequence[int]) -> BlowupClass:
    return BlowupClass(one_param_class(s, v).free_part, 1)


def _primitive_box(k: int) -> set[LatticeVector]:
    return {
        LatticeVector((x, y))
        for x in range(-k, k + 1)
        for y in range(-k, k + 1)
        if (x, y) != (0, 0) and gcd(x, y) == 1
    }


def candidate_directions(s: ToricSurface, budget: int | None = None) -> tuple[frozenset, bool]:
    """Finite direction set containing wd; the flag reports the widened (CI) case."""
    cached = s.__dict__.get("_candidate_cache")
    if cached is None:
        lib = lib_directions(s, budget)
        if lib.complete_intersection:
            cached = frozenset(set(hbs_pm(s)) | _primitive_box(CI_BOX)), True
        else:
            cached = lib.directions, False
        s.__dict__["_candidate_cache"] = cached
    return cached


def neg_set(s: ToricSurface, budget: int | None = None) -> frozenset:
    cands, _ = candidate_directions(s, budget)
    funcs = _functionals(s, cands)
    Finv = _form_inverse(s)
    out = set()
    for v in cands:
        lam = funcs[v]
        # C_v = F^{-1} lam, so C_v^2 = lam . F^{-1} lam
        if bilinear(Finv, lam, lam) < 1:
            out.add(LatticeVector(v))
    return frozenset(out)


def _form_inverse(s: ToricSurface):
    inv = s.__dict__.get("_form_inverse")
    if inv is None:
        inv = inverse([list(row) for row in s.form.matrix])
        s.__dict__["_form_inverse"] = inv
    return inv


def _functionals(s: ToricSurface, dirs) -> dict:
    """``v -> lam`` with ``C_v . D == lam . D`` for ``D`` in class coordinates."""
    cache = s.__dict__.setdefault("_functional_cache", {})
    out = {}
    for v in dirs:
        v = LatticeVector(v)
        if v not in cache:
            cache[v] = s.curve_functional(v)
        out[v] = cache[v]
    return out


def _ample_constraints(s: ToricSurface) -> list[Ineq]:
    cached = s.__dict__.get("_ample_cache")
    if cached is None:
        cached = s.__dict__["_ample_cache"] = _build_ample_constraints(s)
    return list(cached)


def _build_ample_constraints(s: ToricSurface) -> list[Ineq]:
    F = s.form.matrix
    k = s.class_rank
    out = []
    for c in s.ray_classes:
        row = [sum(F[a][b] * c.free_part[b] for b in range(k)) for a in range(k)]
        out.append(Ineq.ge(row, 1))
    return out


def width_direction_feasible(s: ToricSurface, v, funcs: dict) -> bool:
    """Is there an ample ``D`` with ``C_v . D <= C_u . D`` for every candidate ``u``?"""
    lv = funcs[LatticeVector(v)]
    system = _ample_constraints(s)
    for u, lu in funcs.items():
        if u == v or u == -LatticeVector(v):
            continue
        diff = [a - b for a, b in zip(lv, lu)]
        if any(diff):
            system.append(Ineq.le(diff, 0))
    return fm_feasible(system)


def wd_set(s: ToricSurface, budget: int | None = None) -> frozenset:
    cands, _ = candidate_directions(s, budget)
    funcs = _functionals(s, cands)
    out = set()
    for v in sorted(cands):
        if v in out:
            continue
        if width_direction_feasible(s, v, funcs):
            out |= {v, -v}
    return frozenset(out)


@dataclass(frozen=True)
class InclusionChain:
    neg: frozenset
    wd: frozenset
    lib: frozenset  # union over all minimal bases
    widened: bool

    @property
    def holds(self) -> bool:
        return self.neg <= self.wd <= self.lib


def inclusion_chain(s: ToricSurface, budget: int | None = None) -> InclusionChain:
    cands, widened = candidate_directions(s, budget)
    return InclusionChain(neg_set(s, budget), wd_set(s, budget), lib_directions(s, budget).union, widened)


# ---------------------------------------------------------------------------
# effective classes and the nef chamber fan


def _integral_preimage(s: ToricSurface, c: Sequence[int]) -> list[int]:
    from .exact import smith_normal_form

    U, S, V = smith_normal_form(s.grading)
    k = s.class_rank
    y = list(U.apply(c))
    for i in range(k):
        d = S[i, i]
        if y[i] % d:
            raise ValueError(f"class {tuple(c)} is not integral")
        y[i] //= d
    y += [0] * (s.r - k)
    return list(V.apply(y))


def is_effective(s: ToricSurface, c: Sequence) -> bool:
    """Does some nonnegative integer combination of the ``D_i`` have free class ``c``?"""
    if any(Fraction(x).denominator != 1 for x in c):
        return False
    a0 = _integral_preimage(s, [int(x) for x in c])
    B = integer_kernel(s.grading)  # 2 x r, basis of the degree-zero lattice
    halfplanes = [((-B[0, i], -B[1, i]), a0[i]) for i in range(s.r)]
    # bounding box from the polygon vertices
    from .exact import det2, solve

    ys = []
    for i in range(s.r):
        for j in range(i + 1, s.r):
            n1, n2 = halfplanes[i][0], halfplanes[j][0]
            if det2(n1, n2) == 0:
                continue
            p = solve([list(n1), list(n2)], [halfplanes[i][1], halfplanes[j][1]])
            if all(h[0][0] * p[0] + h[0][1] * p[1] <= h[1] for h in halfplanes):
                ys.append(p[1])
    if not ys:
        return False
    return bool(lattice_points_in(halfplanes, min(ys), max(ys)))


@dataclass(frozen=True)
class Chamber:
    rays: tuple[tuple[int, ...], tuple[int, ...]]
    minimizers: frozenset  # width directions on the relative interior


@dataclass(frozen=True)
class Wall:
    ray: tuple[int, ...]
    minimizers: frozenset


@dataclass(frozen=True)
class NefChamberFan:
    nef_rays: tuple[tuple[int, ...], tuple[int, ...]]
    chambers: tuple[Chamber, ...]
    walls: tuple[Wall, ...]
    basis: tuple[LatticeVector, ...]  # directions whose classes form the minimal basis


def _scale_primitive(x) -> tuple[int, ...]:
    den = 1
    for t in x:
        t = Fraction(t)
        den = den * t.denominator // gcd(den, t.denominator)
    ints = [int(Fraction(t) * den) for t in x]
    g = 0
    for t in ints:
        g = gcd(g, t)
    return tuple(t // g for t in ints)


def minimal_curve_basis(s: ToricSurface, dirs) -> list[LatticeVector]:
    """Directions whose classes survive the effective-difference reduction.

    ``[C_v]`` is dropped when ``[C_v] - [C_u]`` is a nonzero effective class
    for another candidate ``u``; one representative per class is kept.
    """
    classes: dict[tuple, LatticeVector] = {}
    for v in sorted(dirs):
        c = one_param_class(s, v).free_part
        classes.setdefault(tuple(c), v)
    keep = []
    for c, v in classes.items():
        if not any(c != d and is_effective(s, [x - y for x, y in zip(c, d)]) for d in classes):
            keep.append(v)
    return keep


def nef_chamber_fan(s: ToricSurface, budget: int | None = None) -> NefChamberFan:
    if s.class_rank != 2:
        raise NotImplementedError(f"chamber fan only for Picard rank 2 (got {s.class_rank})")
    cands, _ = candidate_directions(s, budget)
    basis = minimal_curve_basis(s, cands)
    funcs = _functionals(s, cands)
    N1, N2 = (r.free_part for r in s.nef_rays)

    def at(t):
        return [(1 - t) * a + t * b for a, b in zip(N1, N2)]

    lines = {}
    for v in basis:
        lam = funcs[v]
        a0 = sum(x * y for x, y in zip(lam, N1))
        a1 = sum(x * y for x, y in zip(lam, N2))
        lines[v] = (a0, a1 - a0)
    cuts = {Fraction(0), Fraction(1)}
    vs = list(lines)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            (a, b), (c, d) = lines[vs[i]], lines[vs[j]]
            if b != d:
                t = (c - a) / (b - d)
                if 0 < t < 1:
                    cuts.add(t)
    cuts = sorted(cuts)

    def argmin(t):
        vals = {v: a + b * t for v, (a, b) in lines.items()}
        m = min(vals.values())
        mins = set()
        for v, x in vals.items():
            if x == m:
                mins |= {v, -v}
        # every direction sharing the class of a minimizer also realises the width
        for u, lam in funcs.items():
            if any(lam == funcs[w] for w in mins):
                mins |= {u, -u}
        return frozenset(mins)

    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        pieces.append([lo, hi, argmin((lo + hi) / 2)])
    merged = [pieces[0]]
    for lo, hi, mins in pieces[1:]:
        if mins == merged[-1][2]:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi, mins])
    chambers = tuple(Chamber((_scale_primitive(at(lo)), _scale_primitive(at(hi))), mins) for lo, hi, mins in merged)
    walls = tuple(Wall(_scale_primitive(at(lo)), argmin(lo)) for lo, _, _ in merged[1:])
    return NefChamberFan((_scale_primitive(N1), _scale_primitive(N2)), chambers, walls, tuple(basis))


__all__ = [
    "BlowupClass",
    "Chamber",
    "InclusionChain",
    "NefChamberFan",
    "Wall",
    "candidate_directions",
    "exceptional",
    "inclusion_chain",
    "is_effective",
    "minimal_curve_basis",
    "nef_chamber_fan",
    "neg_set",
    "strict_transform",
    "wd_set",
    "width_direction_feasible",
]
