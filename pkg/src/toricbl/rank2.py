"""Minimal toric surfaces of Picard rank two and their blow-up at a general point.

The fan has rays ``(1,0), (p,q), (-1,0), (-p,-q)`` with ``0 < p <= q/2``.
Classes on the blow-up are triples in the basis ``(H1, H2, E)`` and the
directions ``v_i = (a_i, b_i)`` are the convergents of ``p/q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .criteria import ClassLattice, CurveTuple, EffCone, chain_eff_test, dual_rays, verify_pseudogenerating
from .exact import LatticeVector, det2

E = (0, 0, 1)
H1 = (1, 0, 0)
H2 = (0, 1, 0)


def continued_fraction(p: int, q: int) -> list[int]:
    """Digits ``[c_1, ..., c_n]`` of ``p/q`` (so ``c_1 = 0`` when ``p < q``)."""
    digits = []
    while q:
        digits.append(p // q)
        p, q = q, p % q
    return digits


@dataclass(frozen=True)
class Rank2Model:
    p: int
    q: int

    def __post_init__(self):
        if self.q <= 1:
            raise ValueError(f"q must exceed 1, got {self.q}")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")
        if not 0 < 2 * self.p <= self.q:
            raise ValueError(f"need 0 < p <= q/2, got p={self.p}, q={self.q}")

    @cached_property
    def c(self) -> tuple[int, ...]:
        return tuple(continued_fraction(self.p, self.q))

    @property
    def n(self) -> int:
        return len(self.c)

    @cached_property
    def _ab(self):
        a = [0, 1]  # a_{-1}, a_0
        b = [1, 0]
        for ci in self.c:
            a.append(ci * a[-1] + a[-2])
            b.append(ci * b[-1] + b[-2])
        return a, b

    @property
    def a(self) -> tuple[int, ...]:
        """``a_0 .. a_n`` (``a_{-1} = 0`` is implicit)."""
        return tuple(self._ab[0][1:])

    @property
    def b(self) -> tuple[int, ...]:
        """``b_0 .. b_n`` (``b_{-1} = 1`` is implicit)."""
        return tuple(self._ab[1][1:])

    @cached_property
    def beta(self) -> tuple[int, ...]:
        return tuple((-1) ** i * (ai * self.q - bi * self.p) for i, (ai, bi) in enumerate(zip(self.a, self.b)))

    @property
    def directions(self) -> tuple[LatticeVector, ...]:
        return tuple(LatticeVector((ai, bi)) for ai, bi in zip(self.a, self.b))

    @cached_property
    def classes(self) -> tuple[tuple[int, int, int], ...]:
        """``C_i = b_i H1 + beta_i H2 - E``."""
        return tuple((bi, be, -1) for bi, be in zip(self.b, self.beta))

    @property
    def rays(self) -> tuple[tuple[int, int], ...]:
        return ((1, 0), (self.p, self.q), (-1, 0), (-self.p, -self.q))

    @cached_property
    def form(self) -> tuple[tuple[Fraction, ...], ...]:
        iq = Fraction(1, self.q)
        z = Fraction(0)
        return ((z, iq, z), (iq, z, z), (z, z, Fraction(-1)))

    @property
    def ample(self) -> tuple[int, int, int]:
        return (self.q + 1, self.q + 1, -1)

    @cached_property
    def lattice(self) -> ClassLattice:
        return ClassLattice(self.form, self.ample)

    def dot(self, x, y) -> Fraction:
        return self.lattice.dot(x, y)

    def square(self, i: int) -> Fraction:
        """``C_i^2 = 2 b_i beta_i / q - 1``."""
        return self.lattice.square(self.classes[i])


def build_model(p: int, q: int) -> Rank2Model:
    """Model for ``(p, q)``; ``p`` is reduced mod ``q`` and reflected into ``(0, q/2]``."""
    if q <= 1:
        raise ValueError(f"q must exceed 1, got {q}")
    if gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    p %= q
    return Rank2Model(min(p, q - p), q)


def normalize_fan(rays: Sequence[Sequence[int]]) -> tuple[int, int]:
    """``(p, q)`` of the standard form of a fan with rays ``+-u, +-v``."""
    rays = [LatticeVector(r) for r in rays]
    if len(rays) != 4:
        raise ValueError("a Picard rank two minimal fan has four rays")
    u = rays[0]
    v = next((r for r in rays[1:] if r != -u), None)
    if v is None or set(rays) != {u, -u, v, -v}:
        raise ValueError("rays are not of the form +-u, +-v")
    if not (u.is_primitive and v.is_primitive):
        raise ValueError("rays must be primitive")
    q = abs(det2(u, v))
    if q == 0:
        raise ValueError("rays are collinear")
    best = None
    for first, second in ((u, v), (v, u)):
        # choose w with det(first, w) = 1 and read second in the basis (first, w)
        from .exact import ext_gcd

        g, x, y = ext_gcd(first[0], first[1])
        w = (-y, x)
        s = det2(second, w) * (1 if det2(first, w) > 0 else -1)
        p = s % q
        p = min(p, q - p) if q > 1 else 0
        best = p if best is None else min(best, p)
    return best, q


def zero_curve_family(r: int, s: int, sign: int) -> Rank2Model:
    """``(p, q) = (2rs + sign, 2r^2)``; its model has ``b_j = beta_j = r`` for some ``j``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if r < 1 or s < 0 or gcd(r, s) != 1 or 2 * s > r:
        raise ValueError(f"need gcd(r, s) = 1 and 0 <= 2s <= r, got r={r}, s={s}")
    p = 2 * r * s + sign
    if p < 1:
        raise ValueError("2rs + sign must be positive")
    return build_model(p, 2 * r * r)


def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def fibonacci_model(f: int) -> Rank2Model:
    """``(p, q) = (F_{f-1}, F_{f+1})`` with ``F_0 = 0, F_1 = 1``."""
    if f < 5:
        raise ValueError(f"Fibonacci family starts at f = 5, got {f}")
    return build_model(fibonacci(f - 1), fibonacci(f + 1))


@dataclass(frozen=True)
class EffConeReport:
    ray_indices: tuple[int | None, ...]  # None stands for E
    rays: tuple[tuple[int, int, int], ...]
    zero_curve: int | None
    tangency: tuple[tuple[int, int, int], ...]


def effective_cone(m: Rank2Model) -> EffConeReport:
    """Rays ``E`` and ``C_i`` with ``2 beta_i b_i < q``, in cyclic order."""
    idx: list[int | None] = [None]
    zero = None
    for i, (bi, be) in enumerate(zip(m.b, m.beta)):
        if 2 * bi * be < m.q:
            idx.append(i)
        elif 2 * bi * be == m.q:
            zero = i
    rays = tuple(E if i is None else m.classes[i] for i in idx)
    tangency = (H1, H2) + ((m.classes[zero],) if zero is not None else ())
    return EffConeReport(tuple(idx), rays, zero, tangency)


def pseudo_tuple(m: Rank2Model) -> CurveTuple:
    classes = (E, H1, H2) + m.classes
    labels = ("E", "H1", "H2") + tuple(f"C{i}" for i in range(len(m.classes)))
    return CurveTuple(classes, labels)


def eff_chain_tuple(m: Rank2Model) -> CurveTuple:
    """``(E, C_0, ..., C_n)`` in cyclic order, all negative or zero curves included."""
    return CurveTuple((E,) + m.classes, ("E",) + tuple(f"C{i}" for i in range(len(m.classes))))


def certify(m: Rank2Model):
    """Chain test on ``(E, C_0..C_n)`` and pseudogenerating check of the full tuple.

    Returns ``(eff_cone, pseudo_report)``; ``eff_cone`` is ``None`` if the
    chain test fails.
    """
    cl = m.lattice
    eff = chain_eff_test(cl, eff_chain_tuple(m))
    if eff is None:
        return None, None
    nef = dual_rays(cl, eff)
    return eff, verify_pseudogenerating(cl, pseudo_tuple(m), nef)


def nef_rays(m: Rank2Model, eff: EffCone | None = None):
    eff = eff or chain_eff_test(m.lattice, eff_chain_tuple(m))
    return dual_rays(m.lattice, eff)


def table(m: Rank2Model) -> list[dict]:
    rep = effective_cone(m)
    rows = []
    for i in range(len(m.b)):
        rows.append(
            {
                "i": i,
                "c": m.c[i - 1] if i >= 1 else None,
                "a": m.a[i],
                "b": m.b[i],
                "beta": m.beta[i],
                "class": m.classes[i],
                "square": m.square(i),
                "ray": i in rep.ray_indices,
            }
        )
    return rows


__all__ = [
    "E",
    "H1",
    "H2",
    "EffConeReport",
    "Rank2Model",
    "build_model",
    "certify",
    "continued_fraction",
    "eff_chain_tuple",
    "effective_cone",
    "fibonacci",
    "fibonacci_model",
    "nef_rays",
    "normalize_fan",
    "pseudo_tuple",
    "table",
    "zero_curve_family",
]
