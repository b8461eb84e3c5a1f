"""Multiplicity-one generation of the Cox ring of the blow-up at a general point."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ideal import Binomial, BudgetExceeded, MonomialOrder, classify_ci_cm, surface_ideal, test_comp_basis
from .toric import ToricSurface

GROEBNER_RAY_CAP = 6

Poly = dict  # exponent tuple -> nonzero Fraction


def _lead(p: Poly, order: MonomialOrder):
    return max(p, key=order.key)


def _sub_scaled(p: Poly, q: Poly, c: Fraction, shift) -> Poly:
    """``p - c * x^shift * q``."""
    out = dict(p)
    for e, a in q.items():
        e2 = tuple(x + y for x, y in zip(e, shift))
        v = out.get(e2, 0) - c * a
        if v:
            out[e2] = v
        else:
            out.pop(e2, None)
    return out


def _monic(p: Poly, order: MonomialOrder) -> Poly:
    c = p[_lead(p, order)]
    return {e: a / c for e, a in p.items()}


class _Reducer:
    def __init__(self, order: MonomialOrder, budget: int | None):
        self.order = order
        self.budget = budget
        self.steps = 0
        self.basis: list[Poly] = []
        self.leads: list[tuple] = []

    def tick(self):
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceeded(f"polynomial reduction budget of {self.budget} steps exhausted")

    def add(self, p: Poly):
        p = _monic(p, self.order)
        self.basis.append(p)
        self.leads.append(_lead(p, self.order))

    def _divisor(self, m):
        for i, L in enumerate(self.leads):
            if all(a <= b for a, b in zip(L, m)):
                return i
        return -1

    def normal_form(self, p: Poly, full: bool = False) -> Poly:
        """Reduce leading terms (and all terms when ``full``)."""
        p = dict(p)
        done: Poly = {}
        while p:
            m = _lead(p, self.order)
            i = self._divisor(m)
            if i < 0:
                if not full:
                    done.update(p)
                    return done
                done[m] = p.pop(m)
                continue
            self.tick()
            shift = tuple(a - b for a, b in zip(m, self.leads[i]))
            p = _sub_scaled(p, self.basis[i], p[m], shift)
        return done


def groebner(polys: Sequence[Poly], order: MonomialOrder, budget: int | None = None) -> list[Poly]:
    """Reduced Gröbner basis over Q (monic, sorted by leading term)."""
    red = _Reducer(order, budget)
    heap: list = []

    def weight(m):
        return sum(w * x for w, x in zip(order.weights, m))

    def push_pairs(j):
        for i in range(j):
            Li, Lj = red.leads[i], red.leads[j]
            if all(a == 0 or b == 0 for a, b in zip(Li, Lj)):
                continue
            lcm = tuple(max(a, b) for a, b in zip(Li, Lj))
            heapq.heappush(heap, (weight(lcm), order.key(lcm), i, j))

    for p in polys:
        if p:
            r = red.normal_form(p)
            if r:
                red.add(r)
                push_pairs(len(red.basis) - 1)
    while heap:
        _, _, i, j = heapq.heappop(heap)
        Li, Lj = red.leads[i], red.leads[j]
        lcm = tuple(max(a, b) for a, b in zip(Li, Lj))
        s = _sub_scaled(
            {tuple(x + y for x, y in zip(e, _diff(lcm, Li))): a for e, a in red.basis[i].items()},
            red.basis[j],
            Fraction(1),
            _diff(lcm, Lj),
        )
        if not s:
            continue
        r = red.normal_form(s)
        if r:
            red.add(r)
            push_pairs(len(red.basis) - 1)
    # minimalize and inter-reduce
    keep = [
        i
        for i, L in enumerate(red.leads)
        if not any(
            j != i and all(a <= b for a, b in zip(red.leads[j], L)) and (red.leads[j] != L or j < i)
            for j in range(len(red.leads))
        )
    ]
    final = _Reducer(order, None)
    for i in keep:
        final.add(red.basis[i])
    out = []
    for k, p in enumerate(final.basis):
        others = _Reducer(order, None)
        for j, q in enumerate(final.basis):
            if j != k:
                others.add(q)
        L = final.leads[k]
        tail = {e: a for e, a in p.items() if e != L}
        out.append({L: Fraction(1), **others.normal_form(tail, full=True)})
    return sorted(out, key=lambda p: order.key(_lead(p, order)))


def _diff(a, b):
    return tuple(x - y for x, y in zip(a, b))


def krull_dimension(gb: Sequence[Poly], nvars: int, order: MonomialOrder) -> int:
    """Dimension of ``k[x]/I`` from a Gröbner basis: maximal independent variable sets."""
    supports = [frozenset(i for i, e in enumerate(_lead(p, order)) if e) for p in gb]
    if any(not s for s in supports):
        return -1  # unit ideal
    return nvars - _min_hitting_set(supports, nvars)


def _min_hitting_set(sets: list[frozenset], nvars: int) -> int:
    best = [nvars]

    def go(chosen: frozenset, k: int):
        if k >= best[0]:
            return
        open_ = [s for s in sets if not (s & chosen)]
        if not open_:
            best[0] = k
            return
        s = min(open_, key=len)
        for v in sorted(s):
            go(chosen | {v}, k + 1)

    go(frozenset(), 0)
    return best[0]


@dataclass
class Mult1Verdict:
    status: bool | None  # None means unknown
    reason: str  # CI, CM3, NecessaryFails, GroebnerDim or Budget
    details: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return {True: "True", False: "False", None: "Unknown"}[self.status]


def groebner_dimension_check(gens: Sequence[Binomial], weights: Sequence[int], budget: int | None = None) -> dict:
    """Dimension data of ``J = <f_i - t s_i>`` and its saturation by ``t``.

    Returns ``dims[i] = dim S/(J^sat + <t, x_i>)``, ``base = dim S/(J^sat + <t>)``
    and whether ``J`` was already saturated.
    """
    gens = list(gens)
    r = gens[0].nvars
    k = len(gens)
    n = r + k + 1
    t = n - 1
    xw = [2 * w for w in weights]
    fw = [sum(a * b for a, b in zip(xw, g.plus)) for g in gens]
    wts = tuple(xw + [d - 1 for d in fw] + [1])
    order = MonomialOrder.degrevlex(wts, cheapest=t)

    def mono(x_part=None, s_idx=None, t_pow=0):
        e = [0] * n
        if x_part is not None:
            e[:r] = x_part
        if s_idx is not None:
            e[r + s_idx] = 1
        e[t] = t_pow
        return tuple(e)

    J = []
    for i, g in enumerate(gens):
        p = {mono(g.plus): Fraction(1)}
        p[mono(g.minus)] = p.get(mono(g.minus), 0) - 1
        p[mono(None, i, 1)] = Fraction(-1)
        J.append({e: a for e, a in p.items() if a})
    gb = groebner(J, order, budget)
    sat = []
    for p in gb:
        m = min(e[t] for e in p)
        sat.append({e[:t] + (e[t] - m,): a for e, a in p.items()})
    saturated = all(min(e[t] for e in p) == 0 for p in gb)
    sat_gb = groebner(sat, order, budget)

    def var(i):
        e = [0] * n
        e[i] = 1
        return {tuple(e): Fraction(1)}

    base_gb = groebner(sat_gb + [var(t)], order, budget)
    base = krull_dimension(base_gb, n, order)
    dims = []
    for i in range(r):
        dims.append(krull_dimension(groebner(sat_gb + [var(t), var(i)], order, budget), n, order))
    return {"dims": dims, "base": base, "saturated": saturated, "nvars": r}


def decide_mult1(
    s: ToricSurface,
    budget: int | None = None,
    ray_cap: int = GROEBNER_RAY_CAP,
    cross_check: bool = False,
) -> Mult1Verdict:
    """Is Cox(Bl_e P) generated in multiplicity one?

    Shortcuts first (necessary triple condition, complete intersection,
    three-generator Cohen-Macaulay), then the Gröbner dimension test.  With
    ``cross_check`` the Gröbner test also runs after a shortcut verdict and
    its agreement is recorded in ``details``.
    """
    try:
        si = surface_ideal(s, budget)
    except BudgetExceeded:
        return Mult1Verdict(None, "Budget", {"stage": "markov basis"})
    tc = test_comp_basis(si.minimal)
    cls = classify_ci_cm(si.minimal)
    if not tc.passed:
        verdict = Mult1Verdict(False, "NecessaryFails", {"witnesses": tc.witnesses})
    elif cls.kind == "CompleteIntersection":
        verdict = Mult1Verdict(True, "CI")
    elif cls.kind == "CM3":
        verdict = Mult1Verdict(True, "CM3")
    else:
        verdict = None
    if verdict is not None and not cross_check:
        return verdict
    if s.r > ray_cap:
        return verdict or Mult1Verdict(None, "Budget", {"stage": f"more than {ray_cap} rays"})
    try:
        data = groebner_dimension_check(si.minimal, s.positive_relation, budget)
    except BudgetExceeded:
        if verdict is not None:
            verdict.details["groebner_agrees"] = None
            return verdict
        return Mult1Verdict(None, "Budget", {"stage": "groebner"})
    g_status = max(data["dims"]) <= s.r - 1
    if verdict is None:
        return Mult1Verdict(g_status, "GroebnerDim", data)
    verdict.details["groebner_agrees"] = g_status == verdict.status
    verdict.details["groebner"] = data
    return verdict


__all__ = [
    "GROEBNER_RAY_CAP",
    "Mult1Verdict",
    "decide_mult1",
    "groebner",
    "groebner_dimension_check",
    "krull_dimension",
]
