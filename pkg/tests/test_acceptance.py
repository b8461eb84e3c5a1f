"""Acceptance criteria 1-10, each at its stated tolerance and time limit.

Every test records a PASS/FAIL/SKIP line that is printed in the terminal
summary.  Randomised criteria use fixed seeds so runs are reproducible.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import gcd

import pytest

from conftest import CRITERIA
from oracles import brute_width, markov_oracle_check
from toricbl.blowup import inclusion_chain, nef_chamber_fan, neg_set, strict_transform
from toricbl.criteria import chain_eff_test
from toricbl.exact import same_row_lattice
from toricbl.ideal import BUDGETS, BudgetExceeded, lib_directions, surface_ideal, test_comp, test_comp_basis
from toricbl.mult1 import decide_mult1
from toricbl.polytope import Polygon, complete_fans, six_direction_check, width_data
from toricbl.rank2 import (
    H1,
    H2,
    build_model,
    certify,
    eff_chain_tuple,
    effective_cone,
    fibonacci_model,
    zero_curve_family,
)
from toricbl.toric import build_surface, read_fan, riemann_roch_polytope
from toricbl.cli import fixture_path


@contextmanager
def criterion(n: int, limit: float):
    t0 = time.perf_counter()
    note = []
    try:
        yield note
    except pytest.skip.Exception as exc:
        CRITERIA[n] = ("SKIP", time.perf_counter() - t0, str(exc))
        raise
    except BaseException:
        CRITERIA[n] = ("FAIL", time.perf_counter() - t0, "; ".join(note))
        raise
    elapsed = time.perf_counter() - t0
    if elapsed >= limit:
        CRITERIA[n] = ("FAIL", elapsed, f"over the {limit:.0f} s limit")
        pytest.fail(f"criterion {n} took {elapsed:.1f} s, limit {limit} s")
    CRITERIA[n] = ("PASS", elapsed, "; ".join(note))


_SURFACES: dict = {}


def corpus():
    """All complete fans with at most 5 rays, coordinates in [-3, 3], one per GL(2,Z) class."""
    if "fans" not in _SURFACES:
        _SURFACES["fans"] = complete_fans(5, 3)
    return _SURFACES["fans"]


def surface_of(fan):
    key = fan.normal_form()
    if key not in _SURFACES:
        _SURFACES[key] = build_surface(fan)
    return _SURFACES[key]


# ---------------------------------------------------------------------------


def test_criterion_01_worked_example():
    with criterion(1, 5):
        rays = [(0, 1), (-1, 2), (-1, -1), (3, -2)]
        grading = [[0, 5, 4, 3], [1, 3, 3, 2]]
        assert same_row_lattice(build_surface(rays).grading, grading)
        s = build_surface(rays, grading=grading)
        assert [r.free_part for r in s.nef_rays] == [(3, 2), (4, 3)]
        fan = nef_chamber_fan(s)
        assert [w.ray for w in fan.walls] == [(15, 11)]
        delta = riemann_roch_polytope(s, [0, 0, 9, 3])
        assert set(delta.vertices) == {(0, 0), (3, 6), (6, 3), (-1, 0)}
        assert width_data(delta) == (6, {(0, 1), (0, -1), (1, -1), (-1, 1)})
        markov = {frozenset((g.plus, g.minus)) for g in surface_ideal(s).markov.generators}
        assert markov == {
            frozenset(((0, 1, 1, 0), (0, 0, 0, 3))),
            frozenset(((1, 1, 0, 1), (0, 0, 2, 0))),
            frozenset(((1, 2, 0, 0), (0, 0, 1, 2))),
        }
        assert lib_directions(s).directions == {(0, 1), (0, -1), (1, -1), (-1, 1), (1, 0), (-1, 0)}
        assert neg_set(s) == {(0, 1), (0, -1)}
        c = strict_transform(s, (0, 1))
        assert c.pair(s, c) == Fraction(-2, 5)


def test_criterion_02_rank_two_example():
    with criterion(2, 1):
        m = build_model(65, 242)
        assert str(list(m.c)) == "[0, 3, 1, 2, 1, 1, 1, 1, 3]"
        assert str(list(m.b)) == "[0, 1, 3, 4, 11, 15, 26, 41, 67, 242]"
        assert str(list(m.beta)) == "[242, 65, 47, 18, 11, 7, 4, 3, 1, 0]"
        rep = effective_cone(m)
        assert set(rep.ray_indices) == {None} | {i for i in range(10) if i not in (2, 4, 7)}
        assert m.classes[4] == (11, 11, -1) and m.square(4) == 0
        assert set(rep.tangency) == {H1, H2, m.classes[4]}
        _, pseudo = certify(m)
        assert pseudo.ok


def _check_identities(m):
    q, b, be = m.q, m.b, m.beta
    for i in range(2, len(be)):
        assert be[i] == be[i - 2] - m.c[i - 1] * be[i - 1]
    for i in range(len(b) - 1):
        assert be[i] * b[i + 1] + b[i] * be[i + 1] == q
        assert be[i] * b[i] + be[i + 1] * b[i + 1] < q
        assert m.dot(m.classes[i], m.classes[i + 1]) == 0
    for i in range(1, len(b) - 1):
        assert be[i - 1] * b[i + 1] - be[i + 1] * b[i - 1] == m.c[i] * q


def test_criterion_03_fibonacci_family():
    with criterion(3, 1) as note:
        for f in (6, 7, 8, 9):
            m = fibonacci_model(f)
            rep = effective_cone(m)
            assert rep.zero_curve is None
            assert len(rep.rays) == f + 1
            _check_identities(m)
        m5 = fibonacci_model(5)
        _check_identities(m5)
        rep5 = effective_cone(m5)
        # f = 5 is (3, 8): a zero curve at i = 2, the (r, s) = (2, 1) member of the zero-curve family
        assert (m5.p, m5.q) == (3, 8) and rep5.zero_curve == 2
        assert 2 * m5.b[2] * m5.beta[2] == m5.q
        z = zero_curve_family(2, 1, 1)
        assert (z.p, z.q) == (3, 8)
        note.append("f=5 has a zero curve at i=2 (strict inequality only from f=6)")


def _zero_form(p, q) -> bool:
    r = round((q / 2) ** 0.5)
    if 2 * r * r != q:
        return False
    norm = lambda x: min(x % q, (-x) % q)
    return any(gcd(r, s) == 1 and norm(2 * r * s + e) == p for s in range(r // 2 + 1) for e in (1, -1))


def test_criterion_04_zero_curve_family():
    with criterion(4, 10):
        rng = random.Random(4)
        pairs = set()
        while len(pairs) < 50:
            r = rng.randint(2, 40)
            s = rng.randint(0, r // 2)
            if gcd(r, s) == 1:
                pairs.add((r, s))
        for r, s in sorted(pairs):
            for sign in (1, -1):
                m = zero_curve_family(r, s, sign)
                zeros = [j for j in range(len(m.b)) if m.square(j) == 0]
                assert len(zeros) == 1, (r, s, sign)
                assert m.b[zeros[0]] == m.beta[zeros[0]] == r
        seen = 0
        while seen < 200:
            q = rng.randint(3, 5000)
            p = rng.randint(1, q // 2)
            if gcd(p, q) != 1 or _zero_form(p, q):
                continue
            seen += 1
            m = build_model(p, q)
            assert all(m.square(j) != 0 for j in range(len(m.b))), (p, q)


def test_criterion_05_chain_on_corpus():
    with criterion(5, 600) as note:
        fans = corpus()
        failures = []
        for fan in fans:
            chain = inclusion_chain(surface_of(fan))
            if not chain.holds:
                failures.append(tuple(fan.rays))
        note.append(f"{len(fans)} fans")
        assert not failures, failures[:5]


def _square_multiple(vertices) -> bool:
    if len(vertices) != 4:
        return False
    v = [tuple(Fraction(c) for c in p) for p in vertices]
    c = ((v[0][0] + v[2][0]) / 2, (v[0][1] + v[2][1]) / 2)
    if c != ((v[1][0] + v[3][0]) / 2, (v[1][1] + v[3][1]) / 2):
        return False
    d1 = (v[0][0] - c[0], v[0][1] - c[1])
    d2 = (v[1][0] - c[0], v[1][1] - c[1])
    if any(x.denominator != 1 for x in d1 + d2):
        return False
    k1 = gcd(int(d1[0]), int(d1[1]))
    k2 = gcd(int(d2[0]), int(d2[1]))
    return k1 == k2 and abs(d1[0] * d2[1] - d1[1] * d2[0]) == k1 * k1


def test_criterion_06_width_vs_brute_force():
    with criterion(6, 60) as note:
        rng = random.Random(6)
        done = sizes = 0
        counts = {}
        while done < 500:
            pts = [(rng.randint(-20, 20), rng.randint(-20, 20)) for _ in range(rng.randint(3, 8))]
            P = Polygon.hull(pts)
            if P.dim != 2:
                continue
            done += 1
            lw, wd = width_data(P)
            assert (lw, set(wd)) == brute_width(P.int_vertices()), pts
            assert len(wd) <= 8
            if len(wd) == 8:
                assert _square_multiple(P.vertices), pts
            if len(wd) == 6:
                u, v, w = six_direction_check(wd)
                assert u + v + w == (0, 0)
            counts[len(wd)] = counts.get(len(wd), 0) + 1
        # the square family itself, in a few lattice positions
        for k in (1, 2, 5):
            for A in (((1, 0), (0, 1)), ((2, 1), (1, 1)), ((1, 3), (0, 1))):
                sq = [(k, 0), (0, k), (-k, 0), (0, -k)]
                P = Polygon.hull([(A[0][0] * x + A[0][1] * y + 3, A[1][0] * x + A[1][1] * y - 1) for x, y in sq])
                lw, wd = width_data(P)
                assert len(wd) == 8 and _square_multiple(P.vertices)
                T = Polygon.hull([(A[0][0] * x + A[0][1] * y, A[1][0] * x + A[1][1] * y) for x, y in ((0, 0), (k, 0), (0, k))])
                lw, wd = width_data(T)
                assert (lw, set(wd)) == brute_width(T.int_vertices()) and len(wd) == 6
                u, v, w = six_direction_check(wd)
                assert u + v + w == (0, 0)
        note.append("|wd| counts " + ", ".join(f"{k}:{v}" for k, v in sorted(counts.items())))


def test_criterion_07_markov_oracle_on_corpus():
    with criterion(7, 600) as note:
        fans = corpus()
        failures = []
        for fan in fans:
            s = surface_of(fan)
            gens = [(g.plus, g.minus) for g in surface_ideal(s).markov.generators]
            if not markov_oracle_check(list(s.rays), s.positive_relation, gens):
                failures.append(tuple(fan.rays))
        note.append(f"{len(fans)} fans")
        assert not failures, failures[:5]


def test_criterion_08_mult1_three_way():
    with criterion(8, 300) as note:
        fans = complete_fans(3, 4)
        for fan in fans:
            s = build_surface(fan)
            v = decide_mult1(s, cross_check=True)
            ci = surface_ideal(s).classification.kind == "CompleteIntersection"
            assert v.status is not None
            assert v.status == test_comp(s).passed == ci, fan.rays
            assert v.details.get("groebner_agrees") is True, fan.rays
        assert decide_mult1(build_surface([(1, 0), (1, 3), (-2, -3)])).status is False
        for rays in ([(1, 0), (0, 1), (-1, 0), (0, -1)], [(1, 0), (0, 1), (-1, -1)], [(-2, -3), (1, 0), (0, 1)]):
            assert decide_mult1(build_surface(rays)).status is True
        note.append(f"{len(fans)} fans")


PAPER_TRIPLES = {
    (2, 6, 12), (2, 7, 12), (2, 8, 12), (4, 10, 14), (4, 10, 15), (4, 10, 16),
    (6, 10, 16), (6, 11, 16), (6, 12, 16), (2, 8, 14), (3, 8, 14), (4, 8, 14),
}


def test_criterion_09_sixteen_rays():
    with criterion(9, 1800):
        s = build_surface(read_fan(fixture_path("sixteen_rays.fan").read_text()))
        try:
            si = surface_ideal(s, BUDGETS["high"])
        except BudgetExceeded as exc:
            pytest.skip(f"budget exhausted; {len(exc.partial or [])} partial generators")
        res = test_comp_basis(si.minimal)
        assert set(res.witnesses) == PAPER_TRIPLES
        assert len(res.witnesses) == 12


def test_criterion_10_main_theorem_verifier():
    with criterion(10, 60):
        rng = random.Random(10)
        seen = 0
        while seen < 100:
            q = rng.randint(3, 10**4)
            p = rng.randint(1, q // 2)
            if gcd(p, q) != 1:
                continue
            seen += 1
            m = build_model(p, q)
            eff, pseudo = certify(m)
            assert pseudo is not None and pseudo.ok, (p, q)
            chain = chain_eff_test(m.lattice, eff_chain_tuple(m))
            assert chain is not None and tuple(chain.rays) == effective_cone(m).rays, (p, q)
