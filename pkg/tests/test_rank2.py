from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import convergent_table
from toricbl.criteria import chain_eff_test
from toricbl.rank2 import (
    E,
    H1,
    H2,
    build_model,
    certify,
    continued_fraction,
    eff_chain_tuple,
    effective_cone,
    fibonacci,
    fibonacci_model,
    normalize_fan,
    table,
    zero_curve_family,
)
from toricbl.toric import build_surface


@st.composite
def coprime_pairs(draw, qmax=2000):
    q = draw(st.integers(3, qmax))
    p = draw(st.integers(1, q // 2))
    assume(gcd(p, q) == 1)
    return p, q


def has_zero_form(p, q) -> bool:
    """Is ``(p, q)`` of the shape ``(2rs +- 1, 2r^2)`` after normalisation?"""
    r = round((q / 2) ** 0.5)
    if 2 * r * r != q:
        return False
    norm = lambda x: min(x % q, (-x) % q)
    return any(
        gcd(r, s) == 1 and norm(2 * r * s + e) == p for s in range(0, r // 2 + 1) for e in (1, -1)
    )


def test_paper_example_65_242():
    m = build_model(65, 242)
    assert list(m.c) == [0, 3, 1, 2, 1, 1, 1, 1, 3]
    assert list(m.b) == [0, 1, 3, 4, 11, 15, 26, 41, 67, 242]
    assert list(m.beta) == [242, 65, 47, 18, 11, 7, 4, 3, 1, 0]
    assert m.classes[4] == (11, 11, -1) and m.square(4) == 0
    rep = effective_cone(m)
    assert set(rep.ray_indices) == {None} | (set(range(10)) - {2, 4, 7})
    assert rep.zero_curve == 4
    assert set(rep.tangency) == {H1, H2, (11, 11, -1)}
    eff, pseudo = certify(m)
    assert eff is not None and pseudo.ok


@given(coprime_pairs())
@settings(max_examples=200, deadline=None)
def test_model_matches_convergent_oracle(pq):
    p, q = pq
    m = build_model(p, q)
    c, a, b, beta = convergent_table(p, q)
    assert (list(m.c), list(m.a), list(m.b), list(m.beta)) == (c, a, b, beta)


@given(coprime_pairs())
@settings(max_examples=200, deadline=None)
def test_recurrence_identities(pq):
    m = build_model(*pq)
    q, b, be, c = m.q, m.b, m.beta, m.c
    n = len(b) - 1
    assert be[0] == q and be[1] == m.p
    for i in range(2, n + 1):
        assert be[i] == be[i - 2] - c[i - 1] * be[i - 1]
    assert all(x < y for x, y in zip(b[1:], b[2:]))
    assert all(x > y for x, y in zip(be, be[1:]))
    for i in range(n):
        assert be[i] * b[i + 1] + b[i] * be[i + 1] == q
        assert be[i] * b[i] + be[i + 1] * b[i + 1] < q
        # consecutive curves are disjoint on the blow-up
        assert m.dot(m.classes[i], m.classes[i + 1]) == 0
    for i in range(1, n):
        assert be[i - 1] * b[i + 1] - be[i + 1] * b[i - 1] == c[i] * q
    for i in range(n + 1):
        assert m.square(i) == Fraction(2 * b[i] * be[i], q) - 1


@given(coprime_pairs(qmax=10_000))
@settings(max_examples=100, deadline=None)
def test_chain_test_agrees_with_effective_cone(pq):
    m = build_model(*pq)
    rep = effective_cone(m)
    eff = chain_eff_test(m.lattice, eff_chain_tuple(m))
    assert eff is not None
    assert set(eff.rays) == set(rep.rays)
    eff2, pseudo = certify(m)
    assert pseudo.ok and pseudo.light_cone_inside


@given(st.integers(2, 40), st.data(), st.sampled_from([1, -1]))
@settings(max_examples=50, deadline=None)
def test_zero_curve_family(r, data, sign):
    s = data.draw(st.integers(0, r // 2).filter(lambda s: gcd(r, s) == 1))
    m = zero_curve_family(r, s, sign)
    zeros = [j for j in range(len(m.b)) if m.square(j) == 0]
    assert len(zeros) == 1
    j = zeros[0]
    assert m.b[j] == m.beta[j] == r
    assert effective_cone(m).zero_curve == j


@given(coprime_pairs(qmax=5000))
@settings(max_examples=200, deadline=None)
def test_no_zero_curve_outside_the_family(pq):
    assume(not has_zero_form(*pq))
    m = build_model(*pq)
    assert effective_cone(m).zero_curve is None
    assert all(m.square(j) != 0 for j in range(len(m.b)))


@pytest.mark.parametrize("f", [6, 7, 8, 9])
def test_fibonacci_family(f):
    m = fibonacci_model(f)
    assert (m.p, m.q) == (fibonacci(f - 1), fibonacci(f + 1))
    rep = effective_cone(m)
    assert rep.zero_curve is None
    assert len(rep.rays) == f + 1
    assert all(2 * bi * be < m.q for bi, be in zip(m.b, m.beta))


def test_fibonacci_five_has_a_zero_curve():
    m = fibonacci_model(5)
    assert (m.p, m.q) == (3, 8)
    rep = effective_cone(m)
    assert rep.zero_curve == 2 and 2 * m.b[2] * m.beta[2] == m.q
    # the same surface as the zero-curve family at (r, s) = (2, 1)
    fam = zero_curve_family(2, 1, 1)
    assert (fam.p, fam.q) == (m.p, m.q)


def test_fibonacci_seven():
    assert (fibonacci_model(7).p, fibonacci_model(7).q) == (8, 21)


@given(coprime_pairs(qmax=300))
@settings(max_examples=60, deadline=None)
def test_model_form_matches_toric_surface(pq):
    m = build_model(*pq)
    s = build_surface(m.rays)
    # the primitive nef rays play the roles of H1 and H2
    N1, N2 = (r.free_part for r in s.nef_rays)
    assert s.pair(N1, N1) == s.pair(N2, N2) == 0
    assert s.pair(N1, N2) == m.form[0][1] == Fraction(1, m.q)
    assert normalize_fan(m.rays)[1] == m.q


@given(coprime_pairs(qmax=200), st.sampled_from([((1, 0), (0, 1)), ((2, 1), (1, 1)), ((1, 3), (0, 1)), ((0, 1), (1, 0))]))
@settings(max_examples=60, deadline=None)
def test_normalize_fan_is_gl2_invariant(pq, A):
    p, q = pq
    rays = [(1, 0), (p, q), (-1, 0), (-p, -q)]
    img = [(A[0][0] * x + A[0][1] * y, A[1][0] * x + A[1][1] * y) for x, y in rays]
    # exchanging the two ray pairs replaces p by its inverse mod q
    norm = lambda x: min(x % q, (-x) % q)
    assert normalize_fan(img[::-1]) == (min(norm(p), norm(pow(p, -1, q))), q)


def test_validation():
    with pytest.raises(ValueError):
        build_model(2, 4)
    with pytest.raises(ValueError):
        build_model(1, 1)
    with pytest.raises(ValueError):
        fibonacci_model(4)
    with pytest.raises(ValueError):
        zero_curve_family(4, 2, 1)
    with pytest.raises(ValueError):
        zero_curve_family(3, 1, 0)
    with pytest.raises(ValueError):
        normalize_fan([(1, 0), (0, 1), (-1, -1)])
    with pytest.raises(ValueError):
        normalize_fan([(1, 0), (0, 1), (-1, 0), (1, 1)])
    assert build_model(177, 242).p == 65
    assert continued_fraction(65, 242) == [0, 3, 1, 2, 1, 1, 1, 1, 3]


def test_table_rows():
    rows = table(build_model(65, 242))
    assert rows[0]["c"] is None and rows[1]["c"] == 0
    assert [r["ray"] for r in rows] == [i not in {2, 4, 7} for i in range(10)]
    assert rows[4]["square"] == 0 and rows[4]["class"] == (11, 11, -1)
    assert E == (0, 0, 1)
