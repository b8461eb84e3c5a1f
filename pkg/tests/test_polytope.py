from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import brute_width, parallelogram_hilbert_basis
from toricbl.exact import LatticeVector, det2
from toricbl.polytope import (
    Cone2D,
    Fan,
    Polygon,
    complete_fans,
    hilbert_basis,
    lattice_points_in,
    minkowski_diff_polar,
    parse_points,
    six_direction_check,
    sort_by_angle,
    width_data,
    width_profile,
)

coord = st.integers(-20, 20)
points = st.lists(st.tuples(coord, coord), min_size=3, max_size=8)


def full_dim(pts):
    p = Polygon.hull(pts)
    return p if p.dim == 2 else None


def test_worked_polygon_width():
    lw, wd = width_data(Polygon.hull([(0, 0), (3, 6), (6, 3), (-1, 0)]))
    assert lw == 6
    assert wd == {(0, 1), (0, -1), (1, -1), (-1, 1)}


def test_segment_has_width_zero():
    lw, wd = width_data(Polygon.hull([(0, 0), (1, 0)]))
    assert lw == 0 and wd == {(0, 1), (0, -1)}


def test_point_rejected():
    with pytest.raises(ValueError):
        width_data(Polygon.hull([(2, 3)]))


def test_square_has_eight_directions():
    lw, wd = width_data(Polygon.hull([(1, 0), (0, 1), (-1, 0), (0, -1)]))
    assert lw == 2 and len(wd) == 8
    assert six_direction_check(wd) is None


def test_triangle_six_directions():
    lw, wd = width_data(Polygon.hull([(0, 0), (1, 0), (0, 1)]))
    assert lw == 1 and wd == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)}
    u, v, w = six_direction_check(wd)
    assert u + v + w == (0, 0)
    assert six_direction_check({(1, 0), (-1, 0)}) is None


@given(points)
@settings(max_examples=150, deadline=None)
def test_width_matches_brute_force(pts):
    p = full_dim(pts)
    assume(p is not None)
    lw, wd = width_data(p)
    ref_lw, ref_wd = brute_width(p.int_vertices())
    assert lw == ref_lw
    assert wd == ref_wd
    assert len(wd) <= 8
    for v in wd:
        assert p.width_in(v) == lw
    if len(wd) == 6:
        trip = six_direction_check(wd)
        assert trip is not None and trip[0] + trip[1] + trip[2] == (0, 0)


unimodular = st.sampled_from([((1, 0), (0, 1)), ((1, 1), (0, 1)), ((2, 1), (1, 1)), ((0, 1), (-1, 0)), ((3, 2), (1, 1)), ((1, -2), (0, 1))])


@given(st.integers(1, 5), unimodular, st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
@settings(max_examples=40, deadline=None)
def test_diamond_multiples_have_eight_directions(k, A, shift):
    diamond = [(k, 0), (0, k), (-k, 0), (0, -k)]
    img = [(A[0][0] * x + A[0][1] * y + shift[0], A[1][0] * x + A[1][1] * y + shift[1]) for x, y in diamond]
    lw, wd = width_data(Polygon.hull(img))
    assert lw == 2 * k and len(wd) == 8


def test_minkowski_difference_of_triangle_is_hexagon():
    pm, polar = minkowski_diff_polar(Polygon.hull([(0, 0), (1, 0), (0, 1)]))
    assert set(pm.vertices) == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)}
    # polar of a centrally symmetric polygon is centrally symmetric
    assert {(-x, -y) for x, y in polar.vertices} == set(polar.vertices)
    assert all(pm.support(v) == 1 for v in polar.vertices)


def test_symmetric_polygon_difference_is_double():
    sq = Polygon.hull([(1, 0), (0, 1), (-1, 0), (0, -1)])
    pm, _ = minkowski_diff_polar(sq)
    assert set(pm.vertices) == {(2 * x, 2 * y) for x, y in sq.vertices}


def test_polar_vertices_have_rational_coordinates():
    hexagon = Polygon.hull([(2, 0), (-2, 0), (0, 2), (0, -2), (2, 2), (-2, -2)])
    _, polar = minkowski_diff_polar(hexagon)
    assert any(Fraction(c).denominator > 1 for v in polar.vertices for c in v)


@given(points)
@settings(max_examples=60, deadline=None)
def test_width_profile_kernel_agrees(pts):
    p = full_dim(pts)
    assume(p is not None)
    prof = width_profile(p, 4)
    for v, w in prof.items():
        assert w == p.width_in(v)


# --- lattice points, cones, fans -------------------------------------------


@given(points)
@settings(max_examples=60, deadline=None)
def test_lattice_points_match_box_scan(pts):
    p = full_dim(pts)
    assume(p is not None)
    found = set(p.lattice_points())
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    ref = {(x, y) for x in range(min(xs), max(xs) + 1) for y in range(min(ys), max(ys) + 1) if p.contains((x, y))}
    assert found == ref


def test_lattice_points_in_halfplanes():
    # 0 <= x, 0 <= y, x + y <= 2
    hp = [((-1, 0), 0), ((0, -1), 0), ((1, 1), 2)]
    assert set(lattice_points_in(hp, 0, 2)) == {(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)}


@pytest.mark.parametrize(
    "u,v,expected",
    [
        ((1, 0), (0, 1), {(1, 0), (0, 1)}),
        ((1, 0), (1, 2), {(1, 0), (1, 1), (1, 2)}),
        ((1, 0), (1, 3), {(1, 0), (1, 1), (1, 2), (1, 3)}),
    ],
)
def test_hilbert_basis_examples(u, v, expected):
    assert hilbert_basis(Cone2D(u, v)) == expected


prim = st.tuples(st.integers(-7, 7), st.integers(-7, 7)).filter(lambda v: v != (0, 0) and gcd(*v) == 1)


@given(prim, prim)
@settings(max_examples=100, deadline=None)
def test_hilbert_basis_matches_parallelogram_oracle(u, v):
    assume(det2(u, v) > 0)
    hb = hilbert_basis(Cone2D(u, v))
    assert hb == parallelogram_hilbert_basis(u, v)
    # generates every lattice point of the parallelogram
    det = det2(u, v)
    for x in range(-14, 15):
        for y in range(-14, 15):
            s = Fraction(x * v[1] - y * v[0], det)
            t = Fraction(u[0] * y - u[1] * x, det)
            if 0 <= s <= 1 and 0 <= t <= 1:
                assert _decomposes((x, y), sorted(hb), u, v)


def _decomposes(p, gens, u, v, depth=0) -> bool:
    if p == (0, 0):
        return True
    if depth > 40:
        return False
    for g in gens:
        c = (p[0] - g[0], p[1] - g[1])
        if c == (0, 0) or (det2(u, c) >= 0 and det2(c, v) >= 0):
            if _decomposes(c, gens, u, v, depth + 1):
                return True
    return False


def test_cone_validation():
    with pytest.raises(ValueError):
        Cone2D((2, 0), (0, 1))
    with pytest.raises(ValueError):
        Cone2D((0, 1), (1, 0))


def test_fan_sorts_and_checks_completeness():
    f = Fan([(0, 1), (-1, -1), (1, 0)])
    assert f.rays == ((1, 0), (0, 1), (-1, -1))
    assert f.is_complete
    assert not Fan([(1, 0), (0, 1)]).is_complete
    with pytest.raises(ValueError):
        Fan([(2, 0), (0, 1), (-1, -1)])
    with pytest.raises(ValueError):
        Fan([(1, 0), (1, 0), (0, 1)])
    assert f.cone_index_containing((1, 1)) == 0


unimod = st.sampled_from([((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)), ((2, 1), (1, 1)), ((-1, 0), (0, 1)), ((1, -3), (0, 1))])


@given(st.sampled_from(complete_fans(4, 2)), unimod)
@settings(max_examples=60, deadline=None)
def test_normal_form_is_gl2_invariant(fan, A):
    img = Fan([(A[0][0] * x + A[0][1] * y, A[1][0] * x + A[1][1] * y) for x, y in fan.rays])
    assert img.normal_form() == fan.normal_form()


def test_enumeration_is_deduplicated():
    fans = complete_fans(4, 1)
    forms = [f.normal_form() for f in fans]
    assert len(forms) == len(set(forms))
    # P^2 and P^1 x P^1 (and the blow-up of P^2 at a point with 4 rays) are all there
    sizes = sorted(len(f) for f in fans)
    assert sizes.count(3) >= 1 and sizes.count(4) >= 2


def test_sort_by_angle():
    vs = sort_by_angle([(0, -1), (-1, 0), (1, 1), (1, 0)])
    assert vs == [(1, 0), (1, 1), (-1, 0), (0, -1)]
    assert all(isinstance(v, LatticeVector) for v in vs)


def test_parse_points_reports_line_numbers():
    assert parse_points("# c\n1 2\n\n3,4 # tail\n") == [(1, 2), (3, 4)]
    with pytest.raises(ValueError, match="line 2"):
        parse_points("1 2\n1 2 3\n")
    with pytest.raises(ValueError, match="line 1"):
        parse_points("a b\n")
