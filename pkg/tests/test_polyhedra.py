import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divpoincare.genfun import RationalGF, compositions, gf_equal
from divpoincare.lattice import AffineSublattice, Sublattice, solve_rational
from divpoincare.polyhedra import (RationalPolyhedron, SimplicialConeTerm, brion_genfun, cone_genfun_at_vertex,
                                   cone_rays, orthant_affine_genfun, polyhedron_vertices, pulling_triangulation,
                                   simplicial_cone_genfun, tail_term, vertices_and_cones, vertices_and_cones_of_Q)

row3 = st.lists(st.integers(-3, 3), min_size=3, max_size=3)
row2 = st.lists(st.integers(-3, 3), min_size=2, max_size=2)


def points_poly(A, b, box):
    return {x: 1 for x in itertools.product(range(-box, box + 1), repeat=len(A[0]))
            if all(sum(a * xi for a, xi in zip(row, x)) >= bi for row, bi in zip(A, b))}


@st.composite
def polytopes(draw, dim):
    """A box [lo, hi]^dim cut by a few random half-spaces."""
    lo, hi = draw(st.integers(-2, 0)), draw(st.integers(0, 3))
    A, b = [], []
    for i in range(dim):
        e = [int(i == j) for j in range(dim)]
        A += [e, [-x for x in e]]
        b += [lo, -hi]
    for _ in range(draw(st.integers(0, 2))):
        A.append(draw(row3 if dim == 3 else row2))
        b.append(draw(st.integers(-4, 2)))
    return A, b


@settings(max_examples=35, deadline=None)
@given(polytopes(2))
def test_brion_polygons_count_points(Ab):
    A, b = Ab
    f = brion_genfun(RationalPolyhedron.make(A, b))
    want = RationalGF.make(2, points_poly(A, b, 4))
    assert gf_equal(f, want)


@settings(max_examples=20, deadline=None)
@given(polytopes(3))
def test_brion_polytopes_3d_count_points(Ab):
    A, b = Ab
    f = brion_genfun(RationalPolyhedron.make(A, b))
    want = RationalGF.make(3, points_poly(A, b, 4))
    assert gf_equal(f, want)


def test_brion_fractional_vertices():
    # triangle x, y >= 0, 2x + 3y <= 7: vertices (0,0), (7/2,0), (0,7/3)
    A, b = [[1, 0], [0, 1], [-2, -3]], [0, 0, -7]
    verts = polyhedron_vertices(A, b, 2)
    assert (Fraction(7, 2), Fraction(0)) in verts
    f = brion_genfun(RationalPolyhedron.make(A, b))
    assert gf_equal(f, RationalGF.make(2, points_poly(A, b, 5)))


def test_brion_non_simplicial_cone():
    # square pyramid apex: four facets through the origin
    A = [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1], [0, 0, -1]]
    b = [0, 0, 0, 0, -2]
    P = RationalPolyhedron.make(A, b)
    pieces = dict(vertices_and_cones(P))
    assert len(pieces[(0, 0, 0)]) == 2
    f = brion_genfun(P)
    assert gf_equal(f, RationalGF.make(3, points_poly(A, b, 3)))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=2, max_size=2), min_size=0, max_size=2),
       st.lists(st.integers(0, 4), min_size=0, max_size=2))
def test_brion_unbounded_in_orthant(cuts, rhs):
    A = [[1, 0], [0, 1]] + [c for c in cuts[:len(rhs)]]
    b = [0, 0] + rhs[:len(cuts)]
    f = brion_genfun(RationalPolyhedron.make(A, b))
    bound = 7
    got = f.expand(bound).coeffs
    want = {n: 1 for n in compositions(2, bound) if n in RationalPolyhedron.make(A, b)}
    assert got == want


def test_lower_dimensional_polyhedron():
    # the segment x + y = 2, x, y >= 0
    A, b = [[1, 0], [0, 1], [1, 1], [-1, -1]], [0, 0, 2, -2]
    f = brion_genfun(RationalPolyhedron.make(A, b))
    assert gf_equal(f, RationalGF.make(2, {(0, 2): 1, (1, 1): 1, (2, 0): 1}))


def test_empty_and_line():
    f = brion_genfun(RationalPolyhedron.make([[1], [-1]], [2, -1]))
    assert f.is_zero()
    with pytest.raises(ValueError):
        brion_genfun(RationalPolyhedron.make([[1, 0]], [0]))


def test_cone_rays_and_pulling():
    rays = cone_rays([[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], 3)
    assert len(rays) == 4
    simplices = pulling_triangulation(rays, [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], 3)
    assert len(simplices) == 2
    assert all(0 in s for s in simplices)
    with pytest.raises(ValueError):
        cone_rays([[1, 0]], 2)


def test_simplicial_cone_on_kernel_lattice():
    # ker of the K3 class map for D1 = v1 - v3, D2 = v2 - v3
    L = Sublattice.from_generators([[3, 0], [0, 3], [1, 1]], 2)
    f = simplicial_cone_genfun(SimplicialConeTerm((0, 0), ((3, 0), (0, 3)), L))
    want = RationalGF.make(2, {(0, 0): 1, (1, 1): 1, (2, 2): 1}, [(3, 0), (0, 3)])
    assert gf_equal(f, want)


def in_cone(apex, gens, flags, L, x):
    d = [xi - ai for xi, ai in zip(x, apex)]
    if tuple(int(v) for v in d) not in L:
        return False
    n = len(gens)
    lam = solve_rational([[gens[j][c] for j in range(n)] for c in range(n)], d)
    return all(l > 0 if op else l >= 0 for l, op in zip(lam, flags))


@st.composite
def lattice_cones(draw):
    k = draw(st.integers(2, 3))
    M = [[draw(st.integers(0, 2)) if i != j else draw(st.integers(1, 3)) for j in range(k)] for i in range(k)]
    L = Sublattice.from_generators(M, k)
    if L.rank < k:
        M = [[draw(st.integers(1, 3)) * int(i == j) for j in range(k)] for i in range(k)]
        L = Sublattice.from_generators(M, k)
    # generators: non-negative combinations of lattice rows with nonzero determinant
    coeffs = [[draw(st.integers(0, 2)) + int(i == j) for j in range(k)] for i in range(k)]
    gens = [tuple(sum(c[r] * M[r][col] for r in range(k)) for col in range(k)) for c in coeffs]
    apex = tuple(draw(st.integers(0, 2)) for _ in range(k))
    flags = tuple(draw(st.booleans()) for _ in range(k))
    return apex, gens, flags, L


@settings(max_examples=30, deadline=None)
@given(lattice_cones())
def test_simplicial_cone_against_enumeration(cone):
    apex, gens, flags, L = cone
    k = len(apex)
    try:
        f = simplicial_cone_genfun(SimplicialConeTerm(apex, tuple(gens), L, flags))
    except ValueError:
        # dependent generators are rejected
        assert solve_rational([[g[c] for g in gens] for c in range(k)], [0] * k) is None
        return
    bound = 7 if k == 2 else 5
    got = f.expand(bound).coeffs
    want = {x: 1 for x in compositions(k, bound) if in_cone(apex, gens, flags, L, x)}
    assert got == want


def test_fractional_apex_cone():
    f = cone_genfun_at_vertex((Fraction(1, 2), Fraction(0)), [(1, 0), (1, 2)])
    bound = 8
    want = {}
    for x in compositions(2, bound):
        lam = solve_rational([[1, 1], [0, 2]], [x[0] - Fraction(1, 2), x[1]])
        if all(l >= 0 for l in lam):
            want[x] = 1
    assert f.expand(bound).coeffs == want


def test_orthant_affine_examples():
    A = AffineSublattice.make((0, 0), Sublattice.from_generators([[3, 0], [0, 3], [1, 1]], 2))
    f = orthant_affine_genfun(A)
    assert gf_equal(f, RationalGF.make(2, {(0, 0): 1, (1, 1): 1, (2, 2): 1}, [(3, 0), (0, 3)]))
    B = AffineSublattice.make((1, -1), Sublattice.from_generators([[1, 1]], 2))
    assert orthant_affine_genfun(B).expand(6).coeffs == {(2 + t, t): 1 for t in range(3)}
    C = AffineSublattice.make((-1, 0), Sublattice(2, ()))
    assert orthant_affine_genfun(C).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=3))
def test_orthant_affine_against_enumeration(off, gens):
    A = AffineSublattice.make(off, Sublattice.from_generators(gens, 3))
    f = orthant_affine_genfun(A)
    bound = 5
    want = {x: 1 for x in compositions(3, bound) if x in A}
    assert f.expand(bound).coeffs == want


def test_q_vertices():
    got = vertices_and_cones_of_Q((1, 2), 2)
    assert [v for v, _ in got] == [(0, Fraction(3, 2)), (3, 0)]


@pytest.mark.parametrize("d,g", [((1,), 1), ((2, 1), 2), ((1, 1, 1), 3), ((0, 2), 2), ((-1, 2), 2),
                                 ((1, -2, 2), 1), ((0,), 2)])
def test_tail_contract(d, g):
    f = tail_term(d, g)
    bound = 8 if len(d) < 3 else 6
    got = f.expand(bound).coeffs
    want = {}
    for n in compositions(len(d), bound):
        dn = sum(a * b for a, b in zip(d, n))
        if dn >= 2 * g - 1 and dn - g + 1:
            want[n] = dn - g + 1
    assert got == want
