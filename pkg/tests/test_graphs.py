import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divpoincare.genfun import RationalGF, gf_equal
from divpoincare.graphs import (GraphError, MultiGraph, PhiGraph, canonical_divisor, class_fibers_at_degree,
                                genus, is_principal, laplacian, linearly_equivalent, mu_order, poincare_graph,
                                q_reduce, rank_graph, series_coefficient, spanning_tree_count)
from divpoincare.lattice import det, lattice_index


@st.composite
def graphs(draw, max_n=4, max_extra=3):
    n = draw(st.integers(2, max_n))
    edges = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    for _ in range(draw(st.integers(0, max_extra))):
        a, b = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if a != b:
            edges.append((a, b))
    return MultiGraph(n, edges)


def divisors_on(G, lo=-2, hi=3):
    return st.lists(st.integers(lo, hi), min_size=G.n, max_size=G.n)


def brute_effective(G, D, box=3):
    """Search D + L x >= 0 over a box of firing vectors with x_0 = 0."""
    L = laplacian(G)
    for x in itertools.product(range(-box, box + 1), repeat=G.n - 1):
        x = (0,) + x
        if all(D[v] - sum(L[v][u] * x[u] for u in range(G.n)) >= 0 for v in range(G.n)):
            return True
    return False


def test_k3_basics():
    G = MultiGraph(3, [(0, 1), (1, 2), (0, 2)])
    assert genus(G) == 1
    assert spanning_tree_count(G) == 3
    assert canonical_divisor(G) == (0, 0, 0)
    assert is_principal(G, [2, -1, -1])
    assert not is_principal(G, [1, -1, 0])
    assert mu_order(G, [1, -1, 0]) == 3
    assert rank_graph(G, [0, 0, 0]) == 0
    assert rank_graph(G, [1, -1, 0]) == -1
    assert rank_graph(G, [1, 0, 0]) == 0
    assert rank_graph(G, [2, 0, 0]) == 1


def test_invalid_graphs():
    with pytest.raises(GraphError):
        MultiGraph(4, [(0, 1), (2, 3)])
    with pytest.raises(GraphError):
        MultiGraph(2, [(0, 5)])
    G = MultiGraph(2, [(0, 1)])
    with pytest.raises(GraphError):
        rank_graph(G, [1, 2, 3])


@settings(max_examples=40, deadline=None)
@given(graphs(), st.data())
def test_q_reduce_is_equivalent_and_reduced(G, data):
    D = data.draw(divisors_on(G))
    q = data.draw(st.integers(0, G.n - 1))
    R = q_reduce(G, D, q)
    assert linearly_equivalent(G, D, R)
    assert all(R[v] >= 0 for v in range(G.n) if v != q)
    # any equivalent divisor found by brute force has at most R[q] chips at q when effective off q
    L = laplacian(G)
    for x in itertools.product(range(-2, 3), repeat=G.n):
        E = [R[v] - sum(L[v][u] * x[u] for u in range(G.n)) for v in range(G.n)]
        if all(E[v] >= 0 for v in range(G.n) if v != q):
            assert E[q] <= R[q]


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=3, max_extra=2), st.data())
def test_effective_matches_brute_force(G, data):
    D = data.draw(divisors_on(G, -1, 2))
    assert (q_reduce(G, D, 0)[0] >= 0 and sum(D) >= 0) == brute_effective(G, D)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=3, max_extra=2), st.data())
def test_riemann_roch(G, data):
    D = data.draw(divisors_on(G, -1, 2))
    K = canonical_divisor(G)
    KD = [k - d for k, d in zip(K, D)]
    g = genus(G)
    r1 = rank_graph(G, D, use_riemann_roch=False)
    r2 = rank_graph(G, KD, use_riemann_roch=False)
    assert r1 - r2 == sum(D) - g + 1
    assert rank_graph(G, D) == r1


@settings(max_examples=30, deadline=None)
@given(graphs())
def test_jacobian_order_is_spanning_tree_count(G):
    assert G.jacobian.order == spanning_tree_count(G)
    minor = [row[1:] for row in laplacian(G)[1:]]
    assert spanning_tree_count(G) == abs(det(minor))


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=3), st.data())
def test_phi_kernel_membership(G, data):
    divs = data.draw(st.lists(divisors_on(G, -2, 2), min_size=1, max_size=2))
    phi = PhiGraph(G, divs)
    for n in itertools.product(range(-3, 4), repeat=phi.k):
        assert (n in phi.kernel) == is_principal(G, phi.evaluate(n))


def test_basis_divisor_kernel_index():
    G = MultiGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    phi = PhiGraph(G, G.basis_divisors())
    assert lattice_index(phi.kernel) == spanning_tree_count(G)


def test_class_fibers_partition_degree_slice():
    G = MultiGraph(3, [(0, 1), (1, 2), (0, 2)])
    phi = PhiGraph(G, [[1, 0, 0], [0, 1, 0]])
    fibers = class_fibers_at_degree(phi, 2)
    assert len(fibers) == 3
    for n in [(2, 0), (1, 1), (0, 2), (5, -3)]:
        assert sum(n in A for _, A in fibers) == 1


def test_k3_single_point_series():
    G = MultiGraph(3, [(0, 1), (1, 2), (0, 2)])
    f = poincare_graph(G, [[1, 0, 0]])
    # r(0) = r(p) = 0 on a genus-1 graph, then r(np) = n - 1
    want = RationalGF.make(1, {(0,): 1, (1,): -1, (2,): 1}, [(1,), (1,)])
    assert gf_equal(f, want)
    assert [f.expand(5)[(i,)] for i in range(6)] == [1, 1, 2, 3, 4, 5]


@settings(max_examples=12, deadline=None)
@given(graphs(max_n=4, max_extra=2), st.data())
def test_poincare_graph_matches_ranks(G, data):
    k = data.draw(st.integers(1, 2))
    divs = data.draw(st.lists(divisors_on(G, -1, 2), min_size=k, max_size=k))
    f = poincare_graph(G, divs)
    series = f.expand(5)
    for n in itertools.product(range(6), repeat=k):
        if sum(n) <= 5:
            assert series[n] == series_coefficient(G, divs, n)
