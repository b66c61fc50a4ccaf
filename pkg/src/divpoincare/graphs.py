"""Divisors on finite connected multigraphs.

Chip-firing reductions (Dhar burning), ranks, Jacobians, the homomorphism
n -> [sum n_i D_i] and its fibres, and the assembled Poincare series.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .lattice import (
    AffineSublattice,
    Sublattice,
    det,
    kernel_basis,
    matvec,
    snf,
    solve_integer,
)


class GraphError(ValueError):
    pass


class MultiGraph:
    """Finite connected multigraph on vertices 0..N-1 without self-loops."""

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        self.n = n
        mult: dict = {}
        for e in edges:
            u, v = int(e[0]), int(e[1])
            m = int(e[2]) if len(e) > 2 else 1
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if m < 0:
                raise GraphError("negative edge multiplicity")
            if m:
                key = (min(u, v), max(u, v))
                mult[key] = mult.get(key, 0) + m
        self.multiplicity = dict(sorted(mult.items()))
        self.adj = [dict() for _ in range(n)]
        for (u, v), m in self.multiplicity.items():
            self.adj[u][v] = m
            self.adj[v][u] = m
        if not self._connected():
            raise GraphError("graph is not connected")

    def _connected(self) -> bool:
        seen = {0}
        todo = [0]
        while todo:
            u = todo.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return len(seen) == self.n

    @property
    def edge_count(self) -> int:
        return sum(self.multiplicity.values())

    def degree(self, v: int) -> int:
        return sum(self.adj[v].values())

    def edges(self) -> list:
        return [[u, v, m] for (u, v), m in self.multiplicity.items()]

    def __repr__(self) -> str:
        return f"MultiGraph({self.n}, {self.edges()})"

    @cached_property
    def laplacian_matrix(self) -> list:
        L = [[0] * self.n for _ in range(self.n)]
        for (u, v), m in self.multiplicity.items():
            L[u][v] -= m
            L[v][u] -= m
            L[u][u] += m
            L[v][v] += m
        return L

    @cached_property
    def jacobian(self) -> "JacobianData":
        return JacobianData.of(self)

    @cached_property
    def distances(self) -> list:
        """BFS distance tables, one per source vertex."""
        out = []
        for q in range(self.n):
            dist = [-1] * self.n
            dist[q] = 0
            dq = deque([q])
            while dq:
                u = dq.popleft()
                for v in self.adj[u]:
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        dq.append(v)
            out.append(dist)
        return out

    # graph-level helpers used by the rest of the package

    def laplacian(self) -> list:
        return [list(r) for r in self.laplacian_matrix]

    def genus(self) -> int:
        return self.edge_count - self.n + 1

    def spanning_tree_count(self) -> int:
        L = self.laplacian_matrix
        return det([row[1:] for row in L[1:]])

    def canonical_divisor(self) -> tuple:
        return tuple(self.degree(v) - 2 for v in range(self.n))

    def basis_divisors(self) -> list:
        if self.n < 2:
            raise GraphError("basis divisors need at least two vertices")
        N = self.n
        return [tuple(1 if u == i else (-1 if u == N - 1 else 0) for u in range(N))
                for i in range(N - 1)]


def laplacian(G: MultiGraph) -> list:
    return G.laplacian()


def genus(G: MultiGraph) -> int:
    return G.genus()


def spanning_tree_count(G: MultiGraph) -> int:
    return G.spanning_tree_count()


def canonical_divisor(G: MultiGraph) -> tuple:
    return G.canonical_divisor()


def basis_divisors(G: MultiGraph) -> list:
    return G.basis_divisors()


def _check(G: MultiGraph, D: Sequence[int]) -> list:
    if len(D) != G.n:
        raise GraphError(f"divisor has length {len(D)}, graph has {G.n} vertices")
    return [int(x) for x in D]


def is_principal(G: MultiGraph, D: Sequence[int]) -> bool:
    return solve_integer(G.laplacian_matrix, _check(G, D)) is not None


def linearly_equivalent(G: MultiGraph, D1: Sequence[int], D2: Sequence[int]) -> bool:
    return is_principal(G, [a - b for a, b in zip(D1, D2)])


# ---------------------------------------------------------------------------
# Reduced divisors and rank


def _fire(G: MultiGraph, D: list, S: set, times: int = 1) -> None:
    """Fire every vertex of S `times` times (chips cross the cut only)."""
    for u in S:
        for v, m in G.adj[u].items():
            if v not in S:
                D[u] -= m * times
                D[v] += m * times


def q_reduce(G: MultiGraph, D: Sequence[int], q: int) -> tuple:
    """The unique q-reduced divisor linearly equivalent to D."""
    D = _check(G, D)
    dist = G.distances[q]
    depth = max(dist)
    layers = [[v for v in range(G.n) if dist[v] == k] for k in range(depth + 1)]
    # make D non-negative away from q, sweeping from the far layers inward
    for k in range(depth, 0, -1):
        ball = {v for v in range(G.n) if dist[v] < k}
        need = 0
        for v in layers[k]:
            if D[v] < 0:
                gain = sum(m for w, m in G.adj[v].items() if w in ball)
                need = max(need, (-D[v] + gain - 1) // gain)
        if need:
            _fire(G, D, ball, need)
    # Dhar burning: fire the unburnt set until everything burns
    while True:
        burnt = {q}
        threat = [0] * G.n
        stack = [q]
        while stack:
            u = stack.pop()
            for v, m in G.adj[u].items():
                if v in burnt:
                    continue
                threat[v] += m
                if threat[v] > D[v]:
                    burnt.add(v)
                    stack.append(v)
        if len(burnt) == G.n:
            return tuple(D)
        unburnt = set(range(G.n)) - burnt
        # fire as many times as stays legal
        times = None
        for v in unburnt:
            out = sum(m for w, m in G.adj[v].items() if w not in unburnt)
            if out:
                t = D[v] // out
                times = t if times is None else min(times, t)
        _fire(G, D, unburnt, times)


def is_effective_equivalent(G: MultiGraph, D: Sequence[int]) -> bool:
    """Whether |D| is non-empty."""
    if sum(D) < 0:
        return False
    return q_reduce(G, D, 0)[0] >= 0


def rank_graph(G: MultiGraph, D: Sequence[int], use_riemann_roch: bool = True) -> int:
    """Baker-Norine rank of D.

    With ``use_riemann_roch`` the value deg D - g is returned directly once
    deg D > 2g - 2; otherwise the rank is found by exhaustive search over
    effective divisors E of increasing degree.
    """
    D = _check(G, D)
    deg = sum(D)
    if deg < 0:
        return -1
    g = G.genus()
    if use_riemann_roch and deg > 2 * g - 2:
        return deg - g
    if not is_effective_equivalent(G, D):
        return -1
    for r in range(1, deg + 1):
        for support in itertools.combinations_with_replacement(range(G.n), r):
            E = list(D)
            for v in support:
                E[v] -= 1
            if not is_effective_equivalent(G, E):
                return r - 1
    return deg


# ---------------------------------------------------------------------------
# Jacobian


@dataclass(frozen=True)
class JacobianData:
    """Div(G)/Prin(G) = (+) Z/s_i  (+) Z read off the Smith form of the Laplacian.

    ``coords(D)`` gives the class of D: residues modulo every invariant factor
    followed by one integer coordinate that is +-deg(D).
    """

    n: int
    factors: tuple
    _U_inv: tuple = field(repr=False)

    @classmethod
    def of(cls, G: MultiGraph) -> "JacobianData":
        sd = snf(G.laplacian_matrix)
        return cls(G.n, tuple(sd.diagonal), sd.U_inv)

    @property
    def invariant_factors(self) -> tuple:
        return tuple(s for s in self.factors if s > 1)

    @property
    def order(self) -> int:
        return math.prod(s for s in self.factors if s)

    def coords(self, D: Sequence[int]) -> tuple:
        c = matvec(self._U_inv, D)
        return tuple(ci % s if s else ci for ci, s in zip(c, self.factors))

    def order_of(self, D: Sequence[int]) -> int:
        if sum(D) != 0:
            raise GraphError("order is only defined for degree-0 divisors")
        m = 1
        for ci, s in zip(self.coords(D), self.factors):
            if s > 1:
                m = math.lcm(m, s // math.gcd(s, ci))
        return m


def mu_order(G: MultiGraph, D: Sequence[int]) -> int:
    """Order of [D] in Jac(G)."""
    return G.jacobian.order_of(_check(G, D))


# ---------------------------------------------------------------------------
# The homomorphism Z^k -> Div(G)/Prin(G)


class PhiGraph:
    """n -> [sum n_i D_i] for a fixed list of divisors."""

    def __init__(self, G: MultiGraph, divisors: Sequence[Sequence[int]]):
        if not divisors:
            raise GraphError("need at least one divisor")
        self.graph = G
        self.divisors = [tuple(_check(G, D)) for D in divisors]
        self.k = len(self.divisors)
        self.degrees = tuple(sum(D) for D in self.divisors)

    def evaluate(self, n: Sequence[int]) -> tuple:
        return tuple(sum(ni * D[v] for ni, D in zip(n, self.divisors)) for v in range(self.graph.n))

    @cached_property
    def kernel(self) -> Sublattice:
        # (n, x) with sum n_i D_i - L x = 0, projected to n
        G, k, N = self.graph, self.k, self.graph.n
        L = G.laplacian_matrix
        M = [[self.divisors[i][v] for i in range(k)] + [-L[v][u] for u in range(N)]
             for v in range(N)]
        ker = kernel_basis(M, k + N)
        return Sublattice.from_generators([vec[:k] for vec in ker], k)


def phi_kernel(phi: PhiGraph) -> Sublattice:
    return phi.kernel


def degree_hyperplane(degrees: Sequence[int], l: int):
    """(point, lattice) with {n : sum n_i d_i = l} = point + lattice, or None."""
    k = len(degrees)
    if not any(degrees):
        return ((0,) * k, Sublattice.full(k)) if l == 0 else None
    p = solve_integer([list(degrees)], [l], k)
    if p is None:
        return None
    return tuple(p), Sublattice.from_generators(kernel_basis([list(degrees)], k), k)


def class_fibers_at_degree(phi: PhiGraph, l: int) -> list:
    """Fibres of phi meeting {sum n_i d_i = l}: (representative divisor, affine sublattice)."""
    hp = degree_hyperplane(phi.degrees, l)
    if hp is None:
        return []
    point, H0 = hp
    ker = phi.kernel
    # ker sits inside H0 with finite index; enumerate H0 / ker in H0-coordinates
    coords = [H0.coordinates(b) for b in ker.basis]
    quotient = Sublattice.from_generators(coords, H0.rank)
    if quotient.rank != H0.rank:
        raise AssertionError("kernel does not have finite index in the degree-0 hyperplane")
    boxes = [range(row[c]) for row, c in zip(quotient.basis, quotient.pivots())]
    fibers = []
    for rep in itertools.product(*boxes):
        n = [p + sum(r * b[i] for r, b in zip(rep, H0.basis)) for i, p in enumerate(point)]
        A = AffineSublattice.make(n, ker)
        fibers.append((phi.evaluate(A.offset), A))
    return fibers


def poincare_graph(G: MultiGraph, divisors: Sequence[Sequence[int]]):
    """Closed rational form of sum_{n in N^k} (r(sum n_i D_i) + 1) z^n."""
    from .genfun import RationalGF
    from .polyhedra import orthant_affine_genfun, tail_term

    phi = PhiGraph(G, divisors)
    g = G.genus()
    total = RationalGF.zero(phi.k)
    for l in range(0, 2 * g - 1):
        for rep, fiber in class_fibers_at_degree(phi, l):
            r = rank_graph(G, rep)
            if r < 0:
                continue
            total = total + orthant_affine_genfun(fiber) * (r + 1)
    total = total + tail_term(phi.degrees, g)
    return total.normalize()


def series_coefficient(G: MultiGraph, divisors: Sequence[Sequence[int]], n: Sequence[int],
                       use_riemann_roch: bool = True) -> int:
    """r(sum n_i D_i) + 1, straight from the definition."""
    D = [sum(ni * Di[v] for ni, Di in zip(n, divisors)) for v in range(G.n)]
    return rank_graph(G, D, use_riemann_roch) + 1
