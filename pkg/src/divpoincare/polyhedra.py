"""Lattice-point generating functions of rational polyhedra.

Vertex tangent cones are summed following Brion.  Non-simplicial tangent cones
are split by a pulling triangulation into half-open simplicial cones, and each
simplicial cone is handled through its fundamental parallelepiped.  Cones whose
apex is not a lattice point are homogenized one dimension up.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .genfun import RationalGF, _prod_binomials, orient, padd, pdivide_binomial, pmul, pshift
from .lattice import (AffineSublattice, Sublattice, kernel_basis, rank, snf, solve_integer,
                      solve_rational)


@dataclass(frozen=True)
class RationalPolyhedron:
    """The set {x in R^k : A x >= b} with integer A and b."""

    A: tuple
    b: tuple
    dim: int

    @classmethod
    def make(cls, A: Sequence[Sequence[int]], b: Sequence[int], dim: Optional[int] = None):
        A = tuple(tuple(int(x) for x in row) for row in A)
        if dim is None:
            if not A:
                raise ValueError("cannot infer dimension of an unconstrained polyhedron")
            dim = len(A[0])
        if len(b) != len(A) or any(len(row) != dim for row in A):
            raise ValueError("constraint shape mismatch")
        return cls(A, tuple(int(x) for x in b), dim)

    def __contains__(self, x) -> bool:
        return all(_dot(row, x) >= bi for row, bi in zip(self.A, self.b))


@dataclass(frozen=True)
class SimplicialConeTerm:
    """apex + half-open cone on linearly independent generators, intersected with a lattice."""

    apex: tuple
    generators: tuple
    lattice: Optional[Sublattice] = None
    open_flags: tuple = field(default=())


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _primitive(v) -> tuple:
    """Primitive integer vector along a rational direction."""
    den = math.lcm(*(Fraction(x).denominator for x in v))
    w = [int(Fraction(x) * den) for x in v]
    g = math.gcd(*w)
    return tuple(x // g for x in w) if g else tuple(w)


# ---------------------------------------------------------------------------
# Cones and vertices


def cone_rays(A: Sequence[Sequence[int]], n: int) -> list:
    """Extreme rays of the pointed cone {y : A y >= 0} in R^n, as primitive vectors."""
    if n == 0:
        return []
    if not A or rank(A) < n:
        raise ValueError("cone contains a line")
    rays = set()
    for J in itertools.combinations(range(len(A)), n - 1):
        sub = [A[j] for j in J]
        if sub and rank(sub) != n - 1:
            continue
        ker = kernel_basis(sub, n)
        if len(ker) != 1:
            continue
        u = ker[0]
        for s in (1, -1):
            w = [s * x for x in u]
            if all(_dot(row, w) >= 0 for row in A):
                rays.add(_primitive(w))
    return sorted(rays)


def polyhedron_vertices(A: Sequence[Sequence[int]], b: Sequence[int], n: int) -> list:
    """Vertices of {x : Ax >= b} as tuples of Fractions, sorted."""
    found = set()
    for S in itertools.combinations(range(len(A)), n):
        x = solve_rational([A[i] for i in S], [b[i] for i in S])
        if x is None:
            continue
        if all(_dot(row, x) >= bi for row, bi in zip(A, b)):
            found.add(tuple(x))
    return sorted(found)


def tangent_cone(A, b, vertex) -> list:
    """Rows of the constraints active at vertex."""
    return [row for row, bi in zip(A, b) if _dot(row, vertex) == bi]


def pulling_triangulation(rays: Sequence[Sequence[int]], facets: Sequence[Sequence[int]], n: int) -> list:
    """Split cone(rays) into simplicial cones, as lists of ray indices.

    facets are the inequality normals cutting out the cone; pulling always uses
    the smallest remaining ray index, which keeps the result deterministic.
    """

    def pull(idx: tuple, d: int) -> list:
        if len(idx) == d:
            return [list(idx)]
        p = idx[0]
        faces = set()
        for a in facets:
            F = tuple(i for i in idx if _dot(a, rays[i]) == 0)
            if not F or p in F or F in faces:
                continue
            if rank([rays[i] for i in F]) == d - 1:
                faces.add(F)
        out = []
        for F in sorted(faces):
            out.extend([p] + T for T in pull(F, d - 1))
        return out

    return pull(tuple(range(len(rays))), n)


def _generic_interior_point(rays, simplices):
    """An interior point lying on no hyperplane spanned by a simplex facet."""
    n = len(rays[0])
    for t in itertools.count(7):
        eps = Fraction(1, t * t + 1)
        y = [sum((1 + eps ** (i + 1)) * r[c] for i, r in enumerate(rays)) for c in range(n)]
        lams = []
        for s in simplices:
            G = [[rays[j][c] for j in s] for c in range(n)]
            lam = solve_rational(G, y)
            if any(x == 0 for x in lam):
                break
            lams.append(lam)
        else:
            return y, lams


def vertices_and_cones(P: RationalPolyhedron) -> list:
    """[(vertex, [simplicial ray lists with open flags])] for a pointed polyhedron."""
    n = P.dim
    if P.A and rank(P.A) < n or (not P.A and n > 0):
        raise ValueError("polyhedron contains a line")
    out = []
    for v in polyhedron_vertices(P.A, P.b, n):
        active = tangent_cone(P.A, P.b, v)
        rays = cone_rays(active, n)
        if len(rays) == n:
            out.append((v, [(rays, (False,) * n)]))
            continue
        simplices = pulling_triangulation(rays, active, n)
        _, lams = _generic_interior_point(rays, simplices)
        pieces = []
        for s, lam in zip(simplices, lams):
            pieces.append(([rays[j] for j in s], tuple(x < 0 for x in lam)))
        out.append((v, pieces))
    return out


def vertices_and_cones_of_Q(d: Sequence[int], g: int) -> list:
    """Vertices and tangent-cone rays of {x >= 0, d.x >= 2g-1}."""
    k = len(d)
    A = [[int(i == j) for j in range(k)] for i in range(k)] + [list(d)]
    b = [0] * k + [2 * g - 1]
    out = []
    for v, pieces in vertices_and_cones(RationalPolyhedron.make(A, b, k)):
        rays = sorted({r for gens, _ in pieces for r in gens})
        out.append((v, rays))
    return out


# ---------------------------------------------------------------------------
# Simplicial cones


def _parallelepiped(gens: Sequence[Sequence[int]], open_flags: Sequence[bool]) -> list:
    """Integer points sum beta_j g_j with beta_j in [0,1) (closed) or (0,1] (open).

    The coset representatives U t of Z^n / G Z^n come from the Smith form; with
    delta = |det G| the coordinates delta * G^-1 U t are integers, so fractional
    parts are residues mod delta and no rational arithmetic is needed per point.
    """
    n = len(gens)
    G = [[gens[j][c] for j in range(n)] for c in range(n)]
    sd = snf(G, n)
    diag = sd.diagonal
    if len(diag) < n or any(s == 0 for s in diag):
        raise ValueError("cone generators are linearly dependent")
    delta = math.prod(diag)
    # W = delta * G^-1 U, column by column
    cols = [solve_rational(G, [sd.U[i][j] for i in range(n)]) for j in range(n)]
    W = [[int(cols[j][i] * delta) for j in range(n)] for i in range(n)]
    points = []
    for t in itertools.product(*(range(s) for s in diag)):
        res = []
        for i in range(n):
            r = sum(W[i][j] * t[j] for j in range(n) if t[j]) % delta
            if r == 0 and open_flags[i]:
                r = delta
            res.append(r)
        points.append(tuple(sum(res[j] * gens[j][c] for j in range(n)) // delta for c in range(n)))
    return points


def _to_lattice_coords(L: Sublattice, v) -> list:
    """Rational coordinates of v in the basis of L; raises if v is outside span(L)."""
    r = L.rank
    piv = L.pivots()
    sq = [[L.basis[j][piv[i]] for j in range(r)] for i in range(r)]
    y = solve_rational(sq, [v[p] for p in piv]) if r else []
    back = [sum(y[j] * L.basis[j][i] for j in range(r)) for i in range(L.dim)]
    if any(Fraction(a) != Fraction(b) for a, b in zip(back, v)):
        raise ValueError("vector outside the span of the lattice")
    return y


def _cone_in_Zn(vertex, gens, open_flags) -> tuple:
    """(numerator, denominator) of vertex + half-open cone over Z^n."""
    n = len(gens)
    vertex = [Fraction(x) for x in vertex]
    m = math.lcm(*(x.denominator for x in vertex)) if n else 1
    if m == 1:
        v = [int(x) for x in vertex]
        num = Counter(tuple(a + b for a, b in zip(p, v)) for p in _parallelepiped(gens, open_flags))
        return dict(num), [tuple(g) for g in gens]
    # homogenize: (m v, m) and (g_j, 0), keep points at height one
    K = [tuple(int(m * x) for x in vertex) + (m,)] + [tuple(g) + (0,) for g in gens]
    num = Counter(p[:-1] for p in _parallelepiped(K, (False,) + tuple(open_flags)) if p[-1] == 1)
    return dict(num), [tuple(g) for g in gens]


def simplicial_cone_genfun(term: SimplicialConeTerm) -> RationalGF:
    """Generating function of apex + (half-open cone intersected with the reference lattice).

    An integral apex shifts the parallelepiped formula; a fractional apex goes
    through the homogenized computation instead.
    """
    gens = [tuple(g) for g in term.generators]
    k = len(term.apex)
    flags = tuple(term.open_flags) or (False,) * len(gens)
    L = term.lattice or Sublattice.full(k)
    if len(gens) != L.rank:
        raise ValueError("number of generators must equal the lattice rank")
    if any(Fraction(x).denominator != 1 for x in term.apex):
        return cone_genfun_at_vertex(term.apex, gens, L, flags)
    apex = tuple(int(x) for x in term.apex)
    if L.rank == 0:
        return RationalGF.monomial(apex)
    gy = []
    for g in gens:
        y = _to_lattice_coords(L, g)
        if any(x.denominator != 1 for x in y):
            raise ValueError(f"generator {g} is not in the lattice")
        gy.append([int(x) for x in y])
    if rank(gy) < len(gy):
        raise ValueError("cone generators are linearly dependent")
    num, den = _cone_in_Zn([0] * L.rank, gy, flags)
    return RationalGF.make(L.rank, num, den).substitute(L.basis, shift=apex, nvars=k)


def cone_genfun_at_vertex(vertex, rays, lattice: Optional[Sublattice] = None,
                          open_flags: Sequence[bool] = ()) -> RationalGF:
    """Generating function of a (possibly non-lattice) vertex plus a simplicial cone."""
    k = len(vertex)
    L = lattice or Sublattice.full(k)
    vy = _to_lattice_coords(L, vertex)
    gy = [_primitive(_to_lattice_coords(L, r)) for r in rays]
    flags = tuple(open_flags) or (False,) * len(gy)
    num, den = _cone_in_Zn(vy, gy, flags)
    return RationalGF.make(L.rank, num, den).substitute(L.basis, nvars=k)


# ---------------------------------------------------------------------------
# Brion


def _brion_raw(A, b, n) -> tuple:
    """(numerator, recession rays) with f(P) = numerator / prod (1 - z^rho)."""
    if n == 0:
        return ({(): 1} if all(x <= 0 for x in b) else {}), []
    if rank(A) < n:
        raise ValueError("polyhedron contains a line")
    verts = polyhedron_vertices(A, b, n)
    if not verts:
        return {}, []
    target = cone_rays(A, n)
    eq = [i for i, row in enumerate(A)
          if all(_dot(row, v) == b[i] for v in verts) and all(_dot(row, t) == 0 for t in target)]
    if eq:
        return _brion_in_hull(A, b, n, eq)
    pieces = vertices_and_cones(RationalPolyhedron.make(A, b, n))
    terms = []
    for v, simplices in pieces:
        for gens, flags in simplices:
            num, den = _cone_in_Zn(v, gens, flags)
            terms.append((num, den))
    # common denominator over oriented factors
    oriented = []
    for num, den in terms:
        c = Counter()
        for g in den:
            og, flipped = orient(g)
            if flipped:
                num = pshift(num, og, -1)
            c[og] += 1
        oriented.append((num, c))
    common = Counter()
    for _, c in oriented:
        common |= c
    total: dict = {}
    for num, c in oriented:
        total = padd(total, pmul(num, _prod_binomials((common - c).elements(), n)))
    total = pmul(total, _prod_binomials(target, n))
    for g in common.elements():
        total = pdivide_binomial(total, g)
        if total is None:
            raise ArithmeticError("Brion sum did not reduce to the recession denominator")
    return total, target


def _brion_in_hull(A, b, n, eq) -> tuple:
    """Brion for a lower-dimensional polyhedron, through the lattice points of its affine hull."""
    E = [A[i] for i in eq]
    x0 = solve_integer(E, [b[i] for i in eq], n)
    if x0 is None:
        return {}, []
    B = kernel_basis(E, n)
    d = len(B)
    rows, rhs = [], []
    for row, bi in zip(A, b):
        new = [_dot(row, g) for g in B]
        if any(new):
            rows.append(new)
            rhs.append(bi - _dot(row, x0))
    num, den = _brion_raw(rows, rhs, d)
    image = lambda e: tuple(x + sum(ej * g[i] for ej, g in zip(e, B)) for i, x in enumerate(x0))
    lin = lambda e: tuple(sum(ej * g[i] for ej, g in zip(e, B)) for i in range(n))
    return {image(e): c for e, c in num.items()}, [lin(t) for t in den]


def brion_genfun(P: RationalPolyhedron, lattice: Optional[Sublattice] = None) -> RationalGF:
    """Generating function of the lattice points of P, as a normalized RationalGF."""
    k = P.dim
    if lattice is None or lattice == Sublattice.full(k):
        num, den = _brion_raw(P.A, P.b, k)
        return RationalGF.make(k, num, den).normalize()
    B = lattice.basis
    r = lattice.rank
    A = [[sum(row[i] * B[j][i] for i in range(k)) for j in range(r)] for row in P.A]
    num, den = _brion_raw(A, P.b, r)
    if r == 0:
        return RationalGF.make(k, {(0,) * k: 1} if num else {})
    return RationalGF.make(r, num, den).substitute(B, nvars=k).normalize()


def orthant_affine_genfun(A: AffineSublattice) -> RationalGF:
    """Generating function of N^k intersected with an affine sublattice."""
    k = A.dim
    a = A.offset
    B = A.lattice.basis
    r = len(B)
    if r == 0:
        return RationalGF.monomial(a) if all(x >= 0 for x in a) else RationalGF.zero(k)
    rows = [[B[j][i] for j in range(r)] for i in range(k)]
    num, den = _brion_raw(rows, [-x for x in a], r)
    if not num:
        return RationalGF.zero(k)
    return RationalGF.make(r, num, den).substitute(B, shift=a, nvars=k).normalize()


def tail_term(d: Sequence[int], g: int) -> RationalGF:
    """Series with coefficient d.n - g + 1 on {n in N^k : d.n >= 2g-1}, zero elsewhere."""
    k = len(d)
    A = [[int(i == j) for j in range(k)] for i in range(k)] + [list(d)]
    b = [0] * k + [2 * g - 1]
    num, den = _brion_raw(A, b, k)
    f = RationalGF.make(k, num, den)
    return (f.euler(d) - f * (g - 1)).normalize()
