"""Exact integer linear algebra: normal forms, sublattices and affine sublattices of Z^k.

Matrices are plain lists of rows of Python ints.  Everything here is exact;
no floating point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Vector = tuple
Matrix = list


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Matrix:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rank(M: Sequence[Sequence[int]]) -> int:
    return len(hnf_rows(M, len(M[0]) if M else 0))


def solve_rational(A: Sequence[Sequence], b: Sequence) -> Optional[list]:
    """Solve a square system over Q; None if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Hermite normal form


def hnf_rows(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Row-style Hermite normal form of the row lattice.

    Returns the nonzero rows in echelon form: pivots strictly increasing in
    column, positive, and every entry above a pivot reduced into [0, pivot).
    """
    A = [list(r) for r in rows if any(r)]
    pr = 0
    for col in range(ncols):
        if pr >= len(A):
            break
        while True:
            nz = [i for i in range(pr, len(A)) if A[i][col] != 0]
            if not nz:
                break
            i_min = min(nz, key=lambda i: abs(A[i][col]))
            A[pr], A[i_min] = A[i_min], A[pr]
            clean = True
            for i in range(pr + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // A[pr][col]
                    A[i] = [x - q * y for x, y in zip(A[i], A[pr])]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if pr >= len(A) or A[pr][col] == 0:
            continue
        if A[pr][col] < 0:
            A[pr] = [-x for x in A[pr]]
        p = A[pr][col]
        for i in range(pr):
            q = A[i][col] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[pr])]
        pr += 1
    return [r for r in A[:pr]]


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^dim, stored by its canonical HNF basis (rows)."""

    dim: int
    basis: tuple = ()

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence[int]], dim: int) -> "Sublattice":
        gens = [list(g) for g in gens]
        for g in gens:
            if len(g) != dim:
                raise ValueError("generator of wrong length")
        return cls(dim, tuple(tuple(r) for r in hnf_rows(gens, dim)))

    @classmethod
    def full(cls, dim: int) -> "Sublattice":
        return cls(dim, tuple(tuple(r) for r in identity(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def pivots(self) -> list:
        return [next(c for c, x in enumerate(row) if x) for row in self.basis]

    def reduce(self, v: Sequence[int]) -> tuple:
        """Canonical representative of v modulo the lattice."""
        v = list(v)
        for row, c in zip(self.basis, self.pivots()):
            q = v[c] // row[c]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence[int]) -> Optional[list]:
        """Integer coefficients of v in the stored basis, or None if v is not in the lattice."""
        if self.rank == 0:
            return [] if not any(v) else None
        return solve_integer(transpose(self.basis), list(v))

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(b in self for b in other.basis)

    def intersect(self, other: "Sublattice") -> "Sublattice":
        res = intersect_affine(AffineSublattice.make((0,) * self.dim, self),
                               AffineSublattice.make((0,) * self.dim, other))
        assert res is not None
        return res.lattice


def hnf(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Sublattice:
    """Row-space lattice of M in canonical Hermite normal form."""
    if ncols is None:
        if not M:
            raise ValueError("empty matrix needs an explicit column count")
        ncols = len(M[0])
    return Sublattice.from_generators(M, ncols)


def lattice_index(L: Sublattice):
    """[Z^k : L]; math.inf when L is not of full rank."""
    if L.rank < L.dim:
        return math.inf
    return math.prod(row[c] for row, c in zip(L.basis, L.pivots()))


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """M = U * S * V with U, V unimodular; U_inv and V_inv are carried along."""

    U: tuple
    S: tuple
    V: tuple
    U_inv: tuple
    V_inv: tuple

    @property
    def diagonal(self) -> list:
        n = min(len(self.S), len(self.S[0]) if self.S else 0)
        return [self.S[i][i] for i in range(n)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def snf(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SmithDecomposition:
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    S = [list(r) for r in M]
    P, Pi = identity(m), identity(m)  # P M Q = S, Pi = P^-1
    Q, Qi = identity(n), identity(n)

    def row_add(i, j, c):  # row_i += c row_j
        S[i] = [x + c * y for x, y in zip(S[i], S[j])]
        P[i] = [x + c * y for x, y in zip(P[i], P[j])]
        for r in Pi:
            r[j] -= c * r[i]

    def row_swap(i, j):
        S[i], S[j] = S[j], S[i]
        P[i], P[j] = P[j], P[i]
        for r in Pi:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        S[i] = [-x for x in S[i]]
        P[i] = [-x for x in P[i]]
        for r in Pi:
            r[i] = -r[i]

    def col_add(j, i, c):  # col_j += c col_i
        for r in S:
            r[j] += c * r[i]
        for r in Q:
            r[j] += c * r[i]
        Qi[i] = [x - c * y for x, y in zip(Qi[i], Qi[j])]

    def col_swap(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in Q:
            r[i], r[j] = r[j], r[i]
        Qi[i], Qi[j] = Qi[j], Qi[i]

    for t in range(min(m, n)):
        entries = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    row_add(i, t, -(S[i][t] // S[t][t]))
                    if S[i][t]:
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    col_add(j, t, -(S[t][j] // S[t][t]))
                    if S[t][j]:
                        done = False
            if not done:
                cand = [(abs(S[i][t]), i, t) for i in range(t, m) if S[i][t]]
                cand += [(abs(S[t][j]), t, j) for j in range(t, n) if S[t][j]]
                _, i0, j0 = min(cand)
                row_swap(t, i0)
                col_swap(t, j0)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % S[t][t]), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if S[t][t] < 0:
            row_neg(t)
    tup = lambda A: tuple(tuple(r) for r in A)
    return SmithDecomposition(U=tup(Pi), S=tup(S), V=tup(Qi), U_inv=tup(P), V_inv=tup(Q))


def kernel_basis(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list:
    """Basis of the integer kernel {x : Mx = 0}."""
    n = ncols if ncols is not None else len(M[0])
    if not M:
        return identity(n)
    sd = snf(M, n)
    r = sd.rank
    return [[sd.V_inv[i][j] for i in range(n)] for j in range(r, n)]


def solve_integer(M: Sequence[Sequence[int]], b: Sequence[int],
                  ncols: Optional[int] = None) -> Optional[list]:
    """Some integer x with Mx = b, or None if there is none."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if n == 0:
        return [] if not any(b) else None
    if not M:
        return [0] * n
    sd = snf(M, n)
    c = matvec(sd.U_inv, b)
    y = [0] * n
    for i, ci in enumerate(c):
        s = sd.S[i][i] if i < n else 0
        if s == 0:
            if ci != 0:
                return None
        elif ci % s:
            return None
        else:
            y[i] = ci // s
    return matvec(sd.V_inv, y)


def solve_system(M: Sequence[Sequence[int]], b: Sequence[int], ncols: int):
    """(particular solution, kernel basis) of Mx = b over Z, or None."""
    x = solve_integer(M, b, ncols)
    if x is None:
        return None
    return x, kernel_basis(M, ncols)


# ---------------------------------------------------------------------------
# Affine sublattices


@dataclass(frozen=True)
class AffineSublattice:
    """offset + lattice, with offset reduced canonically modulo the lattice."""

    offset: tuple
    lattice: Sublattice

    @classmethod
    def make(cls, offset: Sequence[int], lattice: Sublattice) -> "AffineSublattice":
        if len(offset) != lattice.dim:
            raise ValueError("offset dimension mismatch")
        return cls(lattice.reduce(offset), lattice)

    @property
    def dim(self) -> int:
        return self.lattice.dim

    def __contains__(self, v) -> bool:
        return tuple(x - o for x, o in zip(v, self.offset)) in self.lattice


def intersect_affine(A: AffineSublattice, B: AffineSublattice) -> Optional[AffineSublattice]:
    """Exact intersection of two affine sublattices, or None when empty."""
    if A.dim != B.dim:
        raise ValueError("ambient dimensions differ")
    k = A.dim
    B1, B2 = A.lattice.basis, B.lattice.basis
    r1, r2 = len(B1), len(B2)
    # offset_A + B1^T x = offset_B + B2^T y
    M = [[B1[j][i] for j in range(r1)] + [-B2[j][i] for j in range(r2)] for i in range(k)]
    rhs = [b - a for a, b in zip(A.offset, B.offset)]
    sol = solve_system(M, rhs, r1 + r2)
    if sol is None:
        return None
    x, ker = sol
    point = [a + sum(x[j] * B1[j][i] for j in range(r1)) for i, a in enumerate(A.offset)]
    gens = [[sum(v[j] * B1[j][i] for j in range(r1)) for i in range(k)] for v in ker]
    return AffineSublattice.make(point, Sublattice.from_generators(gens, k))
