"""Divisors on chains of loops with exact symbolic edge lengths.

Lengths are vectors of rationals over declared generators (1, u_1, ..., u_t),
which are taken to be linearly independent over Q.  A point of loop j is its
anticlockwise distance from w_j, kept modulo the loop length.  Loops are
numbered 1..g; v_j sits at distance arc_j from w_j, so <w_j> = 0 and
<v_j> = arc_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .genfun import RationalGF
from .lattice import AffineSublattice, Sublattice, intersect_affine, solve_system


class ChainError(ValueError):
    pass


class MissingLocusError(ChainError):
    def __init__(self, r: int, d: int):
        super().__init__(f"no Brill-Noether locus supplied for (r, d) = ({r}, {d})")
        self.r, self.d = r, d


# ---------------------------------------------------------------------------
# Symbolic lengths


@dataclass(frozen=True)
class SymbolicLength:
    """A Q-linear combination of the generators 1, u_1, ..., u_t."""

    coeffs: tuple

    @classmethod
    def of(cls, values: Iterable) -> "SymbolicLength":
        return cls(tuple(Fraction(v) for v in values))

    @classmethod
    def zero(cls, n: int) -> "SymbolicLength":
        return cls((Fraction(0),) * n)

    def __add__(self, other: "SymbolicLength") -> "SymbolicLength":
        return SymbolicLength(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "SymbolicLength") -> "SymbolicLength":
        return SymbolicLength(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "SymbolicLength":
        return SymbolicLength(tuple(-a for a in self.coeffs))

    def __mul__(self, m) -> "SymbolicLength":
        return SymbolicLength(tuple(a * m for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def integer_ratio(self, other: "SymbolicLength") -> Optional[int]:
        """m with self = m * other for an integer m, else None."""
        if other.is_zero():
            return 0 if self.is_zero() else None
        c = next(i for i, x in enumerate(other.coeffs) if x)
        m = self.coeffs[c] / other.coeffs[c]
        if m.denominator != 1 or self != other * m:
            return None
        return int(m)

    def to_json(self) -> list:
        return [_frac_str(x) for x in self.coeffs]


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Chains and points


@dataclass(frozen=True)
class ChainOfLoops:
    generators: tuple
    lengths: tuple  # SymbolicLength per loop
    arcs: tuple  # l(v_j w_j) per loop

    @classmethod
    def make(cls, generators: Sequence[str], lengths, arcs) -> "ChainOfLoops":
        n = len(generators)
        lengths = tuple(x if isinstance(x, SymbolicLength) else SymbolicLength.of(x) for x in lengths)
        arcs = tuple(x if isinstance(x, SymbolicLength) else SymbolicLength.of(x) for x in arcs)
        if not lengths:
            raise ChainError("a chain needs at least one loop")
        if len(arcs) != len(lengths):
            raise ChainError("one arc length per loop is required")
        for x in lengths + arcs:
            if len(x.coeffs) != n:
                raise ChainError("length vector does not match the generator list")
        if any(x.is_zero() for x in lengths):
            raise ChainError("loop lengths must be nonzero")
        return cls(tuple(generators), lengths, arcs)

    @property
    def genus(self) -> int:
        return len(self.lengths)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def length(self, j: int) -> SymbolicLength:
        return self.lengths[j - 1]

    def arc(self, j: int) -> SymbolicLength:
        return self.arcs[j - 1]

    def is_rational(self) -> bool:
        return all(x.is_rational() for x in self.lengths + self.arcs)

    def point(self, j: int, residue) -> "LoopPoint":
        return LoopPoint.make(self, j, residue)

    def w(self, j: int) -> "LoopPoint":
        return self.point(j, SymbolicLength.zero(self.ngens))

    def v(self, j: int) -> "LoopPoint":
        return self.point(j, self.arc(j))

    def o(self, j: int) -> "LoopPoint":
        return special_point(self, j)


@dataclass(frozen=True)
class LoopPoint:
    """A point of loop j, stored by a canonical residue modulo the loop length."""

    loop: int
    residue: SymbolicLength

    @classmethod
    def make(cls, chain: ChainOfLoops, j: int, residue) -> "LoopPoint":
        if not 1 <= j <= chain.genus:
            raise ChainError(f"loop index {j} out of range 1..{chain.genus}")
        if not isinstance(residue, SymbolicLength):
            residue = SymbolicLength.of(residue)
        ell = chain.length(j)
        c = next(i for i, x in enumerate(ell.coeffs) if x)
        q = math.floor(residue.coeffs[c] / ell.coeffs[c])
        return cls(j, residue - ell * q)


def special_point(chain: ChainOfLoops, j: int) -> LoopPoint:
    """The point of loop j equivalent there to j(w_j) - (j-1)(v_j)."""
    return chain.point(j, chain.arc(j) * (-(j - 1)))


@dataclass(frozen=True)
class MetricDivisor:
    """Integer combination of loop points; w_g is the point of loop g at residue 0."""

    terms: tuple  # ((LoopPoint, coeff), ...) sorted, coefficients nonzero

    @classmethod
    def make(cls, terms: Iterable) -> "MetricDivisor":
        acc: dict = {}
        for p, c in terms:
            acc[p] = acc.get(p, 0) + int(c)
        items = sorted(((p, c) for p, c in acc.items() if c),
                       key=lambda t: (t[0].loop, t[0].residue.coeffs))
        return cls(tuple(items))

    @property
    def degree(self) -> int:
        return sum(c for _, c in self.terms)

    def __add__(self, other: "MetricDivisor") -> "MetricDivisor":
        return MetricDivisor.make(self.terms + other.terms)

    def __mul__(self, m: int) -> "MetricDivisor":
        return MetricDivisor.make((p, c * m) for p, c in self.terms)

    __rmul__ = __mul__

    def __neg__(self) -> "MetricDivisor":
        return self * -1

    def on_loop(self, j: int) -> list:
        return [(p, c) for p, c in self.terms if p.loop == j]


def combine(divisors: Sequence[MetricDivisor], n: Sequence[int]) -> MetricDivisor:
    out = MetricDivisor(())
    for D, m in zip(divisors, n):
        if m:
            out = out + D * m
    return out


# ---------------------------------------------------------------------------
# Reduction


@dataclass(frozen=True)
class PfluegerVector:
    """Components xi_1..xi_g of the reduced representative sum (xi_j) - g (w_g)."""

    components: tuple

    def __getitem__(self, j: int) -> LoopPoint:
        return self.components[j - 1]

    def residues(self) -> list:
        return [p.residue for p in self.components]


def loop_reduce_degree_one(chain: ChainOfLoops, j: int, E: Sequence) -> LoopPoint:
    """The point p of loop j with E - (p) principal on that loop; E has degree one."""
    if sum(c for _, c in E) != 1:
        raise ChainError("divisor on the loop must have degree one")
    total = SymbolicLength.zero(chain.ngens)
    for p, c in E:
        if isinstance(p, LoopPoint):
            if p.loop != j:
                raise ChainError("point on a different loop")
            p = p.residue
        total = total + (p if isinstance(p, SymbolicLength) else SymbolicLength.of(p)) * c
    return chain.point(j, total)


def pflueger_reduce(chain: ChainOfLoops, D: MetricDivisor) -> PfluegerVector:
    """Reduced vector of the degree-zero class [D - deg(D) (w_g)].

    Sweeps left to right, moving chips across each bridge with multiples of
    (w_j) - (v_{j+1}) so that every loop but the last keeps degree one.
    """
    g = chain.genus
    carry = 0  # multiple of (w_{j-1}) - (v_j) added on the previous step
    comps = []
    for j in range(1, g + 1):
        terms = D.on_loop(j)
        total = SymbolicLength.zero(chain.ngens)
        for p, c in terms:
            total = total + p.residue * c
        total = total - chain.arc(j) * carry
        comps.append(chain.point(j, total))
        degree = sum(c for _, c in terms) - carry
        carry = 1 - degree
    return PfluegerVector(tuple(comps))


def reduced_divisor(chain: ChainOfLoops, xi: PfluegerVector) -> MetricDivisor:
    """The literal divisor sum (xi_j) - g (w_g)."""
    g = chain.genus
    return MetricDivisor.make([(p, 1) for p in xi.components] + [(chain.w(g), -g)])


def identity_class(chain: ChainOfLoops) -> PfluegerVector:
    return PfluegerVector(tuple(special_point(chain, j) for j in range(1, chain.genus + 1)))


def class_combine(chain: ChainOfLoops, reduced: Sequence[PfluegerVector], alpha: Sequence[int]) -> PfluegerVector:
    """Reduced vector of sum alpha_i [R_i], straight from the component congruence."""
    s = sum(alpha)
    comps = []
    for j in range(1, chain.genus + 1):
        total = chain.arc(j) * ((j - 1) * (s - 1))
        for R, a in zip(reduced, alpha):
            total = total + R[j].residue * a
        comps.append(chain.point(j, total))
    return PfluegerVector(tuple(comps))


# ---------------------------------------------------------------------------
# Tori and loci


@dataclass(frozen=True)
class SubgroupTorusCoset:
    """Classes whose reduced components agree with beta_j for every loop j outside S."""

    free: frozenset
    fixed: tuple  # ((j, LoopPoint), ...) for j not in free, sorted by j

    @classmethod
    def make(cls, chain: ChainOfLoops, free: Iterable[int], fixed: Mapping[int, LoopPoint]) -> "SubgroupTorusCoset":
        free = frozenset(int(j) for j in free)
        g = chain.genus
        if not free <= set(range(1, g + 1)):
            raise ChainError("free loop index out of range")
        missing = set(range(1, g + 1)) - free - set(fixed)
        if missing:
            raise ChainError(f"no fixed point given for loops {sorted(missing)}")
        if free & set(fixed):
            raise ChainError("a loop cannot be both free and fixed")
        items = []
        for j, p in sorted(fixed.items()):
            if p.loop != j:
                raise ChainError(f"fixed point for loop {j} lies on loop {p.loop}")
            items.append((j, p))
        return cls(free, tuple(items))

    def beta(self, j: int) -> LoopPoint:
        return dict(self.fixed)[j]


def subgroup_torus(chain: ChainOfLoops, free: Iterable[int]) -> SubgroupTorusCoset:
    free = frozenset(free)
    return SubgroupTorusCoset.make(chain, free, {j: special_point(chain, j)
                                                 for j in range(1, chain.genus + 1) if j not in free})


def torus_to_coset(chain: ChainOfLoops, free: Iterable[int], fixed_points: Mapping[int, LoopPoint]) -> SubgroupTorusCoset:
    """A standard torus with literal fixed components, as a coset of its subgroup torus."""
    return SubgroupTorusCoset.make(chain, free, fixed_points)


def coset_membership(cls: PfluegerVector, C: SubgroupTorusCoset) -> bool:
    return all(cls[j] == p for j, p in C.fixed)


@dataclass(frozen=True)
class BNLocusDecomposition:
    r: int
    d: int
    cosets: tuple

    def contains(self, cls: PfluegerVector) -> bool:
        return any(coset_membership(cls, C) for C in self.cosets)


Loci = Mapping  # (r, d) -> BNLocusDecomposition


def rank_chain(chain: ChainOfLoops, D: MetricDivisor, loci: Loci) -> int:
    """Rank of D, read off the supplied Brill-Noether loci in the middle degrees."""
    g = chain.genus
    deg = D.degree
    if deg < 0:
        return -1
    if deg > 2 * g - 2:
        return deg - g
    cls = pflueger_reduce(chain, D)
    for r in range(deg, -1, -1):
        W = loci.get((r, deg))
        if W is None:
            raise MissingLocusError(r, deg)
        if W.contains(cls):
            return r
    return -1


# ---------------------------------------------------------------------------
# Congruences and affine sublattices


def affine_lattice_from_coset(chain: ChainOfLoops, coset: SubgroupTorusCoset,
                              taus: Sequence[PfluegerVector], degrees: Optional[Sequence[int]] = None,
                              d: Optional[int] = None) -> Optional[AffineSublattice]:
    """{alpha in Z^k : sum alpha_i [D̄_i] lies in the coset (and sum alpha_i d_i = d)}.

    Each congruence modulo l_j is split over the generator coordinates, with
    one integer slack variable per fixed loop.
    """
    k = len(taus)
    fixed = list(coset.fixed)
    nvar = k + len(fixed)
    rows, rhs = [], []
    for slot, (j, beta) in enumerate(fixed):
        a = chain.arc(j)
        ell = chain.length(j)
        for c in range(chain.ngens):
            row = [taus[i][j].residue.coeffs[c] + (j - 1) * a.coeffs[c] for i in range(k)]
            row += [Fraction(0)] * len(fixed)
            row[k + slot] = -ell.coeffs[c]
            b = beta.residue.coeffs[c] + (j - 1) * a.coeffs[c]
            if not any(row) and not b:
                continue
            den = math.lcm(*(x.denominator for x in row), Fraction(b).denominator)
            rows.append([int(x * den) for x in row])
            rhs.append(int(b * den))
    if d is not None:
        rows.append(list(degrees) + [0] * len(fixed))
        rhs.append(d)
    if not rows:
        return AffineSublattice.make((0,) * k, Sublattice.full(k))
    sol = solve_system(rows, rhs, nvar)
    if sol is None:
        return None
    x, ker = sol
    return AffineSublattice.make(x[:k], Sublattice.from_generators([v[:k] for v in ker], k))


@dataclass(frozen=True)
class LangDecomposition:
    """Cosets of a locus that meet the subgroup generated by the D̄_i, with witnesses."""

    entries: tuple  # ((witness in Z^k, coset, affine sublattice of all preimages), ...)


def lang_decompose(chain: ChainOfLoops, W: BNLocusDecomposition,
                   taus: Sequence[PfluegerVector]) -> LangDecomposition:
    out = []
    for C in W.cosets:
        A = affine_lattice_from_coset(chain, C, taus)
        if A is not None:
            out.append((A.offset, C, A))
    return LangDecomposition(tuple(out))


def reduced_generators(chain: ChainOfLoops, divisors: Sequence[MetricDivisor]) -> list:
    """Reduced vectors tau_i of the shifted divisors D̄_i = D_i - d_i (w_g)."""
    return [pflueger_reduce(chain, D) for D in divisors]


def q_lattices(chain: ChainOfLoops, divisors: Sequence[MetricDivisor], W: BNLocusDecomposition) -> list:
    """Distinct affine sublattices whose union is Q^(r,d)."""
    taus = reduced_generators(chain, divisors)
    degrees = [D.degree for D in divisors]
    found = []
    for _, C, _ in lang_decompose(chain, W, taus).entries:
        A = affine_lattice_from_coset(chain, C, taus, degrees, W.d)
        if A is not None and A not in found:
            found.append(A)
    return found


def union_genfun(lattices: Sequence[AffineSublattice], k: int) -> RationalGF:
    """Generating function of N^k meeting a union of affine sublattices, by inclusion-exclusion."""
    from .polyhedra import orthant_affine_genfun

    cache: dict = {}

    def f(A):
        if A not in cache:
            cache[A] = orthant_affine_genfun(A)
        return cache[A]

    total = RationalGF.zero(k)

    def walk(start: int, current, sign: int):
        nonlocal total
        for i in range(start, len(lattices)):
            inter = lattices[i] if current is None else intersect_affine(current, lattices[i])
            if inter is None:
                continue  # every superset meets in the empty set too
            total = total + f(inter) * sign
            walk(i + 1, inter, -sign)

    walk(0, None, 1)
    return total


def poincare_slices(chain: ChainOfLoops, divisors: Sequence[MetricDivisor], loci: Loci) -> dict:
    """{(r, d): generating function of N^k ∩ Q^(r,d)} for 0 <= r <= d <= 2g - 2."""
    g = chain.genus
    out = {}
    for d in range(0, 2 * g - 1):
        for r in range(0, d + 1):
            W = loci.get((r, d))
            if W is None:
                raise MissingLocusError(r, d)
            out[(r, d)] = poincare_slice(chain, divisors, W)
    return out


def poincare_slice(chain: ChainOfLoops, divisors: Sequence[MetricDivisor], W: BNLocusDecomposition) -> RationalGF:
    """Generating function of N^k ∩ Q^(r,d) for the locus W = W^r_d."""
    return union_genfun(q_lattices(chain, divisors, W), len(divisors)).normalize()


def poincare_chain(chain: ChainOfLoops, divisors: Sequence[MetricDivisor], loci: Loci) -> RationalGF:
    """Closed rational form of sum_n (r(sum n_i D_i) + 1) z^n on a chain of loops."""
    from .polyhedra import tail_term

    k = len(divisors)
    total = RationalGF.zero(k)
    for f in poincare_slices(chain, divisors, loci).values():
        total = total + f
    total = total + tail_term([D.degree for D in divisors], chain.genus)
    return total.normalize()


# ---------------------------------------------------------------------------
# Rational chains through a finite model


def _scale(chain: ChainOfLoops, D: MetricDivisor) -> int:
    values = [x.coeffs[0] for x in chain.lengths + chain.arcs]
    values += [p.residue.coeffs[0] for p, _ in D.terms]
    M = math.lcm(*(Fraction(v).denominator for v in values))
    while any(x.coeffs[0] * M < 3 for x in chain.lengths):
        M *= 2
    return M


def model_graph(chain: ChainOfLoops, D: MetricDivisor):
    """(MultiGraph, divisor vector) of a subdivision carrying D on vertices."""
    from .graphs import MultiGraph

    if not chain.is_rational() or any(not p.residue.is_rational() for p, _ in D.terms):
        raise ChainError("the subdivision model needs rational lengths and points")
    M = _scale(chain, D)
    sizes = [int(x.coeffs[0] * M) for x in chain.lengths]
    base = [sum(sizes[:i]) for i in range(len(sizes))]

    def vertex(j: int, residue: SymbolicLength) -> int:
        pos = residue.coeffs[0] * M
        if pos.denominator != 1:
            raise ChainError("point is not on the subdivision grid")
        return base[j - 1] + int(pos) % sizes[j - 1]

    edges = []
    for j, n in enumerate(sizes):
        for i in range(n):
            edges.append((base[j] + i, base[j] + (i + 1) % n))
    for j in range(1, chain.genus):
        edges.append((vertex(j, SymbolicLength.zero(chain.ngens)), vertex(j + 1, chain.arc(j + 1))))
    G = MultiGraph(sum(sizes), edges)
    vec = [0] * G.n
    for p, c in D.terms:
        vec[vertex(p.loop, p.residue)] += c
    return G, vec


def subdivision_rank_oracle(chain: ChainOfLoops, D: MetricDivisor) -> int:
    """Rank of D on a rational chain, computed on a loopless subdivided model graph."""
    from .graphs import rank_graph

    if D.degree < 0:
        model_graph(chain, D)  # still validates the input
        return -1
    G, vec = model_graph(chain, D)
    return rank_graph(G, vec)


def validate_loci(chain: ChainOfLoops, loci: Loci, samples: Iterable[PfluegerVector]) -> list:
    """Mismatches (class, d, locus rank, oracle rank) on a rational chain over the sampled classes."""
    g = chain.genus
    bad = []
    for cls in samples:
        base = reduced_divisor(chain, cls)
        for d in range(0, 2 * g - 1):
            D = base + MetricDivisor.make([(chain.w(g), d)])
            got = rank_chain(chain, D, loci)
            want = subdivision_rank_oracle(chain, D)
            if got != want:
                bad.append((cls, d, got, want))
    return bad
