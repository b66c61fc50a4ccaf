"""Multivariate rational generating functions with binomial denominators.

A :class:`RationalGF` is ``numerator / prod_b (1 - z^b)`` where the numerator
is a sparse Laurent polynomial with integer coefficients and the denominator
is a multiset of exponent vectors.  Denominators are never multiplied out.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Poly = dict  # exponent tuple -> nonzero int


# ---------------------------------------------------------------------------
# Sparse Laurent polynomials


def padd(p: Mapping, q: Mapping, scale: int = 1) -> Poly:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def pmul(p: Mapping, q: Mapping) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out: dict = defaultdict(int)
    for e2, c2 in q.items():
        for e1, c1 in p.items():
            out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
    return {e: c for e, c in out.items() if c}


def pscale(p: Mapping, c: int) -> Poly:
    return {e: c * v for e, v in p.items()} if c else {}


def pshift(p: Mapping, s: Sequence[int], c: int = 1) -> Poly:
    """c * z^s * p."""
    return {tuple(a + b for a, b in zip(e, s)): c * v for e, v in p.items()}


def binomial(b: Sequence[int]) -> Poly:
    """1 - z^b."""
    return padd({(0,) * len(b): 1}, {tuple(b): 1}, -1)


def pdivide_binomial(p: Mapping, b: Sequence[int]):
    """Exact quotient p / (1 - z^b) in the Laurent ring, or None if it is not exact."""
    if not p:
        return {}
    c = next(i for i, x in enumerate(b) if x)
    lines: dict = defaultdict(dict)
    for e, v in p.items():
        s = e[c] // b[c]
        key = tuple(x - s * y for x, y in zip(e, b))
        lines[key][s] = v
    out = {}
    for key, coeffs in lines.items():
        positions = sorted(coeffs)
        if sum(coeffs.values()):
            return None
        running = 0
        for idx, s in enumerate(positions[:-1]):
            running += coeffs[s]
            if running:
                for t in range(s, positions[idx + 1]):
                    out[tuple(x + t * y for x, y in zip(key, b))] = running
    return out


def orient(b: Sequence[int]):
    """Canonical orientation of a denominator vector: (vector, flipped?).

    Non-negative vectors are kept, non-positive ones flipped, mixed ones made
    lexicographically positive.
    """
    b = tuple(b)
    if all(x >= 0 for x in b):
        return b, False
    if all(x <= 0 for x in b):
        return tuple(-x for x in b), True
    first = next(x for x in b if x)
    return (b, False) if first > 0 else (tuple(-x for x in b), True)


def _prod_binomials(bs: Iterable[Sequence[int]], n: int) -> Poly:
    out = {(0,) * n: 1}
    for b in bs:
        out = pmul(out, binomial(b))
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalGF:
    nvars: int
    numerator: tuple  # sorted ((exponent, coeff), ...)
    denominator: tuple  # sorted exponent vectors

    @classmethod
    def make(cls, nvars: int, numerator: Mapping, denominator: Iterable[Sequence[int]] = ()):
        den = tuple(sorted(tuple(b) for b in denominator))
        for b in den:
            if len(b) != nvars or not any(b):
                raise ValueError(f"bad denominator exponent {b}")
        num = tuple(sorted((tuple(e), int(c)) for e, c in numerator.items() if c))
        for e, _ in num:
            if len(e) != nvars:
                raise ValueError("numerator exponent of wrong length")
        return cls(nvars, num, den)

    @classmethod
    def zero(cls, nvars: int) -> "RationalGF":
        return cls(nvars, (), ())

    @classmethod
    def one(cls, nvars: int) -> "RationalGF":
        return cls(nvars, (((0,) * nvars, 1),), ())

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> "RationalGF":
        return cls.make(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def geometric(cls, exponents: Iterable[Sequence[int]], nvars: int) -> "RationalGF":
        """1 / prod (1 - z^b)."""
        return cls.make(nvars, {(0,) * nvars: 1}, exponents)

    @property
    def num(self) -> Poly:
        return dict(self.numerator)

    def is_zero(self) -> bool:
        return not self.numerator

    def __repr__(self) -> str:
        return f"RationalGF({self.pretty()})"

    def pretty(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"z{i + 1}" for i in range(self.nvars)]

        def mono(e):
            parts = []
            for n, x in zip(names, e):
                if x == 1:
                    parts.append(n)
                elif x:
                    parts.append(f"{n}^{x}")
            return "*".join(parts)

        terms = []
        for e, c in self.numerator:
            m = mono(e)
            if not m:
                terms.append(str(c))
            elif c == 1:
                terms.append(m)
            elif c == -1:
                terms.append("-" + m)
            else:
                terms.append(f"{c}*{m}")
        top = " + ".join(terms).replace("+ -", "- ") or "0"
        if not self.denominator:
            return top
        bottom = "*".join(f"(1 - {mono(b)})" for b in self.denominator)
        return f"({top}) / ({bottom})"

    # -- arithmetic -------------------------------------------------------

    def _oriented(self):
        num = self.num
        den = []
        for b in self.denominator:
            ob, flipped = orient(b)
            if flipped:
                # 1/(1 - z^b) = -z^{-b} / (1 - z^{-b})
                num = pshift(num, ob, -1)
            den.append(ob)
        return num, Counter(den)

    def __add__(self, other: "RationalGF") -> "RationalGF":
        if not isinstance(other, RationalGF):
            return NotImplemented
        _same(self, other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        n1, d1 = self._oriented()
        n2, d2 = other._oriented()
        common = d1 | d2
        m1 = pmul(n1, _prod_binomials((common - d1).elements(), self.nvars))
        m2 = pmul(n2, _prod_binomials((common - d2).elements(), self.nvars))
        return RationalGF.make(self.nvars, padd(m1, m2), common.elements())

    def __neg__(self) -> "RationalGF":
        return RationalGF(self.nvars, tuple((e, -c) for e, c in self.numerator), self.denominator)

    def __sub__(self, other: "RationalGF") -> "RationalGF":
        return self + (-other)

    def __mul__(self, other) -> "RationalGF":
        if isinstance(other, int):
            if other == 0:
                return RationalGF.zero(self.nvars)
            return RationalGF(self.nvars, tuple((e, other * c) for e, c in self.numerator),
                              self.denominator)
        if not isinstance(other, RationalGF):
            return NotImplemented
        _same(self, other)
        if self.is_zero() or other.is_zero():
            return RationalGF.zero(self.nvars)
        return RationalGF.make(self.nvars, pmul(self.num, other.num),
                               self.denominator + other.denominator)

    __rmul__ = __mul__

    # -- normal form ------------------------------------------------------

    def normalize(self) -> "RationalGF":
        """Orient denominator factors and cancel every factor dividing the numerator."""
        if self.is_zero():
            return RationalGF.zero(self.nvars)
        num, den = self._oriented()
        # mixed-sign factors first (they block a power-series form), then larger ones
        order = sorted(den, key=lambda b: (all(x >= 0 for x in b), -sum(map(abs, b)), b))
        for b in order:
            while den[b]:
                q = pdivide_binomial(num, b)
                if q is None:
                    break
                num = q
                den[b] -= 1
        return RationalGF.make(self.nvars, num, den.elements())

    def is_power_series(self) -> bool:
        """Whether expand() applies directly: non-negative exponents everywhere."""
        return all(x >= 0 for b in self.denominator for x in b) and \
            all(x >= 0 for e, _ in self.numerator for x in e)

    # -- operators --------------------------------------------------------

    def substitute(self, matrix: Sequence[Sequence[int]], shift: Sequence[int] | None = None,
                   nvars: int | None = None) -> "RationalGF":
        """Monomial substitution w_j -> z^{matrix[j]}, then multiply by z^shift."""
        k = nvars if nvars is not None else len(matrix[0])
        shift = tuple(shift) if shift is not None else (0,) * k

        def image(e):
            return tuple(s + sum(ej * row[i] for ej, row in zip(e, matrix)) for i, s in enumerate(shift))

        def image_lin(b):
            return tuple(sum(bj * row[i] for bj, row in zip(b, matrix)) for i in range(k))

        num: dict = defaultdict(int)
        for e, c in self.numerator:
            num[image(e)] += c
        return RationalGF.make(k, num, [image_lin(b) for b in self.denominator])

    def euler(self, weights: Sequence[int]) -> "RationalGF":
        """Apply sum_i w_i z_i d/dz_i."""
        w = list(weights)
        dot = lambda e: sum(a * b for a, b in zip(w, e))
        num = self.num
        active = [b for b in self.denominator if dot(b)]
        en = {e: dot(e) * c for e, c in num.items() if dot(e)}
        top = pmul(en, _prod_binomials(active, self.nvars))
        for i, b in enumerate(active):
            rest = active[:i] + active[i + 1:]
            term = pmul(pshift(num, b, dot(b)), _prod_binomials(rest, self.nvars))
            top = padd(top, term)
        return RationalGF.make(self.nvars, top, self.denominator + tuple(active))

    # -- expansion --------------------------------------------------------

    def expand(self, bound: int) -> "TruncatedSeries":
        return expand(self, bound)

    def coefficient_equal(self, other: "RationalGF") -> bool:
        return gf_equal(self, other)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "variables": self.nvars,
            "numerator": [list(e) + [str(c)] for e, c in self.numerator],
            "denominator": [list(b) for b in self.denominator],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RationalGF":
        num: dict = defaultdict(int)
        nvars = data.get("variables")
        for entry in data["numerator"]:
            *e, c = entry
            num[tuple(int(x) for x in e)] += int(c)
            nvars = len(e) if nvars is None else nvars
        for b in data["denominator"]:
            nvars = len(b) if nvars is None else nvars
        if nvars is None:
            raise ValueError("cannot infer the number of variables")
        return cls.make(nvars, num, [tuple(int(x) for x in b) for b in data["denominator"]])


def _same(a: RationalGF, b: RationalGF) -> None:
    if a.nvars != b.nvars:
        raise ValueError(f"variable counts differ: {a.nvars} vs {b.nvars}")


def gf_add(a: RationalGF, b: RationalGF) -> RationalGF:
    return a + b


def gf_mul(a: RationalGF, b: RationalGF) -> RationalGF:
    return a * b


def gf_normalize(a: RationalGF) -> RationalGF:
    return a.normalize()


def gf_equal(a: RationalGF, b: RationalGF) -> bool:
    """Equality as rational functions, by cross-multiplying the denominators."""
    _same(a, b)
    lhs = pmul(a.num, _prod_binomials(b.denominator, a.nvars))
    rhs = pmul(b.num, _prod_binomials(a.denominator, a.nvars))
    return lhs == rhs


# ---------------------------------------------------------------------------
# Truncated expansion


@dataclass(frozen=True)
class TruncatedSeries:
    nvars: int
    bound: int
    coeffs: dict

    def __getitem__(self, n) -> int:
        return self.coeffs.get(tuple(n), 0)

    def to_json(self) -> dict:
        return {
            "variables": self.nvars,
            "truncate": self.bound,
            "terms": [list(e) + [str(c)] for e, c in sorted(self.coeffs.items())],
        }


def expand(f: RationalGF, bound: int) -> TruncatedSeries:
    """All coefficients of total degree <= bound."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if not f.is_power_series():
        f = f.normalize()
        if not f.is_power_series():
            raise ValueError("rational function is not a power series in this form")
    levels: list = [defaultdict(int) for _ in range(bound + 1)]
    for e, c in f.numerator:
        t = sum(e)
        if t <= bound:
            levels[t][e] += c
    for b in f.denominator:
        step = sum(b)
        for t in range(bound + 1 - step):
            for e, c in list(levels[t].items()):
                if c:
                    levels[t + step][tuple(x + y for x, y in zip(e, b))] += c
    coeffs = {e: c for lvl in levels for e, c in lvl.items() if c}
    return TruncatedSeries(f.nvars, bound, coeffs)


def compositions(k: int, bound: int):
    """All exponent vectors in N^k of total degree <= bound."""
    if k == 0:
        yield ()
        return
    for first in range(bound + 1):
        for rest in compositions(k - 1, bound - first):
            yield (first,) + rest
