"""Shared builders for chain tests: Brill-Noether loci of small generic chains."""

from divpoincare.chain import BNLocusDecomposition, SubgroupTorusCoset


def _loci(chain, table):
    g = chain.genus
    out = {}
    for d in range(0, 2 * g - 1):
        for r in range(0, d + 1):
            cosets = tuple(SubgroupTorusCoset.make(chain, free, fixed) for free, fixed in table.get((r, d), []))
            out[(r, d)] = BNLocusDecomposition(r, d, cosets)
    return out


def genus1_loci(chain):
    return _loci(chain, {(0, 0): [([], {1: chain.o(1)})]})


def genus2_loci(chain):
    w, v, o = chain.w, chain.v, chain.o
    return _loci(chain, {
        (0, 0): [([], {1: o(1), 2: o(2)})],
        (0, 1): [([1], {2: w(2)}), ([2], {1: w(1)})],
        (0, 2): [([1, 2], {})],
        (1, 2): [([], {1: w(1), 2: v(2)})],
    })


def genus3_loci(chain):
    w, v, o, p, arc = chain.w, chain.v, chain.o, chain.point, chain.arc
    jac = [([1, 2, 3], {})]
    return _loci(chain, {
        (0, 0): [([], {1: o(1), 2: o(2), 3: o(3)})],
        (0, 1): [([1], {2: w(2), 3: p(3, -arc(3))}),
                 ([2], {1: w(1), 3: p(3, -arc(3))}),
                 ([3], {1: w(1), 2: p(2, -arc(2))})],
        (0, 2): [([1, 2], {3: w(3)}), ([1, 3], {2: w(2)}), ([2, 3], {1: w(1)})],
        (0, 3): jac,
        (1, 3): [([3], {1: w(1), 2: v(2)}), ([2], {1: w(1), 3: v(3)}), ([1], {2: w(2), 3: v(3)})],
        (0, 4): jac,
        (1, 4): jac,
        (2, 4): [([], {1: w(1), 2: v(2), 3: p(3, arc(3) * 2)})],
    })
