"""Command-line entry point: ``divpoincare --mode MODE ...``.

Exit status: 0 success, 1 unparsable input, 2 invalid input,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import sys

from . import chain as ch
from . import graphs
from .genfun import compositions
from .io import (ParseError, ValidationError, dumps, parse_chain, parse_chain_divisors, parse_graph,
                 parse_graph_divisors, parse_loci, read_json)

MODES = ("graph-poincare", "chain-poincare", "rank", "expand", "verify")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divpoincare",
                                description="Poincare series of divisors on graphs and chains of loops.")
    p.add_argument("--mode", required=True, choices=MODES)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", metavar="FILE", help="finite multigraph (JSON)")
    src.add_argument("--chain", metavar="FILE", help="chain of loops (JSON)")
    p.add_argument("--divisors", metavar="FILE", required=True)
    p.add_argument("--loci", metavar="FILE", help="Brill-Noether loci for a chain (JSON)")
    p.add_argument("--truncate", metavar="N", type=int, default=6,
                   help="total degree bound for expand and verify (default 6)")
    p.add_argument("--out", metavar="FILE", help="write JSON here instead of stdout")
    p.add_argument("--verify", action="store_true",
                   help="after computing a series, check it against ranks up to --truncate")
    return p


class Problem:
    """Loaded inputs plus the two operations every mode needs."""

    def __init__(self, args):
        if args.graph:
            self.kind = "graph"
            self.G = parse_graph(read_json(args.graph))
            self.divisors = parse_graph_divisors(read_json(args.divisors), self.G)
        else:
            self.kind = "chain"
            self.chain = parse_chain(read_json(args.chain))
            self.divisors = parse_chain_divisors(read_json(args.divisors), self.chain)
            if not args.loci:
                raise ValidationError("--loci is required with --chain")
            self.loci = parse_loci(read_json(args.loci), self.chain)
        self.k = len(self.divisors)

    def series(self):
        if self.kind == "graph":
            return graphs.poincare_graph(self.G, self.divisors)
        return ch.poincare_chain(self.chain, self.divisors, self.loci)

    def rank(self, n) -> int:
        if self.kind == "graph":
            D = [sum(ni * Di[v] for ni, Di in zip(n, self.divisors)) for v in range(self.G.n)]
            return graphs.rank_graph(self.G, D)
        return ch.rank_chain(self.chain, ch.combine(self.divisors, n), self.loci)


def verify(problem: Problem, f, bound: int) -> dict:
    series = f.expand(bound)
    checked = 0
    for n in compositions(problem.k, bound):
        want = problem.rank(n) + 1
        got = series[n]
        checked += 1
        if got != want:
            return {"status": "FAIL", "exponent": list(n), "series": str(got),
                    "expected": str(want), "checked": checked, "truncate": bound}
    return {"status": "PASS", "checked": checked, "truncate": bound}


def run(args) -> tuple:
    """(exit status, JSON-ready result)."""
    problem = Problem(args)
    mode = args.mode
    if mode == "graph-poincare" and problem.kind != "graph":
        raise ValidationError("graph-poincare needs --graph")
    if mode == "chain-poincare" and problem.kind != "chain":
        raise ValidationError("chain-poincare needs --chain")
    if args.truncate < 0:
        raise ValidationError("--truncate must be non-negative")
    if mode == "rank":
        ranks = [problem.rank([int(i == j) for j in range(problem.k)]) for i in range(problem.k)]
        return 0, {"ranks": ranks}
    f = problem.series()
    result = {"series": f.to_json(), "pretty": f.pretty()}
    status = 0
    if mode == "expand":
        result = {"expansion": f.expand(args.truncate).to_json()}
    if mode == "verify" or args.verify:
        result["verify"] = verify(problem, f, args.truncate)
        status = 0 if result["verify"]["status"] == "PASS" else 3
    return status, result


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, result = run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, graphs.GraphError, ch.ChainError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    text = dumps(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == 3:
        v = result["verify"]
        print(f"verification failed at exponent {v['exponent']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
