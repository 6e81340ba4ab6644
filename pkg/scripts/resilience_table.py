#!/usr/bin/env python3
"""Exhaustively verify every built-in construction on its home graph.

One row per (construction, graph, guarantee) with the verdict, the number
of failure sets explored and the wall time. Graphs above the exhaustive
edge limit are sampled, and a sampled search reports inconclusive rather
than holds.
"""

import time
from itertools import permutations

from failover.adversary import KFailures, PerfectResilience, RTolerance, Touring, verify
from failover.classifier import k5_minus, k33_minus
from failover.graph import complete, complete_bipartite, edge_list
from failover.patterns import (
    gen_alg1_k5,
    gen_distance2,
    gen_distance3_bipartite,
    gen_ham_tour,
    gen_k5m2_dest,
    gen_k33_source,
    gen_k33m2_dest,
    gen_outerplanar_tour,
    ham_decompose,
)


def cases():
    k5, k33 = complete(5), complete_bipartite(3, 3)
    for s, t in permutations(range(5), 2):
        yield "alg1", f"K5 {s}->{t}", k5, gen_alg1_k5(k5, s, t), PerfectResilience()
    for s, t in ((0, 1), (0, 3)):
        yield "k33-source", f"K3,3 {s}->{t}", k33, gen_k33_source(k33, s, t), PerfectResilience()
    for i, g in enumerate(k5_minus(2)):
        for t in range(5):
            yield "k5m2-dest", f"K5-2#{i} ->{t}", g, gen_k5m2_dest(g, t), PerfectResilience()
    for i, g in enumerate(k33_minus(2)):
        for t in range(6):
            yield "k33m2-dest", f"K3,3-2#{i} ->{t}", g, gen_k33m2_dest(g, t), PerfectResilience()
    yield "distance2", "K5 0->1", k5, gen_distance2(k5, 0, 1), RTolerance(2)
    yield "distance2", "K7 0->1", complete(7), gen_distance2(complete(7), 0, 1), RTolerance(3)
    yield "distance3", "K3,3 0->3", k33, gen_distance3_bipartite(k33, 0, 3), RTolerance(2)
    wheel = edge_list([(0, i) for i in range(1, 7)] + [(i, i + 1) for i in range(1, 6)])
    yield "outerplanar-tour", "fan 7", wheel, gen_outerplanar_tour(wheel), Touring()
    for n, k in ((5, 2), (7, 3), (9, 4)):
        g = complete(n)
        yield "ham-tour", f"K{n}", g, gen_ham_tour(ham_decompose(g), g), KFailures(k - 1)


def main():
    print(f"{'construction':18s} {'graph':16s} {'mode':16s} {'verdict':15s} {'explored':>9s} {'secs':>6s}")
    for alg, label, g, p, mode in cases():
        t0 = time.perf_counter()
        v = verify(g, p, mode)
        print(f"{alg:18s} {label:16s} {str(mode):16s} {v.kind:15s} {v.explored:9d} {time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
