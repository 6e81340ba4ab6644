#!/usr/bin/env python3
"""Print lifted failure-set sizes next to the closed forms 6n-33 and 3a+4b-21."""

from failover.adversary import gadget, lift_attack

print(f"inner sets: K7 {len(gadget('k7_source_dest').failure)} links, K4,4 F12 {len(gadget('k44_F12').failure)} links")
print(f"{'graph':8s} {'|F|':>4s} {'formula':>8s} {'virtual':>8s}")
for n in range(8, 16):
    lf = lift_attack(("complete", n))
    print(f"K{n:<7d} {len(lf.failure):4d} {6 * n - 33:8d} {len(lf.virtual):8d}")
for a, b in ((4, 4), (5, 4), (6, 5), (8, 6)):
    lf = lift_attack(("bipartite", a, b))
    print(f"K{a},{b:<5d} {len(lf.failure):4d} {3 * a + 4 * b - 21:8d} {len(lf.virtual):8d}")
