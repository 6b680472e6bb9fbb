# Development scratch: measure enumeration tree sizes for different
# level orderings, using a float walker (counting only).
import sys
import time
from fractions import Fraction

sys.setrecursionlimit(10000)

from lat40.construction import build_O40
from lat40.lattice import gram
from lat40.reduction import ldl, lll_gram


def count_nodes(g, bound, order=None):
    n = len(g)
    if order is not None:
        g = [[g[i][j] for j in order] for i in order]
    mu, d = ldl([[Fraction(x) for x in row] for row in g])
    muf = [[float(x) for x in row] for row in mu]
    df = [float(x) for x in d]
    nodes = 0
    hits = 0

    def descend(lev, budget, acc, all_zero):
        nonlocal nodes, hits
        nodes += 1
        c = acc[lev]
        import math
        r = math.sqrt(max(budget, 0.0) / df[lev]) + 1e-9
        lo = 0 if all_zero else math.ceil(-c - r)
        hi = math.floor(-c + r)
        for x in range(lo, hi + 1):
            t = df[lev] * (x + c) ** 2
            child = budget - t
            if child < -1e-9:
                continue
            if lev == 0:
                if not (all_zero and x == 0):
                    hits += 1
            else:
                nxt = [acc[j] + muf[lev][j] * x for j in range(lev)]
                descend(lev - 1, child, nxt, all_zero and x == 0)

    descend(n - 1, float(bound) + 1e-6, [0.0] * n, True)
    return nodes, hits


O = build_O40()
g0 = gram(O)
red, _ = lll_gram(g0, delta=Fraction(99, 100))
red = [[int(x) for x in row] for row in red]

mu, d = ldl(red)
df = [float(x) for x in d]
print("d values:", [round(x, 2) for x in df])

t0 = time.time()
nodes, hits = count_nodes(red, 4)
print("plain LLL order: nodes=%d hits=%d (%.1fs)" % (nodes, hits, time.time() - t0))

# sort levels so the largest d is processed first (level n-1)
order = sorted(range(40), key=lambda i: df[i])
t0 = time.time()
nodes, hits = count_nodes(red, 4, order)
print("d ascending:     nodes=%d hits=%d (%.1fs)" % (nodes, hits, time.time() - t0))

order = sorted(range(40), key=lambda i: -df[i])
t0 = time.time()
nodes, hits = count_nodes(red, 4, order)
print("d descending:    nodes=%d hits=%d (%.1fs)" % (nodes, hits, time.time() - t0))
