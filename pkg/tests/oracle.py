"""Naive brute-force oracle used to freeze expected values.

Pure Python, no numpy, no package imports: every state is a dict of
per-edge choices and reachability is a plain DFS.
"""
from fractions import Fraction
from itertools import product


def _reach(n, arcs, src):
    seen = {src}
    stack = [src]
    while stack:
        x = stack.pop()
        for (i, j) in arcs:
            if i == x and j not in seen:
                seen.add(j)
                stack.append(j)
    return frozenset(seen)


def orientations(n, edges):
    """Yield (arcs, weight) over all orientations (model O)."""
    w = Fraction(1, 2 ** len(edges))
    for dirs in product((0, 1), repeat=len(edges)):
        arcs = [(i, j) if d == 0 else (j, i) for (i, j), d in zip(edges, dirs)]
        yield arcs, w


def percolation(n, edges, p):
    """Yield (arcs, weight) over present-edge subsets (model E^p)."""
    p = Fraction(p)
    for keep in product((0, 1), repeat=len(edges)):
        w = Fraction(1)
        arcs = []
        for (i, j), k in zip(edges, keep):
            if k:
                w *= p
                arcs += [(i, j), (j, i)]
            else:
                w *= 1 - p
        yield arcs, w


def directed(n, edges, p):
    """Yield (arcs, weight) for directed percolation D^p."""
    p = Fraction(p)
    both = [(i, j) for i, j in edges] + [(j, i) for i, j in edges]
    for keep in product((0, 1), repeat=len(both)):
        w = Fraction(1)
        arcs = []
        for a, k in zip(both, keep):
            if k:
                w *= p
                arcs.append(a)
            else:
                w *= 1 - p
        yield arcs, w


def prob(n, states, event):
    """Sum of weights where event(reach) holds; reach(x) is the out-set of x."""
    total = Fraction(0)
    for arcs, w in states:
        cache = {}

        def reach(x, arcs=arcs, cache=cache):
            if x not in cache:
                cache[x] = _reach(n, arcs, x)
            return cache[x]

        if event(reach):
            total += w
    return total


def law(n, states, u):
    out = {}
    for arcs, w in states:
        c = _reach(n, arcs, u)
        out[c] = out.get(c, 0) + w
    return out
