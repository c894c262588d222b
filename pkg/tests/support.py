"""Shared generators and independent oracles for the test suite."""
from __future__ import annotations

import random
from collections import deque
from fractions import Fraction

from binorm.chevalley import elementary
from binorm.groups import Matrix
from binorm.rings import RingDescriptor


def random_ring_elem(rng: random.Random, ring: RingDescriptor, scale: int):
    return ring(*[rng.randint(-scale, scale) for _ in range(ring.rank)])


def random_sl(rng: random.Random, n: int, ring: RingDescriptor, count: int, scale: int) -> Matrix:
    """Product of ``count`` random root elements with coordinates up to ``scale``."""
    M = Matrix.identity_matrix(n, ring)
    for _ in range(count):
        i, j = rng.sample(range(1, n + 1), 2)
        M = M * elementary("A", n, (i, j), random_ring_elem(rng, ring, scale), ring)
    return M


def det_fraction(rows) -> Fraction:
    """Determinant of an integer matrix by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def bfs_word_norms(generators, identity, mul) -> dict:
    """Plain BFS over hashable elements: the oracle for finite-group word norms."""
    dist = {identity: 0}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = mul(g, s)
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    return dist


def conjugation_closure_set(generators, elements, mul, inv) -> set:
    return {mul(mul(c, s), inv(c)) for c in elements for s in generators}
