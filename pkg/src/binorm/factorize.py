"""Factorizations of SL(n) matrices over Z, Z[sqrt 2] and Z[i] into root elements.

``factorize_euclid`` is plain Gaussian elimination driven by Euclidean
division.  Its factor count grows with the size of the entries.

``factorize_bounded`` uses stable-range elimination.  Every column but the
last two is brought to a unit vector with a number of root elements that
depends on ``n`` only, at most ``L(n) = n^2 + 2n - 8`` in total.  What is left
is an SL(2) block, which stable range cannot shrink any further; it is
finished by Euclid and its factor count is reported separately as ``tail``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .chevalley import elementary
from .groups import Matrix
from .rings import RingDescriptor, RingElem, euclidean_divide, field_norm, ring_gcd

SUPPORTED_RINGS = ("Z", "Zsqrt2", "Zi")
SEARCH_CAP = 10_000


def bounded_length(n: int) -> int:
    """``L(n)``: bound on the stable-range part of ``factorize_bounded``, independent of the entries."""
    return n * n + 2 * n - 8


@dataclass
class ElementaryFactor:
    """The root element ``x_root(t)``."""

    family: str
    n: int
    root: tuple  # 1-based (i, j) for type A
    t: RingElem

    def matrix(self) -> Matrix:
        return elementary(self.family, self.n, self.root, self.t, self.t.ring)


@dataclass
class Factorization:
    target: Matrix
    factors: list[ElementaryFactor]
    mode: str  # "euclid" or "bounded"
    fell_back: bool = False  # bounded search gave up and Euclid was used
    bound: int | None = None  # L(n) for the bounded mode
    tail: int = 0  # bounded mode: factors spent on the final SL(2) block

    def product(self) -> Matrix:
        out = self.target.identity()
        for f in self.factors:
            out = out * f.matrix()
        return out


# -- elimination helpers ----------------------------------------------------


def _check_input(A: Matrix, min_n: int = 2):
    if A.ring.name not in SUPPORTED_RINGS:
        raise ValueError(f"unsupported ring {A.ring}")
    if A.n < min_n:
        raise ValueError(f"need n >= {min_n}")
    if A.det() != A.ring.one():
        raise ValueError("matrix does not have determinant 1")


def _bezout(a: RingElem, b: RingElem, ring: RingDescriptor):
    """``(x, y, g)`` with ``x a + y b = g = gcd(a, b)``."""
    r0, r1 = a, b
    x0, x1 = ring.one(), ring.zero()
    y0, y1 = ring.zero(), ring.one()
    while r1:
        q, r = euclidean_divide(r0, r1)
        r0, r1 = r1, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0, r0


def _shifts(ring: RingDescriptor, cap: int):
    """0, 1, -1, 2, -2, ... (``cap`` values) as ring elements."""
    yield ring.zero()
    k = 1
    while 2 * k - 1 < cap:
        yield ring(k)
        yield ring(-k)
        k += 1


class _SearchCapExceeded(Exception):
    pass


def _unit_in_row(rows: list[list], c: int, op, ring: RingDescriptor, cap: int):
    """Put 1 at position ``(c, c)`` with at most three row operations among rows ``>= c``."""
    n = len(rows)
    one = ring.one()
    a = [rows[r][c] for r in range(n)]
    if a[c] == one:
        return
    for r in range(c + 1, n):  # one operation is enough when an entry divides 1 - a_c
        if a[r]:
            t, rem = euclidean_divide(one - a[c], a[r])
            if not rem:
                op(c, r, t)
                return
    others = range(c + 1, n)
    triples = (
        (i, j, k)
        for i, j in itertools.permutations(others, 2)
        for k in [c] + [r for r in others if r not in (i, j)]
        if a[j] and ring_gcd(ring_gcd(a[i], a[j]), a[k]).is_unit()
    )
    found = next(triples, None)
    if found is None:
        raise _SearchCapExceeded("no three entries of the column are coprime")
    i, j, k = found
    # (a) make a_i + t a_k coprime to a_j
    for t in _shifts(ring, cap):
        if ring_gcd(a[i] + t * a[k], a[j]).is_unit():
            break
    else:
        raise _SearchCapExceeded(f"no shift found within {cap} tries")
    op(i, k, t)
    ai = rows[i][c]
    # (b) x a_i + y a_j = 1 - a_c, two operations on row c
    x, y, g = _bezout(ai, a[j], ring)
    scale = (one - rows[c][c]) * g.unit_inverse()
    op(c, i, x * scale)
    op(c, j, y * scale)
    if rows[c][c] != one:
        raise ArithmeticError("stable-range step did not produce a unit pivot")


# -- public factorizations ---------------------------------------------------


def factorize_euclid(A: Matrix) -> Factorization:
    """Elementary factors whose product is ``A``, by Euclidean row reduction."""
    _check_input(A)
    n, ring = A.n, A.ring
    zero, one = ring.zero(), ring.one()
    rows = [list(r) for r in A.rows]
    ops = []  # (i, j, t): row i += t * row j, 0-based

    def op(i, j, t):
        if t:
            rows[i] = [a + t * b for a, b in zip(rows[i], rows[j])]
            ops.append((i, j, t))

    for c in range(n):
        if rows[c][c] != one:
            # one operation suffices when some entry divides 1 - pivot
            for q in range(c + 1, n):
                if rows[q][c]:
                    t, r = euclidean_divide(one - rows[c][c], rows[q][c])
                    if not r:
                        op(c, q, t)
                        break
        if rows[c][c] != one:
            while True:
                nz = [r for r in range(c, n) if rows[r][c]]
                if len(nz) <= 1:
                    break
                p = min(nz, key=lambda r: abs(field_norm(rows[r][c])))
                for r in nz:
                    if r != p:
                        q, _ = euclidean_divide(rows[r][c], rows[p][c])
                        op(r, p, -q)
            (p,) = nz
            u = rows[p][c]
            if p != c:
                op(c, p, (one - rows[c][c]) * u.unit_inverse())
            elif c + 1 < n:
                op(c + 1, c, one)
                op(c, c + 1, (one - u) * u.unit_inverse())
                op(c + 1, c, -u)
            else:
                raise ArithmeticError("determinant is not 1")  # unreachable after the det check
        for r in range(n):
            if r != c and rows[r][c]:
                op(r, c, -rows[r][c])
    if any(rows[r][c] != (one if r == c else zero) for r in range(n) for c in range(n)):
        raise ArithmeticError("elimination did not reach the identity")
    # E_k ... E_1 A = I, so A = E_1^{-1} ... E_k^{-1}
    factors = [ElementaryFactor("A", n, (i + 1, j + 1), -t) for i, j, t in ops]
    out = Factorization(A, factors, "euclid")
    if out.product() != A:
        raise ArithmeticError("factorization does not multiply back to the input")
    return out


def factorize_bounded(A: Matrix, search_cap: int = SEARCH_CAP) -> Factorization:
    """Stable-range elimination: root elements whose product is ``A`` (``n >= 3``).

    The factors for the first ``n - 2`` columns and rows number at most
    ``bounded_length(n)`` whatever the entries are.  The trailing SL(2) block
    is finished by Euclid; ``Factorization.tail`` counts those factors.  If
    the shift search exceeds ``search_cap`` the whole matrix is handed to
    ``factorize_euclid`` and ``fell_back`` is set.
    """
    if A.n == 2:
        raise ValueError("rank >= 2 root system required: n must be at least 3")
    _check_input(A, min_n=3)
    n, ring = A.n, A.ring
    L = bounded_length(n)
    rows = [list(r) for r in A.rows]
    row_ops, col_ops = [], []  # E_k ... E_1 A F_1 ... F_m = diag(I, B)

    def row_op(i, j, t):
        if t:
            rows[i] = [a + t * b for a, b in zip(rows[i], rows[j])]
            row_ops.append((i, j, t))

    try:
        for c in range(n - 2):
            _unit_in_row(rows, c, row_op, ring, search_cap)
            for r in range(c + 1, n):
                row_op(r, c, -rows[r][c])
            for j in range(c + 1, n):
                t = -rows[c][j]
                if t:
                    for r in range(n):
                        rows[r][j] = rows[r][j] + t * rows[r][c]
                    col_ops.append((c, j, t))
    except _SearchCapExceeded:
        out = factorize_euclid(A)
        out.mode, out.fell_back, out.bound = "bounded", True, L
        return out

    head = [ElementaryFactor("A", n, (i + 1, j + 1), -t) for i, j, t in row_ops]
    tail = factorize_euclid(Matrix(rows, ring)).factors
    # A F_1 ... F_m = E_1^{-1} ... E_k^{-1} diag(I, B)
    post = [ElementaryFactor("A", n, (i + 1, j + 1), -t) for i, j, t in reversed(col_ops)]
    out = Factorization(A, head + tail + post, "bounded", bound=L, tail=len(tail))
    if len(head) + len(post) > L:
        raise ArithmeticError("stable-range part exceeds L(n)")
    if out.product() != A:
        raise ArithmeticError("factorization does not multiply back to the input")
    return out
