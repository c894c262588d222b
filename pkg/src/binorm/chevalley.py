"""Root elements of SL(n) (type A) and Sp(2n) (type C) and their commutators.

Roots are integer vectors: ``e_i - e_j`` in Z^n for type A, and
``+-e_i +- e_j``, ``+-2 e_i`` in Z^n for type C.  Type A roots may also be
given as 1-based position pairs ``(i, j)``.  Sp(2n) preserves
``J = [[0, I], [-I, 0]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import Matrix, commutator
from .rings import ZZ, RingDescriptor, RingElem, euclidean_divide


def a_root(i: int, j: int, n: int) -> tuple[int, ...]:
    """The type A root for 1-based matrix position (i, j)."""
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise ValueError(f"invalid type A position ({i}, {j}) for n={n}")
    v = [0] * n
    v[i - 1] += 1
    v[j - 1] -= 1
    return tuple(v)


def root_system(family: str, n: int) -> list[tuple[int, ...]]:
    if family == "A":
        if n < 2:
            raise ValueError("type A needs n >= 2")
        return [a_root(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    if family == "C":
        if n < 1:
            raise ValueError("type C needs n >= 1")
        roots = []
        for i in range(n):
            for s in (2, -2):
                v = [0] * n
                v[i] = s
                roots.append(tuple(v))
            for j in range(i + 1, n):
                for si in (1, -1):
                    for sj in (1, -1):
                        v = [0] * n
                        v[i], v[j] = si, sj
                        roots.append(tuple(v))
        return roots
    raise ValueError(f"unsupported family {family!r}")


def normalize_root(family: str, n: int, root) -> tuple[int, ...]:
    root = tuple(root)
    if family == "A" and len(root) == 2 and min(root) >= 1:
        # a 1-based position (i, j); root vectors always have a negative entry
        return a_root(root[0], root[1], n)
    if root not in root_system(family, n):
        raise ValueError(f"{root} is not a root of {family}{n if family == 'C' else n - 1}")
    return root


def matrix_size(family: str, n: int) -> int:
    return n if family == "A" else 2 * n


def root_support(family: str, n: int, root) -> list[tuple[tuple[int, int], int]]:
    """Nonzero entries ((row, col), coefficient) of the root vector X_alpha, 0-based."""
    root = normalize_root(family, n, root)
    if family == "A":
        return [((root.index(1), root.index(-1)), 1)]
    nz = [(i, s) for i, s in enumerate(root) if s]
    if len(nz) == 1:
        (i, s), = nz
        return [((i, n + i), 1)] if s > 0 else [((n + i, i), 1)]
    (i, si), (j, sj) = nz
    if si > 0 and sj < 0:
        return [((i, j), 1), ((n + j, n + i), -1)]
    if si < 0 and sj > 0:
        return [((j, i), 1), ((n + i, n + j), -1)]
    if si > 0:
        return [((i, n + j), 1), ((j, n + i), 1)]
    return [((n + i, j), 1), ((n + j, i), 1)]


def elementary(family: str, n: int, root, t, ring: RingDescriptor = ZZ) -> Matrix:
    """The root element ``x_alpha(t) = I + t X_alpha`` (``X_alpha`` squares to zero)."""
    size = matrix_size(family, n)
    if isinstance(t, int):
        t = RingElem(t, 0, ring)
    ring = t.ring
    rows = [[ring.one() if r == c else ring.zero() for c in range(size)] for r in range(size)]
    for (r, c), e in root_support(family, n, root):
        rows[r][c] = rows[r][c] + t * e
    return Matrix(rows, ring)


def symplectic_form(n: int, ring: RingDescriptor = ZZ) -> Matrix:
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = 1
        rows[n + i][i] = -1
    return Matrix(rows, ring)


def preserves_form(M: Matrix, J: Matrix) -> bool:
    return M.transpose() * J * M == J


@dataclass
class RelationReport:
    family: str
    n: int
    alpha: tuple
    beta: tuple
    k: RingElem
    l: RingElem
    lhs: Matrix
    rhs_factors: list = field(default_factory=list)  # (root, (i, j), coefficient)
    constants: list = field(default_factory=list)  # fitted C, or None when k or l vanishes
    pass_: bool = False

    @property
    def passed(self) -> bool:
        return self.pass_


def _combinations(family: str, n: int, alpha, beta):
    roots = set(root_system(family, n))
    out = []
    for i in range(1, 4):
        for j in range(1, 4):
            v = tuple(i * a + j * b for a, b in zip(alpha, beta))
            if v in roots:
                out.append((i, j, v))
    out.sort(key=lambda x: (x[0] + x[1], x[0]))
    return out


def _fit_constant(c: RingElem, k: RingElem, l: RingElem, i: int, j: int):
    mono = k**i * l**j
    if not mono:
        return None
    q, r = euclidean_divide(c, mono)
    if r:
        return None
    return q.a if q.b == 0 else q


def check_chevalley_relation(family: str, n: int, alpha, beta, k, l, ring: RingDescriptor = ZZ) -> RelationReport:
    """Compute ``[x_alpha(k), x_beta(l)]`` and fit it as ``prod x_{i alpha + j beta}(c_ij)``.

    The product runs over ``i, j >= 1`` with ``i alpha + j beta`` a root, in
    order of increasing ``i + j``.  Each coefficient is read off the
    commutator and peeled away; the report passes when nothing is left and
    every fitted constant ``C = c_ij / (k^i l^j)`` is an integer of size at most 3.
    """
    alpha = normalize_root(family, n, alpha)
    beta = normalize_root(family, n, beta)
    if alpha == beta or alpha == tuple(-x for x in beta):
        raise ValueError("the commutator formula needs alpha != +-beta")
    if isinstance(k, int):
        k = RingElem(k, 0, ring)
    if isinstance(l, int):
        l = RingElem(l, 0, ring)
    ring = k.ring
    lhs = commutator(elementary(family, n, alpha, k, ring), elementary(family, n, beta, l, ring))
    rem = lhs
    factors, constants = [], []
    for i, j, gamma in _combinations(family, n, alpha, beta):
        (r, c), e = root_support(family, n, gamma)[0]
        coeff = rem[r, c] * e  # e is +-1
        factors.append((gamma, (i, j), coeff))
        constants.append(_fit_constant(coeff, k, l, i, j))
        rem = elementary(family, n, gamma, -coeff, ring) * rem
    ok = rem.is_identity() and all(C is None or (isinstance(C, int) and abs(C) <= 3) for C in constants)
    return RelationReport(family, n, alpha, beta, k, l, lhs, factors, constants, ok)


# -- batched relation checking -------------------------------------------------
#
# A batch holds one matrix per trial as a list of integer arrays of shape
# (T, size, size), one array per ring coordinate (a, b) of a + b*w.
# Multiplying by a root element is a row or column operation.  These run in
# int64 while a float64 bound on every updated entry stays below 2**62, and
# the whole batch is recomputed with exact Python integers (object dtype)
# as soon as that bound fails.

_INT64_SAFE = float(2**62) * (1 - 1e-9)


class _Overflow(Exception):
    pass


def _scale(t, v, d: int, exact: bool):
    """Coordinates of ``t * v`` with ``t`` of shape (T,) and ``v`` of shape (T, size)."""
    if len(t) == 1:
        out = [t[0][:, None] * v[0]]
    else:
        out = [t[0][:, None] * v[0] + d * t[1][:, None] * v[1], t[0][:, None] * v[1] + t[1][:, None] * v[0]]
    if not exact:
        ft = [np.abs(x.astype(np.float64)) for x in t]
        fv = [np.abs(x.astype(np.float64)) for x in v]
        if len(t) == 1:
            bound = ft[0][:, None] * fv[0]
        else:
            bound = np.maximum(ft[0][:, None] * fv[0] + abs(d) * ft[1][:, None] * fv[1],
                               ft[0][:, None] * fv[1] + ft[1][:, None] * fv[0])
        if bound.size and bound.max() >= _INT64_SAFE / 2:
            raise _Overflow
    return out


def _check_range(M, exact: bool):
    if not exact and max(np.abs(x).max() for x in M) >= 2**61:
        raise _Overflow


def _apply(M, support, t, d: int, exact: bool, side: str):
    """``M * x(t)`` (side 'right') or ``x(t) * M`` (side 'left') for a root support."""
    if side == "right":
        # column c gains e * t * (column r), read from the unchanged M
        updates = [(c, _scale(t, [x[:, :, r] for x in M], d, exact), e) for (r, c), e in support]
        M = [x.copy() for x in M]
        for c, upd, e in updates:
            for x, u in zip(M, upd):
                x[:, :, c] += e * u
    else:
        # row r gains e * t * (row c)
        updates = [(r, _scale(t, [x[:, c, :] for x in M], d, exact), e) for (r, c), e in support]
        M = [x.copy() for x in M]
        for r, upd, e in updates:
            for x, u in zip(M, upd):
                x[:, r, :] += e * u
    _check_range(M, exact)
    return M


def _ring_pow_mul(k, l, i, j, d):
    """Coordinates of k**i * l**j for coordinate arrays (object dtype)."""
    def mul(x, y):
        if len(x) == 1:
            return [x[0] * y[0]]
        return [x[0] * y[0] + d * x[1] * y[1], x[0] * y[1] + x[1] * y[0]]

    acc = [np.ones_like(k[0])] + [np.zeros_like(c) for c in k[1:]]
    for _ in range(i):
        acc = mul(acc, k)
    for _ in range(j):
        acc = mul(acc, l)
    return acc


@dataclass
class BatchRelationReport:
    family: str
    n: int
    ring: RingDescriptor
    alpha: tuple
    beta: tuple
    trials: int
    factors: list  # (root, (i, j))
    constants: list  # one integer C per factor, None if no consistent integer exists
    passed: bool
    first_failure: int | None = None  # trial index where the product did not match
    exact_fallback: bool = False


def _coords(values, ring: RingDescriptor):
    """Split a list of ints or RingElems into coordinate arrays (object dtype)."""
    els = [v if isinstance(v, RingElem) else RingElem(int(v), 0, ring) for v in values]
    out = [np.array([e.a for e in els], dtype=object)]
    if ring.rank == 2:
        out.append(np.array([e.b for e in els], dtype=object))
    return out


def check_relation_batch(family: str, n: int, alpha, beta, ks, ls, ring: RingDescriptor = ZZ) -> BatchRelationReport:
    """Check the commutator formula for ``[x_alpha(k), x_beta(l)]`` on many ``(k, l)`` at once.

    The fitted coefficient of each factor ``x_{i alpha + j beta}`` must equal
    ``C * k^i * l^j`` for one integer ``C`` shared by every trial, with
    ``|C| <= 3``.
    """
    alpha = normalize_root(family, n, alpha)
    beta = normalize_root(family, n, beta)
    if alpha == beta or alpha == tuple(-x for x in beta):
        raise ValueError("the commutator formula needs alpha != +-beta")
    if len(ks) != len(ls) or not ks:
        raise ValueError("need equally many, and at least one, k and l values")
    d = ring.d or 0
    kobj, lobj = _coords(ks, ring), _coords(ls, ring)
    combos = _combinations(family, n, alpha, beta)
    T = len(ks)
    size = matrix_size(family, n)

    def run(exact: bool):
        dtype = object if exact else np.int64
        k = [c.astype(dtype) for c in kobj]
        l = [c.astype(dtype) for c in lobj]
        eye = np.broadcast_to(np.eye(size, dtype=dtype), (T, size, size))
        lhs = [eye.copy()] + [np.zeros((T, size, size), dtype=dtype) for _ in k[1:]]
        for root, t in ((alpha, k), (beta, l), (alpha, [-c for c in k]), (beta, [-c for c in l])):
            lhs = _apply(lhs, root_support(family, n, root), t, d, exact, "right")
        rem, coeffs = lhs, []
        for _, _, gamma in combos:
            support = root_support(family, n, gamma)
            (r, c), e = support[0]
            coeff = [comp[:, r, c] * e for comp in rem]
            coeffs.append(coeff)
            rem = _apply(rem, support, [-x for x in coeff], d, exact, "left")
        return rem, coeffs

    exact = False
    try:
        rem, coeffs = run(False)
    except _Overflow:
        exact = True
        rem, coeffs = run(True)
    eye = np.eye(size, dtype=rem[0].dtype)
    bad = np.any(rem[0] != eye, axis=(1, 2))
    for comp in rem[1:]:
        bad |= np.any(comp != 0, axis=(1, 2))

    constants = []
    for (i, j, _), coeff in zip(combos, coeffs):
        coeff = [c.astype(object) for c in coeff]
        mono = _ring_pow_mul(kobj, lobj, i, j, d)
        nz = np.flatnonzero(np.logical_or.reduce([m != 0 for m in mono]))
        C = None
        if len(nz):
            t0 = int(nz[0])
            q, r = euclidean_divide(RingElem(*[int(c[t0]) for c in coeff], ring) if ring.rank == 2 else RingElem(int(coeff[0][t0]), 0, ring),
                                    RingElem(*[int(m[t0]) for m in mono], ring) if ring.rank == 2 else RingElem(int(mono[0][t0]), 0, ring))
            if not r and q.b == 0:
                C = q.a
        if C is None:
            bad |= True
        else:
            for cc, mc in zip(coeff, mono):
                bad |= cc != C * mc
        constants.append(C)
    ok = not bad.any() and all(C is not None and abs(C) <= 3 for C in constants)
    first = int(np.flatnonzero(bad)[0]) if bad.any() else None
    return BatchRelationReport(family, n, ring, alpha, beta, T, [(g, (i, j)) for i, j, g in combos], constants, ok, first, exact)
