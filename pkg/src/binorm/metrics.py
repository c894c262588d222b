"""Word norms, bi-invariant word norms and related invariants.

Exact tables are built by breadth-first search over a :class:`FiniteGroup`.
When the generating set is closed under conjugation the search runs over
conjugacy classes: the ball of radius k is then a union of classes, and
``g * S`` has the same classes for every ``g`` in one class.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .builtin import ExtensionData
from .finite import FiniteGroup, GroupTooLarge, element_cap
from .groups import FreeWord, GeneratingSet

EXHAUSTIVE_PAIR_LIMIT = 25_000_000


@dataclass
class NormTable:
    group: FiniteGroup
    norms: np.ndarray
    generator_indices: np.ndarray
    conjugation_invariant: bool

    @property
    def group_size(self) -> int:
        return self.group.order

    @property
    def generating_set(self) -> GeneratingSet:
        return self.group.generating_set(self.generator_indices)

    @property
    def diameter(self) -> int:
        return int(self.norms.max())

    def histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.norms, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def norm(self, g) -> int:
        return int(self.norms[self.group.index(g)])

    def __getitem__(self, idx):
        return self.norms[idx]

    def as_dict(self) -> dict:
        return {self.group.element(i).key(): int(v) for i, v in enumerate(self.norms)}

    def check_axioms(self) -> dict[str, bool]:
        return check_norm_axioms(self)


def _resolve(group: FiniteGroup, S) -> np.ndarray:
    if isinstance(S, GeneratingSet):
        return np.unique(group.indices(S.elements))
    return np.unique(np.asarray(S, dtype=np.int64))


def _symmetrize(group: FiniteGroup, idx: np.ndarray) -> np.ndarray:
    return np.union1d(idx, group.inv[idx])


def conjugation_closure(S, group: FiniteGroup, cap: int | None = None) -> GeneratingSet:
    """The union of the conjugacy classes of the elements of ``S``."""
    idx = closure_indices(group, _resolve(group, S), cap)
    return group.generating_set(idx)


def closure_indices(group: FiniteGroup, idx: np.ndarray, cap: int | None = None) -> np.ndarray:
    """Fixed point of ``idx`` under conjugation by the group's generators."""
    cap = element_cap() if cap is None else cap
    gens = group.generator_indices()
    closed = np.unique(idx)
    frontier = closed
    while len(frontier):
        images = np.concatenate([group.conj(frontier, np.full(len(frontier), s)) for s in gens])
        new = np.setdiff1d(images, closed)
        closed = np.union1d(closed, new)
        if len(closed) > cap:
            raise GroupTooLarge(cap, 1, len(closed))
        frontier = new
    return closed


def _is_conjugation_closed(group: FiniteGroup, idx: np.ndarray) -> bool:
    return len(closure_indices(group, idx)) == len(np.unique(idx))


def _bfs_plain(group: FiniteGroup, gens: np.ndarray) -> np.ndarray:
    dist = np.full(group.order, -1, dtype=np.int64)
    dist[group.identity] = 0
    frontier = np.array([group.identity])
    k = 0
    while len(frontier):
        k += 1
        prods = group.mul(np.repeat(frontier, len(gens)), np.tile(gens, len(frontier)))
        prods = np.unique(prods)
        new = prods[dist[prods] < 0]
        dist[new] = k
        frontier = new
    return dist


def _bfs_classes(group: FiniteGroup, gens: np.ndarray) -> np.ndarray:
    labels = group.class_labels()
    reps = group.class_representatives()
    cdist = np.full(len(reps), -1, dtype=np.int64)
    cdist[labels[group.identity]] = 0
    frontier = np.array([labels[group.identity]])
    k = 0
    while len(frontier):
        k += 1
        r = reps[frontier]
        prods = group.mul(np.repeat(r, len(gens)), np.tile(gens, len(r)))
        cls = np.unique(labels[prods])
        new = cls[cdist[cls] < 0]
        cdist[new] = k
        frontier = new
    return cdist[labels]


def word_norm_table(generators, group: FiniteGroup) -> NormTable:
    """Exact word norm of every element of ``group`` w.r.t. ``generators`` (symmetrized).

    Raises ValueError if the generators do not generate the whole group.
    """
    gens = _symmetrize(group, _resolve(group, generators))
    invariant = _is_conjugation_closed(group, gens)
    dist = _bfs_classes(group, gens) if invariant else _bfs_plain(group, gens)
    if (dist < 0).any():
        raise ValueError(f"generators span a proper subgroup ({int((dist >= 0).sum())} of {group.order} elements)")
    return NormTable(group, dist, gens, invariant)


def biinvariant_norm_table(S, group: FiniteGroup) -> NormTable:
    closure = closure_indices(group, _symmetrize(group, _resolve(group, S)))
    dist = _bfs_classes(group, closure)
    if (dist < 0).any():
        raise ValueError("S does not normally generate the group")
    return NormTable(group, dist, closure, True)


def check_norm_axioms(table: NormTable) -> dict[str, bool]:
    """Check the norm axioms on the whole table.

    Triangle inequality: all pairs for small groups; for conjugation-invariant
    tables, class representatives against all elements, which covers every
    pair since ``|(c g c^-1) h| = |g (c^-1 h c)|``.
    """
    g = table.group
    norms = table.norms
    res = {
        "nonnegative": bool((norms >= 0).all()),
        "zero_only_at_identity": bool(norms[g.identity] == 0 and (norms == 0).sum() == 1),
        "symmetric": bool(np.array_equal(norms[g.inv], norms)),
    }
    left = g.class_representatives() if table.conjugation_invariant else g.all_indices()
    right = g.all_indices()
    if len(left) * len(right) > EXHAUSTIVE_PAIR_LIMIT:
        raise ValueError(f"table of {g.order} elements too large for an exhaustive triangle check")
    ok = True
    chunk = max(1, 2_000_000 // len(right))
    for start in range(0, len(left), chunk):
        a = left[start : start + chunk]
        aa = np.repeat(a, len(right))
        bb = np.tile(right, len(a))
        ok &= bool((norms[g.mul(aa, bb)] <= norms[aa] + norms[bb]).all())
    res["triangle"] = ok
    if table.conjugation_invariant:
        inv_ok = True
        allx = g.all_indices()
        for s in g.generator_indices():
            inv_ok &= bool(np.array_equal(norms[g.conj(allx, np.full(g.order, s))], norms))
        res["conjugation_invariant"] = inv_ok
    return res


def lipschitz_check(domain: NormTable, codomain: NormTable, phi: np.ndarray) -> tuple[bool, int]:
    """Check ``||phi(g)|| <= mu |g|`` on every element with ``mu = max ||phi(s)||`` over generators."""
    mu = int(codomain.norms[phi[domain.generator_indices]].max())
    return bool((codomain.norms[phi] <= mu * domain.norms).all()), mu


# ------------------------------------------------------------ translation length


def translation_length(g, norm: Callable, N: int) -> tuple[Fraction, list]:
    """Upper estimate ``min_{n<=N} norm(g^n)/n`` of the translation length, with the sequence of norms."""
    if N < 1:
        raise ValueError("N must be at least 1")
    seq = []
    power = g
    best = None
    for n in range(1, N + 1):
        v = norm(power)
        seq.append(v)
        ratio = Fraction(v) / n
        best = ratio if best is None or ratio < best else best
        power = power * g
    return best, seq


def running_minimum(seq: list) -> list[Fraction]:
    out, best = [], None
    for n, v in enumerate(seq, start=1):
        r = Fraction(v) / n
        best = r if best is None or r < best else best
        out.append(best)
    return out


# ------------------------------------------------------------ commutator length


class NotPerfect(ValueError):
    def __init__(self, witness, index: int):
        super().__init__(f"group is not perfect: [G,G] has index {index}; {witness} is not a product of commutators")
        self.witness = witness
        self.index = index


def commutator_length_table(group: FiniteGroup) -> NormTable:
    """Commutator length of every element of a finite perfect group (scl vanishes identically)."""
    allx = group.all_indices()
    comms = set()
    for a in allx:
        aa = np.full(group.order, a)
        comms.update(group.mul(group.mul(aa, allx), group.mul(group.inv[aa], group.inv[allx])).tolist())
    comms = np.array(sorted(comms), dtype=np.int64)
    dist = _bfs_classes(group, comms)
    if (dist < 0).any():
        witness = group.element(int(np.flatnonzero(dist < 0)[0]))
        raise NotPerfect(witness, group.order // int((dist >= 0).sum()))
    return NormTable(group, dist, comms, True)


def stable_commutator_length(table: NormTable) -> list[Fraction]:
    """scl of every element; finite order forces 0."""
    return [Fraction(0)] * table.group_size


# ------------------------------------------------------------ extensions


@dataclass
class ExtensionReport:
    m: int
    kappa: int
    diameter: int
    passed: bool
    elementwise: bool
    details: dict = field(default_factory=dict)


def extension_norm_bound(E: ExtensionData, S_quotient=None) -> ExtensionReport:
    """Compare the bi-invariant diameter of the total group with ``m + kappa``.

    ``m`` is the bi-invariant diameter of the quotient for ``S_quotient``;
    the total group uses ``s(S_quotient)`` together with the kernel, and
    ``kappa`` is the largest norm of a kernel element there.
    """
    Q = E.quotient
    S_quotient = E.quotient_generators if S_quotient is None else S_quotient
    s_idx = _resolve(Q, S_quotient)
    qtable = biinvariant_norm_table(s_idx, Q)
    m = qtable.diameter
    kernel = E.kernel
    total_gens = np.union1d(E.section[s_idx], kernel[kernel != E.total.identity])
    ttable = biinvariant_norm_table(total_gens, E.total)
    kappa = int(ttable.norms[kernel].max())
    diam = ttable.diameter
    # |g| <= |pi(g)| + kappa for each element is the sharper form of the bound
    elementwise = bool((ttable.norms <= qtable.norms[E.quotient_map] + kappa).all())
    lipschitz = bool((qtable.norms[E.quotient_map] <= ttable.norms).all())
    return ExtensionReport(
        m=m,
        kappa=kappa,
        diameter=diam,
        passed=diam <= m + kappa and elementwise,
        elementwise=elementwise,
        details={
            "quotient_order": Q.order,
            "total_order": E.total.order,
            "kernel_order": len(kernel),
            "quotient_map_1_lipschitz": lipschitz,
            "quotient_table": qtable,
            "total_table": ttable,
        },
    )


# ------------------------------------------------------------ infinite groups


def ball_norms(generators: Iterable, radius: int, cap: int | None = None) -> dict:
    """Word norms of all elements of length <= radius, by BFS on hashable group elements."""
    gens = list(GeneratingSet.symmetrized(generators).elements)
    cap = element_cap() if cap is None else cap
    ident = gens[0].identity()
    dist = {ident.key(): 0}
    frontier = [ident]
    for k in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                kh = h.key()
                if kh not in dist:
                    dist[kh] = k
                    nxt.append(h)
        if len(dist) > cap:
            raise GroupTooLarge(cap, k, len(dist))
        frontier = nxt
    return dist


def _reduced_words(rank: int, max_len: int):
    yield ()
    layer = [()]
    letters = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        layer = nxt


def free_binorm_upper(g: FreeWord, S, conj_cap: int, letter_cap: int) -> int | None:
    """Fewest conjugates ``c s c^-1`` (``|c| <= conj_cap``, ``s`` in S) whose product is ``g``.

    Only searches within the caps, so the result is an upper bound on the
    bi-invariant norm; ``None`` means nothing was found.
    """
    if g.is_identity():
        return 0
    rank = g.rank
    S = list(S)
    conjugates = {}
    for c in _reduced_words(rank, conj_cap):
        cw = FreeWord(c, rank)
        ci = cw.inverse()
        for s in S:
            w = cw * s * ci
            conjugates.setdefault(w.letters, w)
    conj_list = list(conjugates.values())
    exps = {w.letters: w.exponent_sums() for w in conj_list}
    target_exp = g.exponent_sums()
    gen_exps = {s.exponent_sums() for s in S}

    def reachable_exp(e, k):
        # abelianization filter: e must be a sum of k generator exponent vectors
        if k == 0:
            return all(x == 0 for x in e)
        return any(reachable_exp(tuple(a - b for a, b in zip(e, ge)), k - 1) for ge in gen_exps)

    def search(h: FreeWord, k: int) -> bool:
        if k == 1:
            return h.letters in conjugates
        if not reachable_exp(h.exponent_sums(), k):
            return False
        for c in conj_list:
            rest = c.inverse() * h
            if search(rest, k - 1):
                return True
        return False

    for k in range(1, letter_cap + 1):
        if not reachable_exp(target_exp, k):
            continue
        if search(g, k):
            return k
    return None


def free_plain_norms(rank: int, radius: int) -> dict:
    """Plain word norms on the ball of the given radius in the free group."""
    return ball_norms([FreeWord((i,), rank) for i in range(1, rank + 1)], radius)


def fekete_violations(seq: list) -> list[tuple[int, int]]:
    """Pairs (m, n) with ``seq[m+n] > seq[m] + seq[n]`` (1-based powers)."""
    out = []
    N = len(seq)
    for m, n in itertools.combinations_with_replacement(range(1, N + 1), 2):
        if m + n <= N and seq[m + n - 1] > seq[m - 1] + seq[n - 1]:
            out.append((m, n))
    return out


def norm_histogram(norms: Iterable[int]) -> dict[int, int]:
    return dict(sorted(Counter(int(x) for x in norms).items()))
