"""Named finite groups used as test surfaces.

=============  =========================================  ==========================
spec           realization                                default generators
=============  =========================================  ==========================
cyclic:N       x -> x + b on Z/N (2x2 affine mod N)       +1, -1
dihedral:N     x -> +-x + b on Z/N                        x -> -x, x -> 1 - x
quaternion8    Q8 inside SL(2, Z/3)                       i, j and inverses
sl:n:m         SL(n, Z/m)                                 x_ij(+-1), all i != j
alternating:N  A_N on N points                            (1 2 k), k = 3..N, inverses
=============  =========================================  ==========================
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finite import FiniteGroup
from .groups import GeneratingSet, ModMatrix, Perm


@dataclass
class BuiltinGroup:
    name: str
    group: FiniteGroup
    generators: GeneratingSet


def _affine(eps: int, b: int, m: int) -> ModMatrix:
    return ModMatrix([[eps, b], [0, 1]], m)


def sl_elementary_mod(n: int, m: int, i: int, j: int, t: int) -> ModMatrix:
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    rows[i - 1][j - 1] = t
    return ModMatrix(rows, m)


def builtin_group(spec: str, cap: int | None = None) -> BuiltinGroup:
    parts = spec.strip().split(":")
    kind, args = parts[0], parts[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise ValueError(f"bad group spec {spec!r}") from None
    if kind == "cyclic" and len(nums) == 1 and nums[0] >= 2:
        (n,) = nums
        gens = [_affine(1, 1, n)]
    elif kind == "dihedral" and len(nums) == 1 and nums[0] >= 3:
        (n,) = nums
        gens = [_affine(-1, 0, n), _affine(-1, 1, n)]
    elif kind == "quaternion8" and not nums:
        gens = [ModMatrix([[0, -1], [1, 0]], 3), ModMatrix([[1, 1], [1, -1]], 3)]
    elif kind == "sl" and len(nums) == 2 and nums[0] >= 2 and nums[1] >= 2:
        n, m = nums
        gens = [sl_elementary_mod(n, m, i, j, 1) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    elif kind == "alternating" and len(nums) == 1 and nums[0] >= 3:
        (n,) = nums
        gens = [Perm.from_cycles(f"(1 2 {k})", n) for k in range(3, n + 1)]
    else:
        raise ValueError(f"unknown group spec {spec!r}")
    sym = GeneratingSet.symmetrized(gens)
    group = FiniteGroup(list(sym.elements), name=spec, cap=cap)
    return BuiltinGroup(spec, group, sym)


def sl_order(n: int, p: int) -> int:
    """Order of SL(n, F_p) for a prime p."""
    order = 1
    for k in range(n):
        order *= p**n - p**k
    return order // (p - 1)


def projective_line_action(g: ModMatrix) -> Perm:
    """Permutation induced by a 2x2 matrix mod a prime p on the p + 1 points of P^1."""
    p = g.m
    points = [(x, 1) for x in range(p)] + [(1, 0)]
    index = {pt: i for i, pt in enumerate(points)}
    (a, b), (c, d) = g.rows

    def normalize(u, v):
        if v % p:
            return ((u * pow(v, -1, p)) % p, 1)
        return (1, 0)

    return Perm([index[normalize(a * x + b * y, c * x + d * y)] for x, y in points])


@dataclass
class ExtensionData:
    """A finite extension ``K -> total -> quotient`` given by index maps."""

    total: FiniteGroup
    quotient: FiniteGroup
    quotient_map: np.ndarray  # total index -> quotient index
    section: np.ndarray  # quotient index -> total index
    total_generators: GeneratingSet
    quotient_generators: GeneratingSet

    def __post_init__(self):
        if self.section[self.quotient.identity] != self.total.identity:
            raise ValueError("section must send 1 to 1")
        if not np.array_equal(self.quotient_map[self.section], self.quotient.all_indices()):
            raise ValueError("section is not a section of the quotient map")

    @property
    def kernel(self) -> np.ndarray:
        return np.flatnonzero(self.quotient_map == self.quotient.identity)


def projective_extension(spec: str) -> ExtensionData:
    """``quaternion8`` or ``sl:2:p`` over its image acting on the projective line."""
    total = builtin_group(spec)
    if not all(isinstance(g, ModMatrix) and g.n == 2 for g in total.generators):
        raise ValueError("projective extensions need 2x2 matrix groups")
    images = [projective_line_action(g) for g in total.generators]
    quotient_gens = GeneratingSet.symmetrized(images)
    quotient = FiniteGroup(list(quotient_gens.elements), name=f"P({spec})")
    qmap = np.array([quotient.index(projective_line_action(total.group.element(i))) for i in range(total.group.order)])
    section = np.full(quotient.order, -1, dtype=np.int64)
    for i in range(total.group.order):
        if section[qmap[i]] < 0:
            section[qmap[i]] = i
    section[quotient.identity] = total.group.identity
    return ExtensionData(total.group, quotient, qmap, section, total.generators, quotient_gens)
