"""Finite groups enumerated into numpy arrays.

Every element of a :class:`FiniteGroup` is a row of small non-negative
integers (matrix entries mod m, or permutation images) and is addressed by
its position in a table sorted by an integer code.  Products, inverses and
conjugations are computed in batches over index arrays.
"""
from __future__ import annotations

import os
from collections.abc import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .groups import GeneratingSet, ModMatrix, Perm

DEFAULT_ELEMENT_CAP = 2_000_000


def element_cap() -> int:
    return int(os.environ.get("BINORM_ELEMENT_CAP", DEFAULT_ELEMENT_CAP))


class GroupTooLarge(RuntimeError):
    def __init__(self, cap: int, radius: int, size: int):
        super().__init__(f"group too large: more than {cap} elements (reached {size} elements within radius {radius})")
        self.cap = cap
        self.radius = radius
        self.size = size


class _ModMatrixRealization:
    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.width = n * n
        if m ** self.width >= 2**62:
            raise ValueError(f"SL({n}, Z/{m}) elements do not fit a 62-bit code")
        self.weights = m ** np.arange(self.width, dtype=np.int64)

    def to_vec(self, g: ModMatrix) -> np.ndarray:
        if not isinstance(g, ModMatrix) or (g.n, g.m) != (self.n, self.m):
            raise TypeError(f"expected a {self.n}x{self.n} matrix mod {self.m}")
        return np.array([x for r in g.rows for x in r], dtype=np.int64)

    def from_vec(self, v) -> ModMatrix:
        n = self.n
        return ModMatrix([[int(v[i * n + j]) for j in range(n)] for i in range(n)], self.m)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        n = self.n
        prod = np.einsum("bij,bjk->bik", a.reshape(-1, n, n), b.reshape(-1, n, n)) % self.m
        return prod.reshape(-1, self.width)

    def encode(self, v: np.ndarray) -> np.ndarray:
        return v @ self.weights


class _PermRealization:
    def __init__(self, degree: int):
        self.width = degree
        if degree**degree >= 2**62:
            raise ValueError(f"permutations of degree {degree} do not fit a 62-bit code")
        self.weights = degree ** np.arange(degree, dtype=np.int64)

    def to_vec(self, g: Perm) -> np.ndarray:
        if not isinstance(g, Perm) or g.degree != self.width:
            raise TypeError(f"expected a permutation of degree {self.width}")
        return np.array(g.images, dtype=np.int64)

    def from_vec(self, v) -> Perm:
        return Perm([int(x) for x in v])

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # (g h)(x) = g(h(x))
        return np.take_along_axis(a, b, axis=1)

    def encode(self, v: np.ndarray) -> np.ndarray:
        return v @ self.weights


def _realization_for(g):
    if isinstance(g, ModMatrix):
        return _ModMatrixRealization(g.n, g.m)
    if isinstance(g, Perm):
        return _PermRealization(g.degree)
    raise TypeError(f"no finite realization for {type(g).__name__}; use ModMatrix or Perm elements")


class FiniteGroup:
    """The finite group generated by a list of ModMatrix or Perm elements."""

    def __init__(self, generators: Sequence, name: str = "", cap: int | None = None):
        gens = list(generators)
        if not gens:
            raise ValueError("need at least one generator")
        self.name = name
        self.real = _realization_for(gens[0])
        self.generators = gens
        cap = element_cap() if cap is None else cap
        gen_vecs = np.stack([self.real.to_vec(g) for g in gens])
        gen_inv_vecs = np.stack([self.real.to_vec(g.inverse()) for g in gens])
        ident = self.real.to_vec(gens[0].identity())[None, :]

        # breadth-first closure; parent/generator kept to recover inverses
        layers_vecs = [ident]
        layers_parent_code = [np.array([-1], dtype=np.int64)]
        layers_gen = [np.array([-1], dtype=np.int64)]
        seen = self.real.encode(ident)
        frontier = ident
        radius = 0
        while len(frontier):
            cand, cand_parent, cand_gen = [], [], []
            fcodes = self.real.encode(frontier)
            for gi in range(len(gens)):
                prod = self.real.mul(frontier, np.broadcast_to(gen_vecs[gi], frontier.shape))
                cand.append(prod)
                cand_parent.append(fcodes)
                cand_gen.append(np.full(len(prod), gi, dtype=np.int64))
            cand = np.concatenate(cand)
            cand_parent = np.concatenate(cand_parent)
            cand_gen = np.concatenate(cand_gen)
            codes = self.real.encode(cand)
            codes_u, first = np.unique(codes, return_index=True)
            fresh = ~np.isin(codes_u, seen, assume_unique=True)
            keep = first[fresh]
            frontier = cand[keep]
            radius += 1
            if len(frontier):
                layers_vecs.append(frontier)
                layers_parent_code.append(cand_parent[keep])
                layers_gen.append(cand_gen[keep])
                seen = np.union1d(seen, codes_u[fresh])
                if len(seen) > cap:
                    raise GroupTooLarge(cap, radius, len(seen))

        vecs = np.concatenate(layers_vecs)
        codes = self.real.encode(vecs)
        order = np.argsort(codes, kind="stable")
        self.codes = codes[order]
        self.vecs = vecs[order]
        self.order = len(self.codes)
        self.identity = int(self.index_of_vecs(ident)[0])

        # inverses layer by layer: (p s)^{-1} = s^{-1} p^{-1}
        inv = np.full(self.order, -1, dtype=np.int64)
        inv[self.identity] = self.identity
        for lv, lp, lg in zip(layers_vecs[1:], layers_parent_code[1:], layers_gen[1:]):
            child = self.index_of_codes(self.real.encode(lv))
            parent = self.index_of_codes(lp)
            prod = self.real.mul(gen_inv_vecs[lg], self.vecs[inv[parent]])
            inv[child] = self.index_of_vecs(prod)
        self.inv = inv
        self._class_labels = None

    # -- lookup

    def index_of_codes(self, codes: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.codes, codes)
        idx = np.minimum(idx, self.order - 1)
        if not np.all(self.codes[idx] == codes):
            raise KeyError("element not in group")
        return idx

    def index_of_vecs(self, vecs: np.ndarray) -> np.ndarray:
        return self.index_of_codes(self.real.encode(np.asarray(vecs, dtype=np.int64).reshape(-1, self.real.width)))

    def index(self, g) -> int:
        return int(self.index_of_vecs(self.real.to_vec(g)[None, :])[0])

    def indices(self, elements) -> np.ndarray:
        elements = list(elements)
        if not elements:
            return np.zeros(0, dtype=np.int64)
        return self.index_of_vecs(np.stack([self.real.to_vec(g) for g in elements]))

    def element(self, i: int):
        return self.real.from_vec(self.vecs[int(i)])

    def __len__(self):
        return self.order

    def __contains__(self, g) -> bool:
        try:
            self.index(g)
            return True
        except (KeyError, TypeError):
            return False

    # -- batched arithmetic on index arrays

    def mul(self, a, b) -> np.ndarray:
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        a, b = np.broadcast_arrays(a, b)
        return self.index_of_vecs(self.real.mul(self.vecs[a.ravel()], self.vecs[b.ravel()])).reshape(a.shape)

    def conj(self, g, h) -> np.ndarray:
        """Indices of ``h g h^{-1}``."""
        h = np.asarray(h, dtype=np.int64)
        return self.mul(self.mul(h, g), self.inv[h])

    def all_indices(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def generator_indices(self) -> np.ndarray:
        return self.indices(self.generators)

    # -- structure

    def class_labels(self) -> np.ndarray:
        """Conjugacy class label of every element.

        Classes are orbits of conjugation by the generators, which is the
        same as conjugation by the whole group.
        """
        if self._class_labels is None:
            src, dst = [], []
            allx = self.all_indices()
            for gi in self.generator_indices():
                src.append(allx)
                dst.append(self.conj(allx, np.full(self.order, gi)))
            src = np.concatenate(src)
            dst = np.concatenate(dst)
            graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(self.order, self.order))
            _, labels = connected_components(graph, directed=True, connection="weak")
            self._class_labels = labels
        return self._class_labels

    def class_representatives(self) -> np.ndarray:
        labels = self.class_labels()
        _, first = np.unique(labels, return_index=True)
        return first

    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = self.all_indices()
        done = cur == self.identity
        k = 1
        while not done.all():
            k += 1
            cur = self.mul(cur, self.all_indices())
            hit = (cur == self.identity) & ~done
            orders[hit] = k
            done |= hit
        return orders

    def generating_set(self, idx) -> GeneratingSet:
        els = [self.element(i) for i in np.atleast_1d(idx)]
        keys = {g.key() for g in els}
        return GeneratingSet(tuple(els), symmetric=all(g.inverse().key() in keys for g in els))

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"
