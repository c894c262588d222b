"""Group elements: exact matrices, matrices mod m, permutations, free words.

All four realizations share a small duck-typed interface::

    g * h, g.inverse(), g.key(), g.identity(), g.is_identity(), g ** k

``key()`` is a hashable canonical form; two elements of the same realization
are equal exactly when their keys are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .rings import ZZ, RingDescriptor, RingElem, parse, to_string

# x, y, z first so that F_2 is written in x and y.
DEFAULT_ALPHABET = "xyzuvwabcdefghijklmnopqrst"


def _check_same(g, h):
    if type(g) is not type(h):
        raise TypeError(f"cannot combine {type(g).__name__} with {type(h).__name__}")
    if g.shape_key() != h.shape_key():
        raise TypeError(f"incompatible {type(g).__name__} elements: {g.shape_key()} vs {h.shape_key()}")


class _Elem:
    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.identity()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return type(self) is type(other) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


# ---------------------------------------------------------------- matrices


def _charpoly_adjugate(rows, n, zero, one, divexact):
    """Faddeev-LeVerrier: (characteristic polynomial coefficients, M_n).

    Works in any commutative ring where the traces are divisible by k, which
    holds for matrices with entries in a ring of integers.
    """
    m_k = [[zero] * n for _ in range(n)]
    c = [zero] * (n + 1)
    c[n] = one
    for k in range(1, n + 1):
        am = _matmul(rows, m_k, n, zero) if k > 1 else [[zero] * n for _ in range(n)]
        m_k = [[am[i][j] + (c[n - k + 1] if i == j else zero) for j in range(n)] for i in range(n)]
        amk = _matmul(rows, m_k, n, zero)
        tr = zero
        for i in range(n):
            tr = tr + amk[i][i]
        c[n - k] = -divexact(tr, k)
    return c, m_k


def _det_adjugate_small(r, n):
    """Closed-form ``(det, adjugate)`` for n <= 3 (adjugate * A = det * I)."""
    if n == 1:
        return r[0][0], [[r[0][0] * 0 + 1]]
    if n == 2:
        (a, b), (c, d) = r
        return a * d - b * c, [[d, -b], [-c, a]]
    (a, b, c), (d, e, f), (g, h, i) = r
    adj = [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]
    return a * adj[0][0] + b * adj[1][0] + c * adj[2][0], adj


def _matmul(a, b, n, zero):
    out = []
    for i in range(n):
        row_a = a[i]
        row = []
        for j in range(n):
            s = zero
            for k in range(n):
                x = row_a[k]
                if x:
                    y = b[k][j]
                    if y:
                        s = s + x * y
            row.append(s)
        out.append(row)
    return out


class Matrix(_Elem):
    """Square matrix over Z, Z[sqrt 2] or Z[i] with exact entries."""

    __slots__ = ("rows", "n", "ring", "_key")

    def __init__(self, rows: Sequence[Sequence], ring: RingDescriptor = ZZ, check_sl: bool = False):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.n = n
        self.ring = ring
        self.rows = tuple(
            tuple(x if isinstance(x, RingElem) else RingElem(x, 0, ring) if isinstance(x, int) else parse(x, ring) for x in r)
            for r in rows
        )
        self._key = None
        if check_sl and self.det() != ring.one():
            raise ValueError(f"determinant is {self.det()}, expected 1")

    @classmethod
    def identity_matrix(cls, n: int, ring: RingDescriptor = ZZ) -> Matrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ring)

    def shape_key(self):
        return (self.n, self.ring)

    def identity(self) -> Matrix:
        return Matrix.identity_matrix(self.n, self.ring)

    def is_identity(self) -> bool:
        return all((x == 1) if i == j else not x for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        _check_same(self, other)
        return Matrix(_matmul(self.rows, other.rows, self.n, self.ring.zero()), self.ring)

    def __sub__(self, other):
        _check_same(self, other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ring)

    def charpoly(self) -> list[RingElem]:
        c, _ = _charpoly_adjugate(self.rows, self.n, self.ring.zero(), self.ring.one(), lambda x, k: x.divexact_int(k))
        return c

    def det(self) -> RingElem:
        if self.n <= 3:
            return _det_adjugate_small(self.rows, self.n)[0]
        c, _ = _charpoly_adjugate(self.rows, self.n, self.ring.zero(), self.ring.one(), lambda x, k: x.divexact_int(k))
        return c[0] if self.n % 2 == 0 else -c[0]

    def inverse(self) -> Matrix:
        n = self.n
        if n <= 3:
            det, adj = _det_adjugate_small(self.rows, n)
            if not det.is_unit():
                raise ArithmeticError(f"matrix is not invertible over {self.ring} (det={det})")
            u = det.unit_inverse()
            return Matrix([[x * u for x in r] for r in adj], self.ring)
        c, m_n = _charpoly_adjugate(self.rows, n, self.ring.zero(), self.ring.one(), lambda x, k: x.divexact_int(k))
        det = c[0] if n % 2 == 0 else -c[0]
        if not det.is_unit():
            raise ArithmeticError(f"matrix is not invertible over {self.ring} (det={det})")
        # A^{-1} = -M_n / c_0
        scale = -(c[0].unit_inverse())
        return Matrix([[x * scale for x in r] for r in m_n], self.ring)

    def trace(self) -> RingElem:
        t = self.ring.zero()
        for i in range(self.n):
            t = t + self.rows[i][i]
        return t

    def transpose(self) -> Matrix:
        return Matrix([list(col) for col in zip(*self.rows)], self.ring)

    def key(self):
        if self._key is None:
            self._key = ("M", self.ring.name, self.n, tuple(to_string(x) for r in self.rows for x in r))
        return self._key

    def reduce_mod(self, m: int) -> ModMatrix:
        if self.ring.kind != "integers":
            raise ValueError("reduction mod m is only defined for integer matrices")
        return ModMatrix([[x.a % m for x in r] for r in self.rows], m)

    def to_json(self) -> list[list[str]]:
        return [[to_string(x) for x in r] for r in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(to_string(x) for x in r) for r in self.rows)
        return f"Matrix[{self.ring}]({body})"


class ModMatrix(_Elem):
    """Square matrix with entries in Z/m (entries stored reduced, in [0, m))."""

    __slots__ = ("rows", "n", "m")

    def __init__(self, rows: Sequence[Sequence[int]], m: int):
        if m < 2:
            raise ValueError("modulus must be at least 2")
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.m = m
        self.n = n
        self.rows = tuple(tuple(int(x) % m for x in r) for r in rows)

    @classmethod
    def identity_matrix(cls, n: int, m: int) -> ModMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], m)

    def shape_key(self):
        return (self.n, self.m)

    def identity(self) -> ModMatrix:
        return ModMatrix.identity_matrix(self.n, self.m)

    def is_identity(self) -> bool:
        return self.rows == self.identity().rows

    def __mul__(self, other):
        if not isinstance(other, ModMatrix):
            return NotImplemented
        _check_same(self, other)
        n, m = self.n, self.m
        b = other.rows
        return ModMatrix([[sum(r[k] * b[k][j] for k in range(n)) % m for j in range(n)] for r in self.rows], m)

    def det(self) -> int:
        rows = [[RingElem(x) for x in r] for r in self.rows]
        c, _ = _charpoly_adjugate(rows, self.n, ZZ.zero(), ZZ.one(), lambda x, k: x.divexact_int(k))
        d = c[0] if self.n % 2 == 0 else -c[0]
        return d.a % self.m

    def inverse(self) -> ModMatrix:
        n = self.n
        rows = [[RingElem(x) for x in r] for r in self.rows]
        c, m_n = _charpoly_adjugate(rows, n, ZZ.zero(), ZZ.one(), lambda x, k: x.divexact_int(k))
        # over Z: A^{-1} = -M_n / c_0, so adj(A) relates to -M_n and det = (-1)^n c_0
        c0 = c[0].a % self.m
        try:
            c0_inv = pow(c0, -1, self.m)
        except ValueError:
            raise ArithmeticError(f"matrix not invertible mod {self.m}") from None
        return ModMatrix([[(-x.a * c0_inv) for x in r] for r in m_n], self.m)

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n)) % self.m

    def key(self):
        return ("Z/m", self.m, self.n, tuple(x for r in self.rows for x in r))

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(map(str, r)) for r in self.rows)
        return f"ModMatrix[mod {self.m}]({body})"


# ---------------------------------------------------------------- permutations


class Perm(_Elem):
    """Permutation of {1..degree}; ``(g*h)(x) = g(h(x))``.

    ``images`` is stored 0-based internally.
    """

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(i) for i in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("images must be a bijection of {0..degree-1}")
        self.images = imgs

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> Perm:
        """Parse cycle notation such as ``"(1 2 3)(4 5)"`` (1-based points)."""
        imgs = list(range(degree))
        body = text.replace(",", " ").strip()
        if body in ("", "()"):
            return cls(imgs)
        for chunk in body.split(")"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if not chunk.startswith("("):
                raise ValueError(f"bad cycle notation {text!r}")
            pts = [int(p) - 1 for p in chunk[1:].split()]
            if any(not 0 <= p < degree for p in pts):
                raise ValueError(f"point out of range in {text!r}")
            for a, b in zip(pts, pts[1:] + pts[:1]):
                imgs[a] = b
        return cls(imgs)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def to_cycles(self) -> str:
        parts = ["(" + " ".join(str(p + 1) for p in c) + ")" for c in self.cycles() if len(c) > 1]
        return "".join(parts) or "()"

    def shape_key(self):
        return (self.degree,)

    def identity(self) -> Perm:
        return Perm(range(self.degree))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def __mul__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        _check_same(self, other)
        g = self.images
        return Perm([g[x] for x in other.images])

    def inverse(self) -> Perm:
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Perm(inv)

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles())) if self.degree else 1

    def key(self):
        return ("P", self.images)

    def __repr__(self):
        return f"Perm({self.to_cycles()}, degree={self.degree})"


# ---------------------------------------------------------------- free groups


def free_reduce(letters: Iterable[int], rank: int | None = None) -> tuple[int, ...]:
    """Freely reduce a word given as signed generator indices (``-i`` is the inverse of ``i``)."""
    out: list[int] = []
    for x in letters:
        if x == 0 or (rank is not None and abs(x) > rank):
            raise ValueError(f"generator index {x} out of range for rank {rank}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class FreeWord(_Elem):
    """Reduced word in the free group of the given rank."""

    __slots__ = ("rank", "letters")

    def __init__(self, letters: Iterable[int], rank: int = 2):
        self.rank = rank
        self.letters = free_reduce(letters, rank)

    @classmethod
    def parse(cls, text: str, rank: int = 2, alphabet: str = DEFAULT_ALPHABET) -> FreeWord:
        """Letters of ``alphabet`` are generators; their upper-case forms are inverses."""
        out = []
        for ch in text.strip():
            if ch in "1 ":
                continue
            i = alphabet.find(ch.lower())
            if i < 0 or i >= rank:
                raise ValueError(f"letter {ch!r} is not a generator of the rank-{rank} free group")
            out.append(i + 1 if ch.islower() else -(i + 1))
        return cls(out, rank)

    def to_string(self, alphabet: str = DEFAULT_ALPHABET) -> str:
        return "".join(alphabet[x - 1] if x > 0 else alphabet[-x - 1].upper() for x in self.letters)

    def __len__(self):
        return len(self.letters)

    def shape_key(self):
        return (self.rank,)

    def identity(self) -> FreeWord:
        return FreeWord((), self.rank)

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other):
        if not isinstance(other, FreeWord):
            return NotImplemented
        _check_same(self, other)
        return FreeWord(self.letters + other.letters, self.rank)

    def inverse(self) -> FreeWord:
        return FreeWord(tuple(-x for x in reversed(self.letters)), self.rank)

    def exponent_sums(self) -> tuple[int, ...]:
        sums = [0] * self.rank
        for x in self.letters:
            sums[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(sums)

    def cyclic_reduction(self) -> FreeWord:
        w = list(self.letters)
        while len(w) >= 2 and w[0] == -w[-1]:
            w = w[1:-1]
        return FreeWord(w, self.rank)

    def key(self):
        return ("F", self.rank, self.letters)

    def __repr__(self):
        return f"FreeWord({self.to_string() or '1'!r})"


def free_generators(rank: int) -> list[FreeWord]:
    return [FreeWord((i,), rank) for i in range(1, rank + 1)]


# ---------------------------------------------------------------- generic API


def multiply(g, h):
    _check_same(g, h)
    return g * h


def conjugate(g, h):
    """``h g h^{-1}``."""
    _check_same(g, h)
    return h * g * h.inverse()


def commutator(g, h):
    """``[g, h] = g h g^{-1} h^{-1}``."""
    _check_same(g, h)
    return g * h * g.inverse() * h.inverse()


def canonical_key(g):
    return g.key()


@dataclass(frozen=True)
class GeneratingSet:
    elements: tuple
    symmetric: bool = False

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.symmetric:
            keys = {g.key() for g in self.elements}
            if any(g.inverse().key() not in keys for g in self.elements):
                raise ValueError("generating set flagged symmetric but not closed under inversion")

    @classmethod
    def symmetrized(cls, elements: Iterable) -> GeneratingSet:
        out, seen = [], set()
        for g in elements:
            for x in (g, g.inverse()):
                if x.key() not in seen:
                    seen.add(x.key())
                    out.append(x)
        return cls(tuple(out), True)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)
