"""Brooks counting quasimorphisms on free groups and the lower bounds they give.

For a reduced pattern ``w`` the Brooks function ``q_w(g)`` counts
(overlapping) occurrences of ``w`` in the reduced word ``g`` minus those of
``w^{-1}``.  If ``|q(g) - q(gh) + q(h)| <= D`` for all ``g, h`` then for every
``g`` in the group

    |q(g)| <= (3D + mu) |g|

where ``|.|`` is the word norm w.r.t. the conjugation closure of ``S`` and
``mu = max |q(s)|`` over ``s`` in ``S``.  Dividing by ``3D + mu`` therefore
turns a quasimorphism value into a lower bound on a bi-invariant norm.

Defects are never guessed.  A single-letter pattern is a homomorphism
(``D = 0``) and its bounds are unconditional; otherwise the caller supplies
``D`` and every bound is marked conditional on it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .groups import FreeWord, free_generators


@dataclass(frozen=True)
class BrooksQM:
    w: FreeWord
    defect_bound: Fraction | None = None

    def __post_init__(self):
        if self.w.is_identity():
            raise ValueError("the counting pattern must be a nonempty reduced word")
        if self.defect_bound is not None:
            if self.defect_bound < 0:
                raise ValueError("defect bound must be non-negative")
            object.__setattr__(self, "defect_bound", Fraction(self.defect_bound))

    @classmethod
    def parse(cls, pattern: str, rank: int = 2, defect_bound=None) -> BrooksQM:
        return cls(FreeWord.parse(pattern, rank), None if defect_bound is None else Fraction(defect_bound))

    @property
    def is_homomorphism(self) -> bool:
        return len(self.w) == 1

    def __call__(self, g: FreeWord) -> int:
        return evaluate(self, g)


def brooks_count(w: FreeWord, g: FreeWord) -> int:
    """Number of (possibly overlapping) occurrences of ``w`` as a subword of ``g``."""
    if w.is_identity():
        raise ValueError("empty pattern")
    p, s = w.letters, g.letters
    k = len(p)
    return sum(1 for i in range(len(s) - k + 1) if s[i : i + k] == p)


def evaluate(q: BrooksQM, g: FreeWord) -> int:
    return brooks_count(q.w, g) - brooks_count(q.w.inverse(), g)


def _random_reduced(rng: random.Random, rank: int, max_len: int) -> FreeWord:
    length = rng.randint(0, max_len)
    letters: list[int] = []
    choices = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    while len(letters) < length:
        x = rng.choice(choices)
        if not letters or letters[-1] != -x:
            letters.append(x)
    return FreeWord(letters, rank)


def defect_at(q: BrooksQM, g: FreeWord, h: FreeWord) -> int:
    return abs(evaluate(q, g) - evaluate(q, g * h) + evaluate(q, h))


def empirical_defect(q: BrooksQM, samples: int, max_len: int, seed: int = 0) -> Fraction:
    """Largest ``|q(g) - q(gh) + q(h)|`` over sampled pairs: a lower estimate of the defect.

    Pairs are drawn with ``random.Random(seed)`` (Mersenne Twister), so the
    estimate is reproducible from the seed alone.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    rank = q.w.rank
    best = 0
    for _ in range(samples):
        g = _random_reduced(rng, rank, max_len)
        h = _random_reduced(rng, rank, max_len)
        best = max(best, defect_at(q, g, h))
    return Fraction(best)


def _resolve_defect(q: BrooksQM, D) -> Fraction:
    if D is not None:
        return Fraction(D)
    if q.is_homomorphism:
        return Fraction(0)
    if q.defect_bound is not None:
        return q.defect_bound
    raise ValueError("a defect bound D is required for a pattern longer than one letter")


def power(g: FreeWord, N: int) -> FreeWord:
    """``g^N`` for ``N >= 0``, written down directly as ``u c^N u^-1`` with ``c`` cyclically reduced."""
    if N < 0:
        raise ValueError("N must be non-negative")
    w = g.letters
    k = 0
    while 2 * k + 1 < len(w) and w[k] == -w[-1 - k]:
        k += 1
    if N == 0 or not w:
        return g.identity()
    core = w[k : len(w) - k]
    return FreeWord(w[:k] + core * N + w[len(w) - k :], g.rank)


def homogenize(q: BrooksQM, g: FreeWord, N: int = 64, D=None, precision=None) -> tuple[Fraction, Fraction]:
    """``(q(g^N)/N, D/N)``: the homogenization of ``q`` at ``g`` lies within the radius of the value.

    With ``precision`` set, ``N`` runs through 1, 2, 4, ... and stops at the
    first power whose radius ``D/N`` is at most ``precision`` (never beyond
    the given ``N``).
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    D = _resolve_defect(q, D)
    if precision is not None:
        k = 1
        while k < N and D / k > Fraction(precision):
            k *= 2
        N = min(k, N)
    return Fraction(evaluate(q, power(g, N)), N), D / N


def _mu(q: BrooksQM, S: Iterable[FreeWord]) -> Fraction:
    return Fraction(max((abs(evaluate(q, s)) for s in S), default=0))


def _default_S(rank: int) -> list[FreeWord]:
    gens = free_generators(rank)
    return gens + [x.inverse() for x in gens]


@dataclass
class LowerBoundReport:
    g: FreeWord
    q_value: Fraction
    D_used: Fraction
    mu: Fraction
    bound: Fraction | None  # |q(g)| / (3D + mu); None when impossible
    homogeneous: bool
    conditional: bool  # True unless q is a homomorphism used with D = 0
    impossible: bool = False  # 3D + mu = 0 but q(g) != 0: the supplied D cannot be a defect bound

    def as_dict(self) -> dict:
        return {
            "g": self.g.to_string() or "1",
            "q_value": str(self.q_value),
            "D": str(self.D_used),
            "mu": str(self.mu),
            "bound": None if self.bound is None else str(self.bound),
            "homogeneous": self.homogeneous,
            "conditional": self.conditional,
            "impossible": self.impossible,
        }


def binorm_lower_bound(q: BrooksQM, g: FreeWord, S: Iterable[FreeWord] | None = None, D=None) -> LowerBoundReport:
    """``|q(g)| / (3D + mu)``, a lower bound on the norm of ``g`` w.r.t. the conjugation closure of ``S``."""
    S = _default_S(g.rank) if S is None else list(S)
    D = _resolve_defect(q, D)
    mu = _mu(q, S)
    value = Fraction(evaluate(q, g))
    denom = 3 * D + mu
    conditional = not (q.is_homomorphism and D == 0)
    if denom == 0:
        if value:
            return LowerBoundReport(g, value, D, mu, None, q.is_homomorphism, conditional, impossible=True)
        return LowerBoundReport(g, value, D, mu, Fraction(0), q.is_homomorphism, conditional)
    return LowerBoundReport(g, value, D, mu, abs(value) / denom, q.is_homomorphism, conditional)


@dataclass
class UndistortedReport:
    g: FreeWord
    value: Fraction  # q(g^N) / N
    error: Fraction  # D / N
    D_used: Fraction
    mu: Fraction
    N: int
    tau_lower: Fraction | None
    status: str  # "certified" or "inconclusive"
    conditional: bool

    def as_dict(self) -> dict:
        return {
            "g": self.g.to_string() or "1",
            "value": str(self.value),
            "error": str(self.error),
            "D": str(self.D_used),
            "mu": str(self.mu),
            "N": self.N,
            "tau_lower": None if self.tau_lower is None else str(self.tau_lower),
            "status": self.status,
            "conditional": self.conditional,
        }


def undistorted_certificate(q: BrooksQM, g: FreeWord, S: Iterable[FreeWord] | None = None, D=None, N: int = 64) -> UndistortedReport:
    """Lower bound on the translation length of ``g`` from the homogenization of ``q``."""
    S = _default_S(g.rank) if S is None else list(S)
    D = _resolve_defect(q, D)
    value, err = homogenize(q, g, N, D)
    mu = _mu(q, S)
    denom = 3 * D + mu
    conditional = not (q.is_homomorphism and D == 0)
    margin = abs(value) - err
    if margin > 0 and denom > 0:
        return UndistortedReport(g, value, err, D, mu, N, margin / denom, "certified", conditional)
    return UndistortedReport(g, value, err, D, mu, N, None, "inconclusive", conditional)
