"""Conjugate-word certificates for bi-invariant norms on SL(n) over Z, Z[sqrt 2], Z[i].

A root element ``x_ij(t)`` with ``n >= 3`` is a commutator
``[x_ik(t), x_kj(1)] = (x_ik(t) x_kj(1) x_ik(t)^{-1}) x_kj(-1)``, i.e. a product
of two conjugates of elements of the generating set ``S = {x_ij(+-rho)}``.
Its norm with respect to the conjugation closure of ``S`` is therefore at
most 2, whatever ``t`` is.  A certificate records these conjugates letter by
letter so an independent checker (:mod:`binorm.verify`) can multiply them out.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .chevalley import elementary
from .factorize import ElementaryFactor, Factorization, factorize_bounded
from .groups import GeneratingSet, Matrix, ModMatrix
from .rings import ZZ, RingDescriptor, RingElem, assemble, decompose_over_basis, parse, ring_by_name, to_string


@dataclass(frozen=True)
class RootGeneratingSet:
    """The finite set ``S`` of root elements ``x_ij(t)`` used by certificates.

    ``labels[k] = (i, j, t)`` (1-based) and ``matrices[k]`` is the explicit
    matrix; the verifier only ever looks at the matrices.
    """

    n: int
    ring: RingDescriptor
    labels: tuple
    matrices: tuple
    superdiagonal: bool = False

    def index(self, i: int, j: int, t: RingElem) -> int:
        try:
            return self._lookup[(i, j, to_string(t))]
        except KeyError:
            raise KeyError(f"x_{i}{j}({to_string(t)}) is not in the generating set") from None

    @property
    def _lookup(self) -> dict:
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = {(i, j, to_string(t)): k for k, (i, j, t) in enumerate(self.labels)}
            object.__setattr__(self, "_cache", cache)
        return cache

    def __len__(self):
        return len(self.labels)

    def as_generating_set(self) -> GeneratingSet:
        return GeneratingSet(self.matrices, symmetric=True)


def default_generating_set(n: int, ring: RingDescriptor, superdiagonal: bool = False) -> RootGeneratingSet:
    """``{x_ij(+-rho) : rho in the ring basis}`` for all positions, or only ``j = i + 1``."""
    if n < 2:
        raise ValueError("need n >= 2")
    positions = [(i, i + 1) for i in range(1, n)] if superdiagonal else [
        (i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j
    ]
    labels, mats = [], []
    for i, j in positions:
        for rho in ring.basis():
            for t in (rho, -rho):
                labels.append((i, j, t))
                mats.append(elementary("A", n, (i, j), t, ring))
    return RootGeneratingSet(n, ring, tuple(labels), tuple(mats), superdiagonal)


@dataclass
class Letter:
    """``conjugator * S[gen_index]^sign * conjugator^{-1}``."""

    conjugator: Matrix | ModMatrix
    gen_index: int
    sign: int = 1


@dataclass
class Certificate:
    target: Matrix | ModMatrix
    letters: list[Letter]
    generating_set: RootGeneratingSet | ReducedGeneratingSet
    claimed_norm_bound: int
    # running products after each letter block; lets the verifier localize errors
    checkpoints: list[tuple[int, Matrix | ModMatrix]] = field(default_factory=list)
    factors_used: int = 0
    note: str = ""

    @property
    def length(self) -> int:
        return len(self.letters)


# -- rewriting single root elements -----------------------------------------


def _third_index(i: int, j: int, n: int) -> int:
    return min(k for k in range(1, n + 1) if k not in (i, j))


def _position_conjugator(k: int, j: int, n: int, ring: RingDescriptor) -> Matrix:
    """Signed permutation ``P`` in SL(n) with ``P x_12(s) P^{-1} = x_kj(s)``."""
    order = [k, j] + [r for r in range(1, n + 1) if r not in (k, j)]
    cols = [[0] * n for _ in range(n)]
    for c, r in enumerate(order):
        cols[r - 1][c] = 1
    P = Matrix(cols, ring)
    if P.det() != ring.one():
        cols[order[-1] - 1][n - 1] = -1
        P = Matrix(cols, ring)
    return P


def elementary_to_conjugate_word(f: ElementaryFactor, S: RootGeneratingSet) -> list[Letter]:
    """Two letters whose product is ``x_ij(t)``; empty when ``t = 0``."""
    if f.family != "A":
        raise ValueError("certificates are only produced for type A")
    n = f.n
    if n < 3:
        raise ValueError("a third index is needed: n must be at least 3")
    if not f.t:
        return []
    i, j = f.root
    ring = f.t.ring
    k = _third_index(i, j, n)
    one = ring.one()
    outer = elementary("A", n, (i, k), f.t, ring)
    if S.superdiagonal:
        P = _position_conjugator(k, j, n, ring)
        letters = [Letter(outer * P, S.index(1, 2, one)), Letter(P, S.index(1, 2, -one))]
    else:
        letters = [Letter(outer, S.index(k, j, one)), Letter(Matrix.identity_matrix(n, ring), S.index(k, j, -one))]
    if _word_product(letters, S) != f.matrix():
        raise ArithmeticError("conjugate word does not reproduce the root element")
    return letters


def _letter_matrix(letter: Letter, S) -> Matrix:
    s = S.matrices[letter.gen_index]
    if letter.sign < 0:
        s = s.inverse()
    return letter.conjugator * s * letter.conjugator.inverse()


def _word_product(letters: list[Letter], S) -> Matrix:
    out = S.matrices[0].identity()
    for letter in letters:
        out = out * _letter_matrix(letter, S)
    return out


# -- certificates -------------------------------------------------------------


def certificate_from_factors(target: Matrix, factors: list[ElementaryFactor], S: RootGeneratingSet, note: str = "") -> Certificate:
    letters: list[Letter] = []
    checkpoints = []
    running = target.identity()
    for f in factors:
        word = elementary_to_conjugate_word(f, S)
        if not word:
            continue
        letters.extend(word)
        running = running * f.matrix()
        checkpoints.append((len(letters), running))
    if running != target:
        raise ArithmeticError("factors do not multiply to the target")
    return Certificate(target, letters, S, len(letters), checkpoints, len(factors), note)


def binorm_certificate(A: Matrix, S: RootGeneratingSet | None = None) -> Certificate:
    """Certificate of ``|A|`` w.r.t. the conjugation closure of ``S``, via :func:`factorize_bounded`."""
    if S is None:
        S = default_generating_set(A.n, A.ring)
    if S.n != A.n or S.ring != A.ring:
        raise ValueError("generating set does not match the matrix")
    fac = factorize_bounded(A)
    return certificate_from_factors(A, fac.factors, S, note=_describe(fac))


def _describe(fac: Factorization) -> str:
    head = len(fac.factors) - fac.tail
    text = f"{fac.mode}: {head} stable-range factors (bound {fac.bound}), {fac.tail} in the SL(2) tail"
    return text + (", search cap hit" if fac.fell_back else "")


def decompose_power_as_basis_word(root: tuple, r: RingElem, k: int, S: RootGeneratingSet, route: str = "basis") -> Certificate:
    """Certificate for ``x_root(r)^k = x_root(k r)``.

    ``route="basis"`` splits ``k r`` into its coordinates on the ring basis
    and rewrites each piece separately (at most 2 letters per basis element);
    ``route="direct"`` rewrites ``x_root(k r)`` in one go (2 letters).
    """
    n, ring = S.n, S.ring
    total = r * k
    target = elementary("A", n, root, total, ring)
    if route == "direct":
        factors = [ElementaryFactor("A", n, root, total)]
    elif route == "basis":
        coeffs = decompose_over_basis(total)
        factors = []
        for idx, c in enumerate(coeffs):
            piece = [0] * ring.rank
            piece[idx] = c
            if c:
                factors.append(ElementaryFactor("A", n, root, assemble(piece, ring)))
    else:
        raise ValueError(f"unknown route {route!r}")
    return certificate_from_factors(target, factors, S, note=f"power route {route}")


def power_word_routes(root: tuple, r: RingElem, k: int, S: RootGeneratingSet) -> dict[str, Certificate]:
    return {route: decompose_power_as_basis_word(root, r, k, S, route) for route in ("basis", "direct")}


# -- reduction modulo m -----------------------------------------------------


@dataclass(frozen=True)
class ReducedGeneratingSet:
    n: int
    m: int
    labels: tuple
    matrices: tuple

    def __len__(self):
        return len(self.labels)

    def as_generating_set(self) -> GeneratingSet:
        return GeneratingSet.symmetrized(self.matrices)


def reduce_certificate(cert: Certificate, m: int) -> Certificate:
    """The image of an integer certificate in SL(n, Z/m); still valid there."""
    S = cert.generating_set
    if not isinstance(S, RootGeneratingSet) or S.ring.kind != "integers":
        raise ValueError("only certificates over Z can be reduced")
    RS = ReducedGeneratingSet(S.n, m, S.labels, tuple(g.reduce_mod(m) for g in S.matrices))
    letters = [Letter(x.conjugator.reduce_mod(m), x.gen_index, x.sign) for x in cert.letters]
    checkpoints = [(p, M.reduce_mod(m)) for p, M in cert.checkpoints]
    return Certificate(cert.target.reduce_mod(m), letters, RS, cert.claimed_norm_bound, checkpoints, cert.factors_used, cert.note)


def lift_from_factors(factors: list[ElementaryFactor]) -> Matrix:
    out = factors[0].matrix().identity()
    for f in factors:
        out = out * f.matrix()
    return out


def _mod_p_ops(g: ModMatrix) -> list[tuple[int, int, int]]:
    """Row operations ``(i, j, t)`` (row i += t * row j, 0-based) taking ``g`` to 1 over Z/p.

    At most two operations make each pivot 1 and ``n - 1`` clear its column,
    so an SL(3) matrix needs at most 10.
    """
    p, n = g.m, g.n
    rows = [[x % p for x in r] for r in g.rows]
    ops = []

    def op(i, j, t):
        t %= p
        if t:
            rows[i] = [(a + t * b) % p for a, b in zip(rows[i], rows[j])]
            ops.append((i, j, t))

    for c in range(n):
        if rows[c][c] != 1:
            below = [r for r in range(c + 1, n) if rows[r][c]]
            if below:
                r = below[0]
                op(c, r, (1 - rows[c][c]) * pow(rows[r][c], -1, p))
            elif rows[c][c] and c + 1 < n:
                op(c + 1, c, 1)
                op(c, c + 1, (1 - rows[c][c]) * pow(rows[c + 1][c], -1, p))
            else:
                raise ValueError("matrix is not in SL(n, Z/p)")
        for r in range(n):
            if r != c:
                op(r, c, -rows[r][c])
    if any(rows[r][c] != (1 if r == c else 0) for r in range(n) for c in range(n)):
        raise ArithmeticError("elimination modulo p did not reach the identity")
    return ops


def _mod_p_factors(g: ModMatrix) -> list[tuple[int, int, int]]:
    """``(i, j, s)`` (1-based, ``0 < s < p``) with ``g = prod x_ij(s)`` over Z/p."""
    p = g.m
    return [(i + 1, j + 1, (-t) % p) for i, j, t in _mod_p_ops(g)]


def lift_mod_matrix(g: ModMatrix) -> Matrix:
    """An integer matrix of determinant 1 reducing to ``g`` (``m`` prime).

    Gaussian elimination over the field Z/p writes ``g`` as a product of
    root elements with parameters in ``[0, p)``; the same product over Z is
    the lift.
    """
    factors = [ElementaryFactor("A", g.n, (i, j), ZZ(s)) for i, j, s in _mod_p_factors(g)]
    return lift_from_factors(factors) if factors else Matrix.identity_matrix(g.n, ZZ)


def modular_certificate(g: ModMatrix) -> Certificate:
    """Integer certificate whose reduction modulo ``p = g.m`` (prime) is a certificate for ``g``.

    Over Z/p every ``x_ij(s)`` with ``s != 0`` is the conjugate of ``x_ij(1)``
    by ``diag`` with ``s`` in slot ``i``, ``1/s`` in a third slot ``k`` and 1
    elsewhere.  Lifting each such diagonal matrix to SL(n, Z) gives an
    integer letter ``C x_ij(1) C^{-1}`` per factor of a mod-p elimination,
    so the certificate has one letter per factor (at most 10 for n = 3).
    The integer target is the exact product of the letters, which reduces
    to ``g``.
    """
    p, n = g.m, g.n
    if n < 3:
        raise ValueError("a third index is needed: n must be at least 3")
    S = default_generating_set(n, ZZ)
    one = ZZ.one()
    letters, checkpoints = [], []
    running = Matrix.identity_matrix(n, ZZ)
    for i, j, s in _mod_p_factors(g):
        if s == p - 1:
            letter = Letter(Matrix.identity_matrix(n, ZZ), S.index(i, j, -one))
        else:
            k = _third_index(i, j, n)
            diag = [[0] * n for _ in range(n)]
            for r in range(n):
                diag[r][r] = 1
            diag[i - 1][i - 1] = s
            diag[k - 1][k - 1] = pow(s, -1, p)
            letter = Letter(lift_mod_matrix(ModMatrix(diag, p)), S.index(i, j, one))
        letters.append(letter)
        running = running * _letter_matrix(letter, S)
        checkpoints.append((len(letters), running))
    return Certificate(running, letters, S, len(letters), checkpoints, len(letters), note=f"lifted from Z/{p}")


# -- JSON ---------------------------------------------------------------------


def _matrix_json(M) -> list[list[str]]:
    return M.to_json()


def certificate_to_json(cert: Certificate) -> dict:
    S = cert.generating_set
    if isinstance(S, ReducedGeneratingSet):
        ring = {"name": f"Z/{S.m}", "modulus": str(S.m)}
    else:
        ring = S.ring.to_json()
    return {
        "target": _matrix_json(cert.target),
        "ring": ring,
        "n": str(S.n),
        "S": [_matrix_json(g) for g in S.matrices],
        "S_labels": [[str(i), str(j), to_string(t) if isinstance(t, RingElem) else str(t)] for i, j, t in S.labels],
        "superdiagonal": bool(getattr(S, "superdiagonal", False)),
        "letters": [{"conjugator": _matrix_json(x.conjugator), "gen_index": str(x.gen_index), "sign": str(x.sign)} for x in cert.letters],
        "checkpoints": [{"after": str(p), "product": _matrix_json(M)} for p, M in cert.checkpoints],
        "bound": str(cert.claimed_norm_bound),
        "factors_used": str(cert.factors_used),
        "note": cert.note,
    }


def certificate_from_json(data: dict) -> Certificate:
    """Parse a certificate; structural problems in letters are kept for the verifier to report."""
    ring_data = data["ring"]
    n = int(data["n"])
    if "modulus" in ring_data:
        m = int(ring_data["modulus"])

        def mat(rows):
            return ModMatrix([[int(x) for x in r] for r in rows], m)

        labels = tuple((int(i), int(j), int(t)) for i, j, t in data.get("S_labels", []))
        S = ReducedGeneratingSet(n, m, labels, tuple(mat(g) for g in data["S"]))
    else:
        ring = RingDescriptor.from_json(ring_data) if isinstance(ring_data, dict) else ring_by_name(ring_data)

        def mat(rows):
            return Matrix([[parse(x, ring) for x in r] for r in rows], ring)

        labels = tuple((int(i), int(j), parse(t, ring)) for i, j, t in data.get("S_labels", []))
        S = RootGeneratingSet(n, ring, labels, tuple(mat(g) for g in data["S"]), bool(data.get("superdiagonal", False)))
    letters = [Letter(mat(x["conjugator"]), int(x["gen_index"]), int(x["sign"])) for x in data["letters"]]
    checkpoints = [(int(c["after"]), mat(c["product"])) for c in data.get("checkpoints", [])]
    return Certificate(
        mat(data["target"]), letters, S, int(data["bound"]), checkpoints, int(data.get("factors_used", 0)), data.get("note", "")
    )


def dump_certificate(cert: Certificate, path: str):
    with open(path, "w") as fh:
        json.dump(certificate_to_json(cert), fh, indent=1)


def load_certificate(path: str) -> Certificate:
    with open(path) as fh:
        return certificate_from_json(json.load(fh))


__all__ = [
    "Certificate",
    "Letter",
    "ReducedGeneratingSet",
    "RootGeneratingSet",
    "binorm_certificate",
    "certificate_from_factors",
    "certificate_from_json",
    "certificate_to_json",
    "decompose_power_as_basis_word",
    "default_generating_set",
    "elementary_to_conjugate_word",
    "lift_mod_matrix",
    "modular_certificate",
    "power_word_routes",
    "reduce_certificate",
]
