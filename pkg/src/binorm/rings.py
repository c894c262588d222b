"""Exact arithmetic in the integers and the quadratic rings Z[sqrt 2], Z[i].

Elements are stored as a pair of Python integers ``(a, b)`` standing for
``a + b*w`` where ``w = sqrt(d)``.  For the plain integers ``b`` is always 0.
Python ints are arbitrary precision, so nothing here can overflow.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

SUPPORTED_D = (2, -1)


@dataclass(frozen=True)
class RingDescriptor:
    kind: str
    d: int | None = None

    def __post_init__(self):
        if self.kind == "integers":
            if self.d is not None:
                raise ValueError("the integer ring takes no d")
        elif self.kind == "quadratic":
            if self.d not in SUPPORTED_D:
                raise ValueError(f"unsupported quadratic ring d={self.d}; supported: {SUPPORTED_D}")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @property
    def rank(self) -> int:
        return 1 if self.kind == "integers" else 2

    @property
    def basis_labels(self) -> tuple[str, ...]:
        return ("1",) if self.kind == "integers" else ("1", "w")

    def basis(self) -> list[RingElem]:
        """The Z-basis (1,) or (1, w) as ring elements."""
        if self.kind == "integers":
            return [RingElem(1, 0, self)]
        return [RingElem(1, 0, self), RingElem(0, 1, self)]

    def __call__(self, a: int = 0, b: int = 0) -> RingElem:
        return RingElem(a, b, self)

    def zero(self) -> RingElem:
        return RingElem(0, 0, self)

    def one(self) -> RingElem:
        return RingElem(1, 0, self)

    @property
    def name(self) -> str:
        if self.kind == "integers":
            return "Z"
        return "Zsqrt2" if self.d == 2 else "Zi"

    def to_json(self) -> dict:
        return {"kind": self.kind, "d": self.d}

    @classmethod
    def from_json(cls, data: dict) -> RingDescriptor:
        return cls(data["kind"], data.get("d"))

    def __repr__(self):
        return self.name


ZZ = RingDescriptor("integers")
ZSQRT2 = RingDescriptor("quadratic", 2)
ZI = RingDescriptor("quadratic", -1)

_BY_NAME = {"Z": ZZ, "Zsqrt2": ZSQRT2, "Zi": ZI}


def ring_by_name(name: str) -> RingDescriptor:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown ring {name!r}; expected one of {sorted(_BY_NAME)}") from None


class RingElem:
    """An element ``a + b*w`` of Z, Z[sqrt 2] or Z[i]."""

    __slots__ = ("a", "b", "ring")

    def __init__(self, a: int, b: int = 0, ring: RingDescriptor = ZZ):
        if ring.kind == "integers" and b:
            raise ValueError("integer ring elements have no w-coefficient")
        self.a = int(a)
        self.b = int(b)
        self.ring = ring

    def _coerce(self, other) -> RingElem:
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise TypeError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return RingElem(other, 0, self.ring)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElem(self.a + o.a, self.b + o.b, self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElem(self.a - o.a, self.b - o.b, self.ring)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return RingElem(-self.a, -self.b, self.ring)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.ring.kind == "integers":
            return RingElem(self.a * o.a, 0, self.ring)
        d = self.ring.d
        return RingElem(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, RingElem):
            return self.ring == other.ring and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.ring.d))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"RingElem({to_string(self)!r}, {self.ring})"

    def __str__(self):
        return to_string(self)

    def conj(self) -> RingElem:
        return RingElem(self.a, -self.b, self.ring)

    def is_unit(self) -> bool:
        return abs(field_norm(self)) == 1

    def unit_inverse(self) -> RingElem:
        n = field_norm(self)
        if abs(n) != 1:
            raise ZeroDivisionError(f"{self} is not a unit")
        c = self.conj()
        return RingElem(c.a * n, c.b * n, self.ring)

    def divexact_int(self, k: int) -> RingElem:
        if self.a % k or self.b % k:
            raise ArithmeticError(f"{self} not divisible by {k}")
        return RingElem(self.a // k, self.b // k, self.ring)

    def divexact(self, other) -> RingElem:
        q, r = euclidean_divide(self, self._coerce(other))
        if r:
            raise ArithmeticError(f"{self} not divisible by {other}")
        return q


def field_norm(x: RingElem) -> int:
    """``a^2 - d b^2`` for quadratic rings, ``|a|`` on Z; multiplicative up to sign on Z."""
    if x.ring.kind == "integers":
        return abs(x.a)
    return x.a * x.a - x.ring.d * x.b * x.b


def _round_half_toward_zero(p: int, q: int) -> int:
    # nearest integer to p/q (q > 0), ties toward zero
    fl, rem = divmod(p, q)
    twice = 2 * rem
    if twice > q:
        return fl + 1
    if twice < q:
        return fl
    return fl if fl >= 0 else fl + 1


def euclidean_divide(x: RingElem, y: RingElem) -> tuple[RingElem, RingElem]:
    """Return ``(q, r)`` with ``x = q*y + r`` and ``|N(r)| < |N(y)|``."""
    if x.ring != y.ring:
        raise TypeError(f"ring mismatch: {x.ring} vs {y.ring}")
    ring = x.ring
    if ring.kind == "quadratic" and ring.d not in SUPPORTED_D:
        raise ValueError(f"{ring} is not norm-Euclidean here")
    if not y:
        raise ZeroDivisionError("division by zero ring element")
    if ring.kind == "integers":
        qa = _round_half_toward_zero(x.a, y.a) if y.a > 0 else _round_half_toward_zero(-x.a, -y.a)
        q = RingElem(qa, 0, ring)
    else:
        # x / y = x * conj(y) / N(y)
        num = x * y.conj()
        n = field_norm(y)
        if n < 0:
            num, n = -num, -n
        q = RingElem(_round_half_toward_zero(num.a, n), _round_half_toward_zero(num.b, n), ring)
    r = x - q * y
    return q, r


def ring_gcd(x: RingElem, y: RingElem) -> RingElem:
    while y:
        _, r = euclidean_divide(x, y)
        x, y = y, r
    return x


def content(values: Iterable[RingElem], ring: RingDescriptor) -> RingElem:
    g = ring.zero()
    for v in values:
        g = ring_gcd(g, v) if v else g
    return g


def decompose_over_basis(x: RingElem) -> list[int]:
    """Coordinates of ``x`` in the basis (1,) or (1, w)."""
    if x.ring.kind == "integers":
        return [x.a]
    return [x.a, x.b]


def assemble(coeffs: Sequence[int], ring: RingDescriptor) -> RingElem:
    if len(coeffs) != ring.rank:
        raise ValueError(f"{ring} needs {ring.rank} coefficients, got {len(coeffs)}")
    return RingElem(coeffs[0], coeffs[1] if ring.rank == 2 else 0, ring)


def to_string(x: RingElem) -> str:
    if x.ring.kind == "integers" or x.b == 0:
        return str(x.a)
    sign = "-" if x.b < 0 else "+"
    return f"{x.a}{sign}{abs(x.b)}*w"


_ELEM_RE = re.compile(r"^([+-]?\d+)?(?:([+-]?)(\d*)\*?w)?$")


def parse(text: str | int, ring: RingDescriptor) -> RingElem:
    """Inverse of :func:`to_string`; also accepts ``"w"``, ``"-3*w"``, ``"2-w"``."""
    if isinstance(text, int):
        return RingElem(text, 0, ring)
    s = text.replace(" ", "")
    m = _ELEM_RE.match(s)
    if not s or m is None:
        raise ValueError(f"cannot parse ring element {text!r}")
    a_txt, sign, b_txt = m.groups()
    has_w = s.endswith("w")
    if has_w and ring.kind == "integers":
        raise ValueError(f"{text!r} has a w-term but the ring is Z")
    if has_w and a_txt is not None and not sign:
        # "3w" would be ambiguous with "3+w"; only "3*w" form is meaningful
        if "*" in s:
            b_txt, a_txt, sign = a_txt, None, ""
        else:
            raise ValueError(f"cannot parse ring element {text!r}")
    a = int(a_txt) if a_txt is not None else 0
    b = 0
    if has_w:
        b = int(b_txt) if b_txt else 1
        if sign == "-":
            b = -b
    return RingElem(a, b, ring)
