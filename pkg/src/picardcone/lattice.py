"""Exact arithmetic on the Picard lattice of a blowup of the plane at s points.

A class is stored as its degree ``d`` and multiplicities ``m_1..m_s`` and
stands for ``d*H - sum(m_i * E_i)``. Effective plane-curve classes therefore
have non-negative entries, while the exceptional class ``E_i`` itself has
``d = 0`` and ``m_i = -1``.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence, Union

from picardcone import linalg

Number = Union[int, Fraction]


def _exact(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"exact rational expected, got {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class ClassVector:
    """A point of N_s with exact rational coordinates."""

    s: int
    d: Fraction
    m: tuple[Fraction, ...]

    def __post_init__(self):
        if not isinstance(self.s, int) or self.s < 1:
            raise ValueError(f"s must be a positive integer, got {self.s!r}")
        object.__setattr__(self, "d", _exact(self.d))
        object.__setattr__(self, "m", tuple(_exact(x) for x in self.m))
        if len(self.m) != self.s:
            raise ValueError(f"expected {self.s} multiplicities, got {len(self.m)}")

    @classmethod
    def from_coords(cls, coords: Sequence[Number]) -> "ClassVector":
        """Build from ``(d, m_1, ..., m_s)``."""
        return cls(len(coords) - 1, coords[0], tuple(coords[1:]))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return (self.d,) + self.m

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.coords)

    def int_coords(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError(f"class is not integral: {self}")
        return tuple(int(x) for x in self.coords)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def _check(self, other: "ClassVector") -> None:
        if other.s != self.s:
            raise ValueError(f"dimension mismatch: s={self.s} vs s={other.s}")

    def __add__(self, other: "ClassVector") -> "ClassVector":
        if not isinstance(other, ClassVector):
            return NotImplemented
        self._check(other)
        return ClassVector(self.s, self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: "ClassVector") -> "ClassVector":
        if not isinstance(other, ClassVector):
            return NotImplemented
        self._check(other)
        return ClassVector(self.s, self.d - other.d, tuple(a - b for a, b in zip(self.m, other.m)))

    def __neg__(self) -> "ClassVector":
        return ClassVector(self.s, -self.d, tuple(-a for a in self.m))

    def __mul__(self, scalar: Number) -> "ClassVector":
        if isinstance(scalar, ClassVector):
            return NotImplemented
        c = _exact(scalar)
        return ClassVector(self.s, c * self.d, tuple(c * a for a in self.m))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"L{_fmt(self.d)}({','.join(_fmt(x) for x in self.m)})"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def of(cls, x) -> "Sign":
        return cls((x > 0) - (x < 0))


@dataclass(frozen=True)
class Ray:
    """Primitive integral representative of a rational ray.

    Normalized so that ``d > 0``, or, when ``d == 0``, the first non-zero
    multiplicity is negative (each ``E_i`` is its own representative).
    """

    rep: ClassVector

    def __post_init__(self):
        c = self.rep.coords
        if not self.rep.is_integral():
            raise ValueError("ray representative must be integral")
        g = 0
        for x in c:
            g = gcd(g, int(x))
        if g != 1:
            raise ValueError(f"ray representative must be primitive, content {g}")
        if not _normalized(c):
            raise ValueError("ray representative violates the sign normalization")

    @property
    def s(self) -> int:
        return self.rep.s

    @property
    def key(self) -> tuple[int, ...]:
        return self.rep.int_coords()

    def __str__(self) -> str:
        return f"<{self.rep}>"


def _normalized(coords: Sequence[Fraction]) -> bool:
    if coords[0] != 0:
        return coords[0] > 0
    first = next((x for x in coords[1:] if x != 0), None)
    return first is not None and first < 0


def plane_class(d: Number, *groups) -> ClassVector:
    """Class ``L_d(...)`` from multiplicities in exponent notation.

    Each group is either a single multiplicity or a ``(value, count)`` pair, so
    ``plane_class(3, (1, 9), 0)`` is L_3(1^9, 0) on ten points.
    """
    m: list[Number] = []
    for g in groups:
        if isinstance(g, tuple):
            value, count = g
            m.extend([value] * count)
        else:
            m.append(g)
    return ClassVector(len(m), d, tuple(m))


_GROUP = re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*(?:\^\s*(\d+))?\s*$")


def parse_class(text: str) -> ClassVector:
    """Parse compact notation such as ``L6(2^8,0,1^4)``."""
    match = re.fullmatch(r"\s*L\s*(-?\d+(?:/\d+)?)\s*\((.*)\)\s*", text)
    if not match:
        raise ValueError(f"cannot parse class {text!r}; expected e.g. L3(1^9,0)")
    groups = []
    for part in match.group(2).split(","):
        g = _GROUP.match(part)
        if not g:
            raise ValueError(f"bad multiplicity group {part!r} in {text!r}")
        value = Fraction(g.group(1))
        groups.append((value, int(g.group(2))) if g.group(2) else value)
    return plane_class(Fraction(match.group(1)), *groups)


def hyperplane(s: int) -> ClassVector:
    return ClassVector(s, 1, (0,) * s)


def exceptional(i: int, s: int) -> ClassVector:
    """The class E_i (1-based index)."""
    if not 1 <= i <= s:
        raise ValueError(f"index {i} out of range 1..{s}")
    m = [0] * s
    m[i - 1] = -1
    return ClassVector(s, 0, tuple(m))


def canonical_class(s: int) -> ClassVector:
    """K_s = -3H + sum E_i, i.e. d = -3 and every multiplicity -1."""
    return ClassVector(s, -3, (-1,) * s)


def anticanonical_nine(s: int, a: Number = 1) -> ClassVector:
    """The class a * L_3(1^9, 0^(s-9)), the pullback of -a*K_9."""
    if s < 9:
        raise ValueError("needs at least 9 points")
    return plane_class(3 * Fraction(a), (Fraction(a), 9), (0, s - 9))


def intersect(a: ClassVector, b: ClassVector) -> Fraction:
    """Intersection pairing d_A d_B - sum m_i(A) m_i(B)."""
    if a.s != b.s:
        raise ValueError(f"dimension mismatch: s={a.s} vs s={b.s}")
    return a.d * b.d - sum((x * y for x, y in zip(a.m, b.m)), Fraction(0))


def k_pairing(a: ClassVector) -> Fraction:
    """K_s . a, which equals sum(m_i) - 3d."""
    return sum(a.m, Fraction(0)) - 3 * a.d


def de_fernex_sign(L: ClassVector) -> Sign:
    """Sign of sqrt(s-1)*d - sum(m_i), decided without irrational arithmetic."""
    if L.s < 2:
        raise ValueError("de Fernex sign needs s >= 2")
    d = L.d
    t = sum(L.m, Fraction(0))
    # value = sqrt(s-1)*d + (-t); both terms share a sign unless they oppose
    if d == 0 and t == 0:
        return Sign.ZERO
    if d >= 0 and t <= 0:
        return Sign.POSITIVE
    if d <= 0 and t >= 0:
        return Sign.NEGATIVE
    diff = Sign.of((L.s - 1) * d * d - t * t)
    return diff if d > 0 else Sign(-diff)


class Signature(NamedTuple):
    positive: int
    negative: int
    radical: int


def gram_matrix(basis: Sequence[ClassVector]) -> list[list[Fraction]]:
    return [[intersect(a, b) for b in basis] for a in basis]


def subspace_signature(basis: Sequence[ClassVector]) -> Signature:
    """Inertia of the intersection form restricted to span(basis)."""
    return Signature(*linalg.inertia(gram_matrix(basis)))


def kperp_basis(s: int) -> list[ClassVector]:
    """An exact basis of the hyperplane K_s^perp."""
    k = canonical_class(s)
    # row of the linear functional x -> K.x in coordinates (d, m_1..m_s)
    row = [k.d] + [-x for x in k.m]
    return [ClassVector.from_coords(v) for v in linalg.nullspace([row])]


def kperp_signature(s: int) -> Signature:
    """Signature of the intersection form on K_s^perp, with radical dimension."""
    if s < 1:
        raise ValueError("s must be positive")
    return subspace_signature(kperp_basis(s))


def to_ray(L: ClassVector) -> Ray:
    if L.is_zero():
        raise ValueError("the zero class spans no ray")
    ints = linalg.primitive_integral(L.coords)
    if not _normalized(ints):
        ints = [-x for x in ints]
    return Ray(ClassVector.from_coords(ints))


def class_sum(classes: Iterable[ClassVector], s: int) -> ClassVector:
    total = ClassVector(s, 0, (0,) * s)
    for c in classes:
        total = total + c
    return total


# JSON encoding shared by every module and the CLI

def encode_number(x: Fraction) -> str:
    return _fmt(Fraction(x))


def decode_number(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ValueError(f"exact number expected, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ValueError(f"cannot decode number {x!r}")


def class_to_json(L: ClassVector) -> dict:
    return {"s": L.s, "d": encode_number(L.d), "m": [encode_number(x) for x in L.m]}


def class_from_json(obj: dict) -> ClassVector:
    try:
        return ClassVector(int(obj["s"]), decode_number(obj["d"]), tuple(decode_number(x) for x in obj["m"]))
    except KeyError as exc:
        raise ValueError(f"class JSON is missing field {exc}") from None


def pullback(L: ClassVector, s: int) -> ClassVector:
    """Pull back along the blowup of s - L.s further points (zero multiplicities)."""
    if s < L.s:
        raise ValueError(f"cannot pull back from s={L.s} to s={s}")
    return ClassVector(s, L.d, L.m + (Fraction(0),) * (s - L.s))
