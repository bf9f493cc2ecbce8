"""Generators and brackets of the Schrödinger-Virasoro algebra.

The algebra has basis ``L_n, M_n, Y_{n+1/2}`` (n an integer) with

    [L_m, L_n]             = (n - m) L_{m+n}
    [L_m, M_n]             = n M_{m+n}
    [L_m, Y_{n+1/2}]       = (n + (1 - m)/2) Y_{m+n+1/2}
    [Y_{m+1/2}, Y_{n+1/2}] = (n - m) M_{m+n+1}
    [M_m, M_n] = [M_m, Y_{n+1/2}] = 0

A ``Y`` generator is always keyed by the integer ``n`` of ``Y_{n+1/2}``.
Scalars are :class:`fractions.Fraction` throughout.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Tuple, Union

from .combination import Combination, Scalar, format_rational, parse_rational

FAMILIES = ("L", "M", "Y")


class Generator(NamedTuple):
    """One basis element of sv.  ``Generator("Y", n)`` denotes ``Y_{n+1/2}``."""

    family: str
    index: int

    def __str__(self) -> str:
        return f"{self.family}{self.index}"

    def pretty(self) -> str:
        if self.family == "Y":
            return f"Y_{{{Fraction(2 * self.index + 1, 2)}}}"
        return f"{self.family}_{{{self.index}}}"

    @property
    def weight(self) -> "HalfInteger":
        return gen_weight(self)

    @property
    def is_positive(self) -> bool:
        """True for generators spanning sv+ (strictly positive weight)."""
        return gen_weight(self).twice > 0


def L(n: int) -> Generator:
    return Generator("L", n)


def M(n: int) -> Generator:
    return Generator("M", n)


def Y(n: int) -> Generator:
    """``Y(n)`` is ``Y_{n+1/2}``."""
    return Generator("Y", n)


_GEN_RE = re.compile(r"^([LMY])([+-]?\d+)$")


def parse_generator(text: str) -> Generator:
    m = _GEN_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a generator token: {text!r}")
    return Generator(m.group(1), int(m.group(2)))


@dataclass(frozen=True, order=True)
class HalfInteger:
    """A value in (1/2)Z stored as its double."""

    twice: int

    @classmethod
    def of(cls, value: Union[int, Fraction, "HalfInteger"]) -> "HalfInteger":
        if isinstance(value, HalfInteger):
            return value
        doubled = Fraction(value) * 2
        if doubled.denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(doubled))

    def __add__(self, other):
        if isinstance(other, int):
            other = HalfInteger(2 * other)
        if not isinstance(other, HalfInteger):
            return NotImplemented
        return HalfInteger(self.twice + other.twice)

    __radd__ = __add__

    def __neg__(self) -> "HalfInteger":
        return HalfInteger(-self.twice)

    def __sub__(self, other):
        if isinstance(other, int):
            other = HalfInteger(2 * other)
        if not isinstance(other, HalfInteger):
            return NotImplemented
        return HalfInteger(self.twice - other.twice)

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __str__(self) -> str:
        return str(self.as_fraction())

    def __repr__(self) -> str:
        return f"HalfInteger({self.as_fraction()})"


ZERO_WEIGHT = HalfInteger(0)


def gen_weight(g: Generator) -> HalfInteger:
    """L_0-eigenvalue of ``g``: n for L_n, M_n and n+1/2 for Y_{n+1/2}."""
    if g.family == "Y":
        return HalfInteger(2 * g.index + 1)
    return HalfInteger(2 * g.index)


# Structure constants.  Kept as a module-level table of callables so the
# verification harness can swap in a corrupted relation (negative control).
def _ll(m: int, n: int) -> List[Tuple[Generator, Fraction]]:
    return [(L(m + n), Fraction(n - m))]


def _lm(m: int, n: int) -> List[Tuple[Generator, Fraction]]:
    return [(M(m + n), Fraction(n))]


def _ly(m: int, n: int) -> List[Tuple[Generator, Fraction]]:
    return [(Y(m + n), Fraction(2 * n + 1 - m, 2))]


def _yy(m: int, n: int) -> List[Tuple[Generator, Fraction]]:
    return [(M(m + n + 1), Fraction(n - m))]


RELATIONS = {
    ("L", "L"): _ll,
    ("L", "M"): _lm,
    ("L", "Y"): _ly,
    ("Y", "Y"): _yy,
}


def bracket_terms(a: Generator, b: Generator) -> List[Tuple[Generator, Fraction]]:
    """``[a, b]`` as a list of (generator, nonzero coefficient) pairs."""
    rule = RELATIONS.get((a.family, b.family))
    if rule is not None:
        terms = rule(a.index, b.index)
    else:
        rule = RELATIONS.get((b.family, a.family))
        if rule is None:
            return []
        terms = [(g, -c) for g, c in rule(b.index, a.index)]
    return [(g, c) for g, c in terms if c]


class LieElement(Combination):
    """Finite rational combination of generators (zero coefficients never stored)."""

    __slots__ = ()

    @classmethod
    def of(cls, g: Generator, coeff: Scalar = 1) -> "LieElement":
        return cls.basis(g, coeff)

    def to_json(self) -> list:
        return [{"gen": str(g), "coeff": format_rational(c)} for g, c in self.items()]

    @classmethod
    def from_json(cls, data: list) -> "LieElement":
        return cls([(parse_generator(t["gen"]), parse_rational(t["coeff"])) for t in data])


def bracket_gen(a: Generator, b: Generator) -> LieElement:
    return LieElement(bracket_terms(a, b))


def bracket(a: LieElement, b: LieElement) -> LieElement:
    out: List[Tuple[Generator, Fraction]] = []
    for ga, ca in a._terms.items():
        for gb, cb in b._terms.items():
            out.extend((g, ca * cb * c) for g, c in bracket_terms(ga, gb))
    return LieElement(out)


def generators(bound: int, families: str = "LMY") -> List[Generator]:
    """All generators with ``|index| <= bound`` in the given families."""
    return [Generator(f, n) for f in families for n in range(-bound, bound + 1)]
