"""Sparse exact-rational linear combinations keyed by hashable basis labels."""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Iterator, Tuple, TypeVar, Union

Scalar = Union[int, Fraction]

C = TypeVar("C", bound="Combination")


class Combination:
    """Immutable mapping basis-label -> nonzero Fraction.

    Subclasses set ``sort_key`` to fix the display/serialisation order.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Dict[Hashable, Scalar], Iterable[Tuple[Hashable, Scalar]], None] = None):
        acc: Dict[Hashable, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, c in items:
                c = acc.get(key, 0) + c
                if c:
                    acc[key] = Fraction(c)
                else:
                    acc.pop(key, None)
        self._terms = acc
        self._hash = None

    @classmethod
    def _wrap(cls: type[C], acc: Dict[Hashable, Fraction]) -> C:
        # caller guarantees acc is canonical and unshared
        obj = cls.__new__(cls)
        obj._terms = acc
        obj._hash = None
        return obj

    @classmethod
    def zero(cls: type[C]) -> C:
        return cls._wrap({})

    @classmethod
    def basis(cls: type[C], key: Hashable, coeff: Scalar = 1) -> C:
        coeff = Fraction(coeff)
        return cls._wrap({key: coeff} if coeff else {})

    @staticmethod
    def sort_key(key):
        return key

    @property
    def terms(self) -> Dict[Hashable, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Hashable, Fraction]]:
        """Terms in canonical order."""
        return iter(sorted(self._terms.items(), key=lambda kv: self.sort_key(kv[0])))

    def keys(self):
        return self._terms.keys()

    def __iter__(self):
        return self.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __contains__(self, key) -> bool:
        return key in self._terms

    def __getitem__(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def coeff(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, frozenset(self._terms.items())))
        return self._hash

    def __add__(self: C, other: C) -> C:
        if type(other) is not type(self):
            if isinstance(other, int) and other == 0:
                return self
            return NotImplemented
        acc = dict(self._terms)
        add_into(acc, other._terms)
        return self._wrap(acc)

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self: C) -> C:
        return self._wrap({k: -c for k, c in self._terms.items()})

    def __sub__(self: C, other: C) -> C:
        if type(other) is not type(self):
            return NotImplemented
        acc = dict(self._terms)
        add_into(acc, other._terms, -1)
        return self._wrap(acc)

    def scale(self: C, scalar: Scalar) -> C:
        if not scalar:
            return self.zero()
        return self._wrap({k: scalar * c for k, c in self._terms.items()})

    def __rmul__(self: C, scalar: Scalar) -> C:
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self.scale(scalar)

    def __repr__(self) -> str:
        if not self._terms:
            return f"{type(self).__name__}(0)"
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        # "a - 1/2*b + 3*c"; a label "1" (the unit) prints as its bare coefficient
        if not self._terms:
            return "0"
        out = []
        for i, (k, c) in enumerate(self.items()):
            mag, label = abs(c), self.label(k)
            if label == "1":
                body = str(mag)
            elif mag == 1:
                body = label
            else:
                body = f"{mag}*{label}"
            if i == 0:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f"{'-' if c < 0 else '+'} {body}")
        return " ".join(out)

    @staticmethod
    def label(key) -> str:
        return str(key)


def add_into(acc: Dict[Hashable, Fraction], terms: Dict[Hashable, Fraction], scalar: Scalar = 1) -> None:
    """In-place ``acc += scalar * terms`` keeping ``acc`` free of zeros."""
    if not scalar:
        return
    for k, c in terms.items():
        v = acc.get(k, 0) + scalar * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?")


def format_rational(q: Scalar) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"`` or an integer; ``q`` must be positive."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    if not _RATIONAL_RE.fullmatch(s):
        raise ValueError(f"not a rational: {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))
