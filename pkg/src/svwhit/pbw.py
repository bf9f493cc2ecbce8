"""PBW normal forms in the universal enveloping algebra U(sv).

A PBW word is a tuple of generators sorted under a fixed total order.  The
default ``"block"`` order puts every M factor first, then Y, then L, with
ascending indices inside each block, so the negative-part basis reads
``M_{-mu} Y_{-1/2-nu} L_{-lambda}`` exactly as the module bases do.

The ``"triangular"`` order keeps the same block order on b- = sv- + h and
moves every sv+ factor to the right.  ``"lym"`` reverses the blocks (L, then
Y, then M).  Nothing in the engine depends on either; they exist so
identities written in another factor order can be read off directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import groupby
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .combination import Combination, Scalar, add_into, format_rational, parse_rational
from .lie import Generator, HalfInteger, bracket_terms, gen_weight

Word = Tuple[Generator, ...]

_BLOCK_RANK = {"M": 0, "Y": 1, "L": 2}


def block_key(g: Generator) -> Tuple[int, int]:
    return (_BLOCK_RANK[g.family], g.index)


def triangular_key(g: Generator) -> Tuple[int, int, int]:
    return (1 if gen_weight(g).twice > 0 else 0, _BLOCK_RANK[g.family], g.index)


def lym_key(g: Generator) -> Tuple[int, int]:
    return (2 - _BLOCK_RANK[g.family], g.index)


ORDERS = {"block": block_key, "triangular": triangular_key, "lym": lym_key}


# -- partitions ---------------------------------------------------------------


@dataclass(frozen=True)
class Pseudopartition:
    """Non-decreasing sequence of non-negative integers."""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(sorted(int(p) for p in self.parts))
        if parts and parts[0] < 0:
            raise ValueError(f"negative part in {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_exponents(cls, exps: Dict[int, int]):
        return cls(tuple(k for k, e in sorted(exps.items()) for _ in range(e)))

    def multiplicity(self, k: int) -> int:
        return self.parts.count(k)

    @property
    def exponents(self) -> Dict[int, int]:
        return {k: len(list(g)) for k, g in groupby(self.parts)}

    @property
    def is_partition(self) -> bool:
        return not self.parts or self.parts[0] > 0

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class Partition(Pseudopartition):
    """Pseudopartition with no zero parts; ``Partition()`` is the empty partition."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_partition:
            raise ValueError(f"partitions have positive parts: {self.parts}")


EMPTY = Partition()


def size(p: Iterable[int]) -> int:
    return sum(p)


def count(p: Iterable[int]) -> int:
    return len(tuple(p))


def shifted_size(nu: Iterable[int]) -> HalfInteger:
    """Sum of (1/2 + part) over the parts of ``nu``."""
    parts = tuple(nu)
    return HalfInteger(2 * sum(parts) + len(parts))


def partitions_of(n: int, max_part: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Partitions of ``n`` as ascending tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append(rest + (first,))
    return out


# -- words ----------------------------------------------------------------------


def word_weight(word: Sequence[Generator]) -> HalfInteger:
    return HalfInteger(sum(gen_weight(g).twice for g in word))


def render_word(word: Sequence[Generator], sep: str = "*") -> str:
    """``(M(-1), M(0), M(0), L(-2))`` -> ``"M-1*M0^2*L-2"``; the empty word is ``"1"``."""
    if not word:
        return "1"
    chunks = []
    for g, grp in groupby(word):
        e = len(list(grp))
        chunks.append(str(g) if e == 1 else f"{g}^{e}")
    return sep.join(chunks)


def is_canonical(word: Sequence[Generator], order: str = "block") -> bool:
    key = ORDERS[order]
    return all(key(a) <= key(b) for a, b in zip(word, word[1:]))


@lru_cache(maxsize=None)
def _normal_form(word: Word, order: str) -> Dict[Word, Fraction]:
    # shared cached dict: callers must copy before mutating
    key = ORDERS[order]
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if key(a) > key(b):
            head, tail = word[:i], word[i + 2:]
            acc = dict(_normal_form(head + (b, a) + tail, order))
            for g, c in bracket_terms(a, b):
                add_into(acc, _normal_form(head + (g,) + tail, order), c)
            return acc
    return {word: Fraction(1)}


def clear_caches() -> None:
    _normal_form.cache_clear()


class UEAElement(Combination):
    """Element of U(sv) as a combination of canonical PBW words."""

    __slots__ = ()

    @staticmethod
    def sort_key(word):
        return (len(word), [block_key(g) for g in word])

    @staticmethod
    def label(word) -> str:
        return render_word(word)

    @classmethod
    def one(cls) -> "UEAElement":
        return cls.basis(())

    @classmethod
    def gen(cls, g: Generator, coeff: Scalar = 1) -> "UEAElement":
        return cls.basis((g,), coeff)

    @classmethod
    def from_lie(cls, x) -> "UEAElement":
        return cls([((g,), c) for g, c in x.terms.items()])

    def __mul__(self, other):
        if isinstance(other, UEAElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "UEAElement":
        out = UEAElement.one()
        for _ in range(n):
            out = multiply(out, self)
        return out

    def to_json(self) -> list:
        return [{"word": render_word(w, " "), "coeff": format_rational(c)} for w, c in self.items()]

    @classmethod
    def from_json(cls, data: list) -> "UEAElement":
        from .parse import parse_word

        return cls([(parse_word(t["word"]), parse_rational(t["coeff"])) for t in data])


def render(u: UEAElement) -> str:
    """Text form accepted back by :func:`svwhit.parse.parse_expression`."""
    return Combination.__str__(u)


def normal_form(word: Sequence[Generator], coeff: Scalar = 1, order: str = "block") -> UEAElement:
    """Rewrite the product ``coeff * word[0] * word[1] * ...`` into PBW words.

    Out-of-order adjacent pairs ``x y`` are replaced by ``y x + [x, y]``,
    always taking the leftmost such pair first.
    """
    coeff = Fraction(coeff)
    if not coeff:
        return UEAElement.zero()
    nf = _normal_form(tuple(word), order)
    return UEAElement._wrap({w: coeff * c for w, c in nf.items()})


def multiply(a: UEAElement, b: UEAElement) -> UEAElement:
    acc: Dict[Word, Fraction] = {}
    for wa, ca in a._terms.items():
        for wb, cb in b._terms.items():
            add_into(acc, _normal_form(wa + wb, "block"), ca * cb)
    return UEAElement._wrap(acc)


def reorder(u: UEAElement, order: str) -> UEAElement:
    """Re-express ``u`` in the PBW basis of another ordering."""
    acc: Dict[Word, Fraction] = {}
    for w, c in u._terms.items():
        add_into(acc, _normal_form(w, order), c)
    return UEAElement._wrap(acc)


def commutator(a: UEAElement, b: UEAElement) -> UEAElement:
    return multiply(a, b) - multiply(b, a)


def uea_weight(u: UEAElement) -> Optional[HalfInteger]:
    """Common L_0-weight of the words of ``u``; ``None`` if not homogeneous (or zero)."""
    weights = {word_weight(w) for w in u.keys()}
    if len(weights) != 1:
        return None
    return weights.pop()


def ad_power(g: Generator, u: UEAElement, m: int) -> UEAElement:
    """``(ad g)^m (u)``."""
    if m < 0:
        raise ValueError("ad_power needs m >= 0")
    x = UEAElement.gen(g)
    for _ in range(m):
        if not u:
            break
        u = commutator(x, u)
    return u


def monomial(*factors: Tuple[Generator, int]) -> UEAElement:
    """Product of generator powers, e.g. ``monomial((L(-1), 2), (M(1), 1))``, normalised."""
    word: List[Generator] = []
    for g, e in factors:
        word.extend([g] * e)
    return normal_form(word)
