"""Exact sparse linear algebra over Q on dict-of-Fraction vectors.

Vectors are plain ``{label: Fraction}`` dicts without zeros.  Labels are
ordered through an explicit ``key`` so every result is deterministic.

Kernels are found by elimination modulo large primes followed by rational
reconstruction; every reconstructed vector is then checked against the
original system in exact arithmetic.  Since reduction mod p can only lower
the rank, ``dim ker_Q <= dim ker_p``; exhibiting ``dim ker_p`` independent
exact solutions therefore certifies the full rational kernel.  When
reconstruction does not succeed the plain Fraction elimination is used.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .combination import add_into

Vec = Dict[Hashable, Fraction]

PRIMES = (
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
)


class Echelon:
    """Incrementally maintained echelon basis of a subspace.

    Each stored row is normalised so its pivot (the ``key``-smallest label)
    has coefficient 1, and no other stored row has that pivot in its support.
    """

    def __init__(self, key: Callable = lambda x: x):
        self.key = key
        self.rows: Dict[Hashable, Vec] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vec) -> Vec:
        v = dict(v)
        # stored rows are fully reduced, so one pass over the pivots suffices
        for p in [p for p in v if p in self.rows]:
            c = v.get(p)
            if c:
                add_into(v, self.rows[p], -c)
        return v

    def add(self, v: Vec) -> Vec:
        """Insert ``v``; return its reduced form (empty dict if already in the span)."""
        r = self.reduce(v)
        if not r:
            return r
        pivot = min(r, key=self.key)
        inv = 1 / r[pivot]
        r = {k: c * inv for k, c in r.items()}
        for row in self.rows.values():
            c = row.get(pivot)
            if c:
                add_into(row, r, -c)
        self.rows[pivot] = r
        return r

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def basis(self) -> List[Vec]:
        """Reduced row echelon basis, sorted by pivot."""
        return [dict(self.rows[p]) for p in sorted(self.rows, key=self.key)]


def rref(vectors: Sequence[Vec], key: Callable) -> List[Vec]:
    ech = Echelon(key)
    for v in vectors:
        ech.add(v)
    return ech.basis()


# -- exact reference elimination -------------------------------------------------


def kernel_exact(columns: Sequence[Tuple[Hashable, Vec]], key: Callable) -> List[Vec]:
    """Kernel by column elimination in Fraction arithmetic."""
    pivots: Dict[Hashable, Tuple[Vec, Vec]] = {}
    found: List[Vec] = []
    for label, image in columns:
        img = dict(image)
        comb: Vec = {label: Fraction(1)}
        while img:
            p = min(img)
            if p not in pivots:
                inv = 1 / img[p]
                pivots[p] = ({k: c * inv for k, c in img.items()}, {k: c * inv for k, c in comb.items()})
                break
            prow, pcomb = pivots[p]
            c = img[p]
            add_into(img, prow, -c)
            add_into(comb, pcomb, -c)
        else:
            found.append(comb)
    return rref(found, key)


# -- modular elimination -----------------------------------------------------------


class _BadPrime(Exception):
    pass


def _mod(c: Fraction, p: int) -> int:
    d = c.denominator % p
    if not d:
        raise _BadPrime
    return c.numerator * pow(d, -1, p) % p


def _addmod(acc: Dict, terms: Dict, scalar: int, p: int) -> None:
    for k, c in terms.items():
        v = (acc.get(k, 0) + scalar * c) % p
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def kernel_mod(columns: Sequence[Tuple[Hashable, Vec]], key: Callable, p: int) -> List[Dict[Hashable, int]]:
    """Kernel over GF(p), in reduced echelon form w.r.t. ``key``."""
    pivots: Dict[int, Tuple[dict, dict]] = {}
    found = []
    for label, image in columns:
        img = {r: _mod(c, p) for r, c in image.items()}
        img = {r: c for r, c in img.items() if c}
        comb = {label: 1}
        while img:
            r = min(img)
            if r not in pivots:
                inv = pow(img[r], -1, p)
                pivots[r] = ({k: c * inv % p for k, c in img.items()}, {k: c * inv % p for k, c in comb.items()})
                break
            prow, pcomb = pivots[r]
            c = p - img[r]
            _addmod(img, prow, c, p)
            _addmod(comb, pcomb, c, p)
        else:
            found.append(comb)
    rows: Dict[Hashable, dict] = {}
    for v in found:
        v = dict(v)
        for piv in [q for q in v if q in rows]:
            c = v.get(piv)
            if c:
                _addmod(v, rows[piv], p - c, p)
        if not v:
            continue
        piv = min(v, key=key)
        inv = pow(v[piv], -1, p)
        v = {k: c * inv % p for k, c in v.items()}
        for row in rows.values():
            c = row.get(piv)
            if c:
                _addmod(row, v, p - c, p)
        rows[piv] = v
    return [rows[q] for q in sorted(rows, key=key)]


def rational_reconstruction(a: int, m: int) -> Optional[Fraction]:
    """n/d with n = a d (mod m), |n|, d <= sqrt(m/2); None if no such fraction."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _crt(a: int, m: int, b: int, p: int) -> int:
    return a + m * ((b - a) * pow(m, -1, p) % p)


def _in_kernel(v: Vec, cols: Dict[Hashable, Vec]) -> bool:
    acc: Vec = {}
    for label, c in v.items():
        add_into(acc, cols[label], c)
    return not acc


def kernel(columns: Sequence[Tuple[Hashable, Vec]], key: Callable) -> List[Vec]:
    """Basis of ``{x : sum_j x_j columns[j] = 0}``.

    ``columns`` lists (unknown label, image vector) pairs; image vectors
    are keyed by integers (row numbers).  The returned kernel vectors are
    over the unknown labels, in reduced echelon form with respect to ``key``.
    """
    cols = dict(columns)
    shape = None
    residues: List[Dict[Hashable, int]] = []
    modulus = 1
    for p in PRIMES:
        try:
            ker = kernel_mod(columns, key, p)
        except _BadPrime:
            continue
        sig = [tuple(sorted(v, key=key)) for v in ker]
        if shape is None or len(sig) < len(shape):
            # a smaller kernel means the earlier primes were unlucky
            shape, residues, modulus = sig, [dict(v) for v in ker], p
        elif sig != shape:
            continue
        else:
            residues = [{k: _crt(r[k], modulus, v[k], p) for k in r} for r, v in zip(residues, ker)]
            modulus *= p
        candidate = []
        for r in residues:
            vec = {}
            for k, a in r.items():
                q = rational_reconstruction(a, modulus)
                if q is None:
                    break
                vec[k] = q
            else:
                candidate.append(vec)
                continue
            break
        if len(candidate) == len(residues) and all(_in_kernel(v, cols) for v in candidate):
            return candidate
    return kernel_exact(columns, key)
