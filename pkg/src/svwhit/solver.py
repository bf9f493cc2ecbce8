"""Exact searches for Whittaker and singular vectors inside finite windows.

A :class:`Truncation` only bounds the space of *candidate* vectors.  Every
operator image is computed exactly in the untruncated module, so a kernel
found here is the true solution space intersected with the window.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Mapping, Sequence

from .combination import Scalar
from .lie import Generator, HalfInteger, L, M, Y, gen_weight
from .linalg import Echelon, kernel
from .modules import (
    BasisIndex,
    ModuleSpec,
    ModuleVector,
    Universal,
    Verma,
    _index_key,
    act_gen,
    dot_act,
)
from .pbw import block_key

# L_1, L_2, M_1, Y_{1/2} alone miss Y_{3/2}: [L_1, Y_{1/2}] = 0, and Y_{3/2}
# is not a bracket of any two sv+ elements.  With Y_{3/2} the set generates sv+.
SV_PLUS_GENERATORS = (L(1), L(2), M(1), Y(0), Y(1))


@dataclass(frozen=True)
class Truncation:
    """Window on the module basis: maxdeg <= D, lambda(0) <= D0, k <= K."""

    D: HalfInteger
    D0: int = 0
    K: int = 0

    def __post_init__(self):
        object.__setattr__(self, "D", HalfInteger.of(self.D))
        if self.D.twice < 0 or self.D0 < 0 or self.K < 0:
            raise ValueError("truncation bounds must be non-negative")

    def contains(self, b: BasisIndex) -> bool:
        return b.k <= self.K and b.degree <= self.D and b.l0 <= self.D0

    def to_json(self) -> dict:
        return {"D": str(self.D), "D0": self.D0, "K": self.K}


def negative_words(D: HalfInteger) -> List[tuple]:
    """Canonical sv- words (no Cartan factors) of degree <= D, including the empty word."""
    gens = []
    for n in range(1, D.twice // 2 + 1):
        gens += [M(-n), L(-n)]
    for p in range(0, (D.twice - 1) // 2 + 1):
        gens.append(Y(-1 - p))
    gens.sort(key=block_key)
    weights = [-gen_weight(g).twice for g in gens]
    out: List[tuple] = []

    def rec(start: int, budget: int, word: tuple):
        out.append(word)
        for j in range(start, len(gens)):
            if weights[j] <= budget:
                rec(j, budget - weights[j], word + (gens[j],))

    rec(0, D.twice, ())
    return out


def window_basis(spec: ModuleSpec, trunc: Truncation) -> List[BasisIndex]:
    """All basis indices of ``spec``'s module inside ``trunc``, in canonical order."""
    K = trunc.K if isinstance(spec, Universal) else 0
    D0 = 0 if isinstance(spec, Verma) else trunc.D0
    out = []
    for word in negative_words(trunc.D):
        for a in range(D0 + 1):
            full = word + (L(0),) * a
            for k in range(K + 1):
                out.append(BasisIndex(k, full))
    out.sort(key=_index_key)
    return out


@dataclass
class SolveReport:
    conditions: List[Generator]
    truncation: Truncation
    basis: List[ModuleVector]
    candidates: int = 0

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "basis": [v.to_json() for v in self.basis],
            "conditions": [str(g) for g in self.conditions],
            "truncation": self.truncation.to_json(),
        }


class VerificationError(AssertionError):
    pass


def _row_rank(b: BasisIndex):
    return (-b.degree.twice, -b.l0, -b.k)


def eigen_solutions(
    spec: ModuleSpec,
    trunc: Truncation,
    eigenvalues: Mapping[Generator, Scalar],
) -> SolveReport:
    """Solve ``E v = eigenvalues[E] v`` for every listed E over the window."""
    candidates = window_basis(spec, trunc)
    conds = list(eigenvalues)
    raw = []
    for b in candidates:
        v = ModuleVector.basis(b)
        image = {}
        for ci, E in enumerate(conds):
            lam = Fraction(eigenvalues[E])
            img = act_gen(E, v, spec)
            if lam:
                img = img - v.scale(lam)
            for out, c in img.terms.items():
                image[(ci, out)] = c
        raw.append((b, image))
    # Row numbers: highest (degree, lambda(0), k) first.  The operators lower
    # these, so pivoting on the top row keeps fill-in small.
    labels = {r for _, image in raw for r in image}
    order = sorted(labels, key=lambda r: (_row_rank(r[1]), r[0], _index_key(r[1])))
    rows = {r: i for i, r in enumerate(order)}
    columns = [(b, {rows[r]: c for r, c in image.items()}) for b, image in raw]
    basis = [ModuleVector(vec) for vec in kernel(columns, _index_key)]
    for v in basis:
        for E in conds:
            lam = Fraction(eigenvalues[E])
            if act_gen(E, v, spec) - v.scale(lam):
                raise VerificationError(f"re-substitution failed for {E} on {v}")
    return SolveReport(conds, trunc, basis, len(candidates))


def whittaker_vectors(
    spec: ModuleSpec,
    trunc: Truncation,
    conditions: Sequence[Generator] = SV_PLUS_GENERATORS,
    psi=None,
) -> SolveReport:
    """Vectors with ``x v = psi(x) v`` for the listed sv+ generators.

    ``psi`` defaults to the module's own homomorphism; passing another one
    looks for Whittaker vectors of a different type.
    """
    psi = spec.psi if psi is None else psi
    return eigen_solutions(spec, trunc, {E: psi(E) for E in conditions})


def singular_vectors(
    spec: ModuleSpec,
    trunc: Truncation,
    conditions: Sequence[Generator] = SV_PLUS_GENERATORS,
) -> SolveReport:
    """Vectors annihilated by the listed sv+ generators."""
    return eigen_solutions(spec, trunc, {E: 0 for E in conditions})


class BoundExceeded(RuntimeError):
    pass


def nilpotency_index(g: Generator, v: ModuleVector, spec: ModuleSpec, bound: int) -> int:
    """Least m <= bound with (g.)^m v = 0 under the dot action."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if not v:
        return 0
    for m in range(1, bound + 1):
        v = dot_act(g, v, spec)
        if not v:
            return m
    raise BoundExceeded(f"{g} not nilpotent on the given vector within {bound} steps")


def generators_up_to(bound: int) -> List[Generator]:
    """All generators with |weight| <= bound."""
    out = []
    for n in range(-bound, bound + 1):
        out += [L(n), M(n)]
    for n in range(-bound, bound):
        out.append(Y(n))
    return out


def submodule_closure(
    gens: Iterable[ModuleVector],
    spec: ModuleSpec,
    trunc: Truncation,
    gen_weight_bound: int,
) -> List[ModuleVector]:
    """Windowed under-approximation of the submodule generated by ``gens``.

    Repeatedly applies every generator of |weight| <= gen_weight_bound and
    keeps the images supported inside the window, until nothing new
    appears.  The returned span is contained in (submodule ∩ window).
    """
    ech = Echelon(_index_key)
    ops = generators_up_to(gen_weight_bound)
    queue: List[ModuleVector] = []

    def offer(v: ModuleVector):
        if v and all(trunc.contains(b) for b in v.keys()):
            r = ech.add(v.terms)
            if r:
                queue.append(ModuleVector(r))

    seeds = list(gens)
    for v in seeds:
        offer(v)
    # seeds outside the window can still map into it
    for v in seeds:
        if v and not all(trunc.contains(b) for b in v.keys()):
            for g in ops:
                offer(act_gen(g, v, spec))
    while queue:
        v = queue.pop()
        for g in ops:
            offer(act_gen(g, v, spec))
    return [ModuleVector(r) for r in ech.basis()]
