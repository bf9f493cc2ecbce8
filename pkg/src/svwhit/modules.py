"""Whittaker modules W_psi, their quotients L_{psi,xi} and the Verma modules V(xi,zeta).

A basis vector ``M_0^k M_{-mu} Y_{-1/2-nu} L_{-lambda} w`` is stored as a
:class:`BasisIndex` ``(k, word)`` where ``word`` is the canonical (block
ordered) product of the sv- and L_0 factors.  M_0 is central so it is kept
out of the word as the exponent ``k``.

The action of a generator is computed by pushing it rightwards through the
word, ``x u w = u' (x u'' w) + [x, u'] u'' w``, until it either sits in its
canonical slot or reaches the cyclic vector:

* sv+ generators hit ``w`` as the scalar ``psi(x)``;
* ``M_0`` raises ``k`` (universal) or multiplies by ``xi`` (quotient, Verma);
* ``L_0`` reaching ``w`` becomes a word factor, except in the Verma module
  where it is the scalar ``zeta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Dict, Iterable, NamedTuple, Optional, Sequence, Tuple, Union

from .combination import Combination, Scalar, add_into, format_rational, parse_rational
from .lie import Generator, HalfInteger, L, M, Y, bracket_terms, gen_weight
from .pbw import UEAElement, Word, block_key, normal_form


# -- psi ------------------------------------------------------------------------


@dataclass(frozen=True)
class WhittakerHom:
    """Lie homomorphism psi: sv+ -> Q, fixed by its values on L_1, L_2, M_1, Y_{1/2}.

    Every other sv+ generator is sent to zero.
    """

    eta1: Fraction = Fraction(0)
    eta2: Fraction = Fraction(0)
    m1: Fraction = Fraction(0)
    eta3: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("eta1", "eta2", "m1", "eta3"):
            object.__setattr__(self, name, parse_rational(getattr(self, name)))

    def __call__(self, g: Generator) -> Fraction:
        if gen_weight(g).twice <= 0:
            raise ValueError(f"psi is only defined on sv+, got {g}")
        return self._values().get(g, Fraction(0))

    def _values(self) -> Dict[Generator, Fraction]:
        return {L(1): self.eta1, L(2): self.eta2, M(1): self.m1, Y(0): self.eta3}

    def nonsingular(self) -> bool:
        return self.m1 != 0

    def is_zero(self) -> bool:
        return not (self.eta1 or self.eta2 or self.m1 or self.eta3)

    def to_json(self) -> dict:
        return {k: format_rational(getattr(self, k)) for k in ("eta1", "eta2", "m1", "eta3")}

    @classmethod
    def from_json(cls, data: dict) -> "WhittakerHom":
        unknown = set(data) - {"eta1", "eta2", "m1", "eta3"}
        if unknown:
            raise ValueError(f"unknown psi fields {sorted(unknown)}")
        return cls(**{k: parse_rational(v) for k, v in data.items()})


PSI_ZERO = WhittakerHom()


# -- module specs ---------------------------------------------------------------


@dataclass(frozen=True)
class Universal:
    """W_psi, the universal Whittaker module."""

    psi: WhittakerHom = PSI_ZERO
    kind = "universal"

    @property
    def m0_scalar(self) -> Optional[Fraction]:
        return None


@dataclass(frozen=True)
class Quotient:
    """L_{psi,xi} = W_psi / (M_0 - xi) W_psi."""

    psi: WhittakerHom = PSI_ZERO
    xi: Fraction = Fraction(0)
    kind = "quotient"

    def __post_init__(self):
        object.__setattr__(self, "xi", parse_rational(self.xi))

    @property
    def m0_scalar(self) -> Optional[Fraction]:
        return self.xi


@dataclass(frozen=True)
class Verma:
    """V(xi, zeta): psi = 0, M_0 acts by xi and L_0 w = zeta w."""

    xi: Fraction = Fraction(0)
    zeta: Fraction = Fraction(0)
    kind = "verma"

    def __post_init__(self):
        object.__setattr__(self, "xi", parse_rational(self.xi))
        object.__setattr__(self, "zeta", parse_rational(self.zeta))

    @property
    def psi(self) -> WhittakerHom:
        return PSI_ZERO

    @property
    def m0_scalar(self) -> Optional[Fraction]:
        return self.xi


ModuleSpec = Union[Universal, Quotient, Verma]


def spec_to_json(spec: ModuleSpec) -> dict:
    out: dict = {"type": spec.kind}
    if not isinstance(spec, Verma):
        out["psi"] = spec.psi.to_json()
    if not isinstance(spec, Universal):
        out["xi"] = format_rational(spec.xi)
    if isinstance(spec, Verma):
        out["zeta"] = format_rational(spec.zeta)
    return out


def spec_from_json(data: dict) -> ModuleSpec:
    kind = data.get("type")
    psi = WhittakerHom.from_json(data.get("psi", {}))
    if kind == "universal":
        return Universal(psi)
    if kind == "quotient":
        return Quotient(psi, parse_rational(data.get("xi", 0)))
    if kind == "verma":
        if not psi.is_zero():
            raise ValueError("Verma modules are only defined for psi = 0")
        return Verma(parse_rational(data.get("xi", 0)), parse_rational(data.get("zeta", 0)))
    raise ValueError(f"unknown module type {kind!r}")


# -- basis ----------------------------------------------------------------------


@total_ordering
class _MinusInfinity:
    """maxdeg of the zero vector."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("-inf")

    def __repr__(self):
        return "-inf"


NEG_INF = _MinusInfinity()


def _is_b_minus(g: Generator) -> bool:
    return gen_weight(g).twice <= 0


class BasisIndex(NamedTuple):
    """``M_0^k`` times the canonical word ``M_{-mu} Y_{-1/2-nu} L_{-lambda}``, applied to w."""

    k: int
    word: Word

    @classmethod
    def of(cls, k: int = 0, mu: Iterable[int] = (), nu: Iterable[int] = (), lam: Iterable[int] = ()) -> "BasisIndex":
        mu, nu, lam = sorted(mu), sorted(nu), sorted(lam)
        if k < 0 or (mu and mu[0] <= 0) or (nu and nu[0] < 0) or (lam and lam[0] < 0):
            raise ValueError("mu must be a partition, nu and lambda pseudopartitions, k >= 0")
        word = (
            tuple(M(-p) for p in reversed(mu))
            + tuple(Y(-1 - p) for p in reversed(nu))
            + tuple(L(-p) for p in reversed(lam))
        )
        return cls(k, word)

    @property
    def mu(self) -> Tuple[int, ...]:
        return tuple(sorted(-g.index for g in self.word if g.family == "M"))

    @property
    def nu(self) -> Tuple[int, ...]:
        return tuple(sorted(-1 - g.index for g in self.word if g.family == "Y"))

    @property
    def lam(self) -> Tuple[int, ...]:
        return tuple(sorted(-g.index for g in self.word if g.family == "L"))

    @property
    def degree(self) -> HalfInteger:
        """|mu| + |1/2 + nu| + |lambda|."""
        return HalfInteger(-sum(gen_weight(g).twice for g in self.word))

    @property
    def l0(self) -> int:
        return sum(1 for g in self.word if g == (L(0)))

    def label(self) -> str:
        chunks = []
        if self.k:
            chunks.append("M0" if self.k == 1 else f"M0^{self.k}")
        from .pbw import render_word

        if self.word:
            chunks.append(render_word(self.word))
        chunks.append("w")
        return "*".join(chunks)

    def to_json(self) -> dict:
        return {"k": self.k, "mu": list(self.mu), "nu": list(self.nu), "lambda": list(self.lam)}

    @classmethod
    def from_json(cls, data: dict) -> "BasisIndex":
        unknown = set(data) - {"k", "mu", "nu", "lambda"}
        if unknown:
            raise ValueError(f"unknown basis index fields {sorted(unknown)}")
        return cls.of(int(data.get("k", 0)), data.get("mu", ()), data.get("nu", ()), data.get("lambda", ()))


CYCLIC = BasisIndex(0, ())


def _index_key(b: BasisIndex):
    return (b.degree.twice, b.k, [block_key(g) for g in b.word])


class ModuleVector(Combination):
    """Finite combination of :class:`BasisIndex` basis vectors."""

    __slots__ = ()

    sort_key = staticmethod(_index_key)

    @staticmethod
    def label(b: BasisIndex) -> str:
        return b.label()

    def to_json(self) -> list:
        return [{"index": b.to_json(), "coeff": format_rational(c)} for b, c in self.items()]

    @classmethod
    def from_json(cls, data: list) -> "ModuleVector":
        for t in data:
            if set(t) != {"index", "coeff"}:
                raise ValueError(f"vector terms need exactly 'index' and 'coeff', got {sorted(t)}")
        return cls([(BasisIndex.from_json(t["index"]), parse_rational(t["coeff"])) for t in data])


def cyclic() -> ModuleVector:
    """The cyclic Whittaker vector w (or its image in a quotient)."""
    return ModuleVector.basis(CYCLIC)


def basis_vector(k: int = 0, mu=(), nu=(), lam=(), coeff: Scalar = 1) -> ModuleVector:
    return ModuleVector.basis(BasisIndex.of(k, mu, nu, lam), coeff)


def validate(v: ModuleVector, spec: ModuleSpec) -> None:
    """Reject basis indices that do not exist in ``spec``'s module."""
    for b in v.keys():
        if any(not _is_b_minus(g) or g == M(0) for g in b.word):
            raise ValueError(f"{b.label()} is not a basis index")
        if not isinstance(spec, Universal) and b.k:
            raise ValueError(f"M_0 acts by a scalar in the {spec.kind} module; k must be 0")
        if isinstance(spec, Verma) and b.l0:
            raise ValueError("Verma basis vectors carry no L_0 factors")


# -- the action -------------------------------------------------------------------


def _shift(terms: Dict[BasisIndex, Fraction], k: int) -> Dict[BasisIndex, Fraction]:
    if not k:
        return terms
    return {BasisIndex(b.k + k, b.word): c for b, c in terms.items()}


def _act_on_terms(g: Generator, terms: Dict[BasisIndex, Fraction], spec: ModuleSpec, acc, scalar=1) -> None:
    for b, c in terms.items():
        add_into(acc, _shift(_act_word(g, b.word, spec), b.k), scalar * c)


@lru_cache(maxsize=None)
def _act_word(g: Generator, word: Word, spec: ModuleSpec) -> Dict[BasisIndex, Fraction]:
    """g . (word w) with word a canonical b- word; result read-only."""
    if g == M(0):
        xi = spec.m0_scalar
        if xi is None:
            return {BasisIndex(1, word): Fraction(1)}
        return {BasisIndex(0, word): xi} if xi else {}
    positive = gen_weight(g).twice > 0
    if not word:
        if positive:
            value = spec.psi(g)
            return {CYCLIC: value} if value else {}
        if isinstance(spec, Verma) and g == L(0):
            return {CYCLIC: spec.zeta} if spec.zeta else {}
        return {BasisIndex(0, (g,)): Fraction(1)}
    first = word[0]
    if not positive and block_key(g) <= block_key(first):
        return {BasisIndex(0, (g,) + word): Fraction(1)}
    # g first rest = first (g rest) + [g, first] rest
    rest = word[1:]
    acc: Dict[BasisIndex, Fraction] = {}
    _act_on_terms(first, _act_word(g, rest, spec), spec, acc)
    for h, c in bracket_terms(g, first):
        add_into(acc, _act_word(h, rest, spec), c)
    return acc


def clear_caches() -> None:
    _act_word.cache_clear()


def act_gen(g: Generator, v: ModuleVector, spec: ModuleSpec) -> ModuleVector:
    acc: Dict[BasisIndex, Fraction] = {}
    _act_on_terms(g, v._terms, spec, acc)
    return ModuleVector._wrap(acc)


def act_lie(x, v: ModuleVector, spec: ModuleSpec) -> ModuleVector:
    """Action of a LieElement."""
    acc: Dict[BasisIndex, Fraction] = {}
    for g, c in x.terms.items():
        _act_on_terms(g, v._terms, spec, acc, c)
    return ModuleVector._wrap(acc)


def act_word(word: Sequence[Generator], v: ModuleVector, spec: ModuleSpec) -> ModuleVector:
    """(g_1 g_2 ... g_n) . v, applied right to left."""
    terms = v._terms
    for g in reversed(word):
        acc: Dict[BasisIndex, Fraction] = {}
        _act_on_terms(g, terms, spec, acc)
        terms = acc
        if not terms:
            break
    return ModuleVector._wrap(dict(terms))


def act(u: UEAElement, v: ModuleVector, spec: ModuleSpec) -> ModuleVector:
    acc: Dict[BasisIndex, Fraction] = {}
    for word, c in u.terms.items():
        add_into(acc, act_word(word, v, spec)._terms, c)
    return ModuleVector._wrap(acc)


def dot_act(g: Generator, v: ModuleVector, spec: ModuleSpec) -> ModuleVector:
    """x . v = x v - psi(x) v for x in sv+."""
    if gen_weight(g).twice <= 0:
        raise ValueError(f"dot action is defined for sv+ generators only, got {g}")
    return act_gen(g, v, spec) - v.scale(spec.psi(g))


def maxdeg(v: ModuleVector):
    """Largest |mu| + |1/2+nu| + |lambda| in the support of v, or NEG_INF for v = 0."""
    if not v:
        return NEG_INF
    return max(b.degree for b in v.keys())


def max_l0(v: ModuleVector):
    """Largest lambda(0) in the support of v, or NEG_INF for v = 0."""
    if not v:
        return NEG_INF
    return max(b.l0 for b in v.keys())


def sv_plus_element(n: int, family: str) -> Generator:
    """E_n: L_n, M_n or Y_{1/2+(n-1)} for n >= 1."""
    if n < 1:
        raise ValueError("E_n needs n >= 1")
    return {"L": L(n), "M": M(n), "Y": Y(n - 1)}[family]


# -- z elements ----------------------------------------------------------------


def z_element(psi: WhittakerHom, xi: Optional[Scalar] = None) -> UEAElement:
    """The element z whose action on the cyclic vector gives a Whittaker vector.

    With ``xi`` given, returns the variant for L_{psi,xi}, where M_0 has been
    replaced by the scalar xi.
    """
    if psi.nonsingular():
        raise ValueError("z is only defined for singular psi (psi(M_1) = 0)")
    e1, e2, e3 = psi.eta1, psi.eta2, psi.eta3
    if not (e1 or e2 or e3):
        return normal_form([L(0)])
    if xi is None:
        if e2 or e3:
            terms = [
                normal_form([L(0), M(0), M(0)]),
                normal_form([M(-2), M(0)], -e2),
                normal_form([M(-1), M(0)], -e1),
                normal_form([M(-1), M(-1)], e2),
                normal_form([Y(-1), M(0)], -e3 / 2),
                normal_form([M(-1)], e3 * e3 / 2),
            ]
        else:
            terms = [normal_form([L(0), M(0)]), normal_form([M(-1)], -e1)]
    else:
        xi = parse_rational(xi)
        if e2 or e3:
            terms = [
                normal_form([L(0)], xi * xi),
                normal_form([M(-2)], -xi * e2),
                normal_form([M(-1)], -xi * e1),
                normal_form([M(-1), M(-1)], e2),
                normal_form([Y(-1)], -xi * e3 / 2),
                normal_form([M(-1)], e3 * e3 / 2),
            ]
        else:
            terms = [normal_form([L(0)], xi), normal_form([M(-1)], -e1)]
    return sum(terms, UEAElement.zero())


def filtration_map(v: ModuleVector, zeta: Scalar, i: int, spec: ModuleSpec) -> ModuleVector:
    """u w ↦ u (L_0 - zeta)^i w on basis words u (defines V^i inside L_{0,xi})."""
    zeta = parse_rational(zeta)
    seed = cyclic()
    for _ in range(i):
        seed = act_gen(L(0), seed, spec) - seed.scale(zeta)
    acc: Dict[BasisIndex, Fraction] = {}
    for b, c in v.terms.items():
        image = act_word(b.word, seed, spec)
        add_into(acc, _shift(image._terms, b.k), c)
    return ModuleVector._wrap(acc)
