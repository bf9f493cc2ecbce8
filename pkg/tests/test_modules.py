from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import triangular_action
from svwhit.lie import HalfInteger, L, M, Y, bracket_gen, generators
from svwhit.modules import (
    NEG_INF,
    PSI_ZERO,
    BasisIndex,
    ModuleVector,
    Quotient,
    Universal,
    Verma,
    WhittakerHom,
    act,
    act_gen,
    act_lie,
    act_word,
    basis_vector,
    cyclic,
    dot_act,
    filtration_map,
    max_l0,
    maxdeg,
    spec_from_json,
    spec_to_json,
    sv_plus_element,
    validate,
    z_element,
)
from svwhit.parse import parse_expression
from svwhit.pbw import normal_form
from svwhit.solver import Truncation, window_basis

PSI_M1 = WhittakerHom(m1=1)
PSI_FULL = WhittakerHom(Fraction(3, 2), -2, Fraction(-3, 5), 4)
SPECS = [
    Universal(PSI_FULL),
    Universal(WhittakerHom(1, 2, 0, -1)),
    Quotient(PSI_FULL, Fraction(-2, 3)),
    Quotient(PSI_ZERO, 1),
    Verma(2, Fraction(1, 2)),
    Verma(0, 0),
]
SPEC_IDS = ["W-nonsing", "W-sing", "L-nonsing", "L-zero", "V(2,1/2)", "V(0,0)"]


def half(x) -> HalfInteger:
    return HalfInteger.of(Fraction(x))


def basis(spec, D=3, D0=1, K=1):
    return [ModuleVector.basis(b) for b in window_basis(spec, Truncation(D, D0, K))]


def commutator_on_w(x, b: BasisIndex, spec):
    """[x, u] w for the basis word u of b (k = 0)."""
    uw = ModuleVector.basis(b)
    return act_gen(x, uw, spec) - act_word(b.word, act_gen(x, cyclic(), spec), spec)


# -- examples ---------------------------------------------------------------------------


def test_action_examples():
    W = Universal(PSI_M1)
    assert act_gen(M(1), basis_vector(lam=(1,)), W) == basis_vector(lam=(1,)) - basis_vector(k=1)
    assert act_gen(Y(0), basis_vector(nu=(0,)), W) == -basis_vector(k=1)
    assert act_gen(L(0), cyclic(), Verma(3, Fraction(5, 7))) == cyclic().scale(Fraction(5, 7))
    assert act_gen(M(0), cyclic(), W) == basis_vector(k=1)
    assert act_gen(M(0), cyclic(), Quotient(PSI_M1, 4)) == cyclic().scale(4)
    assert act_gen(M(0), cyclic(), Verma(-2, 1)) == cyclic().scale(-2)
    assert act_gen(L(0), cyclic(), W) == basis_vector(lam=(0,))


def test_act_examples():
    W = Universal(PSI_M1)
    v = basis_vector(mu=(2,), nu=(0, 1), lam=(0, 3))
    assert act(normal_form([]), v, W) == v
    assert act(parse_expression("L-2"), cyclic(), W) == basis_vector(lam=(2,))
    u = normal_form([M(1), L(-1)])
    assert act(u, cyclic(), W) == act_gen(M(1), act_gen(L(-1), cyclic(), W), W)


def test_dot_action_examples():
    W = Universal(PSI_M1)
    v = dot_act(M(1), basis_vector(lam=(1,)), W)
    assert v == -basis_vector(k=1)
    assert dot_act(M(1), v, W) == 0
    for g in generators(4):
        if g.is_positive:
            assert dot_act(g, cyclic(), Universal(PSI_FULL)) == 0
    with pytest.raises(ValueError):
        dot_act(L(0), cyclic(), W)
    with pytest.raises(ValueError):
        dot_act(Y(-1), cyclic(), W)


def test_maxdeg_examples():
    v = basis_vector(mu=(1,)) + basis_vector(lam=(1, 2))
    assert maxdeg(v) == half(3)
    assert maxdeg(ModuleVector.zero()) is NEG_INF and max_l0(ModuleVector.zero()) is NEG_INF
    v = basis_vector(lam=(0, 0))
    assert maxdeg(v) == half(0) and max_l0(v) == 2
    assert maxdeg(basis_vector(nu=(0, 2))) == half(3)
    assert maxdeg(cyclic()) == half(0)
    assert NEG_INF < half(-100) and not half(-100) < NEG_INF


def test_z_element_examples():
    assert z_element(PSI_ZERO) == parse_expression("L0")
    z = z_element(WhittakerHom(0, 0, 0, 1))
    assert z == parse_expression("L0*M0^2 - 1/2*Y-1*M0 + 1/2*M-1")
    assert z_element(WhittakerHom(2, 0, 0, 0)) == parse_expression("L0*M0 - 2*M-1")
    assert z_element(WhittakerHom(2, 0, 0, 0), xi=3) == parse_expression("3*L0 - 2*M-1")
    with pytest.raises(ValueError):
        z_element(PSI_M1)


def test_psi():
    assert PSI_FULL(L(1)) == Fraction(3, 2) and PSI_FULL(Y(0)) == 4
    for g in (L(3), L(7), M(2), M(5), Y(1), Y(4)):
        assert PSI_FULL(g) == 0
    with pytest.raises(ValueError):
        PSI_FULL(L(-1))
    assert PSI_FULL.nonsingular() and not WhittakerHom(1, 1, 0, 1).nonsingular()
    assert WhittakerHom("1/2", 0, 0, 0).eta1 == Fraction(1, 2)


def test_psi_is_a_lie_homomorphism():
    # psi vanishes on [sv+, sv+], so every bracket of two sv+ generators has psi = 0
    plus = [g for g in generators(5) if g.is_positive]
    for a, b in combinations(plus, 2):
        for g, c in bracket_gen(a, b).items():
            assert PSI_FULL(g) == 0, (a, b, g)


def test_sv_plus_element():
    assert sv_plus_element(1, "Y") == Y(0)
    assert sv_plus_element(3, "L") == L(3)
    with pytest.raises(ValueError):
        sv_plus_element(0, "M")


# -- structure ----------------------------------------------------------------------------


@pytest.mark.parametrize("spec", SPECS, ids=SPEC_IDS)
def test_module_axiom(spec):
    gens = generators(2)
    for v in basis(spec, D=2):
        imgs = {g: act_gen(g, v, spec) for g in gens}
        for x, y in combinations(gens, 2):
            lhs = act_gen(x, imgs[y], spec) - act_gen(y, imgs[x], spec)
            assert lhs == act_lie(bracket_gen(x, y), v, spec), (x, y, v)


@pytest.mark.parametrize("spec", SPECS, ids=SPEC_IDS)
def test_action_matches_triangular_oracle(spec):
    gens = generators(3)
    psi = spec.psi

    def tri(word):
        return normal_form(word, order="triangular").terms

    for v in basis(spec):
        (b,) = v.keys()
        for g in gens:
            assert act_gen(g, v, spec) == triangular_action(g, b, spec, psi, tri), (g, b)


@pytest.mark.parametrize("spec", SPECS, ids=SPEC_IDS)
def test_cyclic_vector_is_whittaker(spec):
    for g in generators(4):
        if g.is_positive:
            assert act_gen(g, cyclic(), spec) == cyclic().scale(spec.psi(g))


@given(st.lists(st.sampled_from(generators(2)), max_size=3), st.lists(st.sampled_from(generators(2)), max_size=3))
@settings(max_examples=40, deadline=None)
def test_act_is_multiplicative(a, b):
    spec = Universal(PSI_FULL)
    u1, u2 = normal_form(a), normal_form(b)
    v = basis_vector(nu=(0,), lam=(1,))
    assert act(u1 * u2, v, spec) == act(u1, act(u2, v, spec), spec)


def test_universal_module_is_free_over_b_minus():
    spec = Universal(PSI_FULL)
    for v in basis(spec, D=2, D0=1, K=1):
        (b,) = v.keys()
        word = (M(0),) * b.k + b.word
        assert act(normal_form(word), cyclic(), spec) == v


def test_validate():
    validate(basis_vector(k=2, lam=(0,)), Universal(PSI_M1))
    with pytest.raises(ValueError):
        validate(basis_vector(k=1), Quotient(PSI_M1, 1))
    with pytest.raises(ValueError):
        validate(basis_vector(lam=(0,)), Verma(1, 1))
    with pytest.raises(ValueError):
        BasisIndex.of(mu=(0,))
    with pytest.raises(ValueError):
        validate(ModuleVector.basis(BasisIndex(0, (L(1),))), Universal(PSI_M1))


# -- degree estimates for nonsingular psi ------------------------------------------------


NONSINGULAR = [WhittakerHom(0, 0, 1, 0), PSI_FULL, WhittakerHom(1, 2, Fraction(-3, 5), 3)]


@pytest.mark.parametrize("psi", NONSINGULAR, ids=str)
def test_positive_generators_lower_degree_or_l0(psi):
    spec = Universal(psi)
    for v in basis(spec, D=3, D0=2, K=1):
        (b,) = v.keys()
        for n in range(1, 4):
            for fam in "LMY":
                E = sv_plus_element(n, fam)
                rest = act_gen(E, v, spec) - v.scale(psi(E))
                for t in rest.keys():
                    assert t.degree < b.degree or t.l0 < b.l0, (E, b, t)


@pytest.mark.parametrize("psi", NONSINGULAR, ids=str)
def test_m_bracket_with_l_power(psi):
    spec = Universal(psi)
    for k in range(4):
        for a in range(1, 4):
            b = BasisIndex.of(lam=(k,) * a)
            v = commutator_on_w(M(k + 1), b, spec) + basis_vector(lam=(k,) * (a - 1), coeff=a * (k + 1) * psi.m1)
            if k > 0:
                assert maxdeg(v) < half((a - 1) * k), (k, a, v)
            else:
                assert max_l0(v) < a - 1, (k, a, v)


def _yl_instances(total=3):
    for b in window_basis(Universal(PSI_ZERO), Truncation(total, total, 0)):
        if not b.mu:
            yield b


@pytest.mark.parametrize("psi", NONSINGULAR, ids=str)
def test_y_bracket_degree_bounds(psi):
    spec = Universal(psi)
    for b in _yl_instances():
        if b.degree + HalfInteger(2 * b.l0) > half(3):
            continue
        base = b.degree
        for m in range(0, 4):
            v = commutator_on_w(Y(m), b, spec)
            assert maxdeg(v) <= base - half(Fraction(1, 2) + m) + half(1), (m, b)
        for k in range(0, 3):
            low = set(range(0, k + 1))
            nu, lam = b.nu, b.lam
            if not (low & set(nu)) and not (low & set(lam)):
                v = commutator_on_w(Y(k + 1), b, spec)
                assert maxdeg(v) <= base - half(k + 1), (k, b)
            if not (low & set(lam)) and not (set(range(k)) & set(nu)) and k in nu:
                nu2 = list(nu)
                nu2.remove(k)
                target = basis_vector(nu=nu2, lam=lam, coeff=2 * (1 + k) * psi.m1 * nu.count(k))
                v = commutator_on_w(Y(k + 1), b, spec) + target
                assert maxdeg(v) < base - half(Fraction(1, 2) + k), (k, b, v)


@pytest.mark.parametrize("psi", NONSINGULAR, ids=str)
def test_l_bracket_on_m_y_words(psi):
    spec = Universal(psi)
    for b in window_basis(spec, Truncation(3, 0, 0)):
        if b.lam:
            continue
        for m in range(0, 5):
            v = commutator_on_w(L(m), b, spec)
            assert maxdeg(v) <= b.degree - half(m) + half(1), (m, b)


# -- dot action ----------------------------------------------------------------------------


@pytest.mark.parametrize("psi", [PSI_ZERO, PSI_M1, PSI_FULL], ids=str)
def test_dot_action_degree_bounds(psi):
    spec = Universal(psi)
    for v in basis(spec, D=3, D0=2, K=1):
        (b,) = v.keys()
        size = b.degree + HalfInteger(2 * b.l0)
        top = int(b.degree.as_fraction()) + 2
        for n in range(1, top + 4):
            for fam in "LMY":
                r = dot_act(sv_plus_element(n, fam), v, spec)
                for t in r.keys():
                    assert t.degree + HalfInteger(2 * t.l0) <= size and t.k in (b.k, b.k + 1)
                if half(n) > b.degree + half(2):
                    assert r == 0, (n, fam, b)


# -- singular psi: z elements --------------------------------------------------------------


def rationals(nonzero=False):
    q = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return q.filter(bool) if nonzero else q


@st.composite
def singular_psis(draw):
    case = draw(st.integers(0, 2))
    if case == 0:
        return PSI_ZERO
    if case == 1:
        e2, e3 = draw(rationals()), draw(rationals())
        if not (e2 or e3):
            e3 = Fraction(1)
        return WhittakerHom(draw(rationals()), e2, 0, e3)
    return WhittakerHom(draw(rationals(True)), 0, 0, 0)


@given(singular_psis(), rationals(True))
@settings(max_examples=40, deadline=None)
def test_z_gives_whittaker_vectors(psi, xi):
    for spec, z in ((Universal(psi), z_element(psi)), (Quotient(psi, xi), z_element(psi, xi))):
        zw = act(z, cyclic(), spec)
        assert zw
        for g in generators(5):
            if g.is_positive:
                assert dot_act(g, zw, spec) == 0, (g, psi)


# -- filtration of L_{0,xi} ------------------------------------------------------------------


def test_filtration_map_on_cyclic_vector():
    spec = Quotient(PSI_ZERO, 1)
    assert filtration_map(cyclic(), 2, 1, spec) == basis_vector(lam=(0,)) - cyclic().scale(2)
    assert filtration_map(basis_vector(lam=(1,)), 0, 2, spec) == basis_vector(lam=(0, 0, 1))


@pytest.mark.parametrize("zeta, i", [(0, 1), (2, 2), (Fraction(-1, 3), 3)])
def test_filtration_map_is_a_module_map(zeta, i):
    spec = Quotient(PSI_ZERO, 1)
    for v in basis(spec, D=3, D0=1, K=0):
        fv = filtration_map(v, zeta, i, spec)
        for g in generators(3):
            assert filtration_map(act_gen(g, v, spec), zeta, i, spec) == act_gen(g, fv, spec)


# -- serialisation --------------------------------------------------------------------------


def test_json_round_trips():
    b = BasisIndex.of(2, (1, 3), (0, 0, 2), (0, 1))
    assert b.to_json() == {"k": 2, "mu": [1, 3], "nu": [0, 0, 2], "lambda": [0, 1]}
    assert BasisIndex.from_json(b.to_json()) == b
    v = ModuleVector.basis(b, Fraction(-2, 3)) + cyclic()
    assert ModuleVector.from_json(v.to_json()) == v
    for spec in SPECS:
        assert spec_from_json(spec_to_json(spec)) == spec
    assert spec_to_json(Verma(1, Fraction(1, 2))) == {"type": "verma", "xi": "1/1", "zeta": "1/2"}
    with pytest.raises(ValueError):
        spec_from_json({"type": "verma", "psi": {"m1": "1"}})
    with pytest.raises(ValueError):
        spec_from_json({"type": "nope"})


def test_json_rejects_unknown_fields():
    with pytest.raises(ValueError):
        BasisIndex.from_json({"k": 0, "word": "L-1^2"})
    with pytest.raises(ValueError):
        ModuleVector.from_json([{"index": {}, "coeff": "1", "extra": 0}])
    assert ModuleVector.from_json([{"index": {}, "coeff": "1"}]) == cyclic()


def test_labels():
    assert str(basis_vector(k=2, lam=(1, 0))) == "M0^2*L-1*L0*w"
    assert str(cyclic().scale(-1) + basis_vector(nu=(0,), coeff=Fraction(1, 2))) == "-w + 1/2*Y-1*w"
