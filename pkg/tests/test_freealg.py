import pytest
from hypothesis import given, settings, strategies as st

from conftest import classical_letters, lie_letters, quantum_schur_letters, schur_letters, words, x_letters
from queerkit import classical as cl
from queerkit import quantum as qu
from queerkit.freealg import (
    AlphabetMismatch,
    Element,
    FuelExhausted,
    Identity,
    NonHomogeneous,
    element_from_json,
    element_to_json,
    multiply,
    normal_form,
    parse_element,
    super_commutator,
)
from queerkit.scalar import Q

E = Element.generator
e1, f1, h1, h2 = E(cl.e(1)), E(cl.f(1)), E(cl.h(1)), E(cl.h(2))


def test_multiply_examples():
    assert multiply(Element.scalar(1), e1) == e1
    assert multiply(e1, f1) == Element.from_word((cl.e(1), cl.f(1)))
    assert multiply(2 * e1, 3 * f1) == Element.from_word((cl.e(1), cl.f(1)), 6)


def test_multiply_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        multiply(e1, E(qu.K(1)))


def test_super_commutator_examples():
    assert super_commutator(h1, h2) == h1 * h2 - h2 * h1
    hb1 = E(cl.hb(1))
    assert super_commutator(hb1, hb1) == 2 * hb1 * hb1
    assert super_commutator(e1, e1).is_zero()
    with pytest.raises(NonHomogeneous):
        super_commutator(e1 + E(cl.eb(1)), e1)


def test_normal_form_examples():
    sys = cl.classical_rules(2)
    assert normal_form(Element(), sys).is_zero()
    pbw = f1 * h1 * e1
    assert normal_form(pbw, sys) == pbw
    assert normal_form(e1 * f1, sys) == f1 * e1 + h1 - h2


def test_fuel_exhaustion(monkeypatch):
    word = Element.from_word((cl.e(1), cl.f(1)) * 3)
    with pytest.raises(FuelExhausted):
        cl.classical_rules(2).normal_form(word, fuel=2)
    monkeypatch.setenv("QUEERKIT_FUEL", "3")
    fresh = type(cl.classical_rules(2))("probe", cl.classical_rules(2).rules, cl.classical_rules(2).word_key)
    assert fresh.fuel == 3
    with pytest.raises(FuelExhausted):
        fresh.normal_form(word)


def test_parse_grammar():
    x = parse_element("E1*Fb2 + K3*Kb3 - X(1,3) + Xb(3,1)*Xd(1,3;2) + 2*h1*hb3 + q*e1")
    assert len(x) == 6
    assert str(parse_element("Xd(1,3;2)")) == "Xd(1,3;2)"
    assert parse_element("(q - q^-1)*K1") == E(qu.K(1)).scale(Q - Q.inverse())
    with pytest.raises(ValueError):
        parse_element("e1 * ")


_json_letters = classical_letters(3) + x_letters(3)


@st.composite
def elements(draw, letters):
    out = Element()
    for _ in range(draw(st.integers(0, 4))):
        w = draw(words(letters, 0, 4))
        c = draw(st.sampled_from([1, -2, Q, Q.inverse() * 3, (Q + 1) / (Q - 1)]))
        out = out + Element.from_word(w, c)
    return out


@settings(max_examples=200)
@given(st.one_of(elements(classical_letters(3)), elements(x_letters(3))))
def test_json_round_trip(x):
    assert element_from_json(element_to_json(x)) == x


@settings(max_examples=200)
@given(words(_json_letters[:20], 0, 5), words(_json_letters[:20], 0, 5))
def test_parity_is_additive(a, b):
    x, y = Element.from_word(a), Element.from_word(b)
    assert (x * y).parity() == (x.parity() + y.parity()) % 2


def test_identity_record():
    rec = Identity("q-ppee/case1", "Lemma q-ppee", e1 * f1, f1 * e1, {"n": 2, "i": 1, "pattern": "i<j"}, ("L",))
    assert rec.key == "q-ppee/case1[i=1,n=2]"
    back = Identity.from_json(rec.to_json())
    assert back.key == rec.key and back.difference() == rec.difference()


# Confluence: associativity of the straightened product and independence of
# the redex strategy, for every rewrite system in the package.

ENGINES = {
    "classical": (lambda: cl.classical_rules(3), classical_letters(3)),
    "lie": (lambda: cl.lie_rules(3), lie_letters(3)),
    "schur": (lambda: cl.schur_rules(2, 3), schur_letters(2, 3)),
    "olshanski": (lambda: qu.olshanski_rules(3), qu.l_letters(3)),
    "lusztig": (lambda: qu.lusztig_rules(3), x_letters(3)),
    "quantum-schur": (lambda: qu.quantum_schur_rules(2, 3), quantum_schur_letters(2, 3)),
}


@pytest.mark.parametrize("engine", list(ENGINES))
def test_confluence(engine):
    make, letters = ENGINES[engine]
    sys = make()

    @settings(max_examples=1000)
    @given(words(letters, 3, 3), words(letters, 6, 6))
    def check(triple, six):
        a, b, c = (E(g) for g in triple)
        assert sys.normal_form(sys.normal_form(a * b) * c) == sys.normal_form(a * sys.normal_form(b * c))
        w = Element.from_word(six)
        left = sys.normal_form(w)
        assert left == sys.normal_form(w, strategy="rightmost")
        assert sys.normal_form(left) == left
        assert all(sys.is_irreducible(word) for word in left.terms)

    check()
