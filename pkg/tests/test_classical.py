from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import classical_letters, words
from queerkit import classical as cl
from queerkit.classical import (
    ClassicalPBWMonomial,
    QnMatrix,
    RootDatum,
    classical_rules,
    dim_schur,
    dim_schur_zero,
    lie_normal_form,
    qn_bracket,
    schur_basis,
    schur_rules,
)
from queerkit.freealg import Element, NonHomogeneous

E = Element.generator
GRID = [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)]


def M(n, g):
    return QnMatrix.from_generator(n, g)


def test_bracket_examples():
    n = 3
    assert qn_bracket(M(n, cl.x(1, 3)), M(n, cl.x(3, 1))) == M(n, cl.h(1)) - M(n, cl.h(3))
    assert qn_bracket(M(n, cl.xb(1, 3)), M(n, cl.xb(3, 1))) == M(n, cl.h(1)) + M(n, cl.h(3))
    assert qn_bracket(M(n, cl.h(1)), M(n, cl.h(2))) == QnMatrix(n)
    with pytest.raises(NonHomogeneous):
        qn_bracket(M(n, cl.x(1, 2)) + M(n, cl.xb(1, 2)), M(n, cl.h(1)))


def _q_letters(n):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    out = [cl.x(i, j) for i, j in pairs] + [cl.xb(i, j) for i, j in pairs]
    return out + [cl.h(i) for i in range(1, n + 1)] + [cl.hb(i) for i in range(1, n + 1)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bracket_table_matches_matrices(n):
    letters = _q_letters(n)
    checked = 0
    for a in letters:
        for b in letters:
            if a.family in ("x", "xb") and b.family in ("h", "hb"):
                continue
            assert cl.lemma_commutator(n, a, b) == qn_bracket(M(n, a), M(n, b)), (a, b)
            checked += 1
    assert checked > 0


def test_root_datum():
    rd = RootDatum(3)
    assert rd.positive == [(1, 2), (1, 3), (2, 3)]
    assert rd.vector(1, 3) == (1, 0, -1)
    assert rd.pairing(3, (1, 3)) == -1
    assert RootDatum(1).roots == []


def test_classical_rule_examples():
    sys = classical_rules(3)
    lhs = Element.from_word((cl.x(1, 2, 2), cl.h(1)))
    assert sys.normal_form(lhs) == sys.normal_form((E(cl.h(1)) - 2) * E(cl.x(1, 2, 2)))
    lhs = Element.from_word((cl.xb(1, 2), cl.xb(2, 1)))
    expected = -Element.from_word((cl.xb(2, 1), cl.xb(1, 2))) + E(cl.h(1)) + E(cl.h(2))
    assert sys.normal_form(lhs) == expected
    assert sys.normal_form(Element.from_word((cl.xb(1, 3), cl.xb(1, 3)))).is_zero()
    assert sys.normal_form(Element.from_word((cl.hb(2), cl.hb(2)))) == E(cl.h(2))


def test_rank_one_is_degenerate():
    sys = classical_rules(1)
    h1 = E(cl.h(1))
    assert sys.normal_form(Element.from_word((cl.hb(1), cl.h(1), cl.hb(1)))) == sys.normal_form(h1 * h1)
    assert sys.normal_form(h1 * h1) == h1 + 2 * E(cl.h(1, 2))


def test_odd_cartan_sign_correction():
    """xb_{i,j} hb_k against the two possible signs of the x_{i,j} term.

    The matrix bracket decides: with k = i, hb_i xb_{i,j} = x_{i,j} and
    xb_{i,j} hb_i = 0, so the x-term enters with a plus sign.
    """
    n, i, j = 2, 1, 2
    lhs = Element.from_word((cl.xb(i, j), cl.hb(i)))
    corrected = -Element.from_word((cl.hb(i), cl.xb(i, j))) + E(cl.x(i, j))
    printed = -Element.from_word((cl.hb(i), cl.xb(i, j))) - E(cl.x(i, j))
    assert lie_normal_form(lhs - corrected, n).is_zero()
    assert lie_normal_form(lhs - printed, n) == 2 * E(cl.e(1))
    assert cl.div_root_formula(4, (i, j), i, 1, 2) == corrected


def _brute_matrices(n, r):
    out = []
    for a0 in product(range(r + 1), repeat=n * n):
        for a1 in product((0, 1), repeat=n * n):
            if sum(a0) + sum(a1) == r:
                out.append((a0, a1))
    return out


@pytest.mark.parametrize("n,r", GRID + [(1, 0), (3, 0)])
def test_dimension_formulas(n, r):
    brute = _brute_matrices(n, r)
    assert dim_schur(n, r) == len(brute) == len(cl.matrices_nz2(n, r)) == len(schur_basis(n, r))
    lams = [lam for lam in product(range(r + 1), repeat=n) if sum(lam) == r]
    assert dim_schur_zero(n, r) == sum(2 ** sum(1 for v in lam if v) for lam in lams)


def test_dimension_examples():
    assert dim_schur(3, 0) == 1
    assert dim_schur(2, 2) == 32
    assert dim_schur_zero(2, 2) == 8


def test_schur_basis_small():
    assert [str(el) for _, el in schur_basis(1, 0)] == ["1_(0)"]
    assert sorted(str(el) for _, el in schur_basis(1, 1)) == ["1_(1)", "1_(1)*hb1"]
    labels = [lab for lab, _ in schur_basis(2, 2)]
    assert len(labels) == 32
    assert all(sum(map(sum, lab["A0"])) + sum(map(sum, lab["A1"])) == 2 for lab in labels)


def test_schur_rule_examples():
    sys = schur_rules(2, 2)
    one20, one11, one02 = (E(cl.one(lam)) for lam in [(2, 0), (1, 1), (0, 2)])
    assert sys.normal_form(one11 * one11) == one11
    assert sys.normal_form(one11 * one20).is_zero()
    # e1 raises the weight by (1,-1): (2,0) + alpha leaves Lambda(2,2)
    assert sys.normal_form(E(cl.e(1)) * one20).is_zero()
    assert sys.normal_form(E(cl.e(1)) * one11) == Element.from_word((cl.one((2, 0)), cl.e(1)))
    assert sys.normal_form(E(cl.hb(1)) * one02).is_zero()
    assert sys.normal_form(E(cl.h(1)) * one20) == 2 * one20
    assert sys.normal_form(Element.from_word((cl.h(1, 3),))).is_zero()


@pytest.mark.parametrize("n,r", GRID)
def test_quotient_relations(n, r):
    sys = schur_rules(n, r)
    for name, el in cl.relations_qs_extra(n, r) + cl.relations_qs_idempotent(n, r):
        assert sys.normal_form(el).is_zero(), name


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_defining_relations(n):
    sys = classical_rules(n)
    for name, el in cl.relations_qs(n):
        assert sys.normal_form(el).is_zero(), name
        assert lie_normal_form(el, n).is_zero(), name


def _is_pbw(word, n):
    mono = ClassicalPBWMonomial.from_word(n, word)
    return mono.word() == tuple(word)


_letters3 = classical_letters(3)


@settings(max_examples=400)
@given(words(_letters3, 1, 6), st.integers(-3, 3))
def test_integrality_and_pbw(word, c):
    sys = classical_rules(3)
    nf = sys.normal_form(Element.from_word(word, c))
    for w, coeff in nf.terms.items():
        assert int(coeff) == coeff
        assert _is_pbw(w, 3)


@settings(max_examples=300)
@given(words(_letters3, 1, 5))
def test_lie_engine_agrees_with_kostant_engine(word):
    x = Element.from_word(word)
    assert lie_normal_form(x - classical_rules(3).normal_form(x), 3).is_zero()


_monos = [ClassicalPBWMonomial(a, b) for a, b in cl.matrices_nz2(2, 2) + cl.matrices_nz2(2, 1)]


@settings(max_examples=200)
@given(st.sampled_from(_monos), st.sampled_from(_monos))
def test_degree_filtration(a, b):
    nf = classical_rules(2).normal_form(a.element() * b.element())
    for w in nf.terms:
        assert ClassicalPBWMonomial.from_word(2, w).degree() <= a.degree() + b.degree()


def test_json_label():
    lab, el = schur_basis(2, 1)[0]
    assert set(lab) == {"A0", "A1", "lambda"}
    mono = ClassicalPBWMonomial(lab["A0"], lab["A1"])
    assert Element.from_word(mono.u_word()) == el
