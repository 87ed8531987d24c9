import pytest
from hypothesis import given, settings

from conftest import words, x_letters
from queerkit import classical as cl
from queerkit import quantum as qu
from queerkit.freealg import Element
from queerkit.quantum import (
    E_,
    K,
    Kb,
    Kbr,
    Ki,
    L,
    SignData,
    Tensor,
    X,
    Xb,
    comultiply,
    comultiply_tensor,
    dj_generator,
    l_normal_form,
    lusztig_rules,
    olshanski_rules,
    omega,
    one_q,
    quantum_schur_basis,
    quantum_schur_rules,
    root_vector,
    to_l_form,
    xl_form,
)
from queerkit.scalar import ONE, Q, is_laurent_integral, qbinom

QQ = Q - Q.inverse()
GRID = [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)]


def W(*gs, c=1):
    return Element.from_word(gs, c)


def test_sign_data():
    S = SignData
    assert S.phi(2, -2) == -1 and S.phi(-2, 2) == 1 and S.phi(1, 2) == 0
    assert S.p(1, 2) == 0 and S.p(-1, 2) == 1
    assert S.theta(1, -2, -3) == -1 and S.theta(1, 2, -3) == 1


def test_olshanski_examples():
    sys = olshanski_rules(3)
    assert sys.normal_form(W(L(2, 2), L(-2, -2))) == Element.scalar(ONE)
    assert sys.normal_form(W(L(-2, -2), L(2, 2))) == Element.scalar(ONE)
    # K_a L_{i,j} with |i| = a and |j| != a
    lhs = W(L(1, 1), L(1, 3))
    assert sys.normal_form(lhs) == sys.normal_form(W(L(1, 3), L(1, 1), c=Q.inverse()))
    letters = qu.l_letters(3)
    ordered = W(letters[0], letters[7], letters[-1])
    assert sys.normal_form(ordered) == ordered


def test_olshanski_relations_hold():
    n = 2
    idx = [a for a in range(-n, n + 1) if a]
    sys = olshanski_rules(n)
    pairs = [(i, j) for i in idx for j in idx if i <= j]
    for i, j in pairs:
        for k, l in pairs:
            assert sys.normal_form(qu.olshanski_relation(i, j, k, l)).is_zero(), (i, j, k, l)


def test_dj_dictionary():
    c = ONE / QQ
    assert dj_generator("K2") == E_(L(2, 2))
    assert dj_generator("E1") == W(L(2, 2), L(-2, -1), c=-c)
    assert dj_generator("F1") == W(L(1, 2), L(-2, -2), c=c)
    assert dj_generator("Kb2") == W(L(-2, 2), c=-c)


def test_root_vector_examples():
    assert root_vector(2, 3, 0) == E_(X(2, 3))
    assert root_vector(3, 2, 1) == E_(Xb(3, 2))
    assert xl_form(3, 1, 1) == W(L(-1, 3), L(-3, -3), c=-ONE / QQ)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_root_vectors_match_closed_forms(n):
    sys = olshanski_rules(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for parity in (0, 1):
                closed = xl_form(i, j, parity)
                for k in range(min(i, j) + 1, max(i, j)):
                    rec = to_l_form(root_vector(i, j, parity, k))
                    assert sys.normal_form(rec - closed).is_zero(), (i, j, parity, k)
                if abs(i - j) == 1:
                    assert sys.normal_form(to_l_form(root_vector(i, j, parity)) - closed).is_zero()


def test_omega_examples():
    assert omega(E_(X(1, 2))) == E_(X(2, 1))
    assert omega(E_(K(2)).scale(Q)) == E_(Ki(2)).scale(Q.inverse())
    assert omega(E_(Xb(1, 3))) == E_(Xb(3, 1))


_omega_letters = [g for g in x_letters(3) if g.family != "Kbr"] + [Kbr(1, 0, 1), Kbr(2, 0, 2)]


@settings(max_examples=500)
@given(words(_omega_letters, 1, 3), words(_omega_letters, 1, 2))
def test_omega_is_anti_automorphism(a, b):
    x, y = Element.from_word(a, Q), Element.from_word(b)
    sys = lusztig_rules(3)
    assert omega(omega(x)) == x
    lhs = sys.normal_form(omega(sys.normal_form(x * y)))
    assert lhs == sys.normal_form(omega(y) * omega(x))
    assert l_normal_form(omega(sys.normal_form(x * y)) - omega(y) * omega(x), 3).is_zero()


def _tensor(*parts):
    """Pure tensor of Elements, expanded bilinearly."""
    terms = {(): ONE}
    for p in parts:
        nxt = {}
        for w, c in terms.items():
            for pw, pc in p.terms.items():
                nxt[w + (pw,)] = nxt.get(w + (pw,), 0) + c * pc
        terms = nxt
    return Tensor(len(parts), terms)


def test_comultiply_examples():
    n = 3
    sys = olshanski_rules(n)
    nf = lambda t: t.map_slots(sys.normal_form)
    assert comultiply(E_(L(2, 2))) == _tensor(E_(L(2, 2)), E_(L(2, 2)))
    j = 1
    Ej = to_l_form(E_(X(j, j + 1)))
    kk = to_l_form(W(Ki(j), K(j + 1)))
    expected = _tensor(Element.scalar(ONE), Ej) + _tensor(Ej, kk)
    assert nf(comultiply(Ej)) == nf(expected)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_coassociativity(n):
    idx = [a for a in range(-n, n + 1) if a]
    for i in idx:
        for j in idx:
            if i <= j:
                d = comultiply(E_(L(i, j)))
                assert comultiply_tensor(d, 0) == comultiply_tensor(d, 1), (i, j)


def test_lusztig_examples():
    sys = lusztig_rules(3)
    assert sys.normal_form(W(Xb(1, 3), Xb(1, 3))) == E_(X(1, 3, 2)).scale(-QQ)
    assert sys.normal_form(W(Xb(3, 1), Xb(3, 1))) == E_(X(3, 1, 2)).scale(QQ)


def test_quantum_schur_examples():
    sys = quantum_schur_rules(2, 2)
    assert sys.normal_form(W(X(1, 2), one_q((2, 0)))).is_zero()
    assert sys.normal_form(W(Kb(1), one_q((0, 2)))).is_zero()
    for lam in cl.compositions(2, 2):
        for c in (-1, 0, 1):
            for t in (1, 2):
                got = sys.normal_form(W(Kbr(1, c, t), one_q(lam)))
                assert got == E_(one_q(lam)).scale(qbinom(lam[0] + c, t))


def test_quantum_schur_basis():
    assert [str(el) for _, el in quantum_schur_basis(3, 0)] == ["1_(0,0,0)"]
    assert len(quantum_schur_basis(2, 2)) == 32
    assert sorted(str(el) for _, el in quantum_schur_basis(1, 2)) == ["1_(2)", "1_(2)*Kb1"]
    labels = [(lab["A0"], lab["A1"]) for lab, _ in quantum_schur_basis(2, 2)]
    classical = [(lab["A0"], lab["A1"]) for lab, _ in cl.schur_basis(2, 2)]
    assert labels == classical


_lusztig = x_letters(3, max_order=3)


@settings(max_examples=500)
@given(words(_lusztig, 2, 5))
def test_integrality(word):
    nf = lusztig_rules(3).normal_form(Element.from_word(word))
    assert all(is_laurent_integral(c) for c in nf.terms.values())


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_presentations_agree(n):
    sys = olshanski_rules(n)
    xs = lusztig_rules(n)
    rels = qu.relations_qq(n) + qu.relations_old(n) + qu.relations_kx(n)
    for name, el in rels:
        assert sys.normal_form(to_l_form(el)).is_zero(), name
        assert xs.normal_form(el).is_zero(), name


@pytest.mark.parametrize("n,r", GRID)
def test_quotient_relations(n, r):
    sys = quantum_schur_rules(n, r)
    for name, el in qu.relations_qq_extra(n, r) + qu.relations_qq_idempotent(n, r):
        assert sys.normal_form(el).is_zero(), name


def test_odd_root_sign_correction():
    """The i<a<j middle term of X_{i,j}^{(m)} Kb_a must be odd, like the left side."""
    i, a, j, m, n = 1, 2, 3, 2, 3
    lhs = W(X(i, j, m), Kb(a))
    rhs = qu.xkbar(i, j, m, a)
    assert l_normal_form(lhs - rhs, n).is_zero()
    x1 = X(i, j, m - 1)
    odd_term = W(X(a, j), Xb(i, a), Ki(a), x1, c=Q ** (2 - m) * QQ)
    even_term = W(X(a, j), X(i, a), Ki(a), x1, c=Q ** (2 - m) * QQ)
    printed = rhs + odd_term - even_term
    assert not l_normal_form(lhs - printed, n).is_zero()
