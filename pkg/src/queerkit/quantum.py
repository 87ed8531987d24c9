"""The quantum queer superalgebra U_q(q(n)) and its Schur quotient.

Two straightening engines live here.

* The L-engine (:func:`olshanski_rules`) works on Olshanski's generators
  ``L(i,j)``.  Its rules are obtained by row-reducing the quadratic exchange
  relations, so nothing in it depends on the root-vector formulas.
* The X-engine (:func:`lusztig_rules`) works on divided powers ``X(i,j;m)``,
  odd root vectors ``Xb(i,j)``, ``K``/``Ki``, bracket binomials ``Kbr`` and
  the odd Cartan letters ``Kb``.  Its rules are the commutation formulas for
  root vectors read left to right, plus their images under Omega.

The two engines are compared through :func:`to_l_form`.

Letters: ``X(i,j)`` with ``s = m`` is the divided power X_{i,j}^{(m)};
``Kbr(i;c;t)`` is the bracket [K_i; c / t].  Index conventions: roots are
pairs (i, j) with i != j in 1..n; positive roots have i < j.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product as iproduct

from .classical import (
    pairing,
    compositions,
    e_order,
    f_order,
    matrices_nz2,
    ClassicalPBWMonomial,
)
from .freealg import Element, Generator, Identity, RewriteSystem, Rule, gen
from .scalar import ONE, Q, Scalar, qbinom, qfactorial, qint, qnum, bracket_eval

__all__ = [
    "SignData",
    "L",
    "olshanski_relation",
    "olshanski_rules",
    "dj_generator",
    "root_vector",
    "xl_form",
    "letter_to_l",
    "to_l_form",
    "omega",
    "comultiply",
    "lusztig_rules",
    "XSystem",
    "laurent_to_basis",
    "relations_qq",
    "relations_qq_extra",
    "relations_qq_idempotent",
    "relations_old",
    "QuantumPBWMonomial",
    "QuantumSchurSystem",
    "quantum_schur_rules",
    "quantum_schur_basis",
    "relations_kx",
    "Identity",
    "commutation_corpus",
    "pattern_holds",
]

QQ = Q - Q.inverse()  # q - q^{-1}


def _qp(e: int) -> Scalar:
    return Scalar.q_power(e)


def _sgn(a: int) -> int:
    return 1 if a > 0 else -1


class SignData:
    """The sign functions of the exchange relations on I(n|n)."""

    def __init__(self, n: int):
        self.n = n
        self.indices = list(range(-n, 0)) + list(range(1, n + 1))

    @staticmethod
    def sgn(a: int) -> int:
        return _sgn(a)

    @staticmethod
    def phi(i: int, j: int) -> int:
        return _sgn(j) if abs(i) == abs(j) else 0

    @staticmethod
    def p(i: int, j: int) -> int:
        return 0 if i * j > 0 else 1

    @staticmethod
    def theta(i: int, j: int, k: int) -> int:
        s = _sgn(i) + _sgn(j) + _sgn(k)
        return (s > 0) - (s < 0)


# ---------------------------------------------------------------------------
# the L-engine


def L(i: int, j: int) -> Generator:
    if i > j or i == 0 or j == 0:
        raise ValueError(f"L({i},{j}) is not a generator")
    return gen("L", (i, j))


def _EL(i, j) -> Element:
    return Element.generator(L(i, j))


def olshanski_relation(i: int, j: int, k: int, l: int) -> Element:
    """LHS - RHS of the exchange relation for L_{i,j} and L_{k,l}."""
    S = SignData
    out = Element()
    sign = -1 if S.p(i, j) * S.p(k, l) else 1
    out = out + (_EL(i, j) * _EL(k, l)).scale(sign * _qp(S.phi(j, l)))
    if k <= j < l:
        out = out + (_EL(i, l) * _EL(k, j)).scale(QQ * S.theta(i, j, k))
    if i <= -l < j <= -k:
        out = out + (_EL(i, -l) * _EL(k, -j)).scale(QQ * S.theta(-i, -j, k))
    out = out - (_EL(k, l) * _EL(i, j)).scale(_qp(S.phi(i, k)))
    if k < i <= l:
        out = out - (_EL(i, l) * _EL(k, j)).scale(QQ * S.theta(i, j, k))
    if -l <= i < -k <= j:
        out = out - (_EL(-i, l) * _EL(-k, j)).scale(QQ * S.theta(-i, -j, k))
    return out


def l_letters(n: int) -> list:
    """L-generators in normal-form order: Cartan, lowering, odd diagonal, raising."""
    out = []
    for a in range(1, n + 1):
        out += [L(a, a), L(-a, -a)]
    for p, c in f_order(n):
        out += [L(c, p), L(-c, p)]
    for a in range(1, n + 1):
        out.append(L(-a, a))
    for c, l in e_order(n):
        out += [L(-l, -c), L(-l, c)]
    return out


class _LSystem(RewriteSystem):
    def __init__(self, n: int, fuel: int | None = None):
        self.n = n
        letters = l_letters(n)
        self.rank = {g: r for r, g in enumerate(letters)}
        rank = self.rank
        self.table = _exchange_table(n)

        def key(word):
            return (len(word), *[rank[g] for g in word])

        def pair(a, b):
            if a.idx[0] == a.idx[1] and b.idx[0] == b.idx[1] and a.idx[0] == -b.idx[0]:
                return {(): 1}
            return self.table.get((a, b))

        super().__init__(f"olshanski(n={n})", [Rule("exchange", 2, pair)], key, fuel)


def _word_lex(rank):
    return lambda w: tuple(rank[g] for g in w)


@lru_cache(maxsize=None)
def _exchange_table(n: int) -> dict:
    """Rules {(a, b): {word: coeff}} from row-reducing the quadratic relations.

    Each relation lives in one component, the multiset of |indices|; the
    pivot of each reduced row is its lex-largest word.  The pivots must be
    exactly the pairs that are out of normal-form order (or odd squares).
    """
    letters = l_letters(n)
    rank = {g: r for r, g in enumerate(letters)}
    lex = _word_lex(rank)
    idx = SignData(n).indices
    comps: dict = {}
    for i, j, k, l in iproduct(idx, repeat=4):
        if i > j or k > l:
            continue
        rel = olshanski_relation(i, j, k, l)
        if rel.is_zero():
            continue
        ck = tuple(sorted(abs(t) for t in (i, j, k, l)))
        comps.setdefault(ck, []).append(dict(rel.terms))
    table = {}
    for rows in comps.values():
        for row in _rref(rows, lex):
            piv = max(row, key=lex)
            a, b = piv
            c = row[piv]
            table[(a, b)] = {w: -v / c for w, v in row.items() if w != piv}
    expected = set()
    for a in letters:
        for b in letters:
            if rank[a] > rank[b] or (a == b and a.odd):
                expected.add((a, b))
    if set(table) != expected:
        extra = set(table) - expected
        missing = expected - set(table)
        raise AssertionError(f"exchange pivots differ from PBW pairs: extra {sorted(map(str, extra))[:5]}, missing {sorted(map(str, missing))[:5]}")
    return table


def _rref(rows: list, lex) -> list:
    """Reduced row echelon form with pivots at lex-largest words."""
    basis: list = []  # list of (pivot, row)
    for row in rows:
        row = {w: c for w, c in row.items() if c != 0}
        for piv, b in basis:
            c = row.get(piv)
            if c:
                for w, v in b.items():
                    nv = row.get(w, 0) - c * v
                    if nv == 0:
                        row.pop(w, None)
                    else:
                        row[w] = nv
        if not row:
            continue
        piv = max(row, key=lex)
        inv = 1 / row[piv] if isinstance(row[piv], Scalar) else Scalar(1) / row[piv]
        row = {w: v * inv for w, v in row.items()}
        # keep earlier rows reduced against the new pivot
        new_basis = []
        for p2, b in basis:
            c = b.get(piv)
            if c:
                b = dict(b)
                for w, v in row.items():
                    nv = b.get(w, 0) - c * v
                    if nv == 0:
                        b.pop(w, None)
                    else:
                        b[w] = nv
            new_basis.append((p2, b))
        basis = new_basis + [(piv, row)]
    return [b for _, b in basis]


@lru_cache(maxsize=None)
def olshanski_rules(n: int) -> RewriteSystem:
    if n < 1:
        raise ValueError("need n >= 1")
    return _LSystem(n)


# ---------------------------------------------------------------------------
# Drinfeld-Jimbo and root-vector letters


def X(i: int, j: int, m: int = 1) -> Generator:
    return Generator("X", (i, j), m, 0)


def Xb(i: int, j: int) -> Generator:
    return Generator("Xb", (i, j), 0, 1)


def K(i: int) -> Generator:
    return Generator("K", (i,), 0, 0)


def Ki(i: int) -> Generator:
    return Generator("Ki", (i,), 0, 0)


def Kb(i: int) -> Generator:
    return Generator("Kb", (i,), 0, 1)


def Kbr(i: int, c: int, t: int) -> Generator:
    return Generator("Kbr", (i, c), t, 0)


def KKbr(i: int, t: int) -> Generator:
    """The single letter K_i [K_i; 0 / t] used by the X-engine's Cartan basis."""
    return Generator("KKbr", (i,), t, 0)


def one_q(lam) -> Generator:
    return Generator("one", tuple(lam), 0, 0)


def E_(g: Generator) -> Element:
    return Element.generator(g)


def _word(*gs) -> Element:
    return Element.from_word(tuple(gs))


_DJ = {
    "E": lambda j: X(j, j + 1),
    "F": lambda j: X(j + 1, j),
    "Eb": lambda j: Xb(j, j + 1),
    "Fb": lambda j: Xb(j + 1, j),
    "K": K,
    "Ki": Ki,
    "Kb": Kb,
}


def dj_generator(symbol: str) -> Element:
    """The L-expression of a Drinfeld-Jimbo generator such as ``E2`` or ``Kb1``."""
    import re

    m = re.fullmatch(r"(Eb|Fb|Kb|Ki|E|F|K)(\d+)", symbol.strip())
    if not m:
        raise ValueError(f"unknown generator {symbol!r}")
    fam, k = m.group(1), int(m.group(2))
    return letter_to_l(_DJ[fam](k))


def xl_form(i: int, j: int, parity: int) -> Element:
    """Closed L-form of X_{i,j} (parity 0) or Xb_{i,j} (parity 1)."""
    c = 1 / QQ
    if i < j:
        tail = L(-j, i) if parity else L(-j, -i)
        return _word(L(j, j), tail).scale(-c)
    a, b = j, i  # a < b
    if parity:
        return _word(L(-a, b), L(-b, -b)).scale(-c)
    return _word(L(a, b), L(-b, -b)).scale(c)


def root_vector(i: int, j: int, parity: int, k: int | None = None) -> Element:
    """X_{i,j} or Xb_{i,j} through the q-commutator recursion over simple letters.

    ``k`` picks the intermediate index of the outer step; inner steps use the
    neighbour of ``i``.
    """
    if i == j:
        raise ValueError("roots need i != j")
    if abs(j - i) == 1:
        return E_(Xb(i, j) if parity else X(i, j))
    if k is None:
        k = i + 1 if i < j else i - 1
    if not min(i, j) < k < max(i, j):
        raise ValueError("k must lie strictly between i and j")
    a = root_vector(i, k, 0)
    if i < j:
        b = root_vector(k, j, parity)
        return a * b - (b * a).scale(Q)
    if parity:
        a = root_vector(i, k, 1)
        b = root_vector(k, j, 0)
        return a * b - (b * a).scale(Q.inverse())
    b = root_vector(k, j, 0)
    return a * b - (b * a).scale(Q.inverse())


def bracket_laurent(c: int, t: int) -> dict:
    """[K; c / t] as a Laurent polynomial {exponent of K: Scalar}."""
    poly = {0: ONE}
    for s in range(1, t + 1):
        den = _qp(s) - _qp(-s)
        nxt: dict = {}
        for e, v in poly.items():
            for de, coef in ((1, _qp(c - s + 1)), (-1, -_qp(-c + s - 1))):
                nxt[e + de] = nxt.get(e + de, 0) + v * coef / den
        poly = {e: v for e, v in nxt.items() if v != 0}
    return poly


def _k_power(i: int, e: int) -> Element:
    g = L(i, i) if e > 0 else L(-i, -i)
    return Element.from_word((g,) * abs(e))


@lru_cache(maxsize=None)
def _letter_to_l_symbolic(g: Generator) -> Element:
    fam = g.family
    if fam == "L":
        return Element.generator(g)
    if fam == "K":
        return _EL(g.idx[0], g.idx[0])
    if fam == "Ki":
        i = g.idx[0]
        return _EL(-i, -i)
    if fam == "Kb":
        i = g.idx[0]
        return _EL(-i, i).scale(-1 / QQ)
    if fam == "Kbr":
        i, c = g.idx
        out = Element()
        for e, v in bracket_laurent(c, g.s).items():
            out = out + _k_power(i, e).scale(v)
        return out
    if fam == "KKbr":
        return _letter_to_l_symbolic(K(g.idx[0])) * _letter_to_l_symbolic(Kbr(g.idx[0], 0, g.s))
    if fam == "X":
        i, j = g.idx
        base = xl_form(i, j, 0)
        if g.s == 1:
            return base
        return (base ** g.s).scale(1 / qfactorial(g.s))
    if fam == "Xb":
        return xl_form(*g.idx, 1)
    raise ValueError(f"no L-form for {g}")


def letter_to_l(g: Generator, q=Q) -> Element:
    """L-expression of one X-alphabet letter; ``q`` may be a rational value."""
    out = _letter_to_l_symbolic(g)
    if isinstance(q, Scalar):
        return out
    return out.map_coeffs(lambda c: c.specialize(q) if isinstance(c, Scalar) else c)


def to_l_form(x: Element) -> Element:
    """Substitute L-forms for every X-alphabet letter of ``x``."""
    out = Element()
    for w, c in x.terms.items():
        term = Element.scalar(c)
        for g in w:
            term = term * _letter_to_l_symbolic(g)
        out = out + term
    return out


def l_normal_form(x: Element, n: int) -> Element:
    return olshanski_rules(n).normal_form(to_l_form(x))


# ---------------------------------------------------------------------------
# Omega and the comultiplication


def _omega_letter(g: Generator) -> Generator:
    fam = g.family
    if fam == "K":
        return Ki(g.idx[0])
    if fam == "Ki":
        return K(g.idx[0])
    if fam in ("X", "Xb"):
        i, j = g.idx
        return Generator(fam, (j, i), g.s, g.odd)
    if fam in ("Kb", "Kbr", "one"):
        return g
    raise ValueError(f"Omega is not defined on {g}")


def _bar(c):
    return c.bar() if isinstance(c, Scalar) else c


def omega(x: Element) -> Element:
    """The anti-involution: reverse words, swap X_{i,j} and X_{j,i}, q -> 1/q."""
    terms: dict = {}
    for w, c in x.terms.items():
        nw = ()
        for g in reversed(w):
            if g.family == "KKbr":
                nw += (Ki(g.idx[0]), Kbr(g.idx[0], 0, g.s))
            else:
                nw += (_omega_letter(g),)
        terms[nw] = terms.get(nw, 0) + _bar(c)
    return Element({w: c for w, c in terms.items() if c != 0})


class Tensor:
    """Finite sums of pure tensors of words, k factors, with Koszul signs."""

    __slots__ = ("terms", "k")

    def __init__(self, k: int, terms=None):
        self.k = k
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return Tensor(self.k, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Tensor(self.k, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                sign = 1
                # move each factor of w2 past the later factors of w1
                for a in range(self.k):
                    pa = sum(g.odd for g in w2[a]) & 1
                    if pa:
                        later = sum(g.odd for b in range(a + 1, self.k) for g in w1[b]) & 1
                        if later:
                            sign = -sign
                w = tuple(w1[a] + w2[a] for a in range(self.k))
                out[w] = out.get(w, 0) + sign * c1 * c2
        return Tensor(self.k, out)

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.k == other.k and self.terms == other.terms

    def map_slots(self, fn) -> "Tensor":
        """Apply a linear map Element -> Element to every factor."""
        out = Tensor(self.k, {tuple(() for _ in range(self.k)): 0})
        acc: dict = {}
        for w, c in self.terms.items():
            parts = [fn(Element.from_word(f)) for f in w]
            for combo in iproduct(*[list(p.terms.items()) for p in parts]):
                nw = tuple(t[0] for t in combo)
                v = c
                for t in combo:
                    v = v * t[1]
                acc[nw] = acc.get(nw, 0) + v
        out.terms = {w: v for w, v in acc.items() if v != 0}
        return out

    def __str__(self):
        from .freealg import format_word

        parts = []
        for w, c in self.terms.items():
            parts.append(f"({c})*" + " # ".join(format_word(f) or "1" for f in w))
        return " + ".join(parts) or "0"


def _delta_letter(g: Generator, n: int) -> Tensor:
    i, j = g.idx
    ks = [k for k in range(i, j + 1) if k != 0]
    return Tensor(2, {((L(i, k),), (L(k, j),)): 1 for k in ks})


def comultiply(x: Element, n: int | None = None) -> Tensor:
    """The algebra map L_{i,j} -> sum_k L_{i,k} (x) L_{k,j} on the tensor square."""
    out = Tensor(2)
    for w, c in x.terms.items():
        t = Tensor(2, {((), ()): c})
        for g in w:
            if g.family != "L":
                raise ValueError("comultiply expects an element over the L alphabet")
            t = t * _delta_letter(g, n)
        out = out + t
    return out


def comultiply_tensor(t: Tensor, slot: int) -> Tensor:
    """Apply the comultiplication to one factor of a tensor."""
    out = Tensor(t.k + 1)
    for w, c in t.terms.items():
        d = comultiply(Element.from_word(w[slot]))
        for dw, dc in d.terms.items():
            nw = tuple(w[:slot]) + dw + tuple(w[slot + 1 :])
            out.terms[nw] = out.terms.get(nw, 0) + c * dc
    out.terms = {w: v for w, v in out.terms.items() if v != 0}
    return out


# ---------------------------------------------------------------------------
# defining relations (each element is zero in the algebra)

QPLUS = Q + Q.inverse()  # q + q^{-1}


def _sc(a: Element, b: Element) -> Element:
    if a.parity() and b.parity():
        return a * b + b * a
    return a * b - b * a


def _e(j):
    return E_(X(j, j + 1))


def _f(j):
    return E_(X(j + 1, j))


def _eb(j):
    return E_(Xb(j, j + 1))


def _fb(j):
    return E_(Xb(j + 1, j))


def _k(i):
    return E_(K(i))


def _ki(i):
    return E_(Ki(i))


def _kb(i):
    return E_(Kb(i))


def relations_qq(n: int) -> list:
    """The Drinfeld-Jimbo relations QQ1-QQ6 as (label, element) pairs."""
    rels = []
    I = range(1, n + 1)
    J = range(1, n)
    one = Element.scalar(1)
    q = Q
    for i in I:
        rels.append((f"QQ1/KKi/{i}", _k(i) * _ki(i) - one))
        rels.append((f"QQ1/KiK/{i}", _ki(i) * _k(i) - one))
        for j in I:
            rels.append((f"QQ1/KK/{i},{j}", _k(i) * _k(j) - _k(j) * _k(i)))
            rels.append((f"QQ1/KKb/{i},{j}", _k(i) * _kb(j) - _kb(j) * _k(i)))
            rhs = Element()
            if i == j:
                rhs = (_k(i) * _k(i) - _ki(i) * _ki(i)).scale(2 / (q**2 - q**-2))
            rels.append((f"QQ1/KbKb/{i},{j}", _kb(i) * _kb(j) + _kb(j) * _kb(i) - rhs))
    for i in I:
        for j in J:
            p = pairing(i, j, j + 1)
            rels.append((f"QQ2/KE/{i},{j}", _k(i) * _e(j) - (_e(j) * _k(i)).scale(q**p)))
            rels.append((f"QQ2/KEb/{i},{j}", _k(i) * _eb(j) - (_eb(j) * _k(i)).scale(q**p)))
            rels.append((f"QQ2/KF/{i},{j}", _k(i) * _f(j) - (_f(j) * _k(i)).scale(q**-p)))
            rels.append((f"QQ2/KFb/{i},{j}", _k(i) * _fb(j) - (_fb(j) * _k(i)).scale(q**-p)))
    for i in I:
        kb = _kb(i)
        if i <= n - 1:
            rels.append((f"QQ3/KbE/{i}", kb * _e(i) - (_e(i) * kb).scale(q) - _eb(i) * _ki(i)))
            rels.append((f"QQ3/KbF/{i}", kb * _f(i) - (_f(i) * kb).scale(q) + _fb(i) * _k(i)))
            rels.append((f"QQ3/KbEb/{i}", kb * _eb(i) + (_eb(i) * kb).scale(q) - _e(i) * _ki(i)))
            rels.append((f"QQ3/KbFb/{i}", kb * _fb(i) + (_fb(i) * kb).scale(q) - _f(i) * _k(i)))
        if i >= 2:
            m = i - 1
            rels.append((f"QQ3/KbE-/{i}", (kb * _e(m)).scale(q) - _e(m) * kb + _ki(i) * _eb(m)))
            rels.append((f"QQ3/KbF-/{i}", (kb * _f(m)).scale(q) - _f(m) * kb - _k(i) * _fb(m)))
            rels.append((f"QQ3/KbEb-/{i}", (kb * _eb(m)).scale(q) + _eb(m) * kb - _ki(i) * _e(m)))
            rels.append((f"QQ3/KbFb-/{i}", (kb * _fb(m)).scale(q) + _fb(m) * kb - _k(i) * _f(m)))
        for j in J:
            if j in (i, i - 1):
                continue
            rels.append((f"QQ3/KbE0/{i},{j}", kb * _e(j) - _e(j) * kb))
            rels.append((f"QQ3/KbF0/{i},{j}", kb * _f(j) - _f(j) * kb))
            rels.append((f"QQ3/KbEb0/{i},{j}", kb * _eb(j) + _eb(j) * kb))
            rels.append((f"QQ3/KbFb0/{i},{j}", kb * _fb(j) + _fb(j) * kb))
    for i in J:
        for j in J:
            d = i == j
            z = Element()
            ef = (_k(i) * _ki(i + 1) - _ki(i) * _k(i + 1)).scale(1 / QQ) if d else z
            rels.append((f"QQ4/EF/{i},{j}", _e(i) * _f(j) - _f(j) * _e(i) - ef))
            ebfb = ((_k(i) * _k(i + 1) - _ki(i) * _ki(i + 1)).scale(1 / QQ) + (_kb(i) * _kb(i + 1)).scale(QQ)) if d else z
            rels.append((f"QQ4/EbarFbar/{i},{j}", _eb(i) * _fb(j) + _fb(j) * _eb(i) - ebfb))
            efb = (_ki(i + 1) * _kb(i) - _kb(i + 1) * _ki(i)) if d else z
            rels.append((f"QQ4/EFbar/{i},{j}", _e(i) * _fb(j) - _fb(j) * _e(i) - efb))
            ebf = (_k(i + 1) * _kb(i) - _kb(i + 1) * _k(i)) if d else z
            rels.append((f"QQ4/EbarF/{i},{j}", _eb(i) * _f(j) - _f(j) * _eb(i) - ebf))
    c = QQ / QPLUS
    for i in J:
        rels.append((f"QQ5/EbEb/{i}", _eb(i) * _eb(i) + (_e(i) * _e(i)).scale(c)))
        rels.append((f"QQ5/FbFb/{i}", _fb(i) * _fb(i) - (_f(i) * _f(i)).scale(c)))
        for j in J:
            if abs(i - j) != 1:
                rels.append((f"QQ5/EEb/{i},{j}", _e(i) * _eb(j) - _eb(j) * _e(i)))
                rels.append((f"QQ5/FFb/{i},{j}", _f(i) * _fb(j) - _fb(j) * _f(i)))
            if abs(i - j) > 1:
                rels.append((f"QQ5/EE/{i},{j}", _e(i) * _e(j) - _e(j) * _e(i)))
                rels.append((f"QQ5/FF/{i},{j}", _f(i) * _f(j) - _f(j) * _f(i)))
                rels.append((f"QQ5/EbEb/{i},{j}", _eb(i) * _eb(j) + _eb(j) * _eb(i)))
                rels.append((f"QQ5/FbFb/{i},{j}", _fb(i) * _fb(j) + _fb(j) * _fb(i)))
    for i in range(1, n - 1):
        a = i + 1
        rels.append((f"QQ5/EEnext/{i}", _e(i) * _e(a) - (_e(a) * _e(i)).scale(q) - (_eb(i) * _eb(a) + (_eb(a) * _eb(i)).scale(q))))
        rels.append((f"QQ5/EEbnext/{i}", _e(i) * _eb(a) - (_eb(a) * _e(i)).scale(q) - (_eb(i) * _e(a) - (_e(a) * _eb(i)).scale(q))))
        rels.append((f"QQ5/FFnext/{i}", (_f(a) * _f(i)).scale(q) - _f(i) * _f(a) - ((_fb(a) * _fb(i)).scale(q) + _fb(i) * _fb(a))))
        rels.append((f"QQ5/FFbnext/{i}", (_fb(a) * _f(i)).scale(q) - _f(i) * _fb(a) - ((_f(a) * _fb(i)).scale(q) - _fb(i) * _f(a))))
    for i in J:
        for j in J:
            if abs(i - j) != 1:
                continue
            for lab, x, y in (("EE", _e(i), _e(j)), ("FF", _f(i), _f(j)), ("EEb", _e(i), _eb(j)), ("FFb", _f(i), _fb(j))):
                rels.append((f"QQ6/{lab}/{i},{j}", x * x * y - (x * y * x).scale(QPLUS) + y * x * x))
    return rels


def relations_qq_extra(n: int, r: int) -> list:
    """QQ7-QQ9, the extra relations of the quotient U_q(n, r)."""
    rels = []
    prod = Element.scalar(1)
    for i in range(1, n + 1):
        prod = prod * _k(i)
    rels.append(("QQ7", prod - Element.scalar(_qp(r))))
    for i in range(1, n + 1):
        tail = Element.scalar(1)
        for k in range(1, r + 1):
            tail = tail * (_k(i) - Element.scalar(_qp(k)))
        rels.append((f"QQ8/{i}", (_k(i) - Element.scalar(1)) * tail))
        rels.append((f"QQ9/{i}", _kb(i) * tail))
    return rels


def relations_qq_idempotent(n: int, r: int) -> list:
    """The idempotent presentation QQ1'-QQ4' of U_q(n, r) as vanishing elements."""
    lams = compositions(n, r)
    lamset = set(lams)
    O = lambda lam: E_(one_q(lam))
    KB = _kb
    zero = Element()

    def weighted(fn, left=None, right=None):
        """sum over lambda of fn(lambda) * left 1_lambda right."""
        out = Element()
        for lam in lams:
            c = fn(lam)
            if c == 0:
                continue
            term = O(lam)
            if left is not None:
                term = left * term
            if right is not None:
                term = term * right
            out = out + term.scale(c)
        return out

    rels = []
    total = Element()
    for lam in lams:
        total = total + O(lam)
        for mu in lams:
            rels.append((f"QQ1'/orth/{lam},{mu}", O(lam) * O(mu) - (O(lam) if lam == mu else zero)))
    rels.append(("QQ1'/sum", total - Element.scalar(1)))
    den = Q**2 - Q**-2
    for i in range(1, n + 1):
        for lam in lams:
            rels.append((f"QQ1'/kb-comm/{i},{lam}", KB(i) * O(lam) - O(lam) * KB(i)))
            if lam[i - 1] == 0:
                rels.append((f"QQ1'/kb-zero/{i},{lam}", KB(i) * O(lam)))
        for j in range(1, n + 1):
            rhs = weighted(lambda lam: 2 * (_qp(2 * lam[i - 1]) - _qp(-2 * lam[i - 1])) / den) if i == j else zero
            rels.append((f"QQ1'/kbkb/{i},{j}", KB(i) * KB(j) + KB(j) * KB(i) - rhs))
    for j in range(1, n):
        alpha = tuple((k == j) - (k == j + 1) for k in range(1, n + 1))
        for lam in lams:
            up = _shifted_weight(lam, alpha)
            down = _shifted_weight(lam, alpha, -1)
            for name, g, target, src in (
                ("E", _e(j), up, down),
                ("Eb", _eb(j), up, down),
                ("F", _f(j), down, up),
                ("Fb", _fb(j), down, up),
            ):
                rhs = O(target) * g if target in lamset else zero
                rels.append((f"QQ2'/{name}/{j},{lam}", g * O(lam) - rhs))
                rhs2 = g * O(src) if src in lamset else zero
                rels.append((f"QQ2'/{name}-right/{j},{lam}", O(lam) * g - rhs2))
    q = Q
    for i in range(1, n + 1):
        kb = KB(i)
        lo = lambda lam: _qp(-lam[i - 1])
        hi = lambda lam: _qp(lam[i - 1])
        if i <= n - 1:
            rels.append((f"QQ3'/KbE/{i}", kb * _e(i) - (_e(i) * kb).scale(q) - weighted(lo, left=_eb(i))))
            rels.append((f"QQ3'/KbF/{i}", kb * _f(i) - (_f(i) * kb).scale(q) + weighted(hi, left=_fb(i))))
            rels.append((f"QQ3'/KbEb/{i}", kb * _eb(i) + (_eb(i) * kb).scale(q) - weighted(lo, left=_e(i))))
            rels.append((f"QQ3'/KbFb/{i}", kb * _fb(i) + (_fb(i) * kb).scale(q) - weighted(hi, left=_f(i))))
        if i >= 2:
            m = i - 1
            rels.append((f"QQ3'/KbE-/{i}", (kb * _e(m)).scale(q) - _e(m) * kb + weighted(lo, right=_eb(m))))
            rels.append((f"QQ3'/KbF-/{i}", (kb * _f(m)).scale(q) - _f(m) * kb - weighted(hi, right=_fb(m))))
            rels.append((f"QQ3'/KbEb-/{i}", (kb * _eb(m)).scale(q) + _eb(m) * kb - weighted(lo, right=_e(m))))
            rels.append((f"QQ3'/KbFb-/{i}", (kb * _fb(m)).scale(q) + _fb(m) * kb - weighted(hi, right=_f(m))))
        for j in range(1, n):
            if j in (i, i - 1):
                continue
            rels.append((f"QQ3'/KbE0/{i},{j}", kb * _e(j) - _e(j) * kb))
            rels.append((f"QQ3'/KbF0/{i},{j}", kb * _f(j) - _f(j) * kb))
            rels.append((f"QQ3'/KbEb0/{i},{j}", kb * _eb(j) + _eb(j) * kb))
            rels.append((f"QQ3'/KbFb0/{i},{j}", kb * _fb(j) + _fb(j) * kb))
    for i in range(1, n):
        for j in range(1, n):
            d = i == j
            ef = weighted(lambda lam: qnum(lam[i - 1] - lam[i])) if d else zero
            rels.append((f"QQ4'/EF/{i},{j}", _e(i) * _f(j) - _f(j) * _e(i) - ef))
            ebfb = (weighted(lambda lam: qnum(lam[i - 1] + lam[i])) + (KB(i) * KB(i + 1)).scale(QQ)) if d else zero
            rels.append((f"QQ4'/EbarFbar/{i},{j}", _eb(i) * _fb(j) + _fb(j) * _eb(i) - ebfb))
            efb = zero
            ebf = zero
            if d:
                efb = weighted(lambda lam: _qp(-lam[i]), left=KB(i)) - weighted(lambda lam: _qp(-lam[i - 1]), left=KB(i + 1))
                ebf = weighted(lambda lam: _qp(lam[i]), left=KB(i)) - weighted(lambda lam: _qp(lam[i - 1]), left=KB(i + 1))
            rels.append((f"QQ4'/EFbar/{i},{j}", _e(i) * _fb(j) - _fb(j) * _e(i) - efb))
            rels.append((f"QQ4'/EbarF/{i},{j}", _eb(i) * _f(j) - _f(j) * _eb(i) - ebf))
    return rels


def relations_old(n: int) -> list:
    """Relations among the primed generators K_{j+1}^{-1} E_j, F_j K_{j+1} and their odd versions."""
    Ep = lambda j: _ki(j + 1) * _e(j)
    Ebp = lambda j: _ki(j + 1) * _eb(j)
    Fp = lambda j: _f(j) * _k(j + 1)
    Fbp = lambda j: _fb(j) * _k(j + 1)
    rels = []
    for k in range(1, n - 1):
        rels.append((f"old/E/{k}", Ep(k + 1) * Ebp(k) - Ebp(k) * Ep(k + 1) - (Ebp(k + 1) * Ep(k) - Ep(k) * Ebp(k + 1))))
        rels.append((f"old/F/{k}", Fp(k + 1) * Fbp(k) - Fbp(k) * Fp(k + 1) - (Fbp(k + 1) * Fp(k) - Fp(k) * Fbp(k + 1))))
    for a in range(1, n + 1):
        for i in range(1, n):
            p = pairing(a, i, i + 1)
            rels.append((f"old/KE/{a},{i}", _k(a) * Ep(i) - (Ep(i) * _k(a)).scale(Q**p)))
            rels.append((f"old/KF/{a},{i}", _k(a) * Fp(i) - (Fp(i) * _k(a)).scale(Q**-p)))
            rels.append((f"old/KEb/{a},{i}", _k(a) * Ebp(i) - (Ebp(i) * _k(a)).scale(Q**p)))
            rels.append((f"old/KFb/{a},{i}", _k(a) * Fbp(i) - (Fbp(i) * _k(a)).scale(Q**-p)))
    for i in range(1, n):
        for j in range(1, n):
            if abs(i - j) > 1:
                rels.append((f"old/EE/{i},{j}", Ep(i) * Ep(j) - Ep(j) * Ep(i)))
                rels.append((f"old/FF/{i},{j}", Fp(i) * Fp(j) - Fp(j) * Fp(i)))
    return rels


def relations_kx(n: int) -> list:
    """K_i X K_i^{-1} = q^{(eps_i, alpha)} X for every root vector, even and odd."""
    rels = []
    for a in range(1, n + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                p = pairing(a, i, j)
                for lab, g in (("X", X(i, j)), ("Xb", Xb(i, j))):
                    rels.append((f"KX/{lab}/{a};{i},{j}", _k(a) * E_(g) * _ki(a) - E_(g).scale(Q**p)))
    return rels


# ---------------------------------------------------------------------------
# commutation formulas for root vectors
#
# Each function returns the right-hand side for one product of letters, or
# None when the index pattern is not one of its cases.  Letters with a
# negative divided-power order stand for zero.


def _xw(*parts) -> Element:
    """Product of letters and Elements; X letters of order 0 are 1, of order < 0 kill."""
    out = Element.scalar(1)
    for p in parts:
        if isinstance(p, Generator):
            if p.family == "X":
                if p.s < 0:
                    return Element()
                if p.s == 0:
                    continue
            p = Element.generator(p)
        out = out * p
    return out


def _kpow(i: int, e: int) -> Element:
    """K_i^e as a word in K or Ki."""
    g = K(i) if e > 0 else Ki(i)
    return Element.from_word((g,) * abs(e))


def _bracket_z(i: int, j: int, c: int, t: int) -> Element:
    """[K_i K_j^{-1}; c / t] written in the letters K, Ki."""
    out = Element()
    for e, v in bracket_laurent(c, t).items():
        out = out + (_kpow(i, e) * _kpow(j, -e)).scale(v)
    return out


def _tri(t: int) -> int:
    return t * (3 * t + 1) // 2


def ppee(i, j, m, k, l, s):
    """X_{i,j}^{(m)} X_{k,l}^{(s)} for i<j, k<l (both positive)."""
    swap = _xw(X(k, l, s), X(i, j, m))
    if i < j < k < l or i < k < l < j:
        return swap
    if i < k < j == l or i == k < j < l:
        return swap.scale(_qp(-m * s))
    if i < k == j < l:
        out = swap.scale(_qp(m * s))
        for t in range(1, min(m, s) + 1):
            out = out + _xw(X(k, l, s - t), X(i, l, t), X(i, j, m - t)).scale(_qp((m - t) * (s - t)))
        return out
    if i < k < j < l:
        out = swap
        for t in range(1, min(m, s) + 1):
            c = (-1) ** t * qfactorial(t) * QQ**t * _qp(-(m + s) * t + _tri(t))
            out = out + _xw(X(k, l, s - t), X(k, j, t), X(i, l, t), X(i, j, m - t)).scale(c)
        return out
    return None


def ppee_extra(i, j, k, l):
    """The swapped first-order formulas for X_{i,j} X_{k,l}, i<j, k<l."""
    swap = _xw(X(k, l), X(i, j))
    if k < l < i < j or k < i < j < l:
        return swap
    if k < i < l == j or k == i < l < j:
        return swap.scale(Q)
    if k < i == l < j:
        return swap.scale(_qp(-1)) - _xw(X(k, j)).scale(_qp(-1))
    if k < i < l < j:
        return swap + _xw(X(k, j), X(i, l)).scale(QQ)
    return None


def pnee(i, j, m, k, l, s):
    """X_{i,j}^{(m)} X_{k,l}^{(s)} for i<j, k>l."""
    swap = _xw(X(k, l, s), X(i, j, m))
    if i == l and j == k:
        out = swap
        for t in range(1, min(m, s) + 1):
            out = out + _xw(X(k, l, s - t), _bracket_z(i, j, 2 * t - m - s, t), X(i, j, m - t))
        return out
    if i < j <= l < k or i < l < k < j:
        return swap
    if i == l < j < k:
        out = swap
        for t in range(1, min(m, s) + 1):
            c = (-1) ** t * _qp((m + s - t - 1) * t)
            out = out + _xw(X(k, l, s - t), _kpow(i, -t), _kpow(j, t), X(k, j, t), X(i, j, m - t)).scale(c)
        return out
    if i < l < j == k:
        out = swap
        for t in range(1, min(m, s) + 1):
            c = _qp((m + s - 2 * t) * t)
            out = out + _xw(X(k, l, s - t), _kpow(l, -t), _kpow(j, t), X(i, l, t), X(i, j, m - t)).scale(c)
        return out
    if i < l < j < k:
        out = swap
        for t in range(1, min(m, s) + 1):
            c = _qp((m + s) * t - _tri(t)) * QQ**t * qfactorial(t)
            out = out + _xw(X(k, l, s - t), _kpow(l, -t), _kpow(j, t), X(k, j, t), X(i, l, t), X(i, j, m - t)).scale(c)
        return out
    return None


def pnee_omega(i, j, k, l):
    """The Omega-images of the first-order formulas for X_{i,j} X_{k,l}, i<j, k>l."""
    swap = _xw(X(k, l), X(i, j))
    if l < k <= i < j or l < i < j < k:
        return swap
    if l == i < k < j:
        return swap - _xw(X(k, j), K(i), Ki(k))
    if l < i < k == j:
        return swap + _xw(X(i, l), K(i), Ki(k))
    if l < i < k < j:
        return swap - _xw(X(k, j), X(i, l), K(i), Ki(k)).scale(QQ)
    return None


def ppeo(i, j, m, k, l):
    """X_{i,j}^{(m)} Xb_{k,l} for i<j, k<l."""
    swap = _xw(Xb(k, l), X(i, j, m))
    if (i == k and j == l) or i < j < k < l or k < l < i < j or k < i < j < l:
        return swap
    if i < k < l < j:
        return (
            swap
            + _xw(Xb(k, j), X(i, l), X(i, j, m - 1)).scale(_qp(m - 1) * QQ)
            - _xw(X(k, j), Xb(i, l), X(i, j, m - 1)).scale(_qp(1 - m) * QQ)
            - _xw(X(k, j), Xb(i, j), X(i, l), X(i, j, m - 2)).scale(_qp(-1) * QQ**2)
        )
    if i == k < j < l:
        return swap.scale(_qp(-m))
    if i < k == j < l:
        return swap.scale(_qp(m)) + _xw(Xb(i, l), X(i, j, m - 1))
    if i < k < j == l:
        return swap.scale(_qp(m)) - _xw(X(k, j), Xb(i, l), X(i, j, m - 1)).scale(QQ)
    if i < k < j < l:
        return swap - _xw(X(k, j), Xb(i, l), X(i, j, m - 1)).scale(_qp(1 - m) * QQ)
    if k == i < l < j:
        return swap.scale(_qp(-m)) + _xw(Xb(k, j), X(i, l), X(i, j, m - 1)).scale(_qp(-1) * QQ)
    if k < i == l < j:
        return swap.scale(_qp(-m)) - _xw(Xb(k, j), X(i, j, m - 1)).scale(_qp(-1))
    if k < i < l == j:
        return swap.scale(_qp(m))
    if k < i < l < j:
        return swap + _xw(Xb(k, j), X(i, l), X(i, j, m - 1)).scale(_qp(m - 1) * QQ)
    return None


def pneo(i, j, m, k, l):
    """X_{i,j}^{(m)} Xb_{k,l} for i<j, k>l."""
    swap = _xw(Xb(k, l), X(i, j, m))
    x1 = X(i, j, m - 1)
    x2 = X(i, j, m - 2)
    if i < j <= l < k or l < k <= i < j or l < i < j < k:
        return swap
    if i == l and j == k:
        return (
            swap
            - _xw(Kb(j), Ki(i), x1).scale(_qp(m - 1))
            + _xw(Ki(j), Kb(i), x1).scale(_qp(1 - m))
            - _xw(Xb(i, j), Ki(j), Ki(i), x2)
        )
    if i < l < k < j:
        kk = _xw(Ki(l), Ki(k))
        return (
            swap
            + _xw(kk, Xb(k, j), X(i, l), x1).scale(_qp(m) * QQ)
            - _xw(kk, X(k, j), Xb(i, l), x1).scale(_qp(2 - m) * QQ)
            - _xw(kk, X(k, j), Xb(i, j), X(i, l), x2).scale(QQ**2)
        )
    if i == l < j < k:
        return swap - _xw(Ki(i), K(j), Xb(k, j), x1).scale(_qp(m - 1))
    if i < l < j == k:
        return (
            swap
            + _xw(Ki(l), Kb(j), X(i, l), x1).scale(_qp(m - 1) * QQ)
            + _xw(Ki(l), Ki(j), Xb(i, l), x1).scale(_qp(1 - m))
            + _xw(Ki(l), Ki(j), Xb(i, j), X(i, l), x2).scale(_qp(-1) * QQ)
        )
    if i < l < j < k:
        return swap + _xw(Ki(l), K(j), Xb(k, j), X(i, l), x1).scale(_qp(m - 1) * QQ)
    if l == i < k < j:
        return (
            swap
            - _xw(Xb(k, j), Ki(i), Ki(k), x1).scale(_qp(m - 1))
            - _xw(X(k, j), Kb(i), Ki(k), x1).scale(_qp(1 - m) * QQ)
            + _xw(X(k, j), Xb(i, j), Ki(i), Ki(k), x2).scale(_qp(-1) * QQ)
        )
    if l < i < k == j:
        return swap + _xw(Xb(i, l), K(i), Ki(j), x1).scale(_qp(1 - m))
    if l < i < k < j:
        return swap - _xw(K(i), Ki(k), X(k, j), Xb(i, l), x1).scale(_qp(1 - m) * QQ)
    return None


def ppoo(i, j, k, l):
    """Xb_{i,j} Xb_{k,l} for i<j, k<l."""
    swap = _xw(Xb(k, l), Xb(i, j))
    if i == k and j == l:
        return _xw(X(i, j), X(i, j)).scale(-QQ / QPLUS)
    if i < j < k < l:
        return -swap
    if i < k < l < j:
        return -swap - (_xw(Xb(k, j), Xb(i, l)) + _xw(X(k, j), X(i, l))).scale(QQ)
    if i == k < j < l:
        return -swap.scale(Q) - _xw(X(k, j), X(i, l)).scale(Q * QQ)
    if i < k == j < l:
        return -swap.scale(Q) + _xw(X(i, l))
    if i < k < j == l:
        return -swap.scale(Q) - _xw(X(k, j), X(i, l)).scale(QQ)
    if i < k < j < l:
        return -swap - _xw(X(k, j), X(i, l)).scale(QQ)
    return None


def ppoo_swapped(i, j, k, l):
    """The solved-and-swapped first-order formulas for Xb_{i,j} Xb_{k,l}, i<j, k<l."""
    swap = _xw(Xb(k, l), Xb(i, j))
    if k < l < i < j:
        return -swap
    if k < i < j < l:
        return -swap + (_xw(Xb(k, j), Xb(i, l)) - _xw(X(k, j), X(i, l))).scale(QQ)
    if k == i < l < j:
        return -swap.scale(_qp(-1)) - _xw(X(k, j), X(i, l)).scale(_qp(-1) * QQ)
    if k < i == l < j:
        return -swap.scale(_qp(-1)) + _xw(X(k, j)).scale(_qp(-1))
    if k < i < l == j:
        return -swap.scale(_qp(-1)) - _xw(X(k, j), X(i, l)).scale(QQ)
    if k < i < l < j:
        return -swap - _xw(X(k, j), X(i, l)).scale(QQ)
    return None


def pnoo(i, j, k, l):
    """Xb_{i,j} Xb_{k,l} for i<j, k>l."""
    swap = _xw(Xb(k, l), Xb(i, j))
    if i == l and j == k:
        return -swap + (_xw(K(i), K(j)) - _xw(Ki(i), Ki(j))).scale(1 / QQ) + _xw(Kb(i), Kb(j)).scale(QQ)
    if i < j <= l < k:
        return -swap
    if i < l < k < j:
        kk = _xw(Ki(l), Ki(k))
        return -swap - _xw(kk, _xw(Xb(k, j), Xb(i, l)) + _xw(X(k, j), X(i, l))).scale(Q * QQ)
    if i == l < j < k:
        return -swap + _xw(X(k, j), K(i), K(j)).scale(_qp(-1)) - _xw(Xb(k, j), Kb(i), K(j)).scale(_qp(-1) * QQ)
    if i < l < j == k:
        return -swap - _xw(Ki(l), Kb(j), Xb(i, l)).scale(QQ) + _xw(Ki(l), Ki(j), X(i, l))
    if i < l < j < k:
        return -swap - _xw(Ki(l), K(j), Xb(k, j), Xb(i, l)).scale(QQ)
    return None


def pnoo_omega(i, j, k, l):
    """The Omega-images of the odd-odd formulas, i<j, k>l."""
    swap = _xw(Xb(k, l), Xb(i, j))
    if l < k <= i < j:
        return -swap
    if l < i < j < k:
        return -swap + _xw(_xw(X(k, j), X(i, l)) - _xw(Xb(k, j), Xb(i, l)), K(i), K(j)).scale(_qp(-1) * QQ)
    if l == i < k < j:
        return -swap - _xw(Xb(k, j), Kb(i), Ki(k)).scale(QQ) + _xw(X(k, j), Ki(i), Ki(k))
    if l < i < k == j:
        return -swap + _xw(K(i), K(j), X(i, l)).scale(_qp(-1)) - _xw(K(i), Kb(j), Xb(i, l)).scale(_qp(-1) * QQ)
    if l < i < k < j:
        return -swap - _xw(Xb(k, j), Xb(i, l), K(i), Ki(k)).scale(QQ)
    return None


def xkbar(i, j, m, a):
    """X_{i,j}^{(m)} Kb_a for i<j."""
    swap = _xw(Kb(a), X(i, j, m))
    x1, x2 = X(i, j, m - 1), X(i, j, m - 2)
    if a < i or a > j:
        return swap
    if a == i:
        return swap.scale(_qp(-m)) - _xw(Ki(i), Xb(i, j), x1)
    if a == j:
        return swap.scale(_qp(m)) + _xw(Ki(j), Xb(i, j), x1)
    return (
        swap
        + _xw(Xb(a, j), X(i, a), Ki(a), x1).scale(_qp(m) * QQ)
        - _xw(X(a, j), Xb(i, a), Ki(a), x1).scale(_qp(2 - m) * QQ)
        - _xw(X(a, j), Xb(i, j), X(i, a), Ki(a), x2).scale(QQ**2)
    )


def xbkbar(i, j, a):
    """Xb_{i,j} Kb_a for i<j."""
    swap = _xw(Kb(a), Xb(i, j))
    if a < i or a > j:
        return -swap
    if a == i:
        return -swap.scale(_qp(-1)) + _xw(X(i, j), Ki(i)).scale(_qp(-1))
    if a == j:
        return -swap.scale(Q) + _xw(X(i, j), Ki(j)).scale(Q)
    return -swap - (_xw(Xb(a, j), Xb(i, a)) + _xw(X(a, j), X(i, a))).scale(Q * QQ) * _xw(Ki(a))


def kbar_square(i: int) -> Element:
    """Kb_i^2 in the bracket basis."""
    return _xw(K(i), Kbr(i, 0, 1)).scale(_qp(-1)) - _xw(Kbr(i, 0, 2)).scale(_qp(-1) * QQ)


def xbar_square(i: int, j: int) -> Element:
    """Xb_{i,j}^2 as a multiple of the divided square."""
    c = -QQ if i < j else QQ
    return _xw(X(i, j, 2)).scale(c)


# ---------------------------------------------------------------------------
# the X-engine


def laurent_to_basis(i: int, poly: dict) -> Element:
    """Rewrite a Laurent polynomial in K_i over the basis K_i^tau [K_i; 0 / t]."""
    poly = {e: v for e, v in poly.items() if v != 0}
    out = Element()
    while poly:
        d = max(abs(e) for e in poly)
        if d == 0:
            out = out + Element.scalar(poly.pop(0))
            break
        if -d in poly:
            sub = bracket_laurent(0, d)
            c = poly[-d] / sub[-d]
            word = (Kbr(i, 0, d),)
        else:
            sub = {e + 1: v for e, v in bracket_laurent(0, d - 1).items()}
            c = poly[d] / sub[d]
            word = (K(i),) if d == 1 else (KKbr(i, d - 1),)
        for e, v in sub.items():
            poly[e] = poly.get(e, 0) - c * v
            if poly[e] == 0:
                del poly[e]
        out = out + Element.from_word(word, c)
    return out


def _cartan_laurent(g: Generator) -> dict:
    if g.family == "K":
        return {1: ONE}
    if g.family == "Ki":
        return {-1: ONE}
    if g.family == "KKbr":
        return {e + 1: v for e, v in bracket_laurent(0, g.s).items()}
    return bracket_laurent(g.idx[1], g.s)


def _shifted(g: Generator, p: int) -> Element:
    """The Cartan letter g with K_i replaced by q^p K_i, over the bracket basis."""
    poly = {e: v * _qp(p * e) for e, v in _cartan_laurent(g).items()}
    return laurent_to_basis(g.idx[0], poly)


def _laurent_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e, v in a.items():
        for f, w in b.items():
            out[e + f] = out.get(e + f, 0) + v * w
    return out


def _is_positive(g: Generator) -> bool:
    return g.idx[0] < g.idx[1]


def _order(g: Generator) -> int:
    return g.s if g.family == "X" else 1


def _weight(a: int, g: Generator) -> int:
    """Exponent p with K_a g = q^p g K_a."""
    return _order(g) * pairing(a, *g.idx)


def _solve(rel: Element, a: Generator, b: Generator) -> Element:
    """Given rel = expression of b*a, return the expression of a*b it implies."""
    c = rel.coeff((a, b))
    if c == 0:
        raise ValueError(f"cannot solve for {a}*{b}")
    rest = rel - Element.from_word((a, b), c)
    return (Element.from_word((b, a)) - rest).scale(ONE / c)


def _direct_ee(a: Generator, b: Generator):
    i, j = a.idx
    k, l = b.idx
    if a.family == "X" and b.family == "X":
        return ppee(i, j, a.s, k, l, b.s)
    if a.family == "X":
        return ppeo(i, j, a.s, k, l)
    if b.family == "Xb" and a.family == "Xb":
        return ppoo(i, j, k, l)
    return None


def product_ee(a: Generator, b: Generator) -> Element:
    """a*b for two positive-root letters, as given or solved from the reversed product."""
    if a.idx == b.idx:
        if a.family == "X" and b.family == "X":
            return _xw(X(*a.idx, a.s + b.s)).scale(qbinom(a.s + b.s, a.s))
        if a.family == "Xb" and b.family == "Xb":
            return xbar_square(*a.idx)
    out = _direct_ee(a, b)
    if out is not None:
        return out
    return _solve(_direct_ee(b, a), a, b)


def product_ff(a: Generator, b: Generator) -> Element:
    """a*b for two negative-root letters, via Omega."""
    return omega(product_ee(_omega_letter(b), _omega_letter(a)))


def _direct_ef(a: Generator, b: Generator):
    i, j = a.idx
    k, l = b.idx
    if a.family == "X" and b.family == "X":
        return pnee(i, j, a.s, k, l, b.s)
    if a.family == "X":
        return pneo(i, j, a.s, k, l)
    if b.family == "Xb":
        return pnoo(i, j, k, l)
    return None


def product_ef(a: Generator, b: Generator) -> Element:
    """a*b for a positive-root letter a and a negative-root letter b."""
    out = _direct_ef(a, b)
    if out is not None:
        return out
    return omega(_direct_ef(_omega_letter(b), _omega_letter(a)))


def product_ekb(a: Generator, b: Generator) -> Element:
    i, j = a.idx
    if a.family == "X":
        return xkbar(i, j, a.s, b.idx[0])
    return xbkbar(i, j, b.idx[0])


def twisted_degree(word) -> int:
    """deg' of a word: 2s|j-i| per divided power, 2|j-i| per odd root letter, 1 per Kb."""
    deg = 0
    for g in word:
        if g.family in ("X", "Xb"):
            deg += 2 * _order(g) * abs(g.idx[1] - g.idx[0])
        elif g.family == "Kb":
            deg += 1
    return deg


class XSystem(RewriteSystem):
    """Straightening in the X-alphabet towards F-part, Cartan, Kb, E-part."""

    def __init__(self, n: int, fuel: int | None = None):
        self.n = n
        rank: dict = {}
        for r, (p, c) in enumerate(f_order(n)):
            rank[("X", (p, c))] = 2 * r
            rank[("Xb", (p, c))] = 2 * r + 1
        base = 2 * len(f_order(n))
        for i in range(1, n + 1):
            for fam in ("K", "Ki", "Kbr", "KKbr"):
                rank[(fam, i)] = base + i - 1
            rank[("Kb", i)] = base + n + i - 1
        base += 2 * n
        for r, (c, l) in enumerate(e_order(n)):
            rank[("X", (c, l))] = base + 2 * r
            rank[("Xb", (c, l))] = base + 2 * r + 1
        self.slots = rank
        super().__init__(
            f"lusztig(n={n})",
            [Rule("expand", 1, self._single), Rule("straighten", 2, self._pair)],
            self._key,
            fuel,
        )

    def rank(self, g: Generator) -> int:
        f = g.family
        if f in ("X", "Xb"):
            return self.slots[(f, g.idx)]
        return self.slots[(f, g.idx[0])]

    def _cls(self, g: Generator) -> str:
        f = g.family
        if f in ("X", "Xb"):
            return "E" if _is_positive(g) else "F"
        if f == "Kb":
            return "B"
        if f == "one":
            return "I"
        return "C"

    def _key(self, word):
        return (twisted_degree(word), len(word), *[self.rank(g) for g in word])

    @staticmethod
    def _single(g: Generator):
        if g.family == "Ki":
            i = g.idx[0]
            return (_xw(K(i)) - _xw(Kbr(i, 0, 1)).scale(QQ)).terms
        if g.family == "Kbr" and (g.s == 0 or g.idx[1] != 0):
            return laurent_to_basis(g.idx[0], bracket_laurent(g.idx[1], g.s)).terms
        if g.family == "X" and g.s <= 0:
            return {(): ONE} if g.s == 0 else {}
        return None

    def _pair(self, a: Generator, b: Generator):
        ca, cb = self._cls(a), self._cls(b)
        if "I" in (ca, cb):
            return None
        if "C" in (ca, cb):
            pending = [g for g in (a, b) if g.family == "Ki" or (g.family == "Kbr" and g.idx[1] != 0)]
            if pending:
                return None
        if ca == "C" and cb == "C":
            i, j = a.idx[0], b.idx[0]
            if i == j:
                return laurent_to_basis(i, _laurent_mul(_cartan_laurent(a), _cartan_laurent(b))).terms
            if self.rank(a) > self.rank(b):
                return {(b, a): ONE}
            return None
        if ca == "B" and cb == "C":
            return {(b, a): ONE}
        if ca == "B" and cb == "B":
            i, j = a.idx[0], b.idx[0]
            if i == j:
                return kbar_square(i).terms
            return {(b, a): -ONE} if i > j else None
        if ca == "E" and cb == "C":
            return (_shifted(b, -_weight(b.idx[0], a)) * _xw(a)).terms
        if ca == "C" and cb == "F":
            return (_xw(b) * _shifted(a, _weight(a.idx[0], b))).terms
        if ca == "E" and cb == "B":
            return product_ekb(a, b).terms
        if ca == "B" and cb == "F":
            return omega(product_ekb(_omega_letter(b), a)).terms
        if ca == "E" and cb == "E":
            return product_ee(a, b).terms if self.rank(a) >= self.rank(b) else None
        if ca == "F" and cb == "F":
            return product_ff(a, b).terms if self.rank(a) >= self.rank(b) else None
        if ca == "E" and cb == "F":
            return product_ef(a, b).terms
        return None


@lru_cache(maxsize=None)
def lusztig_rules(n: int) -> XSystem:
    if n < 1:
        raise ValueError("need n >= 1")
    return XSystem(n)


# ---------------------------------------------------------------------------
# PBW monomials of the Lusztig form


def _xd_q(i: int, j: int, m: int) -> tuple:
    return (X(i, j, m),) if m else ()


def _cartan_word(i: int, tau: int, b: int) -> tuple:
    if tau and b:
        return (KKbr(i, b),)
    if tau:
        return (K(i),)
    if b:
        return (Kbr(i, 0, b),)
    return ()


class QuantumPBWMonomial:
    """The index (A, tau) of m^q_{A,tau} = F_{A-} K^tau [K; A0 diag] Kb_{A1 diag} E_{A+}."""

    __slots__ = ("A0", "A1", "tau")

    def __init__(self, A0, A1, tau=None):
        self.A0 = tuple(tuple(r) for r in A0)
        self.A1 = tuple(tuple(r) for r in A1)
        n = len(self.A0)
        self.tau = tuple(tau) if tau is not None else (0,) * n
        if any(v not in (0, 1) for r in self.A1 for v in r) or any(t not in (0, 1) for t in self.tau):
            raise ValueError("odd part and tau entries must be 0 or 1")

    @property
    def n(self):
        return len(self.A0)

    def f_word(self) -> tuple:
        out = ()
        for (i, j) in f_order(self.n):
            out += _xd_q(i, j, self.A0[i - 1][j - 1])
            if self.A1[i - 1][j - 1]:
                out += (Xb(i, j),)
        return out

    def e_word(self) -> tuple:
        out = ()
        for (i, j) in e_order(self.n):
            out += _xd_q(i, j, self.A0[i - 1][j - 1])
            if self.A1[i - 1][j - 1]:
                out += (Xb(i, j),)
        return out

    def cartan_word(self) -> tuple:
        out = ()
        for i in range(self.n):
            out += _cartan_word(i + 1, self.tau[i], self.A0[i][i])
        return out

    def kbar_word(self) -> tuple:
        return tuple(Kb(i + 1) for i in range(self.n) if self.A1[i][i])

    def word(self) -> tuple:
        return self.f_word() + self.cartan_word() + self.kbar_word() + self.e_word()

    def element(self) -> Element:
        return Element.from_word(self.word())

    def degree(self) -> int:
        """The twisted degree deg'."""
        n = self.n
        d = sum(self.A1[i][i] for i in range(n))
        for i in range(n):
            for j in range(n):
                if i != j:
                    d += 2 * (self.A0[i][j] + self.A1[i][j]) * abs(j - i)
        return d

    def chi(self) -> tuple:
        from .classical import chi

        return chi(self.A0, self.A1)

    def u_word(self) -> tuple:
        """Word of F_{A-} 1_{chi(A)} Kb_{A1 diag} E_{A+} in the Schur quotient."""
        return self.f_word() + (one_q(self.chi()),) + self.kbar_word() + self.e_word()

    @classmethod
    def from_word(cls, n: int, word) -> "QuantumPBWMonomial":
        A0 = [[0] * n for _ in range(n)]
        A1 = [[0] * n for _ in range(n)]
        tau = [0] * n
        for g in word:
            f = g.family
            if f == "X":
                i, j = g.idx
                A0[i - 1][j - 1] += g.s
            elif f == "Xb":
                i, j = g.idx
                A1[i - 1][j - 1] += 1
            elif f == "K":
                tau[g.idx[0] - 1] += 1
            elif f == "Kbr" and g.idx[1] == 0:
                A0[g.idx[0] - 1][g.idx[0] - 1] += g.s
            elif f == "KKbr":
                tau[g.idx[0] - 1] += 1
                A0[g.idx[0] - 1][g.idx[0] - 1] += g.s
            elif f == "Kb":
                A1[g.idx[0] - 1][g.idx[0] - 1] += 1
            elif f == "one":
                continue
            else:
                raise ValueError(f"{g} is not a Lusztig-form basis letter")
        return cls(A0, A1, tau)

    def to_json(self, lam=None) -> dict:
        out = {"A0": [list(r) for r in self.A0], "A1": [list(r) for r in self.A1], "tau": list(self.tau)}
        out["lambda"] = list(lam if lam is not None else self.chi())
        return out

    def __eq__(self, other):
        return isinstance(other, QuantumPBWMonomial) and (self.A0, self.A1, self.tau) == (other.A0, other.A1, other.tau)

    def __hash__(self):
        return hash((self.A0, self.A1, self.tau))

    def __repr__(self):
        return f"QuantumPBWMonomial(A0={self.A0}, A1={self.A1}, tau={self.tau})"


# ---------------------------------------------------------------------------
# the quantum Schur quotient


def _root_weight(g: Generator, n: int) -> tuple:
    i, j = g.idx
    m = _order(g)
    w = [0] * n
    w[i - 1] += m
    w[j - 1] -= m
    return tuple(w)


def _shifted_weight(lam, w, sign=1):
    return tuple(a + sign * b for a, b in zip(lam, w))


def _cartan_on(g: Generator, lam) -> Scalar:
    """Scalar by which a Cartan letter acts on 1_lam."""
    i = g.idx[0]
    v = lam[i - 1]
    f = g.family
    if f == "K":
        return _qp(v)
    if f == "Ki":
        return _qp(-v)
    if f == "KKbr":
        return _qp(v) * bracket_eval(v, 0, g.s, Q)
    return bracket_eval(v, g.idx[1], g.s, Q)


class QuantumSchurSystem(RewriteSystem):
    """Straightening in U_q(n, r): X-engine rules plus idempotent calculus.

    Irreducible words are F 1_lam Kb E with chi <= lam.  The idempotent sits
    between the F-part and the odd Cartan letters; even Cartan letters are
    evaluated on it.
    """

    def __init__(self, n: int, r: int, fuel: int | None = None):
        if n < 1 or r < 0:
            raise ValueError("need n >= 1 and r >= 0")
        self.n, self.r = n, r
        self.base = lusztig_rules(n)
        self.lambdas = compositions(n, r)
        base = self.base
        split = 2 * len(f_order(n))

        def rank(g):
            if g.family == "one":
                return split
            rk = base.rank(g)
            return rk + 1 if rk >= split else rk

        def key(word):
            return (twisted_degree(word), len(word), *[rank(g) for g in word])

        rules = [Rule("idempotent exchange", 2, self._idempotent_pair)] + list(base.rules)
        super().__init__(f"quantum-schur(n={n}, r={r})", rules, key, fuel)
        self._word_cache: dict = {}

    def _idempotent_pair(self, a: Generator, b: Generator):
        fa, fb = a.family, b.family
        if fa != "one" and fb != "one":
            return None
        n = self.n
        if fa == "one" and fb == "one":
            return {(a,): ONE} if a.idx == b.idx else {}
        if fb == "one":
            lam = b.idx
            if fa in ("K", "Ki", "Kbr", "KKbr"):
                return {(b,): _cartan_on(a, lam)}
            if fa == "Kb":
                return {} if lam[a.idx[0] - 1] == 0 else {(b, a): ONE}
            new = _shifted_weight(lam, _root_weight(a, n))
            if min(new) < 0:
                return {}
            return {(one_q(new), a): ONE} if _is_positive(a) else None
        lam = a.idx
        if fb in ("K", "Ki", "Kbr", "KKbr"):
            return {(a,): _cartan_on(b, lam)}
        if fb == "Kb":
            return {} if lam[b.idx[0] - 1] == 0 else None
        new = _shifted_weight(lam, _root_weight(b, n), -1)
        if min(new) < 0:
            return {}
        return None if _is_positive(b) else {(b, one_q(new)): ONE}

    def word_rule(self, word):
        if word not in self._word_cache:
            self._word_cache[word] = self._reduce_word(word)
        return self._word_cache[word]

    def _reduce_word(self, word):
        ones = [p for p, g in enumerate(word) if g.family == "one"]
        if not ones:
            return {word + (one_q(lam),): ONE for lam in self.lambdas}
        (p,) = ones
        fpart, lam, rest = word[:p], word[p].idx, word[p + 1 :]
        mu = lam
        for g in reversed(fpart):
            mu = _shifted_weight(mu, _root_weight(g, self.n))
            if min(mu) < 0:
                return {}
        if self._vanishes(lam, rest):
            return {}
        mono = QuantumPBWMonomial.from_word(self.n, fpart + rest)
        if all(c <= l for c, l in zip(mono.chi(), lam)):
            return None
        return self._swap_block(mono, lam)

    def _swap_block(self, C: QuantumPBWMonomial, lam):
        n = self.n
        content = C.chi()
        i = max(k for k in range(n) if lam[k] < content[k]) + 1
        f_head = tuple(g for g in C.f_word() if g.idx[1] < i)
        f_G = tuple(g for g in C.f_word() if g.idx[1] >= i)
        e_G = tuple(g for g in C.e_word() if g.idx[0] >= i)
        e_tail = tuple(g for g in C.e_word() if g.idx[0] < i)
        kb_head = tuple(g for g in C.kbar_word() if g.idx[0] < i)
        kb_G = tuple(g for g in C.kbar_word() if g.idx[0] >= i)
        odd_fG = sum(g.odd for g in f_G)
        sigma = -1 if (odd_fG * len(kb_head)) % 2 else 1
        lam2 = lam
        for g in reversed(f_G):
            lam2 = _shifted_weight(lam2, _root_weight(g, n))
        u_G = f_G + kb_G + e_G
        swapped = e_G + kb_G + f_G
        nf = self.base.normal_form(Element.from_word(swapped))
        c = nf.coeff(u_G)
        if not isinstance(c, Scalar):
            c = Scalar(c)
        if not c.is_signed_power():
            raise AssertionError(f"unexpected leading coefficient {c} when swapping {u_G}")
        if not self._vanishes(lam2, swapped):
            raise AssertionError("swapped leading term did not vanish")
        scale = -sigma * (ONE / c)
        out: dict = {}
        for w, v in nf.terms.items():
            if w == u_G:
                continue
            nw = f_head + kb_head + (one_q(lam2),) + w + e_tail
            out[nw] = out.get(nw, 0) + scale * v
        return {w: v for w, v in out.items() if v != 0}

    def _vanishes(self, lam, word) -> bool:
        mu = lam
        for g in word:
            f = g.family
            if f == "Kb":
                if mu[g.idx[0] - 1] == 0:
                    return True
                continue
            if f in ("K", "Ki", "Kbr", "KKbr"):
                if _cartan_on(g, mu) == 0:
                    return True
                continue
            mu = _shifted_weight(mu, _root_weight(g, self.n), -1)
            if min(mu) < 0:
                return True
        return False

    def basis(self) -> list:
        return quantum_schur_basis(self.n, self.r)


@lru_cache(maxsize=None)
def quantum_schur_rules(n: int, r: int) -> QuantumSchurSystem:
    return QuantumSchurSystem(n, r)


def quantum_schur_basis(n: int, r: int) -> list:
    """The basis {F_{A-} 1_chi(A) Kb_{A1 diag} E_{A+} : A in M_n(N|Z2)_r} as (label, Element) pairs."""
    out = []
    for A0, A1 in matrices_nz2(n, r):
        mono = QuantumPBWMonomial(A0, A1)
        out.append((mono.to_json(), Element.from_word(mono.u_word())))
    return out


# ---------------------------------------------------------------------------
# the commutation-formula corpus

_TOKENS = re.compile(r"[a-z]|<=|<|=")


def pattern_holds(pattern: str, env: dict) -> bool:
    """Evaluate an index pattern such as ``"i<k=j<l|i<j<k<l"`` at ``env``."""
    for alt in pattern.split("|"):
        toks = _TOKENS.findall(alt)
        ok = True
        for p in range(1, len(toks) - 1, 2):
            a, op, b = env[toks[p - 1]], toks[p], env[toks[p + 1]]
            if not (a < b if op == "<" else a <= b if op == "<=" else a == b):
                ok = False
                break
        if ok:
            return True
    return False


def _bindings(names: str, pattern: str, n_max: int):
    for vals in iproduct(range(1, n_max + 1), repeat=len(names)):
        env = dict(zip(names, vals))
        if pattern_holds(pattern, env):
            yield env


def _dp(x, t: int) -> Element:
    """Divided power x^t / [t]!; an X letter of order 1 becomes X(i,j;t)."""
    if t < 0:
        return Element()
    if t == 0:
        return Element.scalar(1)
    if isinstance(x, Generator):
        if x.family == "X" and x.s == 1:
            return _xw(X(x.idx[0], x.idx[1], t))
        x = Element.generator(x)
    return (x**t).scale(ONE / qfactorial(t))


# Case tables in display order: (case suffix, index pattern).
_PPEE = ["i<j<k<l|i<k<l<j", "i<k<j=l|i=k<j<l", "i<k=j<l", "i<k<j<l"]
_PPEE_EXTRA = ["k<l<i<j|k<i<j<l", "k<i<l=j|k=i<l<j", "k<i=l<j", "k<i<l<j"]
_PNEE = ["i=l<j=k", "i<j<=l<k|i<l<k<j", "i=l<j<k", "i<l<j=k", "i<l<j<k"]
_PNEE_OMEGA = ["l<k<=i<j|l<i<j<k", "l=i<k<j", "l<i<k=j", "l<i<k<j"]
_PPEO = [
    "i=k<j=l|i<j<k<l|k<l<i<j|k<i<j<l",
    "i<k<l<j", "i=k<j<l", "i<k=j<l", "i<k<j=l", "i<k<j<l",
    "k=i<l<j", "k<i=l<j", "k<i<l=j", "k<i<l<j",
]
_PNEO = [
    "i<j<=l<k|l<k<=i<j|l<i<j<k",
    "i=l<j=k", "i<l<k<j", "i=l<j<k", "i<l<j=k", "i<l<j<k",
    "l=i<k<j", "l<i<k=j", "l<i<k<j",
]
_PPOO = ["i=k<j=l", "i<j<k<l", "i<k<l<j", "i=k<j<l", "i<k=j<l", "i<k<j=l", "i<k<j<l"]
_PPOO_SOLVED = ["k<l<i<j", "k<i<j<l", "k=i<l<j", "k<i=l<j", "k<i<l=j", "k<i<l<j"]
_PNOO = ["i=l<j=k", "i<j<=l<k", "i<l<k<j", "i=l<j<k", "i<l<j=k", "i<l<j<k"]
_PNOO_OMEGA = ["l<k<=i<j", "l<i<j<k", "l=i<k<j", "l<i<k=j", "l<i<k<j"]
_XKBAR = ["a<i<j|i<j<a", "a=i<j", "i<j=a", "i<a<j"]


def _rank_of(env: dict) -> int:
    return max(2, max(env.values()))


def _emit(out, id_, label, lhs, rhs, env, pattern, engines=("L", "X"), **extra):
    if rhs is None:
        raise AssertionError(f"{id_}: no formula for {env}")
    ranges = dict(env)
    ranges.update(extra)
    ranges["n"] = _rank_of(env)
    ranges["pattern"] = pattern
    out.append(Identity(id_, label, lhs, rhs, ranges, engines))


def _case_family(out, name, label, cases, names, n_max, build, exps=((1, 1),), omega_too=None):
    for c, pat in enumerate(cases, 1):
        for env in _bindings(names, pat, n_max):
            for m, s in exps:
                lhs, rhs = build(env, m, s)
                extra = {}
                if len(exps) > 1:
                    extra = {"m": m} if all(e[1] == 1 for e in exps) else {"m": m, "s": s}
                _emit(out, f"{name}/case{c}", label, lhs, rhs, env, pat, **extra)
                if omega_too:
                    _emit(out, f"{omega_too}/case{c}", label, omega(lhs), omega(rhs), env, pat, **extra)


def _first_order(out, n_max):
    def fam(name, label, cases, fn, lhs_fn):
        def build(e, m, s):
            return lhs_fn(e), fn(e["i"], e["j"], e["k"], e["l"])

        _case_family(out, name, label, cases, "ijkl", n_max, build)

    xx = lambda e: _xw(X(e["i"], e["j"]), X(e["k"], e["l"]))
    xxb = lambda e: _xw(X(e["i"], e["j"]), Xb(e["k"], e["l"]))
    xbxb = lambda e: _xw(Xb(e["i"], e["j"]), Xb(e["k"], e["l"]))
    fam("q-ppee", "Lemma q-ppee", _PPEE, lambda i, j, k, l: ppee(i, j, 1, k, l, 1), xx)
    fam("q-ppee-extra", "Lemma q-ppee", _PPEE_EXTRA, ppee_extra, xx)
    fam("q-pnee", "Lemma q-pnee", _PNEE, lambda i, j, k, l: pnee(i, j, 1, k, l, 1), xx)
    fam("q-pnee-omega", "Lemma q-pnee", _PNEE_OMEGA, pnee_omega, xx)
    fam("q-ppeo", "Lemma q-ppeo", _PPEO, lambda i, j, k, l: ppeo(i, j, 1, k, l), xxb)
    fam("q-pneo", "Lemma q-pneo", _PNEO, lambda i, j, k, l: pneo(i, j, 1, k, l), xxb)
    fam("q-ppoo", "Lemma q-ppoo", _PPOO, ppoo, xbxb)
    fam("q-ppoo-solved", "Lemma q-ppoo", _PPOO_SOLVED, ppoo_swapped, xbxb)
    fam("q-pnoo", "Lemma q-pnoo", _PNOO, pnoo, xbxb)
    fam("q-pnoo-omega", "Lemma q-pnoo", _PNOO_OMEGA, pnoo_omega, xbxb)
    for tag, fn, lead in (("X", xkbar, X), ("Xb", None, Xb)):
        for c, pat in enumerate(_XKBAR, 1):
            for env in _bindings("ija", pat, n_max):
                i, j, a = env["i"], env["j"], env["a"]
                rhs = xkbar(i, j, 1, a) if fn else xbkbar(i, j, a)
                _emit(out, f"q-XKbar/{tag}-case{c}", "Lemma q-XKbar", _xw(lead(i, j), Kb(a)), rhs, env, pat)


def _divided(out, n_max, e_max):
    ms = [(m, s) for m in range(1, e_max + 1) for s in range(1, e_max + 1)]
    mo = [(m, 1) for m in range(1, e_max + 1)]

    def ee(fn):
        def build(e, m, s):
            i, j, k, l = e["i"], e["j"], e["k"], e["l"]
            return _xw(X(i, j, m), X(k, l, s)), fn(i, j, m, k, l, s)

        return build

    def eo(fn):
        def build(e, m, s):
            i, j, k, l = e["i"], e["j"], e["k"], e["l"]
            return _xw(X(i, j, m), Xb(k, l)), fn(i, j, m, k, l)

        return build

    _case_family(out, "q-div-ppee", "Prop q-div-ppee", _PPEE, "ijkl", n_max, ee(ppee), ms)
    _case_family(out, "q-div-pnee", "Prop q-div-pnee", _PNEE, "ijkl", n_max, ee(pnee), ms, "q-div-pnee-omega")
    _case_family(out, "q-div-ppeo", "Prop q-div-ppeo", _PPEO, "ijkl", n_max, eo(ppeo), mo, "q-div-ppeo-omega")
    _case_family(out, "q-div-pneo", "Prop q-div-pneo", _PNEO, "ijkl", n_max, eo(pneo), mo, "q-div-pneo-omega")

    # the swapped set: solve for X_kl^(s) X_ij^(m), then rename
    for c, pat in enumerate(_PPEE, 1):
        for env in _bindings("ijkl", pat, n_max):
            i, j, k, l = env["i"], env["j"], env["k"], env["l"]
            for m, s in ms:
                swap = (X(k, l, s), X(i, j, m))
                rhs = ppee(i, j, m, k, l, s)
                lead = rhs.coeff(swap)
                rest = rhs - Element.from_word(swap, lead)
                solved = (_xw(X(i, j, m), X(k, l, s)) - rest).scale(ONE / lead)
                _emit(out, f"q-div-ppee-solved/case{c}", "Prop q-div-ppee", _xw(*swap), solved, env, pat, m=m, s=s)

    for c, pat in enumerate(_XKBAR, 1):
        for env in _bindings("ija", pat, n_max):
            i, j, a = env["i"], env["j"], env["a"]
            for m in range(1, e_max + 1):
                lhs, rhs = _xw(X(i, j, m), Kb(a)), xkbar(i, j, m, a)
                _emit(out, f"q-div-XKbar/case{c}", "Prop q-div-XKbar", lhs, rhs, env, pat, m=m)
                _emit(out, f"q-div-XKbar-omega/case{c}", "Prop q-div-XKbar", omega(lhs), omega(rhs), env, pat, m=m)


def _kk(*pairs) -> Element:
    """Product of K-powers given as (index, exponent) pairs."""
    out = Element.scalar(1)
    for i, e in pairs:
        out = out * _kpow(i, e)
    return out


def _g(*parts) -> Element:
    return _xw(*parts)


def _abstract_instances(n_max):
    """Hypothesis-checked instances of the abstract divided-power lemmas.

    Each entry: (lemma, variant, prop case, pattern, names, build) where
    build(env) returns the named elements X, Y and Z or H, I, J.
    """
    x = lambda i, j: Element.generator(X(i, j))
    xb = lambda i, j: Element.generator(Xb(i, j))
    kb = lambda a: Element.generator(Kb(a))
    return [
        ("basic-lemma1", "2", "q-div-ppee/case3", "i<k=j<l", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=x(e["k"], e["l"]), Z=x(e["i"], e["l"]))),
        ("basic-lemma1", "1", "q-div-ppee/case4", "i<k<j<l", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=x(e["k"], e["l"]),
                        Z=(x(e["k"], e["j"]) * x(e["i"], e["l"])).scale(-QQ))),
        ("basic-lemma1", "1-inverted", "q-div-pnee/case3", "i=l<j<k", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=x(e["k"], e["l"]),
                        Z=-(_kk((e["i"], -1), (e["j"], 1)) * x(e["k"], e["j"])))),
        ("basic-lemma1", "1-inverted", "q-div-pnee/case5", "i<l<j<k", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=x(e["k"], e["l"]),
                        Z=(_kk((e["l"], -1), (e["j"], 1)) * x(e["k"], e["j"]) * x(e["i"], e["l"])).scale(QQ))),
        ("basic-cor", "", "q-div-ppeo/case4", "i<k=j<l", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]), Z=-xb(e["i"], e["l"]))),
        ("basic-cor", "", "q-div-ppeo/case5", "i<k<j=l", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]),
                        Z=(x(e["k"], e["j"]) * xb(e["i"], e["l"])).scale(QQ))),
        ("basic-lemma2", "", "q-div-ppeo/case2", "i<k<l<j", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]),
                        H=(xb(e["k"], e["j"]) * x(e["i"], e["l"])).scale(QQ),
                        I=(x(e["k"], e["j"]) * xb(e["i"], e["l"])).scale(QQ),
                        J=(x(e["k"], e["j"]) * xb(e["i"], e["j"]) * x(e["i"], e["l"])).scale(QQ**2))),
        ("basic-lemma2", "", "q-div-pneo/case2", "i=l<j=k", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["j"], e["i"]),
                        H=-(kb(e["j"]) * _kk((e["i"], -1))),
                        I=-(_kk((e["j"], -1)) * kb(e["i"])),
                        J=(xb(e["i"], e["j"]) * _kk((e["j"], -1), (e["i"], -1))).scale(Q))),
        ("basic-lemma2", "", "q-div-pneo/case3", "i<l<k<j", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]),
                        H=(_kk((e["l"], -1), (e["k"], -1)) * xb(e["k"], e["j"]) * x(e["i"], e["l"])).scale(Q * QQ),
                        I=(_kk((e["l"], -1), (e["k"], -1)) * x(e["k"], e["j"]) * xb(e["i"], e["l"])).scale(Q * QQ),
                        J=(_kk((e["l"], -1), (e["k"], -1)) * x(e["k"], e["j"]) * xb(e["i"], e["j"])
                           * x(e["i"], e["l"])).scale(Q * QQ**2))),
        ("basic-lemma2", "", "q-div-pneo/case5", "i<l<j=k", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]),
                        H=(_kk((e["l"], -1)) * kb(e["j"]) * x(e["i"], e["l"])).scale(QQ),
                        I=-(_kk((e["l"], -1), (e["j"], -1)) * xb(e["i"], e["l"])),
                        J=-(_kk((e["l"], -1), (e["j"], -1)) * xb(e["i"], e["j"]) * x(e["i"], e["l"])).scale(QQ))),
        ("basic-lemma2", "", "q-div-pneo/case7", "l=i<k<j", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]),
                        H=-(xb(e["k"], e["j"]) * _kk((e["i"], -1), (e["k"], -1))),
                        I=(x(e["k"], e["j"]) * kb(e["i"]) * _kk((e["k"], -1))).scale(QQ),
                        J=-(x(e["k"], e["j"]) * xb(e["i"], e["j"]) * _kk((e["i"], -1), (e["k"], -1))).scale(QQ))),
        ("basic-lemma2", "", "q-div-XKbar/case4", "i<a<j", "ija",
         lambda e: dict(X=x(e["i"], e["j"]), Y=kb(e["a"]),
                        H=(xb(e["a"], e["j"]) * x(e["i"], e["a"]) * _kk((e["a"], -1))).scale(Q * QQ),
                        I=(x(e["a"], e["j"]) * xb(e["i"], e["a"]) * _kk((e["a"], -1))).scale(Q * QQ),
                        J=(x(e["a"], e["j"]) * xb(e["i"], e["j"]) * x(e["i"], e["a"])
                           * _kk((e["a"], -1))).scale(Q * QQ**2))),
        ("basic-star", "inverted", "q-div-pneo/case4", "i=l<j<k", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]),
                        Z=-(_kk((e["i"], -1), (e["j"], 1)) * xb(e["k"], e["j"])))),
        ("basic-star", "inverted", "q-div-pneo/case6", "i<l<j<k", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]),
                        Z=(_kk((e["l"], -1), (e["j"], 1)) * xb(e["k"], e["j"]) * x(e["i"], e["l"])).scale(QQ))),
        ("basic-star", "", "q-div-pneo/case8", "l<i<k=j", "ijkl",
         lambda e: dict(X=x(e["i"], e["j"]), Y=xb(e["k"], e["l"]),
                        Z=xb(e["i"], e["l"]) * _kk((e["i"], 1), (e["j"], -1)))),
    ]


def _abstract_identities(lemma, variant, env, els, m, s):
    """Hypotheses (list of (lhs, rhs)) and the conclusion at exponents m, s."""
    Xe, Ye = els["X"], els["Y"]
    i, j = next(iter(Xe.terms))[0].idx
    (yw,) = Ye.terms
    Xd = lambda t: _dp(X(i, j), t)
    Yd = lambda t: _dp(yw[0], t)
    hyp = []
    if lemma in ("basic-lemma1", "basic-star"):
        Z = els["Z"]
        inverted = variant.endswith("inverted")
        c1 = Q if variant == "2" else ONE
        c2 = Q.inverse() if variant == "2" else _qp(2 if inverted else -2)
        hyp.append((Xe * Ye, (Ye * Xe).scale(c1) + Z))
        hyp.append((Xe * Z, (Z * Xe).scale(c2)))
        if lemma == "basic-star":
            e = m - 1 if inverted else 1 - m
            return hyp, (Xd(m) * Ye, Ye * Xd(m) + (Z * Xd(m - 1)).scale(_qp(e)))
        hyp.append((Z * Ye, (Ye * Z).scale(c2)))
        rhs = Element()
        for t in range(0, min(m, s) + 1):
            if variant == "2":
                c = _qp((m - t) * (s - t))
            else:
                sign = 1 if inverted else -1
                c = _qp(sign * ((m + s) * t - _tri(t)))
            rhs = rhs + (Yd(s - t) * _dp(Z, t) * Xd(m - t)).scale(c)
        return hyp, (Xd(m) * Yd(s), rhs)
    if lemma == "basic-cor":
        Z = els["Z"]
        hyp.append((Xe * Ye, (Ye * Xe).scale(Q) - Z))
        hyp.append((Xe * Z, (Z * Xe).scale(Q.inverse())))
        return hyp, (Xd(m) * Ye, (Ye * Xd(m)).scale(_qp(m)) - Z * Xd(m - 1))
    H, I, J = els["H"], els["I"], els["J"]
    hyp.append((Xe * Ye, Ye * Xe + H - I))
    hyp.append((Xe * H, (H * Xe).scale(_qp(2)) - J))
    hyp.append((Xe * I, (I * Xe + J).scale(_qp(-2))))
    hyp.append((Xe * J, J * Xe))
    rhs = (
        Ye * Xd(m)
        + (H * Xd(m - 1)).scale(_qp(m - 1))
        - (I * Xd(m - 1)).scale(_qp(1 - m))
        - (J * Xd(m - 2)).scale(_qp(-1))
    )
    return hyp, (Xd(m) * Ye, rhs)


_ABSTRACT_LABELS = {
    "basic-lemma1": "Lemma basic-lemma1",
    "basic-cor": "Cor basic-cor",
    "basic-lemma2": "Lemma basic-lemma2",
    "basic-star": "Lemma basic-lemma1",
}


def _abstract(out, n_max, e_max):
    for lemma, variant, case, pat, names, build in _abstract_instances(n_max):
        base = f"{lemma}{'(' + variant + ')' if variant else ''}/{case}"
        label = _ABSTRACT_LABELS[lemma]
        two = lemma == "basic-lemma1"
        for env in _bindings(names, pat, n_max):
            els = build(env)
            hyps, _ = _abstract_identities(lemma, variant, env, els, 1, 1)
            for h, (lhs, rhs) in enumerate(hyps, 1):
                _emit(out, f"{base}/hyp{h}", label, lhs, rhs, env, pat)
            for m in range(1, e_max + 1):
                for s in range(1, (e_max if two else 1) + 1):
                    _, (lhs, rhs) = _abstract_identities(lemma, variant, env, els, m, s)
                    extra = {"m": m, "s": s} if two else {"m": m}
                    _emit(out, f"{base}/conclusion", label, lhs, rhs, env, pat, **extra)


def _cartan_and_squares(out, n_max, e_max):
    for i in range(1, n_max + 1):
        env = {"i": i}
        sq = _xw(Kb(i), Kb(i))
        _emit(out, "Kbarsq/bracket", "Lemma Kbarsq", sq, kbar_square(i), env, "i")
        laurent = (_kpow(i, 2) - _kpow(i, -2)).scale(ONE / (_qp(2) - _qp(-2)))
        _emit(out, "Kbarsq/laurent", "Lemma Kbarsq", sq, laurent, env, "i")
    for i, j in iproduct(range(1, n_max + 1), repeat=2):
        if i == j:
            continue
        env = {"i": i, "j": j}
        sq = _xw(Xb(i, j), Xb(i, j))
        sign = -1 if i < j else 1
        tag = "positive" if i < j else "negative"
        pat = "i<j" if i < j else "j<i"
        _emit(out, f"Xoddsq/{tag}-square", "Eq Xoddsq", sq, _xw(X(i, j), X(i, j)).scale(sign * QQ / QPLUS), env, pat)
        _emit(out, f"Xoddsq/{tag}-divided", "Eq Xoddsq", sq, _xw(X(i, j, 2)).scale(sign * QQ), env, pat)
    for env in _bindings("ikj", "i<k<j", n_max):
        i, k, j = env["i"], env["k"], env["j"]
        for m in range(1, e_max + 1):
            rhs = _xw(X(i, k, m), X(k, j, m)) - _xw(X(k, j, m), X(i, k, m)).scale(_qp(m * m))
            for t in range(1, m):
                rhs = rhs - _xw(X(k, j, m - t), X(i, j, t), X(i, k, m - t)).scale(_qp((m - t) ** 2))
            _emit(out, "q-div-recursion", "Eq q-div-recursion", _xw(X(i, j, m)), rhs, env, "i<k<j", m=m)


def commutation_corpus(n_max: int = 4, exp_max: int = 3) -> list:
    """Every case of the root-vector commutation formulas as Identity records.

    Indices range over 1..n_max and divided-power exponents over 1..exp_max;
    each record is checked at the smallest rank containing its indices.
    """
    out: list = []
    _first_order(out, n_max)
    _divided(out, n_max, exp_max)
    _abstract(out, n_max, exp_max)
    _cartan_and_squares(out, n_max, exp_max)
    return out
