"""The queer Lie superalgebra q(n), its Kostant form, and the Schur quotient.

Three layers live here:

* :class:`QnMatrix` -- concrete 2n x 2n supermatrices with the bracket of
  gl(n|n), used as an independent oracle for the commutator formulas;
* :func:`classical_rules` -- the straightening system of the Kostant form,
  whose irreducible words are the PBW monomials ``f_{A-} binom(h,A) hb e_{A+}``;
* :class:`SchurSystem` -- the quotient by the weight-r ideal, with
  idempotents and the reduction onto the basis ``u_A``.

Generators use the families of :mod:`queerkit.freealg`: ``x`` (divided
powers of even root vectors, order ``s``), ``xb`` (odd root vectors),
``h`` (binomials ``binom(h_i, s)``), ``hb`` (odd Cartan) and ``one``
(idempotents indexed by a composition).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial

from .freealg import Element, Generator, NonHomogeneous, RewriteSystem, Rule, gen

__all__ = [
    "QnMatrix",
    "RootDatum",
    "qn_bracket",
    "x",
    "xb",
    "hb",
    "h",
    "e",
    "f",
    "eb",
    "fb",
    "one",
    "classical_rules",
    "SchurSystem",
    "schur_rules",
    "ClassicalPBWMonomial",
    "compositions",
    "matrices_nz2",
    "schur_basis",
    "dim_schur",
    "dim_schur_zero",
    "chi",
    "degree",
    "relations_qs",
    "relations_qs_extra",
    "relations_qs_idempotent",
    "lemma_commutator",
    "gbinom",
    "lie_rules",
    "lie_normal_form",
    "expand_kostant",
    "classical_corpus",
    "div_root_formula",
    "lemma_table",
]


# ---------------------------------------------------------------------------
# generators


def x(i: int, j: int, s: int = 1) -> Generator:
    """Divided power x^{(s)}_{i,j} of the even root vector."""
    return gen("x", (i, j), s)


def xb(i: int, j: int) -> Generator:
    return gen("xb", (i, j))


def hb(i: int) -> Generator:
    return gen("hb", (i,))


def h(i: int, s: int = 1) -> Generator:
    """The binomial binom(h_i, s); ``h(i)`` is h_i itself."""
    return gen("h", (i,), s)


def e(i: int) -> Generator:
    return x(i, i + 1)


def f(i: int) -> Generator:
    return x(i + 1, i)


def eb(i: int) -> Generator:
    return xb(i, i + 1)


def fb(i: int) -> Generator:
    return xb(i + 1, i)


def one(lam) -> Generator:
    return gen("one", tuple(lam))


def E(g: Generator) -> Element:
    return Element.generator(g)


# ---------------------------------------------------------------------------
# roots


def gbinom(top: int, k: int) -> int:
    """Binomial coefficient with arbitrary integer top and k >= 0."""
    if k < 0:
        return 0
    num = 1
    for t in range(k):
        num *= top - t
    return num // factorial(k)


def pairing(k: int, i: int, j: int) -> int:
    """(eps_k, alpha_{i,j})."""
    return (k == i) - (k == j)


def root_sum(a: tuple, b: tuple):
    """Classify alpha_a + alpha_b: ('zero',), ('root', beta, eps) or ('none',)."""
    i, j = a
    k, l = b
    if i == l and j == k:
        return ("zero",)
    if j == k:
        return ("root", (i, l), 1)
    if i == l:
        return ("root", (k, j), -1)
    return ("none",)


class RootDatum:
    """Roots alpha_{i,j} = eps_i - eps_j of q(n) with the standard pairing."""

    def __init__(self, n: int):
        self.n = n
        self.roots = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        self.positive = [(i, j) for (i, j) in self.roots if i < j]

    def vector(self, i: int, j: int) -> tuple:
        return tuple((k == i) - (k == j) for k in range(1, self.n + 1))

    def pairing(self, k: int, root: tuple) -> int:
        return pairing(k, *root)

    def epsilon(self, a: tuple, b: tuple) -> int:
        kind = root_sum(a, b)
        if kind[0] != "root":
            raise ValueError(f"alpha{a} + alpha{b} is not a root")
        return kind[2]


# ---------------------------------------------------------------------------
# matrix oracle


class QnMatrix:
    """An element of q(n): the supermatrix with blocks [[A, B], [B, A]]."""

    __slots__ = ("n", "A", "B")

    def __init__(self, n: int, A=None, B=None):
        self.n = n
        self.A = {k: Fraction(v) for k, v in (A or {}).items() if v != 0}
        self.B = {k: Fraction(v) for k, v in (B or {}).items() if v != 0}

    @classmethod
    def from_generator(cls, n: int, g: Generator) -> "QnMatrix":
        fam = g.family
        if fam == "x" and g.s == 1:
            return cls(n, A={g.idx: 1})
        if fam == "xb":
            return cls(n, B={g.idx: 1})
        if fam == "h" and g.s == 1:
            i = g.idx[0]
            return cls(n, A={(i, i): 1})
        if fam == "hb":
            i = g.idx[0]
            return cls(n, B={(i, i): 1})
        raise ValueError(f"{g} is not an element of q(n)")

    def parity(self) -> int:
        if self.A and self.B:
            raise NonHomogeneous("matrix has both even and odd blocks")
        return 1 if self.B else 0

    def to_gl(self) -> dict:
        """Sparse gl(n|n) matrix keyed by (row, col) in I(n|n)."""
        out = {}
        for (i, j), v in self.A.items():
            out[(i, j)] = out.get((i, j), 0) + v
            out[(-i, -j)] = out.get((-i, -j), 0) + v
        for (i, j), v in self.B.items():
            out[(i, -j)] = out.get((i, -j), 0) + v
            out[(-i, j)] = out.get((-i, j), 0) + v
        return out

    @classmethod
    def from_gl(cls, n: int, m: dict) -> "QnMatrix":
        A, B = {}, {}
        for (a, b), v in m.items():
            if v == 0:
                continue
            if a > 0 and b > 0:
                A[(a, b)] = v
            elif a > 0 and b < 0:
                B[(a, -b)] = v
        out = cls(n, A, B)
        if out.to_gl() != {k: v for k, v in m.items() if v != 0}:
            raise ValueError("matrix is not of the q(n) block form")
        return out

    def __add__(self, other):
        A = dict(self.A)
        for k, v in other.A.items():
            A[k] = A.get(k, 0) + v
        B = dict(self.B)
        for k, v in other.B.items():
            B[k] = B.get(k, 0) + v
        return QnMatrix(self.n, A, B)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return QnMatrix(self.n, {k: v * c for k, v in self.A.items()}, {k: v * c for k, v in self.B.items()})

    def __eq__(self, other):
        return isinstance(other, QnMatrix) and self.A == other.A and self.B == other.B

    def __repr__(self):
        return f"QnMatrix(n={self.n}, A={self.A}, B={self.B})"


def _gl_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i, k), v in a.items():
        for (k2, j), w in b.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), 0) + v * w
    return out


def qn_bracket(X: QnMatrix, Y: QnMatrix) -> QnMatrix:
    """Super-commutator XY - (-1)^{|X||Y|} YX computed with gl(n|n) matrix units."""
    px, py = X.parity(), Y.parity()
    a, b = X.to_gl(), Y.to_gl()
    xy, yx = _gl_mul(a, b), _gl_mul(b, a)
    sign = -1 if px and py else 1
    out = dict(xy)
    for k, v in yx.items():
        out[k] = out.get(k, 0) - sign * v
    return QnMatrix.from_gl(X.n, out)


def lemma_commutator(n: int, a: Generator, b: Generator) -> QnMatrix:
    """Right-hand sides of the q(n) commutator table, as matrices.

    Covers pairs of root vectors and Cartan-root pairs (h or hb on the left).
    """
    Z = QnMatrix(n)

    def hm(i):
        return QnMatrix(n, A={(i, i): 1})

    def hbm(i):
        return QnMatrix(n, B={(i, i): 1})

    fa, fb_ = a.family, b.family
    if fa in ("x", "xb") and fb_ in ("x", "xb"):
        (i, j), (k, l) = a.idx, b.idx
        kind = root_sum(a.idx, b.idx)
        if fa == "x" and fb_ == "x":
            if kind[0] == "zero":
                return hm(i) - hm(j)
            if kind[0] == "root":
                return QnMatrix(n, A={kind[1]: kind[2]})
            return Z
        if fa == "x" and fb_ == "xb":
            if kind[0] == "zero":
                return hbm(i) - hbm(j)
            if kind[0] == "root":
                return QnMatrix(n, B={kind[1]: kind[2]})
            return Z
        if fa == "xb" and fb_ == "xb":
            if kind[0] == "zero":
                return hm(i) + hm(j)
            if kind[0] == "root":
                return QnMatrix(n, A={kind[1]: 1})
            return Z
        # [xb, x] = -(-1)^0 [x, xb]
        return lemma_commutator(n, b, a).scale(-1)
    if fa in ("h", "hb") and fb_ in ("x", "xb"):
        k = a.idx[0]
        p = pairing(k, *b.idx)
        if fa == "h":
            return QnMatrix(n, A={b.idx: p}) if fb_ == "x" else QnMatrix(n, B={b.idx: p})
        return QnMatrix(n, B={b.idx: p}) if fb_ == "x" else QnMatrix(n, A={b.idx: abs(p)})
    if fa in ("h", "hb") and fb_ in ("h", "hb"):
        if fa == "hb" and fb_ == "hb" and a.idx == b.idx:
            return hm(a.idx[0]).scale(2)
        return Z
    raise ValueError(f"no table entry for [{a}, {b}]")


# ---------------------------------------------------------------------------
# PBW order and degree


def e_order(n: int) -> list:
    """Positive roots in the order of the product e_{A+} (rows n-1 down to 1)."""
    return [(j, l) for j in range(n - 1, 0, -1) for l in range(j + 1, n + 1)]


def f_order(n: int) -> list:
    """Negative roots in the order of f_{A-} (columns 1..n-1, read upward)."""
    return [(i, j) for j in range(1, n) for i in range(n, j, -1)]


class _Ranks:
    """Slot numbers realising the PBW factor order F < 1_lambda < H < hb < E."""

    def __init__(self, n: int):
        self.n = n
        slots = {}
        r = 0
        for root in f_order(n):
            slots[("x", root)] = r
            slots[("xb", root)] = r + 1
            r += 2
        slots["one"] = r
        r += 1
        for i in range(1, n + 1):
            slots[("h", i)] = r
            r += 1
        for i in range(1, n + 1):
            slots[("hb", i)] = r
            r += 1
        for root in e_order(n):
            slots[("x", root)] = r
            slots[("xb", root)] = r + 1
            r += 2
        self.slots = slots

    def rank(self, g: Generator) -> int:
        fam = g.family
        if fam in ("x", "xb"):
            return self.slots[(fam, g.idx)]
        if fam in ("h", "hb"):
            return self.slots[(fam, g.idx[0])]
        if fam == "one":
            return self.slots["one"]
        raise ValueError(f"{g} is not a classical generator")


def gen_degree(g: Generator) -> int:
    fam = g.family
    if fam == "x":
        i, j = g.idx
        return g.s * abs(j - i)
    if fam == "xb":
        i, j = g.idx
        return abs(j - i)
    if fam == "hb":
        return 1
    return 0


def _word_key_factory(ranks: _Ranks):
    cache: dict = {}

    def rank(g):
        r = cache.get(g)
        if r is None:
            r = cache[g] = ranks.rank(g)
        return r

    def key(word):
        rs = [rank(g) for g in word]
        inv = 0
        for p in range(len(rs)):
            rp = rs[p]
            for q_ in range(p + 1, len(rs)):
                if rs[q_] < rp:
                    inv += 1
        return (sum(gen_degree(g) for g in word), inv, len(rs), *rs)

    return key, rank


# ---------------------------------------------------------------------------
# Cartan polynomial helpers (binomial basis)


def _hword(parts: dict) -> tuple:
    """Word for prod_i binom(h_i, b_i) with indices in increasing order."""
    return tuple(h(i, b) for i, b in sorted(parts.items()) if b > 0)


@lru_cache(maxsize=None)
def _shift_binom(c: int, s: int) -> tuple:
    """binom(h + c, s) = sum_u coeff_u binom(h, u); returns ((u, coeff), ...)."""
    return tuple((u, gbinom(c, s - u)) for u in range(s + 1) if gbinom(c, s - u) != 0)


@lru_cache(maxsize=None)
def _binom_product(a: int, b: int) -> tuple:
    """binom(h, a) binom(h, b) = sum_k c_k binom(h, k)."""
    out = []
    for k in range(max(a, b), a + b + 1):
        c = comb(k, a) * comb(a, k - b)
        if c:
            out.append((k, c))
    return tuple(out)


@lru_cache(maxsize=None)
def _difference_binom(c: int, t: int) -> tuple:
    """binom(h_i - h_j + c, t) expanded as sum coeff * binom(h_i, a) binom(h_j, b).

    Coefficients are iterated forward differences of the polynomial on the
    grid {0..t}^2; the polynomial has degree at most t in each variable.
    """
    vals = [[gbinom(u - v + c, t) for v in range(t + 1)] for u in range(t + 1)]
    out = []
    for a in range(t + 1):
        for b in range(t + 1):
            tot = 0
            for u in range(a + 1):
                for v in range(b + 1):
                    tot += (-1) ** (a - u + b - v) * comb(a, u) * comb(b, v) * vals[u][v]
            if tot:
                out.append((a, b, tot))
    return tuple(out)


# ---------------------------------------------------------------------------
# Kostant-form commutation formulas (products of two letters)


def _xd(i, j, s):
    return () if s == 0 else (x(i, j, s),)


def _add(out: dict, word: tuple, c):
    v = out.get(word, 0) + c
    if v == 0:
        out.pop(word, None)
    else:
        out[word] = v


def product_even_even(m: int, a: tuple, s: int, b: tuple) -> dict:
    """x^{(m)}_a x^{(s)}_b rewritten with x_b on the left."""
    (i, j), (k, l) = a, b
    out: dict = {}
    _add(out, _xd(k, l, s) + _xd(i, j, m), 1)
    kind = root_sum(a, b)
    if kind[0] == "zero":
        for t in range(1, min(m, s) + 1):
            for ea, eb_, c in _difference_binom(-m - s + 2 * t, t):
                _add(out, _xd(k, l, s - t) + _hword({i: ea, j: eb_} if i != j else {}) + _xd(i, j, m - t), c)
    elif kind[0] == "root":
        beta, eps = kind[1], kind[2]
        for t in range(1, min(m, s) + 1):
            _add(out, _xd(k, l, s - t) + _xd(*beta, t) + _xd(i, j, m - t), eps**t)
    return out


def product_even_odd(m: int, a: tuple, b: tuple) -> dict:
    """x^{(m)}_a xb_b rewritten with xb_b on the left."""
    (i, j) = a
    out: dict = {}
    _add(out, (xb(*b),) + _xd(i, j, m), 1)
    kind = root_sum(a, b)
    if kind[0] == "zero":
        _add(out, (hb(i),) + _xd(i, j, m - 1), 1)
        _add(out, (hb(j),) + _xd(i, j, m - 1), -1)
        if m >= 2:
            _add(out, (xb(i, j),) + _xd(i, j, m - 2), -1)
    elif kind[0] == "root":
        _add(out, (xb(*kind[1]),) + _xd(i, j, m - 1), kind[2])
    return out


def product_odd_odd(a: tuple, b: tuple) -> dict:
    """xb_a xb_b = -xb_b xb_a + [xb_a, xb_b]."""
    i, j = a
    out: dict = {(xb(*b), xb(*a)): -1}
    kind = root_sum(a, b)
    if kind[0] == "zero":
        _add(out, (h(i),), 1)
        _add(out, (h(j),), 1)
    elif kind[0] == "root":
        _add(out, (x(*kind[1]),), 1)
    return out


def product_even_hbar(m: int, a: tuple, k: int) -> dict:
    """x^{(m)}_a hb_k = hb_k x^{(m)}_a - (eps_k, a) xb_a x^{(m-1)}_a."""
    p = pairing(k, *a)
    out: dict = {(hb(k),) + _xd(*a, m): 1}
    if p:
        _add(out, (xb(*a),) + _xd(*a, m - 1), -p)
    return out


def product_odd_hbar(a: tuple, k: int) -> dict:
    """xb_a hb_k = -hb_k xb_a + |(eps_k, a)| x_a (sign fixed by the matrix bracket)."""
    p = abs(pairing(k, *a))
    out: dict = {(hb(k), xb(*a)): -1}
    if p:
        _add(out, (x(*a),), p)
    return out


def product_hbar_even(k: int, m: int, a: tuple) -> dict:
    """hb_k x^{(m)}_a = x^{(m)}_a hb_k + (eps_k, a) xb_a x^{(m-1)}_a."""
    p = pairing(k, *a)
    out: dict = {_xd(*a, m) + (hb(k),): 1}
    if p:
        _add(out, (xb(*a),) + _xd(*a, m - 1), p)
    return out


def product_hbar_odd(k: int, a: tuple) -> dict:
    """hb_k xb_a = -xb_a hb_k + |(eps_k, a)| x_a."""
    p = abs(pairing(k, *a))
    out: dict = {(xb(*a), hb(k)): -1}
    if p:
        _add(out, (x(*a),), p)
    return out


def product_root_binom(letter: Generator, k: int, s: int) -> dict:
    """y binom(h_k, s) = binom(h_k - c, s) y for a root letter y of weight c*(eps_k,a)."""
    a = letter.idx
    mult = letter.s if letter.family == "x" else 1
    c = -mult * pairing(k, *a)
    out: dict = {}
    for u, coeff in _shift_binom(c, s):
        _add(out, _hword({k: u}) + (letter,), coeff)
    return out


def product_binom_root(k: int, s: int, letter: Generator) -> dict:
    """binom(h_k, s) y = y binom(h_k + c, s)."""
    a = letter.idx
    mult = letter.s if letter.family == "x" else 1
    c = mult * pairing(k, *a)
    out: dict = {}
    for u, coeff in _shift_binom(c, s):
        _add(out, (letter,) + _hword({k: u}), coeff)
    return out


def _classical_pair_rule(ranks: _Ranks):
    def rule(a: Generator, b: Generator):
        fa, fb_ = a.family, b.family
        if fa == "one" or fb_ == "one":
            return None
        ra, rb = ranks.rank(a), ranks.rank(b)
        if ra < rb:
            return None
        if ra == rb:
            if fa == "x":
                return {_xd(*a.idx, a.s + b.s): comb(a.s + b.s, a.s)}
            if fa == "xb":
                return {}
            if fa == "h":
                return {_hword({a.idx[0]: k}): c for k, c in _binom_product(a.s, b.s)}
            if fa == "hb":
                return {(h(a.idx[0]),): 1}
        # ra > rb: exchange
        if fa == "x" and fb_ == "x":
            return product_even_even(a.s, a.idx, b.s, b.idx)
        if fa == "x" and fb_ == "xb":
            return product_even_odd(a.s, a.idx, b.idx)
        if fa == "xb" and fb_ == "x":
            if a.idx == b.idx:
                return {(b, a): 1}
            # xb_b x^{(m)}_a = x^{(m)}_a xb_b - (x^{(m)} xb - xb x^{(m)})
            out = {(b, a): 1}
            for w, c in product_even_odd(b.s, b.idx, a.idx).items():
                if w != (a, b):
                    _add(out, w, -c)
            return out
        if fa == "xb" and fb_ == "xb":
            return product_odd_odd(a.idx, b.idx)
        if fa == "x" and fb_ == "hb":
            return product_even_hbar(a.s, a.idx, b.idx[0])
        if fa == "xb" and fb_ == "hb":
            return product_odd_hbar(a.idx, b.idx[0])
        if fa == "hb" and fb_ == "x":
            return product_hbar_even(a.idx[0], b.s, b.idx)
        if fa == "hb" and fb_ == "xb":
            return product_hbar_odd(a.idx[0], b.idx)
        if fa in ("x", "xb") and fb_ == "h":
            return product_root_binom(a, b.idx[0], b.s)
        if fa == "h" and fb_ in ("x", "xb"):
            return product_binom_root(a.idx[0], a.s, b)
        if fa == "hb" and fb_ == "h":
            return {(b, a): 1}
        if fa == "h" and fb_ == "h":
            return {(b, a): 1}
        if fa == "hb" and fb_ == "hb":
            return {(b, a): -1}
        raise AssertionError(f"no classical rule for {a} {b}")

    return rule


@lru_cache(maxsize=None)
def classical_rules(n: int) -> RewriteSystem:
    """Straightening system of the Kostant form of U(q(n))."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    ranks = _Ranks(n)
    key, _ = _word_key_factory(ranks)
    rules = [Rule("divided-power exchange", 2, _classical_pair_rule(ranks))]
    sys = RewriteSystem(f"classical(n={n})", rules, key)
    sys.n = n
    sys.ranks = ranks
    return sys


# ---------------------------------------------------------------------------
# PBW monomials and matrices


def compositions(n: int, r: int) -> list:
    """Lambda(n, r) in lexicographically decreasing order."""
    if n == 0:
        return [()] if r == 0 else []
    if n == 1:
        return [(r,)]
    out = []
    for first in range(r, -1, -1):
        for rest in compositions(n - 1, r - first):
            out.append((first,) + rest)
    return out


def matrices_nz2(n: int, r: int) -> list:
    """All A = (A0, A1) in M_n(N|Z2) with total entry sum r, as tuples of tuples."""
    cells = [(i, j) for i in range(n) for j in range(n)]
    out = []

    def rec(pos, left, a0, a1):
        if pos == len(cells):
            if left == 0:
                out.append((_to_matrix(n, a0), _to_matrix(n, a1)))
            return
        for o in (0, 1):
            if o > left:
                continue
            for v in range(left - o, -1, -1):
                if pos == len(cells) - 1 and v + o != left:
                    continue
                rec(pos + 1, left - v - o, a0 + [v], a1 + [o])

    rec(0, r, [], [])
    return out


def _to_matrix(n, flat):
    return tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))


def chi(A0, A1) -> tuple:
    """chi(A): diagonal content plus row sums right of / column sums below the diagonal."""
    n = len(A0)
    out = []
    for i in range(n):
        v = A0[i][i] + A1[i][i]
        for j in range(i + 1, n):
            v += A0[i][j] + A1[i][j] + A0[j][i] + A1[j][i]
        out.append(v)
    return tuple(out)


def degree(A0, A1) -> int:
    """Degree of m_A: odd diagonal entries plus (a_ij + a_ji)|j - i| over i < j."""
    n = len(A0)
    d = sum(A1[i][i] for i in range(n))
    for i in range(n):
        for j in range(i + 1, n):
            d += (A0[i][j] + A1[i][j] + A0[j][i] + A1[j][i]) * (j - i)
    return d


class ClassicalPBWMonomial:
    """The index A = (A0, A1) of m_A = f_{A-} binom(h, A0 diag) hb_{A1 diag} e_{A+}."""

    __slots__ = ("A0", "A1")

    def __init__(self, A0, A1):
        self.A0 = tuple(tuple(r) for r in A0)
        self.A1 = tuple(tuple(r) for r in A1)
        if any(v not in (0, 1) for r in self.A1 for v in r):
            raise ValueError("odd part entries must be 0 or 1")

    @property
    def n(self):
        return len(self.A0)

    def f_word(self) -> tuple:
        out = ()
        for (i, j) in f_order(self.n):
            out += _xd(i, j, self.A0[i - 1][j - 1])
            if self.A1[i - 1][j - 1]:
                out += (xb(i, j),)
        return out

    def e_word(self) -> tuple:
        out = ()
        for (i, j) in e_order(self.n):
            out += _xd(i, j, self.A0[i - 1][j - 1])
            if self.A1[i - 1][j - 1]:
                out += (xb(i, j),)
        return out

    def hbar_word(self) -> tuple:
        return tuple(hb(i + 1) for i in range(self.n) if self.A1[i][i])

    def word(self) -> tuple:
        cart = _hword({i + 1: self.A0[i][i] for i in range(self.n)})
        return self.f_word() + cart + self.hbar_word() + self.e_word()

    def element(self) -> Element:
        return Element.from_word(self.word())

    def degree(self) -> int:
        return degree(self.A0, self.A1)

    def chi(self) -> tuple:
        return chi(self.A0, self.A1)

    def u_word(self) -> tuple:
        """Word of u_A = f_{A-} 1_{chi(A)} hb_{A1 diag} e_{A+} in the Schur quotient."""
        return self.f_word() + (one(self.chi()),) + self.hbar_word() + self.e_word()

    @classmethod
    def from_word(cls, n: int, word) -> "ClassicalPBWMonomial":
        A0 = [[0] * n for _ in range(n)]
        A1 = [[0] * n for _ in range(n)]
        for g in word:
            if g.family == "x":
                i, j = g.idx
                A0[i - 1][j - 1] += g.s
            elif g.family == "xb":
                i, j = g.idx
                A1[i - 1][j - 1] += 1
            elif g.family == "h":
                A0[g.idx[0] - 1][g.idx[0] - 1] += g.s
            elif g.family == "hb":
                A1[g.idx[0] - 1][g.idx[0] - 1] += 1
            elif g.family == "one":
                continue
            else:
                raise ValueError(f"{g} is not a Kostant-form generator")
        return cls(A0, A1)

    def to_json(self, lam=None) -> dict:
        return {"A0": [list(r) for r in self.A0], "A1": [list(r) for r in self.A1], "lambda": list(lam if lam is not None else self.chi())}

    def __eq__(self, other):
        return isinstance(other, ClassicalPBWMonomial) and (self.A0, self.A1) == (other.A0, other.A1)

    def __hash__(self):
        return hash((self.A0, self.A1))

    def __repr__(self):
        return f"ClassicalPBWMonomial(A0={self.A0}, A1={self.A1})"


# ---------------------------------------------------------------------------
# Schur quotient


def _letter_weight(g: Generator, n: int) -> tuple:
    """Weight (as a vector) carried by a root letter, s * alpha for divided powers."""
    i, j = g.idx
    m = g.s if g.family in ("x", "X") else 1
    w = [0] * n
    w[i - 1] += m
    w[j - 1] -= m
    return tuple(w)


def _shift(lam, w, sign=1):
    return tuple(a + sign * b for a, b in zip(lam, w))


def _valid(lam) -> bool:
    return all(v >= 0 for v in lam)


class SchurSystem(RewriteSystem):
    """Straightening in U(n, r): Kostant-form rules plus idempotent calculus.

    Irreducible words are the basis elements u_A.  Words without an
    idempotent are completed by inserting sum_lambda 1_lambda on the right;
    words ``f 1_lambda hb e`` whose content chi exceeds lambda are reduced by
    swapping the bottom-right block of the triangular parts, which lowers the
    degree.
    """

    def __init__(self, n: int, r: int, fuel: int | None = None):
        if n < 1 or r < 0:
            raise ValueError("need n >= 1 and r >= 0")
        self.n, self.r = n, r
        self.base = classical_rules(n)
        self.ranks = self.base.ranks
        self.lambdas = compositions(n, r)
        key, _ = _word_key_factory(self.ranks)
        rules = list(self.base.rules) + [
            Rule("idempotent exchange", 2, self._idempotent_pair),
            Rule("binomial bound", 1, self._binomial_bound),
        ]
        super().__init__(f"schur(n={n}, r={r})", rules, key, fuel)
        self._word_cache: dict = {}

    # pair rules -------------------------------------------------------------
    def _is_positive(self, g: Generator) -> bool:
        i, j = g.idx
        return i < j

    def _idempotent_pair(self, a: Generator, b: Generator):
        fa, fb_ = a.family, b.family
        if fa != "one" and fb_ != "one":
            return None
        n = self.n
        if fa == "one" and fb_ == "one":
            return {(a,): 1} if a.idx == b.idx else {}
        if fb_ == "one":
            lam = b.idx
            if fa == "h":
                return {(b,): gbinom(lam[a.idx[0] - 1], a.s)}
            if fa == "hb":
                if lam[a.idx[0] - 1] == 0:
                    return {}
                return {(b, a): 1}
            # root letter left of the idempotent
            new = _shift(lam, _letter_weight(a, n))
            if not _valid(new):
                return {}
            if self._is_positive(a):
                return {(one(new), a): 1}
            return None
        lam = a.idx
        if fb_ == "h":
            return {(a,): gbinom(lam[b.idx[0] - 1], b.s)}
        if fb_ == "hb":
            return {} if lam[b.idx[0] - 1] == 0 else None
        new = _shift(lam, _letter_weight(b, n), -1)
        if not _valid(new):
            return {}
        if not self._is_positive(b):
            return {(b, one(new)): 1}
        return None

    def _binomial_bound(self, a: Generator):
        if a.family == "h" and a.s > self.r:
            return {}
        return None

    # whole-word step ----------------------------------------------------------
    def word_rule(self, word):
        hit = self._word_cache.get(word)
        if hit is None and word not in self._word_cache:
            hit = self._word_cache[word] = self._reduce_word(word)
        return hit

    def _reduce_word(self, word):
        ones = [p for p, g in enumerate(word) if g.family == "one"]
        if not ones:
            return {word + (one(lam),): 1 for lam in self.lambdas}
        (p,) = ones
        fpart, lam, rest = word[:p], word[p].idx, word[p + 1 :]
        # weight walk: left through f-part, right through hb and e parts
        mu = lam
        for g in reversed(fpart):
            mu = _shift(mu, _letter_weight(g, self.n))
            if not _valid(mu):
                return {}
        mu = lam
        for g in rest:
            if g.family == "hb":
                if mu[g.idx[0] - 1] == 0:
                    return {}
                continue
            mu = _shift(mu, _letter_weight(g, self.n), -1)
            if not _valid(mu):
                return {}
        mono = ClassicalPBWMonomial.from_word(self.n, fpart + rest)
        content = mono.chi()
        if all(c <= l for c, l in zip(content, lam)):
            return None
        return self._swap_block(mono, lam)

    def _swap_block(self, C: ClassicalPBWMonomial, lam):
        n = self.n
        content = C.chi()
        i = max(k for k in range(n) if lam[k] < content[k]) + 1  # 1-based
        f_head = tuple(g for g in C.f_word() if g.idx[1] < i)
        f_G = tuple(g for g in C.f_word() if g.idx[1] >= i)
        e_G = tuple(g for g in C.e_word() if g.idx[0] >= i)
        e_tail = tuple(g for g in C.e_word() if g.idx[0] < i)
        hb_head = tuple(g for g in C.hbar_word() if g.idx[0] < i)
        hb_G = tuple(g for g in C.hbar_word() if g.idx[0] >= i)
        odd_fG = sum(g.odd for g in f_G)
        sigma = -1 if (odd_fG * len(hb_head)) % 2 else 1
        # f_G 1_lam = 1_lam' f_G
        lam2 = lam
        for g in reversed(f_G):
            lam2 = _shift(lam2, _letter_weight(g, n))
        u_G = f_G + hb_G + e_G
        swapped = e_G + hb_G + f_G
        nf = self.base.normal_form(Element.from_word(swapped))
        s = nf.coeff(u_G)
        if s not in (1, -1):
            raise AssertionError(f"unexpected leading coefficient {s} when swapping {u_G}")
        # u_G = s * swapped - s * (nf - s * u_G)
        if not self._vanishes(lam2, swapped):
            raise AssertionError("swapped leading term did not vanish")
        out: dict = {}
        for w, c in nf.terms.items():
            if w == u_G:
                continue
            _add(out, f_head + hb_head + (one(lam2),) + w + e_tail, -sigma * s * c)
        return out

    def _vanishes(self, lam, word) -> bool:
        mu = lam
        for g in word:
            if g.family == "hb":
                if mu[g.idx[0] - 1] == 0:
                    return True
                continue
            if g.family == "h":
                if gbinom(mu[g.idx[0] - 1], g.s) == 0:
                    return True
                continue
            mu = _shift(mu, _letter_weight(g, self.n), -1)
            if not _valid(mu):
                return True
        return False

    # interface ------------------------------------------------------------------
    def basis(self) -> list:
        return schur_basis(self.n, self.r)


@lru_cache(maxsize=None)
def schur_rules(n: int, r: int) -> SchurSystem:
    return SchurSystem(n, r)


def schur_basis(n: int, r: int) -> list:
    """The basis {u_A : A in M_n(N|Z2)_r} as (label, Element) pairs."""
    out = []
    for A0, A1 in matrices_nz2(n, r):
        mono = ClassicalPBWMonomial(A0, A1)
        out.append((mono.to_json(), Element.from_word(mono.u_word())))
    return out


def dim_schur(n: int, r: int) -> int:
    N = n * n
    return sum(comb(N + k - 1, k) * comb(N, r - k) for k in range(r + 1))


def dim_schur_zero(n: int, r: int) -> int:
    return sum(2 ** sum(1 for v in lam if v) for lam in compositions(n, r))


# ---------------------------------------------------------------------------
# defining relations as elements that must vanish


def _sc(a: Element, b: Element) -> Element:
    pa, pb = a.parity(), b.parity()
    return a * b + b * a if pa and pb else a * b - b * a


def _pair(k: int, j: int) -> int:
    """(eps_k, alpha_j) for the simple root alpha_j."""
    return pairing(k, j, j + 1)


def relations_qs(n: int) -> list:
    """The relations QS1-QS6 as (label, element) pairs; each element is zero in U(q(n))."""
    H = lambda i: E(h(i))
    HB = lambda i: E(hb(i))
    e_ = lambda i: E(e(i))
    f_ = lambda i: E(f(i))
    eb_ = lambda i: E(eb(i))
    fb_ = lambda i: E(fb(i))
    rels = []
    I = range(1, n + 1)
    J = range(1, n)
    for i in I:
        for j in I:
            rels.append((f"QS1/hh/{i},{j}", _sc(H(i), H(j))))
            rels.append((f"QS1/hhb/{i},{j}", _sc(H(i), HB(j))))
            rels.append((f"QS1/hbhb/{i},{j}", _sc(HB(i), HB(j)) - (2 * H(i) if i == j else Element())))
    for i in I:
        for j in J:
            p = _pair(i, j)
            rels.append((f"QS2/he/{i},{j}", _sc(H(i), e_(j)) - p * e_(j)))
            rels.append((f"QS2/heb/{i},{j}", _sc(H(i), eb_(j)) - p * eb_(j)))
            rels.append((f"QS2/hf/{i},{j}", _sc(H(i), f_(j)) + p * f_(j)))
            rels.append((f"QS2/hfb/{i},{j}", _sc(H(i), fb_(j)) + p * fb_(j)))
            rels.append((f"QS3/hbe/{i},{j}", _sc(HB(i), e_(j)) - p * eb_(j)))
            rels.append((f"QS3/hbf/{i},{j}", _sc(HB(i), f_(j)) + p * fb_(j)))
            near = i in (j, j + 1)
            rels.append((f"QS3/hbeb/{i},{j}", _sc(HB(i), eb_(j)) - (e_(j) if near else Element())))
            rels.append((f"QS3/hbfb/{i},{j}", _sc(HB(i), fb_(j)) - (f_(j) if near else Element())))
    for i in J:
        for j in J:
            d = i == j
            rels.append((f"QS4/ef/{i},{j}", _sc(e_(i), f_(j)) - ((H(i) - H(i + 1)) if d else Element())))
            rels.append((f"QS4/ebfb/{i},{j}", _sc(eb_(i), fb_(j)) - ((H(i) + H(i + 1)) if d else Element())))
            rels.append((f"QS4/ebf/{i},{j}", _sc(eb_(i), f_(j)) - ((HB(i) - HB(i + 1)) if d else Element())))
            rels.append((f"QS4/efb/{i},{j}", _sc(e_(i), fb_(j)) - ((HB(i) - HB(i + 1)) if d else Element())))
            if abs(i - j) != 1:
                rels.append((f"QS5/eeb/{i},{j}", _sc(e_(i), eb_(j))))
                rels.append((f"QS5/ebeb/{i},{j}", _sc(eb_(i), eb_(j))))
                rels.append((f"QS5/ffb/{i},{j}", _sc(f_(i), fb_(j))))
                rels.append((f"QS5/fbfb/{i},{j}", _sc(fb_(i), fb_(j))))
            if abs(i - j) > 1:
                rels.append((f"QS5/ee/{i},{j}", _sc(e_(i), e_(j))))
                rels.append((f"QS5/ff/{i},{j}", _sc(f_(i), f_(j))))
            if abs(i - j) == 1:
                rels.append((f"QS6/eee/{i},{j}", _sc(e_(i), _sc(e_(i), e_(j)))))
                rels.append((f"QS6/ebee/{i},{j}", _sc(eb_(i), _sc(e_(i), e_(j)))))
                rels.append((f"QS6/fff/{i},{j}", _sc(f_(i), _sc(f_(i), f_(j)))))
                rels.append((f"QS6/fbff/{i},{j}", _sc(fb_(i), _sc(f_(i), f_(j)))))
    for i in range(1, n - 1):
        rels.append((f"QS5/ee-ebeb/{i}", _sc(e_(i), e_(i + 1)) - _sc(eb_(i), eb_(i + 1))))
        rels.append((f"QS5/eeb-ebe/{i}", _sc(e_(i), eb_(i + 1)) - _sc(eb_(i), e_(i + 1))))
        rels.append((f"QS5/ff-fbfb/{i}", _sc(f_(i + 1), f_(i)) - _sc(fb_(i + 1), fb_(i))))
        rels.append((f"QS5/ffb-fbf/{i}", _sc(f_(i + 1), fb_(i)) - _sc(fb_(i + 1), f_(i))))
    return rels


def relations_qs_extra(n: int, r: int) -> list:
    """QS7 and QS8 for the quotient U(n, r)."""
    rels = []
    total = Element()
    for i in range(1, n + 1):
        total = total + E(h(i))
    rels.append(("QS7", total - Element.scalar(r)))
    for i in range(1, n + 1):
        el = E(hb(i))
        for k in range(1, r + 1):
            el = el * (E(h(i)) - Element.scalar(k))
        rels.append((f"QS8/{i}", el))
    return rels


def relations_qs_idempotent(n: int, r: int) -> list:
    """The idempotent presentation QS1'-QS4' of U(n, r) as vanishing elements."""
    lams = compositions(n, r)
    lamset = set(lams)
    O = lambda lam: E(one(lam))
    HB = lambda i: E(hb(i))
    rels = []
    total = Element()
    for lam in lams:
        total = total + O(lam)
        for mu in lams:
            rels.append((f"QS1'/orth/{lam},{mu}", O(lam) * O(mu) - (O(lam) if lam == mu else Element())))
    rels.append(("QS1'/sum", total - Element.scalar(1)))
    for i in range(1, n + 1):
        for lam in lams:
            if lam[i - 1] == 0:
                rels.append((f"QS1'/hb-zero/{i},{lam}", HB(i) * O(lam)))
            rels.append((f"QS1'/hb-comm/{i},{lam}", HB(i) * O(lam) - O(lam) * HB(i)))
        for j in range(1, n + 1):
            rhs = Element()
            if i == j:
                for lam in lams:
                    rhs = rhs + (2 * lam[i - 1]) * O(lam)
            rels.append((f"QS1'/hbhb/{i},{j}", _sc(HB(i), HB(j)) - rhs))
    for j in range(1, n):
        alpha = tuple((k == j) - (k == j + 1) for k in range(1, n + 1))
        for lam in lams:
            up = _shift(lam, alpha)
            down = _shift(lam, alpha, -1)
            for name, g, target in (("e", e(j), up), ("eb", eb(j), up), ("f", f(j), down), ("fb", fb(j), down)):
                lhs = E(g) * O(lam)
                rhs = (O(target) * E(g)) if target in lamset else Element()
                rels.append((f"QS2'/{name}/{j},{lam}", lhs - rhs))
                lhs2 = O(lam) * E(g)
                src = _shift(lam, alpha, -1) if name in ("e", "eb") else _shift(lam, alpha)
                rhs2 = (E(g) * O(src)) if src in lamset else Element()
                rels.append((f"QS2'/{name}-right/{j},{lam}", lhs2 - rhs2))
    for i in range(1, n + 1):
        for j in range(1, n):
            p = _pair(i, j)
            rels.append((f"QS3'/hbe/{i},{j}", _sc(HB(i), E(e(j))) - p * E(eb(j))))
            rels.append((f"QS3'/hbf/{i},{j}", _sc(HB(i), E(f(j))) + p * E(fb(j))))
            near = i in (j, j + 1)
            rels.append((f"QS3'/hbeb/{i},{j}", _sc(HB(i), E(eb(j))) - (E(e(j)) if near else Element())))
            rels.append((f"QS3'/hbfb/{i},{j}", _sc(HB(i), E(fb(j))) - (E(f(j)) if near else Element())))
    for i in range(1, n):
        for j in range(1, n):
            cart = Element()
            cart_plus = Element()
            if i == j:
                for lam in lams:
                    cart = cart + (lam[i - 1] - lam[i]) * O(lam)
                    cart_plus = cart_plus + (lam[i - 1] + lam[i]) * O(lam)
            hdiff = (HB(i) - HB(i + 1)) if i == j else Element()
            rels.append((f"QS4'/ef/{i},{j}", _sc(E(e(i)), E(f(j))) - cart))
            rels.append((f"QS4'/ebfb/{i},{j}", _sc(E(eb(i)), E(fb(j))) - cart_plus))
            rels.append((f"QS4'/ebf/{i},{j}", _sc(E(eb(i)), E(f(j))) - hdiff))
            rels.append((f"QS4'/efb/{i},{j}", _sc(E(e(i)), E(fb(j))) - hdiff))
    return rels


# ---------------------------------------------------------------------------
# first-order engine: U(q(n)) straightened with the matrix bracket alone


def _matrix_letters(M: QnMatrix) -> Element:
    """The basis expansion of a q(n) matrix in the letters x, xb, h, hb."""
    out = Element()
    for (i, j), v in M.A.items():
        out = out + Element.from_word((h(i) if i == j else x(i, j),), v)
    for (i, j), v in M.B.items():
        out = out + Element.from_word((hb(i) if i == j else xb(i, j),), v)
    return out


def _is_first_order(g: Generator) -> bool:
    return g.family in ("xb", "hb") or (g.family in ("x", "h") and g.s == 1)


@lru_cache(maxsize=None)
def lie_rules(n: int) -> RewriteSystem:
    """PBW straightening of U(q(n)) whose only input is :func:`qn_bracket`.

    Letters are the basis vectors of q(n) (order-1 ``x`` and ``h``, ``xb``,
    ``hb``).  An out-of-order pair ab becomes (-1)^{|a||b|} ba + [a, b]; the
    square of an odd letter becomes half its self-bracket.
    """
    ranks = _Ranks(n)

    def rule(a: Generator, b: Generator):
        if not (_is_first_order(a) and _is_first_order(b)):
            raise ValueError(f"{a} {b}: expand divided powers before using the first-order engine")
        ra, rb = ranks.rank(a), ranks.rank(b)
        if ra < rb:
            return None
        ma, mb = QnMatrix.from_generator(n, a), QnMatrix.from_generator(n, b)
        odd = a.odd and b.odd
        if ra == rb:
            if not odd:
                return None
            return {w: c / 2 for w, c in _matrix_letters(qn_bracket(ma, mb)).terms.items()}
        out = {(b, a): -1 if odd else 1}
        for w, c in _matrix_letters(qn_bracket(ma, mb)).terms.items():
            out[w] = out.get(w, 0) + c
        return out

    def key(word):
        rs = [ranks.rank(g) for g in word]
        inv = sum(1 for p in range(len(rs)) for q_ in range(p + 1, len(rs)) if rs[q_] < rs[p])
        return (len(rs), inv, *rs)

    sys = RewriteSystem(f"lie(n={n})", [Rule("bracket", 2, rule)], key)
    sys.n = n
    return sys


def _expand_letter(g: Generator) -> Element:
    if g.family == "x" and g.s != 1:
        base = Element.generator(x(*g.idx))
        return (base**g.s).scale(Fraction(1, factorial(g.s)))
    if g.family == "h" and g.s != 1:
        hi = Element.generator(h(g.idx[0]))
        out = Element.scalar(1)
        for u in range(g.s):
            out = out * (hi - Element.scalar(u))
        return out.scale(Fraction(1, factorial(g.s)))
    if g.family == "one":
        raise ValueError("idempotents live in the Schur quotient, not in U(q(n))")
    return Element.generator(g)


def expand_kostant(y: Element) -> Element:
    """Rewrite divided powers and binomials as polynomials in first-order letters."""
    out = Element()
    for w, c in y.terms.items():
        term = Element.scalar(c)
        for g in w:
            term = term * _expand_letter(g)
        out = out + term
    return out


def lie_normal_form(y: Element, n: int) -> Element:
    return lie_rules(n).normal_form(expand_kostant(y))


# ---------------------------------------------------------------------------
# the classical identity corpus


def _binom_shift(i: int, j: int, c: int, t: int) -> Element:
    """binom(h_i - h_j + c, t) as a polynomial in h_i, h_j."""
    d = Element.generator(h(i)) - Element.generator(h(j)) + Element.scalar(c)
    out = Element.scalar(1)
    for u in range(t):
        out = out * (d - Element.scalar(u))
    return out.scale(Fraction(1, factorial(t)))


def _xs(*parts) -> Element:
    """Product of letters and Elements; x letters of order 0 are 1, below 0 kill."""
    out = Element.scalar(1)
    for p in parts:
        if isinstance(p, Generator):
            if p.family == "x" and p.s <= 0:
                if p.s < 0:
                    return Element()
                continue
            p = Element.generator(p)
        out = out * p
    return out


def _root_case(a: tuple, b: tuple) -> str:
    kind = root_sum(a, b)
    return {"zero": "zero", "root": "root", "none": "other"}[kind[0]]


def div_root_formula(part: int, a: tuple, b, m: int = 1, s: int = 1) -> Element:
    """Right-hand side of the divided-power commutation formula ``part`` (1-5).

    ``a`` is the root of the left factor; ``b`` is a root for parts 1-3 and a
    Cartan index for parts 4-5 (then ``s`` selects the even (1) or odd (2)
    left factor).
    """
    i, j = a
    if part in (1, 2, 3):
        k, l = b
        kind = root_sum(a, b)
    if part == 1:
        out = _xs(x(k, l, s), x(i, j, m))
        for t in range(1, min(m, s) + 1):
            if kind[0] == "zero":
                out = out + _xs(x(k, l, s - t), _binom_shift(i, j, -m - s + 2 * t, t), x(i, j, m - t))
            elif kind[0] == "root":
                out = out + _xs(x(k, l, s - t), x(*kind[1], t), x(i, j, m - t)).scale(kind[2] ** t)
        return out
    if part == 2:
        out = _xs(xb(k, l), x(i, j, m))
        if kind[0] == "zero":
            out = out + _xs(E(hb(i)) - E(hb(j)), x(i, j, m - 1)) - _xs(xb(i, j), x(i, j, m - 2))
        elif kind[0] == "root":
            out = out + _xs(xb(*kind[1]), x(i, j, m - 1)).scale(kind[2])
        return out
    if part == 3:
        out = -_xs(xb(k, l), xb(i, j))
        if kind[0] == "zero":
            out = out + E(h(i)) + E(h(j))
        elif kind[0] == "root":
            out = out + E(x(*kind[1]))
        return out
    p = pairing(b, i, j)
    if part == 4 and s == 1:
        return _xs(hb(b), x(i, j, m)) - _xs(xb(i, j), x(i, j, m - 1)).scale(p)
    if part == 4:
        # the matrix bracket gives [xb_a, hb_k] = +|(eps_k, a)| x_a
        return -_xs(hb(b), xb(i, j)) + _xs(x(i, j)).scale(abs(p))
    if part == 5 and s == 1:
        return _xs(E(h(b)) - Element.scalar(m * p), x(i, j, m))
    return _xs(E(h(b)) - Element.scalar(p), xb(i, j))


_DIV_ROOT_LABEL = "Prop div-root"


def classical_corpus(n_max: int = 4, exp_max: int = 3, engines=("classical", "lie", "rep")) -> list:
    """Identity records for the q(n) bracket table, the divided-power
    commutation formulas and the odd squares, instantiated for ranks <= n_max."""
    from .freealg import Identity, super_commutator

    out = []

    def emit(id_, label, lhs, rhs, env, n):
        ranges = dict(env)
        ranges["n"] = n
        out.append(Identity(id_, label, lhs, rhs, ranges, tuple(engines)))

    for n in range(2, n_max + 1):
        roots = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        top = lambda *idx: max(idx) == n
        for a in roots:
            for b in roots:
                if not top(*a, *b):
                    continue
                case = _root_case(a, b)
                env = {"a": list(a), "b": list(b)}
                # the bracket table, checked against matrix units
                for part, (fa, fb_) in ((1, (x, x)), (2, (x, xb)), (3, (xb, xb))):
                    lhs = super_commutator(E(fa(*a)), E(fb_(*b)))
                    rhs = lemma_table(part, a, b)
                    emit(f"root-comm/{part}-{case}", "Lemma root-comm", lhs, rhs, env, n)
                for m in range(1, exp_max + 1):
                    for s in range(1, exp_max + 1):
                        emit(f"div-root/1-{case}", _DIV_ROOT_LABEL, _xs(x(*a, m), x(*b, s)),
                             div_root_formula(1, a, b, m, s), dict(env, m=m, s=s), n)
                    emit(f"div-root/2-{case}", _DIV_ROOT_LABEL, _xs(x(*a, m), xb(*b)),
                         div_root_formula(2, a, b, m), dict(env, m=m), n)
                emit(f"div-root/3-{case}", _DIV_ROOT_LABEL, _xs(xb(*a), xb(*b)), div_root_formula(3, a, b), env, n)
            for k in range(1, n + 1):
                if not top(*a, k):
                    continue
                env = {"a": list(a), "k": k}
                for fam, letter in (("x", x), ("xb", xb)):
                    lhs_h = super_commutator(E(h(k)), E(letter(*a)))
                    lhs_hb = super_commutator(E(hb(k)), E(letter(*a)))
                    emit(f"root-comm/4-h{fam}", "Lemma root-comm", lhs_h, lemma_table(4, ("h", k), (fam, a)), env, n)
                    emit(f"root-comm/4-hb{fam}", "Lemma root-comm", lhs_hb, lemma_table(4, ("hb", k), (fam, a)), env, n)
                for m in range(1, exp_max + 1):
                    emit("div-root/4-even", _DIV_ROOT_LABEL, _xs(x(*a, m), hb(k)),
                         div_root_formula(4, a, k, m, 1), dict(env, m=m), n)
                    emit("div-root/5-even", _DIV_ROOT_LABEL, _xs(x(*a, m), h(k)),
                         div_root_formula(5, a, k, m, 1), dict(env, m=m), n)
                emit("div-root/4-odd", _DIV_ROOT_LABEL, _xs(xb(*a), hb(k)), div_root_formula(4, a, k, 1, 2), env, n)
                emit("div-root/5-odd", _DIV_ROOT_LABEL, _xs(xb(*a), h(k)), div_root_formula(5, a, k, 1, 2), env, n)
            if top(*a):
                emit("odd-square/xbar", "Eq odd-square", _xs(xb(*a), xb(*a)), Element(), {"a": list(a)}, n)
    for n in range(1, n_max + 1):
        emit("odd-square/hbar", "Eq odd-square", _xs(hb(n), hb(n)), E(h(n)), {"i": n}, max(n, 1))
    return out


def lemma_table(part: int, a, b) -> Element:
    """The displayed right-hand sides of the q(n) super-commutator table.

    Parts 1-3 take two roots; part 4 takes (family, index) for the Cartan
    letter and (family, root) for the root vector.
    """
    if part == 4:
        (cf, k), (rf, root) = a, b
        p = pairing(k, *root)
        if cf == "h":
            return E(x(*root) if rf == "x" else xb(*root)).scale(p)
        if rf == "x":
            return E(xb(*root)).scale(p)
        return E(x(*root)).scale(abs(p))
    i, j = a
    kind = root_sum(a, b)
    if kind[0] == "none":
        return Element()
    if part == 1:
        return E(h(i)) - E(h(j)) if kind[0] == "zero" else E(x(*kind[1])).scale(kind[2])
    if part == 2:
        return E(hb(i)) - E(hb(j)) if kind[0] == "zero" else E(xb(*kind[1])).scale(kind[2])
    return E(h(i)) + E(h(j)) if kind[0] == "zero" else E(x(*kind[1]))
