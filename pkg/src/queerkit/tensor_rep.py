"""Exact sparse operators on the tensor superspace V^{(x) r}.

V has basis v_1..v_n (even) and v_{-1}..v_{-n} (odd).  Operators are stored
row-major: ``rows[i][j]`` is the coefficient of basis vector i in the image
of basis vector j.  Coefficients are ints, flint ``fmpq`` or
:class:`~queerkit.scalar.Scalar`, depending on the base field.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial, gcd as _gcd

from flint import fmpq, fmpq_mat, fmpz_mat

from .freealg import Element, Generator
from .scalar import ONE, Q, Scalar, qfactorial, bracket_eval, to_field

__all__ = [
    "TensorSpace",
    "tensor_space",
    "embed",
    "projection",
    "SparseOperator",
    "phi_r",
    "sergeev_action",
    "sergeev_generators",
    "build_S",
    "build_T",
    "build_theta",
    "S_block",
    "Phi_r",
    "hecke_clifford_action",
    "hecke_clifford_generators",
    "supercommutant_dim",
    "sparse_rank",
    "operator_rank",
    "qybe_check",
    "image_lattice_index",
    "lattice_index",
]


def vector_indices(n: int) -> list:
    return list(range(1, n + 1)) + [-a for a in range(1, n + 1)]


class TensorSpace:
    """Basis v_j = v_{j_1} (x) ... (x) v_{j_r} of V^{(x) r}."""

    def __init__(self, n: int, r: int):
        if n < 1 or r < 0:
            raise ValueError("need n >= 1 and r >= 0")
        self.n, self.r = n, r
        self.basis = list(product(vector_indices(n), repeat=r))
        self.index = {b: k for k, b in enumerate(self.basis)}
        self.parities = [sum(1 for a in b if a < 0) % 2 for b in self.basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def weight(self, k: int) -> tuple:
        b = self.basis[k]
        return tuple(sum(1 for a in b if abs(a) == i) for i in range(1, self.n + 1))

    def identity(self, one=1) -> "SparseOperator":
        return SparseOperator(self.dim, 0, {k: {k: one} for k in range(self.dim)})

    def __eq__(self, other):
        return isinstance(other, TensorSpace) and (self.n, self.r) == (other.n, other.r)

    def __hash__(self):
        return hash((self.n, self.r))


@lru_cache(maxsize=None)
def tensor_space(n: int, r: int) -> TensorSpace:
    return TensorSpace(n, r)


def _vparity(a: int) -> int:
    return 1 if a < 0 else 0


class SparseOperator:
    """An exact sparse linear map with a declared parity."""

    __slots__ = ("dim", "parity", "rows")

    def __init__(self, dim: int, parity: int, rows=None):
        self.dim = dim
        self.parity = parity
        self.rows = {}
        for i, row in (rows or {}).items():
            clean = {j: v for j, v in row.items() if v != 0}
            if clean:
                self.rows[i] = clean

    @classmethod
    def zero(cls, dim: int, parity: int = 0) -> "SparseOperator":
        return cls(dim, parity)

    def is_zero(self) -> bool:
        return not self.rows

    def entries(self):
        for i in sorted(self.rows):
            for j in sorted(self.rows[i]):
                yield i, j, self.rows[i][j]

    def apply(self, col: int) -> dict:
        """Image of basis vector ``col`` as {row: coeff}."""
        return {i: row[col] for i, row in self.rows.items() if col in row}

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        """Composition self o other."""
        out = {}
        orows = other.rows
        for i, row in self.rows.items():
            acc: dict = {}
            for j, a in row.items():
                brow = orows.get(j)
                if not brow:
                    continue
                for k, b in brow.items():
                    v = acc.get(k, 0) + a * b
                    if v == 0:
                        acc.pop(k, None)
                    else:
                        acc[k] = v
            if acc:
                out[i] = acc
        return _raw(self.dim, (self.parity + other.parity) % 2, out)

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.parity != other.parity:
            raise ValueError("adding operators of different parity")
        out = {i: dict(row) for i, row in self.rows.items()}
        for i, row in other.rows.items():
            acc = out.setdefault(i, {})
            for j, v in row.items():
                w = acc.get(j, 0) + v
                if w == 0:
                    acc.pop(j, None)
                else:
                    acc[j] = w
            if not acc:
                del out[i]
        return _raw(self.dim, self.parity, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SparseOperator":
        if c == 0:
            return SparseOperator(self.dim, self.parity)
        return _raw(self.dim, self.parity, {i: {j: v * c for j, v in row.items()} for i, row in self.rows.items()})

    def power(self, k: int) -> "SparseOperator":
        out = None
        for _ in range(k):
            out = self if out is None else out @ self
        if out is None:
            return SparseOperator(self.dim, 0, {i: {i: 1} for i in range(self.dim)})
        return out

    def map_coeffs(self, fn) -> "SparseOperator":
        return SparseOperator(self.dim, self.parity, {i: {j: fn(v) for j, v in row.items()} for i, row in self.rows.items()})

    def supports_parity(self, space: TensorSpace) -> bool:
        p = space.parities
        return all((p[i] + p[j]) % 2 == self.parity for i, row in self.rows.items() for j in row)

    def __eq__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return (self - other).is_zero() if self.parity == other.parity or self.is_zero() or other.is_zero() else False

    __hash__ = None

    def to_json(self) -> dict:
        return {"dim": self.dim, "parity": self.parity, "entries": [[i, j, str(v)] for i, j, v in self.entries()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "SparseOperator":
        from .freealg import _coeff_from_str

        if isinstance(data, str):
            data = json.loads(data)
        rows: dict = {}
        for i, j, v in data["entries"]:
            rows.setdefault(i, {})[j] = _coeff_from_str(v)
        return cls(data["dim"], data["parity"], rows)

    def __repr__(self):
        nnz = sum(len(r) for r in self.rows.values())
        return f"SparseOperator(dim={self.dim}, parity={self.parity}, nnz={nnz})"


def _raw(dim, parity, rows) -> SparseOperator:
    op = SparseOperator.__new__(SparseOperator)
    op.dim, op.parity, op.rows = dim, parity, rows
    return op


def _divide(op: SparseOperator, d) -> SparseOperator:
    """Exact division of every coefficient by d."""

    def div(v):
        if isinstance(v, int) and isinstance(d, int):
            qv, rem = divmod(v, d)
            if rem:
                raise ArithmeticError("division is not exact over the integers")
            return qv
        return v / d

    return op.map_coeffs(div)


# ---------------------------------------------------------------------------
# operators on V and their slot embeddings


def embed(space: TensorSpace, factors: dict) -> SparseOperator:
    """Super tensor product of operators on V placed at given slots.

    ``factors`` maps a slot (1-based) to ``(matrix, parity)``, with ``matrix``
    a dict {(a, b): coeff} meaning v_b -> coeff * v_a.  The Koszul sign is
    (-1)^{|Y_k| (|v_1| + ... + |v_{k-1}|)} summed over the factors.
    """
    parity = sum(p for _, p in factors.values()) % 2
    cols_by_slot = {}
    for slot, (m, _) in factors.items():
        by_col: dict = {}
        for (a, b), c in m.items():
            if c != 0:
                by_col.setdefault(b, []).append((a, c))
        cols_by_slot[slot] = by_col
    rows: dict = {}
    for col, basis in enumerate(space.basis):
        partial = [((), 1)]
        before = 0
        for k, a in enumerate(basis, start=1):
            if k in factors:
                images = cols_by_slot[k].get(a, [])
                sign = -1 if (factors[k][1] and before % 2) else 1
                partial = [(w + (b,), c * cb * sign) for w, c in partial for b, cb in images]
                if not partial:
                    break
            else:
                partial = [(w + (a,), c) for w, c in partial]
            before += _vparity(a)
        for w, c in partial:
            i = space.index[w]
            row = rows.setdefault(i, {})
            v = row.get(col, 0) + c
            if v == 0:
                row.pop(col, None)
            else:
                row[col] = v
    return SparseOperator(space.dim, parity, rows)


def _gl_matrix(g: Generator) -> tuple:
    """Matrix on V and parity for a q(n) element given as a Lie generator."""
    fam = g.family
    if fam == "x":
        i, j = g.idx
        return {(i, j): 1, (-i, -j): 1}, 0
    if fam == "xb":
        i, j = g.idx
        return {(i, -j): 1, (-i, j): 1}, 1
    if fam == "h":
        i = g.idx[0]
        return {(i, i): 1, (-i, -i): 1}, 0
    if fam == "hb":
        i = g.idx[0]
        return {(i, -i): 1, (-i, i): 1}, 1
    raise ValueError(f"{g} is not a Lie generator")


def lie_action(space: TensorSpace, m: dict, parity: int) -> SparseOperator:
    """Action of a Lie superalgebra element through x -> x(x)1 + 1(x)x."""
    out = SparseOperator(space.dim, parity)
    for k in range(1, space.r + 1):
        out = out + embed(space, {k: (m, parity)})
    return out


def projection(space: TensorSpace, lam) -> SparseOperator:
    lam = tuple(lam)
    return SparseOperator(space.dim, 0, {k: {k: 1} for k in range(space.dim) if space.weight(k) == lam})


def _weight_diagonal(space: TensorSpace, fn) -> SparseOperator:
    rows = {}
    for k in range(space.dim):
        v = fn(space.weight(k))
        if v != 0:
            rows[k] = {k: v}
    return SparseOperator(space.dim, 0, rows)


# ---------------------------------------------------------------------------
# classical representation


class _ClassicalRep:
    def __init__(self, n: int, r: int):
        self.space = tensor_space(n, r)
        self.n = n
        self.cache: dict = {}

    def generator(self, g: Generator) -> SparseOperator:
        op = self.cache.get(g)
        if op is not None:
            return op
        sp = self.space
        fam = g.family
        if fam in ("x", "xb", "h", "hb"):
            for i in g.idx:
                if not 1 <= i <= self.n:
                    raise ValueError(f"generator {g} is outside rank {self.n}")
        if fam == "x" and g.s != 1:
            base = self.generator(Generator("x", g.idx, 1, 0))
            op = _divide(base.power(g.s), factorial(g.s))
        elif fam == "h" and g.s != 1:
            i = g.idx[0]
            op = _weight_diagonal(sp, lambda mu: comb(mu[i - 1], g.s) if g.s >= 0 else 0)
        elif fam == "one":
            if len(g.idx) != self.n:
                raise ValueError(f"idempotent {g} has the wrong length for rank {self.n}")
            op = projection(sp, g.idx)
        else:
            m, p = _gl_matrix(g)
            op = lie_action(sp, m, p)
        self.cache[g] = op
        return op


@lru_cache(maxsize=None)
def _classical_rep(n: int, r: int) -> _ClassicalRep:
    return _ClassicalRep(n, r)


def _word_operator(gen_op, word, space, one=1) -> SparseOperator:
    if not word:
        return space.identity(one)
    op = gen_op(word[0])
    for g in word[1:]:
        op = op @ gen_op(g)
    return op


def _element_operator(x: Element, gen_op, space, one=1) -> SparseOperator:
    parities = {sum(g.odd for g in w) % 2 for w in x.terms}
    out = SparseOperator(space.dim, parities.pop() if len(parities) == 1 else 0)
    for w, c in x.terms.items():
        term = _word_operator(gen_op, w, space, one).scale(c)
        if term.is_zero():
            continue
        if out.is_zero():
            out = term
        else:
            if term.parity != out.parity:
                raise ValueError("element is not parity homogeneous")
            out = out + term
    return out


def phi_r(x, n: int, r: int) -> SparseOperator:
    """The action of an element of the classical alphabet on V^{(x) r}."""
    if isinstance(x, Generator):
        x = Element.generator(x)
    rep = _classical_rep(n, r)
    return _element_operator(x, rep.generator, rep.space)


# ---------------------------------------------------------------------------
# Sergeev superalgebra




def _j_matrix(n: int) -> dict:
    m = {}
    for a in range(1, n + 1):
        m[(-a, a)] = 1
        m[(a, -a)] = -1
    return m


def sergeev_generator(g: Generator, n: int, r: int) -> SparseOperator:
    sp = tensor_space(n, r)
    if g.family == "s":
        k = g.idx[0]
        if not 1 <= k <= r - 1:
            raise IndexError(f"s{k} is out of range for r = {r}")
        return _swap(sp, k, lambda a, b: -1 if (a < 0 and b < 0) else 1)
    if g.family == "c":
        l = g.idx[0]
        if not 1 <= l <= r:
            raise IndexError(f"c{l} is out of range for r = {r}")
        return embed(sp, {l: (_j_matrix(n), 1)})
    raise ValueError(f"{g} is not a Sergeev generator")


def _swap(sp: TensorSpace, k: int, sign) -> SparseOperator:
    rows = {}
    for col, b in enumerate(sp.basis):
        a1, a2 = b[k - 1], b[k]
        w = b[: k - 1] + (a2, a1) + b[k + 1 :]
        rows[sp.index[w]] = {col: sign(a1, a2)}
    return SparseOperator(sp.dim, 0, rows)


def sergeev_action(x, n: int, r: int) -> SparseOperator:
    """psi_r of a word or element in the letters s_k, c_l."""
    if isinstance(x, Generator):
        x = Element.generator(x)
    sp = tensor_space(n, r)
    return _element_operator(x, lambda g: sergeev_generator(g, n, r), sp)


def sergeev_generators(n: int, r: int) -> list:
    from .freealg import gen

    out = [sergeev_generator(gen("s", (k,)), n, r) for k in range(1, r)]
    out += [sergeev_generator(gen("c", (l,)), n, r) for l in range(1, r + 1)]
    return out


# ---------------------------------------------------------------------------
# quantum representation


def S_block(i: int, j: int, n: int, q=Q) -> tuple:
    """S_{i,j} as (matrix on V, parity) for i <= j in I(n|n)."""
    if i > j:
        raise ValueError(f"L({i},{j}) needs i <= j")
    if not (1 <= abs(i) <= n and 1 <= abs(j) <= n):
        raise ValueError(f"L({i},{j}) is outside rank {n}")
    d = q - 1 / q
    if i == j:
        a = abs(i)
        c = q - 1 if i > 0 else 1 / q - 1
        m = {(b, b): 1 for b in vector_indices(n)}
        m[(a, a)] = m[(a, a)] + c
        m[(-a, -a)] = m[(-a, -a)] + c
        return m, 0
    if i > 0:  # 1 <= b=i < a=j
        b, a = i, j
        return {(a, b): d, (-a, -b): d}, 0
    if j < 0:  # S_{-b,-a}, a < b
        b, a = -i, -j
        return {(a, b): -d, (-a, -b): -d}, 0
    b, a = -i, j
    return {(-a, b): -d, (a, -b): -d}, 1


def build_S(n: int, q=Q) -> SparseOperator:
    """S = sum_{i<=j} S_{i,j} (x) E_{i,j} on V (x) V."""
    sp = tensor_space(n, 2)
    I = sorted(vector_indices(n))
    out = SparseOperator(sp.dim, 0)
    for i in I:
        for j in I:
            if i > j:
                continue
            m, p = S_block(i, j, n, q)
            out = out + embed(sp, {1: (m, p), 2: ({(i, j): 1}, p)})
    return out


def build_T(n: int) -> SparseOperator:
    """T = sum sgn(j) E_{i,j} (x) E_{j,i}."""
    sp = tensor_space(n, 2)
    out = SparseOperator(sp.dim, 0)
    for i in vector_indices(n):
        for j in vector_indices(n):
            p = (_vparity(i) + _vparity(j)) % 2
            term = embed(sp, {1: ({(i, j): 1 if j > 0 else -1}, p), 2: ({(j, i): 1}, p)})
            out = out + term
    return out


def build_theta(n: int) -> dict:
    """Theta = sum_a (E_{-a,a} - E_{a,-a}) as a matrix on V."""
    return _j_matrix(n)


class _QuantumRep:
    def __init__(self, n: int, r: int, q):
        self.n, self.r, self.q = n, r, q
        self.space = tensor_space(n, r)
        self.one = q ** 0 if isinstance(q, Scalar) else fmpq(1)
        self.cache: dict = {}
        self.l_cache: dict = {}

    def L(self, i: int, j: int) -> SparseOperator:
        """Phi_r(L_{i,j}) via the iterated comultiplication."""
        key = (i, j)
        op = self.l_cache.get(key)
        if op is None:
            op = self.l_cache[key] = self._L(i, j)
        return op

    def _L(self, i, j):
        n, r, q = self.n, self.r, self.q
        I = [k for k in sorted(vector_indices(n)) if i <= k <= j]
        sp = self.space
        # sum over chains i = k_0 <= k_1 <= ... <= k_r = j
        out = SparseOperator(sp.dim, 0 if i * j > 0 else 1)

        def chains(start, left):
            if left == 1:
                yield (start, j)
                return
            for k in I:
                if k >= start:
                    for rest in chains(k, left - 1):
                        yield (start,) + rest

        blocks = {}
        for a in I:
            for b in I:
                if a <= b:
                    blocks[(a, b)] = S_block(a, b, n, q)
        if r == 0:
            return sp.identity(self.one) if i == j and i > 0 else SparseOperator(sp.dim, 0)
        for chain in chains(i, r):
            factors = {k + 1: blocks[(chain[k], chain[k + 1])] for k in range(r)}
            out = out + embed(sp, factors)
        return out

    def generator(self, g: Generator) -> SparseOperator:
        op = self.cache.get(g)
        if op is None:
            op = self.cache[g] = self._generator(g)
        return op

    def _generator(self, g: Generator) -> SparseOperator:
        sp, q = self.space, self.q
        fam = g.family
        if fam == "L":
            return self.L(*g.idx)
        if fam == "K":
            i = g.idx[0]
            return _weight_diagonal(sp, lambda mu: q ** mu[i - 1])
        if fam == "Ki":
            i = g.idx[0]
            return _weight_diagonal(sp, lambda mu: q ** (-mu[i - 1]))
        if fam == "Kbr":
            i, c = g.idx
            return _weight_diagonal(sp, lambda mu: bracket_eval(mu[i - 1], c, g.s, q))
        if fam == "KKbr":
            i = g.idx[0]
            return _weight_diagonal(sp, lambda mu: q ** mu[i - 1] * bracket_eval(mu[i - 1], 0, g.s, q))
        if fam == "one":
            return projection(sp, g.idx).scale(self.one)
        if fam == "X" and g.s != 1:
            base = self.generator(Generator("X", g.idx, 1, 0))
            return base.power(g.s).scale(1 / qfactorial(g.s, q))
        # remaining quantum letters go through their L-forms
        from .quantum import letter_to_l

        return _element_operator(letter_to_l(g, q), self.generator, sp, self.one)


@lru_cache(maxsize=None)
def _quantum_rep(n: int, r: int, q) -> _QuantumRep:
    return _QuantumRep(n, r, q)


def Phi_r(x, n: int, r: int, q0=None) -> SparseOperator:
    """The quantum action on V^{(x) r}; ``q0`` specializes q to a rational."""
    q = to_field(q0)
    if isinstance(x, Generator):
        x = Element.generator(x)
    rep = _quantum_rep(n, r, q)
    if q0 is not None:
        x = x.map_coeffs(lambda c: c.specialize(q) if isinstance(c, Scalar) else c)
    return _element_operator(x, rep.generator, rep.space, rep.one)


def s_bar(n: int, q=Q) -> SparseOperator:
    return build_T(n) @ build_S(n, q)


def _two_slot(space: TensorSpace, op2: SparseOperator, n: int, j: int) -> SparseOperator:
    """Place an operator on V (x) V at slots (j, j+1) of V^{(x) r}.

    The operator is decomposed into matrix units E_{a,b} (x) E_{c,d}; each
    piece is embedded with its Koszul sign.
    """
    sp2 = tensor_space(n, 2)
    out = SparseOperator(space.dim, op2.parity)
    for row, col, v in op2.entries():
        a, c = sp2.basis[row]
        b, d = sp2.basis[col]
        p1 = (_vparity(a) + _vparity(b)) % 2
        p2 = (_vparity(c) + _vparity(d)) % 2
        # (E_ab (x) E_cd)(v_b (x) v_d) = (-1)^{p2 |v_b|} v_a (x) v_c, so the
        # coefficient of E_ab (x) E_cd is v * (-1)^{p2 |v_b|}
        sign = -1 if (p2 and _vparity(b)) else 1
        out = out + embed(space, {j: ({(a, b): 1}, p1), j + 1: ({(c, d): 1}, p2)}).scale(v * sign)
    return out


@lru_cache(maxsize=None)
def _hecke_generator(kind: str, k: int, n: int, r: int, q) -> SparseOperator:
    sp = tensor_space(n, r)
    if kind == "T":
        if not 1 <= k <= r - 1:
            raise IndexError(f"T{k} is out of range for r = {r}")
        return _two_slot(sp, s_bar(n, q), n, k)
    if not 1 <= k <= r:
        raise IndexError(f"c{k} is out of range for r = {r}")
    return embed(sp, {k: (build_theta(n), 1)})


def hecke_clifford_action(x, n: int, r: int, q0=None) -> SparseOperator:
    """Psi_r of a word or element in T_k, c_l."""
    q = to_field(q0)
    if isinstance(x, Generator):
        x = Element.generator(x)
    sp = tensor_space(n, r)
    one = q ** 0 if isinstance(q, Scalar) else fmpq(1)
    if q0 is not None:
        x = x.map_coeffs(lambda c: c.specialize(q) if isinstance(c, Scalar) else c)
    return _element_operator(x, lambda g: _hecke_generator(g.family, g.idx[0], n, r, q), sp, one)


def hecke_clifford_generators(n: int, r: int, q0=None) -> list:
    q = to_field(q0)
    out = [_hecke_generator("T", k, n, r, q) for k in range(1, r)]
    out += [_hecke_generator("c", l, n, r, q) for l in range(1, r + 1)]
    return out


# ---------------------------------------------------------------------------
# exact linear algebra


def _is_rational(v) -> bool:
    return isinstance(v, (int, fmpq)) or (isinstance(v, Scalar) and v.is_constant())


def _to_fmpq(v) -> fmpq:
    if isinstance(v, Scalar):
        v = v.constant_value()
    if isinstance(v, Fraction):
        return fmpq(v.numerator, v.denominator)
    return fmpq(v)


def sparse_rank(rows: list) -> int:
    """Rank of a list of sparse vectors {column: coeff} over the coefficient field.

    Rational systems are split into connected components (rows sharing a
    column) and handed to flint; rational-function systems are eliminated
    by hand.
    """
    rows = [r for r in rows if r]
    if not rows:
        return 0
    total = 0
    for comp in _components(rows):
        if all(_is_rational(v) for r in comp for v in r.values()):
            total += _flint_rank(comp)
        else:
            total += _gauss_rank(comp)
    return total


def _components(rows: list) -> list:
    parent: dict = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for r in rows:
        cols = list(r)
        for c in cols:
            parent.setdefault(c, c)
        root = find(cols[0])
        for c in cols[1:]:
            rc = find(c)
            if rc != root:
                parent[rc] = root
    groups: dict = {}
    for r in rows:
        groups.setdefault(find(next(iter(r))), []).append(r)
    return list(groups.values())


def _flint_rank(rows: list) -> int:
    cols = sorted({c for r in rows for c in r})
    pos = {c: k for k, c in enumerate(cols)}
    m = fmpq_mat(len(rows), len(cols))
    for i, r in enumerate(rows):
        for c, v in r.items():
            m[i, pos[c]] = _to_fmpq(v)
    return m.rank()


def _gauss_rank(rows: list) -> int:
    pivots: dict = {}  # column -> reduced row with leading entry 1 at that column
    rank = 0
    for r in rows:
        r = dict(r)
        while r:
            col = min(r)
            piv = pivots.get(col)
            if piv is None:
                inv = ONE / r[col]
                pivots[col] = {c: v * inv for c, v in r.items()}
                rank += 1
                break
            f = r[col]
            for c, v in piv.items():
                w = r.get(c, 0) - f * v
                if w == 0:
                    r.pop(c, None)
                else:
                    r[c] = w
    return rank


def _op_vector(op) -> dict:
    return {i * op.dim + j: v for i, row in op.rows.items() for j, v in row.items()}


def operator_rank(ops: list) -> int:
    """Rank of operators viewed as vectors of length dim^2."""
    return sparse_rank([_op_vector(op) for op in ops])


def _prime_factors(m: int) -> list:
    m, out, p = abs(m), [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    return out + ([m] if m > 1 else [])


def image_lattice_index(n: int, r: int, q0: int | None = None) -> int:
    """Experimental: index of the span of the basis images in its saturation.

    With ``q0`` None the Kostant basis goes through phi_r and the index is
    taken over Z.  With an integer ``q0`` the quantum basis goes through
    Phi_r at q = q0; since q is a unit of Z[q, q^-1], primes dividing q0
    are dropped from the index.  Index 1 means the integral image is
    saturated in the commutant lattice.  Nothing here is asserted.
    """
    from . import classical as cl
    from . import quantum as qu

    if q0 is None:
        ops, units = [phi_r(el, n, r) for _, el in cl.schur_basis(n, r)], []
    else:
        if int(q0) != q0 or abs(q0) < 2:
            raise ValueError("q0 must be an integer other than 0 and +-1")
        q0 = int(q0)
        ops, units = [Phi_r(el, n, r, q0) for _, el in qu.quantum_schur_basis(n, r)], _prime_factors(q0)
    return lattice_index(ops, units)


def lattice_index(ops: list, units=()) -> int:
    """Index of the Z-span of ``ops`` (as vectors) in its saturation.

    Rows are cleared of denominators built from ``units``, which are also
    removed from the result; any other denominator is an error.
    """
    rows = []
    for op in ops:
        vec = {c: _to_fmpq(v) for c, v in _op_vector(op).items() if v != 0}
        den = 1
        for v in vec.values():
            den = den * int(v.q) // _gcd(den, int(v.q))
        rest = den
        for p in units:
            while rest % p == 0:
                rest //= p
        if rest != 1:
            raise ValueError(f"basis image has a non-unit denominator {den}")
        rows.append({c: int(v * den) for c, v in vec.items()})
    index = 1
    for comp in _components([r_ for r_ in rows if r_]):
        cols = sorted({c for r_ in comp for c in r_})
        pos = {c: k for k, c in enumerate(cols)}
        m = fmpz_mat(len(comp), len(cols))
        for i, r_ in enumerate(comp):
            for c, v in r_.items():
                m[i, pos[c]] = v
        if m.rank() != len(comp):
            raise ValueError("basis images are linearly dependent")
        snf = m.snf()
        for k in range(len(comp)):
            index *= abs(int(snf[k, k]))
    for p in units:
        while index % p == 0:
            index //= p
    return index


def supercommutant_dim(generators: list, dim: int | None = None, parities=None) -> int:
    """Dimension of the space of homogeneous f with f g = (-1)^{|f||g|} g f.

    ``dim`` is needed only when ``generators`` is empty; ``parities`` gives
    the parity of each basis vector (defaults to none odd).
    """
    if dim is None:
        if not generators:
            raise ValueError("dimension required when there are no generators")
        dim = generators[0].dim
    if parities is None:
        parities = [0] * dim
    total = 0
    for fp in (0, 1):
        unknowns = [(i, j) for i in range(dim) for j in range(dim) if (parities[i] + parities[j]) % 2 == fp]
        idx = {u: k for k, u in enumerate(unknowns)}
        eqs = []
        for g in generators:
            sign = -1 if (fp and g.parity) else 1
            # (f g)[i,k] = sum_j f[i,j] g[j,k];  (g f)[i,k] = sum_j g[i,j] f[j,k]
            gcols: dict = {}
            for j, row in g.rows.items():
                for k, v in row.items():
                    gcols.setdefault(j, []).append((k, v))
            rows_eq: dict = {}
            for (i, j) in unknowns:
                u = idx[(i, j)]
                for k, v in gcols.get(j, ()):
                    e = rows_eq.setdefault((i, k), {})
                    e[u] = e.get(u, 0) + v
            for i2, row in g.rows.items():
                for j2, v in row.items():
                    for k in range(dim):
                        u = idx.get((j2, k))
                        if u is None:
                            continue
                        e = rows_eq.setdefault((i2, k), {})
                        e[u] = e.get(u, 0) - sign * v
            for e in rows_eq.values():
                e = {u: v for u, v in e.items() if v != 0}
                if e:
                    eqs.append(e)
        total += len(unknowns) - sparse_rank(eqs)
    return total


def qybe_check(n: int, q0=None, graded: bool = True) -> bool:
    """Experimental: S_12 S_13 S_23 = S_23 S_13 S_12 on V^{(x) 3}.

    With ``graded`` the embeddings carry Koszul signs; otherwise signs are
    dropped.  Neither convention is asserted anywhere.
    """
    q = to_field(q0)
    sp = tensor_space(n, 3)
    I = sorted(vector_indices(n))
    blocks = [(S_block(i, j, n, q), {(i, j): 1}) for i in I for j in I if i <= j]

    def place(a, b):
        out = SparseOperator(sp.dim, 0)
        for (m, p), unit in blocks:
            pa = p if graded else 0
            out = out + embed(sp, {a: (m, pa), b: (unit, pa)}) if a < b else out + _embed_rev(sp, a, b, m, unit, pa)
        return out

    def _embed_rev(space, a, b, m, unit, p):
        return embed(space, {b: (unit, p), a: (m, p)})

    s12, s13, s23 = place(1, 2), place(1, 3), place(2, 3)
    return (s12 @ s13 @ s23 - s23 @ s13 @ s12).is_zero()
