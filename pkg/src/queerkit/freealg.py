"""Free associative superalgebra: generators, words, elements, rewriting.

Words are tuples of :class:`Generator`.  An :class:`Element` is a sparse
map from words to coefficients; coefficients may be Python ints, flint
``fmpq`` rationals (the specialized mode) or :class:`~queerkit.scalar.Scalar`.

:class:`RewriteSystem` is the generic straightening engine.  A system is
given rule callables that look at one letter or an adjacent pair of
letters and either decline (return ``None``) or return the replacement as
a ``{word: coeff}`` map.  Normal forms are computed by always reducing the
largest pending word under the system's word key, so contributions to the
same word are merged before that word is rewritten.
"""

from __future__ import annotations

import heapq
import json
import os
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from .scalar import Q, Scalar, parse_scalar

__all__ = [
    "Generator",
    "Element",
    "RewriteSystem",
    "FuelExhausted",
    "NonHomogeneous",
    "AlphabetMismatch",
    "gen",
    "multiply",
    "super_commutator",
    "normal_form",
    "parse_element",
    "element_to_json",
    "element_from_json",
    "format_generator",
    "Identity",
    "DEFAULT_FUEL",
]

DEFAULT_FUEL = 10**6


class FuelExhausted(RuntimeError):
    """The rewrite budget ran out; indicates a mis-ordered rule set."""


class NonHomogeneous(ValueError):
    """An operation that needs a parity-homogeneous element got a mixed one."""


class AlphabetMismatch(ValueError):
    """Elements built over different generator alphabets were combined."""


class Generator(NamedTuple):
    """One letter.  ``s`` holds a divided-power, binomial or bracket order."""

    family: str
    idx: tuple
    s: int = 0
    odd: int = 0

    def __str__(self):
        return format_generator(self)


# families that are odd regardless of indices
_ODD_FAMILIES = {"xb", "hb", "Xb", "Kb", "c"}

# which alphabet a family belongs to; idempotents are shared
_ALPHABET = {
    "x": "classical",
    "xb": "classical",
    "hb": "classical",
    "h": "classical",
    "L": "olshanski",
    "X": "quantum",
    "Xb": "quantum",
    "K": "quantum",
    "Ki": "quantum",
    "Kb": "quantum",
    "Kbr": "quantum",
    "KKbr": "quantum",
    "s": "sergeev",
    "T": "hecke",
    "c": None,
    "one": None,
}


def gen(family: str, idx: Iterable[int], s: int = 0) -> Generator:
    """Build a generator, deriving its parity from the family and indices."""
    idx = tuple(idx)
    if family == "L":
        i, j = idx
        odd = 0 if i * j > 0 else 1
    else:
        odd = 1 if family in _ODD_FAMILIES else 0
    return Generator(family, idx, s, odd)


def word_parity(word) -> int:
    return sum(g.odd for g in word) & 1


def _fmt_idx(idx) -> str:
    return ",".join(str(i) for i in idx)


def format_generator(g: Generator) -> str:
    f, idx, s = g.family, g.idx, g.s
    if f in ("x", "X"):
        i, j = idx
        low = f == "x"
        if s == 1:
            if j == i + 1:
                return ("e" if low else "E") + str(i)
            if i == j + 1:
                return ("f" if low else "F") + str(j)
            return f"{f}({i},{j})"
        return f"{f}d({i},{j};{s})"
    if f in ("xb", "Xb"):
        i, j = idx
        low = f == "xb"
        if j == i + 1:
            return ("eb" if low else "Eb") + str(i)
        if i == j + 1:
            return ("fb" if low else "Fb") + str(j)
        return f"{f}({i},{j})"
    if f == "h":
        return f"h{idx[0]}" if s == 1 else f"hbin({idx[0]};{s})"
    if f in ("hb", "K", "Ki", "Kb", "s", "c", "T"):
        return f"{f}{idx[0]}"
    if f == "Kbr":
        return f"Kbr({idx[0]};{idx[1]};{s})"
    if f == "KKbr":
        # one letter standing for the product K_i [K_i; 0 / s]
        return f"K{idx[0]}*Kbr({idx[0]};0;{s})"
    if f == "L":
        return f"L({idx[0]},{idx[1]})"
    if f == "one":
        return f"1_({_fmt_idx(idx)})"
    return f"{f}({_fmt_idx(idx)};{s})"


def format_word(word) -> str:
    return "*".join(format_generator(g) for g in word)


def _format_coeff(c) -> tuple[bool, str]:
    """Return (negative, text) with the sign pulled out when that is clean."""
    if isinstance(c, Scalar):
        if c.is_constant():
            v = c.constant_value()
            return (v < 0, str(abs(v)))
        text = str(c)
        if " " in text or "/" in text:
            if text.startswith("-") and " " not in text:
                return True, text[1:]
            return False, f"({text})"
        if text.startswith("-"):
            return True, text[1:]
        return False, text
    neg = c < 0
    return neg, str(-c if neg else c)


class Element:
    """A finite linear combination of words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if c != 0:
                    self.terms[tuple(w)] = c

    @classmethod
    def from_word(cls, word, coeff=1) -> "Element":
        return cls({tuple(word): coeff})

    @classmethod
    def scalar(cls, c) -> "Element":
        return cls({(): c})

    @classmethod
    def generator(cls, g: Generator) -> "Element":
        return cls({(g,): 1})

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, word):
        return self.terms.get(tuple(word), 0)

    def parity(self) -> int:
        """Parity of a homogeneous element (0 for zero); raises otherwise."""
        ps = {word_parity(w) for w in self.terms}
        if len(ps) > 1:
            raise NonHomogeneous(f"element {self} mixes parities")
        return ps.pop() if ps else 0

    def families(self) -> set[str]:
        return {g.family for w in self.terms for g in w}

    def alphabet(self) -> str | None:
        names = {_ALPHABET.get(f) for f in self.families()} - {None}
        if len(names) > 1:
            raise AlphabetMismatch(f"element mixes alphabets {sorted(names)}")
        return names.pop() if names else None

    # -- arithmetic -------------------------------------------------------
    def _add_into(self, out: dict, other: "Element", sign=1):
        for w, c in other.terms.items():
            v = out.get(w, 0) + (c if sign == 1 else -c)
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v

    def __add__(self, other):
        other = _as_element(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        self._add_into(out, other)
        return _raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_element(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        self._add_into(out, other, -1)
        return _raw(out)

    def __rsub__(self, other):
        other = _as_element(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return _raw({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    v = out.get(w, 0) + c1 * c2
                    if v == 0:
                        out.pop(w, None)
                    else:
                        out[w] = v
            return _raw(out)
        if isinstance(other, Generator):
            return _raw({w + (other,): c for w, c in self.terms.items()})
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Generator):
            return _raw({(other,) + w: c for w, c in self.terms.items()})
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(_inverse(c))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of an Element")
        out = Element.scalar(1)
        for _ in range(e):
            out = out * self
        return out

    def scale(self, c) -> "Element":
        if c == 0:
            return Element()
        return _raw({w: v * c for w, v in self.terms.items() if v * c != 0})

    def map_coeffs(self, fn: Callable) -> "Element":
        return Element({w: fn(c) for w, c in self.terms.items()})

    # -- comparison / display ----------------------------------------------
    def __eq__(self, other):
        other = _as_element(other)
        if other is NotImplemented:
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[w] == other.terms[w] for w in self.terms)

    __hash__ = None

    def sorted_terms(self, key=None):
        if key is None:
            key = _display_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def format(self, key=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms(key):
            neg, ctext = _format_coeff(c)
            wtext = format_word(w)
            if not wtext:
                body = ctext
            elif ctext == "1":
                body = wtext
            else:
                body = f"{ctext}*{wtext}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Element({self.format()!r})"


def _display_key(word):
    return (-len(word), [(g.family, g.idx, g.s) for g in word])


def _raw(terms: dict) -> Element:
    e = Element.__new__(Element)
    e.terms = terms
    return e


def _inverse(c):
    if isinstance(c, int):
        from flint import fmpq

        return fmpq(1, c)
    return 1 / c


def _as_element(x):
    if isinstance(x, Element):
        return x
    if isinstance(x, Generator):
        return Element.generator(x)
    try:
        if x == 0:
            return Element()
    except TypeError:
        return NotImplemented
    if isinstance(x, (int, Scalar)) or hasattr(x, "denominator") or type(x).__name__ == "fmpq":
        return Element.scalar(x)
    return NotImplemented


# ---------------------------------------------------------------------------
# spec-level operations


def multiply(a: Element, b: Element) -> Element:
    """Concatenation product after checking both sides share an alphabet."""
    names = {a.alphabet(), b.alphabet()} - {None}
    if len(names) > 1:
        raise AlphabetMismatch(f"cannot multiply over alphabets {sorted(names)}")
    return a * b


def super_commutator(a: Element, b: Element) -> Element:
    """ab - (-1)^{|a||b|} ba for homogeneous a and b."""
    pa, pb = a.parity(), b.parity()
    if pa and pb:
        return a * b + b * a
    return a * b - b * a


# ---------------------------------------------------------------------------
# rewriting


class Rule(NamedTuple):
    name: str
    arity: int
    fn: Callable


class RewriteSystem:
    """A fuel-bounded straightening system over adjacent-pair rules.

    ``rules`` is an ordered list of :class:`Rule`; for a single letter or an
    adjacent pair the first rule returning a replacement wins.  ``word_key``
    maps a word to a tuple of ints whose ordering is the system's word
    order (larger words are reduced first).

    Subclasses may override :meth:`word_rule` to rewrite a whole word that
    no pair or single-letter rule touches.
    """

    def __init__(self, name: str, rules: list[Rule], word_key: Callable, fuel: int | None = None):
        self.name = name
        self.rules = list(rules)
        self.word_key = word_key
        self._fuel = fuel
        self._pair_cache: dict = {}
        self._single_cache: dict = {}
        self._pair_rules = [r for r in self.rules if r.arity == 2]
        self._single_rules = [r for r in self.rules if r.arity == 1]

    @property
    def fuel(self) -> int:
        # read per call so QUEERKIT_FUEL also reaches cached systems
        if self._fuel is not None:
            return self._fuel
        return int(os.environ.get("QUEERKIT_FUEL", DEFAULT_FUEL))

    # rule lookup ----------------------------------------------------------
    def rewrite_pair(self, a: Generator, b: Generator):
        key = (a, b)
        try:
            return self._pair_cache[key]
        except KeyError:
            pass
        out = None
        for r in self._pair_rules:
            out = r.fn(a, b)
            if out is not None:
                out = {tuple(w): c for w, c in out.items() if c != 0}
                break
        self._pair_cache[key] = out
        return out

    def rewrite_single(self, a: Generator):
        try:
            return self._single_cache[a]
        except KeyError:
            pass
        out = None
        for r in self._single_rules:
            out = r.fn(a)
            if out is not None:
                out = {tuple(w): c for w, c in out.items() if c != 0}
                break
        self._single_cache[a] = out
        return out

    def find_redex(self, word, strategy: str = "leftmost"):
        """Return (position, width, replacement) of one reducible spot, or None."""
        n = len(word)
        positions = range(n) if strategy == "leftmost" else range(n - 1, -1, -1)
        for p in positions:
            if self._single_rules:
                rep = self.rewrite_single(word[p])
                if rep is not None:
                    return p, 1, rep
            if p + 1 < n:
                rep = self.rewrite_pair(word[p], word[p + 1])
                if rep is not None:
                    return p, 2, rep
        return None

    def word_rule(self, word):
        return None

    def is_irreducible(self, word) -> bool:
        return self.find_redex(word) is None and self.word_rule(word) is None

    # normal form ----------------------------------------------------------
    def normal_form(self, x, strategy: str = "leftmost", fuel: int | None = None) -> Element:
        """Straighten ``x`` into a combination of irreducible words."""
        if isinstance(x, Generator):
            x = Element.generator(x)
        elif not isinstance(x, Element):
            x = _as_element(x)
        budget = self.fuel if fuel is None else fuel
        key = self.word_key
        pending: dict = {}
        heap: list = []
        for w, c in x.terms.items():
            pending[w] = c
            heapq.heappush(heap, (_neg(key(w)), w))
        done: dict = {}
        steps = 0
        while heap:
            _, w = heapq.heappop(heap)
            c = pending.pop(w, None)
            if c is None:
                continue
            hit = self.find_redex(w, strategy)
            if hit is None:
                rep = self.word_rule(w)
                if rep is not None:
                    hit = (0, len(w), rep)
            if hit is None:
                v = done.get(w, 0) + c
                if v == 0:
                    done.pop(w, None)
                else:
                    done[w] = v
                continue
            steps += 1
            if steps > budget:
                raise FuelExhausted(f"{self.name}: exceeded {budget} rewrite steps on {format_word(w)}")
            p, width, rep = hit
            head, tail = w[:p], w[p + width :]
            for r, cr in rep.items():
                nw = head + r + tail
                old = pending.get(nw)
                if old is None:
                    pending[nw] = c * cr
                    heapq.heappush(heap, (_neg(key(nw)), nw))
                else:
                    v = old + c * cr
                    if v == 0:
                        del pending[nw]
                    else:
                        pending[nw] = v
        return _raw({w: c for w, c in done.items() if c != 0})

    def __repr__(self):
        return f"RewriteSystem({self.name!r}, {len(self.rules)} rules)"


def _neg(key):
    return tuple(-k for k in key)


def normal_form(x, sys: RewriteSystem, strategy: str = "leftmost") -> Element:
    return sys.normal_form(x, strategy=strategy)


# ---------------------------------------------------------------------------
# inline expression grammar

_GEN_PATTERNS = [
    (re.compile(r"1_\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)"), "one"),
    (re.compile(r"(xd|Xd)\(\s*(-?\d+)\s*,\s*(-?\d+)\s*;\s*(\d+)\s*\)"), "divided"),
    (re.compile(r"(xb|Xb|x|X|L)\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)"), "pair"),
    (re.compile(r"hbin\(\s*(\d+)\s*;\s*(\d+)\s*\)"), "hbin"),
    (re.compile(r"Kbr\(\s*(\d+)\s*;\s*(-?\d+)\s*;\s*(\d+)\s*\)"), "bracket"),
    (re.compile(r"(eb|fb|hb|Eb|Fb|Kb|Ki|e|f|h|E|F|K|s|c|T)(\d+)"), "simple"),
]


def _make_simple(name: str, k: int) -> Generator:
    if name in ("e", "E"):
        return gen("x" if name == "e" else "X", (k, k + 1), 1)
    if name in ("f", "F"):
        return gen("x" if name == "f" else "X", (k + 1, k), 1)
    if name in ("eb", "Eb"):
        return gen("xb" if name == "eb" else "Xb", (k, k + 1))
    if name in ("fb", "Fb"):
        return gen("xb" if name == "fb" else "Xb", (k + 1, k))
    if name == "h":
        return gen("h", (k,), 1)
    return gen(name, (k,))


def _match_generator(text: str, pos: int):
    for pat, kind in _GEN_PATTERNS:
        m = pat.match(text, pos)
        if not m:
            continue
        if kind == "one":
            lam = tuple(int(v) for v in m.group(1).split(","))
            return gen("one", lam), m.end()
        if kind == "divided":
            fam = "x" if m.group(1) == "xd" else "X"
            return gen(fam, (int(m.group(2)), int(m.group(3))), int(m.group(4))), m.end()
        if kind == "pair":
            fam = m.group(1)
            i, j = int(m.group(2)), int(m.group(3))
            s = 1 if fam in ("x", "X") else 0
            return gen(fam, (i, j), s), m.end()
        if kind == "hbin":
            return gen("h", (int(m.group(1)),), int(m.group(2))), m.end()
        if kind == "bracket":
            return gen("Kbr", (int(m.group(1)), int(m.group(2))), int(m.group(3))), m.end()
        return _make_simple(m.group(1), int(m.group(2))), m.end()
    return None


def parse_element(text: str) -> Element:
    """Parse the inline grammar, e.g. ``e1*f1 - 2*h1`` or ``(q - q^-1)*K1*Kb2``."""
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        hit = _match_generator(text, pos)
        if hit is not None:
            tokens.append(("gen", hit[0]))
            pos = hit[1]
            continue
        m = re.compile(r"\d+").match(text, pos)
        if m:
            tokens.append(("int", int(m.group())))
            pos = m.end()
            continue
        if ch == "q":
            tokens.append(("q", None))
            pos += 1
            continue
        if ch in "+-*/^()":
            tokens.append(("op", ch))
            pos += 1
            continue
        raise ValueError(f"cannot parse {text[pos:]!r}")
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None)

    def take():
        nonlocal i
        if i >= len(tokens):
            raise ValueError(f"unexpected end of expression {text!r}")
        i += 1
        return tokens[i - 1]

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            if op == "*":
                val = val * rhs
            else:
                if set(rhs.terms) - {()}:
                    raise ValueError("can only divide by scalars")
                val = val.scale(_inverse(rhs.terms.get((), 0)))
        return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            kind, e = take()
            if kind != "int":
                raise ValueError("exponent must be an integer")
            if sign < 0 or set(base.terms) <= {()}:
                c = base.terms.get((), 0)
                return Element.scalar(c ** (sign * e))
            return base**e
        return base

    def atom():
        kind, val = take()
        if kind == "int":
            return Element.scalar(val)
        if kind == "q":
            return Element.scalar(Q)
        if kind == "gen":
            return Element.generator(val)
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {val!r}")

    if not tokens:
        raise ValueError("empty expression")
    out = expr()
    if i != len(tokens):
        raise ValueError("trailing tokens in expression")
    return out


# ---------------------------------------------------------------------------
# JSON


def _coeff_to_str(c) -> str:
    return str(c)


def _coeff_from_str(text: str):
    s = parse_scalar(text)
    if s.is_constant():
        v = s.constant_value()
        if v.denominator == 1:
            return int(v.numerator)
        from flint import fmpq

        return fmpq(v.numerator, v.denominator)
    return s


def generator_to_json(g: Generator) -> dict:
    return {"family": g.family, "idx": list(g.idx), "s": g.s}


def generator_from_json(d: dict) -> Generator:
    return gen(d["family"], d["idx"], d.get("s", 0))


def element_to_json(x: Element) -> list:
    return [
        {"word": [generator_to_json(g) for g in w], "coeff": _coeff_to_str(c)}
        for w, c in x.sorted_terms()
    ]


def element_from_json(data) -> Element:
    if isinstance(data, str):
        data = json.loads(data)
    out = Element()
    for item in data:
        w = tuple(generator_from_json(g) for g in item["word"])
        out = out + Element.from_word(w, _coeff_from_str(item["coeff"]))
    return out


# ---------------------------------------------------------------------------
# identity records


@dataclass
class Identity:
    """One instantiated identity ``lhs = rhs``.

    ``id`` names the formula and case (for example ``q-ppee/case3``); the
    same id is shared by all instantiations of that case, which differ in
    ``ranges`` (the index and exponent binding plus the rank ``n``).
    ``engines`` lists the back ends able to check it.
    """

    id: str
    label: str
    lhs: Element
    rhs: Element
    ranges: dict = field(default_factory=dict)
    engines: tuple = ("L",)

    def difference(self) -> Element:
        return self.lhs - self.rhs

    @property
    def key(self) -> str:
        bind = ",".join(f"{k}={v}" for k, v in sorted(self.ranges.items()) if k != "pattern")
        return f"{self.id}[{bind}]" if bind else self.id

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "lhs": element_to_json(self.lhs),
            "rhs": element_to_json(self.rhs),
            "ranges": self.ranges,
            "engines": list(self.engines),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Identity":
        return cls(
            d["id"],
            d.get("label", d["id"].split("/")[0]),
            element_from_json(d["lhs"]),
            element_from_json(d["rhs"]),
            dict(d.get("ranges", {})),
            tuple(d.get("engines", ("L",))),
        )
