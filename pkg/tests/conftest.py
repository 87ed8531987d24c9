import os

from hypothesis import HealthCheck, settings, strategies as st

from queerkit import classical as cl
from queerkit import quantum as qu

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def _pairs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def classical_letters(n, max_order=3):
    out = [cl.xb(i, j) for i, j in _pairs(n)] + [cl.hb(i) for i in range(1, n + 1)]
    out += [cl.x(i, j, s) for i, j in _pairs(n) for s in range(1, max_order + 1)]
    out += [cl.h(i, s) for i in range(1, n + 1) for s in range(1, max_order)]
    return out


def lie_letters(n):
    return classical_letters(n, max_order=1)


def schur_letters(n, r):
    return classical_letters(n, 2) + [cl.one(lam) for lam in cl.compositions(n, r)]


def x_letters(n, max_order=2):
    out = [qu.Xb(i, j) for i, j in _pairs(n)]
    out += [qu.X(i, j, m) for i, j in _pairs(n) for m in range(1, max_order + 1)]
    for i in range(1, n + 1):
        out += [qu.K(i), qu.Ki(i), qu.Kb(i), qu.Kbr(i, 0, 1), qu.Kbr(i, 1, 1), qu.Kbr(i, -1, 2)]
    return out


def quantum_schur_letters(n, r):
    return x_letters(n, 1) + [qu.one_q(lam) for lam in cl.compositions(n, r)]


def words(letters, min_size, max_size):
    return st.lists(st.sampled_from(letters), min_size=min_size, max_size=max_size).map(tuple)
