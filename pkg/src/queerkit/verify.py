"""The identity-corpus runner.

Every identity is checked by straightening ``lhs - rhs`` on each engine it
lists:

* ``L``: Olshanski normal form of the L-form (the reference engine);
* ``X``: the Lusztig-form rules, or the quantum Schur rules when the record
  carries a degree ``r``;
* ``classical``: the Kostant-form rules, or the Schur rules with ``r``;
* ``lie``: the first-order engine built from the q(n) matrix bracket;
* ``rep``: the action on V^{(x) r} over the representation grid.

A normal-form pass marks a record ``verified``; a record checked only on
``rep`` is at best ``representation-consistent``, since the action is not
faithful on the whole algebra.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import classical as cl
from . import quantum as qu
from .freealg import Element, Identity
from .tensor_rep import Phi_r, phi_r

__all__ = [
    "Identity",
    "CorpusParse",
    "EngineDisagreement",
    "CorpusConfig",
    "Result",
    "Report",
    "relation_corpus",
    "build_corpus",
    "run_corpus",
    "check_identity",
    "load_corpus",
    "dump_corpus",
    "coverage_report",
    "missing_labels",
    "IN_SCOPE_LABELS",
    "DEFAULT_GRID",
    "is_quantum",
]

DEFAULT_GRID = ((1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2))
NORMAL_FORM_ENGINES = ("L", "X", "classical", "lie")

IN_SCOPE_LABELS = (
    "Prop Uqn",
    "Lemma root-comm",
    "Eq odd-square",
    "Prop div-root",
    "Thm presentQr",
    "Thm presentQr-idemp",
    "Prop presentqUq",
    "Lemma old-reln",
    "Eq KX",
    "Lemma q-ppee",
    "Lemma q-pnee",
    "Lemma q-ppeo",
    "Lemma q-pneo",
    "Lemma q-ppoo",
    "Lemma q-pnoo",
    "Lemma q-XKbar",
    "Lemma basic-lemma1",
    "Cor basic-cor",
    "Lemma basic-lemma2",
    "Prop q-div-ppee",
    "Prop q-div-pnee",
    "Prop q-div-ppeo",
    "Prop q-div-pneo",
    "Prop q-div-XKbar",
    "Eq q-div-recursion",
    "Lemma Kbarsq",
    "Eq Xoddsq",
    "Thm q-surjective",
    "Thm q-presentation-idempotent",
)


class CorpusParse(ValueError):
    """A corpus file line that is not a valid identity record."""


class EngineDisagreement(AssertionError):
    """An identity passed on one engine and failed on another."""

    def __init__(self, report: "Report"):
        self.report = report
        keys = ", ".join(r.key for r in report.disagreements[:5])
        super().__init__(f"{len(report.disagreements)} engine disagreement(s): {keys}")


@dataclass(frozen=True)
class CorpusConfig:
    n_max: int = 4
    exp_max: int = 3
    relations_n_max: int = 3
    rep_grid: tuple = DEFAULT_GRID
    q0: Fraction | None = None
    only: str | None = None
    engines: tuple | None = None


@dataclass
class Result:
    key: str
    id: str
    label: str
    status: str
    engines: dict
    diagnostics: str | None = None

    @property
    def disagrees(self) -> bool:
        v = set(self.engines.values()) - {"skip"}
        return "pass" in v and "fail" in v

    def to_json(self) -> dict:
        d = {"key": self.key, "id": self.id, "label": self.label, "status": self.status, "engines": self.engines}
        if self.diagnostics:
            d["diagnostics"] = self.diagnostics
        return d


@dataclass
class Report:
    results: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [r for r in self.results if r.status == "failed"]

    @property
    def disagreements(self) -> list:
        return [r for r in self.results if r.disagrees]

    @property
    def ok(self) -> bool:
        return not self.failures

    def by_id(self) -> dict:
        """id -> (label, instance count, worst status, failing keys)."""
        rank = {"verified": 0, "representation-consistent": 1, "unchecked": 2, "failed": 3}
        out: dict = {}
        for r in self.results:
            label, count, status, bad = out.get(r.id, (r.label, 0, "verified", []))
            if rank[r.status] > rank[status]:
                status = r.status
            if r.status == "failed":
                bad = bad + [r.key]
            out[r.id] = (label, count + 1, status, bad)
        return out

    def to_json(self) -> dict:
        return {
            "total": len(self.results),
            "failed": len(self.failures),
            "disagreements": len(self.disagreements),
            "results": [r.to_json() for r in self.results],
        }

    def table(self) -> str:
        rows = [("id", "label", "instances", "status")]
        for id_, (label, count, status, _) in self.by_id().items():
            rows.append((id_, label, str(count), status))
        widths = [max(len(r[c]) for r in rows) for c in range(4)]
        lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows]
        for r in self.failures:
            lines.append("")
            lines.append(f"FAILED {r.key}")
            lines.append(r.diagnostics or "")
        lines.append("")
        lines.append(f"{len(self.results)} instances, {len(self.failures)} failed, "
                     f"{len(self.disagreements)} engine disagreements")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# corpus assembly


def _split_label(label: str) -> tuple:
    """'QS4/ef/1,2' -> ('QS4/ef', '1,2'); 'QS8/1' -> ('QS8', '1')."""
    head, _, last = label.rpartition("/")
    if head and last[:1] in "0123456789(":
        return head, last
    return label, ""


def _relation_records(rels, label, engines, base_ranges):
    out = []
    for name, el in rels:
        id_, args = _split_label(name)
        ranges = dict(base_ranges)
        if args:
            ranges["args"] = args
        out.append(Identity(id_, label, el, Element(), ranges, engines))
    return out


def relation_corpus(n_max: int = 3, rep_grid=DEFAULT_GRID) -> list:
    """Defining relations of U(q(n)), U_q(q(n)) and their Schur quotients."""
    out = []
    for n in range(1, n_max + 1):
        out += _relation_records(cl.relations_qs(n), "Prop Uqn", ("classical", "lie", "rep"), {"n": n})
        out += _relation_records(qu.relations_qq(n), "Prop presentqUq", ("L", "X", "rep"), {"n": n})
        out += _relation_records(qu.relations_old(n), "Lemma old-reln", ("L", "X", "rep"), {"n": n})
        out += _relation_records(qu.relations_kx(n), "Eq KX", ("L", "X", "rep"), {"n": n})
    for n, r in rep_grid:
        base = {"n": n, "r": r}
        out += _relation_records(cl.relations_qs_extra(n, r), "Thm presentQr", ("classical", "rep"), base)
        out += _relation_records(cl.relations_qs_idempotent(n, r), "Thm presentQr-idemp", ("classical", "rep"), base)
        out += _relation_records(qu.relations_qq_extra(n, r), "Thm q-surjective", ("X", "rep"), base)
        out += _relation_records(
            qu.relations_qq_idempotent(n, r), "Thm q-presentation-idempotent", ("X", "rep"), base
        )
    return out


def _matches(rec: Identity, only) -> bool:
    return not only or rec.id.startswith(only) or rec.label.startswith(only)


def build_corpus(config: CorpusConfig = CorpusConfig()) -> list:
    """The full default corpus, filtered by ``config.only``."""
    out = (
        cl.classical_corpus(config.n_max, config.exp_max)
        + qu.commutation_corpus(config.n_max, config.exp_max)
        + relation_corpus(config.relations_n_max, config.rep_grid)
    )
    return [rec for rec in out if _matches(rec, config.only)]


# ---------------------------------------------------------------------------
# checking


def is_quantum(x: Element) -> bool:
    """True if any letter of ``x`` belongs to the quantum alphabet."""
    return any(g.family[:1].isupper() or g.family in ("L", "one_q") for w in x.terms for g in w)


def _is_quantum(rec: Identity) -> bool:
    return "L" in rec.engines or "X" in rec.engines or is_quantum(rec.lhs) or is_quantum(rec.rhs)


def _normal_form(engine: str, diff: Element, rec: Identity) -> Element:
    n = rec.ranges["n"]
    r = rec.ranges.get("r")
    if engine == "L":
        return qu.l_normal_form(diff, n)
    if engine == "X":
        sys = qu.quantum_schur_rules(n, r) if r is not None else qu.lusztig_rules(n)
        return sys.normal_form(diff)
    if engine == "classical":
        sys = cl.schur_rules(n, r) if r is not None else cl.classical_rules(n)
        return sys.normal_form(diff)
    if engine == "lie":
        return cl.lie_normal_form(diff, n)
    raise ValueError(f"unknown engine {engine!r}")


def _rep_check(diff: Element, rec: Identity, grid, q0) -> tuple:
    """(verdict, diagnostics) of the action on the grid points of rank n."""
    n = rec.ranges["n"]
    r_fixed = rec.ranges.get("r")
    points = [(a, b) for a, b in grid if a == n and (r_fixed is None or b == r_fixed)]
    if not points:
        return "skip", None
    for _, r in points:
        op = Phi_r(diff, n, r, q0) if _is_quantum(rec) else phi_r(diff, n, r)
        if not op.is_zero():
            return "fail", f"nonzero action on V^(x){r}"
    return "pass", None


def check_identity(rec: Identity, grid=DEFAULT_GRID, q0=None, engines=None) -> Result:
    diff = rec.difference()
    verdicts: dict = {}
    notes = []
    for eng in rec.engines:
        if engines is not None and eng not in engines:
            continue
        if eng == "rep":
            v, note = _rep_check(diff, rec, grid, q0)
            verdicts[eng] = v
            if note:
                notes.append(f"rep: {note}")
            continue
        nf = _normal_form(eng, diff, rec)
        verdicts[eng] = "fail" if nf else "pass"
        if nf:
            notes.append(f"{eng} normal form: {nf}")
    vals = set(verdicts.values())
    if "fail" in vals:
        status = "failed"
    elif any(verdicts.get(e) == "pass" for e in NORMAL_FORM_ENGINES):
        status = "verified"
    elif verdicts.get("rep") == "pass":
        status = "representation-consistent"
    else:
        status = "unchecked"
    diagnostics = None
    if status == "failed":
        diagnostics = "\n".join([f"lhs: {rec.lhs}", f"rhs: {rec.rhs}"] + notes)
    return Result(rec.key, rec.id, rec.label, status, verdicts, diagnostics)


def _check_chunk(payload) -> list:
    records, grid, q0, engines = payload
    return [check_identity(Identity.from_json(d), grid, q0, engines) for d in records]


def run_corpus(config: CorpusConfig = CorpusConfig(), corpus=None, jobs: int = 1, strict: bool = False) -> Report:
    """Check every record; ``strict`` raises EngineDisagreement on split verdicts."""
    if corpus is None:
        corpus = build_corpus(config)
    else:
        corpus = [rec for rec in corpus if _matches(rec, config.only)]
    grid, q0, engines = config.rep_grid, config.q0, config.engines
    if jobs <= 1 or len(corpus) < 2 * jobs:
        results = [check_identity(rec, grid, q0, engines) for rec in corpus]
    else:
        size = -(-len(corpus) // (4 * jobs))
        chunks = [
            ([rec.to_json() for rec in corpus[p : p + size]], grid, q0, engines)
            for p in range(0, len(corpus), size)
        ]
        with ProcessPoolExecutor(jobs) as pool:
            results = [r for part in pool.map(_check_chunk, chunks) for r in part]
    report = Report(results)
    if strict and report.disagreements:
        raise EngineDisagreement(report)
    return report


# ---------------------------------------------------------------------------
# JSON lines


def dump_corpus(records, fh) -> None:
    for rec in records:
        fh.write(json.dumps(rec.to_json()) + "\n")


def load_corpus(fh) -> list:
    out = []
    for lineno, line in enumerate(fh, 1):
        if not line.strip():
            continue
        try:
            out.append(Identity.from_json(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusParse(f"line {lineno}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# coverage


def coverage_report(corpus=None, labels=IN_SCOPE_LABELS) -> dict:
    """Map each label to the sorted corpus ids carrying it.

    Labels in ``labels`` with no ids map to an empty list; labels found in
    the corpus but not requested are included too.
    """
    if corpus is None:
        corpus = build_corpus(CorpusConfig(n_max=4, exp_max=1, relations_n_max=3))
    out: dict = {lab: set() for lab in labels}
    for rec in corpus:
        out.setdefault(rec.label, set()).add(rec.id)
    return {lab: sorted(ids) for lab, ids in out.items()}


def missing_labels(cover: dict, labels=IN_SCOPE_LABELS) -> list:
    return [lab for lab in labels if not cover.get(lab)]
