"""Exceptionality, strongness and arrow-pattern checks for collections.

All Hom spaces between objects ``M_a(l_a)[s_a]`` and ``M_b(l_b)[s_b]`` are
read off one graded table per pair of kinds, since::

    Hom(M_a(l_a)[s_a], M_b(l_b)[s_b + k]) = Hom(M_a, M_b(l_b - l_a)[s_b - s_a + k])
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import gralg
from .collections import CollectionObject, ExceptionalCollection
from .invpoly import GradingData, InvertiblePolynomial, grading_data
from .mf import MatrixFactorization, mf_for_kind
from .stablehom import GradedHomTable, brackets, stable_hom


@dataclass
class VerificationReport:
    case: str
    exponents: tuple[int, ...]
    labels: list[str]
    ext: dict  # (a, b) -> {bracket: dim}, nonzero pairs only
    exceptional: bool
    semiorthogonal: bool
    strong: bool
    violations: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)

    @property
    def pattern_ok(self) -> bool:
        return not self.missing and not self.extra

    @property
    def ok(self) -> bool:
        return self.exceptional and self.semiorthogonal and self.strong and self.pattern_ok

    def arrows(self) -> list[tuple[int, int, dict]]:
        return [(a, b, e) for (a, b), e in sorted(self.ext.items()) if a < b]

    def to_json(self) -> dict:
        return {
            "schema": "singcat.verification/1",
            "case": self.case,
            "exponents": list(self.exponents),
            "objects": self.labels,
            "exceptional": self.exceptional,
            "semiorthogonal": self.semiorthogonal,
            "strong": self.strong,
            "pattern_ok": self.pattern_ok,
            "arrows": [
                {
                    "source": a,
                    "target": b,
                    "source_label": self.labels[a],
                    "target_label": self.labels[b],
                    "ext": {str(k): d for k, d in sorted(e.items())},
                }
                for a, b, e in self.arrows()
            ],
            "violations": self.violations,
            "missing": self.missing,
            "extra": self.extra,
        }

    def to_tsv(self) -> str:
        lines = ["source\ttarget\tbracket\tdim"]
        for a, b, e in self.arrows():
            for k, d in sorted(e.items()):
                lines.append(f"{self.labels[a]}\t{self.labels[b]}\t{k}\t{d}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        return (
            f"{self.case} {','.join(map(str, self.exponents))}: "
            f"exceptional={self.exceptional} semiorthogonal={self.semiorthogonal} "
            f"strong={self.strong} pattern={'ok' if self.pattern_ok else 'mismatch'} "
            f"arrows={len(self.arrows())} violations={len(self.violations)}"
        )


# Kind tables


def _table_payload(args) -> list:
    exps, ideal_a, ideal_b, margin = args
    poly = InvertiblePolynomial(exps)
    g = grading_data(poly)
    n = poly.n
    x = mf_for_kind(gralg.named_kind(ideal_a, n), poly, g)
    y = mf_for_kind(gralg.named_kind(ideal_b, n), poly, g)
    t = stable_hom(x, y, margin)
    return [list(t.window), [(list(t.reps[c].coords), e, d) for (c, e), d in sorted(t.entries.items())]]


def _rebuild(g: GradingData, src: str, tgt: str, payload) -> GradedHomTable:
    window, rows = payload
    entries, reps = {}, {}
    for coords, e, d in rows:
        l = g.element(coords)
        reps[l.canonical()] = l
        entries[(l.canonical(), e)] = d
    return GradedHomTable(g, src, tgt, entries, reps, tuple(window))


def kind_tables(
    poly: InvertiblePolynomial,
    kinds: Sequence[gralg.ModuleKind],
    margin: int | None = None,
    jobs: int = 1,
) -> dict[tuple[str, str], GradedHomTable]:
    """Graded Hom tables for every ordered pair of the given kinds."""
    g = grading_data(poly)
    uniq = {}
    for k in kinds:
        uniq.setdefault(k.name, k)
    names = sorted(uniq)
    pairs = [(a, b) for a in names for b in names]
    exps = [list(r) for r in poly.exponents]
    args = [(exps, uniq[a].ideal, uniq[b].ideal, margin) for a, b in pairs]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            payloads = list(ex.map(_table_payload, args))
    else:
        payloads = [_table_payload(a) for a in args]
    return {p: _rebuild(g, p[0], p[1], pl) for p, pl in zip(pairs, payloads)}


def pair_ext(
    g: GradingData,
    tables: dict,
    a: CollectionObject,
    b: CollectionObject,
) -> dict[int, int]:
    """``{k: dim Hom(a, b[k])}``, nonzero entries only."""
    t = tables[(a.kind.name, b.kind.name)]
    delta = g.element(b.twist) - g.element(a.twist)
    ds = b.homshift - a.homshift
    return {k - ds: d for k, d in sorted(brackets(t, delta).items()) if d}


def check_collection(
    c: ExceptionalCollection,
    margin: int | None = None,
    jobs: int = 1,
    tables: dict | None = None,
) -> VerificationReport:
    g = grading_data(c.poly)
    if tables is None:
        tables = kind_tables(c.poly, [o.kind for o in c.objects], margin, jobs)
    objs = c.objects
    n = c.n
    labels = [o.label(n) for o in objs]
    ext: dict = {}
    exceptional = semi = strong = True
    violations = []
    for i, a in enumerate(objs):
        for j, b in enumerate(objs):
            e = pair_ext(g, tables, a, b)
            if e:
                ext[(i, j)] = e
            if i == j:
                if e != {0: 1}:
                    exceptional = False
                    violations.append({"type": "endomorphisms", "object": labels[i], "ext": _enc(e)})
            elif i > j and e:
                semi = False
                violations.append({"type": "backward", "source": labels[i], "target": labels[j], "ext": _enc(e)})
            elif i < j:
                for k, d in e.items():
                    if k != 0:
                        strong = False
                        violations.append(
                            {"type": "bracket", "source": labels[i], "target": labels[j], "bracket": k, "dim": d}
                        )
    expected = {(x.source, x.target): {x.bracket: x.dim} for x in c.expected}
    realized = {(i, j): e for (i, j), e in ext.items() if i < j}
    missing, extra = [], []
    for key, e in sorted(expected.items()):
        if realized.get(key) != e:
            missing.append(
                {"source": labels[key[0]], "target": labels[key[1]], "expected": _enc(e), "found": _enc(realized.get(key, {}))}
            )
    for key, e in sorted(realized.items()):
        if key not in expected:
            extra.append({"source": labels[key[0]], "target": labels[key[1]], "found": _enc(e)})
    return VerificationReport(c.case, c.exponents, labels, ext, exceptional, semi, strong, violations, missing, extra)


def _enc(e: dict) -> dict:
    return {str(k): d for k, d in sorted(e.items())}


# Single objects


def _ext_all(x: MatrixFactorization, y: MatrixFactorization, margin: int | None) -> dict[int, int]:
    t = stable_hom(x, y, margin)
    return {k: d for k, d in brackets(t, x.grading.zero()).items() if d}


def check_exceptional_object(x: MatrixFactorization, margin: int | None = None) -> bool:
    """True when ``Hom(E, E[k])`` is one-dimensional for ``k = 0`` and zero otherwise."""
    return _ext_all(x, x, margin) == {0: 1}


def orthogonality(x: MatrixFactorization, y: MatrixFactorization, margin: int | None = None) -> bool:
    """True when there are no morphisms in either direction in any bracket."""
    return not _ext_all(x, y, margin) and not _ext_all(y, x, margin)


def object_mf(c: ExceptionalCollection, o: CollectionObject) -> MatrixFactorization:
    """The factorization ``M(l)[s]`` of a collection object."""
    from .mf import shift, twist

    g = grading_data(c.poly)
    base = mf_for_kind(o.kind, c.poly, g)
    x = shift(twist(base, g.element(o.twist)), o.homshift)
    x.name = o.label(c.n)
    return x


def dumps(report: VerificationReport) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
