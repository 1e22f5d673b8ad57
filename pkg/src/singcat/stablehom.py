"""Graded morphism spaces in the singularity category.

For factorizations ``X`` and ``Y`` the 2-periodic Hom complex has pieces::

    C0(l) = Hom(X0, Y0(l)) + Hom(X1, Y1(l))
    C1(l) = Hom(X0, Y1(l+w)) + Hom(X1, Y0(l))

with ``D0(l): C0(l) -> C1(l)`` and ``D1(l): C1(l) -> C0(l+w)``.  Then
``Hom(X, Y(l)[2j+e]) = H^e(l + j w)``, so a table keyed by ``(l, e)``
describes every graded morphism space at once.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .abgroup import GroupElement
from .gralg import GradedPolyRing, Poly, padd
from .invpoly import GradingData
from .mf import MatrixFactorization, MFMorphism, mat_mul, shift, twist


class WindowAuditError(RuntimeError):
    """Cohomology did not vanish near the edge of the scanned degree window."""


_BLOCKS = {0: ("00", "11"), 1: ("01", "10")}


def _terms(f: Poly) -> list[tuple[tuple, int]]:
    return list(f.items())


class HomComplex:
    """The Hom complex between two factorizations over the same polynomial."""

    def __init__(self, x: MatrixFactorization, y: MatrixFactorization):
        if x.grading is not y.grading:
            raise ValueError("factorizations over different gradings")
        self.x, self.y = x, y
        self.g = x.grading
        self.ring = GradedPolyRing(self.g)
        self._rank_cache: dict[tuple, int] = {}
        self._xd1 = [[_terms(f) for f in row] for row in x.d1]
        self._xd0 = [[_terms(f) for f in row] for row in x.d0]
        self._yd1 = [[_terms(f) for f in row] for row in y.d1]
        self._yd0 = [[_terms(f) for f in row] for row in y.d0]
        w = self.g.w
        # (block, source labels, target labels, extra twist)
        self._spec = {
            "00": (x.twists_even, y.twists_even, self.g.zero()),
            "11": (x.twists_odd, y.twists_odd, self.g.zero()),
            "01": (x.twists_even, y.twists_odd, w),
            "10": (x.twists_odd, y.twists_even, self.g.zero()),
        }

    def weight_bounds(self) -> tuple[int, int]:
        """Extreme weights of ``l`` at which some component of the complex starts."""
        r = self.g.weight
        vals = []
        for blk, (src, tgt, extra) in self._spec.items():
            for a in src:
                for b in tgt:
                    vals.append(r(b) - r(a) - r(extra))
        return min(vals), max(vals)

    def basis(self, e: int, l: GroupElement) -> list[tuple]:
        out = []
        for blk in _BLOCKS[e]:
            src, tgt, extra = self._spec[blk]
            for i, b in enumerate(tgt):
                for j, a in enumerate(src):
                    for m in self.ring.basis(a - b + l + extra):
                        out.append((blk, i, j, m))
        return out

    def _image(self, e: int, key: tuple) -> dict:
        blk, i, j, m = key
        out: dict = {}

        def put(tblk, r, c, terms, sign):
            for mono, coef in terms:
                k = (tblk, r, c, tuple(u + v for u, v in zip(mono, m)))
                val = out.get(k, 0) + sign * coef
                if val:
                    out[k] = val
                else:
                    out.pop(k, None)

        if e == 0:
            if blk == "00":
                for k in range(len(self._yd0)):
                    put("01", k, j, self._yd0[k][i], 1)
                for t in range(len(self._xd1[j])):
                    put("10", i, t, self._xd1[j][t], -1)
            else:
                for t in range(len(self._xd0[j])):
                    put("01", i, t, self._xd0[j][t], -1)
                for k in range(len(self._yd1)):
                    put("10", k, j, self._yd1[k][i], 1)
        else:
            if blk == "01":
                for k in range(len(self._yd1)):
                    put("00", k, j, self._yd1[k][i], 1)
                for t in range(len(self._xd1[j])):
                    put("11", i, t, self._xd1[j][t], 1)
            else:
                for t in range(len(self._xd0[j])):
                    put("00", i, t, self._xd0[j][t], 1)
                for k in range(len(self._yd0)):
                    put("11", k, j, self._yd0[k][i], 1)
        return out

    def image_vectors(self, e: int, l: GroupElement) -> list[dict]:
        """Images of the basis of ``C_e(l)`` as sparse vectors keyed by target basis keys."""
        return [self._image(e, key) for key in self.basis(e, l)]

    @staticmethod
    def _keyed(images: list[dict]) -> list[dict]:
        idx: dict = {}
        out = []
        for img in images:
            v = {}
            for k, c in img.items():
                if k not in idx:
                    idx[k] = len(idx)
                v[idx[k]] = c
            out.append(v)
        return out

    def _echelon(self, e: int, l: GroupElement, track: bool = False):
        idx: dict = {}
        ech = linalg.Echelon(track=track)
        for img in self.image_vectors(e, l):
            v = {}
            for k, c in img.items():
                if k not in idx:
                    idx[k] = len(idx)
                v[idx[k]] = c
            ech.add(v)
        return ech

    def rank(self, e: int, l: GroupElement) -> int:
        key = (e, l.canonical())
        r = self._rank_cache.get(key)
        if r is None:
            r = linalg.rank(self._keyed(self.image_vectors(e, l))) if self.basis(e, l) else 0
            self._rank_cache[key] = r
        return r

    def cohomology_dim(self, e: int, l: GroupElement) -> int:
        dim = len(self.basis(e, l))
        if not dim:
            return 0
        if e == 0:
            return dim - self.rank(0, l) - self.rank(1, l - self.g.w)
        return dim - self.rank(1, l) - self.rank(0, l)

    def _boundary_echelon(self, e: int, l: GroupElement, index: dict) -> linalg.Echelon:
        prev = l - self.g.w if e == 0 else l
        ech = linalg.Echelon()
        for img in self.image_vectors(1 - e, prev):
            ech.add({index[k]: c for k, c in img.items()})
        return ech

    def cocycle_basis(self, e: int, l: GroupElement) -> list[dict]:
        """Cocycles representing a basis of ``H^e(l)``, in reduced row echelon form.

        Vectors are dicts ``basis position -> Fraction`` over ``self.basis(e, l)``.
        """
        basis = self.basis(e, l)
        if not basis:
            return []
        index = {k: n for n, k in enumerate(basis)}
        kernel = self._echelon(e, l, track=True).kernel
        bnd = self._boundary_echelon(e, l, index)
        chosen = []
        for v in kernel:
            if bnd.add(v):
                chosen.append(v)
        return linalg.to_fraction_rref(chosen)

    def is_coboundary(self, e: int, l: GroupElement, vec: dict) -> bool:
        index = {k: n for n, k in enumerate(self.basis(e, l))}
        bnd = self._boundary_echelon(e, l, index)
        return bnd.contains(_integral(vec))

    def is_cocycle(self, e: int, l: GroupElement, vec: dict) -> bool:
        basis = self.basis(e, l)
        total: dict = {}
        for pos, c in _integral(vec).items():
            for k, v in self._image(e, basis[pos]).items():
                total[k] = total.get(k, 0) + c * v
        return not any(total.values())


def _integral(vec: dict) -> dict:
    """Clear denominators of a Fraction vector."""
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // _gcd(den, c.denominator)
    return {k: int(c * den) for k, c in vec.items() if c}


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


# Morphisms as matrices


def vector_to_morphism(hc: HomComplex, vec: dict, l: GroupElement | None = None) -> MFMorphism:
    """Degree zero cocycle ``X -> Y`` (twist 0, even parity) from a coordinate vector."""
    l = l if l is not None else hc.g.zero()
    basis = hc.basis(0, l)
    x, y = hc.x, hc.y
    even = [[{} for _ in x.twists_even] for _ in y.twists_even]
    odd = [[{} for _ in x.twists_odd] for _ in y.twists_odd]
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // _gcd(den, c.denominator)
    for pos, c in vec.items():
        blk, i, j, m = basis[pos]
        tgt = even if blk == "00" else odd
        tgt[i][j] = padd(tgt[i][j], {m: int(c * den)})
    return MFMorphism(x, y, even, odd)


def morphism_to_vector(hc: HomComplex, f: MFMorphism, l: GroupElement | None = None) -> dict:
    l = l if l is not None else hc.g.zero()
    index = {k: n for n, k in enumerate(hc.basis(0, l))}
    out = {}
    for blk, mat in (("00", f.even), ("11", f.odd)):
        for i, row in enumerate(mat):
            for j, p in enumerate(row):
                for m, c in p.items():
                    out[index[(blk, i, j, m)]] = c
    return out


def compose(alpha: MFMorphism, beta: MFMorphism) -> MFMorphism:
    """``beta . alpha`` for ``alpha: X -> Y`` and ``beta: Y -> Z``."""
    if alpha.target.rank != beta.source.rank or any(
        a != b for a, b in zip(alpha.target.twists_even + alpha.target.twists_odd, beta.source.twists_even + beta.source.twists_odd)
    ):
        raise ValueError("target of the first morphism is not the source of the second")
    x = alpha.source
    even = mat_mul(beta.even, alpha.even, alpha.target.rank[0])
    odd = mat_mul(beta.odd, alpha.odd, alpha.target.rank[1])
    return MFMorphism(x, beta.target, even, odd)


def morphism_is_zero(f: MFMorphism) -> bool:
    """Whether the class of a closed degree zero map vanishes."""
    hc = HomComplex(f.source, f.target)
    return hc.is_coboundary(0, hc.g.zero(), morphism_to_vector(hc, f))


def morphism_basis(x: MatrixFactorization, y: MatrixFactorization) -> list[MFMorphism]:
    """Closed maps ``X -> Y`` representing a basis of the degree zero morphism space."""
    hc = HomComplex(x, y)
    return [vector_to_morphism(hc, v) for v in hc.cocycle_basis(0, hc.g.zero())]


def class_rank(maps: list[MFMorphism]) -> int:
    """Dimension of the span of the classes of closed maps with a common source and target."""
    if not maps:
        return 0
    hc = HomComplex(maps[0].source, maps[0].target)
    zero = hc.g.zero()
    index = {k: n for n, k in enumerate(hc.basis(0, zero))}
    bnd = hc._boundary_echelon(0, zero, index)
    start = bnd.rank
    for f in maps:
        bnd.add(morphism_to_vector(hc, f))
    return bnd.rank - start


def compose_path(objects: list[MatrixFactorization]) -> MFMorphism:
    """Composite of the generators of one-dimensional spaces ``Hom(X_i, X_{i+1})``."""
    total = None
    for a, b in zip(objects, objects[1:]):
        basis = morphism_basis(a, b)
        if len(basis) != 1:
            raise ValueError(f"Hom({a.name}, {b.name}) has dimension {len(basis)}, expected 1")
        total = basis[0] if total is None else compose(total, basis[0])
    return total


def morphisms(x: MatrixFactorization, y: MatrixFactorization, l: GroupElement, s: int) -> tuple[MatrixFactorization, list[MFMorphism]]:
    """Basis of ``Hom(X, Y(l)[s])`` as maps into the materialized target."""
    t = shift(twist(y, l), s)
    return t, morphism_basis(x, t)


# Tables


@dataclass
class GradedHomTable:
    grading: GradingData
    source: str
    target: str
    entries: dict  # (canonical l, parity) -> dim
    reps: dict  # canonical l -> GroupElement
    window: tuple[int, int]
    audit: dict = field(default_factory=dict)

    def support(self) -> list[tuple[GroupElement, int, int]]:
        out = [(self.reps[c], e, d) for (c, e), d in self.entries.items() if d]
        out.sort(key=lambda t: (t[1], self.grading.weight(t[0]), t[0].canonical()))
        return out

    def total_dim(self) -> int:
        return sum(self.entries.values())

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "window": list(self.window),
            "support": [
                {"l": list(nice_coords(self.grading, l)), "parity": e, "dim": d} for l, e, d in self.support()
            ],
        }

    def to_tsv(self) -> str:
        lines = ["l\tparity\tdim"]
        for l, e, d in self.support():
            lines.append(f"{','.join(map(str, nice_coords(self.grading, l)))}\t{e}\t{d}")
        return "\n".join(lines) + "\n"


_NICE: dict = {}


def nice_coords(g: GradingData, l: GroupElement) -> tuple[int, ...]:
    """A short generator-coordinate representative of ``l`` (smallest 1-norm, then lexicographic)."""
    key = (g.poly.exponents, l.canonical())
    if key in _NICE:
        return _NICE[key]
    import itertools

    bound = max(max(r) for r in g.poly.exponents) + 1
    target = g.weight(l)
    best = None
    for v in itertools.product(range(-bound, bound + 1), repeat=g.n):
        if g.weight(v) != target:
            continue
        if g.element(v) != l:
            continue
        cand = (sum(abs(c) for c in v), tuple(-c for c in v))
        if best is None or cand < best[0]:
            best = (cand, v)
    out = tuple(best[1]) if best else tuple(l.coords)
    _NICE[key] = out
    return out


def default_margin(g: GradingData) -> int:
    return 2 * (g.potential_weight + sum(g.var_weights))


def stable_hom(
    x: MatrixFactorization,
    y: MatrixFactorization,
    margin: int | None = None,
    retries: int = 3,
    use_cache: bool = True,
) -> GradedHomTable:
    """Dimensions of ``H^e(l)`` over an audited window of degrees ``l``."""
    g = x.grading
    m = margin if margin is not None else default_margin(g)
    if m < 0:
        raise ValueError("window margin must be nonnegative")
    cache_key = _cache_key(x, y, m) if use_cache else None
    if cache_key:
        hit = _cache_load(g, cache_key)
        if hit is not None:
            hit.source, hit.target = x.name, y.name
            return hit
    hc = HomComplex(x, y)
    lo_w, hi_w = hc.weight_bounds()
    lo, hi = lo_w - m, hi_w + m
    step = g.weight_step
    entries: dict = {}
    reps: dict = {}

    def scan(a, b):
        for l in g.elements_in_weight_range(a, b):
            reps[l.canonical()] = l
            for e in (0, 1):
                entries[(l.canonical(), e)] = hc.cohomology_dim(e, l)

    scan(lo, hi)
    for attempt in range(retries + 1):
        shells = _top_shells(g, entries, reps, hi, step)
        if not shells:
            break
        if attempt == retries:
            raise WindowAuditError(
                f"Hom({x.name}, {y.name}): nonzero cohomology at weight {max(shells)} near window top {hi}"
            )
        grow = max(m, step)
        scan(hi + 1, hi + grow)
        hi += grow
    # below lo_w every component of the complex vanishes
    t = GradedHomTable(g, x.name, y.name, {k: v for k, v in entries.items() if v}, reps, (lo, hi))
    t.audit = {"lower_bound": lo_w, "margin": m, "window": [lo, hi]}
    if cache_key:
        _cache_store(t, cache_key)
    return t


def _top_shells(g, entries, reps, hi, step) -> list[int]:
    """Weights of nonzero entries inside the two topmost shells of the window."""
    top = (hi // step) * step
    shells = {top, top - step}
    bad = []
    for (c, e), d in entries.items():
        if d and g.weight(reps[c]) in shells:
            bad.append(g.weight(reps[c]))
    return bad


def graded_component(table: GradedHomTable, l: GroupElement, i: int) -> int:
    """``dim Hom(X, Y(l)[i])``."""
    g = table.grading
    j, e = divmod(i, 2)
    d = l + g.w * j
    wt = g.weight(d)
    if wt < table.window[0]:
        return 0
    if wt > table.window[1]:
        raise WindowAuditError(f"degree {d.coords} lies above the audited window")
    return table.entries.get((d.canonical(), e), 0)


def is_zero_object(x: MatrixFactorization, margin: int | None = None) -> bool:
    return stable_hom(x, x, margin).is_zero()


def brackets(table: GradedHomTable, delta: GroupElement) -> dict[int, int]:
    """``{k: dim Hom(X, Y(delta)[k])}`` over all ``k`` with nonzero dimension."""
    g = table.grading
    out: dict[int, int] = {}
    for l, e, d in table.support():
        j = g.multiple_of_w(l - delta)
        if j is not None:
            out[2 * j + e] = out.get(2 * j + e, 0) + d
    return out


# On-disk cache


def _cache_dir() -> str | None:
    return os.environ.get("SINGCAT_CACHE_DIR") or None


def _cache_key(x, y, m) -> str | None:
    if _cache_dir() is None:
        return None
    payload = json.dumps(
        {"w": [list(r) for r in x.grading.poly.exponents], "x": x.to_json(), "y": y.to_json(), "m": m},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _cache_load(g: GradingData, key: str) -> GradedHomTable | None:
    path = os.path.join(_cache_dir(), f"{key}.json")
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        data = json.load(fh)
    entries, reps = {}, {}
    for row in data["entries"]:
        l = g.element(row["l"])
        reps[l.canonical()] = l
        entries[(l.canonical(), row["parity"])] = row["dim"]
    t = GradedHomTable(g, "", "", entries, reps, tuple(data["window"]))
    t.audit = data.get("audit", {})
    return t


def _cache_store(t: GradedHomTable, key: str) -> None:
    d = _cache_dir()
    os.makedirs(d, exist_ok=True)
    data = {
        "window": list(t.window),
        "audit": t.audit,
        "entries": [{"l": list(t.reps[c].coords), "parity": e, "dim": v} for (c, e), v in sorted(t.entries.items())],
    }
    tmp = os.path.join(d, f".{key}.{os.getpid()}.tmp")
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, os.path.join(d, f"{key}.json"))
