"""Graded matrix factorizations of an invertible polynomial.

A factorization ``X`` is stored as two lists of degree labels and two
polynomial matrices::

    X0 = sum_i R(-a_i),   X1 = sum_j R(-b_j)
    d1: X1 -> X0,         d0: X0 -> X1(w)

An entry of a map ``R(-a) -> R(-b)`` is homogeneous of degree ``a - b``.
The object of the singularity category attached to ``X`` is ``coker(d1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import gralg, linalg
from .abgroup import GroupElement
from .gralg import ModuleKind, Poly, padd, pmul, pscale, pvar
from .invpoly import GradingData, InvertiblePolynomial, grading_data

PolyMatrix = list  # list of rows of Poly


class MFError(ValueError):
    pass


def mat_mul(a: PolyMatrix, b: PolyMatrix, inner: int | None = None) -> PolyMatrix:
    rows = len(a)
    k = inner if inner is not None else (len(a[0]) if a else 0)
    cols = len(b[0]) if b else 0
    out = [[{} for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for t in range(k):
            f = a[i][t]
            if not f:
                continue
            for j in range(cols):
                g = b[t][j]
                if g:
                    out[i][j] = padd(out[i][j], pmul(f, g))
    return out


def mat_neg(a: PolyMatrix) -> PolyMatrix:
    return [[pscale(f, -1) for f in row] for row in a]


def zeros(r: int, c: int) -> PolyMatrix:
    return [[{} for _ in range(c)] for _ in range(r)]


def block(rows: list[list[PolyMatrix]], heights: list[int], widths: list[int]) -> PolyMatrix:
    out = zeros(sum(heights), sum(widths))
    r0 = 0
    for bi, brow in enumerate(rows):
        c0 = 0
        for bj, m in enumerate(brow):
            if m is not None:
                for i in range(heights[bi]):
                    for j in range(widths[bj]):
                        out[r0 + i][c0 + j] = dict(m[i][j])
            c0 += widths[bj]
        r0 += heights[bi]
    return out


@dataclass
class MatrixFactorization:
    grading: GradingData
    twists_even: tuple[GroupElement, ...]
    twists_odd: tuple[GroupElement, ...]
    d_odd_to_even: PolyMatrix  # len(even) x len(odd)
    d_even_to_odd: PolyMatrix  # len(odd) x len(even)
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def rank(self) -> tuple[int, int]:
        return len(self.twists_even), len(self.twists_odd)

    # short aliases used by the Hom engine
    @property
    def d1(self) -> PolyMatrix:
        return self.d_odd_to_even

    @property
    def d0(self) -> PolyMatrix:
        return self.d_even_to_odd

    def to_json(self) -> dict:
        def enc(m):
            return [[sorted([c, list(e)] for e, c in f.items()) for f in row] for row in m]

        return {
            "name": self.name,
            "twists_even": [list(g.coords) for g in self.twists_even],
            "twists_odd": [list(g.coords) for g in self.twists_odd],
            "d_odd_to_even": enc(self.d1),
            "d_even_to_odd": enc(self.d0),
        }


def _entry_check(g: GradingData, f: Poly, expected: GroupElement, where: str) -> None:
    for m in f:
        if g.element(m) != expected:
            raise MFError(f"{where}: monomial {m} has degree {g.element(m).coords}, expected {expected.coords}")


def validate(x: MatrixFactorization) -> dict:
    """Check both compositions equal ``w`` times the identity and all entries are homogeneous."""
    g = x.grading
    w = g.poly.polynomial()
    ne, no = x.rank
    if ne != no:
        raise MFError(f"ranks differ: {ne} vs {no}")
    if len(x.d1) != ne or any(len(r) != no for r in x.d1):
        raise MFError("d_odd_to_even has the wrong shape")
    if len(x.d0) != no or any(len(r) != ne for r in x.d0):
        raise MFError("d_even_to_odd has the wrong shape")
    for i, a in enumerate(x.twists_even):
        for j, b in enumerate(x.twists_odd):
            _entry_check(g, x.d1[i][j], b - a, f"d_odd_to_even[{i}][{j}]")
            _entry_check(g, x.d0[j][i], a - b + g.w, f"d_even_to_odd[{j}][{i}]")
    for name, prod in (("d1*d0", mat_mul(x.d1, x.d0, no)), ("d0*d1", mat_mul(x.d0, x.d1, ne))):
        for i, row in enumerate(prod):
            for j, f in enumerate(row):
                want = w if i == j else {}
                if f != want:
                    raise MFError(f"{name}[{i}][{j}] = {gralg.format_poly(f, g.n)}, expected {'w' if i == j else '0'}")
    return {"name": x.name, "rank": ne, "valid": True}


def twist(x: MatrixFactorization, l: GroupElement) -> MatrixFactorization:
    """``X(l)``: every summand ``R(-a)`` becomes ``R(-a+l)``."""
    return MatrixFactorization(
        x.grading,
        tuple(a - l for a in x.twists_even),
        tuple(b - l for b in x.twists_odd),
        x.d1,
        x.d0,
        x.name,
        dict(x.meta),
    )


def _shift_once(x: MatrixFactorization) -> MatrixFactorization:
    w = x.grading.w
    return MatrixFactorization(
        x.grading,
        tuple(b - w for b in x.twists_odd),
        tuple(x.twists_even),
        mat_neg(x.d0),
        mat_neg(x.d1),
        x.name,
        dict(x.meta),
    )


def _unshift_once(x: MatrixFactorization) -> MatrixFactorization:
    w = x.grading.w
    return MatrixFactorization(
        x.grading,
        tuple(x.twists_odd),
        tuple(a + w for a in x.twists_even),
        mat_neg(x.d0),
        mat_neg(x.d1),
        x.name,
        dict(x.meta),
    )


def shift(x: MatrixFactorization, s: int) -> MatrixFactorization:
    """``X[s]``; ``X[1] = (X1(w), X0)`` with both differentials negated, so ``X[2] = X(w)``."""
    for _ in range(s):
        x = _shift_once(x)
    for _ in range(-s):
        x = _unshift_once(x)
    return x


def direct_sum(*xs: MatrixFactorization) -> MatrixFactorization:
    g = xs[0].grading
    he = [x.rank[0] for x in xs]
    ho = [x.rank[1] for x in xs]
    d1 = block([[x.d1 if i == j else None for j, x in enumerate(xs)] for i, _ in enumerate(xs)], he, ho)
    d0 = block([[x.d0 if i == j else None for j, x in enumerate(xs)] for i, _ in enumerate(xs)], ho, he)
    return MatrixFactorization(
        g,
        tuple(a for x in xs for a in x.twists_even),
        tuple(b for x in xs for b in x.twists_odd),
        d1,
        d0,
        " + ".join(x.name for x in xs),
    )


@dataclass
class MFMorphism:
    """A degree-zero map ``source -> target`` given by its even and odd components.

    ``twist`` and ``parity`` record how the morphism was obtained from a Hom
    table; the components always refer to the materialized source and target.
    """

    source: MatrixFactorization
    target: MatrixFactorization
    even: PolyMatrix  # X0 -> Y0
    odd: PolyMatrix  # X1 -> Y1
    twist: GroupElement | None = None
    parity: int = 0

    def is_cocycle(self) -> bool:
        x, y = self.source, self.target
        ne, no = x.rank
        me, mo = y.rank
        a = mat_mul(y.d1, self.odd, mo)
        b = mat_mul(self.even, x.d1, ne)
        c = mat_mul(y.d0, self.even, me)
        d = mat_mul(self.odd, x.d0, no)
        return a == b and c == d


def identity_morphism(x: MatrixFactorization) -> MFMorphism:
    ne, no = x.rank
    one = gralg.pconst(1, x.grading.n)
    e = [[dict(one) if i == j else {} for j in range(ne)] for i in range(ne)]
    o = [[dict(one) if i == j else {} for j in range(no)] for i in range(no)]
    return MFMorphism(x, x, e, o)


def cone(f: MFMorphism) -> MatrixFactorization:
    """Cone of a closed degree-zero map ``f: X -> Y``: ``C0 = Y0 + X1(w)``, ``C1 = Y1 + X0``."""
    if not f.is_cocycle():
        raise MFError("cone of a map that is not closed")
    x, y = f.source, f.target
    w = x.grading.w
    ne, no = x.rank
    me, mo = y.rank
    d1 = block([[y.d1, f.even], [None, mat_neg(x.d0)]], [me, no], [mo, ne])
    d0 = block([[y.d0, f.odd], [None, mat_neg(x.d1)]], [mo, ne], [me, no])
    c = MatrixFactorization(
        x.grading,
        tuple(y.twists_even) + tuple(b - w for b in x.twists_odd),
        tuple(y.twists_odd) + tuple(x.twists_even),
        d1,
        d0,
        f"cone({x.name}->{y.name})",
    )
    validate(c)
    return c


def koszul_mf(grading: GradingData, pairs: Sequence[tuple[Poly, Poly]], name: str = "") -> MatrixFactorization:
    """Tensor product of the rank one factorizations ``(f_i, g_i)``; models ``R/(f_1..f_c)``."""
    w = grading.poly.polynomial()
    total: Poly = {}
    for f, g in pairs:
        total = padd(total, pmul(f, g))
    if total != w:
        raise MFError("sum of f_i g_i is not w")
    c = len(pairs)
    ring = gralg.GradedPolyRing(grading)
    fdeg = [ring.poly_degree(f) for f, _ in pairs]
    subsets = [frozenset(s) for k in range(c + 1) for s in itertools.combinations(range(c), k)]
    even = [s for s in subsets if len(s) % 2 == 0]
    odd = [s for s in subsets if len(s) % 2 == 1]
    wdeg = grading.w

    def fsum(s):
        out = grading.zero()
        for i in s:
            out = out + fdeg[i]
        return out

    lab_e = tuple(fsum(s) - wdeg * (len(s) // 2) for s in even)
    lab_o = tuple(fsum(s) - wdeg * ((len(s) - 1) // 2) for s in odd)

    def diff(src, tgt):
        tidx = {s: i for i, s in enumerate(tgt)}
        m = zeros(len(tgt), len(src))
        for j, s in enumerate(src):
            srt = sorted(s)
            for pos, i in enumerate(srt):
                t = s - {i}
                m[tidx[t]][j] = padd(m[tidx[t]][j], pairs[i][0], (-1) ** pos)
            for i in range(c):
                if i in s:
                    continue
                t = s | {i}
                sign = (-1) ** sum(1 for k in s if k < i)
                m[tidx[t]][j] = padd(m[tidx[t]][j], pairs[i][1], sign)
        return m

    x = MatrixFactorization(grading, lab_e, lab_o, diff(odd, even), diff(even, odd), name)
    x.meta["koszul"] = {"pairs": list(pairs), "subsets": [sorted(s) for s in subsets]}
    validate(x)
    return x


def splitting(w: InvertiblePolynomial, gens: Sequence[Poly]) -> list[tuple[Poly, Poly]]:
    """Write ``w = sum f_i g_i`` for monomials ``f_i``.

    A monomial of ``w`` goes to its main variable when that variable is one
    of the ``f_i``, else to the first ``f_i`` dividing it.
    """
    fs = [next(iter(f)) for f in gens]
    gs: list[Poly] = [{} for _ in fs]
    for row in w.exponents:
        main = max(range(w.n), key=lambda j: row[j])
        target = None
        for i, f in enumerate(fs):
            if sum(f) == 1 and f[main] == 1:
                target = i
                break
        if target is None:
            for i, f in enumerate(fs):
                if gralg.divides(f, row):
                    target = i
                    break
        if target is None:
            raise MFError(f"monomial {row} is not in the ideal")
        q = tuple(a - b for a, b in zip(row, fs[target]))
        gs[target] = padd(gs[target], {q: 1})
    return [({f: 1}, g) for f, g in zip(fs, gs)]


def _is_complete_intersection(kind: ModuleKind) -> bool:
    seen: set[int] = set()
    for g in kind.ideal:
        sup = {i for i, e in enumerate(g) if e}
        if sup & seen:
            return False
        seen |= sup
    return True


def _loop3_union_template(grading: GradingData) -> MatrixFactorization:
    """Rank four factorization for ``k[x,y,z]/(xy,yz,zx)`` over ``x^p z + x y^q + y z^r``."""
    w = grading.poly
    (p, _, one), (_, q, _), (_, _, r) = w.exponents
    if w.exponents != ((p, 0, 1), (1, q, 0), (0, 1, r)):
        raise MFError("M_xyz template needs the standard 3-loop")
    n = 3

    def m(a, b, c, s=1):
        return {(a, b, c): s}

    x, y, z = m(1, 0, 0), m(0, 1, 0), m(0, 0, 1)
    w_y = m(1, q - 1, 0)
    w_z = padd(m(p, 0, 0), m(0, 1, r - 1))
    wp_x = padd(m(p - 1, 0, 1), m(0, q, 0))
    wp_yz = m(0, 0, r - 1)
    yz = m(0, 1, 1)
    neg = lambda f: pscale(f, -1)
    one_ = gralg.pconst(1, n)
    d2 = [
        [w_y, neg(z), m(0, q - 1, 0), {}],
        [w_z, y, m(p - 1, 0, 0), neg(y)],
        [{}, {}, wp_x, neg(yz)],
        [{}, {}, wp_yz, x],
    ]
    d3 = [
        [y, z, neg(one_), {}],
        [neg(w_z), w_y, {}, m(0, q, 0)],
        [{}, {}, x, yz],
        [{}, {}, neg(wp_yz), wp_x],
    ]
    X, Y, Z = grading.var_degrees
    W = grading.w
    p1 = (X + Y, X + Z, X, Y + Z)
    p2 = (W + X, X + Y + Z, W, X + Y + Z)
    mf = MatrixFactorization(grading, tuple(a - W for a in p2), p1, d3, d2, "M_xyz")
    d1 = [[y, z, neg(one_), {}], [{}, {}, x, yz]]
    mf.meta["head"] = {"labels": [(X, grading.zero())], "maps": [d1]}
    validate(mf)
    return mf


def mf_for_kind(kind: ModuleKind, w: InvertiblePolynomial, grading: GradingData | None = None) -> MatrixFactorization:
    """Factorization whose cokernel is the module ``R/I`` in the singularity category."""
    grading = grading or grading_data(w)
    n = w.n
    mod = gralg.MonomialQuotientModule(gralg.GradedPolyRing(grading), kind)
    if not mod.is_well_defined(w.polynomial()):
        raise MFError(f"{kind.name} is not a module over R/(w)")
    if _is_complete_intersection(kind):
        gens = [{g: 1} for g in kind.ideal]
        x = koszul_mf(grading, splitting(w, gens), kind.name)
    elif n == 3 and set(kind.ideal) == set(gralg.union_of_axes((0, 1, 2), 3).ideal):
        x = _loop3_union_template(grading)
    else:
        raise MFError(f"no factorization catalogued for {kind.name} over {w}")
    x.meta["kind"] = kind
    return x


def zero_mf(grading: GradingData) -> MatrixFactorization:
    """Factorization ``(w, 1)`` of the free module ``A``: a zero object."""
    n = grading.n
    return koszul_mf(grading, [(grading.poly.polynomial(), gralg.pconst(1, n))], "A")


# Free resolutions


@dataclass
class FreeComplex:
    """``P_0 <- P_1 <- ...``; ``maps[m]`` is ``P_{m+1} -> P_m``."""

    grading: GradingData
    terms: list[tuple[GroupElement, ...]]
    maps: list[PolyMatrix]


def unroll(x: MatrixFactorization, length: int, start_twist: GroupElement | None = None) -> FreeComplex:
    """The 2-quasi-periodic complex ``X0 <- X1 <- X0(-w) <- X1(-w) <- ...`` with ``length`` terms."""
    g = x.grading
    s = start_twist if start_twist is not None else g.zero()
    terms, maps = [], []
    for m in range(length):
        j = m // 2
        labs = x.twists_even if m % 2 == 0 else x.twists_odd
        terms.append(tuple(a + g.w * j - s for a in labs))
        if m:
            maps.append(x.d1 if m % 2 == 1 else x.d0)
    return FreeComplex(g, terms, maps)


def resolution(x: MatrixFactorization, length: int) -> FreeComplex:
    """A graded free resolution over ``R/(w)`` of the module modelled by ``x``.

    Koszul factorizations use the truncations of the Eisenbud-Shamash
    complex; templates carry an explicit head.
    """
    g = x.grading
    if "koszul" in x.meta:
        return _koszul_resolution(x, length)
    head = x.meta.get("head")
    if head is None:
        return unroll(x, length)
    tail = unroll(x, length + 1)
    terms = [tuple(head["labels"][0])] + tail.terms[1:length]
    maps = [head["maps"][0]] + tail.maps[1 : length - 1]
    return FreeComplex(g, terms[:length], maps[: max(length - 1, 0)])


def _koszul_resolution(x: MatrixFactorization, length: int) -> FreeComplex:
    g = x.grading
    pairs = x.meta["koszul"]["pairs"]
    c = len(pairs)
    ring = gralg.GradedPolyRing(g)
    fdeg = [ring.poly_degree(f) for f, _ in pairs]
    subsets = [frozenset(s) for k in range(c + 1) for s in itertools.combinations(range(c), k)]

    def summands(m):
        return [s for s in subsets if len(s) <= m and (m - len(s)) % 2 == 0]

    def label(s, m):
        out = g.w * ((m - len(s)) // 2)
        for i in s:
            out = out + fdeg[i]
        return out

    terms, maps = [], []
    for m in range(length):
        terms.append(tuple(label(s, m) for s in summands(m)))
        if m == 0:
            continue
        src, tgt = summands(m), summands(m - 1)
        tidx = {s: i for i, s in enumerate(tgt)}
        mat = zeros(len(tgt), len(src))
        for j, s in enumerate(src):
            for pos, i in enumerate(sorted(s)):
                t = s - {i}
                mat[tidx[t]][j] = padd(mat[tidx[t]][j], pairs[i][0], (-1) ** pos)
            for i in range(c):
                t = s | {i}
                if i in s or t not in tidx:
                    continue
                sign = (-1) ** sum(1 for k in s if k < i)
                mat[tidx[t]][j] = padd(mat[tidx[t]][j], pairs[i][1], sign)
        maps.append(mat)
    return FreeComplex(g, terms, maps)


def _rank_over_quotient(a: gralg.HypersurfaceQuotient, src: Sequence[GroupElement], tgt: Sequence[GroupElement], mat: PolyMatrix, d: GroupElement) -> int:
    """Rank in degree ``d`` of the induced map between free ``R/(w)``-modules."""
    ring = a.ring
    w = a.potential
    tbases = [ring.basis(d - b) for b in tgt]
    offs, idx = [], {}
    for ti, basis in enumerate(tbases):
        for m in basis:
            idx[(ti, m)] = len(idx)
    wimg = linalg.Echelon()
    for ti, b in enumerate(tgt):
        for m in ring.basis(d - b - a.potential_degree):
            v = {idx[(ti, k)]: c for k, c in pmul(w, {m: 1}).items()}
            wimg.add(v)
    base = wimg.rank
    for sj, s in enumerate(src):
        for m in ring.basis(d - s):
            v: dict = {}
            for ti in range(len(tgt)):
                f = mat[ti][sj]
                if not f:
                    continue
                for k, c in pmul(f, {m: 1}).items():
                    key = idx[(ti, k)]
                    v[key] = v.get(key, 0) + c
            wimg.add({k: c for k, c in v.items() if c})
    return wimg.rank - base


def probe_degrees(grading: GradingData, count: int = 10) -> list[GroupElement]:
    """``count`` degrees of smallest nonnegative weight, deterministic."""
    out: list[GroupElement] = []
    hi = 0
    while len(out) < count:
        out = grading.elements_in_weight_range(0, hi)
        hi += grading.weight_step
    return out[:count]


def check_resolution(x: MatrixFactorization, module: gralg.MonomialQuotientModule, degrees: Sequence[GroupElement] | None = None) -> dict:
    """Exactness probe: ``H_0`` of the resolution is the module and ``H_m = 0`` for small ``m > 0``."""
    g = x.grading
    a = gralg.HypersurfaceQuotient(g.poly, g)
    c = max(len(x.twists_even).bit_length(), 2)
    length = c + 3
    cx = resolution(x, length)
    degrees = list(degrees) if degrees is not None else probe_degrees(g)
    bad = []
    for d in degrees:
        dims = [sum(a.dim(d - lab) for lab in t) for t in cx.terms]
        ranks = [_rank_over_quotient(a, cx.terms[m + 1], cx.terms[m], cx.maps[m], d) for m in range(len(cx.maps))]
        h0 = dims[0] - ranks[0]
        if h0 != module.dim(d):
            bad.append((d.coords, 0, h0, module.dim(d)))
        for m in range(1, len(cx.maps)):
            hm = dims[m] - ranks[m - 1] - ranks[m]
            if hm:
                bad.append((d.coords, m, hm, 0))
    return {"ok": not bad, "failures": bad, "degrees": len(degrees), "length": length}
