"""Graded polynomial rings, hypersurface quotients and monomial modules.

Polynomials are dicts ``exponent tuple -> integer coefficient``.  Graded
pieces are indexed by elements of ``L_w`` and come with a monomial basis in
a fixed order (descending lexicographic on exponent vectors).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .abgroup import GroupElement
from .invpoly import GradingData, InvertiblePolynomial, grading_data, var_name
from . import linalg

Poly = dict
Exp = tuple


def padd(f: Poly, g: Poly, scale: int = 1) -> Poly:
    out = dict(f)
    for m, c in g.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def pmul(f: Poly, g: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def pscale(f: Poly, c: int) -> Poly:
    return {m: c * v for m, v in f.items()} if c else {}


def monomial(e: Sequence[int], c: int = 1) -> Poly:
    return {tuple(e): c}


def pvar(i: int, n: int, power: int = 1) -> Poly:
    return {tuple(power if j == i else 0 for j in range(n)): 1}


def pconst(c: int, n: int) -> Poly:
    return {(0,) * n: c} if c else {}


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def format_poly(f: Poly, n: int) -> str:
    if not f:
        return "0"
    terms = []
    for m in sorted(f, reverse=True):
        c = f[m]
        t = "*".join(
            var_name(j, n) if e == 1 else f"{var_name(j, n)}^{e}" for j, e in enumerate(m) if e
        )
        if not t:
            terms.append(str(c))
        elif c == 1:
            terms.append(t)
        elif c == -1:
            terms.append("-" + t)
        else:
            terms.append(f"{c}*{t}")
    return " + ".join(terms).replace("+ -", "- ")


class GradedPolyRing:
    """``k[x_1..x_n]`` graded by ``L_w``; graded pieces are cached."""

    def __init__(self, grading: GradingData):
        self.grading = grading
        self.n = grading.n
        self._by_weight: dict[int, dict[tuple, list[Exp]]] = {}

    def degree(self, e: Exp) -> GroupElement:
        return self.grading.element(e)

    def poly_degree(self, f: Poly) -> GroupElement | None:
        """Degree of a homogeneous polynomial; None for 0; error if inhomogeneous."""
        degs = {self.degree(m) for m in f}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def _weight_table(self, t: int) -> dict[tuple, list[Exp]]:
        tab = self._by_weight.get(t)
        if tab is None:
            tab = {}
            if t >= 0:
                r = self.grading.var_weights
                for e in _exps_of_weight(r, t):
                    tab.setdefault(self.degree(e).canonical(), []).append(e)
                for v in tab.values():
                    v.sort(reverse=True)
            self._by_weight[t] = tab
        return tab

    def basis(self, d: GroupElement) -> list[Exp]:
        t = self.grading.weight(d)
        if t < 0:
            return []
        return self._weight_table(t).get(d.canonical(), [])


def _exps_of_weight(r: Sequence[int], t: int) -> list[Exp]:
    n = len(r)
    out = []

    def rec(i, rest, acc):
        if i == n - 1:
            if rest % r[i] == 0:
                out.append(tuple(acc + [rest // r[i]]))
            return
        for e in range(rest // r[i] + 1):
            rec(i + 1, rest - e * r[i], acc + [e])

    rec(0, t, [])
    return out


class HypersurfaceQuotient:
    """``A = R/(w)``."""

    def __init__(self, w: InvertiblePolynomial, grading: GradingData | None = None):
        self.w = w
        self.grading = grading or grading_data(w)
        self.ring = GradedPolyRing(self.grading)
        self.potential = w.polynomial()
        self.potential_degree = self.grading.w

    @property
    def n(self) -> int:
        return self.w.n

    def quotient_piece(self, d: GroupElement) -> list[Exp]:
        """Standard monomials spanning ``A_d = R_d / w R_{d-w}``."""
        basis = self.ring.basis(d)
        if not basis:
            return []
        idx = {m: i for i, m in enumerate(basis)}
        e = linalg.Echelon()
        for m in self.ring.basis(d - self.potential_degree):
            img = pmul(self.potential, {m: 1})
            e.add({idx[k]: v for k, v in img.items()})
        return [basis[i] for i in range(len(basis)) if i not in e.pivots]

    def dim(self, d: GroupElement) -> int:
        return len(self.quotient_piece(d))


@dataclass(frozen=True)
class ModuleKind:
    """``R/I`` for a monomial ideal ``I``, with a display name."""

    name: str
    ideal: tuple[Exp, ...]

    def contains(self, e: Exp) -> bool:
        return any(divides(g, e) for g in self.ideal)

    def __str__(self) -> str:
        return self.name


class MonomialQuotientModule:
    def __init__(self, ring: GradedPolyRing, kind: ModuleKind):
        self.ring = ring
        self.kind = kind

    @property
    def name(self) -> str:
        return self.kind.name

    def basis(self, d: GroupElement) -> list[Exp]:
        return [e for e in self.ring.basis(d) if not self.kind.contains(e)]

    def dim(self, d: GroupElement) -> int:
        return len(self.basis(d))

    def is_well_defined(self, w: Poly) -> bool:
        """True when ``w`` lies in the defining ideal, i.e. the module lives over A."""
        return all(self.kind.contains(m) for m in w)


def monomial_basis(obj, d: GroupElement) -> list[Exp]:
    return obj.basis(d)


def quotient_piece(a: HypersurfaceQuotient, d: GroupElement) -> list[Exp]:
    return a.quotient_piece(d)


def mult_map(f: Poly, module, d: GroupElement) -> list[list[int]]:
    """Matrix of ``f*: M_d -> M_{d + deg f}`` in monomial bases."""
    ring = module.ring
    fd = ring.poly_degree(f)
    src = module.basis(d)
    if fd is None:
        return []
    tgt = module.basis(d + fd)
    tidx = {m: i for i, m in enumerate(tgt)}
    mat = [[0] * len(src) for _ in tgt]
    for j, m in enumerate(src):
        for mm, c in f.items():
            e = tuple(a + b for a, b in zip(m, mm))
            i = tidx.get(e)
            if i is not None:
                mat[i][j] += c
    return mat


def restrict(f: Poly, keep: Iterable[int]) -> Poly:
    """Set every variable outside ``keep`` to zero."""
    keep = set(keep)
    return {m: c for m, c in f.items() if all(e == 0 or i in keep for i, e in enumerate(m))}


def _support_facets(kind: ModuleKind, n: int) -> list[frozenset[int]]:
    """Maximal coordinate subsets on which the reduced module is supported."""
    rad = [frozenset(i for i, e in enumerate(g) if e) for g in kind.ideal]
    good = []
    for size in range(n, -1, -1):
        for s in itertools.combinations(range(n), size):
            s = frozenset(s)
            if any(r <= s for r in rad):
                continue
            if any(s < f for f in good):
                continue
            good.append(s)
    return good


def acts_injectively(w: Poly, kind: ModuleKind, n: int) -> bool:
    """Whether ``w`` is a non-zero-divisor on the reduced module ``R/rad(I)``."""
    facets = _support_facets(kind, n)
    return bool(facets) and all(restrict(w, f) for f in facets)


def perfect_presentation(w: Poly, kind: ModuleKind, n: int) -> ModuleKind | None:
    """Find ``K`` with ``kind = K/wK`` and ``w`` injective on ``K``.

    ``K`` is cut out by all but one generator of the ideal; those must be
    squarefree so that injectivity can be read off the support facets, and
    ``w`` must reduce modulo ``K`` to the remaining generator.  Returns
    ``K`` when the hypothesis of the perfectness criterion holds, else None.
    """
    gens = tuple(kind.ideal)
    for i, g in enumerate(gens):
        others = gens[:i] + gens[i + 1 :]
        if any(max(h) > 1 for h in others):
            continue
        base = ModuleKind(f"K({kind.name})", others)
        wr = [m for m in w if not base.contains(m)]
        if wr != [g]:
            continue
        if acts_injectively(w, base, n):
            return base
    return None


# Module kinds used by the package.  Variables are referred to by index.


def _name(vs: Iterable[int], n: int) -> str:
    return "".join(var_name(v, n) for v in sorted(vs))


def point(n: int) -> ModuleKind:
    return ModuleKind("k", tuple(pvar(i, n).popitem()[0] for i in range(n)))


def axis(v: int, n: int) -> ModuleKind:
    return ModuleKind(f"M_{var_name(v, n)}", tuple(next(iter(pvar(i, n))) for i in range(n) if i != v))


def plane(vs: Sequence[int], n: int) -> ModuleKind:
    """``k[x_S]``: a coordinate subspace; named ``M_[..]`` when of dimension 2 or more."""
    vs = sorted(vs)
    if len(vs) == 1:
        return axis(vs[0], n)
    gens = tuple(next(iter(pvar(i, n))) for i in range(n) if i not in vs)
    return ModuleKind(f"M_[{_name(vs, n)}]", gens)


def _pairwise_products(vs: Sequence[int], n: int) -> list[Exp]:
    out = []
    for a, b in itertools.combinations(sorted(vs), 2):
        out.append(tuple(int(i in (a, b)) for i in range(n)))
    return out


def union_of_axes(vs: Sequence[int], n: int) -> ModuleKind:
    """Coordinate axes ``x_v`` for ``v`` in ``vs`` glued at the origin."""
    vs = sorted(vs)
    gens = [next(iter(pvar(i, n))) for i in range(n) if i not in vs] + _pairwise_products(vs, n)
    return ModuleKind(f"M_{_name(vs, n)}", tuple(gens))


def union_of_planes(planes: Sequence[Sequence[int]], n: int) -> ModuleKind:
    """Union of coordinate subspaces meeting at the origin only."""
    planes = [sorted(p) for p in planes]
    used = sorted(set(v for p in planes for v in p))
    gens = [next(iter(pvar(i, n))) for i in range(n) if i not in used]
    for p, q in itertools.combinations(planes, 2):
        for a in p:
            for b in q:
                gens.append(tuple(int(i in (a, b)) for i in range(n)))
    name = "M_" + "".join(f"[{_name(p, n)}]" for p in planes)
    return ModuleKind(name, tuple(gens))


def truncated(v: int, i: int, n: int) -> ModuleKind:
    """``k[x_v]/(x_v^i)``; equals the point for ``i = 1``."""
    if i == 1:
        return point(n)
    gens = [next(iter(pvar(j, n))) for j in range(n) if j != v] + [next(iter(pvar(v, n, i)))]
    return ModuleKind(f"k[{var_name(v, n)}]/({var_name(v, n)}^{i})", tuple(gens))


def truncated_plane(u: int, v: int, i: int, n: int) -> ModuleKind:
    """``k[x_u, x_v]/(x_v^i)``; equals ``M_u`` for ``i = 1``."""
    if i == 1:
        return axis(u, n)
    gens = [next(iter(pvar(j, n))) for j in range(n) if j not in (u, v)]
    gens.append(next(iter(pvar(v, n, i))))
    nm = _name((u, v), n)
    nm = ",".join(nm)
    return ModuleKind(f"k[{nm}]/({var_name(v, n)}^{i})", tuple(gens))


def wrapped_plane(u: int, v: int, p: int, n: int) -> ModuleKind:
    """``k[x_u, x_v]/(x_u x_v^p)``."""
    gens = [next(iter(pvar(j, n))) for j in range(n) if j not in (u, v)]
    gens.append(tuple(p if j == v else int(j == u) for j in range(n)))
    nm = ",".join(_name((u, v), n))
    return ModuleKind(f"k[{nm}]/({var_name(u, n)}{var_name(v, n)}^{p})", tuple(gens))


def minimal_generators(gens: Iterable[Exp]) -> tuple[Exp, ...]:
    gens = sorted(set(tuple(g) for g in gens))
    out = [g for g in gens if not any(h != g and divides(h, g) for h in gens)]
    return tuple(sorted(out, reverse=True))


def named_kind(ideal: Iterable[Exp], n: int) -> ModuleKind:
    """Module kind for a squarefree monomial ideal, named after its support.

    One coordinate subspace gives ``k``, ``M_x`` or ``M_[xy]``; a union of
    axes gives ``M_xy``; a union of planes gives ``M_[xz][yt]``.
    """
    gens = minimal_generators(ideal)
    probe = ModuleKind("", gens)
    facets = sorted(sorted(f) for f in _support_facets(probe, n))
    if len(facets) == 1:
        f = facets[0]
        if not f:
            name = "k"
        elif len(f) == 1:
            name = f"M_{var_name(f[0], n)}"
        else:
            name = f"M_[{_name(f, n)}]"
    elif all(len(f) == 1 for f in facets):
        name = "M_" + _name([f[0] for f in facets], n)
    else:
        name = "M_" + "".join(f"[{_name(f, n)}]" for f in facets)
    return ModuleKind(name, gens)


def kind_from_label(label: str, n: int) -> ModuleKind:
    """Parse ``k``, ``M_y``, ``M_xy``, ``M_xyz``, ``M_[yt]`` or ``M_[xz][yt]``."""
    names = [var_name(i, n) for i in range(n)]

    def idx(ch):
        if ch not in names:
            raise ValueError(f"unknown variable {ch!r} in {label!r}")
        return names.index(ch)

    if label == "k":
        kind = point(n)
    elif label.startswith("M_["):
        parts = [p.strip("[]") for p in label[2:].split("][")]
        planes = [[idx(c) for c in p] for p in parts]
        kind = plane(planes[0], n) if len(planes) == 1 else union_of_planes(planes, n)
    elif label.startswith("M_"):
        vs = [idx(c) for c in label[2:]]
        kind = axis(vs[0], n) if len(vs) == 1 else union_of_axes(vs, n)
    else:
        raise ValueError(f"unknown module kind {label!r}")
    return named_kind(kind.ideal, n)
