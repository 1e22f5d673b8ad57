"""Exact sparse linear algebra over the rationals.

Vectors are dicts ``index -> int``.  Elimination is fraction free: rows are
combined with integer multipliers and divided by the gcd of their entries,
so rank and span questions are answered exactly over Q.
"""

from __future__ import annotations

from fractions import Fraction
import heapq
from math import gcd
from typing import Iterable

Vec = dict


def _normalize(v: Vec, t: Vec | None = None) -> None:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            break
    if t is not None:
        for x in t.values():
            if g == 1:
                break
            g = gcd(g, x)
    if g > 1:
        for k in v:
            v[k] //= g
        if t is not None:
            for k in t:
                t[k] //= g


def _axpy(a: int, v: Vec, b: int, u: Vec) -> Vec:
    """Return ``a*v - b*u`` dropping zeros."""
    out = {k: a * x for k, x in v.items()} if a != 1 else dict(v)
    for k, x in u.items():
        y = out.get(k, 0) - b * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


class Echelon:
    """Incrementally maintained echelon basis of a subspace.

    With ``track=True`` every stored vector remembers which combination of
    the inserted vectors produced it, which gives kernels for free.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict[int, Vec] = {}
        self.track = track
        self.tags: dict[int, Vec] = {}
        self.count = 0
        self.kernel: list[Vec] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Vec, t: Vec | None = None) -> tuple[Vec, Vec | None]:
        v = {k: x for k, x in v.items() if x}
        while v:
            # eliminating at the smallest pivot index guarantees termination
            hits = [k for k in v if k in self.pivots]
            if not hits:
                return v, t
            hit = min(hits)
            p = self.pivots[hit]
            a, b = p[hit], v[hit]
            g = gcd(a, b)
            a, b = a // g, b // g
            if a < 0:
                a, b = -a, -b
            v = _axpy(a, v, b, p)
            if t is not None:
                t = _axpy(a, t, b, self.tags[hit])
            _normalize(v, t)
        return v, t

    def add(self, v: Vec) -> bool:
        """Insert ``v``; return True when it was independent."""
        idx = self.count
        self.count += 1
        t = {idx: 1} if self.track else None
        r, t = self.reduce(v, t)
        if not r:
            if self.track and t:
                self.kernel.append(t)
            return False
        piv = min(r)
        self.pivots[piv] = r
        if self.track:
            self.tags[piv] = t
        return True

    def contains(self, v: Vec) -> bool:
        r, _ = self.reduce(v)
        return not r


def rank(vectors: Iterable[Vec]) -> int:
    """Rank over Q by sparse elimination.

    Pivots are taken in the column with the fewest entries, preferring unit
    entries and short rows, which keeps fill-in low on the very sparse
    matrices of Hom complexes.
    """
    rows: dict[int, Vec] = {}
    cols: dict[int, set[int]] = {}
    for i, v in enumerate(vectors):
        v = {k: x for k, x in v.items() if x}
        if v:
            rows[i] = v
            for k in v:
                cols.setdefault(k, set()).add(i)
    heap = [(len(s), k) for k, s in cols.items()]
    heapq.heapify(heap)
    r = 0
    while heap:
        cnt, k = heapq.heappop(heap)
        s = cols.get(k)
        if not s:
            continue
        if len(s) != cnt:
            heapq.heappush(heap, (len(s), k))
            continue
        piv = min(s, key=lambda i: (abs(rows[i][k]) != 1, len(rows[i]), i))
        prow = rows.pop(piv)
        for kk in prow:
            cols[kk].discard(piv)
        a = prow[k]
        for i in list(s):
            row = rows[i]
            b = row[k]
            if a in (1, -1):
                new = _axpy(1, row, b * a, prow)
            else:
                g = gcd(a, b)
                sa, sb = a // g, b // g
                if sa < 0:
                    sa, sb = -sa, -sb
                new = _axpy(sa, row, sb, prow)
                _normalize(new)
            for kk in prow:
                if kk in new:
                    cols[kk].add(i)
                else:
                    cols[kk].discard(i)
            if new:
                rows[i] = new
            else:
                del rows[i]
        del cols[k]
        for kk in prow:
            c = cols.get(kk)
            if c:
                heapq.heappush(heap, (len(c), kk))
        r += 1
    return r


def kernel(vectors: list[Vec]) -> list[Vec]:
    """Basis of the relations ``sum c_j v_j = 0`` (as dicts ``j -> c_j``)."""
    e = Echelon(track=True)
    for v in vectors:
        e.add(v)
    return e.kernel


def to_fraction_rref(vectors: list[Vec]) -> list[dict[int, Fraction]]:
    """Reduced row echelon basis of the span, sorted by pivot, leading 1."""
    e = Echelon()
    for v in vectors:
        e.add(v)
    rows = {p: {k: Fraction(x) for k, x in r.items()} for p, r in e.pivots.items()}
    order = sorted(rows)
    for p in order:
        lead = rows[p][p]
        rows[p] = {k: x / lead for k, x in rows[p].items()}
    for p in reversed(order):
        for q in order:
            if q != p and p in rows[q]:
                c = rows[q][p]
                new = dict(rows[q])
                for k, x in rows[p].items():
                    y = new.get(k, 0) - c * x
                    if y:
                        new[k] = y
                    else:
                        new.pop(k, None)
                rows[q] = new
    return [rows[p] for p in order]


def dense(vec: Vec, n: int) -> list:
    return [vec.get(i, 0) for i in range(n)]
