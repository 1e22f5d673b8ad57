"""Finitely generated abelian groups given by generators and relations.

Elements are stored in generator coordinates.  Equality goes through a
canonical form obtained from the Smith normal form of the relation matrix:
free coordinates first, then torsion coordinates reduced into ``[0, d)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp


def _matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    cols = len(b[0]) if b else 0
    return [[sum(r[k] * b[k][j] for k in range(len(b))) for j in range(cols)] for r in a]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(U, D, V)`` with ``U * m * V == D`` and ``D`` in Smith form.

    ``U`` and ``V`` are unimodular.  ``ncols`` is needed only when ``m`` has
    no rows.
    """
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    if rows == 0 or cols == 0:
        return _identity(rows), [[0] * cols for _ in range(rows)], _identity(cols)
    d, u, v = smith_normal_decomp(Matrix(m))
    U = [[int(x) for x in u.row(i)] for i in range(rows)]
    D = [[int(x) for x in d.row(i)] for i in range(rows)]
    V = [[int(x) for x in v.row(i)] for i in range(cols)]
    # normalize signs so that the diagonal is nonnegative
    for i in range(min(rows, cols)):
        if D[i][i] < 0:
            D[i][i] = -D[i][i]
            U[i] = [-x for x in U[i]]
    if _matmul(_matmul(U, m), V) != D:
        raise ArithmeticError("Smith normal form check failed")
    return U, D, V


def _inverse_unimodular(v: list[list[int]]) -> list[list[int]]:
    inv = Matrix(v).inv()
    return [[int(x) for x in inv.row(i)] for i in range(len(v))]


@dataclass(frozen=True)
class GroupPresentation:
    num_generators: int
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rels = tuple(tuple(int(c) for c in r) for r in self.relations)
        for r in rels:
            if len(r) != self.num_generators:
                raise ValueError(f"relation {r} has wrong length")
        object.__setattr__(self, "relations", rels)


class AbelianGroup:
    """The group ``Z^n / <relations>`` with a fixed canonical basis."""

    def __init__(self, presentation: GroupPresentation):
        self.presentation = presentation
        n = presentation.num_generators
        rels = [list(r) for r in presentation.relations]
        _, d, v = smith_normal_form(rels, ncols=n)
        diag = [d[i][i] for i in range(min(len(rels), n))]
        rank = sum(1 for x in diag if x != 0)
        self.n = n
        self._diag = diag[:rank]
        self._v = v
        self._vinv = _inverse_unimodular(v) if n else []
        # canonical coordinates: free part, then torsion factors d > 1
        self._torsion_idx = [i for i, x in enumerate(self._diag) if x > 1]
        self._free_idx = list(range(rank, n))
        self.free_rank = len(self._free_idx)
        self.invariant_factors = tuple(self._diag[i] for i in self._torsion_idx)

    @property
    def num_generators(self) -> int:
        return self.n

    @property
    def change_of_basis(self) -> list[list[int]]:
        return [row[:] for row in self._v]

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def canonical_form(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        y = [sum(coords[k] * self._v[k][j] for k in range(self.n)) for j in range(self.n)]
        free = [y[i] for i in self._free_idx]
        tors = [y[i] % self._diag[i] for i in self._torsion_idx]
        return tuple(free + tors)

    def from_canonical(self, canon: Sequence[int]) -> tuple[int, ...]:
        y = [0] * self.n
        f = self.free_rank
        for i, c in zip(self._free_idx, canon[:f]):
            y[i] = c
        for i, c in zip(self._torsion_idx, canon[f:]):
            y[i] = c
        return tuple(sum(y[k] * self._vinv[k][j] for k in range(self.n)) for j in range(self.n))

    def element(self, coords: Iterable[int]) -> "GroupElement":
        return GroupElement(self, tuple(int(c) for c in coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.n)

    def generator(self, i: int) -> "GroupElement":
        return GroupElement(self, tuple(int(j == i) for j in range(self.n)))

    def torsion_elements(self) -> list["GroupElement"]:
        """All elements of the torsion subgroup, in canonical order."""
        out = []
        for t in itertools.product(*(range(d) for d in self.invariant_factors)):
            out.append(self.element(self.from_canonical((0,) * self.free_rank + t)))
        return out

    def elements(self) -> list["GroupElement"]:
        if self.free_rank:
            raise ValueError("group is infinite")
        return self.torsion_elements()

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "invariant_factors": list(self.invariant_factors),
            "generators": self.n,
        }

    def __repr__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


def group_from_presentation(p: GroupPresentation) -> AbelianGroup:
    return AbelianGroup(p)


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: AbelianGroup
    coords: tuple[int, ...]
    _canon: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_canon", self.group.canonical_form(self.coords))

    def canonical(self) -> tuple[int, ...]:
        return self._canon

    def _coerce(self, other) -> "GroupElement":
        if isinstance(other, GroupElement):
            if other.group is not self.group:
                raise ValueError("elements of different groups")
            return other
        if other == 0:
            return self.group.zero()
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __mul__(self, k: int):
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, GroupElement):
            return other.group is self.group and other._canon == self._canon
        if other == 0:
            return not any(self._canon)
        return NotImplemented

    def __hash__(self):
        return hash(self._canon)

    def is_zero(self) -> bool:
        return not any(self._canon)

    def __repr__(self) -> str:
        return f"GroupElement{self.coords}"


def canonical_form(g: GroupElement) -> tuple[int, ...]:
    return g.canonical()


def enumerate_quotient(G: AbelianGroup, h: GroupElement) -> list[GroupElement]:
    """Coset representatives of ``G / <h>``, one per class, in generator coordinates."""
    rels = list(G.presentation.relations) + [h.coords]
    Q = AbelianGroup(GroupPresentation(G.n, tuple(rels)))
    if Q.free_rank:
        raise ValueError("quotient is infinite")
    return [G.element(q.coords) for q in Q.elements()]
