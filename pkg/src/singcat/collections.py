"""Exceptional collections placed on an integer lattice.

Every object is a shifted twist ``M(l)[s]`` of a module kind and sits at a
lattice point ``a``.  Coordinates equal to ``-1`` along the support of a
single coordinate subspace do not contribute, so for such kinds::

    l = -sum_{v outside support} a_v v,    s = sum_{v outside support} a_v

Unions of subspaces (``M_xy``, ``M_xyz``, ``M_[xz][yt]``) sit at points
with several ``-1`` entries and use ``l = -sum_v a_v v`` and
``s = sum_v a_v + 1``.

Objects are ordered lexicographically on reversed positions, so the last
coordinate is the most significant one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import gralg
from .gralg import ModuleKind
from .invpoly import CASE_ALIASES, GradingData, InvertiblePolynomial, case_matrix, var_name

SUPPORTED_CASES = (
    "1-chain",
    "2-split",
    "2-chain",
    "2-loop",
    "3-split-a",
    "3-split-b",
    "3-split-c",
    "3-chain",
    "3-chain-nonstrong",
    "3-loop",
)


@dataclass(frozen=True)
class CollectionObject:
    kind: ModuleKind
    twist: tuple[int, ...]  # generator coordinates of l
    homshift: int
    position: tuple[int, ...]

    def label(self, n: int) -> str:
        return f"{self.kind.name}({_fmt_twist(self.twist, n)})[{self.homshift}]"

    def to_json(self, n: int) -> dict:
        return {
            "kind": self.kind.name,
            "twist": list(self.twist),
            "shift": self.homshift,
            "position": list(self.position),
            "label": self.label(n),
        }


def _fmt_twist(t: Sequence[int], n: int) -> str:
    parts = []
    for i, c in enumerate(t):
        if not c:
            continue
        v = var_name(i, n)
        coef = "" if abs(c) == 1 else str(abs(c))
        parts.append(("-" if c < 0 else "+") + coef + v)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else (s or "0")


@dataclass(frozen=True)
class ExpectedArrow:
    source: int
    target: int
    direction: tuple[int, ...]
    dim: int
    bracket: int = 0


@dataclass
class ExceptionalCollection:
    case: str
    exponents: tuple[int, ...]
    poly: InvertiblePolynomial
    objects: list[CollectionObject]
    expected: list[ExpectedArrow] = field(default_factory=list)
    exclusions: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.poly.n

    def __len__(self) -> int:
        return len(self.objects)

    def index_of(self, position: Sequence[int]) -> int | None:
        pos = tuple(position)
        for i, o in enumerate(self.objects):
            if o.position == pos:
                return i
        return None

    def kind_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for o in self.objects:
            out[o.kind.name] = out.get(o.kind.name, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "schema": "singcat.collection/1",
            "case": self.case,
            "exponents": list(self.exponents),
            "objects": [o.to_json(self.n) for o in self.objects],
            "expected_arrows": [
                {"source": a.source, "target": a.target, "direction": list(a.direction), "dim": a.dim, "bracket": a.bracket}
                for a in self.expected
            ],
        }

    def to_dot(self) -> str:
        lines = ["digraph collection {", "  rankdir=LR;"]
        for i, o in enumerate(self.objects):
            lines.append(f'  n{i} [label="{o.label(self.n)}\\n{tuple(o.position)}"];')
        for a in self.expected:
            lab = f"[{a.bracket}]" if a.dim == 1 else f"[{a.bracket}] x{a.dim}"
            lines.append(f'  n{a.source} -> n{a.target} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# Placement


def _support(kind: ModuleKind, n: int) -> list[frozenset[int]]:
    return [frozenset(f) for f in gralg._support_facets(kind, n)]


def place(kind: ModuleKind, position: Sequence[int], n: int) -> CollectionObject:
    """Twist and shift of the object of the given kind at ``position``."""
    facets = _support(kind, n)
    pos = tuple(position)
    if len(facets) <= 1:
        sup = facets[0] if facets else frozenset()
        outside = [v for v in range(n) if v not in sup]
        twist = tuple(-pos[v] if v in outside else 0 for v in range(n))
        shift = sum(pos[v] for v in outside)
    else:
        twist = tuple(-a for a in pos)
        shift = sum(pos) + 1
    return CollectionObject(kind, twist, shift, pos)


def unplace(obj: CollectionObject, n: int) -> tuple[int, ...]:
    """Recover the position from the kind, twist and shift (inverse of ``place``)."""
    facets = _support(obj.kind, n)
    if len(facets) <= 1:
        sup = facets[0] if facets else frozenset()
        pos = tuple(-1 if v in sup else -obj.twist[v] for v in range(n))
    else:
        pos = tuple(-t for t in obj.twist)
    if place(obj.kind, pos, n) != CollectionObject(obj.kind, obj.twist, obj.homshift, pos):
        raise ValueError("twist and shift do not match a lattice placement")
    return pos


def order_key(position: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(tuple(position)))


def _box(*ranges: Iterable[int]) -> list[tuple[int, ...]]:
    return [tuple(p) for p in itertools.product(*[list(r) for r in ranges])]


def _rng(a: int, b: int) -> range:
    return range(a, b + 1)


def _layout(case: str, e: Sequence[int]) -> list[tuple[str, list[tuple[int, ...]]]]:
    """Kind labels and lattice points for each case."""
    if case == "1-chain":
        (p,) = e
        return [("k", _box(_rng(0, p - 2)))]
    if case in ("2-split", "2-chain", "2-loop"):
        p, q = e
        out = [("k", _box(_rng(0, p - 2), _rng(0, q - 2)))]
        if case == "2-chain":
            out.append(("M_y", _box(_rng(-1, p - 2), [-1])))
        if case == "2-loop":
            out.append(("M_y", _box(_rng(0, p - 2), [-1])))
            out.append(("M_x", _box([-1], _rng(0, q - 2))))
            out.append(("M_xy", [(-1, -1)]))
        return out
    p, q, r = e
    cube = ("k", _box(_rng(0, p - 2), _rng(0, q - 2), _rng(0, r - 2)))
    if case == "3-split-a":
        return [cube]
    if case == "3-split-b":
        return [cube, ("M_y", _box(_rng(-1, p - 2), [-1], _rng(0, r - 2)))]
    if case == "3-split-c":
        return [
            cube,
            ("M_y", _box(_rng(0, p - 2), [-1], _rng(0, r - 2))),
            ("M_x", _box([-1], _rng(0, q - 2), _rng(0, r - 2))),
            ("M_xy", _box([-1], [-1], _rng(0, r - 2))),
        ]
    if case == "3-chain":
        mz = _box(_rng(0, p - 2), _rng(0, q - 2), [-1]) + _box(_rng(-1, p - 3), [-1], [-1])
        return [cube, ("M_y", _box(_rng(-1, p - 2), [-1], _rng(0, r - 2))), ("M_z", mz)]
    if case == "3-chain-nonstrong":
        mz = _box(_rng(0, p - 2), _rng(-1, q - 2), [-1])
        return [cube, ("M_y", _box(_rng(-1, p - 2), [-1], _rng(0, r - 2))), ("M_z", mz)]
    if case == "3-loop":
        return [
            cube,
            ("M_y", _box(_rng(-1, p - 2), [-1], _rng(0, r - 2))),
            ("M_x", _box([-1], _rng(0, q - 2), _rng(-1, r - 2))),
            ("M_z", _box(_rng(0, p - 2), _rng(-1, q - 2), [-1])),
            ("M_xyz", [(-1, -1, -1)]),
        ]
    raise ValueError(f"unknown case {case!r}")


# Directions excluded inside a face, given by the kinds forming the face;
# "*" stands for both 0 and 1.
_EXCLUSIONS = {
    "2-chain": [((1, 0), {"M_y"})],
    "2-loop": [((1, 0), {"M_y", "M_xy"}), ((0, 1), {"M_x", "M_xy"})],
    "3-split-b": [((1, 0, "*"), {"M_y"})],
    "3-split-c": [((1, 0, "*"), {"M_y", "M_xy"}), ((0, 1, "*"), {"M_x", "M_xy"})],
    "3-chain": [((1, 0, "*"), {"M_y"}), (("*", 1, 0), {"M_z"})],
    "3-chain-nonstrong": [((1, 0, "*"), {"M_y"}), (("*", 1, 0), {"M_z"})],
    "3-loop": [((1, 0, "*"), {"M_y"}), (("*", 1, 0), {"M_z"}), ((0, "*", 1), {"M_x"})],
}


def _matches(direction: Sequence[int], pattern: Sequence) -> bool:
    return all(p == "*" or p == d for d, p in zip(direction, pattern))


def _excluded(case: str, src: CollectionObject, tgt: CollectionObject, direction) -> bool:
    for pattern, face in _EXCLUSIONS.get(case, []):
        if _matches(direction, pattern) and src.kind.name in face and tgt.kind.name in face:
            return True
    return False


def expected_arrows(c: ExceptionalCollection) -> list[ExpectedArrow]:
    """Arrows along unit-cube directions, minus the excluded ones inside faces."""
    pos = {o.position: i for i, o in enumerate(c.objects)}
    out = []
    n = c.n
    for i, o in enumerate(c.objects):
        for eps in itertools.product((0, 1), repeat=n):
            if not any(eps):
                continue
            tpos = tuple(a + b for a, b in zip(o.position, eps))
            j = pos.get(tpos)
            if j is None or _excluded(c.case, o, c.objects[j], eps):
                continue
            dim = 2 if o.kind.name == "M_xyz" and c.objects[j].kind.name == "k" else 1
            out.append(ExpectedArrow(i, j, eps, dim, 0))
    if c.case == "3-chain-nonstrong":
        # the one arrow leaving the unit cube, of bracket p - 2
        p = c.exponents[0]
        i = pos.get((p - 2, -1, -1))
        j = pos.get((-1, -1, 0))
        if i is not None and j is not None:
            out.append(ExpectedArrow(i, j, (-(p - 1), 0, 1), 1, p - 2))
    out.sort(key=lambda a: (a.source, a.target))
    return out


def _finish(case: str, exps: Sequence[int], poly: InvertiblePolynomial, objs: list[CollectionObject]) -> ExceptionalCollection:
    objs = sorted(objs, key=lambda o: order_key(o.position))
    c = ExceptionalCollection(case, tuple(exps), poly, objs)
    c.exclusions = _EXCLUSIONS.get(case, [])
    c.expected = expected_arrows(c)
    return c


def build_collection(case: str, exponents: Sequence[int], strong: bool = True) -> ExceptionalCollection:
    """The full strongly exceptional collection for one of the nine shapes.

    ``strong=False`` selects the variant of the 3-chain collection that is
    exceptional but not strong for ``p > 2``.
    """
    if case == "3-chain" and not strong:
        case = "3-chain-nonstrong"
    if case not in SUPPORTED_CASES:
        raise ValueError(f"unknown case {case!r}")
    exps = tuple(int(v) for v in exponents)
    poly = InvertiblePolynomial(case_matrix(CASE_ALIASES.get(case, case), exps))
    n = poly.n
    objs = []
    for label, points in _layout(case, exps):
        kind = gralg.kind_from_label(label, n)
        objs.extend(place(kind, pt, n) for pt in points)
    return _finish(case, exps, poly, objs)


def thom_sebastiani(c1: ExceptionalCollection, c2: ExceptionalCollection, case: str | None = None) -> ExceptionalCollection:
    """Tensor products of objects of two collections in disjoint variables.

    Kinds multiply as ``R1/I1 (x) R2/I2 = R/(I1 + I2)``; twists, shifts and
    positions concatenate and shifts add.
    """
    n1, n2 = c1.n, c2.n
    n = n1 + n2
    a = [[0] * n for _ in range(n)]
    for i, row in enumerate(c1.poly.exponents):
        for j, v in enumerate(row):
            a[i][j] = v
    for i, row in enumerate(c2.poly.exponents):
        for j, v in enumerate(row):
            a[n1 + i][n1 + j] = v
    poly = InvertiblePolynomial(a)
    objs = []
    for o1 in c1.objects:
        for o2 in c2.objects:
            ideal = [g + (0,) * n2 for g in o1.kind.ideal] + [(0,) * n1 + g for g in o2.kind.ideal]
            kind = gralg.named_kind(ideal, n)
            objs.append(
                CollectionObject(kind, o1.twist + o2.twist, o1.homshift + o2.homshift, o1.position + o2.position)
            )
    name = case or f"{c1.case}*{c2.case}"
    return _finish(name, c1.exponents + c2.exponents, poly, objs)


def slice_of(c: ExceptionalCollection, coord: int, value: int) -> list[CollectionObject]:
    return [o for o in c.objects if o.position[coord] == value]


# Conjectural collections for n = 4


def _cyclic_box(ranges_by_var: dict[int, range], fixed: dict[int, int]) -> list[tuple[int, ...]]:
    axes = []
    for v in range(4):
        axes.append([fixed[v]] if v in fixed else list(ranges_by_var[v]))
    return _box(*axes)


def conjectural_collection(n: int, kind: str, exponents: Sequence[int]) -> ExceptionalCollection:
    """Candidate collections for the 4-chain and 4-loop polynomials.

    Only the kinds and multiplicities are meant to be meaningful; the
    lattice points are a natural extension of the n = 3 placements.
    """
    if n != 4:
        raise ValueError("conjectural collections are provided for n = 4 only")
    if kind not in ("chain", "loop"):
        raise ValueError(f"unknown type {kind!r}")
    exps = tuple(int(v) for v in exponents)
    if len(exps) != 4 or any(v < 2 for v in exps):
        raise ValueError("need four exponents, each at least 2")
    p, q, r, s = exps
    case = f"4-{kind}"
    poly = InvertiblePolynomial(case_matrix(case, exps))
    full = {0: _rng(0, p - 2), 1: _rng(0, q - 2), 2: _rng(0, r - 2), 3: _rng(0, s - 2)}
    layout: list[tuple[str, list]] = [("k", _box(*full.values()))]
    if kind == "chain":
        layout += [
            ("M_y", _cyclic_box({0: _rng(-1, p - 2), 2: full[2], 3: full[3]}, {1: -1})),
            ("M_z", _cyclic_box({0: full[0], 1: _rng(-1, q - 2), 3: full[3]}, {2: -1})),
            ("M_t", _cyclic_box({0: full[0], 1: full[1], 2: _rng(-1, r - 2)}, {3: -1})),
            ("M_[yt]", _cyclic_box({0: _rng(-1, p - 2), 2: _rng(-1, r - 2)}, {1: -1, 3: -1})),
        ]
    else:
        corner = (-1, -1, -1, -1)
        layout += [
            ("M_x", _cyclic_box({1: full[1], 2: full[2], 3: _rng(-1, s - 2)}, {0: -1})),
            ("M_y", _cyclic_box({0: _rng(-1, p - 2), 2: full[2], 3: full[3]}, {1: -1})),
            ("M_z", _cyclic_box({0: full[0], 1: _rng(-1, q - 2), 3: full[3]}, {2: -1})),
            ("M_t", _cyclic_box({0: full[0], 1: full[1], 2: _rng(-1, r - 2)}, {3: -1})),
            ("M_[xz]", [pt for pt in _cyclic_box({1: _rng(-1, q - 2), 3: _rng(-1, s - 2)}, {0: -1, 2: -1}) if pt != corner]),
            ("M_[yt]", [pt for pt in _cyclic_box({0: _rng(-1, p - 2), 2: _rng(-1, r - 2)}, {1: -1, 3: -1}) if pt != corner]),
            ("M_[xz][yt]", [corner]),
        ]
    objs = []
    for label, points in layout:
        k = gralg.kind_from_label(label, 4)
        objs.extend(place(k, pt, 4) for pt in points)
    c = ExceptionalCollection(case, exps, poly, sorted(objs, key=lambda o: order_key(o.position)))
    return c


def expected_count(case: str, exponents: Sequence[int]) -> int:
    """Object count formula for each case."""
    e = list(exponents)
    if case == "1-chain":
        return e[0] - 1
    if case == "2-split":
        return (e[0] - 1) * (e[1] - 1)
    if case == "2-chain":
        return e[0] * e[1] - e[1] + 1
    if case == "2-loop":
        return e[0] * e[1]
    p, q, r = e[:3]
    if case == "3-split-a":
        return (p - 1) * (q - 1) * (r - 1)
    if case == "3-split-b":
        return (p * q - q + 1) * (r - 1)
    if case == "3-split-c":
        return p * q * (r - 1)
    if case in ("3-chain", "3-chain-nonstrong"):
        return p * q * r - q * r + r - 1
    if case == "3-loop":
        return p * q * r
    s = e[3]
    if case == "4-chain":
        return p * q * r * s - q * r * s + r * s - s + 1
    if case == "4-loop":
        return p * q * r * s
    raise ValueError(f"unknown case {case!r}")
