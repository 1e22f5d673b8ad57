"""Invertible polynomials: shapes, grading groups, weights and Milnor numbers.

An invertible polynomial is stored through its exponent matrix ``A``; row
``i`` is the exponent vector of the ``i``-th monomial and every coefficient
is 1.  For ``n <= 3`` the nine shapes used throughout the package are
named ``1-chain``, ``2-split``, ``2-chain``, ``2-loop``, ``3-split-a``,
``3-split-b``, ``3-split-c``, ``3-chain`` and ``3-loop``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

from sympy import Matrix

from .abgroup import AbelianGroup, GroupElement, GroupPresentation

VARIABLE_NAMES = "xyzt"

CASE_NAMES = (
    "1-chain",
    "2-split",
    "2-chain",
    "2-loop",
    "3-split-a",
    "3-split-b",
    "3-split-c",
    "3-chain",
    "3-loop",
)
# the non-strong 3-chain collection lives on the same polynomial
CASE_ALIASES = {"3-chain-nonstrong": "3-chain"}


def var_name(i: int, n: int) -> str:
    return VARIABLE_NAMES[i] if n <= len(VARIABLE_NAMES) else f"x{i + 1}"


def chain_matrix(exps: Sequence[int]) -> list[list[int]]:
    n = len(exps)
    a = [[0] * n for _ in range(n)]
    for i, p in enumerate(exps):
        a[i][i] = p
        if i:
            a[i][i - 1] = 1
    return a


def loop_matrix(exps: Sequence[int]) -> list[list[int]]:
    n = len(exps)
    if n < 2:
        raise ValueError("a loop needs at least two variables")
    a = chain_matrix(exps)
    a[0][n - 1] = 1
    return a


def _block_diag(*blocks: list[list[int]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out


def case_matrix(case: str, exps: Sequence[int]) -> list[list[int]]:
    """Exponent matrix of the standard polynomial for a named case."""
    case = CASE_ALIASES.get(case, case)
    exps = [int(e) for e in exps]
    want = {"1": 1, "2": 2, "3": 3, "4": 4}.get(case[:1])
    if want is None or len(exps) != want:
        raise ValueError(f"case {case!r} needs {want} exponents, got {len(exps)}")
    if any(e < 2 for e in exps):
        raise ValueError("exponents must be at least 2")
    p = exps
    if case in ("1-chain", "2-chain", "3-chain", "4-chain"):
        return chain_matrix(p)
    if case in ("2-loop", "3-loop", "4-loop"):
        return loop_matrix(p)
    if case in ("2-split", "3-split-a"):
        return _block_diag(*[[[e]] for e in p])
    if case == "3-split-b":
        return _block_diag(chain_matrix(p[:2]), [[p[2]]])
    if case == "3-split-c":
        return _block_diag(loop_matrix(p[:2]), [[p[2]]])
    raise ValueError(f"unknown case {case!r}")


@dataclass(frozen=True)
class Atom:
    kind: str  # "chain" or "loop"
    variables: tuple[int, ...]
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class AtomicDecomposition:
    parts: tuple[Atom, ...]
    case: str | None  # one of CASE_NAMES when n <= 3
    # permutation sending standard-form variable j to variable perm[j]
    permutation: tuple[int, ...] | None = None
    exponents: tuple[int, ...] | None = None


class InvertiblePolynomial:
    """``w = sum_i prod_j x_j^{A[i][j]}`` with positive weights."""

    def __init__(self, exponents: Sequence[Sequence[int]]):
        a = tuple(tuple(int(v) for v in row) for row in exponents)
        n = len(a)
        if n == 0 or any(len(row) != n for row in a):
            raise ValueError("exponent matrix must be square and nonempty")
        if any(v < 0 for row in a for v in row):
            raise ValueError("exponents must be nonnegative")
        if Matrix(a).det() == 0:
            raise ValueError("exponent matrix is singular")
        self.exponents = a
        self.n = n
        if any(q <= 0 for q in self.weights):
            raise ValueError("weights must be strictly positive")

    @classmethod
    def from_case(cls, case: str, exps: Sequence[int]) -> "InvertiblePolynomial":
        return cls(case_matrix(case, exps))

    @classmethod
    def from_json(cls, data: dict) -> "InvertiblePolynomial":
        if "case" in data:
            return cls.from_case(data["case"], data["exponents"])
        mons = data["monomials"]
        if "n" in data and len(mons) != int(data["n"]):
            raise ValueError("number of monomials must equal n")
        return cls(mons)

    def to_json(self) -> dict:
        return {"n": self.n, "monomials": [list(r) for r in self.exponents]}

    @cached_property
    def weights(self) -> tuple[Fraction, ...]:
        """Normalized weights ``q = A^{-1} (1, ..., 1)``."""
        inv = Matrix(self.exponents).inv()
        ones = Matrix([1] * self.n)
        q = inv * ones
        return tuple(Fraction(int(v.p), int(v.q)) for v in q)

    @property
    def monomials(self) -> tuple[tuple[int, ...], ...]:
        return self.exponents

    def polynomial(self) -> dict[tuple[int, ...], int]:
        return {row: 1 for row in self.exponents}

    def __eq__(self, other):
        return isinstance(other, InvertiblePolynomial) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __str__(self) -> str:
        terms = []
        for row in self.exponents:
            t = []
            for j, e in enumerate(row):
                if e == 1:
                    t.append(var_name(j, self.n))
                elif e > 1:
                    t.append(f"{var_name(j, self.n)}^{e}")
            terms.append("*".join(t))
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"InvertiblePolynomial({str(self)})"


def transpose(w: InvertiblePolynomial) -> InvertiblePolynomial:
    a = w.exponents
    return InvertiblePolynomial([[a[j][i] for j in range(w.n)] for i in range(w.n)])


def milnor_number(w: InvertiblePolynomial) -> int:
    mu = Fraction(1)
    for q in w.weights:
        mu *= 1 / q - 1
    if mu.denominator != 1 or mu <= 0:
        raise ValueError(f"non-integral Milnor number {mu}")
    return int(mu)


def classify(w: InvertiblePolynomial) -> AtomicDecomposition:
    """Split ``w`` into chain and loop atoms."""
    n = w.n
    main = [None] * n  # main[row] = variable carrying the big exponent
    points_to = {}  # main variable -> the extra linear variable, if any
    for i, row in enumerate(w.exponents):
        big = [j for j, e in enumerate(row) if e >= 2]
        ones = [j for j, e in enumerate(row) if e == 1]
        if len(big) != 1 or len(ones) > 1 or sum(1 for e in row if e) != len(big) + len(ones):
            raise ValueError(f"monomial {row} is not of chain/loop type")
        main[i] = big[0]
        points_to[big[0]] = ones[0] if ones else None
    if sorted(main) != list(range(n)):
        raise ValueError("every variable must carry exactly one big exponent")
    exp_of = {main[i]: w.exponents[i][main[i]] for i in range(n)}
    pointed_by: dict[int, list[int]] = {}
    for v, u in points_to.items():
        if u is not None:
            pointed_by.setdefault(u, []).append(v)
    if any(len(vs) > 1 for vs in pointed_by.values()):
        raise ValueError("not decomposable into chains and loops")
    parts = []
    seen: set[int] = set()
    # chains start at variables pointing nowhere
    for root in range(n):
        if points_to[root] is not None:
            continue
        seq = [root]
        while seq[-1] in pointed_by:
            seq.append(pointed_by[seq[-1]][0])
        seen.update(seq)
        parts.append(Atom("chain", tuple(seq), tuple(exp_of[v] for v in seq)))
    for start in range(n):
        if start in seen:
            continue
        seq = [start]
        while True:
            nxt = pointed_by[seq[-1]][0]
            if nxt == start:
                break
            seq.append(nxt)
        seen.update(seq)
        parts.append(Atom("loop", tuple(seq), tuple(exp_of[v] for v in seq)))
    case, perm, exps = _name_case(parts, n)
    return AtomicDecomposition(tuple(parts), case, perm, exps)


def _name_case(parts: list[Atom], n: int):
    if n > 3:
        return None, None, None
    key = sorted(((len(a.variables), a.kind) for a in parts), reverse=True)
    order = sorted(parts, key=lambda a: (-len(a.variables), a.kind == "chain"))
    shapes = {
        ((1, "chain"),): "1-chain",
        ((1, "chain"), (1, "chain")): "2-split",
        ((2, "chain"),): "2-chain",
        ((2, "loop"),): "2-loop",
        ((1, "chain"), (1, "chain"), (1, "chain")): "3-split-a",
        ((2, "chain"), (1, "chain")): "3-split-b",
        ((2, "loop"), (1, "chain")): "3-split-c",
        ((3, "chain"),): "3-chain",
        ((3, "loop"),): "3-loop",
    }
    case = shapes.get(tuple(key))
    if case is None:
        raise ValueError("unsupported shape")
    perm = tuple(v for a in order for v in a.variables)
    exps = tuple(e for a in order for e in a.exponents)
    return case, perm, exps


class GradingData:
    """The maximal grading group ``L_w`` with its weight and reduced quotient.

    ``L_w`` is presented on the variable degrees only; ``w`` is the degree of
    the first monomial, and the relations say every monomial has that degree.
    """

    def __init__(self, w: InvertiblePolynomial):
        self.poly = w
        n = w.n
        a = w.exponents
        rels = tuple(tuple(a[i][j] - a[0][j] for j in range(n)) for i in range(1, n))
        self.group = AbelianGroup(GroupPresentation(n, rels))
        self.var_degrees = tuple(self.group.generator(i) for i in range(n))
        self.potential_degree = self.group.element(a[0])
        self.reduced_group = AbelianGroup(GroupPresentation(n, tuple(tuple(r) for r in a)))
        den = lcm(*(q.denominator for q in w.weights))
        self.var_weights = tuple(int(q * den) for q in w.weights)
        self.potential_weight = den
        self._unit = self._free_unit()

    @property
    def n(self) -> int:
        return self.poly.n

    @property
    def w(self) -> GroupElement:
        return self.potential_degree

    def var(self, i: int) -> GroupElement:
        return self.var_degrees[i]

    def element(self, coords: Sequence[int]) -> GroupElement:
        return self.group.element(coords)

    def zero(self) -> GroupElement:
        return self.group.zero()

    def weight(self, g: GroupElement | Sequence[int]) -> int:
        coords = g.coords if isinstance(g, GroupElement) else g
        return sum(c * r for c, r in zip(coords, self.var_weights))

    def reduce(self, g: GroupElement) -> GroupElement:
        """Image of ``g`` in ``L_w / <w>``."""
        return self.reduced_group.element(g.coords)

    def reduced_elements(self) -> list[GroupElement]:
        return self.reduced_group.elements()

    def _free_unit(self) -> GroupElement:
        g = self.group
        canon = (1,) + (0,) * len(g.invariant_factors)
        u = g.element(g.from_canonical(canon))
        if self.weight(u) < 0:
            u = -u
        return u

    @property
    def weight_step(self) -> int:
        """Generator of the image of the weight map."""
        return self.weight(self._unit)

    def elements_in_weight_range(self, lo: int, hi: int) -> list[GroupElement]:
        """All ``l`` in ``L_w`` with ``lo <= weight(l) <= hi``."""
        g = self.weight_step
        tors = self.group.torsion_elements()
        out = []
        k0 = -((-lo) // g)
        for k in range(k0, hi // g + 1):
            base = self._unit * k
            out.extend(base + t for t in tors)
        return out

    def multiple_of_w(self, g: GroupElement) -> int | None:
        """Return ``j`` with ``g == j*w``, or None."""
        wt = self.weight(g)
        if wt % self.potential_weight:
            return None
        j = wt // self.potential_weight
        return j if g == self.potential_degree * j else None

    def describe(self, g: GroupElement) -> str:
        parts = []
        for i, c in enumerate(g.coords):
            if c:
                parts.append(f"{c:+d}{var_name(i, self.n)}")
        return "".join(parts) or "0"


_GRADINGS: dict = {}


def grading_data(w: InvertiblePolynomial) -> GradingData:
    """Shared grading data per exponent matrix, so group elements interoperate."""
    key = tuple(tuple(r) for r in w.exponents)
    if key not in _GRADINGS:
        _GRADINGS[key] = GradingData(w)
    return _GRADINGS[key]
