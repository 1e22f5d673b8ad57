"""Fullness certificates by saturation over short exact sequences.

Every rule is a sequence of monomial quotients

    0 -> R/(I : m) (-deg m) --m--> R/I -> R/(I + m) -> 0

which is exact for any monomial ideal ``I`` and monomial ``m`` outside it.
The state records which pairs (module kind, class in the reduced grading
group) have been generated; shifts are forgotten and twists are taken
modulo the degree of ``w``, both of which are harmless for triangulated
subcategories of the category of singularities.  Two out of three terms
of a sequence generate the third.  Kinds passing the perfectness criterion
are zero objects and count as present for every twist.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import gralg
from .collections import ExceptionalCollection
from .gralg import Exp, ModuleKind, minimal_generators
from .invpoly import GradingData, InvertiblePolynomial, grading_data, var_name


@dataclass(frozen=True)
class SESRule:
    """``0 -> sub(l - shift) -> mid(l) -> quot(l) -> 0`` for every ``l``."""

    sub: tuple[Exp, ...]
    mid: tuple[Exp, ...]
    quot: tuple[Exp, ...]
    monomial: Exp
    tag: str

    @property
    def slots(self) -> tuple[tuple[tuple[Exp, ...], Exp], ...]:
        zero = tuple(0 for _ in self.monomial)
        neg = tuple(-a for a in self.monomial)
        return ((self.sub, neg), (self.mid, zero), (self.quot, zero))


@dataclass
class RuleSet:
    poly: InvertiblePolynomial
    kinds: list[tuple[Exp, ...]]
    rules: list[SESRule]
    perfect: set = field(default_factory=set)

    def name(self, ideal) -> str:
        return ideal_name(ideal, self.poly.n)


@dataclass
class GenerationState:
    items: set = field(default_factory=set)  # (ideal, canonical class)
    trace: list = field(default_factory=list)

    def copy(self) -> "GenerationState":
        return GenerationState(set(self.items), list(self.trace))


@dataclass
class Certificate:
    full: bool
    goal: int
    reached: int
    missing: list
    trace: list
    seed: int

    def to_json(self) -> dict:
        return {
            "schema": "singcat.fullness/1",
            "full": self.full,
            "goal_classes": self.goal,
            "reached_classes": self.reached,
            "missing": self.missing,
            "seed_size": self.seed,
            "steps": len(self.trace),
            "trace": self.trace,
        }


def ideal_name(ideal: Iterable[Exp], n: int) -> str:
    gens = minimal_generators(ideal)
    if all(max(g) <= 1 for g in gens):
        return gralg.named_kind(gens, n).name
    return "R/(" + ",".join(_mono(g, n) for g in gens) + ")"


def _mono(e: Exp, n: int) -> str:
    parts = []
    for i, a in enumerate(e):
        if a == 1:
            parts.append(var_name(i, n))
        elif a > 1:
            parts.append(f"{var_name(i, n)}^{a}")
    return "".join(parts) or "1"


def _colon(ideal: Sequence[Exp], m: Exp) -> tuple[Exp, ...]:
    return minimal_generators(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in ideal)


def _plus(ideal: Sequence[Exp], m: Exp) -> tuple[Exp, ...]:
    return minimal_generators(tuple(ideal) + (tuple(m),))


def _contains(ideal: Sequence[Exp], m: Exp) -> bool:
    return any(gralg.divides(g, m) for g in ideal)


def _bounds(poly: InvertiblePolynomial) -> list[int]:
    n = poly.n
    return [max(row[j] for row in poly.exponents) for j in range(n)]


def _tag(sub, mid, quot, n) -> str:
    if sub == mid:
        return "wrap"
    if ideal_name(sub, n) == "k":
        return "ladder"
    return "splice"


def register_rules(
    poly: InvertiblePolynomial,
    seeds: Iterable[Sequence[Exp]] = (),
    max_kinds: int = 5000,
) -> RuleSet:
    """Close the seed kinds (and ``k``) under colon and sum by variable powers.

    Exponents are bounded by the column maxima of the exponent matrix,
    which keeps the family finite.
    """
    n = poly.n
    bounds = _bounds(poly)
    monos = [tuple(j if i == v else 0 for i in range(n)) for v in range(n) for j in range(1, bounds[v] + 1)]
    start = [gralg.point(n).ideal] + [minimal_generators(s) for s in seeds]
    wpoly = poly.polynomial()
    seen = {minimal_generators(s) for s in start}
    queue = list(seen)
    rules = []

    def inside(ideal):
        return all(g[i] <= bounds[i] for g in ideal for i in range(n))

    def grow(new):
        if new not in seen:
            seen.add(new)
            queue.append(new)
            if len(seen) > max_kinds:
                raise RuntimeError("kind family too large")

    while queue:
        ideal = queue.pop()
        # thickenings: raise one generator by a variable power
        for gi, g in enumerate(ideal):
            for m in monos:
                h = tuple(a + b for a, b in zip(g, m))
                if not all(h[i] <= bounds[i] for i in range(n)):
                    continue
                new = minimal_generators(ideal[:gi] + ideal[gi + 1 :] + (h,))
                if all(_contains(new, t) for t in wpoly):
                    grow(new)
        for m in monos:
            if _contains(ideal, m):
                continue
            sub, quot = _colon(ideal, m), _plus(ideal, m)
            if not inside(sub) or not inside(quot):
                continue
            rules.append(SESRule(sub, ideal, quot, m, _tag(sub, ideal, quot, n)))
            grow(sub)
            grow(quot)
    kinds = sorted(seen, key=lambda k: (ideal_name(k, n), k))
    rules.sort(key=lambda r: (r.mid, r.monomial))
    perfect = set()
    for k in kinds:
        kind = ModuleKind(ideal_name(k, n), k)
        if all(_contains(k, m) for m in wpoly) and gralg.perfect_presentation(wpoly, kind, n) is not None:
            perfect.add(k)
    # perfect complexes satisfy two out of three
    changed = True
    while changed:
        changed = False
        for r in rules:
            have = [s in perfect for s in (r.sub, r.mid, r.quot)]
            if sum(have) == 2:
                perfect.update((r.sub, r.mid, r.quot))
                changed = True
    return RuleSet(poly, kinds, rules, perfect)


def rules_for_case(case: str, exponents: Sequence[int], strong: bool = True) -> RuleSet:
    from .collections import build_collection

    c = build_collection(case, exponents, strong)
    return register_rules(c.poly, [o.kind.ideal for o in c.objects])


def probe_rule(rs: RuleSet, rule: SESRule, degrees=None) -> bool:
    """Dimension additivity of the sequence on graded pieces."""
    from .mf import probe_degrees

    g = grading_data(rs.poly)
    ring = gralg.GradedPolyRing(g)
    degrees = degrees or probe_degrees(g)
    mods = [gralg.MonomialQuotientModule(ring, ModuleKind("", k)) for k in (rule.sub, rule.mid, rule.quot)]
    shift = g.element(rule.monomial)
    for d in degrees:
        if mods[1].dim(d) != mods[0].dim(d - shift) + mods[2].dim(d):
            return False
    return True


def saturate(
    seed: GenerationState,
    rs: RuleSet,
    shuffle: int | None = None,
) -> GenerationState:
    """Least fixed point of the two-out-of-three closure containing ``seed``."""
    g = grading_data(rs.poly)
    n = rs.poly.n
    classes = g.reduced_elements()
    red = g.reduced_group
    state = seed.copy()
    rules = list(rs.rules)
    if shuffle is not None:
        random.Random(shuffle).shuffle(rules)
    offsets = {}
    for r in rules:
        for _, off in r.slots:
            if off not in offsets:
                offsets[off] = red.element(off)

    def present(ideal, cls) -> bool:
        return ideal in rs.perfect or (ideal, cls.canonical()) in state.items

    changed = True
    while changed:
        changed = False
        for r in rules:
            for l in classes:
                slots = [(ideal, l + offsets[off]) for ideal, off in r.slots]
                have = [present(i, c) for i, c in slots]
                if sum(have) != 2:
                    continue
                k = have.index(False)
                ideal, cls = slots[k]
                state.items.add((ideal, cls.canonical()))
                state.trace.append(
                    {
                        "rule": r.tag,
                        "sequence": [rs.name(s) for s, _ in r.slots],
                        "monomial": _mono(r.monomial, n),
                        "l": list(l.coords),
                        "produced": {"kind": rs.name(ideal), "class": list(cls.canonical())},
                    }
                )
                changed = True
    return state


def seed_from_collection(c: ExceptionalCollection) -> GenerationState:
    g = grading_data(c.poly)
    items = set()
    for o in c.objects:
        items.add((minimal_generators(o.kind.ideal), g.reduce(g.element(o.twist)).canonical()))
    return GenerationState(items, [])


def certify_fullness(c: ExceptionalCollection, rs: RuleSet | None = None) -> Certificate:
    """Saturate from the collection and check every class of ``k`` is reached."""
    g = grading_data(c.poly)
    rs = rs or register_rules(c.poly, [o.kind.ideal for o in c.objects])
    seed = seed_from_collection(c)
    final = saturate(seed, rs)
    kpt = gralg.point(c.n).ideal
    classes = g.reduced_elements()
    missing = [list(cl.coords) for cl in classes if (kpt, cl.canonical()) not in final.items]
    reached = len(classes) - len(missing)
    return Certificate(not missing, len(classes), reached, missing, final.trace, len(seed.items))


def goal_state(rs: RuleSet) -> GenerationState:
    """Every kind of the family in every class."""
    g = grading_data(rs.poly)
    items = {(k, cl.canonical()) for k in rs.kinds for cl in g.reduced_elements()}
    return GenerationState(items, [])
