"""Blocks of pairwise orthogonal objects and their reduction by mutations.

The symbolic path works on a quiver of Ext dimensions: a right mutation of
the middle part over a last block of pairwise orthogonal objects reverses
the arrows into that block and keeps every other arrow.  The concrete path
builds mutated factorizations as cones of evaluation and coevaluation maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .collections import ExceptionalCollection
from .mf import MatrixFactorization, MFMorphism, cone, direct_sum, shift
from .stablehom import brackets, morphism_basis, stable_hom


@dataclass
class DimQuiver:
    labels: list[str]
    positions: list[tuple[int, ...]]
    edges: dict  # (source, target) -> {bracket: dim}
    shifts: list[int] = field(default_factory=list)
    reversed_edges: set = field(default_factory=set)

    def __post_init__(self):
        if not self.shifts:
            self.shifts = [0] * len(self.labels)

    def copy(self) -> "DimQuiver":
        return DimQuiver(
            list(self.labels),
            list(self.positions),
            {k: dict(v) for k, v in self.edges.items()},
            list(self.shifts),
            set(self.reversed_edges),
        )

    def connected(self, a: int, b: int) -> bool:
        return (a, b) in self.edges or (b, a) in self.edges

    def all_strong(self) -> bool:
        return all(set(e) == {0} for e in self.edges.values())

    def dims(self) -> list[int]:
        return sorted(d for e in self.edges.values() for d in e.values())

    def to_dot(self, bd: "BlockDecomposition | None" = None, name: str = "quiver") -> str:
        block_of = {}
        if bd is not None:
            for b, verts in enumerate(bd.blocks, 1):
                for v in verts:
                    block_of[v] = b
        lines = [f"digraph {name} {{"]
        for i, lab in enumerate(self.labels):
            if i in block_of:
                b = block_of[i]
                color = (b - 1) % 9 + 1
                lines.append(
                    f'  v{i} [label="{lab} block={b}", style=filled, colorscheme=pastel19, fillcolor={color}];'
                )
            else:
                lines.append(f'  v{i} [label="{lab}"];')
        for (a, b), e in sorted(self.edges.items()):
            style = ", style=dashed" if (a, b) in self.reversed_edges else ""
            dim = sum(e.values())
            lines.append(f'  v{a} -> v{b} [label="{dim}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class BlockDecomposition:
    blocks: list[list[int]]

    def __len__(self) -> int:
        return len(self.blocks)

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def block_of(self) -> dict[int, int]:
        return {v: i for i, b in enumerate(self.blocks) for v in b}


class MutationError(ValueError):
    pass


def quiver_from_report(report) -> DimQuiver:
    from .collections import ExceptionalCollection  # noqa: F401

    edges = {(a, b): dict(e) for (a, b), e in report.ext.items() if a != b}
    return DimQuiver(list(report.labels), [], edges)


def quiver_from_collection(c: ExceptionalCollection, report) -> DimQuiver:
    q = quiver_from_report(report)
    q.positions = [o.position for o in c.objects]
    return q


def antidiagonal_blocks(c: ExceptionalCollection) -> BlockDecomposition:
    """Group objects by the coordinate sum of their lattice positions."""
    by_sum: dict[int, list[int]] = {}
    for i, o in enumerate(c.objects):
        by_sum.setdefault(sum(o.position), []).append(i)
    if not by_sum:
        return BlockDecomposition([])
    lo, hi = min(by_sum), max(by_sum)
    return BlockDecomposition([by_sum.get(b, []) for b in range(lo, hi + 1)])


def internally_orthogonal(q: DimQuiver, bd: BlockDecomposition) -> bool:
    for b in bd.blocks:
        for i in b:
            for j in b:
                if i != j and q.connected(i, j):
                    return False
    return True


def window_ok(q: DimQuiver, bd: BlockDecomposition, n: int) -> bool:
    """Blocks further apart than ``n`` are orthogonal."""
    where = bd.block_of()
    for a, b in q.edges:
        if abs(where[a] - where[b]) > n:
            return False
    return True


def forward_only(q: DimQuiver, bd: BlockDecomposition) -> bool:
    where = bd.block_of()
    return all(where[a] < where[b] for a, b in q.edges)


def invert_sink_block(q: DimQuiver, bd: BlockDecomposition, n: int) -> tuple[DimQuiver, BlockDecomposition]:
    """Mutate the middle part over the last block.

    With blocks split as ``(A, B, C)`` where ``C`` is the last block and
    ``B`` the ``n`` blocks before it, the result is ``(A, C[-1], R_C B[-m])``
    with ``m = |C|``.  Arrows from ``B`` into ``C`` are reversed with the
    same dimensions; all other arrows are kept.
    """
    if len(bd) <= 1 or not bd.blocks[-1]:
        return q.copy(), BlockDecomposition([list(b) for b in bd.blocks])
    last = set(bd.blocks[-1])
    split = max(len(bd) - 1 - n, 0)
    a_part = {v for b in bd.blocks[:split] for v in b}
    b_part = {v for b in bd.blocks[split:-1] for v in b}
    for x, y in q.edges:
        if (x in a_part and y in last) or (y in a_part and x in last):
            raise MutationError("the first blocks are not orthogonal to the last one")
    out = q.copy()
    m = len(last)
    new_edges = {}
    for (x, y), e in q.edges.items():
        if x in b_part and y in last:
            new_edges[(y, x)] = {0: sum(e.values())}
            out.reversed_edges.add((y, x))
        else:
            new_edges[(x, y)] = dict(e)
    out.edges = new_edges
    out.reversed_edges = {k for k in out.reversed_edges if k in new_edges}
    for v in last:
        out.shifts[v] -= 1
    for v in b_part:
        out.shifts[v] -= m
    blocks = [list(b) for b in bd.blocks[:split]] + [list(bd.blocks[-1])] + [list(b) for b in bd.blocks[split:-1]]
    return out, BlockDecomposition(blocks)


def reduce_blocks(q: DimQuiver, bd: BlockDecomposition, n: int) -> tuple[DimQuiver, BlockDecomposition, list[dict]]:
    """Mutate and merge until at most ``n + 1`` blocks remain."""
    if not window_ok(q, bd, n):
        raise MutationError("blocks further than n apart are not orthogonal")
    blocks = [list(b) for b in bd.blocks if b]
    bd = BlockDecomposition(blocks)
    trace = []
    while len(bd) > n + 1:
        count = len(bd)
        target = count - n - 1  # 1-based index of the block it joins
        q, moved = invert_sink_block(q, bd, n)
        merged = moved.blocks[target - 1] + moved.blocks[target]
        blocks = moved.blocks[: target - 1] + [merged] + moved.blocks[target + 1 :]
        bd = BlockDecomposition(blocks)
        if not internally_orthogonal(q, bd):
            raise MutationError("merged block is not orthogonal")
        if not window_ok(q, bd, n):
            raise MutationError("window condition lost during reduction")
        trace.append({"blocks": count, "sink": count, "merged_into": target, "sizes": bd.sizes()})
    return q, bd, trace


def format_trace(start: int, trace: list[dict]) -> str:
    counts = [start] + [start - i - 1 for i in range(len(trace))]
    merges = ", ".join(f"{t['sink']}->{t['merged_into']}" for t in trace)
    return " -> ".join(map(str, counts)) + (f" ({merges})" if merges else "")


# Concrete mutations


def _ext(x: MatrixFactorization, y: MatrixFactorization, margin=None) -> dict[int, int]:
    t = stable_hom(x, y, margin)
    return {k: d for k, d in brackets(t, x.grading.zero()).items() if d}


def _hstack(mats: list, rows: int) -> list:
    return [[p for m in mats for p in m[r]] for r in range(rows)]


def _vstack(mats: list) -> list:
    return [row for m in mats for row in m]


def concrete_mutation(e: MatrixFactorization, f: MatrixFactorization, direction: str, margin=None) -> MatrixFactorization:
    """``L_E F`` (direction ``left``) or ``R_F E`` (direction ``right``) as a factorization."""
    if direction not in ("left", "right"):
        raise ValueError("direction must be 'left' or 'right'")
    if _ext(f, e, margin):
        raise MutationError("not an exceptional pair: morphisms from F to E")
    ext = _ext(e, f, margin)
    if not ext:
        out = shift(f, -1) if direction == "left" else shift(e, 1)
        out.name = f"L({e.name},{f.name})" if direction == "left" else f"R({f.name},{e.name})"
        return out
    if direction == "left":
        copies, maps = [], []
        for k in sorted(ext):
            src = shift(e, -k)
            for phi in morphism_basis(src, f):
                copies.append(src)
                maps.append(phi)
        total = direct_sum(*copies)
        ev = MFMorphism(total, f, _hstack([m.even for m in maps], f.rank[0]), _hstack([m.odd for m in maps], f.rank[1]))
        out = shift(cone(ev), -1)
        out.name = f"L({e.name},{f.name})"
        return out
    copies, maps = [], []
    for k in sorted(ext):
        tgt = shift(f, k)
        for phi in morphism_basis(e, tgt):
            copies.append(tgt)
            maps.append(phi)
    total = direct_sum(*copies)
    coev = MFMorphism(e, total, _vstack([m.even for m in maps]), _vstack([m.odd for m in maps]))
    out = cone(coev)
    out.name = f"R({f.name},{e.name})"
    return out


def dual_ext(ext: dict[int, int]) -> dict[int, int]:
    return {-k: d for k, d in ext.items()}
