"""Brute-force generators for reference values.

These avoid the main code paths on purpose: group orders come from a
breadth-first walk through cosets instead of Smith normal forms, Milnor
numbers from a Groebner basis of the Jacobian ideal instead of weights,
and Hom tables of ``k`` over one variable from the closed form.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import sympy

from .invpoly import InvertiblePolynomial, case_matrix, var_name


def _solve(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction]:
    """Solve ``a c = v`` exactly for invertible ``a``."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(a, v)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def coset_representative(exponents: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[Fraction, ...]:
    """Canonical representative of ``v`` modulo the row lattice of the exponent matrix."""
    n = len(exponents)
    at = [[exponents[j][i] for j in range(n)] for i in range(n)]
    c = _solve(at, v)
    frac = [x - (x.numerator // x.denominator) for x in c]
    return tuple(sum(at[i][j] * frac[j] for j in range(n)) for i in range(n))


def reduced_group_order(exponents: Sequence[Sequence[int]]) -> int:
    """Order of ``Z^n / (rows of A)`` by walking cosets with unit steps."""
    n = len(exponents)
    start = coset_representative(exponents, [0] * n)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for rep in frontier:
            for i in range(n):
                v = list(rep)
                v[i] += 1
                r = coset_representative(exponents, v)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return len(seen)


def determinant_order(exponents: Sequence[Sequence[int]]) -> int:
    return abs(int(sympy.Matrix(exponents).det()))


def milnor_by_groebner(w: InvertiblePolynomial) -> int:
    """``dim k[x]/(dw/dx_i)`` counted from standard monomials of a Groebner basis."""
    n = w.n
    xs = sympy.symbols(" ".join(var_name(i, n) for i in range(n)))
    if n == 1:
        xs = (xs,) if not isinstance(xs, tuple) else xs
    f = sum(sympy.Mul(*[x**e for x, e in zip(xs, row)]) for row in w.exponents)
    jac = [sympy.diff(f, x) for x in xs]
    gb = sympy.groebner(jac, *xs, order="grevlex")
    leads = [sympy.Poly(g, *xs).monoms(order="grevlex")[0] for g in gb.exprs]
    bound = max(max(r) for r in w.exponents) * n + 1
    count = 0
    for e in itertools.product(range(bound + 1), repeat=n):
        if not any(all(a >= b for a, b in zip(e, lm)) for lm in leads):
            count += 1
    return count


def one_variable_table(p: int, periods: int = 3) -> dict[tuple[int, int], int]:
    """``{(l, parity): dim}`` for ``Hom(k, k(l)[parity])`` over ``k[x]/(x^p)``.

    Degrees are integers with ``x = 1`` and ``w = p``; nonzero exactly at
    ``l = -j p`` (even) and ``l = -j p - 1`` (odd).  Only ``j`` in
    ``range(periods)`` is listed.
    """
    out = {}
    for j in range(periods):
        out[(-j * p, 0)] = 1
        out[(-j * p - 1, 1)] = 1
    return out


def lattice_layers(positions: Sequence[Sequence[int]]) -> list[int]:
    """Number of lattice points on each antidiagonal, from the lowest sum up."""
    sums = [sum(p) for p in positions]
    if not sums:
        return []
    return [sums.count(b) for b in range(min(sums), max(sums) + 1)]


def conjecture_counts(kind: str, exps: Sequence[int]) -> dict[str, int]:
    """Kind multiplicities of the n = 4 candidates, evaluated term by term."""
    p, q, r, s = exps
    if kind == "chain":
        return {
            "k": (p - 1) * (q - 1) * (r - 1) * (s - 1),
            "M_y": p * (r - 1) * (s - 1),
            "M_z": (p - 1) * q * (s - 1),
            "M_t": (p - 1) * (q - 1) * r,
            "M_[yt]": p * r,
        }
    return {
        "k": (p - 1) * (q - 1) * (r - 1) * (s - 1),
        "M_x": (q - 1) * (r - 1) * s,
        "M_y": p * (r - 1) * (s - 1),
        "M_z": (p - 1) * q * (s - 1),
        "M_t": (p - 1) * (q - 1) * r,
        "M_[xz]": q * s - 1,
        "M_[yt]": p * r - 1,
        "M_[xz][yt]": 1,
    }


def case_group_orders(case: str, exps: Sequence[int]) -> dict[str, int]:
    a = case_matrix(case, exps)
    return {"walk": reduced_group_order(a), "determinant": determinant_order(a)}
