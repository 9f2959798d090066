"""Exact rational LP feasibility by Phase 1 simplex.

The tableau is kept as integer rows, each an arbitrary positive multiple of
the true rational row, which avoids Fraction overhead in the pivot loop.
Pricing is Bland's rule, so the method terminates on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import Infeasible


@dataclass
class PhaseOneResult:
    feasible: bool
    x: list[Fraction] | None  # a solution of M x = c, x >= 0
    farkas: list[Fraction] | None  # y with y^T M <= 0 and y^T c > 0
    pivots: int


def _lcm_denominator(row) -> int:
    den = 1
    for v in row:
        d = Fraction(v).denominator
        den = den * d // gcd(den, d)
    return den


def _normalize(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    return [v // g for v in row] if g > 1 else row


def phase_one(M: Sequence[Sequence], c: Sequence, max_pivots: int | None = None) -> PhaseOneResult:
    """Decide feasibility of {x >= 0 : M x = c} exactly.

    Returns a solution when feasible, else a Farkas vector y with
    y^T M <= 0 componentwise and y^T c > 0.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    flips = []
    rows: list[list[int]] = []
    for i in range(m):
        vals = [Fraction(v) for v in M[i]] + [Fraction(c[i])]
        sign = -1 if vals[-1] < 0 else 1
        flips.append(sign)
        den = _lcm_denominator(vals)
        ints = [int(v * den) * sign for v in vals]
        # columns: x_0..x_{n-1}, artificial a_0..a_{m-1}, rhs
        art = [0] * m
        art[i] = den
        rows.append(_normalize(ints[:n] + art + [ints[n]]))
    width = n + m + 1
    basis = [n + i for i in range(m)]
    # Objective row holds reduced costs (times obj_den); minimise sum of artificials.
    # Reduced costs of the original columns are -sum of their (scaled) rows.
    obj = [0] * width
    obj_den = 1
    for i, r in enumerate(rows):
        scale = r[n + i]  # row i carries a_i with coefficient scale > 0
        # obj -= r / scale for structural and rhs columns
        obj = [o * scale - v * obj_den for o, v in zip(obj, r)]
        obj_den *= scale
        g = gcd(obj_den, *obj) if any(obj) else obj_den
        obj = [o // g for o in obj]
        obj_den //= g
    for j in range(n, n + m):
        obj[j] = 0
    # artificials: cost 1, basic, reduced cost 0 (already zeroed above)
    pivots = 0
    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i, r in enumerate(rows):
            a = r[enter]
            if a > 0:
                ratio = (r[-1], a)
                if best is None:
                    best, leave = ratio, i
                else:
                    lhs = ratio[0] * best[1]
                    rhs = best[0] * ratio[1]
                    if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                        best, leave = ratio, i
        if leave is None:
            # cannot happen: phase one objective is bounded below by zero
            raise ArithmeticError("unbounded phase one")
        pr = rows[leave]
        piv = pr[enter]
        for i, r in enumerate(rows):
            if i != leave and r[enter]:
                f = r[enter]
                rows[i] = _normalize([u * piv - f * w for u, w in zip(r, pr)])
        f = obj[enter]
        obj = [u * piv - f * w for u, w in zip(obj, pr)]
        obj_den *= piv
        g = gcd(obj_den, *[v for v in obj if v])
        if g > 1:
            obj = [v // g for v in obj]
            obj_den //= g
        basis[leave] = enter
        pivots += 1
        if max_pivots is not None and pivots > max_pivots:
            raise ArithmeticError("pivot limit exceeded")
    # Optimal value w* = -obj[rhs] / obj_den.
    wstar = Fraction(-obj[-1], obj_den)
    if wstar == 0:
        x = [Fraction(0)] * n
        for i, b in enumerate(basis):
            if b < n:
                x[b] = Fraction(rows[i][-1], rows[i][b])
        return PhaseOneResult(True, x, None, pivots)
    # Reduced cost of artificial i is 1 - pi_i.
    y = []
    for i in range(m):
        pi = 1 - Fraction(obj[n + i], obj_den)
        y.append(pi * flips[i])
    return PhaseOneResult(False, None, y, pivots)


def solve_inequalities(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """A point z with A z >= b (z unrestricted in sign).

    Solved through the alternative system lambda >= 0, A^T lambda = 0,
    b^T lambda = 1, whose Phase 1 duals give z when it is infeasible.
    Raises Infeasible carrying lambda otherwise.
    """
    m = len(A)
    if m == 0:
        raise ValueError("empty system: dimension unknown")
    n = len(A[0])
    M = [[A[i][j] for i in range(m)] for j in range(n)] + [[b[i] for i in range(m)]]
    c = [0] * n + [1]
    res = phase_one(M, c)
    if res.feasible:
        raise Infeasible(
            "no solution: nonnegative combination of rows gives 0 >= positive",
            witness={"multipliers": [str(v) for v in res.x]},
        )
    y = res.farkas
    t = y[n]
    z = [-y[j] / t for j in range(n)]
    for i in range(m):
        lhs = sum((Fraction(A[i][j]) * z[j] for j in range(n) if A[i][j]), Fraction(0))
        if lhs < b[i]:
            raise ArithmeticError("dual recovery produced an infeasible point")
    return z


def check_inequality_witness(A: Sequence[Sequence], b: Sequence, lam: Sequence) -> bool:
    """True if lam >= 0, lam^T A = 0 and lam^T b > 0, proving A z >= b infeasible."""
    m = len(A)
    n = len(A[0]) if m else 0
    if any(Fraction(v) < 0 for v in lam):
        return False
    for j in range(n):
        if sum(Fraction(lam[i]) * A[i][j] for i in range(m)) != 0:
            return False
    return sum(Fraction(lam[i]) * b[i] for i in range(m)) > 0


def check_farkas(M: Sequence[Sequence], c: Sequence, y: Sequence) -> bool:
    """True if y^T M <= 0 and y^T c > 0, proving {x >= 0 : M x = c} empty."""
    m = len(M)
    n = len(M[0]) if m else 0
    for j in range(n):
        if sum(Fraction(y[i]) * M[i][j] for i in range(m)) > 0:
            return False
    return sum(Fraction(y[i]) * c[i] for i in range(m)) > 0
