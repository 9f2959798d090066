"""Fat-point conditions on toric sections.

A lattice polygon P gives the sections x^a y^b, one per enclosed point.  A
point of multiplicity m imposes the vanishing of every partial derivative of
order < m.  For six sections and m = 3 this is a 6x6 matrix of polynomials in
the coordinates of a symbolic point, and the triple point empties the system
exactly when its determinant is not identically zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from .errors import NotSquare, WrongPointCount
from .lattice import LatticePolygon
from .polynomial import ONE, ZERO, IntPolynomial, Monomial


@dataclass(frozen=True)
class SystemSpec:
    """A linear system on the plane (``degree``) or on a toric surface (``polygon``)."""

    multiplicities: tuple[int, ...]
    degree: int | None = None
    polygon: LatticePolygon | None = None

    def __post_init__(self):
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be >= 1")

    @property
    def r(self) -> int:
        return len(self.multiplicities)


def derivative_orders(m: int) -> list[tuple[int, int]]:
    """Partials of order < m: [f, f_x, f_y, f_xx, f_xy, f_yy, ...]."""
    return [(k - j, j) for k in range(m) for j in range(k + 1)]


def sections_of(P: LatticePolygon) -> list[Monomial]:
    """Monomials of the enclosed points, shifted into the first quadrant."""
    pts = P.points
    x0 = min(p[0] for p in pts)
    y0 = min(p[1] for p in pts)
    return sorted((x - x0, y - y0) for x, y in pts)


@dataclass(frozen=True)
class ConditionMatrix:
    sections: tuple[Monomial, ...]
    orders: tuple[tuple[int, int], ...]
    rows: tuple[tuple[IntPolynomial, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.orders)

    def column(self, j: int) -> list[IntPolynomial]:
        return [row[j] for row in self.rows]


def condition_matrix(P: LatticePolygon, m: int) -> ConditionMatrix:
    secs = sections_of(P)
    orders = derivative_orders(m)
    rows = tuple(tuple(IntPolynomial.monomial(a, b).diff(i, j) for i, j in orders) for a, b in secs)
    return ConditionMatrix(tuple(secs), tuple(orders), rows)


def triple_point_matrix(P: LatticePolygon) -> ConditionMatrix:
    n = len(P.points)
    if n != 6:
        raise WrongPointCount(f"polygon encloses {n} lattice points, not 6")
    return condition_matrix(P, 3)


def _as_rows(M) -> list[list[IntPolynomial]]:
    rows = M.rows if isinstance(M, ConditionMatrix) else M
    rows = [list(r) for r in rows]
    if any(len(r) != len(rows) for r in rows):
        raise NotSquare(f"matrix is {len(rows)}x{len(rows[0]) if rows else 0}")
    return rows


def det_bareiss(M) -> IntPolynomial:
    """Fraction-free Gaussian elimination over Z[x, y]."""
    a = _as_rows(M)
    n = len(a)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def det_cofactor(M) -> IntPolynomial:
    """Laplace expansion along the first row, memoised on column subsets."""
    a = _as_rows(M)
    n = len(a)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple[int, ...]) -> IntPolynomial:
        if row == n:
            return ONE
        total = ZERO
        for k, c in enumerate(cols):
            entry = a[row][c]
            if entry.is_zero():
                continue
            term = entry * minor(row + 1, cols[:k] + cols[k + 1:])
            total = total + term if k % 2 == 0 else total - term
        return total

    return minor(0, tuple(range(n)))


def symbolic_det(M) -> IntPolynomial:
    return det_bareiss(M)


def is_empty_after_triple(P: LatticePolygon) -> bool:
    return not symbolic_det(triple_point_matrix(P)).is_zero()


def triple_conditions_full_rank(P: LatticePolygon) -> bool:
    """True when a general triple point kills every section of P.

    For six points this is the determinant test; for fewer points some maximal
    minor of the n x 6 condition matrix must be nonzero.  With more than six
    sections a triple point can never empty the system.
    """
    cm = condition_matrix(P, 3)
    n = len(cm.rows)
    if n > 6:
        return False
    for cols in combinations(range(6), n):
        sub = [[row[c] for c in cols] for row in cm.rows]
        if not det_bareiss(sub).is_zero():
            return True
    return False


def vdim_plane(d: int, mults: Sequence[int]) -> tuple[int, int]:
    v = comb(d + 2, 2) - sum(comb(m + 1, 2) for m in mults) - 1
    return v, max(v, -1)


def vdim_polygon(P: LatticePolygon, mults: Sequence[int]) -> tuple[int, int]:
    v = len(P.points) - 1 - sum(comb(m + 1, 2) for m in mults)
    return v, max(v, -1)


def residue_table(d: int) -> int:
    """C(d+2, 2) mod 6; periodic in d with period 12."""
    return comb(d + 2, 2) % 6


RESIDUES_BY_D_MOD_12 = (1, 3, 0, 4, 3, 3, 4, 0, 3, 1, 0, 0)


def _falling(a: int, i: int) -> int:
    out = 1
    for t in range(i):
        out *= a - t
    return out


def interpolation_matrix(sections: Sequence[Monomial], points: Sequence[tuple], mults: Sequence[int]) -> list[list[Fraction]]:
    """One row per (point, partial of order < m), one column per section."""
    rows = []
    for (px, py), m in zip(points, mults):
        for i, j in derivative_orders(m):
            row = []
            for a, b in sections:
                c = _falling(a, i) * _falling(b, j)
                row.append(c * px ** (a - i) * py ** (b - j) if c else Fraction(0))
            rows.append(row)
    return rows


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by fraction-free elimination on integer-scaled rows."""
    mat = []
    for r in rows:
        den = 1
        for v in r:
            v = Fraction(v)
            den = den * v.denominator // gcd(den, v.denominator)
        mat.append([int(Fraction(v) * den) for v in r])
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank]
        for i in range(rank + 1, len(mat)):
            f = mat[i][c]
            if f:
                row = [p[c] * u - f * w for u, w in zip(mat[i], p)]
                g = 0
                for v in row:
                    g = gcd(g, v)
                mat[i] = [v // g for v in row] if g > 1 else row
        rank += 1
        if rank == len(mat):
            break
    return rank


def random_point(rng: random.Random) -> tuple[Fraction, Fraction]:
    return tuple(Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6)) for _ in range(2))


def generic_dim_oracle(P: LatticePolygon, mults: Sequence[int], trials: int = 3, seed: int = 42) -> int:
    """Dimension of the system with general fat points, by exact rank at random
    rational points (max rank over ``trials`` independent placements)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    secs = sections_of(P)
    best = 0
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        pts = [random_point(rng) for _ in mults]
        best = max(best, exact_rank(interpolation_matrix(secs, pts, mults)))
        if best == len(secs):
            break
    return len(secs) - 1 - best


def evaluate_matrix(M: ConditionMatrix, x, y) -> list[list[Fraction]]:
    return [[e.evaluate(x, y) for e in row] for row in M.rows]


def det_at_random_point(M: ConditionMatrix, seed: int) -> Fraction:
    """Value of the determinant at a random rational point (Schwartz-Zippel probe)."""
    rng = random.Random(seed)
    x, y = random_point(rng)
    a = evaluate_matrix(M, x, y)
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [u - f * w for u, w in zip(a[i], a[k])]
    return det


def points_on_line_counts(P: LatticePolygon) -> int:
    """Largest number of enclosed points on one lattice line."""
    pts = P.points
    best = 1
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            dx, dy = q[0] - p[0], q[1] - p[1]
            best = max(best, sum(1 for r in pts if dx * (r[1] - p[1]) - dy * (r[0] - p[0]) == 0))
    return best


__all__ = [
    "ConditionMatrix",
    "SystemSpec",
    "condition_matrix",
    "det_bareiss",
    "det_cofactor",
    "generic_dim_oracle",
    "is_empty_after_triple",
    "residue_table",
    "sections_of",
    "symbolic_det",
    "triple_point_matrix",
    "vdim_plane",
    "vdim_polygon",
]
