"""Subdivisions of lattice polygons and their lifting functions.

A subdivision is regular when some height function on the lattice points is
affine on every cell and strictly above each cell's affine function at every
lattice point outside that cell.  Heights are exact Fractions throughout.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import CannotFill, Infeasible, NotSeparated
from .lattice import LatticePolygon, Point, cross, hull_vertices, segment_points
from .lp import check_farkas, phase_one

TAGS = ("plane", "quadric", "special", "filler")


@dataclass(frozen=True)
class Cell:
    polygon: LatticePolygon
    tag: str = "filler"
    class_id: str | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown cell tag {self.tag!r}")
        if (self.tag == "special") != (self.class_id is not None):
            raise ValueError("class_id is required exactly for special cells")

    @property
    def vertices(self):
        return self.polygon.vertices


def shape_tag(P: LatticePolygon) -> str:
    """plane for unimodular triangles, quadric for unit parallelograms."""
    if P.twice_area == 1:
        return "plane"
    if P.twice_area == 2 and len(P.vertices) == 4 and len(P.points) == 4:
        return "quadric"
    return "filler"


@dataclass(frozen=True)
class Subdivision:
    region: LatticePolygon
    cells: tuple[Cell, ...]

    def __init__(self, region: LatticePolygon, cells: Iterable[Cell]):
        object.__setattr__(self, "region", region)
        object.__setattr__(self, "cells", tuple(cells))


@dataclass
class Lifting:
    heights: dict[Point, Fraction] = field(default_factory=dict)

    def __getitem__(self, p: Point) -> Fraction:
        return self.heights[p]

    def to_json(self) -> dict:
        pts = sorted(self.heights)
        return {
            "points": [list(p) for p in pts],
            "heights": [f"{self.heights[p].numerator}/{self.heights[p].denominator}" for p in pts],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Lifting":
        pts = data["points"]
        hs = data["heights"]
        if len(pts) != len(hs):
            raise ValueError("lifting points and heights differ in length")
        return cls({(int(p[0]), int(p[1])): Fraction(h) for p, h in zip(pts, hs)})


@dataclass
class CheckResult:
    ok: bool
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


# -- exact planar geometry ---------------------------------------------------


def _strictly_separated(A: LatticePolygon, B: LatticePolygon) -> bool:
    """Some edge normal of A or B separates the closed polygons strictly."""
    for P, Q in ((A, B), (B, A)):
        for a, b in P.edges:
            # P lies on the left of every edge; separated if Q is strictly right.
            if all(cross(a, b, q) < 0 for q in Q.vertices):
                return True
    return False


def closed_disjoint(A: LatticePolygon, B: LatticePolygon) -> bool:
    ax0, ay0, ax1, ay1 = A.bbox
    bx0, by0, bx1, by1 = B.bbox
    if ax1 < bx0 or bx1 < ax0 or ay1 < by0 or by1 < ay0:
        return True
    return _strictly_separated(A, B)


def _clip(poly: list, a: Point, b: Point) -> list:
    """Intersect a convex vertex list with the closed half-plane left of a->b."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        cp = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        cq = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
        if cp >= 0:
            out.append(p)
        if (cp > 0 and cq < 0) or (cp < 0 and cq > 0):
            t = Fraction(cp, 1) / (cp - cq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    dedup = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def intersection_points(A: LatticePolygon, B: LatticePolygon) -> list:
    """Vertices of the closed intersection A n B (rational coordinates)."""
    poly = [(Fraction(x), Fraction(y)) for x, y in A.vertices]
    for a, b in B.edges:
        poly = _clip(poly, a, b)
        if not poly:
            return []
    return sorted(set(poly))


def _is_face(P: LatticePolygon, pts: list) -> bool:
    """Whether the point set (1 point or 2 endpoints) is a vertex or edge of P."""
    if len(pts) == 1:
        return tuple(pts[0]) in P.vertices
    a, b = pts
    for u, v in P.edges:
        if {u, v} == {tuple(a), tuple(b)}:
            return True
    return False


def _face_relation(A: LatticePolygon, B: LatticePolygon) -> str | None:
    """None if A and B meet in a common face (or not at all), else a reason."""
    if closed_disjoint(A, B):
        return None
    pts = intersection_points(A, B)
    if not pts:
        return None
    if len(pts) >= 3:
        p = pts[0]
        for q in pts[1:]:
            for r in pts[1:]:
                if (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]) != 0:
                    return "interiors overlap"
        pts = [min(pts), max(pts)]
    if len(pts) == 2 and pts[0] == pts[1]:
        pts = pts[:1]
    if _is_face(A, pts) and _is_face(B, pts):
        return None
    return "intersection is not a common face"


def validate_subdivision(S: Subdivision) -> CheckResult:
    reasons = []
    R = S.region
    total = 0
    for i, c in enumerate(S.cells):
        total += c.polygon.twice_area
        if not all(R.contains(v) for v in c.vertices):
            reasons.append(f"cell {i} leaves the region")
    if total != R.twice_area:
        reasons.append(f"area mismatch: cells {total} vs region {R.twice_area} (twice areas)")
    cells = S.cells
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            why = _face_relation(cells[i].polygon, cells[j].polygon)
            if why:
                reasons.append(f"cells {i} and {j}: {why}")
    return CheckResult(not reasons, reasons)


# -- affine functions on cells ----------------------------------------------

Affine = tuple[Fraction, Fraction, Fraction]  # alpha*x + beta*y + gamma


def _affine_through(pts: Sequence[Point], vals: Sequence[Fraction]) -> Affine:
    (x0, y0), (x1, y1), (x2, y2) = pts
    det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    if det == 0:
        raise ValueError("points are collinear")
    d1 = vals[1] - vals[0]
    d2 = vals[2] - vals[0]
    alpha = Fraction(d1 * (y2 - y0) - d2 * (y1 - y0)) / det
    beta = Fraction(d2 * (x1 - x0) - d1 * (x2 - x0)) / det
    gamma = vals[0] - alpha * x0 - beta * y0
    return alpha, beta, gamma


def _independent_triple(P: LatticePolygon) -> tuple[Point, Point, Point]:
    v = P.vertices
    return v[0], v[1], v[2]


def _eval(f: Affine, p: Point) -> Fraction:
    return f[0] * p[0] + f[1] * p[1] + f[2]


def cell_affine(P: LatticePolygon, h: Mapping[Point, Fraction]) -> Affine:
    t = _independent_triple(P)
    return _affine_through(t, [Fraction(h[p]) for p in t])


def lifting_gaps(S: Subdivision, h: Lifting) -> tuple[list[str], Fraction | None]:
    """Failure reasons and the least gap h(q) - l_C(q) over cells C and q not in C."""
    reasons = []
    pts = S.region.points
    hs = h.heights
    missing = [p for p in pts if p not in hs]
    if missing:
        return [f"heights missing at {len(missing)} lattice points, e.g. {missing[0]}"], None
    best = None
    for i, c in enumerate(S.cells):
        P = c.polygon
        f = cell_affine(P, hs)
        own = P.point_set
        for q in P.points:
            if _eval(f, q) != hs[q]:
                reasons.append(f"cell {i}: heights not affine at {q}")
                break
        x0, y0, x1, y1 = P.bbox
        # Points far from the cell rarely fail; checking all keeps the test exact.
        for q in pts:
            if q in own:
                continue
            gap = hs[q] - _eval(f, q)
            if best is None or gap < best:
                best = gap
            if gap <= 0:
                reasons.append(f"cell {i}: not strictly below the lifting at {q}")
                break
    return reasons, best


def check_lifting(S: Subdivision, h: Lifting) -> CheckResult:
    reasons, _ = lifting_gaps(S, h)
    return CheckResult(not reasons, reasons)


def normalize_lifting(S: Subdivision, h: Lifting, min_gap: Fraction | None = None) -> Lifting:
    """Scale so every strict gap is >= 1 and shift so every height is >= 1."""
    hs = dict(h.heights)
    if min_gap is None:
        _, min_gap = lifting_gaps(S, h)
    if min_gap is not None and 0 < min_gap < 1:
        hs = {p: v / min_gap for p, v in hs.items()}
    low = min(hs.values())
    return Lifting({p: v - low + 1 for p, v in sorted(hs.items())})


# -- regularity by linear programming ----------------------------------------


def _unit_segments(P: LatticePolygon) -> list[tuple[Point, Point]]:
    out = []
    for a, b in P.edges:
        sp = segment_points(a, b)
        out.extend(zip(sp, sp[1:]))
    return out


def _line_functional(a: Point, b: Point, side: Point) -> tuple[int, int, int]:
    """Primitive integer affine n with n = 0 on line ab and n(side) > 0."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    from math import gcd

    g = gcd(dx, dy)
    wx, wy = -dy // g, dx // g
    c = -(wx * a[0] + wy * a[1])
    if wx * side[0] + wy * side[1] + c < 0:
        wx, wy, c = -wx, -wy, -c
    return wx, wy, c


def _adjacency(S: Subdivision):
    """Map each interior unit segment to its two cells, and each cell pair to its edge functional."""
    seg_cells: dict[frozenset, list[int]] = {}
    for i, c in enumerate(S.cells):
        for u, v in _unit_segments(c.polygon):
            seg_cells.setdefault(frozenset((u, v)), []).append(i)
    pairs: dict[tuple[int, int], tuple[int, int, int]] = {}
    for seg, owners in seg_cells.items():
        if len(owners) > 2:
            raise ValueError("segment shared by more than two cells")
        if len(owners) == 2:
            i, j = sorted(owners)
            if (i, j) in pairs:
                continue
            a, b = tuple(seg)
            side = next(v for v in S.cells[j].vertices if cross(a, b, v) != 0)
            pairs[(i, j)] = _line_functional(a, b, side)
    return seg_cells, pairs


def _vertex_cycles(S: Subdivision, seg_cells) -> list[list[tuple[int, int]]]:
    """For each interior vertex, the cyclic sequence of (cell, next cell) crossings."""
    region = S.region
    at_vertex: dict[Point, list[int]] = {}
    for i, c in enumerate(S.cells):
        for v in c.vertices:
            at_vertex.setdefault(v, []).append(i)
    cycles = []
    for v, owners in sorted(at_vertex.items()):
        if not region.contains(v, strict=True):
            continue
        # unit segments from v used as edges by cells at v
        def edges_at(i):
            P = S.cells[i].polygon
            k = P.vertices.index(v)
            nxt = P.vertices[(k + 1) % len(P.vertices)]
            prv = P.vertices[k - 1]
            return [segment_points(v, nxt)[1], segment_points(v, prv)[1]]

        start = owners[0]
        cur = start
        came_from = None
        seq = []
        for _ in range(len(owners) + 1):
            outs = edges_at(cur)
            w = outs[0] if outs[0] != came_from else outs[1]
            others = [j for j in seg_cells[frozenset((v, w))] if j != cur]
            if not others:
                raise ValueError(f"open fan around interior vertex {v}")
            nxt = others[0]
            seq.append((cur, nxt))
            came_from = w
            cur = nxt
            if cur == start:
                break
        else:
            raise ValueError(f"fan around {v} does not close")
        cycles.append((v, seq))
    return cycles


def find_lifting(S: Subdivision) -> Lifting:
    """Heights certifying regularity, or Infeasible with a Farkas witness.

    Neighbouring cells C, C' across an edge with primitive functional n
    (positive on C') satisfy l_C' = l_C + s n for a bend s >= 1.  Around every
    interior vertex the bends must balance; the bends form the LP variables.
    """
    cells = S.cells
    if len(cells) == 1:
        return Lifting({p: Fraction(1) for p in S.region.points})
    seg_cells, pairs = _adjacency(S)
    keys = sorted(pairs)
    index = {k: t for t, k in enumerate(keys)}
    rows: list[list[int]] = []
    for v, seq in _vertex_cycles(S, seg_cells):
        rx = [0] * len(keys)
        ry = [0] * len(keys)
        for a, b in seq:
            key = (min(a, b), max(a, b))
            wx, wy, _ = pairs[key]
            sign = 1 if a < b else -1
            rx[index[key]] += sign * wx
            ry[index[key]] += sign * wy
        rows.append(rx)
        rows.append(ry)
    rows = [r for r in rows if any(r)]
    if rows:
        # s = 1 + t with t >= 0:  M t = -M 1
        rhs = [-sum(r) for r in rows]
        res = phase_one(rows, rhs)
        if not res.feasible:
            assert check_farkas(rows, rhs, res.farkas)
            raise Infeasible(
                "subdivision is not regular: bend balance equations have no solution with all bends >= 1",
                witness={"equations": rows, "rhs": rhs, "multipliers": [str(y) for y in res.farkas]},
            )
        bends = [1 + t for t in res.x]
    else:
        bends = [Fraction(1)] * len(keys)
    # Propagate affine functions over the dual graph.
    nbrs: dict[int, list[int]] = {}
    for i, j in keys:
        nbrs.setdefault(i, []).append(j)
        nbrs.setdefault(j, []).append(i)
    aff: dict[int, Affine] = {0: (Fraction(0), Fraction(0), Fraction(0))}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in nbrs.get(i, []):
            if j in aff:
                continue
            key = (min(i, j), max(i, j))
            s = bends[index[key]]
            wx, wy, c = pairs[key]
            sign = 1 if i < j else -1
            f = aff[i]
            aff[j] = (f[0] + sign * s * wx, f[1] + sign * s * wy, f[2] + sign * s * c)
            queue.append(j)
    if len(aff) != len(cells):
        raise ValueError("cells are not edge-connected")
    hs: dict[Point, Fraction] = {}
    for i, c in enumerate(cells):
        for p in c.polygon.points:
            hs.setdefault(p, _eval(aff[i], p))
    h = Lifting(hs)
    reasons, gap = lifting_gaps(S, h)
    if reasons:
        raise Infeasible("bend solution does not lift the subdivision: " + reasons[0])
    return normalize_lifting(S, h, gap)


# -- lower hulls ------------------------------------------------------------


def _primitive_dual(e: Point) -> tuple[int, int]:
    """Integer w with w . e = 1 for a primitive vector e."""
    from .lattice import _ext_gcd

    g, u, v = _ext_gcd(e[0], e[1])
    if abs(g) != 1:
        raise ValueError("vector is not primitive")
    return u * g, v * g


def induced_subdivision(region: LatticePolygon, heights: Mapping[Point, Fraction]) -> list[LatticePolygon]:
    """Cells of the lower convex hull of the lifted lattice points of region.

    Gift wrapping over directed unit edges: the cell left of a -> b lies on the
    plane through the lifted a, b that is lowest over the points on the left.
    Every lifted lattice point must lie on the lower hull; heights that hide a
    point raise ValueError, since no cellwise affine lifting can carry them.
    """
    pts = region.points
    h = {p: Fraction(heights[p]) for p in pts}
    done: set[tuple[Point, Point]] = set()
    boundary = set()
    queue = deque()
    for a, b in _unit_segments(region):
        boundary.add((b, a))
        queue.append((a, b))
    cells = []
    while queue:
        a, b = queue.popleft()
        if (a, b) in done:
            continue
        e = (b[0] - a[0], b[1] - a[1])
        w = _primitive_dual(e)
        da = h[b] - h[a]
        best = None
        face = []
        for c in pts:
            nc = e[0] * (c[1] - a[1]) - e[1] * (c[0] - a[0])
            if nc <= 0:
                continue
            g = h[a] + da * (w[0] * (c[0] - a[0]) + w[1] * (c[1] - a[1]))
            t = (h[c] - g) / nc
            if best is None or t < best:
                best, face = t, [c]
            elif t == best:
                face.append(c)
        if best is None:
            raise ValueError(f"no lattice point left of edge {a}->{b}")
        # Add collinear points of the line ab that lie on the plane.
        on_plane = [a, b] + face
        for c in pts:
            nc = e[0] * (c[1] - a[1]) - e[1] * (c[0] - a[0])
            if nc == 0 and c not in (a, b):
                g = h[a] + da * (w[0] * (c[0] - a[0]) + w[1] * (c[1] - a[1]))
                if g == h[c]:
                    on_plane.append(c)
        P = LatticePolygon(hull_vertices(on_plane))
        cells.append(P)
        for u, v in _unit_segments(P):
            done.add((u, v))
            if (v, u) not in boundary and (v, u) not in done:
                queue.append((v, u))
    uniq = {P.vertices: P for P in cells}
    if sum(P.twice_area for P in uniq.values()) != region.twice_area:
        raise ValueError("heights leave lattice points above the lower hull")
    return sorted(uniq.values(), key=lambda P: P.vertices)


# -- gluing ----------------------------------------------------------------


def _functional_value(line, p) -> Fraction:
    a, b, c = line
    return Fraction(a * p[0] + b * p[1]) + Fraction(c)


def separating_lift(
    first: tuple[Subdivision, Lifting],
    second: tuple[Subdivision, Lifting],
    line: tuple,
    region: LatticePolygon,
    bridge: Sequence[Cell] | None = None,
) -> tuple[Subdivision, Lifting]:
    """Lift two subdivisions separated by a lattice-free line jointly.

    The result keeps the first lifting and adds mu * L to the second, where
    L is the line functional (oriented positive on the second region) and
    mu is chosen large enough for strict convexity.  Without explicit bridge
    cells, the gap between the pieces is filled by the lower hull cells of the
    joint heights: over the seam strip when the pieces meet it edge to edge,
    otherwise over the whole region.
    """
    (S1, h1), (S2, h2) = first, second
    a, b, c = line
    if (a, b) == (0, 0):
        raise NotSeparated("line functional is zero")
    p1, p2 = S1.region.points, S2.region.points
    v1 = [_functional_value(line, p) for p in p1]
    v2 = [_functional_value(line, p) for p in p2]
    if any(v == 0 for v in v1 + v2):
        raise NotSeparated("line passes through a lattice point of a region")
    if all(v < 0 for v in v1) and all(v > 0 for v in v2):
        sign = 1
    elif all(v > 0 for v in v1) and all(v < 0 for v in v2):
        sign = -1
    else:
        raise NotSeparated("line does not separate the two regions")
    L = {p: sign * _functional_value(line, p) for p in region.points}
    set1, set2 = set(p1), set(p2)
    if any(p not in set1 and p not in set2 for p in region.points):
        raise NotSeparated("region has lattice points outside both pieces")
    strip = None
    if bridge is None:
        strip = LatticePolygon(hull_vertices(_seam_points(region, line)))
        pieces = S1.region.twice_area + S2.region.twice_area
        if pieces + strip.twice_area != region.twice_area:
            # The pieces do not meet the seam strip edge to edge; bridge over the whole region.
            strip = region

    def assemble(mu):
        hs = {p: Fraction(h1[p]) for p in p1}
        hs.update({p: Fraction(h2[p]) + mu * L[p] for p in p2})
        if bridge is None:
            extra = [
                Cell(P, shape_tag(P))
                for P in induced_subdivision(strip, hs)
                if not (P.point_set <= set1 or P.point_set <= set2)
            ]
        else:
            extra = list(bridge)
        return Subdivision(region, list(S1.cells) + list(S2.cells) + extra), Lifting(hs)

    mu = _mu_bound(S1, h1, S2, h2, L)
    for _ in range(40):
        S, h = assemble(mu)
        if check_lifting(S, h):
            return S, h
        mu *= 2
    S, _ = assemble(mu)
    return S, find_lifting(S)


def _seam_points(region: LatticePolygon, line) -> list[Point]:
    """Region points on the two lattice lines parallel to and nearest the line."""
    a, b, c = line
    vals = {}
    for p in region.points:
        vals.setdefault(a * p[0] + b * p[1], []).append(p)
    lo = max((v for v in vals if v < -c), default=None)
    hi = min((v for v in vals if v > -c), default=None)
    if lo is None or hi is None:
        raise NotSeparated("line does not cross the region")
    return sorted(vals[lo] + vals[hi])


def _mu_bound(S1, h1, S2, h2, L) -> Fraction:
    """A mu making every cell of each piece strictly below the other piece."""
    need = Fraction(1)
    for S_own, h_own, S_other, h_other, sgn in ((S1, h1, S2, h2, 1), (S2, h2, S1, h1, -1)):
        for c in S_own.cells:
            f = cell_affine(c.polygon, h_own.heights)
            for q in S_other.region.points:
                lq = L[q]
                # first piece cells: f(q) < h2(q) + mu L(q), L(q) > 0
                # second piece cells: f(q) + mu L(q) < h1(q), L(q) < 0
                bound = (_eval(f, q) - Fraction(h_other[q])) / (sgn * lq)
                if bound + 1 > need:
                    need = bound + 1
    return need


def strip_between(
    bottom: Sequence[Point], top: Sequence[Point], heights: Mapping[Point, Fraction]
) -> list[Cell]:
    """Cells filling the strip between two adjacent parallel lattice segments."""
    pts = list(bottom) + list(top)
    region = LatticePolygon(hull_vertices(pts))
    if set(region.points) != set(pts):
        raise ValueError("segments are not on adjacent lattice lines")
    return [Cell(P, shape_tag(P)) for P in induced_subdivision(region, heights)]


# -- complement triangulation ---------------------------------------------


def _segments_cross(p, q, r, s) -> bool:
    """Whether closed primitive segments pq and rs share a point other than a common endpoint."""
    if {p, q} & {r, s}:
        shared = ({p, q} & {r, s}).pop()
        o1 = q if p == shared else p
        o2 = s if r == shared else r
        # overlap only if collinear and pointing the same way
        return cross(shared, o1, o2) == 0 and (o1[0] - shared[0]) * (o2[0] - shared[0]) + (o1[1] - shared[1]) * (o2[1] - shared[1]) > 0
    d1 = cross(r, s, p)
    d2 = cross(r, s, q)
    d3 = cross(p, q, r)
    d4 = cross(p, q, s)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True

    def on(a, b, c):
        return cross(a, b, c) == 0 and min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return (d1 == 0 and on(r, s, p)) or (d2 == 0 and on(r, s, q)) or (d3 == 0 and on(p, q, r)) or (d4 == 0 and on(p, q, s))


def _segment_meets_interior(p, q, P: LatticePolygon) -> bool:
    mid = (Fraction(p[0] + q[0], 2), Fraction(p[1] + q[1], 2))
    if P.contains(mid, strict=True):
        return True
    pa = [(Fraction(p[0]), Fraction(p[1])), (Fraction(q[0]), Fraction(q[1]))]
    # clip the segment against the polygon's open half-planes
    lo, hi = Fraction(0), Fraction(1)
    for a, b in P.edges:
        cp = (b[0] - a[0]) * (pa[0][1] - a[1]) - (b[1] - a[1]) * (pa[0][0] - a[0])
        cq = (b[0] - a[0]) * (pa[1][1] - a[1]) - (b[1] - a[1]) * (pa[1][0] - a[0])
        if cp <= 0 and cq <= 0:
            return False
        if cp > 0 and cq > 0:
            continue
        t = Fraction(cp) / (cp - cq)
        if cp <= 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
        if lo >= hi:
            return False
    return lo < hi


def fill_complement(region: LatticePolygon, occupied: Sequence[LatticePolygon]) -> list[Cell]:
    """Lattice triangles filling region minus the occupied polygons.

    Vertices are all lattice points of the complement.  Occupied edges are
    kept whole, so the lattice points inside them are not vertices: a filler
    triangle next to a longer occupied edge uses the entire edge and stays
    face-to-face with it.  Primitive segments are inserted shortest first
    whenever they cross nothing already placed; the bounded faces of the
    resulting maximal plane graph outside the occupied polygons are the
    filler triangles, unimodular except along longer occupied edges.
    """
    occupied = list(occupied)
    blocked = set()
    placed: list[tuple[Point, Point]] = []
    fixed = set()
    for P in occupied:
        blocked |= {p for p in P.points if p not in P.vertices}
        for u, v in P.edges:
            key = (min(u, v), max(u, v))
            if key not in fixed:
                fixed.add(key)
                placed.append(key)
    for u, v in _unit_segments(region):
        key = (min(u, v), max(u, v))
        if key not in fixed and not any(_on_segment(a, b, u) and _on_segment(a, b, v) for a, b in fixed):
            fixed.add(key)
            placed.append(key)
    verts = [p for p in region.points if p not in blocked]
    from math import gcd

    candidates = []
    for i, p in enumerate(verts):
        for q in verts[i + 1:]:
            if gcd(q[0] - p[0], q[1] - p[1]) != 1:
                continue
            key = (p, q)
            if key in fixed:
                continue
            candidates.append(((q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2, key))
    candidates.sort()
    for _, (p, q) in candidates:
        mid = (Fraction(p[0] + q[0], 2), Fraction(p[1] + q[1], 2))
        if not region.contains(mid):
            continue
        if any(_segment_meets_interior(p, q, P) for P in occupied):
            continue
        if any(_segments_cross(p, q, r, s) for r, s in placed):
            continue
        placed.append((p, q))
    adj: dict[Point, set] = {}
    for p, q in placed:
        adj.setdefault(p, set()).add(q)
        adj.setdefault(q, set()).add(p)
    tris = set()
    for p in adj:
        for q in adj[p]:
            if q <= p:
                continue
            for r in adj[p] & adj[q]:
                if r <= q or cross(p, q, r) == 0:
                    continue
                T = LatticePolygon([p, q, r])
                if any(x not in T.vertices and x not in blocked for x in T.points):
                    continue
                cen = (Fraction(p[0] + q[0] + r[0], 3), Fraction(p[1] + q[1] + r[1], 3))
                if any(P.contains(cen) for P in occupied):
                    continue
                tris.add(T)
    cells = [Cell(T, shape_tag(T)) for T in sorted(tris, key=lambda T: T.vertices)]
    total = sum(T.twice_area for T in occupied) + sum(c.polygon.twice_area for c in cells)
    if total != region.twice_area:
        raise CannotFill(f"complement triangulation covers twice-area {total} of {region.twice_area}")
    return cells


def _on_segment(a: Point, b: Point, c: Point) -> bool:
    return cross(a, b, c) == 0 and min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
