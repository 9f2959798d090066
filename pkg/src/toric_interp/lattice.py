"""Exact lattice geometry in the plane.

Points are plain ``(x, y)`` integer tuples.  Polygons are immutable and keep
their vertices counter-clockwise, starting from the lexicographically smallest
vertex, so two equal polygons compare equal as values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DimensionTooLow, NotUnimodular, ToricError

Point = tuple[int, int]


def cross(o: Point, a: Point, b: Point) -> int:
    """Twice the signed area of the triangle (o, a, b)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> "LatticePolygon":
    """Smallest convex lattice polygon containing ``points``.

    Collinear boundary points are dropped from the vertex list.  Raises
    DimensionTooLow when the points do not span the plane.
    """
    verts = hull_vertices(points)
    if len(verts) < 3:
        raise DimensionTooLow(f"points span dimension < 2: {sorted(set(points))}")
    return LatticePolygon(verts)


def hull_vertices(points: Iterable[Point]) -> list[Point]:
    # Andrew's monotone chain, integer arithmetic only.
    pts = sorted(set((int(p[0]), int(p[1])) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def lattice_length(a: Point, b: Point) -> int:
    return math.gcd(b[0] - a[0], b[1] - a[1])


def segment_points(a: Point, b: Point) -> list[Point]:
    """Lattice points on the closed segment from a to b, in order."""
    g = lattice_length(a, b)
    if g == 0:
        return [a]
    dx, dy = (b[0] - a[0]) // g, (b[1] - a[1]) // g
    return [(a[0] + k * dx, a[1] + k * dy) for k in range(g + 1)]


@dataclass(frozen=True)
class PickData:
    boundary_count: int
    interior_count: int
    twice_area: int

    @property
    def total(self) -> int:
        return self.boundary_count + self.interior_count


@dataclass(frozen=True, eq=True)
class LatticePolygon:
    """A strictly convex lattice polygon with positive area."""

    vertices: tuple[Point, ...]

    def __init__(self, vertices: Sequence[Sequence[int]]):
        verts = [(int(v[0]), int(v[1])) for v in vertices]
        if len(verts) < 3:
            raise DimensionTooLow(f"a polygon needs at least 3 vertices, got {verts}")
        area2 = sum(cross((0, 0), verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts)))
        if area2 == 0:
            raise DimensionTooLow(f"degenerate polygon {verts}")
        if area2 < 0:
            verts.reverse()
        n = len(verts)
        for i in range(n):
            if cross(verts[i - 1], verts[i], verts[(i + 1) % n]) <= 0:
                raise ToricError(f"vertices are not strictly convex at {verts[i]}: {verts}")
        k = verts.index(min(verts))
        verts = verts[k:] + verts[:k]
        # Left turns everywhere still allow a star polygon winding twice.
        if verts != hull_vertices(verts):
            raise ToricError(f"vertex list is not a simple convex polygon: {verts}")
        object.__setattr__(self, "vertices", tuple(verts))

    def __repr__(self) -> str:
        return f"LatticePolygon({[list(v) for v in self.vertices]})"

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @cached_property
    def twice_area(self) -> int:
        v = self.vertices
        return sum(cross((0, 0), v[i], v[(i + 1) % len(v)]) for i in range(len(v)))

    @cached_property
    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def contains(self, p: Sequence, strict: bool = False) -> bool:
        """Point-in-polygon test; ``p`` may have rational coordinates."""
        for a, b in self.edges:
            c = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if c < 0 or (strict and c == 0):
                return False
        return True

    @cached_property
    def points(self) -> tuple[Point, ...]:
        """All enclosed lattice points, sorted lexicographically."""
        x0, y0, x1, y1 = self.bbox
        edges = [(a, b[0] - a[0], b[1] - a[1]) for a, b in self.edges]
        out = []
        for x in range(x0, x1 + 1):
            for y in range(y0, y1 + 1):
                if all(dx * (y - a[1]) - dy * (x - a[0]) >= 0 for a, dx, dy in edges):
                    out.append((x, y))
        return tuple(out)

    @cached_property
    def point_set(self) -> frozenset:
        return frozenset(self.points)

    @cached_property
    def boundary_points(self) -> tuple[Point, ...]:
        """Boundary lattice points in counter-clockwise order from vertices[0]."""
        out: list[Point] = []
        for a, b in self.edges:
            out.extend(segment_points(a, b)[:-1])
        return tuple(out)

    def edge_lattice_lengths(self) -> list[int]:
        return [lattice_length(a, b) for a, b in self.edges]

    def to_json(self) -> list[list[int]]:
        return [list(v) for v in self.vertices]


def enclosed_points(P: LatticePolygon) -> list[Point]:
    return list(P.points)


def pick_data(P: LatticePolygon) -> PickData:
    b = sum(P.edge_lattice_lengths())
    a2 = P.twice_area
    interior = (a2 - b + 2) // 2
    return PickData(boundary_count=b, interior_count=interior, twice_area=a2)


@dataclass(frozen=True)
class UnimodularAffineMap:
    """p -> M p + t with M in GL2(Z)."""

    m11: int
    m12: int
    m21: int
    m22: int
    tx: int = 0
    ty: int = 0

    def __post_init__(self):
        if self.det not in (1, -1):
            raise NotUnimodular(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.m11 * self.m22 - self.m12 * self.m21

    @classmethod
    def identity(cls) -> "UnimodularAffineMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, tx: int, ty: int) -> "UnimodularAffineMap":
        return cls(1, 0, 0, 1, tx, ty)

    def __call__(self, p: Sequence[int]) -> Point:
        x, y = p
        return (self.m11 * x + self.m12 * y + self.tx, self.m21 * x + self.m22 * y + self.ty)

    def map_rational(self, p: Sequence) -> tuple:
        x, y = p
        return (self.m11 * x + self.m12 * y + self.tx, self.m21 * x + self.m22 * y + self.ty)

    def compose(self, other: "UnimodularAffineMap") -> "UnimodularAffineMap":
        """self after other."""
        a = self
        b = other
        return UnimodularAffineMap(
            a.m11 * b.m11 + a.m12 * b.m21,
            a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21,
            a.m21 * b.m12 + a.m22 * b.m22,
            a.m11 * b.tx + a.m12 * b.ty + a.tx,
            a.m21 * b.tx + a.m22 * b.ty + a.ty,
        )

    def inverse(self) -> "UnimodularAffineMap":
        d = self.det
        i11, i12, i21, i22 = self.m22 * d, -self.m12 * d, -self.m21 * d, self.m11 * d
        return UnimodularAffineMap(
            i11, i12, i21, i22,
            -(i11 * self.tx + i12 * self.ty),
            -(i21 * self.tx + i22 * self.ty),
        )

    def to_json(self) -> list[int]:
        return [self.m11, self.m12, self.m21, self.m22, self.tx, self.ty]


def apply_map(g: UnimodularAffineMap, P: LatticePolygon) -> LatticePolygon:
    return LatticePolygon([g(v) for v in P.vertices])


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def frame_to_x_axis(origin: Point, direction: Point) -> UnimodularAffineMap:
    """Orientation preserving map sending ``origin`` to (0,0) and the
    primitive vector ``direction`` to (1, 0)."""
    ux, uy = direction
    g, a, b = _ext_gcd(ux, uy)
    if g != 1:
        raise ToricError(f"direction {direction} is not primitive")
    lin = UnimodularAffineMap(a, b, -uy, ux)
    return UnimodularAffineMap.translation(*(-c for c in lin(origin))).compose(lin)


@dataclass(frozen=True)
class StandardPosition:
    polygon: LatticePolygon
    m: int
    p: int
    q: int
    transform: UnimodularAffineMap

    @property
    def edge_points(self) -> int:
        """Lattice points on the longest edge (the count used for m in the catalog)."""
        return self.m + 1


def _standard_at(P: LatticePolygon, i: int) -> StandardPosition:
    # Edge i runs from vertices[i] to vertices[i+1]; the polygon lies to its left.
    v = P.vertices
    a, b = v[i], v[(i + 1) % len(v)]
    m = lattice_length(a, b)
    g = frame_to_x_axis(a, ((b[0] - a[0]) // m, (b[1] - a[1]) // m))
    prev = g(v[i - 1])
    k = lattice_length((0, 0), prev)
    s, q = prev[0] // k, prev[1] // k
    shift = s // q
    shear = UnimodularAffineMap(1, -shift, 0, 1)
    g = shear.compose(g)
    return StandardPosition(apply_map(g, P), m, s - shift * q, q, g)


_REFLECT = UnimodularAffineMap(-1, 0, 0, 1)


def standard_positions(P: LatticePolygon) -> list[StandardPosition]:
    """Every standard position over longest edges, endpoints and reflections."""
    out = []
    for Q, pre in ((P, UnimodularAffineMap.identity()), (apply_map(_REFLECT, P), _REFLECT)):
        lengths = Q.edge_lattice_lengths()
        top = max(lengths)
        for i, ell in enumerate(lengths):
            if ell == top:
                sp = _standard_at(Q, i)
                out.append(StandardPosition(sp.polygon, sp.m, sp.p, sp.q, sp.transform.compose(pre)))
    return out


def normalize_standard(P: LatticePolygon) -> StandardPosition:
    """Standard position: origin vertex, longest edge on the positive x-axis,
    adjacent edge direction (p, q) with 0 <= p < q."""
    lengths = P.edge_lattice_lengths()
    return _standard_at(P, lengths.index(max(lengths)))


def canonical_form(P: LatticePolygon) -> LatticePolygon:
    return min((sp.polygon for sp in standard_positions(P)), key=lambda Q: Q.vertices)


def canonical_map(P: LatticePolygon) -> UnimodularAffineMap:
    """A map g with g(P) == canonical_form(P)."""
    return min(standard_positions(P), key=lambda sp: sp.polygon.vertices).transform


def line_is_lattice_free(a: int, b: int, c: int, pts: Iterable[Point]) -> bool:
    if a == 0 and b == 0:
        raise ToricError("line coefficients (a, b) must not both vanish")
    return all(a * x + b * y + c != 0 for x, y in pts)


def triangle(d: int) -> LatticePolygon:
    """T(d) = hull{(0,0), (d,0), (0,d)}."""
    return LatticePolygon([(0, 0), (d, 0), (0, d)])


def rectangle(a: int, b: int) -> LatticePolygon:
    """R(a,b) = hull{(0,0), (a,0), (a,b), (0,b)}."""
    return LatticePolygon([(0, 0), (a, 0), (a, b), (0, b)])


def parse_polygon_literal(text: str) -> LatticePolygon:
    """Polygon from the literal "[[x1,y1],[x2,y2],...]"."""
    try:
        data = json.loads(text)
        pts = [(p[0], p[1]) for p in data]
    except (ValueError, TypeError, IndexError, KeyError) as exc:
        raise ToricError(f"not a polygon literal: {text!r}") from exc
    if any(len(p) != 2 for p in data) or not all(isinstance(v, int) and not isinstance(v, bool) for p in pts for v in p):
        raise ToricError(f"polygon vertices must be integer pairs: {text!r}")
    return LatticePolygon(pts)
