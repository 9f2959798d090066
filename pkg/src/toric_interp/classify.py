"""Classification of convex lattice polygons by their number of lattice points.

Classes are grown one lattice point at a time: removing a vertex from a
lattice-convex set leaves a lattice-convex set, so every class with k + 1
points extends some class with k points (or the k-point segment).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NotInCatalog
from .fatpoints import triple_conditions_full_rank
from .lattice import LatticePolygon, Point, canonical_form, hull_vertices, lattice_length, pick_data


@dataclass(frozen=True)
class PolygonClass:
    id: str
    representative: LatticePolygon
    max_edge_points: int
    edge_count: int
    empty_after_triple: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "vertices": self.representative.to_json(),
            "m": self.max_edge_points,
            "n": self.edge_count,
            "empty": self.empty_after_triple,
        }


@dataclass(frozen=True)
class Catalog:
    classes: tuple[PolygonClass, ...]
    n_points: int
    box: int
    count_at_smaller_box: int
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {c.representative: c for c in self.classes})

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def by_id(self, cid: str) -> PolygonClass:
        for c in self.classes:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def empty_classes(self) -> list[PolygonClass]:
        return [c for c in self.classes if c.empty_after_triple]

    @property
    def nonempty_classes(self) -> list[PolygonClass]:
        return [c for c in self.classes if not c.empty_after_triple]

    def lookup(self, P: LatticePolygon) -> PolygonClass | None:
        return self._index.get(canonical_form(P))

    def to_json(self) -> dict:
        return {
            "points": self.n_points,
            "box": self.box,
            "count": len(self.classes),
            "count_at_smaller_box": self.count_at_smaller_box,
            "classes": [c.to_json() for c in self.classes],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def match_class(P: LatticePolygon, catalog: Catalog) -> PolygonClass:
    found = catalog.lookup(P)
    if found is None:
        raise NotInCatalog(f"{P} ({len(P.points)} points) matches no class of the {catalog.n_points}-point catalog")
    return found


def unimodular_triangle(pts) -> tuple[Point, Point, Point]:
    """Three lattice points of the collection spanning a unimodular triangle."""
    pts = sorted(pts)
    for i, a in enumerate(pts):
        for j in range(i + 1, len(pts)):
            b = pts[j]
            for c in pts[j + 1:]:
                if abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) == 1:
                    return a, b, c
    raise ValueError("no unimodular triangle: points do not span the lattice")


def _point_count(verts) -> int:
    n = len(verts)
    if n < 3:
        if n == 1:
            return 1
        return lattice_length(verts[0], verts[1]) + 1
    a2 = sum(verts[i][0] * verts[(i + 1) % n][1] - verts[(i + 1) % n][0] * verts[i][1] for i in range(n))
    b = sum(lattice_length(verts[i], verts[(i + 1) % n]) for i in range(n))
    return (abs(a2) + b + 2) // 2


def _extensions(P: LatticePolygon) -> set[LatticePolygon]:
    """Canonical forms of lattice-convex sets P + {p} with one more point."""
    k = len(P.points)
    u, v, w = unimodular_triangle(P.points)
    e1 = (v[0] - u[0], v[1] - u[1])
    e2 = (w[0] - u[0], w[1] - u[1])
    # Any new point p = u + s*e1 + t*e2 spans triangles of twice-area |s|, |t|
    # with points of P, and twice the area of the result is at most 2k.
    bound = 2 * k
    out = set()
    verts = list(P.vertices)
    for s in range(-bound, bound + 1):
        for t in range(-bound, bound + 1):
            p = (u[0] + s * e1[0] + t * e2[0], u[1] + s * e1[1] + t * e2[1])
            if p in P.point_set:
                continue
            hv = hull_vertices(verts + [p])
            if _point_count(hv) == k + 1:
                out.add(canonical_form(LatticePolygon(hv)))
    return out


@lru_cache(maxsize=None)
def lattice_convex_classes(n_points: int) -> tuple[LatticePolygon, ...]:
    """Canonical forms of all 2-dimensional classes with ``n_points`` points."""
    if n_points < 3:
        return ()
    if n_points == 3:
        return (canonical_form(LatticePolygon([(0, 0), (1, 0), (0, 1)])),)
    found = set()
    for P in lattice_convex_classes(n_points - 1):
        found |= _extensions(P)
    # The (n-1)-point segment plus one point at lattice distance one.
    found.add(canonical_form(LatticePolygon([(0, 0), (n_points - 2, 0), (0, 1)])))
    return tuple(sorted(found, key=lambda Q: Q.vertices))


def fits_in_box(P: LatticePolygon, box: int) -> bool:
    """Whether some unimodular image of P lies in [0, box]^2."""
    u, v, w = unimodular_triangle(P.points)
    e1 = (v[0] - u[0], v[1] - u[1])
    e2 = (w[0] - u[0], w[1] - u[1])
    det = e1[0] * e2[1] - e1[1] * e2[0]
    functionals = []
    for s in range(-box, box + 1):
        for t in range(0, box + 1):
            # Solve f . e1 = s, f . e2 = t for the integer functional f.
            fx = (s * e2[1] - t * e1[1]) * det
            fy = (t * e1[0] - s * e2[0]) * det
            if (fx, fy) == (0, 0):
                continue
            vals = [fx * p[0] + fy * p[1] for p in P.vertices]
            if max(vals) - min(vals) <= box:
                functionals.append((fx, fy))
    for i, f in enumerate(functionals):
        for g in functionals[i:]:
            if abs(f[0] * g[1] - f[1] * g[0]) == 1:
                return True
    return False


def _class_sort_key(empty: bool, P: LatticePolygon):
    m = max(P.edge_lattice_lengths()) + 1
    return (not empty, -m, len(P.vertices), P.vertices)


def enumerate_classes(n_points: int, box: int) -> Catalog:
    """All classes with ``n_points`` lattice points having a representative in
    [0, box]^2, with stable ids (E* empty after a triple point, N* otherwise)."""
    if n_points < 3 or box < 1:
        raise ValueError("need n_points >= 3 and box >= 1")
    reps = [P for P in lattice_convex_classes(n_points) if fits_in_box(P, box)]
    smaller = sum(1 for P in reps if fits_in_box(P, box - 1)) if box > 1 else 0
    flagged = sorted(((triple_conditions_full_rank(P), P) for P in reps), key=lambda t: _class_sort_key(*t))
    classes = []
    counters = {True: 0, False: 0}
    for empty, P in flagged:
        counters[empty] += 1
        cid = f"{'E' if empty else 'N'}{counters[empty]}"
        classes.append(PolygonClass(cid, P, max(P.edge_lattice_lengths()) + 1, len(P.vertices), empty))
    return Catalog(tuple(classes), n_points, box, smaller)


@lru_cache(maxsize=None)
def default_catalog() -> Catalog:
    return enumerate_classes(6, 8)


def describe(P: LatticePolygon) -> dict:
    pd = pick_data(P)
    return {"B": pd.boundary_count, "I": pd.interior_count, "2A": pd.twice_area}
