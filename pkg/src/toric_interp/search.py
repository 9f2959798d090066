"""Backtracking search for skew special cells covering a region.

Tiles are all unimodular images, inside the region, of the catalog classes
that become empty after a triple point.  The search is an exact cover over
bitmasks: it branches on the unassigned point with the fewest live tiles,
trying each live tile through it in tile order and then declaring the point
uncovered while the allowance lasts.  Each complete
cover is then tested for regularity by an exact LP and completed by the cells
of the induced lower hull.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .classify import Catalog, unimodular_triangle
from .errors import Infeasible, NotFound
from .lattice import LatticePolygon, Point, _ext_gcd
from .lp import solve_inequalities
from .subdivision import Cell, Lifting, induced_subdivision, shape_tag


@dataclass(frozen=True)
class Tile:
    polygon: LatticePolygon
    class_id: str
    points: frozenset

    @property
    def anchor(self) -> Point:
        return min(self.points)


def enumerate_tiles(region: LatticePolygon, catalog: Catalog) -> list[Tile]:
    """Every image of an empty-class representative lying inside region."""
    pts = region.points
    inside = region.point_set
    x0, y0, x1, y1 = region.bbox
    seen: dict[frozenset, Tile] = {}
    for cls in catalog.empty_classes:
        rep = cls.representative
        a, b, c = unimodular_triangle(rep.points)
        U0 = (b[0] - a[0], b[1] - a[1])
        W0 = (c[0] - a[0], c[1] - a[1])
        d0 = U0[0] * W0[1] - U0[1] * W0[0]
        # inverse of [U0 W0] (columns), integral since d0 = +-1
        inv = ((W0[1] * d0, -W0[0] * d0), (-U0[1] * d0, U0[0] * d0))
        rel = [(v[0] - a[0], v[1] - a[1]) for v in rep.vertices]
        coords = [(inv[0][0] * r[0] + inv[0][1] * r[1], inv[1][0] * r[0] + inv[1][1] * r[1]) for r in rel]
        rel_pts = [(p[0] - a[0], p[1] - a[1]) for p in rep.points]
        coords_pts = [(inv[0][0] * r[0] + inv[0][1] * r[1], inv[1][0] * r[0] + inv[1][1] * r[1]) for r in rel_pts]
        for ap in pts:
            for bp in pts:
                U = (bp[0] - ap[0], bp[1] - ap[1])
                if U == (0, 0) or gcd(U[0], U[1]) != 1:
                    continue
                g, s, t = _ext_gcd(U[0], U[1])
                s, t = s * g, t * g  # s*ux + t*uy = 1
                for sgn in (1, -1):
                    Ws = (-t * sgn, s * sgn)
                    for k in _k_range(ap, Ws, U, x0, y0, x1, y1):
                        W = (Ws[0] + k * U[0], Ws[1] + k * U[1])
                        img = [(ap[0] + u * U[0] + w * W[0], ap[1] + u * U[1] + w * W[1]) for u, w in coords]
                        if not all(region.contains(v) for v in img):
                            continue
                        ipts = frozenset((ap[0] + u * U[0] + w * W[0], ap[1] + u * U[1] + w * W[1]) for u, w in coords_pts)
                        if ipts in seen or not ipts <= inside:
                            continue
                        seen[ipts] = Tile(LatticePolygon(img), cls.id, ipts)
    tiles = list(seen.values())
    tiles.sort(key=lambda t: (-t.polygon.twice_area, t.anchor, t.polygon.vertices))
    return tiles


def _k_range(ap, Ws, U, x0, y0, x1, y1):
    """Integers k with ap + Ws + k U inside the bounding box."""
    lo, hi = -10**9, 10**9
    for base, u, top, bot in ((ap[0] + Ws[0], U[0], x1, x0), (ap[1] + Ws[1], U[1], y1, y0)):
        if u == 0:
            if not bot <= base <= top:
                return range(0)
            continue
        a = (bot - base) / u
        b = (top - base) / u
        if a > b:
            a, b = b, a
        lo = max(lo, -int(-a // 1))
        hi = min(hi, int(b // 1))
    return range(lo, hi + 1)


# -- regularity of a cover -------------------------------------------------


def lift_marked(region: LatticePolygon, tiles: list[Tile], uncovered: list[Point]) -> Lifting:
    """Heights making every tile a cell of the induced regular subdivision.

    Tile i gets an affine function l_i with l_j >= l_i + 1 on the vertices
    of tile j for all i != j; covered points take their own tile's value and
    uncovered points a convex bump above the maximum.  Constraints are added
    lazily, nearby pairs first.
    """
    n = len(tiles)
    if n == 0:
        return Lifting({p: Fraction(p[0] ** 2 + p[1] ** 2) for p in region.points})
    verts = [t.polygon.vertices for t in tiles]

    def row(i, j, v):
        # (l_j - l_i)(v) >= 1 over variables (alpha, beta, gamma) per tile
        r = [0] * (3 * n)
        r[3 * j], r[3 * j + 1], r[3 * j + 2] = v[0], v[1], 1
        r[3 * i], r[3 * i + 1], r[3 * i + 2] = -v[0], -v[1], -1
        return r

    def near(i, j, pad=2):
        a = tiles[i].polygon.bbox
        b = tiles[j].polygon.bbox
        return not (a[2] + pad < b[0] or b[2] + pad < a[0] or a[3] + pad < b[1] or b[3] + pad < a[1])

    active = {(i, j, v) for i in range(n) for j in range(n) if i != j and near(i, j) for v in verts[j]}
    # gauge: l_0 = 0 is fixed by pinning through extra equalities
    while True:
        rows = [row(i, j, v) for i, j, v in sorted(active)]
        A = [r[3:] for r in rows]
        b = [1] * len(rows)
        if not A:
            z = [Fraction(0)] * (3 * n - 3)
        else:
            z = solve_inequalities(A, b)
        coef = [Fraction(0)] * 3 + list(z)
        aff = [(coef[3 * i], coef[3 * i + 1], coef[3 * i + 2]) for i in range(n)]

        def val(i, p):
            f = aff[i]
            return f[0] * p[0] + f[1] * p[1] + f[2]

        violated = set()
        for j in range(n):
            for v in verts[j]:
                lj = val(j, v)
                for i in range(n):
                    if i != j and lj - val(i, v) < 1:
                        violated.add((i, j, v))
        if not violated:
            break
        active |= violated
    # psi_i is convex, zero on tile i and positive off it; F = max_i(l_i + eps psi_i)
    # is convex, agrees with l_i on tile i once eps psi < 1 on the region, and
    # puts every lifted point on the lower hull.
    edges = []
    for v in verts:
        m = len(v)
        fs = []
        for k in range(m):
            p, q = v[k], v[(k + 1) % m]
            fs.append((q[1] - p[1], p[0] - q[0], (q[1] - p[1]) * p[0] + (p[0] - q[0]) * p[1]))
        edges.append(fs)

    def psi(i, p):
        return max([0] + [a * p[0] + b * p[1] - c for a, b, c in edges[i]])

    top = max(psi(i, p) for i in range(n) for p in region.points)
    eps = Fraction(1, 2 * top + 1)
    hs: dict[Point, Fraction] = {}
    for i, t in enumerate(tiles):
        for p in t.points:
            hs[p] = val(i, p)
    for u in uncovered:
        hs[u] = max(val(i, u) + eps * psi(i, u) for i in range(n))
    return Lifting(hs)


def integral_lifting(h: Lifting) -> Lifting:
    """Positive multiple of h plus a constant, with integer heights >= 1."""
    den = 1
    for v in h.heights.values():
        den = den * v.denominator // gcd(den, v.denominator)
    scaled = {p: v * den for p, v in h.heights.items()}
    low = min(scaled.values())
    return Lifting({p: Fraction(v - low + 1) for p, v in sorted(scaled.items())})


def cells_from_cover(region: LatticePolygon, tiles: list[Tile], h: Lifting) -> tuple[list[Cell], list[int]]:
    """Cells of the induced subdivision with the tiles tagged special, plus their indices."""
    faces = induced_subdivision(region, h.heights)
    by_vertices = {t.polygon.vertices: t for t in tiles}
    cells = []
    marked = []
    for P in faces:
        t = by_vertices.get(P.vertices)
        if t is not None:
            marked.append(len(cells))
            cells.append(Cell(P, "special", t.class_id))
        else:
            cells.append(Cell(P, shape_tag(P)))
    if len(marked) != len(tiles):
        raise Infeasible("a marked tile is not a cell of the induced subdivision")
    return cells, marked


# -- depth-first exact cover ---------------------------------------------


@dataclass
class SearchStats:
    tiles: int = 0
    nodes: int = 0
    covers: int = 0
    irregular_covers: int = 0
    seconds: float = 0.0
    exhausted: bool = False

    def to_json(self) -> dict:
        return {
            "tiles": self.tiles,
            "nodes": self.nodes,
            "covers": self.covers,
            "irregular_covers": self.irregular_covers,
            "seconds": round(self.seconds, 3),
            "exhausted": self.exhausted,
        }


@dataclass
class SearchResult:
    tiles: list[Tile]
    uncovered: list[Point]
    lifting: Lifting
    cells: list[Cell]
    marked: list[int]
    stats: SearchStats = field(default_factory=SearchStats)


class _Budget(Exception):
    pass


def _edges_cross(A: tuple, B: tuple) -> bool:
    """Proper crossing between some edge of A and some edge of B."""
    na, nb = len(A), len(B)
    for i in range(na):
        p1 = A[i]
        p2 = A[(i + 1) % na]
        dx, dy = p2[0] - p1[0], p2[1] - p1[1]
        for j in range(nb):
            q1 = B[j]
            q2 = B[(j + 1) % nb]
            o1 = dx * (q1[1] - p1[1]) - dy * (q1[0] - p1[0])
            o2 = dx * (q2[1] - p1[1]) - dy * (q2[0] - p1[0])
            if (o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0):
                ex, ey = q2[0] - q1[0], q2[1] - q1[1]
                o3 = ex * (p1[1] - q1[1]) - ey * (p1[0] - q1[0])
                o4 = ex * (p2[1] - q1[1]) - ey * (p2[0] - q1[0])
                if (o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0):
                    return True
    return False


# Crossing depends only on the two shapes and their offset; shared across searches.
_SHAPES: dict[tuple, int] = {}
_CROSSINGS: dict[tuple, bool] = {}


class _ConflictTable:
    """Lazily computed bitmask of tiles that meet a given tile as closed sets.

    Tiles sharing a lattice point meet.  Lattice polygons with disjoint
    point sets meet only where two edges cross properly, since a vertex of
    one lying in the other would be a shared lattice point.
    """

    def __init__(self, tiles: list[Tile], tile_masks: list[int], containing: list[int], squares: dict, tile_squares: list):
        self.tiles = tiles
        self.masks = tile_masks
        self.containing = containing
        self.squares = squares
        self.tile_squares = tile_squares
        self.verts = [t.polygon.vertices for t in tiles]
        self.origin = [v[0] for v in self.verts]
        self.shape = []
        for v in self.verts:
            o = v[0]
            key = tuple((p[0] - o[0], p[1] - o[1]) for p in v)
            self.shape.append(_SHAPES.setdefault(key, len(_SHAPES)))
        self.cache: dict[int, int] = {}

    def get(self, ti: int) -> int:
        got = self.cache.get(ti)
        if got is not None:
            return got
        sharing = 0
        m = self.masks[ti]
        while m:
            low = m & -m
            sharing |= self.containing[low.bit_length() - 1]
            m ^= low
        near = 0
        for sq in self.tile_squares[ti]:
            near |= self.squares[sq]
        rest = near & ~sharing
        A = self.verts[ti]
        si = self.shape[ti]
        ox, oy = self.origin[ti]
        got = sharing
        while rest:
            low = rest & -rest
            tj = low.bit_length() - 1
            rest ^= low
            o = self.origin[tj]
            key = (si, self.shape[tj], o[0] - ox, o[1] - oy)
            hit = _CROSSINGS.get(key)
            if hit is None:
                hit = _CROSSINGS[key] = _edges_cross(A, self.verts[tj])
            if hit:
                got |= low
        self.cache[ti] = got
        return got


def _unit_squares(P: LatticePolygon) -> list[tuple[int, int]]:
    """Unit squares [x, x+1] x [y, y+1] whose interior meets the interior of P.

    Near a proper crossing of an edge of A with an edge of B both interiors
    contain a common open set, which meets the interior of some unit square.
    """
    x0, y0, x1, y1 = P.bbox
    v = P.vertices
    n = len(v)
    normals = []
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        nx, ny = b[1] - a[1], a[0] - b[0]  # outward for counter-clockwise order
        normals.append((nx, ny, nx * a[0] + ny * a[1]))
    out = []
    for x in range(x0, x1):
        for y in range(y0, y1):
            # square and polygon are convex: interiors meet unless some edge
            # line of P has the whole square on its outer closed side
            ok = True
            for nx, ny, c in normals:
                low = nx * x + ny * y + min(nx, 0) + min(ny, 0)
                if low >= c:
                    ok = False
                    break
            if ok:
                out.append((x, y))
    return out


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def search_cover(
    region: LatticePolygon,
    n_special: int,
    catalog: Catalog,
    budget: int = 10_000_000,
    tiles: list[Tile] | None = None,
) -> SearchResult:
    """First regular cover of region by n_special skew tiles, in search order."""
    t0 = time.perf_counter()
    pts = list(region.points)
    total = len(pts)
    e_total = total - 6 * n_special
    stats = SearchStats()
    if n_special < 0 or e_total < 0:
        stats.exhausted = True
        raise NotFound(f"{n_special} special cells need {6 * n_special} points; region has {total}", stats.to_json())
    if tiles is None:
        tiles = enumerate_tiles(region, catalog)
    stats.tiles = len(tiles)
    index = {p: k for k, p in enumerate(pts)}
    # Bit t of a tile mask is tile t; bit k of a point mask is point k.
    tile_pts = [sorted(index[p] for p in t.points) for t in tiles]
    point_masks = [sum(1 << k for k in tp) for tp in tile_pts]
    containing = [0] * total
    for ti, tp in enumerate(tile_pts):
        for k in tp:
            containing[k] |= 1 << ti
    # Two tiles can cross only inside a unit square whose interior both meet.
    squares: dict = {}
    tile_squares = []
    for ti, t in enumerate(tiles):
        sq = _unit_squares(t.polygon)
        tile_squares.append(sq)
        for s in sq:
            squares[s] = squares.get(s, 0) | (1 << ti)
    table = _ConflictTable(tiles, point_masks, containing, squares, tile_squares)

    chosen: list[int] = []
    uncovered: list[int] = []
    result: list = []

    def attempt_leaf():
        stats.covers += 1
        used = [tiles[i] for i in chosen]
        unc = [pts[k] for k in uncovered]
        try:
            h = integral_lifting(lift_marked(region, used, unc))
            cells, marked = cells_from_cover(region, used, h)
        except Infeasible:
            stats.irregular_covers += 1
            return False
        result.append(SearchResult(used, sorted(unc), h, cells, marked, stats))
        return True

    def dfs(free, dead, e_left):
        # free: unassigned points; dead: tiles meeting a chosen tile or an
        # uncovered point.
        stats.nodes += 1
        if stats.nodes > budget:
            raise _Budget
        if not free:
            return attempt_leaf()
        # Every remaining point needs a live tile except for e_left of them.
        # Branch on the point with fewest live tiles (lowest index on ties).
        zeros = 0
        k = -1
        best = None
        for q in _bits(free):
            c = containing[q] & ~dead
            n = c.bit_count()
            if n == 0:
                zeros += 1
                if zeros > e_left:
                    return False
            if best is None or n < best:
                best, k = n, q
        live = containing[k] & ~dead
        for ti in _bits(live):
            m = point_masks[ti]
            chosen.append(ti)
            if dfs(free & ~m, dead | table.get(ti), e_left):
                return True
            chosen.pop()
        if e_left > 0:
            uncovered.append(k)
            if dfs(free & ~(1 << k), dead | containing[k], e_left - 1):
                return True
            uncovered.pop()
        return False

    try:
        found = dfs((1 << total) - 1, 0, e_total)
    except _Budget:
        stats.seconds = time.perf_counter() - t0
        raise NotFound(f"node budget {budget} exhausted", stats.to_json())
    stats.seconds = time.perf_counter() - t0
    if not found:
        stats.exhausted = True
        raise NotFound("no regular cover exists", stats.to_json())
    res = result[0]
    res.stats = stats
    return res
