"""Degeneration certificates: verification, transformation and assembly.

A certificate subdivides a region into cells, marks pairwise disjoint
special cells that each carry one general triple point, and lists the lattice
points the marked cells leave uncovered.  A valid certificate with e uncovered
points bounds the dimension of the system by e - 1 (semicontinuity).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Any, Sequence

from .classify import Catalog, default_catalog
from .errors import (
    AssemblyFailed,
    Infeasible,
    InvalidReport,
    LiftingFailed,
    MalformedCertificate,
    NotCovered,
    NotFound,
    ToricError,
    WidthMismatch,
)
from .fatpoints import SystemSpec, vdim_polygon
from .lattice import LatticePolygon, Point, UnimodularAffineMap, apply_map, rectangle, triangle
from .subdivision import (
    Cell,
    Lifting,
    Subdivision,
    check_lifting,
    closed_disjoint,
    find_lifting,
    separating_lift,
    shape_tag,
    validate_subdivision,
)


@dataclass(frozen=True)
class Region:
    kind: str
    params: tuple

    @classmethod
    def triangle(cls, d: int) -> "Region":
        return cls("triangle", (d,))

    @classmethod
    def rectangle(cls, a: int, b: int) -> "Region":
        return cls("rectangle", (a, b))

    @classmethod
    def from_polygon(cls, P: LatticePolygon) -> "Region":
        v = P.vertices
        if len(v) == 3 and v[0] == (0, 0):
            d = v[1][0]
            if d > 0 and v[1] == (d, 0) and v[2] == (0, d):
                return cls.triangle(d)
        if len(v) == 4 and v[0] == (0, 0):
            a, b = v[2]
            if v[1] == (a, 0) and v[3] == (0, b):
                return cls.rectangle(a, b)
        return cls("polygon", tuple(v))

    @property
    def polygon(self) -> LatticePolygon:
        if self.kind == "triangle":
            return triangle(self.params[0])
        if self.kind == "rectangle":
            return rectangle(*self.params)
        return LatticePolygon(self.params)

    @property
    def label(self) -> str:
        if self.kind == "triangle":
            return f"T({self.params[0]})"
        if self.kind == "rectangle":
            return f"R({self.params[0]},{self.params[1]})"
        return f"polygon{[list(v) for v in self.params]}"

    def to_json(self) -> dict:
        if self.kind == "triangle":
            return {"type": "triangle", "d": self.params[0]}
        if self.kind == "rectangle":
            return {"type": "rectangle", "a": self.params[0], "b": self.params[1]}
        return {"type": "polygon", "vertices": [list(v) for v in self.params]}

    @classmethod
    def from_json(cls, data: dict) -> "Region":
        kind = data.get("type")
        if kind == "triangle":
            return cls.triangle(_int(data["d"]))
        if kind == "rectangle":
            return cls.rectangle(_int(data["a"]), _int(data["b"]))
        if kind == "polygon":
            return cls("polygon", tuple(LatticePolygon(data["vertices"]).vertices))
        raise MalformedCertificate(f"unknown region type {kind!r}")


def _int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise MalformedCertificate(f"expected an integer, got {v!r}")
    return v


def _point(v) -> Point:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise MalformedCertificate(f"expected a point [x, y], got {v!r}")
    return _int(v[0]), _int(v[1])


@dataclass
class DegenCertificate:
    region: Region
    cells: list[Cell]
    marked: list[int]
    uncovered: list[Point]
    lifting: Lifting | None = None
    meta: dict = field(default_factory=dict)

    @property
    def subdivision(self) -> Subdivision:
        return Subdivision(self.region.polygon, self.cells)

    @property
    def r(self) -> int:
        return len(self.marked)

    @property
    def e(self) -> int:
        return len(self.uncovered)

    def to_json(self) -> dict:
        cells = []
        for c in self.cells:
            item: dict[str, Any] = {"vertices": c.polygon.to_json(), "tag": c.tag}
            if c.class_id is not None:
                item["class"] = c.class_id
            cells.append(item)
        out: dict[str, Any] = {
            "region": self.region.to_json(),
            "cells": cells,
            "marked": list(self.marked),
            "uncovered": [list(p) for p in self.uncovered],
        }
        if self.lifting is not None:
            out["lifting"] = self.lifting.to_json()
        out["meta"] = dict(self.meta)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=False) + "\n"

    @classmethod
    def from_json(cls, data: Any) -> "DegenCertificate":
        try:
            if not isinstance(data, dict):
                raise MalformedCertificate("certificate must be a JSON object")
            region = Region.from_json(data["region"])
            cells = []
            for item in data["cells"]:
                tag = item["tag"]
                cls_id = item.get("class")
                cells.append(Cell(LatticePolygon([_point(v) for v in item["vertices"]]), tag, cls_id))
            marked = [_int(i) for i in data.get("marked", [])]
            uncovered = [_point(p) for p in data.get("uncovered", [])]
            lifting = Lifting.from_json(data["lifting"]) if data.get("lifting") is not None else None
            meta = data.get("meta", {})
            if not isinstance(meta, dict):
                raise MalformedCertificate("meta must be an object")
        except MalformedCertificate:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError, ToricError) as exc:
            raise MalformedCertificate(f"malformed certificate: {exc}") from exc
        return cls(region, cells, marked, uncovered, lifting, meta)

    @classmethod
    def loads(cls, text: str) -> "DegenCertificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedCertificate(f"invalid JSON: {exc}") from exc
        return cls.from_json(data)


@dataclass
class VerificationReport:
    valid: bool
    failures: list[str]
    special_count: int
    uncovered_count: int
    dim_upper_bound: int
    regularity: str
    region_points: int
    details: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "failures": list(self.failures),
            "r": self.special_count,
            "e": self.uncovered_count,
            "dim_upper_bound": self.dim_upper_bound,
            "regularity": self.regularity,
            "region_points": self.region_points,
            "details": list(self.details),
        }


def verify_certificate(cert: DegenCertificate, catalog: Catalog | None = None) -> VerificationReport:
    """Check a certificate: tiling, special classes, skewness, cover, regularity."""
    catalog = catalog or default_catalog()
    failures: list[str] = []
    details: list[str] = []
    R = cert.region.polygon
    S = Subdivision(R, cert.cells)

    sub = validate_subdivision(S)
    if not sub:
        failures.append("subdivision")
        details.extend(sub.reasons[:5])
    for i, c in enumerate(cert.cells):
        if c.tag == "plane" and c.polygon.twice_area != 1:
            failures.append("tag")
            details.append(f"cell {i} tagged plane is not a unimodular triangle")
        elif c.tag == "quadric" and shape_tag(c.polygon) != "quadric":
            failures.append("tag")
            details.append(f"cell {i} tagged quadric is not a unit parallelogram")

    marked_ok = []
    if len(set(cert.marked)) != len(cert.marked):
        failures.append("marked")
        details.append("a cell is marked twice")
    for i in cert.marked:
        if not 0 <= i < len(cert.cells):
            failures.append("marked")
            details.append(f"marked index {i} out of range")
            continue
        c = cert.cells[i]
        if c.tag != "special":
            failures.append("marked")
            details.append(f"marked cell {i} is tagged {c.tag}")
            continue
        found = catalog.lookup(c.polygon) if len(c.polygon.points) == catalog.n_points else None
        if found is None or not found.empty_after_triple:
            failures.append("class")
            details.append(f"marked cell {i} is not in an empty-after-triple class")
        elif found.id != c.class_id:
            failures.append("class")
            details.append(f"marked cell {i} is class {found.id}, labelled {c.class_id}")
        marked_ok.append(i)

    polys = [cert.cells[i].polygon for i in cert.marked if 0 <= i < len(cert.cells)]
    for a in range(len(polys)):
        for b in range(a + 1, len(polys)):
            if not closed_disjoint(polys[a], polys[b]):
                failures.append("skew")
                details.append(f"marked cells {cert.marked[a]} and {cert.marked[b]} meet")
                break
        else:
            continue
        break

    region_pts = R.point_set
    seen: dict[Point, int] = {}
    overlap = False
    for P in polys:
        for p in P.points:
            if p in seen:
                overlap = True
            seen[p] = seen.get(p, 0) + 1
    for u in cert.uncovered:
        if u in seen:
            overlap = True
        seen[u] = seen.get(u, 0) + 1
    if overlap or set(seen) != set(region_pts):
        failures.append("cover")
        missing = len(region_pts - set(seen))
        extra = len(set(seen) - region_pts)
        details.append(f"cover: {missing} points missing, {extra} outside the region, overlaps={overlap}")

    regularity = "skipped"
    if sub:
        if cert.lifting is not None:
            extra_pts = set(cert.lifting.heights) - region_pts
            chk = check_lifting(S, cert.lifting)
            if chk and not extra_pts:
                regularity = "given-lifting-checked"
            else:
                regularity = "infeasible"
                failures.append("lifting")
                details.extend(chk.reasons[:3] or [f"{len(extra_pts)} heights outside the region"])
        else:
            try:
                find_lifting(S)
                regularity = "lp-found"
            except Infeasible as exc:
                regularity = "infeasible"
                failures.append("regularity")
                details.append(str(exc))
            except ValueError as exc:
                regularity = "infeasible"
                failures.append("regularity")
                details.append(str(exc))

    fails = list(dict.fromkeys(failures))
    e = len(cert.uncovered)
    return VerificationReport(not fails, fails, len(cert.marked), e, e - 1, regularity, len(region_pts), details)


@dataclass
class Conclusion:
    statements: list[str]
    upper_bound: int
    virtual: int
    expected: int
    empty: bool
    expected_attained: bool

    def __str__(self) -> str:
        return "; ".join(self.statements)

    def to_json(self) -> dict:
        return {
            "statements": self.statements,
            "upper_bound": self.upper_bound,
            "virtual": self.virtual,
            "expected": self.expected,
            "empty": self.empty,
            "expected_attained": self.expected_attained,
        }


def conclude_dimension(report: VerificationReport, spec: SystemSpec) -> Conclusion:
    """What a valid certificate proves about the system with r triple points."""
    if not report.valid:
        raise InvalidReport("cannot conclude from an invalid certificate: " + ", ".join(report.failures))
    if spec.r != report.special_count or any(m != 3 for m in spec.multiplicities):
        raise InvalidReport(f"certificate carries {report.special_count} triple points; system asks for {list(spec.multiplicities)}")
    if spec.polygon is not None:
        v, ex = vdim_polygon(spec.polygon, spec.multiplicities)
    else:
        v = report.region_points - 1 - 6 * spec.r
        ex = max(v, -1)
    e = report.uncovered_count
    bound = e - 1
    statements = [f"dim L <= {bound} for {spec.r} general triple points on this surface"]
    attained = v == bound
    if e == 0:
        statements.insert(0, "L is empty")
    if attained:
        statements.append(f"dim L = {ex}, the expected dimension")
    return Conclusion(statements, bound, v, ex, e == 0, attained)


def transform_certificate(g: UnimodularAffineMap, cert: DegenCertificate) -> DegenCertificate:
    """Image of a certificate under a unimodular affine map."""
    region = Region.from_polygon(apply_map(g, cert.region.polygon))
    cells = [Cell(apply_map(g, c.polygon), c.tag, c.class_id) for c in cert.cells]
    uncovered = sorted(g(p) for p in cert.uncovered)
    lifting = None
    if cert.lifting is not None:
        lifting = Lifting({g(p): v for p, v in sorted(cert.lifting.heights.items())})
        lifting = Lifting(dict(sorted(lifting.heights.items())))
    meta = dict(cert.meta)
    return DegenCertificate(region, cells, list(cert.marked), uncovered, lifting, meta)


def demote_marked(cert: DegenCertificate, index: int) -> DegenCertificate:
    """Drop one marked cell: it becomes filler and its points become uncovered."""
    cells = list(cert.cells)
    c = cells[index]
    cells[index] = Cell(c.polygon, "filler")
    marked = [i for i in cert.marked if i != index]
    uncovered = sorted(set(cert.uncovered) | set(c.polygon.points))
    return DegenCertificate(cert.region, cells, marked, uncovered, cert.lifting, dict(cert.meta))


# -- search ---------------------------------------------------------------


def search_block(region: Region, n_special: int, catalog: Catalog | None = None, budget: int = 10_000_000) -> DegenCertificate:
    """Search for a verified certificate with n_special marked cells on region."""
    from .search import search_cover

    catalog = catalog or default_catalog()
    res = search_cover(region.polygon, n_special, catalog, budget=budget)
    cert = DegenCertificate(
        region,
        res.cells,
        res.marked,
        res.uncovered,
        res.lifting,
        {"name": region.label, "generator": "search_block", "search": {k: v for k, v in res.stats.to_json().items() if k != "seconds"}},
    )
    report = verify_certificate(cert, catalog)
    if not report.valid:
        raise NotFound(f"search produced a certificate failing {report.failures}", res.stats.to_json())
    return cert


# -- assembly -------------------------------------------------------------


def _translate(cert: DegenCertificate, dx: int, dy: int) -> DegenCertificate:
    return transform_certificate(UnimodularAffineMap.translation(dx, dy), cert)


def glue(first: DegenCertificate, second: DegenCertificate, line: tuple, region: LatticePolygon, name: str = "") -> DegenCertificate:
    """Join two certificates on either side of a lattice-free line.

    The strip between the two nearest parallel lattice lines is filled by
    the cells of the lower hull of its lifted points.
    """
    h1 = first.lifting if first.lifting is not None else find_lifting(first.subdivision)
    h2 = second.lifting if second.lifting is not None else find_lifting(second.subdivision)
    S, h = separating_lift((first.subdivision, h1), (second.subdivision, h2), line, region)
    offset = len(first.cells)
    marked = list(first.marked) + [i + offset for i in second.marked]
    uncovered = sorted(set(first.uncovered) | set(second.uncovered))
    return DegenCertificate(Region.from_polygon(region), list(S.cells), marked, uncovered, h, {"name": name})


def _rect_dims(cert: DegenCertificate) -> tuple[int, int]:
    if cert.region.kind != "rectangle":
        raise WidthMismatch(f"blocks must be rectangles at the origin, got {cert.region.label}")
    return cert.region.params


def compose_stack(blocks: Sequence[DegenCertificate], axis: str = "vertical", catalog: Catalog | None = None, name: str | None = None) -> DegenCertificate:
    """Stack rectangle blocks on adjacent lattice rows (vertical) or columns (horizontal).

    R(w, n1) + R(w, n2) gives R(w, n1 + n2 + 1) vertically, and the analogue
    with heights fixed horizontally.
    """
    if axis not in ("vertical", "horizontal"):
        raise ValueError("axis must be vertical or horizontal")
    if not blocks:
        raise ValueError("nothing to stack")
    dims = [_rect_dims(b) for b in blocks]
    fixed = 0 if axis == "vertical" else 1
    if len({d[fixed] for d in dims}) != 1:
        raise WidthMismatch(f"blocks differ along the gluing edge: {[f'R({a},{b})' for a, b in dims]}")
    cur = blocks[0]
    extent = dims[0][1 - fixed]
    for blk, d in zip(blocks[1:], dims[1:]):
        shift = extent + 1
        if axis == "vertical":
            moved = _translate(blk, 0, shift)
            line = (0, 2, -(2 * extent + 1))
            region = rectangle(d[0], shift + d[1])
        else:
            moved = _translate(blk, shift, 0)
            line = (2, 0, -(2 * extent + 1))
            region = rectangle(shift + d[0], d[1])
        cur = glue(cur, moved, line, region)
        extent = shift + d[1 - fixed]
    return _finish(cur, name or " + ".join(b.meta.get("name", "?") for b in blocks), "compose_stack", catalog, LiftingFailed)


def _finish(cert: DegenCertificate, name: str, generator: str, catalog, error) -> DegenCertificate:
    from .search import integral_lifting

    if cert.lifting is not None:
        cert.lifting = integral_lifting(cert.lifting)
    cert.meta = {"name": name, "generator": generator}
    report = verify_certificate(cert, catalog)
    if not report.valid:
        raise error(f"{name}: assembled certificate fails {report.failures}: {report.details[:3]}")
    return cert


# Base blocks regenerated by search: name -> (a, b, marked cells).
BASE_BLOCKS = {
    "C_2^3": (2, 3, 2),
    "C_5^3": (5, 3, 4),
    "C_5^5": (5, 5, 6),
    "C_5^6": (5, 6, 7),
    "C_5^8": (5, 8, 9),
    "C_8^3": (8, 3, 6),
    "C_8^5": (8, 5, 9),
    "C_11^2": (11, 2, 6),
    "C_11^3": (11, 3, 8),
    "C_11^4": (11, 4, 10),
    "C_17^4": (17, 4, 15),
}


class BlockLibrary:
    """Base blocks and plane base cases, searched once and cached.

    A directory of previously written certificates may be supplied; every
    loaded file is re-verified before use.
    """

    def __init__(self, catalog: Catalog | None = None, budget: int = 10_000_000, golden_dir=None):
        self.catalog = catalog or default_catalog()
        self.budget = budget
        self.golden_dir = golden_dir
        self._cache: dict[str, DegenCertificate] = {}

    def _load(self, name: str) -> DegenCertificate | None:
        if self.golden_dir is None:
            return None
        path = Path(self.golden_dir) / artifact_filename(name)
        if not path.exists():
            return None
        cert = DegenCertificate.loads(path.read_text())
        if not verify_certificate(cert, self.catalog).valid:
            raise AssemblyFailed(f"stored certificate {path} no longer verifies")
        return cert

    def store(self, name: str, cert: DegenCertificate) -> None:
        self._cache[name] = cert

    def block(self, name: str) -> DegenCertificate:
        if name not in self._cache:
            self._cache[name] = self._load(name) or search_base(name, self.catalog, self.budget)
        return self._cache[name]

    def plane_base(self, d: int) -> DegenCertificate:
        return self.block(f"V_{d}")


def search_base(name: str, catalog: Catalog | None = None, budget: int = 10_000_000) -> DegenCertificate:
    """Search for a named base block (C_a^b) or plane base case (V_d)."""
    if name.startswith("V_"):
        d = int(name[2:])
        if d not in PLANE_BASE_CASES:
            raise NotCovered(f"{name} is not a base case")
        cert = search_block(Region.triangle(d), comb(d + 2, 2) // 6, catalog, budget)
        cert.meta = {**cert.meta, "name": name}
        return cert
    if name not in BASE_BLOCKS:
        raise NotCovered(f"{name} is not a base block")
    a, b, r = BASE_BLOCKS[name]
    cert = search_block(Region.rectangle(a, b), r, catalog, budget)
    cert.meta = {**cert.meta, "name": name, "paper_block": name}
    return cert


def artifact_filename(name: str) -> str:
    """C_5^3 -> c5_3.json, V_10 -> v10.json."""
    return name.lower().replace("_", "", 1).replace("^", "_") + ".json"


PLANE_BASE_CASES = (1, 2, 3, 5, 6, 7, 8, 9, 10, 11, 12)


@lru_cache(maxsize=None)
def _default_library() -> BlockLibrary:
    return BlockLibrary()


def _vertical(lib, names: list[str], label: str) -> DegenCertificate:
    blocks = [lib.block(n) for n in names]
    if len(blocks) == 1:
        return blocks[0]
    return compose_stack(blocks, "vertical", lib.catalog, label)


def p1xp1_recipe(a: int, b: int) -> list[list[str]]:
    """Columns of base blocks (left to right; each column stacked bottom to top)."""
    if a < 1 or b < 1:
        raise NotCovered(f"bidegree ({a},{b}) must be positive")
    if ((a + 1) * (b + 1)) % 6:
        raise NotCovered(f"({a}+1)({b}+1) is not divisible by 6, so the virtual dimension is not -1")
    if b == 1:
        raise NotCovered(f"({a},1): every section has y-degree <= 1, so a triple point imposes at most 5 conditions and the system is special")
    if a == 5:
        return [_five_column(b)]
    if a == 11:
        return [_eleven_column(b)]
    if a == 17 and b == 4:
        return [["C_17^4"]]
    if a == 2:
        if (b + 1) % 4:
            raise NotCovered(f"(2,{b}): only heights 4k-1, built from C_2^3, are covered")
        return [["C_2^3"] * ((b + 1) // 4)]
    if a == 8:
        return [_eight_column(b)]
    if (a + 1) % 6 == 0:
        k = (a + 1) // 6
        if k % 2 == 0:
            return [_eleven_column(b)] * (k // 2)
        kp = (k - 1) // 2
        if b == 4:
            if kp < 1:
                raise NotCovered("(5,4) is excluded: no C_5^4 block exists")
            return [["C_17^4"]] + [_eleven_column(4)] * (kp - 1)
        return [_five_column(b)] + [_eleven_column(b)] * kp
    if (a + 1) % 3 == 0 and (b + 1) % 2 == 0:
        k = (a + 1) // 3
        if k % 2 == 0:
            return p1xp1_recipe(a, b)
        kp = (k - 1) // 2
        if kp % 2 == 1:
            r = (kp - 1) // 2
            return [_eight_column(b)] + [_eleven_column(b)] * r
        r = kp // 2
        return [_five_column(b), _eight_column(b)] + [_eleven_column(b)] * (r - 1)
    if (b + 1) % 3 == 0:
        raise NotCovered(f"({a},{b}): use the transposed bidegree ({b},{a})")
    raise NotCovered(f"({a},{b}) is outside the block recipes")


def _five_column(n: int) -> list[str]:
    if n < 3 or n == 4:
        raise NotCovered(f"C_5^{n}: the (5,n) family needs n >= 3 and n != 4")
    start = {3: 3, 1: 5, 2: 6, 0: 8}[n % 4]
    if n < start:
        raise NotCovered(f"C_5^{n} is not reachable from C_5^{{3,5,6,8}}")
    return [f"C_5^{start}"] + ["C_5^3"] * ((n - start) // 4)


def _eleven_column(n: int) -> list[str]:
    if n < 2:
        raise NotCovered(f"C_11^{n}: the (11,n) family needs n >= 2")
    start = {2: 2, 0: 3, 1: 4}[n % 3]
    if n < start:
        raise NotCovered(f"C_11^{n} is not reachable from C_11^{{2,3,4}}")
    return [f"C_11^{start}"] + ["C_11^2"] * ((n - start) // 3)


def _eight_column(n: int) -> list[str]:
    if n % 2 == 0 or n < 3:
        raise NotCovered(f"C_8^{n}: the (8,n) family needs odd n >= 3")
    k5 = 0 if (n + 1) % 4 == 0 else 1
    k3 = (n + 1 - 6 * k5) // 4
    return ["C_8^5"] * k5 + ["C_8^3"] * k3


def build_p1xp1(a: int, b: int, catalog: Catalog | None = None, library: BlockLibrary | None = None) -> DegenCertificate:
    """Verified certificate on R(a, b) with (a+1)(b+1)/6 marked cells and e = 0."""
    lib = library or (BlockLibrary(catalog) if catalog is not None else _default_library())
    columns = p1xp1_recipe(a, b)
    built = []
    for col in columns:
        first = col[0].split("^")[0]
        built.append(_vertical(lib, col, f"{first}^{b}"))
    if len(built) == 1:
        cert = built[0]
        label = f"C_{a}^{b}"
        if len(columns[0]) == 1:
            cert = DegenCertificate(cert.region, cert.cells, cert.marked, cert.uncovered, cert.lifting, {**cert.meta})
        cert.meta = {**cert.meta, "name": label, "recipe": " + ".join(columns[0])}
        return cert
    cert = compose_stack(built, "horizontal", lib.catalog, f"C_{a}^{b}")
    cert.meta["recipe"] = " | ".join(" + ".join(c) for c in columns)
    return cert


def transpose(cert: DegenCertificate) -> DegenCertificate:
    return transform_certificate(UnimodularAffineMap(0, 1, 1, 0), cert)


def _plane_from_strip(d: int, rects: list[DegenCertificate], tail: DegenCertificate, corner: DegenCertificate) -> DegenCertificate:
    """T(d) from a strip of rows 0..h-1 and the corner T(d - h) above it.

    The strip holds rectangles of height h - 1 side by side, one lattice
    column apart, and a triangle tail T(d - x0) at the next column x0.
    """
    h = rects[0].region.params[1] + 1
    strip = rects[0]
    width = strip.region.params[0]
    for blk in rects[1:]:
        shift = width + 1
        region = rectangle(shift + blk.region.params[0], h - 1)
        strip = glue(strip, _translate(blk, shift, 0), (2, 0, -(2 * width + 1)), region)
        width = shift + blk.region.params[0]
    x0 = width + 1
    if tail.region != Region.triangle(d - x0) or corner.region != Region.triangle(d - h):
        raise WidthMismatch(f"T({d}) strip of height {h} and width {x0} does not fit {tail.region.label} and {corner.region.label}")
    band = LatticePolygon([(0, 0), (d, 0), (d - h + 1, h - 1), (0, h - 1)])
    strip = glue(strip, _translate(tail, x0, 0), (2, 0, -(2 * x0 - 1)), band)
    return glue(strip, _translate(corner, 0, h), (0, 2, -(2 * h - 1)), triangle(d))


def build_p2(d: int, catalog: Catalog | None = None, library: BlockLibrary | None = None) -> DegenCertificate:
    """Verified certificate on T(d) with e = C(d+2, 2) mod 6 uncovered points.

    Base cases d <= 12 come from search.  Larger degrees use
    V_{12(k+1)+j} = V_{12k+j} + k C_11^11 + C_{j+1}^11 + V_10: the corner
    T(12k+j) above row 12 and a strip of rows 0..11 holding k copies of
    R(11,11), one R(j+1,11) and a T(10) at the right end.  V_16 (where V_4
    would be needed) is V_7 above row 9 over R(7,8) and a T(8).
    """
    if d < 1:
        raise NotCovered("degree must be positive")
    if d == 4:
        raise NotCovered("d = 4 is special: two triple points impose dependent conditions on quartics")
    lib = library or (BlockLibrary(catalog) if catalog is not None else _default_library())
    if d in PLANE_BASE_CASES:
        return lib.plane_base(d)
    try:
        if d == 16:
            how = "V_7 + C_7^8 + V_8"
            cert = _plane_from_strip(16, [transpose(build_p1xp1(8, 7, library=lib))], lib.plane_base(8), lib.plane_base(7))
        else:
            j = (d - 1) % 12 + 1
            k = (d - j) // 12 - 1
            how = f"V_{12 * k + j} + {k} C_11^11 + C_{j + 1}^11 + V_10"
            corner = build_p2(12 * k + j, catalog, lib)
            rects = [build_p1xp1(11, 11, library=lib)] * k + [transpose(build_p1xp1(11, j + 1, library=lib))]
            cert = _plane_from_strip(d, rects, lib.plane_base(10), corner)
    except ToricError as exc:
        raise AssemblyFailed(f"V_{d} = {how}: {exc}") from exc
    cert = _finish(cert, f"V_{d}", "build_p2", lib.catalog, AssemblyFailed)
    cert.meta["recipe"] = how
    return cert
