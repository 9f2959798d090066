"""Property suites over random unimodular maps, random hulls and golden mutations."""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import golden_names, load_golden, small_polygons, unimodular_maps
from toric_interp.classify import default_catalog
from toric_interp.degeneration import DegenCertificate, transform_certificate, verify_certificate
from toric_interp.errors import Infeasible
from toric_interp.fatpoints import is_empty_after_triple
from toric_interp.lattice import (
    LatticePolygon,
    apply_map,
    canonical_form,
    enclosed_points,
    normalize_standard,
    pick_data,
    rectangle,
)
from toric_interp.subdivision import (
    Cell,
    Lifting,
    Subdivision,
    check_lifting,
    fill_complement,
    find_lifting,
    induced_subdivision,
    shape_tag,
    validate_subdivision,
)

CASES = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
CATALOG = default_catalog()
GOLDEN = golden_names()
SMALL_GOLDEN = [n for n in GOLDEN if len(load_golden(n).region.polygon.points) <= 60]


# -- lattice ---------------------------------------------------------------


@CASES
@given(small_polygons(), unimodular_maps())
def test_canonical_form_invariance(P, g):
    Q = apply_map(g, P)
    assert canonical_form(Q) == canonical_form(P)
    assert len(enclosed_points(Q)) == len(enclosed_points(P))
    assert pick_data(Q) == pick_data(P)
    assert apply_map(g.inverse(), Q) == P


@CASES
@given(small_polygons(span=9))
def test_pick_identity(P):
    d = pick_data(P)
    assert d.twice_area == 2 * d.interior_count + d.boundary_count - 2
    assert d.total == len(enclosed_points(P))
    # brute force over the bounding box
    x0, y0, x1, y1 = P.bbox
    brute = [(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1) if P.contains((x, y))]
    assert brute == enclosed_points(P)
    assert sum(1 for p in brute if P.contains(p, strict=True)) == d.interior_count


@CASES
@given(small_polygons(), unimodular_maps())
def test_standard_position(P, g):
    Q = apply_map(g, P)
    sp = normalize_standard(Q)
    verts = sp.polygon.vertices
    assert (0, 0) in verts and (sp.m, 0) in verts
    assert sp.m == max(Q.edge_lattice_lengths())
    assert 0 <= sp.p < sp.q
    assert all(y >= 0 for _, y in verts)
    assert canonical_form(sp.polygon) == canonical_form(P)
    assert normalize_standard(P).m == sp.m


@CASES
@given(st.integers(0, len(CATALOG.classes) - 1), unimodular_maps())
def test_class_invariance(k, g):
    c = CATALOG.classes[k]
    Q = apply_map(g, c.representative)
    assert CATALOG.lookup(Q).id == c.id
    assert is_empty_after_triple(Q) == c.empty_after_triple


@CASES
@given(small_polygons(span=11))
def test_six_point_partition(P):
    if len(P.points) == 6:
        assert sum(1 for c in CATALOG if c.representative == canonical_form(P)) == 1


# -- liftings --------------------------------------------------------------


@CASES
@given(st.integers(1, 5), st.integers(1, 4), unimodular_maps(max_shift=5))
def test_paraboloid_round_trip(a, b, g):
    cells = [Cell(apply_map(g, LatticePolygon([(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)])), "quadric") for x in range(a) for y in range(b)]
    S = Subdivision(apply_map(g, rectangle(a, b)), cells)
    assert validate_subdivision(S)
    pre = g.inverse()
    heights = {p: Fraction(pre(p)[0] ** 2 + pre(p)[1] ** 2) for p in S.region.points}
    assert check_lifting(S, Lifting(heights))
    assert check_lifting(S, find_lifting(S))


@CASES
@given(st.integers(2, 5), st.integers(2, 4), st.data())
def test_random_regular_subdivisions(a, b, data):
    R = rectangle(a, b)
    # A steep paraboloid keeps every point on the lower hull under bounded noise.
    heights = {p: Fraction(10 * (p[0] ** 2 + p[1] ** 2) + data.draw(st.integers(0, 3))) for p in R.points}
    S = Subdivision(R, [Cell(P, shape_tag(P)) for P in induced_subdivision(R, heights)])
    h = Lifting(heights)
    assert validate_subdivision(S)
    assert check_lifting(S, h)
    assert check_lifting(S, find_lifting(S))


A, B, C = (0, 0), (4, 0), (0, 4)
a_, b_, c_ = (1, 1), (2, 1), (1, 2)
PINWHEEL = [(A, B, a_), (B, C, b_), (C, A, c_), (A, a_, c_), (B, b_, a_), (C, c_, b_), (a_, b_, c_)]


@CASES
@given(unimodular_maps())
def test_pinwheel_rejected_under_maps(g):
    S = Subdivision(apply_map(g, LatticePolygon([A, B, C])), [Cell(LatticePolygon([g(p) for p in t])) for t in PINWHEEL])
    assert validate_subdivision(S)
    with pytest.raises(Infeasible):
        find_lifting(S)


@CASES
@given(st.sampled_from(SMALL_GOLDEN), st.data())
def test_fill_complement_completes(name, data):
    cert = load_golden(name)
    keep = data.draw(st.lists(st.sampled_from(cert.marked), unique=True)) if cert.marked else []
    occupied = [cert.cells[i].polygon for i in keep]
    filler = fill_complement(cert.region.polygon, occupied)
    S = Subdivision(cert.region.polygon, [Cell(P) for P in occupied] + filler)
    assert validate_subdivision(S)


# -- golden certificates ----------------------------------------------------


@CASES
@given(st.sampled_from(GOLDEN), unimodular_maps(max_words=4))
def test_golden_transform_invariance(name, g):
    cert = load_golden(name)
    before = verify_certificate(cert, CATALOG)
    after = verify_certificate(transform_certificate(g, cert), CATALOG)
    assert before.valid and after.valid
    assert (after.special_count, after.uncovered_count) == (before.special_count, before.uncovered_count)


def _clone(cert, **kw):
    d = dict(region=cert.region, cells=list(cert.cells), marked=list(cert.marked), uncovered=list(cert.uncovered), lifting=cert.lifting, meta=dict(cert.meta))
    d.update(kw)
    return DegenCertificate(**d)


def mutate(cert, kind, pick):
    """pick(n) chooses an index in range(n)."""
    if kind == "delete_cell":
        i = pick(len(cert.cells))
        cells = cert.cells[:i] + cert.cells[i + 1:]
        marked = [m - (m > i) for m in cert.marked if m != i]
        return _clone(cert, cells=cells, marked=marked)
    if kind == "overlap_marked":
        i = cert.marked[pick(len(cert.marked))]
        rest = [m for m in cert.marked if m != i]
        j = rest[pick(len(rest))]
        cells = list(cert.cells)
        cells[j] = cells[i]
        return _clone(cert, cells=cells)
    if kind == "move_marked":
        i = cert.marked[pick(len(cert.marked))]
        cells = list(cert.cells)
        c = cells[i]
        cells[i] = Cell(LatticePolygon([(x + 1, y) for x, y in c.vertices]), c.tag, c.class_id)
        return _clone(cert, cells=cells)
    if kind == "drop_uncovered":
        k = pick(len(cert.uncovered))
        return _clone(cert, uncovered=cert.uncovered[:k] + cert.uncovered[k + 1:])
    if kind == "corrupt_height":
        pts = sorted(cert.lifting.heights)
        p = pts[pick(len(pts))]
        heights = dict(cert.lifting.heights)
        heights[p] = heights[p] - 10**6
        return _clone(cert, lifting=Lifting(heights))
    raise ValueError(kind)


KINDS = ["delete_cell", "overlap_marked", "move_marked", "drop_uncovered", "corrupt_height"]


def applicable(cert, kind):
    return {
        "delete_cell": len(cert.cells) >= 1,
        "overlap_marked": len(cert.marked) >= 2,
        "move_marked": len(cert.marked) >= 1,
        "drop_uncovered": len(cert.uncovered) >= 1,
        "corrupt_height": cert.lifting is not None and len(cert.cells) >= 2,
    }[kind]


def killed(original, mutant) -> bool:
    before = verify_certificate(original, CATALOG)
    after = verify_certificate(mutant, CATALOG)
    return not after.valid or (after.special_count, after.uncovered_count) != (before.special_count, before.uncovered_count)


@pytest.mark.parametrize("kind", KINDS)
@CASES
@given(data=st.data())
def test_mutation_is_detected(kind, data):
    pool = [n for n in SMALL_GOLDEN if applicable(load_golden(n), kind)]
    cert = load_golden(data.draw(st.sampled_from(pool)))
    assert killed(cert, mutate(cert, kind, lambda n: data.draw(st.integers(0, n - 1))))


@pytest.mark.parametrize("kind", KINDS)
def test_mutation_sweep_over_golden_set(kind):
    # Deterministic: the first and last choice of each mutation on every golden file.
    for name in GOLDEN:
        cert = load_golden(name)
        if applicable(cert, kind):
            assert killed(cert, mutate(cert, kind, lambda n: 0)), name
            assert killed(cert, mutate(cert, kind, lambda n: n - 1)), name
