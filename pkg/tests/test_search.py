import pytest

from toric_interp.degeneration import Region, search_block, verify_certificate
from toric_interp.errors import NotFound
from toric_interp.lattice import rectangle
from toric_interp.search import enumerate_tiles, search_cover


def test_tiles_are_empty_classes(catalog):
    tiles = enumerate_tiles(rectangle(5, 3), catalog)
    assert tiles
    for t in tiles:
        c = catalog.lookup(t.polygon)
        assert c is not None and c.empty_after_triple
        assert all(rectangle(5, 3).contains(v) for v in t.polygon.vertices)
    assert len({t.polygon for t in tiles}) == len(tiles)


@pytest.mark.parametrize("a,b,r", [(2, 3, 2), (5, 3, 4)])
def test_search_finds_exact_covers(a, b, r, catalog):
    cert = search_block(Region.rectangle(a, b), r, catalog)
    rep = verify_certificate(cert, catalog)
    assert rep.valid and (rep.special_count, rep.uncovered_count) == (r, 0)


def test_too_few_points(catalog):
    with pytest.raises(NotFound):
        search_block(Region.rectangle(1, 1), 1, catalog)


def test_budget_exhaustion_reports_stats(catalog):
    with pytest.raises(NotFound) as info:
        search_cover(rectangle(5, 5), 6, catalog, budget=3)
    assert info.value.stats["nodes"] >= 3


def test_search_with_uncovered_points(catalog):
    cert = search_block(Region.triangle(3), 1, catalog)
    assert (cert.r, cert.e) == (1, 4)
    assert verify_certificate(cert, catalog).valid


def test_search_is_deterministic(catalog):
    one = search_block(Region.rectangle(5, 3), 4, catalog)
    two = search_block(Region.rectangle(5, 3), 4, catalog)
    assert one.dumps() == two.dumps()
