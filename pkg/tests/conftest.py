import json
from pathlib import Path

import pytest
from hypothesis import strategies as st

from toric_interp.classify import default_catalog
from toric_interp.degeneration import DegenCertificate
from toric_interp.lattice import UnimodularAffineMap, convex_hull
from toric_interp.errors import DimensionTooLow

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "golden"


def golden_names():
    return sorted(p.name for p in GOLDEN.glob("*.json"))


def load_golden(name: str) -> DegenCertificate:
    return DegenCertificate.loads((GOLDEN / name).read_text())


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


# Generators of GL2(Z): products of elementary shears, swaps and sign flips.
_GENS = [
    UnimodularAffineMap(1, 1, 0, 1),
    UnimodularAffineMap(1, -1, 0, 1),
    UnimodularAffineMap(1, 0, 1, 1),
    UnimodularAffineMap(1, 0, -1, 1),
    UnimodularAffineMap(0, 1, 1, 0),
    UnimodularAffineMap(-1, 0, 0, 1),
    UnimodularAffineMap(0, -1, 1, 0),
]


@st.composite
def unimodular_maps(draw, max_words: int = 6, max_shift: int = 20):
    g = UnimodularAffineMap.identity()
    for i in draw(st.lists(st.integers(0, len(_GENS) - 1), max_size=max_words)):
        g = _GENS[i].compose(g)
    tx = draw(st.integers(-max_shift, max_shift))
    ty = draw(st.integers(-max_shift, max_shift))
    return UnimodularAffineMap.translation(tx, ty).compose(g)


@st.composite
def small_polygons(draw, span: int = 6):
    pts = draw(st.lists(st.tuples(st.integers(0, span), st.integers(0, span)), min_size=3, max_size=8))
    try:
        return convex_hull(pts)
    except DimensionTooLow:
        from hypothesis import assume

        assume(False)


def as_json(obj):
    return json.loads(json.dumps(obj))


# One line per acceptance criterion, printed after the run.
ACCEPTANCE: dict[str, str] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip("ab")), k)):
            terminalreporter.write_line(ACCEPTANCE[key])
